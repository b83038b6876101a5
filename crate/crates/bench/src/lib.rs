//! Criterion benchmarks for `hdw-core`; see `benches/invariants.rs`.
