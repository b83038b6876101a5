pub mod action;
pub mod arith;
pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod measure;
pub mod oracle;
pub mod simplicial;
pub mod snf;
pub mod suite;
pub mod theory;
pub mod tqft;

pub use action::{ActionSpec, FundamentalClass};
pub use arith::{PhaseSum, Rational};
pub use cohomology::{cohomology, CochainComplex, CohomologyGroup, FiniteAbelianGroup, GammaCochain};
pub use error::{Error, Result};
pub use simplicial::{Pair, Triangulation};
pub use theory::DwTheory;

pub use num_bigint::BigUint;
