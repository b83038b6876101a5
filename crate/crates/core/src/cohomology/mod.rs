//! Cohomology of simplicial pairs with coefficients in a finite abelian
//! group, computed factor by factor over `Z_m` from integer Smith forms.

mod cochain;
mod complex;
mod group;
mod maps;

pub use cochain::GammaCochain;
pub use complex::{cohomology, CochainComplex, CohomologyGroup, CohomologyReport};
pub use group::FiniteAbelianGroup;
pub use maps::{forgetful_map, induced_map, pullback, pushforward, restriction_map, GroupHom};
