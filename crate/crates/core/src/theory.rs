use serde::{Deserialize, Serialize};

use crate::action::ActionSpec;
use crate::cohomology::FiniteAbelianGroup;

pub const DEFAULT_LIMIT: u64 = 1_000_000;

/// A choice of field degree `p`, coefficient group, action and class
/// enumeration limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DwTheory {
    pub p: usize,
    pub gamma: FiniteAbelianGroup,
    pub action: ActionSpec,
    pub limit: u64,
}

impl DwTheory {
    pub fn new(p: usize, gamma: FiniteAbelianGroup, action: ActionSpec) -> Self {
        DwTheory {
            p,
            gamma,
            action,
            limit: DEFAULT_LIMIT,
        }
    }

    /// Untwisted theory with cyclic coefficients `Z_n`.
    pub fn untwisted(p: usize, n: u64) -> Self {
        Self::new(p, FiniteAbelianGroup::cyclic(n).expect("n ≥ 1"), ActionSpec::Trivial)
    }

    pub fn with_action(mut self, action: ActionSpec) -> Self {
        self.action = action;
        self
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = limit;
        self
    }
}
