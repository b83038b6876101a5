use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z_{m_1} ⊕ … ⊕ Z_{m_t}` with `m_1 | m_2 | … | m_t`, every `m_j ≥ 2`.
/// The empty list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_cyclic(&[n])
    }

    /// Normalizes an arbitrary list of cyclic orders (`Z_2 ⊕ Z_3` becomes
    /// `Z_6`; `1`s vanish).
    pub fn from_cyclic(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic factor of order 0 is infinite".into()));
        }
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &n in orders {
            for (p, q) in prime_powers(n) {
                by_prime.entry(p).or_default().push(q);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, q) in factors.iter_mut().zip(powers.iter()) {
                *slot = slot
                    .checked_mul(*q)
                    .ok_or_else(|| Error::InvalidGroup("invariant factor overflows u64".into()))?;
            }
        }
        factors.reverse();
        Ok(FiniteAbelianGroup { factors })
    }

    /// Parses a comma-separated list like `2,4`; the empty string is trivial.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::trivial());
        }
        let orders = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidGroup(format!("bad cyclic order `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_cyclic(&orders)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, &m| acc * m)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `Some(n)` if the group is `Z_n` with `n ≥ 2`.
    pub fn as_cyclic(&self) -> Option<u64> {
        match self.factors.as_slice() {
            [n] => Some(*n),
            _ => None,
        }
    }
}

impl TryFrom<Vec<u64>> for FiniteAbelianGroup {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::from_cyclic(&v)
    }
}

impl From<FiniteAbelianGroup> for Vec<u64> {
    fn from(g: FiniteAbelianGroup) -> Self {
        g.factors
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|m| format!("Z{m}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        let g = FiniteAbelianGroup::from_cyclic(&[2, 3]).unwrap();
        assert_eq!(g.invariant_factors(), &[6]);
        let g = FiniteAbelianGroup::from_cyclic(&[4, 2, 1]).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 4]);
        let g = FiniteAbelianGroup::from_cyclic(&[6, 4]).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 12]);
        assert!(FiniteAbelianGroup::from_cyclic(&[1, 1]).unwrap().is_trivial());
        assert!(FiniteAbelianGroup::from_cyclic(&[0]).is_err());
        assert_eq!(FiniteAbelianGroup::parse("2, 2").unwrap().to_string(), "Z2+Z2");
        assert!(FiniteAbelianGroup::parse("").unwrap().is_trivial());
        assert!(FiniteAbelianGroup::parse("x").is_err());
    }

    proptest! {
        #[test]
        fn invariant_factors_divide_and_preserve_order(v in prop::collection::vec(1u64..=30, 0..5)) {
            let g = FiniteAbelianGroup::from_cyclic(&v).unwrap();
            let f = g.invariant_factors();
            for w in f.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            prop_assert!(f.iter().all(|&m| m >= 2));
            let product: u64 = v.iter().product();
            prop_assert_eq!(g.order(), BigUint::from(product));
            // idempotent
            prop_assert_eq!(FiniteAbelianGroup::from_cyclic(f).unwrap(), g.clone());
        }
    }
}
