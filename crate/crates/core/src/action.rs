//! Cochain-level action functionals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::PhaseSum;
use crate::cohomology::{cohomology, CochainComplex, FiniteAbelianGroup, GammaCochain};
use crate::error::{Error, Result};
use crate::simplicial::Triangulation;
use crate::theory::DwTheory;

/// `{"action": "trivial"}` or `{"action": "cup_square", "lambda": λ}`.
/// `λ` is reduced modulo `n` when the action meets the coefficient group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum ActionSpec {
    Trivial,
    CupSquare { lambda: i64 },
}

impl ActionSpec {
    pub fn cup_square(lambda: i64) -> Self {
        ActionSpec::CupSquare { lambda }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, ActionSpec::Trivial)
    }

    /// Checks applicability and returns `(n, λ mod n)` for the cup square.
    pub fn resolve(&self, dim: usize, p: usize, group: &FiniteAbelianGroup) -> Result<Option<(u64, u64)>> {
        match *self {
            ActionSpec::Trivial => Ok(None),
            ActionSpec::CupSquare { lambda } => {
                let n = group.as_cyclic().ok_or_else(|| {
                    Error::InvalidGroup(format!("the cup-square action needs a cyclic group, got {group}"))
                })?;
                if dim != 2 * p {
                    return Err(Error::DimensionMismatch(format!(
                        "the cup-square action of a degree {p} field needs dimension {}, got {dim}",
                        2 * p
                    )));
                }
                Ok(Some((n, lambda.rem_euclid(n as i64) as u64)))
            }
        }
    }
}

impl std::fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ActionSpec::Trivial => write!(f, "trivial"),
            ActionSpec::CupSquare { lambda } => write!(f, "cup_square(λ={lambda})"),
        }
    }
}

/// Alexander–Whitney cup product on vertex-sorted simplices, cyclic
/// coefficients.
pub fn cup_product(tri: &Triangulation, u: &GammaCochain, v: &GammaCochain) -> Result<GammaCochain> {
    if u.moduli() != v.moduli() {
        return Err(Error::ModulusMismatch(format!("{:?} vs {:?}", u.moduli(), v.moduli())));
    }
    let (p, q) = (u.degree(), v.degree());
    let values = u
        .components()
        .iter()
        .zip(v.components())
        .zip(u.moduli())
        .map(|((a, b), &m)| {
            tri.simplices(p + q)
                .iter()
                .map(|s| {
                    let front = tri.simplex_index(&s[..=p]).expect("front face");
                    let back = tri.simplex_index(&s[p..]).expect("back face");
                    ((a[front] as u128 * b[back] as u128) % m as u128) as u64
                })
                .collect()
        })
        .collect();
    GammaCochain::new(p + q, u.moduli().to_vec(), values)
}

/// Signed top simplices; the orientation of `M` as a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalClass {
    pub signs: Vec<i8>,
}

impl FundamentalClass {
    pub fn of(tri: &Triangulation) -> Result<Self> {
        if !tri.is_oriented() {
            return Err(Error::OrientationMissing(tri.name().to_string()));
        }
        Ok(FundamentalClass {
            signs: tri.top_signs().to_vec(),
        })
    }

    /// `Σ sign(σ) · c(σ) mod n` for a top-degree cyclic cochain.
    pub fn pair(&self, c: &GammaCochain) -> u64 {
        let n = c.moduli()[0];
        self.signs.iter().zip(c.component(0)).fold(0u64, |acc, (&s, &x)| {
            if s > 0 {
                (acc + x) % n
            } else {
                (acc + n - x) % n
            }
        })
    }

    /// Simplicial boundary of the chain, as coefficients on codimension-one
    /// faces (all zero for closed coherently oriented `M`).
    pub fn boundary(&self, tri: &Triangulation) -> Vec<i64> {
        let d = tri.dim();
        let mut out = vec![0i64; tri.count(d.saturating_sub(1))];
        if d == 0 {
            return out;
        }
        for (s, &sign) in tri.simplices(d).iter().zip(&self.signs) {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let j = tri.simplex_index(&face).expect("face");
                out[j] += sign as i64 * if i % 2 == 0 { 1 } else { -1 };
            }
        }
        out
    }
}

/// `⟨P ∪ P, [M]⟩ mod n`.
pub fn cup_square_pairing(tri: &Triangulation, fc: &FundamentalClass, p_hat: &GammaCochain) -> Result<u64> {
    Ok(fc.pair(&cup_product(tri, p_hat, p_hat)?))
}

/// `exp(2πi λ s / n)` as a single-term phase sum; `1` for the trivial action.
pub fn evaluate_action(tri: &Triangulation, p_hat: &GammaCochain, spec: &ActionSpec) -> Result<PhaseSum> {
    match spec {
        ActionSpec::Trivial => Ok(PhaseSum::one()),
        ActionSpec::CupSquare { .. } => {
            let fc = FundamentalClass::of(tri)?;
            evaluate_with_class(tri, &fc, p_hat, spec)
        }
    }
}

/// As [`evaluate_action`], against an explicit (possibly corrupted)
/// fundamental class.
pub fn evaluate_with_class(
    tri: &Triangulation,
    fc: &FundamentalClass,
    p_hat: &GammaCochain,
    spec: &ActionSpec,
) -> Result<PhaseSum> {
    let group = FiniteAbelianGroup::from_cyclic(p_hat.moduli())?;
    match spec.resolve(tri.dim(), p_hat.degree(), &group)? {
        None => Ok(PhaseSum::one()),
        Some((n, lambda)) => {
            if p_hat.moduli() != [n] {
                return Err(Error::ModulusMismatch(format!("field over {:?}", p_hat.moduli())));
            }
            let s = cup_square_pairing(tri, fc, p_hat)?;
            Ok(PhaseSum::root_of_unity((lambda as u128 * s as u128 % n as u128) as u64, n))
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GaugeReport {
    pub classes: usize,
    pub trials: usize,
    pub failures: usize,
    pub holds: bool,
}

/// For every class representative `P` and `trials` random `(p-1)`-cochains
/// `φ`, compares the action at `P + dφ` with the action at `P`.
pub fn check_gauge_invariance(
    tri: &std::sync::Arc<Triangulation>,
    fc: &FundamentalClass,
    theory: &DwTheory,
    trials: usize,
    seed: u64,
) -> Result<GaugeReport> {
    let (p, group, spec) = (theory.p, &theory.gamma, &theory.action);
    let complex = CochainComplex::absolute(tri.clone());
    let classes = cohomology(&complex, p, group).enumerate_classes(theory.limit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for class in &classes {
        let base = evaluate_with_class(tri, fc, class, spec)?;
        for _ in 0..trials {
            if p == 0 {
                break;
            }
            let values = group
                .invariant_factors()
                .iter()
                .map(|&m| (0..tri.count(p - 1)).map(|_| rng.gen_range(0..m)).collect())
                .collect();
            let phi = GammaCochain::new(p - 1, group.invariant_factors().to_vec(), values)?;
            let shifted = class.add(&phi.coboundary(tri))?;
            if evaluate_with_class(tri, fc, &shifted, spec)? != base {
                failures += 1;
            }
        }
    }
    Ok(GaugeReport {
        classes: classes.len(),
        trials,
        failures,
        holds: failures == 0,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::corpus;

    fn random_cochain(rng: &mut ChaCha8Rng, tri: &Triangulation, k: usize, n: u64) -> GammaCochain {
        GammaCochain::cyclic(k, n, (0..tri.count(k)).map(|_| rng.gen_range(0..n)).collect())
    }

    #[test]
    fn cup_unit_and_zero() {
        let t = corpus::torus2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_cochain(&mut rng, &t, 1, 5);
        let one = GammaCochain::cyclic(0, 5, vec![1; t.count(0)]);
        assert_eq!(cup_product(&t, &one, &v).unwrap(), v);
        assert_eq!(cup_product(&t, &v, &one).unwrap(), v);
        let zero = GammaCochain::cyclic(1, 5, vec![0; t.count(1)]);
        assert!(cup_product(&t, &v, &zero).unwrap().is_zero());
        let other = GammaCochain::cyclic(1, 3, vec![0; t.count(1)]);
        assert!(matches!(cup_product(&t, &v, &other), Err(Error::ModulusMismatch(_))));
    }

    #[test]
    fn leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for t in [corpus::torus2(), corpus::sphere2(), corpus::s2xs2(), corpus::rp2()] {
            for _ in 0..200 {
                let n = rng.gen_range(2..=6);
                let p = rng.gen_range(0..=t.dim());
                let q = rng.gen_range(0..=t.dim() - p);
                if p + q + 1 > t.dim() {
                    continue;
                }
                let u = random_cochain(&mut rng, &t, p, n);
                let v = random_cochain(&mut rng, &t, q, n);
                let lhs = cup_product(&t, &u, &v).unwrap().coboundary(&t);
                let a = cup_product(&t, &u.coboundary(&t), &v).unwrap();
                let b = cup_product(&t, &u, &v.coboundary(&t)).unwrap();
                let b = if p % 2 == 0 { b } else { b.neg() };
                assert_eq!(lhs, a.add(&b).unwrap());
            }
        }
    }

    #[test]
    fn closed_manifolds_have_no_boundary_chain() {
        for t in [corpus::torus2(), corpus::sphere2(), corpus::torus3(), corpus::s2xs2()] {
            let fc = FundamentalClass::of(&t).unwrap();
            assert!(fc.boundary(&t).iter().all(|&c| c == 0));
        }
        let bad = corpus::torus2_flipped();
        assert!(FundamentalClass::of(&bad).unwrap().boundary(&bad).iter().any(|&c| c != 0));
    }

    #[test]
    fn trivial_and_zero_field() {
        let t = corpus::torus2();
        let p = GammaCochain::cyclic(1, 2, vec![1; t.count(1)]);
        assert_eq!(evaluate_action(&t, &p, &ActionSpec::Trivial).unwrap(), PhaseSum::one());
        let zero = GammaCochain::cyclic(1, 2, vec![0; t.count(1)]);
        assert_eq!(evaluate_action(&t, &zero, &ActionSpec::cup_square(1)).unwrap(), PhaseSum::one());
    }

    #[test]
    fn preconditions() {
        let t = corpus::torus2();
        let p = GammaCochain::cyclic(2, 2, vec![0; t.count(2)]);
        assert!(matches!(
            evaluate_action(&t, &p, &ActionSpec::cup_square(1)),
            Err(Error::DimensionMismatch(_))
        ));
        let rp2 = corpus::rp2();
        let q = GammaCochain::cyclic(1, 2, vec![0; rp2.count(1)]);
        assert!(matches!(
            evaluate_action(&rp2, &q, &ActionSpec::cup_square(1)),
            Err(Error::OrientationMissing(_))
        ));
    }

    #[test]
    fn gauge_invariance_and_negative_control() {
        let t = Arc::new(corpus::torus2());
        let fc = FundamentalClass::of(&t).unwrap();
        for n in 2..=4 {
            for lambda in 0..n as i64 {
                let theory = DwTheory::untwisted(1, n).with_action(ActionSpec::cup_square(lambda));
                let r = check_gauge_invariance(&t, &fc, &theory, 100, 3).unwrap();
                assert!(r.holds);
            }
        }
        let s = Arc::new(corpus::s2xs2());
        let theory = DwTheory::untwisted(2, 3).with_action(ActionSpec::cup_square(1));
        let fc = FundamentalClass::of(&s).unwrap();
        assert!(check_gauge_invariance(&s, &fc, &theory, 20, 5).unwrap().holds);
        let mut bad = fc.clone();
        bad.signs[0] = -bad.signs[0];
        assert!(!check_gauge_invariance(&s, &bad, &theory, 20, 5).unwrap().holds);
    }

    #[test]
    fn reversal_conjugates() {
        let s = corpus::s2xs2();
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let h = cohomology(&CochainComplex::absolute(Arc::new(s.clone())), 2, &g);
        let rev = s.reversed();
        for c in h.enumerate_classes(100).unwrap() {
            let a = evaluate_action(&s, &c, &ActionSpec::cup_square(1)).unwrap();
            let b = evaluate_action(&rev, &c, &ActionSpec::cup_square(1)).unwrap();
            assert_eq!(b, a.conj());
        }
    }

    #[test]
    fn spec_json() {
        assert_eq!(serde_json::to_string(&ActionSpec::Trivial).unwrap(), r#"{"action":"trivial"}"#);
        let s: ActionSpec = serde_json::from_str(r#"{"action":"cup_square","lambda":3}"#).unwrap();
        assert_eq!(s, ActionSpec::cup_square(3));
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        assert_eq!(s.resolve(2, 1, &g).unwrap(), Some((2, 1)));
    }
}
