//! Measure factors `μ_M = Π_{i<p} |H^i(M,∂M;Γ)|^{(-1)^{p-i}}` and their
//! relative versions.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::arith::{rational_from_order, serde_exact, Rational};
use crate::cohomology::{cohomology, forgetful_map, CochainComplex, FiniteAbelianGroup};
use crate::error::{Error, Result};
use crate::simplicial::{Pair, Subcomplex, Triangulation};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MeasureFactor {
    pub degree: usize,
    #[serde(serialize_with = "serde_exact::order")]
    pub order: BigUint,
    pub exponent: i32,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MeasureReport {
    #[serde(serialize_with = "serde_exact::rational")]
    pub mu: Rational,
    pub factor_orders: Vec<MeasureFactor>,
}

/// `μ` of an arbitrary cochain complex of a pair.
pub fn mu_of_complex(complex: &Arc<CochainComplex>, p: usize, group: &FiniteAbelianGroup) -> MeasureReport {
    let mut mu = Rational::one();
    let mut factor_orders = Vec::with_capacity(p);
    for i in 0..p {
        let order = cohomology(complex, i, group).order();
        let exponent = if (p - i) % 2 == 0 { 1 } else { -1 };
        let r = rational_from_order(&order);
        mu = if exponent == 1 { mu * r } else { mu / r };
        factor_orders.push(MeasureFactor {
            degree: i,
            order,
            exponent,
        });
    }
    MeasureReport { mu, factor_orders }
}

/// `μ_M`, relative to `∂M`. The empty manifold has `μ = 1`.
pub fn mu(m: &Arc<Triangulation>, p: usize, group: &FiniteAbelianGroup) -> MeasureReport {
    mu_of_complex(&CochainComplex::rel_boundary(Arc::clone(m)), p, group)
}

fn rel_pair(m: &Arc<Triangulation>, n: &Subcomplex) -> Result<Pair> {
    let boundary = m.boundary_subcomplex();
    if n.intersects(&boundary) {
        return Err(Error::SubspaceMeetsBoundary);
    }
    Ok(Pair::new(Arc::clone(m), boundary.union(n)))
}

/// `μ_(M,N)`, relative to `N ∪ ∂M`.
pub fn mu_rel(m: &Arc<Triangulation>, n: &Subcomplex, p: usize, group: &FiniteAbelianGroup) -> Result<MeasureReport> {
    Ok(mu_of_complex(&CochainComplex::new(rel_pair(m, n)?), p, group))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Lemma1Report {
    #[serde(serialize_with = "serde_exact::rational")]
    pub mu_m: Rational,
    #[serde(serialize_with = "serde_exact::order")]
    pub k_order: BigUint,
    #[serde(serialize_with = "serde_exact::rational")]
    pub mu_rel: Rational,
    #[serde(serialize_with = "serde_exact::rational")]
    pub mu_n: Rational,
    pub holds: bool,
}

/// `|K|` for `K = ker(H^p(M, N ∪ ∂M) → H^p(M, ∂M))`.
pub fn kernel_order(m: &Arc<Triangulation>, n: &Subcomplex, p: usize, group: &FiniteAbelianGroup) -> Result<BigUint> {
    let src = cohomology(&CochainComplex::new(rel_pair(m, n)?), p, group);
    let dst = cohomology(&CochainComplex::rel_boundary(Arc::clone(m)), p, group);
    Ok(forgetful_map(&src, &dst)?.kernel_order())
}

/// Checks `μ_M = |K| · μ_(M,N) · μ_N` exactly.
pub fn verify_lemma1(m: &Arc<Triangulation>, n: &Subcomplex, p: usize, group: &FiniteAbelianGroup) -> Result<Lemma1Report> {
    let mu_m = mu(m, p, group).mu;
    let mu_rel = mu_rel(m, n, p, group)?.mu;
    let k_order = kernel_order(m, n, p, group)?;
    let (n_tri, _) = m.extract(n, "N")?;
    let mu_n = mu(&Arc::new(n_tri), p, group).mu;
    let holds = mu_m == rational_from_order(&k_order) * &mu_rel * &mu_n;
    Ok(Lemma1Report {
        mu_m,
        k_order,
        mu_rel,
        mu_n,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::corpus;
    use crate::simplicial::disjoint_union;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    #[test]
    fn examples() {
        let circle = Arc::new(corpus::circle(3));
        assert_eq!(mu(&circle, 1, &z(2)).mu, rational(1, 2));
        assert_eq!(mu(&circle, 0, &z(2)).mu, rational(1, 1));
        let torus = Arc::new(corpus::torus2());
        let r = mu(&torus, 2, &z(2));
        assert_eq!(r.mu, rational(1, 2));
        assert_eq!(r.factor_orders[0].exponent, 1);
        assert_eq!(r.factor_orders[1].exponent, -1);
        let empty = Arc::new(Triangulation::empty("empty", 1));
        assert_eq!(mu(&empty, 3, &z(4)).mu, rational(1, 1));
    }

    #[test]
    fn json_report() {
        let r = mu(&Arc::new(corpus::torus2()), 2, &z(2));
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"mu":"1/2","factor_orders":[{"degree":0,"order":2,"exponent":1},{"degree":1,"order":4,"exponent":-1}]}"#
        );
    }

    #[test]
    fn relative_examples() {
        let torus = Arc::new(corpus::torus2());
        let slice = torus.subcomplex("slice").unwrap().clone();
        assert_eq!(mu_rel(&torus, &slice, 1, &z(2)).unwrap().mu, rational(1, 1));
        let none = Subcomplex::empty(&torus);
        assert_eq!(mu_rel(&torus, &none, 2, &z(3)).unwrap(), mu(&torus, 2, &z(3)));
        let cyl = Arc::new(corpus::cylinder());
        let end = cyl.subcomplex("end").unwrap().clone();
        assert!(matches!(mu_rel(&cyl, &end, 1, &z(2)), Err(Error::SubspaceMeetsBoundary)));
    }

    #[test]
    fn lemma_on_torus_slice() {
        let torus = Arc::new(corpus::torus2());
        let slice = torus.subcomplex("slice").unwrap().clone();
        let r = verify_lemma1(&torus, &slice, 1, &z(2)).unwrap();
        assert!(r.holds, "{r:?}");
        let none = Subcomplex::empty(&torus);
        let r = verify_lemma1(&torus, &none, 2, &z(3)).unwrap();
        assert!(r.holds);
        assert_eq!(r.k_order, BigUint::one());
        assert_eq!(r.mu_n, rational(1, 1));
    }

    #[test]
    fn multiplicative_under_disjoint_union() {
        let a = corpus::torus2();
        let b = corpus::cylinder();
        let ab = Arc::new(disjoint_union(&a, &b).unwrap());
        for p in 1..=3 {
            for g in [z(2), z(3), FiniteAbelianGroup::from_cyclic(&[2, 2]).unwrap()] {
                let lhs = mu(&ab, p, &g).mu;
                let rhs = mu(&Arc::new(a.clone()), p, &g).mu * mu(&Arc::new(b.clone()), p, &g).mu;
                assert_eq!(lhs, rhs);
            }
        }
        // with N inside the first summand
        let slice = ab.subcomplex("1/slice").unwrap().clone();
        let a_arc = Arc::new(a.clone());
        let a_slice = a_arc.subcomplex("slice").unwrap().clone();
        let lhs = mu_rel(&ab, &slice, 2, &z(2)).unwrap().mu;
        let rhs = mu_rel(&a_arc, &a_slice, 2, &z(2)).unwrap().mu * mu(&Arc::new(b), 2, &z(2)).mu;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ordinary_dw_weight() {
        for t in [corpus::torus2(), corpus::cylinder(), corpus::disk(), corpus::rp2()] {
            let t = Arc::new(t);
            for n in [2, 3, 4] {
                let h0 = cohomology(&CochainComplex::rel_boundary(t.clone()), 0, &z(n)).order();
                assert_eq!(mu(&t, 1, &z(n)).mu, rational_from_order(&h0).recip());
            }
        }
    }
}
