//! Brute-force reference computations by exhaustive cochain enumeration.
//!
//! Nothing here uses Smith normal form or the cohomology layer: cocycles are
//! enumerated by backtracking over simplices, coboundary counts come from
//! `|B^k| = |C^{k-1}| / |Z^{k-1}|`, and partition functions sum the action
//! over every cocycle. All work is bounded by an explicit node limit.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rational_from_order, serde_exact, PhaseSum, Rational};
use crate::error::{Error, Result};
use crate::simplicial::{Subcomplex, Triangulation};

/// Default cap on visited search nodes.
pub const ORACLE_LIMIT: u64 = 50_000_000;

/// Cochains on `tri` relative to `sub` in one degree, with a single modulus.
struct Problem<'a> {
    tri: &'a Triangulation,
    degree: usize,
    modulus: u64,
    /// free `degree`-simplices, in index order
    vars: Vec<usize>,
    /// for each variable position, constraints closed by it
    closing: Vec<Vec<Vec<(usize, bool)>>>,
}

impl<'a> Problem<'a> {
    fn new(tri: &'a Triangulation, sub: &Subcomplex, degree: usize, modulus: u64) -> Self {
        let vars: Vec<usize> = (0..tri.count(degree)).filter(|&i| !sub.contains(degree, i)).collect();
        let mut position = vec![usize::MAX; tri.count(degree)];
        for (pos, &i) in vars.iter().enumerate() {
            position[i] = pos;
        }
        let index: HashMap<&[usize], usize> = tri
            .simplices(degree)
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let mut closing = vec![Vec::new(); vars.len()];
        for (t, tau) in tri.simplices(degree + 1).iter().enumerate() {
            if sub.contains(degree + 1, t) {
                continue;
            }
            // (position, positive sign) of each free face
            let mut terms = Vec::new();
            for drop in 0..tau.len() {
                let face: Vec<usize> = tau.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &v)| v).collect();
                let i = index[face.as_slice()];
                if position[i] != usize::MAX {
                    terms.push((position[i], drop % 2 == 0));
                }
            }
            if let Some(last) = terms.iter().map(|t| t.0).max() {
                closing[last].push(terms);
            }
        }
        Problem {
            tri,
            degree,
            modulus,
            vars,
            closing,
        }
    }

    /// Calls `visit` with every relative cocycle, as values on all
    /// `degree`-simplices.
    fn for_each(&self, limit: u64, mut visit: impl FnMut(&[u64])) -> Result<()> {
        let mut values = vec![0u64; self.tri.count(self.degree)];
        let mut assigned = vec![0u64; self.vars.len()];
        let mut nodes = 0u64;
        self.search(0, &mut assigned, &mut values, &mut nodes, limit, &mut visit)
    }

    fn search(
        &self,
        pos: usize,
        assigned: &mut Vec<u64>,
        values: &mut Vec<u64>,
        nodes: &mut u64,
        limit: u64,
        visit: &mut impl FnMut(&[u64]),
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > limit {
            return Err(Error::OracleTooLarge(format!(
                "more than {limit} search nodes in degree {} of `{}`",
                self.degree,
                self.tri.name()
            )));
        }
        if pos == self.vars.len() {
            visit(values);
            return Ok(());
        }
        let m = self.modulus;
        // residual of a constraint excluding the variable at `pos`
        let partial = |terms: &[(usize, bool)], assigned: &[u64]| -> (u64, bool) {
            let mut acc = 0u64;
            let mut own = true;
            for &(q, plus) in terms {
                if q == pos {
                    own = plus;
                    continue;
                }
                acc = if plus { (acc + assigned[q]) % m } else { (acc + m - assigned[q]) % m };
            }
            (acc, own)
        };
        let constraints = &self.closing[pos];
        let candidates: Vec<u64> = match constraints.first() {
            None => (0..m).collect(),
            Some(first) => {
                let (acc, plus) = partial(first, assigned);
                // ±x + acc = 0
                let x = if plus { (m - acc) % m } else { acc };
                let ok = constraints[1..].iter().all(|c| {
                    let (a, p) = partial(c, assigned);
                    let v = if p { (a + x) % m } else { (a + m - x) % m };
                    v == 0
                });
                if ok {
                    vec![x]
                } else {
                    Vec::new()
                }
            }
        };
        for x in candidates {
            assigned[pos] = x;
            values[self.vars[pos]] = x;
            self.search(pos + 1, assigned, values, nodes, limit, visit)?;
        }
        assigned[pos] = 0;
        values[self.vars[pos]] = 0;
        Ok(())
    }
}

fn pow(m: u64, e: usize) -> BigUint {
    BigUint::from(m).pow(e as u32)
}

/// `|Z^k|` of relative cochains with values in `Z_m`.
pub fn count_cocycles(tri: &Triangulation, sub: &Subcomplex, k: usize, m: u64, limit: u64) -> Result<BigUint> {
    if k > tri.dim() || tri.is_empty() {
        return Ok(BigUint::one());
    }
    let problem = Problem::new(tri, sub, k, m);
    let mut count = BigUint::zero();
    problem.for_each(limit, |_| count += 1u32)?;
    Ok(count)
}

/// Calls `visit` on every relative `k`-cocycle mod `m`.
pub fn for_each_cocycle(
    tri: &Triangulation,
    sub: &Subcomplex,
    k: usize,
    m: u64,
    limit: u64,
    visit: impl FnMut(&[u64]),
) -> Result<()> {
    Problem::new(tri, sub, k, m).for_each(limit, visit)
}

fn free_count(tri: &Triangulation, sub: &Subcomplex, k: usize) -> usize {
    tri.count(k) - sub.count(k)
}

/// Orders from enumeration for one cyclic factor.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OracleCohomology {
    pub degree: usize,
    pub modulus: u64,
    #[serde(serialize_with = "serde_exact::order")]
    pub cocycles: BigUint,
    #[serde(serialize_with = "serde_exact::order")]
    pub coboundaries: BigUint,
    #[serde(serialize_with = "serde_exact::order")]
    pub order: BigUint,
}

pub fn cohomology_cyclic(tri: &Triangulation, sub: &Subcomplex, k: usize, m: u64, limit: u64) -> Result<OracleCohomology> {
    let cocycles = if k > tri.dim() { BigUint::one() } else { count_cocycles(tri, sub, k, m, limit)? };
    let coboundaries = if k == 0 || k > tri.dim() {
        BigUint::one()
    } else {
        pow(m, free_count(tri, sub, k - 1)) / count_cocycles(tri, sub, k - 1, m, limit)?
    };
    Ok(OracleCohomology {
        degree: k,
        modulus: m,
        order: &cocycles / &coboundaries,
        cocycles,
        coboundaries,
    })
}

/// `|H^k(tri, sub; Γ)|` with `Γ = ⊕ Z_{m_j}`.
pub fn cohomology_order(tri: &Triangulation, sub: &Subcomplex, k: usize, moduli: &[u64], limit: u64) -> Result<BigUint> {
    let mut order = BigUint::one();
    for &m in moduli {
        order *= cohomology_cyclic(tri, sub, k, m, limit)?.order;
    }
    Ok(order)
}

/// Every relative coboundary `dφ`, `φ` ranging over `C^{k-1}`.
pub fn coboundary_set(tri: &Triangulation, sub: &Subcomplex, k: usize, m: u64, limit: u64) -> Result<HashSet<Vec<u64>>> {
    let mut out = HashSet::new();
    if k == 0 {
        out.insert(vec![0; tri.count(0)]);
        return Ok(out);
    }
    let free: Vec<usize> = (0..tri.count(k - 1)).filter(|&i| !sub.contains(k - 1, i)).collect();
    let size = pow(m, free.len());
    if size > BigUint::from(limit) {
        return Err(Error::OracleTooLarge(format!("{size} cochains in degree {}", k - 1)));
    }
    let index: HashMap<&[usize], usize> = tri
        .simplices(k - 1)
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let faces: Vec<Vec<usize>> = tri
        .simplices(k)
        .iter()
        .map(|tau| {
            (0..tau.len())
                .map(|drop| {
                    let face: Vec<usize> = tau.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &v)| v).collect();
                    index[face.as_slice()]
                })
                .collect()
        })
        .collect();
    let mut phi = vec![0u64; tri.count(k - 1)];
    loop {
        let d: Vec<u64> = faces
            .iter()
            .map(|fs| {
                fs.iter().enumerate().fold(0u64, |acc, (j, &f)| {
                    if j % 2 == 0 {
                        (acc + phi[f]) % m
                    } else {
                        (acc + m - phi[f]) % m
                    }
                })
            })
            .collect();
        out.insert(d);
        // odometer over the free entries
        let mut carry = true;
        for &i in &free {
            phi[i] += 1;
            if phi[i] == m {
                phi[i] = 0;
            } else {
                carry = false;
                break;
            }
        }
        if carry {
            break;
        }
    }
    Ok(out)
}

/// `s(P) = Σ_σ sign(σ) P(σ_0…σ_p) P(σ_p…σ_{2p}) mod n` over the top simplices.
pub fn cup_square_sum(tri: &Triangulation, p: usize, n: u64, values: &[u64]) -> u64 {
    let index: HashMap<&[usize], usize> = tri
        .simplices(p)
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let mut s = 0i128;
    for (sigma, &sign) in tri.simplices(tri.dim()).iter().zip(tri.top_signs()) {
        let front = values[index[&sigma[..=p]]] as i128;
        let back = values[index[&sigma[p..]]] as i128;
        s += sign as i128 * front * back;
    }
    s.rem_euclid(n as i128) as u64
}

/// Partition function of a closed manifold summed over all cocycles.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OraclePartition {
    pub manifold: String,
    pub p: usize,
    pub modulus: u64,
    pub lambda: u64,
    #[serde(serialize_with = "serde_exact::rational")]
    pub mu: Rational,
    #[serde(serialize_with = "serde_exact::order")]
    pub cocycles: BigUint,
    #[serde(serialize_with = "serde_exact::order")]
    pub coboundaries: BigUint,
    /// `s ↦` number of cocycles with that cup-square sum
    pub histogram: BTreeMap<u64, u64>,
    pub value: PhaseSum,
}

/// `Z(M) = μ_M / |B^p| Σ_{P ∈ Z^p} exp(2πi λ s(P)/n)`; `λ = 0` is the
/// untwisted theory and then no orientation is needed.
pub fn partition(tri: &Triangulation, p: usize, n: u64, lambda: u64, limit: u64) -> Result<OraclePartition> {
    let lambda = lambda % n;
    let empty = Subcomplex::empty(tri);
    if lambda != 0 && tri.dim() != 2 * p {
        return Err(Error::DimensionMismatch(format!("cup square needs dim {} = 2·{p}", tri.dim())));
    }
    let mut mu = Rational::one();
    for i in 0..p {
        let r = rational_from_order(&cohomology_cyclic(tri, &empty, i, n, limit)?.order);
        mu = if (p - i) % 2 == 0 { mu * r } else { mu / r };
    }
    let h = cohomology_cyclic(tri, &empty, p, n, limit)?;
    let mut histogram = BTreeMap::new();
    for_each_cocycle(tri, &empty, p, n, limit, |values| {
        let s = if lambda == 0 { 0 } else { cup_square_sum(tri, p, n, values) };
        *histogram.entry(s).or_insert(0u64) += 1;
    })?;
    let terms = histogram
        .iter()
        .map(|(&s, &count)| ((lambda * s) % n, Rational::from_integer(count.into())));
    let value = PhaseSum::new(n, terms).scale(&(mu.clone() / rational_from_order(&h.coboundaries)));
    Ok(OraclePartition {
        manifold: tri.name().to_string(),
        p,
        modulus: n,
        lambda,
        mu,
        cocycles: h.cocycles,
        coboundaries: h.coboundaries,
        histogram,
        value,
    })
}

/// One cohomology class: its lexicographically smallest cocycle and the
/// cup-square sum shared by all members.
#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct ClassEntry {
    pub representative: Vec<u64>,
    pub size: u64,
    pub s: u64,
}

/// Class-wise action table, computed by partitioning all cocycles into
/// cosets of the coboundaries. Fails if a class carries two values of `s`.
pub fn class_table(tri: &Triangulation, p: usize, n: u64, limit: u64) -> Result<Vec<ClassEntry>> {
    let empty = Subcomplex::empty(tri);
    let b = coboundary_set(tri, &empty, p, n, limit)?;
    let mut classes: BTreeMap<Vec<u64>, ClassEntry> = BTreeMap::new();
    let mut work = 0u64;
    let mut failure = None;
    for_each_cocycle(tri, &empty, p, n, limit, |z| {
        work += b.len() as u64;
        if work > limit || failure.is_some() {
            failure.get_or_insert_with(|| Error::OracleTooLarge(format!("class table exceeds {limit} steps")));
            return;
        }
        let canonical = b
            .iter()
            .map(|d| z.iter().zip(d).map(|(x, y)| (x + y) % n).collect::<Vec<u64>>())
            .min()
            .expect("coboundaries contain zero");
        let s = cup_square_sum(tri, p, n, z);
        let entry = classes.entry(canonical.clone()).or_insert(ClassEntry {
            representative: canonical,
            size: 0,
            s,
        });
        if entry.s != s {
            failure.get_or_insert(Error::NotACocycle);
        }
        entry.size += 1;
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(classes.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn closed(t: &Triangulation, k: usize, m: u64) -> OracleCohomology {
        cohomology_cyclic(t, &Subcomplex::empty(t), k, m, ORACLE_LIMIT).unwrap()
    }

    #[test]
    fn circle_and_sphere() {
        let c = corpus::circle(4);
        let h = closed(&c, 1, 3);
        assert_eq!(h.cocycles, BigUint::from(81u32));
        assert_eq!(h.coboundaries, BigUint::from(27u32));
        assert_eq!(h.order, BigUint::from(3u32));
        let s = corpus::sphere2();
        assert_eq!(closed(&s, 1, 2).order, BigUint::one());
        assert_eq!(closed(&s, 2, 2).order, BigUint::from(2u32));
        assert_eq!(closed(&s, 3, 2).order, BigUint::one());
    }

    #[test]
    fn torus_and_rp2() {
        let t = corpus::torus2();
        assert_eq!(closed(&t, 1, 2).order, BigUint::from(4u32));
        assert_eq!(closed(&t, 1, 2).cocycles, BigUint::from(1024u32));
        let r = corpus::rp2();
        assert_eq!(closed(&r, 1, 2).order, BigUint::from(2u32));
        assert_eq!(closed(&r, 1, 3).order, BigUint::one());
        assert_eq!(closed(&r, 2, 2).order, BigUint::from(2u32));
    }

    #[test]
    fn relative_disk() {
        let d = corpus::disk();
        let b = d.boundary_subcomplex();
        assert_eq!(cohomology_cyclic(&d, &b, 2, 5, ORACLE_LIMIT).unwrap().order, BigUint::from(5u32));
        assert_eq!(cohomology_cyclic(&d, &b, 1, 5, ORACLE_LIMIT).unwrap().order, BigUint::one());
        assert_eq!(cohomology_order(&d, &b, 2, &[2, 2], ORACLE_LIMIT).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn coboundary_set_size() {
        let t = corpus::torus2();
        let e = Subcomplex::empty(&t);
        let b = coboundary_set(&t, &e, 1, 2, ORACLE_LIMIT).unwrap();
        assert_eq!(BigUint::from(b.len()), closed(&t, 1, 2).coboundaries);
    }

    #[test]
    fn guard_trips() {
        let t = corpus::torus2();
        let e = Subcomplex::empty(&t);
        assert!(matches!(count_cocycles(&t, &e, 1, 4, 100), Err(Error::OracleTooLarge(_))));
        assert!(matches!(coboundary_set(&t, &e, 1, 4, 100), Err(Error::OracleTooLarge(_))));
    }

    #[test]
    fn untwisted_partitions() {
        for n in 2..=3 {
            let z = partition(&corpus::torus2(), 1, n, 0, ORACLE_LIMIT).unwrap();
            assert_eq!(z.value, PhaseSum::from_rational(Rational::from_integer(n.into())));
            let z = partition(&corpus::sphere2(), 1, n, 0, ORACLE_LIMIT).unwrap();
            assert_eq!(z.value, PhaseSum::from_rational(Rational::new(1.into(), n.into())));
        }
    }

    #[test]
    fn torus_class_table() {
        let t = corpus::torus2();
        let table = class_table(&t, 1, 2, ORACLE_LIMIT).unwrap();
        assert_eq!(table.len(), 4);
        assert!(table.iter().all(|c| c.size == 256));
        // the zero class first, with s = 0
        assert!(table[0].representative.iter().all(|&x| x == 0));
        assert_eq!(table[0].s, 0);
    }
}
