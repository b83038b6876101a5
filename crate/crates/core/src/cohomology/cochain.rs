use serde::{Deserialize, Serialize};

use super::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::simplicial::{Pair, Triangulation};

/// A `Γ`-valued `k`-cochain: for each invariant factor `m_j` a residue
/// vector indexed by all `k`-simplices of the ambient triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaCochain {
    degree: usize,
    moduli: Vec<u64>,
    values: Vec<Vec<u64>>,
}

impl GammaCochain {
    pub fn zero(tri: &Triangulation, degree: usize, group: &FiniteAbelianGroup) -> Self {
        let n = tri.count(degree);
        GammaCochain {
            degree,
            moduli: group.invariant_factors().to_vec(),
            values: vec![vec![0; n]; group.invariant_factors().len()],
        }
    }

    /// Values per factor; reduced modulo each factor.
    pub fn new(degree: usize, moduli: Vec<u64>, values: Vec<Vec<u64>>) -> Result<Self> {
        if moduli.len() != values.len() {
            return Err(Error::ModulusMismatch(format!(
                "{} moduli for {} value vectors",
                moduli.len(),
                values.len()
            )));
        }
        if values.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(Error::DimensionMismatch("value vectors differ in length".into()));
        }
        let values = values
            .into_iter()
            .zip(&moduli)
            .map(|(v, &m)| v.into_iter().map(|x| x % m).collect())
            .collect();
        Ok(GammaCochain { degree, moduli, values })
    }

    /// Cyclic cochain with values mod `n`.
    pub fn cyclic(degree: usize, n: u64, values: Vec<u64>) -> Self {
        Self::new(degree, vec![n], vec![values]).expect("single factor")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn component(&self, factor: usize) -> &[u64] {
        &self.values[factor]
    }

    pub fn components(&self) -> &[Vec<u64>] {
        &self.values
    }

    /// The residue tuple on simplex `i`.
    pub fn value(&self, i: usize) -> Vec<u64> {
        self.values.iter().map(|v| v[i]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    fn check_compatible(&self, other: &GammaCochain) -> Result<()> {
        if self.moduli != other.moduli {
            return Err(Error::ModulusMismatch(format!("{:?} vs {:?}", self.moduli, other.moduli)));
        }
        if self.degree != other.degree || self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "degree {} ({} simplices) vs degree {} ({} simplices)",
                self.degree,
                self.len(),
                other.degree,
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GammaCochain) -> Result<GammaCochain> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b, m| (a + b) % m))
    }

    pub fn sub(&self, other: &GammaCochain) -> Result<GammaCochain> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b, m| (a + m - b) % m))
    }

    pub fn neg(&self) -> GammaCochain {
        self.map(|a, m| (m - a) % m)
    }

    pub fn scale(&self, k: u64) -> GammaCochain {
        self.map(|a, m| ((a as u128 * k as u128) % m as u128) as u64)
    }

    fn map(&self, f: impl Fn(u64, u64) -> u64) -> GammaCochain {
        GammaCochain {
            degree: self.degree,
            moduli: self.moduli.clone(),
            values: self
                .values
                .iter()
                .zip(&self.moduli)
                .map(|(v, &m)| v.iter().map(|&a| f(a, m)).collect())
                .collect(),
        }
    }

    fn zip_with(&self, other: &GammaCochain, f: impl Fn(u64, u64, u64) -> u64) -> GammaCochain {
        GammaCochain {
            degree: self.degree,
            moduli: self.moduli.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .zip(&self.moduli)
                .map(|((a, b), &m)| a.iter().zip(b).map(|(&x, &y)| f(x, y, m)).collect())
                .collect(),
        }
    }

    /// Coordinates on the free simplices of `pair` for one factor.
    pub fn free_component(&self, pair: &Pair, factor: usize) -> Vec<u64> {
        pair.free_simplices(self.degree)
            .iter()
            .map(|&i| self.values[factor][i])
            .collect()
    }

    /// Inverse of [`free_component`](Self::free_component): zero on the subspace.
    pub fn from_free(pair: &Pair, degree: usize, moduli: &[u64], free: &[Vec<u64>]) -> GammaCochain {
        let n = pair.space().count(degree);
        let values = free
            .iter()
            .zip(moduli)
            .map(|(f, &m)| {
                let mut v = vec![0u64; n];
                for (&i, &x) in pair.free_simplices(degree).iter().zip(f) {
                    v[i] = x % m;
                }
                v
            })
            .collect();
        GammaCochain {
            degree,
            moduli: moduli.to_vec(),
            values,
        }
    }

    /// True if the cochain vanishes on the subspace of `pair`.
    pub fn vanishes_on_subspace(&self, pair: &Pair) -> bool {
        pair.subspace()
            .members(self.degree)
            .all(|i| self.values.iter().all(|v| v[i] == 0))
    }

    /// True if the cochain is supported on the subspace of `pair`.
    pub fn free_component_is_zero(&self, pair: &Pair) -> bool {
        pair.free_simplices(self.degree)
            .iter()
            .all(|&i| self.values.iter().all(|v| v[i] == 0))
    }

    /// `dφ` on the whole triangulation.
    pub fn coboundary(&self, tri: &Triangulation) -> GammaCochain {
        let k = self.degree;
        let values = self
            .values
            .iter()
            .zip(&self.moduli)
            .map(|(v, &m)| {
                tri.simplices(k + 1)
                    .iter()
                    .map(|tau| {
                        let mut acc = 0u64;
                        for i in 0..tau.len() {
                            let mut face = tau.clone();
                            face.remove(i);
                            let x = v[tri.simplex_index(&face).expect("face exists")];
                            acc = if i % 2 == 0 { (acc + x) % m } else { (acc + m - x) % m };
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        GammaCochain {
            degree: k + 1,
            moduli: self.moduli.clone(),
            values,
        }
    }

    pub fn is_cocycle(&self, tri: &Triangulation) -> bool {
        self.coboundary(tri).is_zero()
    }
}
