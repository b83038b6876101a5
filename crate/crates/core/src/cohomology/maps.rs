use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use super::{CohomologyGroup, GammaCochain};
use crate::error::{Error, Result};
use crate::simplicial::SimplicialMap;
use crate::snf::{smith_normal_form, IntMatrix};

/// A homomorphism `⊕ Z_{a_i} → ⊕ Z_{b_j}` in generator coordinates.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GroupHom {
    pub source_orders: Vec<u64>,
    pub target_orders: Vec<u64>,
    /// `matrix[j][i]`: coordinate `j` of the image of generator `i`
    pub matrix: Vec<Vec<u64>>,
}

impl GroupHom {
    fn product(v: &[u64]) -> BigUint {
        v.iter().fold(BigUint::one(), |acc, &o| acc * o)
    }

    /// `|coker| = |Z^t / (F + diag(b))|`.
    pub fn cokernel_order(&self) -> BigUint {
        let t = self.target_orders.len();
        let s = self.source_orders.len();
        let mut rel = IntMatrix::zeros(t, s + t);
        for j in 0..t {
            for i in 0..s {
                if self.matrix[j][i] != 0 {
                    rel.set(j, i, BigInt::from(self.matrix[j][i]));
                }
            }
            rel.set(j, s + j, BigInt::from(self.target_orders[j]));
        }
        smith_normal_form(&rel)
            .diagonal()
            .iter()
            .map(|d| d.magnitude().clone())
            .fold(BigUint::one(), |acc, d| acc * d)
    }

    pub fn image_order(&self) -> BigUint {
        Self::product(&self.target_orders) / self.cokernel_order()
    }

    /// `|ker| = |source| · |coker| / |target|`.
    pub fn kernel_order(&self) -> BigUint {
        Self::product(&self.source_orders) * self.cokernel_order() / Self::product(&self.target_orders)
    }

    pub fn apply(&self, coords: &[u64]) -> Vec<u64> {
        self.matrix
            .iter()
            .zip(&self.target_orders)
            .map(|(row, &b)| {
                row.iter()
                    .zip(coords)
                    .fold(0u128, |acc, (&f, &x)| (acc + f as u128 * x as u128) % b as u128) as u64
            })
            .collect()
    }
}

/// The homomorphism `H_src → H_dst` induced by a cochain map, evaluated on
/// representatives and read off with the coordinate solver of `H_dst`.
pub fn induced_map(
    src: &CohomologyGroup,
    dst: &CohomologyGroup,
    cochain_map: impl Fn(&GammaCochain) -> Result<GammaCochain>,
) -> Result<GroupHom> {
    if src.coefficients() != dst.coefficients() {
        return Err(Error::ModulusMismatch(format!(
            "{} vs {}",
            src.coefficients(),
            dst.coefficients()
        )));
    }
    let reps = src.representatives();
    let target_orders = dst.cyclic_orders();
    let mut matrix = vec![vec![0u64; reps.len()]; target_orders.len()];
    for (i, rep) in reps.iter().enumerate() {
        let image = dst.coordinates(&cochain_map(rep)?)?;
        for (j, x) in image.into_iter().enumerate() {
            matrix[j][i] = x;
        }
    }
    Ok(GroupHom {
        source_orders: src.cyclic_orders(),
        target_orders,
        matrix,
    })
}

/// The map induced by the identity on cochains between two pairs on the
/// same triangulation (e.g. `(M, N ∪ ∂M) → (M, ∂M)`).
pub fn forgetful_map(src: &CohomologyGroup, dst: &CohomologyGroup) -> Result<GroupHom> {
    if !std::sync::Arc::ptr_eq(src.complex().space(), dst.complex().space()) {
        return Err(Error::DimensionMismatch("pairs live on different triangulations".into()));
    }
    induced_map(src, dst, |c| Ok(c.clone()))
}

/// Restriction along an embedding `ι: N → M` (signed pullback); `dst`
/// lives on `N`.
pub fn restriction_map(src: &CohomologyGroup, dst: &CohomologyGroup, embedding: &SimplicialMap) -> Result<GroupHom> {
    let m_tri = src.complex().space().clone();
    let n_tri = dst.complex().space().clone();
    induced_map(src, dst, |c| pullback(c, embedding, &n_tri, &m_tri))
}

/// `f^* c` for `f: source → target`.
pub fn pullback(
    c: &GammaCochain,
    f: &SimplicialMap,
    source: &crate::simplicial::Triangulation,
    target: &crate::simplicial::Triangulation,
) -> Result<GammaCochain> {
    let k = c.degree();
    let values = c
        .components()
        .iter()
        .zip(c.moduli())
        .map(|(v, &m)| f.pullback_values(source, target, k, v, m))
        .collect::<Result<Vec<_>>>()?;
    GammaCochain::new(k, c.moduli().to_vec(), values)
}

/// Signed push-forward along an injective `f: source → target`, zero off
/// the image.
pub fn pushforward(
    c: &GammaCochain,
    f: &SimplicialMap,
    source: &crate::simplicial::Triangulation,
    target: &crate::simplicial::Triangulation,
) -> Result<GammaCochain> {
    let k = c.degree();
    let values = c
        .components()
        .iter()
        .zip(c.moduli())
        .map(|(v, &m)| f.pushforward_values(source, target, k, v, m))
        .collect::<Result<Vec<_>>>()?;
    GammaCochain::new(k, c.moduli().to_vec(), values)
}
