use std::sync::Arc;

use num_bigint::BigInt;

use super::{Subcomplex, Triangulation};
use crate::error::Result;
use crate::snf::IntMatrix;

/// A triangulation with a subcomplex; cochains of the pair vanish on the
/// subcomplex. Absolute cochains use the empty subcomplex.
#[derive(Clone, Debug)]
pub struct Pair {
    space: Arc<Triangulation>,
    subspace: Subcomplex,
    /// per degree: simplex index ↦ position among free simplices
    free: Vec<Vec<Option<usize>>>,
    free_list: Vec<Vec<usize>>,
}

impl Pair {
    pub fn new(space: Arc<Triangulation>, subspace: Subcomplex) -> Self {
        let mut free = Vec::new();
        let mut free_list = Vec::new();
        for k in 0..=space.dim() {
            let mut pos = vec![None; space.count(k)];
            let mut list = Vec::new();
            for (i, slot) in pos.iter_mut().enumerate() {
                if !subspace.contains(k, i) {
                    *slot = Some(list.len());
                    list.push(i);
                }
            }
            free.push(pos);
            free_list.push(list);
        }
        Pair {
            space,
            subspace,
            free,
            free_list,
        }
    }

    pub fn absolute(space: Arc<Triangulation>) -> Self {
        let sub = Subcomplex::empty(&space);
        Self::new(space, sub)
    }

    /// `(M, ∂M)`
    pub fn rel_boundary(space: Arc<Triangulation>) -> Self {
        let sub = space.boundary_subcomplex();
        Self::new(space, sub)
    }

    pub fn named(space: Arc<Triangulation>, name: &str) -> Result<Self> {
        let sub = space.subcomplex(name)?.clone();
        Ok(Self::new(space, sub))
    }

    pub fn space(&self) -> &Arc<Triangulation> {
        &self.space
    }

    pub fn subspace(&self) -> &Subcomplex {
        &self.subspace
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Indices (into `simplices(k)`) of the `k`-simplices outside the
    /// subspace; these index the cochain coordinates.
    pub fn free_simplices(&self, k: usize) -> &[usize] {
        self.free_list.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.free_simplices(k).len()
    }

    /// Position of simplex `i` among the free `k`-simplices.
    pub fn position(&self, k: usize, i: usize) -> Option<usize> {
        self.free.get(k)?.get(i).copied().flatten()
    }
}

/// Matrix of `d: C^k → C^{k+1}` in the bases of free simplices:
/// `(dφ)(τ) = Σ_i (-1)^i φ(τ without vertex i)`.
pub fn coboundary_matrix(pair: &Pair, k: usize) -> IntMatrix {
    let tri = pair.space();
    let mut out = IntMatrix::zeros(pair.rank(k + 1), pair.rank(k));
    for (row, &t) in pair.free_simplices(k + 1).iter().enumerate() {
        let tau = &tri.simplices(k + 1)[t];
        for i in 0..tau.len() {
            let mut face = tau.clone();
            face.remove(i);
            let f = tri.simplex_index(&face).expect("faces of simplices are simplices");
            if let Some(col) = pair.position(k, f) {
                out.set(row, col, BigInt::from(if i % 2 == 0 { 1 } else { -1 }));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{Checks, TriangulationSpec};

    fn tetra_boundary() -> Arc<Triangulation> {
        let spec = TriangulationSpec {
            name: "s2".into(),
            oriented: true,
            vertices: (0..4).map(|i| i.to_string()).collect(),
            top_simplices: vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
            ..Default::default()
        };
        Arc::new(Triangulation::new(spec, Checks::default()).unwrap())
    }

    #[test]
    fn d_squared_is_zero() {
        let pair = Pair::absolute(tetra_boundary());
        let d0 = coboundary_matrix(&pair, 0);
        let d1 = coboundary_matrix(&pair, 1);
        assert_eq!((d0.rows(), d0.cols()), (6, 4));
        assert!(d1.mul(&d0).is_zero());
    }

    #[test]
    fn relative_drops_subspace() {
        let t = tetra_boundary();
        let sub = t.closure_of(&[vec![0, 1]]).unwrap();
        let pair = Pair::new(t, sub);
        assert_eq!(pair.rank(0), 2);
        assert_eq!(pair.rank(1), 5);
        let d0 = coboundary_matrix(&pair, 0);
        let d1 = coboundary_matrix(&pair, 1);
        assert!(d1.mul(&d0).is_zero());
    }
}
