use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use super::bordism::{Bordism, Residual};
use super::{partition_closed, state_space, Bulk};
use crate::arith::{rational_from_order, serde_exact, PhaseSum, Rational};
use crate::cohomology::pushforward;
use crate::error::{Error, Result};
use crate::measure::{kernel_order, mu, mu_rel};
use crate::simplicial::{disjoint_union, glue, SimplicialMap, Subcomplex, Triangulation};
use crate::theory::DwTheory;

/// Both sides of the gluing identity with the intermediate quantities of
/// its proof. With residual boundary, `lhs`/`rhs` run over the residual
/// state-space basis; otherwise they have one entry.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GluingReport {
    pub cut: String,
    pub glued: String,
    pub theory: DwTheory,
    #[serde(rename = "mu_M", serialize_with = "serde_exact::rational")]
    pub mu_m: Rational,
    #[serde(rename = "mu_MN", serialize_with = "serde_exact::rational")]
    pub mu_mn: Rational,
    #[serde(rename = "mu_N", serialize_with = "serde_exact::rational")]
    pub mu_n: Rational,
    #[serde(rename = "mu_M_rel_N", serialize_with = "serde_exact::rational")]
    pub mu_rel: Rational,
    #[serde(rename = "K_order", serialize_with = "serde_exact::order")]
    pub k_order: BigUint,
    pub excision_holds: bool,
    pub lemma_holds: bool,
    pub lhs: Vec<PhaseSum>,
    pub rhs: Vec<PhaseSum>,
    pub exact: bool,
    pub holds: bool,
}

/// Cuts along the gluing data of `mn`, compares `Z(M)` with the
/// `μ_N`-weighted trace of the bordism matrix of `M_N`.
pub fn verify_gluing(mn: &Arc<Triangulation>, theory: &DwTheory, tol: f64) -> Result<GluingReport> {
    let spec = mn
        .gluing()
        .ok_or_else(|| Error::Gluing(format!("`{}` carries no gluing data", mn.name())))?
        .clone();
    let g = glue(mn, &spec)?;
    let m = Arc::new(g.glued);

    // N with the orientation induced as the outgoing side
    let plus = mn.subcomplex(&spec.plus)?.clone();
    let minus = mn.subcomplex(&spec.minus)?.clone();
    let (n_tri, iota_plus) = mn.boundary_piece(&plus, "N")?;
    let n = Arc::new(n_tri);
    let to_minus: Vec<usize> = {
        let mut table: Vec<usize> = (0..mn.vertices().len()).collect();
        for (lp, lm) in &spec.vertex_map {
            table[mn.vertex_index(lp).unwrap()] = mn.vertex_index(lm).unwrap();
        }
        table
    };
    let iota_minus = iota_plus.compose(&SimplicialMap::new(to_minus));

    // boundary left over after cutting
    let boundary = mn.boundary_subcomplex();
    let cut = plus.union(&minus);
    let d = mn.dim();
    let mut residual_faces = Vec::new();
    if d > 0 {
        for i in boundary.members(d - 1) {
            if !cut.contains(d - 1, i) {
                residual_faces.push(mn.simplices(d - 1)[i].clone());
            }
        }
    }
    let residual_sub = mn.closure_of(&residual_faces)?;
    if residual_sub.intersects(&cut) {
        return Err(Error::ComponentMismatch(
            "residual boundary touches the glued components".into(),
        ));
    }
    let residual = if residual_sub.is_empty() {
        None
    } else {
        let (r, iota_r) = mn.boundary_piece(&residual_sub, "R")?;
        Some((Arc::new(r), iota_r))
    };

    let space = state_space(&n, theory)?;
    let bulk_mn = Bulk::new(mn, theory)?;
    let bulk_m = Bulk::new(&m, theory)?;

    let residual_basis = match &residual {
        None => vec![None],
        Some((r, _)) => state_space(r, theory)?.basis.iter().cloned().map(Some).collect(),
    };
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for data in residual_basis {
        let res = match (&residual, data) {
            (Some((r, iota_r)), Some(data)) => Some(Residual {
                boundary: Arc::clone(r),
                embedding: iota_r.clone(),
                data,
            }),
            _ => None,
        };
        // left side: the same residual data seen through π
        let q_m = match &res {
            None => None,
            Some(r) => Some(pushforward(&r.data, &r.embedding.compose(&g.projection), &r.boundary, &m)?),
        };
        lhs.push(bulk_m.amplitude(q_m.as_ref())?);
        let bordism = Bordism::new(
            Arc::clone(mn),
            Arc::clone(&space),
            iota_minus.clone(),
            Arc::clone(&space),
            iota_plus.clone(),
            res,
        )?;
        rhs.push(super::trace_glue(&bordism.matrix_with(&bulk_mn, true)?)?);
    }

    let exact = lhs == rhs;
    let holds = lhs.len() == rhs.len() && lhs.iter().zip(&rhs).all(|(a, b)| a.approx_eq(b, tol));
    let holds = if theory.action.is_trivial() { exact } else { holds };

    // audit: μ's, |K| and excision on (M, N) with N = π(plus)
    let n_in_m: Subcomplex = m.subcomplex(&spec.plus)?.clone();
    let mu_m = mu(&m, theory.p, &theory.gamma).mu;
    let mu_mn = bulk_mn.mu().clone();
    let mu_n = space.ip_scale.clone();
    let mu_rel_value = mu_rel(&m, &n_in_m, theory.p, &theory.gamma)?.mu;
    let k_order = kernel_order(&m, &n_in_m, theory.p, &theory.gamma)?;
    let lemma_holds = mu_m == rational_from_order(&k_order) * &mu_rel_value * &mu_n;

    Ok(GluingReport {
        cut: mn.name().to_string(),
        glued: m.name().to_string(),
        theory: theory.clone(),
        excision_holds: mu_rel_value == mu_mn,
        mu_m,
        mu_mn,
        mu_n,
        mu_rel: mu_rel_value,
        k_order,
        lemma_holds,
        lhs,
        rhs,
        exact,
        holds,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ShadowReport {
    pub manifold: String,
    pub left: PhaseSum,
    pub right: PhaseSum,
    pub holds: bool,
}

/// `Z(-M) = conj Z(M)`, exactly.
pub fn dagger_check(m: &Arc<Triangulation>, theory: &DwTheory) -> Result<ShadowReport> {
    let z = partition_closed(m, theory)?;
    let z_rev = partition_closed(&Arc::new(m.reversed()), theory)?;
    let conj = z.conj();
    Ok(ShadowReport {
        manifold: m.name().to_string(),
        holds: z_rev == conj,
        left: z_rev,
        right: conj,
    })
}

/// `Z(M1 ⊔ M2) = Z(M1) Z(M2)`, exactly.
pub fn monoidal_check(a: &Arc<Triangulation>, b: &Arc<Triangulation>, theory: &DwTheory) -> Result<ShadowReport> {
    let ab = Arc::new(disjoint_union(a, b)?);
    let left = partition_closed(&ab, theory)?;
    let right = partition_closed(a, theory)?.mul(&partition_closed(b, theory)?);
    Ok(ShadowReport {
        manifold: ab.name().to_string(),
        holds: left == right,
        left,
        right,
    })
}
