//! Partition functions, state spaces and bordism matrices.

mod bordism;
mod gluing;

use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

pub use bordism::{compose_bordisms, embed_by_labels, trace_glue, Bordism, BordismMatrix, BordismReport, Residual};
pub use gluing::{dagger_check, monoidal_check, verify_gluing, GluingReport, ShadowReport};

use crate::action::{evaluate_with_class, FundamentalClass};
use crate::arith::{rational_from_order, serde_exact, PhaseSum, Rational};
use crate::cohomology::{cohomology, CochainComplex, GammaCochain};
use crate::error::{Error, Result};
use crate::measure::mu_of_complex;
use crate::simplicial::Triangulation;
use crate::theory::DwTheory;

/// Field classes on `M` with prescribed boundary values: a base relative
/// cocycle plus the orbit under `H^p(M, ∂M; Γ)`. Empty when the boundary
/// data does not extend.
#[derive(Clone, Debug)]
pub struct FieldSpace {
    pub base: Option<GammaCochain>,
    pub classes: Vec<GammaCochain>,
}

impl FieldSpace {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Everything about `M` that does not depend on the boundary data.
#[derive(Debug)]
pub(crate) struct Bulk {
    tri: Arc<Triangulation>,
    rel: Arc<CochainComplex>,
    rel_classes: Vec<GammaCochain>,
    mu: Rational,
    fc: Option<FundamentalClass>,
    theory: DwTheory,
}

impl Bulk {
    pub(crate) fn new(tri: &Arc<Triangulation>, theory: &DwTheory) -> Result<Self> {
        let fc = match theory.action.resolve(tri.dim(), theory.p, &theory.gamma)? {
            None => None,
            Some(_) => Some(FundamentalClass::of(tri)?),
        };
        let rel = CochainComplex::rel_boundary(Arc::clone(tri));
        let rel_classes = cohomology(&rel, theory.p, &theory.gamma).enumerate_classes(theory.limit)?;
        let mu = mu_of_complex(&rel, theory.p, &theory.gamma).mu;
        Ok(Bulk {
            tri: Arc::clone(tri),
            rel,
            rel_classes,
            mu,
            fc,
            theory: theory.clone(),
        })
    }

    pub(crate) fn mu(&self) -> &Rational {
        &self.mu
    }

    /// `q` lives on all `p`-simplices of `M` and is supported on `∂M`.
    pub(crate) fn field_space(&self, q: Option<&GammaCochain>) -> Result<FieldSpace> {
        let p = self.theory.p;
        let zero = GammaCochain::zero(&self.tri, p, &self.theory.gamma);
        let q = q.unwrap_or(&zero);
        if q.degree() != p || q.moduli() != self.theory.gamma.invariant_factors() || q.len() != zero.len() {
            return Err(Error::DimensionMismatch("boundary data does not match the field space".into()));
        }
        let pair = self.rel.pair();
        if !q.free_component_is_zero(pair) {
            return Err(Error::DimensionMismatch("boundary data is not supported on the boundary".into()));
        }
        if p > self.tri.dim() {
            // no p-cochains: the single zero field
            return Ok(FieldSpace {
                base: Some(zero),
                classes: self.rel_classes.clone(),
            });
        }
        let dq = q.coboundary(&self.tri);
        // dq must vanish on the boundary itself
        if pair
            .subspace()
            .members(p + 1)
            .any(|i| dq.components().iter().any(|v| v[i] != 0))
        {
            return Err(Error::NotACocycle);
        }
        let target = dq.neg();
        let moduli = self.theory.gamma.invariant_factors();
        let mut free = Vec::with_capacity(moduli.len());
        for (j, &m) in moduli.iter().enumerate() {
            let b = target.free_component(pair, j);
            match self.rel.snf(p).solve_in_image(&b, m) {
                Some(x) => free.push(x),
                None => {
                    return Ok(FieldSpace {
                        base: None,
                        classes: Vec::new(),
                    })
                }
            }
        }
        let base = q.add(&GammaCochain::from_free(pair, p, moduli, &free))?;
        debug_assert!(base.is_cocycle(&self.tri));
        let classes = self
            .rel_classes
            .iter()
            .map(|h| base.add(h))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldSpace {
            base: Some(base),
            classes,
        })
    }

    /// `μ_M Σ_{P ∈ E(M, q)} exp(iS(P))`.
    pub(crate) fn amplitude(&self, q: Option<&GammaCochain>) -> Result<PhaseSum> {
        let fields = self.field_space(q)?;
        let mut total = PhaseSum::zero();
        match &self.fc {
            None => {
                total = PhaseSum::from_rational(rational_from_order(&BigUint::from(fields.len())));
            }
            Some(fc) => {
                for p_hat in &fields.classes {
                    total = total.add(&evaluate_with_class(&self.tri, fc, p_hat, &self.theory.action)?);
                }
            }
        }
        Ok(total.scale(&self.mu))
    }
}

/// `E(M, Q)`; `boundary_data` is a cochain on `M` supported on `∂M`
/// (zero when absent).
pub fn field_space(m: &Arc<Triangulation>, theory: &DwTheory, boundary_data: Option<&GammaCochain>) -> Result<FieldSpace> {
    Bulk::new(m, theory)?.field_space(boundary_data)
}

/// `Z(M) = μ_M Σ_{P ∈ H^p(M;Γ)} exp(iS(P))` for closed `M`.
pub fn partition_closed(m: &Arc<Triangulation>, theory: &DwTheory) -> Result<PhaseSum> {
    if !m.is_closed() {
        return Err(Error::NotClosed(m.name().to_string()));
    }
    Bulk::new(m, theory)?.amplitude(None)
}

/// `μ_M · |H^p(M;Γ)|`, the untwisted value computed from group orders
/// only.
pub fn untwisted_partition_from_orders(m: &Arc<Triangulation>, theory: &DwTheory) -> Rational {
    let complex = CochainComplex::absolute(Arc::clone(m));
    let order = cohomology(&complex, theory.p, &theory.gamma).order();
    mu_of_complex(&complex, theory.p, &theory.gamma).mu * rational_from_order(&order)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PartitionReport {
    pub manifold: String,
    pub value: PhaseSum,
    pub numeric: [f64; 2],
}

impl PartitionReport {
    pub fn new(manifold: &str, value: PhaseSum) -> Self {
        let z = value.eval();
        PartitionReport {
            manifold: manifold.to_string(),
            numeric: [z.re, z.im],
            value,
        }
    }
}

/// Boundary field classes of a closed `N` with fixed representatives and
/// the pairing `(e_Q, e_Q') = μ_N δ_{QQ'}`.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub boundary: Arc<Triangulation>,
    pub basis: Vec<GammaCochain>,
    pub coordinates: Vec<Vec<u64>>,
    pub ip_scale: Rational,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StateSpaceReport {
    pub boundary: String,
    pub dim: usize,
    #[serde(serialize_with = "serde_exact::rational")]
    pub ip_scale: Rational,
    pub basis: Vec<Vec<u64>>,
}

impl StateSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn report(&self) -> StateSpaceReport {
        StateSpaceReport {
            boundary: self.boundary.name().to_string(),
            dim: self.dim(),
            ip_scale: self.ip_scale.clone(),
            basis: self.coordinates.clone(),
        }
    }
}

pub fn state_space(n: &Arc<Triangulation>, theory: &DwTheory) -> Result<Arc<StateSpace>> {
    if !n.is_closed() {
        return Err(Error::NotClosed(n.name().to_string()));
    }
    let complex = CochainComplex::absolute(Arc::clone(n));
    let h = cohomology(&complex, theory.p, &theory.gamma);
    let coordinates = h.coordinate_tuples(theory.limit)?;
    let basis = coordinates.iter().map(|c| h.cocycle_from_coordinates(c)).collect();
    Ok(Arc::new(StateSpace {
        boundary: Arc::clone(n),
        basis,
        coordinates,
        ip_scale: mu_of_complex(&complex, theory.p, &theory.gamma).mu,
    }))
}

#[cfg(test)]
mod tests;
