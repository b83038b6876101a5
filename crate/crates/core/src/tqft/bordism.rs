use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::{Bulk, StateSpace};
use crate::arith::{serde_exact, PhaseSum, Rational};
use crate::cohomology::{pushforward, GammaCochain};
use crate::error::{Error, Result};
use crate::simplicial::{SimplicialMap, Triangulation};
use crate::theory::DwTheory;

/// Boundary components of `B` that keep fixed data in every entry.
#[derive(Clone, Debug)]
pub struct Residual {
    pub boundary: Arc<Triangulation>,
    pub embedding: SimplicialMap,
    pub data: GammaCochain,
}

/// `B` with its boundary split into incoming and outgoing parts, each
/// identified with the boundary of a state space.
#[derive(Clone, Debug)]
pub struct Bordism {
    pub bulk: Arc<Triangulation>,
    pub source: Arc<StateSpace>,
    pub incoming: SimplicialMap,
    pub target: Arc<StateSpace>,
    pub outgoing: SimplicialMap,
    pub residual: Option<Residual>,
}

/// Embeds `n` into `b` by vertex labels.
pub fn embed_by_labels(b: &Triangulation, n: &Triangulation, label: impl Fn(&str) -> String) -> Result<SimplicialMap> {
    n.vertices()
        .iter()
        .map(|l| {
            let target = label(l);
            b.vertex_index(&target)
                .ok_or_else(|| Error::ComponentMismatch(format!("no vertex `{target}` in `{}`", b.name())))
        })
        .collect::<Result<Vec<_>>>()
        .map(SimplicialMap::new)
}

impl Bordism {
    pub fn new(
        bulk: Arc<Triangulation>,
        source: Arc<StateSpace>,
        incoming: SimplicialMap,
        target: Arc<StateSpace>,
        outgoing: SimplicialMap,
        residual: Option<Residual>,
    ) -> Result<Self> {
        let out = Bordism {
            bulk,
            source,
            incoming,
            target,
            outgoing,
            residual,
        };
        out.check()?;
        Ok(out)
    }

    fn pieces(&self) -> Vec<(&Triangulation, &SimplicialMap, i8, &'static str)> {
        let mut v = vec![
            (self.source.boundary.as_ref(), &self.incoming, -1, "incoming"),
            (self.target.boundary.as_ref(), &self.outgoing, 1, "outgoing"),
        ];
        if let Some(r) = &self.residual {
            v.push((r.boundary.as_ref(), &r.embedding, 1, "residual"));
        }
        v
    }

    /// The pieces embed disjointly, tile `∂B`, and carry `-N_in`, `+N_out`.
    fn check(&self) -> Result<()> {
        let b = &self.bulk;
        let d = b.dim();
        let signs = b.boundary_signs();
        let mut used: BTreeSet<usize> = BTreeSet::new();
        let mut covered = 0usize;
        for (n, map, orientation, what) in self.pieces() {
            let mismatch = |msg: String| Error::ComponentMismatch(format!("{what} boundary: {msg}"));
            if n.is_empty() {
                continue;
            }
            if map.vertex_map().len() != n.vertices().len() {
                return Err(mismatch("vertex map has the wrong length".into()));
            }
            if n.dim() + 1 != d {
                return Err(mismatch(format!("dimension {} inside a {d}-manifold", n.dim())));
            }
            for &v in map.vertex_map() {
                if !used.insert(v) {
                    return Err(mismatch(format!("vertex `{}` is used twice", b.vertices()[v])));
                }
            }
            let table = map.simplex_table(n, b, n.dim())?;
            for (t, (img, parity)) in table.into_iter().enumerate() {
                let image = b.simplices(n.dim())[img].clone();
                let Some(&induced) = signs.get(&image) else {
                    return Err(mismatch(format!("{:?} is not on the boundary", b.labels(&image))));
                };
                if n.is_oriented() && b.is_oriented() && induced != orientation * n.top_signs()[t] * parity {
                    return Err(mismatch(format!("orientation disagrees at {:?}", b.labels(&image))));
                }
                covered += 1;
            }
        }
        if covered != signs.len() {
            return Err(Error::ComponentMismatch(format!(
                "{} of {} boundary simplices are accounted for",
                covered,
                signs.len()
            )));
        }
        Ok(())
    }

    fn boundary_data(&self, q_in: &GammaCochain, q_out: &GammaCochain) -> Result<GammaCochain> {
        let b = self.bulk.as_ref();
        let mut q = pushforward(q_in, &self.incoming, &self.source.boundary, b)?;
        q = q.add(&pushforward(q_out, &self.outgoing, &self.target.boundary, b)?)?;
        if let Some(r) = &self.residual {
            q = q.add(&pushforward(&r.data, &r.embedding, &r.boundary, b)?)?;
        }
        Ok(q)
    }
}

/// Entries `(Q_in, Q_out) ↦ μ_B Σ_{P ∈ E(B, Q_in ⊔ Q_out)} exp(iS(P))`.
#[derive(Clone, Debug)]
pub struct BordismMatrix {
    pub source: Arc<StateSpace>,
    pub target: Arc<StateSpace>,
    pub entries: Vec<Vec<PhaseSum>>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BordismReport {
    pub source_dim: usize,
    pub target_dim: usize,
    #[serde(serialize_with = "serde_exact::rational")]
    pub source_ip_scale: Rational,
    #[serde(serialize_with = "serde_exact::rational")]
    pub target_ip_scale: Rational,
    pub entries: Vec<Vec<PhaseSum>>,
}

impl BordismMatrix {
    pub fn report(&self) -> BordismReport {
        BordismReport {
            source_dim: self.source.dim(),
            target_dim: self.target.dim(),
            source_ip_scale: self.source.ip_scale.clone(),
            target_ip_scale: self.target.ip_scale.clone(),
            entries: self.entries.clone(),
        }
    }

    pub fn approx_eq(&self, other: &BordismMatrix, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
            })
    }
}

impl Bordism {
    pub fn matrix(&self, theory: &DwTheory) -> Result<BordismMatrix> {
        let bulk = Bulk::new(&self.bulk, theory)?;
        self.matrix_with(&bulk, false)
    }

    pub(crate) fn matrix_with(&self, bulk: &Bulk, diagonal_only: bool) -> Result<BordismMatrix> {
        let mut entries = Vec::with_capacity(self.source.dim());
        for (i, q_in) in self.source.basis.iter().enumerate() {
            let mut row = Vec::with_capacity(self.target.dim());
            for (j, q_out) in self.target.basis.iter().enumerate() {
                if diagonal_only && i != j {
                    row.push(PhaseSum::zero());
                    continue;
                }
                row.push(bulk.amplitude(Some(&self.boundary_data(q_in, q_out)?))?);
            }
            entries.push(row);
        }
        Ok(BordismMatrix {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            entries,
        })
    }
}

fn same_space(a: &StateSpace, b: &StateSpace) -> bool {
    a.basis == b.basis && a.ip_scale == b.ip_scale
}

/// `μ_N Σ_Q X(Q, Q)`; only diagonal entries are read.
pub fn trace_glue(x: &BordismMatrix) -> Result<PhaseSum> {
    if !same_space(&x.source, &x.target) {
        return Err(Error::ComponentMismatch("trace needs equal source and target".into()));
    }
    let mut total = PhaseSum::zero();
    for (i, row) in x.entries.iter().enumerate() {
        total = total.add(&row[i]);
    }
    Ok(total.scale(&x.source.ip_scale))
}

/// `(A ∘ B)(Q1, Q3) = μ_{N2} Σ_{Q2} A(Q1, Q2) B(Q2, Q3)`.
pub fn compose_bordisms(a: &BordismMatrix, b: &BordismMatrix) -> Result<BordismMatrix> {
    if !same_space(&a.target, &b.source) {
        return Err(Error::ComponentMismatch("middle state spaces differ".into()));
    }
    let scale = &a.target.ip_scale;
    let entries = a
        .entries
        .iter()
        .map(|row| {
            (0..b.target.dim())
                .map(|k| {
                    let mut total = PhaseSum::zero();
                    for (j, x) in row.iter().enumerate() {
                        total = total.add(&x.mul(&b.entries[j][k]));
                    }
                    total.scale(scale)
                })
                .collect()
        })
        .collect();
    Ok(BordismMatrix {
        source: Arc::clone(&a.source),
        target: Arc::clone(&b.target),
        entries,
    })
}
