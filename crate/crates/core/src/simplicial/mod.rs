//! Ordered simplicial complexes with orientation and named subcomplexes.
//!
//! The vertex list fixes a global total order; every simplex is stored as
//! its sorted vertex tuple. Orientation is a sign per top simplex relative
//! to that sorted tuple.

mod coboundary;
mod io;
mod ops;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

pub use coboundary::{coboundary_matrix, Pair};
pub use io::{GluingDocument, TriangulationDocument};
pub use ops::{disjoint_union, glue, product, Boundary, Gluing};

use crate::error::{Error, Result};

pub type Simplex = Vec<usize>;

/// Sign of the permutation sorting `v` (`0` when `v` has repeats).
pub fn sort_parity(v: &[usize]) -> i8 {
    let mut sign = 1i8;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            match v[i].cmp(&v[j]) {
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

/// Which structural checks run at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checks {
    pub manifold: bool,
    pub orientation: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Checks {
            manifold: true,
            orientation: true,
        }
    }
}

impl Checks {
    pub const NONE: Checks = Checks {
        manifold: false,
        orientation: false,
    };
}

/// Input to [`Triangulation::new`]: facets may be listed in any vertex
/// order; the parity of that order multiplies the given sign.
#[derive(Clone, Debug, Default)]
pub struct TriangulationSpec {
    pub name: String,
    pub dim: Option<usize>,
    pub oriented: bool,
    pub vertices: Vec<String>,
    pub top_simplices: Vec<Vec<usize>>,
    pub orientation: Option<Vec<i8>>,
    pub subcomplexes: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    name: String,
    dim: usize,
    oriented: bool,
    vertices: Vec<String>,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    /// sign per simplex of `simplices[dim]`
    signs: Vec<i8>,
    subcomplexes: BTreeMap<String, Subcomplex>,
    gluing: Option<GluingSpec>,
    checks: Checks,
}

/// Identification of two boundary components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingSpec {
    pub plus: String,
    pub minus: String,
    /// plus-component label ↦ minus-component label
    pub vertex_map: BTreeMap<String, String>,
}

impl Triangulation {
    pub fn new(spec: TriangulationSpec, checks: Checks) -> Result<Self> {
        let TriangulationSpec {
            name,
            dim,
            oriented,
            vertices,
            top_simplices,
            orientation,
            subcomplexes,
        } = spec;
        let invalid = |reason: String| Error::InvalidComplex {
            name: name.clone(),
            reason,
        };
        {
            let mut seen = BTreeSet::new();
            for v in &vertices {
                if !seen.insert(v) {
                    return Err(invalid(format!("duplicate vertex label `{v}`")));
                }
            }
        }
        let inferred = top_simplices.iter().map(|s| s.len().saturating_sub(1)).max();
        let dim = match (dim, inferred) {
            (Some(d), _) => d,
            (None, Some(d)) => d,
            (None, None) => 0,
        };
        if let Some(o) = &orientation {
            if o.len() != top_simplices.len() {
                return Err(invalid(format!(
                    "{} orientation signs for {} top simplices",
                    o.len(),
                    top_simplices.len()
                )));
            }
            if o.iter().any(|&s| s != 1 && s != -1) {
                return Err(invalid("orientation signs must be ±1".into()));
            }
        }
        let mut facets: BTreeMap<Simplex, i8> = BTreeMap::new();
        for (k, raw) in top_simplices.iter().enumerate() {
            if raw.len() != dim + 1 {
                return Err(invalid(format!(
                    "top simplex {raw:?} has {} vertices, expected {}",
                    raw.len(),
                    dim + 1
                )));
            }
            if let Some(&bad) = raw.iter().find(|&&v| v >= vertices.len()) {
                return Err(invalid(format!("vertex index {bad} out of range")));
            }
            let parity = sort_parity(raw);
            if parity == 0 {
                return Err(invalid(format!("top simplex {raw:?} repeats a vertex")));
            }
            let mut sorted = raw.clone();
            sorted.sort_unstable();
            let sign = parity * orientation.as_ref().map_or(1, |o| o[k]);
            if facets.insert(sorted, sign).is_some() {
                return Err(invalid(format!("top simplex {raw:?} listed twice")));
            }
        }
        let mut tri = Self::from_facets(name, dim, vertices, &facets, oriented)?;
        for (sub_name, listed) in subcomplexes {
            let sub = tri.closure_of(&listed)?;
            tri.subcomplexes.insert(sub_name, sub);
        }
        tri.checks = checks;
        tri.validate()?;
        Ok(tri)
    }

    /// Builds the closure of the given sorted facets (all of dimension `dim`).
    pub(crate) fn from_facets(
        name: String,
        dim: usize,
        vertices: Vec<String>,
        facets: &BTreeMap<Simplex, i8>,
        oriented: bool,
    ) -> Result<Self> {
        let mut by_dim: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
        for i in 0..vertices.len() {
            by_dim[0].insert(vec![i]);
        }
        for facet in facets.keys() {
            if facet.len() != dim + 1 {
                return Err(Error::InvalidComplex {
                    name,
                    reason: format!("facet {facet:?} is not {dim}-dimensional"),
                });
            }
            add_faces(facet, &mut by_dim);
        }
        let simplices: Vec<Vec<Simplex>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let signs = simplices[dim].iter().map(|s| facets.get(s).copied().unwrap_or(1)).collect();
        Ok(Triangulation {
            name,
            dim,
            oriented,
            vertices,
            simplices,
            index,
            signs,
            subcomplexes: BTreeMap::new(),
            gluing: None,
            checks: Checks::default(),
        })
    }

    pub fn empty(name: impl Into<String>, dim: usize) -> Self {
        Self::from_facets(name.into(), dim, Vec::new(), &BTreeMap::new(), true)
            .expect("empty complex is valid")
    }

    fn validate(&self) -> Result<()> {
        if self.checks.manifold || (self.oriented && self.checks.orientation) {
            let faces = self.facet_incidence();
            for (face, cofaces) in &faces {
                if self.checks.manifold && cofaces.len() > 2 {
                    return Err(Error::NonManifold {
                        name: self.name.clone(),
                        face: self.labels(face),
                        cofaces: cofaces.len(),
                    });
                }
                if self.oriented && self.checks.orientation && cofaces.len() == 2 && cofaces[0].1 == cofaces[1].1 {
                    return Err(Error::OrientationIncoherent {
                        name: self.name.clone(),
                        face: self.labels(face),
                    });
                }
            }
        }
        if let Some(g) = &self.gluing {
            self.subcomplex(&g.plus)?;
            self.subcomplex(&g.minus)?;
        }
        Ok(())
    }

    /// For each codimension-one face, its top cofaces with induced signs.
    fn facet_incidence(&self) -> BTreeMap<Simplex, Vec<(usize, i8)>> {
        let mut out: BTreeMap<Simplex, Vec<(usize, i8)>> = BTreeMap::new();
        if self.dim == 0 {
            return out;
        }
        for (t, top) in self.simplices[self.dim].iter().enumerate() {
            for i in 0..top.len() {
                let mut face = top.clone();
                face.remove(i);
                let sign = self.signs[t] * if i % 2 == 0 { 1 } else { -1 };
                out.entry(face).or_default().push((t, sign));
            }
        }
        out
    }

    /// Closure of a list of simplices (vertex indices, any order).
    pub fn closure_of(&self, listed: &[Vec<usize>]) -> Result<Subcomplex> {
        let mut sub = Subcomplex::empty(self);
        for raw in listed {
            let mut s = raw.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != raw.len() || s.is_empty() || s.len() > self.dim + 1 {
                return Err(Error::InvalidComplex {
                    name: self.name.clone(),
                    reason: format!("bad subcomplex simplex {raw:?}"),
                });
            }
            if !self.contains(&s) {
                let labels = raw
                    .iter()
                    .map(|&v| self.vertices.get(v).cloned().unwrap_or_else(|| format!("#{v}")))
                    .collect();
                return Err(Error::SimplexNotInComplex(labels));
            }
            let mut levels: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); s.len()];
            add_faces(&s, &mut levels);
            for (k, level) in levels.iter().enumerate() {
                for face in level {
                    sub.insert(k, self.index[k][face]);
                }
            }
        }
        Ok(sub)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    pub fn checks(&self) -> Checks {
        self.checks
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn labels(&self, simplex: &[usize]) -> Vec<String> {
        simplex.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// Sorted `k`-simplices; empty beyond the dimension.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn total_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn simplex_index(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.simplex_index(simplex).is_some()
    }

    /// Orientation signs of the top simplices, aligned with `simplices(dim)`.
    pub fn top_signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    pub fn subcomplexes(&self) -> &BTreeMap<String, Subcomplex> {
        &self.subcomplexes
    }

    pub fn subcomplex(&self, name: &str) -> Result<&Subcomplex> {
        self.subcomplexes
            .get(name)
            .ok_or_else(|| Error::UnknownSubcomplex(name.to_string()))
    }

    pub fn add_subcomplex(&mut self, name: impl Into<String>, sub: Subcomplex) {
        self.subcomplexes.insert(name.into(), sub);
    }

    pub fn gluing(&self) -> Option<&GluingSpec> {
        self.gluing.as_ref()
    }

    pub fn set_gluing(&mut self, spec: Option<GluingSpec>) -> Result<()> {
        if let Some(g) = &spec {
            self.subcomplex(&g.plus)?;
            self.subcomplex(&g.minus)?;
        }
        self.gluing = spec;
        Ok(())
    }

    /// Same complex with every orientation sign flipped.
    pub fn reversed(&self) -> Triangulation {
        let mut out = self.clone();
        for s in &mut out.signs {
            *s = -*s;
        }
        out
    }

    /// Flips a single top-simplex sign with coherence checking switched off.
    /// Only useful for building negative controls.
    pub fn with_flipped_sign(&self, top: usize) -> Triangulation {
        let mut out = self.clone();
        out.signs[top] = -out.signs[top];
        out.checks.orientation = false;
        out
    }

    pub fn set_checks(&mut self, checks: Checks) -> Result<()> {
        self.checks = checks;
        self.validate()
    }

    /// Connected components as vertex sets, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// The full subcomplex on a vertex set.
    pub fn induced_on_vertices(&self, verts: &[usize]) -> Subcomplex {
        let keep: BTreeSet<usize> = verts.iter().copied().collect();
        let mut sub = Subcomplex::empty(self);
        for (k, level) in self.simplices.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                if s.iter().all(|v| keep.contains(v)) {
                    sub.insert(k, i);
                }
            }
        }
        sub
    }

    /// The subcomplex as a triangulation in its own right, with the
    /// inclusion map. Orientation signs are carried over when the
    /// subcomplex is pure of full dimension; otherwise the result is
    /// unoriented unless an orientation is supplied afterwards.
    pub fn extract(&self, sub: &Subcomplex, name: impl Into<String>) -> Result<(Triangulation, SimplicialMap)> {
        let verts: Vec<usize> = (0..self.vertices.len()).filter(|&v| sub.contains(0, v)).collect();
        let local: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let sub_dim = (0..=self.dim).rev().find(|&k| sub.count(k) > 0).unwrap_or(0);
        let mut covered: BTreeSet<Simplex> = BTreeSet::new();
        for k in 1..=sub_dim {
            for j in sub.members(k) {
                let t = &self.simplices[k][j];
                for i in 0..t.len() {
                    let mut face = t.clone();
                    face.remove(i);
                    covered.insert(face);
                }
            }
        }
        let mut facets: BTreeMap<Simplex, i8> = BTreeMap::new();
        let mut pure = true;
        for k in 0..=sub_dim {
            for i in sub.members(k) {
                let s = &self.simplices[k][i];
                if covered.contains(s) {
                    continue;
                }
                if k != sub_dim {
                    pure = false;
                    continue;
                }
                let sign = if sub_dim == self.dim { self.signs[i] } else { 1 };
                facets.insert(s.iter().map(|v| local[v]).collect(), sign);
            }
        }
        if !pure {
            return Err(Error::InvalidComplex {
                name: self.name.clone(),
                reason: "extracted subcomplex is not pure".into(),
            });
        }
        let labels = verts.iter().map(|&v| self.vertices[v].clone()).collect();
        let oriented = self.oriented && sub_dim == self.dim;
        let mut tri = Self::from_facets(name.into(), sub_dim, labels, &facets, oriented)?;
        tri.checks = Checks::NONE;
        let map = SimplicialMap::new(verts);
        Ok((tri, map))
    }

    pub(crate) fn set_signs(&mut self, signs: Vec<i8>, oriented: bool) {
        assert_eq!(signs.len(), self.count(self.dim));
        self.signs = signs;
        self.oriented = oriented;
    }

    /// Induced sign on a codimension-one face of a top simplex: outward
    /// normal first.
    pub(crate) fn induced_face_sign(&self, top: usize, omitted: usize) -> i8 {
        self.signs[top] * if omitted % 2 == 0 { 1 } else { -1 }
    }
}

fn add_faces(s: &[usize], by_dim: &mut [BTreeSet<Simplex>]) {
    let n = s.len();
    for mask in 1u64..(1u64 << n) {
        let face: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
        by_dim[face.len() - 1].insert(face);
    }
}

/// A set of simplices of a fixed triangulation, one membership mask per
/// dimension. Built closed under faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    mask: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub fn empty(tri: &Triangulation) -> Self {
        Subcomplex {
            mask: (0..=tri.dim).map(|k| vec![false; tri.count(k)]).collect(),
        }
    }

    pub fn full(tri: &Triangulation) -> Self {
        Subcomplex {
            mask: (0..=tri.dim).map(|k| vec![true; tri.count(k)]).collect(),
        }
    }

    pub fn insert(&mut self, k: usize, idx: usize) {
        self.mask[k][idx] = true;
    }

    pub fn contains(&self, k: usize, idx: usize) -> bool {
        self.mask.get(k).and_then(|m| m.get(idx)).copied().unwrap_or(false)
    }

    pub fn count(&self, k: usize) -> usize {
        self.mask.get(k).map_or(0, |m| m.iter().filter(|&&b| b).count())
    }

    pub fn members(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .get(k)
            .into_iter()
            .flat_map(|m| m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    pub fn is_empty(&self) -> bool {
        self.mask.iter().all(|m| m.iter().all(|&b| !b))
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            mask: self
                .mask
                .iter()
                .zip(&other.mask)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x || y).collect())
                .collect(),
        }
    }

    pub fn intersects(&self, other: &Subcomplex) -> bool {
        self.mask
            .iter()
            .zip(&other.mask)
            .any(|(a, b)| a.iter().zip(b).any(|(&x, &y)| x && y))
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.members(0).collect()
    }
}

/// A simplicial map given on vertices (source vertex index ↦ target index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(vertex_map: Vec<usize>) -> Self {
        SimplicialMap { vertex_map }
    }

    pub fn identity(n: usize) -> Self {
        SimplicialMap {
            vertex_map: (0..n).collect(),
        }
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn compose(&self, then: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            vertex_map: self.vertex_map.iter().map(|&v| then.vertex_map[v]).collect(),
        }
    }

    /// Image of a simplex as `(sorted image, parity)`; parity 0 if degenerate.
    pub fn image(&self, simplex: &[usize]) -> (Simplex, i8) {
        let raw: Vec<usize> = simplex.iter().map(|&v| self.vertex_map[v]).collect();
        let parity = sort_parity(&raw);
        let mut sorted = raw;
        sorted.sort_unstable();
        (sorted, parity)
    }

    /// For each `k`-simplex of `source`: the index of its image in `target`
    /// and the sign of the reordering. Degenerate images map to sign 0.
    pub fn simplex_table(&self, source: &Triangulation, target: &Triangulation, k: usize) -> Result<Vec<(usize, i8)>> {
        source
            .simplices(k)
            .iter()
            .map(|s| {
                let (img, parity) = self.image(s);
                if parity == 0 {
                    return Ok((0, 0));
                }
                target
                    .simplex_index(&img)
                    .map(|i| (i, parity))
                    .ok_or_else(|| Error::SimplexNotInComplex(target.labels(&img)))
            })
            .collect()
    }

    /// Signed pullback of residues mod `m` from `target` to `source`.
    pub fn pullback_values(&self, source: &Triangulation, target: &Triangulation, k: usize, values: &[u64], m: u64) -> Result<Vec<u64>> {
        let table = self.simplex_table(source, target, k)?;
        Ok(table
            .into_iter()
            .map(|(i, sign)| match sign {
                0 => 0,
                1 => values[i] % m,
                _ => (m - values[i] % m) % m,
            })
            .collect())
    }

    /// Signed push-forward along an injective map; zero off the image.
    pub fn pushforward_values(&self, source: &Triangulation, target: &Triangulation, k: usize, values: &[u64], m: u64) -> Result<Vec<u64>> {
        let table = self.simplex_table(source, target, k)?;
        let mut out = vec![0u64; target.count(k)];
        for (j, (i, sign)) in table.into_iter().enumerate() {
            match sign {
                0 => {
                    return Err(Error::DimensionMismatch(
                        "push-forward along a map that collapses a simplex".into(),
                    ))
                }
                1 => out[i] = values[j] % m,
                _ => out[i] = (m - values[j] % m) % m,
            }
        }
        Ok(out)
    }

    /// Image of the whole source as a subcomplex of the target.
    pub fn image_subcomplex(&self, source: &Triangulation, target: &Triangulation) -> Result<Subcomplex> {
        let mut sub = Subcomplex::empty(target);
        for k in 0..=source.dim() {
            for (i, sign) in self.simplex_table(source, target, k)? {
                if sign != 0 {
                    sub.insert(k, i);
                }
            }
        }
        Ok(sub)
    }
}

pub type SharedTriangulation = Arc<Triangulation>;
