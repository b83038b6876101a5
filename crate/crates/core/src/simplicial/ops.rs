use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{sort_parity, Checks, GluingSpec, Simplex, SimplicialMap, Subcomplex, Triangulation};
use crate::error::{Error, Result};

/// `∂M` as a triangulation with induced orientation, split into connected
/// components named `component0`, `component1`, … (ordered by smallest
/// vertex).
#[derive(Clone, Debug)]
pub struct Boundary {
    pub complex: Triangulation,
    /// `complex → M`
    pub inclusion: SimplicialMap,
    /// `∂M` as a subcomplex of `M`
    pub subcomplex: Subcomplex,
    pub components: Vec<String>,
}

impl Triangulation {
    /// Codimension-one faces with exactly one coface, with their induced
    /// signs, in sorted order.
    fn boundary_faces(&self) -> Vec<(Simplex, i8)> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut incidence: BTreeMap<Simplex, Vec<i8>> = BTreeMap::new();
        for (t, top) in self.simplices(self.dim()).iter().enumerate() {
            for i in 0..top.len() {
                let mut face = top.clone();
                face.remove(i);
                incidence.entry(face).or_default().push(self.induced_face_sign(t, i));
            }
        }
        incidence
            .into_iter()
            .filter(|(_, signs)| signs.len() == 1)
            .map(|(f, s)| (f, s[0]))
            .collect()
    }

    pub fn boundary_subcomplex(&self) -> Subcomplex {
        let faces: Vec<Vec<usize>> = self.boundary_faces().into_iter().map(|(f, _)| f).collect();
        self.closure_of(&faces).expect("boundary faces are simplices")
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_faces().is_empty()
    }

    pub fn boundary(&self) -> Result<Boundary> {
        let faces = self.boundary_faces();
        let bdim = self.dim().saturating_sub(1);
        let mut verts: BTreeSet<usize> = BTreeSet::new();
        for (f, _) in &faces {
            verts.extend(f.iter().copied());
        }
        let verts: Vec<usize> = verts.into_iter().collect();
        let local: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let facets: BTreeMap<Simplex, i8> = faces
            .iter()
            .map(|(f, s)| (f.iter().map(|v| local[v]).collect(), *s))
            .collect();
        let labels = verts.iter().map(|&v| self.vertices()[v].clone()).collect();
        let mut complex = Triangulation::from_facets(
            format!("boundary({})", self.name()),
            bdim,
            labels,
            &facets,
            self.is_oriented(),
        )?;
        complex.checks = Checks::NONE;
        let mut components = Vec::new();
        for (i, comp) in complex.components().into_iter().enumerate() {
            let name = format!("component{i}");
            let sub = complex.induced_on_vertices(&comp);
            complex.add_subcomplex(name.clone(), sub);
            components.push(name);
        }
        let subcomplex = self.closure_of(&faces.into_iter().map(|(f, _)| f).collect::<Vec<_>>())?;
        Ok(Boundary {
            complex,
            inclusion: SimplicialMap::new(verts),
            subcomplex,
            components,
        })
    }
}

impl Boundary {
    /// One boundary component as a standalone triangulation, with its
    /// inclusion into `M`.
    pub fn component(&self, name: &str) -> Result<(Triangulation, SimplicialMap)> {
        let sub = self.complex.subcomplex(name)?;
        let (tri, map) = self.complex.extract(sub, name)?;
        Ok((tri, map.compose(&self.inclusion)))
    }
}

/// Result of identifying the two gluing components of `M_N`.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub glued: Triangulation,
    /// `π: M_N → M`
    pub projection: SimplicialMap,
    pub spec: GluingSpec,
}

fn check_component(tri: &Triangulation, sub: &Subcomplex, boundary: &Subcomplex, name: &str) -> Result<()> {
    for k in 0..=tri.dim() {
        if sub.members(k).any(|i| !boundary.contains(k, i)) {
            return Err(Error::Gluing(format!("`{name}` is not contained in the boundary")));
        }
    }
    Ok(())
}

/// Quotient of `M_N` identifying the `plus` and `minus` components via
/// the vertex bijection. Vertices of the `minus` component disappear; the
/// remaining vertices keep their relative order.
pub fn glue(mn: &Triangulation, spec: &GluingSpec) -> Result<Gluing> {
    let plus = mn.subcomplex(&spec.plus)?;
    let minus = mn.subcomplex(&spec.minus)?;
    let boundary = mn.boundary_subcomplex();
    check_component(mn, plus, &boundary, &spec.plus)?;
    check_component(mn, minus, &boundary, &spec.minus)?;
    if plus.intersects(minus) {
        return Err(Error::Gluing("glued components intersect".into()));
    }

    let plus_verts: BTreeSet<usize> = plus.vertices().into_iter().collect();
    let minus_verts: BTreeSet<usize> = minus.vertices().into_iter().collect();
    let lookup = |label: &str| {
        mn.vertex_index(label)
            .ok_or_else(|| Error::Gluing(format!("unknown vertex label `{label}`")))
    };
    // minus vertex ↦ plus vertex
    let mut to_plus: BTreeMap<usize, usize> = BTreeMap::new();
    let mut plus_seen = BTreeSet::new();
    for (p, m) in &spec.vertex_map {
        let (p, m) = (lookup(p)?, lookup(m)?);
        if !plus_verts.contains(&p) || !minus_verts.contains(&m) {
            return Err(Error::Gluing(format!(
                "vertex map entry {} ↦ {} leaves its component",
                mn.vertices()[p],
                mn.vertices()[m]
            )));
        }
        if to_plus.insert(m, p).is_some() || !plus_seen.insert(p) {
            return Err(Error::Gluing("vertex map is not injective".into()));
        }
    }
    if to_plus.len() != minus_verts.len() || plus_seen.len() != plus_verts.len() {
        return Err(Error::Gluing("vertex map is not a bijection between the components".into()));
    }

    // the bijection must carry plus simplices onto minus simplices, order
    // preserved, with opposite induced orientation
    let plus_to_minus: BTreeMap<usize, usize> = to_plus.iter().map(|(&m, &p)| (p, m)).collect();
    let bdim = mn.dim().saturating_sub(1);
    let mut induced: HashMap<Simplex, i8> = HashMap::new();
    if mn.dim() > 0 {
        for (t, top) in mn.simplices(mn.dim()).iter().enumerate() {
            for i in 0..top.len() {
                let mut face = top.clone();
                face.remove(i);
                induced.insert(face, mn.induced_face_sign(t, i));
            }
        }
    }
    for k in 0..=bdim.min(mn.dim()) {
        if plus.count(k) != minus.count(k) {
            return Err(Error::Gluing(format!("components differ in the number of {k}-simplices")));
        }
        for i in plus.members(k) {
            let s = &mn.simplices(k)[i];
            let img: Vec<usize> = s.iter().map(|v| plus_to_minus[v]).collect();
            if sort_parity(&img) != 1 {
                return Err(Error::Gluing(format!(
                    "vertex map does not preserve the vertex order on {:?}",
                    mn.labels(s)
                )));
            }
            let j = mn
                .simplex_index(&img)
                .filter(|&j| minus.contains(k, j))
                .ok_or_else(|| Error::Gluing(format!("image of {:?} is not in `{}`", mn.labels(s), spec.minus)))?;
            if mn.is_oriented() && k == bdim && mn.dim() > 0 {
                let sp = induced[s];
                let sm = induced[&mn.simplices(k)[j]];
                if sp == sm {
                    return Err(Error::Gluing(format!(
                        "components carry the same induced orientation at {:?}",
                        mn.labels(s)
                    )));
                }
            }
        }
    }

    let mut new_index = vec![usize::MAX; mn.vertices().len()];
    let mut labels = Vec::new();
    for (v, label) in mn.vertices().iter().enumerate() {
        if !minus_verts.contains(&v) {
            new_index[v] = labels.len();
            labels.push(label.clone());
        }
    }
    for (&m, &p) in &to_plus {
        new_index[m] = new_index[p];
    }
    let projection = SimplicialMap::new(new_index);

    let mut facets: BTreeMap<Simplex, i8> = BTreeMap::new();
    for (t, top) in mn.simplices(mn.dim()).iter().enumerate() {
        let (img, parity) = projection.image(top);
        if parity == 0 {
            return Err(Error::DegenerateGluing(mn.labels(top)));
        }
        if facets.insert(img, mn.top_signs()[t] * parity).is_some() {
            return Err(Error::Gluing(format!(
                "two top simplices are identified (at {:?})",
                mn.labels(top)
            )));
        }
    }
    let mut glued = Triangulation::from_facets(
        format!("{}/glued", mn.name()),
        mn.dim(),
        labels,
        &facets,
        mn.is_oriented(),
    )?;
    for k in 0..=mn.dim() {
        for s in mn.simplices(k) {
            if projection.image(s).1 == 0 {
                return Err(Error::DegenerateGluing(mn.labels(s)));
            }
        }
        if glued.count(k) + minus.count(k) != mn.count(k) {
            return Err(Error::Gluing(format!(
                "quotient identifies {k}-simplices outside the glued components"
            )));
        }
    }
    for (name, sub) in mn.subcomplexes() {
        if name == &spec.minus {
            continue;
        }
        let mut image = Subcomplex::empty(&glued);
        for k in 0..=mn.dim() {
            for i in sub.members(k) {
                let (img, _) = projection.image(&mn.simplices(k)[i]);
                image.insert(k, glued.simplex_index(&img).expect("image simplex exists"));
            }
        }
        glued.add_subcomplex(name.clone(), image);
    }
    glued.checks = mn.checks();
    glued.validate()?;
    Ok(Gluing {
        glued,
        projection,
        spec: spec.clone(),
    })
}

/// `M1 ⊔ M2`. Labels are prefixed `1/` and `2/`; an empty operand is the
/// unit and returns the other side unchanged.
pub fn disjoint_union(a: &Triangulation, b: &Triangulation) -> Result<Triangulation> {
    if b.is_empty() {
        return Ok(a.clone());
    }
    if a.is_empty() {
        return Ok(b.clone());
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot form {} ⊔ {} of dimensions {} and {}",
            a.name(),
            b.name(),
            a.dim(),
            b.dim()
        )));
    }
    let offset = a.vertices().len();
    let mut labels: Vec<String> = a.vertices().iter().map(|l| format!("1/{l}")).collect();
    labels.extend(b.vertices().iter().map(|l| format!("2/{l}")));
    let mut facets: BTreeMap<Simplex, i8> = BTreeMap::new();
    for (s, &sign) in a.simplices(a.dim()).iter().zip(a.top_signs()) {
        facets.insert(s.clone(), sign);
    }
    for (s, &sign) in b.simplices(b.dim()).iter().zip(b.top_signs()) {
        facets.insert(s.iter().map(|v| v + offset).collect(), sign);
    }
    let mut out = Triangulation::from_facets(
        format!("{}+{}", a.name(), b.name()),
        a.dim(),
        labels,
        &facets,
        a.is_oriented() && b.is_oriented(),
    )?;
    for (prefix, tri, shift) in [("1/", a, 0), ("2/", b, offset)] {
        for (name, sub) in tri.subcomplexes() {
            let mut listed = Vec::new();
            for k in 0..=tri.dim() {
                for i in sub.members(k) {
                    listed.push(tri.simplices(k)[i].iter().map(|v| v + shift).collect());
                }
            }
            let image = out.closure_of(&listed)?;
            out.add_subcomplex(format!("{prefix}{name}"), image);
        }
    }
    out.checks = Checks {
        manifold: a.checks().manifold && b.checks().manifold,
        orientation: a.checks().orientation && b.checks().orientation,
    };
    Ok(out)
}

/// Monotone lattice paths from `(0,0)` to `(p,q)` with the sign of the
/// corresponding shuffle.
fn staircase_paths(p: usize, q: usize) -> Vec<(Vec<(usize, usize)>, i8)> {
    let mut out = Vec::new();
    let total = p + q;
    // choose which of the `total` steps advance the first factor
    for mask in 0u64..(1u64 << total) {
        if mask.count_ones() as usize != p {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut path = vec![(0, 0)];
        let mut second_steps_seen = 0usize;
        let mut inversions = 0usize;
        for step in 0..total {
            if mask >> step & 1 == 1 {
                i += 1;
                inversions += second_steps_seen;
            } else {
                j += 1;
                second_steps_seen += 1;
            }
            path.push((i, j));
        }
        out.push((path, if inversions % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// Staircase triangulation of `M1 × M2` over the lexicographic order on
/// vertex pairs. Named subcomplexes and a gluing specification of either
/// factor are carried over as products with the other factor.
pub fn product(a: &Triangulation, b: &Triangulation) -> Result<Triangulation> {
    let nb = b.vertices().len();
    let pair = |x: usize, y: usize| x * nb + y;
    let mut labels = Vec::with_capacity(a.vertices().len() * nb);
    for la in a.vertices() {
        for lb in b.vertices() {
            labels.push(format!("{la}.{lb}"));
        }
    }
    let (p, q) = (a.dim(), b.dim());
    let paths = staircase_paths(p, q);
    let mut facets: BTreeMap<Simplex, i8> = BTreeMap::new();
    for (sa, &ea) in a.simplices(p).iter().zip(a.top_signs()) {
        for (sb, &eb) in b.simplices(q).iter().zip(b.top_signs()) {
            for (path, shuffle) in &paths {
                let simplex: Simplex = path.iter().map(|&(i, j)| pair(sa[i], sb[j])).collect();
                facets.insert(simplex, ea * eb * shuffle);
            }
        }
    }
    let mut out = Triangulation::from_facets(
        format!("{}x{}", a.name(), b.name()),
        p + q,
        labels,
        &facets,
        a.is_oriented() && b.is_oriented(),
    )?;
    // carry named subcomplexes: S ⊂ M1 gives S × M2, T ⊂ M2 gives M1 × T
    let project = |s: &Simplex, first: bool| -> Simplex {
        let mut v: Vec<usize> = s.iter().map(|&x| if first { x / nb } else { x % nb }).collect();
        v.dedup();
        if !first {
            v.sort_unstable();
            v.dedup();
        }
        v
    };
    let carried: Vec<(String, bool, &Triangulation, &Subcomplex)> = a
        .subcomplexes()
        .iter()
        .map(|(n, s)| (n.clone(), true, a, s))
        .chain(
            b.subcomplexes()
                .iter()
                .filter(|(n, _)| !a.subcomplexes().contains_key(*n))
                .map(|(n, s)| (n.clone(), false, b, s)),
        )
        .collect();
    for (name, first, factor, sub) in carried {
        let mut image = Subcomplex::empty(&out);
        for k in 0..=out.dim() {
            for (i, s) in out.simplices(k).iter().enumerate() {
                let proj = project(s, first);
                let keep = factor
                    .simplex_index(&proj)
                    .is_some_and(|idx| sub.contains(proj.len() - 1, idx));
                if keep {
                    image.insert(k, i);
                }
            }
        }
        out.add_subcomplex(name, image);
    }
    let carried_gluing = a
        .gluing()
        .map(|g| (g, true, a))
        .or_else(|| b.gluing().map(|g| (g, false, b)));
    if let Some((g, first, factor)) = carried_gluing {
        let mut vertex_map = BTreeMap::new();
        for (lp, lm) in &g.vertex_map {
            let (vp, vm) = (factor.vertex_index(lp).unwrap(), factor.vertex_index(lm).unwrap());
            let other = if first { b.vertices() } else { a.vertices() };
            for lo in other {
                let (kp, km) = if first {
                    (format!("{}.{lo}", factor.vertices()[vp]), format!("{}.{lo}", factor.vertices()[vm]))
                } else {
                    (format!("{lo}.{}", factor.vertices()[vp]), format!("{lo}.{}", factor.vertices()[vm]))
                };
                vertex_map.insert(kp, km);
            }
        }
        out.set_gluing(Some(GluingSpec {
            plus: g.plus.clone(),
            minus: g.minus.clone(),
            vertex_map,
        }))?;
    }
    out.checks = Checks {
        manifold: a.checks().manifold && b.checks().manifold,
        orientation: a.checks().orientation && b.checks().orientation,
    };
    out.validate()?;
    Ok(out)
}

impl Triangulation {
    /// Same complex with coherent orientation signs: the first top simplex
    /// of each connected piece keeps `+1`, the rest follow across shared
    /// faces. Fails on non-orientable complexes.
    pub fn oriented_coherently(&self) -> Result<Triangulation> {
        let top = self.simplices(self.dim());
        let mut adjacency: Vec<Vec<(usize, i8)>> = vec![Vec::new(); top.len()];
        let mut incidence: BTreeMap<Simplex, Vec<(usize, usize)>> = BTreeMap::new();
        if self.dim() > 0 {
            for (t, s) in top.iter().enumerate() {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    incidence.entry(face).or_default().push((t, i));
                }
            }
        }
        for cofaces in incidence.values() {
            if let [(t1, i1), (t2, i2)] = cofaces.as_slice() {
                // induced signs must be opposite: s2 = -s1 (-1)^{i1+i2}
                let rel = if (i1 + i2) % 2 == 0 { -1 } else { 1 };
                adjacency[*t1].push((*t2, rel));
                adjacency[*t2].push((*t1, rel));
            }
        }
        let mut signs = vec![0i8; top.len()];
        for start in 0..top.len() {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for &(u, rel) in &adjacency[t] {
                    let want = signs[t] * rel;
                    if signs[u] == 0 {
                        signs[u] = want;
                        stack.push(u);
                    } else if signs[u] != want {
                        return Err(Error::OrientationIncoherent {
                            name: self.name().to_string(),
                            face: self.labels(&top[u]),
                        });
                    }
                }
            }
        }
        let mut out = self.clone();
        out.set_signs(signs, true);
        out.checks.orientation = true;
        out.validate()?;
        Ok(out)
    }

    /// A boundary subcomplex as a standalone triangulation carrying the
    /// induced (outward normal first) orientation, with its inclusion.
    pub fn boundary_piece(&self, sub: &Subcomplex, name: &str) -> Result<(Triangulation, SimplicialMap)> {
        let boundary = self.boundary()?;
        let mut local = Subcomplex::empty(&boundary.complex);
        for k in 0..=boundary.complex.dim() {
            for (i, s) in boundary.complex.simplices(k).iter().enumerate() {
                let (img, _) = boundary.inclusion.image(s);
                if self.simplex_index(&img).is_some_and(|j| sub.contains(k, j)) {
                    local.insert(k, i);
                }
            }
            if local.count(k) != sub.count(k) {
                return Err(Error::ComponentMismatch(format!("`{name}` is not part of the boundary")));
            }
        }
        let (mut tri, map) = boundary.complex.extract(&local, name)?;
        tri.checks = Checks::default();
        if !tri.is_empty() && tri.dim() + 1 != self.dim() {
            return Err(Error::ComponentMismatch(format!("`{name}` is not of codimension one")));
        }
        Ok((tri, map.compose(&boundary.inclusion)))
    }
}

impl Triangulation {
    /// Induced orientation sign of every codimension-one boundary simplex.
    pub fn boundary_signs(&self) -> HashMap<Simplex, i8> {
        self.boundary_faces().into_iter().collect()
    }
}
