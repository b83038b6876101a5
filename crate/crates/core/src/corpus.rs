//! Small triangulated manifolds used by the tests, the benchmarks and the
//! shipped `corpus/` directory.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::simplicial::{disjoint_union, product, Checks, GluingSpec, Triangulation, TriangulationSpec};

fn build(name: &str, vertices: Vec<String>, tops: Vec<Vec<usize>>, subs: &[(&str, Vec<Vec<usize>>)]) -> Triangulation {
    let spec = TriangulationSpec {
        name: name.into(),
        dim: None,
        oriented: false,
        vertices,
        top_simplices: tops,
        orientation: None,
        subcomplexes: subs.iter().map(|(n, s)| (n.to_string(), s.clone())).collect(),
    };
    Triangulation::new(spec, Checks::default())
        .expect("corpus complex is valid")
}

fn oriented(t: Triangulation) -> Triangulation {
    t.oriented_coherently().expect("corpus complex is orientable")
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub fn point() -> Triangulation {
    oriented(build("point", labels(1), vec![vec![0]], &[]))
}

/// `n` edges; `start`, `end` and an interior vertex `slice`.
pub fn interval(n: usize) -> Triangulation {
    assert!(n >= 2);
    let tops = (0..n).map(|i| vec![i, i + 1]).collect();
    oriented(build(
        &format!("interval{n}"),
        labels(n + 1),
        tops,
        &[("start", vec![vec![0]]), ("end", vec![vec![n]]), ("slice", vec![vec![1]])],
    ))
}

/// `interval(n)` with `end` glued onto `start`.
pub fn interval_glued(n: usize) -> Triangulation {
    let mut t = interval(n);
    t.set_gluing(Some(GluingSpec {
        plus: "end".into(),
        minus: "start".into(),
        vertex_map: BTreeMap::from([(n.to_string(), "0".to_string())]),
    }))
    .unwrap();
    t
}

/// Cycle on `n ≥ 3` vertices with the vertex `slice` = `0`.
pub fn circle(n: usize) -> Triangulation {
    assert!(n >= 3);
    let tops = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    oriented(build("circle", labels(n), tops, &[("slice", vec![vec![0]])])).with_name(format!("circle{n}"))
}

/// Boundary of the 3-simplex; `equator` is the boundary of face `012`.
pub fn sphere2() -> Triangulation {
    oriented(build(
        "sphere2",
        labels(4),
        vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
        &[("equator", vec![vec![0, 1], vec![1, 2], vec![0, 2]])],
    ))
}

/// Cone on a 3-cycle; the boundary circle is named `boundary`.
pub fn disk() -> Triangulation {
    oriented(build(
        "disk",
        vec!["0".into(), "1".into(), "2".into(), "c".into()],
        vec![vec![3, 0, 1], vec![3, 1, 2], vec![3, 2, 0]],
        &[("boundary", vec![vec![0, 1], vec![1, 2], vec![0, 2]])],
    ))
}

/// Two disks with opposite orientations, to be glued along their boundary
/// circles into a sphere.
pub fn two_disks() -> Triangulation {
    let a = disk();
    let b = disk().reversed();
    let mut t = disjoint_union(&a, &b).unwrap().with_name("two_disks");
    let vertex_map = ["0", "1", "2"]
        .iter()
        .map(|v| (format!("1/{v}"), format!("2/{v}")))
        .collect();
    t.set_gluing(Some(GluingSpec {
        plus: "1/boundary".into(),
        minus: "2/boundary".into(),
        vertex_map,
    }))
    .unwrap();
    t
}

/// `S¹ × S¹` from two 3-cycles: 9 vertices, 18 triangles. `slice` is
/// `{0} × S¹`.
pub fn torus2() -> Triangulation {
    product(&circle(3), &circle(3)).unwrap().with_name("torus2")
}

/// Möbius' 7-vertex torus.
pub fn torus7() -> Triangulation {
    let mut tops = Vec::new();
    for i in 0..7 {
        tops.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        tops.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    oriented(build(
        "torus7",
        labels(7),
        tops,
        &[("cycle", vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![5, 6], vec![0, 6]])],
    ))
}

/// Minimal 6-vertex real projective plane (non-orientable).
pub fn rp2() -> Triangulation {
    let tops = [
        [0, 1, 3],
        [0, 1, 5],
        [0, 2, 4],
        [0, 2, 5],
        [0, 3, 4],
        [1, 2, 3],
        [1, 2, 4],
        [1, 4, 5],
        [2, 3, 5],
        [3, 4, 5],
    ];
    build("rp2", labels(6), tops.iter().map(|t| t.to_vec()).collect(), &[])
}

/// `I₃ × S¹` with its gluing data: `end × S¹` onto `start × S¹`. `slice`
/// is the interior circle `{1} × S¹`.
pub fn cylinder() -> Triangulation {
    product(&interval_glued(3), &circle(3)).unwrap().with_name("cylinder")
}

pub fn torus3() -> Triangulation {
    product(&circle(3), &torus2()).unwrap().with_name("torus3")
}

/// `I₃ × T²` glued into `T³`.
pub fn slab() -> Triangulation {
    product(&interval_glued(3), &torus2()).unwrap().with_name("slab")
}

pub fn s2xs2() -> Triangulation {
    product(&sphere2(), &sphere2()).unwrap().with_name("s2xs2")
}

/// `torus2` with one orientation sign flipped and coherence checking off.
pub fn torus2_flipped() -> Triangulation {
    torus2().with_flipped_sign(0).with_name("torus2_flipped")
}

/// Every shipped complex, keyed by file stem.
pub fn all() -> Vec<(&'static str, Triangulation)> {
    vec![
        ("point", point()),
        ("interval", interval(3)),
        ("interval_glued", interval_glued(3)),
        ("circle", circle(3)),
        ("sphere2", sphere2()),
        ("disk", disk()),
        ("two_disks", two_disks()),
        ("torus2", torus2()),
        ("torus7", torus7()),
        ("rp2", rp2()),
        ("cylinder", cylinder()),
        ("torus3", torus3()),
        ("slab", slab()),
        ("s2xs2", s2xs2()),
        ("torus2_flipped", torus2_flipped()),
    ]
}

/// A complex by file stem.
pub fn by_name(name: &str) -> Result<Triangulation> {
    all()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t)
        .ok_or_else(|| crate::error::Error::Parse(format!("no corpus complex `{name}`")))
}
