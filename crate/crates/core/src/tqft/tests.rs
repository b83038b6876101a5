use std::sync::Arc;

use super::*;
use crate::action::ActionSpec;
use crate::arith::rational;
use crate::cohomology::pushforward;
use crate::corpus;
use crate::simplicial::{disjoint_union, glue, GluingSpec, SimplicialMap};

fn arc(t: Triangulation) -> Arc<Triangulation> {
    Arc::new(t)
}

fn real(r: Rational) -> PhaseSum {
    PhaseSum::from_rational(r)
}

#[test]
fn closed_partition_functions() {
    for n in 2..=4u64 {
        let th = DwTheory::untwisted(1, n);
        let n_i = n as i64;
        assert_eq!(partition_closed(&arc(corpus::circle(3)), &th).unwrap(), PhaseSum::one());
        assert_eq!(partition_closed(&arc(corpus::sphere2()), &th).unwrap(), real(rational(1, n_i)));
        assert_eq!(partition_closed(&arc(corpus::torus2()), &th).unwrap(), real(rational(n_i, 1)));
    }
    let th = DwTheory::untwisted(1, 2);
    assert_eq!(partition_closed(&arc(corpus::torus3()), &th).unwrap(), real(rational(4, 1)));
    let th = DwTheory::untwisted(2, 2);
    assert_eq!(partition_closed(&arc(corpus::torus2()), &th).unwrap(), PhaseSum::one());
}

#[test]
fn untwisted_values_agree_with_orders() {
    let th = DwTheory::untwisted(1, 3);
    for t in [corpus::torus2(), corpus::sphere2(), corpus::rp2(), corpus::torus7()] {
        let t = arc(t);
        let z = partition_closed(&t, &th).unwrap();
        assert_eq!(z.as_rational().unwrap(), untwisted_partition_from_orders(&t, &th), "{}", t.name());
    }
}

#[test]
fn open_manifold_is_rejected() {
    let th = DwTheory::untwisted(1, 2);
    assert!(matches!(partition_closed(&arc(corpus::disk()), &th), Err(Error::NotClosed(_))));
    assert!(matches!(state_space(&arc(corpus::disk()), &th), Err(Error::NotClosed(_))));
}

#[test]
fn state_spaces() {
    let th = DwTheory::untwisted(1, 3);
    let s1 = arc(corpus::circle(3));
    let v = state_space(&s1, &th).unwrap();
    assert_eq!(v.dim(), 3);
    assert_eq!(v.ip_scale, rational(1, 3));

    let empty = arc(Triangulation::empty("empty", 1));
    let v = state_space(&empty, &th).unwrap();
    assert_eq!(v.dim(), 1);
    assert_eq!(v.ip_scale, rational(1, 1));

    let two = arc(disjoint_union(&s1, &s1).unwrap());
    let v = state_space(&two, &th).unwrap();
    assert_eq!(v.dim(), 9);
    assert_eq!(v.ip_scale, rational(1, 9));
    let r = v.report();
    assert_eq!(r.basis.len(), 9);
    assert_eq!(r.basis[0], vec![0, 0]);
}

#[test]
fn disk_field_space() {
    let th = DwTheory::untwisted(1, 3);
    let d = arc(corpus::disk());
    // zero data extends uniquely
    assert_eq!(field_space(&d, &th, None).unwrap().len(), 1);
    let sub = d.subcomplex("boundary").unwrap().clone();
    let (c, incl) = d.boundary_piece(&sub, "c").unwrap();
    let c = arc(c);
    let v = state_space(&c, &th).unwrap();
    let mut sizes = Vec::new();
    for q in &v.basis {
        let on_d = pushforward(q, &incl, &c, &d).unwrap();
        sizes.push(field_space(&d, &th, Some(&on_d)).unwrap().len());
    }
    assert_eq!(sizes, vec![1, 0, 0]);
}

#[test]
fn boundary_data_off_the_boundary_is_rejected() {
    let th = DwTheory::untwisted(1, 2);
    let d = arc(corpus::disk());
    let mut values = vec![0; d.count(1)];
    let spoke = d.simplex_index(&[0, 3]).unwrap();
    values[spoke] = 1;
    let q = GammaCochain::cyclic(1, 2, values);
    assert!(field_space(&d, &th, Some(&q)).is_err());
}

/// The cylinder as a bordism from the circle at `0.*` to the circle at `3.*`.
fn cylinder_bordism(th: &DwTheory) -> (Arc<Triangulation>, Bordism) {
    let cyl = arc(corpus::cylinder());
    let end = cyl.subcomplex("end").unwrap().clone();
    let (n, out) = cyl.boundary_piece(&end, "N").unwrap();
    let n = arc(n);
    let inc = embed_by_labels(&cyl, &n, |l| l.replacen("3.", "0.", 1)).unwrap();
    let space = state_space(&n, th).unwrap();
    let b = Bordism::new(Arc::clone(&cyl), Arc::clone(&space), inc, space, out, None).unwrap();
    (cyl, b)
}

#[test]
fn cylinder_matrix_is_diagonal() {
    for n in 2..=3u64 {
        let th = DwTheory::untwisted(1, n);
        let (_, b) = cylinder_bordism(&th);
        let x = b.matrix(&th).unwrap();
        for (i, row) in x.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let expect = if i == j { real(rational(n as i64, 1)) } else { PhaseSum::zero() };
                assert_eq!(e, &expect);
            }
        }
        let z = partition_closed(&arc(corpus::torus2()), &th).unwrap();
        assert_eq!(trace_glue(&x).unwrap(), z);
    }
}

#[test]
fn bordism_checks_orientation() {
    let th = DwTheory::untwisted(1, 2);
    let (cyl, b) = cylinder_bordism(&th);
    // swapping the roles of the two ends breaks the orientation convention
    let swapped = Bordism::new(
        Arc::clone(&cyl),
        Arc::clone(&b.target),
        b.outgoing.clone(),
        Arc::clone(&b.source),
        b.incoming.clone(),
        None,
    );
    assert!(matches!(swapped, Err(Error::ComponentMismatch(_))));
    // leaving out one end leaves boundary uncovered
    let empty = state_space(&arc(Triangulation::empty("empty", 1)), &th).unwrap();
    let partial = Bordism::new(cyl, empty, SimplicialMap::new(vec![]), b.target.clone(), b.outgoing.clone(), None);
    assert!(partial.is_err());
}

fn doubled_cylinder_matrix(th: &DwTheory, n: &Arc<Triangulation>, space: &Arc<StateSpace>) -> BordismMatrix {
    let cyl = corpus::cylinder();
    let mut two = disjoint_union(&cyl, &cyl).unwrap();
    let vertex_map = (0..3).map(|l| (format!("1/3.{l}"), format!("2/0.{l}"))).collect();
    two.set_gluing(Some(GluingSpec {
        plus: "1/end".into(),
        minus: "2/start".into(),
        vertex_map,
    }))
    .unwrap();
    let long = arc(glue(&two, two.gluing().unwrap()).unwrap().glued);
    let inc = embed_by_labels(&long, n, |l| format!("1/{}", l.replacen("3.", "0.", 1))).unwrap();
    let out = embed_by_labels(&long, n, |l| format!("2/{l}")).unwrap();
    Bordism::new(long, Arc::clone(space), inc, Arc::clone(space), out, None)
        .unwrap()
        .matrix(th)
        .unwrap()
}

#[test]
fn composition_matches_gluing() {
    for action in [ActionSpec::Trivial, ActionSpec::cup_square(1)] {
        let th = DwTheory::untwisted(1, 3).with_action(action);
        let (_, b) = cylinder_bordism(&th);
        let x = b.matrix(&th).unwrap();
        let composed = compose_bordisms(&x, &x).unwrap();
        let direct = doubled_cylinder_matrix(&th, &b.target.boundary, &b.target);
        assert!(composed.approx_eq(&direct, 1e-9), "{:?}", th.action);
    }
}

#[test]
fn composing_with_the_empty_unit() {
    let th = DwTheory::untwisted(1, 2);
    let d = arc(corpus::disk());
    let sub = d.subcomplex("boundary").unwrap().clone();
    let (c, incl) = d.boundary_piece(&sub, "c").unwrap();
    let c = arc(c);
    let empty_tri = arc(Triangulation::empty("empty", 1));
    let empty = state_space(&empty_tri, &th).unwrap();
    let disk = Bordism::new(
        Arc::clone(&d),
        Arc::clone(&empty),
        SimplicialMap::new(vec![]),
        state_space(&c, &th).unwrap(),
        incl,
        None,
    )
    .unwrap();
    let x = disk.matrix(&th).unwrap();
    assert_eq!(x.entries.len(), 1);
    // only the trivial boundary class extends
    assert!(!x.entries[0][0].is_zero());
    assert!(x.entries[0][1..].iter().all(PhaseSum::is_zero));

    let unit = BordismMatrix {
        source: Arc::clone(&empty),
        target: Arc::clone(&empty),
        entries: vec![vec![PhaseSum::one()]],
    };
    let y = compose_bordisms(&unit, &x).unwrap();
    assert_eq!(y.entries, x.entries);
    assert!(compose_bordisms(&x, &unit).is_err());
}

#[test]
fn gluing_identity_untwisted() {
    let th = DwTheory::untwisted(1, 3);
    for t in [corpus::cylinder(), corpus::two_disks(), corpus::interval_glued(3)] {
        let r = verify_gluing(&arc(t), &th, 1e-9).unwrap();
        assert!(r.holds && r.exact, "{}: {:?} vs {:?}", r.cut, r.lhs, r.rhs);
        assert!(r.excision_holds && r.lemma_holds, "{}", r.cut);
    }
    let r = verify_gluing(&arc(corpus::slab()), &DwTheory::untwisted(1, 2), 1e-9).unwrap();
    assert!(r.holds);
    assert_eq!(r.lhs, vec![real(rational(4, 1))]);
    let r = verify_gluing(&arc(corpus::slab()), &DwTheory::untwisted(2, 2), 1e-9).unwrap();
    assert!(r.holds && r.lemma_holds);
}

#[test]
fn gluing_identity_twisted() {
    for n in 2..=4u64 {
        for lambda in 0..n as i64 {
            let th = DwTheory::untwisted(1, n).with_action(ActionSpec::cup_square(lambda));
            for t in [corpus::cylinder(), corpus::two_disks()] {
                let r = verify_gluing(&arc(t), &th, 1e-9).unwrap();
                assert!(r.holds, "{} n={n} λ={lambda}: {:?} vs {:?}", r.cut, r.lhs, r.rhs);
            }
        }
    }
}

#[test]
fn gluing_report_values() {
    let th = DwTheory::untwisted(1, 2);
    let r = verify_gluing(&arc(corpus::two_disks()), &th, 1e-9).unwrap();
    assert_eq!(r.lhs, vec![real(rational(1, 2))]);
    assert_eq!(r.mu_n, rational(1, 2));
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["mu_N"], "1/2");
    assert!(json.get("K_order").is_some());
}

#[test]
fn gluing_with_residual_boundary() {
    let th = DwTheory::untwisted(1, 2);
    let cyl = corpus::cylinder();
    let mut two = disjoint_union(&cyl, &cyl).unwrap();
    let vertex_map = (0..3).map(|l| (format!("1/3.{l}"), format!("1/0.{l}"))).collect();
    two.set_gluing(Some(GluingSpec {
        plus: "1/end".into(),
        minus: "1/start".into(),
        vertex_map,
    }))
    .unwrap();
    let r = verify_gluing(&arc(two), &th, 1e-9).unwrap();
    // residual boundary is two circles: 4 basis states
    assert_eq!(r.lhs.len(), 4);
    assert!(r.holds, "{:?} vs {:?}", r.lhs, r.rhs);
}

#[test]
fn gluing_requires_data() {
    let th = DwTheory::untwisted(1, 2);
    assert!(matches!(verify_gluing(&arc(corpus::torus2()), &th, 1e-9), Err(Error::Gluing(_))));
}

#[test]
fn dagger_and_monoidal() {
    for n in 2..=4u64 {
        for lambda in 0..n as i64 {
            let th = DwTheory::untwisted(1, n).with_action(ActionSpec::cup_square(lambda));
            let r = dagger_check(&arc(corpus::torus2()), &th).unwrap();
            assert!(r.holds);
        }
    }
    let th = DwTheory::untwisted(1, 3).with_action(ActionSpec::cup_square(1));
    let r = monoidal_check(&arc(corpus::torus2()), &arc(corpus::sphere2()), &th).unwrap();
    assert!(r.holds);
    let r = monoidal_check(&arc(corpus::torus2()), &arc(Triangulation::empty("empty", 2)), &th).unwrap();
    assert!(r.holds);
    let th = DwTheory::untwisted(1, 2);
    let r = monoidal_check(&arc(corpus::torus3()), &arc(corpus::torus3()), &th).unwrap();
    assert_eq!(r.left, real(rational(16, 1)));
}

#[test]
fn partition_report_json() {
    let r = PartitionReport::new("torus2", real(rational(3, 1)));
    assert_eq!(r.numeric, [3.0, 0.0]);
    let s = serde_json::to_string(&r).unwrap();
    assert!(s.starts_with("{\"manifold\":\"torus2\""));
}

#[test]
fn degree_above_dimension() {
    let th = DwTheory::untwisted(2, 3);
    let r = verify_gluing(&arc(corpus::interval_glued(3)), &th, 1e-9).unwrap();
    assert!(r.holds && r.excision_holds);
    assert_eq!(field_space(&arc(corpus::interval(3)), &th, None).unwrap().len(), 1);
}
