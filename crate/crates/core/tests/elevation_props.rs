mod common;

use common::{all_functions, arb_poset, fixture, Order};
use growglue::enumerate::posets_up_to;
use growglue::gext::gextension_step_uncoalesced;
use growglue::{
    decompose_to_point, elevate, elevate_with_ids, gextension_step, is_embedding, is_height_zero_gluing, measure,
    node_set, reduce_dimension, retract, ElevationWitness, Error, NodeId, NodeSet, Poset, WrapOptions,
};
use proptest::prelude::*;

/// Every valid pivot of `z`, with its witness.
fn pivots(z: &Poset) -> Vec<ElevationWitness> {
    z.ids().iter().filter_map(|id| retract(z, id.as_str()).ok()).collect()
}

fn check_witness(w: &ElevationWitness) -> Result<(), TestCaseError> {
    w.verify().unwrap();
    let (z, x) = (&w.z_poset, &w.base);
    let zi = z.index(w.pivot.as_str()).unwrap();
    let rz = w.retraction.apply_ix(zi);
    let (zo, xo) = (Order::of(z), Order::of(x));

    // Brute force over all functions X -> Z.
    let mut sections = Vec::new();
    for e in all_functions(x.len(), z.len()) {
        if (0..x.len()).all(|v| w.retraction.apply_ix(e[v]) == v) && e[rz] == zi {
            sections.push(e);
        }
    }
    prop_assert_eq!(sections.len(), 1);
    prop_assert_eq!(&sections[0], &w.elevation.image_ix().to_vec());

    prop_assert!(is_embedding(&w.elevation).unwrap());
    let e = |v: usize| w.elevation.apply_ix(v);
    for a in 0..x.len() {
        for b in 0..x.len() {
            prop_assert_eq!(xo.le[a][b], zo.le[e(a)][e(b)]);
        }
    }

    let below: Vec<usize> = (0..z.len()).filter(|&v| zo.le[v][zi]).collect();
    for v in 0..z.len() {
        prop_assert!(below.contains(&v) || (0..x.len()).any(|a| e(a) == v));
    }
    let mut expected: Vec<usize> = below.iter().copied().filter(|&v| zo.minimal().contains(&v)).collect();
    expected.extend(xo.minimal().into_iter().filter(|&m| m != rz).map(e));
    expected.sort_unstable();
    prop_assert_eq!(expected, zo.minimal());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn elevations_of_random_posets_are_unique(z in arb_poset(6)) {
        for w in pivots(&z) {
            check_witness(&w)?;
        }
    }

    #[test]
    fn elevate_grows_below_a_minimum(x in arb_poset(6), pick in any::<usize>(), n in 1usize..4) {
        let mins = x.min_ix();
        let p = mins[pick % mins.len()];
        let pid = x.id(p).clone();
        let w = elevate(&x, pid.as_str(), n).unwrap();
        check_witness(&w)?;
        let z = &w.z_poset;
        let fresh: NodeSet = z.ids().iter().filter(|id| !x.contains(id.as_str())).cloned().collect();
        prop_assert_eq!(fresh.len(), n);
        prop_assert_eq!(&w.grown(), &fresh);
        let mut min_z: NodeSet = x.min_nodes().unwrap();
        min_z.remove(&pid);
        min_z.extend(fresh.iter().cloned());
        prop_assert_eq!(z.min_nodes().unwrap(), min_z);
        let xo = Order::of(&x);
        prop_assert_eq!(Order::of(z).dim(), xo.dim().max(xo.depth(p) + 1));
        prop_assert_eq!(z.cover_count(), x.cover_count() + n);
        for q in &fresh {
            prop_assert!(z.covers(q.as_str(), pid.as_str()).unwrap());
        }
        prop_assert_eq!(&w.elevation, &growglue::PosetMap::inclusion(&x, z).unwrap());
    }

    #[test]
    fn gextension_steps_shrink_the_measure(f1 in arb_poset(7)) {
        let o = Order::of(&f1);
        prop_assume!(o.dim() > 0);
        let step = gextension_step(&f1).unwrap();
        step.verify().unwrap();
        prop_assert!(step.m_trace.windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(step.m_trace.last(), Some(&0));
        prop_assert!(is_height_zero_gluing(&step.gluing));
        let f2 = Order::of(step.f2());
        prop_assert!((f2.dim(), f2.eta()) < (o.dim(), o.eta()));
        prop_assert_eq!(Order::of(step.z()).dim(), o.dim());
        let pivot = f1.index(step.pivot.as_str()).unwrap();
        prop_assert_eq!(o.height(pivot), 1);
        prop_assert_eq!(o.depth(pivot) + 1, o.dim());
        check_witness(&step.elevation)?;
    }

    #[test]
    fn reduce_dimension_terminates(f1 in arb_poset(7)) {
        let o = Order::of(&f1);
        prop_assume!(o.dim() > 0);
        let steps = reduce_dimension(&f1).unwrap();
        let mut prev = (o.dim(), o.eta());
        for s in &steps {
            let f2 = Order::of(s.f2());
            let next = (f2.dim(), f2.eta());
            prop_assert!(next < prev);
            prev = next;
        }
        prop_assert_eq!(prev.0 + 1, o.dim());
    }

    #[test]
    fn random_decompositions_replay(x in arb_poset(8)) {
        let script = decompose_to_point(&x, &WrapOptions::default()).unwrap();
        let report = script.replay().unwrap();
        prop_assert_eq!(report.source_nodes, x.len());
        prop_assert!(growglue::is_saturated_embedding(&script.tracked).unwrap());
    }
}

#[test]
fn small_posets_decompose_exhaustively() {
    for x in posets_up_to(5) {
        let script = decompose_to_point(&x, &WrapOptions::default()).unwrap();
        script.replay().unwrap_or_else(|e| panic!("{x:?}: {e}"));
    }
}

#[test]
fn wrap_options_are_honored() {
    let x = fixture("vee");
    let opts = WrapOptions { single_max: true, single_min: true, min_height: 2, min_dim: 5 };
    let script = decompose_to_point(&x, &opts).unwrap();
    script.replay().unwrap();
    let k = &script.final_poset;
    assert_eq!(k.min_ix().len(), 1);
    assert_eq!(k.max_ix().len(), 1);
    assert!(k.dim().unwrap() >= 5);
    for m in x.min_nodes().unwrap() {
        let image = script.tracked.apply(m.as_str()).unwrap();
        assert!(k.height(image.as_str()).unwrap() >= 2);
    }
}

#[test]
fn uncoalesced_steps_can_raise_eta() {
    let f = Poset::build(
        ["u", "p", "r", "q", "b1", "b2"],
        [("u", "p"), ("u", "r"), ("p", "q"), ("r", "b1"), ("r", "b2")],
    )
    .unwrap();
    let o = Order::of(&f);
    assert_eq!((o.dim(), o.eta()), (2, 3));
    let literal = gextension_step_uncoalesced(&f).unwrap();
    let lo = Order::of(literal.f2());
    assert_eq!((lo.dim(), lo.eta()), (2, 4));
    assert_eq!(measure(gextension_step(&f).unwrap().f2()).unwrap(), (2, 2));
}

#[test]
fn elevation_errors() {
    let x = fixture("vee");
    assert_eq!(elevate(&x, "1", 1).unwrap_err(), Error::NotMinimal("1".into()));
    assert_eq!(elevate(&x, "2", 0).unwrap_err(), Error::InvalidCount);
    assert!(matches!(elevate(&x, "nope", 1), Err(Error::UnknownNode(_))));
    assert_eq!(elevate_with_ids(&x, "2", &[NodeId::new("4")]).unwrap_err(), Error::DuplicateId("4".into()));
    assert_eq!(retract(&x, "2").unwrap_err(), Error::NotHeightOne("2".into()));
    let shared = fixture("gext_f1");
    assert_eq!(retract(&shared, "5").unwrap_err(), Error::NotUniqueCover { node: "6".into(), pivot: "5".into() });
    let w = retract(&fixture("gext_j"), "5").unwrap();
    assert_eq!(w.grown(), node_set(["6R", "6RR"]));
}
