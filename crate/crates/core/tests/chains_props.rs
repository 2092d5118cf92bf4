mod common;

use std::collections::BTreeSet;

use common::{arb_poset, fixture, Order};
use growglue::{
    chain_decomposition, find_isomorphism, glue_d_along_subcollection, is_height_zero_gluing, node_set,
    split_for_cover, verify_gluing, GluingWitness, NodeSet, Poset, PosetMap,
};
use proptest::prelude::*;

fn preimage_of(f: &PosetMap, set: &NodeSet) -> NodeSet {
    f.pairs().filter(|(_, y)| set.contains(*y)).map(|(a, _)| a.clone()).collect()
}

fn nontrivial_fibers(f: &PosetMap) -> Vec<NodeSet> {
    f.fibers().into_iter().filter(|v| v.len() > 1).map(|v| f.source().to_ids(v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decompositions_meet_the_definition(x in arb_poset(8)) {
        let cd = chain_decomposition(&x).unwrap();
        cd.check().unwrap();
        cd.verify_min_max_lifting().unwrap();
        let o = Order::of(&x);
        let brute: BTreeSet<u32> = o.maximal_chains().into_iter().collect();
        prop_assert_eq!(cd.chains.len(), brute.len());
        let d = Order::of(&cd.d);
        let mut images = BTreeSet::new();
        for chain in &cd.chains {
            let ix: Vec<usize> = chain.iter().map(|a| cd.d.index(a.as_str()).unwrap()).collect();
            let img: Vec<usize> = ix.iter().map(|&a| cd.phi.apply_ix(a)).collect();
            for (k, &a) in ix.iter().enumerate() {
                for (l, &b) in ix.iter().enumerate() {
                    prop_assert_eq!(d.le[a][b], k <= l);
                    prop_assert_eq!(o.le[img[k]][img[l]], k <= l);
                }
            }
            // Nothing outside the chain is comparable to it in D.
            for other in 0..cd.d.len() {
                if !ix.contains(&other) {
                    prop_assert!(ix.iter().all(|&a| !d.le[a][other] && !d.le[other][a]));
                }
            }
            images.insert(img.iter().fold(0u32, |m, &i| m | 1 << i));
        }
        prop_assert_eq!(images, brute);
        prop_assert!(verify_gluing(&cd.phi, &cd.fiber_collection()).is_ok());
        let pre_min = preimage_of(&cd.phi, &x.min_nodes().unwrap());
        prop_assert_eq!(cd.d.min_nodes().unwrap(), pre_min);
        let pre_max = preimage_of(&cd.phi, &x.max_nodes().unwrap());
        prop_assert_eq!(cd.d.max_nodes().unwrap(), pre_max);
    }

    #[test]
    fn partial_regluings(x in arb_poset(7), pick in any::<u32>()) {
        let cd = chain_decomposition(&x).unwrap();
        let all = cd.fiber_collection();
        let sub: Vec<NodeSet> = all.iter().enumerate().filter(|(k, _)| pick >> k & 1 == 1).map(|(_, e)| e.clone()).collect();
        let r = glue_d_along_subcollection(&cd, &sub).unwrap();
        prop_assert!(verify_gluing(&r.t, &sub).is_ok());
        prop_assert_eq!(&r.t.then(&r.f_map).unwrap(), &cd.phi);
        prop_assert!(verify_gluing(&r.f_map, &nontrivial_fibers(&r.f_map)).is_ok());
        prop_assert_eq!(cd.d.min_nodes().unwrap(), preimage_of(&r.t, &r.f.min_nodes().unwrap()));
        prop_assert_eq!(cd.d.max_nodes().unwrap(), preimage_of(&r.t, &r.f.max_nodes().unwrap()));
        if sub.len() == all.len() {
            prop_assert!(find_isomorphism(&r.f, &x).is_some());
        }
    }

    #[test]
    fn splitting_isolates_the_cover(x in arb_poset(7)) {
        let cd = chain_decomposition(&x).unwrap();
        for u1 in x.min_ix() {
            for &u2 in x.upper_covers(u1) {
                let (n1, n2) = (x.id(u1).as_str(), x.id(u2).as_str());
                let r = split_for_cover(&x, n1, n2).unwrap();
                let f = &r.f;
                prop_assert_eq!(&r.t.then(&r.f_map).unwrap(), &cd.phi);
                let over_u1 = r.f_map.preimage(n1).unwrap();
                let w = GluingWitness { map: r.f_map.clone(), collection: vec![over_u1.clone()] };
                prop_assert!(verify_gluing(&w.map, &w.collection).is_ok());
                prop_assert!(is_height_zero_gluing(&w));
                let over_u2 = r.f_map.preimage(n2).unwrap();
                for v1 in &over_u1 {
                    let i = f.index(v1.as_str()).unwrap();
                    for v2 in &over_u2 {
                        let j = f.index(v2.as_str()).unwrap();
                        if f.leq_ix(i, j) {
                            prop_assert!(f.covers_ix(i, j));
                            prop_assert_eq!(f.upper_covers(i), &[j]);
                        }
                    }
                }
                for (v, y) in r.f_map.pairs() {
                    if y.as_str() != n1 {
                        prop_assert_eq!(v, y);
                    }
                }
                let fo = Order::of(f);
                prop_assert_eq!(fo.dim(), Order::of(&x).dim());
            }
        }
    }
}

#[test]
fn decomposition_examples() {
    let right = fixture("glue_right");
    let cd = chain_decomposition(&right).unwrap();
    let mut lengths: Vec<usize> = cd.chains.iter().map(Vec::len).collect();
    lengths.sort();
    assert_eq!(lengths, [3, 4]);
    assert_eq!(cd.phi.preimage("6").unwrap(), cd.d.min_nodes().unwrap());
    let bottoms = cd.phi.preimage("6").unwrap();
    let r = glue_d_along_subcollection(&cd, &[bottoms]).unwrap();
    assert_eq!(r.f.len(), 6);
    assert_eq!(r.f_map.preimage("1").unwrap().len(), 2);

    let x = fixture("target_x");
    let cd = chain_decomposition(&x).unwrap();
    assert_eq!(cd.chains.len(), 4);
    let total: usize = x.maximal_chains().unwrap().iter().map(|c| c.nodes().len()).sum();
    assert_eq!(cd.d.len(), total);

    let vee = fixture("vee");
    let cd = chain_decomposition(&vee).unwrap();
    let bottoms: NodeSet = cd.d.min_nodes().unwrap();
    let images: NodeSet = bottoms.iter().map(|a| cd.phi.apply(a.as_str()).unwrap().clone()).collect();
    assert_eq!(images, node_set(["2", "4"]));
}

#[test]
fn split_names_copies_after_the_split_node() {
    let f1 = fixture("gext_f1");
    let r = split_for_cover(&f1, "6", "5").unwrap();
    assert_eq!(r.f.len(), 7);
    assert_eq!(r.f_map.preimage("6").unwrap(), node_set(["6.0", "6.1"]));
    let p = Poset::build(["u"], Vec::<(&str, &str)>::new()).unwrap();
    assert_eq!(chain_decomposition(&p).unwrap().d.len(), 1);
}
