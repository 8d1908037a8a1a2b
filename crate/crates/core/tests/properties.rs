use proptest::prelude::*;
use serde_json::json;
use tree_semigroups::polytope::enumerate_interior_by_translate;
use tree_semigroups::weightings::strictly_interior;
use tree_semigroups::{
    add, degree_of, delta2, divides, enumerate_interior, enumerate_points, enumerate_trees,
    graph_s, is_boundary, is_member, leaf_sides, trinode_s, trinode_t, tree_t, PipingGraph, Tree,
    WeightVector, Weighting,
};

fn tree() -> impl Strategy<Value = Tree> {
    (3usize..=8).prop_flat_map(|n| {
        let trees = enumerate_trees(n).unwrap();
        (0..trees.len()).prop_map(move |i| trees[i].clone())
    })
}

fn chords(n: usize, max: i64) -> impl Strategy<Value = PipingGraph> {
    proptest::collection::vec(0..=max, n * (n - 1) / 2).prop_map(move |mults| {
        let mut g = PipingGraph::empty(n);
        let pairs = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        for ((i, j), m) in pairs.zip(mults) {
            g.add_chord(i, j, m).unwrap();
        }
        g
    })
}

// Every member is the image of some multigraph, so this samples all of S_T.
fn tree_with_members(count: usize) -> impl Strategy<Value = (Tree, Vec<Weighting>)> {
    tree().prop_flat_map(move |t| {
        let n = t.n_leaves();
        let graphs = proptest::collection::vec(chords(n, 3), count);
        (Just(t), graphs).prop_map(|(t, gs)| {
            let ws = gs.iter().map(|g| graph_s(&t, g).unwrap()).collect();
            (t, ws)
        })
    })
}

fn small_instance() -> impl Strategy<Value = (Tree, WeightVector, u32)> {
    (3usize..=6).prop_flat_map(|n| {
        let trees = enumerate_trees(n).unwrap();
        (0..trees.len(), proptest::collection::vec(1i64..=3, n), 0u32..=3).prop_filter_map(
            "odd sum",
            move |(i, r, k)| WeightVector::new(r).ok().map(|r| (trees[i].clone(), r, k)),
        )
    })
}

fn sorted_values(ws: &[Weighting]) -> Vec<Vec<i64>> {
    let mut v: Vec<_> = ws.iter().map(|w| w.values().to_vec()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn delta2_is_symmetric(a in -2i64..30, b in -2i64..30, c in -2i64..30) {
        let d = delta2(a, b, c);
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(delta2(x, y, z), d);
        }
    }

    #[test]
    fn trinode_coordinates_invert(x12 in 0i64..1000, x13 in 0i64..1000, x23 in 0i64..1000) {
        let (a, b, c) = (x12 + x13, x12 + x23, x13 + x23);
        prop_assert!(delta2(a, b, c));
        let x = trinode_t(a, b, c).unwrap();
        prop_assert_eq!((x.x12, x.x13, x.x23), (x12, x13, x23));
        prop_assert_eq!(trinode_s(x).unwrap(), (a, b, c));
    }

    #[test]
    fn chord_images_are_members((t, ws) in tree_with_members(1)) {
        prop_assert!(is_member(&t, &ws[0]).unwrap());
    }

    #[test]
    fn divides_iff_difference_is_member((t, ws) in tree_with_members(2)) {
        let (w, v) = (&ws[0], &ws[1]);
        let diff: Vec<i64> = v.values().iter().zip(w.values()).map(|(a, b)| a - b).collect();
        let member = is_member(&t, &Weighting::new(&t, diff).unwrap()).unwrap();
        prop_assert_eq!(divides(w, v).unwrap(), member);
        let sum = add(w, v).unwrap();
        prop_assert!(divides(w, &sum).unwrap());
        prop_assert!(divides(v, &sum).unwrap());
    }

    #[test]
    fn internal_parity_matches_side_sum((t, ws) in tree_with_members(1)) {
        let w = &ws[0];
        for e in t.n_leaves()..t.edge_count() {
            let (side, _) = leaf_sides(&t, e).unwrap();
            let s: i64 = side.iter().map(|&i| w.leaf(i)).sum();
            prop_assert_eq!((w.get(e) - s).rem_euclid(2), 0);
        }
    }

    #[test]
    fn piping_round_trip((t, ws) in tree_with_members(1)) {
        let w = &ws[0];
        let g = tree_t(&t, w).unwrap();
        prop_assert!(g.planar_certified());
        prop_assert!(g.is_noncrossing());
        for i in 1..=t.n_leaves() {
            prop_assert_eq!(g.degree(i), w.leaf(i));
        }
        prop_assert_eq!(&graph_s(&t, &g).unwrap(), w);
    }

    #[test]
    fn noncrossing_graphs_are_recovered((t, g) in tree().prop_flat_map(|t| {
        let n = t.n_leaves();
        (Just(t), chords(n, 2))
    })) {
        let w = graph_s(&t, &g).unwrap();
        let back = tree_t(&t, &w).unwrap();
        for i in 1..=t.n_leaves() {
            prop_assert_eq!(back.degree(i), g.degree(i));
        }
        if g.is_noncrossing() {
            prop_assert_eq!(back, g);
        }
    }

    #[test]
    fn scaling_preserves_membership((t, ws) in tree_with_members(1), k in 0i64..5) {
        let w = &ws[0];
        let scaled = Weighting::new(&t, w.values().iter().map(|x| k * x).collect()).unwrap();
        prop_assert!(is_member(&t, &scaled).unwrap());
        let leaves: Vec<i64> = w.leaf_weights().to_vec();
        if leaves.iter().all(|&x| x > 0) {
            if let Ok(r) = WeightVector::new(leaves) {
                prop_assert_eq!(degree_of(&t, &scaled, &r).unwrap(), Some(k));
            }
        }
    }

    #[test]
    fn interior_two_ways((t, r, k) in small_instance()) {
        let direct = enumerate_interior(&t, &r, k).unwrap();
        let translated = enumerate_interior_by_translate(&t, &r, k).unwrap();
        prop_assert_eq!(sorted_values(&direct), sorted_values(&translated));
    }

    #[test]
    fn boundary_is_complement_of_interior((t, r, _) in small_instance()) {
        for w in enumerate_points(&t, &r, 1).unwrap() {
            prop_assert_eq!(is_boundary(&t, &w, &r).unwrap(), !strictly_interior(&w));
        }
    }

    #[test]
    fn json_round_trips((t, ws) in tree_with_members(1), shift in 0u32..62) {
        let big = Weighting::new(&t, ws[0].values().iter().map(|x| x << shift.min(40)).collect()).unwrap();
        for w in [&ws[0], &big] {
            prop_assert_eq!(&Weighting::from_json(&t, &w.to_json()).unwrap(), w);
            let g = tree_t(&t, w).unwrap();
            prop_assert_eq!(PipingGraph::from_json(&g.to_json()).unwrap(), g);
        }
        let text = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Tree>(&text).unwrap(), t);
    }

    #[test]
    fn weight_vector_text_round_trip(entries in proptest::collection::vec(1i64..100, 1..10)) {
        match WeightVector::new(entries.clone()) {
            Ok(r) => prop_assert_eq!(r.to_string().parse::<WeightVector>().unwrap(), r),
            Err(_) => prop_assert!(entries.iter().sum::<i64>() % 2 != 0),
        }
    }
}

#[test]
fn huge_weights_serialize_as_strings() {
    let t = enumerate_trees(3).unwrap().remove(0);
    let big = 1i64 << 60;
    let w = Weighting::new(&t, vec![big, big, 2]).unwrap();
    let j = w.to_json();
    assert_eq!(j["leaf"]["1"], json!(big.to_string()));
    assert_eq!(j["leaf"]["3"], json!(2));
    assert_eq!(Weighting::from_json(&t, &j).unwrap(), w);
}
