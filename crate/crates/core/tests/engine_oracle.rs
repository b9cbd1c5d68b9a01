//! Cross-checks of the signature-classified enumerator against the
//! brute-force circuit oracle on seeded random decomposition trees.

use circuit_forge_core::decomp::{enumerate_near_min_circuits, signature_of};
use circuit_forge_core::gf2::CircuitQuery;
use circuit_forge_core::udt::{random_udt, LeafKind, RandomUdtParams};
use circuit_forge_core::{Alpha, Circuit, Label, OracleCaps};

fn check_tree(seed: u64, leaf_count: usize, leaf_types: Vec<LeafKind>) -> Option<()> {
    let caps = OracleCaps::default();
    let params = RandomUdtParams {
        leaf_count,
        leaf_size_range: (3, 7),
        leaf_types,
        seed,
        max_total_m: Some(20),
    };
    let udt = random_udt(&params).ok()?;
    let composed = udt.evaluate().unwrap();
    let all = composed
        .enumerate_circuits(&CircuitQuery::default(), caps.max_m)
        .unwrap();
    let girth = all.iter().map(|c| c.len()).min()? as u64;
    if girth < 2 {
        return None;
    }
    let r = girth - 1;
    for alpha in [
        Alpha::from_int(1),
        Alpha::new(3, 2).unwrap(),
        Alpha::from_int(2),
    ] {
        let got = enumerate_near_min_circuits(&udt, r, alpha, &caps).unwrap();
        let expect: Vec<Circuit> = all
            .iter()
            .filter(|c| alpha.ge_times(c.len() as u64, r))
            .cloned()
            .collect();
        assert_eq!(
            got, expect,
            "mismatch at seed {seed}, {leaf_count} leaves, alpha {alpha}, r {r}"
        );
        // Every enumerated circuit carries a well-formed signature and a
        // projection satisfying the subtree invariants.
        for c in &got {
            let sig = signature_of(&udt, c, alpha, r).unwrap();
            assert!(sig.pins.len() <= 2 * sig.centers.len().max(1));
            check_projection(&udt, c);
        }
    }
    Some(())
}

/// Projection invariants: nonempty parts form a connected subtree, adjacent
/// parts share exactly one shared element, non-adjacent parts are disjoint,
/// and the symmetric difference of all parts reassembles the circuit.
fn check_projection(udt: &circuit_forge_core::udt::Udt, c: &Circuit) {
    use circuit_forge_core::types::intersect;
    let p = udt.project_circuit(c).unwrap();
    assert_eq!(p.reassemble(), c.elements());
    let support = p.support();
    // Connectivity: walk the support through tree edges.
    let mut seen = vec![support[0]];
    let mut frontier = vec![support[0]];
    while let Some(v) = frontier.pop() {
        for &w in &support {
            if !seen.contains(&w) && udt.edge_between(v, w).is_some() {
                seen.push(w);
                frontier.push(w);
            }
        }
    }
    assert_eq!(
        seen.len(),
        support.len(),
        "projection support is disconnected"
    );
    for (i, &u) in support.iter().enumerate() {
        for &v in support.iter().skip(i + 1) {
            let common = intersect(&p.parts[&u], &p.parts[&v]);
            match udt.edge_between(u, v) {
                Some(_) => assert_eq!(common.len(), 1, "adjacent parts must share one element"),
                None => assert!(common.is_empty(), "non-adjacent parts must be disjoint"),
            }
        }
    }
}

/// Fixed 3-sum anchor: two seven-element builtin leaves glued along a
/// 3-element circuit. The shared triple is a circuit of both sides and no
/// cocircuit (every dual circuit has four elements), so the sum is valid.
#[test]
fn three_sum_of_fano_leaves_matches_oracle() {
    use circuit_forge_core::gf2::{BinaryMatroid, Builtin};
    use circuit_forge_core::udt::{Udt, UdtEdge, UdtVertex};
    let caps = OracleCaps::default();
    let f7 = BinaryMatroid::builtin(Builtin::F7);
    let lines = f7
        .enumerate_circuits(&CircuitQuery::with_size_cap(3), caps.max_m)
        .unwrap();
    let line = lines[0].clone();
    assert_eq!(line.len(), 3);
    // Leaf 0 keeps labels 0..6; leaf 1 gets 10..16 except the shared triple,
    // which reuses leaf 0's line labels at the same column positions.
    let relabel: Vec<Label> = (0..7u32)
        .map(|i| {
            if line.contains(Label(i)) {
                Label(i)
            } else {
                Label(10 + i)
            }
        })
        .collect();
    let udt = Udt::new(
        vec![
            (
                0,
                UdtVertex::builtin(Builtin::F7, (0..7).map(Label).collect()),
            ),
            (1, UdtVertex::builtin(Builtin::F7, relabel)),
        ],
        vec![UdtEdge {
            u: 0,
            v: 1,
            shared: line.elements().to_vec(),
        }],
    )
    .unwrap();
    let composed = udt.evaluate().unwrap();
    assert_eq!(composed.m(), 8);
    let all = composed
        .enumerate_circuits(&CircuitQuery::default(), caps.max_m)
        .unwrap();
    let girth = all.iter().map(|c| c.len()).min().unwrap() as u64;
    assert!(girth >= 2);
    let r = girth - 1;
    for alpha in [
        Alpha::from_int(1),
        Alpha::new(3, 2).unwrap(),
        Alpha::from_int(2),
    ] {
        let got = enumerate_near_min_circuits(&udt, r, alpha, &caps).unwrap();
        let expect: Vec<Circuit> = all
            .iter()
            .filter(|c| alpha.ge_times(c.len() as u64, r))
            .cloned()
            .collect();
        assert_eq!(got, expect, "alpha {alpha}");
        for c in &got {
            check_projection(&udt, c);
        }
    }
}

/// Five-leaf path: 5-cycle, triangle, theta graph, triangle, 5-cycle. The
/// spanning circuit has projection sizes (4,1,2,1,4) over girth 7, so the
/// balanced division picks the two ends and the middle as centers and both
/// triangle leaves become components bordered by two centers whose
/// projections are fixed by the pins. This pins down the multi-center
/// enumeration path.
#[test]
fn five_leaf_path_exercises_fixed_subtree_projections() {
    use circuit_forge_core::udt::{Udt, UdtEdge, UdtVertex};
    let caps = OracleCaps::default();
    let cycle5 = |base: u32| {
        UdtVertex::graphic(5, (0..5).map(|i| (i, (i + 1) % 5, Label(base + i as u32))).collect())
    };
    let triangle = |a: u32, b: u32, c: u32| {
        UdtVertex::graphic(3, vec![(0, 1, Label(a)), (1, 2, Label(b)), (2, 0, Label(c))])
    };
    // Two hubs joined by paths of lengths 1, 2 and 2; the shared elements 6
    // and 10 sit on the two long paths, so every cycle of the leaf meets a
    // shared element.
    let theta = UdtVertex::graphic(
        4,
        vec![
            (0, 1, Label(7)),
            (0, 2, Label(6)),
            (2, 1, Label(8)),
            (0, 3, Label(10)),
            (3, 1, Label(9)),
        ],
    );
    let udt = Udt::new(
        vec![
            (0, cycle5(0)),
            (1, triangle(4, 5, 6)),
            (2, theta),
            (3, triangle(10, 11, 12)),
            (4, cycle5(12)),
        ],
        vec![
            UdtEdge { u: 0, v: 1, shared: vec![Label(4)] },
            UdtEdge { u: 1, v: 2, shared: vec![Label(6)] },
            UdtEdge { u: 2, v: 3, shared: vec![Label(10)] },
            UdtEdge { u: 3, v: 4, shared: vec![Label(12)] },
        ],
    )
    .unwrap();
    let composed = udt.evaluate().unwrap();
    assert_eq!(composed.m(), 13);
    let all = composed.enumerate_circuits(&CircuitQuery::default(), caps.max_m).unwrap();
    let girth = all.iter().map(|c| c.len()).min().unwrap();
    assert_eq!(girth, 7);
    let spanning: Vec<&Circuit> = all.iter().filter(|c| c.len() == 12).collect();
    assert_eq!(spanning.len(), 1, "one full-span circuit");
    let r = 6;
    for alpha in [Alpha::from_int(1), Alpha::new(3, 2).unwrap(), Alpha::from_int(2)] {
        let got = enumerate_near_min_circuits(&udt, r, alpha, &caps).unwrap();
        let expect: Vec<Circuit> =
            all.iter().filter(|c| alpha.ge_times(c.len() as u64, r)).cloned().collect();
        assert_eq!(got, expect, "alpha {alpha}");
    }
    // The canonical signature of the spanning circuit puts centers at 0, 2
    // and 4, leaving the triangle leaves as two-center components.
    let sig = signature_of(&udt, spanning[0], Alpha::from_int(2), r).unwrap();
    assert_eq!(sig.centers, [0u32, 2, 4].into());
    assert_eq!(
        sig.pins,
        [(0u32, Label(4)), (2u32, Label(6)), (2u32, Label(10)), (4u32, Label(12))].into()
    );
    check_projection(&udt, spanning[0]);
}

/// Fixed mixed chain: graphic square leaf, builtin leaf, cographic leaf.
#[test]
fn mixed_chain_matches_oracle() {
    use circuit_forge_core::gf2::Builtin;
    use circuit_forge_core::udt::{Udt, UdtEdge, UdtVertex};
    let caps = OracleCaps::default();
    let square = UdtVertex::graphic(
        4,
        vec![
            (0, 1, Label(0)),
            (1, 2, Label(1)),
            (2, 3, Label(2)),
            (3, 0, Label(3)),
        ],
    );
    let r10 = UdtVertex::builtin(Builtin::R10, (3..13).map(Label).collect());
    let co = UdtVertex::cographic(
        4,
        vec![
            (0, 1, Label(12)),
            (1, 2, Label(20)),
            (2, 3, Label(21)),
            (3, 0, Label(22)),
            (1, 3, Label(23)),
        ],
    );
    let udt = Udt::new(
        vec![(0, square), (1, r10), (2, co)],
        vec![
            UdtEdge {
                u: 0,
                v: 1,
                shared: vec![Label(3)],
            },
            UdtEdge {
                u: 1,
                v: 2,
                shared: vec![Label(12)],
            },
        ],
    )
    .unwrap();
    let composed = udt.evaluate().unwrap();
    assert_eq!(composed.m(), 4 + 10 + 5 - 4);
    let all = composed
        .enumerate_circuits(&CircuitQuery::default(), caps.max_m)
        .unwrap();
    let girth = all.iter().map(|c| c.len()).min().unwrap() as u64;
    let r = girth - 1;
    for alpha in [
        Alpha::from_int(1),
        Alpha::new(3, 2).unwrap(),
        Alpha::from_int(2),
    ] {
        let got = enumerate_near_min_circuits(&udt, r, alpha, &caps).unwrap();
        let expect: Vec<Circuit> = all
            .iter()
            .filter(|c| alpha.ge_times(c.len() as u64, r))
            .cloned()
            .collect();
        assert_eq!(got, expect, "alpha {alpha}");
    }
}

#[test]
fn enumerator_matches_oracle_on_random_trees() {
    let mut checked = 0;
    for seed in 0..60 {
        let leaf_count = 2 + (seed % 3) as usize;
        if check_tree(
            seed,
            leaf_count,
            vec![LeafKind::Graphic, LeafKind::Cographic],
        )
        .is_some()
        {
            checked += 1;
        }
    }
    assert!(checked >= 40, "only {checked} instances were checkable");
}

/// Long-running soak: bigger trees, wider leaf ranges, one extra alpha.
/// Run explicitly with `cargo test -- --ignored`.
#[test]
#[ignore]
fn soak_enumerator_against_oracle() {
    let caps = OracleCaps::default();
    let mut checked = 0;
    let mut seed = 10_000u64;
    while checked < 500 {
        let params = RandomUdtParams {
            leaf_count: 2 + (seed % 4) as usize,
            leaf_size_range: (3, 9),
            leaf_types: vec![
                LeafKind::Graphic,
                LeafKind::Cographic,
                LeafKind::R10,
                LeafKind::F7,
            ],
            seed,
            max_total_m: Some(22),
        };
        seed += 1;
        let Ok(udt) = random_udt(&params) else {
            continue;
        };
        let composed = udt.evaluate().unwrap();
        let all = composed
            .enumerate_circuits(&CircuitQuery::default(), caps.max_m)
            .unwrap();
        let Some(girth) = all.iter().map(|c| c.len()).min() else {
            continue;
        };
        if girth < 2 {
            continue;
        }
        let r = girth as u64 - 1;
        for alpha in [
            Alpha::from_int(1),
            Alpha::new(3, 2).unwrap(),
            Alpha::from_int(2),
            Alpha::new(5, 2).unwrap(),
        ] {
            let got = enumerate_near_min_circuits(&udt, r, alpha, &caps).unwrap();
            let expect: Vec<Circuit> = all
                .iter()
                .filter(|c| alpha.ge_times(c.len() as u64, r))
                .cloned()
                .collect();
            assert_eq!(got, expect, "seed {}, alpha {alpha}", seed - 1);
        }
        checked += 1;
    }
}

#[test]
fn enumerator_matches_oracle_with_builtin_leaves() {
    let mut checked = 0;
    for seed in 0..40 {
        let types = vec![
            LeafKind::Graphic,
            LeafKind::Cographic,
            LeafKind::R10,
            LeafKind::F7,
        ];
        if check_tree(seed, 2 + (seed % 2) as usize, types).is_some() {
            checked += 1;
        }
    }
    assert!(checked >= 25, "only {checked} instances were checkable");
}
