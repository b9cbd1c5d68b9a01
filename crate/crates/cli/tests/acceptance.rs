//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Every criterion pins its tolerance in code: set equalities are exact,
//! bound comparisons are exact big-integer comparisons, and the statistical
//! criterion uses half the closed-form survival bound as stated.

use circuit_forge_core::bounds;
use circuit_forge_core::decomp::{
    enumerate_light_codewords, enumerate_near_min_circuits, run_enumeration, signature_of,
    CodewordSource,
};
use circuit_forge_core::gf2::{BinaryMatroid, Builtin, CircuitQuery};
use circuit_forge_core::graph::{small_cut, CutQuery, CycleQuery, GraphEdge, WeightedGraph};
use circuit_forge_core::ksum::{check_associativity, classify_sum, delta_sum};
use circuit_forge_core::types::symm_diff;
use circuit_forge_core::udt::{random_udt, LeafKind, RandomUdtParams, Udt};
use circuit_forge_core::{Alpha, Circuit, CutSet, Label, OracleCaps};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

fn suite_alphas() -> Vec<Alpha> {
    vec![
        Alpha::from_int(1),
        Alpha::new(3, 2).unwrap(),
        Alpha::from_int(2),
    ]
}

/// Deterministic family of verification trees: 2-4 leaves drawn from all
/// four leaf kinds, composed ground set at most 20.
fn suite_udts(count: usize, base_seed: u64) -> Vec<(u64, Udt, u64)> {
    let caps = OracleCaps::default();
    let mut out = Vec::new();
    let mut seed = base_seed;
    while out.len() < count {
        let params = RandomUdtParams {
            leaf_count: 2 + (seed % 3) as usize,
            leaf_size_range: (3, 8),
            leaf_types: vec![
                LeafKind::Graphic,
                LeafKind::Cographic,
                LeafKind::R10,
                LeafKind::F7,
            ],
            seed,
            max_total_m: Some(20),
        };
        let tag = seed;
        seed += 1;
        let Ok(udt) = random_udt(&params) else {
            continue;
        };
        let composed = udt.evaluate().unwrap();
        let Some(girth) = composed.girth(caps.max_m).unwrap() else {
            continue;
        };
        if girth < 2 {
            continue;
        }
        out.push((tag, udt, girth as u64));
    }
    out
}

fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra: usize,
    max_w: u64,
) -> WeightedGraph {
    let mut edges = Vec::new();
    for v in 0..n {
        edges.push(GraphEdge {
            u: v,
            v: (v + 1) % n,
            label: Label(v as u32),
            weight: rng.gen_range(1..=max_w),
        });
    }
    let mut next = n as u32;
    let mut added = 0;
    while added < extra {
        let a = rng.gen_range(0..n as u64) as usize;
        let b = rng.gen_range(0..n as u64) as usize;
        if a == b {
            continue;
        }
        edges.push(GraphEdge {
            u: a.min(b),
            v: a.max(b),
            label: Label(next),
            weight: rng.gen_range(1..=max_w),
        });
        next += 1;
        added += 1;
    }
    WeightedGraph::new(n, edges).unwrap()
}

fn cycle_weight(g: &WeightedGraph, c: &Circuit) -> u64 {
    g.edges()
        .iter()
        .filter(|e| c.contains(e.label))
        .map(|e| e.weight)
        .sum()
}

#[test]
fn criterion_01_oracle_equivalence() {
    let started = Instant::now();
    let caps = OracleCaps::default();
    let family = suite_udts(200, 0);
    assert_eq!(family.len(), 200);
    let mut trials = 0usize;
    for (tag, udt, girth) in &family {
        let r = girth - 1;
        let composed = udt.evaluate().unwrap();
        let all = composed
            .enumerate_circuits(&CircuitQuery::default(), caps.max_m)
            .unwrap();
        for alpha in suite_alphas() {
            let got = enumerate_near_min_circuits(udt, r, alpha, &caps).unwrap();
            let expect: Vec<Circuit> = all
                .iter()
                .filter(|c| alpha.ge_times(c.len() as u64, r))
                .cloned()
                .collect();
            assert_eq!(got, expect, "instance {tag}, alpha {alpha}, r {r}");
            trials += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 300,
        "runtime {elapsed:?} exceeds 5 minutes"
    );
    println!(
        "[PASS] criterion 1: oracle equivalence on {} instances x 3 alphas ({} runs) in {:?}",
        family.len(),
        trials,
        elapsed
    );
}

#[test]
fn criterion_02_graphic_cographic_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0usize;
    for case in 0..40 {
        let n = 3 + (case % 8);
        let extra = case % 5;
        for unit_weights in [true, false] {
            let g = if unit_weights {
                random_connected_graph(&mut rng, n, extra, 1)
            } else {
                random_connected_graph(&mut rng, n, extra, 5)
            };
            let m = g.m();
            if m < 2 {
                continue;
            }
            // Graphic side: cycles.
            let cycles = g.enumerate_cycles(&CycleQuery::default()).unwrap();
            if let Some(min_w) = cycles.iter().map(|c| cycle_weight(&g, c)).min() {
                let r = min_w - 1;
                for alpha in suite_alphas() {
                    let cap = alpha.floor_times(r);
                    let count = cycles.iter().filter(|c| cycle_weight(&g, c) <= cap).count();
                    assert!(
                        bounds::simple_circuit_bound_holds(count, m, alpha),
                        "cycle count {count} breaks (2m)^(2a) with m={m}, alpha={alpha}"
                    );
                    checked += 1;
                }
            }
            // Cographic side: minimal cut-sets.
            let cuts = g.enumerate_min_cutsets(&CutQuery::default()).unwrap();
            if let Some(min_w) = cuts.iter().map(|c| cycle_weight(&g, c)).min() {
                let r = min_w - 1;
                for alpha in suite_alphas() {
                    let cap = alpha.floor_times(r);
                    let count = cuts.iter().filter(|c| cycle_weight(&g, c) <= cap).count();
                    assert!(
                        bounds::simple_circuit_bound_holds(count, m, alpha),
                        "cut count {count} breaks (2m)^(2a) with m={m}, alpha={alpha}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 200);
    println!("[PASS] criterion 2: near-minimum cycle/cut counts within (2m)^(2a), {checked} checks, zero violations");
}

#[test]
fn criterion_03_required_set_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut instances = 0usize;
    while instances < 100 {
        let n = 4 + (instances % 5);
        let g = random_connected_graph(&mut rng, n, 2 + instances % 3, 5);
        let m = g.m();
        let r_size = 1 + instances % 2;
        let labels: Vec<Label> = g.edges().iter().map(|e| e.label).collect();
        let mut required: Vec<Label> = Vec::new();
        while required.len() < r_size {
            let pick = labels[rng.gen_range(0..labels.len() as u64) as usize];
            if !required.contains(&pick) {
                required.push(pick);
            }
        }
        required.sort_unstable();
        let total_w: u64 = g.edges().iter().map(|e| e.weight).sum();
        for graphic_side in [true, false] {
            let all: Vec<Circuit> = if graphic_side {
                g.enumerate_cycles(&CycleQuery::default()).unwrap()
            } else {
                g.enumerate_min_cutsets(&CutQuery::default()).unwrap()
            };
            // Largest r satisfying the hypothesis: no circuit avoiding R of
            // weight at most r.
            let avoiding_min = all
                .iter()
                .filter(|c| required.iter().all(|l| !c.contains(*l)))
                .map(|c| cycle_weight(&g, c))
                .min();
            let r = avoiding_min.map_or(total_w, |w| w - 1);
            for alpha in [1u32, 2] {
                let cap = alpha as u64 * r;
                let count = all
                    .iter()
                    .filter(|c| {
                        required.iter().all(|l| c.contains(*l)) && cycle_weight(&g, c) <= cap
                    })
                    .count();
                let bound = bounds::graphic_set_bound(alpha, required.len(), m).unwrap();
                assert!(
                    bounds::BigUint::from(count) <= bound,
                    "count {count} breaks the required-set bound, |R|={}, alpha={alpha}, m={m}",
                    required.len()
                );
            }
        }
        instances += 1;
    }
    println!("[PASS] criterion 3: required-set circuit counts within (4a+2|R|)^|R| (2m)^(2a), {instances} weighted instances, zero violations");
}

struct SmallCutCase {
    graph: WeightedGraph,
    required: Vec<Label>,
    alpha: u32,
}

/// Ten seeded random graphs with nonempty qualifying cut families, plus the
/// unit triangle.
fn small_cut_cases() -> Vec<SmallCutCase> {
    let mut cases = Vec::new();
    let triangle = WeightedGraph::new(
        3,
        vec![
            GraphEdge {
                u: 0,
                v: 1,
                label: Label(0),
                weight: 1,
            },
            GraphEdge {
                u: 1,
                v: 2,
                label: Label(1),
                weight: 1,
            },
            GraphEdge {
                u: 2,
                v: 0,
                label: Label(2),
                weight: 1,
            },
        ],
    )
    .unwrap();
    cases.push(SmallCutCase {
        graph: triangle,
        required: vec![],
        alpha: 1,
    });
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut found = 0;
    while found < 10 {
        // Alternate between a plain alpha=2 family on unit-weight graphs and
        // a required-edge family on heavy cycles with one protected light
        // edge, so both qualifying families are nonempty.
        let (g, required, alpha) = if found % 2 == 0 {
            let n = 4 + (found % 4);
            (
                random_connected_graph(&mut rng, n, 1 + found % 3, 1),
                vec![],
                2u32,
            )
        } else {
            let n = 4 + (found % 5);
            let edges: Vec<GraphEdge> = (0..n)
                .map(|v| GraphEdge {
                    u: v,
                    v: (v + 1) % n,
                    label: Label(v as u32),
                    weight: if v == 0 { 1 } else { 4 },
                })
                .collect();
            (WeightedGraph::new(n, edges).unwrap(), vec![Label(0)], 1u32)
        };
        if g.n() < 2 * alpha as usize + required.len() {
            continue;
        }
        if !qualifying_cuts(&g, &required, alpha).is_empty() {
            cases.push(SmallCutCase {
                graph: g,
                required,
                alpha,
            });
            found += 1;
        }
    }
    cases
}

/// Bonds through R of weight at most alpha * r, where r is the largest value
/// satisfying the avoidance hypothesis.
fn qualifying_cuts(g: &WeightedGraph, required: &[Label], alpha: u32) -> Vec<CutSet> {
    let all = g.enumerate_min_cutsets(&CutQuery::default()).unwrap();
    let avoiding_min = all
        .iter()
        .filter(|c| required.iter().all(|l| !c.contains(*l)))
        .map(|c| cycle_weight(g, c))
        .min();
    let Some(w) = avoiding_min else {
        return Vec::new();
    };
    if w < 2 {
        return Vec::new();
    }
    let cap = alpha as u64 * (w - 1);
    all.into_iter()
        .filter(|c| required.iter().all(|l| c.contains(*l)) && cycle_weight(g, c) <= cap)
        .collect()
}

#[test]
fn criterion_04_small_cut_statistics() {
    const TRIALS: u64 = 10_000;
    let cases = small_cut_cases();
    assert_eq!(cases.len(), 11);
    for (case_idx, case) in cases.iter().enumerate() {
        let g = &case.graph;
        let qualifying = qualifying_cuts(g, &case.required, case.alpha);
        let mut tallies: BTreeMap<CutSet, u64> = BTreeMap::new();
        for i in 0..TRIALS {
            let cut =
                small_cut(g, &case.required, case.alpha, 10_000 * case_idx as u64 + i).unwrap();
            assert!(
                g.is_minimal_cutset(cut.elements()).unwrap(),
                "case {case_idx}: output is not a minimal cut-set"
            );
            assert!(
                case.required.iter().all(|l| cut.contains(*l)),
                "case {case_idx}: output misses a required edge"
            );
            *tallies.entry(cut).or_insert(0) += 1;
        }
        if case_idx == 0 {
            // The unit triangle has three bonds; all must be observed.
            assert_eq!(tallies.len(), 3);
        }
        // Half the closed-form survival bound, compared exactly via
        // 2 * count * 2^|R| * (n - |R|)^(2a) >= TRIALS.
        let n = g.n() as u64;
        let r_len = case.required.len() as u64;
        let denom = (1u128 << r_len) * (n - r_len).pow(2 * case.alpha) as u128;
        for cut in &qualifying {
            let count = *tallies.get(cut).unwrap_or(&0) as u128;
            assert!(
                2 * count * denom >= TRIALS as u128,
                "case {case_idx}: qualifying cut {cut} appeared {count} times in {TRIALS}, \
                 below half of 1/(2^|R| (n-|R|)^(2a)) = 1/{denom}"
            );
        }
    }
    println!(
        "[PASS] criterion 4: {} graphs x {TRIALS} trials; outputs verified minimal, every qualifying cut at half-bound frequency",
        cases.len()
    );
}

fn fresh_triangle(shared: Option<Label>, next_label: &mut u32) -> BinaryMatroid {
    let mut labels = Vec::new();
    if let Some(s) = shared {
        labels.push(s);
    }
    while labels.len() < 3 {
        labels.push(Label(1000 + *next_label));
        *next_label += 1;
    }
    let g = WeightedGraph::new(
        3,
        vec![
            GraphEdge {
                u: 0,
                v: 1,
                label: labels[0],
                weight: 1,
            },
            GraphEdge {
                u: 1,
                v: 2,
                label: labels[1],
                weight: 1,
            },
            GraphEdge {
                u: 2,
                v: 0,
                label: labels[2],
                weight: 1,
            },
        ],
    )
    .unwrap();
    g.graphic_matroid().unwrap()
}

#[test]
fn criterion_05_associativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut next_label = 0u32;
    let mut done = 0;
    while done < 100 {
        // Random small graphic operands chained so the outer shared set sits
        // inside one inner operand; element counts vary via parallel
        // extensions.
        let m3 = fresh_triangle(None, &mut next_label);
        let s1 = m3.ground_set()[rng.gen_range(0..3u64) as usize];
        let m4 = fresh_triangle(Some(s1), &mut next_label);
        let anchor = loop {
            let pick = m3.ground_set()[rng.gen_range(0..3u64) as usize];
            if pick != s1 {
                break pick;
            }
        };
        let mut m1 = fresh_triangle(Some(anchor), &mut next_label);
        if rng.gen_range(0..2u64) == 1 {
            let fresh = Label(1000 + next_label);
            next_label += 1;
            m1 = m1.add_parallel(m1.ground_set()[1], fresh).unwrap();
        }
        if classify_sum(&m3, &m4).is_err()
            || delta_sum(&m3, &m4).is_err()
            || classify_sum(&m1, &delta_sum(&m3, &m4).unwrap().0).is_err()
        {
            continue;
        }
        let ok = check_associativity(&m1, &m3, &m4, 24).unwrap();
        assert!(ok, "association orders disagree");
        done += 1;
    }
    println!("[PASS] criterion 5: {done} precondition-satisfying triples evaluate equal in both association orders");
}

#[test]
fn criterion_06_udt_order_invariance() {
    let caps = OracleCaps::default();
    let family = suite_udts(40, 600);
    let mut checked = 0;
    for (tag, udt, _) in &family {
        if udt.vertex_ids().len() > 4 {
            continue;
        }
        let edges: Vec<(u32, u32)> = udt.edges().iter().map(|e| (e.u, e.v)).collect();
        let mut orders: Vec<Vec<(u32, u32)>> = vec![edges.clone()];
        // All permutations of at most three edges.
        permutations(&edges, &mut orders);
        let mut sets: Vec<Vec<Circuit>> = Vec::new();
        for order in &orders {
            let m = udt.evaluate_with_order(order).unwrap();
            sets.push(
                m.enumerate_circuits(&CircuitQuery::default(), caps.max_m)
                    .unwrap(),
            );
        }
        for s in &sets[1..] {
            assert_eq!(
                s, &sets[0],
                "instance {tag}: removal order changed the circuit set"
            );
        }
        checked += 1;
    }
    assert!(checked >= 30);
    println!("[PASS] criterion 6: all edge-removal orders agree on {checked} trees");
}

fn permutations(edges: &[(u32, u32)], out: &mut Vec<Vec<(u32, u32)>>) {
    let mut items = edges.to_vec();
    let n = items.len();
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            out.push(items.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_07_signature_machinery_properties() {
    let caps = OracleCaps::default();
    let family = suite_udts(200, 0);
    let mut class_members = 0usize;
    for (tag, udt, girth) in &family {
        let r = girth - 1;
        for alpha in suite_alphas() {
            let run = run_enumeration(udt, r, alpha, &caps).unwrap();
            // Signature count never exceeds (9m)^(4a).
            let mut signatures = BTreeSet::new();
            for c in &run.circuits {
                let sig = signature_of(udt, c, alpha, r).unwrap();
                // Center count never exceeds 4 * alpha.
                assert!(
                    sig.centers.len() as u64 * alpha.den() <= 4 * alpha.num(),
                    "instance {tag}: {} centers exceed 4a for alpha {alpha}",
                    sig.centers.len()
                );
                // Residual components after removing the centers have
                // projection weight at most r/2.
                let gamma = udt.gamma_of(c.elements());
                for comp in udt_components(udt, &sig.centers) {
                    let w: u64 = comp.iter().map(|v| gamma[v]).sum();
                    assert!(
                        2 * w <= r,
                        "instance {tag}: residual weight {w} exceeds r/2"
                    );
                }
                signatures.insert(sig);
            }
            assert!(
                bounds::signature_count_bound_holds(signatures.len(), udt.total_m(), alpha),
                "instance {tag}: {} signatures exceed (9m)^(4a)",
                signatures.len()
            );
            // Per-class checks: unique projections on multi-center
            // components, and the weight-map identity on every member.
            for class in &run.classes {
                if class.circuits.is_empty() {
                    continue;
                }
                class_members += class.circuits.len();
                check_class_projections(udt, class, tag);
            }
        }
        // Spot-check the full bound report on a subsample.
        if tag % 10 == 0 {
            let rep = circuit_forge_core::decomp::bound_report(udt, r, Alpha::from_int(2), &caps)
                .unwrap();
            assert!(rep.pass, "instance {tag}: bound report flags failed");
        }
    }
    assert!(class_members > 0);
    println!("[PASS] criterion 7: signature machinery invariants hold over {} instances ({class_members} class members)", family.len());
}

fn check_class_projections(
    udt: &Udt,
    class: &circuit_forge_core::decomp::ClassEnumeration,
    tag: &u64,
) {
    let centers = &class.signature.centers;
    let comps = udt_components(udt, centers);
    let projections: Vec<BTreeMap<u32, Vec<Label>>> = class
        .circuits
        .iter()
        .map(|c| udt.project_circuit(c).unwrap().parts)
        .collect();
    for comp in &comps {
        let adjacent: BTreeSet<u32> = centers
            .iter()
            .copied()
            .filter(|&u| comp.iter().any(|&v| udt.edge_between(u, v).is_some()))
            .collect();
        if adjacent.len() < 2 {
            continue;
        }
        // Multi-center component: the subtree projection is the same for
        // every class member.
        let pieces: BTreeSet<Vec<Label>> = projections
            .iter()
            .map(|parts| {
                let mut acc: Vec<Label> = Vec::new();
                for v in comp {
                    acc = symm_diff(&acc, &parts[v]);
                }
                acc
            })
            .collect();
        assert!(
            pieces.len() <= 1,
            "instance {tag}: multi-center component has {} distinct projections",
            pieces.len()
        );
    }
    // Weight-map identity per member and center: the composed piece around a
    // center has exactly the weight given by the hanging-projection rule.
    for parts in &projections {
        for &u in centers {
            let cu = &parts[&u];
            if cu.is_empty() {
                continue;
            }
            let mut composed = cu.clone();
            let mut weight: u64 = 0;
            'element: for &e in cu {
                // Weight of e: |C_T'| - 1 when e leads into a hanging
                // component with a nonempty projection, else 1.
                for comp in &comps {
                    let adjacent: Vec<u32> = centers
                        .iter()
                        .copied()
                        .filter(|&w| comp.iter().any(|&v| udt.edge_between(w, v).is_some()))
                        .collect();
                    if adjacent != vec![u] {
                        continue;
                    }
                    let v = comp
                        .iter()
                        .find(|&&v| udt.edge_between(u, v).is_some())
                        .unwrap();
                    let shared = &udt.edge_between(u, *v).unwrap().shared;
                    if shared.binary_search(&e).is_ok() {
                        let mut piece: Vec<Label> = Vec::new();
                        for w in comp {
                            piece = symm_diff(&piece, &parts[w]);
                        }
                        assert!(
                            !piece.is_empty(),
                            "instance {tag}: taken shared element with empty hanging projection"
                        );
                        composed = symm_diff(&composed, &piece);
                        weight += piece.len() as u64 - 1;
                        continue 'element;
                    }
                }
                weight += 1;
            }
            assert_eq!(
                composed.len() as u64,
                weight,
                "instance {tag}: weight-map identity broken at center {u}"
            );
        }
    }
}

fn udt_components(udt: &Udt, removed: &BTreeSet<u32>) -> Vec<Vec<u32>> {
    let mut left: BTreeSet<u32> = udt
        .vertex_ids()
        .into_iter()
        .filter(|v| !removed.contains(v))
        .collect();
    let mut comps = Vec::new();
    while let Some(&start) = left.iter().next() {
        let mut comp = vec![start];
        let mut stack = vec![start];
        left.remove(&start);
        while let Some(v) = stack.pop() {
            let neighbors: Vec<u32> = left
                .iter()
                .copied()
                .filter(|&w| udt.edge_between(v, w).is_some())
                .collect();
            for w in neighbors {
                left.remove(&w);
                comp.push(w);
                stack.push(w);
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

#[test]
fn criterion_08_lattice_layer() {
    use circuit_forge_core::lattice::{
        conformal_decompose, enumerate_short_vectors, is_conformal, short_vectors_box_oracle,
        LatticeVector, TuMatrix,
    };
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut instances: Vec<TuMatrix> = Vec::new();
    // Bipartite incidence matrices.
    while instances.len() < 25 {
        let p = 2 + rng.gen_range(0..3u64) as usize;
        let q = 2 + rng.gen_range(0..3u64) as usize;
        let m_edges = (p * q).min(4 + rng.gen_range(0..9u64) as usize);
        let mut cols: BTreeSet<(usize, usize)> = BTreeSet::new();
        while cols.len() < m_edges {
            cols.insert((
                rng.gen_range(0..p as u64) as usize,
                rng.gen_range(0..q as u64) as usize,
            ));
        }
        let mut rows = vec![vec![0i64; cols.len()]; p + q];
        for (j, (a, b)) in cols.iter().enumerate() {
            rows[*a][j] = 1;
            rows[p + b][j] = 1;
        }
        instances.push(TuMatrix::from_rows(&rows).unwrap());
    }
    // Network matrices: oriented incidence of random connected digraphs.
    while instances.len() < 50 {
        let n = 4 + rng.gen_range(0..4u64) as usize;
        let m_edges = (n + rng.gen_range(0..5u64) as usize).min(12);
        let g = random_connected_graph(&mut rng, n, m_edges.saturating_sub(n), 1);
        let mut rows = vec![vec![0i64; g.m()]; g.n()];
        for (j, e) in g.edges().iter().enumerate() {
            rows[e.u][j] = 1;
            rows[e.v][j] = -1;
        }
        instances.push(TuMatrix::from_rows(&rows).unwrap());
    }
    let mut shortvec_checked = 0;
    for (idx, a) in instances.iter().enumerate() {
        assert!(a.cols() <= 12);
        // Every instance family is totally unimodular by construction;
        // verify exhaustively where the minor cap allows.
        if a.rows().min(a.cols()) <= 8 {
            assert!(
                a.is_totally_unimodular(8).unwrap(),
                "instance {idx} is not TU"
            );
        }
        let circuits = a.matrix_circuits(None, 20).unwrap();
        for c in &circuits {
            assert!(
                c.vector.0.iter().all(|&x| x.abs() <= 1),
                "instance {idx}: entry outside -1..1"
            );
        }
        // Supports match the GF(2) matroid circuits exactly.
        let mut supports: Vec<Vec<Label>> = circuits
            .iter()
            .map(|c| {
                c.vector
                    .support()
                    .iter()
                    .map(|&i| Label(i as u32))
                    .collect()
            })
            .collect();
        supports.sort_unstable();
        let gf2: Vec<Vec<Label>> = a
            .gf2_matroid()
            .unwrap()
            .enumerate_circuits(&CircuitQuery::default(), 24)
            .unwrap()
            .into_iter()
            .map(|c| c.elements().to_vec())
            .collect();
        assert_eq!(
            supports, gf2,
            "instance {idx}: circuit supports disagree with the binary matroid"
        );
        if circuits.is_empty() {
            continue;
        }
        // Conformal decomposition on sampled kernel vectors.
        for _ in 0..3 {
            let mut v = vec![0i64; a.cols()];
            for c in &circuits {
                let coef = rng.gen_range(0..4u64) as i64 - 1; // -1, 0, 1, 2
                for (i, x) in c.vector.0.iter().enumerate() {
                    v[i] += coef * x;
                }
            }
            let v = LatticeVector(v);
            if v.is_zero() {
                continue;
            }
            let parts = conformal_decompose(a, &v, 20).unwrap();
            let mut sum = vec![0i64; a.cols()];
            let mut norm_sum = 0u64;
            for p in &parts {
                assert!(
                    is_conformal(&p.vector, &v).unwrap(),
                    "instance {idx}: part not conformal"
                );
                for (i, x) in p.vector.0.iter().enumerate() {
                    sum[i] += x;
                }
                norm_sum += p.vector.norm2();
            }
            assert_eq!(
                sum, v.0,
                "instance {idx}: parts do not reassemble the vector"
            );
            assert!(
                norm_sum <= v.norm2(),
                "instance {idx}: squared norms not superadditive"
            );
        }
        // Short vectors against the box oracle.
        let girth = circuits.iter().map(|c| c.vector.norm2()).min().unwrap();
        if girth < 2 {
            continue;
        }
        let lambda2 = girth - 1;
        for alpha in [Alpha::from_int(1), Alpha::new(3, 2).unwrap()] {
            let got = enumerate_short_vectors(a, lambda2, alpha, 20).unwrap();
            let cap = (alpha.num() * alpha.num() * lambda2) / (alpha.den() * alpha.den());
            let expect = short_vectors_box_oracle(a, cap).unwrap();
            assert_eq!(
                got, expect,
                "instance {idx}: short vectors disagree with the box oracle"
            );
            shortvec_checked += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "runtime {elapsed:?} exceeds 2 minutes"
    );
    println!(
        "[PASS] criterion 8: {} TU matrices verified (supports, conformality, {} short-vector runs) in {:?}",
        instances.len(),
        shortvec_checked,
        elapsed
    );
}

#[test]
fn criterion_09_light_codewords() {
    let caps = OracleCaps::default();
    let mut checked = 0;
    // Built-in leaves, random matrices and evaluated trees, all under m <= 18.
    let mut matroids: Vec<BinaryMatroid> = vec![
        BinaryMatroid::builtin(Builtin::R10),
        BinaryMatroid::builtin(Builtin::F7),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..8 {
        let h = 3 + rng.gen_range(0..3u64) as usize;
        let m = 5 + rng.gen_range(0..9u64) as usize;
        let mask = (1u64 << h) - 1;
        let pairs: Vec<(Label, u64)> = (0..m as u32)
            .map(|i| (Label(i), rng.gen_range(1..=mask)))
            .collect();
        matroids.push(BinaryMatroid::new(h, pairs).unwrap());
    }
    for (tag, udt, _) in suite_udts(6, 900) {
        let m = udt.evaluate().unwrap();
        if m.m() <= 18 {
            matroids.push(m);
        }
        let _ = tag;
    }
    for (idx, m) in matroids.iter().enumerate() {
        assert!(m.m() <= 18);
        let Some(girth) = m.girth(caps.max_m).unwrap() else {
            continue;
        };
        let d = girth as u64;
        for alpha in [Alpha::from_int(1), Alpha::from_int(2)] {
            let got =
                enumerate_light_codewords(CodewordSource::Matroid(m), d, alpha, &caps).unwrap();
            // Independent route: kernel supports filtered by weight.
            let cap = alpha.floor_times(d) as usize;
            let mut expect: Vec<Vec<Label>> = m
                .cycle_space_members(caps.max_m)
                .unwrap()
                .into_iter()
                .filter(|s| s.len() <= cap)
                .collect();
            expect.sort_unstable();
            expect.dedup();
            assert_eq!(got, expect, "matroid {idx}, alpha {alpha}");
            // Union bound: never more codewords than circuits^alpha.
            let q = CircuitQuery::with_size_cap(alpha.floor_times(d));
            let n_circuits = m.enumerate_circuits(&q, caps.max_m).unwrap().len();
            let bound = bounds::BigUint::from(n_circuits.max(1)).pow(alpha.num() as u32);
            assert!(bounds::BigUint::from(got.len()) <= bound);
            checked += 1;
        }
    }
    // Tree-sourced route agrees with the matroid-sourced route.
    for (tag, udt, girth) in suite_udts(4, 1200) {
        if girth < 2 {
            continue;
        }
        let via_tree =
            enumerate_light_codewords(CodewordSource::Tree(&udt), girth, Alpha::from_int(2), &caps)
                .unwrap();
        let m = udt.evaluate().unwrap();
        let via_matroid = enumerate_light_codewords(
            CodewordSource::Matroid(&m),
            girth,
            Alpha::from_int(2),
            &caps,
        )
        .unwrap();
        assert_eq!(via_tree, via_matroid, "instance {tag}");
        checked += 1;
    }
    assert!(checked >= 20);
    println!(
        "[PASS] criterion 9: light codewords equal kernel-support enumeration, {checked} checks"
    );
}

#[test]
fn criterion_10_cli_determinism() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_circuit-forge");
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);

    // Instance files via gen (which itself must be deterministic).
    let gen_udt = |out: &str| {
        vec![
            "gen".to_string(),
            "--kind".into(),
            "udt".into(),
            "--out".into(),
            path(out).display().to_string(),
            "--seed".into(),
            "21".into(),
            "--leaves".into(),
            "3".into(),
            "--max-m".into(),
            "18".into(),
        ]
    };
    let run = |args: &[String]| -> (Vec<u8>, i32) {
        let out = Command::new(bin)
            .args(args)
            .output()
            .expect("spawn circuit-forge");
        (out.stdout, out.status.code().unwrap_or(-1))
    };
    let (out_a, code_a) = run(&gen_udt("a.udt"));
    let bytes_a = std::fs::read(path("a.udt")).unwrap();
    let (out_b, code_b) = run(&gen_udt("a.udt"));
    let bytes_b = std::fs::read(path("a.udt")).unwrap();
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(out_a, out_b);
    assert_eq!(
        bytes_a, bytes_b,
        "gen wrote different files for the same seed"
    );

    std::fs::write(
        path("g.wgr"),
        "4 5\n0 1 0 1\n1 2 1 1\n2 3 2 2\n3 0 3 1\n0 2 4 3\n",
    )
    .unwrap();
    std::fs::write(path("a.tum"), "2 3\n1 1 0\n0 1 1\n").unwrap();
    let r10 = BinaryMatroid::builtin(Builtin::R10).to_gf2m();
    std::fs::write(path("r10.gf2m"), r10).unwrap();

    let udt_file = path("a.udt").display().to_string();
    let commands: Vec<Vec<String>> = vec![
        svec(&[
            "circuits",
            "--matrix",
            &path("r10.gf2m").display().to_string(),
            "--max-size",
            "4",
        ]),
        svec(&[
            "cycles",
            "--graph",
            &path("g.wgr").display().to_string(),
            "--cap",
            "5",
        ]),
        svec(&[
            "cuts",
            "--graph",
            &path("g.wgr").display().to_string(),
            "--r-labels",
            "0",
        ]),
        svec(&[
            "smallcut",
            "--graph",
            &path("g.wgr").display().to_string(),
            "--alpha",
            "1",
            "--trials",
            "1000",
            "--seed",
            "17",
        ]),
        svec(&[
            "near-min", "--udt", &udt_file, "--r", "1", "--alpha", "2", "--verify", "oracle",
        ]),
        svec(&[
            "near-min", "--udt", &udt_file, "--r", "1", "--alpha", "3/2", "--format", "jsonl",
        ]),
        svec(&[
            "lattice",
            "--matrix",
            &path("a.tum").display().to_string(),
            "--check-tu",
            "--circuits",
            "--shortvec",
            "--lambda2",
            "1",
            "--alpha",
            "2",
            "--decompose",
            "1,-1,1",
        ]),
        svec(&[
            "verify-bounds",
            "--instances",
            "3",
            "--seed",
            "33",
            "--max-m",
            "16",
        ]),
    ];
    for args in &commands {
        let (first, code_first) = run(args);
        let (second, code_second) = run(args);
        assert_eq!(code_first, 0, "command {args:?} failed");
        assert_eq!(code_first, code_second);
        assert_eq!(first, second, "command {args:?} is not byte-deterministic");
        assert!(!first.is_empty(), "command {args:?} produced no data");
    }
    println!(
        "[PASS] criterion 10: {} CLI commands byte-identical across reruns",
        commands.len() + 1
    );
}

fn svec(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}
