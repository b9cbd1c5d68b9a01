//! Near-minimum circuit enumeration over a decomposition tree.
//!
//! Circuits of size at most `alpha * r` are classified by a signature: a set
//! of center vertices from a balanced recursive division of the tree (weights
//! are per-vertex projection sizes), plus the pinned shared elements on edges
//! connecting centers toward other centers. Within one class, subtree
//! projections that stay small are unique, so a class is enumerated by
//! weighted circuit search in the center leaves followed by reassembly. The
//! union over all classes is exactly the set of near-minimum circuits, and is
//! verified against the brute-force oracle wherever the ground set fits under
//! the cap.

use crate::bounds;
use crate::gf2::{BinaryMatroid, CircuitQuery, Gf2Error};
use crate::ksum::KsumError;
use crate::types::{intersect, is_subset, set_minus, symm_diff, Alpha, Circuit, Label, OracleCaps};
use crate::udt::Udt;
use num::bigint::BigUint;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("girth promise violated: found circuit {witness} of size {}", witness.len())]
    GirthViolation { witness: Circuit },
    #[error("small-projection uniqueness violated: {0}")]
    UniquenessViolation(String),
    #[error("circuit size {size} exceeds alpha * r")]
    Size { size: usize },
    #[error("set is not a circuit of the evaluated matroid")]
    NotCircuit,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Ksum(#[from] KsumError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// A plain tree on `u32` vertex ids, the shape over which centers and
/// balanced divisions are computed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tree {
    verts: Vec<u32>,
    edges: Vec<(u32, u32)>,
}

impl Tree {
    pub fn new(mut verts: Vec<u32>, edges: Vec<(u32, u32)>) -> Result<Self, DecompError> {
        verts.sort_unstable();
        verts.dedup();
        if verts.is_empty() {
            return Err(DecompError::Precondition("empty tree".into()));
        }
        if edges.len() != verts.len() - 1 {
            return Err(DecompError::Precondition(
                "edge count does not match a tree".into(),
            ));
        }
        let norm: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        for &(a, b) in &norm {
            if a == b || verts.binary_search(&a).is_err() || verts.binary_search(&b).is_err() {
                return Err(DecompError::Precondition(
                    "edge references a missing vertex".into(),
                ));
            }
        }
        let t = Tree { verts, edges: norm };
        if t.components_within(&t.verts.iter().copied().collect(), &BTreeSet::new())
            .len()
            != 1
        {
            return Err(DecompError::Precondition("tree is disconnected".into()));
        }
        Ok(t)
    }

    pub fn of_udt(udt: &Udt) -> Tree {
        Tree {
            verts: udt.vertex_ids(),
            edges: udt.edges().iter().map(|e| (e.u, e.v)).collect(),
        }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.verts
    }

    fn neighbors_in(&self, v: u32, within: &BTreeSet<u32>) -> Vec<u32> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v && within.contains(&b) {
                out.push(b);
            } else if b == v && within.contains(&a) {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }

    /// Connected components of `within ∖ removed`.
    fn components_within(
        &self,
        within: &BTreeSet<u32>,
        removed: &BTreeSet<u32>,
    ) -> Vec<BTreeSet<u32>> {
        let mut left: BTreeSet<u32> = within.difference(removed).copied().collect();
        let mut comps = Vec::new();
        while let Some(&s) = left.iter().next() {
            let mut comp = BTreeSet::new();
            let mut stack = vec![s];
            comp.insert(s);
            left.remove(&s);
            while let Some(v) = stack.pop() {
                for n in self.neighbors_in(v, &left) {
                    left.remove(&n);
                    comp.insert(n);
                    stack.push(n);
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Second vertex on the unique path from `a` to `b`.
    fn step_toward(&self, a: u32, b: u32) -> u32 {
        let all: BTreeSet<u32> = self.verts.iter().copied().collect();
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        let mut stack = vec![a];
        let mut seen: BTreeSet<u32> = [a].into();
        while let Some(v) = stack.pop() {
            for n in self.neighbors_in(v, &all) {
                if seen.insert(n) {
                    parent.insert(n, v);
                    stack.push(n);
                }
            }
        }
        let mut cur = b;
        while parent[&cur] != a {
            cur = parent[&cur];
        }
        cur
    }
}

/// A vertex whose removal from the (sub)tree leaves components of weight at
/// most half the total, found by walking toward the over-heavy side from the
/// lowest-id start.
pub fn find_center(tree: &Tree, gamma: &BTreeMap<u32, u64>) -> Result<u32, DecompError> {
    let within: BTreeSet<u32> = tree.verts.iter().copied().collect();
    find_center_within(tree, gamma, &within)
}

fn find_center_within(
    tree: &Tree,
    gamma: &BTreeMap<u32, u64>,
    within: &BTreeSet<u32>,
) -> Result<u32, DecompError> {
    let weight = |set: &BTreeSet<u32>| -> u128 {
        set.iter()
            .map(|v| *gamma.get(v).unwrap_or(&0) as u128)
            .sum()
    };
    let total: u128 = weight(within);
    let mut current = *within
        .iter()
        .next()
        .ok_or_else(|| DecompError::Precondition("empty subtree".into()))?;
    for _ in 0..=within.len() {
        let removed: BTreeSet<u32> = [current].into();
        let comps = tree.components_within(within, &removed);
        let heavy = comps.iter().max_by_key(|c| weight(c));
        match heavy {
            None => return Ok(current),
            Some(h) if 2 * weight(h) <= total => return Ok(current),
            Some(h) => {
                // Exactly one component can exceed half; step to the
                // neighbor of `current` inside it.
                current = tree
                    .neighbors_in(current, h)
                    .first()
                    .copied()
                    .expect("heavy component touches the current vertex");
            }
        }
    }
    Err(DecompError::Invariant(
        "center walk failed to terminate".into(),
    ))
}

/// Removes at most `2^(p+2)` vertices so every remaining component has
/// weight at most `r/2`, running the `(p+1)`-round recursive division.
/// Requires the total weight to be at most `2^p * r`.
pub fn balanced_division(
    tree: &Tree,
    gamma: &BTreeMap<u32, u64>,
    p: u32,
    r: u64,
) -> Result<BTreeSet<u32>, DecompError> {
    let weight = |set: &BTreeSet<u32>| -> u128 {
        set.iter()
            .map(|v| *gamma.get(v).unwrap_or(&0) as u128)
            .sum()
    };
    let all: BTreeSet<u32> = tree.verts.iter().copied().collect();
    let total = weight(&all);
    if total > (1u128 << p) * r as u128 {
        return Err(DecompError::Precondition(format!(
            "total weight {total} exceeds 2^{p} * {r}"
        )));
    }
    let mut centers: BTreeSet<u32> = BTreeSet::new();
    let mut forest: Vec<BTreeSet<u32>> = vec![all];
    for round in 0..=p {
        // Round threshold: weight > 2^(p-round-1) * r, i.e. 2w > 2^(p-round) r.
        let rhs = (1u128 << (p - round)) * r as u128;
        let mut next: Vec<BTreeSet<u32>> = Vec::new();
        for part in forest {
            if 2 * weight(&part) > rhs {
                let c = find_center_within(tree, gamma, &part)?;
                centers.insert(c);
                let removed: BTreeSet<u32> = [c].into();
                next.extend(tree.components_within(&part, &removed));
            } else {
                next.push(part);
            }
        }
        forest = next;
    }
    debug_assert!(centers.len() <= 1usize << (p + 2));
    debug_assert!(forest.iter().all(|part| 2 * weight(part) <= r as u128));
    Ok(centers)
}

/// The class key of a near-minimum circuit: center vertices plus the pinned
/// shared elements from centers toward other centers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Signature {
    pub centers: BTreeSet<u32>,
    pub pins: BTreeSet<(u32, Label)>,
}

impl Signature {
    pub fn empty() -> Signature {
        Signature {
            centers: BTreeSet::new(),
            pins: BTreeSet::new(),
        }
    }
}

/// All circuits of one signature class, with the per-center candidate counts
/// observed while enumerating.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassEnumeration {
    pub signature: Signature,
    pub circuits: Vec<Circuit>,
    pub per_center_counts: BTreeMap<u32, usize>,
}

fn pins_at(sig: &Signature, u: u32) -> Vec<Label> {
    sig.pins
        .iter()
        .filter(|(a, _)| *a == u)
        .map(|(_, e)| *e)
        .collect()
}

/// Set of neighbors of `u` lying on paths from `u` to other centers.
fn star_neighbors(tree: &Tree, centers: &BTreeSet<u32>, u: u32) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    for &other in centers {
        if other != u {
            out.insert(tree.step_toward(u, other));
        }
    }
    out
}

/// The canonical signature of a circuit of the evaluated tree matroid. The
/// division parameter is the smallest `p` with `2^p >= 2 * alpha`, and every
/// tie in the center walk breaks toward the lowest vertex id, so the result
/// is a function of its inputs.
pub fn signature_of(
    udt: &Udt,
    c: &Circuit,
    alpha: Alpha,
    r: u64,
) -> Result<Signature, DecompError> {
    if !alpha.ge_times(c.len() as u64, r) {
        return Err(DecompError::Size { size: c.len() });
    }
    let projection = udt.project_circuit(c).map_err(|e| match e {
        KsumError::NotCircuit => DecompError::NotCircuit,
        other => DecompError::Ksum(other),
    })?;
    let tree = Tree::of_udt(udt);
    let gamma = udt.gamma_of(c.elements());
    let p = alpha.min_pow2_ge_twice();
    let centers = balanced_division(&tree, &gamma, p, r)?;
    let mut pins = BTreeSet::new();
    for &u in &centers {
        let leaf_ground = udt
            .leaf_matroid(u)
            .expect("center is a vertex")
            .ground_set();
        for v in star_neighbors(&tree, &centers, u) {
            let part_v = projection.parts.get(&v).cloned().unwrap_or_default();
            let common = intersect(leaf_ground, &part_v);
            if common.len() != 1 {
                return Err(DecompError::Invariant(format!(
                    "projection at {v} meets the ground set of center {u} in {} elements",
                    common.len()
                )));
            }
            pins.insert((u, common[0]));
        }
    }
    Ok(Signature { centers, pins })
}

/// The unique small circuit of a subtree matroid compatible with a fixed
/// boundary: contains `required`, avoids the other boundary elements, and has
/// at most `floor(r/2)` elements outside the boundary.
fn unique_boundary_projection(
    m_sub: &BinaryMatroid,
    required: &[Label],
    forbidden: &[Label],
    r: u64,
    cap: usize,
) -> Result<Option<Circuit>, DecompError> {
    let q = CircuitQuery {
        weights: None,
        weight_cap: Some(r as u128 / 2 + required.len() as u128),
        required: required.to_vec(),
        forbidden: forbidden.to_vec(),
    };
    let mut found = m_sub.enumerate_circuits(&q, cap)?;
    match found.len() {
        0 => Ok(None),
        1 => Ok(Some(found.pop().unwrap())),
        n => Err(DecompError::UniquenessViolation(format!(
            "{n} small circuits share the boundary {required:?}; the girth promise is false"
        ))),
    }
}

struct CenterPlan {
    center: u32,
    required: Vec<Label>,
    forbidden: Vec<Label>,
    weights: BTreeMap<Label, u64>,
    /// Replacement circuits for shared elements toward hanging subtrees.
    replacements: BTreeMap<Label, Circuit>,
}

/// All circuits of size at most `alpha * r` whose canonical signature equals
/// `sig`. The enumeration may build a superset of candidates and filters by
/// exact signature match, so the output is exact.
pub fn enumerate_class(
    udt: &Udt,
    sig: &Signature,
    alpha: Alpha,
    r: u64,
    caps: &OracleCaps,
) -> Result<ClassEnumeration, DecompError> {
    let empty = |sig: &Signature| ClassEnumeration {
        signature: sig.clone(),
        circuits: Vec::new(),
        per_center_counts: BTreeMap::new(),
    };
    let tree = Tree::of_udt(udt);
    let all: BTreeSet<u32> = tree.verts.iter().copied().collect();
    for &u in &sig.centers {
        if !all.contains(&u) {
            return Ok(empty(sig));
        }
    }
    // Every pin must name a shared element of an edge at its center.
    for &(u, e) in &sig.pins {
        if !sig.centers.contains(&u) {
            return Ok(empty(sig));
        }
        let on_edge = udt
            .edges()
            .iter()
            .any(|ed| (ed.u == u || ed.v == u) && ed.shared.binary_search(&e).is_ok());
        if !on_edge {
            return Ok(empty(sig));
        }
    }
    let composed = udt.evaluate()?;
    let ground = udt.ground_set();

    if sig.centers.is_empty() {
        // Only circuits of total size <= r/2 can carry the empty signature,
        // and any such circuit already violates the girth promise.
        if composed.m() <= caps.max_m {
            let q = CircuitQuery::with_size_cap(r / 2);
            if let Some(c) = composed
                .enumerate_circuits(&q, caps.max_m)?
                .into_iter()
                .next()
            {
                return Err(DecompError::GirthViolation { witness: c });
            }
        }
        return Ok(empty(sig));
    }

    let comps = tree.components_within(&all, &sig.centers);
    // Components adjacent to at least two centers have their boundary fixed
    // by the pins; the rest hang off a single center.
    let mut fixed_parts: Vec<Circuit> = Vec::new();
    let mut hanging: BTreeMap<u32, Vec<BTreeSet<u32>>> = BTreeMap::new();
    for comp in &comps {
        let mut adjacent: BTreeSet<u32> = BTreeSet::new();
        for &u in &sig.centers {
            if !tree.neighbors_in(u, comp).is_empty() {
                adjacent.insert(u);
            }
        }
        match adjacent.len() {
            0 => {
                return Err(DecompError::Invariant(
                    "component of a connected tree borders no center".into(),
                ))
            }
            1 => {
                let u = *adjacent.iter().next().unwrap();
                hanging.entry(u).or_default().push(comp.clone());
            }
            _ => {
                let m_sub = udt.evaluate_subtree(comp)?;
                let mut required: Vec<Label> = Vec::new();
                let mut forbidden: Vec<Label> = Vec::new();
                for &u in &adjacent {
                    let v = tree.neighbors_in(u, comp)[0];
                    let shared = &udt.edge_between(u, v).expect("tree edge").shared;
                    let pinned: Vec<Label> = pins_at(sig, u)
                        .into_iter()
                        .filter(|e| shared.binary_search(e).is_ok())
                        .collect();
                    if pinned.is_empty() {
                        // A true class member must use this border edge.
                        return Ok(empty(sig));
                    }
                    required.extend(pinned.iter().copied());
                    forbidden.extend(set_minus(shared, &pinned));
                }
                required.sort_unstable();
                required.dedup();
                forbidden.sort_unstable();
                match unique_boundary_projection(&m_sub, &required, &forbidden, r, caps.max_m)? {
                    Some(cir) => fixed_parts.push(cir),
                    None => return Ok(empty(sig)),
                }
            }
        }
    }

    // Per-center plans: required pins, forbidden shared elements, and the
    // weighted replacement bookkeeping for hanging subtrees.
    let mut plans: Vec<CenterPlan> = Vec::new();
    for &u in &sig.centers {
        let leaf = udt.leaf_matroid(u).expect("center is a vertex");
        let r_u = {
            let mut v = pins_at(sig, u);
            v.sort_unstable();
            v
        };
        for e in &r_u {
            if !leaf.contains_label(*e) {
                return Ok(empty(sig));
            }
        }
        let mut forbidden: Vec<Label> = Vec::new();
        let mut weights: BTreeMap<Label, u64> = BTreeMap::new();
        let mut replacements: BTreeMap<Label, Circuit> = BTreeMap::new();
        let hanging_sets: Vec<BTreeSet<u32>> = hanging.get(&u).cloned().unwrap_or_default();
        for v in udt.neighbors(u) {
            let shared = udt.edge_between(u, v).expect("tree edge").shared.clone();
            if shared.is_empty() {
                continue;
            }
            let hangs = hanging_sets.iter().find(|comp| comp.contains(&v));
            match hangs {
                None => {
                    // Toward another center or a boundary-fixed component:
                    // only the pinned element may appear.
                    forbidden.extend(
                        shared
                            .iter()
                            .copied()
                            .filter(|e| r_u.binary_search(e).is_err()),
                    );
                }
                Some(comp) => {
                    let m_sub = udt.evaluate_subtree(comp)?;
                    for &s in &shared {
                        let others = set_minus(&shared, &[s]);
                        match unique_boundary_projection(&m_sub, &[s], &others, r, caps.max_m)? {
                            None => forbidden.push(s),
                            Some(cir) => {
                                if cir.len() < 2 {
                                    return Err(DecompError::Invariant(format!(
                                        "shared element {s} forms a loop circuit in its subtree"
                                    )));
                                }
                                weights.insert(s, cir.len() as u64 - 1);
                                replacements.insert(s, cir);
                            }
                        }
                    }
                }
            }
        }
        forbidden.sort_unstable();
        forbidden.dedup();
        if r_u.iter().any(|e| forbidden.binary_search(e).is_ok()) {
            return Ok(empty(sig));
        }
        plans.push(CenterPlan {
            center: u,
            required: r_u,
            forbidden,
            weights,
            replacements,
        });
    }

    // Girth diagnostic: a circuit of the reduced center leaf avoiding the
    // pins with weight at most r composes to a small disjoint circuit union
    // of the full matroid, contradicting the promise.
    for plan in &plans {
        let leaf = udt.leaf_matroid(plan.center).unwrap();
        let mut avoid = plan.forbidden.clone();
        avoid.extend(plan.required.iter().copied());
        avoid.sort_unstable();
        avoid.dedup();
        let q = CircuitQuery {
            weights: Some(plan.weights.clone()),
            weight_cap: Some(r as u128),
            required: Vec::new(),
            forbidden: avoid,
        };
        if let Some(d) = leaf.enumerate_circuits(&q, caps.max_m)?.into_iter().next() {
            let mut composed_set = d.elements().to_vec();
            for e in d.elements() {
                if let Some(rep) = plan.replacements.get(e) {
                    composed_set = symm_diff(&composed_set, rep.elements());
                }
            }
            let witness = composed
                .decompose_symmetric_difference(&composed_set)
                .ok()
                .and_then(|parts| parts.into_iter().next())
                .unwrap_or_else(|| Circuit::from_labels(composed_set));
            return Err(DecompError::GirthViolation { witness });
        }
    }

    // Candidate circuits per center.
    let mut candidate_lists: Vec<Vec<Circuit>> = Vec::new();
    let mut per_center_counts: BTreeMap<u32, usize> = BTreeMap::new();
    for plan in &plans {
        let leaf = udt.leaf_matroid(plan.center).unwrap();
        let cap = alpha.floor_times(r) + plan.required.len() as u64;
        let q = CircuitQuery {
            weights: Some(plan.weights.clone()),
            weight_cap: Some(cap as u128),
            required: plan.required.clone(),
            forbidden: plan.forbidden.clone(),
        };
        let cands = leaf.enumerate_circuits(&q, caps.max_m)?;
        // The bound-facing count only admits candidates within alpha * r.
        let weight_of = |c: &Circuit| -> u64 {
            c.elements()
                .iter()
                .map(|e| plan.weights.get(e).copied().unwrap_or(1))
                .sum()
        };
        let within = cands
            .iter()
            .filter(|c| alpha.ge_times(weight_of(c), r))
            .count();
        per_center_counts.insert(plan.center, within);
        candidate_lists.push(cands);
    }

    // An empty candidate list for any center empties the whole class.
    if candidate_lists.iter().any(|l| l.is_empty()) {
        return Ok(ClassEnumeration {
            signature: sig.clone(),
            circuits: Vec::new(),
            per_center_counts,
        });
    }

    // Reassemble: fixed parts, then one candidate per center with its
    // hanging-subtree replacements folded in.
    let mut base: Vec<Label> = Vec::new();
    for part in &fixed_parts {
        base = symm_diff(&base, part.elements());
    }
    let mut out: BTreeSet<Circuit> = BTreeSet::new();
    let mut idx = vec![0usize; plans.len()];
    'product: loop {
        let mut x = base.clone();
        for (k, plan) in plans.iter().enumerate() {
            let cand = &candidate_lists[k][idx[k]];
            let mut piece = cand.elements().to_vec();
            for e in cand.elements() {
                if let Some(rep) = plan.replacements.get(e) {
                    piece = symm_diff(&piece, rep.elements());
                }
            }
            x = symm_diff(&x, &piece);
        }
        if is_subset(&x, &ground)
            && !x.is_empty()
            && alpha.ge_times(x.len() as u64, r)
            && composed.is_circuit(&x)?
        {
            let candidate = Circuit::from_labels(x);
            if signature_of(udt, &candidate, alpha, r)? == *sig {
                out.insert(candidate);
            }
        }
        // Advance the mixed-radix index.
        for k in 0..plans.len() {
            idx[k] += 1;
            if idx[k] < candidate_lists[k].len() {
                continue 'product;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(ClassEnumeration {
        signature: sig.clone(),
        circuits: out.into_iter().collect(),
        per_center_counts,
    })
}

/// One full enumeration run: circuits, the classes that produced them, and
/// whether the girth promise was oracle-verified.
#[derive(Clone, Debug)]
pub struct EnumerationRun {
    pub circuits: Vec<Circuit>,
    pub classes: Vec<ClassEnumeration>,
    pub girth_verified: bool,
}

/// A pinnable tree edge: endpoints, the centers pinned on it, and the
/// shared elements to choose from.
type PinEdge = ((u32, u32), Vec<u32>, Vec<Label>);

/// Every well-formed candidate signature for the tree: subsets of vertices as
/// centers, with one shared element chosen per pinned border edge.
fn candidate_signatures(udt: &Udt, alpha: Alpha) -> Vec<Signature> {
    let tree = Tree::of_udt(udt);
    let verts = tree.verts.clone();
    let p = alpha.min_pow2_ge_twice();
    let max_centers = verts.len().min(1usize << (p + 2));
    let mut out = Vec::new();
    'subset: for mask in 0u64..(1u64 << verts.len()) {
        let centers: BTreeSet<u32> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        if centers.len() > max_centers {
            continue;
        }
        // Pin slots, grouped per tree edge so a center-center edge carries
        // the same element on both sides.
        let mut slot_edges: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        for &u in &centers {
            for v in star_neighbors(&tree, &centers, u) {
                let key = (u.min(v), u.max(v));
                slot_edges.entry(key).or_default().push(u);
            }
        }
        let mut edges: Vec<PinEdge> = Vec::new();
        for ((a, b), pinned_centers) in slot_edges {
            let shared = udt.edge_between(a, b).expect("tree edge").shared.clone();
            if shared.is_empty() {
                // No circuit can span a 1-sum edge between centers.
                continue 'subset;
            }
            edges.push(((a, b), pinned_centers, shared));
        }
        // Cartesian product over the per-edge element choices.
        let mut choice = vec![0usize; edges.len()];
        loop {
            let mut pins = BTreeSet::new();
            for (k, (_, pinned_centers, shared)) in edges.iter().enumerate() {
                for &u in pinned_centers {
                    pins.insert((u, shared[choice[k]]));
                }
            }
            out.push(Signature {
                centers: centers.clone(),
                pins,
            });
            let mut k = 0;
            loop {
                if k == edges.len() {
                    break;
                }
                choice[k] += 1;
                if choice[k] < edges[k].2.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == edges.len() {
                break;
            }
        }
    }
    out
}

/// Runs the full signature-classified enumeration. When the composed ground
/// set fits under the oracle cap the girth promise is verified first and a
/// violation is reported with a witness; above the cap the promise is
/// trusted.
pub fn run_enumeration(
    udt: &Udt,
    r: u64,
    alpha: Alpha,
    caps: &OracleCaps,
) -> Result<EnumerationRun, DecompError> {
    if !alpha.at_least_one() {
        return Err(DecompError::Precondition("alpha must be at least 1".into()));
    }
    if udt.vertex_ids().len() > 24 {
        return Err(DecompError::Precondition(
            "signature enumeration over more than 24 tree vertices is out of scale".into(),
        ));
    }
    let composed = udt.evaluate()?;
    let mut girth_verified = false;
    if composed.m() <= caps.max_m {
        let q = CircuitQuery::with_size_cap(r);
        if let Some(w) = composed
            .enumerate_circuits(&q, caps.max_m)?
            .into_iter()
            .next()
        {
            return Err(DecompError::GirthViolation { witness: w });
        }
        girth_verified = true;
    }
    let mut classes = Vec::new();
    let mut circuits: BTreeSet<Circuit> = BTreeSet::new();
    for sig in candidate_signatures(udt, alpha) {
        let class = enumerate_class(udt, &sig, alpha, r, caps)?;
        for c in &class.circuits {
            circuits.insert(c.clone());
        }
        if !class.circuits.is_empty() || !class.per_center_counts.is_empty() {
            classes.push(class);
        }
    }
    Ok(EnumerationRun {
        circuits: circuits.into_iter().collect(),
        classes,
        girth_verified,
    })
}

/// Exactly the circuits of the evaluated tree matroid of size at most
/// `alpha * r`, assuming no circuit has size at most `r`.
pub fn enumerate_near_min_circuits(
    udt: &Udt,
    r: u64,
    alpha: Alpha,
    caps: &OracleCaps,
) -> Result<Vec<Circuit>, DecompError> {
    Ok(run_enumeration(udt, r, alpha, caps)?.circuits)
}

/// Observed counts against the closed-form caps for one instance.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub m: usize,
    pub r: u64,
    pub alpha: Alpha,
    pub circuits_observed: usize,
    pub signatures_observed: usize,
    pub max_class_size: usize,
    pub max_center_candidates: usize,
    pub bound_9m: BigUint,
    pub bound_class: BigUint,
    pub girth_verified: bool,
    pub signature_bound_ok: bool,
    pub center_bound_ok: bool,
    pub class_bound_ok: bool,
    pub pass: bool,
}

pub fn bound_report(
    udt: &Udt,
    r: u64,
    alpha: Alpha,
    caps: &OracleCaps,
) -> Result<BoundReport, DecompError> {
    let run = run_enumeration(udt, r, alpha, caps)?;
    let m = udt.total_m();
    let mut signatures: BTreeSet<Signature> = BTreeSet::new();
    for c in &run.circuits {
        signatures.insert(signature_of(udt, c, alpha, r)?);
    }
    let max_class_size = run
        .classes
        .iter()
        .map(|c| c.circuits.len())
        .max()
        .unwrap_or(0);
    let max_center_candidates = run
        .classes
        .iter()
        .flat_map(|c| c.per_center_counts.values().copied())
        .max()
        .unwrap_or(0);
    let signature_bound_ok = bounds::signature_count_bound_holds(signatures.len(), m, alpha);
    let center_bound_ok = bounds::center_class_bound_holds(max_center_candidates, m, alpha);
    let class_bound_ok = bounds::class_size_bound_holds(max_class_size, m, alpha);
    let pass = signature_bound_ok && center_bound_ok && class_bound_ok;
    Ok(BoundReport {
        m,
        r,
        alpha,
        circuits_observed: run.circuits.len(),
        signatures_observed: signatures.len(),
        max_class_size,
        max_center_candidates,
        bound_9m: bounds::signature_count_bound(m, alpha),
        bound_class: bounds::center_class_bound(m, alpha),
        girth_verified: run.girth_verified,
        signature_bound_ok,
        center_bound_ok,
        class_bound_ok,
        pass,
    })
}

/// Where light codewords are enumerated from.
pub enum CodewordSource<'a> {
    Tree(&'a Udt),
    Matroid(&'a BinaryMatroid),
}

/// All disjoint unions of at most `alpha` circuits with total size at most
/// `alpha * d`, given that every circuit has size at least `d`. These are
/// exactly the weight-bounded nonzero codewords of the code whose parity
/// check matrix represents the matroid.
pub fn enumerate_light_codewords(
    source: CodewordSource<'_>,
    d: u64,
    alpha: Alpha,
    caps: &OracleCaps,
) -> Result<Vec<Vec<Label>>, DecompError> {
    if d == 0 {
        return Err(DecompError::Precondition(
            "distance must be at least 1".into(),
        ));
    }
    let size_cap = alpha.floor_times(d);
    let circuits: Vec<Circuit> = match source {
        CodewordSource::Matroid(m) => {
            let q = CircuitQuery::with_size_cap(size_cap);
            let all = m.enumerate_circuits(&q, caps.max_m)?;
            if let Some(w) = all.iter().find(|c| (c.len() as u64) < d) {
                return Err(DecompError::GirthViolation { witness: w.clone() });
            }
            all
        }
        CodewordSource::Tree(udt) => {
            if d == 1 {
                let m = udt.evaluate()?;
                let q = CircuitQuery::with_size_cap(size_cap);
                m.enumerate_circuits(&q, caps.max_m)?
            } else {
                // Girth >= d means no circuit of size <= d - 1; target size
                // alpha * d equals (alpha d / (d-1)) * (d-1).
                let scaled = Alpha::new(alpha.num() * d, alpha.den() * (d - 1))
                    .expect("nonzero denominator");
                enumerate_near_min_circuits(udt, d - 1, scaled, caps)?
            }
        }
    };
    let max_parts = alpha.floor_times(1) as usize;
    let mut out: BTreeSet<Vec<Label>> = BTreeSet::new();
    #[allow(clippy::too_many_arguments)]
    fn grow(
        circuits: &[Circuit],
        from: usize,
        acc: &[Label],
        total: u64,
        parts: usize,
        size_cap: u64,
        max_parts: usize,
        out: &mut BTreeSet<Vec<Label>>,
    ) {
        if parts >= 1 {
            out.insert(acc.to_vec());
        }
        if parts == max_parts {
            return;
        }
        for j in from..circuits.len() {
            let c = circuits[j].elements();
            if total + c.len() as u64 > size_cap {
                continue;
            }
            if !intersect(acc, c).is_empty() {
                continue;
            }
            let next: Vec<Label> = crate::types::set_union(acc, c);
            grow(
                circuits,
                j + 1,
                &next,
                total + c.len() as u64,
                parts + 1,
                size_cap,
                max_parts,
                out,
            );
        }
    }
    grow(&circuits, 0, &[], 0, 0, size_cap, max_parts, &mut out);
    Ok(out.into_iter().collect())
}
