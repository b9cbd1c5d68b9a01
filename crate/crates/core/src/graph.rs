//! Weighted multigraphs, their graphic and cographic matroids, exhaustive
//! near-minimum cycle and cut-set enumeration with a required edge set, and
//! the seeded random-contraction cut sampler.

pub use crate::bounds::graphic_set_bound;
use crate::gf2::{BinaryMatroid, Gf2Error};
use crate::types::{Circuit, CutSet, Label};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("duplicate edge label {0}")]
    DuplicateLabel(Label),
    #[error("unknown edge label {0}")]
    UnknownLabel(Label),
    #[error("edge weights must be positive (label {0})")]
    NonPositiveWeight(Label),
    #[error("self-loops are not supported here (label {0})")]
    UnsupportedLoop(Label),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex count {n} exceeds the cut enumeration cap of {cap}")]
    OracleCap { n: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    pub label: Label,
    pub weight: u64,
}

/// An undirected weighted multigraph on vertices `0..n`. Self-loops may be
/// stored (degenerate inputs) but every matroid or enumeration operation
/// rejects them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<GraphEdge>,
}

/// Filters for cycle enumeration.
#[derive(Clone, Debug, Default)]
pub struct CycleQuery {
    pub required: Vec<Label>,
    pub weight_cap: Option<u128>,
}

/// Filters for minimal cut-set enumeration.
#[derive(Clone, Debug)]
pub struct CutQuery {
    pub required: Vec<Label>,
    pub weight_cap: Option<u128>,
    pub n_cap: usize,
}

impl Default for CutQuery {
    fn default() -> Self {
        CutQuery {
            required: Vec::new(),
            weight_cap: None,
            n_cap: 16,
        }
    }
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<GraphEdge>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.u >= n {
                return Err(GraphError::VertexOutOfRange(e.u, n));
            }
            if e.v >= n {
                return Err(GraphError::VertexOutOfRange(e.v, n));
            }
            if e.weight == 0 {
                return Err(GraphError::NonPositiveWeight(e.label));
            }
            if !seen.insert(e.label) {
                return Err(GraphError::DuplicateLabel(e.label));
            }
        }
        Ok(WeightedGraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn edge_by_label(&self, l: Label) -> Result<&GraphEdge, GraphError> {
        self.edges
            .iter()
            .find(|e| e.label == l)
            .ok_or(GraphError::UnknownLabel(l))
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|e| e.u == e.v)
    }

    fn reject_loops(&self) -> Result<(), GraphError> {
        if let Some(e) = self.edges.iter().find(|e| e.u == e.v) {
            return Err(GraphError::UnsupportedLoop(e.label));
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Vertex-edge incidence matrix over GF(2); circuits of the result are
    /// exactly the simple cycles of the graph.
    pub fn graphic_matroid(&self) -> Result<BinaryMatroid, GraphError> {
        self.reject_loops()?;
        if self.n > crate::gf2::MAX_HEIGHT {
            return Err(GraphError::OracleCap {
                n: self.n,
                cap: crate::gf2::MAX_HEIGHT,
            });
        }
        let pairs: Vec<(Label, u64)> = self
            .edges
            .iter()
            .map(|e| (e.label, (1u64 << e.u) | (1u64 << e.v)))
            .collect();
        Ok(BinaryMatroid::new(self.n, pairs)?)
    }

    /// Dual of the graphic matroid; circuits are the minimal cut-sets.
    pub fn cographic_matroid(&self) -> Result<BinaryMatroid, GraphError> {
        Ok(self.graphic_matroid()?.dual()?)
    }

    fn weight_of(&self, labels: &[Label]) -> u128 {
        self.edges
            .iter()
            .filter(|e| labels.binary_search(&e.label).is_ok())
            .map(|e| e.weight as u128)
            .sum()
    }

    /// All simple cycles `C` with `required ⊆ C` and `w(C) <= weight_cap`,
    /// found by DFS path search with remaining-budget pruning. Independent of
    /// the GF(2) circuit oracle.
    pub fn enumerate_cycles(&self, q: &CycleQuery) -> Result<Vec<Circuit>, GraphError> {
        self.reject_loops()?;
        for &l in &q.required {
            self.edge_by_label(l)?;
        }
        let cap = q.weight_cap.unwrap_or(u128::MAX);
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n]; // (edge idx, other)
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((i, e.v));
            adj[e.v].push((i, e.u));
        }
        let mut found: BTreeSet<Circuit> = BTreeSet::new();
        let mut required = q.required.clone();
        required.sort_unstable();

        if required.is_empty() {
            // Root the search at each vertex in turn, visiting only vertices
            // with a larger index; duplicates from the two traversal
            // directions collapse in the output set.
            for start in 0..self.n {
                let mut visited = vec![false; self.n];
                visited[start] = true;
                let mut path: Vec<usize> = Vec::new();
                self.cycle_dfs(
                    start,
                    start,
                    &adj,
                    &mut visited,
                    &mut path,
                    0,
                    cap,
                    &mut found,
                );
            }
        } else {
            // Root at the lowest-labeled required edge and search for simple
            // paths closing it.
            let root_label = required[0];
            let root_idx = self
                .edges
                .iter()
                .position(|e| e.label == root_label)
                .unwrap();
            let root = self.edges[root_idx];
            let budget = cap;
            let mut visited = vec![false; self.n];
            visited[root.v] = true;
            let mut path = vec![root_idx];
            if (root.weight as u128) <= budget {
                self.path_dfs(
                    root.v,
                    root.u,
                    root.v,
                    &adj,
                    &mut visited,
                    &mut path,
                    root.weight as u128,
                    budget,
                    &required,
                    &mut found,
                );
            }
        }
        Ok(found.into_iter().collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        start: usize,
        at: usize,
        adj: &[Vec<(usize, usize)>],
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        acc: u128,
        cap: u128,
        found: &mut BTreeSet<Circuit>,
    ) {
        for &(ei, other) in &adj[at] {
            let w = self.edges[ei].weight as u128;
            if acc + w > cap {
                continue;
            }
            if other == start {
                // Closing edge; require at least two distinct edges.
                if !path.is_empty() && !path.contains(&ei) {
                    let mut labels: Vec<Label> =
                        path.iter().map(|&i| self.edges[i].label).collect();
                    labels.push(self.edges[ei].label);
                    found.insert(Circuit::from_labels(labels));
                }
            } else if other > start && !visited[other] {
                visited[other] = true;
                path.push(ei);
                self.cycle_dfs(start, other, adj, visited, path, acc + w, cap, found);
                path.pop();
                visited[other] = false;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn path_dfs(
        &self,
        at: usize,
        target: usize,
        origin: usize,
        adj: &[Vec<(usize, usize)>],
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        acc: u128,
        cap: u128,
        required: &[Label],
        found: &mut BTreeSet<Circuit>,
    ) {
        if at == target {
            let labels: Vec<Label> = path.iter().map(|&i| self.edges[i].label).collect();
            let c = Circuit::from_labels(labels);
            if required.iter().all(|l| c.contains(*l)) {
                found.insert(c);
            }
            return;
        }
        for &(ei, other) in &adj[at] {
            if path.contains(&ei) {
                continue;
            }
            let w = self.edges[ei].weight as u128;
            if acc + w > cap {
                continue;
            }
            // The target is entered only as the final vertex; the origin may
            // not be revisited.
            if other != target && (visited[other] || other == origin) {
                continue;
            }
            if other != target {
                visited[other] = true;
            }
            path.push(ei);
            self.path_dfs(
                other,
                target,
                origin,
                adj,
                visited,
                path,
                acc + w,
                cap,
                required,
                found,
            );
            path.pop();
            if other != target {
                visited[other] = false;
            }
        }
    }

    fn components_of(&self, side: &[usize]) -> Vec<Vec<usize>> {
        let inside: BTreeSet<usize> = side.iter().copied().collect();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut comps = Vec::new();
        for &s in side {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = vec![s];
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(v) = stack.pop() {
                for e in &self.edges {
                    for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                        if a == v && inside.contains(&b) && !seen.contains(&b) {
                            seen.insert(b);
                            comp.push(b);
                            stack.push(b);
                        }
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn crossing_edges(&self, in_a: &[bool]) -> Vec<Label> {
        let mut out: Vec<Label> = self
            .edges
            .iter()
            .filter(|e| in_a[e.u] != in_a[e.v])
            .map(|e| e.label)
            .collect();
        out.sort_unstable();
        out
    }

    /// All inclusion-wise minimal cut-sets `C` with `required ⊆ C` and
    /// `w(C) <= weight_cap`, by exhausting vertex bipartitions whose sides
    /// both induce connected subgraphs.
    pub fn enumerate_min_cutsets(&self, q: &CutQuery) -> Result<Vec<CutSet>, GraphError> {
        self.reject_loops()?;
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        if self.n > q.n_cap {
            return Err(GraphError::OracleCap {
                n: self.n,
                cap: q.n_cap,
            });
        }
        for &l in &q.required {
            self.edge_by_label(l)?;
        }
        let cap = q.weight_cap.unwrap_or(u128::MAX);
        let mut required = q.required.clone();
        required.sort_unstable();
        let mut out: BTreeSet<CutSet> = BTreeSet::new();
        if self.n < 2 {
            return Ok(Vec::new());
        }
        for mask in 0u64..(1u64 << (self.n - 1)) {
            // Vertex 0 always sits on side A; skip the empty B side.
            let full = (mask << 1) | 1;
            if full == (1u64 << self.n) - 1 {
                continue;
            }
            let in_a: Vec<bool> = (0..self.n).map(|v| full >> v & 1 == 1).collect();
            let side_a: Vec<usize> = (0..self.n).filter(|&v| in_a[v]).collect();
            let side_b: Vec<usize> = (0..self.n).filter(|&v| !in_a[v]).collect();
            if self.components_of(&side_a).len() != 1 || self.components_of(&side_b).len() != 1 {
                continue;
            }
            let cut = self.crossing_edges(&in_a);
            if !required.iter().all(|l| cut.binary_search(l).is_ok()) {
                continue;
            }
            if self.weight_of(&cut) > cap {
                continue;
            }
            out.insert(Circuit::from_labels(cut));
        }
        Ok(out.into_iter().collect())
    }

    /// True iff the label set is an inclusion-wise minimal cut-set: removing
    /// it leaves exactly two components and the set equals the edges crossing
    /// between them.
    pub fn is_minimal_cutset(&self, labels: &[Label]) -> Result<bool, GraphError> {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        for l in &sorted {
            self.edge_by_label(*l)?;
        }
        let kept: Vec<GraphEdge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| sorted.binary_search(&e.label).is_err())
            .collect();
        // Components after removal.
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for e in &kept {
                    for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                        if a == v && comp[b] == usize::MAX {
                            comp[b] = next;
                            stack.push(b);
                        }
                    }
                }
            }
            next += 1;
        }
        if next != 2 {
            return Ok(false);
        }
        let crossing: Vec<Label> = {
            let mut v: Vec<Label> = self
                .edges
                .iter()
                .filter(|e| comp[e.u] != comp[e.v])
                .map(|e| e.label)
                .collect();
            v.sort_unstable();
            v
        };
        Ok(crossing == sorted)
    }

    /// WGR text format: `n m`, then `m` lines of `u v label weight`.
    pub fn to_wgr(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.m());
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {} {}", e.u, e.v, e.label, e.weight);
        }
        s
    }

    pub fn from_wgr(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (n0, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(GraphError::Parse {
                line: n0 + 1,
                msg: "expected `n m`".into(),
            });
        }
        let n: usize = head[0].parse().map_err(|_| GraphError::Parse {
            line: n0 + 1,
            msg: "bad n".into(),
        })?;
        let m: usize = head[1].parse().map_err(|_| GraphError::Parse {
            line: n0 + 1,
            msg: "bad m".into(),
        })?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, row) = lines.next().ok_or(GraphError::Parse {
                line: m + 1,
                msg: "missing edge".into(),
            })?;
            let toks: Vec<&str> = row.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(GraphError::Parse {
                    line: ln + 1,
                    msg: "expected `u v label weight`".into(),
                });
            }
            let parse = |t: &str, what: &str| -> Result<u64, GraphError> {
                t.parse::<u64>().map_err(|_| GraphError::Parse {
                    line: ln + 1,
                    msg: format!("bad {what}"),
                })
            };
            edges.push(GraphEdge {
                u: parse(toks[0], "vertex")? as usize,
                v: parse(toks[1], "vertex")? as usize,
                label: Label(parse(toks[2], "label")? as u32),
                weight: parse(toks[3], "weight")?,
            });
        }
        for (ln, rest) in lines {
            if !rest.trim().is_empty() {
                return Err(GraphError::Parse {
                    line: ln + 1,
                    msg: "trailing garbage".into(),
                });
            }
        }
        WeightedGraph::new(n, edges)
    }
}

/// One run of the random-contraction cut sampler.
///
/// Contracts `k = n - 2*alpha - |R|` weight-proportionally chosen edges
/// (never touching the required class), keeping the required-set bookkeeping
/// `R_i` closed under parallelism, then picks uniformly among the cut-sets of
/// the contracted graph that contain `R_k` and minimalizes the preimage.
/// Fully determined by the seed.
pub fn small_cut(
    g: &WeightedGraph,
    required: &[Label],
    alpha: u32,
    seed: u64,
) -> Result<CutSet, GraphError> {
    if g.has_loops() {
        return Err(GraphError::Precondition("graph has self-loops".into()));
    }
    if alpha == 0 {
        return Err(GraphError::Precondition("alpha must be >= 1".into()));
    }
    if !g.is_connected() {
        return Err(GraphError::Precondition("graph is disconnected".into()));
    }
    let mut r_sorted = required.to_vec();
    r_sorted.sort_unstable();
    r_sorted.dedup();
    for l in &r_sorted {
        g.edge_by_label(*l)?;
    }
    let n = g.n();
    let need = 2 * alpha as usize + r_sorted.len();
    if n < need {
        return Err(GraphError::Precondition(format!(
            "need n >= 2*alpha + |R| = {need}, but n = {n}"
        )));
    }
    if need > 24 {
        return Err(GraphError::Precondition(format!(
            "selection phase over {need} vertices is too large"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    // Live edges; an edge dies when its endpoints merge.
    let mut live: Vec<GraphEdge> = g.edges().to_vec();
    let mut r_class: BTreeSet<Label> = r_sorted.iter().copied().collect();

    let sync_r_class =
        |live: &[GraphEdge], r_class: &mut BTreeSet<Label>, parent: &mut Vec<usize>| {
            // An edge joins the protected class when its endpoint pair coincides
            // with the endpoint pair of a protected edge.
            loop {
                let pairs: BTreeSet<(usize, usize)> = live
                    .iter()
                    .filter(|e| r_class.contains(&e.label))
                    .map(|e| {
                        let (a, b) = (find(parent, e.u), find(parent, e.v));
                        (a.min(b), a.max(b))
                    })
                    .collect();
                let mut grew = false;
                for e in live {
                    if r_class.contains(&e.label) {
                        continue;
                    }
                    let (a, b) = (find(parent, e.u), find(parent, e.v));
                    if pairs.contains(&(a.min(b), a.max(b))) {
                        r_class.insert(e.label);
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
        };
    sync_r_class(&live, &mut r_class, &mut parent);

    let k = n - need;
    for _ in 0..k {
        let eligible: Vec<&GraphEdge> = live
            .iter()
            .filter(|e| !r_class.contains(&e.label))
            .collect();
        let total: u128 = eligible.iter().map(|e| e.weight as u128).sum();
        if total == 0 {
            return Err(GraphError::Precondition(
                "no contractible edge outside the required class".into(),
            ));
        }
        let draw = rng.gen_range(0..total);
        let mut acc: u128 = 0;
        let mut chosen = *eligible[0];
        for e in &eligible {
            acc += e.weight as u128;
            if draw < acc {
                chosen = **e;
                break;
            }
        }
        let (ra, rb) = (find(&mut parent, chosen.u), find(&mut parent, chosen.v));
        debug_assert_ne!(ra, rb);
        parent[ra.max(rb)] = ra.min(rb);
        // Drop every edge that became internal to the merged vertex.
        live.retain(|e| find(&mut parent, e.u) != find(&mut parent, e.v));
        sync_r_class(&live, &mut r_class, &mut parent);
    }

    // Selection among distinct cut-sets of the contracted graph containing
    // the protected class.
    let classes: Vec<usize> = {
        let mut cs: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    };
    debug_assert_eq!(classes.len(), need);
    let t = classes.len();
    let mut cuts: BTreeSet<Vec<Label>> = BTreeSet::new();
    for mask in 0u64..(1u64 << (t - 1)) {
        let full = (mask << 1) | 1;
        if full == (1u64 << t) - 1 {
            continue;
        }
        let side: BTreeSet<usize> = classes
            .iter()
            .enumerate()
            .filter(|(i, _)| full >> *i & 1 == 1)
            .map(|(_, &c)| c)
            .collect();
        let mut cut: Vec<Label> = live
            .iter()
            .filter(|e| {
                side.contains(&find(&mut parent, e.u)) != side.contains(&find(&mut parent, e.v))
            })
            .map(|e| e.label)
            .collect();
        cut.sort_unstable();
        if r_class.iter().all(|l| cut.binary_search(l).is_ok()) {
            cuts.insert(cut);
        }
    }
    if cuts.is_empty() {
        return Err(GraphError::Precondition(
            "no cut-set of the contracted graph contains the required set".into(),
        ));
    }
    let cuts: Vec<Vec<Label>> = cuts.into_iter().collect();
    let picked = &cuts[rng.gen_range(0..cuts.len() as u64) as usize];

    // Reconstruct the bipartition of the original vertices that induced the
    // picked cut, then minimalize it while keeping the required edges inside.
    let picked_set: BTreeSet<Label> = picked.iter().copied().collect();
    let mut in_a = vec![false; n];
    {
        // Two-color the contracted quotient by the picked cut.
        let mut color: BTreeMap<usize, bool> = BTreeMap::new();
        let mut stack = vec![(classes[0], true)];
        while let Some((c, col)) = stack.pop() {
            if let Some(&prev) = color.get(&c) {
                debug_assert_eq!(prev, col);
                continue;
            }
            color.insert(c, col);
            for e in &live {
                let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
                let crossing = picked_set.contains(&e.label);
                for (x, y) in [(a, b), (b, a)] {
                    if x == c {
                        stack.push((y, col ^ crossing));
                    }
                }
            }
        }
        for (v, flag) in in_a.iter_mut().enumerate() {
            *flag = *color.get(&find(&mut parent, v)).unwrap_or(&true);
        }
    }
    minimalize_cut(g, &mut in_a, &r_sorted)?;
    let cut = g.crossing_edges(&in_a);
    Ok(Circuit::from_labels(cut))
}

/// Shrinks a bipartition to a minimal cut-set by repeatedly moving across a
/// connected component that carries no required-edge endpoint; each move
/// strictly reduces the cut.
fn minimalize_cut(
    g: &WeightedGraph,
    in_a: &mut [bool],
    required: &[Label],
) -> Result<(), GraphError> {
    let req_edges: Vec<&GraphEdge> = g
        .edges()
        .iter()
        .filter(|e| required.binary_search(&e.label).is_ok())
        .collect();
    loop {
        let side_a: Vec<usize> = (0..g.n()).filter(|&v| in_a[v]).collect();
        let side_b: Vec<usize> = (0..g.n()).filter(|&v| !in_a[v]).collect();
        let mut moved = false;
        let mut stuck = false;
        for (side, flag) in [(&side_a, true), (&side_b, false)] {
            let comps = g.components_of(side);
            if comps.len() <= 1 {
                continue;
            }
            // Move the first component free of required-edge endpoints. A
            // side whose extra components all carry required endpoints may
            // still untangle after a move on the other side.
            let candidate = comps.iter().find(|comp| {
                !req_edges
                    .iter()
                    .any(|e| comp.contains(&e.u) || comp.contains(&e.v))
            });
            match candidate {
                Some(comp) => {
                    for &v in comp {
                        in_a[v] = !flag;
                    }
                    moved = true;
                    break;
                }
                None => stuck = true,
            }
        }
        if moved {
            continue;
        }
        if stuck {
            return Err(GraphError::Precondition(
                "no minimal cut-set containing the required set is reachable".into(),
            ));
        }
        return Ok(());
    }
}
