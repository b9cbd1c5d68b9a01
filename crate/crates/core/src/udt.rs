//! Unordered decomposition trees: leaf matroids joined along shared element
//! sets of size 0, 1 or 3. Any edge-removal order evaluates to the same
//! matroid, every circuit projects onto the vertices as circuits of the leaf
//! matroids, and the projections with nonempty support form a subtree.

use crate::gf2::{BinaryMatroid, Builtin, CircuitQuery};
use crate::graph::{GraphEdge, WeightedGraph};
use crate::ksum::{classify_circuit, delta_sum, CircuitCase, KsumError, SumKind};
use crate::types::{intersect, is_subset, set_minus, symm_diff, Circuit, Label};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LeafKind {
    Graphic,
    Cographic,
    R10,
    F7,
    Gf2,
}

impl LeafKind {
    pub fn name(&self) -> &'static str {
        match self {
            LeafKind::Graphic => "graphic",
            LeafKind::Cographic => "cographic",
            LeafKind::R10 => "r10",
            LeafKind::F7 => "f7",
            LeafKind::Gf2 => "gf2",
        }
    }

    pub fn from_name(s: &str) -> Option<LeafKind> {
        match s {
            "graphic" => Some(LeafKind::Graphic),
            "cographic" => Some(LeafKind::Cographic),
            "r10" => Some(LeafKind::R10),
            "f7" => Some(LeafKind::F7),
            "gf2" => Some(LeafKind::Gf2),
            _ => None,
        }
    }
}

/// Leaf payload retained verbatim so tree files round-trip losslessly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LeafPayload {
    /// Unweighted multigraph for graphic/cographic leaves.
    Graph {
        n: usize,
        edges: Vec<(usize, usize, Label)>,
    },
    /// Column labels for the fixed builtin matrices.
    Relabel(Vec<Label>),
    /// Explicit GF(2) rows plus column labels.
    Matrix {
        rows: Vec<Vec<u8>>,
        labels: Vec<Label>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UdtVertex {
    pub kind: LeafKind,
    pub payload: LeafPayload,
}

impl UdtVertex {
    pub fn graphic(n: usize, edges: Vec<(usize, usize, Label)>) -> Self {
        UdtVertex {
            kind: LeafKind::Graphic,
            payload: LeafPayload::Graph { n, edges },
        }
    }

    pub fn cographic(n: usize, edges: Vec<(usize, usize, Label)>) -> Self {
        UdtVertex {
            kind: LeafKind::Cographic,
            payload: LeafPayload::Graph { n, edges },
        }
    }

    pub fn builtin(which: Builtin, labels: Vec<Label>) -> Self {
        let kind = match which {
            Builtin::R10 => LeafKind::R10,
            Builtin::F7 => LeafKind::F7,
        };
        UdtVertex {
            kind,
            payload: LeafPayload::Relabel(labels),
        }
    }

    fn build_matroid(&self) -> Result<BinaryMatroid, KsumError> {
        match (&self.kind, &self.payload) {
            (LeafKind::Graphic, LeafPayload::Graph { n, edges })
            | (LeafKind::Cographic, LeafPayload::Graph { n, edges }) => {
                let g = WeightedGraph::new(
                    *n,
                    edges
                        .iter()
                        .map(|&(u, v, label)| GraphEdge {
                            u,
                            v,
                            label,
                            weight: 1,
                        })
                        .collect(),
                )
                .map_err(|e| KsumError::TreeShape(format!("leaf graph: {e}")))?;
                let m = if self.kind == LeafKind::Graphic {
                    g.graphic_matroid()
                } else {
                    g.cographic_matroid()
                };
                m.map_err(|e| KsumError::TreeShape(format!("leaf graph: {e}")))
            }
            (LeafKind::R10, LeafPayload::Relabel(labels))
            | (LeafKind::F7, LeafPayload::Relabel(labels)) => {
                let which = if self.kind == LeafKind::R10 {
                    Builtin::R10
                } else {
                    Builtin::F7
                };
                let base = BinaryMatroid::builtin(which);
                if labels.len() != base.m() {
                    return Err(KsumError::TreeShape(format!(
                        "builtin leaf needs {} labels, got {}",
                        base.m(),
                        labels.len()
                    )));
                }
                let map: BTreeMap<Label, Label> = base
                    .ground_set()
                    .iter()
                    .copied()
                    .zip(labels.iter().copied())
                    .collect();
                Ok(base.relabel(&map)?)
            }
            (LeafKind::Gf2, LeafPayload::Matrix { rows, labels }) => {
                Ok(BinaryMatroid::from_rows(rows, labels)?)
            }
            _ => Err(KsumError::TreeShape(
                "leaf kind does not match payload".into(),
            )),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UdtEdge {
    pub u: u32,
    pub v: u32,
    pub shared: Vec<Label>, // sorted; empty for a 1-sum edge
}

/// An unordered decomposition tree. Construction validates the tree shape and
/// all shared-set bookkeeping; the per-sum side conditions are validated when
/// the tree (or a subtree) is evaluated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Udt {
    vertices: BTreeMap<u32, UdtVertex>,
    matroids: BTreeMap<u32, BinaryMatroid>,
    edges: Vec<UdtEdge>,
}

/// Per-vertex circuit projections: `C = △_v C_v` with the nonempty parts
/// forming a connected subtree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Projection {
    pub parts: BTreeMap<u32, Vec<Label>>,
}

impl Projection {
    /// Number of composed-ground-set elements in the part at `v`.
    pub fn gamma(&self, udt: &Udt, v: u32) -> usize {
        let ground = udt.ground_set();
        self.parts
            .get(&v)
            .map_or(0, |p| intersect(p, &ground).len())
    }

    pub fn support(&self) -> Vec<u32> {
        self.parts
            .iter()
            .filter(|(_, p)| !p.is_empty())
            .map(|(&v, _)| v)
            .collect()
    }

    /// Symmetric difference of all parts; equals the projected circuit.
    pub fn reassemble(&self) -> Vec<Label> {
        let mut acc: Vec<Label> = Vec::new();
        for part in self.parts.values() {
            acc = symm_diff(&acc, part);
        }
        acc
    }
}

impl Udt {
    pub fn new(vertices: Vec<(u32, UdtVertex)>, edges: Vec<UdtEdge>) -> Result<Self, KsumError> {
        let mut vmap = BTreeMap::new();
        for (id, v) in vertices {
            if vmap.insert(id, v).is_some() {
                return Err(KsumError::TreeShape(format!("duplicate vertex id {id}")));
            }
        }
        let mut matroids = BTreeMap::new();
        for (&id, v) in &vmap {
            matroids.insert(id, v.build_matroid()?);
        }
        let mut norm_edges: Vec<UdtEdge> = Vec::new();
        for e in edges {
            if e.u == e.v {
                return Err(KsumError::TreeShape(format!("self-edge at vertex {}", e.u)));
            }
            if !vmap.contains_key(&e.u) || !vmap.contains_key(&e.v) {
                return Err(KsumError::TreeShape(format!(
                    "edge ({}, {}) references a missing vertex",
                    e.u, e.v
                )));
            }
            let (u, v) = (e.u.min(e.v), e.u.max(e.v));
            let mut shared = e.shared;
            shared.sort_unstable();
            shared.dedup();
            norm_edges.push(UdtEdge { u, v, shared });
        }
        norm_edges.sort_by_key(|e| (e.u, e.v));
        for w in norm_edges.windows(2) {
            if w[0].u == w[1].u && w[0].v == w[1].v {
                return Err(KsumError::TreeShape(format!(
                    "duplicate edge ({}, {})",
                    w[0].u, w[0].v
                )));
            }
        }
        let udt = Udt {
            vertices: vmap,
            matroids,
            edges: norm_edges,
        };
        udt.validate_shape()?;
        Ok(udt)
    }

    fn validate_shape(&self) -> Result<(), KsumError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(KsumError::TreeShape("empty tree".into()));
        }
        if self.edges.len() != n - 1 {
            return Err(KsumError::TreeShape(format!(
                "{} edges on {} vertices is not a tree",
                self.edges.len(),
                n
            )));
        }
        // Connectivity.
        let ids: Vec<u32> = self.vertices.keys().copied().collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![ids[0]];
        seen.insert(ids[0]);
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == v && seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
        if seen.len() != n {
            return Err(KsumError::TreeShape("tree is disconnected".into()));
        }
        // Pairwise ground-set intersections must match the declared shared
        // sets exactly: 0, 1 or 3 across an edge, empty otherwise. This also
        // forces every element into at most two leaf ground sets.
        for (i, (&a, ma)) in self.matroids.iter().enumerate() {
            for (&b, mb) in self.matroids.iter().skip(i + 1) {
                let actual = intersect(ma.ground_set(), mb.ground_set());
                match self.edge_between(a, b) {
                    Some(e) => {
                        if e.shared != actual {
                            return Err(KsumError::TreeShape(format!(
                                "edge ({a}, {b}) declares shared set {:?} but ground sets share {:?}",
                                e.shared, actual
                            )));
                        }
                        if !matches!(e.shared.len(), 0 | 1 | 3) {
                            return Err(KsumError::SumShape(e.shared.len()));
                        }
                    }
                    None => {
                        if !actual.is_empty() {
                            return Err(KsumError::TreeShape(format!(
                                "non-adjacent vertices {a} and {b} share elements {actual:?}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn vertex_ids(&self) -> Vec<u32> {
        self.vertices.keys().copied().collect()
    }

    pub fn vertex(&self, id: u32) -> Option<&UdtVertex> {
        self.vertices.get(&id)
    }

    pub fn leaf_matroid(&self, id: u32) -> Option<&BinaryMatroid> {
        self.matroids.get(&id)
    }

    pub fn edges(&self) -> &[UdtEdge] {
        &self.edges
    }

    pub fn edge_between(&self, a: u32, b: u32) -> Option<&UdtEdge> {
        let (u, v) = (a.min(b), a.max(b));
        self.edges.iter().find(|e| e.u == u && e.v == v)
    }

    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.u == v {
                    Some(e.v)
                } else if e.v == v {
                    Some(e.u)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Elements of the composed ground set: the symmetric difference of the
    /// leaf ground sets (shared elements cancel).
    pub fn ground_set(&self) -> Vec<Label> {
        let mut acc: Vec<Label> = Vec::new();
        for m in self.matroids.values() {
            acc = symm_diff(&acc, m.ground_set());
        }
        acc
    }

    /// Elements of `E_v` that survive into the composed ground set.
    pub fn private_elements(&self, v: u32) -> Vec<Label> {
        let mut out = self.matroids[&v].ground_set().to_vec();
        for e in &self.edges {
            if e.u == v || e.v == v {
                out = set_minus(&out, &e.shared);
            }
        }
        out
    }

    /// Total composed ground-set size.
    pub fn total_m(&self) -> usize {
        self.ground_set().len()
    }

    /// Per-vertex private-element counts of a circuit of the composed
    /// matroid: `gamma_v = |C ∩ E_v|`.
    pub fn gamma_of(&self, c: &[Label]) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for &v in self.vertices.keys() {
            let count = intersect(c, self.matroids[&v].ground_set()).len();
            out.insert(v, count as u64);
        }
        out
    }

    fn default_order(&self) -> Vec<(u32, u32)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    /// Evaluates the tree with the canonical lexicographic edge order.
    pub fn evaluate(&self) -> Result<BinaryMatroid, KsumError> {
        self.evaluate_with_order(&self.default_order())
    }

    /// Evaluates the tree splitting at edges in the given order. The circuit
    /// set of the result does not depend on the order.
    pub fn evaluate_with_order(&self, order: &[(u32, u32)]) -> Result<BinaryMatroid, KsumError> {
        let mut norm: Vec<(u32, u32)> = order.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        norm.dedup();
        let mut expect: Vec<(u32, u32)> = self.default_order();
        expect.sort_unstable();
        let mut sorted = norm.clone();
        sorted.sort_unstable();
        if sorted != expect {
            return Err(KsumError::Precondition(
                "removal order must list every tree edge exactly once".into(),
            ));
        }
        let all: BTreeSet<u32> = self.vertices.keys().copied().collect();
        self.eval_rec(&all, &norm)
    }

    /// Evaluates the matroid of a connected vertex subset.
    pub fn evaluate_subtree(&self, verts: &BTreeSet<u32>) -> Result<BinaryMatroid, KsumError> {
        let order = self.default_order();
        self.eval_rec(verts, &order)
    }

    fn split_at(&self, verts: &BTreeSet<u32>, u: u32, v: u32) -> (BTreeSet<u32>, BTreeSet<u32>) {
        // Component of u inside `verts` avoiding the (u, v) edge.
        let mut t1 = BTreeSet::new();
        let mut stack = vec![u];
        t1.insert(u);
        while let Some(x) = stack.pop() {
            for e in &self.edges {
                if (e.u, e.v) == (u.min(v), u.max(v)) {
                    continue;
                }
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == x && verts.contains(&b) && t1.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
        let t2: BTreeSet<u32> = verts.difference(&t1).copied().collect();
        (t1, t2)
    }

    fn eval_rec(
        &self,
        verts: &BTreeSet<u32>,
        order: &[(u32, u32)],
    ) -> Result<BinaryMatroid, KsumError> {
        if verts.is_empty() {
            return Err(KsumError::TreeShape("empty subtree".into()));
        }
        if verts.len() == 1 {
            let v = *verts.iter().next().unwrap();
            return Ok(self.matroids[&v].clone());
        }
        let (u, v) = order
            .iter()
            .copied()
            .find(|&(a, b)| verts.contains(&a) && verts.contains(&b))
            .ok_or_else(|| KsumError::TreeShape("subtree is disconnected".into()))?;
        let (t1, t2) = self.split_at(verts, u, v);
        let m1 = self.eval_rec(&t1, order)?;
        let m2 = self.eval_rec(&t2, order)?;
        delta_sum(&m1, &m2).map(|(m, _)| m).map_err(|e| match e {
            KsumError::SumShape(_) | KsumError::SumValidity(_) => {
                KsumError::SumValidity(format!("edge ({u}, {v}): {e}"))
            }
            other => other,
        })
    }

    /// Projects a circuit of the evaluated matroid onto every vertex.
    pub fn project_circuit(&self, c: &Circuit) -> Result<Projection, KsumError> {
        let composed = self.evaluate()?;
        if !composed.is_circuit(c.elements())? {
            return Err(KsumError::NotCircuit);
        }
        let mut parts: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
        let all: BTreeSet<u32> = self.vertices.keys().copied().collect();
        self.project_rec(&all, c.elements().to_vec(), &mut parts)?;
        Ok(Projection { parts })
    }

    fn project_rec(
        &self,
        verts: &BTreeSet<u32>,
        c: Vec<Label>,
        parts: &mut BTreeMap<u32, Vec<Label>>,
    ) -> Result<(), KsumError> {
        if verts.len() == 1 {
            let v = *verts.iter().next().unwrap();
            parts.insert(v, c);
            return Ok(());
        }
        let order = self.default_order();
        let (u, v) = order
            .iter()
            .copied()
            .find(|&(a, b)| verts.contains(&a) && verts.contains(&b))
            .expect("connected subtree");
        let (t1, t2) = self.split_at(verts, u, v);
        let m1 = self.eval_rec(&t1, &order)?;
        let m2 = self.eval_rec(&t2, &order)?;
        let shared = self.edge_between(u, v).expect("tree edge").shared.clone();
        if c.is_empty() {
            for side in [&t1, &t2] {
                for &x in side.iter() {
                    parts.insert(x, Vec::new());
                }
            }
            return Ok(());
        }
        if shared.is_empty() {
            // A circuit of a 1-sum lies entirely on one side.
            let (inside, outside) = if is_subset(&c, m1.ground_set()) {
                (&t1, &t2)
            } else {
                (&t2, &t1)
            };
            for &x in outside.iter() {
                parts.insert(x, Vec::new());
            }
            return self.project_rec(inside, c, parts);
        }
        let kind = match shared.len() {
            1 => SumKind::TwoSum { shared: shared[0] },
            3 => SumKind::ThreeSum {
                shared: [shared[0], shared[1], shared[2]],
            },
            n => return Err(KsumError::SumShape(n)),
        };
        match classify_circuit(&m1, &m2, &kind, &Circuit::from_labels(c))? {
            CircuitCase::FirstOnly(c1) => {
                for &x in t2.iter() {
                    parts.insert(x, Vec::new());
                }
                self.project_rec(&t1, c1.into_labels(), parts)
            }
            CircuitCase::SecondOnly(c2) => {
                for &x in t1.iter() {
                    parts.insert(x, Vec::new());
                }
                self.project_rec(&t2, c2.into_labels(), parts)
            }
            CircuitCase::Split { first, second, .. } => {
                self.project_rec(&t1, first.into_labels(), parts)?;
                self.project_rec(&t2, second.into_labels(), parts)
            }
        }
    }

    /// Serializes to the UDT text format.
    pub fn to_udt(&self) -> String {
        let mut s = String::new();
        for (&id, v) in &self.vertices {
            match &v.payload {
                LeafPayload::Graph { n, edges } => {
                    let _ = write!(
                        s,
                        "vertex {id} {} inline {n} {}",
                        v.kind.name(),
                        edges.len()
                    );
                    for &(a, b, l) in edges {
                        let _ = write!(s, " {a} {b} {l}");
                    }
                    let _ = writeln!(s);
                }
                LeafPayload::Relabel(labels) => {
                    let _ = write!(s, "vertex {id} {} inline", v.kind.name());
                    for l in labels {
                        let _ = write!(s, " {l}");
                    }
                    let _ = writeln!(s);
                }
                LeafPayload::Matrix { rows, labels } => {
                    let _ = write!(
                        s,
                        "vertex {id} {} inline {} {}",
                        v.kind.name(),
                        rows.len(),
                        labels.len()
                    );
                    for row in rows {
                        for &b in row {
                            let _ = write!(s, " {b}");
                        }
                    }
                    for l in labels {
                        let _ = write!(s, " {l}");
                    }
                    let _ = writeln!(s);
                }
            }
        }
        for e in &self.edges {
            let _ = write!(s, "edge {} {} {}", e.u, e.v, e.shared.len());
            for l in &e.shared {
                let _ = write!(s, " {l}");
            }
            let _ = writeln!(s);
        }
        s
    }

    /// Parses the UDT text format. `base` resolves `file` payloads; inline
    /// payloads need no base directory.
    pub fn from_udt(text: &str, base: Option<&Path>) -> Result<Udt, KsumError> {
        let bad = |line: usize, msg: String| KsumError::TreeShape(format!("line {line}: {msg}"));
        let mut vertices: Vec<(u32, UdtVertex)> = Vec::new();
        let mut edges: Vec<UdtEdge> = Vec::new();
        let mut seen_edge = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            match toks[0] {
                "vertex" => {
                    if seen_edge {
                        return Err(bad(line, "vertex line after edge lines".into()));
                    }
                    if toks.len() < 4 {
                        return Err(bad(line, "expected `vertex <id> <type> <payload>`".into()));
                    }
                    let id: u32 = toks[1]
                        .parse()
                        .map_err(|_| bad(line, "bad vertex id".into()))?;
                    let kind = LeafKind::from_name(toks[2])
                        .ok_or_else(|| bad(line, format!("unknown leaf type {:?}", toks[2])))?;
                    let vertex = match toks[3] {
                        "inline" => parse_inline_payload(kind, &toks[4..], line)?,
                        "file" => {
                            if toks.len() != 5 {
                                return Err(bad(line, "expected one path after `file`".into()));
                            }
                            let dir = base.ok_or_else(|| {
                                bad(line, "file payloads need a base directory".into())
                            })?;
                            load_file_payload(kind, &dir.join(toks[4]), line)?
                        }
                        other => return Err(bad(line, format!("bad payload marker {other:?}"))),
                    };
                    vertices.push((id, vertex));
                }
                "edge" => {
                    seen_edge = true;
                    if toks.len() < 4 {
                        return Err(bad(line, "expected `edge <u> <v> <k> <label...>`".into()));
                    }
                    let u: u32 = toks[1]
                        .parse()
                        .map_err(|_| bad(line, "bad vertex id".into()))?;
                    let v: u32 = toks[2]
                        .parse()
                        .map_err(|_| bad(line, "bad vertex id".into()))?;
                    let k: usize = toks[3].parse().map_err(|_| bad(line, "bad count".into()))?;
                    if toks.len() != 4 + k {
                        return Err(bad(line, format!("expected {k} shared labels")));
                    }
                    let shared: Result<Vec<Label>, _> = toks[4..]
                        .iter()
                        .map(|t| {
                            t.parse::<u32>()
                                .map(Label)
                                .map_err(|_| bad(line, "bad label".into()))
                        })
                        .collect();
                    edges.push(UdtEdge {
                        u,
                        v,
                        shared: shared?,
                    });
                }
                other => return Err(bad(line, format!("unknown directive {other:?}"))),
            }
        }
        Udt::new(vertices, edges)
    }
}

fn parse_inline_payload(
    kind: LeafKind,
    toks: &[&str],
    line: usize,
) -> Result<UdtVertex, KsumError> {
    let bad = |msg: String| KsumError::TreeShape(format!("line {line}: {msg}"));
    let num = |t: &str| -> Result<usize, KsumError> {
        t.parse::<usize>()
            .map_err(|_| bad(format!("bad number {t:?}")))
    };
    match kind {
        LeafKind::Graphic | LeafKind::Cographic => {
            if toks.len() < 2 {
                return Err(bad("expected `<n> <m>` before edge triples".into()));
            }
            let n = num(toks[0])?;
            let m = num(toks[1])?;
            if toks.len() != 2 + 3 * m {
                return Err(bad(format!("expected {} edge tokens", 3 * m)));
            }
            let mut edges = Vec::with_capacity(m);
            for t in toks[2..].chunks(3) {
                edges.push((num(t[0])?, num(t[1])?, Label(num(t[2])? as u32)));
            }
            Ok(UdtVertex {
                kind,
                payload: LeafPayload::Graph { n, edges },
            })
        }
        LeafKind::R10 | LeafKind::F7 => {
            let want = if kind == LeafKind::R10 { 10 } else { 7 };
            if toks.len() != want {
                return Err(bad(format!("expected {want} labels")));
            }
            let labels: Result<Vec<Label>, KsumError> =
                toks.iter().map(|t| Ok(Label(num(t)? as u32))).collect();
            Ok(UdtVertex {
                kind,
                payload: LeafPayload::Relabel(labels?),
            })
        }
        LeafKind::Gf2 => {
            if toks.len() < 2 {
                return Err(bad("expected `<height> <m>`".into()));
            }
            let h = num(toks[0])?;
            let m = num(toks[1])?;
            if toks.len() != 2 + h * m + m {
                return Err(bad(format!("expected {} digits and {m} labels", h * m)));
            }
            let mut rows = Vec::with_capacity(h);
            for r in 0..h {
                let mut row = Vec::with_capacity(m);
                for c in 0..m {
                    match toks[2 + r * m + c] {
                        "0" => row.push(0u8),
                        "1" => row.push(1u8),
                        other => return Err(bad(format!("expected 0/1, found {other:?}"))),
                    }
                }
                rows.push(row);
            }
            let labels: Result<Vec<Label>, KsumError> = toks[2 + h * m..]
                .iter()
                .map(|t| Ok(Label(num(t)? as u32)))
                .collect();
            Ok(UdtVertex {
                kind,
                payload: LeafPayload::Matrix {
                    rows,
                    labels: labels?,
                },
            })
        }
    }
}

fn load_file_payload(kind: LeafKind, path: &Path, line: usize) -> Result<UdtVertex, KsumError> {
    let bad = |msg: String| KsumError::TreeShape(format!("line {line}: {msg}"));
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    match kind {
        LeafKind::Graphic | LeafKind::Cographic => {
            let g = WeightedGraph::from_wgr(&text)
                .map_err(|e| bad(format!("{}: {e}", path.display())))?;
            let edges = g.edges().iter().map(|e| (e.u, e.v, e.label)).collect();
            Ok(UdtVertex {
                kind,
                payload: LeafPayload::Graph { n: g.n(), edges },
            })
        }
        LeafKind::Gf2 => {
            let m = BinaryMatroid::from_gf2m(&text)
                .map_err(|e| bad(format!("{}: {e}", path.display())))?;
            let labels = m.ground_set().to_vec();
            let rows: Vec<Vec<u8>> = (0..m.height())
                .map(|r| {
                    labels
                        .iter()
                        .map(|&l| ((m.column(l).unwrap() >> r) & 1) as u8)
                        .collect()
                })
                .collect();
            Ok(UdtVertex {
                kind,
                payload: LeafPayload::Matrix { rows, labels },
            })
        }
        LeafKind::R10 | LeafKind::F7 => {
            Err(bad("builtin leaves take inline labels, not files".into()))
        }
    }
}

/// Parameters for the seeded random tree generator.
#[derive(Clone, Debug)]
pub struct RandomUdtParams {
    pub leaf_count: usize,
    /// Element-count range for graph leaves (inclusive).
    pub leaf_size_range: (usize, usize),
    pub leaf_types: Vec<LeafKind>,
    pub seed: u64,
    /// Retry until the composed ground set fits, e.g. under the circuit
    /// oracle cap for verification runs.
    pub max_total_m: Option<usize>,
}

impl Default for RandomUdtParams {
    fn default() -> Self {
        RandomUdtParams {
            leaf_count: 3,
            leaf_size_range: (3, 7),
            leaf_types: vec![LeafKind::Graphic, LeafKind::Cographic],
            seed: 0,
            max_total_m: Some(24),
        }
    }
}

fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    m_edges: usize,
    next_label: &mut u32,
) -> (usize, Vec<(usize, usize, Label)>) {
    // A spanning cycle plus random chords: bridge-free, so neither the
    // graphic nor the cographic matroid of the leaf acquires a loop.
    let n = rng.gen_range(3..=m_edges.max(3) as u64) as usize;
    let mut edges = Vec::with_capacity(m_edges);
    for v in 0..n {
        edges.push((v, (v + 1) % n, Label(*next_label)));
        *next_label += 1;
    }
    while edges.len() < m_edges {
        let a = rng.gen_range(0..n as u64) as usize;
        let b = rng.gen_range(0..n as u64) as usize;
        if a == b {
            continue;
        }
        edges.push((a.min(b), a.max(b), Label(*next_label)));
        *next_label += 1;
    }
    (n, edges)
}

/// Shared-element candidates for a 2-sum at leaf level: not a loop, not a
/// coloop, not already shared with another neighbor.
fn two_sum_candidates(m: &BinaryMatroid, used: &BTreeSet<Label>) -> Vec<Label> {
    let dual = match m.dual() {
        Ok(d) => d,
        Err(_) => return Vec::new(),
    };
    m.ground_set()
        .iter()
        .copied()
        .filter(|&e| {
            !used.contains(&e)
                && !m.is_circuit(&[e]).unwrap_or(true)
                && !dual.is_circuit(&[e]).unwrap_or(true)
        })
        .collect()
}

/// Triangle candidates for a 3-sum at leaf level: 3-element circuits whose
/// subsets avoid the dual circuits, disjoint from already-shared elements.
fn three_sum_candidates(m: &BinaryMatroid, used: &BTreeSet<Label>) -> Vec<[Label; 3]> {
    let q = CircuitQuery::with_size_cap(3);
    let circuits = match m.enumerate_circuits(&q, 24) {
        Ok(cs) => cs,
        Err(_) => return Vec::new(),
    };
    let dual = match m.dual() {
        Ok(d) => d,
        Err(_) => return Vec::new(),
    };
    let mut out = Vec::new();
    'next: for c in circuits {
        if c.len() != 3 || c.elements().iter().any(|e| used.contains(e)) {
            continue;
        }
        let e = c.elements();
        let subsets: [&[usize]; 7] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];
        for idx in subsets {
            let sub: Vec<Label> = idx.iter().map(|&i| e[i]).collect();
            if dual.is_circuit(&sub).unwrap_or(true) {
                continue 'next;
            }
        }
        out.push([e[0], e[1], e[2]]);
    }
    out
}

/// Seeded random decomposition tree: random graph leaves (and optional
/// builtin leaves) glued along randomly chosen valid shared sets.
pub fn random_udt(params: &RandomUdtParams) -> Result<Udt, KsumError> {
    if params.leaf_count == 0 || params.leaf_types.is_empty() {
        return Err(KsumError::Precondition(
            "need at least one leaf and one leaf type".into(),
        ));
    }
    if params.leaf_size_range.0 < 3 || params.leaf_size_range.0 > params.leaf_size_range.1 {
        return Err(KsumError::Precondition(
            "leaf size range must be [lo, hi] with lo >= 3".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    'attempt: for _ in 0..200 {
        let mut next_label: u32 = 0;
        let mut leaves: Vec<UdtVertex> = Vec::new();
        for _ in 0..params.leaf_count {
            let kind = params.leaf_types[rng.gen_range(0..params.leaf_types.len() as u64) as usize];
            let vertex = match kind {
                LeafKind::Graphic | LeafKind::Cographic => {
                    let m_edges = rng.gen_range(
                        params.leaf_size_range.0 as u64..=params.leaf_size_range.1 as u64,
                    ) as usize;
                    let (n, edges) = random_connected_graph(&mut rng, m_edges, &mut next_label);
                    UdtVertex {
                        kind,
                        payload: LeafPayload::Graph { n, edges },
                    }
                }
                LeafKind::R10 | LeafKind::F7 => {
                    let which = if kind == LeafKind::R10 {
                        Builtin::R10
                    } else {
                        Builtin::F7
                    };
                    let m = BinaryMatroid::builtin(which).m();
                    let labels: Vec<Label> = (0..m as u32).map(|i| Label(next_label + i)).collect();
                    next_label += m as u32;
                    UdtVertex::builtin(which, labels)
                }
                LeafKind::Gf2 => {
                    return Err(KsumError::Precondition(
                        "random generation draws from graphic/cographic/r10/f7".into(),
                    ))
                }
            };
            leaves.push(vertex);
        }
        // Random tree shape over the leaves.
        let mut tree_edges: Vec<(usize, usize)> = Vec::new();
        for i in 1..params.leaf_count {
            let p = rng.gen_range(0..i as u64) as usize;
            tree_edges.push((p, i));
        }
        // Glue with relabeling; abandon the attempt when no valid shared set
        // remains.
        let mut matroids: Vec<BinaryMatroid> = Vec::new();
        for v in &leaves {
            matroids.push(v.build_matroid()?);
        }
        let mut used: Vec<BTreeSet<Label>> = vec![BTreeSet::new(); params.leaf_count];
        let mut relabels: Vec<BTreeMap<Label, Label>> = vec![BTreeMap::new(); params.leaf_count];
        let mut shared_sets: Vec<Vec<Label>> = Vec::new();
        for &(p, i) in &tree_edges {
            let roll = rng.gen_range(0..100u64);
            if roll < 10 {
                shared_sets.push(Vec::new());
                continue;
            }
            let try_three = roll < 40;
            let mut done = false;
            if try_three {
                let cp = three_sum_candidates(&matroids[p], &used[p]);
                let ci = three_sum_candidates(&matroids[i], &used[i]);
                if !cp.is_empty() && !ci.is_empty() && matroids[p].m() >= 7 && matroids[i].m() >= 7
                {
                    let tp = cp[rng.gen_range(0..cp.len() as u64) as usize];
                    let ti = ci[rng.gen_range(0..ci.len() as u64) as usize];
                    let map: BTreeMap<Label, Label> =
                        ti.iter().copied().zip(tp.iter().copied()).collect();
                    matroids[i] = matroids[i].relabel(&map)?;
                    for (from, to) in &map {
                        relabels[i].insert(*from, *to);
                        used[i].insert(*to);
                    }
                    for l in tp {
                        used[p].insert(l);
                    }
                    shared_sets.push(tp.to_vec());
                    done = true;
                }
            }
            if !done {
                let cp = two_sum_candidates(&matroids[p], &used[p]);
                let ci = two_sum_candidates(&matroids[i], &used[i]);
                if cp.is_empty() || ci.is_empty() {
                    continue 'attempt;
                }
                let ep = cp[rng.gen_range(0..cp.len() as u64) as usize];
                let ei = ci[rng.gen_range(0..ci.len() as u64) as usize];
                let map: BTreeMap<Label, Label> = [(ei, ep)].into_iter().collect();
                matroids[i] = matroids[i].relabel(&map)?;
                relabels[i].insert(ei, ep);
                used[i].insert(ep);
                used[p].insert(ep);
                shared_sets.push(vec![ep]);
            }
        }
        // Rebuild payloads with the applied relabelings.
        let mut vertices: Vec<(u32, UdtVertex)> = Vec::new();
        for (idx, v) in leaves.iter().enumerate() {
            let map = &relabels[idx];
            let payload = match &v.payload {
                LeafPayload::Graph { n, edges } => LeafPayload::Graph {
                    n: *n,
                    edges: edges
                        .iter()
                        .map(|&(a, b, l)| (a, b, map.get(&l).copied().unwrap_or(l)))
                        .collect(),
                },
                LeafPayload::Relabel(labels) => LeafPayload::Relabel(
                    labels
                        .iter()
                        .map(|l| map.get(l).copied().unwrap_or(*l))
                        .collect(),
                ),
                LeafPayload::Matrix { rows, labels } => LeafPayload::Matrix {
                    rows: rows.clone(),
                    labels: labels
                        .iter()
                        .map(|l| map.get(l).copied().unwrap_or(*l))
                        .collect(),
                },
            };
            vertices.push((
                idx as u32,
                UdtVertex {
                    kind: v.kind,
                    payload,
                },
            ));
        }
        let edges: Vec<UdtEdge> = tree_edges
            .iter()
            .zip(&shared_sets)
            .map(|(&(p, i), shared)| UdtEdge {
                u: p as u32,
                v: i as u32,
                shared: shared.clone(),
            })
            .collect();
        let udt = match Udt::new(vertices, edges) {
            Ok(u) => u,
            Err(_) => continue 'attempt,
        };
        if let Some(cap) = params.max_total_m {
            if udt.total_m() > cap {
                continue 'attempt;
            }
        }
        if udt.evaluate().is_err() {
            continue 'attempt;
        }
        return Ok(udt);
    }
    Err(KsumError::Generation(
        "no valid tree found within the retry budget; relax the parameters".into(),
    ))
}
