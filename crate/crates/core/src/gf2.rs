//! Binary matroids as GF(2) column matrices.
//!
//! A [`BinaryMatroid`] stores one bitset column per labeled ground-set
//! element. Columns are machine words, so the representation height is capped
//! at 64 rows; every instance this crate targets fits comfortably.
//!
//! The module provides the rank/circuit oracles everything else is verified
//! against: exhaustive circuit enumeration over GF(2) column combinations
//! (with minimality checks), matroid surgery (deletion, parallel extension,
//! dual), symmetric-difference decomposition into disjoint circuits, and the
//! two built-in matroids used as decomposition-tree leaves.

use crate::types::{intersect, symm_diff, Circuit, Label};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Hard cap on representation height: columns are single machine words.
pub const MAX_HEIGHT: usize = 64;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("representation height {0} exceeds the cap of {MAX_HEIGHT}")]
    HeightCap(usize),
    #[error("column for label {label} has bits outside height {height}")]
    ColumnOutOfRange { label: Label, height: usize },
    #[error("ground set of size {m} exceeds the enumeration cap of {cap}")]
    OracleCap { m: usize, cap: usize },
    #[error("weight for label {0} must be positive")]
    NonPositiveWeight(Label),
    #[error("arithmetic overflow in weight computation")]
    Overflow,
    #[error("required and forbidden sets overlap at label {0}")]
    FilterOverlap(Label),
    #[error("set is not a member of the cycle space")]
    NotCycleSpace,
    #[error("unknown builtin matroid name {0:?}")]
    UnknownName(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Built-in leaf matroids given by explicit GF(2) matrices.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Builtin {
    R10,
    F7,
}

/// A binary matroid with globally labeled elements, represented by a GF(2)
/// matrix stored column-wise. Values are immutable; all surgery returns new
/// matroids.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryMatroid {
    height: usize,
    labels: Vec<Label>, // sorted ascending
    cols: Vec<u64>,     // parallel to labels, bits 0..height
}

/// Filters for [`BinaryMatroid::enumerate_circuits`]. Weights default to
/// all-ones and the weight cap to infinity.
#[derive(Clone, Debug, Default)]
pub struct CircuitQuery {
    pub weights: Option<BTreeMap<Label, u64>>,
    pub weight_cap: Option<u128>,
    pub required: Vec<Label>,
    pub forbidden: Vec<Label>,
}

impl CircuitQuery {
    pub fn with_size_cap(cap: u64) -> Self {
        CircuitQuery {
            weight_cap: Some(cap as u128),
            ..Default::default()
        }
    }
}

fn rank_of_columns(cols: impl IntoIterator<Item = u64>) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for mut c in cols {
        for b in &basis {
            c = c.min(c ^ b);
        }
        if c != 0 {
            basis.push(c);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

impl BinaryMatroid {
    /// Builds a matroid from (label, column) pairs. Labels must be unique;
    /// column bits must lie below `height`.
    pub fn new(height: usize, columns: Vec<(Label, u64)>) -> Result<Self, Gf2Error> {
        if height > MAX_HEIGHT {
            return Err(Gf2Error::HeightCap(height));
        }
        let mask = if height == 64 {
            u64::MAX
        } else {
            (1u64 << height) - 1
        };
        let mut pairs = columns;
        pairs.sort_unstable_by_key(|(l, _)| *l);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Gf2Error::DuplicateLabel(w[0].0));
            }
        }
        for &(label, col) in &pairs {
            if col & !mask != 0 {
                return Err(Gf2Error::ColumnOutOfRange { label, height });
            }
        }
        let (labels, cols) = pairs.into_iter().unzip();
        Ok(BinaryMatroid {
            height,
            labels,
            cols,
        })
    }

    /// Builds a matroid from 0/1 rows (row-major) and per-column labels.
    pub fn from_rows(rows: &[Vec<u8>], labels: &[Label]) -> Result<Self, Gf2Error> {
        let height = rows.len();
        let m = labels.len();
        let mut cols = vec![0u64; m];
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m, "row width mismatch");
            for (j, &bit) in row.iter().enumerate() {
                if bit != 0 {
                    cols[j] |= 1u64 << r;
                }
            }
        }
        BinaryMatroid::new(height, labels.iter().copied().zip(cols).collect())
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Ground-set size.
    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn ground_set(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains_label(&self, e: Label) -> bool {
        self.labels.binary_search(&e).is_ok()
    }

    pub fn column(&self, e: Label) -> Result<u64, Gf2Error> {
        let i = self
            .labels
            .binary_search(&e)
            .map_err(|_| Gf2Error::UnknownLabel(e))?;
        Ok(self.cols[i])
    }

    fn index_of(&self, e: Label) -> Result<usize, Gf2Error> {
        self.labels
            .binary_search(&e)
            .map_err(|_| Gf2Error::UnknownLabel(e))
    }

    /// GF(2) rank of the chosen column set.
    pub fn rank(&self, set: &[Label]) -> Result<usize, Gf2Error> {
        let mut cols = Vec::with_capacity(set.len());
        for &e in set {
            cols.push(self.column(e)?);
        }
        Ok(rank_of_columns(cols))
    }

    pub fn full_rank(&self) -> usize {
        rank_of_columns(self.cols.iter().copied())
    }

    /// True iff `set` is an inclusion-wise minimal dependent set.
    ///
    /// A set is a circuit exactly when its columns sum to zero and dropping
    /// any single element leaves an independent set; over GF(2) that is
    /// equivalent to the XOR of all columns vanishing while the rank equals
    /// `|set| - 1`.
    pub fn is_circuit(&self, set: &[Label]) -> Result<bool, Gf2Error> {
        if set.is_empty() {
            return Ok(false);
        }
        let mut xor = 0u64;
        let mut cols = Vec::with_capacity(set.len());
        for &e in set {
            let c = self.column(e)?;
            xor ^= c;
            cols.push(c);
        }
        if xor != 0 {
            return Ok(false);
        }
        Ok(rank_of_columns(cols) == set.len() - 1)
    }

    /// Deletes one element. Circuits of the result are exactly the circuits
    /// avoiding `e`.
    pub fn delete(&self, e: Label) -> Result<Self, Gf2Error> {
        let i = self.index_of(e)?;
        let mut labels = self.labels.clone();
        let mut cols = self.cols.clone();
        labels.remove(i);
        cols.remove(i);
        Ok(BinaryMatroid {
            height: self.height,
            labels,
            cols,
        })
    }

    pub fn delete_all(&self, set: &[Label]) -> Result<Self, Gf2Error> {
        let mut out = self.clone();
        for &e in set {
            out = out.delete(e)?;
        }
        Ok(out)
    }

    /// Adds `e_new` parallel to `e`: the pair becomes a circuit.
    pub fn add_parallel(&self, e: Label, e_new: Label) -> Result<Self, Gf2Error> {
        if self.contains_label(e_new) {
            return Err(Gf2Error::DuplicateLabel(e_new));
        }
        let col = self.column(e)?;
        let mut pairs: Vec<(Label, u64)> = self
            .labels
            .iter()
            .copied()
            .zip(self.cols.iter().copied())
            .collect();
        pairs.push((e_new, col));
        BinaryMatroid::new(self.height, pairs)
    }

    /// The dual matroid, via standard-form completion: pick the
    /// lexicographically first column base, express every non-base column as
    /// a sum of base columns (the `D` block of `[I D]`), and return
    /// `[D^T I]` on the same labels.
    pub fn dual(&self) -> Result<Self, Gf2Error> {
        let m = self.m();
        // Greedy column elimination tracking, for every column, which
        // original base columns combine to it. Base-column masks only ever
        // involve base columns, so each non-base mask reads off one column
        // of D directly.
        let mut piv: Vec<(u64, u64)> = Vec::new(); // (reduced col, combo mask)
        let mut base_cols: Vec<usize> = Vec::new();
        let mut nonbase: Vec<(usize, u64)> = Vec::new(); // (col index, combo mask incl. itself)
        for j in 0..m {
            let mut c = self.cols[j];
            let mut mask = 1u64 << j;
            for &(pc, pm) in &piv {
                let lead = 63 - pc.leading_zeros();
                if c >> lead & 1 == 1 {
                    c ^= pc;
                    mask ^= pm;
                }
            }
            if c == 0 {
                nonbase.push((j, mask));
            } else {
                piv.push((c, mask));
                piv.sort_unstable_by_key(|p| std::cmp::Reverse(p.0));
                base_cols.push(j);
            }
        }
        let rho = base_cols.len();
        let dual_height = m - rho;
        if dual_height > MAX_HEIGHT {
            return Err(Gf2Error::HeightCap(dual_height));
        }
        let mut pairs = Vec::with_capacity(m);
        for (k, &(j, _)) in nonbase.iter().enumerate() {
            pairs.push((self.labels[j], 1u64 << k));
        }
        for &pj in &base_cols {
            let mut col = 0u64;
            for (k, &(_, mask)) in nonbase.iter().enumerate() {
                if mask >> pj & 1 == 1 {
                    col |= 1u64 << k;
                }
            }
            pairs.push((self.labels[pj], col));
        }
        BinaryMatroid::new(dual_height, pairs)
    }

    /// Kernel basis over the stored columns, as bitmasks over column indices.
    fn kernel_basis(&self) -> Vec<u64> {
        let m = self.m();
        assert!(m <= 64);
        // pivot list: (reduced column, combination mask over column indices)
        let mut piv: Vec<(u64, u64)> = Vec::new();
        let mut basis = Vec::new();
        for j in 0..m {
            let mut c = self.cols[j];
            let mut mask = 1u64 << j;
            for &(pc, pm) in &piv {
                let lead = 63 - pc.leading_zeros();
                if c >> lead & 1 == 1 {
                    c ^= pc;
                    mask ^= pm;
                }
            }
            if c == 0 {
                basis.push(mask);
            } else {
                piv.push((c, mask));
                piv.sort_unstable_by_key(|p| std::cmp::Reverse(p.0));
            }
        }
        basis
    }

    /// All members of the GF(2) cycle space (supports of kernel vectors),
    /// excluding the empty set, as label sets. Exponential in the nullspace
    /// dimension; guarded by `cap` on the ground-set size.
    pub fn cycle_space_members(&self, cap: usize) -> Result<Vec<Vec<Label>>, Gf2Error> {
        if self.m() > cap {
            return Err(Gf2Error::OracleCap { m: self.m(), cap });
        }
        let basis = self.kernel_basis();
        let d = basis.len();
        let mut out = Vec::new();
        let mut support = 0u64;
        // Gray-code walk over all nonzero basis combinations.
        for g in 1u64..(1u64 << d) {
            let flip = (g ^ (g >> 1)) ^ ((g - 1) ^ ((g - 1) >> 1));
            support ^= basis[flip.trailing_zeros() as usize];
            out.push(self.mask_to_labels(support));
        }
        out.sort_unstable();
        Ok(out)
    }

    fn mask_to_labels(&self, mask: u64) -> Vec<Label> {
        let mut v = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            v.push(self.labels[j]);
            m &= m - 1;
        }
        v
    }

    /// Exhaustive circuit enumeration subject to the query filters: exactly
    /// the circuits `C` with `required ⊆ C`, `C ∩ forbidden = ∅` and
    /// `Σ w(e) <= weight_cap`, in canonical lexicographic order.
    ///
    /// This is the ground-truth oracle the composed enumerators are verified
    /// against. It walks the kernel of the representation and keeps minimal
    /// supports; the cost is exponential in the nullspace dimension, hence
    /// the cap.
    pub fn enumerate_circuits(
        &self,
        q: &CircuitQuery,
        cap: usize,
    ) -> Result<Vec<Circuit>, Gf2Error> {
        for &e in q.required.iter().chain(q.forbidden.iter()) {
            if !self.contains_label(e) {
                return Err(Gf2Error::UnknownLabel(e));
            }
        }
        if let Some(e) = q.required.iter().find(|e| q.forbidden.contains(e)) {
            return Err(Gf2Error::FilterOverlap(*e));
        }
        if let Some(w) = &q.weights {
            for (&l, &wv) in w {
                if wv == 0 {
                    return Err(Gf2Error::NonPositiveWeight(l));
                }
            }
        }
        // Circuits avoiding the forbidden set are exactly the circuits of the
        // deletion, so shrink the search space first.
        let base = if q.forbidden.is_empty() {
            self.clone()
        } else {
            self.delete_all(&q.forbidden)?
        };
        if base.m() > cap {
            return Err(Gf2Error::OracleCap { m: base.m(), cap });
        }

        let mut required_mask = 0u64;
        for &e in &q.required {
            required_mask |= 1u64 << base.index_of(e)?;
        }
        let weights: Vec<u64> = base
            .labels
            .iter()
            .map(|l| {
                q.weights
                    .as_ref()
                    .and_then(|w| w.get(l).copied())
                    .unwrap_or(1)
            })
            .collect();

        let basis = base.kernel_basis();
        let d = basis.len();
        let mut out: Vec<Circuit> = Vec::new();
        let mut support = 0u64;
        for g in 1u64..(1u64 << d) {
            let flip = (g ^ (g >> 1)) ^ ((g - 1) ^ ((g - 1) >> 1));
            support ^= basis[flip.trailing_zeros() as usize];
            if support & required_mask != required_mask {
                continue;
            }
            if let Some(cap) = q.weight_cap {
                let mut total: u128 = 0;
                let mut m = support;
                while m != 0 {
                    total += weights[m.trailing_zeros() as usize] as u128;
                    m &= m - 1;
                }
                if total > cap {
                    continue;
                }
            }
            // Minimality: a kernel support is a circuit iff its columns have
            // rank |S| - 1.
            let cols: Vec<u64> = {
                let mut v = Vec::new();
                let mut m = support;
                while m != 0 {
                    v.push(base.cols[m.trailing_zeros() as usize]);
                    m &= m - 1;
                }
                v
            };
            if rank_of_columns(cols) != support.count_ones() as usize - 1 {
                continue;
            }
            out.push(Circuit::from_labels(base.mask_to_labels(support)));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Minimum circuit size, if the matroid has any circuit.
    pub fn girth(&self, cap: usize) -> Result<Option<usize>, Gf2Error> {
        let all = self.enumerate_circuits(&CircuitQuery::default(), cap)?;
        Ok(all.iter().map(|c| c.len()).min())
    }

    /// Splits a cycle-space member into pairwise-disjoint circuits by
    /// repeatedly extracting the lexicographically smallest circuit contained
    /// in the remaining set.
    pub fn decompose_symmetric_difference(&self, set: &[Label]) -> Result<Vec<Circuit>, Gf2Error> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut xor = 0u64;
        for &e in &sorted {
            xor ^= self.column(e)?;
        }
        if xor != 0 {
            return Err(Gf2Error::NotCycleSpace);
        }
        let mut rest = sorted;
        let mut out = Vec::new();
        while !rest.is_empty() {
            let outside: Vec<Label> = self
                .labels
                .iter()
                .copied()
                .filter(|e| rest.binary_search(e).is_err())
                .collect();
            let q = CircuitQuery {
                forbidden: outside,
                ..Default::default()
            };
            // The remaining set stays in the cycle space, so a circuit inside
            // it always exists; the cap is the full ground set by necessity.
            let inside = self.enumerate_circuits(&q, self.m())?;
            let smallest = inside.into_iter().next().ok_or(Gf2Error::NotCycleSpace)?;
            rest = crate::types::set_minus(&rest, smallest.elements());
            out.push(smallest);
        }
        Ok(out)
    }

    /// The two explicit leaf matroids, with labels `0..m`.
    pub fn builtin(which: Builtin) -> Self {
        let (rows, m): (Vec<Vec<u8>>, usize) = match which {
            Builtin::R10 => (
                vec![
                    vec![1, 1, 0, 0, 1, 1, 0, 0, 0, 0],
                    vec![1, 1, 1, 0, 0, 0, 1, 0, 0, 0],
                    vec![0, 1, 1, 1, 0, 0, 0, 1, 0, 0],
                    vec![0, 0, 1, 1, 1, 0, 0, 0, 1, 0],
                    vec![1, 0, 0, 1, 1, 0, 0, 0, 0, 1],
                ],
                10,
            ),
            Builtin::F7 => (
                vec![
                    vec![1, 0, 0, 0, 1, 1, 1],
                    vec![0, 1, 0, 1, 0, 1, 1],
                    vec![0, 0, 1, 1, 1, 0, 1],
                ],
                7,
            ),
        };
        let labels: Vec<Label> = (0..m as u32).map(Label).collect();
        BinaryMatroid::from_rows(&rows, &labels).expect("builtin matrices are well-formed")
    }

    pub fn builtin_by_name(name: &str) -> Result<Self, Gf2Error> {
        match name.to_ascii_lowercase().as_str() {
            "r10" => Ok(Self::builtin(Builtin::R10)),
            "f7" => Ok(Self::builtin(Builtin::F7)),
            other => Err(Gf2Error::UnknownName(other.to_string())),
        }
    }

    /// Relabels every column through the given map. Labels not present in the
    /// map are kept. Fails on collisions.
    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> Result<Self, Gf2Error> {
        let pairs: Vec<(Label, u64)> = self
            .labels
            .iter()
            .zip(&self.cols)
            .map(|(l, &c)| (map.get(l).copied().unwrap_or(*l), c))
            .collect();
        BinaryMatroid::new(self.height, pairs)
    }

    /// Serializes to the GF2M text format: `height m`, then `height` rows of
    /// 0/1 digits, then the column labels.
    pub fn to_gf2m(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.height, self.m());
        for r in 0..self.height {
            let row: Vec<String> = self
                .cols
                .iter()
                .map(|c| ((c >> r) & 1).to_string())
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(s, "{}", labels.join(" "));
        s
    }

    /// Strict GF2M parser: exact line and token counts, no trailing garbage.
    pub fn from_gf2m(text: &str) -> Result<Self, Gf2Error> {
        let mut lines = text.lines().enumerate();
        let (n0, header) = lines.next().ok_or(Gf2Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Gf2Error::Parse {
                line: n0 + 1,
                msg: "expected `height m`".into(),
            });
        }
        let height: usize = head[0].parse().map_err(|_| Gf2Error::Parse {
            line: n0 + 1,
            msg: "bad height".into(),
        })?;
        let m: usize = head[1].parse().map_err(|_| Gf2Error::Parse {
            line: n0 + 1,
            msg: "bad m".into(),
        })?;
        let mut rows = Vec::with_capacity(height);
        for _ in 0..height {
            let (ln, row) = lines.next().ok_or(Gf2Error::Parse {
                line: height + 2,
                msg: "missing matrix row".into(),
            })?;
            let mut vals = Vec::with_capacity(m);
            for tok in row.split_whitespace() {
                match tok {
                    "0" => vals.push(0u8),
                    "1" => vals.push(1u8),
                    other => {
                        return Err(Gf2Error::Parse {
                            line: ln + 1,
                            msg: format!("expected 0/1 digit, found {other:?}"),
                        })
                    }
                }
            }
            if vals.len() != m {
                return Err(Gf2Error::Parse {
                    line: ln + 1,
                    msg: format!("expected {m} digits, found {}", vals.len()),
                });
            }
            rows.push(vals);
        }
        let (ln, label_line) = lines.next().ok_or(Gf2Error::Parse {
            line: height + 2,
            msg: "missing label line".into(),
        })?;
        let mut labels = Vec::with_capacity(m);
        for tok in label_line.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| Gf2Error::Parse {
                line: ln + 1,
                msg: format!("bad label {tok:?}"),
            })?;
            labels.push(Label(v));
        }
        if labels.len() != m {
            return Err(Gf2Error::Parse {
                line: ln + 1,
                msg: format!("expected {m} labels, found {}", labels.len()),
            });
        }
        if let Some((ln, extra)) = lines.next() {
            if !extra.trim().is_empty() {
                return Err(Gf2Error::Parse {
                    line: ln + 1,
                    msg: "trailing garbage".into(),
                });
            }
            for (ln2, rest) in lines {
                if !rest.trim().is_empty() {
                    return Err(Gf2Error::Parse {
                        line: ln2 + 1,
                        msg: "trailing garbage".into(),
                    });
                }
            }
        }
        BinaryMatroid::from_rows(&rows, &labels)
    }
}

/// Intersection of two ground sets, as a sorted label vector.
pub fn ground_intersection(a: &BinaryMatroid, b: &BinaryMatroid) -> Vec<Label> {
    intersect(a.ground_set(), b.ground_set())
}

/// Symmetric difference of two ground sets.
pub fn ground_symm_diff(a: &BinaryMatroid, b: &BinaryMatroid) -> Vec<Label> {
    symm_diff(a.ground_set(), b.ground_set())
}
