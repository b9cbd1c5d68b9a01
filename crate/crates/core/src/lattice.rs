//! Totally unimodular matrices and their kernel lattices: signed circuits,
//! conformal decomposition, and near-shortest vector enumeration, each paired
//! with an independent brute-force route.

use crate::gf2::BinaryMatroid;
use crate::types::{Alpha, Label};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("entry {value} at ({row}, {col}) is outside {{-1, 0, 1}}")]
    Entry { row: usize, col: usize, value: i64 },
    #[error("matrix side {0} exceeds the exhaustive minor cap of {1}")]
    OracleCap(usize, usize),
    #[error("total unimodularity violated: {0}")]
    TuViolation(String),
    #[error("vector length {0} does not match {1} columns")]
    Shape(usize, usize),
    #[error("vector is not in the kernel lattice")]
    NotInKernel,
    #[error("shortest-vector promise violated: found kernel vector of squared norm {0}")]
    GirthViolation(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An integer matrix with entries in {-1, 0, 1}. The `tu_verified` flag
/// records that every square minor was exhaustively checked.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TuMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>, // row-major
    tu_verified: bool,
}

/// An integer vector of the kernel lattice.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn norm2(&self) -> u64 {
        self.0.iter().map(|&x| (x as i128 * x as i128) as u64).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl std::fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// A kernel vector with inclusion-minimal support; coordinates are always in
/// {-1, 0, 1} and the stored representative has a positive first nonzero
/// coordinate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct MatrixCircuit {
    pub vector: LatticeVector,
}

/// A square-minor witness against total unimodularity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: i64,
}

/// Exact determinant of a small integer matrix (Bareiss fraction-free
/// elimination). The empty matrix has determinant 1.
fn det_bareiss(mut m: Vec<Vec<i64>>) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i64;
    let mut prev = 1i64;
    for c in 0..n {
        let pivot = match (c..n).find(|&r| m[r][c] != 0) {
            Some(p) => p,
            None => return 0,
        };
        if pivot != c {
            m.swap(pivot, c);
            sign = -sign;
        }
        for r in (c + 1)..n {
            for cc in (c + 1)..n {
                m[r][cc] = (m[r][cc] * m[c][c] - m[r][c] * m[c][cc]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[c][c];
    }
    sign * m[n - 1][n - 1]
}

/// Rank of a rectangular integer matrix over the rationals, plus the
/// original indices of a maximal independent row set.
fn rational_rank(mut m: Vec<Vec<i64>>) -> (usize, Vec<usize>) {
    let rows = m.len();
    if rows == 0 {
        return (0, Vec::new());
    }
    let cols = m[0].len();
    let mut row_ids: Vec<usize> = (0..rows).collect();
    let mut rank = 0usize;
    let mut prev = 1i64;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = match (rank..rows).find(|&r| m[r][c] != 0) {
            Some(p) => p,
            None => continue,
        };
        m.swap(pivot, rank);
        row_ids.swap(pivot, rank);
        for r in (rank + 1)..rows {
            for cc in (c + 1)..cols {
                m[r][cc] = (m[r][cc] * m[rank][c] - m[r][c] * m[rank][cc]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    (rank, row_ids[..rank].to_vec())
}

fn gcd64(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl TuMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, LatticeError> {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        for r in 0..rows {
            for c in 0..cols {
                let v = entries[r * cols + c];
                if !(-1..=1).contains(&v) {
                    return Err(LatticeError::Entry {
                        row: r,
                        col: c,
                        value: v,
                    });
                }
            }
        }
        Ok(TuMatrix {
            rows,
            cols,
            entries,
            tu_verified: false,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(n * m);
        for r in rows {
            assert_eq!(r.len(), m, "ragged rows");
            entries.extend_from_slice(r);
        }
        TuMatrix::new(n, m, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        TuMatrix {
            rows: n,
            cols: n,
            entries,
            tu_verified: true,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn tu_verified(&self) -> bool {
        self.tu_verified
    }

    pub fn multiply(&self, v: &LatticeVector) -> Result<Vec<i64>, LatticeError> {
        if v.0.len() != self.cols {
            return Err(LatticeError::Shape(v.0.len(), self.cols));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.entry(r, c) * v.0[c]).sum())
            .collect())
    }

    pub fn in_kernel(&self, v: &LatticeVector) -> Result<bool, LatticeError> {
        Ok(self.multiply(v)?.iter().all(|&x| x == 0))
    }

    /// The first square minor with determinant outside {-1, 0, 1}, if any.
    /// Exhaustive over all row/column choices; capped on min(rows, cols).
    pub fn tu_witness(&self, cap: usize) -> Result<Option<MinorWitness>, LatticeError> {
        let side = self.rows.min(self.cols);
        if side > cap {
            return Err(LatticeError::OracleCap(side, cap));
        }
        for k in 1..=side {
            let mut row_sel: Vec<usize> = (0..k).collect();
            loop {
                let mut col_sel: Vec<usize> = (0..k).collect();
                loop {
                    let sub: Vec<Vec<i64>> = row_sel
                        .iter()
                        .map(|&r| col_sel.iter().map(|&c| self.entry(r, c)).collect())
                        .collect();
                    let d = det_bareiss(sub);
                    if d.abs() > 1 {
                        return Ok(Some(MinorWitness {
                            rows: row_sel.clone(),
                            cols: col_sel.clone(),
                            det: d,
                        }));
                    }
                    if !next_combination(&mut col_sel, self.cols) {
                        break;
                    }
                }
                if !next_combination(&mut row_sel, self.rows) {
                    break;
                }
            }
        }
        Ok(None)
    }

    /// True iff every square submatrix has determinant 0, 1 or -1.
    pub fn is_totally_unimodular(&self, cap: usize) -> Result<bool, LatticeError> {
        Ok(self.tu_witness(cap)?.is_none())
    }

    /// Checks total unimodularity and records the verdict in the flag.
    pub fn into_verified(mut self, cap: usize) -> Result<Self, LatticeError> {
        match self.tu_witness(cap)? {
            None => {
                self.tu_verified = true;
                Ok(self)
            }
            Some(w) => Err(LatticeError::TuViolation(format!(
                "minor rows {:?} cols {:?} has determinant {}",
                w.rows, w.cols, w.det
            ))),
        }
    }

    /// The primitive kernel vector supported on a circuit of the column
    /// matroid, by cofactor expansion over an independent row set. Returns
    /// `None` when the support does not carry a one-dimensional kernel with
    /// full support.
    fn kernel_vector_on(&self, support: &[usize]) -> Result<Option<Vec<i64>>, LatticeError> {
        let k = support.len();
        let sub: Vec<Vec<i64>> = (0..self.rows)
            .map(|r| support.iter().map(|&c| self.entry(r, c)).collect())
            .collect();
        let (rank, pivot_rows) = rational_rank(sub);
        if rank + 1 != k {
            return Ok(None);
        }
        let base: Vec<Vec<i64>> = pivot_rows
            .iter()
            .map(|&r| support.iter().map(|&c| self.entry(r, c)).collect())
            .collect();
        let mut u = Vec::with_capacity(k);
        for i in 0..k {
            let minor: Vec<Vec<i64>> = base
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let d = det_bareiss(minor);
            u.push(if i % 2 == 0 { d } else { -d });
        }
        if u.contains(&0) {
            return Ok(None); // support is not inclusion-minimal
        }
        let g = u.iter().fold(0i64, |acc, &x| gcd64(acc, x));
        for x in u.iter_mut() {
            *x /= g;
        }
        if u.iter().find(|&&x| x != 0).copied().unwrap_or(1) < 0 {
            for x in u.iter_mut() {
                *x = -*x;
            }
        }
        if u.iter().any(|&x| x.abs() > 1) {
            return Err(LatticeError::TuViolation(format!(
                "circuit on columns {support:?} has a coordinate outside {{-1, 0, 1}}"
            )));
        }
        Ok(Some(u))
    }

    /// One representative per +/- pair of the circuits of the matrix: the
    /// minimal-support kernel vectors, found by rational rank over every
    /// column subset. Optionally filtered to squared norm at most
    /// `norm2_cap`.
    pub fn matrix_circuits(
        &self,
        norm2_cap: Option<u64>,
        cap: usize,
    ) -> Result<Vec<MatrixCircuit>, LatticeError> {
        if self.cols > cap.min(20) {
            return Err(LatticeError::OracleCap(self.cols, cap.min(20)));
        }
        let mut found_masks: Vec<u32> = Vec::new();
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << self.cols) {
            let k = mask.count_ones() as u64;
            if let Some(cap2) = norm2_cap {
                if k > cap2 {
                    continue;
                }
            }
            if found_masks.iter().any(|&f| mask | f == mask) {
                continue; // proper superset of a known circuit support
            }
            let support: Vec<usize> = (0..self.cols).filter(|&c| mask >> c & 1 == 1).collect();
            if let Some(u) = self.kernel_vector_on(&support)? {
                let mut full = vec![0i64; self.cols];
                for (i, &c) in support.iter().enumerate() {
                    full[c] = u[i];
                }
                found_masks.push(mask);
                out.push(MatrixCircuit {
                    vector: LatticeVector(full),
                });
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// TUM text format: `n m`, then `n` rows of entries in {-1, 0, 1}.
    pub fn to_tum(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.rows, self.cols);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.entry(r, c).to_string())
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn from_tum(text: &str) -> Result<Self, LatticeError> {
        let mut lines = text.lines().enumerate();
        let (n0, header) = lines.next().ok_or(LatticeError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(LatticeError::Parse {
                line: n0 + 1,
                msg: "expected `n m`".into(),
            });
        }
        let n: usize = head[0].parse().map_err(|_| LatticeError::Parse {
            line: n0 + 1,
            msg: "bad n".into(),
        })?;
        let m: usize = head[1].parse().map_err(|_| LatticeError::Parse {
            line: n0 + 1,
            msg: "bad m".into(),
        })?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, row) = lines.next().ok_or(LatticeError::Parse {
                line: n + 2,
                msg: "missing row".into(),
            })?;
            let vals: Result<Vec<i64>, _> = row
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>().map_err(|_| LatticeError::Parse {
                        line: ln + 1,
                        msg: format!("bad entry {t:?}"),
                    })
                })
                .collect();
            let vals = vals?;
            if vals.len() != m {
                return Err(LatticeError::Parse {
                    line: ln + 1,
                    msg: format!("expected {m} entries, found {}", vals.len()),
                });
            }
            rows.push(vals);
        }
        for (ln, rest) in lines {
            if !rest.trim().is_empty() {
                return Err(LatticeError::Parse {
                    line: ln + 1,
                    msg: "trailing garbage".into(),
                });
            }
        }
        TuMatrix::from_rows(&rows)
    }

    /// The binary matroid of the matrix reduced mod 2, with columns labeled
    /// by index. For a TU matrix this has exactly the circuit supports of
    /// [`TuMatrix::matrix_circuits`].
    pub fn gf2_matroid(&self) -> Result<BinaryMatroid, crate::gf2::Gf2Error> {
        let rows: Vec<Vec<u8>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| (self.entry(r, c).rem_euclid(2)) as u8)
                    .collect()
            })
            .collect();
        let labels: Vec<Label> = (0..self.cols as u32).map(Label).collect();
        BinaryMatroid::from_rows(&rows, &labels)
    }
}

fn next_combination(sel: &mut [usize], n: usize) -> bool {
    let k = sel.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if sel[i] + (k - i) < n {
            sel[i] += 1;
            for j in (i + 1)..k {
                sel[j] = sel[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `u` is conformal to `v`: coordinatewise sign-compatible and dominated in
/// magnitude.
pub fn is_conformal(u: &LatticeVector, v: &LatticeVector) -> Result<bool, LatticeError> {
    if u.0.len() != v.0.len() {
        return Err(LatticeError::Shape(u.0.len(), v.0.len()));
    }
    Ok(u.0
        .iter()
        .zip(&v.0)
        .all(|(&a, &b)| a * b >= 0 && a.abs() <= b.abs()))
}

/// Writes a nonzero kernel vector as a sum of circuits, each conformal to
/// the input: greedily subtract the first conformal circuit (smallest
/// support, positive orientation first) until nothing remains. Also checks
/// the squared-norm superadditivity of the parts.
pub fn conformal_decompose(
    a: &TuMatrix,
    v: &LatticeVector,
    cap: usize,
) -> Result<Vec<MatrixCircuit>, LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::Precondition("vector must be nonzero".into()));
    }
    if !a.in_kernel(v)? {
        return Err(LatticeError::NotInKernel);
    }
    // Candidates in both orientations, ordered by support then sign.
    let mut candidates: Vec<LatticeVector> = Vec::new();
    for c in a.matrix_circuits(None, cap)? {
        let neg = LatticeVector(c.vector.0.iter().map(|&x| -x).collect());
        candidates.push(c.vector);
        candidates.push(neg);
    }
    candidates.sort_unstable_by_key(|c| (c.support(), c.0.iter().find(|&&x| x != 0) != Some(&1)));
    let mut rest = v.clone();
    let mut parts: Vec<MatrixCircuit> = Vec::new();
    while !rest.is_zero() {
        let pick = candidates
            .iter()
            .find(|c| is_conformal(c, &rest).unwrap_or(false));
        match pick {
            None => {
                return Err(LatticeError::TuViolation(format!(
                    "no conformal circuit inside the remainder {rest}; the matrix is not totally \
                     unimodular or the vector is outside the lattice"
                )))
            }
            Some(c) => {
                for (i, x) in rest.0.iter_mut().enumerate() {
                    *x -= c.0[i];
                }
                parts.push(MatrixCircuit { vector: c.clone() });
            }
        }
    }
    let norm_sum: u64 = parts.iter().map(|p| p.vector.norm2()).sum();
    debug_assert!(norm_sum <= v.norm2());
    Ok(parts)
}

/// All nonzero kernel vectors of squared norm at most `alpha^2 * lambda2`,
/// built as sums of fewer than `alpha^2` pairwise sign-compatible circuits.
/// Requires that no nonzero kernel vector has squared norm at most
/// `lambda2`; at desk scale the promise is verified by the box oracle.
pub fn enumerate_short_vectors(
    a: &TuMatrix,
    lambda2: u64,
    alpha: Alpha,
    cap: usize,
) -> Result<Vec<LatticeVector>, LatticeError> {
    if !alpha.at_least_one() {
        return Err(LatticeError::Precondition(
            "alpha must be at least 1".into(),
        ));
    }
    let p2 = alpha.num() as u128 * alpha.num() as u128;
    let q2 = alpha.den() as u128 * alpha.den() as u128;
    let norm_ok = |n2: u64| (n2 as u128) * q2 <= p2 * lambda2 as u128;
    let target_cap = ((p2 * lambda2 as u128) / q2) as u64;

    if a.cols <= cap {
        if let Some(short) = short_vectors_box_oracle(a, lambda2)?.into_iter().next() {
            return Err(LatticeError::GirthViolation(short.norm2()));
        }
    }
    // Parts strictly below alpha^2.
    let mut max_parts = (p2 / q2) as usize;
    if p2.is_multiple_of(q2) {
        max_parts = max_parts.saturating_sub(1);
    }
    let mut pool: Vec<LatticeVector> = Vec::new();
    for c in a.matrix_circuits(Some(target_cap), cap)? {
        let neg = LatticeVector(c.vector.0.iter().map(|&x| -x).collect());
        pool.push(c.vector);
        pool.push(neg);
    }
    pool.sort_unstable();
    let mut out: std::collections::BTreeSet<LatticeVector> = std::collections::BTreeSet::new();

    #[allow(clippy::too_many_arguments)]
    fn grow(
        pool: &[LatticeVector],
        from: usize,
        acc: &LatticeVector,
        parts: usize,
        max_parts: usize,
        norm_ok: &dyn Fn(u64) -> bool,
        out: &mut std::collections::BTreeSet<LatticeVector>,
    ) {
        if parts >= 1 {
            out.insert(acc.clone());
        }
        if parts == max_parts {
            return;
        }
        for j in from..pool.len() {
            let c = &pool[j];
            // Sign-compatible extension only: partial sums of a conformal
            // decomposition never cancel.
            if !acc.0.iter().zip(&c.0).all(|(&x, &y)| x * y >= 0) {
                continue;
            }
            let next = LatticeVector(acc.0.iter().zip(&c.0).map(|(&x, &y)| x + y).collect());
            if !norm_ok(next.norm2()) {
                continue;
            }
            grow(pool, j, &next, parts + 1, max_parts, norm_ok, out);
        }
    }
    let zero = LatticeVector(vec![0; a.cols]);
    grow(&pool, 0, &zero, 0, max_parts, &norm_ok, &mut out);
    // Every sum of kernel vectors stays in the kernel; verify anyway.
    let mut vecs: Vec<LatticeVector> = Vec::new();
    for v in out {
        if !v.is_zero() && a.in_kernel(&v)? {
            vecs.push(v);
        }
    }
    Ok(vecs)
}

/// Independent route: depth-first walk over the coordinate box with a norm
/// budget, keeping exactly the nonzero kernel vectors of squared norm at
/// most `norm2_cap`.
pub fn short_vectors_box_oracle(
    a: &TuMatrix,
    norm2_cap: u64,
) -> Result<Vec<LatticeVector>, LatticeError> {
    let m = a.cols;
    let mut out = Vec::new();
    let mut coords = vec![0i64; m];
    let bound = (norm2_cap as f64).sqrt() as i64 + 1;
    fn walk(
        a: &TuMatrix,
        coords: &mut Vec<i64>,
        idx: usize,
        used: u64,
        cap: u64,
        bound: i64,
        out: &mut Vec<LatticeVector>,
    ) {
        if idx == coords.len() {
            let v = LatticeVector(coords.clone());
            if !v.is_zero() && a.in_kernel(&v).unwrap_or(false) {
                out.push(v);
            }
            return;
        }
        for x in -bound..=bound {
            let sq = (x * x) as u64;
            if used + sq > cap {
                continue;
            }
            coords[idx] = x;
            walk(a, coords, idx + 1, used + sq, cap, bound, out);
        }
        coords[idx] = 0;
    }
    walk(a, &mut coords, 0, 0, norm2_cap, bound, &mut out);
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    #[test]
    fn tu_checks() {
        assert!(TuMatrix::identity(4).is_totally_unimodular(8).unwrap());
        let bad = TuMatrix::from_rows(&[vec![1, 1], vec![1, -1]]).unwrap();
        assert!(!bad.is_totally_unimodular(8).unwrap());
        let w = bad.tu_witness(8).unwrap().unwrap();
        assert_eq!(w.det.abs(), 2);
        assert!(matches!(
            TuMatrix::from_rows(&[vec![2]]),
            Err(LatticeError::Entry { .. })
        ));
        // Incidence matrix of a bipartite graph (path 0-1-2 as bipartite).
        let inc = TuMatrix::from_rows(&[vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        assert!(inc.is_totally_unimodular(8).unwrap());
        let big = TuMatrix::identity(9);
        assert!(matches!(
            big.tu_witness(8),
            Err(LatticeError::OracleCap(9, 8))
        ));
    }

    #[test]
    fn circuits_of_small_matrices() {
        let a = TuMatrix::from_rows(&[vec![1, 1]]).unwrap();
        let cs = a.matrix_circuits(None, 20).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].vector, lv(&[1, -1]));

        let a3 = TuMatrix::from_rows(&[vec![1, 1, 1]]).unwrap();
        let cs = a3.matrix_circuits(None, 20).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| c.vector.support().len() == 2));

        assert!(TuMatrix::identity(3)
            .matrix_circuits(None, 20)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn circuit_supports_match_gf2_matroid() {
        // Oriented incidence matrix of a directed 4-cycle with a chord.
        let a = TuMatrix::from_rows(&[
            vec![1, 0, 0, -1, 1],
            vec![-1, 1, 0, 0, 0],
            vec![0, -1, 1, 0, -1],
            vec![0, 0, -1, 1, 0],
        ])
        .unwrap();
        assert!(a.is_totally_unimodular(8).unwrap());
        let circuits = a.matrix_circuits(None, 20).unwrap();
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
        let m2 = a.gf2_matroid().unwrap();
        let gf2: Vec<Vec<Label>> = m2
            .enumerate_circuits(&crate::gf2::CircuitQuery::default(), 24)
            .unwrap()
            .into_iter()
            .map(|c| c.elements().to_vec())
            .collect();
        assert_eq!(supports, gf2);
        for c in &circuits {
            assert!(c.vector.0.iter().all(|&x| x.abs() <= 1));
        }
    }

    #[test]
    fn conformality() {
        assert!(is_conformal(&lv(&[1, 0, -1]), &lv(&[2, 0, -1])).unwrap());
        assert!(!is_conformal(&lv(&[1, 0, 1]), &lv(&[2, 0, -1])).unwrap());
        assert!(is_conformal(&lv(&[0, 0, 0]), &lv(&[2, 0, -1])).unwrap());
        assert!(matches!(
            is_conformal(&lv(&[1]), &lv(&[1, 2])),
            Err(LatticeError::Shape(1, 2))
        ));
    }

    #[test]
    fn greedy_conformal_decomposition() {
        let a = TuMatrix::from_rows(&[vec![1, 1, 1]]).unwrap();
        let v = lv(&[2, -1, -1]);
        let parts = conformal_decompose(&a, &v, 20).unwrap();
        let got: Vec<LatticeVector> = parts.iter().map(|p| p.vector.clone()).collect();
        assert_eq!(got, vec![lv(&[1, -1, 0]), lv(&[1, 0, -1])]);
        let mut sum = vec![0i64; 3];
        for p in &parts {
            for (i, x) in p.vector.0.iter().enumerate() {
                sum[i] += x;
            }
        }
        assert_eq!(sum, v.0);
        // A vector that is itself a circuit decomposes into one part.
        let single = conformal_decompose(&a, &lv(&[1, -1, 0]), 20).unwrap();
        assert_eq!(single.len(), 1);
        assert!(matches!(
            conformal_decompose(&a, &lv(&[1, 0, 0]), 20),
            Err(LatticeError::NotInKernel)
        ));
    }

    #[test]
    fn short_vector_enumeration_matches_box_oracle() {
        let a = TuMatrix::from_rows(&[
            vec![1, 0, 0, -1, 1],
            vec![-1, 1, 0, 0, 0],
            vec![0, -1, 1, 0, -1],
            vec![0, 0, -1, 1, 0],
        ])
        .unwrap();
        // Shortest kernel vector has squared norm 3 (the chord triangle).
        let lambda2 = 2;
        for alpha in [
            Alpha::from_int(1),
            Alpha::new(3, 2).unwrap(),
            Alpha::from_int(2),
        ] {
            let got = enumerate_short_vectors(&a, lambda2, alpha, 20).unwrap();
            let cap = (alpha.num() * alpha.num() * lambda2) / (alpha.den() * alpha.den());
            let expect = short_vectors_box_oracle(&a, cap).unwrap();
            assert_eq!(got, expect, "alpha = {alpha}");
            for v in &got {
                assert!(a.in_kernel(v).unwrap());
            }
        }
        // Identity: the kernel is trivial.
        let id = TuMatrix::identity(3);
        assert!(enumerate_short_vectors(&id, 5, Alpha::from_int(2), 20)
            .unwrap()
            .is_empty());
        // Promise violation is detected.
        assert!(matches!(
            enumerate_short_vectors(&a, 3, Alpha::from_int(2), 20),
            Err(LatticeError::GirthViolation(_))
        ));
    }

    #[test]
    fn tum_round_trip() {
        let a = TuMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, 1]]).unwrap();
        let text = a.to_tum();
        assert_eq!(TuMatrix::from_tum(&text).unwrap(), a);
        assert!(TuMatrix::from_tum("1 2\n1\n").is_err());
        assert!(TuMatrix::from_tum("1 1\n1\nrest\n").is_err());
    }
}
