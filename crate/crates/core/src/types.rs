//! Shared domain types: element labels, canonical circuits, exact rational
//! factors and enumeration caps.

use std::fmt;
use std::str::FromStr;

/// Ground-set element label. Labels are globally unique within a composed
/// matroid and stable under deletion, parallel extension and sums.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A canonical circuit value: a sorted, duplicate-free set of labels.
///
/// The same value type carries cocircuits, cut-sets and cycles. Ordering is
/// lexicographic on the sorted label list, which fixes the canonical
/// enumeration order everywhere.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Circuit(Vec<Label>);

impl Circuit {
    pub fn from_labels(mut labels: Vec<Label>) -> Self {
        labels.sort_unstable();
        labels.dedup();
        Circuit(labels)
    }

    pub fn elements(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: Label) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn into_labels(self) -> Vec<Label> {
        self.0
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// Inclusion-wise minimal cut-set of a graph, i.e. a cographic circuit.
pub type CutSet = Circuit;

// Sorted-slice set algebra. All label sets passed around the crate are kept
// sorted and duplicate-free so these merges stay linear.

pub fn symm_diff(a: &[Label], b: &[Label]) -> Vec<Label> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn intersect(a: &[Label], b: &[Label]) -> Vec<Label> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn set_union(a: &[Label], b: &[Label]) -> Vec<Label> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}

pub fn set_minus(a: &[Label], b: &[Label]) -> Vec<Label> {
    a.iter()
        .copied()
        .filter(|e| b.binary_search(e).is_err())
        .collect()
}

pub fn is_subset(a: &[Label], b: &[Label]) -> bool {
    a.iter().all(|e| b.binary_search(e).is_ok())
}

pub fn is_disjoint(a: &[Label], b: &[Label]) -> bool {
    intersect(a, b).is_empty()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact nonnegative rational, used for multiplicative factors so size
/// comparisons like `|C| <= alpha * r` stay integral.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Alpha {
    num: u64,
    den: u64,
}

impl Alpha {
    pub fn new(num: u64, den: u64) -> Option<Alpha> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        Some(Alpha {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_int(n: u64) -> Alpha {
        Alpha { num: n, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn at_least_one(&self) -> bool {
        self.num >= self.den
    }

    /// `k <= self * r`, compared exactly as `k * den <= num * r`.
    pub fn ge_times(&self, k: u64, r: u64) -> bool {
        (k as u128) * (self.den as u128) <= (self.num as u128) * (r as u128)
    }

    /// floor(self * r)
    pub fn floor_times(&self, r: u64) -> u64 {
        ((self.num as u128) * (r as u128) / (self.den as u128)) as u64
    }

    /// Smallest p with 2^p >= 2 * self.
    pub fn min_pow2_ge_twice(&self) -> u32 {
        let target = 2u128 * self.num as u128;
        let mut p = 0u32;
        while (1u128 << p) * (self.den as u128) < target {
            p += 1;
        }
        p
    }

    /// The rational 4 * self as a reduced (num, den) pair.
    pub fn four_times(&self) -> (u64, u64) {
        let g = gcd(4 * self.num, self.den).max(1);
        (4 * self.num / g, self.den / g)
    }

    /// The rational 2 * self as a reduced (num, den) pair.
    pub fn two_times(&self) -> (u64, u64) {
        let g = gcd(2 * self.num, self.den).max(1);
        (2 * self.num / g, self.den / g)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Alpha {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<u64>().map_err(|e| e.to_string())?,
                b.trim().parse::<u64>().map_err(|e| e.to_string())?,
            ),
            None => (s.trim().parse::<u64>().map_err(|e| e.to_string())?, 1),
        };
        Alpha::new(num, den).ok_or_else(|| "zero denominator".to_string())
    }
}

/// Size caps for the brute-force enumeration paths.
#[derive(Clone, Copy, Debug)]
pub struct OracleCaps {
    /// Ground-set cap for circuit enumeration over GF(2) combinations.
    pub max_m: usize,
    /// Vertex cap for exhaustive cut-set enumeration.
    pub max_cut_n: usize,
    /// min(rows, cols) cap for exhaustive total-unimodularity minor checks.
    pub max_tu: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_m: 24,
            max_cut_n: 16,
            max_tu: 8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(v: &[u32]) -> Vec<Label> {
        v.iter().map(|&x| Label(x)).collect()
    }

    #[test]
    fn set_algebra() {
        assert_eq!(symm_diff(&ls(&[1, 2, 3]), &ls(&[2, 3, 4])), ls(&[1, 4]));
        assert_eq!(intersect(&ls(&[1, 2, 3]), &ls(&[2, 3, 4])), ls(&[2, 3]));
        assert_eq!(set_minus(&ls(&[1, 2, 3]), &ls(&[2])), ls(&[1, 3]));
        assert!(is_subset(&ls(&[2, 3]), &ls(&[1, 2, 3])));
        assert!(!is_subset(&ls(&[2, 5]), &ls(&[1, 2, 3])));
        assert!(is_disjoint(&ls(&[1]), &ls(&[2, 3])));
    }

    #[test]
    fn circuit_order_is_lexicographic() {
        let a = Circuit::from_labels(ls(&[1, 2, 3]));
        let b = Circuit::from_labels(ls(&[1, 2, 4]));
        let c = Circuit::from_labels(ls(&[1, 2]));
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn alpha_arithmetic() {
        let a: Alpha = "3/2".parse().unwrap();
        assert_eq!(a.num(), 3);
        assert_eq!(a.den(), 2);
        assert!(a.ge_times(3, 2)); // 3 <= 3/2 * 2
        assert!(!a.ge_times(4, 2));
        assert_eq!(a.floor_times(3), 4); // floor(4.5)
        assert_eq!(a.min_pow2_ge_twice(), 2); // 2^2 = 4 >= 3
        assert_eq!(Alpha::from_int(1).min_pow2_ge_twice(), 1);
        assert_eq!(a.four_times(), (6, 1));
        assert_eq!(a.two_times(), (3, 1));
        assert_eq!("6/4".parse::<Alpha>().unwrap(), a);
        assert!("1/0".parse::<Alpha>().is_err());
    }
}
