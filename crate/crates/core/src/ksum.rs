//! Sums of binary matroids along shared element sets of size 0, 1 or 3,
//! circuit classification across a sum, and the associativity check that
//! makes unordered decomposition trees well-defined.

use crate::gf2::{ground_intersection, BinaryMatroid, Gf2Error};
use crate::types::{intersect, is_subset, set_minus, symm_diff, Circuit, Label};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum KsumError {
    #[error("shared set has size {0}, expected 0, 1 or 3")]
    SumShape(usize),
    #[error("sum validity violated: {0}")]
    SumValidity(String),
    #[error("set is not a circuit of the sum")]
    NotCircuit,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("decomposition tree malformed: {0}")]
    TreeShape(String),
    #[error("instance generation failed: {0}")]
    Generation(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Which sum a shared set induced, with the shared elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SumKind {
    OneSum,
    TwoSum { shared: Label },
    ThreeSum { shared: [Label; 3] },
}

impl SumKind {
    pub fn shared(&self) -> Vec<Label> {
        match self {
            SumKind::OneSum => vec![],
            SumKind::TwoSum { shared } => vec![*shared],
            SumKind::ThreeSum { shared } => shared.to_vec(),
        }
    }
}

/// How one circuit of a 2- or 3-sum decomposes over the operands: fully
/// inside one side avoiding the shared set, or split through a unique shared
/// element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CircuitCase {
    FirstOnly(Circuit),
    SecondOnly(Circuit),
    Split {
        shared: Label,
        first: Circuit,
        second: Circuit,
    },
}

fn validate_two_sum(m1: &BinaryMatroid, m2: &BinaryMatroid, s: Label) -> Result<(), KsumError> {
    for (m, name) in [(m1, "first"), (m2, "second")] {
        if m.m() < 3 {
            return Err(KsumError::SumValidity(format!(
                "{name} operand has fewer than 3 elements"
            )));
        }
        if m.is_circuit(&[s])? {
            return Err(KsumError::SumValidity(format!(
                "shared element {s} is a circuit of the {name} operand"
            )));
        }
        if m.dual()?.is_circuit(&[s])? {
            return Err(KsumError::SumValidity(format!(
                "shared element {s} is a circuit of the {name} operand's dual"
            )));
        }
    }
    Ok(())
}

fn validate_three_sum(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
    shared: &[Label],
) -> Result<(), KsumError> {
    for (m, name) in [(m1, "first"), (m2, "second")] {
        if m.m() < 7 {
            return Err(KsumError::SumValidity(format!(
                "{name} operand has fewer than 7 elements"
            )));
        }
        if !m.is_circuit(shared)? {
            return Err(KsumError::SumValidity(format!(
                "shared triple is not a circuit of the {name} operand"
            )));
        }
        let dual = m.dual()?;
        // No nonempty subset of the shared triple may be a dual circuit.
        let subsets: [&[usize]; 7] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];
        for idx in subsets {
            let sub: Vec<Label> = idx.iter().map(|&i| shared[i]).collect();
            if dual.is_circuit(&sub)? {
                return Err(KsumError::SumValidity(format!(
                    "shared triple contains a cocircuit of the {name} operand"
                )));
            }
        }
    }
    Ok(())
}

/// Classifies the shared set and checks the side conditions for the
/// corresponding sum, without building it.
pub fn classify_sum(m1: &BinaryMatroid, m2: &BinaryMatroid) -> Result<SumKind, KsumError> {
    let shared = ground_intersection(m1, m2);
    match shared.len() {
        0 => Ok(SumKind::OneSum),
        1 => {
            validate_two_sum(m1, m2, shared[0])?;
            Ok(SumKind::TwoSum { shared: shared[0] })
        }
        3 => {
            validate_three_sum(m1, m2, &shared)?;
            Ok(SumKind::ThreeSum {
                shared: [shared[0], shared[1], shared[2]],
            })
        }
        n => Err(KsumError::SumShape(n)),
    }
}

/// The sum of two binary matroids along their shared elements.
///
/// The result lives on the symmetric difference of the ground sets; its
/// cycle space is exactly the set of restrictions `C1 △ C2` over cycle-space
/// members agreeing on the shared set. The representation stacks the two
/// matrices with shared columns identified and eliminates the shared
/// coordinates by pivoting, which realizes precisely that kernel projection.
pub fn delta_sum(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
) -> Result<(BinaryMatroid, SumKind), KsumError> {
    let kind = classify_sum(m1, m2)?;
    let shared = kind.shared();
    let h1 = m1.height();
    let h2 = m2.height();
    if h1 + h2 > crate::gf2::MAX_HEIGHT {
        return Err(KsumError::Precondition(format!(
            "stacked height {} exceeds {}",
            h1 + h2,
            crate::gf2::MAX_HEIGHT
        )));
    }

    // Stack: one column per element of E1 ∪ E2, shared columns carrying both
    // halves.
    let mut labels: Vec<Label> = Vec::new();
    let mut cols: Vec<u64> = Vec::new();
    for &e in m1.ground_set() {
        let lo = m1.column(e)?;
        let hi = if shared.binary_search(&e).is_ok() {
            m2.column(e)?
        } else {
            0
        };
        labels.push(e);
        cols.push(lo | (hi << h1));
    }
    for &e in m2.ground_set() {
        if shared.binary_search(&e).is_ok() {
            continue;
        }
        labels.push(e);
        cols.push(m2.column(e)? << h1);
    }

    // Eliminate each shared column: pivot on one of its rows, clear it from
    // the other columns, then drop the pivot row and the column. A shared
    // column that has become zero is simply dropped (its kernel coordinate is
    // unconstrained, so projection is plain removal).
    let mut height = h1 + h2;
    for &s in &shared {
        let j = labels
            .iter()
            .position(|&l| l == s)
            .expect("shared column present");
        let col = cols[j];
        if col != 0 {
            let prow = col.trailing_zeros() as usize;
            for (k, c) in cols.iter_mut().enumerate() {
                if k != j && *c >> prow & 1 == 1 {
                    *c ^= col;
                }
            }
            // Drop row `prow` from every column.
            let low_mask = (1u64 << prow) - 1;
            for c in cols.iter_mut() {
                *c = (*c & low_mask) | ((*c >> (prow + 1)) << prow);
            }
            height -= 1;
        }
        labels.remove(j);
        cols.remove(j);
    }
    // Compact away zero rows so chained sums stay within the height cap.
    let mut used = 0u64;
    for &c in &cols {
        used |= c;
    }
    let mut compacted = vec![0u64; cols.len()];
    let mut new_height = 0usize;
    for r in 0..height {
        if used >> r & 1 == 1 {
            for (j, &c) in cols.iter().enumerate() {
                if c >> r & 1 == 1 {
                    compacted[j] |= 1u64 << new_height;
                }
            }
            new_height += 1;
        }
    }
    let matroid = BinaryMatroid::new(new_height, labels.into_iter().zip(compacted).collect())?;
    Ok((matroid, kind))
}

/// Definitional circuit set of a sum: minimal nonempty sets `C1 △ C2` inside
/// `E1 △ E2` where each `Ci` ranges over the cycle space of its operand and
/// the two agree on the shared elements. Exponential brute force, used to
/// certify [`delta_sum`].
pub fn definitional_sum_circuits(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
    cap: usize,
) -> Result<Vec<Circuit>, KsumError> {
    let shared = ground_intersection(m1, m2);
    let mut members1 = m1.cycle_space_members(cap)?;
    let mut members2 = m2.cycle_space_members(cap)?;
    members1.push(Vec::new());
    members2.push(Vec::new());
    let mut sums: Vec<Vec<Label>> = Vec::new();
    for z1 in &members1 {
        let b1 = intersect(z1, &shared);
        for z2 in &members2 {
            if intersect(z2, &shared) != b1 {
                continue;
            }
            let x = symm_diff(z1, z2);
            if !x.is_empty() {
                sums.push(x);
            }
        }
    }
    sums.sort_unstable();
    sums.dedup();
    let mut minimal: Vec<Circuit> = Vec::new();
    'outer: for x in &sums {
        for y in &sums {
            if y.len() < x.len() && is_subset(y, x) {
                continue 'outer;
            }
        }
        minimal.push(Circuit::from_labels(x.clone()));
    }
    minimal.sort_unstable();
    Ok(minimal)
}

/// Certifies that the representation built by [`delta_sum`] has exactly the
/// definitional circuit set.
pub fn verify_delta_sum(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
    cap: usize,
) -> Result<bool, KsumError> {
    let (sum, _) = delta_sum(m1, m2)?;
    let built = sum.enumerate_circuits(&crate::gf2::CircuitQuery::default(), cap)?;
    let defined = definitional_sum_circuits(m1, m2, cap)?;
    Ok(built == defined)
}

/// Decomposes a circuit of a 2- or 3-sum into exactly one of the three cases.
/// The split witness is forced: for each shared element `e`, the only
/// candidate pair is `C ∩ (E1 ∖ S) ∪ {e}` against `C ∩ (E2 ∖ S) ∪ {e}`.
pub fn classify_circuit(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
    kind: &SumKind,
    c: &Circuit,
) -> Result<CircuitCase, KsumError> {
    let shared = kind.shared();
    if shared.is_empty() {
        return Err(KsumError::Precondition(
            "classification needs a 2- or 3-sum".into(),
        ));
    }
    let e1_private = set_minus(m1.ground_set(), &shared);
    let e2_private = set_minus(m2.ground_set(), &shared);
    let in_first = intersect(c.elements(), &e1_private);
    let in_second = intersect(c.elements(), &e2_private);
    if in_first.len() + in_second.len() != c.len() {
        return Err(KsumError::NotCircuit);
    }

    let mut cases: Vec<CircuitCase> = Vec::new();
    if in_second.is_empty() && m1.is_circuit(&in_first)? {
        cases.push(CircuitCase::FirstOnly(Circuit::from_labels(
            in_first.clone(),
        )));
    }
    if in_first.is_empty() && m2.is_circuit(&in_second)? {
        cases.push(CircuitCase::SecondOnly(Circuit::from_labels(
            in_second.clone(),
        )));
    }
    for &e in &shared {
        let mut c1 = in_first.clone();
        c1.push(e);
        c1.sort_unstable();
        let mut c2 = in_second.clone();
        c2.push(e);
        c2.sort_unstable();
        if m1.is_circuit(&c1)? && m2.is_circuit(&c2)? {
            cases.push(CircuitCase::Split {
                shared: e,
                first: Circuit::from_labels(c1),
                second: Circuit::from_labels(c2),
            });
        }
    }
    match cases.len() {
        0 => Err(KsumError::NotCircuit),
        1 => Ok(cases.pop().unwrap()),
        n => Err(KsumError::Precondition(format!(
            "{n} decomposition cases fired for one circuit; operands do not form a valid sum"
        ))),
    }
}

/// Checks that the two association orders of `M1 △ (M3 △ M4)` yield the same
/// circuit set, given that the common set of the outer sum lies entirely in
/// one inner operand. Always true under the preconditions; a `false` return
/// is a build-stopping event.
pub fn check_associativity(
    m1: &BinaryMatroid,
    m3: &BinaryMatroid,
    m4: &BinaryMatroid,
    cap: usize,
) -> Result<bool, KsumError> {
    let (m2, _) = delta_sum(m3, m4)?;
    let s2 = ground_intersection(m1, &m2);
    let in_e3 = is_subset(&s2, m3.ground_set());
    let in_e4 = is_subset(&s2, m4.ground_set());
    if !in_e3 && !in_e4 {
        return Err(KsumError::Precondition(
            "outer shared set splits across both inner operands".into(),
        ));
    }
    let (left, _) = delta_sum(m1, &m2)?;
    let right = if in_e3 {
        let (inner, _) = delta_sum(m1, m3)?;
        delta_sum(&inner, m4)?.0
    } else {
        let (inner, _) = delta_sum(m1, m4)?;
        delta_sum(&inner, m3)?.0
    };
    let q = crate::gf2::CircuitQuery::default();
    Ok(left.enumerate_circuits(&q, cap)? == right.enumerate_circuits(&q, cap)?)
}
