//! Closed-form counting bounds, evaluated exactly over big integers.

use crate::types::Alpha;
pub use num::bigint::BigUint;
use num::One;

/// `(4*alpha + 2*r_size)^{r_size} * (2m)^{2*alpha}` for integer `alpha`:
/// the cap on weighted cycles or cut-sets through a required set.
pub fn graphic_set_bound(alpha: u32, r_size: usize, m: usize) -> Option<BigUint> {
    if alpha == 0 || m < 2 {
        return None;
    }
    let lead = BigUint::from(4 * alpha as usize + 2 * r_size).pow(r_size as u32);
    let tail = BigUint::from(2 * m).pow(2 * alpha);
    Some(lead * tail)
}

/// Exact check of `observed <= base^(exp_num/exp_den)` via
/// `observed^exp_den <= base^exp_num`.
pub fn pow_bound_holds(observed: &BigUint, base: &BigUint, exp_num: u64, exp_den: u64) -> bool {
    assert!(exp_den > 0);
    observed.pow(exp_den as u32) <= base.pow(exp_num as u32)
}

/// floor(base^(num/den)) by binary search on `k^den <= base^num`.
pub fn floor_rational_pow(base: &BigUint, num: u64, den: u64) -> BigUint {
    assert!(den > 0);
    let target = base.pow(num as u32);
    if den == 1 {
        return target;
    }
    let mut lo = BigUint::from(0u32);
    let mut hi = target.clone() + BigUint::one();
    // Invariant: lo^den <= target < hi^den.
    while &lo + BigUint::one() < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(den as u32) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `(9m)^{4*alpha}`: the cap on the number of distinct circuit signatures.
pub fn signature_count_bound(m: usize, alpha: Alpha) -> BigUint {
    let (n, d) = alpha.four_times();
    floor_rational_pow(&BigUint::from(9 * m), n, d)
}

/// Does `observed <= (9m)^{4*alpha}` hold exactly?
pub fn signature_count_bound_holds(observed: usize, m: usize, alpha: Alpha) -> bool {
    let (n, d) = alpha.four_times();
    pow_bound_holds(&BigUint::from(observed), &BigUint::from(9 * m), n, d)
}

/// `(12*alpha)^{4*alpha} * (2m)^{2*alpha}`: the cap on the number of
/// center-node projections within one signature class. Reported as a floor
/// when the exponents are fractional; exact comparisons go through
/// [`center_class_bound_holds`].
pub fn center_class_bound(m: usize, alpha: Alpha) -> BigUint {
    let (n4, d4) = alpha.four_times();
    let (n2, d2) = alpha.two_times();
    let base12 = BigUint::from(12 * alpha.num());
    let denom = BigUint::from(alpha.den());
    // floor((12 num / den)^(n4/d4)): search k with k^d4 * den^n4 <= (12num)^n4.
    let first = if d4 == 1 {
        base12.pow(n4 as u32) / denom.pow(n4 as u32)
    } else {
        let target = base12.pow(n4 as u32);
        let scale = denom.pow(n4 as u32);
        let mut lo = BigUint::from(0u32);
        let mut hi = &target + BigUint::one();
        while &lo + BigUint::one() < hi {
            let mid: BigUint = (&lo + &hi) >> 1;
            if mid.pow(d4 as u32) * &scale <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    first * floor_rational_pow(&BigUint::from(2 * m), n2, d2)
}

/// Does `observed <= (12*alpha)^{4*alpha} * (2m)^{2*alpha}` hold exactly?
///
/// With alpha = num/den the comparison is raised to the power `den * d4 * d2`
/// free of fractions:
/// `obs^(d) <= (12 num/den)^(4a*d) * (2m)^(2a*d)` where exponents clear.
pub fn center_class_bound_holds(observed: usize, m: usize, alpha: Alpha) -> bool {
    let (n4, d4) = alpha.four_times();
    let (n2, d2) = alpha.two_times();
    // Common denominator for both exponents.
    let d = num::integer::lcm(d4, d2);
    let e4 = n4 * (d / d4);
    let e2 = n2 * (d / d2);
    // (12*alpha)^e4 = (12 num)^e4 / den^e4.
    let lhs = BigUint::from(observed).pow(d as u32) * BigUint::from(alpha.den()).pow(e4 as u32);
    let rhs = BigUint::from(12 * alpha.num()).pow(e4 as u32) * BigUint::from(2 * m).pow(e2 as u32);
    lhs <= rhs
}

/// Does `observed <= ((12*alpha)^{4*alpha} (2m)^{2*alpha})^{4*alpha}` hold?
/// This is the per-class circuit-count cap (one center factor per center).
pub fn class_size_bound_holds(observed: usize, m: usize, alpha: Alpha) -> bool {
    let (n4, d4) = alpha.four_times();
    let (n2, d2) = alpha.two_times();
    let d = num::integer::lcm(d4, d2);
    let e4 = n4 * (d / d4);
    let e2 = n2 * (d / d2);
    // Raise everything by the outer 4*alpha = n4/d4 as well: compare
    // obs^(d*d4) * den^(e4*n4) <= ((12num)^e4 (2m)^e2)^n4.
    let lhs = BigUint::from(observed).pow((d * d4) as u32)
        * BigUint::from(alpha.den()).pow((e4 * n4) as u32);
    let rhs = (BigUint::from(12 * alpha.num()).pow(e4 as u32)
        * BigUint::from(2 * m).pow(e2 as u32))
    .pow(n4 as u32);
    lhs <= rhs
}

/// `(2m)^{2*alpha}` as a floor value, for reporting.
pub fn simple_circuit_bound(m: usize, alpha: Alpha) -> BigUint {
    let (n, d) = alpha.two_times();
    floor_rational_pow(&BigUint::from(2 * m), n, d)
}

/// Does `observed <= (2m)^{2*alpha}` hold exactly?
pub fn simple_circuit_bound_holds(observed: usize, m: usize, alpha: Alpha) -> bool {
    let (n, d) = alpha.two_times();
    pow_bound_holds(&BigUint::from(observed), &BigUint::from(2 * m), n, d)
}
