//! Closed-form bounds on the number of weighings needed for `n` coins.
//!
//! Every logarithm is rounded with exact integer comparisons. The refined
//! bound uses the base `1/alpha` with `alpha = sqrt(6) - 2`; powers of alpha
//! are carried as `p + q*sqrt(6)` with big integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Values of the sequence that are known exactly.
///
/// 1..=6 by hand, 7..=11 by exhaustive search, 12..=19 by explicit
/// three-weighing schemes, 53 and 58 by explicit four-weighing schemes.
pub const KNOWN_EXACT: &[(u64, u32)] = &[
    (1, 0),
    (2, 1),
    (3, 2),
    (4, 2),
    (5, 2),
    (6, 2),
    (7, 3),
    (8, 3),
    (9, 3),
    (10, 3),
    (11, 3),
    (12, 3),
    (13, 3),
    (14, 3),
    (15, 3),
    (16, 3),
    (17, 3),
    (18, 3),
    (19, 3),
    (53, 4),
    (58, 4),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: u64,
    pub natural_lower: u32,
    /// Only valid if some optimal scheme contains a weighing that splits
    /// lightest-versus-heaviest and balances to within one gram.
    pub conditional_lower: u32,
    pub trivial_upper: u64,
    pub binary_upper: u32,
    pub refined_upper: u32,
    pub known_exact: Option<u32>,
}

/// Smallest `k >= 0` with `base^k >= n`.
pub fn ceil_log(base: u64, n: u64) -> u32 {
    assert!(base >= 2);
    let mut k = 0;
    let mut power: u128 = 1;
    while power < n as u128 {
        power *= base as u128;
        k += 1;
    }
    k
}

/// `x + y*sqrt(6) <= 0`, decided exactly.
fn quadratic_nonpositive(x: &BigInt, y: &BigInt) -> bool {
    match (x.is_positive(), y.is_positive()) {
        (false, false) => true,
        (true, true) => false,
        // x > 0 >= y: need 6y^2 >= x^2.
        (true, false) => BigInt::from(6) * y * y >= x * x,
        // y > 0 >= x: need x^2 >= 6y^2.
        (false, true) => x * x >= BigInt::from(6) * y * y,
    }
}

/// Smallest `k >= 0` with `(1/alpha)^k >= n`, i.e. `n * alpha^k <= 1`.
pub fn ceil_log_inverse_alpha(n: u64) -> u32 {
    let n = BigInt::from(n);
    let one = BigInt::from(1);
    // alpha^k = p + q*sqrt(6)
    let (mut p, mut q) = (BigInt::from(1), BigInt::zero());
    let mut k = 0;
    while !quadratic_nonpositive(&(&n * &p - &one), &(&n * &q)) {
        let next_p = BigInt::from(-2) * &p + BigInt::from(6) * &q;
        let next_q = &p - BigInt::from(2) * &q;
        p = next_p;
        q = next_q;
        k += 1;
    }
    k
}

/// Smallest `m` with `m >= alpha * width`.
pub fn ceil_alpha_times(width: u64) -> u64 {
    // m >= (sqrt6 - 2) w  <=>  (m + 2w)^2 >= 6 w^2
    let w = width as u128;
    let target = 6 * w * w;
    let mut m = (width * 44 / 100).saturating_sub(1) as u128;
    while (m + 2 * w) * (m + 2 * w) < target {
        m += 1;
    }
    m as u64
}

pub fn known_exact(n: u64) -> Option<u32> {
    KNOWN_EXACT.iter().find(|&&(m, _)| m == n).map(|&(_, a)| a)
}

pub fn bounds_for(n: u64) -> BoundsReport {
    assert!(n >= 1, "bounds need at least one coin");
    let log2 = ceil_log(2, n);
    let conditional_lower = if n == 1 {
        0
    } else {
        // ceil(log3(3n/8)) + 1, with 3n/8 > 1/3 so the ceiling is >= 0
        let mut k = 0;
        let mut power: u128 = 1;
        while 8 * power < 3 * n as u128 {
            power *= 3;
            k += 1;
        }
        k + 1
    };
    BoundsReport {
        n,
        natural_lower: ceil_log(3, n),
        conditional_lower,
        trivial_upper: n - 1,
        binary_upper: 2 * log2,
        refined_upper: log2 + ceil_log_inverse_alpha(n),
        known_exact: known_exact(n),
    }
}
