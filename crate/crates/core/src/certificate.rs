//! Rearrangement certificates for schemes made only of balanced weighings.
//!
//! Adding the balanced weighings with positive multipliers gives one linear
//! identity `sum_j c_j w(j) = 0` in the true weights. If the coefficients
//! strictly decrease in the label, the rearrangement inequality says the
//! sum is smallest, and only then zero, when weights are in label order.
//! So a strictly decreasing combination proves every coin at once.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::fourier_motzkin::{self, Constraint};
use crate::model::{Relation, Scheme};

/// Most weighings `find_multipliers` accepts.
pub const MAX_SEARCH_WEIGHINGS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("weighing {index} is not balanced; certificates need `=` weighings only")]
    NonEqualityWeighing { index: usize },
    #[error("expected {expected} multipliers, got {got}")]
    MultiplierCountMismatch { expected: usize, got: usize },
    #[error("multiplier {index} is not positive")]
    NonPositiveMultiplier { index: usize },
    #[error("multiplier search supports at most {MAX_SEARCH_WEIGHINGS} weighings, got {0}")]
    TooManyWeighings(usize),
    #[error("cannot parse multiplier `{0}`")]
    BadMultiplier(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub multipliers: Vec<BigRational>,
    /// Combined coefficient of each coin, indexed by `label - 1`.
    pub coefficients: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// `c_position <= c_{position + 1}` (1-based labels).
    NotStrictlyDecreasing { position: usize },
    /// The labels themselves do not satisfy the combined identity.
    IdentitySumNonZero,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotStrictlyDecreasing { position } => write!(
                f,
                "coefficients not strictly decreasing at coins {} and {}",
                position,
                position + 1
            ),
            Rejection::IdentitySumNonZero => {
                write!(f, "labels do not satisfy the combined equation")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateCheck {
    Accepted(Certificate),
    Rejected {
        certificate: Certificate,
        reason: Rejection,
    },
}

impl CertificateCheck {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CertificateCheck::Accepted(_))
    }

    pub fn certificate(&self) -> &Certificate {
        match self {
            CertificateCheck::Accepted(c) => c,
            CertificateCheck::Rejected { certificate, .. } => certificate,
        }
    }
}

fn require_balanced(s: &Scheme) -> Result<(), CertificateError> {
    match s
        .weighings()
        .iter()
        .position(|w| w.outcome() != Relation::Equal)
    {
        Some(index) => Err(CertificateError::NonEqualityWeighing { index: index + 1 }),
        None => Ok(()),
    }
}

/// `+1` left pan, `-1` right pan, `0` out, per weighing and coin.
fn signs(s: &Scheme) -> Vec<Vec<i64>> {
    s.weighings()
        .iter()
        .map(|w| {
            let mut row = vec![0i64; s.n() as usize];
            for &c in w.left() {
                row[c as usize - 1] = 1;
            }
            for &c in w.right() {
                row[c as usize - 1] = -1;
            }
            row
        })
        .collect()
}

/// Combines the weighings with `multipliers` and checks the result.
pub fn check_certificate(
    s: &Scheme,
    multipliers: &[BigRational],
) -> Result<CertificateCheck, CertificateError> {
    require_balanced(s)?;
    if multipliers.len() != s.len() {
        return Err(CertificateError::MultiplierCountMismatch {
            expected: s.len(),
            got: multipliers.len(),
        });
    }
    if let Some(index) = multipliers.iter().position(|m| !m.is_positive()) {
        return Err(CertificateError::NonPositiveMultiplier { index: index + 1 });
    }

    let mut coefficients = vec![BigRational::zero(); s.n() as usize];
    for (row, lambda) in signs(s).iter().zip(multipliers) {
        for (c, &sign) in coefficients.iter_mut().zip(row) {
            if sign != 0 {
                *c += lambda * BigRational::from_integer(sign.into());
            }
        }
    }
    let certificate = Certificate {
        multipliers: multipliers.to_vec(),
        coefficients,
    };

    let c = &certificate.coefficients;
    if let Some(j) = (0..c.len().saturating_sub(1)).find(|&j| c[j] <= c[j + 1]) {
        return Ok(CertificateCheck::Rejected {
            certificate,
            reason: Rejection::NotStrictlyDecreasing { position: j + 1 },
        });
    }
    let identity_sum = c
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (j, cj)| {
            acc + cj * BigRational::from_integer((j + 1).into())
        });
    if !identity_sum.is_zero() {
        return Ok(CertificateCheck::Rejected {
            certificate,
            reason: Rejection::IdentitySumNonZero,
        });
    }
    Ok(CertificateCheck::Accepted(certificate))
}

/// Integer multipliers making the combined coefficients strictly decreasing,
/// if any exist.
///
/// The open cone `{lambda > 0 : c_j > c_{j+1}}` is non-empty exactly when
/// its scaled copy `{lambda >= 1 : c_j - c_{j+1} >= 1}` is, which is decided
/// exactly by Fourier-Motzkin elimination.
pub fn find_multipliers(s: &Scheme) -> Result<Option<Vec<BigInt>>, CertificateError> {
    require_balanced(s)?;
    let k = s.len();
    if k > MAX_SEARCH_WEIGHINGS {
        return Err(CertificateError::TooManyWeighings(k));
    }
    if k == 0 {
        return Ok(if s.n() == 1 { Some(Vec::new()) } else { None });
    }
    let rows = signs(s);
    let int = |v: i64| BigRational::from_integer(v.into());

    let mut constraints = Vec::new();
    for i in 0..k {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs[i] = BigRational::one();
        constraints.push(Constraint::new(coeffs, BigRational::one()));
    }
    for j in 0..s.n() as usize - 1 {
        let coeffs = rows.iter().map(|row| int(row[j] - row[j + 1])).collect();
        constraints.push(Constraint::new(coeffs, BigRational::one()));
    }
    Ok(fourier_motzkin::solve(k, constraints).map(|x| fourier_motzkin::to_primitive_integers(&x)))
}

/// Parses `12,7,3` or `1/2,3` style multiplier lists.
pub fn parse_multipliers(text: &str) -> Result<Vec<BigRational>, CertificateError> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<BigRational>()
                .map_err(|_| CertificateError::BadMultiplier(part.to_string()))
        })
        .collect()
}

pub fn format_rationals(values: &[BigRational]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
