//! Constructions of weighing schemes.
//!
//! All generated weighings carry the outcome the true weights produce, so
//! every generated scheme is consistent with the identity assignment.

mod particular;
mod split;
mod triangular;

pub use particular::{
    generate_particular_coin, generate_particular_coin_detailed, ParticularStrategy,
};
pub use split::{
    generate_binary, generate_refined, generate_refined_with_stats, BinaryPlan, RefinedStats,
};
pub use triangular::{
    decompose_triangular, triangular, triangular_decompositions, TriangularDecompositions,
    TriangularTriple,
};

use thiserror::Error;

use crate::bounds::ceil_log;
use crate::model::{ModelError, Scheme, Weighing};
use crate::verifier::VerifyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("{0}")]
    InvalidArgument(String),
    #[error("construction failed for n = {n}: {reason}")]
    ConstructionFailure { n: u32, reason: String },
    #[error("no legal triangular decomposition for coin {t} of {n}")]
    NoLegalDecomposition { n: u32, t: u32 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// `k` weighings `{k} < {k+1}` that sort the coins pairwise.
pub fn generate_trivial(n: u32) -> Result<Scheme, GenerateError> {
    if n == 0 {
        return Err(GenerateError::InvalidArgument(
            "n must be at least 1".into(),
        ));
    }
    let weighings = (1..n)
        .map(|k| Weighing::observed([k], [k + 1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Scheme::new(n, weighings)?)
}

/// Coins proven by the helper chain: the powers of two below `n`, and `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelperSet {
    pub n: u32,
    /// Ascending.
    pub coins: Vec<u32>,
    pub weighings_used: usize,
}

impl HelperSet {
    pub fn total(&self) -> u64 {
        self.coins.iter().map(|&c| c as u64).sum()
    }

    pub fn contains(&self, coin: u32) -> bool {
        self.coins.binary_search(&coin).is_ok()
    }

    /// Greedy largest-first subset of the helpers weighing exactly `amount`.
    pub fn subset_for(&self, amount: u64) -> Option<Vec<u32>> {
        let mut rest = amount;
        let mut picked = Vec::new();
        for &c in self.coins.iter().rev() {
            if c as u64 <= rest {
                rest -= c as u64;
                picked.push(c);
            }
        }
        (rest == 0).then(|| {
            picked.reverse();
            picked
        })
    }
}

/// The chain `1 < 2`, `1+2 < 4`, ..., then the binary digits of `n - 1`
/// against `n`.
pub fn generate_helper(n: u32) -> Result<(Scheme, HelperSet), GenerateError> {
    if n < 2 {
        return Err(GenerateError::InvalidArgument(
            "helper coins need n >= 2".into(),
        ));
    }
    let top = ceil_log(2, n as u64) - 1;
    let powers: Vec<u32> = (0..=top).map(|e| 1u32 << e).collect();

    let mut weighings = Vec::with_capacity(top as usize + 1);
    for j in 1..powers.len() {
        weighings.push(Weighing::observed(
            powers[..j].iter().copied(),
            [powers[j]],
        )?);
    }
    let digits = (0..=top).map(|e| 1u32 << e).filter(|p| (n - 1) & p != 0);
    weighings.push(Weighing::observed(digits, [n])?);

    let mut coins = powers;
    coins.push(n);
    let set = HelperSet {
        n,
        coins,
        weighings_used: weighings.len(),
    };
    Ok((Scheme::new(n, weighings)?, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize_scheme;
    use crate::verifier::identifies_all;

    fn text(s: &Scheme) -> String {
        String::from_utf8(serialize_scheme(s)).unwrap()
    }

    #[test]
    fn trivial_chain() {
        assert!(generate_trivial(1).unwrap().is_empty());
        assert_eq!(text(&generate_trivial(3).unwrap()), "n 3\n1 < 2\n2 < 3\n");
        let five = generate_trivial(5).unwrap();
        assert_eq!(five.len(), 4);
        assert!(identifies_all(&five).unwrap());
    }

    #[test]
    fn helper_twelve() {
        let (s, set) = generate_helper(12).unwrap();
        assert_eq!(text(&s), "n 12\n1 < 2\n1+2 < 4\n1+2+4 < 8\n1+2+8 < 12\n");
        assert_eq!(set.coins, vec![1, 2, 4, 8, 12]);
        assert_eq!(set.weighings_used, 4);
    }

    #[test]
    fn helper_small() {
        let (s, set) = generate_helper(2).unwrap();
        assert_eq!(text(&s), "n 2\n1 < 2\n");
        assert_eq!(set.coins, vec![1, 2]);

        let (s, set) = generate_helper(5).unwrap();
        assert_eq!(text(&s), "n 5\n1 < 2\n1+2 < 4\n4 < 5\n");
        assert_eq!(set.coins, vec![1, 2, 4, 5]);

        assert!(generate_helper(1).is_err());
    }

    #[test]
    fn helper_subsets() {
        let (_, set) = generate_helper(12).unwrap();
        assert_eq!(set.subset_for(0), Some(vec![]));
        assert_eq!(set.subset_for(11), Some(vec![1, 2, 8]));
        assert_eq!(set.subset_for(12), Some(vec![12]));
        assert_eq!(set.subset_for(27), Some(vec![1, 2, 4, 8, 12]));
        assert_eq!(set.subset_for(28), None);
    }

    #[test]
    fn helpers_are_proven() {
        for n in 2..=12 {
            let (s, set) = generate_helper(n).unwrap();
            for &c in &set.coins {
                let r = crate::verifier::identifies_coin(&s, c).unwrap();
                assert!(r.pinned, "n={n} helper {c}");
            }
        }
    }
}
