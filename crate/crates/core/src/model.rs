//! Coins, weighings, schemes and assignments.
//!
//! A coin is named by the weight the prover claims for it, so labels and
//! true weights both live in `1..=n`. An [`Assignment`] is a hypothesis of
//! the audience: which true weight each labelled coin really has.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Outcome of a weighing, comparing the left pan against the right pan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

impl Relation {
    pub fn from_ordering(ord: Ordering) -> Self {
        match ord {
            Ordering::Less => Relation::Less,
            Ordering::Equal => Relation::Equal,
            Ordering::Greater => Relation::Greater,
        }
    }

    /// The relation seen after swapping the two pans.
    pub fn flip(self) -> Self {
        match self {
            Relation::Less => Relation::Greater,
            Relation::Equal => Relation::Equal,
            Relation::Greater => Relation::Less,
        }
    }

    /// Whether a signed difference `left - right` satisfies this relation.
    pub fn holds_for(self, diff: i64) -> bool {
        match self {
            Relation::Less => diff < 0,
            Relation::Equal => diff == 0,
            Relation::Greater => diff > 0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Relation::Less => '<',
            Relation::Equal => '=',
            Relation::Greater => '>',
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("coin {0} is on both pans")]
    CoinOnBothPans(u32),
    #[error("coin {0} appears twice on one pan")]
    DuplicateCoin(u32),
    #[error("weighing has no coins")]
    EmptyWeighing,
    #[error("coin label {label} is outside 1..={n}")]
    LabelOutOfRange { label: u32, n: u32 },
    #[error("a scheme needs at least one coin")]
    NoCoins,
    #[error("weights are not a permutation of 1..={0}")]
    NotABijection(u32),
}

/// One use of the balance: two disjoint sets of coin labels and the outcome.
///
/// Pans are kept sorted ascending, which is also the canonical text order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weighing {
    left: Vec<u32>,
    right: Vec<u32>,
    outcome: Relation,
}

impl Weighing {
    pub fn new(
        left: impl IntoIterator<Item = u32>,
        right: impl IntoIterator<Item = u32>,
        outcome: Relation,
    ) -> Result<Self, ModelError> {
        let mut left: Vec<u32> = left.into_iter().collect();
        let mut right: Vec<u32> = right.into_iter().collect();
        left.sort_unstable();
        right.sort_unstable();
        for pan in [&left, &right] {
            if let Some(w) = pan.windows(2).find(|w| w[0] == w[1]) {
                return Err(ModelError::DuplicateCoin(w[0]));
            }
            if pan.first() == Some(&0) {
                return Err(ModelError::LabelOutOfRange { label: 0, n: 0 });
            }
        }
        if left.is_empty() && right.is_empty() {
            return Err(ModelError::EmptyWeighing);
        }
        if let Some(&c) = left.iter().find(|c| right.binary_search(c).is_ok()) {
            return Err(ModelError::CoinOnBothPans(c));
        }
        Ok(Weighing {
            left,
            right,
            outcome,
        })
    }

    /// Builds a weighing whose outcome is what the true (identity) weights give.
    pub fn observed(
        left: impl IntoIterator<Item = u32>,
        right: impl IntoIterator<Item = u32>,
    ) -> Result<Self, ModelError> {
        let mut w = Weighing::new(left, right, Relation::Equal)?;
        w.outcome = Relation::from_ordering(w.left_total().cmp(&w.right_total()));
        Ok(w)
    }

    pub fn left(&self) -> &[u32] {
        &self.left
    }

    pub fn right(&self) -> &[u32] {
        &self.right
    }

    pub fn outcome(&self) -> Relation {
        self.outcome
    }

    /// Total claimed weight of the left pan.
    pub fn left_total(&self) -> u64 {
        self.left.iter().map(|&c| c as u64).sum()
    }

    pub fn right_total(&self) -> u64 {
        self.right.iter().map(|&c| c as u64).sum()
    }

    pub fn max_label(&self) -> u32 {
        self.left
            .iter()
            .chain(&self.right)
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn is_one_sided(&self) -> bool {
        self.left.is_empty() || self.right.is_empty()
    }

    /// The same weighing with the pans exchanged.
    pub fn swapped(&self) -> Self {
        Weighing {
            left: self.right.clone(),
            right: self.left.clone(),
            outcome: self.outcome.flip(),
        }
    }

    /// Pan of `coin`: `Some(true)` for left, `Some(false)` for right.
    pub fn side_of(&self, coin: u32) -> Option<bool> {
        if self.left.binary_search(&coin).is_ok() {
            Some(true)
        } else if self.right.binary_search(&coin).is_ok() {
            Some(false)
        } else {
            None
        }
    }
}

impl fmt::Display for Weighing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn pan(f: &mut fmt::Formatter<'_>, coins: &[u32]) -> fmt::Result {
            if coins.is_empty() {
                return write!(f, "0");
            }
            for (i, c) in coins.iter().enumerate() {
                if i > 0 {
                    write!(f, "+")?;
                }
                write!(f, "{c}")?;
            }
            Ok(())
        }
        pan(f, &self.left)?;
        write!(f, " {} ", self.outcome)?;
        pan(f, &self.right)
    }
}

/// An ordered list of weighings over the coins `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scheme {
    n: u32,
    weighings: Vec<Weighing>,
}

impl Scheme {
    pub fn new(n: u32, weighings: Vec<Weighing>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::NoCoins);
        }
        for w in &weighings {
            let label = w.max_label();
            if label > n {
                return Err(ModelError::LabelOutOfRange { label, n });
            }
        }
        Ok(Scheme { n, weighings })
    }

    pub fn empty(n: u32) -> Result<Self, ModelError> {
        Scheme::new(n, Vec::new())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn weighings(&self) -> &[Weighing] {
        &self.weighings
    }

    pub fn len(&self) -> usize {
        self.weighings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weighings.is_empty()
    }

    pub fn push(&mut self, w: Weighing) -> Result<(), ModelError> {
        let label = w.max_label();
        if label > self.n {
            return Err(ModelError::LabelOutOfRange { label, n: self.n });
        }
        self.weighings.push(w);
        Ok(())
    }

    /// The first `len` weighings.
    pub fn prefix(&self, len: usize) -> Scheme {
        Scheme {
            n: self.n,
            weighings: self.weighings[..len.min(self.weighings.len())].to_vec(),
        }
    }

    /// Every weighing with its pans exchanged and its relation flipped.
    pub fn swapped(&self) -> Scheme {
        Scheme {
            n: self.n,
            weighings: self.weighings.iter().map(Weighing::swapped).collect(),
        }
    }

    /// Number of weighings each coin takes part in, indexed by `label - 1`.
    pub fn appearance_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.n as usize];
        for w in &self.weighings {
            for &c in w.left.iter().chain(&w.right) {
                counts[c as usize - 1] += 1;
            }
        }
        counts
    }
}

/// A bijection from coin labels to true weights, both in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    weight_of: Vec<u32>,
}

impl Assignment {
    pub fn identity(n: u32) -> Self {
        Assignment {
            weight_of: (1..=n).collect(),
        }
    }

    /// `weights[i]` is the true weight of the coin labelled `i + 1`.
    pub fn from_weights(weights: Vec<u32>) -> Result<Self, ModelError> {
        let n = weights.len() as u32;
        let mut seen = vec![false; weights.len()];
        for &w in &weights {
            if w == 0 || w > n || std::mem::replace(&mut seen[w as usize - 1], true) {
                return Err(ModelError::NotABijection(n));
            }
        }
        Ok(Assignment { weight_of: weights })
    }

    /// Identity except that the coins labelled `a` and `b` trade weights.
    pub fn transposition(n: u32, a: u32, b: u32) -> Self {
        let mut weight_of: Vec<u32> = (1..=n).collect();
        weight_of.swap(a as usize - 1, b as usize - 1);
        Assignment { weight_of }
    }

    pub fn n(&self) -> u32 {
        self.weight_of.len() as u32
    }

    pub fn weight(&self, label: u32) -> u32 {
        self.weight_of[label as usize - 1]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weight_of
    }

    pub fn is_identity(&self) -> bool {
        self.weight_of
            .iter()
            .enumerate()
            .all(|(i, &w)| w as usize == i + 1)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.weight_of.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Compares the true weights of the two pans under `a`.
///
/// Panics if the weighing mentions a label outside the assignment.
pub fn evaluate_weighing(a: &Assignment, w: &Weighing) -> Relation {
    let left: u64 = w.left.iter().map(|&c| a.weight(c) as u64).sum();
    let right: u64 = w.right.iter().map(|&c| a.weight(c) as u64).sum();
    Relation::from_ordering(left.cmp(&right))
}

/// True iff every weighing of `s` would come out as recorded under `a`.
pub fn is_consistent(a: &Assignment, s: &Scheme) -> bool {
    s.weighings
        .iter()
        .all(|w| evaluate_weighing(a, w) == w.outcome)
}
