//! Schemes that prove the helper coins first and then repeatedly split the
//! remaining coins into known weight ranges.
//!
//! After the helper chain, every other coin belongs to a group: a run of
//! consecutive non-helper weights that the audience already knows the coin
//! is in. A round puts a downward-closed part of every group on the left
//! pan and an upward-closed part on the right pan; helpers make up the
//! difference on whichever pan is lighter. Balance is only possible if each
//! group's left part holds its lightest coins and its right part its
//! heaviest, so every group splits into up to three smaller groups.
//! Singleton groups are done.
//!
//! Groups are always contiguous in the sorted list of non-helper coins, so
//! a round is described by index ranges and the pans are only materialized
//! when a [`Scheme`] is requested.

use std::ops::Range;

use super::{generate_helper, GenerateError, HelperSet};
use crate::bounds::ceil_alpha_times;
use crate::model::{Relation, Scheme, Weighing};

/// Non-helper coins, ascending, with prefix sums.
struct Pool {
    coins: Vec<u32>,
    prefix: Vec<u64>,
}

impl Pool {
    fn new(n: u32, helpers: &HelperSet) -> Self {
        let size = n as usize - helpers.coins.len();
        let mut coins = Vec::with_capacity(size);
        let mut prefix = Vec::with_capacity(size + 1);
        prefix.push(0u64);
        let mut total = 0u64;
        let mut start = 1;
        for &h in helpers.coins.iter().chain([&(n + 1)]) {
            for c in start..h {
                coins.push(c);
                total += c as u64;
                prefix.push(total);
            }
            start = h + 1;
        }
        Pool { coins, prefix }
    }

    fn sum(&self, r: &Range<usize>) -> u64 {
        self.prefix[r.end] - self.prefix[r.start]
    }

    /// Smallest `k` such that the top `k` coins of `r` weigh at least `need`.
    fn top_reaching(&self, r: &Range<usize>, need: u64) -> Option<usize> {
        if self.sum(r) < need {
            return None;
        }
        let (mut lo, mut hi) = (0, r.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.prefix[r.end] - self.prefix[r.end - mid] >= need {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }

    fn coins<'a>(&'a self, ranges: &'a [Range<usize>]) -> impl Iterator<Item = u32> + 'a {
        ranges
            .iter()
            .flat_map(move |r| self.coins[r.clone()].iter().copied())
    }
}

/// One equality weighing of a splitting round.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RoundWeighing {
    left: Vec<Range<usize>>,
    right: Vec<Range<usize>>,
    /// Helper coins on the left pan.
    helpers: Vec<u32>,
    /// Helper coins on the right pan.
    right_helpers: Vec<u32>,
}

/// Division of one group: `left` lightest and `right` heaviest coins.
#[derive(Debug, Clone, Copy)]
struct Division {
    group: usize,
    left: usize,
    right: usize,
}

fn failure(n: u32, reason: impl Into<String>) -> GenerateError {
    GenerateError::ConstructionFailure {
        n,
        reason: reason.into(),
    }
}

/// Splits every group per its division; singletons are dropped.
fn refine(groups: &[Range<usize>], divisions: &[Division]) -> Vec<Range<usize>> {
    let mut next = Vec::with_capacity(groups.len() * 3);
    for d in divisions {
        let g = &groups[d.group];
        let a = g.start + d.left;
        let b = g.end - d.right;
        for part in [g.start..a, a..b, b..g.end] {
            if part.len() > 1 {
                next.push(part);
            }
        }
    }
    next
}

/// Rounds of weighings ready to be materialized.
pub struct BinaryPlan {
    n: u32,
    helper_scheme: Option<Scheme>,
    helpers: Option<HelperSet>,
    pool: Option<Pool>,
    rounds: Vec<RoundWeighing>,
}

impl BinaryPlan {
    /// Plans the helper-coin scheme followed by simultaneous halving.
    ///
    /// Each round puts the small half of every group on the left and fills
    /// the right pan with the heaviest unused coins of all groups until it
    /// is at least as heavy; the difference is less than `n` and is made up
    /// with helpers on the left.
    pub fn build(n: u32) -> Result<Self, GenerateError> {
        if n == 0 {
            return Err(GenerateError::InvalidArgument(
                "n must be at least 1".into(),
            ));
        }
        if n == 1 {
            return Ok(BinaryPlan {
                n,
                helper_scheme: None,
                helpers: None,
                pool: None,
                rounds: Vec::new(),
            });
        }
        let (helper_scheme, helpers) = generate_helper(n)?;
        let pool = Pool::new(n, &helpers);

        let mut groups: Vec<Range<usize>> = Vec::new();
        if pool.coins.len() > 1 {
            groups.push(0..pool.coins.len());
        }
        let mut rounds = Vec::new();
        while !groups.is_empty() {
            let mut divisions: Vec<Division> = groups
                .iter()
                .enumerate()
                .map(|(i, g)| Division {
                    group: i,
                    left: g.len() / 2,
                    right: 0,
                })
                .collect();
            let left: Vec<Range<usize>> = groups
                .iter()
                .map(|g| g.start..g.start + g.len() / 2)
                .collect();
            let left_sum: u64 = left.iter().map(|r| pool.sum(r)).sum();

            let mut right = Vec::new();
            let mut right_sum = 0u64;
            for (i, g) in groups.iter().enumerate().rev() {
                let upper = g.start + g.len() / 2..g.end;
                let need = left_sum - right_sum;
                let take = match pool.top_reaching(&upper, need) {
                    Some(k) => k,
                    None => upper.len(),
                };
                let part = upper.end - take..upper.end;
                right_sum += pool.sum(&part);
                right.push(part);
                divisions[i].right = take;
                if right_sum >= left_sum {
                    break;
                }
            }
            if right_sum < left_sum {
                return Err(failure(n, "upper halves cannot outweigh the small halves"));
            }
            right.reverse();
            let deficit = right_sum - left_sum;
            let helper_coins = helpers
                .subset_for(deficit)
                .ok_or_else(|| failure(n, format!("helpers cannot make up {deficit}")))?;
            rounds.push(RoundWeighing {
                left,
                right,
                helpers: helper_coins,
                right_helpers: Vec::new(),
            });
            groups = refine(&groups, &divisions);
        }
        Ok(BinaryPlan {
            n,
            helper_scheme: Some(helper_scheme),
            helpers: Some(helpers),
            pool: Some(pool),
            rounds,
        })
    }

    pub fn len(&self) -> usize {
        self.helpers.as_ref().map_or(0, |h| h.weighings_used) + self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn helper_set(&self) -> Option<&HelperSet> {
        self.helpers.as_ref()
    }

    pub fn to_scheme(&self) -> Result<Scheme, GenerateError> {
        let mut scheme = match &self.helper_scheme {
            Some(s) => s.clone(),
            None => Scheme::empty(self.n)?,
        };
        if let Some(pool) = &self.pool {
            for r in &self.rounds {
                scheme.push(materialize(self.n, pool, r)?)?;
            }
        }
        Ok(scheme)
    }
}

fn materialize(n: u32, pool: &Pool, r: &RoundWeighing) -> Result<Weighing, GenerateError> {
    let left = pool.coins(&r.left).chain(r.helpers.iter().copied());
    let right = pool.coins(&r.right).chain(r.right_helpers.iter().copied());
    let w = Weighing::new(left, right, Relation::Equal)?;
    if w.left_total() != w.right_total() {
        return Err(failure(n, format!("weighing `{w}` does not balance")));
    }
    Ok(w)
}

/// Helper coins, then rounds of halving: at most `2 ceil(log2 n)` weighings.
pub fn generate_binary(n: u32) -> Result<Scheme, GenerateError> {
    BinaryPlan::build(n)?.to_scheme()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RefinedStats {
    pub helper_weighings: usize,
    pub rounds: usize,
    /// Weighings beyond one per round, needed when a round's combined
    /// imbalance exceeded what the helpers can settle.
    pub extra_weighings: usize,
}

/// Three-way division of one group.
///
/// The left part starts at `ceil(alpha * width)` coins (capped below the
/// group size) and the right part is the smallest upward-closed set that is
/// at least as heavy; if the group runs out, the heaviest left coin is
/// dropped and the search repeats. Every other left size is also tried and
/// kept when it gives a strictly smaller largest part.
fn divide_group(pool: &Pool, g: &Range<usize>, group: usize) -> Division {
    let m = g.len();
    let width = (pool.coins[g.end - 1] - pool.coins[g.start] + 1) as u64;

    let right_for = |left: usize| -> Option<usize> {
        let need = pool.sum(&(g.start..g.start + left));
        pool.top_reaching(&(g.start + left..g.end), need)
    };
    let largest = |left: usize, right: usize| left.max(right).max(m - left - right);

    let mut left = (ceil_alpha_times(width) as usize).clamp(1, m - 1);
    let mut right = loop {
        match right_for(left) {
            Some(r) => break r,
            None => left -= 1,
        }
    };
    for l in 1..m {
        if let Some(r) = right_for(l) {
            if largest(l, r) < largest(left, right) {
                left = l;
                right = r;
            }
        }
    }
    Division { group, left, right }
}

/// Helper coins, then rounds of three-way splits.
pub fn generate_refined(n: u32) -> Result<Scheme, GenerateError> {
    Ok(generate_refined_with_stats(n)?.0)
}

pub fn generate_refined_with_stats(n: u32) -> Result<(Scheme, RefinedStats), GenerateError> {
    if n == 0 {
        return Err(GenerateError::InvalidArgument(
            "n must be at least 1".into(),
        ));
    }
    if n == 1 {
        return Ok((Scheme::empty(1)?, RefinedStats::default()));
    }
    let (mut scheme, helpers) = generate_helper(n)?;
    let pool = Pool::new(n, &helpers);
    let capacity = helpers.total();
    let mut stats = RefinedStats {
        helper_weighings: helpers.weighings_used,
        ..RefinedStats::default()
    };

    let mut groups: Vec<Range<usize>> = Vec::new();
    if pool.coins.len() > 1 {
        groups.push(0..pool.coins.len());
    }
    while !groups.is_empty() {
        let mut divisions: Vec<Division> = groups
            .iter()
            .enumerate()
            .map(|(i, g)| divide_group(&pool, g, i))
            .collect();

        // Each group may take its smallest reaching right part or one coin
        // less; pick whichever keeps the running imbalance nearest zero.
        let mut balance = 0i64;
        for d in divisions.iter_mut() {
            let g = &groups[d.group];
            let light = pool.sum(&(g.start..g.start + d.left)) as i64;
            let gap = |right: usize| pool.sum(&(g.end - right..g.end)) as i64 - light;
            if balance > 0 && d.right > 0 {
                let shorter = gap(d.right - 1);
                if (balance + shorter).abs() < (balance + gap(d.right)).abs() {
                    d.right -= 1;
                }
            }
            balance += gap(d.right);
        }

        // Batch groups so each weighing's imbalance fits the helpers.
        let mut batches: Vec<(Vec<Division>, i64)> = vec![(Vec::new(), 0)];
        for d in &divisions {
            let g = &groups[d.group];
            let gap = pool.sum(&(g.end - d.right..g.end)) as i64
                - pool.sum(&(g.start..g.start + d.left)) as i64;
            let (batch, total) = batches.last_mut().unwrap();
            if !batch.is_empty() && (*total + gap).unsigned_abs() > capacity {
                batches.push((vec![*d], gap));
            } else {
                batch.push(*d);
                *total += gap;
            }
        }
        stats.rounds += 1;
        stats.extra_weighings += batches.len() - 1;

        for (batch, imbalance) in &batches {
            let helper_coins = helpers
                .subset_for(imbalance.unsigned_abs())
                .ok_or_else(|| failure(n, format!("helpers cannot make up {imbalance}")))?;
            let (on_left, on_right) = if *imbalance >= 0 {
                (helper_coins, Vec::new())
            } else {
                (Vec::new(), helper_coins)
            };
            let round = RoundWeighing {
                left: batch
                    .iter()
                    .map(|d| groups[d.group].start..groups[d.group].start + d.left)
                    .collect(),
                right: batch
                    .iter()
                    .map(|d| groups[d.group].end - d.right..groups[d.group].end)
                    .collect(),
                helpers: on_left,
                right_helpers: on_right,
            };
            scheme.push(materialize(n, &pool, &round)?)?;
        }
        groups = refine(&groups, &divisions);
    }
    Ok((scheme, stats))
}
