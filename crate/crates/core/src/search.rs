//! Exact values of the fewest weighings for small `n`, by exhaustive search.
//!
//! A weighing design is a placement of every coin on the left pan, the right
//! pan, or neither. Designs are canonical under pan swap (the lowest placed
//! coin sits on the left) and a scheme is a strictly increasing tuple of
//! design indices, since order and repetition never help. Outcomes always
//! come from the true weights.
//!
//! Levels `k` are scanned upward from `ceil(log3 n)`. Inside a level the
//! first design is the unit of parallel work; every unit finds its own least
//! witness and the least unit with a witness wins, so the result does not
//! depend on the number of threads.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::ceil_log;
use crate::model::{Scheme, Weighing};
use crate::verifier::{count_consistent, VerifyError};

/// Placement of one coin in a weighing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pan {
    Out,
    Left,
    Right,
}

/// One canonical weighing design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignAtom {
    /// Indexed by `label - 1`.
    pub placement: Vec<Pan>,
    weighing: Weighing,
}

impl DesignAtom {
    pub fn weighing(&self) -> &Weighing {
        &self.weighing
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget exhausted; only proven that a({n}) > {proven_greater_than}")]
    BudgetExhausted { n: u32, proven_greater_than: usize },
    #[error("n must be at least 1")]
    NoCoins,
    #[error("exhaustive search supports at most {0} coins")]
    TooManyCoins(u32),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Largest `n` for which the design list is materialized (3^n placements).
pub const MAX_SEARCH_COINS: u32 = 13;

/// All canonical designs for `n` coins, in lexicographic order of their
/// placement vectors (coin 1 most significant, `Out < Left < Right`).
#[derive(Debug, Clone)]
pub struct DesignSpace {
    n: u32,
    atoms: Vec<DesignAtom>,
}

impl DesignSpace {
    pub fn new(n: u32, allow_one_sided: bool) -> Result<Self, SearchError> {
        if n == 0 {
            return Err(SearchError::NoCoins);
        }
        if n > MAX_SEARCH_COINS {
            return Err(SearchError::TooManyCoins(MAX_SEARCH_COINS));
        }
        let total = 3usize.pow(n);
        let mut atoms = Vec::new();
        let mut digits = vec![Pan::Out; n as usize];
        for code in 0..total {
            let mut rest = code;
            for d in digits.iter_mut().rev() {
                *d = [Pan::Out, Pan::Left, Pan::Right][rest % 3];
                rest /= 3;
            }
            match digits.iter().find(|&&p| p != Pan::Out) {
                Some(Pan::Left) => {}
                _ => continue,
            }
            let coins = |pan: Pan| {
                digits
                    .iter()
                    .enumerate()
                    .filter(move |(_, &p)| p == pan)
                    .map(|(i, _)| i as u32 + 1)
            };
            if !allow_one_sided && coins(Pan::Right).next().is_none() {
                continue;
            }
            let weighing =
                Weighing::observed(coins(Pan::Left), coins(Pan::Right)).expect("disjoint pans");
            atoms.push(DesignAtom {
                placement: digits.clone(),
                weighing,
            });
        }
        Ok(DesignSpace { n, atoms })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn atoms(&self) -> &[DesignAtom] {
        &self.atoms
    }

    pub fn scheme_of(&self, indices: &[usize]) -> Scheme {
        let weighings = indices
            .iter()
            .map(|&i| self.atoms[i].weighing.clone())
            .collect();
        Scheme::new(self.n, weighings).expect("labels within range")
    }

    /// Every scheme of `k` distinct designs, in lexicographic index order.
    pub fn designs(&self, k: usize) -> impl Iterator<Item = Scheme> + '_ {
        Combinations::new(self.atoms.len(), k).map(move |idx| self.scheme_of(&idx))
    }
}

/// Streams all k-designs for `n` coins.
pub fn enumerate_designs(
    n: u32,
    k: usize,
    allow_one_sided: bool,
) -> Result<Vec<Scheme>, SearchError> {
    let space = DesignSpace::new(n, allow_one_sided)?;
    Ok(space.designs(k).collect())
}

struct Combinations {
    items: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(items: usize, k: usize) -> Self {
        Combinations {
            items,
            current: (0..k).collect(),
            done: k > items,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.items - (k - i) {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchBudget {
    /// Give up after this many weighings have been ruled out.
    pub max_k: Option<usize>,
    /// Give up after examining this many complete designs.
    pub max_designs: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Worker threads; 0 means rayon's default.
    pub jobs: usize,
    pub allow_one_sided: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub n: u32,
    pub a_of_n: usize,
    pub witness: Scheme,
    pub designs_examined: u64,
}

/// Summary of one fully scanned or successful level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub k: usize,
    pub designs_examined: u64,
    pub found: bool,
    pub elapsed: Duration,
}

struct LevelSearch<'a> {
    space: &'a DesignSpace,
    k: usize,
    best_unit: &'a AtomicUsize,
    examined: &'a AtomicU64,
    stop: &'a AtomicBool,
    max_designs: Option<u64>,
    deadline: Option<Instant>,
}

impl LevelSearch<'_> {
    fn out_of_budget(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        let over = self
            .max_designs
            .is_some_and(|cap| self.examined.load(Ordering::Relaxed) > cap)
            || self.deadline.is_some_and(|d| Instant::now() > d);
        if over {
            self.stop.store(true, Ordering::Relaxed);
        }
        over
    }

    /// Least witness whose first design is `unit`.
    fn unit(&self, unit: usize) -> Result<Option<Vec<usize>>, VerifyError> {
        let n = self.space.n as usize;
        let mut codes = vec![0u64; n];
        let mut chosen = vec![unit];
        push_codes(&mut codes, &self.space.atoms[unit]);
        if !classes_fit(&codes, self.k - 1) {
            return Ok(None);
        }
        self.extend(unit, &mut chosen, &mut codes)
    }

    fn extend(
        &self,
        unit: usize,
        chosen: &mut Vec<usize>,
        codes: &mut [u64],
    ) -> Result<Option<Vec<usize>>, VerifyError> {
        if chosen.len() == self.k {
            self.examined.fetch_add(1, Ordering::Relaxed);
            if is_witness(self.space, chosen, codes)? {
                return Ok(Some(chosen.clone()));
            }
            return Ok(None);
        }
        let start = *chosen.last().unwrap() + 1;
        let remaining = self.k - chosen.len() - 1;
        let end = self.space.atoms.len() - remaining;
        let saved = codes.to_vec();
        for next in start..end {
            if next % 256 == 0
                && (self.best_unit.load(Ordering::Relaxed) < unit || self.out_of_budget())
            {
                return Ok(None);
            }
            push_codes(codes, &self.space.atoms[next]);
            if classes_fit(codes, remaining) {
                chosen.push(next);
                let found = self.extend(unit, chosen, codes)?;
                chosen.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
            codes.copy_from_slice(&saved);
        }
        Ok(None)
    }
}

fn push_codes(codes: &mut [u64], atom: &DesignAtom) {
    for (code, pan) in codes.iter_mut().zip(&atom.placement) {
        *code = *code * 3 + *pan as u64;
    }
}

/// Coins sharing a placement history must be separable by the remaining
/// weighings: no class may exceed `3^remaining`.
fn classes_fit(codes: &[u64], remaining: usize) -> bool {
    let cap = 3usize.saturating_pow(remaining as u32);
    if cap >= codes.len() {
        return true;
    }
    let mut sorted = codes.to_vec();
    sorted.sort_unstable();
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            if run > cap {
                return false;
            }
        } else {
            run = 1;
        }
    }
    true
}

fn is_witness(space: &DesignSpace, chosen: &[usize], codes: &[u64]) -> Result<bool, VerifyError> {
    let n = space.n as usize;
    // Exchanging two coins that no weighing tells apart is invisible.
    for a in 0..n {
        'pairs: for b in a + 1..n {
            if codes[a] == codes[b] {
                return Ok(false);
            }
            let gap = (b - a) as i64;
            for &i in chosen {
                let w = &space.atoms[i];
                let pa = w.placement[a];
                let pb = w.placement[b];
                // Moving weight `gap` from coin b's pan to coin a's pan.
                let shift = sign(pa) * gap - sign(pb) * gap;
                let diff = w.weighing.left_total() as i64 - w.weighing.right_total() as i64;
                if !w.weighing.outcome().holds_for(diff + shift) {
                    continue 'pairs;
                }
            }
            return Ok(false);
        }
    }
    let scheme = space.scheme_of(chosen);
    Ok(count_consistent(&scheme, 2)?.identifies_all())
}

fn sign(p: Pan) -> i64 {
    match p {
        Pan::Out => 0,
        Pan::Left => 1,
        Pan::Right => -1,
    }
}

/// The least number of weighings proving all `n` coins, with a witness.
pub fn compute_omni(n: u32, budget: &SearchBudget) -> Result<SearchOutcome, SearchError> {
    compute_omni_with_progress(n, budget, |_| {})
}

pub fn compute_omni_with_progress(
    n: u32,
    budget: &SearchBudget,
    mut on_level: impl FnMut(&LevelReport),
) -> Result<SearchOutcome, SearchError> {
    if n == 0 {
        return Err(SearchError::NoCoins);
    }
    let start = ceil_log(3, n as u64) as usize;
    if start == 0 {
        on_level(&LevelReport {
            k: 0,
            designs_examined: 1,
            found: true,
            elapsed: Duration::ZERO,
        });
        return Ok(SearchOutcome {
            n,
            a_of_n: 0,
            witness: Scheme::empty(n).expect("n >= 1"),
            designs_examined: 1,
        });
    }
    let space = DesignSpace::new(n, budget.allow_one_sided)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(budget.jobs)
        .build()
        .expect("thread pool");
    let deadline = budget.time_limit.map(|t| Instant::now() + t);
    let mut total = 0u64;

    for k in start.. {
        if budget.max_k.is_some_and(|m| k > m) || k > space.atoms.len() {
            return Err(SearchError::BudgetExhausted {
                n,
                proven_greater_than: k - 1,
            });
        }
        let began = Instant::now();
        let best_unit = AtomicUsize::new(usize::MAX);
        let examined = AtomicU64::new(0);
        let stop = AtomicBool::new(false);
        let level = LevelSearch {
            space: &space,
            k,
            best_unit: &best_unit,
            examined: &examined,
            stop: &stop,
            max_designs: budget.max_designs.map(|m| m.saturating_sub(total)),
            deadline,
        };
        let units = space.atoms.len() - (k - 1);
        let results: Vec<Result<Option<Vec<usize>>, VerifyError>> = pool.install(|| {
            (0..units)
                .into_par_iter()
                .map(|u| {
                    if best_unit.load(Ordering::Relaxed) < u || level.out_of_budget() {
                        return Ok(None);
                    }
                    let found = level.unit(u)?;
                    if found.is_some() {
                        best_unit.fetch_min(u, Ordering::Relaxed);
                    }
                    Ok(found)
                })
                .collect()
        });
        let mut witness = None;
        for r in results {
            if let Some(w) = r? {
                witness = Some(w);
                break;
            }
        }
        let count = examined.load(Ordering::Relaxed);
        total += count;
        // A budget stop before any witness means the level was not exhausted.
        if witness.is_none() && stop.load(Ordering::Relaxed) {
            return Err(SearchError::BudgetExhausted {
                n,
                proven_greater_than: k - 1,
            });
        }
        on_level(&LevelReport {
            k,
            designs_examined: count,
            found: witness.is_some(),
            elapsed: began.elapsed(),
        });
        if let Some(indices) = witness {
            return Ok(SearchOutcome {
                n,
                a_of_n: k,
                witness: space.scheme_of(&indices),
                designs_examined: total,
            });
        }
    }
    unreachable!("levels are unbounded")
}
