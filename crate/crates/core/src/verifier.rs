//! Exhaustive check of which assignments a scheme leaves open.
//!
//! The search assigns true weights to coin labels one at a time. For every
//! weighing it keeps the signed partial difference of the pans and the
//! number of still unassigned coins on each side; the smallest and largest
//! remaining weights bound how far that difference can still move, and a
//! branch is cut as soon as some recorded outcome falls outside the bound.

use thiserror::Error;

use crate::model::{is_consistent, Assignment, Relation, Scheme};

/// Largest `n` the bitmask kernel handles.
pub const MAX_COINS: u32 = 64;

pub const DEFAULT_NODE_CAP: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("search exceeded the node budget of {0}")]
    BudgetExceeded(u64),
    #[error("exhaustive verification supports at most {MAX_COINS} coins, got {0}")]
    TooManyCoins(u32),
    #[error("coin {t} is outside 1..={n}")]
    TargetOutOfRange { t: u32, n: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Stop counting once this many consistent assignments are found.
    pub limit: u64,
    pub node_cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            limit: 2,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    /// Exact count of consistent assignments, saturated at the limit.
    pub consistent_count: u64,
    pub unique: bool,
    /// Whether the labels themselves reproduce every recorded outcome.
    pub identity_consistent: bool,
    /// Lexicographically smallest consistent assignment other than the identity.
    pub second_witness: Option<Assignment>,
    pub nodes_explored: u64,
}

impl VerifyReport {
    /// The labels are proven: the identity is the only consistent assignment.
    pub fn identifies_all(&self) -> bool {
        self.unique && self.identity_consistent
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinVerifyReport {
    pub target: u32,
    pub pinned: bool,
    /// Lexicographically smallest consistent assignment moving the target.
    pub counterexample: Option<Assignment>,
    pub nodes_explored: u64,
}

/// Preprocessed scheme: per label, the weighings it sits in and on which side.
struct Kernel {
    n: usize,
    relations: Vec<Relation>,
    touches: Vec<Vec<(usize, bool)>>,
    left_count: Vec<u32>,
    right_count: Vec<u32>,
}

impl Kernel {
    fn new(s: &Scheme) -> Result<Self, VerifyError> {
        if s.n() > MAX_COINS {
            return Err(VerifyError::TooManyCoins(s.n()));
        }
        let n = s.n() as usize;
        let mut touches = vec![Vec::new(); n];
        for (i, w) in s.weighings().iter().enumerate() {
            for &c in w.left() {
                touches[c as usize - 1].push((i, true));
            }
            for &c in w.right() {
                touches[c as usize - 1].push((i, false));
            }
        }
        Ok(Kernel {
            n,
            relations: s.weighings().iter().map(|w| w.outcome()).collect(),
            touches,
            left_count: s
                .weighings()
                .iter()
                .map(|w| w.left().len() as u32)
                .collect(),
            right_count: s
                .weighings()
                .iter()
                .map(|w| w.right().len() as u32)
                .collect(),
        })
    }

    /// Labels (0-based) with the most appearances first, ties by larger label.
    fn constrained_first_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| {
            self.touches[b]
                .len()
                .cmp(&self.touches[a].len())
                .then(b.cmp(&a))
        });
        order
    }
}

/// What to do after reaching a complete consistent assignment.
enum Leaf {
    Continue,
    Stop,
}

struct Search<'k, F> {
    kernel: &'k Kernel,
    order: Vec<usize>,
    /// Allowed weights (bit `w - 1`) per 0-based label.
    allowed: Vec<u64>,
    diff: Vec<i64>,
    open_left: Vec<u32>,
    open_right: Vec<u32>,
    weights: Vec<u32>,
    remaining: u64,
    nodes: u64,
    node_cap: u64,
    on_leaf: F,
    prefix: Vec<i64>,
}

impl<'k, F: FnMut(&[u32]) -> Leaf> Search<'k, F> {
    fn new(kernel: &'k Kernel, order: Vec<usize>, node_cap: u64, on_leaf: F) -> Self {
        let n = kernel.n;
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Search {
            kernel,
            order,
            allowed: vec![full; n],
            diff: vec![0; kernel.relations.len()],
            open_left: kernel.left_count.clone(),
            open_right: kernel.right_count.clone(),
            weights: vec![0; n],
            remaining: full,
            nodes: 0,
            node_cap,
            on_leaf,
            prefix: Vec::with_capacity(n + 1),
        }
    }

    fn run(&mut self) -> Result<(), VerifyError> {
        // Weighings with no coins to place must already be settled.
        for (i, &r) in self.kernel.relations.iter().enumerate() {
            if self.open_left[i] + self.open_right[i] == 0 && !r.holds_for(0) {
                return Ok(());
            }
        }
        self.descend(0).map(|_| ())
    }

    /// Returns `Ok(false)` when the leaf callback asked to stop.
    fn descend(&mut self, depth: usize) -> Result<bool, VerifyError> {
        if depth == self.order.len() {
            return Ok(match (self.on_leaf)(&self.weights) {
                Leaf::Continue => true,
                Leaf::Stop => false,
            });
        }
        let label = self.order[depth];
        let mut choices = self.remaining & self.allowed[label];
        while choices != 0 {
            let bit = choices.trailing_zeros();
            choices &= choices - 1;
            let weight = bit as i64 + 1;

            self.nodes += 1;
            if self.nodes > self.node_cap {
                return Err(VerifyError::BudgetExceeded(self.node_cap));
            }

            self.place(label, weight, 1);
            self.remaining &= !(1u64 << bit);
            self.weights[label] = weight as u32;

            let keep_going = if self.feasible() {
                self.descend(depth + 1)?
            } else {
                true
            };

            self.remaining |= 1u64 << bit;
            self.place(label, weight, -1);
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn place(&mut self, label: usize, weight: i64, sign: i64) {
        for &(i, on_left) in &self.kernel.touches[label] {
            if on_left {
                self.diff[i] += sign * weight;
                self.open_left[i] = (self.open_left[i] as i64 - sign) as u32;
            } else {
                self.diff[i] -= sign * weight;
                self.open_right[i] = (self.open_right[i] as i64 - sign) as u32;
            }
        }
    }

    fn feasible(&mut self) -> bool {
        self.prefix.clear();
        self.prefix.push(0);
        let mut bits = self.remaining;
        let mut acc = 0i64;
        while bits != 0 {
            acc += bits.trailing_zeros() as i64 + 1;
            bits &= bits - 1;
            self.prefix.push(acc);
        }
        let total = self.prefix.len() - 1;
        let smallest = |p: &[i64], u: u32| p[u as usize];
        let largest = |p: &[i64], u: u32| p[total] - p[total - u as usize];

        for (i, &rel) in self.kernel.relations.iter().enumerate() {
            let (ul, ur) = (self.open_left[i], self.open_right[i]);
            let d = self.diff[i];
            if ul + ur == 0 {
                if !rel.holds_for(d) {
                    return false;
                }
                continue;
            }
            let lo = d + smallest(&self.prefix, ul) - largest(&self.prefix, ur);
            let hi = d + largest(&self.prefix, ul) - smallest(&self.prefix, ur);
            let ok = match rel {
                Relation::Less => lo < 0,
                Relation::Equal => lo <= 0 && hi >= 0,
                Relation::Greater => hi > 0,
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Lexicographically smallest consistent weight vector that is not the
/// identity and, when `target` is given, moves that coin.
fn least_witness(
    kernel: &Kernel,
    target: Option<usize>,
    node_cap: u64,
) -> Result<(Option<Assignment>, u64), VerifyError> {
    let mut found = None;
    let mut search = Search::new(kernel, (0..kernel.n).collect(), node_cap, |w: &[u32]| {
        if w.iter().enumerate().all(|(i, &x)| x as usize == i + 1) {
            Leaf::Continue
        } else {
            found = Some(w.to_vec());
            Leaf::Stop
        }
    });
    if let Some(t) = target {
        search.allowed[t] &= !(1u64 << t);
    }
    search.run()?;
    let nodes = search.nodes;
    drop(search);
    let witness = found.map(|w| Assignment::from_weights(w).expect("search yields permutations"));
    Ok((witness, nodes))
}

/// Counts the assignments consistent with `s`, up to `limit`.
pub fn count_consistent(s: &Scheme, limit: u64) -> Result<VerifyReport, VerifyError> {
    count_consistent_with(
        s,
        &VerifyOptions {
            limit,
            ..VerifyOptions::default()
        },
    )
}

pub fn count_consistent_with(
    s: &Scheme,
    opts: &VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let limit = opts.limit.max(1);
    let kernel = Kernel::new(s)?;
    let mut count = 0u64;
    let mut search = Search::new(
        &kernel,
        kernel.constrained_first_order(),
        opts.node_cap,
        |_: &[u32]| {
            count += 1;
            if count >= limit {
                Leaf::Stop
            } else {
                Leaf::Continue
            }
        },
    );
    search.run()?;
    let mut nodes = search.nodes;
    drop(search);

    let identity_consistent = is_consistent(&Assignment::identity(s.n()), s);
    let second_witness = if count >= 2 || (count == 1 && !identity_consistent) {
        let (w, extra) = least_witness(&kernel, None, opts.node_cap)?;
        nodes += extra;
        w
    } else {
        None
    };

    Ok(VerifyReport {
        consistent_count: count,
        unique: count == 1,
        identity_consistent,
        second_witness,
        nodes_explored: nodes,
    })
}

/// True iff the identity is the only assignment consistent with `s`.
pub fn identifies_all(s: &Scheme) -> Result<bool, VerifyError> {
    Ok(count_consistent(s, 2)?.identifies_all())
}

/// Checks whether every consistent assignment gives coin `t` weight `t`.
pub fn identifies_coin(s: &Scheme, t: u32) -> Result<CoinVerifyReport, VerifyError> {
    identifies_coin_with(s, t, DEFAULT_NODE_CAP)
}

pub fn identifies_coin_with(
    s: &Scheme,
    t: u32,
    node_cap: u64,
) -> Result<CoinVerifyReport, VerifyError> {
    if t == 0 || t > s.n() {
        return Err(VerifyError::TargetOutOfRange { t, n: s.n() });
    }
    let kernel = Kernel::new(s)?;
    let target = t as usize - 1;

    let mut order = kernel.constrained_first_order();
    order.retain(|&l| l != target);
    order.insert(0, target);

    let mut moved = false;
    let mut search = Search::new(&kernel, order, node_cap, |_: &[u32]| {
        moved = true;
        Leaf::Stop
    });
    search.allowed[target] &= !(1u64 << target);
    search.run()?;
    let mut nodes = search.nodes;
    drop(search);

    let counterexample = if moved {
        let (w, extra) = least_witness(&kernel, Some(target), node_cap)?;
        nodes += extra;
        w
    } else {
        None
    };
    Ok(CoinVerifyReport {
        target: t,
        pinned: !moved,
        counterexample,
        nodes_explored: nodes,
    })
}
