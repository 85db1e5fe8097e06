#![allow(dead_code)]

use std::cmp::Ordering;

use coin_weighing::{Relation, Scheme, Weighing};
use proptest::prelude::*;

/// Every permutation of `1..=n`, in lexicographic order.
pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    fn rec(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (1..=n).collect(), &mut Vec::new(), &mut out);
    out
}

fn relation_under(weights: &[u32], w: &Weighing) -> Relation {
    let side = |pan: &[u32]| {
        pan.iter()
            .map(|&c| weights[c as usize - 1] as u64)
            .sum::<u64>()
    };
    match side(w.left()).cmp(&side(w.right())) {
        Ordering::Less => Relation::Less,
        Ordering::Equal => Relation::Equal,
        Ordering::Greater => Relation::Greater,
    }
}

/// Assignments reproducing every outcome, by brute force over all `n!`.
pub fn naive_consistent(s: &Scheme) -> Vec<Vec<u32>> {
    permutations(s.n())
        .into_iter()
        .filter(|p| {
            s.weighings()
                .iter()
                .all(|w| relation_under(p, w) == w.outcome())
        })
        .collect()
}

/// `[1..=n]` placements: 0 out, 1 left, 2 right.
fn weighing_from(places: &[u8], outcome: Option<Relation>) -> Weighing {
    let mut places = places.to_vec();
    if places.iter().all(|&p| p == 0) {
        places[0] = 1;
    }
    let pick = |side: u8| {
        places
            .iter()
            .enumerate()
            .filter(move |(_, &p)| p == side)
            .map(|(i, _)| i as u32 + 1)
            .collect::<Vec<_>>()
    };
    match outcome {
        Some(r) => Weighing::new(pick(1), pick(2), r).unwrap(),
        None => Weighing::observed(pick(1), pick(2)).unwrap(),
    }
}

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![
        Just(Relation::Less),
        Just(Relation::Equal),
        Just(Relation::Greater)
    ]
}

/// Schemes on `n` in `ns` with `ks` weighings whose outcomes are observed
/// under the true weights.
pub fn observed_scheme(
    ns: std::ops::RangeInclusive<u32>,
    ks: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Scheme> {
    (ns, ks).prop_flat_map(|(n, k)| {
        prop::collection::vec(prop::collection::vec(0u8..3, n as usize), k).prop_map(move |rows| {
            Scheme::new(n, rows.iter().map(|r| weighing_from(r, None)).collect()).unwrap()
        })
    })
}

/// Like [`observed_scheme`], but outcomes are arbitrary and may be false.
pub fn arbitrary_scheme(
    ns: std::ops::RangeInclusive<u32>,
    ks: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Scheme> {
    (ns, ks).prop_flat_map(|(n, k)| {
        prop::collection::vec((prop::collection::vec(0u8..3, n as usize), relation()), k).prop_map(
            move |rows| {
                Scheme::new(
                    n,
                    rows.iter()
                        .map(|(r, rel)| weighing_from(r, Some(*rel)))
                        .collect(),
                )
                .unwrap()
            },
        )
    })
}

/// Balanced weighings on `1..=n` whose smallest placed coin is on the left.
pub fn balanced_weighings(n: u32) -> Vec<Weighing> {
    let mut out = Vec::new();
    let total = 3usize.pow(n);
    for code in 0..total {
        let mut places = vec![0u8; n as usize];
        let mut c = code;
        for p in places.iter_mut() {
            *p = (c % 3) as u8;
            c /= 3;
        }
        if places.iter().find(|&&p| p != 0) != Some(&1) {
            continue;
        }
        let sum = |side: u8| -> i64 {
            places
                .iter()
                .enumerate()
                .filter(|(_, &p)| p == side)
                .map(|(i, _)| i as i64 + 1)
                .sum()
        };
        if places.contains(&2) && sum(1) == sum(2) {
            out.push(weighing_from(&places, None));
        }
    }
    out
}

/// Whether some subset of `coins` sums to each of `1..=n`, by a boolean
/// subset-sum table.
pub fn subset_sums_cover(coins: &[u32], n: u32) -> bool {
    let mut reach = vec![false; n as usize + 1];
    reach[0] = true;
    for &c in coins {
        for v in (c as usize..=n as usize).rev() {
            if reach[v - c as usize] {
                reach[v] = true;
            }
        }
    }
    reach.iter().all(|&r| r)
}

/// Subset sums of `coins` cover `[0, sum]` iff, taken in ascending order,
/// every coin is at most one more than the sum of those before it.
pub fn covers_by_prefix(coins: &[u32], n: u32) -> bool {
    let mut sorted = coins.to_vec();
    sorted.sort_unstable();
    let mut reach: u64 = 0;
    for c in sorted {
        if c as u64 > reach + 1 {
            return false;
        }
        reach += c as u64;
    }
    reach >= n as u64
}
