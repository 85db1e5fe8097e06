//! At most seven weighings that prove the weight of one chosen coin.
//!
//! The building block is an up-chain: balancing `[1..l]` plus an already
//! bounded coin against a single coin shows that coin weighs at least the
//! claimed amount, because `l` distinct coins weigh at least `T(l)`. Three
//! triangular numbers reach any target, so three weighings bound the target
//! coin from below. A second chain continues up to coin `n`, which cannot be
//! heavier than `n`, so every bound along the way must be tight.

use super::{decompose_triangular, generate_binary, triangular, GenerateError, TriangularTriple};
use crate::model::{Scheme, Weighing};
use crate::verifier::identifies_coin;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParticularStrategy {
    /// Few coins: the shortest prefix of the binary scheme that pins the coin.
    BinaryPrefix,
    /// Chain up to `t`, then from `t` up to `n`.
    ThroughTarget,
    /// Chain up to `t`, chain up to `n - t`, then `(n - t) + t = n`.
    ThroughComplement,
}

/// Weighings proving coin `base + T(c) + T(b) + T(a)` is at least that heavy,
/// starting from an optional coin `base` already known to be at least `base`.
///
/// Returns `None` if some weighing would be illegal.
fn up_chain(
    n: u32,
    base: Option<u32>,
    parts: &TriangularTriple,
) -> Option<(Vec<Weighing>, Option<u32>)> {
    let mut current = base;
    let mut weighings = Vec::new();
    for part in [parts.c, parts.b, parts.a] {
        if part == 0 {
            continue;
        }
        let target = current.unwrap_or(0) as u64 + triangular(part);
        if target > n as u64 {
            return None;
        }
        if current.is_none() && part == 1 {
            // `[1] = 1` says nothing; coin 1 is trivially at least 1.
            current = Some(1);
            continue;
        }
        let left = (1..=part as u32).chain(current);
        weighings.push(Weighing::observed(left, [target as u32]).ok()?);
        current = Some(target as u32);
    }
    Some((weighings, current))
}

/// Chains that bound coin `t` from below.
fn target_chains(n: u32, t: u32) -> Vec<Vec<Weighing>> {
    let mut chains: Vec<Vec<Weighing>> = decompose_triangular(t as u64)
        .iter()
        .filter_map(|parts| up_chain(n, None, parts))
        .filter(|(_, end)| *end == Some(t))
        .map(|(w, _)| w)
        .collect();
    if chains.is_empty() && t == 2 {
        // 2 = T(1) + T(1) would put coin 1 on a pan twice.
        chains.push(vec![Weighing::observed([1], [2]).expect("legal")]);
    }
    chains
}

fn through_target(n: u32, t: u32, chains: &[Vec<Weighing>]) -> Option<Vec<Weighing>> {
    let rest = decompose_triangular((n - t) as u64);
    for chain in chains {
        for parts in &rest {
            if let Some((tail, end)) = up_chain(n, Some(t), parts) {
                if end == Some(n) {
                    return Some(chain.iter().cloned().chain(tail).collect());
                }
            }
        }
    }
    None
}

fn through_complement(n: u32, t: u32, chains: &[Vec<Weighing>]) -> Option<Vec<Weighing>> {
    let complement = n - t;
    if complement == t || complement == 0 {
        return None;
    }
    let last = Weighing::observed([complement, t], [n]).ok()?;
    let rest = decompose_triangular(complement as u64);
    for chain in chains {
        for parts in &rest {
            if let Some((tail, end)) = up_chain(n, None, parts) {
                if end == Some(complement) {
                    let mut all: Vec<Weighing> = chain.iter().cloned().chain(tail).collect();
                    all.push(last.clone());
                    return Some(all);
                }
            }
        }
    }
    None
}

type Builder = fn(u32, u32, &[Vec<Weighing>]) -> Option<Vec<Weighing>>;

/// A scheme of at most seven weighings pinning coin `t` among `1..=n`.
pub fn generate_particular_coin(n: u32, t: u32) -> Result<Scheme, GenerateError> {
    Ok(generate_particular_coin_detailed(n, t)?.0)
}

pub fn generate_particular_coin_detailed(
    n: u32,
    t: u32,
) -> Result<(Scheme, ParticularStrategy), GenerateError> {
    if t == 0 || t > n {
        return Err(GenerateError::InvalidArgument(format!(
            "coin {t} is outside 1..={n}"
        )));
    }
    if n <= 8 {
        let full = generate_binary(n)?;
        for len in 0..=full.len() {
            let prefix = full.prefix(len);
            if identifies_coin(&prefix, t)?.pinned {
                return Ok((prefix, ParticularStrategy::BinaryPrefix));
            }
        }
        return Err(GenerateError::ConstructionFailure {
            n,
            reason: format!("binary scheme does not pin coin {t}"),
        });
    }

    let chains = target_chains(n, t);
    let direct_first = (t as u64) * (t as u64) >= 2 * n as u64;
    let attempts: [(ParticularStrategy, Builder); 2] = if direct_first {
        [
            (ParticularStrategy::ThroughTarget, through_target),
            (ParticularStrategy::ThroughComplement, through_complement),
        ]
    } else {
        [
            (ParticularStrategy::ThroughComplement, through_complement),
            (ParticularStrategy::ThroughTarget, through_target),
        ]
    };
    for (strategy, build) in attempts {
        if let Some(weighings) = build(n, t, &chains) {
            return Ok((Scheme::new(n, weighings)?, strategy));
        }
    }
    Err(GenerateError::NoLegalDecomposition { n, t })
}
