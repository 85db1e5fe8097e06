//! Exact feasibility of small systems `A x >= b` by Fourier-Motzkin
//! elimination over big rationals, with back-substitution for a witness.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs }
    }

    /// Scales so the first nonzero coefficient is +1 or -1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c = &*c / &lead;
            }
            self.rhs = &self.rhs / &lead;
        }
        self
    }

    fn value_at(&self, x: &[BigRational], upto: usize) -> BigRational {
        self.coeffs[..upto]
            .iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (a, v)| acc + a * v)
    }
}

/// Keeps the tightest constraint for each coefficient vector.
fn dedup(constraints: Vec<Constraint>) -> Vec<Constraint> {
    let mut best: HashMap<Vec<BigRational>, BigRational> = HashMap::new();
    let mut order = Vec::new();
    for c in constraints.into_iter().map(Constraint::normalized) {
        match best.get_mut(&c.coeffs) {
            Some(rhs) => {
                if c.rhs > *rhs {
                    *rhs = c.rhs;
                }
            }
            None => {
                order.push(c.coeffs.clone());
                best.insert(c.coeffs, c.rhs);
            }
        }
    }
    order
        .into_iter()
        .map(|coeffs| {
            let rhs = best.remove(&coeffs).expect("present");
            Constraint { coeffs, rhs }
        })
        .collect()
}

/// A point satisfying every constraint, or `None` if the system is infeasible.
pub fn solve(vars: usize, constraints: Vec<Constraint>) -> Option<Vec<BigRational>> {
    // stages[v] holds the system over variables 0..=v.
    let mut stages: Vec<Vec<Constraint>> = vec![Vec::new(); vars];
    let mut current = dedup(constraints);
    for v in (0..vars).rev() {
        stages[v] = current.clone();
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in current {
            if c.coeffs[v].is_positive() {
                lower.push(c);
            } else if c.coeffs[v].is_negative() {
                upper.push(c);
            } else {
                rest.push(c);
            }
        }
        for lo in &lower {
            for up in &upper {
                let (p, q) = (lo.coeffs[v].clone(), -up.coeffs[v].clone());
                let coeffs = lo
                    .coeffs
                    .iter()
                    .zip(&up.coeffs)
                    .map(|(a, b)| a / &p + b / &q)
                    .collect();
                rest.push(Constraint::new(coeffs, &lo.rhs / &p + &up.rhs / &q));
            }
        }
        current = dedup(rest);
    }
    if current.iter().any(|c| c.rhs.is_positive()) {
        return None;
    }

    let mut x: Vec<BigRational> = Vec::with_capacity(vars);
    for (v, stage) in stages.iter().enumerate() {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for c in stage {
            let a = &c.coeffs[v];
            if a.is_zero() {
                continue;
            }
            let bound = (&c.rhs - c.value_at(&x, v)) / a;
            if a.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        let value = match (lo, hi) {
            (Some(l), Some(h)) => {
                let up = l.ceil();
                if up <= h {
                    up
                } else {
                    l
                }
            }
            (Some(l), None) => l.ceil(),
            (None, Some(h)) => h.floor(),
            (None, None) => BigRational::zero(),
        };
        x.push(value);
    }
    Some(x)
}

/// Multiplies a positive rational vector by the lcm of its denominators and
/// divides by the gcd of the numerators.
pub fn to_primitive_integers(x: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| (v * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &gcd).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn c(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&v| r(v)).collect(), r(rhs))
    }

    fn satisfies(x: &[BigRational], cs: &[Constraint]) -> bool {
        cs.iter().all(|k| k.value_at(x, x.len()) >= k.rhs)
    }

    #[test]
    fn feasible_box() {
        let cs = vec![
            c(&[1, 0], 1),
            c(&[0, 1], 1),
            c(&[-1, -1], -5),
            c(&[1, -1], 1),
        ];
        let x = solve(2, cs.clone()).unwrap();
        assert!(satisfies(&x, &cs));
    }

    #[test]
    fn infeasible_pair() {
        assert!(solve(1, vec![c(&[1], 3), c(&[-1], -2)]).is_none());
        assert!(solve(2, vec![c(&[0, 0], 1)]).is_none());
    }

    #[test]
    fn fractional_point() {
        // 2x >= 1, -2x >= -1 forces x = 1/2
        let x = solve(1, vec![c(&[2], 1), c(&[-2], -1)]).unwrap();
        assert_eq!(x, vec![BigRational::new(1.into(), 2.into())]);
        assert_eq!(
            to_primitive_integers(&[r(6), BigRational::new(3.into(), 2.into())]),
            vec![BigInt::from(4), BigInt::from(1)]
        );
    }
}
