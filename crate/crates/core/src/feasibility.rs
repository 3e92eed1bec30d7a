//! Exact rational feasibility of small linear systems by Fourier–Motzkin
//! elimination, with back-substitution to recover a witness point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `coeffs · x >= rhs`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Inequality {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

impl Inequality {
    pub fn new(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn from_ints(coeffs: &[BigInt], rhs: i64) -> Self {
        Self {
            coeffs: coeffs.iter().cloned().map(BigRational::from_integer).collect(),
            rhs: BigRational::from_integer(rhs.into()),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            rhs: -&self.rhs,
        }
    }

    pub fn holds_at(&self, x: &[BigRational]) -> bool {
        dot(&self.coeffs, x) >= self.rhs
    }

    /// Scales to integer coefficients with content 1. Positive scaling keeps
    /// the solution set.
    fn normalized(self) -> Self {
        let denom_lcm = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.rhs))
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.rhs))
            .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let mut scaled: Vec<BigRational> = ints
            .into_iter()
            .map(|v| BigRational::from_integer(v / &g))
            .collect();
        let rhs = scaled.pop().expect("rhs present");
        Self { coeffs: scaled, rhs }
    }
}

fn dot(a: &[BigRational], x: &[BigRational]) -> BigRational {
    a.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Returns a point satisfying every constraint, or `None` if the system is
/// infeasible over the rationals. Every constraint must have `dim` coefficients.
pub fn find_feasible_point(dim: usize, constraints: &[Inequality]) -> Option<Vec<BigRational>> {
    assert!(
        constraints.iter().all(|c| c.coeffs.len() == dim),
        "constraint dimension mismatch"
    );
    // stages[k] involves only variables k..dim
    let mut stages: Vec<Vec<Inequality>> = Vec::with_capacity(dim + 1);
    let mut current: Vec<Inequality> = dedup(constraints.iter().cloned());
    for k in 0..dim {
        let next = eliminate(&current, k);
        stages.push(current);
        current = next;
    }
    // Only constant constraints remain: 0 >= rhs.
    if current.iter().any(|c| c.rhs.is_positive()) {
        return None;
    }

    let mut x = vec![BigRational::zero(); dim];
    for k in (0..dim).rev() {
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for c in &stages[k] {
            let a = &c.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let rest: BigRational = (k + 1..dim).map(|j| &c.coeffs[j] * &x[j]).sum();
            let bound = (&c.rhs - rest) / a;
            if a.is_positive() {
                if lower.as_ref().is_none_or(|l| bound > *l) {
                    lower = Some(bound);
                }
            } else if upper.as_ref().is_none_or(|u| bound < *u) {
                upper = Some(bound);
            }
        }
        x[k] = match (lower, upper) {
            (Some(l), Some(u)) => {
                debug_assert!(l <= u, "elimination guarantees consistent bounds");
                l
            }
            (Some(l), None) => l,
            (None, Some(u)) => u,
            (None, None) => BigRational::zero(),
        };
    }
    debug_assert!(constraints.iter().all(|c| c.holds_at(&x)));
    Some(x)
}

fn dedup(it: impl Iterator<Item = Inequality>) -> Vec<Inequality> {
    let set: BTreeSet<Inequality> = it
        .map(Inequality::normalized)
        .filter(|c| !(c.coeffs.iter().all(Zero::is_zero) && !c.rhs.is_positive()))
        .collect();
    set.into_iter().collect()
}

fn eliminate(system: &[Inequality], k: usize) -> Vec<Inequality> {
    let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
    for c in system {
        let a = &c.coeffs[k];
        if a.is_positive() {
            pos.push(c);
        } else if a.is_negative() {
            neg.push(c);
        } else {
            keep.push(c.clone());
        }
    }
    for p in &pos {
        for q in &neg {
            let wp = -&q.coeffs[k];
            let wq = p.coeffs[k].clone();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&q.coeffs)
                .map(|(a, b)| a * &wp + b * &wq)
                .collect();
            let rhs = &p.rhs * &wp + &q.rhs * &wq;
            keep.push(Inequality::new(coeffs, rhs));
        }
    }
    dedup(keep.into_iter())
}

/// Clears denominators and divides out the content, preserving the direction.
pub fn primitive_integer_vector(x: &[BigRational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

/// Integer functional `w` with `w·u = 0` on `common`, `w·u > 0` on `positive`
/// and `w·u < 0` on `negative`, if one exists.
pub fn separating_functional(
    dim: usize,
    positive: &[&[BigInt]],
    negative: &[&[BigInt]],
    common: &[&[BigInt]],
) -> Option<Vec<BigInt>> {
    let mut constraints = Vec::new();
    for u in positive {
        constraints.push(Inequality::from_ints(u, 1));
    }
    for u in negative {
        let minus: Vec<BigInt> = u.iter().map(|x| -x).collect();
        constraints.push(Inequality::from_ints(&minus, 1));
    }
    for u in common {
        let c = Inequality::from_ints(u, 0);
        constraints.push(c.negated());
        constraints.push(c);
    }
    let x = find_feasible_point(dim, &constraints)?;
    Some(primitive_integer_vector(&x))
}

pub fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
