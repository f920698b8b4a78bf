//! Exact density calculus for windows of consecutive primes, and planners
//! that choose a window (and a twist order) whose predicted density lies
//! within `eps` of a target.
//!
//! For a window `P` the product of Steinberg characters over `P` is nonzero
//! on the proportion `w(P) = prod (p - 1)/p` of the Galois group and zero
//! on `1 - w(P)`. Twisting one factor of an equal pair by a character of
//! order `d` gives matching density `w + (1 - w)/d`.

mod planner;
mod presets;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime_u64, nth_prime, prime_index, product_tree};
use crate::groupcore::GroupError;
use crate::rational::Rational;

pub use planner::{approximate_matching_density, approximate_zero_density, ApproxPlan, Convention, PlanMode, PlanSource};
pub use presets::{preset, preset_names, tetrahedral_direct_product_density, tetrahedral_matching_density, Preset};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("empty prime window")]
    EmptyWindow,
    #[error("window primes must be consecutive primes greater than 7: {0}")]
    InvalidWindow(String),
    #[error("twist order must be positive")]
    ZeroTwistOrder,
    #[error("density {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("epsilon must be positive (or zero for exactly representable targets)")]
    InvalidEpsilon,
    #[error("target {target} is not exactly representable by a preset or a window with primes up to {bound}")]
    TooSmallEpsilon { target: String, bound: u64 },
    #[error(
        "target needs primes beyond the work bound {bound}; the smallest density reachable from p_k = {start} is about {reachable:.4}"
    )]
    WorkBoundExceeded { start: u64, bound: u64, reachable: f64 },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Consecutive primes `p_k, ..., p_{k+m}`; `k` is the 1-based index of the
/// first prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeWindow {
    pub k: usize,
    pub m: usize,
    pub primes: Vec<u64>,
}

impl PrimeWindow {
    /// `m + 1` consecutive primes from the `k`-th.
    pub fn from_index(k: usize, m: usize) -> Result<Self, DensityError> {
        if k == 0 {
            return Err(DensityError::InvalidWindow("prime indices start at 1".into()));
        }
        let primes: Vec<u64> = (k..=k + m).map(nth_prime).collect();
        Self::from_primes(primes)
    }

    /// Checks that `primes` are consecutive primes, all greater than 7.
    pub fn from_primes(primes: Vec<u64>) -> Result<Self, DensityError> {
        let window = Self::from_primes_unchecked_bound(primes)?;
        if window.primes[0] <= 7 {
            return Err(DensityError::InvalidWindow(format!(
                "{} is not greater than 7",
                window.primes[0]
            )));
        }
        Ok(window)
    }

    /// Consecutive primes without the `> 7` requirement; used for small
    /// oracle windows such as `{5, 7}`.
    pub fn from_primes_unchecked_bound(primes: Vec<u64>) -> Result<Self, DensityError> {
        let first = *primes.first().ok_or(DensityError::EmptyWindow)?;
        if let Some(&p) = primes.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(DensityError::InvalidWindow(format!("{p} is not prime")));
        }
        let k = prime_index(first).expect("prime");
        for (i, pair) in primes.windows(2).enumerate() {
            if crate::arith::next_prime(pair[0]) != pair[1] {
                return Err(DensityError::InvalidWindow(format!(
                    "{} and {} at positions {i}, {} are not consecutive primes",
                    pair[0],
                    pair[1],
                    i + 1
                )));
            }
        }
        Ok(PrimeWindow {
            k,
            m: primes.len() - 1,
            primes,
        })
    }

    pub fn first(&self) -> u64 {
        self.primes[0]
    }

    pub fn last(&self) -> u64 {
        *self.primes.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// `prod (p - 1)/p` over distinct primes, built in lowest terms: a window
/// prime `q` cancels exactly when it divides some `p - 1` of the window.
pub(crate) fn nonzero_product(primes: &[u64]) -> Rational {
    if primes.is_empty() {
        return Rational::one();
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    let last = *sorted.last().expect("nonempty");
    let mut member = vec![false; last as usize + 1];
    for &p in &sorted {
        member[p as usize] = true;
    }
    let mut numer: Vec<u64> = sorted.iter().map(|p| p - 1).collect();
    let mut denom = Vec::with_capacity(sorted.len());
    for &q in &sorted {
        // least window prime p = 1 (mod q)
        let found = (1..)
            .map(|k| 1 + k * q)
            .take_while(|&p| p <= last)
            .find(|&p| member[p as usize]);
        match found {
            Some(p) => {
                let i = sorted.binary_search(&p).expect("member");
                numer[i] /= q;
            }
            None => denom.push(q),
        }
    }
    let n = BigInt::from(product_tree(&numer));
    let d = BigInt::from(product_tree(&denom));
    Rational::new_raw(n, d)
}

/// `w(P) = prod_{p in P} (p - 1)/p`, exactly.
pub fn w_density(window: &PrimeWindow) -> Result<Rational, DensityError> {
    if window.is_empty() {
        return Err(DensityError::EmptyWindow);
    }
    Ok(nonzero_product(&window.primes))
}

/// `1 - w(P)`: the proportion on which the product character vanishes.
pub fn zero_density(window: &PrimeWindow) -> Result<Rational, DensityError> {
    Ok(Rational::one() - w_density(window)?)
}

/// `w + (1 - w)/d`.
pub fn twist_density(w: &Rational, d: u64) -> Result<Rational, DensityError> {
    if d == 0 {
        return Err(DensityError::ZeroTwistOrder);
    }
    if w < &Rational::zero() || w > &Rational::one() {
        return Err(DensityError::OutOfRange(w.to_string()));
    }
    Ok(planner::twist_big(w, d))
}
