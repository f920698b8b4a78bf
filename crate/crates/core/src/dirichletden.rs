//! Dirichlet characters with exact exponent values, exact matching
//! densities between them, and natural / Dirichlet density estimators over
//! prime data.
//!
//! Characters mod `N` are indexed through fixed generators of `(Z/N)*`:
//! for each odd prime power `p^k || N` the least primitive root mod `p^k`;
//! for `2^k` with `k >= 2` the element `-1`, and for `k >= 3` also `5`.
//! Each generator is lifted to `N` by the Chinese remainder theorem (and is
//! `1` modulo the other prime powers). With generator orders `n_1, ..., n_r`
//! in that order, the character of index `sum c_i (n_1 ... n_{i-1})` sends
//! the `i`-th generator to `exp(2 pi i c_i / n_i)`. Index 0 is the principal
//! character.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{euler_phi, gcd, inv_mod, lcm, pow_mod, prime_factors, primes_up_to};
use crate::limits::limits;
use crate::rational::{self, Rational};

/// Moduli up to this bound are checked exhaustively for multiplicativity.
pub const EXHAUSTIVE_CHECK_MAX: u64 = 10_000;

/// Largest modulus for which value tables are built.
pub const MAX_MODULUS: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DirichletError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("modulus {n} exceeds {bound}")]
    ModulusTooLarge { n: u64, bound: u64 },
    #[error("character index {index} out of range: there are {count} characters mod {modulus}")]
    IndexOutOfRange { index: u64, count: u64, modulus: u64 },
    #[error("value table is not a character mod {0}")]
    InvalidCharacter(u64),
    #[error("{m} is not a multiple of the modulus {n}")]
    NotAMultiple { m: u64, n: u64 },
    #[error("no primes up to {0}")]
    EmptyRange(u64),
    #[error("{found} primes in range, at least {needed} needed")]
    TooFewPrimes { found: usize, needed: usize },
    #[error("x_max = {x} exceeds the configured bound {bound}")]
    RangeTooLarge { x: u64, bound: u64 },
    #[error("s = {0} must lie in (1, 2]")]
    InvalidS(f64),
    #[error("s values must be strictly decreasing")]
    NotDecreasing,
    #[error("weights are required")]
    MissingWeights,
    #[error("weight {weight} at q = {q} exceeds the bound (2n)^2 = {bound}")]
    WeightExceedsBound { q: u64, weight: f64, bound: f64 },
    #[error("dimension must be positive")]
    ZeroDimension,
}

/// `(Z/N)*` with the generators fixed in the module documentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    modulus: u64,
    generators: Vec<u64>,
    orders: Vec<u64>,
}

impl UnitGroup {
    pub fn new(modulus: u64) -> Result<Self, DirichletError> {
        if modulus == 0 {
            return Err(DirichletError::ZeroModulus);
        }
        if modulus > MAX_MODULUS {
            return Err(DirichletError::ModulusTooLarge {
                n: modulus,
                bound: MAX_MODULUS,
            });
        }
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for p in prime_factors(modulus) {
            let mut pk = 1;
            while modulus.is_multiple_of(pk * p) {
                pk *= p;
            }
            let local: Vec<(u64, u64)> = if p == 2 {
                match pk {
                    2 => vec![],
                    4 => vec![(3, 2)],
                    _ => vec![(pk - 1, 2), (5, pk / 4)],
                }
            } else {
                vec![(primitive_root_prime_power(p, pk), pk / p * (p - 1))]
            };
            let rest = modulus / pk;
            for (g, order) in local {
                generators.push(crt_pair(g, pk, 1, rest));
                orders.push(order);
            }
        }
        Ok(UnitGroup {
            modulus,
            generators,
            orders,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    /// `phi(N)`, also the number of characters.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent of the group, `lcm` of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| lcm(acc, n))
    }

    /// Generator exponents `c_i` of the character with this index.
    pub fn decode_index(&self, index: u64) -> Result<Vec<u64>, DirichletError> {
        let count = self.order();
        if index >= count {
            return Err(DirichletError::IndexOutOfRange {
                index,
                count,
                modulus: self.modulus,
            });
        }
        let mut rest = index;
        Ok(self
            .orders
            .iter()
            .map(|&n| {
                let c = rest % n;
                rest /= n;
                c
            })
            .collect())
    }

    pub fn character(&self, index: u64) -> Result<DirichletChar, DirichletError> {
        let exps = self.decode_index(index)?;
        let e = self.exponent();
        let order = self
            .orders
            .iter()
            .zip(&exps)
            .fold(1, |acc, (&n, &c)| lcm(acc, n / gcd(c, n)));
        // exponent of zeta_order contributed by one step along generator i
        let steps: Vec<u64> = self
            .orders
            .iter()
            .zip(&exps)
            .map(|(&n, &c)| c * (e / n) / (e / order))
            .collect();
        let n = self.modulus;
        let mut values = vec![None; n as usize];
        let mut frontier = vec![(1 % n, 0u64)];
        for ((&g, &ord), &step) in self.generators.iter().zip(&self.orders).zip(&steps) {
            let mut next = Vec::with_capacity(frontier.len() * ord as usize);
            for &(a, v) in &frontier {
                let (mut x, mut w) = (a, v);
                for _ in 0..ord {
                    next.push((x, w));
                    x = x * g % n;
                    w = (w + step) % order;
                }
            }
            frontier = next;
        }
        for (a, v) in frontier {
            values[a as usize] = Some(v);
        }
        Ok(DirichletChar {
            modulus: n,
            order,
            values,
            index: Some(index),
        })
    }

    pub fn characters(&self) -> impl Iterator<Item = DirichletChar> + '_ {
        (0..self.order()).map(|i| self.character(i).expect("in range"))
    }
}

/// Least primitive root modulo `p^k` for an odd prime `p`.
fn primitive_root_prime_power(p: u64, pk: u64) -> u64 {
    let phi = pk / p * (p - 1);
    let mut fs = prime_factors(p - 1);
    if pk > p {
        fs.push(p);
    }
    (2..pk)
        .find(|&x| x % p != 0 && fs.iter().all(|&f| pow_mod(x, phi / f, pk) != 1))
        .expect("(Z/p^k)* is cyclic")
}

/// `x = a (mod m)`, `x = b (mod n)` for coprime `m`, `n`.
fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    if n == 1 {
        return a % m;
    }
    let mn = m as u128 * n as u128;
    let inv = inv_mod(m % n, n).expect("coprime") as u128;
    let t = ((b as u128 + n as u128 - a as u128 % n as u128) % n as u128) * inv % n as u128;
    ((a as u128 + m as u128 * t) % mn) as u64
}

/// A Dirichlet character mod `N` of order `e`: `values[a]` is the exponent
/// `k` with `chi(a) = exp(2 pi i k / e)`, or `None` when `gcd(a, N) > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletChar {
    pub modulus: u64,
    pub order: u64,
    pub values: Vec<Option<u64>>,
    /// Index in the generator convention, when built from one.
    pub index: Option<u64>,
}

impl DirichletChar {
    /// Builds a character from an explicit exponent table and checks it.
    pub fn from_values(modulus: u64, order: u64, values: Vec<Option<u64>>) -> Result<Self, DirichletError> {
        let chi = DirichletChar {
            modulus,
            order,
            values,
            index: None,
        };
        if !chi.is_valid() {
            return Err(DirichletError::InvalidCharacter(modulus));
        }
        Ok(chi)
    }

    pub fn exponent_at(&self, a: u64) -> Option<u64> {
        self.values[(a % self.modulus) as usize]
    }

    /// Value table shape, unit support and multiplicativity. Pairs are
    /// checked exhaustively up to [`EXHAUSTIVE_CHECK_MAX`]; beyond that
    /// against a fixed set of multipliers.
    pub fn is_valid(&self) -> bool {
        let n = self.modulus;
        if n == 0 || self.order == 0 || self.values.len() != n as usize {
            return false;
        }
        let support_ok = (0..n).all(|a| self.values[a as usize].is_some() == (gcd(a, n) == 1));
        if !support_ok || self.values[(1 % n) as usize] != Some(0) {
            return false;
        }
        if self.values.iter().flatten().any(|&v| v >= self.order) {
            return false;
        }
        let units: Vec<u64> = (0..n).filter(|&a| gcd(a, n) == 1).collect();
        let multipliers: Vec<u64> = if n <= EXHAUSTIVE_CHECK_MAX {
            units.clone()
        } else {
            units.iter().copied().take(64).collect()
        };
        multipliers.par_iter().all(|&a| {
            let va = self.values[a as usize].expect("unit");
            units.iter().all(|&b| {
                let vb = self.values[b as usize].expect("unit");
                self.values[(a as u128 * b as u128 % n as u128) as usize] == Some((va + vb) % self.order)
            })
        })
    }

    /// The same character on `(Z/M)*` for a multiple `M` of the modulus.
    pub fn induce(&self, m: u64) -> Result<DirichletChar, DirichletError> {
        if m == 0 || !m.is_multiple_of(self.modulus) {
            return Err(DirichletError::NotAMultiple { m, n: self.modulus });
        }
        let values = (0..m)
            .map(|a| if gcd(a, m) == 1 { self.exponent_at(a) } else { None })
            .collect();
        Ok(DirichletChar {
            modulus: m,
            order: self.order,
            values,
            index: None,
        })
    }

    /// `|chi(a) - psi(a)|^2`, with `chi(a) = 0` off the units.
    pub fn distance_squared(&self, other: &DirichletChar, a: u64) -> f64 {
        let z = |chi: &DirichletChar| {
            chi.exponent_at(a).map_or((0.0, 0.0), |k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / chi.order as f64;
                (t.cos(), t.sin())
            })
        };
        let (x, y) = (z(self), z(other));
        (x.0 - y.0).powi(2) + (x.1 - y.1).powi(2)
    }

    /// Whether `chi(a) = psi(a)` as complex numbers (both zero counts).
    pub fn agrees_at(&self, other: &DirichletChar, a: u64) -> bool {
        match (self.exponent_at(a), other.exponent_at(a)) {
            (None, None) => true,
            (Some(u), Some(v)) => {
                let l = lcm(self.order, other.order);
                u * (l / self.order) == v * (l / other.order)
            }
            _ => false,
        }
    }
}

/// `|{a in (Z/M)* : chi(a) = psi(a)}| / phi(M)` with `M = lcm` of the
/// moduli.
pub fn exact_matching_density_dirichlet(x: &DirichletChar, y: &DirichletChar) -> Result<Rational, DirichletError> {
    for chi in [x, y] {
        if !chi.is_valid() {
            return Err(DirichletError::InvalidCharacter(chi.modulus));
        }
    }
    let m = lcm(x.modulus, y.modulus);
    if m > MAX_MODULUS {
        return Err(DirichletError::ModulusTooLarge { n: m, bound: MAX_MODULUS });
    }
    let (xi, yi) = (x.induce(m)?, y.induce(m)?);
    let hits = (0..m).filter(|&a| gcd(a, m) == 1 && xi.agrees_at(&yi, a)).count() as u64;
    Ok(Rational::new(BigInt::from(hits), BigInt::from(euler_phi(m))))
}

/// Membership of each prime `q <= x_max` in a set `S`, with optional
/// nonnegative weights.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeIndicatorSeries {
    pub x_max: u64,
    pub primes: Vec<u64>,
    pub marked: Vec<bool>,
    pub weights: Option<Vec<f64>>,
}

fn primes_in_range(x_max: u64) -> Result<Vec<u64>, DirichletError> {
    let bound = limits().dirichlet_max_x;
    if x_max > bound {
        return Err(DirichletError::RangeTooLarge { x: x_max, bound });
    }
    Ok(primes_up_to(x_max).to_vec())
}

impl PrimeIndicatorSeries {
    pub fn from_predicate(x_max: u64, member: impl Fn(u64) -> bool + Sync) -> Result<Self, DirichletError> {
        let primes = primes_in_range(x_max)?;
        let marked = primes.par_iter().map(|&q| member(q)).collect();
        Ok(PrimeIndicatorSeries {
            x_max,
            primes,
            marked,
            weights: None,
        })
    }

    /// `S = {q : chi(q) = psi(q)}`.
    pub fn matching(x: &DirichletChar, y: &DirichletChar, x_max: u64) -> Result<Self, DirichletError> {
        Self::from_predicate(x_max, |q| x.agrees_at(y, q))
    }

    /// Weights `|chi(q) - psi(q)|^2`, marked where the weight is positive.
    pub fn character_distance(x: &DirichletChar, y: &DirichletChar, x_max: u64) -> Result<Self, DirichletError> {
        let primes = primes_in_range(x_max)?;
        let marked: Vec<bool> = primes.iter().map(|&q| !x.agrees_at(y, q)).collect();
        let weights = primes
            .iter()
            .zip(&marked)
            .map(|(&q, &m)| if m { x.distance_squared(y, q) } else { 0.0 })
            .collect();
        Ok(PrimeIndicatorSeries {
            x_max,
            primes,
            marked,
            weights: Some(weights),
        })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn marked_count(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }
}

/// Fewest primes accepted by the natural density estimator.
pub const MIN_PRIMES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaturalDensity {
    pub estimate: f64,
    /// Binomial standard error `sqrt(f (1 - f) / total)`.
    pub std_error: f64,
    pub marked: usize,
    pub total: usize,
}

/// `#{marked q <= x_max} / #{q <= x_max}`.
pub fn natural_density_estimate(s: &PrimeIndicatorSeries) -> Result<NaturalDensity, DirichletError> {
    if s.is_empty() {
        return Err(DirichletError::EmptyRange(s.x_max));
    }
    if s.len() < MIN_PRIMES {
        return Err(DirichletError::TooFewPrimes {
            found: s.len(),
            needed: MIN_PRIMES,
        });
    }
    let marked = s.marked_count();
    let total = s.len();
    let f = marked as f64 / total as f64;
    Ok(NaturalDensity {
        estimate: f,
        std_error: (f * (1.0 - f) / total as f64).sqrt(),
        marked,
        total,
    })
}

/// Default `s` schedule for the Dirichlet density estimator.
pub const DEFAULT_S_VALUES: [f64; 5] = [1.5, 1.2, 1.1, 1.05, 1.02];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletPoint {
    pub s: f64,
    pub estimate: f64,
}

fn check_s_values(s_values: &[f64]) -> Result<(), DirichletError> {
    for &s in s_values {
        if !(s > 1.0 && s <= 2.0) {
            return Err(DirichletError::InvalidS(s));
        }
    }
    if s_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(DirichletError::NotDecreasing);
    }
    Ok(())
}

/// `sum_{marked q} q^-s / sum_q q^-s` for each `s`, truncated at `x_max`.
/// Only a heuristic for the limit `s -> 1+`.
pub fn dirichlet_density_estimate(
    series: &PrimeIndicatorSeries,
    s_values: &[f64],
) -> Result<Vec<DirichletPoint>, DirichletError> {
    check_s_values(s_values)?;
    if series.is_empty() {
        return Err(DirichletError::EmptyRange(series.x_max));
    }
    Ok(s_values
        .par_iter()
        .map(|&s| {
            let (mut marked, mut total) = (0.0f64, 0.0f64);
            for (&q, &m) in series.primes.iter().zip(&series.marked) {
                let t = (q as f64).powf(-s);
                total += t;
                if m {
                    marked += t;
                }
            }
            DirichletPoint {
                s,
                estimate: marked / total,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RsDiagnostic {
    pub s: f64,
    pub n: u64,
    /// `(2n)^2`.
    pub bound: f64,
    /// `sum_q w_q q^-s`.
    pub weighted_sum: f64,
    /// `sum_{w_q > 0} q^-s`.
    pub marked_sum: f64,
    pub total_sum: f64,
    /// `weighted_sum / ((2n)^2 total_sum)`: the lower density of the marked
    /// set implied by the weights.
    pub implied_lower_density: f64,
    /// `marked_sum / total_sum`.
    pub marked_ratio: f64,
    /// `weighted_sum <= (2n)^2 marked_sum`.
    pub holds: bool,
}

/// Truncated form of `sum w_q q^-s <= (2n)^2 sum_{w_q > 0} q^-s`, with
/// every weight checked against `(2n)^2`.
pub fn rs_diagnostic(series: &PrimeIndicatorSeries, n: u64, s: f64) -> Result<RsDiagnostic, DirichletError> {
    if n == 0 {
        return Err(DirichletError::ZeroDimension);
    }
    if !(s > 1.0 && s < 2.0) {
        return Err(DirichletError::InvalidS(s));
    }
    let weights = series.weights.as_ref().ok_or(DirichletError::MissingWeights)?;
    if series.is_empty() {
        return Err(DirichletError::EmptyRange(series.x_max));
    }
    let bound = (2 * n * 2 * n) as f64;
    let slack = bound * 1e-12;
    let (mut weighted_sum, mut marked_sum, mut total_sum) = (0.0f64, 0.0f64, 0.0f64);
    for (&q, &w) in series.primes.iter().zip(weights) {
        if !(0.0..=bound + slack).contains(&w) {
            return Err(DirichletError::WeightExceedsBound { q, weight: w, bound });
        }
        let t = (q as f64).powf(-s);
        total_sum += t;
        weighted_sum += w * t;
        if w > 0.0 {
            marked_sum += t;
        }
    }
    Ok(RsDiagnostic {
        s,
        n,
        bound,
        weighted_sum,
        marked_sum,
        total_sum,
        implied_lower_density: weighted_sum / (bound * total_sum),
        marked_ratio: marked_sum / total_sum,
        holds: weighted_sum <= bound * marked_sum * (1.0 + 1e-12),
    })
}

/// Everything the `dirichlet` command reports for one pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletComparison {
    pub modulus: u64,
    pub chi: u64,
    pub chi2: u64,
    pub orders: [u64; 2],
    #[serde(with = "rational::serde_rational")]
    pub exact: Rational,
    pub natural: NaturalDensity,
    pub dirichlet: Vec<DirichletPoint>,
}

pub fn compare_characters(
    modulus: u64,
    chi: u64,
    chi2: u64,
    x_max: u64,
    s_values: &[f64],
) -> Result<DirichletComparison, DirichletError> {
    check_s_values(s_values)?;
    let g = UnitGroup::new(modulus)?;
    let (x, y) = (g.character(chi)?, g.character(chi2)?);
    let exact = exact_matching_density_dirichlet(&x, &y)?;
    let series = PrimeIndicatorSeries::matching(&x, &y, x_max)?;
    Ok(DirichletComparison {
        modulus,
        chi,
        chi2,
        orders: [x.order, y.order],
        exact,
        natural: natural_density_estimate(&series)?,
        dirichlet: dirichlet_density_estimate(&series, s_values)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_traits::One;

    /// Order-4 character mod 5 sending the generator 2 to i.
    fn quartic_mod5() -> DirichletChar {
        let g = UnitGroup::new(5).unwrap();
        let chi = g.character(1).unwrap();
        assert_eq!(g.generators(), &[2]);
        assert_eq!(chi.order, 4);
        chi
    }

    #[test]
    fn unit_group_structure() {
        for n in 1..=200u64 {
            let g = UnitGroup::new(n).unwrap();
            assert_eq!(g.order(), euler_phi(n), "n={n}");
            let distinct: std::collections::BTreeSet<Vec<Option<u64>>> = g
                .characters()
                .map(|c| {
                    // normalise to the group exponent for comparison
                    let e = g.exponent();
                    c.values.iter().map(|v| v.map(|k| k * (e / c.order))).collect()
                })
                .collect();
            assert_eq!(distinct.len() as u64, euler_phi(n), "n={n}");
        }
        assert_eq!(UnitGroup::new(16).unwrap().generator_orders(), &[2, 4]);
        assert_eq!(UnitGroup::new(0), Err(DirichletError::ZeroModulus));
    }

    #[test]
    fn characters_are_multiplicative() {
        for n in [1, 2, 4, 8, 9, 12, 24, 25, 49, 60, 97, 120, 1000] {
            for chi in UnitGroup::new(n).unwrap().characters() {
                assert!(chi.is_valid(), "n={n} index={:?}", chi.index);
            }
        }
        let bad = DirichletChar::from_values(5, 4, vec![None, Some(0), Some(1), Some(1), Some(2)]);
        assert_eq!(bad, Err(DirichletError::InvalidCharacter(5)));
    }

    #[test]
    fn exact_examples() {
        let x = quartic_mod5();
        let trivial = UnitGroup::new(5).unwrap().character(0).unwrap();
        assert_eq!(exact_matching_density_dirichlet(&x, &x).unwrap(), Rational::one());
        assert_eq!(exact_matching_density_dirichlet(&x, &trivial).unwrap(), rat(1, 4));
        let x3 = UnitGroup::new(5).unwrap().character(3).unwrap();
        assert_eq!(exact_matching_density_dirichlet(&x, &x3).unwrap(), rat(1, 2));
        // induced to a common modulus
        let y = UnitGroup::new(3).unwrap().character(1).unwrap();
        assert_eq!(exact_matching_density_dirichlet(&y, &trivial).unwrap(), rat(1, 2));
    }

    #[test]
    fn densities_are_reciprocals_with_phi_denominators() {
        for n in [7u64, 8, 12, 15, 16, 21] {
            let g = UnitGroup::new(n).unwrap();
            let chars: Vec<_> = g.characters().collect();
            for x in &chars {
                for y in &chars {
                    let d = exact_matching_density_dirichlet(x, y).unwrap();
                    assert!((BigInt::from(euler_phi(n)) % d.denom()) == BigInt::from(0));
                    // kernel of x / y has index order(x / y)
                    assert!(d.numer() == &BigInt::from(1));
                }
            }
        }
    }

    #[test]
    fn natural_density_examples() {
        let all = PrimeIndicatorSeries::from_predicate(10_000, |_| true).unwrap();
        assert_eq!(natural_density_estimate(&all).unwrap().estimate, 1.0);
        let none = PrimeIndicatorSeries::from_predicate(10_000, |_| false).unwrap();
        assert_eq!(natural_density_estimate(&none).unwrap().estimate, 0.0);
        let one_mod_4 = PrimeIndicatorSeries::from_predicate(1_000_000, |q| q % 4 == 1).unwrap();
        let est = natural_density_estimate(&one_mod_4).unwrap();
        assert!((est.estimate - 0.5).abs() <= 3.0 * est.std_error);
        let tiny = PrimeIndicatorSeries::from_predicate(100, |_| true).unwrap();
        assert!(matches!(natural_density_estimate(&tiny), Err(DirichletError::TooFewPrimes { .. })));
    }

    #[test]
    fn dirichlet_estimates() {
        let all = PrimeIndicatorSeries::from_predicate(10_000, |_| true).unwrap();
        for p in dirichlet_density_estimate(&all, &DEFAULT_S_VALUES).unwrap() {
            assert!((p.estimate - 1.0).abs() < 1e-12);
        }
        let one_mod_4 = PrimeIndicatorSeries::from_predicate(1_000_000, |q| q % 4 == 1).unwrap();
        let pts = dirichlet_density_estimate(&one_mod_4, &[1.5, 1.2, 1.1, 1.05]).unwrap();
        let gaps: Vec<f64> = pts.iter().map(|p| (p.estimate - 0.5).abs()).collect();
        // approaches 1/2 slowly: small primes keep most of the weight
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
        assert_eq!(dirichlet_density_estimate(&all, &[1.0]), Err(DirichletError::InvalidS(1.0)));
        assert_eq!(dirichlet_density_estimate(&all, &[1.1, 1.2]), Err(DirichletError::NotDecreasing));
    }

    #[test]
    fn rs_examples() {
        let x = quartic_mod5();
        let same = PrimeIndicatorSeries::character_distance(&x, &x, 10_000).unwrap();
        let r = rs_diagnostic(&same, 1, 1.1).unwrap();
        assert_eq!(r.weighted_sum, 0.0);
        assert!(r.holds);

        let x3 = UnitGroup::new(5).unwrap().character(3).unwrap();
        let series = PrimeIndicatorSeries::character_distance(&x, &x3, 100_000).unwrap();
        let r = rs_diagnostic(&series, 1, 1.1).unwrap();
        assert!(r.holds);
        assert!(r.implied_lower_density <= r.marked_ratio);
        // small primes dominate at s = 1.1; the set {q = 2, 3 mod 5} has
        // density 1/2
        assert!(r.implied_lower_density >= 0.5, "{r:?}");

        let mut bad = series.clone();
        bad.weights.as_mut().unwrap()[3] = 4.5;
        assert!(matches!(rs_diagnostic(&bad, 1, 1.1), Err(DirichletError::WeightExceedsBound { .. })));
        assert_eq!(rs_diagnostic(&series, 1, 2.0), Err(DirichletError::InvalidS(2.0)));
    }

    #[test]
    fn comparison_report() {
        let r = compare_characters(5, 1, 0, 100_000, &DEFAULT_S_VALUES).unwrap();
        assert_eq!(r.exact, rat(1, 4));
        assert!((r.natural.estimate - 0.25).abs() <= 3.0 * r.natural.std_error + 1e-9);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["exact"]["den"], "4");
    }
}
