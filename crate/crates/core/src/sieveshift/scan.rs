use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::factor::{find_factor, is_probable_prime};
use super::{QuadPoly, ShiftError};
use crate::arith::{inv_mod, legendre, primes_up_to, sqrt_mod};
use crate::limits::limits;

/// Primes up to this bound are removed by sieving; a cofactor free of them
/// and below its square is prime.
const TRIAL_BOUND: u64 = 1_000_000;
const BLOCK: u64 = 1 << 14;

/// `F(n)` with its factorisation into one or two primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostPrimeHit {
    pub n: u64,
    pub value: BigUint,
    /// Ascending, with multiplicity.
    pub factors: Vec<BigUint>,
}

/// A value whose number of prime factors could not be settled within the
/// factoring budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnresolvedValue {
    pub n: u64,
    pub value: BigUint,
    /// Composite with every prime factor above the sieving bound.
    pub cofactor: BigUint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanReport {
    pub n_max: u64,
    pub hits: Vec<AlmostPrimeHit>,
    pub unresolved: Vec<UnresolvedValue>,
}

#[derive(Serialize, Deserialize)]
struct HitDoc {
    n: u64,
    value: String,
    factors: Vec<String>,
}

impl Serialize for AlmostPrimeHit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HitDoc {
            n: self.n,
            value: self.value.to_string(),
            factors: self.factors.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct UnresolvedDoc {
    n: u64,
    value: String,
    cofactor: String,
}

impl Serialize for UnresolvedValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        UnresolvedDoc {
            n: self.n,
            value: self.value.to_string(),
            cofactor: self.cofactor.to_string(),
        }
        .serialize(s)
    }
}

impl Serialize for ScanReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ScanReport", 3)?;
        st.serialize_field("n_max", &self.n_max)?;
        st.serialize_field("hits", &self.hits)?;
        st.serialize_field("unresolved", &self.unresolved)?;
        st.end()
    }
}

/// Residues `n mod l` with `F(n) = 0 (mod l)`.
fn roots_mod(f: &QuadPoly, l: u64) -> Vec<u64> {
    let [a, b, c] = f.coeffs_mod(l);
    if l < 64 {
        return (0..l).filter(|&x| (a * x * x + b * x + c) % l == 0).collect();
    }
    if a == 0 {
        return match (b, c) {
            (0, 0) => (0..l).collect(),
            (0, _) => vec![],
            _ => vec![(l - c) % l * inv_mod(b, l).expect("prime") % l],
        };
    }
    let disc = ((b as u128 * b as u128 + 4 * a as u128 * (l - c) as u128) % l as u128) as u64;
    let inv2a = inv_mod(2 * a % l, l).expect("odd prime");
    let root = |s: u64| ((l - b + s) % l) as u128 * inv2a as u128 % l as u128;
    match legendre(disc, l) {
        0 => vec![root(0) as u64],
        1 => {
            let s = sqrt_mod(disc, l).expect("square");
            let mut r = vec![root(s) as u64, root(l - s) as u64];
            r.sort_unstable();
            r
        }
        _ => vec![],
    }
}

struct Slot {
    value: Option<BigUint>,
    rest: BigUint,
    small: Vec<u64>,
}

/// All `n` in `[1, n_max]` with `F(n)` a prime or a product of two primes
/// (with multiplicity), each with a verified factorisation. Values whose
/// count cannot be settled within the factoring budget are listed
/// separately. Output is ordered by `n` whatever the scheduling.
pub fn almost_prime_scan(f: &QuadPoly, n_max: u64) -> Result<ScanReport, ShiftError> {
    let (a, _, _) = f.coeffs();
    if a.sign() != Sign::Plus {
        return Err(ShiftError::NegativeLeading);
    }
    if !f.is_irreducible() {
        return Err(ShiftError::Reducible(f.discriminant().to_string()));
    }
    let lim = limits();
    if n_max > lim.scan_max_n {
        return Err(ShiftError::ScanBound {
            n: n_max,
            bound: lim.scan_max_n,
        });
    }
    let primes = primes_up_to(TRIAL_BOUND);
    let sieve: Vec<(u64, Vec<u64>)> = primes
        .par_iter()
        .map(|&l| (l, roots_mod(f, l)))
        .filter(|(_, r)| !r.is_empty())
        .collect();
    let blocks: Vec<u64> = (0..n_max.div_ceil(BLOCK)).collect();
    let parts: Vec<(Vec<AlmostPrimeHit>, Vec<UnresolvedValue>)> = blocks
        .par_iter()
        .map(|&blk| {
            let lo = 1 + blk * BLOCK;
            let hi = (lo + BLOCK - 1).min(n_max);
            scan_block(f, &sieve, lo, hi, lim.rho_max_iterations, lim.factor_max_bits)
        })
        .collect();
    let mut report = ScanReport {
        n_max,
        ..Default::default()
    };
    for (h, u) in parts {
        report.hits.extend(h);
        report.unresolved.extend(u);
    }
    Ok(report)
}

fn scan_block(
    f: &QuadPoly,
    sieve: &[(u64, Vec<u64>)],
    lo: u64,
    hi: u64,
    rho_budget: u64,
    max_bits: u64,
) -> (Vec<AlmostPrimeHit>, Vec<UnresolvedValue>) {
    let two = BigInt::from(2);
    let mut slots: Vec<Slot> = (lo..=hi)
        .map(|n| {
            let v = f.eval(&BigInt::from(n));
            if v < two {
                Slot {
                    value: None,
                    rest: BigUint::one(),
                    small: vec![],
                }
            } else {
                let v = v.to_biguint().expect("positive");
                Slot {
                    rest: v.clone(),
                    value: Some(v),
                    small: vec![],
                }
            }
        })
        .collect();
    for (l, roots) in sieve {
        let l = *l;
        for &r in roots {
            // least n >= lo with n = r (mod l)
            let mut n = lo + (r + l - lo % l) % l;
            while n <= hi {
                let slot = &mut slots[(n - lo) as usize];
                if slot.value.is_some() && slot.small.len() < 3 {
                    while slot.small.len() < 3 && (&slot.rest % l).is_zero_u64() {
                        slot.rest /= l;
                        slot.small.push(l);
                    }
                }
                n += l;
            }
        }
    }
    let outcomes: Vec<Outcome> = slots
        .into_par_iter()
        .enumerate()
        .map(|(i, slot)| classify(lo + i as u64, slot, rho_budget, max_bits))
        .collect();
    let mut hits = Vec::new();
    let mut unresolved = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Hit(h) => hits.push(h),
            Outcome::Unresolved(u) => unresolved.push(u),
            Outcome::Skip => {}
        }
    }
    (hits, unresolved)
}

enum Outcome {
    Hit(AlmostPrimeHit),
    Unresolved(UnresolvedValue),
    Skip,
}

fn classify(n: u64, slot: Slot, rho_budget: u64, max_bits: u64) -> Outcome {
    let Some(value) = slot.value else { return Outcome::Skip };
    let omega = slot.small.len();
    if omega >= 3 {
        return Outcome::Skip;
    }
    let mut factors: Vec<BigUint> = slot.small.iter().map(|&p| BigUint::from(p)).collect();
    let rest = slot.rest;
    if rest.is_one() {
        return if omega >= 1 {
            Outcome::Hit(AlmostPrimeHit { n, value, factors })
        } else {
            Outcome::Skip
        };
    }
    let rest_is_prime = rest < BigUint::from(TRIAL_BOUND) * BigUint::from(TRIAL_BOUND) || is_probable_prime(&rest);
    if rest_is_prime {
        if omega > 1 {
            return Outcome::Skip;
        }
        factors.push(rest);
        factors.sort();
        return Outcome::Hit(AlmostPrimeHit { n, value, factors });
    }
    // composite cofactor: at least two more primes
    if omega > 0 {
        return Outcome::Skip;
    }
    if rest.bits() > max_bits {
        return Outcome::Unresolved(UnresolvedValue { n, value, cofactor: rest });
    }
    match find_factor(&rest, rho_budget) {
        Some(d) => {
            let e = &rest / &d;
            if is_probable_prime(&d) && is_probable_prime(&e) {
                let mut factors = vec![d, e];
                factors.sort();
                Outcome::Hit(AlmostPrimeHit { n, value, factors })
            } else {
                Outcome::Skip
            }
        }
        None => Outcome::Unresolved(UnresolvedValue { n, value, cofactor: rest }),
    }
}

trait IsZeroU64 {
    fn is_zero_u64(&self) -> bool;
}

impl IsZeroU64 for BigUint {
    fn is_zero_u64(&self) -> bool {
        self.to_u64() == Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieveshift::find_shift;

    fn trial_factor(mut v: u64) -> Vec<u64> {
        let mut out = vec![];
        let mut d = 2;
        while d * d <= v {
            while v.is_multiple_of(d) {
                out.push(d);
                v /= d;
            }
            d += 1;
        }
        if v > 1 {
            out.push(v);
        }
        out
    }

    #[test]
    fn first_values_of_36n2_plus_1() {
        let f = QuadPoly::new(36, 0, 1).unwrap();
        let report = almost_prime_scan(&f, 2).unwrap();
        assert_eq!(report.hits.len(), 2);
        assert_eq!(report.hits[0].value, BigUint::from(37u32));
        assert_eq!(report.hits[0].factors, vec![BigUint::from(37u32)]);
        assert_eq!(report.hits[1].factors, vec![BigUint::from(5u32), BigUint::from(29u32)]);
    }

    #[test]
    fn matches_trial_division() {
        for (a, b, c) in [(36, 0, 1), (1, 1, 41), (2, 3, 7), (1, 0, 1)] {
            let f = QuadPoly::new(a, b, c).unwrap();
            let report = almost_prime_scan(&f, 3000).unwrap();
            assert!(report.unresolved.is_empty());
            let expected: Vec<u64> = (1..=3000u64)
                .filter(|&n| {
                    let v = (a as u64 * n + b as u64) * n + c as u64;
                    trial_factor(v).len() <= 2 && v > 1
                })
                .collect();
            let got: Vec<u64> = report.hits.iter().map(|h| h.n).collect();
            assert_eq!(got, expected, "{a} {b} {c}");
            for h in &report.hits {
                let prod = h.factors.iter().fold(BigUint::one(), |acc, x| acc * x);
                assert_eq!(prod, h.value);
            }
        }
    }

    #[test]
    fn shifted_scan_has_large_factors() {
        let f = QuadPoly::new(1, 0, 1).unwrap();
        let s = find_shift(&f, 50).unwrap();
        let report = almost_prime_scan(&s.shifted, 2000).unwrap();
        assert!(report.hits.len() >= 10);
        for h in &report.hits {
            assert!(h.factors.iter().all(|p| p >= &BigUint::from(50u32)));
            assert!(h.factors.iter().all(is_probable_prime));
        }
    }

    #[test]
    fn roots_agree_with_brute_force() {
        let f = QuadPoly::new(7, -3, 11).unwrap();
        for &l in primes_up_to(400).iter() {
            let brute: Vec<u64> = (0..l).filter(|&x| f.eval_mod(x, l) == 0).collect();
            assert_eq!(roots_mod(&f, l), brute, "l = {l}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let neg = QuadPoly::new(-1, 0, 2).unwrap();
        assert_eq!(almost_prime_scan(&neg, 10), Err(ShiftError::NegativeLeading));
        let square = QuadPoly::from_coeffs(BigInt::from(1), BigInt::from(0), BigInt::from(0));
        assert!(matches!(almost_prime_scan(&square, 10), Err(ShiftError::Reducible(_))));
    }
}
