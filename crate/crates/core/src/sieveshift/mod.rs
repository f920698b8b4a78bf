//! Shifting a quadratic `f` to `F(n) = f(A n + B)` so that no prime below
//! `T` divides any value, and scanning `F` for prime or semiprime values.

mod factor;
mod scan;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, primes_up_to};
use crate::limits::limits;

pub use factor::{find_factor, is_probable_prime};
pub use scan::{almost_prime_scan, AlmostPrimeHit, ScanReport, UnresolvedValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShiftError {
    #[error("leading coefficient must be nonzero")]
    ZeroLeading,
    #[error("polynomial is reducible over the rationals (discriminant {0} is a square)")]
    Reducible(String),
    #[error("polynomial is not primitive (content {0})")]
    NotPrimitive(String),
    #[error("leading coefficient must be positive for scanning")]
    NegativeLeading,
    #[error("T must be at least 3, got {0}")]
    SmallT(u64),
    #[error("T = {t} exceeds the configured bound {bound}")]
    TooLargeT { t: u64, bound: u64 },
    #[error("the prime {0} divides f(x) for every integer x")]
    NoAdmissibleShift(u64),
    #[error("n_max = {n} exceeds the configured scan bound {bound}")]
    ScanBound { n: u64, bound: u64 },
}

/// `a x^2 + b x + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadPoly {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl QuadPoly {
    /// A primitive quadratic, irreducible over the rationals.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self, ShiftError> {
        let f = QuadPoly {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        };
        if f.a.is_zero() {
            return Err(ShiftError::ZeroLeading);
        }
        if !f.is_irreducible() {
            return Err(ShiftError::Reducible(f.discriminant().to_string()));
        }
        let content = f.content();
        if !content.is_one() {
            return Err(ShiftError::NotPrimitive(content.to_string()));
        }
        Ok(f)
    }

    /// Any coefficients; used for expanded shifts, which need not be
    /// primitive when the shift is not admissible.
    pub fn from_coeffs(a: BigInt, b: BigInt, c: BigInt) -> Self {
        QuadPoly { a, b, c }
    }

    pub fn coeffs(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// Degree 2 with non-square discriminant.
    pub fn is_irreducible(&self) -> bool {
        if self.a.is_zero() {
            return false;
        }
        let d = self.discriminant();
        if d.is_negative() {
            return true;
        }
        let r = d.sqrt();
        &r * &r != d
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        (&self.a * x + &self.b) * x + &self.c
    }

    /// `f(x) mod m` for a small modulus.
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        let [a, b, c] = self.coeffs_mod(m);
        let x = (x % m) as u128;
        let m128 = m as u128;
        ((a as u128 * x % m128 * x + b as u128 * x + c as u128) % m128) as u64
    }

    pub(crate) fn coeffs_mod(&self, m: u64) -> [u64; 3] {
        let m_big = BigInt::from(m);
        [&self.a, &self.b, &self.c].map(|v| v.mod_floor(&m_big).to_u64().expect("reduced"))
    }
}

impl std::fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} x^2 + {} x + {}", self.a, self.b, self.c)
    }
}

/// `F(n) = f(A n + B)` with every prime below `T` dividing `A` and no prime
/// below `T` dividing `f(B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSpec {
    pub t: u64,
    pub a: BigInt,
    pub b: BigInt,
    pub f: QuadPoly,
    pub shifted: QuadPoly,
}

/// JSON form with every integer as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftDoc {
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub f: [String; 3],
    #[serde(rename = "F")]
    pub shifted: [String; 3],
}

impl From<&ShiftSpec> for ShiftDoc {
    fn from(s: &ShiftSpec) -> Self {
        let coeffs = |p: &QuadPoly| [p.a.to_string(), p.b.to_string(), p.c.to_string()];
        ShiftDoc {
            t: s.t,
            a: s.a.to_string(),
            b: s.b.to_string(),
            f: coeffs(&s.f),
            shifted: coeffs(&s.shifted),
        }
    }
}

/// `A` = product of the primes below `T`; `B` = least non-negative integer
/// with `B = b_l (mod l)` for every prime `l < T`, where `b_l` is the least
/// residue with `f(b_l) != 0 (mod l)`.
pub fn find_shift(f: &QuadPoly, t: u64) -> Result<ShiftSpec, ShiftError> {
    if t < 3 {
        return Err(ShiftError::SmallT(t));
    }
    let bound = limits().shift_max_t;
    if t > bound {
        return Err(ShiftError::TooLargeT { t, bound });
    }
    let primes: Vec<u64> = primes_up_to(t - 1).to_vec();
    let mut modulus = BigInt::one();
    let mut shift = BigInt::zero();
    for &l in &primes {
        let r = (0..l).find(|&x| f.eval_mod(x, l) != 0).ok_or(ShiftError::NoAdmissibleShift(l))?;
        // shift + modulus * k = r (mod l)
        let current = shift.mod_floor(&BigInt::from(l)).to_u64().expect("small");
        let m_mod = modulus.mod_floor(&BigInt::from(l)).to_u64().expect("small");
        let m_inv = crate::arith::inv_mod(m_mod, l).expect("coprime moduli");
        let k = (r + l - current) % l * m_inv % l;
        shift += &modulus * BigInt::from(k);
        modulus *= BigInt::from(l);
    }
    let f_b = f.eval(&shift);
    for &l in &primes {
        assert!(!(&f_b % BigInt::from(l)).is_zero(), "f(B) divisible by {l}");
    }
    Ok(ShiftSpec {
        t,
        shifted: shifted_poly(f, &modulus, &shift),
        a: modulus,
        b: shift,
        f: f.clone(),
    })
}

/// Expanded `f(A x + B) = a A^2 x^2 + (2 a A B + b A) x + (a B^2 + b B + c)`.
pub fn shifted_poly(f: &QuadPoly, a_mod: &BigInt, b_shift: &BigInt) -> QuadPoly {
    QuadPoly {
        a: &f.a * a_mod * a_mod,
        b: BigInt::from(2) * &f.a * a_mod * b_shift + &f.b * a_mod,
        c: f.eval(b_shift),
    }
}

/// Whether every pair of entries is coprime.
pub fn pairwise_coprime(ns: &[u64]) -> bool {
    ns.iter()
        .enumerate()
        .all(|(i, &x)| ns[i + 1..].iter().all(|&y| gcd(x, y) == 1))
}

/// `pairwise_coprime` for arbitrary-precision values.
pub fn pairwise_coprime_big(ns: &[BigUint]) -> bool {
    ns.iter()
        .enumerate()
        .all(|(i, x)| ns[i + 1..].iter().all(|y| x.gcd(y).is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(a: i64, b: i64, c: i64) -> QuadPoly {
        QuadPoly::new(a, b, c).unwrap()
    }

    fn coeffs(p: &QuadPoly) -> (i64, i64, i64) {
        let (a, b, c) = p.coeffs();
        (a.to_i64().unwrap(), b.to_i64().unwrap(), c.to_i64().unwrap())
    }

    #[test]
    fn validation() {
        assert_eq!(QuadPoly::new(0, 1, 1), Err(ShiftError::ZeroLeading));
        assert!(matches!(QuadPoly::new(1, 0, 0), Err(ShiftError::Reducible(_))));
        assert!(matches!(QuadPoly::new(1, 0, -4), Err(ShiftError::Reducible(_))));
        assert!(matches!(QuadPoly::new(2, 0, 2), Err(ShiftError::NotPrimitive(_))));
        assert!(QuadPoly::new(1, 0, 1).is_ok());
        assert!(QuadPoly::new(-1, 0, 2).is_ok());
    }

    #[test]
    fn shift_examples() {
        let f = poly(1, 0, 1);
        let s = find_shift(&f, 5).unwrap();
        assert_eq!((s.a.clone(), s.b.clone()), (BigInt::from(6), BigInt::from(0)));
        assert_eq!(coeffs(&s.shifted), (36, 0, 1));
        let s = find_shift(&f, 3).unwrap();
        assert_eq!((s.a.clone(), s.b.clone()), (BigInt::from(2), BigInt::from(0)));
        assert_eq!(find_shift(&poly(1, 1, 2), 3), Err(ShiftError::NoAdmissibleShift(2)));
        assert_eq!(find_shift(&f, 2), Err(ShiftError::SmallT(2)));
    }

    #[test]
    fn shift_needs_crt() {
        // f(0) = 15 is divisible by 3 and 5: residues 0, 1, 1, 0 mod 2, 3, 5, 7
        let f = poly(1, 1, 15);
        let s = find_shift(&f, 8).unwrap();
        assert_eq!(s.b, BigInt::from(196));
        let fb = f.eval(&s.b);
        for l in [2, 3, 5, 7] {
            assert!(!(&fb % BigInt::from(l)).is_zero());
        }
        assert!(s.b < s.a);
        // least non-negative solution: nothing smaller works
        for b in 0..s.b.to_i64().unwrap() {
            let v = f.eval(&BigInt::from(b));
            let ok_all = [2, 3, 5, 7].iter().all(|&l| {
                let least = (0..l).find(|&x| f.eval_mod(x, l) != 0).unwrap();
                (b % l as i64) as u64 == least && !(&v % BigInt::from(l)).is_zero()
            });
            assert!(!ok_all);
        }
    }

    #[test]
    fn expansion() {
        let f = poly(1, 0, 1);
        assert_eq!(coeffs(&shifted_poly(&f, &BigInt::from(6), &BigInt::from(0))), (36, 0, 1));
        let g = poly(3, -2, 7);
        assert_eq!(shifted_poly(&g, &BigInt::from(1), &BigInt::from(0)), g);
        // x^2 + 3x + 5 at 6n + 1: 36n^2 + 30n + 9
        let h = poly(1, 3, 5);
        let expanded = shifted_poly(&h, &BigInt::from(6), &BigInt::from(1));
        assert_eq!(coeffs(&expanded), (36, 30, 9));
        for n in -5..5 {
            let x = BigInt::from(6 * n + 1);
            assert_eq!(expanded.eval(&BigInt::from(n)), h.eval(&x));
        }
        // f(1) = 9 is divisible by 3, so B = 1 is not admissible for T = 5
        let s = find_shift(&h, 5).unwrap();
        assert_ne!(s.b, BigInt::from(1));
    }

    #[test]
    fn coprimality() {
        assert!(pairwise_coprime(&[11, 37, 389]));
        assert!(pairwise_coprime(&[6, 35, 143]));
        assert!(!pairwise_coprime(&[10, 15]));
        assert!(pairwise_coprime_big(&[BigUint::from(11u32), BigUint::from(37u32)]));
    }

    #[test]
    fn primorial_for_large_t() {
        let s = find_shift(&poly(1, 0, 1), 50).unwrap();
        assert_eq!(s.a, "614889782588491410".parse::<BigInt>().unwrap());
        assert_eq!(s.b, BigInt::zero());
        let doc = ShiftDoc::from(&s);
        assert_eq!(doc.shifted[1], "0");
    }
}
