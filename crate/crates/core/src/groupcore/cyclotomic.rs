//! Exact elements of cyclotomic fields, the value type of characters.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::lcm;
use crate::rational::Rational;

static CYCLOTOMIC_CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();

/// Coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    let cache = CYCLOTOMIC_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cyclotomic cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let divisor = cyclotomic_poly(d);
        num = divide_monic(&num, &divisor);
    }
    let result = Arc::new(num);
    cache
        .lock()
        .expect("cyclotomic cache poisoned")
        .insert(n, Arc::clone(&result));
    result
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (dn..num.len()).rev() {
        let c = rem[i];
        if c != 0 {
            quot[i - dn] = c;
            for (j, &dj) in den.iter().enumerate() {
                rem[i - dn + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// An element of `Q(zeta_e)`, stored in the power basis of `zeta_e` and kept
/// reduced modulo the `e`-th cyclotomic polynomial (so the coefficient
/// vector has length `e` with every entry at index `>= phi(e)` zero).
#[derive(Clone, Debug)]
pub struct CycValue {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycValue {
    /// Builds `sum coeffs[k] * zeta_e^k`; any length is accepted and folded.
    pub fn from_coeffs(conductor: u32, coeffs: Vec<Rational>) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        let e = conductor as usize;
        let mut folded = vec![Rational::zero(); e];
        for (k, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                folded[k % e] += c;
            }
        }
        reduce_in_place(conductor, &mut folded);
        CycValue {
            conductor,
            coeffs: folded,
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        CycValue {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `zeta_e^k`.
    pub fn root_of_unity(conductor: u32, k: i64) -> Self {
        let e = conductor as i64;
        let mut coeffs = vec![Rational::zero(); conductor as usize];
        coeffs[k.rem_euclid(e) as usize] = Rational::one();
        Self::from_coeffs(conductor, coeffs)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Reduced power-basis coefficients (length = conductor).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        // Reduced representation is unique, so rationals have only a constant term.
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the value in `Q(zeta_L)`; `L` must be a multiple of the conductor.
    pub fn lift(&self, target: u32) -> CycValue {
        assert!(
            target.is_multiple_of(self.conductor),
            "cannot lift conductor {} to {}",
            self.conductor,
            target
        );
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut coeffs = vec![Rational::zero(); target as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * step] = c.clone();
        }
        reduce_in_place(target, &mut coeffs);
        CycValue {
            conductor: target,
            coeffs,
        }
    }

    /// Complex conjugate (`zeta -> zeta^{-1}`).
    pub fn conj(&self) -> CycValue {
        let e = self.conductor as usize;
        let mut coeffs = vec![Rational::zero(); e];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(e - k) % e] = c.clone();
        }
        CycValue::from_coeffs(self.conductor, coeffs)
    }

    pub fn scale(&self, r: &Rational) -> CycValue {
        CycValue {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Floating-point image under `zeta_e -> exp(2 pi i / e)`; display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let e = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold((0.0, 0.0), |(re, im), (k, c)| {
                let c = crate::rational::to_f64(c);
                let angle = std::f64::consts::TAU * k as f64 / e;
                (re + c * angle.cos(), im + c * angle.sin())
            })
    }

    fn common(&self, other: &CycValue) -> (CycValue, CycValue) {
        let l = lcm(self.conductor as u64, other.conductor as u64) as u32;
        (self.lift(l), other.lift(l))
    }

    /// Total order on canonical forms, used for deterministic sorting only.
    pub fn canonical_cmp(&self, other: &CycValue) -> Ordering {
        let (a, b) = self.common(other);
        a.coeffs.cmp(&b.coeffs)
    }
}

fn reduce_in_place(conductor: u32, coeffs: &mut [Rational]) {
    let phi = cyclotomic_poly(conductor);
    let deg = phi.len() - 1;
    for i in (deg..coeffs.len()).rev() {
        if coeffs[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut coeffs[i], Rational::zero());
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                coeffs[i - deg + j] -= &c * Rational::from_integer(BigInt::from(pj));
            }
        }
    }
}

impl PartialEq for CycValue {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycValue {}

impl Add for &CycValue {
    type Output = CycValue;

    fn add(self, rhs: &CycValue) -> CycValue {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for &CycValue {
    type Output = CycValue;

    fn sub(self, rhs: &CycValue) -> CycValue {
        self + &(-rhs)
    }
}

impl Neg for &CycValue {
    type Output = CycValue;

    fn neg(self) -> CycValue {
        CycValue {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycValue {
    type Output = CycValue;

    fn mul(self, rhs: &CycValue) -> CycValue {
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (a, b) = self.common(rhs);
        let e = a.conductor as usize;
        let mut out = vec![Rational::zero(); e];
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out[(i + j) % e] += x * y;
            }
        }
        reduce_in_place(a.conductor, &mut out);
        CycValue {
            conductor: a.conductor,
            coeffs: out,
        }
    }
}

impl fmt::Display for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{k}", self.conductor)?,
                (_, false) => write!(f, "{mag}*z{}^{k}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
