//! Frobenius statistics of elliptic curves `y^2 = x^3 + a x + b`: traces by
//! point counting, their class types in GL2(F_p), and the empirical
//! frequencies of those types against the exact fractions of GL2(F_p).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{inv_mod, is_prime_u64, isqrt, legendre, mul_mod, prime_factors, primes_up_to, sqrt_mod};
use crate::gl2fp::{class_type_fractions, gl2_order, ClassKind};
use crate::limits::limits;
use crate::rational::{self, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllError {
    #[error("curve y^2 = x^3 + {a} x + {b} is singular")]
    Singular { a: i64, b: i64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {0} must be greater than 3")]
    SmallPrime(u64),
    #[error("the curve has bad reduction at {0}")]
    BadReduction(u64),
    #[error("q must differ from the torsion prime {0}")]
    SameAsTorsionPrime(u64),
    #[error("q = {q} exceeds the configured bound {bound}")]
    TooLarge { q: u64, bound: u64 },
    #[error("no prime of good reduction in (3, {0}]")]
    NoGoodPrimes(u64),
    #[error("declared conductor {0} is not square-free")]
    ConductorNotSquareFree(u64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// `y^2 = x^3 + a x + b` with an optional declared conductor and label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub a: i64,
    pub b: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Curve {
    pub fn new(a: i64, b: i64) -> Result<Self, EllError> {
        let c = Curve {
            a,
            b,
            conductor: None,
            label: None,
        };
        if c.discriminant().is_zero() {
            return Err(EllError::Singular { a, b });
        }
        Ok(c)
    }

    /// Records a conductor after checking it is square-free; it is not
    /// otherwise verified.
    pub fn with_conductor(mut self, n: u64) -> Result<Self, EllError> {
        if n == 0 || prime_factors(n).iter().product::<u64>() != n {
            return Err(EllError::ConductorNotSquareFree(n));
        }
        self.conductor = Some(n);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `-16 (4 a^3 + 27 b^2)`.
    pub fn discriminant(&self) -> BigInt {
        let a = BigInt::from(self.a);
        let b = BigInt::from(self.b);
        BigInt::from(-16) * (BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b)
    }

    /// Good reduction at a prime `q > 3`.
    pub fn good_at(&self, q: u64) -> bool {
        q > 3 && !(self.discriminant() % BigInt::from(q)).is_zero()
    }

    fn coeffs_mod(&self, q: u64) -> (u64, u64) {
        let q = q as i64;
        (self.a.rem_euclid(q) as u64, self.b.rem_euclid(q) as u64)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {} x + {}", self.a, self.b)
    }
}

/// Parses lines `a b [N] [label]`; blank lines and `#` comments are skipped.
pub fn parse_curve_list(text: &str) -> Result<Vec<Curve>, EllError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| EllError::Parse { line: i + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(err("expected `a b [N] [label]`".into()));
        }
        let num = |s: &str| s.parse::<i64>().map_err(|e| err(format!("`{s}`: {e}")));
        let mut curve = Curve::new(num(fields[0])?, num(fields[1])?).map_err(|e| err(e.to_string()))?;
        let mut rest = &fields[2..];
        if let Some(n) = rest.first().and_then(|s| s.parse::<u64>().ok()) {
            curve = curve.with_conductor(n).map_err(|e| err(e.to_string()))?;
            rest = &rest[1..];
        }
        if !rest.is_empty() {
            curve = curve.with_label(rest.join(" "));
        }
        out.push(curve);
    }
    Ok(out)
}

fn check_q(c: &Curve, q: u64) -> Result<(), EllError> {
    if !is_prime_u64(q) {
        return Err(EllError::NotPrime(q));
    }
    if q <= 3 {
        return Err(EllError::SmallPrime(q));
    }
    let bound = limits().ell_max_q;
    if q > bound {
        return Err(EllError::TooLarge { q, bound });
    }
    if !c.good_at(q) {
        return Err(EllError::BadReduction(q));
    }
    Ok(())
}

/// Quadratic character of F_q as a table, `chi[0] = 0`.
fn quadratic_table(q: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; q as usize];
    chi[0] = 0;
    // x^2 by successive odd increments
    let mut sq = 0u64;
    for x in 1..=(q - 1) / 2 {
        sq += 2 * x - 1;
        if sq >= q {
            sq %= q;
        }
        chi[sq as usize] = 1;
    }
    chi
}

/// `sum_x chi(x^3 + a x + b)` over F_q; the cubic is stepped by finite
/// differences.
fn character_sum(a: u64, b: u64, q: u64) -> i64 {
    let chi = quadratic_table(q);
    let add = |x: u64, y: u64| {
        let s = x + y;
        if s >= q {
            s - q
        } else {
            s
        }
    };
    // f(x) = x^3 + a x + b; d1 = f(x+1) - f(x) = 3x^2 + 3x + 1 + a;
    // d2 = d1(x+1) - d1(x) = 6x + 6; d3 = 6.
    let mut f = b;
    let mut d1 = (1 + a) % q;
    let mut d2 = 6 % q;
    let d3 = 6 % q;
    let mut total = 0i64;
    for _ in 0..q {
        total += chi[f as usize] as i64;
        f = add(f, d1);
        d1 = add(d1, d2);
        d2 = add(d2, d3);
    }
    total
}

/// `#E(F_q) = q + 1 + sum_x chi(x^3 + a x + b)`, for a prime `q > 3` of
/// good reduction.
pub fn count_points(c: &Curve, q: u64) -> Result<u64, EllError> {
    check_q(c, q)?;
    let (a, b) = c.coeffs_mod(q);
    let n = (q + 1) as i64 + character_sum(a, b, q);
    Ok(n as u64)
}

/// `a_q = q + 1 - #E(F_q)`, checked against the Hasse bound.
pub fn trace_of_frobenius(c: &Curve, q: u64) -> Result<i64, EllError> {
    let n = count_points(c, q)?;
    let a_q = (q + 1) as i64 - n as i64;
    assert!(
        a_q.unsigned_abs() * a_q.unsigned_abs() <= 4 * q,
        "Hasse bound violated: a_{q} = {a_q}"
    );
    Ok(a_q)
}

/// Class of Frobenius in GL2(F_p) read off its characteristic polynomial
/// `x^2 - a_q x + q`. A repeated eigenvalue does not tell scalar from
/// non-semisimple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FrobeniusClass {
    SplitRegular { lambda1: u64, lambda2: u64 },
    NonsplitRegular { trace: u64, det: u64 },
    /// Repeated eigenvalue: central or non-semisimple.
    Ambiguous { lambda: u64 },
    /// Repeated eigenvalue 1 with all of `E[p]` rational over F_q.
    Scalar { lambda: u64 },
}

/// Bucket used for the histogram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrobeniusCategory {
    SplitRegular,
    NonsplitRegular,
    Ambiguous,
    Scalar,
}

impl FrobeniusCategory {
    pub fn name(self) -> &'static str {
        match self {
            FrobeniusCategory::SplitRegular => "split_regular",
            FrobeniusCategory::NonsplitRegular => "nonsplit_regular",
            FrobeniusCategory::Ambiguous => "ambiguous",
            FrobeniusCategory::Scalar => "scalar",
        }
    }
}

impl FrobeniusClass {
    pub fn category(&self) -> FrobeniusCategory {
        match self {
            FrobeniusClass::SplitRegular { .. } => FrobeniusCategory::SplitRegular,
            FrobeniusClass::NonsplitRegular { .. } => FrobeniusCategory::NonsplitRegular,
            FrobeniusClass::Ambiguous { .. } => FrobeniusCategory::Ambiguous,
            FrobeniusClass::Scalar { .. } => FrobeniusCategory::Scalar,
        }
    }
}

/// Class of `x^2 - a_q x + q` over F_p for an odd prime `p != q`.
pub fn frobenius_class(a_q: i64, q: u64, p: u64) -> Result<FrobeniusClass, EllError> {
    if !is_prime_u64(p) || p == 2 {
        return Err(EllError::NotPrime(p));
    }
    if q == p {
        return Err(EllError::SameAsTorsionPrime(p));
    }
    let t = a_q.rem_euclid(p as i64) as u64;
    let d = q % p;
    let disc = (mul_mod(t, t, p) + 4 * (p - d)) % p;
    let half = inv_mod(2, p).expect("odd prime");
    Ok(match legendre(disc, p) {
        0 => FrobeniusClass::Ambiguous {
            lambda: mul_mod(t, half, p),
        },
        1 => {
            let s = sqrt_mod(disc, p).expect("square");
            let mut l = [mul_mod(t + s, half, p), mul_mod(t + p - s, half, p)];
            l.sort_unstable();
            FrobeniusClass::SplitRegular {
                lambda1: l[0],
                lambda2: l[1],
            }
        }
        _ => FrobeniusClass::NonsplitRegular { trace: t, det: d },
    })
}

/// Affine point arithmetic on `y^2 = x^3 + a x + b` over F_q; `None` is the
/// point at infinity.
struct CurveModQ {
    a: u64,
    b: u64,
    q: u64,
}

type Point = Option<(u64, u64)>;

impl CurveModQ {
    fn add(&self, p1: Point, p2: Point) -> Point {
        let q = self.q;
        let ((x1, y1), (x2, y2)) = match (p1, p2) {
            (None, p) | (p, None) => return p,
            (Some(u), Some(v)) => (u, v),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % q == 0 {
                return None;
            }
            let num = (3 * mul_mod(x1, x1, q) + self.a) % q;
            mul_mod(num, inv_mod(2 * y1 % q, q).expect("nonzero"), q)
        } else {
            let num = (y2 + q - y1) % q;
            mul_mod(num, inv_mod((x2 + q - x1) % q, q).expect("nonzero"), q)
        };
        let x3 = (mul_mod(lambda, lambda, q) + 2 * q - x1 - x2) % q;
        let y3 = (mul_mod(lambda, (x1 + q - x3) % q, q) + q - y1) % q;
        Some((x3, y3))
    }

    fn mul(&self, mut k: u64, mut pt: Point) -> Point {
        let mut acc = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, pt);
            }
            pt = self.add(pt, pt);
            k >>= 1;
        }
        acc
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Point {
        let q = self.q;
        loop {
            let x = rng.random_range(0..q);
            let rhs = (mul_mod(mul_mod(x, x, q), x, q) + mul_mod(self.a, x, q) + self.b) % q;
            if let Some(y) = sqrt_mod(rhs, q) {
                return Some((x, y));
            }
        }
    }
}

/// Points tried before declaring all of `E[p]` rational.
const SCALAR_TRIALS: usize = 8;

/// Whether Frobenius at `q` acts trivially on `E[p]`: needs `p | q - 1`,
/// `p^2 | #E(F_q)` and `(#E/p) P = O` for random points `P`. The group is
/// `Z/n1 x Z/n2` with `n1 | n2`, and the last condition holds for all `P`
/// exactly when `p | n1`.
fn scalar_test(c: &Curve, q: u64, p: u64, n_points: u64, seed: u64) -> bool {
    if !(q - 1).is_multiple_of(p) || !n_points.is_multiple_of(p * p) {
        return false;
    }
    let (a, b) = c.coeffs_mod(q);
    let e = CurveModQ { a, b, q };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let k = n_points / p;
    (0..SCALAR_TRIALS).all(|_| e.mul(k, e.random_point(&mut rng)).is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobSample {
    pub q: u64,
    pub a_q: i64,
    pub p: u64,
    pub class: FrobeniusClass,
}

/// Frobenius data at `q`; with `resolve_scalars` a repeated eigenvalue 1
/// is tested for acting as the identity on `E[p]`.
pub fn frobenius_sample(c: &Curve, q: u64, p: u64, resolve_scalars: Option<u64>) -> Result<FrobSample, EllError> {
    let n = count_points(c, q)?;
    let a_q = (q + 1) as i64 - n as i64;
    assert!(a_q.unsigned_abs().pow(2) <= 4 * q, "Hasse bound violated at {q}");
    let mut class = frobenius_class(a_q, q, p)?;
    if let (FrobeniusClass::Ambiguous { lambda: 1 }, Some(seed)) = (class, resolve_scalars) {
        if scalar_test(c, q, p, n, seed) {
            class = FrobeniusClass::Scalar { lambda: 1 };
        }
    }
    Ok(FrobSample { q, a_q, p, class })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryStat {
    pub category: FrobeniusCategory,
    pub count: u64,
    pub empirical: f64,
    #[serde(with = "rational::serde_rational")]
    pub expected: Rational,
    /// `sqrt(f (1 - f) / samples)` at the expected fraction `f`.
    pub std_error: f64,
    /// `(empirical - expected) / std_error`.
    pub z_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebotarevReport {
    pub curve: Curve,
    pub p: u64,
    pub q_max: u64,
    pub samples: u64,
    /// Primes in (3, q_max] skipped for bad reduction or `q = p`.
    pub skipped: Vec<u64>,
    pub stats: Vec<CategoryStat>,
    pub warnings: Vec<String>,
}

impl ChebotarevReport {
    pub fn stat(&self, category: FrobeniusCategory) -> Option<&CategoryStat> {
        self.stats.iter().find(|s| s.category == category)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HistogramOptions {
    /// Seed for the scalar test; `None` leaves repeated eigenvalues
    /// ambiguous.
    pub resolve_scalars: Option<u64>,
}

/// Frequencies of Frobenius categories over the good primes `3 < q <= q_max`,
/// `q != p`, against the fractions in GL2(F_p). Ambiguous is compared with
/// central + non-semisimple, `p / (p^2 - 1)`.
pub fn chebotarev_histogram(
    c: &Curve,
    p: u64,
    q_max: u64,
    opts: HistogramOptions,
) -> Result<ChebotarevReport, EllError> {
    if !is_prime_u64(p) || p == 2 {
        return Err(EllError::NotPrime(p));
    }
    let bound = limits().ell_max_q;
    if q_max > bound {
        return Err(EllError::TooLarge { q: q_max, bound });
    }
    let mut warnings = Vec::new();
    if p <= 7 {
        warnings.push(format!("p = {p} <= 7: surjectivity onto GL2(F_p) is not guaranteed"));
    }
    if !c.good_at(p) {
        warnings.push(format!("the curve has bad reduction at p = {p}"));
    }
    let primes: Vec<u64> = primes_up_to(q_max).iter().copied().filter(|&q| q > 3).collect();
    let (good, skipped): (Vec<u64>, Vec<u64>) = primes.into_iter().partition(|&q| q != p && c.good_at(q));
    if good.is_empty() {
        return Err(EllError::NoGoodPrimes(q_max));
    }
    let counts = good
        .par_iter()
        .map(|&q| {
            let s = frobenius_sample(c, q, p, opts.resolve_scalars).expect("good prime");
            let mut m = BTreeMap::new();
            *m.entry(s.class.category()).or_insert(0u64) += 1;
            m
        })
        .reduce(BTreeMap::new, |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_insert(0) += v;
            }
            x
        });
    let samples = good.len() as u64;
    let stats = expected_fractions(p, opts.resolve_scalars.is_some())
        .into_iter()
        .map(|(category, expected)| {
            let count = counts.get(&category).copied().unwrap_or(0);
            let empirical = count as f64 / samples as f64;
            let f = rational::to_f64(&expected);
            let std_error = (f * (1.0 - f) / samples as f64).sqrt();
            let z_score = if std_error > 0.0 {
                (empirical - f) / std_error
            } else if empirical == f {
                0.0
            } else {
                f64::INFINITY
            };
            CategoryStat {
                category,
                count,
                empirical,
                expected,
                std_error,
                z_score,
            }
        })
        .collect();
    Ok(ChebotarevReport {
        curve: c.clone(),
        p,
        q_max,
        samples,
        skipped,
        stats,
        warnings,
    })
}

/// Exact fraction of GL2(F_p) in each category. The scalar test only fires
/// on the identity, so with it the identity is split off from ambiguous.
pub fn expected_fractions(p: u64, resolve_scalars: bool) -> Vec<(FrobeniusCategory, Rational)> {
    let f = class_type_fractions(p).expect("prime");
    let mut ambiguous = &f[&ClassKind::Central] + &f[&ClassKind::NonSemisimple];
    let mut out = vec![
        (FrobeniusCategory::SplitRegular, f[&ClassKind::SplitRegular].clone()),
        (FrobeniusCategory::NonsplitRegular, f[&ClassKind::NonsplitRegular].clone()),
    ];
    if resolve_scalars {
        let identity = Rational::new(1.into(), gl2_order(p).into());
        ambiguous -= &identity;
        out.push((FrobeniusCategory::Ambiguous, ambiguous));
        out.push((FrobeniusCategory::Scalar, identity));
    } else {
        out.push((FrobeniusCategory::Ambiguous, ambiguous));
    }
    out
}

/// `floor(2 sqrt(q))`.
pub fn hasse_bound(q: u64) -> u64 {
    isqrt(4 * q)
}
