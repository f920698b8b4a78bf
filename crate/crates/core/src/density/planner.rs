//! Greedy window planners.
//!
//! Starting from the least prime `p_k > max(7, 1/eps)`, the window of
//! consecutive primes is extended while `w > c + eps`. Each step lowers `w`
//! by `w/p <= 1/p_k <= eps`, so the first window with `w <= c + eps` has
//! `w > c`. The stopping index is located with floating-point log sums and
//! then confirmed and, if needed, corrected with exact arithmetic.
//!
//! Exact values of long windows have numerators of millions of bits, so
//! comparisons cross-multiply instead of going through `Ratio` arithmetic,
//! which would normalise with big gcds.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::presets::preset;
use super::{nonzero_product, DensityError, PrimeWindow};
use crate::arith::{gcd, next_prime, primes_up_to};
use crate::gl2fp::steinberg_character;
use crate::groupcore::zero_fraction;
use crate::limits::limits;
use crate::rational::{serde_rational, serde_rational_opt, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMode {
    /// Target a zero-trace (or nonzero-trace) proportion of one product
    /// character.
    Zero,
    /// Target the matching density of a product character and its twist.
    Matching,
}

/// Which proportion of a window's product character a plan's base density
/// refers to. `w(P) = prod (p-1)/p` is the nonzero proportion; the zero
/// proportion is `1 - w(P)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    NonzeroProportion,
    ZeroProportion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanSource {
    Window,
    Preset { name: String },
}

/// A prime window (and twist order) certified to land within `epsilon` of
/// `target`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxPlan {
    pub mode: PlanMode,
    pub convention: Convention,
    pub source: PlanSource,
    #[serde(with = "serde_rational")]
    pub target: Rational,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    pub window: Option<PrimeWindow>,
    pub twist_order: Option<u64>,
    /// `w(P)`, for window plans.
    #[serde(with = "serde_rational_opt")]
    pub nonzero_density: Option<Rational>,
    /// `1 - w(P)`, for window plans.
    #[serde(with = "serde_rational_opt")]
    pub zero_density: Option<Rational>,
    /// The proportion selected by `convention`; twisted in matching plans.
    #[serde(with = "serde_rational")]
    pub base_density: Rational,
    #[serde(with = "serde_rational")]
    pub predicted_density: Rational,
    /// `1/p_k`, the largest decrease of `w` in one greedy step.
    #[serde(with = "serde_rational_opt")]
    pub gap_bound: Option<Rational>,
}

impl ApproxPlan {
    /// Recomputes the predicted density from the window and twist order
    /// (or from the preset construction).
    pub fn reevaluate(&self) -> Result<Rational, DensityError> {
        match &self.source {
            PlanSource::Preset { name } => {
                let p = preset(name)?;
                Ok(convert_preset(&p.value, p.mode, self.convention))
            }
            PlanSource::Window => {
                let window = self.window.as_ref().ok_or(DensityError::EmptyWindow)?;
                let w = super::w_density(window)?;
                let base = select(&w, self.convention);
                match (self.mode, self.twist_order) {
                    (PlanMode::Zero, None) => Ok(base),
                    (PlanMode::Matching, Some(d)) => Ok(twist_big(&base, d)),
                    _ => Err(DensityError::InvalidWindow("twist order does not fit the plan mode".into())),
                }
            }
        }
    }

    /// `|predicted - target| <= epsilon`, checked by cross-multiplication.
    pub fn is_within_tolerance(&self) -> bool {
        within(&self.predicted_density, &self.target, &self.epsilon)
    }
}

fn select(w: &Rational, convention: Convention) -> Rational {
    match convention {
        Convention::NonzeroProportion => w.clone(),
        Convention::ZeroProportion => complement(w),
    }
}

/// Steinberg presets store the zero proportion.
fn convert_preset(value: &Rational, mode: PlanMode, convention: Convention) -> Rational {
    match (mode, convention) {
        (PlanMode::Zero, Convention::NonzeroProportion) => complement(value),
        _ => value.clone(),
    }
}

/// `1 - x` without renormalising.
fn complement(x: &Rational) -> Rational {
    Rational::new_raw(x.denom() - x.numer(), x.denom().clone())
}

/// `w + (1 - w)/d` in lowest terms. With `w = N/D` reduced, the result is
/// `(N(d-1) + D)/(D d)`; any common factor divides `gcd(d-1, D) * d`, so
/// the reduction only needs small gcds.
pub(crate) fn twist_big(w: &Rational, d: u64) -> Rational {
    assert!(d >= 1);
    if d == 1 {
        return Rational::one();
    }
    let (n, den) = (w.numer(), w.denom());
    let x = n * BigInt::from(d - 1) + den;
    let y = den * BigInt::from(d);
    let g1 = gcd(d - 1, (den % BigInt::from(d - 1)).to_u64().expect("small"));
    let bound = g1 as u128 * d as u128;
    let x_mod = (&x % BigInt::from(bound)).to_u128().expect("small");
    let ga = gcd128(x_mod, bound);
    let y_mod = (&y % BigInt::from(ga)).to_u128().expect("small");
    let g = gcd128(ga, y_mod);
    if g == 1 {
        Rational::new_raw(x, y)
    } else {
        Rational::new_raw(x / BigInt::from(g), y / BigInt::from(g))
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Compares `a` and `b` by cross-multiplication.
pub(crate) fn cmp_frac(a: &Rational, b: &Rational) -> Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// `|value - target| <= eps` by cross-multiplication.
pub(crate) fn within(value: &Rational, target: &Rational, eps: &Rational) -> bool {
    let diff = (value.numer() * target.denom() - target.numer() * value.denom()).abs();
    diff * eps.denom() <= eps.numer() * value.denom() * target.denom()
}

/// A window with its exact nonzero proportion.
struct WindowFit {
    window: PrimeWindow,
    w: Rational,
    gap_bound: Option<Rational>,
}

/// Shortest window `p_k, ..., p_j` (with `p_k` the least prime above
/// `max(7, 1/eps)`) such that `w <= center + eps`; the gap bound then gives
/// `w > center`.
fn greedy_nonzero(center: &Rational, eps: &Rational) -> Result<WindowFit, DensityError> {
    let bound = limits().planner_max_prime;
    let inv = (eps.denom() / eps.numer()).to_u64().unwrap_or(u64::MAX);
    if inv >= bound {
        return Err(DensityError::WorkBoundExceeded {
            start: inv,
            bound,
            reachable: 1.0,
        });
    }
    let start = next_prime(inv.max(7));
    if start > bound {
        return Err(DensityError::WorkBoundExceeded {
            start,
            bound,
            reachable: 1.0,
        });
    }
    let gap_bound = Rational::new(BigInt::one(), BigInt::from(start));
    let t = center + eps;
    let primes = primes_up_to(bound);
    let i0 = primes.binary_search(&start).expect("start is prime and below the bound");

    let mut j = i0;
    if t < Rational::one() {
        let ln_t = to_f64(&t).ln();
        let step_bound = 1.0 / start as f64;
        let mut acc = 0.0f64;
        let mut w_prev = 1.0f64;
        let mut found = None;
        for (i, &p) in primes.iter().enumerate().skip(i0) {
            acc += (-1.0 / p as f64).ln_1p();
            let w_now = acc.exp();
            assert!(
                w_prev - w_now <= step_bound * (1.0 + 1e-9),
                "greedy step at {p} lowers w by more than 1/p_k"
            );
            w_prev = w_now;
            if acc <= ln_t {
                found = Some(i);
                break;
            }
        }
        j = found.ok_or(DensityError::WorkBoundExceeded {
            start,
            bound,
            reachable: acc.exp(),
        })?;
    }

    let mut w = nonzero_product(&primes[i0..=j]);
    // Floating-point placement can be off by a step near the threshold.
    while cmp_frac(&w, &t) == Ordering::Greater {
        j += 1;
        if j >= primes.len() {
            return Err(DensityError::WorkBoundExceeded {
                start,
                bound,
                reachable: to_f64(&w),
            });
        }
        w = nonzero_product(&primes[i0..=j]);
    }
    while j > i0 {
        // w_{j-1} = w_j * p_j / (p_j - 1)
        let p = BigInt::from(primes[j]);
        let prev_num = w.numer() * &p * t.denom();
        let prev_cmp = t.numer() * w.denom() * (&p - 1u32);
        if prev_num > prev_cmp {
            break;
        }
        j -= 1;
        w = nonzero_product(&primes[i0..=j]);
    }
    // Exact check of the last step: w_{j-1} - w_j = w_j / (p_j - 1) <= 1/p_k.
    if j > i0 {
        let pj = BigInt::from(primes[j] - 1);
        assert!(
            w.numer() * BigInt::from(start) <= w.denom() * pj,
            "final greedy step exceeds the gap bound"
        );
    } else {
        assert!(primes[i0] == start);
    }
    let window = PrimeWindow {
        k: i0 + 1,
        m: j - i0,
        primes: primes[i0..=j].to_vec(),
    };
    Ok(WindowFit {
        window,
        w,
        gap_bound: Some(gap_bound),
    })
}

fn check_inputs(c: &Rational, eps: &Rational) -> Result<(), DensityError> {
    if c < &Rational::zero() || c > &Rational::one() {
        return Err(DensityError::OutOfRange(c.to_string()));
    }
    if eps < &Rational::zero() {
        return Err(DensityError::InvalidEpsilon);
    }
    Ok(())
}

fn window_plan(mode: PlanMode, convention: Convention, c: &Rational, eps: &Rational, fit: WindowFit, twist: Option<u64>) -> ApproxPlan {
    let WindowFit { window, w, gap_bound } = fit;
    let base = select(&w, convention);
    let predicted = match twist {
        Some(d) => twist_big(&base, d),
        None => base.clone(),
    };
    ApproxPlan {
        mode,
        convention,
        source: PlanSource::Window,
        target: c.clone(),
        epsilon: eps.clone(),
        window: Some(window),
        twist_order: twist,
        zero_density: Some(complement(&w)),
        nonzero_density: Some(w),
        base_density: base,
        predicted_density: predicted,
        gap_bound,
    }
}

fn preset_plan(mode: PlanMode, convention: Convention, c: &Rational, name: String, value: Rational) -> ApproxPlan {
    ApproxPlan {
        mode,
        convention,
        source: PlanSource::Preset { name },
        target: c.clone(),
        epsilon: Rational::zero(),
        window: None,
        twist_order: None,
        nonzero_density: None,
        zero_density: None,
        base_density: value.clone(),
        predicted_density: value,
        gap_bound: None,
    }
}

/// Plan for a single product character whose nonzero proportion (or zero
/// proportion, per `convention`) is within `eps` of `c`.
///
/// `eps = 0` is accepted for targets realised exactly by a Steinberg preset
/// or by a window of consecutive primes up to the configured search bound.
pub fn approximate_zero_density(c: &Rational, eps: &Rational, convention: Convention) -> Result<ApproxPlan, DensityError> {
    check_inputs(c, eps)?;
    if eps.is_zero() {
        return exact_zero_plan(c, convention);
    }
    // Certify w within eps of the target expressed on w.
    let center = match convention {
        Convention::NonzeroProportion => c.clone(),
        Convention::ZeroProportion => Rational::one() - c,
    };
    let fit = greedy_nonzero(&center, eps)?;
    let plan = window_plan(PlanMode::Zero, convention, c, eps, fit, None);
    debug_assert!(plan.is_within_tolerance());
    Ok(plan)
}

/// Plan for a product character `rho` and its twist by a character of order
/// `d >= 2`, whose matching density `b + (1 - b)/d` is within `eps` of `c`,
/// where `b` is the window's proportion selected by `convention`.
pub fn approximate_matching_density(c: &Rational, eps: &Rational, convention: Convention) -> Result<ApproxPlan, DensityError> {
    check_inputs(c, eps)?;
    if eps.is_zero() {
        return exact_matching_plan(c, convention);
    }
    let half = eps / Rational::from_integer(BigInt::from(2));
    let quarter = eps / Rational::from_integer(BigInt::from(4));
    // Base proportion b in (c - eps/2, c], from a greedy run on w.
    let greedy = match convention {
        Convention::NonzeroProportion => {
            let center = (c - &half).max(Rational::zero());
            greedy_nonzero(&center, &half)?
        }
        Convention::ZeroProportion => {
            // b = 1 - w in [c - eps/2, c) when w in (1 - c, 1 - c + eps/2]
            let center = (Rational::one() - c + &quarter).min(Rational::one());
            greedy_nonzero(&center, &quarter)?
        }
    };
    let base = select(&greedy.w, convention);
    let t = c + eps;
    // least d >= 2 with (1 - b)/d <= c + eps - b
    let num = (base.denom() - base.numer()) * t.denom();
    let den = t.numer() * base.denom() - t.denom() * base.numer();
    assert!(den.is_positive(), "base density exceeds target + eps");
    let d = num.div_ceil(&den).to_u64().expect("twist order fits in u64").max(2);
    let plan = window_plan(PlanMode::Matching, convention, c, eps, greedy, Some(d));
    debug_assert!(plan.is_within_tolerance());
    Ok(plan)
}

fn exact_zero_plan(c: &Rational, convention: Convention) -> Result<ApproxPlan, DensityError> {
    let lim = limits();
    // Steinberg characters of GL2(F_p): zero proportion 1/p.
    let zero_target = match convention {
        Convention::NonzeroProportion => Rational::one() - c,
        Convention::ZeroProportion => c.clone(),
    };
    if zero_target.numer().is_one() {
        if let Some(p) = zero_target.denom().to_u64() {
            if p <= lim.gl2_max_p && crate::arith::is_prime_u64(p) {
                let st = steinberg_character(p).map_err(|e| DensityError::InvalidWindow(e.to_string()))?;
                if zero_fraction(&st) == zero_target {
                    return Ok(preset_plan(PlanMode::Zero, convention, c, format!("steinberg:{p}"), c.clone()));
                }
            }
        }
    }
    let w_target = Rational::one() - &zero_target;
    // The largest window prime never cancels, so it is the largest prime
    // factor of the reduced denominator.
    let bound = lim.planner_exact_search;
    let primes = primes_up_to(bound);
    let mut rest = w_target.denom().clone();
    let mut last = None;
    for &p in primes.iter() {
        let bp = BigInt::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            last = Some(p);
        }
    }
    let too_small = || DensityError::TooSmallEpsilon {
        target: c.to_string(),
        bound,
    };
    let last = match last {
        Some(p) if rest.is_one() && p > 7 => p,
        _ => return Err(too_small()),
    };
    let j = primes.binary_search(&last).expect("prime");
    let mut w = Rational::one();
    for i in (0..=j).rev() {
        let p = primes[i];
        if p <= 7 {
            break;
        }
        w *= Rational::new(BigInt::from(p - 1), BigInt::from(p));
        if w == w_target {
            let window = PrimeWindow {
                k: i + 1,
                m: j - i,
                primes: primes[i..=j].to_vec(),
            };
            let fit = WindowFit { window, w, gap_bound: None };
            return Ok(window_plan(PlanMode::Zero, convention, c, &Rational::zero(), fit, None));
        }
        if w < w_target {
            break;
        }
    }
    Err(too_small())
}

fn exact_matching_plan(c: &Rational, convention: Convention) -> Result<ApproxPlan, DensityError> {
    for name in ["tetrahedral-17-32", "tetrahedral-direct"] {
        let p = preset(name)?;
        if &p.value == c {
            return Ok(preset_plan(PlanMode::Matching, convention, c, name.to_string(), p.value));
        }
    }
    // Serre's family: 1 - 1/(2k^2) = c  <=>  2k^2 (1 - c) = 1
    let gap = Rational::one() - c;
    if gap.is_positive() && gap.numer().is_one() && (gap.denom() % 2u32).is_zero() {
        let k2 = gap.denom() / 2u32;
        let k = k2.sqrt();
        if &k * &k == k2 {
            let name = format!("serre-k:{k}");
            let p = preset(&name)?;
            return Ok(preset_plan(PlanMode::Matching, convention, c, name, p.value));
        }
    }
    let bound = limits().planner_exact_search;
    let primes: Vec<u64> = primes_up_to(bound).iter().copied().filter(|&p| p > 7).collect();
    let offset = crate::arith::prime_index(11).expect("prime") - 1;
    for s in 0..primes.len() {
        let mut w = Rational::one();
        for j in s..primes.len() {
            w *= Rational::new(BigInt::from(primes[j] - 1), BigInt::from(primes[j]));
            let b = select(&w, convention);
            if &b >= c {
                continue;
            }
            // b + (1 - b)/d = c  <=>  d = (1 - b)/(c - b)
            let d = (Rational::one() - &b) / (c - &b);
            if d.is_integer() && d >= Rational::from_integer(BigInt::from(2)) {
                if let Some(d) = d.to_integer().to_u64() {
                    let window = PrimeWindow {
                        k: offset + s + 1,
                        m: j - s,
                        primes: primes[s..=j].to_vec(),
                    };
                    let fit = WindowFit { window, w, gap_bound: None };
                    return Ok(window_plan(PlanMode::Matching, convention, c, &Rational::zero(), fit, Some(d)));
                }
            }
        }
    }
    Err(DensityError::TooSmallEpsilon {
        target: c.to_string(),
        bound,
    })
}
