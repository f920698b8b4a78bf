//! End-to-end acceptance checks. Each criterion is recomputed against an
//! oracle written here (direct enumeration, naive counting, fresh sieves)
//! and printed as one PASS/FAIL line. The process exits non-zero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matchdens::density::{
    approximate_matching_density, approximate_zero_density, tetrahedral_direct_product_density, tetrahedral_matching_density,
    twist_density, ApproxPlan, Convention, PlanMode,
};
use matchdens::dirichletden::{exact_matching_density_dirichlet, rs_diagnostic, DirichletError, PrimeIndicatorSeries, UnitGroup};
use matchdens::ellstat::{chebotarev_histogram, Curve, FrobeniusCategory, HistogramOptions};
use matchdens::gl2fp::{product_character, steinberg_character, Gl2Fp};
use matchdens::groupcore::{character_table_small, is_nilpotent, named, zero_fraction, CycValue, FiniteGroup};
use matchdens::sieveshift::{almost_prime_scan, find_shift, QuadPoly};
use matchdens::Rational;

const SEED: u64 = 20_240_601;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Miller-Rabin with the first twelve prime bases.
fn probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if *n == BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let m = n - 1u32;
    let s = m.trailing_zeros().unwrap_or(0);
    let d = &m >> s;
    'base: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == m {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == m {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn product_tree(xs: &[BigInt]) -> BigInt {
    match xs.len() {
        0 => BigInt::one(),
        1 => xs[0].clone(),
        n => product_tree(&xs[..n / 2]) * product_tree(&xs[n / 2..]),
    }
}

/// Steinberg value on a 2x2 matrix over F_p is zero exactly on the
/// non-scalar matrices with a repeated eigenvalue.
fn steinberg_vanishes(m: [u64; 4], p: u64) -> bool {
    let [a, b, c, d] = m;
    let tr = (a + d) % p;
    let det = (a * d % p + p * p - b * c % p) % p;
    let disc = (tr * tr % p + 4 * p * p - 4 * det % p) % p;
    let scalar = b == 0 && c == 0 && a == d;
    disc == 0 && !scalar
}

fn gl2_matrices(p: u64) -> impl Iterator<Item = [u64; 4]> {
    (0..p.pow(4))
        .map(move |i| [i % p, (i / p) % p, (i / p / p) % p, i / p / p / p])
        .filter(move |[a, b, c, d]| (a * d) % p != (b * c) % p)
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn steinberg_zero_density() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let (mut total, mut zeros) = (0u64, 0u64);
        for m in gl2_matrices(p) {
            total += 1;
            zeros += steinberg_vanishes(m, p) as u64;
        }
        let oracle = rat(zeros as i64, total as i64);
        let st = steinberg_character(p).expect("steinberg");
        let classwise = zero_fraction(&st);
        let g = Gl2Fp::shared(p).expect("group");
        let by_handle = (0..g.group().order()).filter(|&h| st.value_at(h).is_zero()).count();
        ok &= oracle == rat(1, p as i64) && classwise == oracle && by_handle as u64 == zeros && total == g.group().order() as u64;
        parts.push(format!("p={p}: {classwise}"));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(ok && secs < 30.0, format!("{} in {secs:.2}s", parts.join(", ")))
}

/// SL2(F3) as matrices; the integer 2-dimensional character depends only on
/// element order and the C3 quotient is the coset of the quaternion
/// subgroup (elements of order 1, 2, 4).
fn tetrahedral_oracle() -> (Rational, Rational) {
    let mul = |x: [u64; 4], y: [u64; 4]| {
        [
            (x[0] * y[0] + x[1] * y[2]) % 3,
            (x[0] * y[1] + x[1] * y[3]) % 3,
            (x[2] * y[0] + x[3] * y[2]) % 3,
            (x[2] * y[1] + x[3] * y[3]) % 3,
        ]
    };
    let id = [1, 0, 0, 1];
    let elems: Vec<[u64; 4]> = gl2_matrices(3).filter(|[a, b, c, d]| (a * d + 3 * 3 - b * c) % 3 == 1).collect();
    assert_eq!(elems.len(), 24);
    let order = |x: [u64; 4]| {
        let mut y = x;
        let mut k = 1;
        while y != id {
            y = mul(y, x);
            k += 1;
        }
        k
    };
    let chi = |x: [u64; 4]| match order(x) {
        1 => 2,
        2 => -2,
        3 => -1,
        4 => 0,
        6 => 1,
        k => panic!("order {k}"),
    };
    let in_q8 = |x: [u64; 4]| matches!(order(x), 1 | 2 | 4);
    let a = *elems.iter().find(|&&x| order(x) == 3).expect("order 3");
    let a_inv = mul(a, a);
    let coset = |x: [u64; 4]| {
        if in_q8(x) {
            0
        } else if in_q8(mul(a_inv, x)) {
            1
        } else {
            2
        }
    };
    let (mut fiber, mut fiber_match, mut direct_match) = (0i64, 0i64, 0i64);
    for &g in &elems {
        for &h in &elems {
            let same = chi(g) == chi(h);
            direct_match += same as i64;
            if coset(g) == coset(h) {
                fiber += 1;
                fiber_match += same as i64;
            }
        }
    }
    (rat(fiber_match, fiber), rat(direct_match, 24 * 24))
}

fn tetrahedral() -> Verdict {
    let start = Instant::now();
    let got = tetrahedral_matching_density().expect("tetrahedral");
    let secs = start.elapsed().as_secs_f64();
    let (oracle, direct_oracle) = tetrahedral_oracle();
    let direct = tetrahedral_direct_product_density().expect("direct");
    verdict(
        got == rat(17, 32) && got == oracle && direct == direct_oracle && secs < 1.0,
        format!("{got} (enumeration {oracle}; full direct product {direct}) in {secs:.3}s"),
    )
}

/// The twisted pair agrees wherever the base character vanishes (a
/// proportion `1 - 1/k^2`) and, off that set, exactly where the quadratic
/// twist is trivial.
fn serre_family() -> Verdict {
    let mut ok = true;
    for k in 1..=10i64 {
        let zero = Rational::one() - rat(1, k * k);
        let oracle = zero.clone() + (Rational::one() - zero.clone()) / BigInt::from(2);
        let got = twist_density(&zero, 2).expect("twist");
        ok &= got == oracle && got == Rational::one() - rat(1, 2 * k * k);
    }
    let k2 = twist_density(&rat(3, 4), 2).expect("twist");
    verdict(ok && k2 == rat(7, 8), format!("k = 1..10 match 1 - 1/(2k^2); k = 2 gives {k2}"))
}

struct PlannerRun {
    returned: usize,
    certified: usize,
    total: usize,
    failures: Vec<String>,
    /// Planner time, excluding the oracle.
    seconds: f64,
}

/// Unreduced fraction; window densities have hundreds of thousands of
/// digits, so everything is compared by cross-multiplication.
#[derive(Clone)]
struct Frac(BigInt, BigInt);

impl Frac {
    fn of(r: &Rational) -> Frac {
        Frac(r.numer().clone(), r.denom().clone())
    }

    fn same(&self, o: &Frac) -> bool {
        &self.0 * &o.1 == &o.0 * &self.1
    }

    /// `|self - c| <= eps` for small `c`, `eps`.
    fn within(&self, c: &Rational, eps: &Rational) -> bool {
        let diff = (&self.0 * c.denom() - c.numer() * &self.1) * eps.denom();
        let bound = eps.numer() * &self.1 * c.denom();
        diff <= bound && -diff <= bound
    }
}

/// Recomputes `w = prod (p-1)/p` from the window with a fresh sieve and a
/// local product tree, then the twisted density where applicable.
fn certify(plan: &ApproxPlan, c: &Rational, eps: &Rational) -> bool {
    let Some(window) = &plan.window else {
        return Frac::of(&plan.predicted_density).within(c, eps);
    };
    let p_k = window.primes[0];
    let last = *window.primes.last().expect("nonempty");
    let primes = sieve(last);
    let start = primes.partition_point(|&q| q < p_k);
    if primes[start..] != window.primes[..] || p_k <= 7 {
        return false;
    }
    let nums: Vec<BigInt> = window.primes.iter().map(|&p| BigInt::from(p - 1)).collect();
    let dens: Vec<BigInt> = window.primes.iter().map(|&p| BigInt::from(p)).collect();
    let w = Frac(product_tree(&nums), product_tree(&dens));
    let base = match plan.convention {
        Convention::NonzeroProportion => w.clone(),
        Convention::ZeroProportion => Frac(&w.1 - &w.0, w.1.clone()),
    };
    let predicted = match (plan.mode, plan.twist_order) {
        // base + (1 - base)/d
        (PlanMode::Matching, Some(d)) => {
            let d = BigInt::from(d);
            Frac(&base.0 * &d + &base.1 - &base.0, &base.1 * d)
        }
        (PlanMode::Matching, None) => return false,
        (PlanMode::Zero, _) => base.clone(),
    };
    let gap = rat(1, p_k as i64);
    predicted.same(&Frac::of(&plan.predicted_density))
        && base.same(&Frac::of(&plan.base_density))
        && predicted.within(c, eps)
        && gap <= *eps
        && plan.gap_bound == Some(gap)
}

fn planner_run() -> &'static PlannerRun {
    static RUN: OnceLock<PlannerRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut run = PlannerRun {
            returned: 0,
            certified: 0,
            total: 0,
            failures: Vec::new(),
            seconds: 0.0,
        };
        for eps in [rat(1, 10), rat(1, 100), rat(1, 1000)] {
            for _ in 0..100 {
                let c = rat(rng.random_range(0..=1_000_000), 1_000_000);
                for matching in [false, true] {
                    run.total += 1;
                    let start = Instant::now();
                    let plan = if matching {
                        approximate_matching_density(&c, &eps, Convention::NonzeroProportion)
                    } else {
                        approximate_zero_density(&c, &eps, Convention::NonzeroProportion)
                    };
                    run.seconds += start.elapsed().as_secs_f64();
                    match plan {
                        Ok(plan) => {
                            run.returned += 1;
                            run.certified += certify(&plan, &c, &eps) as usize;
                        }
                        Err(e) => run.failures.push(format!(
                            "{} c={:.4} eps={eps}: {e}",
                            if matching { "matching" } else { "zero" },
                            c.to_f64().unwrap_or(f64::NAN)
                        )),
                    }
                }
            }
        }
        run
    })
}

fn planners_certified() -> Verdict {
    let run = planner_run();
    verdict(
        run.certified == run.returned && run.seconds < 60.0,
        format!("{}/{} returned plans certified; planning took {:.1}s", run.certified, run.returned, run.seconds),
    )
}

fn planners_cover_targets() -> Verdict {
    let run = planner_run();
    let mut detail = format!("{}/{} targets planned", run.returned, run.total);
    if let Some(first) = run.failures.first() {
        detail.push_str(&format!("; first refusal: {first}"));
    }
    verdict(run.returned == run.total, detail)
}

fn product_oracle() -> Verdict {
    let count = |p: u64| {
        let all: Vec<[u64; 4]> = gl2_matrices(p).collect();
        let zeros = all.iter().filter(|&&m| steinberg_vanishes(m, p)).count();
        (zeros as i64, all.len() as i64)
    };
    let ((z5, n5), (z7, n7)) = (count(5), count(7));
    let nonzero_oracle = rat(n5 - z5, n5) * rat(n7 - z7, n7);
    let st5 = steinberg_character(5).expect("st5");
    let st7 = steinberg_character(7).expect("st7");
    let prod = product_character(&[st5, st7]).expect("product");
    let zero = zero_fraction(&prod);
    let nonzero = Rational::one() - &zero;

    let g5 = Gl2Fp::shared(5).expect("gl2(5)");
    let g7 = Gl2Fp::shared(7).expect("gl2(7)");
    let n7 = g7.group().order();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x35);
    let mismatches = (0..10_000)
        .filter(|_| {
            let h = rng.random_range(0..prod.group().order());
            let brute = steinberg_vanishes(g5.element(h / n7).entries(), 5) || steinberg_vanishes(g7.element(h % n7).entries(), 7);
            brute != prod.value_at(h).is_zero()
        })
        .count();
    verdict(
        zero == rat(11, 35) && nonzero == rat(24, 35) && nonzero == nonzero_oracle && mismatches == 0,
        format!("zero {zero}, nonzero {nonzero}; {mismatches} mismatches in 10000 sampled elements"),
    )
}

fn shifting() -> Verdict {
    let f = QuadPoly::new(1, 0, 1).expect("x^2 + 1");
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [10u64, 50] {
        let Ok(spec) = find_shift(&f, t) else {
            return verdict(false, format!("find_shift failed for T = {t}"));
        };
        let small: Vec<u64> = sieve(t - 1);
        let primorial: BigInt = small.iter().map(|&l| BigInt::from(l)).product();
        let (a, b, c) = spec.shifted.coeffs();
        let eval = |n: u64| {
            let n = BigInt::from(n);
            a * &n * &n + b * &n + c
        };
        let x = |n: u64| &spec.a * BigInt::from(n) + &spec.b;
        let consistent = spec.a == primorial && (1..=50).all(|n| eval(n) == &x(n) * &x(n) + 1);
        let clean = (1..=1000).all(|n| {
            let v = eval(n);
            small.iter().all(|&l| !v.is_multiple_of(&BigInt::from(l)))
        });
        let scan = almost_prime_scan(&spec.shifted, 10_000).expect("scan");
        let hits_ok = scan.hits.iter().all(|h| {
            let product: BigUint = h.factors.iter().product();
            h.factors.len() <= 2
                && product == h.value
                && BigInt::from(h.value.clone()) == eval(h.n)
                && h.factors.iter().all(|p| *p >= BigUint::from(t) && probable_prime(p))
        });
        ok &= consistent && clean && hits_ok && scan.hits.len() >= 10;
        parts.push(format!(
            "T={t}: A = primorial {consistent}, no factor < T up to n = 1000 {clean}, {} verified hits",
            scan.hits.len()
        ));
    }
    verdict(ok, parts.join("; "))
}

/// `#E(F_q)` by tabulating squares mod `q`.
fn naive_trace(a: i64, b: i64, q: u64) -> i64 {
    let mut roots = vec![0u32; q as usize];
    for y in 0..q {
        roots[(y * y % q) as usize] += 1;
    }
    let (am, bm) = (a.rem_euclid(q as i64) as u64, b.rem_euclid(q as i64) as u64);
    let affine: u64 = (0..q).map(|x| roots[((x * x % q * x + am * x + bm) % q) as usize] as u64).sum();
    q as i64 + 1 - (affine as i64 + 1)
}

/// Category of Frobenius in GL2(F_p) from its characteristic polynomial.
fn category(a_q: i64, q: u64, p: u64) -> FrobeniusCategory {
    let disc = (a_q * a_q - 4 * q as i64).rem_euclid(p as i64) as u64;
    if disc == 0 {
        FrobeniusCategory::Ambiguous
    } else if (1..p).any(|y| y * y % p == disc) {
        FrobeniusCategory::SplitRegular
    } else {
        FrobeniusCategory::NonsplitRegular
    }
}

fn chebotarev() -> Verdict {
    let (a, b, p, q_max) = (-16i64, 16i64, 11u64, 200_000u64);
    let start = Instant::now();
    let curve = Curve::new(a, b).and_then(|c| c.with_conductor(37)).expect("curve");
    let report = chebotarev_histogram(&curve, p, q_max, HistogramOptions::default()).expect("histogram");
    let secs = start.elapsed().as_secs_f64();

    // class proportions of GL2(F_11) by enumeration
    let mut group_counts: BTreeMap<FrobeniusCategory, u64> = BTreeMap::new();
    let mut group_total = 0u64;
    for [x, y, z, w] in gl2_matrices(p) {
        let tr = ((x + w) % p) as i64;
        let det = (x * w + p * p - y * z) % p;
        let disc = (tr * tr - 4 * det as i64).rem_euclid(p as i64) as u64;
        let cat = if disc == 0 {
            FrobeniusCategory::Ambiguous
        } else if (1..p).any(|s| s * s % p == disc) {
            FrobeniusCategory::SplitRegular
        } else {
            FrobeniusCategory::NonsplitRegular
        };
        *group_counts.entry(cat).or_default() += 1;
        group_total += 1;
    }
    let disc = 16 * (4 * a.pow(3) + 27 * b.pow(2)).unsigned_abs();
    let mut counts: BTreeMap<FrobeniusCategory, u64> = BTreeMap::new();
    let mut samples = 0u64;
    for q in sieve(q_max).into_iter().filter(|&q| q > 3 && q != p && disc % q != 0) {
        *counts.entry(category(naive_trace(a, b, q), q, p)).or_default() += 1;
        samples += 1;
    }
    let expected = [
        (FrobeniusCategory::SplitRegular, rat(9, 20)),
        (FrobeniusCategory::NonsplitRegular, rat(11, 24)),
        (FrobeniusCategory::Ambiguous, rat(11, 120)),
    ];
    let mut ok = report.samples == samples && secs < 300.0;
    let mut parts = Vec::new();
    for (cat, frac) in expected {
        let f = frac.to_f64().expect("f64");
        let count = counts.get(&cat).copied().unwrap_or(0);
        let empirical = count as f64 / samples as f64;
        let se = (f * (1.0 - f) / samples as f64).sqrt();
        let z = (empirical - f) / se;
        let lib = report.stat(cat).expect("category present");
        ok &= rat(group_counts[&cat] as i64, group_total as i64) == frac
            && lib.count == count
            && lib.expected == frac
            && z.abs() <= 3.0;
        parts.push(format!("{} {empirical:.4} vs {frac} (z = {z:+.2})", cat.name()));
    }
    verdict(ok, format!("{samples} primes, {}; library run {secs:.1}s", parts.join(", ")))
}

fn gl1_exactness() -> Verdict {
    let x_max = 1_000_000u64;
    let primes = sieve(x_max);
    let total = primes.len() as f64;
    let (mut pairs, mut within, mut exact_ok) = (0u64, 0u64, true);
    for n in 1..=50u64 {
        let units: Vec<u64> = (0..n).filter(|&a| a.gcd(&n) == 1).collect();
        let phi = units.len() as u64;
        let g = UnitGroup::new(n).expect("unit group");
        let chars: Vec<_> = g.characters().collect();
        // characters are distinct homomorphisms, phi(N) of them
        let tables: Vec<Vec<Option<u64>>> = chars.iter().map(|c| (0..n).map(|a| c.exponent_at(a)).collect()).collect();
        let mut distinct = tables.clone();
        distinct.sort();
        distinct.dedup();
        exact_ok &= distinct.len() as u64 == phi;
        for (c, t) in chars.iter().zip(&tables) {
            let ord = c.order;
            exact_ok &= units.iter().all(|&a| {
                units.iter().all(|&b| t[(a * b % n) as usize] == Some((t[a as usize].unwrap() + t[b as usize].unwrap()) % ord))
            }) && units.iter().all(|&a| t[a as usize].is_some());
        }
        let mut per_residue = vec![0u64; n as usize];
        for &q in &primes {
            per_residue[(q % n) as usize] += 1;
        }
        for (x, tx) in chars.iter().zip(&tables) {
            for (y, ty) in chars.iter().zip(&tables) {
                // exponents are relative to each character's own order
                let agree = |a: u64| match (tx[a as usize], ty[a as usize]) {
                    (Some(i), Some(j)) => i * y.order == j * x.order,
                    (None, None) => true,
                    _ => false,
                };
                let agree_units = units.iter().filter(|&&a| agree(a)).count() as i64;
                let oracle = rat(agree_units, phi as i64);
                let d = exact_matching_density_dirichlet(x, y).expect("density");
                exact_ok &= d == oracle && (BigInt::from(phi) % d.denom()).is_zero();
                let marked: u64 = (0..n).filter(|&a| agree(a)).map(|a| per_residue[a as usize]).sum();
                let f = oracle.to_f64().expect("f64");
                let se = (f * (1.0 - f) / total).sqrt();
                pairs += 1;
                within += ((marked as f64 / total - f).abs() <= 3.0 * se + 1e-12) as u64;
            }
        }
    }
    let share = within as f64 / pairs as f64;
    verdict(
        exact_ok && share >= 0.95,
        format!("{pairs} pairs; exact densities agree with unit counts: {exact_ok}; {:.2}% within 3 sigma", 100.0 * share),
    )
}

fn character_tables() -> Verdict {
    let corpus: Vec<(FiniteGroup, bool)> = vec![
        (named::q8(), true),
        (named::dihedral(4).expect("d4"), true),
        (named::s3(), false),
        (named::cyclic(6).expect("c6"), true),
        (named::sl2f3(), false),
        (named::heisenberg(3).expect("heis3"), true),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, nilpotent) in &corpus {
        let table = character_table_small(g).expect("table");
        let chars = table.characters();
        let n = g.order();
        for (i, x) in chars.iter().enumerate() {
            for (j, y) in chars.iter().enumerate() {
                let mut sum = CycValue::zero();
                for h in 0..n {
                    sum = &sum + &(x.value_at(h) * &y.value_at(h).conj());
                }
                let expected = if i == j { n as i64 } else { 0 };
                ok &= sum == CycValue::from_int(expected);
            }
        }
        let degrees = table.degrees();
        ok &= degrees.iter().map(|d| d * d).sum::<u64>() == n as u64;
        ok &= is_nilpotent(g).expect("nilpotent") == *nilpotent;
        if *nilpotent {
            for chi in chars.iter().filter(|c| c.degree() != CycValue::one()) {
                let zeros = (0..n).filter(|&h| chi.value_at(h).is_zero()).count();
                ok &= 2 * zeros >= n;
            }
        }
        parts.push(format!("{} {degrees:?}", g.name()));
    }
    verdict(ok, parts.join("; "))
}

fn rs_check() -> Verdict {
    let mut ok = true;
    let mut count = 0;
    for n in [3u64, 4, 5, 7, 8, 12] {
        let g = UnitGroup::new(n).expect("unit group");
        let chars: Vec<_> = g.characters().collect();
        for x in &chars {
            for y in &chars {
                let series = PrimeIndicatorSeries::character_distance(x, y, 100_000).expect("series");
                let weights = series.weights.as_ref().expect("weights");
                for s in [1.5, 1.1, 1.02] {
                    let (mut weighted, mut marked) = (0.0f64, 0.0f64);
                    for (&q, &w) in series.primes.iter().zip(weights) {
                        let expected = match (x.exponent_at(q % n), y.exponent_at(q % n)) {
                            (Some(a), Some(b)) => {
                                let angle = std::f64::consts::TAU * (a as f64 / x.order as f64 - b as f64 / y.order as f64);
                                2.0 - 2.0 * angle.cos()
                            }
                            _ => 0.0,
                        };
                        ok &= (w - expected).abs() < 1e-9 && w <= 4.0;
                        let t = (q as f64).powf(-s);
                        weighted += w * t;
                        if w > 1e-12 {
                            marked += t;
                        }
                    }
                    let r = rs_diagnostic(&series, 1, s).expect("diagnostic");
                    ok &= weighted <= 4.0 * marked * (1.0 + 1e-12) && r.holds;
                    ok &= (r.weighted_sum - weighted).abs() <= 1e-9 * weighted.max(1.0);
                    count += 1;
                }
            }
        }
    }
    let x = UnitGroup::new(5).and_then(|g| g.character(1)).expect("character");
    let mut bad = PrimeIndicatorSeries::character_distance(&x, &x, 1000).expect("series");
    bad.weights.as_mut().expect("weights")[3] = 4.0 + 1e-6;
    let refused = matches!(rs_diagnostic(&bad, 1, 1.1), Err(DirichletError::WeightExceedsBound { .. }));
    verdict(ok && refused, format!("{count} (pair, s) diagnostics hold; weight above (2n)^2 refused: {refused}"))
}

fn main() {
    // `cargo test -- --list` and filters pass arguments through
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    type Criterion = (&'static str, &'static str, fn() -> Verdict);
    let criteria: [Criterion; 11] = [
        ("1", "steinberg_zero_density", steinberg_zero_density),
        ("2", "tetrahedral_matching_density", tetrahedral),
        ("3", "serre_family", serre_family),
        ("4a", "planner_plans_certified", planners_certified),
        ("4b", "planner_covers_every_target", planners_cover_targets),
        ("5", "steinberg_product_oracle", product_oracle),
        ("6", "shifted_polynomial_and_almost_primes", shifting),
        ("7", "frobenius_class_frequencies", chebotarev),
        ("8", "dirichlet_matching_densities", gl1_exactness),
        ("9", "character_table_properties", character_tables),
        ("10", "finite_sum_diagnostic", rs_check),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let v = check();
        let mark = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>3} {name:<38} {mark} ({:.2}s) {}",
            start.elapsed().as_secs_f64(),
            v.detail
        );
        if !v.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("all criteria passed");
    } else {
        println!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
