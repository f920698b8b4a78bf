//! Machine-word number theory shared by every module: modular
//! exponentiation, primality, prime sieves, square roots modulo a prime.

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Witnesses that make Miller-Rabin deterministic on all of `u64`.
const MR_WITNESSES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Rounds used for integers wider than 64 bits.
pub const MR_ROUNDS_BIG: usize = 40;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES_U64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES_U64 {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin on arbitrary-precision integers. Exact below 2^64; above
/// that, [`MR_ROUNDS_BIG`] rounds with the first prime bases.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut bases = Vec::with_capacity(MR_ROUNDS_BIG);
    let mut candidate = 2u64;
    while bases.len() < MR_ROUNDS_BIG {
        if is_prime_u64(candidate) {
            bases.push(candidate);
        }
        candidate += 1;
    }
    'witness: for a in bases {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    if n < 2 {
        return 2;
    }
    let mut c = n + 1;
    if c > 2 && c.is_multiple_of(2) {
        c += 1;
    }
    while !is_prime_u64(c) {
        c += 2;
    }
    c
}

/// Sieve of Eratosthenes returning every prime `<= limit`.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}

static PRIME_CACHE: OnceLock<Mutex<(u64, Arc<Vec<u64>>)>> = OnceLock::new();

/// Every prime `<= limit`, in order.
///
/// Backed by a shared cache that only grows, so repeated calls do not sieve
/// again.
pub fn primes_up_to(limit: u64) -> PrimeList {
    let cell = PRIME_CACHE.get_or_init(|| Mutex::new((0, Arc::new(Vec::new()))));
    let mut guard = cell.lock().expect("prime cache poisoned");
    if guard.0 < limit {
        let target = limit.max(1 << 16).max(guard.0.saturating_mul(2).min(limit.saturating_mul(2)));
        *guard = (target, Arc::new(sieve_primes(target)));
    }
    let all = Arc::clone(&guard.1);
    let len = all.partition_point(|&p| p <= limit);
    PrimeList { all, len }
}

/// A prefix of the shared prime cache.
#[derive(Clone, Debug)]
pub struct PrimeList {
    all: Arc<Vec<u64>>,
    len: usize,
}

impl std::ops::Deref for PrimeList {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.all[..self.len]
    }
}

/// The `k`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(k: usize) -> u64 {
    assert!(k >= 1, "prime indices are 1-based");
    let mut limit = 1024u64;
    loop {
        let primes = primes_up_to(limit);
        if primes.len() >= k {
            return primes[k - 1];
        }
        limit *= 2;
    }
}

/// 1-based index of the prime `p` (`prime_index(2) == 1`).
pub fn prime_index(p: u64) -> Option<usize> {
    if !is_prime_u64(p) {
        return None;
    }
    let primes = primes_up_to(p);
    primes.binary_search(&p).ok().map(|i| i + 1)
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Distinct prime factors of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Product of a slice of naturals by balanced binary splitting.
pub fn product_tree(values: &[u64]) -> BigUint {
    match values.len() {
        0 => BigUint::one(),
        1 => BigUint::from(values[0]),
        n if n <= 16 => values.iter().fold(BigUint::one(), |acc, &v| acc * v),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            product_tree(lo) * product_tree(hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn next_prime_examples() {
        assert_eq!(next_prime(0), 2);
        assert_eq!(next_prime(2), 3);
        assert_eq!(next_prime(7), 11);
        assert_eq!(next_prime(1_000_000), 1_000_003);
    }

    #[test]
    fn next_prime_matches_trial_division() {
        let naive = |n: u64| (n + 1..).find(|&c| c >= 2 && (2..c).take_while(|d| d * d <= c).all(|d| c % d != 0)).unwrap();
        for n in 0..2000 {
            assert_eq!(next_prime(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let primes = sieve_primes(100_000);
        let mut it = primes.iter().peekable();
        for n in 0..=100_000u64 {
            let is_p = it.peek().is_some_and(|&&p| p == n);
            if is_p {
                it.next();
            }
            assert_eq!(is_prime_u64(n), is_p, "n = {n}");
        }
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime_u64(3_215_031_751));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_primality() {
        let m127 = (BigUint::one() << 127) - BigUint::one();
        assert!(is_prime_big(&m127));
        assert!(!is_prime_big(&(&m127 * BigUint::from(3u32))));
    }

    #[test]
    fn sqrt_mod_roundtrip() {
        for &p in &[3u64, 5, 7, 13, 17, 41, 97, 65537, 1_000_003] {
            for a in 1..200u64.min(p) {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a % p),
                    None => assert_eq!(legendre(a, p), -1),
                }
            }
        }
    }

    #[test]
    fn nth_prime_and_index() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(5), 11);
        assert_eq!(prime_index(11), Some(5));
        assert_eq!(prime_index(12), None);
        assert_eq!(nth_prime(10_000), 104_729);
    }

    #[test]
    fn totient_and_roots() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(13), 2);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
    }
}
