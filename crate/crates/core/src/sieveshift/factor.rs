use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{gcd, is_prime_big, is_prime_u64, mul_mod};

/// Deterministic below 2^64, 40 fixed Miller-Rabin bases above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => is_prime_big(n),
    }
}

/// A nontrivial factor of the odd composite `n` by Pollard-Brent rho, or
/// `None` once `max_iterations` steps (over all restarts) are spent.
pub fn find_factor(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    if n.is_even() {
        return (n > &BigUint::from(2u32)).then(|| BigUint::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        return rho_u64(small, max_iterations).map(BigUint::from);
    }
    if n.bits() <= 256 {
        return rho_montgomery(n, max_iterations);
    }
    let mut budget = max_iterations;
    for c in 1u32.. {
        if budget == 0 {
            return None;
        }
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (found, spent) = brent(n, BigUint::from(2u32), &f, budget, |a, b| a.gcd(b), |a, b| {
            if a >= b {
                a - b
            } else {
                b - a
            }
        }, |a, b| a * b % n);
        budget = budget.saturating_sub(spent);
        if let Some(d) = found {
            if !d.is_one() && &d != n {
                return Some(d);
            }
        }
    }
    None
}

fn rho_u64(n: u64, max_iterations: u64) -> Option<u64> {
    let mut budget = max_iterations;
    for c in 1u64.. {
        if budget == 0 {
            return None;
        }
        let f = |x: &u64| ((mul_mod(*x, *x, n) as u128 + c as u128) % n as u128) as u64;
        let (found, spent) = brent(&n, 2u64, &f, budget, |a, b| gcd(*a, *b), |a, b| a.abs_diff(*b), |a, b| mul_mod(*a, *b, n));
        budget = budget.saturating_sub(spent);
        if let Some(d) = found {
            if d != 1 && d != n {
                return Some(d);
            }
        }
    }
    None
}

/// Residues mod an odd `n < 2^(64 L)` in Montgomery form, `R = 2^(64 L)`.
struct Montgomery<const L: usize> {
    n: [u64; L],
    /// `-n^-1 mod 2^64`.
    n_neg_inv: u64,
}

impl<const L: usize> Montgomery<L> {
    fn new(n: &BigUint) -> Self {
        let limbs = to_limbs::<L>(n);
        // Newton iteration for n^-1 mod 2^64
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(limbs[0].wrapping_mul(inv)));
        }
        Montgomery {
            n: limbs,
            n_neg_inv: inv.wrapping_neg(),
        }
    }

    /// `a b R^-1 mod n` (CIOS).
    fn mul(&self, a: &[u64; L], b: &[u64; L]) -> [u64; L] {
        // L + 2 words
        let mut t = [0u64; 6];
        for &bi in b.iter() {
            let mut carry = 0u128;
            for j in 0..L {
                let v = t[j] as u128 + a[j] as u128 * bi as u128 + carry;
                t[j] = v as u64;
                carry = v >> 64;
            }
            let v = t[L] as u128 + carry;
            t[L] = v as u64;
            t[L + 1] = (v >> 64) as u64;
            let m = t[0].wrapping_mul(self.n_neg_inv);
            let mut carry = (t[0] as u128 + m as u128 * self.n[0] as u128) >> 64;
            for j in 1..L {
                let v = t[j] as u128 + m as u128 * self.n[j] as u128 + carry;
                t[j - 1] = v as u64;
                carry = v >> 64;
            }
            let v = t[L] as u128 + carry;
            t[L - 1] = v as u64;
            t[L] = t[L + 1] + (v >> 64) as u64;
        }
        let mut r = [0u64; L];
        r.copy_from_slice(&t[..L]);
        if t[L] != 0 || !less(&r, &self.n) {
            r = sub(&r, &self.n);
        }
        r
    }

    fn add(&self, a: &[u64; L], b: &[u64; L]) -> [u64; L] {
        let mut r = [0u64; L];
        let mut carry = 0u128;
        for j in 0..L {
            let v = a[j] as u128 + b[j] as u128 + carry;
            r[j] = v as u64;
            carry = v >> 64;
        }
        if carry != 0 || !less(&r, &self.n) {
            r = sub(&r, &self.n);
        }
        r
    }

    fn abs_diff(&self, a: &[u64; L], b: &[u64; L]) -> [u64; L] {
        if less(a, b) {
            sub(b, a)
        } else {
            sub(a, b)
        }
    }
}

fn less<const L: usize>(a: &[u64; L], b: &[u64; L]) -> bool {
    for j in (0..L).rev() {
        if a[j] != b[j] {
            return a[j] < b[j];
        }
    }
    false
}

/// `a - b` modulo `2^(64 L)`.
fn sub<const L: usize>(a: &[u64; L], b: &[u64; L]) -> [u64; L] {
    let mut r = [0u64; L];
    let mut borrow = 0u64;
    for j in 0..L {
        let (v, b1) = a[j].overflowing_sub(b[j]);
        let (v, b2) = v.overflowing_sub(borrow);
        r[j] = v;
        borrow = (b1 | b2) as u64;
    }
    r
}

fn to_limbs<const L: usize>(x: &BigUint) -> [u64; L] {
    let mut r = [0u64; L];
    for (slot, d) in r.iter_mut().zip(x.iter_u64_digits()) {
        *slot = d;
    }
    r
}

fn from_limbs<const L: usize>(x: &[u64; L]) -> BigUint {
    let mut bytes = Vec::with_capacity(8 * L);
    for d in x {
        bytes.extend_from_slice(&d.to_le_bytes());
    }
    BigUint::from_bytes_le(&bytes)
}

/// Rho on Montgomery residues with the fewest limbs that hold `n`.
fn rho_montgomery(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    match n.bits() {
        0..=128 => rho_limbs::<2>(n, max_iterations),
        129..=192 => rho_limbs::<3>(n, max_iterations),
        _ => rho_limbs::<4>(n, max_iterations),
    }
}

/// Brent's cycle search with `x -> x^2 + c` on Montgomery residues. The
/// residues are `x R mod n`, and `R` is a unit, so gcds with `n` are
/// unaffected.
fn rho_limbs<const L: usize>(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let mont = Montgomery::<L>::new(n);
    let mut spent = 0u64;
    for c in 1u64.. {
        if spent >= max_iterations {
            return None;
        }
        let c = to_limbs::<L>(&BigUint::from(c));
        let f = |x: &[u64; L]| mont.add(&mont.mul(x, x), &c);
        let gcd_n = |q: &[u64; L]| from_limbs(q).gcd(n);
        let mut y = to_limbs::<L>(&BigUint::from(2u32));
        let mut r = 1u64;
        let mut q = to_limbs::<L>(&BigUint::one());
        let mut g = BigUint::one();
        let mut x = y;
        let mut ys = y;
        while g.is_one() {
            x = y;
            for _ in 0..r {
                y = f(&y);
            }
            spent += r;
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = mont.mul(&q, &mont.abs_diff(&x, &y));
                }
                g = gcd_n(&q);
                k += steps;
                spent += steps;
            }
            if spent >= max_iterations && g.is_one() {
                return None;
            }
            r *= 2;
        }
        if &g == n || g.is_zero() {
            loop {
                ys = f(&ys);
                spent += 1;
                g = gcd_n(&mont.abs_diff(&x, &ys));
                if !g.is_one() || spent >= max_iterations {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n && !g.is_zero() {
            return Some(g);
        }
    }
    None
}

/// One Brent cycle search with products of differences batched between
/// gcds. Returns the gcd found (possibly `n` on failure of this seed) and
/// the iterations used.
fn brent<T, F, G, D, M>(n: &T, x0: T, f: &F, budget: u64, gcd: G, diff: D, mulmod: M) -> (Option<T>, u64)
where
    T: Clone + PartialEq + One + Zero,
    F: Fn(&T) -> T,
    G: Fn(&T, &T) -> T,
    D: Fn(&T, &T) -> T,
    M: Fn(&T, &T) -> T,
{
    const BATCH: u64 = 128;
    let one = T::one();
    let mut y = x0;
    let mut r = 1u64;
    let mut q = one.clone();
    let mut g = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut spent = 0u64;
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        spent += r;
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                q = mulmod(&q, &diff(&x, &y));
            }
            g = gcd(&q, n);
            k += steps;
            spent += steps;
        }
        if spent >= budget && g == one {
            return (None, spent);
        }
        r *= 2;
    }
    if &g == n || g.is_zero() {
        // back up one step at a time from the saved point
        loop {
            ys = f(&ys);
            spent += 1;
            g = gcd(&diff(&x, &ys), n);
            if g != one || spent >= budget {
                break;
            }
        }
    }
    (Some(g), spent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_semiprimes() {
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let d = find_factor(&BigUint::from(p * q), 1_000_000).unwrap();
        assert!(d == BigUint::from(p) || d == BigUint::from(q));

        let big = BigUint::from(4_294_967_311u64) * BigUint::from(18_446_744_073_709_551_557u64);
        let d = find_factor(&big, 2_000_000).unwrap();
        assert!(d == BigUint::from(4_294_967_311u64) || d == BigUint::from(18_446_744_073_709_551_557u64));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // 2^61 - 1 and 2^62 - 57 are prime: far beyond a tiny budget
        let n = BigUint::from(2_305_843_009_213_693_951u64) * BigUint::from(4_611_686_018_427_387_847u64);
        assert_eq!(find_factor(&n, 1_000), None);
    }

    #[test]
    fn montgomery_matches_bigint() {
        let n = (BigUint::one() << 200u32) - BigUint::from(235u32);
        let mont = Montgomery::<4>::new(&n);
        let to_mont = |x: &BigUint| to_limbs(&((x << 256u32) % &n));
        for (a, b) in [(3u64, 5u64), (u64::MAX, 12345), (1 << 40, (1 << 63) + 7)] {
            let a = BigUint::from(a) << 150u32;
            let b = BigUint::from(b) << 100u32;
            assert_eq!(mont.mul(&to_mont(&a), &to_mont(&b)), to_mont(&(&a * &b)));
            assert_eq!(mont.add(&to_mont(&a), &to_mont(&b)), to_mont(&(&a + &b)));
        }
    }

    #[test]
    fn montgomery_rho_splits_wide_semiprimes() {
        let p = BigUint::from(1_000_000_007u64);
        let q = (BigUint::one() << 127) - BigUint::one();
        let d = rho_montgomery(&(&p * &q), 1_000_000).unwrap();
        assert!(d == p || d == q);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigUint::from(1_000_003u64)));
        assert!(!is_probable_prime(&BigUint::from(1_000_003u64 * 3)));
        let m127 = (BigUint::one() << 127) - BigUint::one();
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m127 * BigUint::from(3u32))));
    }
}
