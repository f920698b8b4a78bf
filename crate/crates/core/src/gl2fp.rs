//! GL2(F_p) as an explicit group: class types, the Steinberg character
//! (dimension `p`, vanishing exactly on the non-semisimple elements), exact
//! class-type fractions and product characters over distinct primes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{inv_mod, is_prime_u64, legendre, primitive_root};
use crate::groupcore::{ClassFunction, CycValue, FiniteGroup, GroupError, GroupKind, GroupOps};
use crate::limits::limits;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gl2Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} exceeds the enumeration bound {bound}")]
    PrimeOutOfRange { p: u64, bound: u64 },
    #[error("matrix is singular mod {0}")]
    Singular(u64),
    #[error("prime {0} appears more than once in a product")]
    RepeatedPrime(u64),
    #[error("class function is not defined on GL2(F_p)")]
    NotGl2,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An invertible 2x2 matrix `[[a, b], [c, d]]` over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gl2Element {
    p: u64,
    m: [u64; 4],
}

impl Gl2Element {
    /// Entries may be any integers; they are reduced mod `p`.
    pub fn new(p: u64, entries: [i64; 4]) -> Result<Self, Gl2Error> {
        if !is_prime_u64(p) {
            return Err(Gl2Error::NotPrime(p));
        }
        let m = entries.map(|x| x.rem_euclid(p as i64) as u64);
        let e = Gl2Element { p, m };
        if e.det() == 0 {
            return Err(Gl2Error::Singular(p));
        }
        Ok(e)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> [u64; 4] {
        self.m
    }

    pub fn trace(&self) -> u64 {
        (self.m[0] + self.m[3]) % self.p
    }

    pub fn det(&self) -> u64 {
        let p = self.p;
        (self.m[0] * self.m[3] % p + p - self.m[1] * self.m[2] % p) % p
    }
}

impl fmt::Display for Gl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.m[0], self.m[1], self.m[2], self.m[3])
    }
}

/// The four families of conjugacy classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Central,
    NonSemisimple,
    SplitRegular,
    NonsplitRegular,
}

impl ClassKind {
    pub const ALL: [ClassKind; 4] = [
        ClassKind::Central,
        ClassKind::NonSemisimple,
        ClassKind::SplitRegular,
        ClassKind::NonsplitRegular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Central => "central",
            ClassKind::NonSemisimple => "non_semisimple",
            ClassKind::SplitRegular => "split_regular",
            ClassKind::NonsplitRegular => "nonsplit_regular",
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Class type with its parameters: eigenvalues where they lie in F_p,
/// otherwise the characteristic polynomial `x^2 - trace x + det`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassType {
    Central { lambda: u64 },
    NonSemisimple { lambda: u64 },
    /// `lambda1 < lambda2`.
    SplitRegular { lambda1: u64, lambda2: u64 },
    NonsplitRegular { trace: u64, det: u64 },
}

impl ClassType {
    pub fn kind(&self) -> ClassKind {
        match self {
            ClassType::Central { .. } => ClassKind::Central,
            ClassType::NonSemisimple { .. } => ClassKind::NonSemisimple,
            ClassType::SplitRegular { .. } => ClassKind::SplitRegular,
            ClassType::NonsplitRegular { .. } => ClassKind::NonsplitRegular,
        }
    }
}

/// Roots of `x^2 - t x + d` in F_p, ascending.
fn char_poly_roots(p: u64, t: u64, d: u64) -> Vec<u64> {
    if p == 2 {
        return (0..2).filter(|&x| (x * x + p * p - t * x + d).is_multiple_of(p)).collect();
    }
    let disc = (t * t % p + 4 * (p - d)) % p;
    let half = inv_mod(2, p).expect("p odd");
    match legendre(disc, p) {
        0 => vec![t * half % p],
        1 => {
            let s = crate::arith::sqrt_mod(disc, p).expect("square");
            let mut r = vec![(t + s) * half % p, (t + p - s) * half % p];
            r.sort_unstable();
            r
        }
        _ => vec![],
    }
}

/// Central iff scalar; otherwise by the roots of the characteristic
/// polynomial (one repeated root: non-semisimple; two: split; none:
/// nonsplit). For odd `p` this is the sign of `tr^2 - 4 det`.
pub fn classify(m: &Gl2Element) -> ClassType {
    let [a, b, c, d] = m.m;
    if b == 0 && c == 0 && a == d {
        return ClassType::Central { lambda: a };
    }
    match char_poly_roots(m.p, m.trace(), m.det())[..] {
        [lambda] => ClassType::NonSemisimple { lambda },
        [lambda1, lambda2] => ClassType::SplitRegular { lambda1, lambda2 },
        _ => ClassType::NonsplitRegular {
            trace: m.trace(),
            det: m.det(),
        },
    }
}

/// Exact closed-form proportions of each class type in GL2(F_p).
pub fn class_type_fractions(p: u64) -> Result<BTreeMap<ClassKind, Rational>, Gl2Error> {
    if !is_prime_u64(p) {
        return Err(Gl2Error::NotPrime(p));
    }
    let r = |n: u64, d: u64| Rational::new(BigInt::from(n), BigInt::from(d));
    Ok(BTreeMap::from([
        (ClassKind::Central, r(1, p * (p * p - 1))),
        (ClassKind::NonSemisimple, r(1, p)),
        (ClassKind::SplitRegular, r(p - 2, 2 * (p - 1))),
        (ClassKind::NonsplitRegular, r(p, 2 * (p + 1))),
    ]))
}

/// `|GL2(F_p)| = (p^2 - 1)(p^2 - p)`.
pub fn gl2_order(p: u64) -> u64 {
    (p * p - 1) * (p * p - p)
}

/// Handles are the invertible matrices in increasing order of the code
/// `a + p b + p^2 c + p^3 d`.
struct Gl2Ops {
    p: u64,
    codes: Vec<u32>,
    index: Vec<u32>,
    identity: usize,
    gens: Vec<usize>,
}

impl Gl2Ops {
    fn build(p: u64) -> Self {
        let total = (p * p * p * p) as usize;
        let mut index = vec![u32::MAX; total];
        let mut codes = Vec::with_capacity(gl2_order(p) as usize);
        for code in 0..total {
            let m = decode(p, code as u32);
            if !(m[0] * m[3] + p * p - m[1] * m[2]).is_multiple_of(p) {
                index[code] = codes.len() as u32;
                codes.push(code as u32);
            }
        }
        let handle = |m: [u64; 4]| index[encode(p, m) as usize] as usize;
        let identity = handle([1, 0, 0, 1]);
        let g = if p == 2 { 1 } else { primitive_root(p) };
        let mut gens: Vec<usize> = [[g, 0, 0, 1], [1, 1, 0, 1], [0, 1, 1, 0]]
            .into_iter()
            .map(handle)
            .filter(|&h| h != identity)
            .collect();
        gens.sort_unstable();
        gens.dedup();
        Gl2Ops {
            p,
            codes,
            index,
            identity,
            gens,
        }
    }

    fn matrix(&self, h: usize) -> [u64; 4] {
        decode(self.p, self.codes[h])
    }

    fn handle(&self, m: [u64; 4]) -> usize {
        self.index[encode(self.p, m) as usize] as usize
    }
}

fn encode(p: u64, m: [u64; 4]) -> u32 {
    (m[0] + p * (m[1] + p * (m[2] + p * m[3]))) as u32
}

fn decode(p: u64, code: u32) -> [u64; 4] {
    let c = code as u64;
    [c % p, (c / p) % p, (c / (p * p)) % p, c / (p * p * p)]
}

impl GroupOps for Gl2Ops {
    fn order(&self) -> usize {
        self.codes.len()
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        let p = self.p;
        let [a, b, c, d] = self.matrix(x);
        let [e, f, g, h] = self.matrix(y);
        self.handle([
            (a * e + b * g) % p,
            (a * f + b * h) % p,
            (c * e + d * g) % p,
            (c * f + d * h) % p,
        ])
    }

    fn inv(&self, x: usize) -> usize {
        let p = self.p;
        let [a, b, c, d] = self.matrix(x);
        let det = (a * d % p + p - b * c % p) % p;
        let k = inv_mod(det, p).expect("invertible");
        self.handle([d * k % p, (p - b) * k % p, (p - c) * k % p, a * k % p])
    }

    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }

    fn label(&self, x: usize) -> String {
        let m = self.matrix(x);
        format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3])
    }
}

/// GL2(F_p) with access to the matrices behind the handles.
pub struct Gl2Fp {
    p: u64,
    ops: Arc<Gl2Ops>,
    group: FiniteGroup,
}

impl fmt::Debug for Gl2Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gl2Fp({})", self.p)
    }
}

impl Gl2Fp {
    /// Enumerates GL2(F_p); `p` must be prime and within the enumeration
    /// bound.
    pub fn new(p: u64) -> Result<Self, Gl2Error> {
        if !is_prime_u64(p) {
            return Err(Gl2Error::NotPrime(p));
        }
        let bound = limits().gl2_max_p;
        if p > bound {
            return Err(Gl2Error::PrimeOutOfRange { p, bound });
        }
        let ops = Arc::new(Gl2Ops::build(p));
        let group = FiniteGroup::new(format!("GL2(F{p})"), ops.clone(), GroupKind::Gl2 { p });
        Ok(Gl2Fp { p, ops, group })
    }

    /// Process-wide instance per prime, so that class functions built in
    /// different places live on the same group.
    pub fn shared(p: u64) -> Result<Arc<Gl2Fp>, Gl2Error> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Gl2Fp>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().expect("cache lock").get(&p) {
            return Ok(g.clone());
        }
        let g = Arc::new(Gl2Fp::new(p)?);
        Ok(cache.lock().expect("cache lock").entry(p).or_insert(g).clone())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn element(&self, handle: usize) -> Gl2Element {
        Gl2Element {
            p: self.p,
            m: self.ops.matrix(handle),
        }
    }

    pub fn handle(&self, m: &Gl2Element) -> Result<usize, Gl2Error> {
        if m.p != self.p {
            return Err(Gl2Error::NotGl2);
        }
        Ok(self.ops.handle(m.m))
    }

    pub fn classify_handle(&self, handle: usize) -> ClassType {
        classify(&self.element(handle))
    }

    /// Number of elements of each class type, by enumeration.
    pub fn class_type_counts(&self) -> BTreeMap<ClassKind, u64> {
        let mut counts: BTreeMap<ClassKind, u64> = ClassKind::ALL.iter().map(|&k| (k, 0)).collect();
        for h in 0..self.group.order() {
            *counts.get_mut(&self.classify_handle(h).kind()).expect("all kinds") += 1;
        }
        counts
    }

    /// Value `p` on central, 0 on non-semisimple, 1 on split and -1 on
    /// nonsplit regular classes.
    pub fn steinberg_character(&self) -> Result<ClassFunction, Gl2Error> {
        let p = self.p as i64;
        Ok(ClassFunction::from_representatives(&self.group, |h| {
            CycValue::from_int(match self.classify_handle(h).kind() {
                ClassKind::Central => p,
                ClassKind::NonSemisimple => 0,
                ClassKind::SplitRegular => 1,
                ClassKind::NonsplitRegular => -1,
            })
        })?)
    }
}

/// The Steinberg character of the shared GL2(F_p).
pub fn steinberg_character(p: u64) -> Result<ClassFunction, Gl2Error> {
    Gl2Fp::shared(p)?.steinberg_character()
}

/// Outer tensor product of class functions on GL2(F_{p_j}) for pairwise
/// distinct primes, as a class function on the direct product.
pub fn product_character(xs: &[ClassFunction]) -> Result<ClassFunction, Gl2Error> {
    let mut seen = Vec::with_capacity(xs.len());
    for x in xs {
        let GroupKind::Gl2 { p } = x.group().kind() else {
            return Err(Gl2Error::NotGl2);
        };
        if seen.contains(p) {
            return Err(Gl2Error::RepeatedPrime(*p));
        }
        seen.push(*p);
    }
    let (first, rest) = xs.split_first().ok_or(Gl2Error::NotGl2)?;
    let mut acc = first.clone();
    for x in rest {
        acc = acc.outer_product(x)?;
    }
    Ok(acc)
}
