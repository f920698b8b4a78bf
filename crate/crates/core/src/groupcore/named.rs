//! Built-in groups, addressable by name:
//! `trivial`, `cyclic:n`, `q8`, `s3`, `d4`, `dihedral:n`, `dicyclic:n`,
//! `sl2f3`, `gl2fp:p`, `heisenberg:p`.

use super::{FiniteGroup, GroupError};
use crate::arith::is_prime_u64;

pub fn trivial() -> FiniteGroup {
    FiniteGroup::from_generators("trivial", (), vec![], |_, _| (), |_| "e".into()).expect("trivial group")
}

pub fn cyclic(n: u32) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidParameter("cyclic group of order 0".into()));
    }
    let gens = if n > 1 { vec![1u32] } else { vec![] };
    FiniteGroup::from_generators(
        format!("C{n}"),
        0u32,
        gens,
        move |a, b| (a + b) % n,
        |a| format!("a^{a}"),
    )
}

/// Symmetries of the regular `n`-gon, order `2n`; elements `r^k s^f`.
pub fn dihedral(n: u32) -> Result<FiniteGroup, GroupError> {
    if n < 2 {
        return Err(GroupError::InvalidParameter("dihedral group needs n >= 2".into()));
    }
    FiniteGroup::from_generators(
        format!("D{n}"),
        (0u32, false),
        vec![(1, false), (0, true)],
        move |&(k1, f1), &(k2, f2)| {
            let k = if f1 { (k1 + n - k2) % n } else { (k1 + k2) % n };
            (k, f1 ^ f2)
        },
        |&(k, f)| if f { format!("r^{k} s") } else { format!("r^{k}") },
    )
}

/// Dicyclic group of order `4n`: `a^{2n} = 1, x^2 = a^n, x a x^-1 = a^-1`.
/// `dicyclic(2)` is the quaternion group.
pub fn dicyclic(n: u32) -> Result<FiniteGroup, GroupError> {
    if n < 2 {
        return Err(GroupError::InvalidParameter("dicyclic group needs n >= 2".into()));
    }
    let m = 2 * n;
    FiniteGroup::from_generators(
        format!("Dic{n}"),
        (0u32, false),
        vec![(1, false), (0, true)],
        move |&(k1, j1), &(k2, j2)| match (j1, j2) {
            (false, _) => ((k1 + k2) % m, j2),
            (true, false) => ((k1 + m - k2) % m, true),
            (true, true) => ((k1 + m - k2 + n) % m, false),
        },
        |&(k, j)| if j { format!("a^{k} x") } else { format!("a^{k}") },
    )
}

pub fn q8() -> FiniteGroup {
    let g = dicyclic(2).expect("Q8");
    FiniteGroup::new("Q8", g.ops().clone(), super::GroupKind::Generic)
}

pub fn s3() -> FiniteGroup {
    FiniteGroup::from_generators(
        "S3",
        [0u8, 1, 2],
        vec![[1, 0, 2], [1, 2, 0]],
        |a, b| [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]],
        |p| format!("{p:?}"),
    )
    .expect("S3")
}

fn mat2_mul(p: u32) -> impl Fn(&[u32; 4], &[u32; 4]) -> [u32; 4] + Send + Sync + 'static {
    move |x, y| {
        [
            (x[0] * y[0] + x[1] * y[2]) % p,
            (x[0] * y[1] + x[1] * y[3]) % p,
            (x[2] * y[0] + x[3] * y[2]) % p,
            (x[2] * y[1] + x[3] * y[3]) % p,
        ]
    }
}

/// SL2(F_3), the binary tetrahedral group of order 24.
pub fn sl2f3() -> FiniteGroup {
    FiniteGroup::from_generators(
        "SL2(F3)",
        [1u32, 0, 0, 1],
        vec![[1, 1, 0, 1], [1, 0, 1, 1]],
        mat2_mul(3),
        |m| format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3]),
    )
    .expect("SL2(F3)")
}

/// Upper unitriangular 3x3 matrices over F_p, order `p^3`.
pub fn heisenberg(p: u32) -> Result<FiniteGroup, GroupError> {
    if !is_prime_u64(p as u64) {
        return Err(GroupError::InvalidParameter(format!("heisenberg:{p} needs a prime")));
    }
    FiniteGroup::from_generators(
        format!("Heis({p})"),
        (0u32, 0u32, 0u32),
        vec![(1, 0, 0), (0, 1, 0)],
        move |&(a1, b1, c1), &(a2, b2, c2)| ((a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p),
        |&(a, b, c)| format!("[a={a},b={b},c={c}]"),
    )
}

fn parse_param(name: &str, text: &str) -> Result<u32, GroupError> {
    text.parse::<u32>()
        .map_err(|_| GroupError::UnknownGroup(name.to_string()))
}

/// Resolves a group name such as `cyclic:6` or `gl2fp:5`.
pub fn by_name(name: &str) -> Result<FiniteGroup, GroupError> {
    let (head, param) = match name.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (name, None),
    };
    match (head, param) {
        ("trivial", None) => Ok(trivial()),
        ("q8", None) => Ok(q8()),
        ("s3", None) => Ok(s3()),
        ("d4", None) => dihedral(4),
        ("sl2f3", None) => Ok(sl2f3()),
        ("cyclic", Some(n)) => cyclic(parse_param(name, n)?),
        ("dihedral", Some(n)) => dihedral(parse_param(name, n)?),
        ("dicyclic", Some(n)) => dicyclic(parse_param(name, n)?),
        ("heisenberg", Some(p)) => heisenberg(parse_param(name, p)?),
        ("gl2fp", Some(p)) => {
            let p = parse_param(name, p)? as u64;
            crate::gl2fp::Gl2Fp::shared(p)
                .map(|g| g.group().clone())
                .map_err(|e| GroupError::InvalidParameter(e.to_string()))
        }
        _ => Err(GroupError::UnknownGroup(name.to_string())),
    }
}
