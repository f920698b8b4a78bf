//! Irreducible characters of small groups by the class-algebra method.
//!
//! The central characters `omega(C_j) = |C_j| chi(g_j) / chi(1)` are the
//! common eigenvectors of the class-multiplication matrices. They are found
//! modulo a prime `l = 1 (mod exponent)` with `l > 2 ceil(sqrt |G|)`; the
//! degree is recovered from `sum_j omega_j omega_{j*} / |C_j| = |G| / chi(1)^2`
//! and each value is lifted to `Q(zeta_o)` through the eigenvalue
//! multiplicities on the cyclic group generated by the representative.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;

use super::cyclotomic::cyclotomic_poly;
use super::{conjugacy_classes, element_order, exponent, ClassFunction, ConjClassPartition, CycValue, FiniteGroup, GroupError};
use crate::arith::{inv_mod, is_prime_u64, isqrt, mul_mod, pow_mod, primitive_root};
use crate::limits::limits;
use crate::rational::Rational;

/// Irreducible characters, ordered by degree (trivial character first,
/// then by value vectors, larger canonical forms first).
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: FiniteGroup,
    classes: Arc<ConjClassPartition>,
    characters: Vec<ClassFunction>,
    modulus: u64,
    exponent: u64,
}

impl CharacterTable {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn classes(&self) -> &Arc<ConjClassPartition> {
        &self.classes
    }

    pub fn characters(&self) -> &[ClassFunction] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    /// Degrees in table order.
    pub fn degrees(&self) -> Vec<u64> {
        self.characters
            .iter()
            .map(|c| {
                let d = c.degree().as_rational().expect("degrees are integers");
                u64::try_from(d.to_integer()).expect("positive degree")
            })
            .collect()
    }

    /// The auxiliary prime used for the modular computation.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }
}

/// `<x, y> = (1/|G|) sum_g x(g) conj(y(g))`, exactly.
pub fn inner_product(x: &ClassFunction, y: &ClassFunction) -> Result<CycValue, GroupError> {
    if x.group() != y.group() {
        return Err(GroupError::GroupMismatch(x.group().name().into(), y.group().name().into()));
    }
    let cc = x.classes();
    let mut acc = CycValue::zero();
    for c in 0..cc.len() {
        let term = &(x.value_on_class(c) * &y.value_on_class(c).conj()).scale(&Rational::from_integer(BigInt::from(cc.size(c))));
        acc = &acc + term;
    }
    Ok(acc.scale(&Rational::new(BigInt::from(1), BigInt::from(cc.group_order()))))
}

/// The complete list of irreducible characters with exact values.
pub fn character_table_small(g: &FiniteGroup) -> Result<CharacterTable, GroupError> {
    let lim = limits();
    let n = g.order() as u64;
    if n > lim.chartable_max_order {
        return Err(GroupError::OrderBoundExceeded {
            order: n,
            bound: lim.chartable_max_order,
        });
    }
    let cc = conjugacy_classes(g)?;
    let r = cc.len();
    if r as u64 > lim.chartable_max_classes {
        return Err(GroupError::ClassCountExceeded {
            classes: r as u64,
            bound: lim.chartable_max_classes,
        });
    }
    let e = exponent(g)?;
    let ell = choose_modulus(n, e, lim.chartable_max_modulus)?;

    let id_class = cc.class_of(g.identity());
    let inverse_class: Vec<usize> = (0..r).map(|j| cc.class_of(g.inv(cc.representative(j)))).collect();

    // a[i][j][k] = #{(x, y) in C_i x C_j : x y = g_k}
    let mut consts = vec![0u64; r * r * r];
    for k in 0..r {
        let gk = cc.representative(k);
        for x in 0..g.order() {
            let y = g.mul(g.inv(x), gk);
            consts[(cc.class_of(x) * r + cc.class_of(y)) * r + k] += 1;
        }
    }
    let class_matrix = |j: usize| -> Vec<Vec<u64>> {
        (0..r)
            .map(|i| (0..r).map(|k| consts[(i * r + j) * r + k] % ell).collect())
            .collect()
    };

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for j in (0..r).filter(|&j| j != id_class) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(j);
        let mut next = Vec::with_capacity(r);
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            next.extend(split_space(&m, space, ell)?);
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(GroupError::CharacterTable(format!(
            "class algebra split into {} eigenspaces, expected {r}",
            spaces.len()
        )));
    }

    // Per class: element order and the class of each power of the representative.
    let orders: Vec<u64> = cc.representatives().iter().map(|&x| element_order(g, x)).collect();
    let power_classes: Vec<Vec<usize>> = (0..r)
        .map(|j| {
            let x = cc.representative(j);
            let mut y = g.identity();
            (0..orders[j])
                .map(|_| {
                    let c = cc.class_of(y);
                    y = g.mul(y, x);
                    c
                })
                .collect()
        })
        .collect();
    let root = primitive_root(ell);

    let mut multiplicities: Vec<Vec<Vec<u64>>> = Vec::with_capacity(r);
    let mut degrees = Vec::with_capacity(r);
    for space in &spaces {
        let mut w = space[0].clone();
        let lead = w[id_class];
        let lead_inv = inv_mod(lead, ell).ok_or_else(|| GroupError::CharacterTable("eigenvector vanishes on the identity class".into()))?;
        for v in w.iter_mut() {
            *v = mul_mod(*v, lead_inv, ell);
        }
        // sum_j omega_j omega_{j*} / |C_j| = |G| / d^2
        let mut s = 0u64;
        for j in 0..r {
            let h_inv = inv_mod(cc.size(j) % ell, ell).expect("l does not divide |G|");
            s = (s + mul_mod(mul_mod(w[j], w[inverse_class[j]], ell), h_inv, ell)) % ell;
        }
        let s_inv = inv_mod(s, ell).ok_or_else(|| GroupError::CharacterTable("degenerate central character".into()))?;
        let d_sq = mul_mod(n % ell, s_inv, ell);
        let d = (1..=isqrt(n))
            .find(|&d| (d * d) % ell == d_sq)
            .ok_or_else(|| GroupError::CharacterTable("no integer degree lifts the modular value".into()))?;
        degrees.push(d);
        // theta_j = omega_j d / |C_j|, the value of chi mod l
        let theta: Vec<u64> = (0..r)
            .map(|j| {
                let h_inv = inv_mod(cc.size(j) % ell, ell).expect("l does not divide |G|");
                mul_mod(mul_mod(w[j], d, ell), h_inv, ell)
            })
            .collect();
        let mut per_class = Vec::with_capacity(r);
        for j in 0..r {
            let o = orders[j];
            let z = pow_mod(root, (ell - 1) / o, ell);
            let zpow: Vec<u64> = (0..o).map(|u| pow_mod(z, u, ell)).collect();
            let o_inv = inv_mod(o % ell, ell).expect("l > o");
            let mut mult = vec![0u64; o as usize];
            for (k, slot) in mult.iter_mut().enumerate() {
                let mut acc = 0u64;
                for t in 0..o {
                    let u = (o - (k as u64 * t) % o) % o;
                    acc = (acc + mul_mod(theta[power_classes[j][t as usize]], zpow[u as usize], ell)) % ell;
                }
                let m = mul_mod(acc, o_inv, ell);
                if m > d {
                    return Err(GroupError::CharacterTable(format!(
                        "eigenvalue multiplicity {m} exceeds degree {d}"
                    )));
                }
                *slot = m;
            }
            per_class.push(mult);
        }
        multiplicities.push(per_class);
    }

    verify_orthogonality(&cc, &orders, &multiplicities, e)?;
    let degree_square_sum: u64 = degrees.iter().map(|d| d * d).sum();
    if degree_square_sum != n {
        return Err(GroupError::CharacterTable(format!(
            "sum of squared degrees {degree_square_sum} != |G| = {n}"
        )));
    }

    let mut characters = Vec::with_capacity(r);
    for per_class in &multiplicities {
        let values = per_class
            .iter()
            .zip(&orders)
            .map(|(mult, &o)| {
                let coeffs = mult
                    .iter()
                    .map(|&m| Rational::from_integer(BigInt::from(m)))
                    .collect();
                CycValue::from_coeffs(o as u32, coeffs)
            })
            .collect();
        characters.push(ClassFunction::new(g, values)?);
    }
    let one = CycValue::one();
    characters.sort_by(|a, b| {
        let da = a.degree().as_rational();
        let db = b.degree().as_rational();
        let ta = a.values().iter().all(|v| *v == one);
        let tb = b.values().iter().all(|v| *v == one);
        da.cmp(&db)
            .then(tb.cmp(&ta))
            .then_with(|| {
                for (x, y) in a.values().iter().zip(b.values()) {
                    match y.canonical_cmp(x) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            })
    });
    Ok(CharacterTable {
        group: g.clone(),
        classes: cc,
        characters,
        modulus: ell,
        exponent: e,
    })
}

/// Least prime `l = 1 (mod e)` with `l > 2 ceil(sqrt(n))`.
fn choose_modulus(n: u64, e: u64, bound: u64) -> Result<u64, GroupError> {
    let root = isqrt(n);
    let ceil_root = if root * root == n { root } else { root + 1 };
    let floor = 2 * ceil_root;
    let mut candidate = 1 + e;
    while candidate <= bound {
        if candidate > floor && is_prime_u64(candidate) {
            return Ok(candidate);
        }
        candidate += e;
    }
    Err(GroupError::NoSuitablePrime { exponent: e, bound })
}

/// Splits an `m`-invariant subspace (rows = basis vectors) into eigenspaces.
fn split_space(m: &[Vec<u64>], space: Vec<Vec<u64>>, ell: u64) -> Result<Vec<Vec<Vec<u64>>>, GroupError> {
    let basis = rref(space, ell);
    let dim = basis.len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|row| row.iter().position(|&x| x != 0).expect("nonzero basis row"))
        .collect();
    // restricted[s][t] = coordinate s of m * basis[t]
    let mut restricted = vec![vec![0u64; dim]; dim];
    for (t, b) in basis.iter().enumerate() {
        let image: Vec<u64> = m
            .iter()
            .map(|row| row.iter().zip(b).fold(0u64, |acc, (&x, &y)| (acc + mul_mod(x, y, ell)) % ell))
            .collect();
        for (s, &p) in pivots.iter().enumerate() {
            restricted[s][t] = image[p];
        }
    }
    let poly = charpoly(&restricted, ell);
    let mut out = Vec::new();
    let mut total = 0;
    for lambda in 0..ell {
        if eval_poly(&poly, lambda, ell) != 0 {
            continue;
        }
        let mut shifted = restricted.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = (row[i] + ell - lambda) % ell;
        }
        let kernel = nullspace(shifted, ell);
        if kernel.is_empty() {
            continue;
        }
        total += kernel.len();
        let vectors: Vec<Vec<u64>> = kernel
            .iter()
            .map(|c| {
                let mut v = vec![0u64; m.len()];
                for (coef, b) in c.iter().zip(&basis) {
                    for (vi, &bi) in v.iter_mut().zip(b) {
                        *vi = (*vi + mul_mod(*coef, bi, ell)) % ell;
                    }
                }
                v
            })
            .collect();
        out.push(vectors);
        if total == dim {
            break;
        }
    }
    if total != dim {
        return Err(GroupError::CharacterTable(
            "class matrix is not diagonalisable modulo l".into(),
        ));
    }
    Ok(out)
}

/// Reduced row echelon form; zero rows dropped.
fn rref(mut rows: Vec<Vec<u64>>, ell: u64) -> Vec<Vec<u64>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = inv_mod(rows[rank][c], ell).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, ell);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c];
                for k in 0..cols {
                    let sub = mul_mod(f, rows[rank][k], ell);
                    rows[i][k] = (rows[i][k] + ell - sub) % ell;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Basis of `{c : a c = 0}`.
fn nullspace(a: Vec<Vec<u64>>, ell: u64) -> Vec<Vec<u64>> {
    let cols = a.first().map_or(0, Vec::len);
    let reduced = rref(a, ell);
    let pivots: Vec<usize> = reduced
        .iter()
        .map(|row| row.iter().position(|&x| x != 0).expect("nonzero row"))
        .collect();
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = (ell - row[free]) % ell;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial via reduction to Hessenberg form; constant
/// term first.
fn charpoly(a: &[Vec<u64>], ell: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| h[i][c] != 0) else {
            continue;
        };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let inv = inv_mod(h[c + 1][c], ell).expect("nonzero pivot");
        for r in c + 2..n {
            let t = mul_mod(h[r][c], inv, ell);
            if t == 0 {
                continue;
            }
            for k in 0..n {
                let sub = mul_mod(t, h[c + 1][k], ell);
                h[r][k] = (h[r][k] + ell - sub) % ell;
            }
            for row in h.iter_mut() {
                let add = mul_mod(t, row[r], ell);
                row[c + 1] = (row[c + 1] + add) % ell;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        // (x - h[m-1][m-1]) p_{m-1}
        let prev = &polys[m - 1];
        let mut p = vec![0u64; m + 1];
        for (i, &c) in prev.iter().enumerate() {
            p[i + 1] = (p[i + 1] + c) % ell;
            p[i] = (p[i] + ell - mul_mod(h[m - 1][m - 1], c, ell)) % ell;
        }
        let mut t = 1u64;
        for i in (1..m).rev() {
            t = mul_mod(t, h[i][i - 1], ell);
            let coef = mul_mod(t, h[i - 1][m - 1], ell);
            for (k, &c) in polys[i - 1].iter().enumerate() {
                p[k] = (p[k] + ell - mul_mod(coef, c, ell)) % ell;
            }
        }
        polys.push(p);
    }
    polys.pop().expect("n >= 0")
}

fn eval_poly(p: &[u64], x: u64, ell: u64) -> u64 {
    p.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, x, ell) + c) % ell)
}

/// `sum_j |C_j| chi_a(g_j) conj(chi_b(g_j)) = |G| delta_ab`, evaluated with
/// integer multiplicity vectors and reduced once modulo `Phi_e`.
fn verify_orthogonality(cc: &ConjClassPartition, orders: &[u64], mult: &[Vec<Vec<u64>>], e: u64) -> Result<(), GroupError> {
    let r = mult.len();
    let eu = e as usize;
    let n = cc.group_order() as i64;
    let phi = cyclotomic_poly(e as u32);
    let deg = phi.len() - 1;
    for a in 0..r {
        for b in a..r {
            let mut acc = vec![0i64; eu];
            for j in 0..cc.len() {
                let step = (e / orders[j]) as usize;
                let h = cc.size(j) as i64;
                let o = orders[j] as usize;
                for (k1, &m1) in mult[a][j].iter().enumerate().filter(|(_, &m)| m != 0) {
                    for (k2, &m2) in mult[b][j].iter().enumerate().filter(|(_, &m)| m != 0) {
                        // zeta_o^{k1} * conj(zeta_o^{k2}) = zeta_e^{step (k1 - k2)}
                        let k = ((k1 + o - k2) % o) * step;
                        acc[k] += h * (m1 * m2) as i64;
                    }
                }
            }
            for i in (deg..eu).rev() {
                let c = acc[i];
                if c != 0 {
                    acc[i] = 0;
                    for (jj, &pj) in phi.iter().enumerate().take(deg) {
                        acc[i - deg + jj] -= c * pj;
                    }
                }
            }
            let expected = if a == b { n } else { 0 };
            if acc[0] != expected || acc[1..].iter().any(|&c| c != 0) {
                return Err(GroupError::CharacterTable(format!(
                    "characters {a} and {b} fail orthogonality"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::{named, zero_fraction};
    use crate::rational::rat;

    fn check_table(g: &FiniteGroup) -> CharacterTable {
        let t = character_table_small(g).unwrap();
        assert_eq!(t.len(), conjugacy_classes(g).unwrap().len());
        for (i, x) in t.characters().iter().enumerate() {
            for (j, y) in t.characters().iter().enumerate() {
                let ip = inner_product(x, y).unwrap();
                let expected = if i == j { CycValue::one() } else { CycValue::zero() };
                assert_eq!(ip, expected, "{}: <chi_{i}, chi_{j}>", g.name());
            }
        }
        let sum: u64 = t.degrees().iter().map(|d| d * d).sum();
        assert_eq!(sum, g.order() as u64);
        assert!(t.characters()[0].values().iter().all(|v| *v == CycValue::one()));
        t
    }

    #[test]
    fn trivial_group_table() {
        let t = check_table(&named::trivial());
        assert_eq!(t.degrees(), vec![1]);
    }

    #[test]
    fn s3_degrees() {
        assert_eq!(check_table(&named::s3()).degrees(), vec![1, 1, 2]);
    }

    #[test]
    fn q8_table() {
        let g = named::q8();
        let t = check_table(&g);
        assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2]);
        let two_dim = &t.characters()[4];
        let center = crate::groupcore::center(&g).unwrap();
        for x in 0..g.order() {
            let v = two_dim.value_at(x);
            if center.contains(&x) {
                assert!(!v.is_zero());
            } else {
                assert!(v.is_zero());
            }
        }
        assert_eq!(zero_fraction(two_dim), rat(3, 4));
    }

    #[test]
    fn corpus_tables() {
        for g in [
            named::dihedral(4).unwrap(),
            named::cyclic(6).unwrap(),
            named::sl2f3(),
            named::heisenberg(3).unwrap(),
            named::dicyclic(3).unwrap(),
            named::dihedral(5).unwrap(),
            named::by_name("gl2fp:3").unwrap(),
        ] {
            check_table(&g);
        }
    }

    #[test]
    fn binary_tetrahedral_has_one_integer_two_dimensional_character() {
        let t = check_table(&named::sl2f3());
        assert_eq!(t.degrees(), vec![1, 1, 1, 2, 2, 2, 3]);
        let integral: Vec<_> = t
            .characters()
            .iter()
            .filter(|c| c.degree() == CycValue::from_int(2) && c.is_rational())
            .collect();
        assert_eq!(integral.len(), 1);
    }

    #[test]
    fn cyclic_group_values_are_roots_of_unity() {
        let g = named::cyclic(5).unwrap();
        let t = check_table(&g);
        for chi in t.characters() {
            for v in chi.values() {
                assert_eq!(&(v * &v.conj()), &CycValue::one());
            }
        }
    }

    #[test]
    fn modulus_choice() {
        // exponent 12, |G| = 24: 2 ceil(sqrt 24) = 10, least l = 1 mod 12 above is 13
        assert_eq!(choose_modulus(24, 12, 1000).unwrap(), 13);
        assert!(matches!(choose_modulus(24, 12, 12), Err(GroupError::NoSuitablePrime { .. })));
    }

    #[test]
    fn class_bound_enforced() {
        let g = named::cyclic(31).unwrap();
        assert!(matches!(character_table_small(&g), Err(GroupError::ClassCountExceeded { .. })));
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[0,3]] -> x^2 - 5x + 6 mod 7
        let p = charpoly(&[vec![2, 1], vec![0, 3]], 7);
        assert_eq!(p, vec![6, 2, 1]);
    }
}
