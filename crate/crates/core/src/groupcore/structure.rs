use std::collections::VecDeque;

use super::{conjugacy_classes, FiniteGroup, GroupError};
use crate::arith::lcm;
use crate::limits::limits;

fn ensure_enumerable(g: &FiniteGroup) -> Result<(), GroupError> {
    let bound = limits().max_enumeration_order;
    if g.order() as u64 > bound {
        return Err(GroupError::OrderBoundExceeded {
            order: g.order() as u64,
            bound,
        });
    }
    Ok(())
}

pub fn element_order(g: &FiniteGroup, x: usize) -> u64 {
    let e = g.identity();
    let mut y = x;
    let mut k = 1;
    while y != e {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

/// Least common multiple of the element orders.
pub fn exponent(g: &FiniteGroup) -> Result<u64, GroupError> {
    let cc = conjugacy_classes(g)?;
    Ok(cc
        .representatives()
        .iter()
        .fold(1, |acc, &r| lcm(acc, element_order(g, r))))
}

pub fn is_abelian(g: &FiniteGroup) -> bool {
    let gens = g.generators();
    gens.iter()
        .all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

/// Membership mask of the subgroup generated by `gens`.
fn generated(g: &FiniteGroup, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; g.order()];
    inside[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                queue.push_back(y);
            }
        }
    }
    inside
}

fn mask_to_elems(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(x, _)| x)
        .collect()
}

pub fn center(g: &FiniteGroup) -> Result<Vec<usize>, GroupError> {
    ensure_enumerable(g)?;
    let gens = g.generators();
    Ok((0..g.order())
        .filter(|&x| gens.iter().all(|&s| g.mul(x, s) == g.mul(s, x)))
        .collect())
}

/// Commutator subgroup: the normal closure of the commutators of generators.
pub fn derived_subgroup(g: &FiniteGroup) -> Result<Vec<usize>, GroupError> {
    ensure_enumerable(g)?;
    let gens = g.generators();
    let mut normal_gens: Vec<usize> = Vec::new();
    for &a in &gens {
        for &b in &gens {
            let c = g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)));
            if c != g.identity() {
                normal_gens.push(c);
            }
        }
    }
    let mut mask = generated(g, &normal_gens);
    loop {
        let mut grew = false;
        for x in mask_to_elems(&mask) {
            for &s in &gens {
                let c = g.conjugate(x, s);
                if !mask[c] {
                    normal_gens.push(c);
                    grew = true;
                }
            }
            if grew {
                break;
            }
        }
        if !grew {
            return Ok(mask_to_elems(&mask));
        }
        mask = generated(g, &normal_gens);
    }
}

/// `Z_0 = 1`, `Z_{i+1} = {x : [x, s] in Z_i for every generator s}`,
/// until the series stabilises. Returns the terms as element lists.
pub fn upper_central_series(g: &FiniteGroup) -> Result<Vec<Vec<usize>>, GroupError> {
    ensure_enumerable(g)?;
    let n = g.order();
    let gens: Vec<(usize, usize)> = g.generators().into_iter().map(|s| (s, g.inv(s))).collect();
    let mut current = vec![false; n];
    current[g.identity()] = true;
    let mut series = vec![mask_to_elems(&current)];
    loop {
        let next: Vec<bool> = (0..n)
            .map(|x| {
                let x_inv = g.inv(x);
                gens.iter()
                    .all(|&(s, s_inv)| current[g.mul(g.mul(x, s), g.mul(x_inv, s_inv))])
            })
            .collect();
        if next == current {
            return Ok(series);
        }
        series.push(mask_to_elems(&next));
        current = next;
    }
}

/// True iff the upper central series reaches the whole group.
pub fn is_nilpotent(g: &FiniteGroup) -> Result<bool, GroupError> {
    let series = upper_central_series(g)?;
    Ok(series.last().map(Vec::len) == Some(g.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::named;

    #[test]
    fn nilpotency_examples() {
        assert!(is_nilpotent(&named::trivial()).unwrap());
        assert!(is_nilpotent(&named::cyclic(12).unwrap()).unwrap());
        assert!(is_nilpotent(&named::q8()).unwrap());
        assert!(is_nilpotent(&named::dihedral(4).unwrap()).unwrap());
        assert!(is_nilpotent(&named::heisenberg(3).unwrap()).unwrap());
        assert!(!is_nilpotent(&named::s3()).unwrap());
        assert!(!is_nilpotent(&named::sl2f3()).unwrap());
        assert!(!is_nilpotent(&named::dihedral(3).unwrap()).unwrap());
    }

    #[test]
    fn q8_series() {
        let series = upper_central_series(&named::q8()).unwrap();
        let sizes: Vec<usize> = series.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 8]);
    }

    #[test]
    fn centers_and_commutators() {
        assert_eq!(center(&named::s3()).unwrap().len(), 1);
        assert_eq!(center(&named::sl2f3()).unwrap().len(), 2);
        assert_eq!(derived_subgroup(&named::sl2f3()).unwrap().len(), 8);
        assert_eq!(derived_subgroup(&named::s3()).unwrap().len(), 3);
        assert_eq!(derived_subgroup(&named::cyclic(6).unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn exponents() {
        assert_eq!(exponent(&named::sl2f3()).unwrap(), 12);
        assert_eq!(exponent(&named::q8()).unwrap(), 4);
        assert_eq!(exponent(&named::heisenberg(3).unwrap()).unwrap(), 3);
        assert!(is_abelian(&named::cyclic(6).unwrap()));
        assert!(!is_abelian(&named::q8()));
    }
}
