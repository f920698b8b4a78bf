use std::ops::Deref;
use std::sync::Arc;

use super::{table_group, FiniteGroup, GroupError, GroupKind, GroupOps};
use crate::limits::limits;

/// A homomorphism given by its values on element handles.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    map: Arc<Vec<usize>>,
}

impl GroupHom {
    /// Checks `map(x s) = map(x) map(s)` for every element `x` and every
    /// generator `s`, which forces the homomorphism property.
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Result<Self, GroupError> {
        let n = source.order();
        let bound = limits().max_enumeration_order;
        if n as u64 > bound {
            return Err(GroupError::OrderBoundExceeded { order: n as u64, bound });
        }
        if map.len() != n {
            return Err(GroupError::NotHomomorphism(format!("{} values for {} elements", map.len(), n)));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.order()) {
            return Err(GroupError::NotHomomorphism(format!("value {bad} outside {}", target.name())));
        }
        if map[source.identity()] != target.identity() {
            return Err(GroupError::NotHomomorphism("identity not preserved".into()));
        }
        for s in source.generators() {
            for x in 0..n {
                if map[source.mul(x, s)] != target.mul(map[x], map[s]) {
                    return Err(GroupError::NotHomomorphism(format!(
                        "f({} * {}) != f({}) * f({})",
                        source.label(x),
                        source.label(s),
                        source.label(x),
                        source.label(s)
                    )));
                }
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            map: Arc::new(map),
        })
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in self.map.iter() {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn kernel(&self) -> Vec<usize> {
        let e = self.target.identity();
        (0..self.source.order()).filter(|&x| self.map[x] == e).collect()
    }

    /// `other o self`
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.target != other.source {
            return Err(GroupError::GroupMismatch(
                self.target.name().to_string(),
                other.source.name().to_string(),
            ));
        }
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: Arc::new(map),
        })
    }
}

/// A surjective homomorphism.
#[derive(Clone, Debug)]
pub struct QuotientMap(GroupHom);

impl QuotientMap {
    pub fn new(hom: GroupHom) -> Result<Self, GroupError> {
        if !hom.is_surjective() {
            return Err(GroupError::NotSurjective(hom.target.name().to_string()));
        }
        Ok(QuotientMap(hom))
    }

    /// The map onto the trivial group.
    pub fn to_trivial(source: &FiniteGroup) -> Result<Self, GroupError> {
        let trivial = super::named::trivial();
        let hom = GroupHom::new(source, &trivial, vec![trivial.identity(); source.order()])?;
        QuotientMap::new(hom)
    }

    pub fn hom(&self) -> &GroupHom {
        &self.0
    }

    /// `other o self`, still surjective.
    pub fn then(&self, other: &QuotientMap) -> Result<QuotientMap, GroupError> {
        Ok(QuotientMap(self.0.then(&other.0)?))
    }
}

impl Deref for QuotientMap {
    type Target = GroupHom;

    fn deref(&self) -> &GroupHom {
        &self.0
    }
}

struct ProductOps {
    left: FiniteGroup,
    right: FiniteGroup,
    right_order: usize,
}

impl GroupOps for ProductOps {
    fn order(&self) -> usize {
        self.left.order() * self.right_order
    }

    fn identity(&self) -> usize {
        self.left.identity() * self.right_order + self.right.identity()
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        let n = self.right_order;
        self.left.mul(a / n, b / n) * n + self.right.mul(a % n, b % n)
    }

    fn inv(&self, a: usize) -> usize {
        let n = self.right_order;
        self.left.inv(a / n) * n + self.right.inv(a % n)
    }

    fn generators(&self) -> Vec<usize> {
        let n = self.right_order;
        let mut gens: Vec<usize> = self
            .left
            .generators()
            .into_iter()
            .map(|g| g * n + self.right.identity())
            .collect();
        gens.extend(
            self.right
                .generators()
                .into_iter()
                .map(|h| self.left.identity() * n + h),
        );
        gens
    }

    fn label(&self, a: usize) -> String {
        let n = self.right_order;
        format!("({}, {})", self.left.label(a / n), self.right.label(a % n))
    }
}

/// `G x H`, represented lazily: elements are never materialised, and
/// conjugacy classes are pairs of classes of the factors.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let bound = limits().max_product_order;
    let order = (g.order() as u64)
        .checked_mul(h.order() as u64)
        .filter(|&o| o <= bound)
        .ok_or(GroupError::OrderOverflow { bound })?;
    debug_assert!(order <= usize::MAX as u64);
    let ops = ProductOps {
        left: g.clone(),
        right: h.clone(),
        right_order: h.order(),
    };
    Ok(FiniteGroup::new(
        format!("{} x {}", g.name(), h.name()),
        Arc::new(ops),
        GroupKind::DirectProduct(g.clone(), h.clone()),
    ))
}

/// A subgroup stored as the sorted list of its elements in the parent.
struct SubgroupOps {
    parent: FiniteGroup,
    elems: Vec<usize>,
    gens: Vec<usize>,
    identity: usize,
}

impl SubgroupOps {
    #[inline]
    fn local(&self, parent_elem: usize) -> Option<usize> {
        self.elems.binary_search(&parent_elem).ok()
    }
}

impl GroupOps for SubgroupOps {
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let p = self.parent.mul(self.elems[a], self.elems[b]);
        self.local(p).expect("subgroup closed under multiplication")
    }

    fn inv(&self, a: usize) -> usize {
        self.local(self.parent.inv(self.elems[a])).expect("subgroup closed under inverses")
    }

    fn generators(&self) -> Vec<usize> {
        self.gens.clone()
    }

    fn label(&self, a: usize) -> String {
        self.parent.label(self.elems[a])
    }
}

/// The subgroup of `parent` with the given elements; fails unless they
/// form a subgroup. Returns the group and the element list (local handle
/// `i` is parent element `elems[i]`).
pub(crate) fn subgroup(parent: &FiniteGroup, name: String, mut elems: Vec<usize>) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
    elems.sort_unstable();
    elems.dedup();
    let identity = elems
        .binary_search(&parent.identity())
        .map_err(|_| GroupError::InvalidParameter("subset does not contain the identity".into()))?;
    let n = elems.len();
    if !parent.order().is_multiple_of(n) {
        return Err(GroupError::InvalidParameter(format!("{n} does not divide {}", parent.order())));
    }
    // Greedy generators; every product must stay inside the subset.
    let mut reached = vec![false; n];
    reached[identity] = true;
    let mut gens: Vec<usize> = Vec::new();
    for cand in 0..n {
        if reached[cand] {
            continue;
        }
        gens.push(cand);
        let mut queue: Vec<usize> = (0..n).filter(|&x| reached[x]).collect();
        reached[cand] = true;
        queue.push(cand);
        while let Some(x) = queue.pop() {
            for &s in &gens {
                let p = parent.mul(elems[x], elems[s]);
                let y = elems
                    .binary_search(&p)
                    .map_err(|_| GroupError::InvalidParameter("subset not closed under multiplication".into()))?;
                if !reached[y] {
                    reached[y] = true;
                    queue.push(y);
                }
            }
        }
    }
    let ops = SubgroupOps {
        parent: parent.clone(),
        elems: elems.clone(),
        gens,
        identity,
    };
    Ok((FiniteGroup::new(name, Arc::new(ops), GroupKind::Generic), elems))
}

/// `G / N` for a normal subgroup `N` given by its elements.
pub fn quotient(g: &FiniteGroup, normal: &[usize], name: impl Into<String>) -> Result<QuotientMap, GroupError> {
    let n = g.order();
    let bound = limits().max_enumeration_order;
    if n as u64 > bound {
        return Err(GroupError::OrderBoundExceeded { order: n as u64, bound });
    }
    let mut in_n = vec![false; n];
    for &x in normal {
        in_n[x] = true;
    }
    let k = in_n.iter().filter(|&&b| b).count();
    if k == 0 || !in_n[g.identity()] || !n.is_multiple_of(k) {
        return Err(GroupError::InvalidParameter("not a subgroup".into()));
    }
    let members: Vec<usize> = (0..n).filter(|&x| in_n[x]).collect();
    for &a in &members {
        for s in g.generators() {
            if !in_n[g.conjugate(a, s)] {
                return Err(GroupError::InvalidParameter("subgroup is not normal".into()));
            }
        }
        if members.len() <= 4096 {
            for &b in &members {
                if !in_n[g.mul(a, b)] {
                    return Err(GroupError::InvalidParameter("subset not closed under multiplication".into()));
                }
            }
        }
    }
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &m in &members {
            coset[g.mul(x, m)] = c;
        }
    }
    let m = reps.len();
    let table_bound = limits().max_table_order;
    if m as u64 > table_bound {
        return Err(GroupError::OrderBoundExceeded { order: m as u64, bound: table_bound });
    }
    let labels = reps.iter().map(|&r| format!("{}N", g.label(r))).collect();
    let target = table_group(name.into(), m, |a, b| coset[g.mul(reps[a], reps[b])], labels)?;
    QuotientMap::new(GroupHom::new(g, &target, coset)?)
}

/// `G x_Q H` together with its two projections.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub group: FiniteGroup,
    pub left: GroupHom,
    pub right: GroupHom,
}

/// `{(x, y) : qg(x) = qh(y)}` inside `G x H`.
pub fn fiber_product(g: &FiniteGroup, h: &FiniteGroup, qg: &QuotientMap, qh: &QuotientMap) -> Result<FiberProduct, GroupError> {
    if qg.source() != g {
        return Err(GroupError::GroupMismatch(qg.source().name().into(), g.name().into()));
    }
    if qh.source() != h {
        return Err(GroupError::GroupMismatch(qh.source().name().into(), h.name().into()));
    }
    if qg.target() != qh.target() {
        return Err(GroupError::MismatchedTargets(
            qg.target().name().into(),
            qh.target().name().into(),
        ));
    }
    let ambient = direct_product(g, h)?;
    let target_order = qg.target().order();
    let mut fibres: Vec<Vec<usize>> = vec![Vec::new(); target_order];
    for y in 0..h.order() {
        fibres[qh.apply(y)].push(y);
    }
    let size: u64 = (0..g.order()).map(|x| fibres[qg.apply(x)].len() as u64).sum();
    let bound = limits().max_enumeration_order;
    if size > bound {
        return Err(GroupError::OrderBoundExceeded { order: size, bound });
    }
    let hn = h.order();
    let elems: Vec<usize> = (0..g.order())
        .flat_map(|x| fibres[qg.apply(x)].iter().map(move |&y| x * hn + y))
        .collect();
    let name = format!("{} x_{} {}", g.name(), qg.target().name(), h.name());
    let (group, elems) = subgroup(&ambient, name, elems)?;
    let left = GroupHom::new(&group, g, elems.iter().map(|&e| e / hn).collect())?;
    let right = GroupHom::new(&group, h, elems.iter().map(|&e| e % hn).collect())?;
    Ok(FiberProduct { group, left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::{conjugacy_classes, conjugacy_classes_by_orbits, derived_subgroup, named};

    #[test]
    fn product_with_trivial_keeps_order() {
        let g = named::sl2f3();
        let p = direct_product(&g, &named::trivial()).unwrap();
        assert_eq!(p.order(), 24);
        let sq = direct_product(&g, &g).unwrap();
        assert_eq!(sq.order(), 576);
    }

    #[test]
    fn product_classes_are_pairs() {
        let g = named::sl2f3();
        let sq = direct_product(&g, &g).unwrap();
        let classwise = conjugacy_classes(&sq).unwrap();
        assert_eq!(classwise.len(), 49);
        let brute = conjugacy_classes_by_orbits(&sq).unwrap();
        assert_eq!(brute.len(), 49);
        assert_eq!(classwise.representatives(), brute.representatives());
        assert_eq!(classwise.sizes(), brute.sizes());
        for x in 0..sq.order() {
            assert_eq!(classwise.class_of(x), brute.class_of(x));
        }
    }

    #[test]
    fn product_order_overflow() {
        let g = named::cyclic(1000).unwrap();
        let mut p = g.clone();
        let mut failed = false;
        for _ in 0..8 {
            match direct_product(&p, &g) {
                Ok(next) => p = next,
                Err(GroupError::OrderOverflow { .. }) => {
                    failed = true;
                    break;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(failed);
    }

    #[test]
    fn fiber_products_of_binary_tetrahedral() {
        let g = named::sl2f3();
        let to_c3 = quotient(&g, &derived_subgroup(&g).unwrap(), "C3").unwrap();
        assert_eq!(to_c3.target().order(), 3);
        let fp = fiber_product(&g, &g, &to_c3, &to_c3).unwrap();
        assert_eq!(fp.group.order(), 192);

        let z = crate::groupcore::center(&g).unwrap();
        let to_a4 = quotient(&g, &z, "A4").unwrap();
        let fp = fiber_product(&g, &g, &to_a4, &to_a4).unwrap();
        assert_eq!(fp.group.order(), 48);

        let triv = QuotientMap::to_trivial(&g).unwrap();
        let fp = fiber_product(&g, &g, &triv, &triv).unwrap();
        assert_eq!(fp.group.order(), 576);
    }

    #[test]
    fn fiber_product_rejects_mismatched_targets() {
        let g = named::sl2f3();
        let a = quotient(&g, &derived_subgroup(&g).unwrap(), "C3").unwrap();
        let b = quotient(&g, &derived_subgroup(&g).unwrap(), "C3'").unwrap();
        assert!(matches!(
            fiber_product(&g, &g, &a, &b),
            Err(GroupError::MismatchedTargets(..))
        ));
    }

    #[test]
    fn non_surjective_map_rejected() {
        let c2 = named::cyclic(2).unwrap();
        let s3 = named::s3();
        // trivial map into S3 is a homomorphism but not onto
        let hom = GroupHom::new(&c2, &s3, vec![s3.identity(); 2]).unwrap();
        assert!(matches!(QuotientMap::new(hom), Err(GroupError::NotSurjective(_))));
    }

    #[test]
    fn non_homomorphism_rejected() {
        let c4 = named::cyclic(4).unwrap();
        let c2 = named::cyclic(2).unwrap();
        let gen = c4.generators()[0];
        let mut map = vec![c2.identity(); 4];
        map[gen] = c2.generators()[0];
        assert!(matches!(GroupHom::new(&c4, &c2, map), Err(GroupError::NotHomomorphism(_))));
    }
}
