use std::collections::VecDeque;
use std::sync::Arc;

use super::{FiniteGroup, GroupError, GroupKind};
use crate::limits::limits;

/// Partition of a group into conjugacy classes, ordered by the least
/// element handle of each class (which is also the representative).
#[derive(Debug)]
pub struct ConjClassPartition {
    reps: Vec<usize>,
    sizes: Vec<u64>,
    lookup: ClassLookup,
}

#[derive(Debug)]
enum ClassLookup {
    Dense(Vec<u32>),
    /// Classes of `G x H` are pairs of classes; index `i * |classes(H)| + j`.
    Product {
        left: Arc<ConjClassPartition>,
        right: Arc<ConjClassPartition>,
        right_order: usize,
    },
}

impl ConjClassPartition {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative(&self, class: usize) -> usize {
        self.reps[class]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn size(&self, class: usize) -> u64 {
        self.sizes[class]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn group_order(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Index of the class containing element `x`.
    pub fn class_of(&self, x: usize) -> usize {
        match &self.lookup {
            ClassLookup::Dense(t) => t[x] as usize,
            ClassLookup::Product {
                left,
                right,
                right_order,
            } => left.class_of(x / right_order) * right.len() + right.class_of(x % right_order),
        }
    }

    /// Elements of a class, in increasing order.
    pub fn members(&self, class: usize) -> Vec<usize> {
        match &self.lookup {
            ClassLookup::Dense(t) => t
                .iter()
                .enumerate()
                .filter(|(_, &c)| c as usize == class)
                .map(|(x, _)| x)
                .collect(),
            ClassLookup::Product {
                left,
                right,
                right_order,
            } => {
                let (i, j) = (class / right.len(), class % right.len());
                let rm = right.members(j);
                left.members(i)
                    .into_iter()
                    .flat_map(|a| rm.iter().map(move |&b| a * right_order + b))
                    .collect()
            }
        }
    }

    fn product(left: Arc<ConjClassPartition>, right: Arc<ConjClassPartition>, right_order: usize) -> Self {
        let mut reps = Vec::with_capacity(left.len() * right.len());
        let mut sizes = Vec::with_capacity(left.len() * right.len());
        for i in 0..left.len() {
            for j in 0..right.len() {
                reps.push(left.reps[i] * right_order + right.reps[j]);
                sizes.push(left.sizes[i] * right.sizes[j]);
            }
        }
        ConjClassPartition {
            reps,
            sizes,
            lookup: ClassLookup::Product {
                left,
                right,
                right_order,
            },
        }
    }
}

/// Conjugacy classes of `g`, computed once and cached on the group.
///
/// Direct products are handled class-wise from their factors, so their
/// order is not limited by the enumeration bound.
pub fn conjugacy_classes(g: &FiniteGroup) -> Result<Arc<ConjClassPartition>, GroupError> {
    g.0.classes
        .get_or_init(|| match g.kind() {
            GroupKind::DirectProduct(left, right) => {
                let l = conjugacy_classes(left)?;
                let r = conjugacy_classes(right)?;
                Ok(Arc::new(ConjClassPartition::product(l, r, right.order())))
            }
            _ => {
                g.validate()?;
                conjugacy_classes_by_orbits(g).map(Arc::new)
            }
        })
        .clone()
}

/// Orbit enumeration under conjugation by the generators, ignoring any
/// known structure. Classes come out ordered by least element.
pub fn conjugacy_classes_by_orbits(g: &FiniteGroup) -> Result<ConjClassPartition, GroupError> {
    let n = g.order();
    let bound = limits().max_enumeration_order;
    if n as u64 > bound {
        return Err(GroupError::OrderBoundExceeded { order: n as u64, bound });
    }
    let gens: Vec<(usize, usize)> = g.generators().into_iter().map(|s| (s, g.inv(s))).collect();
    let mut class_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for x in 0..n {
        if class_of[x] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        class_of[x] = c;
        let mut size = 1u64;
        queue.push_back(x);
        while let Some(y) = queue.pop_front() {
            for &(s, s_inv) in &gens {
                let z = g.mul(g.mul(s, y), s_inv);
                if class_of[z] == u32::MAX {
                    class_of[z] = c;
                    size += 1;
                    queue.push_back(z);
                }
            }
        }
        sizes.push(size);
    }
    Ok(ConjClassPartition {
        reps,
        sizes,
        lookup: ClassLookup::Dense(class_of),
    })
}
