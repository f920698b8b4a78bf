use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{conjugacy_classes, direct_product, ConjClassPartition, CycValue, FiniteGroup, GroupError, GroupHom};
use crate::rational::Rational;

/// A function on a group that is constant on conjugacy classes; traces of
/// Frobenius are class functions on the Galois group.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    group: FiniteGroup,
    classes: Arc<ConjClassPartition>,
    values: Vec<CycValue>,
}

impl ClassFunction {
    /// `values[c]` is the value on class `c` of `conjugacy_classes(group)`.
    pub fn new(group: &FiniteGroup, values: Vec<CycValue>) -> Result<Self, GroupError> {
        let classes = conjugacy_classes(group)?;
        if values.len() != classes.len() {
            return Err(GroupError::InvalidParameter(format!(
                "{} values for {} classes of {}",
                values.len(),
                classes.len(),
                group.name()
            )));
        }
        Ok(ClassFunction {
            group: group.clone(),
            classes,
            values,
        })
    }

    /// Evaluates `f` on one representative per class.
    pub fn from_representatives(group: &FiniteGroup, f: impl Fn(usize) -> CycValue) -> Result<Self, GroupError> {
        let classes = conjugacy_classes(group)?;
        let values = classes.representatives().iter().map(|&r| f(r)).collect();
        Ok(ClassFunction {
            group: group.clone(),
            classes,
            values,
        })
    }

    pub fn constant(group: &FiniteGroup, value: CycValue) -> Result<Self, GroupError> {
        Self::from_representatives(group, |_| value.clone())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn classes(&self) -> &Arc<ConjClassPartition> {
        &self.classes
    }

    pub fn values(&self) -> &[CycValue] {
        &self.values
    }

    pub fn value_on_class(&self, class: usize) -> &CycValue {
        &self.values[class]
    }

    pub fn value_at(&self, element: usize) -> &CycValue {
        &self.values[self.classes.class_of(element)]
    }

    /// Value at the identity; the degree when this is a character.
    pub fn degree(&self) -> CycValue {
        self.value_at(self.group.identity()).clone()
    }

    /// Whether every value is rational.
    pub fn is_rational(&self) -> bool {
        self.values.iter().all(|v| v.as_rational().is_some())
    }

    /// `x o hom`, a class function on the source of `hom`.
    pub fn pull_back(&self, hom: &GroupHom) -> Result<ClassFunction, GroupError> {
        if hom.target() != &self.group {
            return Err(GroupError::GroupMismatch(
                hom.target().name().to_string(),
                self.group.name().to_string(),
            ));
        }
        ClassFunction::from_representatives(hom.source(), |r| self.value_at(hom.apply(r)).clone())
    }

    /// Outer tensor product on `G x H`, computed class by class.
    pub fn outer_product(&self, other: &ClassFunction) -> Result<ClassFunction, GroupError> {
        let group = direct_product(&self.group, &other.group)?;
        let values = self
            .values
            .iter()
            .flat_map(|a| other.values.iter().map(move |b| a * b))
            .collect();
        ClassFunction::new(&group, values)
    }

    fn ensure_same_group(&self, other: &ClassFunction) -> Result<(), GroupError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch(
                self.group.name().to_string(),
                other.group.name().to_string(),
            ));
        }
        Ok(())
    }
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.values == other.values
    }
}

fn fraction(count: u64, order: u64) -> Rational {
    Rational::new(BigInt::from(count), BigInt::from(order))
}

/// Exact proportion of group elements on which `x` and `y` agree.
pub fn matching_fraction(x: &ClassFunction, y: &ClassFunction) -> Result<Rational, GroupError> {
    x.ensure_same_group(y)?;
    let agree: u64 = x
        .values
        .iter()
        .zip(&y.values)
        .zip(x.classes.sizes())
        .filter(|((a, b), _)| a == b)
        .map(|(_, &s)| s)
        .sum();
    Ok(fraction(agree, x.classes.group_order()))
}

/// Exact proportion of group elements on which `x` vanishes.
pub fn zero_fraction(x: &ClassFunction) -> Rational {
    let zeros: u64 = x
        .values
        .iter()
        .zip(x.classes.sizes())
        .filter(|(v, _)| v.is_zero())
        .map(|(_, &s)| s)
        .sum();
    let out = fraction(zeros, x.classes.group_order());
    debug_assert!(out >= Rational::zero());
    out
}
