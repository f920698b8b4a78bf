//! JSON documents for groups and class functions. Rationals are always
//! `{"num", "den"}` strings; cyclotomic values carry their conductor and
//! reduced power-basis coefficients.

use serde::{Deserialize, Serialize};

use super::{conjugacy_classes, ClassFunction, CycValue, FiniteGroup, GroupError};
use crate::rational::{Rational, RationalDoc};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycValueDoc {
    pub conductor: u32,
    pub coeffs: Vec<RationalDoc>,
}

impl From<&CycValue> for CycValueDoc {
    fn from(v: &CycValue) -> Self {
        CycValueDoc {
            conductor: v.conductor(),
            coeffs: v.coeffs().iter().map(RationalDoc::from).collect(),
        }
    }
}

impl TryFrom<&CycValueDoc> for CycValue {
    type Error = GroupError;

    fn try_from(doc: &CycValueDoc) -> Result<Self, GroupError> {
        if doc.conductor == 0 {
            return Err(GroupError::InvalidParameter("conductor 0".into()));
        }
        let coeffs = doc
            .coeffs
            .iter()
            .map(|c| Rational::try_from(c).map_err(|e| GroupError::InvalidParameter(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycValue::from_coeffs(doc.conductor, coeffs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub index: usize,
    pub representative: usize,
    pub label: String,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub name: String,
    pub order: u64,
    pub classes: Vec<ClassDoc>,
}

impl GroupDoc {
    pub fn new(g: &FiniteGroup) -> Result<Self, GroupError> {
        let cc = conjugacy_classes(g)?;
        let classes = (0..cc.len())
            .map(|i| ClassDoc {
                index: i,
                representative: cc.representative(i),
                label: g.label(cc.representative(i)),
                size: cc.size(i),
            })
            .collect();
        Ok(GroupDoc {
            name: g.name().to_string(),
            order: g.order() as u64,
            classes,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFunctionDoc {
    pub group: GroupDoc,
    /// `values[i]` is the value on `group.classes[i]`.
    pub values: Vec<CycValueDoc>,
}

impl ClassFunctionDoc {
    pub fn new(f: &ClassFunction) -> Result<Self, GroupError> {
        Ok(ClassFunctionDoc {
            group: GroupDoc::new(f.group())?,
            values: f.values().iter().map(CycValueDoc::from).collect(),
        })
    }

    /// Rebuilds the class function on `g`, checking that the document's
    /// classes match the group's.
    pub fn to_class_function(&self, g: &FiniteGroup) -> Result<ClassFunction, GroupError> {
        let current = GroupDoc::new(g)?;
        if current.order != self.group.order || current.classes.len() != self.group.classes.len() {
            return Err(GroupError::GroupMismatch(self.group.name.clone(), g.name().to_string()));
        }
        let cc = conjugacy_classes(g)?;
        let mut values = vec![CycValue::zero(); cc.len()];
        for (class, v) in self.group.classes.iter().zip(&self.values) {
            if class.representative >= g.order() {
                return Err(GroupError::GroupMismatch(self.group.name.clone(), g.name().to_string()));
            }
            values[cc.class_of(class.representative)] = CycValue::try_from(v)?;
        }
        ClassFunction::new(g, values)
    }
}
