//! Densities realised by explicit group constructions rather than by prime
//! windows: the binary tetrahedral pairs, Serre's twisted family and single
//! Steinberg characters.

use num_bigint::BigInt;
use num_traits::One;

use super::planner::PlanMode;
use super::{twist_density, DensityError};
use crate::arith::is_prime_u64;
use crate::gl2fp::steinberg_character;
use crate::groupcore::{
    character_table_small, derived_subgroup, fiber_product, matching_fraction, named, quotient, zero_fraction, ClassFunction, CycValue,
    FiniteGroup, GroupError, QuotientMap,
};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: String,
    pub mode: PlanMode,
    /// A matching density for matching presets; the zero-trace density for
    /// zero presets.
    pub value: Rational,
    pub description: String,
}

/// Name patterns accepted by [`preset`].
pub fn preset_names() -> &'static [&'static str] {
    &["tetrahedral-17-32", "tetrahedral-direct", "serre-k:<k>", "steinberg:<p>"]
}

pub fn preset(name: &str) -> Result<Preset, DensityError> {
    let (head, param) = match name.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (name, None),
    };
    let parse = |text: &str| text.parse::<u64>().map_err(|_| DensityError::UnknownPreset(name.to_string()));
    match (head, param) {
        ("tetrahedral-17-32", None) => Ok(Preset {
            name: name.to_string(),
            mode: PlanMode::Matching,
            value: tetrahedral_matching_density()?,
            description: "integer-valued 2-dimensional characters of SL2(F3) on the fiber product over the C3 quotient".into(),
        }),
        ("tetrahedral-direct", None) => Ok(Preset {
            name: name.to_string(),
            mode: PlanMode::Matching,
            value: tetrahedral_direct_product_density()?,
            description: "integer-valued 2-dimensional characters of SL2(F3) on the full direct product".into(),
        }),
        ("serre-k", Some(k)) => {
            let k = parse(k)?;
            if k == 0 {
                return Err(DensityError::UnknownPreset(name.to_string()));
            }
            let k2 = BigInt::from(k) * BigInt::from(k);
            let w = Rational::one() - Rational::new(BigInt::one(), k2);
            Ok(Preset {
                name: name.to_string(),
                mode: PlanMode::Matching,
                value: twist_density(&w, 2)?,
                description: format!("dimension-{k} representation with zero density 1 - 1/{k}^2 and its quadratic twist"),
            })
        }
        ("steinberg", Some(p)) => {
            let p = parse(p)?;
            if !is_prime_u64(p) {
                return Err(DensityError::UnknownPreset(name.to_string()));
            }
            let st = steinberg_character(p).map_err(|e| DensityError::InvalidWindow(e.to_string()))?;
            Ok(Preset {
                name: name.to_string(),
                mode: PlanMode::Zero,
                value: zero_fraction(&st),
                description: format!("Steinberg character of GL2(F{p})"),
            })
        }
        _ => Err(DensityError::UnknownPreset(name.to_string())),
    }
}

/// The unique 2-dimensional irreducible character of SL2(F3) with integer
/// values.
fn integer_two_dimensional(g: &FiniteGroup) -> Result<ClassFunction, GroupError> {
    let table = character_table_small(g)?;
    let two = CycValue::from_int(2);
    let found: Vec<&ClassFunction> = table
        .characters()
        .iter()
        .filter(|c| c.degree() == two && c.is_rational())
        .collect();
    match found[..] {
        [chi] => Ok(chi.clone()),
        _ => Err(GroupError::CharacterTable(format!(
            "expected exactly one integer-valued 2-dimensional character, found {}",
            found.len()
        ))),
    }
}

fn tetrahedral_over(to_quotient: impl Fn(&FiniteGroup) -> Result<QuotientMap, GroupError>) -> Result<Rational, GroupError> {
    let g = named::sl2f3();
    let rho = integer_two_dimensional(&g)?;
    let q = to_quotient(&g)?;
    let fp = fiber_product(&g, &g, &q, &q)?;
    let rho1 = rho.pull_back(&fp.left)?;
    let rho2 = rho.pull_back(&fp.right)?;
    matching_fraction(&rho1, &rho2)
}

/// Matching density of the two pulled-back integer characters on
/// `SL2(F3) x_{C3} SL2(F3)`: 17/32.
pub fn tetrahedral_matching_density() -> Result<Rational, GroupError> {
    tetrahedral_over(|g| quotient(g, &derived_subgroup(g)?, "C3"))
}

/// Same characters on the full direct product: 83/288.
pub fn tetrahedral_direct_product_density() -> Result<Rational, GroupError> {
    tetrahedral_over(QuotientMap::to_trivial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn tetrahedral_values() {
        assert_eq!(tetrahedral_matching_density().unwrap(), rat(17, 32));
        assert_eq!(tetrahedral_direct_product_density().unwrap(), rat(83, 288));
    }

    #[test]
    fn serre_presets() {
        assert_eq!(preset("serre-k:2").unwrap().value, rat(7, 8));
        assert_eq!(preset("serre-k:3").unwrap().value, rat(17, 18));
        assert!(preset("serre-k:0").is_err());
    }

    #[test]
    fn steinberg_preset() {
        let p = preset("steinberg:5").unwrap();
        assert_eq!(p.value, rat(1, 5));
        assert_eq!(p.mode, PlanMode::Zero);
        assert!(preset("steinberg:6").is_err());
        assert!(matches!(preset("nope"), Err(DensityError::UnknownPreset(_))));
    }
}
