//! Work bounds. Every bound can be overridden from the environment with
//! `MATCHDENS_<FIELD>` (e.g. `MATCHDENS_PLANNER_MAX_PRIME=20000000`).

use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest group whose elements are enumerated (class computation, homomorphisms).
    pub max_enumeration_order: u64,
    /// Largest group stored as a dense multiplication table.
    pub max_table_order: u64,
    /// Largest group checked exhaustively for the group axioms.
    pub max_validate_order: u64,
    /// Largest order accepted for a lazily represented direct product.
    pub max_product_order: u64,
    pub chartable_max_order: u64,
    pub chartable_max_classes: u64,
    /// Search bound for the auxiliary prime of the character-table method.
    pub chartable_max_modulus: u64,
    /// Largest `p` for which GL2(F_p) is enumerated element by element.
    pub gl2_max_p: u64,
    /// Largest prime a density planner may place in a window.
    pub planner_max_prime: u64,
    /// Number of windows tried when an exact (`eps = 0`) hit is requested.
    pub planner_exact_search: u64,
    pub shift_max_t: u64,
    pub scan_max_n: u64,
    /// Values wider than this are reported unresolved rather than factored.
    pub factor_max_bits: u64,
    /// Pollard rho iteration budget per value.
    pub rho_max_iterations: u64,
    pub ell_max_q: u64,
    pub dirichlet_max_x: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enumeration_order: 1_000_000,
            max_table_order: 4096,
            max_validate_order: 10_000,
            max_product_order: 1_000_000_000_000_000_000,
            chartable_max_order: 2000,
            chartable_max_classes: 30,
            chartable_max_modulus: 10_000_000,
            gl2_max_p: 31,
            planner_max_prime: 10_000_000,
            planner_exact_search: 2000,
            shift_max_t: 2000,
            scan_max_n: 10_000_000,
            factor_max_bits: 160,
            rho_max_iterations: 200_000,
            ell_max_q: 20_000_000,
            dirichlet_max_x: 100_000_000,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        let read = |name: &str, slot: &mut u64| {
            if let Ok(v) = std::env::var(format!("MATCHDENS_{name}")) {
                if let Ok(v) = v.trim().replace('_', "").parse::<u64>() {
                    *slot = v;
                }
            }
        };
        read("MAX_ENUMERATION_ORDER", &mut l.max_enumeration_order);
        read("MAX_TABLE_ORDER", &mut l.max_table_order);
        read("MAX_VALIDATE_ORDER", &mut l.max_validate_order);
        read("MAX_PRODUCT_ORDER", &mut l.max_product_order);
        read("CHARTABLE_MAX_ORDER", &mut l.chartable_max_order);
        read("CHARTABLE_MAX_CLASSES", &mut l.chartable_max_classes);
        read("CHARTABLE_MAX_MODULUS", &mut l.chartable_max_modulus);
        read("GL2_MAX_P", &mut l.gl2_max_p);
        read("PLANNER_MAX_PRIME", &mut l.planner_max_prime);
        read("PLANNER_EXACT_SEARCH", &mut l.planner_exact_search);
        read("SHIFT_MAX_T", &mut l.shift_max_t);
        read("SCAN_MAX_N", &mut l.scan_max_n);
        read("FACTOR_MAX_BITS", &mut l.factor_max_bits);
        read("RHO_MAX_ITERATIONS", &mut l.rho_max_iterations);
        read("ELL_MAX_Q", &mut l.ell_max_q);
        read("DIRICHLET_MAX_X", &mut l.dirichlet_max_x);
        l
    }
}

static LIMITS: OnceLock<Limits> = OnceLock::new();

/// Process-wide limits, read from the environment on first use.
pub fn limits() -> &'static Limits {
    LIMITS.get_or_init(Limits::from_env)
}
