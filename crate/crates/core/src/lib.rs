//! Exact matching densities and zero-trace densities for representations
//! of finite Galois groups, with constructive planners that approximate a
//! target density, and empirical Chebotarev checks from elliptic curves and
//! Dirichlet characters.
//!
//! * [`groupcore`]: finite groups, conjugacy classes, class functions,
//!   products and small character tables.
//! * [`gl2fp`]: GL2(F_p), its class types and the Steinberg character.
//! * [`density`]: window densities, twists and approximation planners.
//! * [`dirichletden`]: Dirichlet characters, exact matching densities and
//!   density estimators over primes.
//! * [`ellstat`]: Frobenius class statistics of elliptic curves.
//! * [`sieveshift`]: admissible shifts of quadratics and almost-prime scans.
//! * [`verify`]: end-to-end reproduction checks behind `matchdens verify-all`.

pub mod arith;
pub mod density;
pub mod dirichletden;
pub mod ellstat;
pub mod gl2fp;
pub mod groupcore;
pub mod limits;
pub mod rational;
pub mod sieveshift;
pub mod verify;

pub use rational::Rational;
