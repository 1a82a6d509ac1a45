//! Exact-arithmetic feasibility sieve: cyclotomic group-order formulas,
//! divisor certificates from polynomial Bezout identities, and the
//! feasible-pair scans that exclude exceptional-group candidates.

pub mod bounds;
pub mod cases;
pub mod cyclotomic;
pub mod formula;
pub mod pairs;
pub mod poly;
pub mod xgcd;

pub use bounds::{check_gl_gu_bounds, gl_order, gu_order, LinearKind};
pub use cases::{find_case, load_cases, parse_cases, run_case, verify_certificate, CaseReport};
pub use cyclotomic::{cyclotomic, phi_eval};
pub use formula::PhiProduct;
pub use pairs::{decompositions, feasible_decompositions, intrinsic_ok};
pub use poly::IntPoly;
pub use xgcd::poly_xgcd_cert;
