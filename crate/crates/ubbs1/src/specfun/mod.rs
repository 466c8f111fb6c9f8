//! Self-contained special functions and quadrature.
//!
//! Everything here is pure and reentrant: no interior mutability beyond a
//! lock-guarded rule cache, safe to call from any number of threads.

mod bessel;
mod erf;
pub(crate) mod polygamma;
mod quad;

pub use bessel::bessel_k_scaled;
pub(crate) use bessel::{k0_scaled, k1_scaled};
pub use erf::{erf, erfc, std_normal_cdf, std_normal_pdf};
pub use quad::{gauss_hermite_rule, integrate_adaptive, QuadratureRule, RuleKind};
pub(crate) use quad::cached_hermite;
