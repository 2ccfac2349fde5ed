//! Shared numerical kernels: Gauss–Legendre quadrature and polynomial roots.

mod quadrature;
mod roots;

pub use quadrature::{gauss_legendre, QuadratureRule};
pub use roots::{eval_poly, poly_roots, TRIM_RELATIVE};
