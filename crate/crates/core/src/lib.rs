//! Approximately linear-phase IIR filter design.
//!
//! A low-pass IIR characteristic is formed as the ratio of two zero-phase FIR
//! characteristics: a low-pass numerator and a strictly positive high-pass
//! denominator that share band edges. Each FIR characteristic is mapped to an
//! object function of `x = x0 cos(omega / 2)` and approximated in the least
//! squares sense by even-order Legendre polynomials. The roots of the
//! truncated series become z-plane zeros and poles; poles that land outside
//! the unit circle are moved to the origin.
//!
//! ```
//! use orthoiir::{design, hp_lp_complement, FilterKind, FilterSpec};
//!
//! let lp = FilterSpec::two_band(2.0007, 2.3186, 1000.0, 0.0).unwrap();
//! let hp = hp_lp_complement(&lp, 1.0, 2.0).unwrap();
//! let report = design(&lp, &hp, 20, 20, FilterKind::LowPass).unwrap();
//! assert!(report.model_stable.max_pole_modulus() < 1.0);
//! ```

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::manual_div_ceil
)]

pub mod error;
pub mod fir;
pub mod iir;
pub mod io;
pub mod legendre;
pub mod numerics;
pub mod response;
pub mod spec;

pub use error::{Error, Result, Stage};
pub use fir::{
    eval_fir_response, find_x_roots, synthesize_fir, x_roots_to_z_zeros, FirPrototype, ZeroSet,
};
pub use iir::{
    assemble_iir, design, design_with_reference, stabilize, DesignReport, FilterKind,
    PoleZeroModel, TransferFunction,
};
pub use legendre::{eval_legendre, integrated_squared_error, project, LegendreSeries};
pub use response::{eval_model, sweep, ResponseCurve};
pub use spec::{
    build_object_function, hp_lp_complement, omega_to_x, x_to_omega, Band, FilterSpec,
    ObjectFunction,
};
