//! IIR filters as ratios of zero-phase FIR prototypes, with shift-to-origin
//! stabilization of poles outside the unit circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Stage};
use crate::fir::{eval_fir_response, synthesize_fir, FirPrototype, ZeroSet};
use crate::response::eval_model;
use crate::spec::{build_object_function, FilterSpec};

/// Poles with `| |z| - 1 |` at most this are treated as on the unit circle.
pub const UNIT_CIRCLE_TOL: f64 = 1e-10;

/// Abscissa grid used for the denominator sign scan.
pub const SIGN_SCAN_POINTS: usize = 4096;

/// Closure tolerance for conjugate pairing of roots.
pub const PAIRING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    LowPass,
    HighPass,
}

/// `H(z) = K prod(z - zeros) / prod(z - poles)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleZeroModel {
    zeros: ZeroSet,
    poles: ZeroSet,
    gain: f64,
    stabilized: bool,
    shifted_pole_count: usize,
}

impl PoleZeroModel {
    /// Builds a model, checking the structural invariants.
    pub fn new(zeros: ZeroSet, poles: ZeroSet, gain: f64, stabilized: bool) -> Result<Self> {
        let m = Self {
            zeros,
            poles,
            gain,
            stabilized,
            shifted_pole_count: 0,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn with_shift_count(mut self, n: usize) -> Self {
        self.shifted_pole_count = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gain.is_finite() && self.gain != 0.0) {
            return Err(Error::InvalidModel(format!(
                "gain must be finite and nonzero, got {}",
                self.gain
            )));
        }
        for (name, set) in [("zero", &self.zeros), ("pole", &self.poles)] {
            if let Some(z) = set.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::InvalidModel(format!("non-finite {name} {z}")));
            }
            if !set.is_conjugate_closed(PAIRING_TOL) {
                return Err(Error::InvalidModel(format!(
                    "{name}s are not closed under conjugation"
                )));
            }
        }
        if self.stabilized {
            if let Some(p) = self.poles.iter().find(|p| p.norm() >= 1.0) {
                return Err(Error::InvalidModel(format!(
                    "stabilized model has pole {p} with |z| = {} >= 1",
                    p.norm()
                )));
            }
        }
        Ok(())
    }

    pub fn zeros(&self) -> &ZeroSet {
        &self.zeros
    }

    pub fn poles(&self) -> &ZeroSet {
        &self.poles
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn shifted_pole_count(&self) -> usize {
        self.shifted_pole_count
    }

    pub fn max_pole_modulus(&self) -> f64 {
        self.poles.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Expanded `b`/`a` coefficients in descending powers of z, `a[0] = 1`.
    pub fn transfer_function(&self) -> TransferFunction {
        let real = |c: Vec<Complex64>| c.into_iter().map(|v| v.re).collect::<Vec<_>>();
        let b = real(self.zeros.expand())
            .into_iter()
            .map(|v| v * self.gain)
            .collect();
        let a = real(self.poles.expand());
        TransferFunction { b, a }
    }
}

/// Polynomial-ratio form `b(z) / a(z)`, descending powers of z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferFunction {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
}

impl TransferFunction {
    /// Horner evaluation of `b(z) / a(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let horner = |c: &[f64]| {
            c.iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &v| acc * z + v)
        };
        horner(&self.b) / horner(&self.a)
    }
}

/// Checks that a denominator prototype keeps a strictly positive amplitude on
/// [0, 1]; returns the minimum found by the sign scan.
pub fn check_denominator(den: &FirPrototype) -> Result<f64> {
    let (min, at) = den.min_on_unit_interval(SIGN_SCAN_POINTS);
    if !(min > 0.0) {
        return Err(Error::DenominatorVanishes { min, at });
    }
    // a double root can hide between grid points; audit real u-roots too
    for u in den.u_roots()? {
        if u.im == 0.0 && (0.0..=1.0).contains(&u.re) {
            return Err(Error::DenominatorVanishes {
                min: 0.0,
                at: u.re.sqrt(),
            });
        }
    }
    Ok(min)
}

/// Forms the IIR ratio `num / den` (low-pass) or `den / num` (high-pass).
///
/// Zeros come from the numerator role, poles from the denominator role; the
/// `z^(-D)` factors of the two prototypes are kept as origin poles or zeros
/// so the model equals the amplitude ratio exactly.
pub fn assemble_iir(
    num: &FirPrototype,
    den: &FirPrototype,
    kind: FilterKind,
) -> Result<PoleZeroModel> {
    let (top, bottom) = match kind {
        FilterKind::LowPass => (num, den),
        FilterKind::HighPass => (den, num),
    };
    check_denominator(bottom)?;
    let mut zeros = top.z_zeros()?;
    let mut poles = bottom.z_zeros()?;
    let (dt, db) = (top.degree_u(), bottom.degree_u());
    let origin = Complex64::new(0.0, 0.0);
    if dt > db {
        poles.push_n(origin, dt - db);
    } else {
        zeros.push_n(origin, db - dt);
    }
    PoleZeroModel::new(zeros, poles, top.gain() / bottom.gain(), false)
}

/// Moves every pole outside the unit circle to the origin, rescaling the
/// gain so `|H(e^{j reference_omega})|` is unchanged.
pub fn stabilize(model: &PoleZeroModel, reference_omega: f64) -> Result<PoleZeroModel> {
    if model.stabilized {
        return Err(Error::AlreadyStabilized);
    }
    if !(0.0..=PI).contains(&reference_omega) {
        return Err(Error::Domain {
            value: reference_omega,
            min: 0.0,
            max: PI,
        });
    }
    if let Some(p) = model
        .poles
        .iter()
        .find(|p| (p.norm() - 1.0).abs() <= UNIT_CIRCLE_TOL)
    {
        return Err(Error::PoleOnUnitCircle {
            re: p.re,
            im: p.im,
            modulus: p.norm(),
        });
    }
    let mut shifted = model.clone();
    let mut count = 0;
    for p in shifted.poles.points_mut() {
        if p.norm() > 1.0 + UNIT_CIRCLE_TOL {
            *p = Complex64::new(0.0, 0.0);
            count += 1;
        }
    }
    if count > 0 {
        let before = eval_model(model, reference_omega)?.norm();
        let after = eval_model(&shifted, reference_omega)?.norm();
        if !(before > 0.0 && after > 0.0 && before.is_finite() && after.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cannot renormalize gain at reference omega {reference_omega}: |H| = {before} before, {after} after"
            )));
        }
        shifted.gain *= before / after;
    }
    shifted.stabilized = true;
    shifted.shifted_pole_count = count;
    shifted.validate()?;
    Ok(shifted)
}

/// Root classification of one prototype.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootSplit {
    /// Real `u` in [0, 1]: zeros on the unit circle.
    pub real_in_band: usize,
    /// Real `u` outside [0, 1]: reciprocal pairs on the real z axis.
    pub real_out_of_band: usize,
    pub complex: usize,
}

impl RootSplit {
    pub fn of(p: &FirPrototype) -> Result<Self> {
        let mut split = RootSplit {
            real_in_band: 0,
            real_out_of_band: 0,
            complex: 0,
        };
        for u in p.u_roots()? {
            if u.im != 0.0 {
                split.complex += 1;
            } else if (0.0..=1.0).contains(&u.re) {
                split.real_in_band += 1;
            } else {
                split.real_out_of_band += 1;
            }
        }
        Ok(split)
    }
}

/// Everything produced by one run of the design pipeline.
#[derive(Debug, Clone)]
pub struct DesignReport {
    pub kind: FilterKind,
    pub reference_omega: f64,
    pub spec_lp: FilterSpec,
    pub spec_hp: FilterSpec,
    pub numerator: FirPrototype,
    pub denominator: FirPrototype,
    pub model_raw: PoleZeroModel,
    pub model_stable: PoleZeroModel,
    /// Minimum of the pole-supplying prototype over [0, 1].
    pub denominator_min: f64,
    pub numerator_roots: RootSplit,
    pub denominator_roots: RootSplit,
    /// Peak-to-peak passband magnitude of the raw ratio, in dB.
    pub passband_ripple_db: f64,
    /// Largest passband |dB| change caused by the pole shift.
    pub shift_deviation_db: f64,
    pub notes: Vec<String>,
}

fn check_shared_edges(lp: &FilterSpec, hp: &FilterSpec) -> Result<()> {
    let a: Vec<_> = lp.transitions().collect();
    let b: Vec<_> = hp.transitions().collect();
    let same = a.len() == b.len()
        && a.iter()
            .zip(&b)
            .all(|(p, q)| (p.0 - q.0).abs() <= 1e-12 && (p.1 - q.1).abs() <= 1e-12);
    if same && lp.bands().len() == 2 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(
            "low-pass and high-pass specs must be two-band and share band edges".into(),
        ))
    }
}

/// Passband (the band of the result that carries the larger ideal ratio)
/// interior as `(lo, hi)`, shrunk by 2% of its width on each side.
fn passband_interior(spec_lp: &FilterSpec, kind: FilterKind) -> (f64, f64) {
    let b = spec_lp.bands();
    let band = match kind {
        FilterKind::LowPass => b[0],
        FilterKind::HighPass => b[1],
    };
    let pad = 0.02 * (band.omega_end - band.omega_start);
    (band.omega_start + pad, band.omega_end - pad)
}

/// Runs the pipeline with the gain anchor at omega = 0.
pub fn design(
    lp_spec: &FilterSpec,
    hp_spec: &FilterSpec,
    num_terms_n: usize,
    num_terms_m: usize,
    kind: FilterKind,
) -> Result<DesignReport> {
    design_with_reference(lp_spec, hp_spec, num_terms_n, num_terms_m, kind, 0.0)
}

/// Full pipeline: object functions, projection, prototypes, ratio, roots,
/// transfer function and stabilization.
pub fn design_with_reference(
    lp_spec: &FilterSpec,
    hp_spec: &FilterSpec,
    num_terms_n: usize,
    num_terms_m: usize,
    kind: FilterKind,
    reference_omega: f64,
) -> Result<DesignReport> {
    check_shared_edges(lp_spec, hp_spec).map_err(|e| e.at(Stage::Spec))?;
    let pole_spec = match kind {
        FilterKind::LowPass => hp_spec,
        FilterKind::HighPass => lp_spec,
    };
    if let Some(b) = pole_spec.bands().iter().find(|b| !(b.level > 0.0)) {
        return Err(Error::ZeroDenominatorLevel(b.level).at(Stage::Spec));
    }
    if num_terms_n == 0 || num_terms_m == 0 {
        return Err(Error::InvalidArgument("num_terms must be at least 1".into()).at(Stage::Spec));
    }

    let obj_n =
        build_object_function(lp_spec, lp_spec.x0()).map_err(|e| e.at(Stage::ObjectFunction))?;
    let obj_d =
        build_object_function(hp_spec, hp_spec.x0()).map_err(|e| e.at(Stage::ObjectFunction))?;
    let numerator = synthesize_fir(&obj_n, num_terms_n).map_err(|e| e.at(Stage::Projection))?;
    let denominator = synthesize_fir(&obj_d, num_terms_m).map_err(|e| e.at(Stage::Projection))?;

    let model_raw =
        assemble_iir(&numerator, &denominator, kind).map_err(|e| e.at(Stage::Assembly))?;
    let bottom = match kind {
        FilterKind::LowPass => &denominator,
        FilterKind::HighPass => &numerator,
    };
    let denominator_min = bottom.min_on_unit_interval(SIGN_SCAN_POINTS).0;
    let numerator_roots = RootSplit::of(&numerator).map_err(|e| e.at(Stage::Synthesis))?;
    let denominator_roots = RootSplit::of(&denominator).map_err(|e| e.at(Stage::Synthesis))?;

    let model_stable =
        stabilize(&model_raw, reference_omega).map_err(|e| e.at(Stage::Stabilization))?;

    let (lo, hi) = passband_interior(lp_spec, kind);
    let mut raw_db = Vec::with_capacity(512);
    let mut shift_dev: f64 = 0.0;
    for i in 0..512 {
        let w = lo + (hi - lo) * i as f64 / 511.0;
        let r = eval_model(&model_raw, w)
            .map_err(|e| e.at(Stage::Response))?
            .norm();
        let s = eval_model(&model_stable, w)
            .map_err(|e| e.at(Stage::Response))?
            .norm();
        let r_db = 20.0 * r.log10();
        raw_db.push(r_db);
        shift_dev = shift_dev.max((20.0 * s.log10() - r_db).abs());
    }
    let max_db = raw_db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_db = raw_db.iter().copied().fold(f64::INFINITY, f64::min);
    let passband_ripple_db = max_db - min_db;

    let mut notes = vec![
        format!(
            "numerator: {} terms, degree {} in x, integrated squared error {:.6e}",
            num_terms_n,
            numerator.degree_x(),
            numerator.integrated_squared_error()
        ),
        format!(
            "denominator: {} terms, degree {} in x, integrated squared error {:.6e}",
            num_terms_m,
            denominator.degree_x(),
            denominator.integrated_squared_error()
        ),
        format!(
            "numerator u-roots: {} real in [0,1], {} real outside, {} complex",
            numerator_roots.real_in_band, numerator_roots.real_out_of_band, numerator_roots.complex
        ),
        format!(
            "denominator u-roots: {} real in [0,1], {} real outside, {} complex",
            denominator_roots.real_in_band,
            denominator_roots.real_out_of_band,
            denominator_roots.complex
        ),
        format!("pole-supplying prototype minimum on [0,1]: {denominator_min:.6e}"),
        format!(
            "shifted {} of {} poles to the origin; gain renormalized at omega = {}",
            model_stable.shifted_pole_count(),
            model_stable.poles().len(),
            reference_omega
        ),
        format!("raw passband ripple {passband_ripple_db:.6} dB over [{lo:.4}, {hi:.4}]"),
        format!("largest passband change from the pole shift {shift_dev:.6} dB"),
    ];
    let mut moved: Vec<f64> = model_raw
        .poles()
        .iter()
        .map(|p| p.norm())
        .filter(|&r| r > 1.0 + UNIT_CIRCLE_TOL)
        .collect();
    moved.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if let (Some(near), Some(far)) = (moved.first(), moved.last()) {
        notes.push(format!(
            "shifted pole moduli range from {near:.6} to {far:.6}; near poles mostly affect the transition start, far poles the response near omega = 0"
        ));
    }

    Ok(DesignReport {
        kind,
        reference_omega,
        spec_lp: lp_spec.clone(),
        spec_hp: hp_spec.clone(),
        numerator,
        denominator,
        model_raw,
        model_stable,
        denominator_min,
        numerator_roots,
        denominator_roots,
        passband_ripple_db,
        shift_deviation_db: shift_dev,
        notes,
    })
}

/// `eval_fir_response(num) / eval_fir_response(den)` for the given kind.
pub fn ratio_response(
    num: &FirPrototype,
    den: &FirPrototype,
    kind: FilterKind,
    omega: f64,
) -> Result<f64> {
    let n = eval_fir_response(num, omega)?;
    let d = eval_fir_response(den, omega)?;
    Ok(match kind {
        FilterKind::LowPass => n / d,
        FilterKind::HighPass => d / n,
    })
}
