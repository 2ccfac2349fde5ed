//! JSON and CSV file formats.
//!
//! Floats in JSON use the shortest representation that round-trips exactly;
//! CSV cells carry 17 significant digits.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fir::{FirPrototype, ZeroSet};
use crate::iir::{DesignReport, FilterKind, PoleZeroModel, RootSplit, TransferFunction};
use crate::legendre::LegendreSeries;
use crate::response::fmt17;
use crate::spec::{FilterSpec, ObjectFunction};

#[derive(Serialize, Deserialize)]
struct ModelFile {
    zeros: Vec<[f64; 2]>,
    poles: Vec<[f64; 2]>,
    gain: f64,
    stabilized: bool,
    #[serde(default)]
    shifted_pole_count: usize,
}

fn pairs(set: &ZeroSet) -> Vec<[f64; 2]> {
    set.iter().map(|z| [z.re, z.im]).collect()
}

fn points(v: &[[f64; 2]]) -> ZeroSet {
    ZeroSet::new(v.iter().map(|p| Complex64::new(p[0], p[1])).collect())
}

impl From<&PoleZeroModel> for ModelFile {
    fn from(m: &PoleZeroModel) -> Self {
        ModelFile {
            zeros: pairs(m.zeros()),
            poles: pairs(m.poles()),
            gain: m.gain(),
            stabilized: m.stabilized(),
            shifted_pole_count: m.shifted_pole_count(),
        }
    }
}

impl Serialize for PoleZeroModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModelFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PoleZeroModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = ModelFile::deserialize(d)?;
        PoleZeroModel::new(points(&f.zeros), points(&f.poles), f.gain, f.stabilized)
            .map(|m| m.with_shift_count(f.shifted_pole_count))
            .map_err(serde::de::Error::custom)
    }
}

/// Pretty JSON for a model; the field order is fixed.
pub fn model_to_json(model: &PoleZeroModel) -> String {
    serde_json::to_string_pretty(model).expect("model serializes")
}

/// Parses and validates a model file.
pub fn model_from_json(text: &str) -> Result<PoleZeroModel> {
    serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))
}

pub fn transfer_function_to_json(tf: &TransferFunction) -> String {
    serde_json::to_string_pretty(tf).expect("coefficients serialize")
}

#[derive(Serialize)]
struct SeriesOut<'a> {
    coeffs: &'a [f64],
    domain_max: f64,
}

#[derive(Serialize)]
struct PrototypeOut<'a> {
    series: SeriesOut<'a>,
    spec: &'a FilterSpec,
    power_coeffs: &'a [f64],
    gain: f64,
    degree_x: usize,
    integrated_squared_error: f64,
}

fn series_out(s: &LegendreSeries) -> SeriesOut<'_> {
    SeriesOut {
        coeffs: s.coeffs(),
        domain_max: s.domain_max(),
    }
}

fn prototype_out(p: &FirPrototype) -> PrototypeOut<'_> {
    PrototypeOut {
        series: series_out(p.series()),
        spec: p.spec(),
        power_coeffs: p.power_coeffs(),
        gain: p.gain(),
        degree_x: p.degree_x(),
        integrated_squared_error: p.integrated_squared_error(),
    }
}

#[derive(Serialize)]
struct ReportOut<'a> {
    kind: FilterKind,
    reference_omega: f64,
    spec_lp: &'a FilterSpec,
    spec_hp: &'a FilterSpec,
    numerator: PrototypeOut<'a>,
    denominator: PrototypeOut<'a>,
    model_raw: &'a PoleZeroModel,
    model_stable: &'a PoleZeroModel,
    denominator_min: f64,
    numerator_roots: RootSplit,
    denominator_roots: RootSplit,
    passband_ripple_db: f64,
    shift_deviation_db: f64,
    notes: &'a [String],
}

pub fn report_to_json(r: &DesignReport) -> String {
    let out = ReportOut {
        kind: r.kind,
        reference_omega: r.reference_omega,
        spec_lp: &r.spec_lp,
        spec_hp: &r.spec_hp,
        numerator: prototype_out(&r.numerator),
        denominator: prototype_out(&r.denominator),
        model_raw: &r.model_raw,
        model_stable: &r.model_stable,
        denominator_min: r.denominator_min,
        numerator_roots: r.numerator_roots,
        denominator_roots: r.denominator_roots,
        passband_ripple_db: r.passband_ripple_db,
        shift_deviation_db: r.shift_deviation_db,
        notes: &r.notes,
    };
    serde_json::to_string_pretty(&out).expect("report serializes")
}

/// Samples the object function and its approximation on `points` abscissae:
/// header `x,omega,object,approximation`.
pub fn object_function_csv(obj: &ObjectFunction, proto: &FirPrototype, points: usize) -> String {
    let mut s = String::from("x,omega,object,approximation\n");
    let x0 = obj.x0();
    for i in 0..points {
        let t = i as f64 / (points - 1) as f64;
        let x = t * x0;
        let omega = 2.0 * t.acos();
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt17(x),
            fmt17(omega),
            fmt17(obj.eval_unit(t)),
            fmt17(proto.series().eval_unchecked(t))
        );
    }
    s
}
