//! Frequency response of a pole-zero model from the distances of its zeros
//! and poles to points on the unit circle.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::iir::PoleZeroModel;

/// Distance below which `e^{jw}` is considered to sit on a pole.
pub const POLE_HIT_TOL: f64 = 1e-12;

/// Magnitudes below this are reported as `-inf` dB.
pub const MAGNITUDE_FLOOR: f64 = 1e-300;

pub const DEFAULT_GRID_POINTS: usize = 2048;

pub const MIN_GRID_POINTS: usize = 16;

/// `H(e^{jw}) = K prod(e^{jw} - z_i) / prod(e^{jw} - p_j)`.
///
/// Factor magnitudes are accumulated as logarithms so high orders neither
/// overflow nor underflow.
pub fn eval_model(model: &PoleZeroModel, omega: f64) -> Result<Complex64> {
    if !(0.0..=PI).contains(&omega) {
        return Err(Error::Domain {
            value: omega,
            min: 0.0,
            max: PI,
        });
    }
    let e = unit_point(omega);
    let mut log_mag = 0.0;
    let mut phase = 0.0;
    for p in model.poles().iter() {
        let d = e - p;
        let r = d.norm();
        if r <= POLE_HIT_TOL {
            return Err(Error::EvaluationAtPole { omega, index: None });
        }
        log_mag -= r.ln();
        phase -= d.arg();
    }
    for z in model.zeros().iter() {
        let d = e - z;
        let r = d.norm();
        if r == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        log_mag += r.ln();
        phase += d.arg();
    }
    Ok(Complex64::from_polar(model.gain() * log_mag.exp(), phase))
}

/// `e^{jw}`, exact at the grid ends.
fn unit_point(omega: f64) -> Complex64 {
    if omega == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if omega == PI {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, omega)
    }
}

/// Uniform grid of `n` points on `[0, pi]`, both ends included.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                PI
            } else {
                PI * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Adds multiples of 2 pi so adjacent samples differ by at most pi.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    for (i, &p) in wrapped.iter().enumerate() {
        if i > 0 {
            let d: f64 = p + offset - out[i - 1];
            offset -= 2.0 * PI * (d / (2.0 * PI)).round();
        }
        out.push(p + offset);
    }
    out
}

/// `-d(phase)/d(omega)`: central differences inside, one-sided at the ends.
pub fn group_delay(omegas: &[f64], phase: &[f64]) -> Vec<f64> {
    let n = omegas.len();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1.min(n - 1)),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            if a == b {
                0.0
            } else {
                -(phase[b] - phase[a]) / (omegas[b] - omegas[a])
            }
        })
        .collect()
}

/// Sampled response with derived magnitude, unwrapped phase and delay.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseCurve {
    pub omegas: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `20 log10 |H|`, `-inf` below [`MAGNITUDE_FLOOR`].
    pub magnitude_db: Vec<f64>,
    pub phase_unwrapped: Vec<f64>,
    /// Samples.
    pub group_delay: Vec<f64>,
}

/// Evaluates `model` on a uniform `n_points` grid over `[0, pi]`.
pub fn sweep(model: &PoleZeroModel, n_points: usize) -> Result<ResponseCurve> {
    if n_points < MIN_GRID_POINTS {
        return Err(Error::InvalidArgument(format!(
            "sweep needs at least {MIN_GRID_POINTS} points, got {n_points}"
        )));
    }
    let omegas = uniform_grid(n_points);
    let values = omegas
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            eval_model(model, w).map_err(|e| match e {
                Error::EvaluationAtPole { omega, .. } => Error::EvaluationAtPole {
                    omega,
                    index: Some(i),
                },
                e => e,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let magnitude_db = values
        .iter()
        .map(|h| {
            let m = h.norm();
            if m < MAGNITUDE_FLOOR {
                f64::NEG_INFINITY
            } else {
                20.0 * m.log10()
            }
        })
        .collect();
    let wrapped: Vec<f64> = values.iter().map(|h| h.arg()).collect();
    let phase_unwrapped = unwrap_phase(&wrapped);
    let group_delay = group_delay(&omegas, &phase_unwrapped);
    Ok(ResponseCurve {
        omegas,
        values,
        magnitude_db,
        phase_unwrapped,
        group_delay,
    })
}

/// Formats a float with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

impl ResponseCurve {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// CSV with header `omega,magnitude_db,phase_rad,group_delay`; `-inf`
    /// magnitudes become empty cells.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("omega,magnitude_db,phase_rad,group_delay\n");
        for i in 0..self.len() {
            let db = if self.magnitude_db[i] == f64::NEG_INFINITY {
                String::new()
            } else {
                fmt17(self.magnitude_db[i])
            };
            let _ = writeln!(
                s,
                "{},{},{},{}",
                fmt17(self.omegas[i]),
                db,
                fmt17(self.phase_unwrapped[i]),
                fmt17(self.group_delay[i])
            );
        }
        s
    }
}

struct DbArray<'a>(&'a [f64]);

#[derive(Serialize)]
#[serde(untagged)]
enum DbValue {
    Finite(f64),
    Sentinel(&'static str),
}

impl Serialize for DbArray<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|&v| {
            if v == f64::NEG_INFINITY {
                DbValue::Sentinel("-inf")
            } else {
                DbValue::Finite(v)
            }
        }))
    }
}

impl Serialize for ResponseCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let values: Vec<[f64; 2]> = self.values.iter().map(|h| [h.re, h.im]).collect();
        let mut st = s.serialize_struct("ResponseCurve", 5)?;
        st.serialize_field("omegas", &self.omegas)?;
        st.serialize_field("values", &values)?;
        st.serialize_field("magnitude_db", &DbArray(&self.magnitude_db))?;
        st.serialize_field("phase_unwrapped", &self.phase_unwrapped)?;
        st.serialize_field("group_delay", &self.group_delay)?;
        st.end()
    }
}
