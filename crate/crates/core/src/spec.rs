//! Piecewise-constant filter characteristics and their object functions in
//! the abscissa `x = x0 cos(omega / 2)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for band edges that should sit exactly on 0 or pi.
const EDGE_TOL: f64 = 1e-12;

/// `x = x0 cos(omega / 2)`.
pub fn omega_to_x(omega: f64, x0: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&omega) {
        return Err(Error::Domain {
            value: omega,
            min: 0.0,
            max: PI,
        });
    }
    check_x0(x0)?;
    Ok(x0 * (0.5 * omega).cos())
}

/// `omega = 2 acos(x / x0)`, the inverse of [`omega_to_x`].
pub fn x_to_omega(x: f64, x0: f64) -> Result<f64> {
    check_x0(x0)?;
    if !(0.0..=x0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            min: 0.0,
            max: x0,
        });
    }
    Ok(2.0 * (x / x0).acos())
}

fn check_x0(x0: f64) -> Result<()> {
    if x0 > 0.0 && x0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "x0 must be positive, got {x0}"
        )))
    }
}

/// One flat region `[omega_start, omega_end)` of an ideal characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub omega_start: f64,
    pub omega_end: f64,
    pub level: f64,
}

impl Band {
    pub fn new(omega_start: f64, omega_end: f64, level: f64) -> Self {
        Self {
            omega_start,
            omega_end,
            level,
        }
    }
}

#[derive(Deserialize)]
struct RawFilterSpec {
    bands: Vec<Band>,
    #[serde(default = "default_x0")]
    x0: f64,
}

fn default_x0() -> f64 {
    1.0
}

/// Ideal magnitude over `[0, pi]`: flat bands separated by transition gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFilterSpec")]
pub struct FilterSpec {
    bands: Vec<Band>,
    x0: f64,
}

impl TryFrom<RawFilterSpec> for FilterSpec {
    type Error = Error;

    fn try_from(raw: RawFilterSpec) -> Result<Self> {
        FilterSpec::with_x0(raw.bands, raw.x0)
    }
}

impl FilterSpec {
    pub fn new(bands: Vec<Band>) -> Result<Self> {
        Self::with_x0(bands, 1.0)
    }

    pub fn with_x0(bands: Vec<Band>, x0: f64) -> Result<Self> {
        check_x0(x0).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let first = bands
            .first()
            .ok_or_else(|| Error::InvalidSpec("at least one band is required".into()))?;
        if first.omega_start.abs() > EDGE_TOL {
            return Err(Error::InvalidSpec(format!(
                "first band must start at 0, starts at {}",
                first.omega_start
            )));
        }
        let last = bands.last().unwrap();
        if (last.omega_end - PI).abs() > EDGE_TOL {
            return Err(Error::InvalidSpec(format!(
                "last band must end at pi, ends at {}",
                last.omega_end
            )));
        }
        for (k, b) in bands.iter().enumerate() {
            if !(b.level.is_finite() && b.level >= 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "band {k} level must be finite and non-negative, got {}",
                    b.level
                )));
            }
            if !(b.omega_start.is_finite()
                && b.omega_end.is_finite()
                && b.omega_start < b.omega_end)
            {
                return Err(Error::InvalidSpec(format!(
                    "band {k} is empty or reversed: [{}, {})",
                    b.omega_start, b.omega_end
                )));
            }
        }
        for (k, w) in bands.windows(2).enumerate() {
            if !(w[0].omega_end < w[1].omega_start) {
                return Err(Error::InvalidSpec(format!(
                    "bands {k} and {} need a nonempty transition gap",
                    k + 1
                )));
            }
        }
        let mut bands = bands;
        bands[0].omega_start = 0.0;
        let n = bands.len();
        bands[n - 1].omega_end = PI;
        Ok(Self { bands, x0 })
    }

    /// Two-band low-pass (or high-pass, depending on levels) characteristic.
    pub fn two_band(
        pass_edge: f64,
        stop_edge: f64,
        pass_level: f64,
        stop_level: f64,
    ) -> Result<Self> {
        Self::new(vec![
            Band::new(0.0, pass_edge, pass_level),
            Band::new(stop_edge, PI, stop_level),
        ])
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Transition gaps as `(omega_lo, omega_hi)`.
    pub fn transitions(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.bands
            .windows(2)
            .map(|w| (w[0].omega_end, w[1].omega_start))
    }

    /// Ideal level at `omega`; linear in omega across transition gaps.
    pub fn level_at(&self, omega: f64) -> f64 {
        for (k, b) in self.bands.iter().enumerate() {
            if omega < b.omega_start {
                // inside the gap before band k
                let prev = &self.bands[k - 1];
                let t = (omega - prev.omega_end) / (b.omega_start - prev.omega_end);
                return prev.level + t * (b.level - prev.level);
            }
            if omega < b.omega_end {
                return b.level;
            }
        }
        self.bands.last().unwrap().level
    }
}

/// The filter characteristic re-expressed as a function of `x` on `[0, x0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectFunction {
    spec: FilterSpec,
    x0: f64,
}

impl ObjectFunction {
    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Object function value at `x` in `[0, x0]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let omega = x_to_omega(x, self.x0)?;
        Ok(self.spec.level_at(omega))
    }

    /// Object function on the normalized abscissa `t = x / x0` in `[0, 1]`,
    /// clamped at the ends.
    pub fn eval_unit(&self, t: f64) -> f64 {
        let omega = 2.0 * t.clamp(0.0, 1.0).acos();
        self.spec.level_at(omega)
    }

    /// Images of the band edges on the normalized abscissa, where the object
    /// function has kinks.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .spec
            .transitions()
            .flat_map(|(lo, hi)| [(0.5 * lo).cos(), (0.5 * hi).cos()])
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts
    }
}

/// Object function for `spec` under the transform with abscissa bound `x0`.
pub fn build_object_function(spec: &FilterSpec, x0: f64) -> Result<ObjectFunction> {
    check_x0(x0)?;
    Ok(ObjectFunction {
        spec: spec.clone(),
        x0,
    })
}

/// The complementary characteristic of a two-band low-pass spec: same edges,
/// `lo_level` over the low-pass passband and `hi_level` over its stopband.
pub fn hp_lp_complement(lp: &FilterSpec, lo_level: f64, hi_level: f64) -> Result<FilterSpec> {
    if lp.bands().len() != 2 {
        return Err(Error::InvalidSpec(format!(
            "complement needs a two-band spec, got {} band(s)",
            lp.bands().len()
        )));
    }
    if !(lo_level > 0.0 && lo_level.is_finite()) {
        return Err(Error::ZeroDenominatorLevel(lo_level));
    }
    if !(hi_level > 0.0 && hi_level.is_finite()) {
        return Err(Error::ZeroDenominatorLevel(hi_level));
    }
    let b = lp.bands();
    FilterSpec::with_x0(
        vec![
            Band::new(b[0].omega_start, b[0].omega_end, lo_level),
            Band::new(b[1].omega_start, b[1].omega_end, hi_level),
        ],
        lp.x0(),
    )
}
