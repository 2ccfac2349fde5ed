//! Legendre polynomials and least-squares projection onto the even-order
//! basis `P_0, P_2, P_4, ...` over `[0, 1]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, QuadratureRule};

/// Slack allowed beyond `|x| = 1` when evaluating basis polynomials.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// `P_order(x)` by the Bonnet recurrence.
pub fn eval_legendre(order: usize, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::Domain {
            value: x,
            min: -1.0,
            max: 1.0,
        });
    }
    Ok(legendre_unchecked(order, x))
}

fn legendre_unchecked(order: usize, x: f64) -> f64 {
    if order == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..order {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Fills `out[n] = P_{2n}(x)` for `n < out.len()` in one recurrence pass.
fn even_legendre_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    let mut p0 = 1.0;
    let mut p1 = x;
    let top = 2 * (out.len() - 1);
    for k in 1..top {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
        if (k + 1) % 2 == 0 {
            out[(k + 1) / 2] = p2;
        }
    }
}

/// Truncated even-order Legendre expansion `f_a(x) = sum c_n P_{2n}(x / x0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries {
    coeffs: Vec<f64>,
    domain_max: f64,
}

impl LegendreSeries {
    pub fn new(coeffs: Vec<f64>, domain_max: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "series needs at least one coefficient".into(),
            ));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite series coefficient {c}"
            )));
        }
        if !(domain_max > 0.0 && domain_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "domain_max must be positive, got {domain_max}"
            )));
        }
        Ok(Self { coeffs, domain_max })
    }

    /// Series on the unit abscissa range (`x0 = 1`).
    pub fn unit(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(coeffs, 1.0)
    }

    /// `c_n`, the weight of `P_{2n}`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Truncation order N (highest `n` with a stored `a_2n`).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates the series at `x` in `[0, domain_max]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= -DOMAIN_SLACK && x <= self.domain_max * (1.0 + DOMAIN_SLACK)) {
            return Err(Error::Domain {
                value: x,
                min: 0.0,
                max: self.domain_max,
            });
        }
        Ok(self.eval_unchecked(x / self.domain_max))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        // Clenshaw would be marginally faster; the recurrence is plenty here.
        let mut p0 = 1.0;
        let mut p1 = t;
        let mut sum = self.coeffs[0];
        let top = 2 * self.order();
        for k in 1..top {
            let kf = k as f64;
            let p2 = ((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0);
            p0 = p1;
            p1 = p2;
            if (k + 1) % 2 == 0 {
                sum += self.coeffs[(k + 1) / 2] * p2;
            }
        }
        sum
    }
}

impl LegendreSeries {
    /// Value and derivative of the series at a complex unit-domain argument.
    pub(crate) fn eval_complex(&self, t: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let (mut p0, mut p1) = (one, t);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k
        let (mut d0, mut d1) = (Complex64::new(0.0, 0.0), one);
        let mut sum = Complex64::new(self.coeffs[0], 0.0);
        let mut dsum = Complex64::new(0.0, 0.0);
        for k in 1..2 * self.order() {
            let kf = k as f64;
            let p2 = ((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0);
            let d2 = d0 + (2.0 * kf + 1.0) * p1;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
            if (k + 1) % 2 == 0 {
                let c = self.coeffs[(k + 1) / 2];
                sum += c * p2;
                dsum += c * d2;
            }
        }
        (sum, dsum)
    }
}

/// Minimum quadrature order for a series with `num_terms` coefficients.
pub fn min_quad_order(num_terms: usize) -> usize {
    4 * num_terms
}

/// Splits `[0, 1]` at the interior `breaks`, sorted and deduplicated.
fn panels(breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| b.is_finite() && *b > 0.0 && *b < 1.0)
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(0.0);
    edges.extend(pts);
    edges.push(1.0);
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

fn checked_rule(num_terms: usize, quad_order: usize) -> Result<QuadratureRule> {
    if num_terms == 0 {
        return Err(Error::InvalidArgument(
            "num_terms must be at least 1".into(),
        ));
    }
    let need = min_quad_order(num_terms);
    if quad_order < need {
        return Err(Error::QuadratureOrder {
            got: quad_order,
            need,
        });
    }
    gauss_legendre(quad_order)
}

fn sample<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { x, value: v })
    }
}

/// Least-squares projection of `f` onto `P_0, P_2, ..., P_{2(num_terms-1)}`
/// over `[0, 1]`, integrating with one Gauss–Legendre panel.
pub fn project<F: Fn(f64) -> f64>(
    f: F,
    num_terms: usize,
    quad_order: usize,
) -> Result<LegendreSeries> {
    project_with_breaks(f, &[], num_terms, quad_order)
}

/// Like [`project`], but splits the integrals at `breaks` so that each
/// quadrature panel sees a smooth integrand.
///
/// Both the numerator `∫ f P_2n` and the normalizer `∫ P_2n^2` are taken
/// with the same rule.
pub fn project_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    num_terms: usize,
    quad_order: usize,
) -> Result<LegendreSeries> {
    let rule = checked_rule(num_terms, quad_order)?;
    let mut num = vec![0.0; num_terms];
    let mut den = vec![0.0; num_terms];
    let mut basis = vec![0.0; num_terms];
    for (a, b) in panels(breaks) {
        for (x, w) in rule.mapped(a, b) {
            let fx = sample(&f, x)?;
            even_legendre_into(x, &mut basis);
            for n in 0..num_terms {
                num[n] += w * fx * basis[n];
                den[n] += w * basis[n] * basis[n];
            }
        }
    }
    let coeffs = num.iter().zip(&den).map(|(n, d)| n / d).collect();
    LegendreSeries::unit(coeffs)
}

/// `∫_0^1 (f(x) - f_a(x))^2 dx` by quadrature.
pub fn integrated_squared_error<F: Fn(f64) -> f64>(
    f: F,
    series: &LegendreSeries,
    quad_order: usize,
) -> Result<f64> {
    integrated_squared_error_with_breaks(f, &[], series, quad_order)
}

/// [`integrated_squared_error`] with the integral split at `breaks`.
pub fn integrated_squared_error_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    series: &LegendreSeries,
    quad_order: usize,
) -> Result<f64> {
    let rule = checked_rule(series.num_terms(), quad_order)?;
    let mut total = 0.0;
    for (a, b) in panels(breaks) {
        for (x, w) in rule.mapped(a, b) {
            let e = sample(&f, x)? - series.eval_unchecked(x / series.domain_max());
            total += w * e * e;
        }
    }
    Ok(total)
}
