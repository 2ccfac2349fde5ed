//! Zero-phase FIR prototypes: truncated Legendre approximations of an object
//! function, with their roots mapped onto the z-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::legendre::{
    integrated_squared_error_with_breaks, min_quad_order, project_with_breaks, LegendreSeries,
};
use crate::numerics::{poly_roots, TRIM_RELATIVE};
use crate::spec::{FilterSpec, ObjectFunction};

/// Quadrature order used for prototype synthesis.
pub fn synthesis_quad_order(num_terms: usize) -> usize {
    min_quad_order(num_terms).max(96)
}

/// A multiset of z-plane points (zeros or poles), stored flat.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSet {
    points: Vec<Complex64>,
}

impl ZeroSet {
    pub fn new(points: Vec<Complex64>) -> Self {
        Self { points }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.points.iter()
    }

    pub(crate) fn push_n(&mut self, z: Complex64, n: usize) {
        self.points.extend(std::iter::repeat_n(z, n));
    }

    pub(crate) fn points_mut(&mut self) -> &mut [Complex64] {
        &mut self.points
    }

    /// Distinct points (within `tol`) with their multiplicities.
    pub fn with_multiplicity(&self, tol: f64) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for &z in &self.points {
            match out.iter_mut().find(|(p, _)| (p - z).norm() <= tol) {
                Some((_, m)) => *m += 1,
                None => out.push((z, 1)),
            }
        }
        out
    }

    /// True if `map` sends the multiset onto itself, matching within `tol`.
    fn closed_under(&self, tol: f64, map: impl Fn(Complex64) -> Complex64) -> bool {
        let mut used = vec![false; self.points.len()];
        for &z in &self.points {
            let target = map(z);
            let hit = self
                .points
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, p)| (i, (p - target).norm() / target.norm().max(1.0)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            match hit {
                Some((i, d)) if d <= tol => used[i] = true,
                _ => return false,
            }
        }
        true
    }

    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        self.closed_under(tol, |z| z.conj())
    }

    /// Closure under `z -> 1/z`; points at the origin are not reciprocable.
    pub fn is_reciprocal_closed(&self, tol: f64) -> bool {
        !self.points.iter().any(|z| z.norm() == 0.0) && self.closed_under(tol, |z| z.inv())
    }

    /// Monic polynomial with these roots, descending powers.
    pub fn expand(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &z in &self.points {
            c.push(Complex64::new(0.0, 0.0));
            for i in (1..c.len()).rev() {
                let prev = c[i - 1];
                c[i] -= z * prev;
            }
        }
        c
    }
}

/// Truncated even-order Legendre approximation of an object function, plus
/// its monomial form `f_a(x) = sum_k p_k x^(2k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirPrototype {
    series: LegendreSeries,
    spec: FilterSpec,
    power_coeffs: Vec<f64>,
    integrated_squared_error: f64,
}

impl FirPrototype {
    pub fn series(&self) -> &LegendreSeries {
        &self.series
    }

    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    /// `p_k`, the weight of `t^(2k)` with `t = x / x0` (equivalently `u^k`, `u = t^2`).
    pub fn power_coeffs(&self) -> &[f64] {
        &self.power_coeffs
    }

    /// `∫_0^1 (f - f_a)^2 dx` against the source object function.
    pub fn integrated_squared_error(&self) -> f64 {
        self.integrated_squared_error
    }

    /// Degree in `u = x^2` after trimming negligible leading terms.
    pub fn degree_u(&self) -> usize {
        trimmed_degree(&self.power_coeffs)
    }

    /// Degree of `f_a` as a polynomial in `x`.
    pub fn degree_x(&self) -> usize {
        2 * self.degree_u()
    }

    /// Scale `g` with `f_a(cos(w/2)) = g z^(-D) prod_k (z - z_k)` on the unit
    /// circle, `D = degree_u()`.
    pub fn gain(&self) -> f64 {
        let d = self.degree_u();
        self.power_coeffs[d] / 4f64.powi(d as i32)
    }

    /// `f_a(x)` through the Legendre series.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.series.eval(x)
    }

    /// `f_a(x)` through the monomial coefficients.
    pub fn eval_power(&self, x: f64) -> f64 {
        let t = x / self.series.domain_max();
        let u = t * t;
        self.power_coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &p| acc * u + p)
    }

    /// Roots of `f_a` as a polynomial in `u = t^2`, `t = x / x0`.
    ///
    /// The companion eigenvalues come from the monomial form, which loses
    /// digits to cancellation at high order, so each root is then refined by
    /// Newton steps on the Legendre series itself.
    pub fn u_roots(&self) -> Result<Vec<Complex64>> {
        let d = self.degree_u();
        let roots = poly_roots(&self.power_coeffs[..=d])?;
        Ok(roots.into_iter().map(|u| self.polish(u)).collect())
    }

    fn polish(&self, u: Complex64) -> Complex64 {
        let mut t = u.sqrt();
        let mut best = self.series.eval_complex(t).0.norm();
        for _ in 0..POLISH_STEPS {
            let (v, dv) = self.series.eval_complex(t);
            if v.norm() == 0.0 || dv.norm() == 0.0 {
                break;
            }
            let next = t - v / dv;
            let r = self.series.eval_complex(next).0.norm();
            if !(r < best) {
                break;
            }
            best = r;
            let done = (next - t).norm() <= 4.0 * f64::EPSILON * next.norm().max(1.0);
            t = next;
            if done {
                break;
            }
        }
        let u = t * t;
        // keep real roots real so the unit-circle mapping stays exact
        if u.im.abs() <= 1e-12 * u.norm().max(1.0) {
            Complex64::new(u.re, 0.0)
        } else {
            u
        }
    }

    /// The z-plane zeros of this prototype, one reciprocal pair per u-root.
    pub fn z_zeros(&self) -> Result<ZeroSet> {
        let reps: Vec<Complex64> = self.u_roots()?.into_iter().map(|u| u.sqrt()).collect();
        Ok(x_roots_to_z_zeros(&reps))
    }

    /// Minimum of `f_a` over a uniform grid of `points` abscissae in [0, 1].
    pub fn min_on_unit_interval(&self, points: usize) -> (f64, f64) {
        (0..points)
            .map(|i| {
                let x = i as f64 / (points - 1) as f64;
                (self.series.eval_unchecked(x), x)
            })
            .fold((f64::INFINITY, 0.0), |best, cur| {
                if cur.0 < best.0 {
                    cur
                } else {
                    best
                }
            })
    }
}

const POLISH_STEPS: usize = 8;

fn trimmed_degree(coeffs: &[f64]) -> usize {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut d = coeffs.len() - 1;
    while d > 0 && coeffs[d].abs() <= TRIM_RELATIVE * scale {
        d -= 1;
    }
    d
}

/// Monomial coefficients (ascending in `x`) of `sum_n c_n P_2n(x)`.
pub fn legendre_to_monomial(even_coeffs: &[f64]) -> Vec<f64> {
    let top = 2 * (even_coeffs.len() - 1);
    let mut out = vec![0.0; top + 1];
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 1.0];
    out[0] += even_coeffs[0];
    for k in 1..top {
        // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        let kf = k as f64;
        let mut next = vec![0.0; k + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += (2.0 * kf + 1.0) * c / (kf + 1.0);
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= kf * c / (kf + 1.0);
        }
        prev = cur;
        cur = next;
        if (k + 1) % 2 == 0 {
            let w = even_coeffs[(k + 1) / 2];
            for (o, c) in out.iter_mut().zip(&cur) {
                *o += w * c;
            }
        }
    }
    out
}

/// Projects `obj` onto `num_terms` even Legendre polynomials and converts the
/// result to monomial form.
pub fn synthesize_fir(obj: &ObjectFunction, num_terms: usize) -> Result<FirPrototype> {
    let quad = synthesis_quad_order(num_terms);
    let breaks = obj.breakpoints();
    let f = |t: f64| obj.eval_unit(t);
    let unit = project_with_breaks(f, &breaks, num_terms, quad)?;
    let ise = integrated_squared_error_with_breaks(f, &breaks, &unit, quad)?;
    let series = LegendreSeries::new(unit.coeffs().to_vec(), obj.x0())?;
    let monomial = legendre_to_monomial(series.coeffs());
    let power_coeffs = monomial.into_iter().step_by(2).collect();
    Ok(FirPrototype {
        series,
        spec: obj.spec().clone(),
        power_coeffs,
        integrated_squared_error: ise,
    })
}

/// Zero-phase amplitude `f_a(cos(omega / 2))`.
pub fn eval_fir_response(p: &FirPrototype, omega: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&omega) {
        return Err(Error::Domain {
            value: omega,
            min: 0.0,
            max: PI,
        });
    }
    let t = if omega == PI {
        0.0
    } else {
        (0.5 * omega).cos()
    };
    Ok(p.series.eval_unchecked(t))
}

/// All roots of `f_a` in `x`: each u-root contributes `±sqrt(u)`.
pub fn find_x_roots(p: &FirPrototype) -> Result<Vec<Complex64>> {
    if p.power_coeffs.iter().all(|&c| c == 0.0) {
        return Err(Error::ZeroPolynomial);
    }
    let d = p.degree_u();
    if p.power_coeffs[d].abs() < 1e-300 {
        return Err(Error::ZeroPolynomial);
    }
    Ok(p.u_roots()?
        .into_iter()
        .flat_map(|u| {
            let r = u.sqrt();
            [r, -r]
        })
        .collect())
}

/// Maps each x-root through `cos(omega) = 2x^2 - 1` to the two solutions of
/// `z^2 - 2cz + 1 = 0`.
///
/// Roots with real `x` in [-1, 1] land on the unit circle as a conjugate
/// pair; anything else gives a reciprocal pair `z, 1/z`.
pub fn x_roots_to_z_zeros(x_roots: &[Complex64]) -> ZeroSet {
    let mut points = Vec::with_capacity(2 * x_roots.len());
    for &x in x_roots {
        let c = 2.0 * x * x - 1.0;
        let s = (c * c - 1.0).sqrt();
        // pick the larger root first, then recover the partner from z1 z2 = 1
        let (a, b) = (c + s, c - s);
        let (big, small) = if a.norm() >= b.norm() { (a, b) } else { (b, a) };
        let partner = if big.norm() > 0.0 { big.inv() } else { small };
        // on-circle roots keep the explicit conjugate so the pair is exact
        if (s.re == 0.0) && c.im == 0.0 {
            points.push(a);
            points.push(b);
        } else {
            points.push(big);
            points.push(partner);
        }
    }
    ZeroSet::new(points)
}
