//! Brute-force least-squares oracle for Legendre projections.
//!
//! Shares nothing with the library's projection path: nodes come from the
//! Golub–Welsch eigenproblem, Legendre values from the positive cosine series
//! `P_n(cos t) = sum_k a_k a_(n-k) cos((n-2k)t)`, and the coefficients from a
//! full normal-equations solve (no orthogonality assumed).

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub const NODES_PER_PANEL: usize = 50;
pub const TOTAL_POINTS: usize = 10_000;

/// Gauss–Legendre nodes/weights on [-1, 1] from the Jacobi matrix.
pub fn golub_welsch(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let b = kf / (4.0 * kf * kf - 1.0).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// `P_n(x)` from the cosine series with non-negative coefficients.
pub fn legendre_cosine_series(n: usize, x: f64) -> f64 {
    let theta = x.clamp(-1.0, 1.0).acos();
    let mut a = vec![1.0f64; n + 1];
    for k in 1..=n {
        a[k] = a[k - 1] * (2.0 * k as f64 - 1.0) / (2.0 * k as f64);
    }
    (0..=n)
        .map(|k| a[k] * a[n - k] * ((n as f64 - 2.0 * k as f64) * theta).cos())
        .sum()
}

/// Composite grid of `TOTAL_POINTS` abscissae on [0, 1] with panel edges at
/// every breakpoint.
pub fn grid(breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut edges = vec![0.0];
    let mut b: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > 0.0 && x < 1.0)
        .collect();
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    edges.extend(b);
    edges.push(1.0);
    let panels_total = TOTAL_POINTS / NODES_PER_PANEL;
    let segs = edges.len() - 1;
    let (nodes, weights) = golub_welsch(NODES_PER_PANEL);
    let mut out = Vec::with_capacity(TOTAL_POINTS);
    let mut remaining = panels_total;
    for s in 0..segs {
        let (lo, hi) = (edges[s], edges[s + 1]);
        let share = if s == segs - 1 {
            remaining
        } else {
            (((hi - lo) * panels_total as f64).round() as usize)
                .clamp(1, remaining - (segs - 1 - s))
        };
        remaining -= share;
        let h = (hi - lo) / share as f64;
        for p in 0..share {
            let a = lo + p as f64 * h;
            for (x, w) in nodes.iter().zip(&weights) {
                out.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
    }
    out
}

/// Coefficients of the best `sum c_n P_2n` fit to `f` in L2[0, 1].
pub fn least_squares_coeffs(f: &dyn Fn(f64) -> f64, breaks: &[f64], num_terms: usize) -> Vec<f64> {
    let pts = grid(breaks);
    let mut gram = DMatrix::<f64>::zeros(num_terms, num_terms);
    let mut rhs = DVector::<f64>::zeros(num_terms);
    let mut basis = vec![0.0; num_terms];
    for &(x, w) in &pts {
        for (n, b) in basis.iter_mut().enumerate() {
            *b = legendre_cosine_series(2 * n, x);
        }
        let fx = f(x);
        for m in 0..num_terms {
            rhs[m] += w * fx * basis[m];
            for n in 0..num_terms {
                gram[(m, n)] += w * basis[m] * basis[n];
            }
        }
    }
    let sol = gram
        .cholesky()
        .expect("Gram matrix is positive definite")
        .solve(&rhs);
    sol.iter().copied().collect()
}

/// Random piecewise-linear function on [0, 1]: knots (including the ends)
/// and their values.
pub struct PiecewiseLinear {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn eval(&self, x: f64) -> f64 {
        let k = self
            .knots
            .partition_point(|&t| t <= x)
            .clamp(1, self.knots.len() - 1);
        let (x0, x1) = (self.knots[k - 1], self.knots[k]);
        let (y0, y1) = (self.values[k - 1], self.values[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn interior(&self) -> &[f64] {
        &self.knots[1..self.knots.len() - 1]
    }

    pub fn random<R: rand::Rng>(rng: &mut R) -> Self {
        let inner = rng.gen_range(2..=4);
        let mut knots: Vec<f64> = (0..inner).map(|_| rng.gen_range(0.05..0.95)).collect();
        knots.push(0.0);
        knots.push(1.0);
        knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        knots.dedup();
        let values = knots.iter().map(|_| rng.gen_range(0.0..10.0)).collect();
        Self { knots, values }
    }
}
