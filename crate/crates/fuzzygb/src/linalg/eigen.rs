//! Hermitian eigensolver.
//!
//! Complex Householder reduction to a real symmetric tridiagonal matrix
//! (with a diagonal phase similarity making the off-diagonal real), then
//! implicit QL with shifts accumulating the rotations into the complex
//! transformation. Full spectra are needed downstream (Casimir checks,
//! γ̂ = sqrt(γ̂²)), hence no power iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

const MAX_QL_ITER: usize = 60;

/// Eigenvalues ascending; `vectors` holds the matching eigenvectors as
/// columns, so `A = V diag(values) V†`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    /// max |eigenvalue| (the operator norm of the decomposed matrix).
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// V f(Λ) V†.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
        let n = self.vectors.dim();
        let mut scaled = self.vectors.clone();
        for (j, &v) in self.values.iter().enumerate() {
            let s = f(v);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled.mul(&self.vectors.dagger())
    }
}

pub(crate) fn eigh_unchecked(a: &CMatrix) -> Result<EigenDecomposition> {
    let (values, vectors) = eigh(a, true)?;
    Ok(EigenDecomposition {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

pub(crate) fn eigh_unchecked_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a, false)?.0)
}

fn eigh(a: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    let n = a.dim();
    let mut m = a.clone();
    let mut q = if want_vectors {
        Some(CMatrix::identity(n))
    } else {
        None
    };
    householder(&mut m, &mut q);

    let mut d: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut e = vec![0.0f64; n];
    // phase similarity making the subdiagonal real nonnegative
    let mut ph = vec![Complex64::ONE; n];
    for k in 0..n.saturating_sub(1) {
        let t = m[(k + 1, k)];
        let r = t.norm();
        e[k] = r;
        ph[k + 1] = if r > 0.0 { t * ph[k] / r } else { ph[k] };
    }
    if let Some(q) = q.as_mut() {
        for j in 0..n {
            if ph[j] != Complex64::ONE {
                for i in 0..n {
                    q[(i, j)] *= ph[j];
                }
            }
        }
    }

    ql_implicit(&mut d, &mut e, q.as_mut())?;

    // ascending sort, permuting eigenvector columns alongside
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = q.map(|q| {
        let mut sorted = CMatrix::zeros(n);
        for (newj, &oldj) in order.iter().enumerate() {
            for i in 0..n {
                sorted[(i, newj)] = q[(i, oldj)];
            }
        }
        sorted
    });
    Ok((values, vectors))
}

/// Householder reduction: for each column, reflect the part below the
/// subdiagonal away. M stays hermitian; the two-sided update is the
/// standard rank-2 form M - v q† - q v†.
fn householder(m: &mut CMatrix, q: &mut Option<CMatrix>) {
    let n = m.dim();
    for k in 0..n.saturating_sub(2) {
        let mut below = 0.0;
        for i in k + 2..n {
            let z = m[(i, k)];
            below += z.re.abs() + z.im.abs();
        }
        if below == 0.0 {
            continue;
        }
        // Scale the column to unit size before building the reflector; the
        // reflector only depends on the direction of v, and scaling keeps
        // beta away from overflow when the column is rounding debris.
        let x0 = m[(k + 1, k)];
        let col_scale = below + x0.re.abs() + x0.im.abs();
        let inv = 1.0 / col_scale;
        let mut v = vec![Complex64::ZERO; n];
        for i in k + 1..n {
            v[i] = m[(i, k)] * inv;
        }
        let xnorm: f64 = v[k + 1..]
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let x0s = v[k + 1];
        let phase = if x0s.norm() > 0.0 {
            x0s / x0s.norm()
        } else {
            Complex64::ONE
        };
        let alpha = -phase * xnorm;
        v[k + 1] -= alpha;
        let vnorm2: f64 = v[k + 1..].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // p = beta M v, K = beta (v† p).re / 2, qv = p - K v
        let mut p = vec![Complex64::ZERO; n];
        for i in k..n {
            let mut acc = Complex64::ZERO;
            for j in k + 1..n {
                acc += m[(i, j)] * v[j];
            }
            p[i] = beta * acc;
        }
        let vdp: Complex64 = v[k + 1..]
            .iter()
            .zip(&p[k + 1..])
            .map(|(vi, pi)| vi.conj() * pi)
            .sum();
        let kappa = 0.5 * beta * vdp.re;
        let mut qv = p;
        for i in k + 1..n {
            qv[i] -= kappa * v[i];
        }

        for i in k..n {
            let vi = v[i];
            let qi = qv[i];
            for j in k..n {
                m[(i, j)] -= vi * qv[j].conj() + qi * v[j].conj();
            }
        }

        if let Some(q) = q.as_mut() {
            // Q <- Q (I - beta v v†)
            for row in 0..n {
                let mut acc = Complex64::ZERO;
                for j in k + 1..n {
                    acc += q[(row, j)] * v[j];
                }
                acc *= beta;
                for j in k + 1..n {
                    let sub = acc * v[j].conj();
                    q[(row, j)] -= sub;
                }
            }
        }
    }
}

/// Implicit QL with shifts on a real symmetric tridiagonal matrix,
/// rotating the (complex) transformation columns along.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut q: Option<&mut CMatrix>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    // Deflation is anchored to the tridiagonal norm: the accuracy contract is
    // tol_eig·‖a‖ (absolute at matrix scale), and a purely relative test
    // stalls on clusters of near-zero eigenvalues.
    let tnorm = (0..n)
        .map(|i| {
            d[i].abs()
                + if i > 0 { e[i - 1].abs() } else { 0.0 }
                + if i < n - 1 { e[i].abs() } else { 0.0 }
        })
        .fold(0.0f64, f64::max);
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut mi = l;
            while mi < n - 1 {
                let dd = d[mi].abs() + d[mi + 1].abs();
                if e[mi].abs() <= eps * (dd + tnorm) + f64::MIN_POSITIVE {
                    break;
                }
                mi += 1;
            }
            if mi == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(Error::EigenNoConvergence {
                    iterations: MAX_QL_ITER,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mi] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..mi).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mi] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(q) = q.as_deref_mut() {
                    let nq = q.dim();
                    for row in 0..nq {
                        let fi = q[(row, i + 1)];
                        let qi = q[(row, i)];
                        q[(row, i + 1)] = s * qi + c * fi;
                        q[(row, i)] = c * qi - s * fi;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mi] = 0.0;
        }
    }
    Ok(())
}
