//! Real polynomials with ascending coefficients, used for f², ff' and their
//! derivatives in the axisymmetric construction.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>, // ascending degree, trailing zeros trimmed
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// Parses "c0,c1,...,cd" (ascending degree).
    pub fn parse_csv(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad polynomial coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Config("polynomial coefficients must be finite".into()));
        }
        Ok(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::ZERO, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as f64 + 1.0) * c)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Simple real roots inside `[-bound, bound]`, located by sign changes on
    /// a fine grid and refined by bisection. Tangential (even-order) roots do
    /// not produce sign changes and are not reported.
    pub fn simple_real_roots(&self, bound: f64, grid: usize) -> Vec<f64> {
        let mut roots = Vec::new();
        let mut prev_x = -bound;
        let mut prev_v = self.eval(prev_x);
        for i in 1..=grid {
            let x = -bound + 2.0 * bound * (i as f64) / (grid as f64);
            let v = self.eval(x);
            if prev_v == 0.0 {
                roots.push(prev_x);
            } else if prev_v * v < 0.0 {
                let (mut lo, mut hi) = (prev_x, x);
                let (mut flo, _fhi) = (prev_v, v);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = self.eval(mid);
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if flo * fm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev_x = x;
            prev_v = v;
        }
        if prev_v == 0.0 {
            roots.push(prev_x);
        }
        roots
    }

    /// Cauchy bound on the magnitude of any root.
    pub fn root_bound(&self) -> f64 {
        let lead = *self.coeffs.last().unwrap();
        if lead == 0.0 {
            return 1.0;
        }
        1.0 + self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max)
    }
}
