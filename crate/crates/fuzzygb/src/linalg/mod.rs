//! Dense complex matrices with a hermitian eigensolver, operator norm and
//! principal square root. This is the whole linear-algebra surface the
//! curvature formulas need; no external solver is assumed.

mod eigen;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::tol;

pub use eigen::EigenDecomposition;

/// Dense square complex matrix, row-major. The universal carrier for the
/// embedding coordinates, normals, K̂ and γ̂².
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim.min(8) {
            write!(f, "  ")?;
            for j in 0..self.dim.min(8) {
                let z = self[(i, j)];
                write!(f, "{:+.3e}{:+.3e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Builds from row-major entries, rejecting non-finite values.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        if entries.len() != dim * dim {
            return Err(Error::ShapeMismatch(dim, (entries.len() as f64).sqrt() as usize));
        }
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / dim,
                    col: idx % dim,
                });
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_complex_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max_{ij} |A_ij − conj(A_ji)|, a cheap witness for hermiticity:
    /// ‖A − A†‖ ≤ dim · max_entry_asymmetry.
    pub fn max_entry_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    fn check_same_dim(&self, other: &CMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> CMatrix {
        self.scale_re(-1.0)
    }

    /// Matrix product. Internally splits into real/imaginary planes so the
    /// inner loops vectorize; the result is the plain ikj product.
    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut a_re = vec![0.0f64; n * n];
        let mut a_im = vec![0.0f64; n * n];
        let mut b_re = vec![0.0f64; n * n];
        let mut b_im = vec![0.0f64; n * n];
        for (k, z) in self.entries.iter().enumerate() {
            a_re[k] = z.re;
            a_im[k] = z.im;
        }
        for (k, z) in other.entries.iter().enumerate() {
            b_re[k] = z.re;
            b_im[k] = z.im;
        }
        let mut c_re = vec![0.0f64; n * n];
        let mut c_im = vec![0.0f64; n * n];
        for i in 0..n {
            let crow = i * n;
            for k in 0..n {
                let ar = a_re[i * n + k];
                let ai = a_im[i * n + k];
                if ar == 0.0 && ai == 0.0 {
                    continue;
                }
                let brow = k * n;
                let (br, bi) = (&b_re[brow..brow + n], &b_im[brow..brow + n]);
                let (cr, ci) = (&mut c_re[crow..crow + n], &mut c_im[crow..crow + n]);
                for j in 0..n {
                    cr[j] += ar * br[j] - ai * bi[j];
                    ci[j] += ar * bi[j] + ai * br[j];
                }
            }
        }
        let entries = c_re
            .into_iter()
            .zip(c_im)
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        Ok(CMatrix {
            dim: n,
            entries,
        })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Tr(AB) without forming the product.
    pub fn trace_of_product(&self, other: &CMatrix) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        Ok(acc)
    }

    /// Largest singular value, computed from the spectrum of A†A.
    pub fn operator_norm(&self) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let gram = self.dagger().mul(self)?;
        let vals = eigen::eigh_unchecked_values(&gram)?;
        Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    }

    /// `‖A − A†‖` together with the tolerance it is judged against.
    pub fn hermitian_certificate(&self) -> Result<HermitianCertificate> {
        let diff = self.sub(&self.dagger())?;
        let max_asymmetry = diff.operator_norm()?;
        let tol = tol::tol_herm(self.operator_norm()?);
        Ok(HermitianCertificate { max_asymmetry, tol })
    }

    pub(crate) fn certify_hermitian(&self) -> Result<()> {
        // Sufficient entrywise test first; it accepts exactly-hermitian
        // constructions without spectral work.
        let quick = self.max_entry_asymmetry() * self.dim as f64;
        if quick <= tol::TOL_HERM_REL * self.max_abs_entry() * tol::tol_scale() {
            return Ok(());
        }
        let cert = self.hermitian_certificate()?;
        if !cert.passes() {
            return Err(Error::NotHermitian {
                asymmetry: cert.max_asymmetry,
                tol: cert.tol,
            });
        }
        Ok(())
    }

    /// Full eigendecomposition of a certified hermitian matrix, eigenvalues
    /// ascending.
    pub fn hermitian_eigen(&self) -> Result<EigenDecomposition> {
        self.certify_hermitian()?;
        eigen::eigh_unchecked(self)
    }

    /// Ascending real eigenvalues of a certified hermitian matrix.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.certify_hermitian()?;
        eigen::eigh_unchecked_values(self)
    }

    /// Principal square root of a hermitian PSD matrix. Eigenvalues inside
    /// the tolerance band below zero are clamped to zero; anything lower is a
    /// definiteness error.
    pub fn hermitian_sqrt(&self) -> Result<CMatrix> {
        let eig = self.hermitian_eigen()?;
        let scale = eig.norm();
        let tol = tol::tol_psd(scale);
        if let Some(&lo) = eig.values.first() {
            if lo < -tol {
                return Err(Error::NotPsd {
                    eigenvalue: lo,
                    tol,
                });
            }
        }
        eig.apply(|v| v.max(0.0).sqrt())
    }

    /// Applies a real polynomial entrywise to the diagonal of an (already
    /// diagonal) matrix.
    pub fn matfun_diag(&self, p: &Polynomial) -> Result<CMatrix> {
        let tol = tol::tol_herm(self.max_abs_entry());
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    worst = worst.max(self[(i, j)].norm());
                }
            }
        }
        if worst > tol {
            return Err(Error::NotDiagonal {
                magnitude: worst,
                tol,
            });
        }
        let diag: Vec<Complex64> = (0..self.dim)
            .map(|i| p.eval_complex(self[(i, i)]))
            .collect();
        Ok(CMatrix::from_complex_diag(&diag))
    }

    /// Embeds `self` into the top-left block of an (N+1)x(N+1) zero matrix.
    pub fn pad(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n + 1);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(i, j)];
            }
        }
        out
    }
}

/// Outcome of a hermiticity check in operator-norm units.
#[derive(Debug, Clone, Copy)]
pub struct HermitianCertificate {
    pub max_asymmetry: f64,
    pub tol: f64,
}

impl HermitianCertificate {
    pub fn passes(&self) -> bool {
        self.max_asymmetry <= self.tol
    }
}

/// ab − ba. Anti-hermitian whenever a and b are hermitian.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Commutator of two hermitian matrices from a single product:
/// for hermitian a, b one has ba = (ab)†, so [a,b] = ab − (ab)†.
pub(crate) fn commutator_hermitian(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let p = a.mul(b)?;
    p.sub(&p.dagger())
}

/// Haar-ish random unitary (Gram-Schmidt of a complex Gaussian matrix),
/// deterministic in the seed. Used by the gauge-invariance checks.
pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
                })
                .collect()
        })
        .collect();
    // modified Gram-Schmidt
    for j in 0..dim {
        for prev in 0..j {
            let proj: Complex64 = (0..dim)
                .map(|r| cols[prev][r].conj() * cols[j][r])
                .sum();
            for r in 0..dim {
                let correction = proj * cols[prev][r];
                cols[j][r] -= correction;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for r in 0..dim {
            cols[j][r] /= norm;
        }
    }
    let mut m = CMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            m[(r, j)] = z;
        }
    }
    m
}

/// U A U†.
pub fn conjugate_by(u: &CMatrix, a: &CMatrix) -> Result<CMatrix> {
    u.mul(a)?.mul(&u.dagger())
}
