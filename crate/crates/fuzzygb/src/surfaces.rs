//! Constructors for the three families of fuzzy surfaces: the round sphere
//! from su(2) representations, the Clifford torus from clock/shift matrices,
//! and axially symmetric level sets x² + y² = f²(z) from the ladder
//! recursion w_k² = Σ_{l≤k} Q_l, Q_l = −2ħ (ff')(z_l).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{commutator, CMatrix};
use crate::poly::Polynomial;
use crate::regularize::{clock_shift, HbarRule};
use crate::tol;

/// Declarative surface choice.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSpec {
    RoundSphere,
    CliffordTorus,
    Axisymmetric {
        /// Coefficients of f² (ascending degree).
        fsq: Polynomial,
        /// z-interval of the surface; f² must be positive inside and vanish
        /// at both ends for spherical topology.
        domain: (f64, f64),
    },
}

impl SurfaceSpec {
    /// Axisymmetric spec with the domain taken from the two simple real
    /// roots of f² nearest ±1.
    pub fn axisymmetric_auto_domain(fsq: Polynomial) -> Result<SurfaceSpec> {
        let roots = fsq.simple_real_roots(fsq.root_bound(), 8192);
        if roots.len() != 2 {
            return Err(Error::Config(format!(
                "f² has {} simple real roots; pass an explicit domain",
                roots.len()
            )));
        }
        let spec = SurfaceSpec::Axisymmetric {
            fsq,
            domain: (roots[0], roots[1]),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the axisymmetric invariants: f² > 0 on the open interval
    /// (sampled on a 10³-point grid) and f² ≈ 0 at both endpoints.
    pub fn validate(&self) -> Result<()> {
        if let SurfaceSpec::Axisymmetric { fsq, domain } = self {
            let (lo, hi) = *domain;
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Config(format!("bad domain [{lo}, {hi}]")));
            }
            let scale = (0..=1000)
                .map(|i| fsq.eval(lo + (hi - lo) * i as f64 / 1000.0).abs())
                .fold(0.0, f64::max)
                .max(1.0);
            let end_tol = 1e-6 * scale;
            if fsq.eval(lo).abs() > end_tol || fsq.eval(hi).abs() > end_tol {
                return Err(Error::Config(format!(
                    "f² must vanish at the domain endpoints (got {} and {})",
                    fsq.eval(lo),
                    fsq.eval(hi)
                )));
            }
            for i in 1..1000 {
                let z = lo + (hi - lo) * i as f64 / 1000.0;
                if fsq.eval(z) <= 0.0 {
                    return Err(Error::Config(format!(
                        "f²({z}) = {} is not positive inside the domain",
                        fsq.eval(z)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The m hermitian embedding matrices X¹..X^m with ħ and optional normal
/// sequences N_A (p = m − 2 of them for the surfaces built here).
#[derive(Debug, Clone)]
pub struct EmbeddingSet {
    pub x: Vec<CMatrix>,
    pub normals: Option<Vec<Vec<CMatrix>>>,
    pub hbar: f64,
    pub n: usize,
}

impl EmbeddingSet {
    pub fn new(
        x: Vec<CMatrix>,
        normals: Option<Vec<Vec<CMatrix>>>,
        hbar: f64,
    ) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Domain("embedding needs at least one coordinate".into()));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        let n = x[0].dim();
        for xi in &x {
            if xi.dim() != n {
                return Err(Error::ShapeMismatch(n, xi.dim()));
            }
            xi.certify_hermitian()?;
        }
        if let Some(ns) = &normals {
            for na in ns {
                if na.len() != x.len() {
                    return Err(Error::ShapeMismatch(x.len(), na.len()));
                }
                for ni in na {
                    if ni.dim() != n {
                        return Err(Error::ShapeMismatch(n, ni.dim()));
                    }
                }
            }
        }
        Ok(Self { x, normals, hbar, n })
    }

    pub fn ambient_dim(&self) -> usize {
        self.x.len()
    }

    pub fn normal_count(&self) -> usize {
        self.normals.as_ref().map_or(0, |v| v.len())
    }
}

/// The spin-(N−1)/2 representation: S³ diagonal descending, S¹, S² from the
/// ladder operators, so that [S^j,S^k] = iε^{jk}_l S^l and
/// Σ(S^i)² = ((N²−1)/4)·𝟙.
pub fn su2_generators(n: usize) -> Result<(CMatrix, CMatrix, CMatrix)> {
    if n < 2 {
        return Err(Error::Domain("su(2) representation needs N >= 2".into()));
    }
    let j = (n as f64 - 1.0) / 2.0;
    let mut s3 = CMatrix::zeros(n);
    let mut sp = CMatrix::zeros(n); // raising operator
    for k in 0..n {
        s3[(k, k)] = Complex64::new(j - k as f64, 0.0);
    }
    for k in 0..n - 1 {
        // ladder weight sqrt(k(N-k)) with k = 1..N-1
        let kk = (k + 1) as f64;
        sp[(k, k + 1)] = Complex64::new((kk * (n as f64 - kk)).sqrt(), 0.0);
    }
    let sm = sp.dagger();
    let s1 = sp.add(&sm)?.scale_re(0.5);
    let s2 = sp.sub(&sm)?.scale(Complex64::new(0.0, -0.5));
    Ok((s1, s2, s3))
}

/// Round fuzzy sphere: X^i = (2/√(N²−1)) S^i, ħ = 2/√(N²−1), normals
/// N^i = X^i.
pub fn sphere_embedding(n: usize) -> Result<EmbeddingSet> {
    let hbar = HbarRule::Sphere.value(n)?;
    let (s1, s2, s3) = su2_generators(n)?;
    let x: Vec<CMatrix> = [s1, s2, s3].into_iter().map(|s| s.scale_re(hbar)).collect();
    let normals = vec![x.clone()];
    EmbeddingSet::new(x, Some(normals), hbar)
}

/// Fuzzy Clifford torus in ℝ⁴ from the clock/shift pair, ħ = sin(π/N);
/// normals N_± flip the sign of the last two components.
pub fn torus_embedding(n: usize) -> Result<EmbeddingSet> {
    let hbar = HbarRule::Torus.value(n)?;
    let (g, h) = clock_shift(n)?;
    let gd = g.dagger();
    let hd = h.dagger();
    let inv_2s2 = 1.0 / (2.0 * 2.0f64.sqrt());
    let x1 = gd.add(&g)?.scale_re(inv_2s2);
    let x2 = gd.sub(&g)?.scale(Complex64::new(0.0, inv_2s2));
    let x3 = hd.add(&h)?.scale_re(inv_2s2);
    let x4 = hd.sub(&h)?.scale(Complex64::new(0.0, inv_2s2));
    let x = vec![x1, x2, x3, x4];
    let n_plus = x.clone();
    let n_minus = vec![x[0].clone(), x[1].clone(), x[2].neg(), x[3].neg()];
    EmbeddingSet::new(x, Some(vec![n_plus, n_minus]), hbar)
}

/// Diagonal Z, bidiagonal W and the ladder weights of an axially symmetric
/// representation.
#[derive(Debug, Clone)]
pub struct AxisymRepresentation {
    /// z_k = (ħ/2)(N+1−2k), k = 1..N (descending, gap ħ).
    pub z: Vec<f64>,
    /// w_k ≥ 0 for k = 1..N−1 (the superdiagonal of W).
    pub w: Vec<f64>,
    /// w_k² for k = 1..N; the last entry is the closure residual.
    pub w_sq: Vec<f64>,
    /// Q_k = −2ħ (ff')(z_k).
    pub q: Vec<f64>,
    pub hbar: f64,
    pub fsq: Polynomial,
    /// ff' = (f²)'/2, kept as an exact polynomial.
    pub ff_prime: Polynomial,
}

impl AxisymRepresentation {
    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z_matrix(&self) -> CMatrix {
        CMatrix::from_real_diag(&self.z)
    }

    pub fn w_matrix(&self) -> CMatrix {
        let n = self.n();
        let mut w = CMatrix::zeros(n);
        for k in 0..n - 1 {
            w[(k, k + 1)] = Complex64::new(self.w[k], 0.0);
        }
        w
    }

    /// X = (W+W†)/2, Y = (W−W†)/(2i), Z.
    pub fn coordinates(&self) -> Result<(CMatrix, CMatrix, CMatrix)> {
        let w = self.w_matrix();
        let wd = w.dagger();
        let x = w.add(&wd)?.scale_re(0.5);
        let y = w.sub(&wd)?.scale(Complex64::new(0.0, -0.5));
        Ok((x, y, self.z_matrix()))
    }
}

/// Builds the ladder recursion for an axisymmetric spec at size N and the
/// given ħ. Fails if any intermediate w_k² is negative (the f/ħ/N
/// combination is unrepresentable) or the closure w_N² ≈ 0 is violated.
pub fn axisym_representation(
    spec: &SurfaceSpec,
    n: usize,
    hbar: f64,
) -> Result<AxisymRepresentation> {
    let fsq = match spec {
        SurfaceSpec::Axisymmetric { fsq, .. } => fsq.clone(),
        _ => return Err(Error::Config("axisym_representation needs an axisymmetric spec".into())),
    };
    if n < 2 {
        return Err(Error::Domain("axisymmetric representation needs N >= 2".into()));
    }
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    let ff_prime = fsq.derivative().scale(0.5);
    let z: Vec<f64> = (1..=n)
        .map(|k| 0.5 * hbar * (n as f64 + 1.0 - 2.0 * k as f64))
        .collect();
    let q: Vec<f64> = z.iter().map(|&zk| -2.0 * hbar * ff_prime.eval(zk)).collect();
    let mut w_sq = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &qk in &q {
        acc += qk;
        w_sq.push(acc);
    }
    let scale = w_sq.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let closure_tol = tol::tol_closure(scale.max(f64::MIN_POSITIVE));
    for (idx, &v) in w_sq.iter().take(n - 1).enumerate() {
        if v < -closure_tol {
            return Err(Error::Inadmissible {
                index: idx + 1,
                value: v,
            });
        }
    }
    let closure = w_sq[n - 1];
    if closure.abs() > closure_tol {
        return Err(Error::ClosureViolated {
            value: closure.abs(),
            tol: closure_tol,
        });
    }
    let w: Vec<f64> = w_sq[..n - 1].iter().map(|&v| v.max(0.0).sqrt()).collect();
    Ok(AxisymRepresentation {
        z,
        w,
        w_sq,
        q,
        hbar,
        fsq,
        ff_prime,
    })
}

/// Embedding (X, Y, Z) of an axisymmetric representation. Verifies the three
/// commutation relations [X,Y] = −iħ(ff')(Z), [Y,Z] = iħX, [Z,X] = iħY.
pub fn axisym_embedding(rep: &AxisymRepresentation) -> Result<EmbeddingSet> {
    let (x, y, z) = rep.coordinates()?;
    let hbar = rep.hbar;
    let scale = [&x, &y, &z]
        .iter()
        .map(|m| m.max_abs_entry())
        .fold(0.0, f64::max);
    let tol = 1e-10 * hbar * scale.max(1.0) * tol::tol_scale();

    let ffp_z = z.matfun_diag(&rep.ff_prime)?;
    let xy_target = ffp_z.scale(Complex64::new(0.0, -hbar));
    let residual_xy = commutator(&x, &y)?.sub(&xy_target)?.operator_norm()?;
    let residual_yz = commutator(&y, &z)?
        .sub(&x.scale(Complex64::new(0.0, hbar)))?
        .operator_norm()?;
    let residual_zx = commutator(&z, &x)?
        .sub(&y.scale(Complex64::new(0.0, hbar)))?
        .operator_norm()?;
    let worst = residual_xy.max(residual_yz).max(residual_zx);
    if worst > tol {
        return Err(Error::CommutationResidual {
            residual: worst,
            tol,
        });
    }
    EmbeddingSet::new(vec![x, y, z], None, hbar)
}

/// f̂² = X²+Y² = ½(WW†+W†W): diagonal with entries (w_k²+w_{k−1}²)/2.
pub fn fhat_squared(rep: &AxisymRepresentation) -> CMatrix {
    CMatrix::from_real_diag(&fhat_squared_diag(rep))
}

pub fn fhat_squared_diag(rep: &AxisymRepresentation) -> Vec<f64> {
    let n = rep.n();
    (0..n)
        .map(|k| {
            let prev = if k == 0 { 0.0 } else { rep.w_sq[k - 1] };
            let cur = if k == n - 1 { 0.0 } else { rep.w_sq[k] };
            0.5 * (cur.max(0.0) + prev.max(0.0))
        })
        .collect()
}

/// ‖X²+Y²+Z⁴+ħ²Z² − ħ⁴((N²−1)²/16)𝟙‖ for the f² = 1−z⁴ surface; the
/// subtracted scalar equals 1 under ħ = 2/√(N²−1).
pub fn casimir_defect(rep: &AxisymRepresentation) -> Result<f64> {
    let n = rep.n() as f64;
    let hbar = rep.hbar;
    let fhat2 = fhat_squared(rep);
    let z = rep.z_matrix();
    let z2 = z.mul(&z)?;
    let z4 = z2.mul(&z2)?;
    let casimir = fhat2.add(&z4)?.add(&z2.scale_re(hbar * hbar))?;
    let scalar = hbar.powi(4) * (n * n - 1.0).powi(2) / 16.0;
    casimir
        .sub(&CMatrix::identity(rep.n()).scale_re(scalar))?
        .operator_norm()
}

/// Calibrated ħ: golden-section search over (0, 2/(N−1)] minimizing
/// max_k |f̂²_k − f²(z_k)|. Representations with negative intermediate w²
/// score +∞.
pub fn calibrate_hbar(spec: &SurfaceSpec, n: usize) -> Result<f64> {
    let objective = |h: f64| -> f64 {
        match axisym_representation(spec, n, h) {
            Ok(rep) => {
                let fhat = fhat_squared_diag(&rep);
                rep.z
                    .iter()
                    .zip(&fhat)
                    .map(|(&zk, &fk)| (fk - rep.fsq.eval(zk)).abs())
                    .fold(0.0, f64::max)
            }
            Err(_) => f64::INFINITY,
        }
    };
    let mut lo = 1e-8 * 2.0 / (n as f64 - 1.0);
    let mut hi = 2.0 / (n as f64 - 1.0);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let mut fa = objective(a);
    let mut fb = objective(b);
    for _ in 0..200 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = objective(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = objective(b);
        }
        if (hi - lo) < 1e-12 * hi {
            break;
        }
    }
    let h = 0.5 * (lo + hi);
    if objective(h).is_finite() {
        Ok(h)
    } else {
        Err(Error::Domain(format!(
            "no admissible hbar found for N={n} in (0, {}]",
            2.0 / (n as f64 - 1.0)
        )))
    }
}
