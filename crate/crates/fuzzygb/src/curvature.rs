//! Discrete curvature K̂, the density γ̂², the discrete Euler characteristic
//! χ̂ = ħ Tr(γ̂ K̂), and the classical axisymmetric oracle used to cross-check
//! the convergence studies.
//!
//! Flat ambient space throughout: the ambient sectional curvature K̄₁₂ is a
//! caller-supplied matrix defaulting to zero.

use crate::error::{Error, Result};
use crate::linalg::{commutator_hermitian, CMatrix, EigenDecomposition};
use crate::poly::Polynomial;
use crate::surfaces::{AxisymRepresentation, EmbeddingSet, SurfaceSpec};
use crate::tol;

/// γ̂² = −(1/ħ²) Σ_{i<j} [X^i,X^j]², the matrix analogue of (√g/ρ)².
pub fn gamma_sq_from_embedding(e: &EmbeddingSet) -> Result<CMatrix> {
    let m = e.ambient_dim();
    let mut acc = CMatrix::zeros(e.n);
    for i in 0..m {
        for j in i + 1..m {
            let c = commutator_hermitian(&e.x[i], &e.x[j])?;
            acc = acc.add(&c.mul(&c)?)?;
        }
    }
    Ok(acc.scale_re(-1.0 / (e.hbar * e.hbar)))
}

/// tr̂Ŝ_A² = −(1/ħ²) Σ_{i,j} [X^i, N_A^j][X^j, N_A^i] for normal index A.
pub fn tr_s_sq_flat(e: &EmbeddingSet, normal_index: usize) -> Result<CMatrix> {
    let normals = e.normals.as_ref().ok_or(Error::MissingNormals)?;
    let na = normals
        .get(normal_index)
        .ok_or_else(|| Error::Domain(format!("normal index {normal_index} out of range")))?;
    let m = e.ambient_dim();
    // cache B_ij = [X^i, N^j]
    let mut b = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            b.push(commutator_hermitian(&e.x[i], &na[j])?);
        }
    }
    let mut acc = CMatrix::zeros(e.n);
    for i in 0..m {
        for j in 0..m {
            acc = acc.add(&b[i * m + j].mul(&b[j * m + i])?)?;
        }
    }
    Ok(acc.scale_re(-1.0 / (e.hbar * e.hbar)))
}

/// γ̂, γ̂⁻¹ and γ̂⁻² from one eigendecomposition of γ̂², with the
/// invertibility guard min λ > tol_psd·‖γ̂²‖.
pub(crate) struct GammaFactors {
    pub eig: EigenDecomposition,
}

impl GammaFactors {
    pub fn new(gamma_sq: &CMatrix) -> Result<Self> {
        let eig = gamma_sq.hermitian_eigen()?;
        let tol = tol::tol_psd(eig.norm());
        if eig.min_value() <= tol {
            return Err(Error::SingularGamma {
                min_eigenvalue: eig.min_value(),
                tol,
            });
        }
        Ok(Self { eig })
    }

    pub fn half(&self) -> Result<CMatrix> {
        self.eig.apply(f64::sqrt)
    }

    pub fn inv(&self) -> Result<CMatrix> {
        self.eig.apply(|v| 1.0 / v.sqrt())
    }

    pub fn inv_sq(&self) -> Result<CMatrix> {
        self.eig.apply(|v| 1.0 / v)
    }
}

/// K̂ = K̄₁₂ − ½ Σ_A γ̂⁻¹ (tr̂Ŝ_A²) γ̂⁻¹, with hermitian γ̂ so (γ̂†)⁻¹ = γ̂⁻¹.
/// An embedding without normals contributes an empty sum.
pub fn discrete_k(
    e: &EmbeddingSet,
    gamma_sq: &CMatrix,
    ambient_sectional: &CMatrix,
) -> Result<CMatrix> {
    let p = e.normal_count();
    if p == 0 {
        return Ok(ambient_sectional.clone());
    }
    let gamma = GammaFactors::new(gamma_sq)?;
    let inv = gamma.inv()?;
    let mut total = CMatrix::zeros(e.n);
    for a in 0..p {
        total = total.add(&tr_s_sq_flat(e, a)?)?;
    }
    let sandwich = inv.mul(&total)?.mul(&inv)?;
    ambient_sectional.sub(&sandwich.scale_re(0.5))
}

/// Normal-free ℝ³ curvature:
/// K̂ = −(1/8ħ⁴) ε_{jkl} ε_{ipq} γ̂⁻² [X^i,[X^k,X^l]] [X^j,[X^p,X^q]] γ̂⁻².
/// The ε contractions are evaluated through U_j = Σ_{kl} ε_{jkl}[X^k,X^l],
/// i.e. the sum collapses to Σ_{ij} [X^i,U_j][X^j,U_i].
pub fn discrete_k_r3(e: &EmbeddingSet, gamma_sq: &CMatrix) -> Result<CMatrix> {
    if e.ambient_dim() != 3 {
        return Err(Error::Domain(format!(
            "the epsilon-contracted formula needs m = 3, got {}",
            e.ambient_dim()
        )));
    }
    let gamma = GammaFactors::new(gamma_sq)?;
    let inv_sq = gamma.inv_sq()?;
    let u = [
        commutator_hermitian(&e.x[1], &e.x[2])?.scale_re(2.0),
        commutator_hermitian(&e.x[2], &e.x[0])?.scale_re(2.0),
        commutator_hermitian(&e.x[0], &e.x[1])?.scale_re(2.0),
    ];
    // [hermitian, anti-hermitian]: XU - UX = XU + (XU)†
    let comm_mixed = |x: &CMatrix, uu: &CMatrix| -> Result<CMatrix> {
        let p = x.mul(uu)?;
        p.add(&p.dagger())
    };
    let mut v = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            v.push(comm_mixed(&e.x[i], &u[j])?);
        }
    }
    let mut acc = CMatrix::zeros(e.n);
    for i in 0..3 {
        for j in 0..3 {
            acc = acc.add(&v[i * 3 + j].mul(&v[j * 3 + i])?)?;
        }
    }
    let hbar4 = e.hbar.powi(4);
    Ok(inv_sq
        .mul(&acc)?
        .mul(&inv_sq)?
        .scale_re(-1.0 / (8.0 * hbar4)))
}

/// §5 axisymmetric curvature:
/// K̂ = γ̂⁻² {(ff')²(Z) + (1/2ħ)[W, ff'(Z)]W† + (1/2ħ)W†[W, ff'(Z)]} γ̂⁻²,
/// diagonal by axial symmetry (enforced).
pub fn axisym_k(rep: &AxisymRepresentation) -> Result<CMatrix> {
    let n = rep.n();
    let hbar = rep.hbar;
    let w = rep.w_matrix();
    let wd = w.dagger();
    let z = rep.z_matrix();
    let p_z = z.matfun_diag(&rep.ff_prime)?;
    let comm_wp = w.mul(&p_z)?.sub(&p_z.mul(&w)?)?;
    let braces = p_z
        .mul(&p_z)?
        .add(&comm_wp.mul(&wd)?.scale_re(0.5 / hbar))?
        .add(&wd.mul(&comm_wp)?.scale_re(0.5 / hbar))?;
    let gamma_sq = gamma_sq_of_rep(rep)?;
    let gamma = GammaFactors::new(&gamma_sq)?;
    let inv_sq = gamma.inv_sq()?;
    let k = inv_sq.mul(&braces)?.mul(&inv_sq)?;

    let mut off = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off[(i, j)] = k[(i, j)];
            }
        }
    }
    let off_norm = off.operator_norm()?;
    let k_norm = k.operator_norm()?;
    let tol = 1e-8 * k_norm * tol::tol_scale();
    if off_norm > tol {
        return Err(Error::NotDiagonal {
            magnitude: off_norm,
            tol,
        });
    }
    Ok(k)
}

/// γ̂² of an axisymmetric representation through the embedding formula
/// −(1/ħ²)Σ[X^i,X^j]²; equals ½(WW†+W†W) + (ff')²(Z).
pub(crate) fn gamma_sq_of_rep(rep: &AxisymRepresentation) -> Result<CMatrix> {
    let (x, y, z) = rep.coordinates()?;
    let e = EmbeddingSet::new(vec![x, y, z], None, rep.hbar)?;
    gamma_sq_from_embedding(&e)
}

/// χ̂ = ħ Tr(γ̂ K̂) with γ̂ the principal square root of γ̂².
#[derive(Debug, Clone, Copy)]
pub struct EulerCharacteristic {
    pub chi: f64,
    /// |Im ħ Tr(γ̂K̂)|; exact arithmetic gives a real trace.
    pub imag_residual: f64,
}

pub fn euler_characteristic(
    k_hat: &CMatrix,
    gamma_sq: &CMatrix,
    hbar: f64,
) -> Result<EulerCharacteristic> {
    let gamma = gamma_sq.hermitian_sqrt()?;
    let tr = gamma.trace_of_product(k_hat)?;
    Ok(EulerCharacteristic {
        chi: hbar * tr.re,
        imag_residual: (hbar * tr.im).abs(),
    })
}

/// Numerical diagnostics carried with each curvature report.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Diagnostics {
    /// max-entry asymmetry of K̂.
    pub k_hermiticity: f64,
    /// max-entry asymmetry of γ̂².
    pub gamma_sq_hermiticity: f64,
    /// |Im ħ Tr(γ̂ K̂)|.
    pub chi_imag_residual: f64,
    pub gamma_sq_min_eigenvalue: f64,
}

/// K̂, γ̂², χ̂ and diagnostics for one matrix size.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub n: usize,
    pub hbar: f64,
    pub k_hat: CMatrix,
    pub gamma_sq: CMatrix,
    pub chi_hat: f64,
    /// K̄₁₂ term; the zero matrix for every flat-ambient surface built here.
    pub ambient_sectional: CMatrix,
    pub diagnostics: Diagnostics,
}

/// Normal-route curvature report for a flat embedding, caching the pair
/// commutators. Normal components that coincide with ±X^j reuse the cached
/// commutators; anything else falls back to the generic double sum.
pub fn flat_curvature_report(e: &EmbeddingSet) -> Result<CurvatureReport> {
    let m = e.ambient_dim();
    let n = e.n;
    let inv_h2 = 1.0 / (e.hbar * e.hbar);

    // pair commutators and their squares, indexed by i<j
    let mut comm = vec![None; m * m];
    let mut sq = vec![None; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let c = commutator_hermitian(&e.x[i], &e.x[j])?;
            let s = c.mul(&c)?;
            comm[i * m + j] = Some(c);
            sq[i * m + j] = Some(s);
        }
    }
    let mut gamma_sq = CMatrix::zeros(n);
    for i in 0..m {
        for j in i + 1..m {
            gamma_sq = gamma_sq.add(sq[i * m + j].as_ref().unwrap())?;
        }
    }
    let gamma_sq = gamma_sq.scale_re(-inv_h2);

    #[derive(Clone, Copy, PartialEq)]
    enum Align {
        Plus,
        Minus,
        Other,
    }
    let classify = |na: &CMatrix, xj: &CMatrix| -> Align {
        if na == xj {
            Align::Plus
        } else if na.neg() == *xj {
            Align::Minus
        } else {
            Align::Other
        }
    };

    let normals = e.normals.as_deref().unwrap_or(&[]);
    let mut total_tr_s_sq = CMatrix::zeros(n);
    for (a, na) in normals.iter().enumerate() {
        let signs: Vec<Align> = na
            .iter()
            .zip(&e.x)
            .map(|(nj, xj)| classify(nj, xj))
            .collect();
        if signs.iter().any(|s| *s == Align::Other) {
            total_tr_s_sq = total_tr_s_sq.add(&tr_s_sq_flat(e, a)?)?;
            continue;
        }
        // B_ij = s_j C_ij, so Σ_{i,j} B_ij B_ji = −2 Σ_{i<j} s_i s_j C_ij²
        let mut acc = CMatrix::zeros(n);
        for i in 0..m {
            for j in i + 1..m {
                let si = if signs[i] == Align::Plus { 1.0 } else { -1.0 };
                let sj = if signs[j] == Align::Plus { 1.0 } else { -1.0 };
                acc = acc.add(&sq[i * m + j].as_ref().unwrap().scale_re(si * sj))?;
            }
        }
        // tr̂Ŝ_A² = −(1/ħ²)·(−2 acc) = (2/ħ²) acc
        total_tr_s_sq = total_tr_s_sq.add(&acc.scale_re(2.0 * inv_h2))?;
    }

    let gamma = GammaFactors::new(&gamma_sq)?;
    let ambient = CMatrix::zeros(n);
    let k_hat = if normals.is_empty() {
        ambient.clone()
    } else {
        let inv = gamma.inv()?;
        ambient.sub(&inv.mul(&total_tr_s_sq)?.mul(&inv)?.scale_re(0.5))?
    };
    let gamma_half = gamma.half()?;
    let tr = gamma_half.trace_of_product(&k_hat)?;
    let chi_hat = e.hbar * tr.re;
    let diagnostics = Diagnostics {
        k_hermiticity: k_hat.max_entry_asymmetry(),
        gamma_sq_hermiticity: gamma_sq.max_entry_asymmetry(),
        chi_imag_residual: (e.hbar * tr.im).abs(),
        gamma_sq_min_eigenvalue: gamma.eig.min_value(),
    };
    Ok(CurvatureReport {
        n,
        hbar: e.hbar,
        k_hat,
        gamma_sq,
        chi_hat,
        ambient_sectional: ambient,
        diagnostics,
    })
}

/// Curvature report for an axisymmetric representation via the §5 diagonal
/// formulas.
pub fn axisym_curvature_report(rep: &AxisymRepresentation) -> Result<CurvatureReport> {
    let n = rep.n();
    let gamma_sq = gamma_sq_of_rep(rep)?;
    let k_hat = axisym_k(rep)?;
    let gamma = GammaFactors::new(&gamma_sq)?;
    let gamma_half = gamma.half()?;
    let tr = gamma_half.trace_of_product(&k_hat)?;
    let diagnostics = Diagnostics {
        k_hermiticity: k_hat.max_entry_asymmetry(),
        gamma_sq_hermiticity: gamma_sq.max_entry_asymmetry(),
        chi_imag_residual: (rep.hbar * tr.im).abs(),
        gamma_sq_min_eigenvalue: gamma.eig.min_value(),
    };
    Ok(CurvatureReport {
        n,
        hbar: rep.hbar,
        k_hat,
        gamma_sq,
        chi_hat: rep.hbar * tr.re,
        ambient_sectional: CMatrix::zeros(n),
        diagnostics,
    })
}

/// Classical geometry of an axisymmetric surface x²+y² = f²(z): Gauss
/// curvature, area density and the Euler characteristic, all expressed
/// through q = f² and p = ff' so the formulas stay polynomial-regular at
/// the (simple-root) endpoints.
#[derive(Debug, Clone)]
pub struct ClassicalAxisymGeometry {
    pub fsq: Polynomial,
    pub ff_prime: Polynomial,
    pub ff_prime_deriv: Polynomial,
    pub domain: (f64, f64),
    pub chi_classical: f64,
}

impl ClassicalAxisymGeometry {
    /// K = (p² − p'q)/(q + p²)².
    pub fn curvature(&self, z: f64) -> f64 {
        let q = self.fsq.eval(z);
        let p = self.ff_prime.eval(z);
        let pp = self.ff_prime_deriv.eval(z);
        (p * p - pp * q) / (q + p * p).powi(2)
    }

    /// √g = √(q + p²).
    pub fn sqrt_g(&self, z: f64) -> f64 {
        let q = self.fsq.eval(z);
        let p = self.ff_prime.eval(z);
        (q + p * p).sqrt()
    }

    /// K·√g, the Gauss–Bonnet integrand in z (the v-circle already
    /// integrated out up to the 1/2π factor).
    pub fn k_sqrt_g(&self, z: f64) -> f64 {
        let q = self.fsq.eval(z);
        let p = self.ff_prime.eval(z);
        let pp = self.ff_prime_deriv.eval(z);
        (p * p - pp * q) / (q + p * p).powf(1.5)
    }

    /// Closed-form antiderivative of K√g: −f'/√(1+f'²) = −p/√(q+p²).
    pub fn antiderivative(&self, z: f64) -> f64 {
        let q = self.fsq.eval(z);
        let p = self.ff_prime.eval(z);
        -p / (q + p * p).sqrt()
    }

    /// (1/2π)∫∫ K√g dv dz by adaptive Simpson quadrature.
    pub fn chi_quadrature(&self, tol: f64) -> f64 {
        adaptive_simpson(&|z| self.k_sqrt_g(z), self.domain.0, self.domain.1, tol)
    }
}

/// Classical reference data for an axisymmetric spec.
pub fn classical_axisym(spec: &SurfaceSpec) -> Result<ClassicalAxisymGeometry> {
    let (fsq, domain) = match spec {
        SurfaceSpec::Axisymmetric { fsq, domain } => (fsq.clone(), *domain),
        _ => {
            return Err(Error::Config(
                "classical_axisym needs an axisymmetric spec".into(),
            ))
        }
    };
    spec.validate()?;
    let ff_prime = fsq.derivative().scale(0.5);
    let ff_prime_deriv = ff_prime.derivative();
    let geo = ClassicalAxisymGeometry {
        chi_classical: 0.0,
        fsq,
        ff_prime,
        ff_prime_deriv,
        domain,
    };
    let chi = geo.antiderivative(domain.1) - geo.antiderivative(domain.0);
    Ok(ClassicalAxisymGeometry {
        chi_classical: chi,
        ..geo
    })
}

/// Plain recursive adaptive Simpson.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;
    use crate::regularize::HbarRule;
    use crate::surfaces::{
        axisym_representation, sphere_embedding, torus_embedding,
    };

    fn fsq_one_minus_z4() -> Polynomial {
        Polynomial::new(vec![1.0, 0.0, 0.0, 0.0, -1.0])
    }

    fn fsq_one_minus_z2() -> Polynomial {
        Polynomial::new(vec![1.0, 0.0, -1.0])
    }

    fn axisym_spec(fsq: Polynomial) -> SurfaceSpec {
        SurfaceSpec::Axisymmetric {
            fsq,
            domain: (-1.0, 1.0),
        }
    }

    fn op_err(a: &CMatrix, b: &CMatrix) -> f64 {
        a.sub(b).unwrap().operator_norm().unwrap()
    }

    #[test]
    fn sphere_gamma_is_identity() {
        for n in [2usize, 5, 12, 32] {
            let e = sphere_embedding(n).unwrap();
            let g = gamma_sq_from_embedding(&e).unwrap();
            assert!(op_err(&g, &CMatrix::identity(n)) < 1e-12, "N={n}");
        }
    }

    #[test]
    fn torus_gamma_is_identity() {
        for n in [2usize, 3, 9, 24] {
            let e = torus_embedding(n).unwrap();
            let g = gamma_sq_from_embedding(&e).unwrap();
            assert!(op_err(&g, &CMatrix::identity(n)) < 1e-12, "N={n}");
        }
    }

    #[test]
    fn axisym_gamma_matches_diag_formula() {
        // γ̂² = ½(WW†+W†W) + (ff')²(Z)
        let spec = axisym_spec(fsq_one_minus_z4());
        for n in [3usize, 9, 33] {
            let hbar = HbarRule::Sphere.value(n).unwrap();
            let rep = axisym_representation(&spec, n, hbar).unwrap();
            let dense = gamma_sq_of_rep(&rep).unwrap();
            let w = rep.w_matrix();
            let wd = w.dagger();
            let half = w
                .mul(&wd)
                .unwrap()
                .add(&wd.mul(&w).unwrap())
                .unwrap()
                .scale_re(0.5);
            let ffp = rep.z_matrix().matfun_diag(&rep.ff_prime).unwrap();
            let diag = half.add(&ffp.mul(&ffp).unwrap()).unwrap();
            assert!(op_err(&dense, &diag) < 1e-13, "N={n}");
        }
    }

    #[test]
    fn axisym_gamma_example_n3() {
        // fsq = 1-z^4, N=3, hbar=1/sqrt(2): γ̂² = 𝟙
        let spec = axisym_spec(fsq_one_minus_z4());
        let rep = axisym_representation(&spec, 3, 1.0 / 2.0f64.sqrt()).unwrap();
        let g = gamma_sq_of_rep(&rep).unwrap();
        let vals = g.hermitian_eigenvalues().unwrap();
        for v in vals {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn tr_s_sq_values() {
        // torus: tr̂Ŝ₊² = −2𝟙, tr̂Ŝ₋² = +2𝟙; sphere with N=X: −2𝟙
        for n in [2usize, 3, 8, 16] {
            let e = torus_embedding(n).unwrap();
            let plus = tr_s_sq_flat(&e, 0).unwrap();
            let minus = tr_s_sq_flat(&e, 1).unwrap();
            let two = CMatrix::identity(n).scale_re(2.0);
            assert!(op_err(&plus, &two.neg()) < 1e-12, "plus at N={n}");
            assert!(op_err(&minus, &two) < 1e-12, "minus at N={n}");
        }
        for n in [2usize, 7, 16] {
            let e = sphere_embedding(n).unwrap();
            let s = tr_s_sq_flat(&e, 0).unwrap();
            assert!(
                op_err(&s, &CMatrix::identity(n).scale_re(-2.0)) < 1e-12,
                "sphere at N={n}"
            );
        }
    }

    #[test]
    fn missing_normals_is_an_error() {
        let spec = axisym_spec(fsq_one_minus_z2());
        let rep = axisym_representation(&spec, 4, HbarRule::Sphere.value(4).unwrap()).unwrap();
        let e = crate::surfaces::axisym_embedding(&rep).unwrap();
        assert!(matches!(tr_s_sq_flat(&e, 0), Err(Error::MissingNormals)));
        // but discrete_k treats it as an empty sum
        let gsq = gamma_sq_from_embedding(&e).unwrap();
        let k = discrete_k(&e, &gsq, &CMatrix::zeros(4)).unwrap();
        assert!(k.operator_norm().unwrap() < 1e-15);
    }

    #[test]
    fn sphere_curvature_both_routes() {
        for n in [2usize, 3, 5, 8, 16] {
            let e = sphere_embedding(n).unwrap();
            let gsq = gamma_sq_from_embedding(&e).unwrap();
            let id = CMatrix::identity(n);
            let k1 = discrete_k(&e, &gsq, &CMatrix::zeros(n)).unwrap();
            let k2 = discrete_k_r3(&e, &gsq).unwrap();
            assert!(op_err(&k1, &id) < 1e-12, "normal route N={n}");
            assert!(op_err(&k2, &id) < 1e-12, "epsilon route N={n}");
            assert!(op_err(&k1, &k2) < 1e-12, "route agreement N={n}");
        }
    }

    #[test]
    fn epsilon_route_matches_brute_force() {
        // independent oracle: full enumeration of both ε tensors over 3^6
        // index tuples, signs from permutation parity
        fn eps(i: usize, j: usize, k: usize) -> f64 {
            match (i, j, k) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                _ => 0.0,
            }
        }
        for n in [2usize, 3, 4, 5] {
            let e = sphere_embedding(n).unwrap();
            let gsq = gamma_sq_from_embedding(&e).unwrap();
            let gamma = GammaFactors::new(&gsq).unwrap();
            let inv_sq = gamma.inv_sq().unwrap();
            let mut acc = CMatrix::zeros(n);
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        if eps(j, k, l) == 0.0 {
                            continue;
                        }
                        for i in 0..3 {
                            for p in 0..3 {
                                for q in 0..3 {
                                    if eps(i, p, q) == 0.0 {
                                        continue;
                                    }
                                    let ckl = commutator(&e.x[k], &e.x[l]).unwrap();
                                    let cpq = commutator(&e.x[p], &e.x[q]).unwrap();
                                    let left = commutator(&e.x[i], &ckl).unwrap();
                                    let right = commutator(&e.x[j], &cpq).unwrap();
                                    let term = left
                                        .mul(&right)
                                        .unwrap()
                                        .scale_re(eps(j, k, l) * eps(i, p, q));
                                    acc = acc.add(&term).unwrap();
                                }
                            }
                        }
                    }
                }
            }
            let brute = inv_sq
                .mul(&acc)
                .unwrap()
                .mul(&inv_sq)
                .unwrap()
                .scale_re(-1.0 / (8.0 * e.hbar.powi(4)));
            let grouped = discrete_k_r3(&e, &gsq).unwrap();
            assert!(op_err(&brute, &grouped) < 1e-11, "N={n}");
            assert!(op_err(&brute, &CMatrix::identity(n)) < 1e-11, "N={n}");
        }
    }

    #[test]
    fn torus_curvature_vanishes() {
        for n in [2usize, 4, 10, 24] {
            let e = torus_embedding(n).unwrap();
            let gsq = gamma_sq_from_embedding(&e).unwrap();
            let k = discrete_k(&e, &gsq, &CMatrix::zeros(n)).unwrap();
            assert!(k.operator_norm().unwrap() < 1e-12, "N={n}");
            let chi = euler_characteristic(&k, &gsq, e.hbar).unwrap();
            assert!(chi.chi.abs() < 1e-12, "N={n}");
        }
    }

    #[test]
    fn sphere_euler_characteristic_exact() {
        let e = sphere_embedding(10).unwrap();
        let gsq = gamma_sq_from_embedding(&e).unwrap();
        let k = discrete_k(&e, &gsq, &CMatrix::zeros(10)).unwrap();
        let chi = euler_characteristic(&k, &gsq, e.hbar).unwrap();
        assert!((chi.chi - 20.0 / 99.0f64.sqrt()).abs() < 1e-13);
        assert!(chi.imag_residual < 1e-13);
        // trace(K̂ sphere) = N
        assert!((k.trace().re - 10.0).abs() < 1e-12);
        // zero curvature gives zero characteristic
        let chi0 = euler_characteristic(&CMatrix::zeros(10), &gsq, e.hbar).unwrap();
        assert!(chi0.chi.abs() < 1e-15);
    }

    #[test]
    fn axisym_k_diagonal_and_leading_order() {
        let spec = axisym_spec(fsq_one_minus_z4());
        let n = 64;
        let hbar = HbarRule::Sphere.value(n).unwrap();
        let rep = axisym_representation(&spec, n, hbar).unwrap();
        let k = axisym_k(&rep).unwrap();
        // entrywise against (6z²−2z⁶)/(1−z⁴+4z⁶)², O(ħ) away
        let mut worst = 0.0f64;
        for (i, &z) in rep.z.iter().enumerate() {
            let lead = (6.0 * z.powi(2) - 2.0 * z.powi(6))
                / (1.0 - z.powi(4) + 4.0 * z.powi(6)).powi(2);
            worst = worst.max((k[(i, i)].re - lead).abs());
        }
        // the observed deviation is ~2ħ² (see the convergence tests); O(ħ)
        // with a modest constant is a safe envelope
        assert!(worst < 0.5 * hbar, "worst dev {worst} vs hbar {hbar}");
    }

    #[test]
    fn axisym_gamma_leading_order() {
        // ‖γ̂² − (𝟙 − Z⁴ + 4Z⁶)‖ = O(ħ) for fsq = 1−z⁴
        let spec = axisym_spec(fsq_one_minus_z4());
        for n in [32usize, 64] {
            let hbar = HbarRule::Sphere.value(n).unwrap();
            let rep = axisym_representation(&spec, n, hbar).unwrap();
            let gsq = gamma_sq_of_rep(&rep).unwrap();
            let lead_poly =
                Polynomial::new(vec![1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 4.0]);
            let lead = rep.z_matrix().matfun_diag(&lead_poly).unwrap();
            let dev = op_err(&gsq, &lead);
            assert!(dev < 0.2 * hbar, "N={n}: {dev} vs ħ={hbar}");
        }
    }

    #[test]
    fn axisym_sphere_chi_is_exact_hbar_n() {
        // fsq = 1−z²: K̂ = 𝟙, γ̂² = 𝟙, so χ̂ = ħN exactly
        let spec = axisym_spec(fsq_one_minus_z2());
        for n in [2usize, 8, 33] {
            let hbar = HbarRule::Sphere.value(n).unwrap();
            let rep = axisym_representation(&spec, n, hbar).unwrap();
            let report = axisym_curvature_report(&rep).unwrap();
            assert!(
                (report.chi_hat - hbar * n as f64).abs() < 1e-12,
                "N={n}"
            );
        }
    }

    #[test]
    fn two_r3_routes_agree() {
        let spec = axisym_spec(fsq_one_minus_z4());
        for n in [8usize, 16, 32] {
            let hbar = HbarRule::Sphere.value(n).unwrap();
            let rep = axisym_representation(&spec, n, hbar).unwrap();
            let e = crate::surfaces::axisym_embedding(&rep).unwrap();
            let gsq = gamma_sq_from_embedding(&e).unwrap();
            let k_eps = discrete_k_r3(&e, &gsq).unwrap();
            let k_axi = axisym_k(&rep).unwrap();
            assert!(op_err(&k_eps, &k_axi) < 1e-10, "N={n}");
        }
    }

    #[test]
    fn fast_report_matches_generic_ops() {
        for n in [3usize, 8, 17] {
            let e = sphere_embedding(n).unwrap();
            let report = flat_curvature_report(&e).unwrap();
            let gsq = gamma_sq_from_embedding(&e).unwrap();
            let k = discrete_k(&e, &gsq, &CMatrix::zeros(n)).unwrap();
            assert!(op_err(&report.gamma_sq, &gsq) < 1e-13, "gamma at N={n}");
            assert!(op_err(&report.k_hat, &k) < 1e-12, "K at N={n}");
            let chi = euler_characteristic(&k, &gsq, e.hbar).unwrap();
            assert!((report.chi_hat - chi.chi).abs() < 1e-13);
        }
        for n in [2usize, 6, 12] {
            let e = torus_embedding(n).unwrap();
            let report = flat_curvature_report(&e).unwrap();
            let gsq = gamma_sq_from_embedding(&e).unwrap();
            let k = discrete_k(&e, &gsq, &CMatrix::zeros(n)).unwrap();
            assert!(op_err(&report.gamma_sq, &gsq) < 1e-13, "gamma at N={n}");
            assert!(op_err(&report.k_hat, &k) < 1e-12, "K at N={n}");
        }
    }

    #[test]
    fn classical_axisym_references() {
        for fsq in [fsq_one_minus_z2(), fsq_one_minus_z4()] {
            let spec = axisym_spec(fsq);
            let geo = classical_axisym(&spec).unwrap();
            assert!((geo.chi_classical - 2.0).abs() < 1e-12);
            let quad = geo.chi_quadrature(1e-10);
            assert!((quad - 2.0).abs() < 1e-6, "quadrature {quad}");
        }
        // the round sphere has K ≡ 1 and √g ≡ 1
        let geo = classical_axisym(&axisym_spec(fsq_one_minus_z2())).unwrap();
        for z in [-0.9, -0.3, 0.0, 0.4, 0.8] {
            assert!((geo.curvature(z) - 1.0).abs() < 1e-12);
            assert!((geo.sqrt_g(z) - 1.0).abs() < 1e-12);
        }
        // interior positivity violation is rejected
        let bad = SurfaceSpec::Axisymmetric {
            fsq: Polynomial::new(vec![0.0, 0.0, 1.0, 0.0, -1.0]),
            domain: (-1.0, 1.0),
        };
        assert!(classical_axisym(&bad).is_err());
    }

    #[test]
    fn gauge_invariance_small() {
        use crate::linalg::{conjugate_by, random_unitary};
        let n = 12;
        let e = sphere_embedding(n).unwrap();
        let u = random_unitary(n, 7);
        let x: Vec<CMatrix> = e
            .x
            .iter()
            .map(|xi| conjugate_by(&u, xi).unwrap())
            .collect();
        let normals = vec![x.clone()];
        let conj = EmbeddingSet::new(x, Some(normals), e.hbar).unwrap();
        let r0 = flat_curvature_report(&e).unwrap();
        let r1 = flat_curvature_report(&conj).unwrap();
        assert!((r0.chi_hat - r1.chi_hat).abs() < 1e-11);
        // spectra of γ̂² agree
        let v0 = r0.gamma_sq.hermitian_eigenvalues().unwrap();
        let v1 = r1.gamma_sq.hermitian_eigenvalues().unwrap();
        for (a, b) in v0.iter().zip(&v1) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn simpson_integrates_polynomials() {
        let val = adaptive_simpson(&|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 1e-12);
        // ∫(x³−2x+1) over [−1,2] = [x⁴/4 − x² + x] = (4−4+2)−(1/4−1−1) = 3.75
        assert!((val - 3.75).abs() < 1e-10);
    }
}
