//! Quantization maps and numerical meters for the matrix-regularization
//! axioms: the clock/shift pair, the torus quantization map on Fourier
//! modes, and defect measurements for the product, commutator, trace and
//! unitality properties.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{commutator, CMatrix};

/// Choice of the ħ(N) sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HbarRule {
    /// ħ = 2/√(N²−1), the round-sphere value.
    Sphere,
    /// ħ = sin(π/N), the Clifford-torus value.
    Torus,
    /// A fixed caller-supplied value.
    Explicit(f64),
}

impl HbarRule {
    pub fn value(&self, n: usize) -> Result<f64> {
        match self {
            HbarRule::Sphere => {
                if n < 2 {
                    return Err(Error::Domain("sphere rule needs N >= 2".into()));
                }
                Ok(2.0 / ((n * n - 1) as f64).sqrt())
            }
            HbarRule::Torus => {
                if n < 2 {
                    return Err(Error::Domain("torus rule needs N >= 2".into()));
                }
                Ok((PI / n as f64).sin())
            }
            HbarRule::Explicit(h) => {
                if !h.is_finite() || *h <= 0.0 {
                    return Err(Error::Domain(format!("hbar must be positive, got {h}")));
                }
                Ok(*h)
            }
        }
    }
}

/// Fourier mode (m1, m2) of Y_m = e^{i m·φ} on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourierMode {
    pub m1: i64,
    pub m2: i64,
}

impl FourierMode {
    pub fn new(m1: i64, m2: i64) -> Self {
        Self { m1, m2 }
    }

    pub fn add(&self, other: &FourierMode) -> FourierMode {
        FourierMode::new(self.m1 + other.m1, self.m2 + other.m2)
    }

    /// Cross product m1 n2 − m2 n1, the coefficient in
    /// {Y_m, Y_n} = −2 (m × n) Y_{m+n} for density ρ = 1/2.
    pub fn cross(&self, other: &FourierMode) -> i64 {
        self.m1 * other.m2 - self.m2 * other.m1
    }

    pub fn is_zero(&self) -> bool {
        self.m1 == 0 && self.m2 == 0
    }
}

/// Per-N axiom defect summary over a mode window.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomDefectReport {
    pub n: usize,
    pub product_defect: f64,
    pub bracket_defect: f64,
    pub trace_defect: f64,
    pub unitality_defect: f64,
}

/// Clock matrix g (diagonal powers of ω = e^{2πi/N}) and shift matrix h,
/// satisfying hg = ωgh exactly.
pub fn clock_shift(n: usize) -> Result<(CMatrix, CMatrix)> {
    if n < 2 {
        return Err(Error::Domain("clock/shift need N >= 2".into()));
    }
    let theta = PI / n as f64;
    let mut g = CMatrix::zeros(n);
    let mut h = CMatrix::zeros(n);
    for k in 0..n {
        g[(k, k)] = Complex64::from_polar(1.0, 2.0 * theta * k as f64);
        h[(k, (k + 1) % n)] = Complex64::ONE;
    }
    Ok((g, h))
}

/// T(Y_m) = ω^{m1 m2/2} g^{m1} h^{m2} with ω^{1/2} = e^{iπ/N}. Negative
/// exponents are the unitary inverses g†, h†; the entries are evaluated in
/// closed form, g^{m1} h^{m2} having the single band k → k+m2 (mod N).
pub fn torus_quantize(mode: FourierMode, n: usize) -> Result<CMatrix> {
    if n < 2 {
        return Err(Error::Domain("torus quantization needs N >= 2".into()));
    }
    let theta = PI / n as f64;
    let ni = n as i64;
    let mut t = CMatrix::zeros(n);
    for k in 0..n {
        let col = (k as i64 + mode.m2).rem_euclid(ni) as usize;
        let arg = theta * (mode.m1 as f64) * (mode.m2 as f64 + 2.0 * k as f64);
        t[(k, col)] = Complex64::from_polar(1.0, arg);
    }
    Ok(t)
}

/// ‖(1/iħ)[T(Y_m), T(Y_n)] − T({Y_m, Y_n})‖ with {Y_m,Y_n} = −2(m×n)Y_{m+n}
/// and ħ = sin(π/N).
pub fn torus_bracket_defect(m: FourierMode, n_mode: FourierMode, n: usize) -> Result<f64> {
    let hbar = HbarRule::Torus.value(n)?;
    let tm = torus_quantize(m, n)?;
    let tn = torus_quantize(n_mode, n)?;
    let comm = commutator(&tm, &tn)?;
    let lhs = comm.scale(Complex64::new(0.0, -1.0 / hbar)); // 1/(iħ) = −i/ħ
    let target = torus_quantize(m.add(&n_mode), n)?.scale_re(-2.0 * m.cross(&n_mode) as f64);
    lhs.sub(&target)?.operator_norm()
}

/// ‖T(Y_m)T(Y_n) − T(Y_{m+n})‖; on the torus Y_m Y_n = Y_{m+n}.
pub fn torus_product_defect(m: FourierMode, n_mode: FourierMode, n: usize) -> Result<f64> {
    let tm = torus_quantize(m, n)?;
    let tn = torus_quantize(n_mode, n)?;
    let prod = tm.mul(&tn)?;
    prod.sub(&torus_quantize(m.add(&n_mode), n)?)?.operator_norm()
}

/// 2πħ Tr(a), the discrete counterpart of ∫ f ω.
pub fn trace_functional(a: &CMatrix, hbar: f64) -> Complex64 {
    a.trace() * (2.0 * PI * hbar)
}

/// ∫ Y_m ω over the Clifford torus with ω = (1/2) dφ₁∧dφ₂: 2π² for the zero
/// mode, 0 otherwise.
pub fn torus_mode_integral(mode: FourierMode) -> Complex64 {
    if mode.is_zero() {
        Complex64::new(2.0 * PI * PI, 0.0)
    } else {
        Complex64::ZERO
    }
}

/// ‖𝟙 − T(1)‖.
pub fn unitality_defect(t_of_one: &CMatrix) -> Result<f64> {
    CMatrix::identity(t_of_one.dim()).sub(t_of_one)?.operator_norm()
}

/// The non-unital padding: embeds the map's output into the top-left block
/// of an (N+1)×(N+1) zero matrix.
pub fn pad_nonunital(a: &CMatrix) -> CMatrix {
    a.pad()
}

/// Canonical mode pairs for a defect sweep with |m1|,|m2| ≤ cutoff.
///
/// The defect is invariant under (m,n) → (n,m) (the defect matrix flips
/// sign) and (m,n) → (−m,−n) (the defect matrix is conjugate-transposed),
/// so only one representative per orbit is measured.
pub fn canonical_mode_pairs(cutoff: i64) -> Vec<(FourierMode, FourierMode)> {
    let mut pairs = Vec::new();
    let range: Vec<i64> = (-cutoff..=cutoff).collect();
    let key = |m: &FourierMode, n: &FourierMode| (m.m1, m.m2, n.m1, n.m2);
    for &m1 in &range {
        for &m2 in &range {
            for &n1 in &range {
                for &n2 in &range {
                    let m = FourierMode::new(m1, m2);
                    let n = FourierMode::new(n1, n2);
                    let k = key(&m, &n);
                    let mirrors = [
                        key(&n, &m),
                        key(&FourierMode::new(-m1, -m2), &FourierMode::new(-n1, -n2)),
                        key(&FourierMode::new(-n1, -n2), &FourierMode::new(-m1, -m2)),
                    ];
                    if mirrors.iter().all(|mk| k <= *mk) {
                        pairs.push((m, n));
                    }
                }
            }
        }
    }
    pairs
}

/// Max product/bracket/trace/unitality defects over modes |m1|,|m2| ≤ cutoff
/// at one N.
pub fn axiom_defects(n: usize, cutoff: i64) -> Result<AxiomDefectReport> {
    let hbar = HbarRule::Torus.value(n)?;
    let mut bracket = 0.0f64;
    let mut product = 0.0f64;
    for (m, nn) in canonical_mode_pairs(cutoff) {
        bracket = bracket.max(torus_bracket_defect(m, nn, n)?);
        product = product.max(torus_product_defect(m, nn, n)?);
    }
    let mut trace = 0.0f64;
    for m1 in -cutoff..=cutoff {
        for m2 in -cutoff..=cutoff {
            let mode = FourierMode::new(m1, m2);
            let t = torus_quantize(mode, n)?;
            let lhs = trace_functional(&t, hbar);
            trace = trace.max((lhs - torus_mode_integral(mode)).norm());
        }
    }
    let unitality = unitality_defect(&torus_quantize(FourierMode::new(0, 0), n)?)?;
    Ok(AxiomDefectReport {
        n,
        product_defect: product,
        bracket_defect: bracket,
        trace_defect: trace,
        unitality_defect: unitality,
    })
}
