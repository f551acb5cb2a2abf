//! Convergence sweeps over the matrix size N, axiom-defect sweeps, and the
//! CSV/JSON report formats consumed by the CLI.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{
    axisym_curvature_report, classical_axisym, flat_curvature_report, CurvatureReport,
    Diagnostics,
};
use crate::error::{Error, Result};
use crate::regularize::{axiom_defects, AxiomDefectReport, HbarRule};
use crate::surfaces::{
    axisym_representation, calibrate_hbar, sphere_embedding, torus_embedding, SurfaceSpec,
};

/// How ħ is chosen for axisymmetric sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HbarMode {
    /// The per-family rule: 2/√(N²−1) for the sphere and axisymmetric
    /// surfaces, sin(π/N) for the torus.
    Rule,
    /// Golden-section fit of ħ minimizing ‖f̂²(Z) − f²(Z)‖ (axisym only).
    Calibrate,
    Explicit(f64),
}

/// One sweep configuration.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub surface: SurfaceSpec,
    pub n_list: Vec<usize>,
    pub hbar_mode: HbarMode,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::Config("n list must be nonempty".into()));
        }
        for w in self.n_list.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Config("n list must be strictly ascending".into()));
            }
        }
        if self.n_list[0] < 2 {
            return Err(Error::Config("every N must be at least 2".into()));
        }
        self.surface.validate()?;
        if matches!(self.hbar_mode, HbarMode::Calibrate | HbarMode::Explicit(_))
            && !matches!(self.surface, SurfaceSpec::Axisymmetric { .. })
        {
            return Err(Error::Config(
                "hbar overrides only apply to axisymmetric sweeps".into(),
            ));
        }
        Ok(())
    }
}

/// One successful sweep row.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub hbar: f64,
    pub chi_hat: f64,
    pub abs_err: f64,
    pub runtime_ms: f64,
    pub diagnostics: Diagnostics,
}

/// A row that could not be computed, with the reason.
#[derive(Debug, Clone, Serialize)]
pub struct RowFailure {
    pub n: usize,
    pub reason: String,
}

/// Sweep result: rows sorted by N, per-row failures, and the fitted decay
/// rate of log|abs_err| against log N (when at least three rows have
/// nonzero error).
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub surface: String,
    pub chi_classical: f64,
    pub rows: Vec<SweepRow>,
    pub failures: Vec<RowFailure>,
    pub fitted_rate: Option<f64>,
}

/// Least-squares slope of ln(y) against ln(x) over points with y > 0.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if usable.len() < 3 {
        return None;
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = usable.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if var == 0.0 {
        return None;
    }
    Some(cov / var)
}

fn surface_label(spec: &SurfaceSpec) -> String {
    match spec {
        SurfaceSpec::RoundSphere => "sphere".into(),
        SurfaceSpec::CliffordTorus => "torus".into(),
        SurfaceSpec::Axisymmetric { fsq, .. } => {
            let coeffs: Vec<String> = fsq.coeffs().iter().map(|c| c.to_string()).collect();
            format!("axisym f2=[{}]", coeffs.join(","))
        }
    }
}

/// Curvature report for one surface row.
pub fn curvature_report_for(
    spec: &SurfaceSpec,
    n: usize,
    hbar_mode: HbarMode,
) -> Result<CurvatureReport> {
    match spec {
        SurfaceSpec::RoundSphere => flat_curvature_report(&sphere_embedding(n)?),
        SurfaceSpec::CliffordTorus => flat_curvature_report(&torus_embedding(n)?),
        SurfaceSpec::Axisymmetric { .. } => {
            let hbar = match hbar_mode {
                HbarMode::Rule => HbarRule::Sphere.value(n)?,
                HbarMode::Calibrate => calibrate_hbar(spec, n)?,
                HbarMode::Explicit(h) => HbarRule::Explicit(h).value(n)?,
            };
            let rep = axisym_representation(spec, n, hbar)?;
            axisym_curvature_report(&rep)
        }
    }
}

/// Runs the sweep. Rows execute concurrently; failed rows are recorded and
/// the sweep continues.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ConvergenceTable> {
    cfg.validate()?;
    let chi_classical = match &cfg.surface {
        SurfaceSpec::RoundSphere => 2.0,
        SurfaceSpec::CliffordTorus => 0.0,
        spec @ SurfaceSpec::Axisymmetric { .. } => classical_axisym(spec)?.chi_classical,
    };
    let outcomes: Vec<(usize, Result<SweepRow>)> = cfg
        .n_list
        .par_iter()
        .map(|&n| {
            let start = std::time::Instant::now();
            let row = curvature_report_for(&cfg.surface, n, cfg.hbar_mode).map(|report| {
                SweepRow {
                    n,
                    hbar: report.hbar,
                    chi_hat: report.chi_hat,
                    abs_err: (report.chi_hat - chi_classical).abs(),
                    runtime_ms: start.elapsed().as_secs_f64() * 1e3,
                    diagnostics: report.diagnostics,
                }
            });
            (n, row)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (n, outcome) in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(err) => failures.push(RowFailure {
                n,
                reason: err.to_string(),
            }),
        }
    }
    rows.sort_by_key(|r| r.n);
    let fitted_rate = fit_log_slope(
        &rows
            .iter()
            .map(|r| (r.n as f64, r.abs_err))
            .collect::<Vec<_>>(),
    );
    Ok(ConvergenceTable {
        surface: surface_label(&cfg.surface),
        chi_classical,
        rows,
        failures,
        fitted_rate,
    })
}

/// Axiom-defect sweep (torus quantization map) with fitted decay rates of
/// the max bracket and product defects.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomSweep {
    pub mode_cutoff: i64,
    pub reports: Vec<AxiomDefectReport>,
    pub bracket_rate: Option<f64>,
    pub product_rate: Option<f64>,
}

pub fn run_axiom_check(n_list: &[usize], mode_cutoff: i64) -> Result<AxiomSweep> {
    if n_list.is_empty() {
        return Err(Error::Config("n list must be nonempty".into()));
    }
    if mode_cutoff < 0 {
        return Err(Error::Config("mode cutoff must be nonnegative".into()));
    }
    let reports: Vec<AxiomDefectReport> = n_list
        .par_iter()
        .map(|&n| axiom_defects(n, mode_cutoff))
        .collect::<Result<Vec<_>>>()?;
    let bracket_rate = fit_log_slope(
        &reports
            .iter()
            .map(|r| (r.n as f64, r.bracket_defect))
            .collect::<Vec<_>>(),
    );
    let product_rate = fit_log_slope(
        &reports
            .iter()
            .map(|r| (r.n as f64, r.product_defect))
            .collect::<Vec<_>>(),
    );
    Ok(AxiomSweep {
        mode_cutoff,
        reports,
        bracket_rate,
        product_rate,
    })
}

// --- report formats ---------------------------------------------------------

/// Fixed CSV columns, 17 significant digits so every f64 round-trips.
pub fn table_to_csv(table: &ConvergenceTable) -> String {
    let mut out = String::from("N,hbar,chi_hat,abs_err,runtime_ms\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.n, r.hbar, r.chi_hat, r.abs_err, r.runtime_ms
        ));
    }
    out
}

/// Parses the CSV emitted by [`table_to_csv`] back into rows.
pub fn parse_csv_rows(text: &str) -> Result<Vec<(usize, f64, f64, f64, f64)>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty csv".into()))?;
    if header.trim() != "N,hbar,chi_hat,abs_err,runtime_ms" {
        return Err(Error::Config(format!("unexpected csv header {header:?}")));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 5 {
            return Err(Error::Config(format!("bad csv row {line:?}")));
        }
        let n: usize = parts[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad N in {line:?}")))?;
        let mut vals = [0.0f64; 4];
        for (slot, part) in vals.iter_mut().zip(&parts[1..]) {
            *slot = part
                .parse()
                .map_err(|_| Error::Config(format!("bad float in {line:?}")))?;
        }
        rows.push((n, vals[0], vals[1], vals[2], vals[3]));
    }
    Ok(rows)
}

pub fn table_to_json(table: &ConvergenceTable) -> String {
    serde_json::to_string_pretty(table).expect("table serializes")
}

pub fn axiom_sweep_to_csv(sweep: &AxiomSweep) -> String {
    let mut out = String::from("N,product_defect,bracket_defect,trace_defect,unitality_defect\n");
    for r in &sweep.reports {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.n, r.product_defect, r.bracket_defect, r.trace_defect, r.unitality_defect
        ));
    }
    out
}

pub fn axiom_sweep_to_json(sweep: &AxiomSweep) -> String {
    serde_json::to_string_pretty(sweep).expect("sweep serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn sphere_cfg(ns: &[usize]) -> SweepConfig {
        SweepConfig {
            surface: SurfaceSpec::RoundSphere,
            n_list: ns.to_vec(),
            hbar_mode: HbarMode::Rule,
        }
    }

    #[test]
    fn sphere_sweep_rows() {
        let table = run_sweep(&sphere_cfg(&[2, 10, 100])).unwrap();
        assert!(table.failures.is_empty());
        let want = [
            2.3094010767585034,
            2.010075630518424,
            2.000100007500625,
        ];
        for (row, want) in table.rows.iter().zip(want) {
            assert!(
                (row.chi_hat - want).abs() < 1e-12,
                "N={}: {} vs {want}",
                row.n,
                row.chi_hat
            );
        }
        assert_eq!(table.chi_classical, 2.0);
    }

    #[test]
    fn torus_sweep_rows_vanish() {
        let table = run_sweep(&SweepConfig {
            surface: SurfaceSpec::CliffordTorus,
            n_list: vec![2, 5, 16],
            hbar_mode: HbarMode::Rule,
        })
        .unwrap();
        for row in &table.rows {
            assert!(row.chi_hat.abs() < 1e-12);
            assert!(row.abs_err < 1e-12);
        }
        // no fit with all-zero errors
        assert!(table.fitted_rate.is_none());
    }

    #[test]
    fn axisym_sweep_converges() {
        let spec = SurfaceSpec::Axisymmetric {
            fsq: Polynomial::new(vec![1.0, 0.0, 0.0, 0.0, -1.0]),
            domain: (-1.0, 1.0),
        };
        let table = run_sweep(&SweepConfig {
            surface: spec,
            n_list: vec![8, 16, 32, 64],
            hbar_mode: HbarMode::Rule,
        })
        .unwrap();
        assert!(table.failures.is_empty());
        let errs: Vec<f64> = table.rows.iter().map(|r| r.abs_err).collect();
        assert!(errs.windows(2).all(|w| w[0] > w[1]), "{errs:?}");
        let rate = table.fitted_rate.unwrap();
        assert!(rate < -1.5, "rate {rate}");
    }

    #[test]
    fn failed_rows_are_recorded() {
        // f² = 1−z³ violates closure for every N
        let spec = SurfaceSpec::Axisymmetric {
            fsq: Polynomial::new(vec![1.0, 0.0, 0.0, -1.0]),
            domain: (-1.0, 1.0),
        };
        let err = run_sweep(&SweepConfig {
            surface: spec,
            n_list: vec![4, 8],
            hbar_mode: HbarMode::Rule,
        });
        // the domain endpoints don't vanish, so this is a config error
        assert!(err.is_err());

        // an admissible spec whose recursion fails only at larger N is hard
        // to arrange here; instead check row isolation with explicit hbar on
        // a valid spec (all rows succeed, none dropped)
        let spec = SurfaceSpec::Axisymmetric {
            fsq: Polynomial::new(vec![1.0, 0.0, 0.0, 0.0, -1.0]),
            domain: (-1.0, 1.0),
        };
        let table = run_sweep(&SweepConfig {
            surface: spec,
            n_list: vec![4, 8],
            hbar_mode: HbarMode::Explicit(0.05),
        })
        .unwrap();
        assert_eq!(table.rows.len() + table.failures.len(), 2);
    }

    #[test]
    fn config_validation() {
        assert!(run_sweep(&sphere_cfg(&[])).is_err());
        assert!(run_sweep(&sphere_cfg(&[4, 4])).is_err());
        assert!(run_sweep(&sphere_cfg(&[1, 4])).is_err());
        assert!(run_sweep(&SweepConfig {
            surface: SurfaceSpec::RoundSphere,
            n_list: vec![2, 4],
            hbar_mode: HbarMode::Explicit(0.3),
        })
        .is_err());
    }

    #[test]
    fn csv_round_trip() {
        let table = run_sweep(&sphere_cfg(&[2, 7, 23])).unwrap();
        let csv = table_to_csv(&table);
        let rows = parse_csv_rows(&csv).unwrap();
        assert_eq!(rows.len(), table.rows.len());
        for (parsed, row) in rows.iter().zip(&table.rows) {
            assert_eq!(parsed.0, row.n);
            assert_eq!(parsed.1, row.hbar, "hbar must round-trip exactly");
            assert_eq!(parsed.2, row.chi_hat);
            assert_eq!(parsed.3, row.abs_err);
            assert_eq!(parsed.4, row.runtime_ms);
        }
        assert!(parse_csv_rows("bogus\n1,2").is_err());
    }

    #[test]
    fn json_contains_diagnostics() {
        let table = run_sweep(&sphere_cfg(&[2, 5])).unwrap();
        let json = table_to_json(&table);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let rows = parsed["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0]["diagnostics"]["gamma_sq_min_eigenvalue"].as_f64().unwrap() > 0.9);
        assert!(rows[0]["diagnostics"]["chi_imag_residual"].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn axiom_check_reports() {
        let sweep = run_axiom_check(&[8, 16], 2).unwrap();
        assert_eq!(sweep.reports.len(), 2);
        for rep in &sweep.reports {
            assert!(rep.unitality_defect < 1e-14);
            // the trace defect is dominated by the zero mode's finite-N
            // area deficit |2πNħ − 2π²|; nonzero modes are traceless
            let nf = rep.n as f64;
            let area_gap = (2.0 * std::f64::consts::PI * nf * (std::f64::consts::PI / nf).sin()
                - 2.0 * std::f64::consts::PI * std::f64::consts::PI)
                .abs();
            assert!(
                (rep.trace_defect - area_gap).abs() < 1e-12,
                "N={}: {} vs {}",
                rep.n,
                rep.trace_defect,
                area_gap
            );
            assert!(rep.bracket_defect > 0.0);
            assert!(rep.product_defect > 0.0);
        }
        // the N=8 cutoff-2 bracket defect includes the pinned pair value
        let want = 4.0 * (1.0 - (std::f64::consts::PI / 8.0).cos());
        assert!(sweep.reports[0].bracket_defect >= want - 1e-12);
    }

    #[test]
    fn fit_log_slope_recovers_power_law() {
        let pts: Vec<(f64, f64)> = [8.0, 16.0, 32.0, 64.0]
            .iter()
            .map(|&n: &f64| (n, 3.5 * n.powf(-2.0)))
            .collect();
        let slope = fit_log_slope(&pts).unwrap();
        assert!((slope + 2.0).abs() < 1e-12);
        assert!(fit_log_slope(&pts[..2]).is_none());
    }
}
