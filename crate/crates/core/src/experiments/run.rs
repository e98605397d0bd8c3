use crate::coefficients::CoefficientField;
use crate::error::{HomogError, Result};
use crate::homogenize1d::{
    extract_diagonal, homogenize_kernel_1d, offdiag_mass, raw_filter_1d, HomogenizedKernel,
};
use crate::homogenize2d::{homogenize_2d_with_cap, raw_filter_2d, Basis2D, TensorCoefficient2D};
use crate::solvers::{
    coarse_compare, compare_solutions, exact_diffusion_1d, solve_diffusion_2d_fd,
    BoundaryConditions2D, CompareMode, SolveResult,
};
use crate::spectral_ops::ProjectionBasis;

use super::config::{ExperimentConfig, ExperimentKind};
use super::csv::{fmt_f64, sweep_to_csv, GridCsv, Method, SweepRecord};

/// A file produced by a run, relative to the output directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

impl OutputFile {
    fn new(name: impl Into<String>, contents: String) -> Self {
        Self {
            name: name.into(),
            contents,
        }
    }
}

fn expect_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.kind != kind {
        return Err(HomogError::Config(format!(
            "expected a {} config, got {}",
            kind.name(),
            cfg.kind.name()
        )));
    }
    cfg.validate()
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub log: Vec<String>,
    pub files: Vec<OutputFile>,
}

impl SweepOutput {
    fn finish(cfg: &ExperimentConfig, name: &str, records: Vec<SweepRecord>, log: Vec<String>) -> Self {
        let mut run_log = log.join("\n");
        run_log.push('\n');
        let files = vec![
            OutputFile::new(format!("{name}.csv"), sweep_to_csv(&records)),
            OutputFile::new("config.txt", cfg.to_text()),
            OutputFile::new("run.log", run_log),
        ];
        Self { records, log, files }
    }

    pub fn csv(&self) -> &str {
        &self.files[0].contents
    }

    pub fn get(&self, pct: f64, method: Method) -> Option<&SweepRecord> {
        self.records
            .iter()
            .find(|r| r.bandwidth_pct == pct && r.method == method)
    }
}

struct Template<'a> {
    pct: f64,
    cutoff: usize,
    a: &'a CoefficientField,
}

impl Template<'_> {
    fn record(&self, method: Method) -> SweepRecord {
        SweepRecord {
            bandwidth_pct: self.pct,
            method,
            l1: None,
            l2: None,
            flags: Vec::new(),
            cutoff: self.cutoff,
            normalization: 1.0,
            solver_residual: None,
            schur_residual: None,
            imag_residual: None,
            condition_estimate: None,
            generator: self.a.provenance().describe(),
            seed: self.a.provenance().seed,
        }
    }
}

fn fill_errors(
    rec: &mut SweepRecord,
    model: Result<SolveResult>,
    compare: impl FnOnce(&SolveResult) -> Result<crate::solvers::ErrorNorms>,
    log: &mut Vec<String>,
) {
    match model.and_then(|u| {
        let e = compare(&u)?;
        Ok((u, e))
    }) {
        Ok((u, e)) => {
            rec.solver_residual = Some(u.residual_norm);
            if !u.converged {
                rec.flags.push("not-converged".into());
            }
            for d in &u.diagnostics {
                log.push(format!("  {} {}%: {d}", rec.method.name(), rec.bandwidth_pct));
            }
            rec.l1 = Some(e.l1);
            rec.l2 = Some(e.l2);
        }
        Err(e) => {
            rec.flags.push(e.category().into());
            log.push(format!("  {} {}%: {e}", rec.method.name(), rec.bandwidth_pct));
        }
    }
}

/// Error of the homogenized and raw-filtered coefficients against the exact
/// 1D solution with the full coefficient, per retained bandwidth.
///
/// All solves use `u(0) = 0`, `u(1) = 1`.
pub fn run_sweep_1d(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    expect_kind(cfg, ExperimentKind::Sweep1d)?;
    let grid = cfg.grid()?;
    let a = cfg.generator.generate(grid)?;
    let exact = exact_diffusion_1d(&a)?;
    let mut records = Vec::new();
    let mut log = vec![format!("sweep1d n={} coefficient={}", cfg.nx, a.provenance().describe())];
    for &pct in &cfg.schedule {
        let (cutoff, _) = cfg.cutoffs(pct)?;
        let basis = ProjectionBasis::new(cfg.nx, cutoff)?;
        let t = Template { pct, cutoff, a: &a };
        let compare = |u: &SolveResult| match cfg.compare {
            CompareMode::Full => compare_solutions(&exact, u),
            CompareMode::Coarse => coarse_compare(&exact, u, &basis),
        };
        log.push(format!("bandwidth {pct}% cutoff {cutoff}"));

        let mut h = t.record(Method::Homogenized);
        let model = homogenize_kernel_1d(&a, &basis).and_then(|k| {
            h.schur_residual = Some(k.solve_residual());
            h.condition_estimate = Some(k.condition_estimate());
            let abar = extract_diagonal(&k);
            h.normalization = abar.normalization();
            h.imag_residual = Some(abar.imag_residual());
            exact_diffusion_1d(&abar.to_field()?)
        });
        fill_errors(&mut h, model, compare, &mut log);

        let mut r = t.record(Method::RawFiltered);
        let model = raw_filter_1d(&a, &basis).and_then(|f| exact_diffusion_1d(&f));
        fill_errors(&mut r, model, compare, &mut log);
        records.push(h);
        records.push(r);
    }
    Ok(SweepOutput::finish(cfg, "sweep1d", records, log))
}

/// 2D counterpart of [`run_sweep_1d`]: finite-difference solves with
/// `u = 1` on the left, `u = 0` on the right and zero flux on top and bottom.
/// The reference uses the full scalar coefficient as an isotropic tensor.
pub fn run_sweep_2d(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    expect_kind(cfg, ExperimentKind::Sweep2d)?;
    let grid = cfg.grid()?;
    let a = cfg.generator.generate(grid)?;
    let bc = BoundaryConditions2D::default();
    let exact = solve_diffusion_2d_fd(&TensorCoefficient2D::isotropic(&a), &bc, cfg.tol)?;
    if !exact.converged {
        return Err(HomogError::Solver(format!(
            "reference solve residual {:e} above tolerance",
            exact.residual_norm
        )));
    }
    let mut records = Vec::new();
    let mut log = vec![format!(
        "sweep2d {}x{} coefficient={} reference_residual={:e}",
        cfg.nx,
        cfg.ny,
        a.provenance().describe(),
        exact.residual_norm
    )];
    for &pct in &cfg.schedule {
        let (cx, cy) = cfg.cutoffs(pct)?;
        let basis = Basis2D::new(grid, cx, cy)?;
        let t = Template { pct, cutoff: cx, a: &a };
        let compare = |u: &SolveResult| compare_solutions(&exact, u);
        log.push(format!("bandwidth {pct}% cutoff ({cx}, {cy})"));

        let mut h = t.record(Method::Homogenized);
        let model = homogenize_2d_with_cap(&a, &basis, cfg.qq_cap).and_then(|tensor| {
            let d = tensor.diagnostics();
            h.normalization = tensor.normalization();
            h.schur_residual = Some(d.solve_residual);
            h.condition_estimate = Some(d.condition_estimate);
            h.imag_residual = Some(d.imag_residual);
            let bad = tensor.indefinite_count();
            if bad > 0 {
                h.flags.push(format!("indefinite={bad}"));
            }
            solve_diffusion_2d_fd(&tensor, &bc, cfg.tol)
        });
        fill_errors(&mut h, model, compare, &mut log);

        let mut r = t.record(Method::RawFiltered);
        let model = raw_filter_2d(&a, &basis).and_then(|f| solve_diffusion_2d_fd(&f, &bc, cfg.tol));
        fill_errors(&mut r, model, compare, &mut log);
        records.push(h);
        records.push(r);
    }
    Ok(SweepOutput::finish(cfg, "sweep2d", records, log))
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelRecord {
    /// `None` for the full-retention kernel.
    pub bandwidth_pct: Option<f64>,
    pub cutoff: Option<usize>,
    pub offdiag_mass: f64,
    pub imag_residual: f64,
    pub solve_residual: f64,
    pub condition_estimate: f64,
    pub file: String,
}

#[derive(Clone, Debug)]
pub struct KernelSweep {
    pub records: Vec<KernelRecord>,
    pub kernels: Vec<HomogenizedKernel>,
    pub files: Vec<OutputFile>,
}

impl KernelSweep {
    pub fn mass_at(&self, pct: f64) -> Option<f64> {
        self.records
            .iter()
            .find(|r| r.bandwidth_pct == Some(pct))
            .map(|r| r.offdiag_mass)
    }
}

pub const KERNEL_HEADER: &str =
    "bandwidth_pct,cutoff,offdiag_mass,imag_residual,solve_residual,condition_estimate,file,generator,seed";

/// Homogenized kernel and its off-diagonal mass at each bandwidth.
pub fn run_kernel_sweep(cfg: &ExperimentConfig) -> Result<KernelSweep> {
    expect_kind(cfg, ExperimentKind::Kernel)?;
    let grid = cfg.grid()?;
    let a = cfg.generator.generate(grid)?;
    let mut bases: Vec<(Option<f64>, ProjectionBasis)> = Vec::new();
    for &pct in &cfg.schedule {
        bases.push((Some(pct), ProjectionBasis::new(cfg.nx, cfg.cutoffs(pct)?.0)?));
    }
    if cfg.full_band {
        bases.push((None, ProjectionBasis::full_retention(cfg.nx)?));
    }
    let (mut records, mut kernels, mut files) = (Vec::new(), Vec::new(), Vec::new());
    for (pct, basis) in bases {
        let k = homogenize_kernel_1d(&a, &basis)?;
        let name = match basis.cutoff() {
            Some(c) => format!("kernel_cutoff_{c:03}"),
            None => "kernel_full".to_string(),
        };
        let file = format!("{name}.csv");
        let values: Vec<f64> = k.rows().concat();
        files.push(OutputFile::new(&file, GridCsv::new(cfg.nx, cfg.nx, &name, values)?.to_csv()));
        records.push(KernelRecord {
            bandwidth_pct: pct,
            cutoff: basis.cutoff(),
            offdiag_mass: offdiag_mass(&k)?,
            imag_residual: k.imag_residual(),
            solve_residual: k.solve_residual(),
            condition_estimate: k.condition_estimate(),
            file,
        });
        kernels.push(k);
    }
    // Duplicate cutoffs at small n map to the same file; keep the first.
    let mut seen = std::collections::BTreeSet::new();
    files.retain(|f| seen.insert(f.name.clone()));

    let mut mass = String::from(KERNEL_HEADER);
    mass.push('\n');
    let prov = a.provenance();
    for r in &records {
        let line = [
            r.bandwidth_pct.map(fmt_f64).unwrap_or_else(|| "full".into()),
            r.cutoff.map(|c| c.to_string()).unwrap_or_default(),
            fmt_f64(r.offdiag_mass),
            fmt_f64(r.imag_residual),
            fmt_f64(r.solve_residual),
            fmt_f64(r.condition_estimate),
            r.file.clone(),
            prov.describe(),
            prov.seed.map(|s| s.to_string()).unwrap_or_default(),
        ];
        mass.push_str(&line.join(","));
        mass.push('\n');
    }
    files.insert(0, OutputFile::new("kernel_mass.csv", mass));
    files.push(OutputFile::new("config.txt", cfg.to_text()));
    Ok(KernelSweep {
        records,
        kernels,
        files,
    })
}

/// Field exports of a single-bandwidth 2D run.
#[derive(Clone, Debug)]
pub struct Panels2D {
    pub grids: Vec<GridCsv>,
    pub flags: Vec<String>,
    pub files: Vec<OutputFile>,
}

impl Panels2D {
    pub fn grid(&self, name: &str) -> Option<&GridCsv> {
        self.grids.iter().find(|g| g.name == name)
    }
}

/// Coefficient, homogenized tensor, filtered coefficient, the three solutions
/// and the two difference maps at `cfg.bandwidth`.
///
/// Coefficient grids are `nx x ny`; solution grids are on the
/// `(nx + 1) x (ny + 1)` nodes. A model that cannot be solved is reported in
/// `flags` and its panels are omitted.
pub fn run_panels_2d(cfg: &ExperimentConfig) -> Result<Panels2D> {
    expect_kind(cfg, ExperimentKind::Panels2d)?;
    let grid = cfg.grid()?;
    let (nx, ny) = (grid.nx(), grid.ny());
    let a = cfg.generator.generate(grid)?;
    let (cx, cy) = cfg.cutoffs(cfg.bandwidth)?;
    let basis = Basis2D::new(grid, cx, cy)?;
    let bc = BoundaryConditions2D::default();
    let exact = solve_diffusion_2d_fd(&TensorCoefficient2D::isotropic(&a), &bc, cfg.tol)?;

    let mut grids = vec![GridCsv::new(nx, ny, "coefficient", a.values().to_vec())?];
    let mut flags = Vec::new();
    let node = |name: &str, v: Vec<f64>| GridCsv::new(nx + 1, ny + 1, name, v);

    match homogenize_2d_with_cap(&a, &basis, cfg.qq_cap) {
        Ok(t) => {
            for (c, v) in [("xx", t.xx()), ("xy", t.xy()), ("yx", t.yx()), ("yy", t.yy())] {
                grids.push(GridCsv::new(nx, ny, &format!("homogenized_{c}"), v.to_vec())?);
            }
            if t.indefinite_count() > 0 {
                flags.push(format!("homogenized: indefinite={}", t.indefinite_count()));
            }
            match solve_diffusion_2d_fd(&t, &bc, cfg.tol) {
                Ok(u) => {
                    grids.push(node("homogenized_u", u.values.clone())?);
                    grids.push(node("diff_homogenized", u.difference(&exact))?);
                }
                Err(e) => flags.push(format!("homogenized: {}", e.category())),
            }
        }
        Err(e) => flags.push(format!("homogenized: {}", e.category())),
    }
    match raw_filter_2d(&a, &basis) {
        Ok(f) => {
            grids.push(GridCsv::new(nx, ny, "filtered", f.xx().to_vec())?);
            match solve_diffusion_2d_fd(&f, &bc, cfg.tol) {
                Ok(u) => {
                    grids.push(node("filtered_u", u.values.clone())?);
                    grids.push(node("diff_filtered", u.difference(&exact))?);
                }
                Err(e) => flags.push(format!("filtered: {}", e.category())),
            }
        }
        Err(e) => flags.push(format!("filtered: {}", e.category())),
    }
    grids.push(node("exact_u", exact.values.clone())?);

    let mut files: Vec<OutputFile> = grids
        .iter()
        .map(|g| OutputFile::new(format!("{}.csv", g.name), g.to_csv()))
        .collect();
    files.push(OutputFile::new("config.txt", cfg.to_text()));
    let mut log = format!("panels2d bandwidth {}% cutoff ({cx}, {cy})\n", cfg.bandwidth);
    for f in &flags {
        log.push_str(f);
        log.push('\n');
    }
    files.push(OutputFile::new("run.log", log));
    Ok(Panels2D { grids, flags, files })
}
