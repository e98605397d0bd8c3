use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fourier_homog::experiments::{
    run_kernel_sweep, run_panels_2d, run_sweep_1d, run_sweep_2d, write_outputs, ExperimentConfig,
    ExperimentKind, GridCsv, OutputFile,
};
use fourier_homog::homogenize1d::{homogenize_kernel_1d, extract_diagonal, offdiag_mass, raw_filter_1d};
use fourier_homog::homogenize2d::{homogenize_2d_with_cap, raw_filter_2d, Basis2D};
use fourier_homog::{HomogError, ProjectionBasis, Result};

#[derive(Parser)]
#[command(name = "fourier-homog", version, about = "Fourier-basis numerical homogenization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a coefficient field and write it as a grid CSV.
    GenCoeff(Common),
    /// Homogenize a 1D coefficient at one cutoff.
    Homog1d(Common),
    /// Homogenize a 2D coefficient at one cutoff into a tensor.
    Homog2d(Common),
    /// 1D error-versus-bandwidth sweep.
    Sweep1d(Common),
    /// 2D error-versus-bandwidth sweep.
    Sweep2d(Common),
    /// Kernel and off-diagonal mass per bandwidth.
    Kernel(Common),
    /// Single-bandwidth 2D field panels.
    Panels2d(Common),
}

#[derive(Args)]
struct Common {
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed of the random coefficient generators.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Grid size, `N` or `NXxNY`.
    #[arg(long)]
    grid: Option<String>,
    /// Retained wavenumber cutoff |k| <= cutoff (per axis).
    #[arg(long)]
    cutoff: Option<usize>,
    /// Finite-difference residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn parse_grid(s: &str) -> Result<(usize, Option<usize>)> {
    let bad = || HomogError::Config(format!("bad --grid {s:?}, expected N or NXxNY"));
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((a.parse().map_err(|_| bad())?, Some(b.parse().map_err(|_| bad())?))),
        None => Ok((s.parse().map_err(|_| bad())?, None)),
    }
}

impl Common {
    fn load(&self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| HomogError::Config(format!("{}: {e}", p.display())))?;
                ExperimentConfig::parse(kind, &text)?
            }
            None => ExperimentConfig::defaults(kind),
        };
        if let Some(g) = &self.grid {
            let (nx, ny) = parse_grid(g)?;
            match (kind.is_2d(), ny) {
                (true, ny) => {
                    cfg.nx = nx;
                    cfg.ny = ny.unwrap_or(nx);
                }
                (false, None) => cfg.nx = nx,
                (false, Some(_)) => {
                    return Err(HomogError::Config(format!("{} takes a 1D grid", kind.name())))
                }
            }
        }
        if let Some(s) = self.seed {
            cfg.generator.set_seed(s)?;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(c) = self.cutoff {
            let pct = 100.0 * c as f64 / (cfg.nx / 2) as f64;
            cfg.schedule = vec![pct];
            cfg.bandwidth = pct;
        }
        cfg.out = Some(self.out.clone());
        cfg.validate()?;
        Ok(cfg)
    }

    fn cutoff(&self, cfg: &ExperimentConfig) -> Result<(usize, usize)> {
        match self.cutoff {
            Some(c) => Ok((c, c)),
            None => cfg.cutoffs(cfg.bandwidth),
        }
    }
}

fn grid_file(name: &str, nx: usize, ny: usize, values: Vec<f64>) -> Result<OutputFile> {
    Ok(OutputFile {
        name: format!("{name}.csv"),
        contents: GridCsv::new(nx, ny, name, values)?.to_csv(),
    })
}

fn run(cli: Cli) -> Result<()> {
    let start = Instant::now();
    let (out, files) = match cli.command {
        Command::GenCoeff(o) => {
            let two_d = o.grid.as_deref().is_some_and(|g| g.contains(['x', 'X']));
            let kind = if two_d { ExperimentKind::Panels2d } else { ExperimentKind::Sweep1d };
            let cfg = o.load(kind)?;
            let a = cfg.generator.generate(cfg.grid()?)?;
            println!("{}: min {:.6} max {:.6} mean {:.6}", a.provenance().describe(), a.min(), a.max(), a.mean());
            let g = a.grid();
            (o.out, vec![grid_file("coefficient", g.nx(), g.ny(), a.values().to_vec())?])
        }
        Command::Homog1d(o) => {
            let cfg = o.load(ExperimentKind::Sweep1d)?;
            let a = cfg.generator.generate(cfg.grid()?)?;
            let basis = ProjectionBasis::new(cfg.nx, o.cutoff(&cfg)?.0)?;
            let k = homogenize_kernel_1d(&a, &basis)?;
            let abar = extract_diagonal(&k);
            let raw = raw_filter_1d(&a, &basis).map(|f| f.values().to_vec());
            println!(
                "cutoff {:?}: abar in [{:.6}, {:.6}], harmonic mean of a {:.6}, offdiag mass {:.6}, condition {:.3e}",
                basis.cutoff(),
                abar.min_value(),
                abar.values().iter().copied().fold(f64::NEG_INFINITY, f64::max),
                a.harmonic_mean(),
                offdiag_mass(&k)?,
                k.condition_estimate()
            );
            let n = cfg.nx;
            let mut files = vec![
                grid_file("coefficient", n, 1, a.values().to_vec())?,
                grid_file("homogenized", n, 1, abar.values().to_vec())?,
                grid_file("kernel", n, n, k.rows().concat())?,
            ];
            match raw {
                Ok(v) => files.push(grid_file("raw_filtered", n, 1, v)?),
                Err(e) => eprintln!("warning[{}]: raw filter: {e}", e.category()),
            }
            (o.out, files)
        }
        Command::Homog2d(o) => {
            let cfg = o.load(ExperimentKind::Panels2d)?;
            let grid = cfg.grid()?;
            let a = cfg.generator.generate(grid)?;
            let (cx, cy) = o.cutoff(&cfg)?;
            let basis = Basis2D::new(grid, cx, cy)?;
            let t = homogenize_2d_with_cap(&a, &basis, cfg.qq_cap)?;
            println!(
                "cutoff ({cx}, {cy}): min diagonal {:.6}, indefinite samples {}, residual {:.3e}",
                t.min_diagonal(),
                t.indefinite_count(),
                t.diagnostics().solve_residual
            );
            let (nx, ny) = (grid.nx(), grid.ny());
            let mut files = vec![grid_file("coefficient", nx, ny, a.values().to_vec())?];
            for (c, v) in [("xx", t.xx()), ("xy", t.xy()), ("yx", t.yx()), ("yy", t.yy())] {
                files.push(grid_file(&format!("homogenized_{c}"), nx, ny, v.to_vec())?);
            }
            match raw_filter_2d(&a, &basis) {
                Ok(f) => files.push(grid_file("raw_filtered", nx, ny, f.xx().to_vec())?),
                Err(e) => eprintln!("warning[{}]: raw filter: {e}", e.category()),
            }
            (o.out, files)
        }
        Command::Sweep1d(o) => {
            let s = run_sweep_1d(&o.load(ExperimentKind::Sweep1d)?)?;
            print!("{}", s.csv());
            (o.out, s.files)
        }
        Command::Sweep2d(o) => {
            let s = run_sweep_2d(&o.load(ExperimentKind::Sweep2d)?)?;
            print!("{}", s.csv());
            (o.out, s.files)
        }
        Command::Kernel(o) => {
            let s = run_kernel_sweep(&o.load(ExperimentKind::Kernel)?)?;
            print!("{}", s.files[0].contents);
            (o.out, s.files)
        }
        Command::Panels2d(o) => {
            let p = run_panels_2d(&o.load(ExperimentKind::Panels2d)?)?;
            for f in &p.flags {
                eprintln!("warning: {f}");
            }
            (o.out, p.files)
        }
    };
    write_outputs(&out, &files)?;
    eprintln!("wrote {} files to {} in {:.2?}", files.len(), out.display(), start.elapsed());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("error[usage]: {}", e.to_string().trim_end());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
