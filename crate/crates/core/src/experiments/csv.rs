use crate::error::{HomogError, Result};

/// Float format shared by every CSV export: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| HomogError::Csv(format!("bad {what} value {s:?}")))
}

fn parse_opt(s: &str, what: &str) -> Result<Option<f64>> {
    if s.trim().is_empty() {
        Ok(None)
    } else {
        parse_f64(s, what).map(Some)
    }
}

/// A named real grid: first line `nx,ny,name`, then `ny` lines of `nx` values.
#[derive(Clone, Debug, PartialEq)]
pub struct GridCsv {
    pub nx: usize,
    pub ny: usize,
    pub name: String,
    pub values: Vec<f64>,
}

impl GridCsv {
    pub fn new(nx: usize, ny: usize, name: &str, values: Vec<f64>) -> Result<Self> {
        if values.len() != nx * ny {
            return Err(HomogError::DimensionMismatch {
                expected: nx * ny,
                got: values.len(),
            });
        }
        if name.contains([',', '\n', '\r']) {
            return Err(HomogError::Csv(format!("grid name {name:?} contains a separator")));
        }
        Ok(Self {
            nx,
            ny,
            name: name.to_string(),
            values,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{},{}\n", self.nx, self.ny, self.name);
        for row in self.values.chunks(self.nx) {
            let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| HomogError::Csv("empty grid file".into()))?;
        let mut parts = header.splitn(3, ',');
        let mut dim = |what: &str| -> Result<usize> {
            parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| HomogError::Csv(format!("bad grid header {header:?} ({what})")))
        };
        let nx = dim("nx")?;
        let ny = dim("ny")?;
        let name = parts.next().unwrap_or("").to_string();
        let mut values = Vec::with_capacity(nx * ny);
        for (r, line) in lines.enumerate() {
            let row: Vec<f64> =
                line.split(',').map(|s| parse_f64(s, "grid")).collect::<Result<_>>()?;
            if row.len() != nx {
                return Err(HomogError::Csv(format!("row {r} has {} values, expected {nx}", row.len())));
            }
            values.extend(row);
        }
        Self::new(nx, ny, &name, values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Homogenized,
    RawFiltered,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Homogenized => "homogenized",
            Method::RawFiltered => "raw-filtered",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "homogenized" => Ok(Method::Homogenized),
            "raw-filtered" => Ok(Method::RawFiltered),
            _ => Err(HomogError::Csv(format!("unknown method {s:?}"))),
        }
    }
}

/// One `(bandwidth, method)` point of an error sweep.
///
/// Errors are `None` when the model coefficient could not be solved (for
/// example a non-positive filtered field); `flags` says why.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub bandwidth_pct: f64,
    pub method: Method,
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub flags: Vec<String>,
    pub cutoff: usize,
    pub normalization: f64,
    /// Residual of the diffusion solve with the model coefficient.
    pub solver_residual: Option<f64>,
    /// Residual of the fine-block solve (homogenized only).
    pub schur_residual: Option<f64>,
    pub imag_residual: Option<f64>,
    pub condition_estimate: Option<f64>,
    pub generator: String,
    pub seed: Option<u64>,
}

pub const SWEEP_HEADER: &str = "bandwidth_pct,method,l1,l2,flags,cutoff,normalization,solver_residual,schur_residual,imag_residual,condition_estimate,generator,seed";

impl SweepRecord {
    fn to_line(&self) -> String {
        [
            fmt_f64(self.bandwidth_pct),
            self.method.name().to_string(),
            fmt_opt(self.l1),
            fmt_opt(self.l2),
            self.flags.join(";"),
            self.cutoff.to_string(),
            fmt_f64(self.normalization),
            fmt_opt(self.solver_residual),
            fmt_opt(self.schur_residual),
            fmt_opt(self.imag_residual),
            fmt_opt(self.condition_estimate),
            self.generator.clone(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
        .join(",")
    }

    fn from_line(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 13 {
            return Err(HomogError::Csv(format!("expected 13 fields, got {}", f.len())));
        }
        Ok(Self {
            bandwidth_pct: parse_f64(f[0], "bandwidth_pct")?,
            method: Method::parse(f[1])?,
            l1: parse_opt(f[2], "l1")?,
            l2: parse_opt(f[3], "l2")?,
            flags: if f[4].is_empty() {
                Vec::new()
            } else {
                f[4].split(';').map(str::to_string).collect()
            },
            cutoff: f[5]
                .parse()
                .map_err(|_| HomogError::Csv(format!("bad cutoff {:?}", f[5])))?,
            normalization: parse_f64(f[6], "normalization")?,
            solver_residual: parse_opt(f[7], "solver_residual")?,
            schur_residual: parse_opt(f[8], "schur_residual")?,
            imag_residual: parse_opt(f[9], "imag_residual")?,
            condition_estimate: parse_opt(f[10], "condition_estimate")?,
            generator: f[11].to_string(),
            seed: if f[12].is_empty() {
                None
            } else {
                Some(f[12].parse().map_err(|_| HomogError::Csv(format!("bad seed {:?}", f[12])))?)
            },
        })
    }
}

pub fn sweep_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SWEEP_HEADER => {}
        other => return Err(HomogError::Csv(format!("unexpected sweep header {other:?}"))),
    }
    lines.map(SweepRecord::from_line).collect()
}
