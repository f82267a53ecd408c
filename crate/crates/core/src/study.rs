//! Convergence studies: configuration, the per-resolution pipeline and table
//! output.

use crate::assemble::{assemble, norm_breakdown};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{cg_solve, SolveReport, CG_TOLERANCE};
use crate::mesh::{build_box_mesh, build_lshape_mesh, Mesh};
use crate::solutions::{solution_by_name, ExactSolution};
use crate::space::{DiscreteFunction, Discretization};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Unit box `(0,1)^n`.
    Box,
    /// `(−1,1)² ∖ [0,1)×(−1,0]`.
    LShape,
}

impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(Domain::Box),
            "lshape" => Ok(Domain::LShape),
            _ => Err(Error::Config(format!("unknown domain '{s}' (box, lshape)"))),
        }
    }
}

/// Error norm of `u − u_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    L2,
    /// Broken `H^k` seminorm, `k >= 1`.
    H(usize),
    /// Mesh-dependent energy norm `‖·‖_h`.
    Energy,
}

impl NormKind {
    pub fn label(&self) -> String {
        match self {
            NormKind::L2 => "L2".into(),
            NormKind::H(k) => format!("H{k}"),
            NormKind::Energy => "energy".into(),
        }
    }

    fn math_label(&self) -> String {
        match self {
            NormKind::L2 => "‖u−u_h‖_0".into(),
            // escaped so the bars do not split markdown cells
            NormKind::H(k) => format!("\\|u−u_h\\|_{{{k},h}}"),
            NormKind::Energy => "‖u−u_h‖_h".into(),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "L2" | "l2" => Ok(NormKind::L2),
            "energy" => Ok(NormKind::Energy),
            _ => t
                .strip_prefix(['H', 'h'])
                .and_then(|k| k.parse().ok())
                .filter(|k| *k >= 1)
                .map(NormKind::H)
                .ok_or_else(|| Error::Config(format!("unknown norm '{t}' (L2, H1..Hm, energy)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            _ => Err(Error::Config(format!(
                "unknown format '{s}' (csv, markdown)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub m: usize,
    pub n: usize,
    pub domain: Domain,
    pub solution: String,
    /// Values of `1/h`, i.e. subdivisions per unit length.
    pub resolutions: Vec<usize>,
    pub eta: f64,
    /// Quadrature exactness for loads, interpolation and errors; `2m + 4`
    /// when unset.
    pub exactness: Option<usize>,
    pub tol: f64,
    /// CG iteration cap; `20 N` for `N` unknowns when unset.
    pub max_iter: Option<usize>,
    pub out: Option<PathBuf>,
    /// Empty means `L2, H1, …, Hm`.
    pub norms: Vec<NormKind>,
    pub format: TableFormat,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            m: 3,
            n: 2,
            domain: Domain::Box,
            solution: "harmonic_exp_sin".into(),
            resolutions: vec![8, 16, 32, 64],
            eta: 1.0,
            exactness: None,
            tol: CG_TOLERANCE,
            max_iter: None,
            out: None,
            norms: Vec::new(),
            format: TableFormat::Csv,
        }
    }
}

pub const MAX_M: usize = 5;
pub const MAX_N: usize = 3;

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for '{key}'")))
}

impl StudyConfig {
    pub fn exactness(&self) -> usize {
        self.exactness.unwrap_or(2 * self.m + 4)
    }

    pub fn norms(&self) -> Vec<NormKind> {
        if self.norms.is_empty() {
            std::iter::once(NormKind::L2)
                .chain((1..=self.m).map(NormKind::H))
                .collect()
        } else {
            self.norms.clone()
        }
    }

    /// Sets one `key = value` option.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "m" => self.m = parse(key, v)?,
            "n" => self.n = parse(key, v)?,
            "domain" => self.domain = v.parse()?,
            "solution" => self.solution = v.to_string(),
            "resolutions" => {
                self.resolutions = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse(key, s))
                    .collect::<Result<_>>()?
            }
            "eta" => self.eta = parse(key, v)?,
            "exactness" => self.exactness = Some(parse(key, v)?),
            "tol" => self.tol = parse(key, v)?,
            "max_iter" => self.max_iter = Some(parse(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "format" => self.format = v.parse()?,
            "norms" => {
                self.norms = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a `key=value` file; blank lines and `#` comments are skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", no + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(1..=MAX_M).contains(&self.m) {
            return bad(format!("m = {} outside 1..={MAX_M}", self.m));
        }
        if !(1..=MAX_N).contains(&self.n) {
            return bad(format!("n = {} outside 1..={MAX_N}", self.n));
        }
        if self.domain == Domain::LShape && self.n != 2 {
            return bad("the L-shaped domain requires n = 2".into());
        }
        if self.resolutions.is_empty() || self.resolutions.contains(&0) {
            return bad("resolutions must be positive and non-empty".into());
        }
        if self.resolutions.windows(2).any(|w| w[1] != 2 * w[0]) {
            return bad(format!(
                "resolutions {:?} must double at each step for observed orders",
                self.resolutions
            ));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad(format!("eta = {} must be positive", self.eta));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("tol = {} must lie in (0, 1)", self.tol));
        }
        if self.max_iter == Some(0) {
            return bad("max_iter must be positive".into());
        }
        for norm in self.norms() {
            if let NormKind::H(k) = norm {
                if k > self.m {
                    return bad(format!(
                        "H{k} requested but only derivatives up to m = {} exist",
                        self.m
                    ));
                }
            }
        }
        let u = solution_by_name(&self.solution, self.m, self.n)?;
        if u.dim() != self.n {
            return bad(format!(
                "solution '{}' is {}-dimensional",
                self.solution,
                u.dim()
            ));
        }
        Ok(())
    }

    pub fn build_mesh(&self, inv_h: usize) -> Result<Mesh> {
        match self.domain {
            Domain::Box => build_box_mesh(self.n, inv_h, &vec![0.0; self.n], &vec![1.0; self.n]),
            Domain::LShape => build_lshape_mesh(inv_h),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyRow {
    pub inv_h: usize,
    pub n_dofs: usize,
    pub errors: Vec<f64>,
    /// `log₂(e_prev / e)`, absent in the first row.
    pub orders: Vec<Option<f64>>,
    pub solve: SolveReport,
}

/// Discrete solution at one resolution.
pub struct Solved {
    pub disc: Discretization,
    pub uh: DiscreteFunction,
    pub report: SolveReport,
}

pub fn solve_resolution(cfg: &StudyConfig, u: &ExactSolution, inv_h: usize) -> Result<Solved> {
    let disc = Discretization::new(cfg.build_mesh(inv_h)?, cfg.m)?;
    let q = cfg.exactness();
    let lift = if u.has_homogeneous_data() {
        None
    } else {
        Some(disc.interpolate(u, q)?)
    };
    let source = |x: &[f64]| u.source(x, cfg.m);
    let sys = assemble(&disc, cfg.eta, Some(&source), lift.as_ref(), q)?;
    let (a, b) = sys.reduced();
    let (x, report) = cg_solve(&a, &b, cfg.tol, cfg.max_iter.unwrap_or(20 * b.len().max(1)))?;
    if !report.converged {
        return Err(Error::NotConverged {
            iterations: report.iterations,
            residual: report.relative_residual,
        });
    }
    let uh = sys.expand(&x)?;
    Ok(Solved { disc, uh, report })
}

pub fn run_study(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    cfg.validate()?;
    let u = solution_by_name(&cfg.solution, cfg.m, cfg.n)?;
    let norms = cfg.norms();
    let singular = u.singular_point();
    let mut rows: Vec<StudyRow> = Vec::new();
    for &inv_h in &cfg.resolutions {
        let s = solve_resolution(cfg, &u, inv_h)?;
        let nb = norm_breakdown(
            &s.disc,
            &s.uh,
            Some(&u),
            cfg.exactness(),
            singular.as_deref(),
        )?;
        let errors: Vec<f64> = norms
            .iter()
            .map(|k| match k {
                NormKind::L2 => nb.seminorm(0),
                NormKind::H(k) => nb.seminorm(*k),
                NormKind::Energy => nb.energy(),
            })
            .collect();
        let orders = match rows.last() {
            Some(prev) => prev
                .errors
                .iter()
                .zip(&errors)
                .map(|(a, b)| Some((a / b).log2()))
                .collect(),
            None => vec![None; errors.len()],
        };
        rows.push(StudyRow {
            inv_h,
            n_dofs: s.disc.n_dofs(),
            errors,
            orders,
            solve: s.report,
        });
    }
    Ok(rows)
}

fn fmt_order(o: Option<f64>) -> String {
    o.map_or_else(|| "--".into(), |v| format!("{v:.2}"))
}

/// Six significant digits.
fn fmt_error(e: f64) -> String {
    format!("{e:.5e}")
}

pub fn emit_table(rows: &[StudyRow], norms: &[NormKind], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            let mut header = vec!["inv_h".to_string(), "n_dofs".to_string()];
            for k in norms {
                header.push(k.label());
                header.push(format!("{}_order", k.label()));
            }
            writeln!(out, "{}", header.join(",")).unwrap();
            for r in rows {
                let mut cells = vec![r.inv_h.to_string(), r.n_dofs.to_string()];
                for (e, o) in r.errors.iter().zip(&r.orders) {
                    cells.push(fmt_error(*e));
                    cells.push(fmt_order(*o));
                }
                writeln!(out, "{}", cells.join(",")).unwrap();
            }
        }
        TableFormat::Markdown => {
            let mut header = vec!["1/h".to_string()];
            for k in norms {
                header.push(k.math_label());
                header.push("Order".into());
            }
            writeln!(out, "| {} |", header.join(" | ")).unwrap();
            writeln!(out, "|{}", "---|".repeat(header.len())).unwrap();
            for r in rows {
                let mut cells = vec![r.inv_h.to_string()];
                for (e, o) in r.errors.iter().zip(&r.orders) {
                    cells.push(fmt_error(*e));
                    cells.push(fmt_order(*o));
                }
                writeln!(out, "| {} |", cells.join(" | ")).unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(inv_h: usize, errors: Vec<f64>, orders: Vec<Option<f64>>) -> StudyRow {
        StudyRow {
            inv_h,
            n_dofs: 10,
            errors,
            orders,
            solve: SolveReport {
                iterations: 1,
                relative_residual: 0.0,
                converged: true,
                seconds: 0.0,
            },
        }
    }

    #[test]
    fn config_parsing() {
        let mut c = StudyConfig::default();
        c.apply_file_text(
            "# comment\nm = 2\nsolution=manufactured\nresolutions=4,8\nnorms=L2,H2,energy\n",
        )
        .unwrap();
        assert_eq!(c.m, 2);
        assert_eq!(c.resolutions, vec![4, 8]);
        assert_eq!(
            c.norms(),
            vec![NormKind::L2, NormKind::H(2), NormKind::Energy]
        );
        c.validate().unwrap();
        assert!(c.apply_file_text("bogus=1").is_err());
        assert!(c.apply_file_text("m").is_err());
        assert!(c.clone().set("m", "x").is_err());
        let mut d = StudyConfig::default();
        assert_eq!(d.exactness(), 10);
        d.resolutions = vec![8, 12];
        assert!(d.validate().is_err());
        d.resolutions = vec![8];
        d.domain = Domain::LShape;
        d.n = 3;
        assert!(d.validate().is_err());
        let mut e = StudyConfig {
            m: 6,
            ..StudyConfig::default()
        };
        assert!(e.validate().is_err());
        e.m = 2;
        e.norms = vec![NormKind::H(3)];
        assert!(e.validate().is_err());
    }

    #[test]
    fn table_formatting() {
        let norms = [NormKind::L2];
        let one = vec![row(8, vec![0.25], vec![None])];
        let csv = emit_table(&one, &norms, TableFormat::Csv);
        assert_eq!(csv, "inv_h,n_dofs,L2,L2_order\n8,10,2.50000e-1,--\n");
        let two = vec![
            row(8, vec![0.5], vec![None]),
            row(16, vec![0.25], vec![Some(1.0)]),
        ];
        let csv = emit_table(&two, &norms, TableFormat::Csv);
        assert!(csv.ends_with("16,10,2.50000e-1,1.00\n"));
        let md = emit_table(&two, &norms, TableFormat::Markdown);
        assert!(md.starts_with("| 1/h | ‖u−u_h‖_0 | Order |"));
        assert!(md.contains("| 8 | 5.00000e-1 | -- |"));

        let seminorm = [NormKind::L2, NormKind::H(1)];
        let rows = vec![row(8, vec![0.5, 1.0], vec![None, None])];
        let md = emit_table(&rows, &seminorm, TableFormat::Markdown);
        let cells = |line: &str| line.replace("\\|", "").matches('|').count();
        assert!(md.lines().all(|l| cells(l) == 6), "{md}");
    }

    #[test]
    fn crouzeix_raviart_study() {
        let cfg = StudyConfig {
            m: 1,
            solution: "manufactured".into(),
            resolutions: vec![4, 8, 16],
            ..StudyConfig::default()
        };
        let rows = run_study(&cfg).unwrap();
        let last = rows.last().unwrap();
        assert!(last.orders[0].unwrap() > 1.8, "{last:?}");
        assert!(last.orders[1].unwrap() > 0.9, "{last:?}");
    }

    #[test]
    fn harmonic_data_with_even_m_needs_a_load() {
        let cfg = StudyConfig {
            m: 2,
            resolutions: vec![4, 8, 16],
            ..StudyConfig::default()
        };
        let rows = run_study(&cfg).unwrap();
        let last = rows.last().unwrap();
        assert!(last.orders[0].unwrap() > 1.8, "{last:?}");
        assert!(last.orders[2].unwrap() > 0.85, "{last:?}");
    }
}
