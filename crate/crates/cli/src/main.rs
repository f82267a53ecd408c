use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use ipnc::element::enumerate_dofs;
use ipnc::poly::binomial;
use ipnc::study::{emit_table, run_study, StudyConfig};
use ipnc::Error;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_FAILURE: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_CONFIG: u8 = 3;

/// Minimal interior-penalty nonconforming finite elements for (−Δ)^m u = f.
#[derive(Parser, Debug)]
#[command(name = "ipnc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a convergence study and print the error table.
    Study(Box<StudyArgs>),
    /// Print the DOF catalogue of the (m, n) element.
    ElementTable {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Run the invariant suite.
    Verify,
}

#[derive(Args, Debug, Default)]
struct StudyArgs {
    /// key=value file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// box or lshape
    #[arg(long)]
    domain: Option<String>,
    /// harmonic_exp_sin, lshape_singular or manufactured
    #[arg(long)]
    solution: Option<String>,
    /// Comma-separated values of 1/h, e.g. 8,16,32,64
    #[arg(long)]
    resolutions: Option<String>,
    #[arg(long)]
    eta: Option<f64>,
    /// Comma-separated subset of L2, H1..Hm, energy
    #[arg(long)]
    norms: Option<String>,
    #[arg(long)]
    exactness: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// CG iteration cap (default 20 × unknowns)
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or markdown
    #[arg(long)]
    format: Option<String>,
}

impl StudyArgs {
    fn into_config(self) -> Result<StudyConfig, Error> {
        let mut cfg = StudyConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_file_text(&text)?;
        }
        let overrides = [
            ("m", self.m.map(|v| v.to_string())),
            ("n", self.n.map(|v| v.to_string())),
            ("domain", self.domain),
            ("solution", self.solution),
            ("resolutions", self.resolutions),
            ("eta", self.eta.map(|v| v.to_string())),
            ("norms", self.norms),
            ("exactness", self.exactness.map(|v| v.to_string())),
            ("tol", self.tol.map(|v| v.to_string())),
            ("max_iter", self.max_iter.map(|v| v.to_string())),
            ("out", self.out.map(|p| p.display().to_string())),
            ("format", self.format),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::Unsupported(_) | Error::InvalidPenalty(_)) => EXIT_CONFIG,
        Some(Error::NotConverged { .. } | Error::NotPositiveDefinite(_)) => EXIT_SOLVER,
        _ => EXIT_FAILURE,
    }
}

fn study(args: StudyArgs) -> anyhow::Result<()> {
    let cfg = args.into_config()?;
    let rows = run_study(&cfg)?;
    let table = emit_table(&rows, &cfg.norms(), cfg.format);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &table).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{table}"),
    }
    for r in &rows {
        eprintln!(
            "1/h = {}: {} dofs, CG {} iterations, residual {:.1e}, {:.2} s",
            r.inv_h, r.n_dofs, r.solve.iterations, r.solve.relative_residual, r.solve.seconds
        );
    }
    Ok(())
}

fn element_table(m: usize, n: usize) -> anyhow::Result<()> {
    if !(1..=3).contains(&n) || m > 5 {
        return Err(
            Error::Config(format!("(m, n) = ({m}, {n}) outside m <= 5, 1 <= n <= 3")).into(),
        );
    }
    let dofs = enumerate_dofs(m, n);
    println!(
        "# (m, n) = ({m}, {n}): {} DOFs, dim P_m = {}",
        dofs.len(),
        binomial(m + n, n)
    );
    println!("index,level,codim,local,normal_orders,derivative_order");
    for (i, d) in dofs.iter().enumerate() {
        println!(
            "{i},{},{},{},{},{}",
            d.level,
            d.codim,
            d.local_subsimplex,
            d.normal_orders,
            d.derivative_order()
        );
    }
    Ok(())
}

fn verify() -> anyhow::Result<bool> {
    let checks = ipnc::verify::run_all();
    for c in &checks {
        println!(
            "[{}] {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Study(args) => study(*args).map(|_| true),
        Command::ElementTable { m, n } => element_table(m, n).map(|_| true),
        Command::Verify => verify(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
