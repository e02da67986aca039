use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qtrefftz::approximation::BasisKind;
use qtrefftz::construct::Family;
use qtrefftz::exact::CaseId;
use qtrefftz::experiment::{cmd_conditioning, cmd_convergence, cmd_dump_basis, cmd_verify, RunConfig, VERIFY_CHECKS};
use qtrefftz::pde::PdeCoefficients;
use qtrefftz::Error;

#[derive(Parser)]
#[command(name = "qtrefftz", version, about = "Quasi-Trefftz basis experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Worst-case L∞ errors over centers for a grid of ball radii.
    Convergence(RunArgs),
    /// Worst condition numbers of the normal matrices.
    Conditioning(RunArgs),
    /// Run the built-in self-check suite.
    Verify {
        /// Print the check names and exit.
        #[arg(long)]
        list: bool,
        /// Corrupt one constructed coefficient per basis function.
        #[arg(long)]
        perturb: bool,
    },
    /// Print the coefficient tables of one basis.
    DumpBasis {
        #[arg(long, default_value = "tc1", value_parser = parse_case)]
        case: CaseId,
        #[arg(long, default_value = "polynomial", value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Expansion point as "x,y,z".
        #[arg(long, default_value = "0,0,0", value_parser = parse_point)]
        center: [f64; 3],
        /// Coefficient file ("j1 j2 j3 | i1 i2 i3 | re im" lines) instead of the case operator.
        #[arg(long)]
        operator: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "tc1", value_parser = parse_case)]
    case: CaseId,
    /// Comma-separated: amplitude, phase, polynomial, pw.
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    family: Option<Vec<BasisKind>>,
    /// Values of n, e.g. "1,2,3" or "1-6".
    #[arg(long, value_parser = parse_range)]
    n: Option<NRange>,
    #[arg(long)]
    centers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of radii h_k = 2·4^{-k}.
    #[arg(long)]
    h_count: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// n up to 8 with 50 centers.
    #[arg(long)]
    full: bool,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        let mut cfg = if self.full { RunConfig::full(self.case) } else { RunConfig::desk(self.case) };
        if let Some(k) = &self.family {
            cfg.kinds = k.clone();
        }
        if let Some(NRange(n)) = &self.n {
            cfg.n_range = n.clone();
        }
        if let Some(c) = self.centers {
            cfg.centers = c;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(h) = self.h_count {
            cfg.h = qtrefftz::approximation::h_grid(h);
        }
        cfg.out = self.out.clone();
        cfg
    }
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    CaseId::parse(s).ok_or_else(|| format!("unknown case '{s}' (tc1, tc2, tc3)"))
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("unknown family '{s}'"))
}

fn parse_kind(s: &str) -> Result<BasisKind, String> {
    BasisKind::parse(s).ok_or_else(|| format!("unknown family '{s}'"))
}

#[derive(Clone, Debug)]
struct NRange(Vec<usize>);

fn parse_range(s: &str) -> Result<NRange, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?);
                out.extend(a..=b);
            }
            None => out.push(part.trim().parse().map_err(|e| format!("{e}"))?),
        }
    }
    Ok(NRange(out))
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three comma-separated numbers".to_string())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Convergence(args) => {
            let cfg = args.config();
            let out = cmd_convergence(&cfg)?;
            if cfg.out.is_none() {
                print!("{}", out.errors);
            }
            for r in &out.reports {
                let fmt = |o: Option<f64>| o.map_or("-".to_string(), |v| format!("{v:.2}"));
                eprintln!(
                    "{:<10} n={} order {} (gradient {}) cond {:.2e}",
                    r.kind.name(),
                    r.n,
                    fmt(r.fitted_order),
                    fmt(r.gradient_order),
                    r.cond
                );
            }
            Ok(true)
        }
        Cmd::Conditioning(args) => {
            let table = cmd_conditioning(&args.config())?;
            print!("{}", table.to_pretty());
            Ok(true)
        }
        Cmd::Verify { list, perturb } => {
            if list {
                for name in VERIFY_CHECKS {
                    println!("{name}");
                }
                return Ok(true);
            }
            let results = cmd_verify(perturb)?;
            for r in &results {
                println!("{r}");
            }
            let passed = results.iter().all(|r| r.pass);
            println!("{}", if passed { "all checks passed" } else { "some checks FAILED" });
            Ok(passed)
        }
        Cmd::DumpBasis { case, family, n, center, operator } => {
            let q = qtrefftz::construct::q_for(n);
            let coeffs = match operator {
                // a coefficient file lists polynomial coefficients, so missing orders are zero
                Some(path) => {
                    let c = PdeCoefficients::from_text(&std::fs::read_to_string(path)?, center)?;
                    c.with_order(c.order().max(q + 1))
                }
                None => qtrefftz::exact::TestCase::new(case).operator(center, q + 1),
            };
            print!("{}", cmd_dump_basis(&coeffs, family, n)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
