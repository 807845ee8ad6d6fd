//! `weil`: command-line front end for weilkit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use weilkit::cartan::{equivariant_cohomology, Model, SphereGda};
use weilkit::duflo::{duflo_map, quantize, DufloContext};
use weilkit::expr::parse_elem;
use weilkit::liedata::{resolve, LieAlgebra};
use weilkit::report::{CheckRecord, Report};
use weilkit::suite::{self, Suite};
use weilkit::weil::{dirac_square, homology, Betti, Complex};
use weilkit::{Error, Tag, Verdict};

#[derive(Parser)]
#[command(name = "weil", version, about = "Exact checks for Weil algebras and the Duflo map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check antisymmetry, index range and Jacobi for a catalog name or data file.
    Validate {
        target: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a verification suite (core, duflo, cartan, sphere, clifford or all).
    Verify {
        #[arg(long)]
        alg: String,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        deg: Option<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record per-check wall time (makes reports non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Apply the Duflo map to a polynomial in v.
    Duflo {
        #[arg(long)]
        alg: String,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Quantize a Weil algebra element (v, y) into U(g) ⊗ Cl(g) (u, x).
    Quantize {
        #[arg(long)]
        alg: String,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Betti numbers by exact rank computation.
    Cohomology {
        #[arg(long)]
        alg: String,
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long)]
        deg: Option<u32>,
    },
    /// The quadratic Casimir and the square of the cubic Dirac element.
    Casimir {
        #[arg(long)]
        alg: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Ext,
    Cl,
    Weil,
    Sphere,
}

/// Exit status: 1 for failed checks, 2 for bad input.
enum Failure {
    Check,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(name: &str) -> Result<LieAlgebra, Failure> {
    resolve(name).map_err(|e| Failure::Usage(format!("{name}: {e}")))
}

fn write_json(path: &Option<PathBuf>, report: &Report) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, report.to_json()).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn finish(report: &Report) -> Result<(), Failure> {
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn validate(target: &str, json: &Option<PathBuf>) -> Result<(), Failure> {
    let (name, verdicts) = match resolve(target) {
        Ok(alg) => {
            let errors = alg.validation_errors();
            let pick = |f: fn(&Error) -> bool| {
                errors.iter().find(|e| f(e)).map_or(Verdict::Pass, |e| Verdict::fail(target, e.to_string()))
            };
            let v = vec![
                ("indices", Verdict::Pass),
                ("antisymmetry", pick(|e| matches!(e, Error::NotTotallyAntisymmetric { .. }))),
                ("jacobi", pick(|e| matches!(e, Error::JacobiViolation { .. }))),
            ];
            (alg.name().to_string(), v)
        }
        Err(e @ (Error::BadIndex { .. } | Error::NotTotallyAntisymmetric { .. } | Error::JacobiViolation { .. })) => {
            let v = match e {
                Error::BadIndex { .. } => ("indices", Verdict::fail(target, e.to_string())),
                Error::NotTotallyAntisymmetric { .. } => ("antisymmetry", Verdict::fail(target, e.to_string())),
                _ => ("jacobi", Verdict::fail(target, e.to_string())),
            };
            (target.to_string(), vec![v])
        }
        Err(e) => return Err(Failure::Usage(format!("{target}: {e}"))),
    };
    let mut report = Report::new(&name, "validate", 0);
    for (id, v) in verdicts {
        report.checks.push(CheckRecord::new(id, &name, 0, &v));
    }
    print!("{}", report.to_text());
    write_json(json, &report)?;
    finish(&report)
}

fn verify(alg: &str, suite_name: &str, deg: Option<u32>, json: &Option<PathBuf>, timing: bool) -> Result<(), Failure> {
    let alg = load(alg)?;
    let suites: Vec<Suite> = if suite_name == "all" {
        Suite::ALL.into_iter().filter(|s| *s != Suite::Sphere || alg.dim() == 3).collect()
    } else {
        vec![suite_name.parse()?]
    };
    let deg = deg.unwrap_or_else(|| suite::default_degree(&alg));
    let mut report = Report::new(alg.name(), &format!("verify {suite_name}"), deg);
    for s in suites {
        let part = suite::run(s, &alg, deg, timing)?;
        for mut c in part.checks {
            if suite_name == "all" {
                c.id = format!("{}.{}", s.name(), c.id);
            }
            println!("{}", c.line());
            report.checks.push(c);
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed()).count();
    println!("{passed}/{} checks passed", report.checks.len());
    write_json(json, &report)?;
    finish(&report)
}

fn default_order(alg: &LieAlgebra, order: Option<usize>) -> usize {
    order.unwrap_or_else(|| suite::default_degree(alg) as usize)
}

fn print_betti(b: &Betti) {
    for (l, v) in b.labels.iter().zip(&b.values) {
        println!("H^{l} = {v}");
    }
}

fn cohomology(alg: &LieAlgebra, space: Space, deg: Option<u32>) -> Result<(), Failure> {
    let deg = deg.unwrap_or_else(|| suite::default_degree(alg));
    let b = match space {
        Space::Ext => homology(alg, Complex::ExtKoszul, deg),
        Space::Cl => homology(alg, Complex::ClAdGamma, deg),
        Space::Weil => homology(alg, Complex::WFull, deg),
        Space::Sphere => {
            let sphere = SphereGda::new(alg, -1, 4)?;
            equivariant_cohomology(Model::Comm, &sphere, alg, deg)?
        }
    };
    print_betti(&b);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { target, json } => validate(&target, &json),
        Command::Verify { alg, suite, deg, json, timing } => verify(&alg, &suite, deg, &json, timing),
        Command::Duflo { alg, expr, order } => {
            let alg = load(&alg)?;
            let ctx = DufloContext::new(&alg, default_order(&alg, order));
            let p = parse_elem(&expr, Tag::Sym, &alg)?;
            println!("{}", duflo_map(&ctx, &p)?.render());
            Ok(())
        }
        Command::Quantize { alg, expr, order } => {
            let alg = load(&alg)?;
            let ctx = DufloContext::new(&alg, default_order(&alg, order));
            let w = parse_elem(&expr, Tag::W, &alg)?;
            println!("{}", quantize(&ctx, &w)?.render());
            Ok(())
        }
        Command::Cohomology { alg, space, deg } => cohomology(&load(&alg)?, space, deg),
        Command::Casimir { alg } => {
            let alg = load(&alg)?;
            println!("casimir = {}", weilkit::pbw::casimir(&alg).render());
            println!("dirac^2 = {}", dirac_square(&alg).render());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
