//! Command-line front end for the `rrcf` library.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing family,
//! 2 on usage or domain errors, 3 when a computation cannot converge
//! or would need more precision than the engine allows.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rrcf::rug::Float;
use rrcf::{
    default_family, error_scan, eval, eval_cf, eval_product, figure_data, invert_selberg,
    iterate_chain, real, reciprocity_residual, CfKind, Error, EvalConfig, FamilyId, Route,
    ValueId,
};

#[derive(Parser)]
#[command(name = "rrcf", version, about = "Ramanujan-type continued fractions on the command line")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one fraction at a nome q or at q = exp(-s*alpha)
    Eval {
        /// Fraction: R, S, R5, S5, V, Vneg, Rp13, Sp13, G, G3 or selberg
        #[arg(long)]
        cf: String,
        /// Nome in (0, 1), e.g. 0.2 (conflicts with --alpha)
        #[arg(long)]
        q: Option<String>,
        /// Exponent argument, e.g. pi, 2pi, pi/sqrt5 or a decimal
        #[arg(long)]
        alpha: Option<String>,
        /// Reciprocity family used for the far-argument flip (defaults per fraction)
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Check a reciprocity law at its generic and symmetric points
    Verify {
        /// Family id (k1, k-1, k2, k-2, k3, k-3, k11, k-11, cubic1, cubic-1,
        /// cubic3, cubic-3, selberg) or "all"
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Walk a quintic value chain from a catalog entry
    Iterate {
        /// Catalog name, e.g. R_2pi or R_pi
        #[arg(long)]
        start: String,
        #[arg(long)]
        steps: u32,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Scan the closed-form approximation error over a log grid
    Scan {
        #[arg(long, default_value_t = 512)]
        grid: u32,
        /// Upper end of the scanned range (at least 2pi)
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Emit one of the four data sets as CSV
    Figure {
        /// Data set 1..4
        #[arg(long)]
        id: u32,
        #[arg(long, default_value_t = 65)]
        grid: u32,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Solve s(exp(-alpha))^8 = x for alpha
    InvertSelberg {
        /// Target in (0, 1/16), decimal or a fraction like 1/32
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    let digits = match cli.cmd {
        Cmd::Eval { digits, .. }
        | Cmd::Verify { digits, .. }
        | Cmd::Iterate { digits, .. }
        | Cmd::Scan { digits, .. }
        | Cmd::Figure { digits, .. }
        | Cmd::InvertSelberg { digits, .. } => digits,
    };
    if digits < 10 {
        eprintln!("error: --digits must be at least 10");
        return 2;
    }
    let cfg = EvalConfig::with_digits(digits);
    let result = match cli.cmd {
        Cmd::Eval { cf, q, alpha, family, .. } => cmd_eval(&cfg, &cf, q, alpha, family),
        Cmd::Verify { family, .. } => return cmd_verify(&cfg, &family),
        Cmd::Iterate { start, steps, .. } => cmd_iterate(&cfg, &start, steps),
        Cmd::Scan { grid, alpha, .. } => cmd_scan(&cfg, grid, &alpha),
        Cmd::Figure { id, grid, out, .. } => cmd_figure(&cfg, id, grid, out),
        Cmd::InvertSelberg { x, .. } => cmd_invert(&cfg, &x),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Lib(err)) => {
            eprintln!("error: {err}");
            match err {
                Error::NonConvergence { .. } | Error::PrecisionExhausted { .. } => 3,
                _ => 2,
            }
        }
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Lib(err)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Accepts a plain decimal or `[N]pi`, `sqrtK*pi`, `[N]pi/M`, `[N]pi/sqrtM`.
fn parse_alpha(prec: u32, s: &str) -> Option<Float> {
    if let Some(v) = real::parse_dec(prec, s) {
        return v.is_finite().then_some(v);
    }
    let (head, den) = match s.split_once('/') {
        Some((head, den)) => (head, Some(den)),
        None => (s, None),
    };
    let core = head.strip_suffix("pi")?;
    let (coef, root) = match core.find("sqrt") {
        Some(at) => {
            let inner = core[at..].strip_prefix("sqrt")?.strip_suffix('*')?;
            (&core[..at], Some(inner.parse::<u32>().ok()?))
        }
        None => (core, None),
    };
    let mut val = real::pi(prec);
    if !coef.is_empty() {
        val *= coef.parse::<u32>().ok()?;
    }
    if let Some(k) = root {
        val *= &real::sqrt_u(prec, k);
    }
    match den {
        Some(d) => match d.strip_prefix("sqrt") {
            Some(m) => val /= &real::sqrt_u(prec, m.parse::<u32>().ok()?),
            None => val /= d.parse::<u32>().ok()?,
        },
        None => {}
    }
    Some(val)
}

fn parse_positive(prec: u32, s: &str, what: &str) -> Result<Float, CliError> {
    // Allows `a/b` fractions so exact targets like 1/32 survive the command line.
    let v = match s.split_once('/') {
        Some((num, den)) => {
            let num = real::parse_dec(prec, num);
            let den = real::parse_dec(prec, den);
            match (num, den) {
                (Some(n), Some(d)) if d != 0 => Some(n / d),
                _ => None,
            }
        }
        None => real::parse_dec(prec, s),
    };
    match v {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(usage(format!("{what} is not a valid number: {s}"))),
    }
}

fn cmd_eval(
    cfg: &EvalConfig,
    cf: &str,
    q: Option<String>,
    alpha: Option<String>,
    family: Option<String>,
) -> Result<(), CliError> {
    let kind = CfKind::parse(cf).ok_or_else(|| usage(format!("unknown fraction: {cf}")))?;
    let value = match (q, alpha) {
        (Some(q), None) => {
            let q = parse_positive(cfg.prec(), &q, "--q")?;
            if kind.has_product() {
                eval_product(kind, &q, cfg)?
            } else {
                eval_cf(kind, &q, cfg)?
            }
        }
        (None, Some(alpha)) => {
            let alpha = parse_alpha(cfg.prec(), &alpha)
                .ok_or_else(|| usage(format!("cannot parse --alpha value: {alpha}")))?;
            let id = match family {
                Some(name) => FamilyId::parse(&name)
                    .ok_or_else(|| usage(format!("unknown family: {name}")))?,
                None => default_family(kind),
            };
            eval(kind, &alpha, id, Route::Auto, cfg)?
        }
        _ => return Err(usage("pass exactly one of --q and --alpha")),
    };
    println!("{}", real::format_dec(&value.value, cfg.digits as usize));
    Ok(())
}

fn cmd_verify(cfg: &EvalConfig, family: &str) -> u8 {
    let ids: Vec<FamilyId> = if family == "all" {
        FamilyId::ALL.to_vec()
    } else {
        match FamilyId::parse(family) {
            Some(id) => vec![id],
            None => {
                eprintln!("error: unknown family: {family} (try \"all\")");
                return 2;
            }
        }
    };
    let mut failed = false;
    for id in ids {
        let symmetric = rrcf::family(id).symmetric_alpha(cfg.prec());
        let generic = Float::with_val(cfg.prec(), &symmetric / 2u32);
        let checked: Result<_, Error> = (|| {
            let at_generic = reciprocity_residual(id, &generic, cfg)?;
            let at_symmetric = reciprocity_residual(id, &symmetric, cfg)?;
            Ok((at_generic, at_symmetric))
        })();
        match checked {
            Ok((g, s)) => {
                let ok = g.pass() && s.pass();
                failed |= !ok;
                println!(
                    "{}: {}  generic {:.3e}  symmetric {:.3e}",
                    id.name(),
                    if ok { "PASS" } else { "FAIL" },
                    g.value.to_f64(),
                    s.value.to_f64(),
                );
            }
            Err(err) => {
                failed = true;
                println!("{}: FAIL  ({err})", id.name());
            }
        }
    }
    u8::from(failed)
}

fn cmd_iterate(cfg: &EvalConfig, start: &str, steps: u32) -> Result<(), CliError> {
    let id = ValueId::parse(start)
        .ok_or_else(|| usage(format!("unknown catalog entry: {start}")))?;
    for step in iterate_chain(id, steps, cfg)? {
        println!(
            "{} {} {}",
            step.power,
            step.alpha,
            real::format_dec(&step.value, cfg.digits as usize)
        );
    }
    Ok(())
}

fn cmd_scan(cfg: &EvalConfig, grid: u32, alpha: &str) -> Result<(), CliError> {
    let alpha_max = parse_alpha(cfg.prec(), alpha)
        .ok_or_else(|| usage(format!("cannot parse --alpha value: {alpha}")))?;
    let scan = error_scan(grid, &alpha_max, cfg)?;
    println!("max_error {}", real::format_dec(&scan.max_error, cfg.digits as usize));
    println!(
        "argmax_alpha {} index {}",
        real::format_dec(&scan.argmax_alpha, cfg.digits as usize),
        scan.argmax_index
    );
    Ok(())
}

fn cmd_figure(cfg: &EvalConfig, id: u32, grid: u32, out: Option<PathBuf>) -> Result<(), CliError> {
    let figure = figure_data(id, grid, cfg)?;
    let mut csv = figure.columns.join(",");
    csv.push('\n');
    for row in &figure.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|cell| real::format_dec(cell, cfg.digits as usize))
            .collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    match out {
        Some(path) => std::fs::write(&path, csv)
            .map_err(|err| usage(format!("cannot write {}: {err}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(csv.as_bytes())
                .map_err(|err| usage(format!("cannot write to stdout: {err}")))?;
        }
    }
    Ok(())
}

fn cmd_invert(cfg: &EvalConfig, x: &str) -> Result<(), CliError> {
    let x = parse_positive(cfg.prec(), x, "--x")?;
    let alpha = invert_selberg(&x, cfg)?;
    println!("{}", real::format_dec(&alpha, cfg.digits as usize));
    Ok(())
}
