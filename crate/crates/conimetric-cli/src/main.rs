//! Command-line front end: evaluate densities and bounds, emit CSV tables and
//! verification reports.
//!
//! Exit codes: 0 success / all checks pass, 1 verification failure, 2 invalid
//! input or domain error, 3 numerical fault.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use conimetric::bounds::{
    landau_bound, lower_bound_constants, lower_bound_with, pole_free_radius, schottky_bound,
    schottky_lk, schottky_zero_free_bound, Order, SchottkyBound, TriangleSignature,
};
use conimetric::error::Error;
use conimetric::metric::{Density, SingularOrders, PUNCTURE_EXCLUSION};
use conimetric::verify::{run_suite, Suite, Tolerances};

#[derive(Parser)]
#[command(
    name = "conimetric",
    version,
    about = "Hyperbolic densities with conical singularities on the twice-punctured plane"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable value(s)
    Plain,
    /// Line-delimited key=value records
    Records,
}

#[derive(Args)]
struct OrdersArg {
    /// Singularity orders a1,a2,a3 at 0, 1, infinity. Each entry is a decimal
    /// in (0,1], `inf` (meaning order 1), or an integer n >= 2 standing for
    /// the multiplicity with order 1 - 1/n.
    #[arg(long, value_parser = parse_orders, allow_hyphen_values = true)]
    orders: SingularOrders,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the density at a point
    Eval {
        #[command(flatten)]
        orders: OrdersArg,
        /// Evaluation point `re` or `re,im`
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Print K1, K2, K3, c0, C1, C3 and lambda(-1)
    Constants {
        #[command(flatten)]
        orders: OrdersArg,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Landau/Schottky bounds, the sharp lower bound, and related constants
    #[command(subcommand)]
    Bound(BoundCmd),
    /// CSV table of density, lower bound, or their gap over a grid
    Table {
        #[command(flatten)]
        orders: OrdersArg,
        #[arg(long, value_enum, default_value = "density")]
        what: TableKind,
        /// Real-axis range `min:max:n`
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        re: GridRange,
        /// Imaginary-axis range `min:max:n`
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        im: GridRange,
        /// Write to a file instead of standard output
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Run verification suites (exit 1 if any check fails)
    Verify {
        #[command(flatten)]
        orders: OrdersArg,
        /// curvature | schwarzian | symmetry | monotone | bounds | all
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Sharp upper bound on |f'(0)| for f in M_{j,k,l}
    Landau {
        #[arg(long, value_parser = parse_signature)]
        sig: TriangleSignature,
        /// f(0) as `re` or `re,im`
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a0: Complex64,
    },
    /// Bound on log|f(z)| for |z| = r; prints `unbounded` beyond the
    /// pole-free radius
    Schottky {
        #[arg(long, value_parser = parse_signature)]
        sig: TriangleSignature,
        /// |f(0)|
        #[arg(long)]
        f0: f64,
        #[arg(long)]
        r: f64,
    },
    /// Schottky bound on the whole disk for pole-free classes M_{j,k,inf}
    ZeroFree {
        #[arg(long, value_parser = parse_order)]
        j: Order,
        #[arg(long, value_parser = parse_order)]
        k: Order,
        #[arg(long)]
        f0: f64,
        #[arg(long)]
        r: f64,
    },
    /// Sharp lower bound for the density at a point
    Lower {
        #[command(flatten)]
        orders: OrdersArg,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Pole-free radius exp(-(C1 + log+|f(0)|)/l)
    Radius {
        #[arg(long, value_parser = parse_signature)]
        sig: TriangleSignature,
        #[arg(long)]
        f0: f64,
    },
    /// The constant L_k of the zero-free Schottky bound
    Lk {
        #[arg(long, value_parser = parse_order)]
        k: Order,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Density,
    Lowerbound,
    Gap,
}

#[derive(Clone, Copy)]
struct GridRange {
    min: f64,
    max: f64,
    n: usize,
}

// ---------------------------------------------------------------------------
// Parsers
// ---------------------------------------------------------------------------

fn parse_order_component(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(1.0);
    }
    let v: f64 = t.parse().map_err(|_| format!("cannot parse order entry {t:?}"))?;
    if v > 1.0 {
        // integer multiplicity n >= 2 stands for the order 1 - 1/n
        if v.fract() == 0.0 && v >= 2.0 {
            Ok(1.0 - 1.0 / v)
        } else {
            Err(format!("order entry {t} must be in (0,1], `inf`, or an integer >= 2"))
        }
    } else {
        Ok(v)
    }
}

fn parse_orders(s: &str) -> Result<SingularOrders, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated orders, got {s:?}"));
    }
    let a1 = parse_order_component(parts[0])?;
    let a2 = parse_order_component(parts[1])?;
    let a3 = parse_order_component(parts[2])?;
    SingularOrders::new(a1, a2, a3).map_err(|e| e.to_string())
}

fn parse_order(s: &str) -> Result<Order, String> {
    s.parse::<Order>().map_err(|e| e.to_string())
}

fn parse_signature(s: &str) -> Result<TriangleSignature, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected a signature j,k,l, got {s:?}"));
    }
    let j = parse_order(parts[0])?;
    let k = parse_order(parts[1])?;
    let l = parse_order(parts[2])?;
    TriangleSignature::new(j, k, l).map_err(|e| e.to_string())
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse_part = |p: &str| -> Result<f64, String> {
        let v: f64 = p.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite coordinate in {s:?}"))
        }
    };
    let parts: Vec<&str> = s.split(',').collect();
    match parts.len() {
        1 => Ok(Complex64::new(parse_part(parts[0])?, 0.0)),
        2 => Ok(Complex64::new(parse_part(parts[0])?, parse_part(parts[1])?)),
        _ => Err(format!("expected `re` or `re,im`, got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<GridRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected `min:max:n`, got {s:?}"));
    }
    let min: f64 = parts[0].parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let max: f64 = parts[1].parse().map_err(|_| format!("bad range end in {s:?}"))?;
    let n: usize = parts[2].parse().map_err(|_| format!("bad range count in {s:?}"))?;
    if min.is_nan() || max.is_nan() || n == 0 || (n > 1 && min >= max) {
        return Err(format!("degenerate range {s:?}"));
    }
    Ok(GridRange { min, max, n })
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

/// Format with `sig` significant digits, plain decimal where reasonable.
fn format_sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if exp >= -4 && exp < sig as i32 {
        let prec = (sig as i32 - 1 - exp).max(0) as usize;
        format!("{v:.prec$}")
    } else {
        format!("{:.*e}", sig - 1, v)
    }
}

fn emit_value(format: Format, name: &str, v: f64) {
    match format {
        Format::Plain => println!("{}", format_sig(v, 12)),
        Format::Records => println!("{name}={}", format_sig(v, 12)),
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Convergence(_) | Error::NonPositiveDensity { .. } => 3,
        _ => 2,
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Eval { orders, z, format } => {
            let v = Density::new(orders.orders)?.eval(z)?;
            emit_value(format, "density", v);
            Ok(0)
        }
        Cmd::Constants { orders, format } => {
            let d = Density::new(orders.orders)?;
            let k = d.constants();
            let c = lower_bound_constants(&orders.orders)?;
            let rows = [
                ("k1", k.k1),
                ("k2", k.k2),
                ("k3", k.k3),
                ("c0", k.c0),
                ("c1", c.c1),
                ("c3", c.c3),
                ("lambda_minus_one", c.lambda_minus_one),
            ];
            for (name, v) in rows {
                match format {
                    Format::Plain => println!("{name} = {}", format_sig(v, 12)),
                    Format::Records => println!("{name}={}", format_sig(v, 12)),
                }
            }
            Ok(0)
        }
        Cmd::Bound(bound) => run_bound(bound),
        Cmd::Table { orders, what, re, im, output } => {
            let csv = render_table(orders.orders, what, re, im)?;
            match output {
                Some(path) => {
                    let mut f = std::fs::File::create(&path)
                        .map_err(|e| Error::Domain(format!("cannot write {path:?}: {e}")))?;
                    f.write_all(csv.as_bytes())
                        .map_err(|e| Error::Domain(format!("cannot write {path:?}: {e}")))?;
                }
                None => print!("{csv}"),
            }
            Ok(0)
        }
        Cmd::Verify { orders, suite } => {
            let suite: Suite = suite.parse()?;
            let tol = match std::env::var("CONIMETRIC_TOL") {
                Ok(s) => {
                    let t: f64 = s.parse().map_err(|_| {
                        Error::Param(format!("CONIMETRIC_TOL = {s:?} is not a number"))
                    })?;
                    if t.is_nan() || t <= 0.0 {
                        return Err(Error::Param(format!(
                            "CONIMETRIC_TOL must be positive, got {t}"
                        )));
                    }
                    Tolerances::uniform(t)
                }
                Err(_) => Tolerances::default(),
            };
            let reports = run_suite(&orders.orders, suite, &tol)?;
            let mut all_pass = true;
            for r in &reports {
                print!("{r}");
                all_pass &= r.pass;
            }
            for r in &reports {
                println!("{}", r.to_record());
            }
            println!("overall={}", if all_pass { "pass" } else { "fail" });
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn run_bound(cmd: BoundCmd) -> Result<u8, Error> {
    match cmd {
        BoundCmd::Landau { sig, a0 } => {
            let v = landau_bound(&sig, a0)?;
            println!("{}", format_sig(v, 12));
        }
        BoundCmd::Schottky { sig, f0, r } => match schottky_bound(&sig, f0, r)? {
            SchottkyBound::Finite(v) => println!("{}", format_sig(v, 12)),
            SchottkyBound::Unbounded => println!("unbounded"),
        },
        BoundCmd::ZeroFree { j, k, f0, r } => {
            let v = schottky_zero_free_bound(j, k, f0, r)?;
            println!("{}", format_sig(v, 12));
        }
        BoundCmd::Lower { orders, z } => {
            let d = Density::new(orders.orders)?;
            let c = lower_bound_constants(&orders.orders)?;
            println!("{}", format_sig(lower_bound_with(&c, &d, z)?, 12));
        }
        BoundCmd::Radius { sig, f0 } => {
            println!("{}", format_sig(pole_free_radius(&sig, f0)?, 12));
        }
        BoundCmd::Lk { k } => {
            println!("{}", format_sig(schottky_lk(k), 12));
        }
    }
    Ok(0)
}

fn render_table(
    orders: SingularOrders,
    what: TableKind,
    re: GridRange,
    im: GridRange,
) -> Result<String, Error> {
    let d = Density::new(orders)?;
    let constants = lower_bound_constants(&orders)?;
    let mut out = String::from("re,im,value\n");
    for iy in 0..im.n {
        let y = if im.n > 1 {
            im.min + (im.max - im.min) * iy as f64 / (im.n - 1) as f64
        } else {
            im.min
        };
        for ix in 0..re.n {
            let x = if re.n > 1 {
                re.min + (re.max - re.min) * ix as f64 / (re.n - 1) as f64
            } else {
                re.min
            };
            let z = Complex64::new(x, y);
            let near_puncture = z.norm() <= PUNCTURE_EXCLUSION
                || (z - Complex64::ONE).norm() <= PUNCTURE_EXCLUSION;
            let cell = if near_puncture {
                "nan".to_string()
            } else {
                let v = match what {
                    TableKind::Density => d.eval(z)?,
                    TableKind::Lowerbound => lower_bound_with(&constants, &d, z)?,
                    TableKind::Gap => d.eval(z)? - lower_bound_with(&constants, &d, z)?,
                };
                format!("{v:e}")
            };
            out.push_str(&format!("{x:e},{y:e},{cell}\n"));
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
