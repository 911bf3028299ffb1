//! Command-line front end: parses literals or catalog references, runs one
//! construction and writes a JSON document plus optional CSV/SVG reports.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage or input error.

pub mod catalog;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use toepkern::boundary::{outer_from_modulus, DEFAULT_GRID};
use toepkern::expr;
use toepkern::hardy::{classify_and_factor, minimal_theta_rational};
use toepkern::json::{
    blaschke_to_json, complex, cyclicity_str, float, kernel_to_json, kmin_to_json, rational_to_json,
    to_string, verdict_to_json,
};
use toepkern::maximal::{hitt_maximal_verify, maximal_pair, maximality_status, scalar_maximal};
use toepkern::minimal::{kmin_pair_scalar, kmin_pair_vector, kmin_vector};
use toepkern::toeplitz::{
    build_truncated, kernel_basis, kernel_inclusion_check, membership_residual_fns, DEFAULT_KERNEL_TOL,
    DEFAULT_TRUNCATION,
};
use toepkern::{AnalyticFn, BoundaryGrid, Error, FiniteBlaschke, MatrixSymbol, RationalFn, Result};

use catalog::{symbol_at, Catalog, Entry, Item};

#[derive(Parser, Debug)]
#[command(name = "toepkern", version, about = "Minimal Toeplitz kernels and maximal functions")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// Boundary grid size (power of two, at least 256).
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Truncation order K of the Toeplitz sections.
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION)]
    pub trunc: usize,
    /// Relative singular-value threshold for kernels.
    #[arg(long, global = true, default_value_t = DEFAULT_KERNEL_TOL)]
    pub tol: f64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for CSV/SVG reports.
    #[arg(long, global = true)]
    pub report_dir: Option<PathBuf>,
    /// Catalog file; its entries are referenced as `@name`.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Recorded in the output; every command is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Validate inputs without computing.
    #[arg(long, global = true)]
    pub dry_run: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a rational function and split it into inner and outer parts.
    Factor { function: String },
    /// Greatest common divisor of finite Blaschke products.
    Gcd {
        #[arg(long = "blaschke", num_args = 1.., required = true)]
        blaschke: Vec<String>,
    },
    /// Least common multiple of finite Blaschke products.
    Lcm {
        #[arg(long = "blaschke", num_args = 1.., required = true)]
        blaschke: Vec<String>,
    },
    /// Outer function with modulus |f_1| + ... + |f_n| on the circle.
    Outer {
        #[arg(required = true)]
        functions: Vec<String>,
        /// Add 1 to the target modulus.
        #[arg(long)]
        plus_one: bool,
    },
    /// Smallest Blaschke product θ with h in the one-component subspace of θ.
    Mintheta { function: String },
    /// Minimal kernel of one vector.
    Minkernel {
        #[arg(long)]
        vector: String,
        /// Coordinate used as the pivot (0-based); defaults to the last nonzero one.
        #[arg(long)]
        pivot: Option<usize>,
    },
    /// Minimal kernel of a pair: scalar (--f, --g) or vector (--phi, --psi).
    Kminpair {
        #[arg(long, requires = "g", conflicts_with_all = ["phi", "psi"])]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, requires = "psi")]
        phi: Option<String>,
        #[arg(long)]
        psi: Option<String>,
    },
    /// Maximal functions: from a kernel element (--symbol, --start), a
    /// model-space pair (--symbol, --q, --inner) or a maximal tuple (--w, --phi).
    Maxfn {
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long, requires = "symbol")]
        start: Option<String>,
        #[arg(long, requires_all = ["symbol", "inner"])]
        q: Option<String>,
        #[arg(long)]
        inner: Option<String>,
        #[arg(long, requires = "phi")]
        w: Option<String>,
        #[arg(long)]
        phi: Option<String>,
    },
    /// Numerical checks on a symbol.
    Check {
        /// Decide whether ker T_symbol has a maximal function
        #[arg(long, group = "mode")]
        maximality: bool,
        /// Membership residual of --vector in ker T_symbol
        #[arg(long, group = "mode", requires = "vector")]
        membership: bool,
        /// Kernel inclusion against --other
        #[arg(long, group = "mode", requires = "other")]
        inclusion: bool,
        #[arg(long)]
        symbol: String,
        /// Column vector, e.g. `[1, z]`
        #[arg(long)]
        vector: Option<String>,
        /// Second symbol for --inclusion: is ker T_symbol inside ker T_other?
        #[arg(long)]
        other: Option<String>,
    },
    /// CSV/SVG reports: boundary values of functions, singular values of symbols.
    Report {
        #[arg(long)]
        function: Vec<String>,
        #[arg(long)]
        symbol: Vec<String>,
    },
}

struct Ctx {
    flags: Flags,
    catalog: Option<Catalog>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse { pos: 0, msg: msg.into() }
}

impl Ctx {
    fn lookup(&self, s: &str) -> Result<Option<&Entry>> {
        let Some(name) = s.strip_prefix('@') else { return Ok(None) };
        let cat = self.catalog.as_ref().ok_or_else(|| usage(format!("'{s}' needs --catalog")))?;
        cat.get(name).map(Some).ok_or_else(|| usage(format!("no catalog entry '{name}'")))
    }

    fn function(&self, s: &str) -> Result<RationalFn> {
        match self.lookup(s)? {
            Some(Entry::Item(Item::Function(h))) => Ok(h.value().clone()),
            Some(_) => Err(usage(format!("{s} is not a rational function"))),
            None => expr::parse_function(s),
        }
    }

    fn analytic(&self, s: &str) -> Result<AnalyticFn> {
        match self.lookup(s)? {
            Some(Entry::Item(item)) => item.to_analytic(self.flags.grid),
            Some(_) => Err(usage(format!("{s} is not a function"))),
            None => expr::parse_entry(s)?.to_analytic(self.flags.grid),
        }
    }

    fn vector(&self, s: &str) -> Result<Vec<AnalyticFn>> {
        match self.lookup(s)? {
            Some(Entry::Vector(items)) => items.iter().map(|i| i.to_analytic(self.flags.grid)).collect(),
            Some(Entry::Item(item)) => Ok(vec![item.to_analytic(self.flags.grid)?]),
            Some(_) => Err(usage(format!("{s} is not a vector"))),
            None => expr::parse_vector(s)?.iter().map(|e| e.to_analytic(self.flags.grid)).collect(),
        }
    }

    fn rational_vector(&self, s: &str) -> Result<Vec<RationalFn>> {
        self.vector(s)?
            .into_iter()
            .map(|f| f.as_rational().cloned().ok_or_else(|| usage(format!("{s} must have rational entries"))))
            .collect()
    }

    fn symbol(&self, s: &str) -> Result<MatrixSymbol> {
        match self.lookup(s)? {
            Some(Entry::Symbol(g)) => symbol_at(g, self.flags.grid),
            Some(Entry::Item(Item::Function(h))) => MatrixSymbol::scalar(h.value().clone(), self.flags.grid),
            Some(_) => Err(usage(format!("{s} is not a symbol"))),
            None => MatrixSymbol::from_rational_rows(expr::parse_matrix(s)?, self.flags.grid),
        }
    }

    fn rational_rows(&self, s: &str) -> Result<Vec<Vec<RationalFn>>> {
        match self.lookup(s)? {
            Some(Entry::Symbol(g)) => (0..g.dim())
                .map(|i| {
                    (0..g.dim())
                        .map(|j| g.entry(i, j).as_rational().cloned().ok_or_else(|| usage(format!("{s} must be rational"))))
                        .collect()
                })
                .collect(),
            Some(_) => Err(usage(format!("{s} is not a matrix"))),
            None => expr::parse_column_or_matrix(s),
        }
    }

    fn blaschke(&self, s: &str) -> Result<FiniteBlaschke> {
        match self.lookup(s)? {
            Some(Entry::Item(Item::Function(h))) => expr::parse_blaschke(&expr::display(h.value())),
            Some(_) => Err(usage(format!("{s} is not a Blaschke product"))),
            None => expr::parse_blaschke(s),
        }
    }

    fn report_path(&self, name: &str) -> Option<PathBuf> {
        self.flags.report_dir.as_ref().map(|d| d.join(name))
    }

    fn boundary_report(&self, stem: &str, g: &BoundaryGrid, title: &str) -> Result<Vec<String>> {
        let (Some(csv), Some(svg)) = (self.report_path(&format!("{stem}.csv")), self.report_path(&format!("{stem}.svg"))) else {
            return Ok(Vec::new());
        };
        report::boundary_csv(&csv, g)?;
        report::modulus_svg(&svg, g, title)?;
        Ok(vec![display_path(&csv), display_path(&svg)])
    }

    fn spectrum_report(&self, stem: &str, g: &MatrixSymbol, title: &str) -> Result<(Value, Vec<String>)> {
        let t = build_truncated(g, self.flags.trunc)?;
        let b = kernel_basis(&t, self.flags.tol)?;
        let summary = kernel_to_json(&b);
        let (Some(csv), Some(svg)) = (self.report_path(&format!("{stem}.csv")), self.report_path(&format!("{stem}.svg"))) else {
            return Ok((summary, Vec::new()));
        };
        report::singular_csv(&csv, b.singular_values())?;
        let smax = b.singular_values().first().copied().unwrap_or(1.0);
        report::singular_svg(&svg, b.singular_values(), self.flags.tol * smax, title)?;
        Ok((summary, vec![display_path(&csv), display_path(&svg)]))
    }
}

fn display_path(p: &Path) -> String {
    p.display().to_string()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Factor { .. } => "factor",
        Command::Gcd { .. } => "gcd",
        Command::Lcm { .. } => "lcm",
        Command::Outer { .. } => "outer",
        Command::Mintheta { .. } => "mintheta",
        Command::Minkernel { .. } => "minkernel",
        Command::Kminpair { .. } => "kminpair",
        Command::Maxfn { .. } => "maxfn",
        Command::Check { .. } => "check",
        Command::Report { .. } => "report",
    }
}

/// Parses every input first; a dry run stops there and returns `null`.
fn execute(cli: &Cli, ctx: &Ctx) -> Result<Value> {
    let dry = cli.flags.dry_run;
    let mut files: Vec<String> = Vec::new();
    let result = match &cli.command {
        Command::Factor { function } => {
            let f = ctx.function(function)?;
            if dry {
                return Ok(Value::Null);
            }
            let h = classify_and_factor(&f)?;
            let report = f.region_classify();
            if h.is_hardy() {
                files.extend(ctx.boundary_report("factor_boundary", &BoundaryGrid::sample_rational(&f, ctx.flags.grid)?, "|f| on the circle")?);
            }
            json!({
                "function": rational_to_json(&f),
                "class": format!("{:?}", h.class()),
                "inner": h.inner().map(blaschke_to_json).unwrap_or(Value::Null),
                "outer": h.outer().map(rational_to_json).unwrap_or(Value::Null),
                "cyclicity": cyclicity_str(h.cyclicity()),
                "zeros_in_disc": report.zeros_in_disc.iter().copied().map(complex).collect::<Vec<_>>(),
                "poles_outside": report.poles_outside.iter().copied().map(complex).collect::<Vec<_>>(),
                "poles_in_closed_disc": report.poles_in_disc.iter().chain(&report.poles_on_circle).copied().map(complex).collect::<Vec<_>>(),
            })
        }
        Command::Gcd { blaschke } | Command::Lcm { blaschke } => {
            let bs = blaschke.iter().map(|s| ctx.blaschke(s)).collect::<Result<Vec<_>>>()?;
            if dry {
                return Ok(Value::Null);
            }
            let is_gcd = matches!(cli.command, Command::Gcd { .. });
            let first = bs[0].clone();
            let r = bs[1..].iter().fold(first, |acc, b| if is_gcd { acc.gcd(b) } else { acc.lcm(b) });
            blaschke_to_json(&r)
        }
        Command::Outer { functions, plus_one } => {
            let fs = functions.iter().map(|s| ctx.function(s)).collect::<Result<Vec<_>>>()?;
            if dry {
                return Ok(Value::Null);
            }
            let n = ctx.flags.grid;
            let base = if *plus_one { 1.0 } else { 0.0 };
            let mut m = BoundaryGrid::constant(n, num_complex::Complex64::new(base, 0.0))?;
            for f in &fs {
                m = &m + &BoundaryGrid::sample_rational(f, n)?.abs();
            }
            let u = outer_from_modulus(&m)?;
            files.extend(ctx.boundary_report("outer_boundary", u.boundary(), "|u| on the circle")?);
            json!({
                "value_at_zero": complex(u.value_at_zero()),
                "modulus_error": float(u.modulus_error()),
                "winding_number": u.winding_number(),
                "clamped": u.clamped(),
                "warning": u.has_warning(),
                "taylor": (0..16).map(|k| complex(u.boundary().coeff(k))).collect::<Vec<_>>(),
            })
        }
        Command::Mintheta { function } => {
            let f = ctx.function(function)?;
            if dry {
                return Ok(Value::Null);
            }
            blaschke_to_json(&minimal_theta_rational(&f)?)
        }
        Command::Minkernel { vector, pivot } => {
            let phis = ctx.rational_vector(vector)?;
            if dry {
                return Ok(Value::Null);
            }
            let pivot = match pivot {
                Some(p) => *p,
                None => phis.iter().rposition(|f| !f.is_zero()).ok_or(Error::ZeroInput)?,
            };
            let r = kmin_vector(&phis, pivot, ctx.flags.grid)?;
            let mut v = kmin_to_json(&r);
            if let Some(g) = &r.symbol {
                let (kernel, f) = ctx.spectrum_report("minkernel_singular_values", g, "singular values")?;
                files.extend(f);
                v["kernel"] = kernel;
            }
            v
        }
        Command::Kminpair { f, g, phi, psi } => {
            let r = match (f, g, phi, psi) {
                (Some(f), Some(g), None, None) => {
                    let f = ctx.function(f)?;
                    let g = ctx.analytic(g)?;
                    if dry {
                        return Ok(Value::Null);
                    }
                    kmin_pair_scalar(&f, &g, ctx.flags.grid)?
                }
                (None, None, Some(phi), Some(psi)) => {
                    let phi = ctx.rational_vector(phi)?;
                    let psi = ctx.vector(psi)?;
                    let (Ok(phi), Ok(psi)) = (<[RationalFn; 2]>::try_from(phi), <[AnalyticFn; 2]>::try_from(psi)) else {
                        return Err(usage("--phi and --psi must have two entries"));
                    };
                    if dry {
                        return Ok(Value::Null);
                    }
                    kmin_pair_vector(&phi, &psi, ctx.flags.grid)?
                }
                _ => return Err(usage("give either --f and --g, or --phi and --psi")),
            };
            let mut v = kmin_to_json(&r);
            if let Some(g) = &r.symbol {
                let (kernel, f) = ctx.spectrum_report("kminpair_singular_values", g, "singular values")?;
                files.extend(f);
                v["kernel"] = kernel;
            }
            v
        }
        Command::Maxfn { symbol, start, q, inner, w, phi } => {
            if let (Some(w), Some(phi)) = (w, phi) {
                let w = ctx.rational_rows(w)?;
                let phi = ctx.rational_rows(phi)?;
                if dry {
                    return Ok(Value::Null);
                }
                let tuple = maximal_pair(&w, &phi, ctx.flags.grid)?;
                json!({ "tuple": tuple.iter().map(|v| v.iter().map(rational_to_json).collect::<Vec<_>>()).collect::<Vec<_>>() })
            } else if let (Some(symbol), Some(start)) = (symbol, start) {
                let g = scalar_symbol(ctx, symbol)?;
                let f = ctx.function(start)?;
                if dry {
                    return Ok(Value::Null);
                }
                let m = scalar_maximal(&g, &f, ctx.flags.grid)?;
                json!({ "maximal": rational_to_json(&m) })
            } else if let (Some(symbol), Some(q), Some(inner)) = (symbol, q, inner) {
                let g = scalar_symbol(ctx, symbol)?;
                let q = ctx.function(q)?;
                let i = ctx.blaschke(inner)?;
                if dry {
                    return Ok(Value::Null);
                }
                json!({ "verified": hitt_maximal_verify(&g, &q, &i, ctx.flags.grid)? })
            } else {
                return Err(usage("give --symbol with --start, --symbol with --q and --inner, or --w with --phi"));
            }
        }
        Command::Check { maximality, membership, inclusion, symbol, vector, other } => {
            let g = ctx.symbol(symbol)?;
            if *maximality {
                if dry {
                    return Ok(Value::Null);
                }
                let v = maximality_status(&g, ctx.flags.trunc, ctx.flags.tol)?;
                let (_, f) = ctx.spectrum_report("check_singular_values", &g, "singular values")?;
                files.extend(f);
                verdict_to_json(&v)
            } else if *membership {
                let f = ctx.vector(vector.as_deref().unwrap_or_default())?;
                if dry {
                    return Ok(Value::Null);
                }
                let r = membership_residual_fns(&g, &f)?;
                json!({ "residual": float(r), "member": r < 1e-6 })
            } else if *inclusion {
                let h = ctx.symbol(other.as_deref().unwrap_or_default())?;
                if dry {
                    return Ok(Value::Null);
                }
                json!({ "included": kernel_inclusion_check(&g, &h, ctx.flags.trunc, 1e-5)? })
            } else {
                return Err(usage("check needs one of --maximality, --membership, --inclusion"));
            }
        }
        Command::Report { function, symbol } => {
            if ctx.flags.report_dir.is_none() && !dry {
                return Err(usage("report needs --report-dir"));
            }
            let fs = function.iter().map(|s| ctx.function(s)).collect::<Result<Vec<_>>>()?;
            let gs = symbol.iter().map(|s| ctx.symbol(s)).collect::<Result<Vec<_>>>()?;
            if dry {
                return Ok(Value::Null);
            }
            let mut kernels = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let g = BoundaryGrid::sample_rational(f, ctx.flags.grid)?;
                files.extend(ctx.boundary_report(&format!("function_{i}"), &g, &format!("|{}|", expr::display(f)))?);
            }
            for (i, g) in gs.iter().enumerate() {
                let (k, f) = ctx.spectrum_report(&format!("symbol_{i}"), g, &format!("singular values of symbol {i}"))?;
                files.extend(f);
                kernels.push(k);
            }
            json!({ "kernels": kernels })
        }
    };
    Ok(json!({ "result": result, "reports": files }))
}

fn scalar_symbol(ctx: &Ctx, s: &str) -> Result<RationalFn> {
    let g = ctx.symbol(s)?;
    if g.dim() != 1 {
        return Err(usage("expected a scalar symbol"));
    }
    g.entry(0, 0).as_rational().cloned().ok_or_else(|| usage("expected a rational symbol"))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Schema { .. } => 2,
        _ => 1,
    }
}

fn error_doc(e: &Error) -> String {
    to_string(&json!({ "error": e.code(), "detail": e.to_string() }))
}

/// Runs one command line and returns the process exit code. Output goes
/// to `--out` or stdout; errors are printed as `{"error", "detail"}`.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_cli(&cli) {
        Ok(()) => 0,
        Err(e) => {
            print!("{}", error_doc(&e));
            exit_code(&e)
        }
    }
}

fn run_cli(cli: &Cli) -> Result<()> {
    let catalog = cli.flags.catalog.as_deref().map(Catalog::load).transpose()?;
    let provenance = catalog.as_ref().map(|c| json!({ "source": c.provenance.source, "sha256": c.provenance.sha256 }));
    let ctx = Ctx { flags: cli.flags.clone(), catalog };
    if let Some(d) = &ctx.flags.report_dir {
        std::fs::create_dir_all(d).map_err(|e| usage(format!("cannot create {}: {e}", d.display())))?;
    }
    let body = execute(cli, &ctx)?;
    let mut doc = json!({
        "command": command_name(&cli.command),
        "flags": {
            "grid": ctx.flags.grid,
            "trunc": ctx.flags.trunc,
            "tol": float(ctx.flags.tol),
            "seed": ctx.flags.seed,
        },
    });
    if cli.flags.dry_run {
        doc["dry_run"] = Value::Bool(true);
        doc["valid"] = Value::Bool(true);
    } else {
        doc["result"] = body["result"].clone();
        doc["reports"] = body["reports"].clone();
    }
    if let Some(p) = provenance {
        doc["catalog"] = p;
    }
    let text = to_string(&doc);
    match &cli.flags.out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
