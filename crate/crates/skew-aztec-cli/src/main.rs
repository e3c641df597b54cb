//! `skew-aztec` command-line tool.
//!
//! Exit codes: `0` success, `1` a verification failed, `2` usage or input error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use skew_aztec::cli_io::{
    self, fmt_num, IdentityParams, IdentitySuite, KernelRow, KernelTable, RenderStyle, SpecDocument, ToolConfig,
    CORRELATION_TOL,
};
use skew_aztec::finite_kernels::PreLimit;
use skew_aztec::geometry::{DomainSpec, XiEta};
use skew_aztec::kasteleyn::{correlation_suite, KasteleynSystem};
use skew_aztec::limit_kernels::{cusp_airy, Tacnode, TacnodeParams, TacnodePoint};
use skew_aztec::oracle::{self, BranchOrder, DEFAULT_CELL_CAP};
use skew_aztec::sampler::{self, ChainConfig};
use skew_aztec::tiling::PathColor;
use skew_aztec::Error;

#[derive(Debug, Parser)]
#[command(name = "skew-aztec", version, about = "Domino tilings of skew-Aztec rectangles and their tacnode kernels")]
struct Cli {
    /// JSON file with quadrature overrides: {"quadrature": {..}, "airy": {..}}.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tilability verdict and derived parameters.
    Check {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long = "M")]
        big_m: i64,
        /// Print the spec document as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive enumeration: tiling count and weight polynomial.
    Enumerate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write every tiling as one JSON line.
        #[arg(long)]
        emit_tilings: Option<PathBuf>,
        /// Maximum number of cells for the depth-first enumerator.
        #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
        cap: usize,
        /// Use the line-by-line transfer recursion (no cap, no tilings).
        #[arg(long, conflicts_with = "emit_tilings")]
        transfer: bool,
    },
    /// Metropolis sampling from the `a^(#vertical)` measure.
    Sample {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        burn_in: u64,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Red-dot counts per line as CSV.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Final tiling as JSON.
        #[arg(long)]
        tiling_out: Option<PathBuf>,
        /// Level lines drawn over the SVG.
        #[arg(long, value_delimiter = ',')]
        paths: Vec<ColorArg>,
    },
    /// Kernel tables as CSV.
    Kernel {
        #[command(subcommand)]
        kind: KernelCommand,
    },
    /// Numerical verification suites.
    Verify {
        #[command(subcommand)]
        kind: VerifyCommand,
    },
    /// SVG picture of a tiling (the initial tiling when no file is given).
    Render {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        tiling: Option<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
        /// JSON render style.
        #[arg(long)]
        style: Option<PathBuf>,
        #[arg(long)]
        cell_px: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        paths: Vec<ColorArg>,
    },
}

#[derive(Debug, Subcommand)]
enum KernelCommand {
    /// Exact red kernel from the Kasteleyn inverse at all pairs of blue centres.
    Finite {
        #[command(flatten)]
        spec: SpecArgs,
        /// JSON list of {"xi", "eta"}.
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scaled pre-limit kernel at all pairs of points.
    Prelimit {
        #[command(flatten)]
        spec: SpecArgs,
        /// Explicit `𝔯`, used with --n, --rho and --beta instead of a domain.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        rho: Option<i64>,
        #[arg(long)]
        beta: Option<f64>,
        /// JSON list of {"x", "y"}.
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discrete tacnode kernel on all pairs of grid points.
    Tacnode {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        rho: i64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// JSON {"taus": [..], "ys": [..]}.
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cusp-Airy kernel at all pairs of points.
    CuspAiry {
        /// JSON list of {"tau", "xi"}.
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Toeplitz identities and the green/blue duality.
    Identities {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long = "M")]
        big_m: Option<i64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kenyon and gap probabilities against exhaustive enumeration.
    Correlations {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 25)]
        pairs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pre-limit to tacnode, or tacnode to cusp-Airy, convergence.
    Convergence {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, value_delimiter = ',', default_values_t = [64, 256, 1024])]
        ns: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16])]
        rs: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A domain given by a spec file or by its four parameters.
#[derive(Debug, Args)]
struct SpecArgs {
    /// JSON {"n", "m", "M", "a"}.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    m: Option<i64>,
    #[arg(long = "M")]
    big_m: Option<i64>,
    #[arg(long)]
    a: Option<f64>,
}

impl SpecArgs {
    fn load(&self) -> Result<DomainSpec, Failure> {
        if let Some(path) = &self.spec {
            let mut spec = cli_io::parse_spec(&cli_io::read_text(path)?)?;
            if let Some(a) = self.a {
                spec = spec.with_weight(a);
            }
            spec.validate()?;
            return Ok(spec);
        }
        match (self.n, self.m, self.big_m) {
            (Some(n), Some(m), Some(mm)) => Ok(DomainSpec::new(n, m, mm, self.a.unwrap_or(1.0))?),
            _ => Err(Failure::Usage("give --spec FILE or all of --n, --m, --M".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ColorArg {
    Red,
    Blue,
    Green,
}

impl From<ColorArg> for PathColor {
    fn from(c: ColorArg) -> Self {
        match c {
            ColorArg::Red => PathColor::Red,
            ColorArg::Blue => PathColor::Blue,
            ColorArg::Green => PathColor::Green,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Bo,
    Blowup,
    Duality,
    Dphi,
    All,
}

impl From<SuiteArg> for IdentitySuite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Bo => IdentitySuite::Bo,
            SuiteArg::Blowup => IdentitySuite::Blowup,
            SuiteArg::Duality => IdentitySuite::Duality,
            SuiteArg::Dphi => IdentitySuite::Dphi,
            SuiteArg::All => IdentitySuite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TheoremArg {
    Main,
    Cusp,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(p) => ToolConfig::parse(&cli_io::read_text(p)?)?,
        None => ToolConfig::default(),
    };
    match cli.command {
        Command::Check { n, m, big_m, json } => check(n, m, big_m, json),
        Command::Enumerate {
            spec,
            emit_tilings,
            cap,
            transfer,
        } => enumerate(&spec.load()?, emit_tilings.as_deref(), cap, transfer),
        Command::Sample {
            spec,
            steps,
            burn_in,
            svg,
            stats,
            tiling_out,
            paths,
        } => {
            let spec = spec.load()?;
            let cfg = ChainConfig {
                steps,
                burn_in,
                seed: cli.seed,
                report_every: 0,
            };
            let res = sampler::sample(&spec, &cfg)?;
            println!("steps {}", steps + burn_in);
            println!("accepted {}", res.accepted);
            println!("vertical_dominoes {}", res.tiling.vertical_count());
            if let Some(p) = svg {
                let style = RenderStyle {
                    draw_paths: paths.into_iter().map(Into::into).collect(),
                    ..RenderStyle::default()
                };
                cli_io::write_text(&p, &cli_io::render_svg(&res.tiling, &style)?)?;
            }
            if let Some(p) = stats {
                cli_io::write_text(&p, &cli_io::red_counts_csv(&res.red_counts)?)?;
            }
            if let Some(p) = tiling_out {
                cli_io::write_text(&p, &cli_io::tiling_to_json(&res.tiling)?)?;
            }
            Ok(())
        }
        Command::Kernel { kind } => kernel(kind, &config),
        Command::Verify { kind } => verify(kind, &config, cli.seed),
        Command::Render {
            spec,
            tiling,
            svg,
            style,
            cell_px,
            paths,
        } => {
            let spec = spec.load()?;
            let t = match tiling {
                Some(p) => cli_io::tiling_from_json(&spec, &cli_io::read_text(&p)?)?,
                None => sampler::initial_tiling(&spec)?,
            };
            let mut style = match style {
                Some(p) => cli_io::parse_json::<RenderStyle>(&cli_io::read_text(&p)?)?,
                None => RenderStyle::default(),
            };
            if let Some(px) = cell_px {
                style.cell_px = px;
            }
            if !paths.is_empty() {
                style.draw_paths = paths.into_iter().map(Into::into).collect();
            }
            cli_io::write_text(&svg, &cli_io::render_svg(&t, &style)?)?;
            Ok(())
        }
    }
}

fn check(n: i64, m: i64, big_m: i64, json: bool) -> Result<(), Failure> {
    let doc = SpecDocument::new(DomainSpec::new(n, m, big_m, 1.0)?)?;
    if json {
        println!("{}", cli_io::to_json(&doc)?);
        return Ok(());
    }
    let v = doc.verdict.expect("verdict");
    let d = doc.derived.expect("derived parameters");
    println!("{}", if v.tilable { "tilable" } else { "not tilable" });
    println!("case {:?}", v.case);
    println!("Δ={} σ={} κ={} ρ={} 𝔯={}", d.delta, d.sigma, d.kappa, d.rho, d.r);
    Ok(())
}

fn enumerate(spec: &DomainSpec, emit: Option<&Path>, cap: usize, transfer: bool) -> Result<(), Failure> {
    let (poly, tilings) = if transfer {
        (oracle::transfer_polynomial(spec)?, None)
    } else {
        let r = oracle::enumerate_with(spec, emit.is_some(), cap, BranchOrder::LineMajor)?;
        (r.polynomial, r.tilings)
    };
    println!("count {}", poly.count());
    println!("partition_function {}", fmt_num(poly.eval(spec.a)));
    let coeffs: Vec<String> = poly.coeffs.iter().map(|c| c.to_string()).collect();
    println!("coefficients {}", coeffs.join(" "));
    if let (Some(path), Some(ts)) = (emit, tilings) {
        cli_io::write_text(path, &cli_io::tilings_to_jsonl(&ts)?)?;
    }
    Ok(())
}

fn emit_table(table: &KernelTable, out: Option<&Path>) -> Result<(), Failure> {
    let csv = table.to_csv()?;
    match out {
        Some(p) => cli_io::write_text(p, &csv)?,
        None => {
            let _ = std::io::stdout().write_all(csv.as_bytes());
        }
    }
    Ok(())
}

fn kernel(kind: KernelCommand, config: &ToolConfig) -> Result<(), Failure> {
    match kind {
        KernelCommand::Finite { spec, points, out } => {
            let spec = spec.load()?;
            let pts: Vec<cli_io::LatticePoint> = cli_io::parse_json(&cli_io::read_text(&points)?)?;
            let pts: Vec<XiEta> = pts.iter().map(|p| XiEta::new(p.xi, p.eta)).collect();
            let sys = KasteleynSystem::build(&spec)?;
            let k = sys.kred_matrix(&pts)?;
            let mut table = KernelTable::new(&["xi1", "eta1", "xi2", "eta2"]);
            for (i, p) in pts.iter().enumerate() {
                for (j, q) in pts.iter().enumerate() {
                    table.rows.push(KernelRow {
                        inputs: vec![p.xi as f64, p.eta as f64, q.xi as f64, q.eta as f64],
                        re: k[(i, j)].re,
                        im: k[(i, j)].im,
                        err_estimate: 0.0,
                    });
                }
            }
            emit_table(&table, out.as_deref())
        }
        KernelCommand::Prelimit {
            spec,
            r,
            rho,
            beta,
            points,
            out,
        } => {
            let pre = match (r, rho, beta) {
                (Some(r), Some(rho), Some(beta)) => {
                    let n = spec
                        .n
                        .ok_or_else(|| Failure::Usage("--r, --rho and --beta need --n".into()))?;
                    PreLimit::new(n, r, rho, beta, &config.quadrature)?
                }
                (None, None, None) => PreLimit::from_spec(&spec.load()?, &config.quadrature)?,
                _ => return Err(Failure::Usage("give all of --r, --rho, --beta or none".into())),
            };
            let pts: Vec<cli_io::ScaledPoint> = cli_io::parse_json(&cli_io::read_text(&points)?)?;
            let mut table = KernelTable::new(&["x1", "y1", "x2", "y2"]);
            for p in &pts {
                for q in &pts {
                    let v = pre.eval_with_error(p.x, p.y, q.x, q.y)?;
                    table.rows.push(KernelRow {
                        inputs: vec![p.x as f64, p.y, q.x as f64, q.y],
                        re: v.value.re,
                        im: v.value.im,
                        err_estimate: v.err_estimate,
                    });
                }
            }
            emit_table(&table, out.as_deref())
        }
        KernelCommand::Tacnode {
            r,
            rho,
            beta,
            grid,
            out,
        } => {
            let tac = Tacnode::new(TacnodeParams { r, rho, beta }, &config.quadrature)?;
            let grid: cli_io::TacnodeGrid = cli_io::parse_json(&cli_io::read_text(&grid)?)?;
            let pts: Vec<TacnodePoint> = grid
                .taus
                .iter()
                .flat_map(|&t| grid.ys.iter().map(move |&y| TacnodePoint::new(t, y)))
                .collect();
            let mut table = KernelTable::new(&["tau1", "y1", "tau2", "y2"]);
            for p in &pts {
                for q in &pts {
                    let v = tac.dtac_with_error(*p, *q)?;
                    table.rows.push(KernelRow {
                        inputs: vec![p.tau as f64, p.y, q.tau as f64, q.y],
                        re: v.value.re,
                        im: v.value.im,
                        err_estimate: v.err_estimate,
                    });
                }
            }
            emit_table(&table, out.as_deref())
        }
        KernelCommand::CuspAiry { points, out } => {
            let pts: Vec<cli_io::CuspPoint> = cli_io::parse_json(&cli_io::read_text(&points)?)?;
            let mut table = KernelTable::new(&["tau1", "xi1", "tau2", "xi2"]);
            for p in &pts {
                for q in &pts {
                    let v = cusp_airy(p.tau, p.xi, q.tau, q.xi, &config.airy)?;
                    table.rows.push(KernelRow {
                        inputs: vec![p.tau as f64, p.xi, q.tau as f64, q.xi],
                        re: v.value.re,
                        im: v.value.im,
                        err_estimate: v.err_estimate,
                    });
                }
            }
            emit_table(&table, out.as_deref())
        }
    }
}

fn write_report<T: serde::Serialize>(report: &T, out: Option<&Path>) -> Result<(), Failure> {
    if let Some(p) = out {
        cli_io::write_text(p, &cli_io::to_json(report)?)?;
    }
    Ok(())
}

fn verdict(pass: bool, what: &str) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification(what.to_string()))
    }
}

fn verify(kind: VerifyCommand, config: &ToolConfig, seed: u64) -> Result<(), Failure> {
    match kind {
        VerifyCommand::Identities {
            suite,
            n,
            m,
            big_m,
            a,
            out,
        } => {
            let params = IdentityParams { n, m, big_m, a };
            let report = cli_io::run_identities(suite.into(), &params)?;
            for g in &report.groups {
                println!(
                    "{:?} checks {} max_residual {} tolerance {} {}",
                    g.suite,
                    g.checks.len(),
                    fmt_num(g.max_residual),
                    fmt_num(g.tolerance),
                    if g.pass { "PASS" } else { "FAIL" }
                );
            }
            write_report(&report, out.as_deref())?;
            verdict(report.pass, "identity residual above tolerance")
        }
        VerifyCommand::Correlations { spec, pairs, out } => {
            let spec = spec.load()?;
            let report = correlation_suite(&spec, pairs, seed)?;
            let pass = report.max_error < CORRELATION_TOL;
            println!(
                "checks {} max_error {} tolerance {} {}",
                report.checks.len(),
                fmt_num(report.max_error),
                fmt_num(CORRELATION_TOL),
                if pass { "PASS" } else { "FAIL" }
            );
            write_report(&report, out.as_deref())?;
            verdict(pass, "kernel and enumeration disagree")
        }
        VerifyCommand::Convergence { theorem, ns, rs, out } => match theorem {
            TheoremArg::Main => {
                let report = cli_io::run_main_convergence(&ns, &config.quadrature)?;
                for r in &report.rows {
                    println!(
                        "n {} prelimit {} limit {} discrepancy {} ratio {}",
                        r.n,
                        fmt_num(r.prelimit_re),
                        fmt_num(r.limit_re),
                        fmt_num(r.discrepancy),
                        r.ratio.map_or("-".into(), fmt_num)
                    );
                }
                println!("{}", if report.pass { "PASS" } else { "FAIL" });
                write_report(&report, out.as_deref())?;
                verdict(report.pass, "discrepancy ratios outside the band")
            }
            TheoremArg::Cusp => {
                let report = cli_io::run_cusp_convergence(&rs, &config.quadrature, &config.airy)?;
                for r in &report.rows {
                    println!(
                        "r {} scaled {} limit {} discrepancy {}",
                        r.r,
                        fmt_num(r.scaled),
                        fmt_num(r.limit),
                        fmt_num(r.discrepancy)
                    );
                }
                println!("{}", if report.pass { "PASS" } else { "FAIL" });
                write_report(&report, out.as_deref())?;
                verdict(report.pass, "discrepancy does not decrease")
            }
        },
    }
}
