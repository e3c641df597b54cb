//! Serialization schemas, configuration files, CSV tables and SVG rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_kernels::IdentityResidual;
use crate::geometry::{DerivedParams, DomainSpec, Su, TilabilityVerdict};
use crate::limit_kernels::{
    convergence_main, cusp_limit_check, AiryConfig, ConvergenceRow, CuspRow, TacnodeParams, TacnodePoint,
};
use crate::quadrature::QuadratureConfig;
use crate::tiling::{DominoRecord, Orientation, PathColor, Tiling};

/// Formats a number with 15 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.14e}")
}

/// The spec file: `{"n", "m", "M", "a"}` plus read-only derived values on output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    #[serde(flatten)]
    pub spec: DomainSpec,
    #[serde(default, skip_deserializing)]
    pub derived: Option<DerivedParams>,
    #[serde(default, skip_deserializing)]
    pub verdict: Option<TilabilityVerdict>,
}

impl SpecDocument {
    pub fn new(spec: DomainSpec) -> Result<Self> {
        spec.validate()?;
        Ok(SpecDocument {
            spec,
            derived: Some(spec.derived()),
            verdict: Some(spec.verdict()),
        })
    }
}

pub fn parse_spec(text: &str) -> Result<DomainSpec> {
    let doc: SpecDocument = parse_json(text)?;
    doc.spec.validate()?;
    Ok(doc.spec)
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Domain(format!("JSON: {e}")))
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Domain(format!("JSON: {e}")))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

/// Quadrature overrides read from `--config`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ToolConfig {
    pub quadrature: QuadratureConfig,
    pub airy: AiryConfig,
}

impl ToolConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: ToolConfig = parse_json(text)?;
        c.quadrature.validate()?;
        Ok(c)
    }
}

/// Tiling file: dominoes in `(η, ξ)` order.
pub fn tiling_to_json(t: &Tiling) -> Result<String> {
    to_json(&t.to_records())
}

pub fn tiling_from_json(spec: &DomainSpec, text: &str) -> Result<Tiling> {
    let recs: Vec<DominoRecord> = parse_json(text)?;
    Tiling::from_records(spec, &recs)
}

/// Points of the finite kernel, blue centres in `(ξ, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub xi: i64,
    pub eta: i64,
}

/// Points of the pre-limit kernel, `x` integer and `y` on a lattice line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPoint {
    pub x: i64,
    pub y: f64,
}

/// Grid of the tacnode kernel: every pair of points in `taus × ys`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TacnodeGrid {
    pub taus: Vec<i64>,
    pub ys: Vec<f64>,
}

/// Points of the cusp-Airy kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspPoint {
    pub tau: i64,
    pub xi: f64,
}

/// A kernel table: input columns, then `re`, `im`, `err_estimate`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub inputs: Vec<String>,
    pub rows: Vec<KernelRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow {
    pub inputs: Vec<f64>,
    pub re: f64,
    pub im: f64,
    pub err_estimate: f64,
}

impl KernelTable {
    pub fn new(inputs: &[&str]) -> Self {
        KernelTable {
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = self.inputs.clone();
        header.extend(["re", "im", "err_estimate"].map(String::from));
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.rows {
            let rec: Vec<String> = r
                .inputs
                .iter()
                .chain([r.re, r.im, r.err_estimate].iter())
                .map(|&v| fmt_num(v))
                .collect();
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Domain(format!("CSV: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Domain(format!("CSV: {e}")))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        if header.len() < 3 || header[header.len() - 3..] != ["re", "im", "err_estimate"] {
            return Err(Error::Domain("CSV: kernel tables end with re, im, err_estimate".into()));
        }
        let k = header.len() - 3;
        let mut table = KernelTable {
            inputs: header[..k].to_vec(),
            rows: Vec::new(),
        };
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            let vals = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| Error::Domain(format!("CSV value {s:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            table.rows.push(KernelRow {
                inputs: vals[..k].to_vec(),
                re: vals[k],
                im: vals[k + 1],
                err_estimate: vals[k + 2],
            });
        }
        Ok(table)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Domain(format!("CSV: {e}"))
}

/// Per-line red-dot counts as CSV `xi,red_dots`.
pub fn red_counts_csv(counts: &BTreeMap<i64, usize>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["xi", "red_dots"]).map_err(csv_err)?;
    for (xi, c) in counts {
        w.write_record([xi.to_string(), c.to_string()]).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Domain(format!("CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Domain(format!("CSV: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderStyle {
    pub palette: BTreeMap<Orientation, String>,
    pub cell_px: u32,
    pub draw_paths: Vec<PathColor>,
}

impl Default for RenderStyle {
    fn default() -> Self {
        let palette = [
            (Orientation::HL, "#2e9e44"),
            (Orientation::VU, "#d62728"),
            (Orientation::HR, "#f2d22e"),
            (Orientation::VD, "#1f5fbf"),
        ]
        .into_iter()
        .map(|(o, c)| (o, c.to_string()))
        .collect();
        RenderStyle {
            palette,
            cell_px: 8,
            draw_paths: Vec::new(),
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<()> {
        let colours: std::collections::BTreeSet<&String> = self.palette.values().collect();
        if self.palette.len() != 4 || colours.len() != 4 {
            return Err(Error::Domain("palette needs four distinct colours".into()));
        }
        if self.cell_px == 0 {
            return Err(Error::Domain("cell_px must be at least 1".into()));
        }
        Ok(())
    }
}

fn path_stroke(c: PathColor) -> &'static str {
    match c {
        PathColor::Red => "#8b0000",
        PathColor::Blue => "#00008b",
        PathColor::Green => "#006400",
    }
}

/// Deterministic SVG of the tiling, one `rect` per domino, with optional level lines.
pub fn render_svg(t: &Tiling, style: &RenderStyle) -> Result<String> {
    style.validate()?;
    let (x0, x1, y0, y1) = t.domain().grid_bounds();
    let px = style.cell_px as i64;
    let width = (x1 - x0 + 1) * px;
    let height = (y1 - y0 + 1) * px;
    let to_svg = |x: i64, y: i64| ((x - x0) * px, (y1 - y) * px);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r##"<g id="dominoes" stroke="#000000" stroke-width="{}">"##, (px as f64 / 16.0).max(0.25));
    for d in t.dominoes() {
        let (bx, by) = d.anchor.to_grid();
        let (wx, wy) = d.white().to_grid();
        let (lx, hy) = (bx.min(wx), by.max(wy));
        let (sx, sy) = to_svg(lx, hy);
        let (w, h) = if d.o.is_vertical() { (px, 2 * px) } else { (2 * px, px) };
        let _ = writeln!(
            out,
            r#"<rect x="{sx}" y="{sy}" width="{w}" height="{h}" fill="{}" class="{}"/>"#,
            style.palette[&d.o],
            d.o.label()
        );
    }
    let _ = writeln!(out, "</g>");
    for &c in &style.draw_paths {
        let ps = t.paths_of(c)?;
        let _ = writeln!(
            out,
            r#"<g id="paths-{c:?}" fill="none" stroke="{}" stroke-width="{}">"#,
            path_stroke(c),
            (px as f64 / 4.0).max(0.5)
        );
        for p in &ps.paths {
            let pts: Vec<String> = p
                .iter()
                .map(|q| {
                    let su = Su::new(q.eta + 1, (q.eta - q.xi + 1).div_euclid(2));
                    let (gx, gy) = su.to_grid();
                    let (sx, sy) = to_svg(gx, gy);
                    format!("{},{}", sx as f64 + px as f64 / 2.0, sy as f64 + px as f64 / 2.0)
                })
                .collect();
            let _ = writeln!(out, r#"<polyline class="path" points="{}"/>"#, pts.join(" "));
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

/// The identity suites run by `verify identities`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentitySuite {
    Bo,
    Blowup,
    Duality,
    Dphi,
    All,
}

/// Optional overrides of the default parameters of each identity suite.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IdentityParams {
    pub n: Option<i64>,
    pub m: Option<i64>,
    pub big_m: Option<i64>,
    pub a: Option<f64>,
}

/// Residual threshold of the Toeplitz identities.
pub const TOEPLITZ_TOL: f64 = 1e-6;
/// Residual threshold of the green/blue duality.
pub const DUALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityGroup {
    pub suite: IdentitySuite,
    pub tolerance: f64,
    pub checks: Vec<IdentityResidual>,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub groups: Vec<IdentityGroup>,
    pub pass: bool,
}

fn group(suite: IdentitySuite, tolerance: f64, checks: Vec<IdentityResidual>) -> IdentityGroup {
    let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    IdentityGroup {
        suite,
        tolerance,
        pass: !checks.is_empty() && max_residual < tolerance,
        checks,
        max_residual,
    }
}

/// Runs one identity suite (or all of them) with defaults overridden by `p`.
pub fn run_identities(suite: IdentitySuite, p: &IdentityParams) -> Result<IdentityReport> {
    use crate::finite_kernels::{blowup_check, bo_check, dphi_check, BlowupSide};
    let suites = match suite {
        IdentitySuite::All => vec![
            IdentitySuite::Bo,
            IdentitySuite::Blowup,
            IdentitySuite::Dphi,
            IdentitySuite::Duality,
        ],
        s => vec![s],
    };
    let mut groups = Vec::new();
    for s in suites {
        let g = match s {
            IdentitySuite::Bo => {
                let (n, a) = (p.n.unwrap_or(4), p.a.unwrap_or(0.5));
                let checks = [1, 2, 3, 5]
                    .iter()
                    .map(|&k| bo_check(n, a, k))
                    .collect::<Result<Vec<_>>>()?;
                group(s, TOEPLITZ_TOL, checks)
            }
            IdentitySuite::Blowup => {
                let (n, a) = (p.n.unwrap_or(4), p.a.unwrap_or(0.5));
                let mut checks = Vec::new();
                for kappa in [1, 2] {
                    for side in [BlowupSide::Plus, BlowupSide::Minus] {
                        checks.push(blowup_check(n, a, kappa, 3, side)?);
                    }
                }
                group(s, TOEPLITZ_TOL, checks)
            }
            IdentitySuite::Dphi => {
                let n = p.n.unwrap_or(4);
                let m = p.m.unwrap_or(n + 1);
                let a = p.a.unwrap_or(0.5);
                let ms: Vec<i64> = match p.big_m {
                    Some(mm) => vec![mm],
                    None => (1..=n.min(3)).collect(),
                };
                let checks = ms
                    .iter()
                    .map(|&mm| dphi_check(n, m, mm, a))
                    .collect::<Result<Vec<_>>>()?;
                group(s, TOEPLITZ_TOL, checks)
            }
            IdentitySuite::Duality => {
                let spec = DomainSpec::new(
                    p.n.unwrap_or(6),
                    p.m.unwrap_or(6),
                    p.big_m.unwrap_or(4),
                    p.a.unwrap_or(0.7),
                )?;
                let line = spec.n + spec.n % 2;
                group(s, DUALITY_TOL, vec![crate::kasteleyn::duality_check(&spec, line)?])
            }
            IdentitySuite::All => unreachable!(),
        };
        groups.push(g);
    }
    let pass = groups.iter().all(|g| g.pass);
    Ok(IdentityReport { groups, pass })
}

/// Threshold on kernel-versus-oracle differences in `verify correlations`.
pub const CORRELATION_TOL: f64 = 1e-8;

/// Which limit theorem `verify convergence` exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Main,
    Cusp,
}

/// Admissible band for successive discrepancy ratios in the main convergence check.
pub const MAIN_RATIO_BAND: (f64, f64) = (0.3, 0.8);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainConvergenceReport {
    pub params: TacnodeParams,
    pub p1: TacnodePoint,
    pub p2: TacnodePoint,
    pub rows: Vec<ConvergenceRow>,
    pub ratio_band: (f64, f64),
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspConvergenceReport {
    pub tau1: i64,
    pub xi1: f64,
    pub tau2: i64,
    pub xi2: f64,
    pub rows: Vec<CuspRow>,
    pub pass: bool,
}

/// Pre-limit versus tacnode kernel at the reference point `𝔯 = 1, ρ = 2, β = 0`,
/// `τ = (0, 0)`, `y′ = (0.5, −0.5)`; passes when every successive ratio lies in the band.
pub fn run_main_convergence(ns: &[i64], cfg: &QuadratureConfig) -> Result<MainConvergenceReport> {
    let params = TacnodeParams {
        r: 1,
        rho: 2,
        beta: 0.0,
    };
    let (p1, p2) = (TacnodePoint::new(0, 0.5), TacnodePoint::new(0, -0.5));
    let rows = convergence_main(params, p1, p2, ns, cfg)?;
    let (lo, hi) = MAIN_RATIO_BAND;
    let pass = rows.len() >= 2
        && rows
            .iter()
            .skip(1)
            .all(|r| r.ratio.is_some_and(|q| (lo..=hi).contains(&q)));
    Ok(MainConvergenceReport {
        params,
        p1,
        p2,
        rows,
        ratio_band: MAIN_RATIO_BAND,
        pass,
    })
}

/// Scaled tacnode kernel versus the cusp-Airy kernel at `(0, 0; 0, 0)`; passes
/// when the discrepancy decreases strictly along `rs`.
pub fn run_cusp_convergence(rs: &[usize], cfg: &QuadratureConfig, airy: &AiryConfig) -> Result<CuspConvergenceReport> {
    let rows = cusp_limit_check(rs, 0, 0.0, 0, 0.0, cfg, airy)?;
    let pass = rows.len() >= 2 && rows.windows(2).all(|w| w[1].discrepancy < w[0].discrepancy);
    Ok(CuspConvergenceReport {
        tau1: 0,
        xi1: 0.0,
        tau2: 0,
        xi2: 0.0,
        rows,
        pass,
    })
}

/// One compact JSON tiling per line.
pub fn tilings_to_jsonl(ts: &[Tiling]) -> Result<String> {
    let mut out = String::new();
    for t in ts {
        out.push_str(&serde_json::to_string(&t.to_records()).map_err(|e| Error::Domain(format!("JSON: {e}")))?);
        out.push('\n');
    }
    Ok(out)
}
