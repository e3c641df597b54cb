//! Contour quadrature: circles, truncated vertical lines, a right semicircle and
//! the two-ray Airy contour, all normalized by `1/(2πi)`.
//!
//! Circles use the trapezoidal rule. Straight pieces use composite
//! Gauss–Legendre panels. Every rule is returned as a list of `(node, weight)`
//! pairs with `weight = dz/(2πi)`, so `Σ wₖ f(zₖ)` approximates `∮ f(z) dz/(2πi)`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::det_from_fn;

/// Gauss–Legendre points per panel on straight contour pieces.
pub const PANEL_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ContourKind {
    /// Counterclockwise circle.
    Circle { center_re: f64, center_im: f64, radius: f64 },
    /// The segment `{abscissa + iy : |y| ≤ half_height}`, upward unless `downward`.
    VerticalLine { abscissa: f64, half_height: f64, downward: bool },
    /// Closed counterclockwise contour: the right half of the circle of the given
    /// radius about `abscissa`, closed by the vertical diameter.
    SemicircleRight { abscissa: f64, radius: f64 },
    /// From `vertex + length·e^{4πi/3}` to `vertex`, then to `vertex + length·e^{2πi/3}`.
    AiryRays { vertex: f64, length: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub kind: ContourKind,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: C64,
    pub err_estimate: f64,
}

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

fn gl_rule(points: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(points).expect("positive rule size"))
        .as_node_weight_pairs()
        .to_vec()
}

/// Composite Gauss–Legendre rule on the segment `[z0, z1]` with `panels` panels.
fn segment(z0: C64, z1: C64, panels: usize, rule: &[(f64, f64)], out: &mut Vec<(C64, C64)>) {
    let panels = panels.max(1);
    let step = (z1 - z0) / panels as f64;
    for p in 0..panels {
        let a = z0 + step * p as f64;
        for &(x, w) in rule {
            let z = a + step * (0.5 * (x + 1.0));
            out.push((z, step * (0.5 * w) / two_pi_i()));
        }
    }
}

impl ContourSpec {
    pub fn circle(center: C64, radius: f64, nodes: usize) -> Self {
        ContourSpec {
            kind: ContourKind::Circle {
                center_re: center.re,
                center_im: center.im,
                radius,
            },
            nodes,
        }
    }

    pub fn vertical_line(abscissa: f64, half_height: f64, nodes: usize) -> Self {
        ContourSpec {
            kind: ContourKind::VerticalLine {
                abscissa,
                half_height,
                downward: false,
            },
            nodes,
        }
    }

    pub fn semicircle_right(abscissa: f64, radius: f64, nodes: usize) -> Self {
        ContourSpec {
            kind: ContourKind::SemicircleRight { abscissa, radius },
            nodes,
        }
    }

    pub fn airy_rays(vertex: f64, length: f64, nodes: usize) -> Self {
        ContourSpec {
            kind: ContourKind::AiryRays { vertex, length },
            nodes,
        }
    }

    /// The same contour traversed downward (vertical lines only).
    pub fn reversed(mut self) -> Self {
        if let ContourKind::VerticalLine { downward, .. } = &mut self.kind {
            *downward = !*downward;
        }
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn doubled(self) -> Self {
        let n = self.nodes * 2;
        self.with_nodes(n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 16 || !self.nodes.is_multiple_of(2) {
            return Err(Error::Quadrature(format!("node count {} must be even and at least 16", self.nodes)));
        }
        let ok = match self.kind {
            ContourKind::Circle { radius, .. } => radius > 0.0,
            ContourKind::VerticalLine { half_height, .. } => half_height > 0.0,
            ContourKind::SemicircleRight { radius, .. } => radius > 0.0,
            ContourKind::AiryRays { length, .. } => length > 0.0,
        };
        if !ok {
            return Err(Error::Quadrature(format!("degenerate contour {:?}", self.kind)));
        }
        Ok(())
    }

    /// Does the point lie on the contour (within `tol`)?
    pub fn passes_through(&self, z: C64, tol: f64) -> bool {
        match self.kind {
            ContourKind::Circle {
                center_re,
                center_im,
                radius,
            } => ((z - C64::new(center_re, center_im)).norm() - radius).abs() < tol,
            ContourKind::VerticalLine {
                abscissa,
                half_height,
                ..
            } => (z.re - abscissa).abs() < tol && z.im.abs() <= half_height + tol,
            ContourKind::SemicircleRight { abscissa, radius } => {
                let d = z - abscissa;
                ((z.re - abscissa).abs() < tol && z.im.abs() <= radius + tol)
                    || (d.re >= -tol && (d.norm() - radius).abs() < tol)
            }
            ContourKind::AiryRays { vertex, .. } => {
                let d = z - vertex;
                d.norm() < tol || {
                    let arg = d.arg().abs();
                    (arg - 2.0 * PI / 3.0).abs() * d.norm() < tol
                }
            }
        }
    }

    /// Nodes and weights `dz/(2πi)`.
    pub fn discretize(&self) -> Vec<(C64, C64)> {
        let mut out = Vec::with_capacity(self.nodes + PANEL_POINTS);
        let panels = self.nodes.div_ceil(PANEL_POINTS);
        match self.kind {
            ContourKind::Circle {
                center_re,
                center_im,
                radius,
            } => {
                let c = C64::new(center_re, center_im);
                let n = self.nodes;
                for k in 0..n {
                    let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
                    out.push((c + radius * e, radius * e / n as f64));
                }
            }
            ContourKind::VerticalLine {
                abscissa,
                half_height,
                downward,
            } => {
                let rule = gl_rule(PANEL_POINTS);
                let (lo, hi) = (C64::new(abscissa, -half_height), C64::new(abscissa, half_height));
                if downward {
                    segment(hi, lo, panels, &rule, &mut out);
                } else {
                    segment(lo, hi, panels, &rule, &mut out);
                }
            }
            ContourKind::SemicircleRight { abscissa, radius } => {
                let half = (self.nodes / 2).max(1);
                let rule = gl_rule(PANEL_POINTS);
                let arc_panels = half.div_ceil(PANEL_POINTS);
                let h = PI / arc_panels as f64;
                for p in 0..arc_panels {
                    let lo = -PI / 2.0 + h * p as f64;
                    for &(x, w) in &rule {
                        let th = lo + 0.5 * h * (x + 1.0);
                        let e = C64::from_polar(1.0, th);
                        let dz = C64::new(0.0, 1.0) * radius * e * (0.5 * h * w);
                        out.push((abscissa + radius * e, dz / two_pi_i()));
                    }
                }
                segment(
                    C64::new(abscissa, radius),
                    C64::new(abscissa, -radius),
                    half.div_ceil(PANEL_POINTS),
                    &rule,
                    &mut out,
                );
            }
            ContourKind::AiryRays { vertex, length } => {
                let rule = gl_rule(PANEL_POINTS);
                let v = C64::new(vertex, 0.0);
                let half = panels.div_ceil(2);
                let start = v + C64::from_polar(length, 4.0 * PI / 3.0);
                let end = v + C64::from_polar(length, 2.0 * PI / 3.0);
                segment(start, v, half, &rule, &mut out);
                segment(v, end, half, &rule, &mut out);
            }
        }
        out
    }
}

/// `Σ wₖ f(zₖ)` with pairwise summation; fails on a non-finite sample.
pub fn sum_nodes(nodes: &[(C64, C64)], f: impl Fn(C64) -> C64) -> Result<C64> {
    let vals = nodes
        .iter()
        .map(|&(z, w)| {
            let v = f(z);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(w * v)
            } else {
                Err(Error::Quadrature(format!("non-finite integrand at z = {z}")))
            }
        })
        .collect::<Result<Vec<C64>>>()?;
    Ok(pairwise_sum(&vals))
}

pub fn pairwise_sum(v: &[C64]) -> C64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `∮ f(z) dz/(2πi)` with an error estimate from a rule with twice the nodes.
pub fn integrate(contour: &ContourSpec, f: impl Fn(C64) -> C64) -> Result<QuadResult> {
    contour.validate()?;
    let coarse = sum_nodes(&contour.discretize(), &f)?;
    let fine = sum_nodes(&contour.doubled().discretize(), &f)?;
    Ok(QuadResult {
        value: fine,
        err_estimate: (fine - coarse).norm(),
    })
}

/// Andréief reduction: `det[moment(i, j)]_{i,j<r}`, equal to `1` for `r = 0`.
pub fn andreief_det(moment: impl FnMut(usize, usize) -> C64, r: usize) -> C64 {
    det_from_fn(r, moment)
}

/// Strictly increasing radii `a < ρ₀ < ρ₁ < σ₁ < σ₂ < R < ρ₂ < ρ₃ < 1/a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiiLadder {
    pub a: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub big_r: f64,
    pub rho2: f64,
    pub rho3: f64,
}

impl RadiiLadder {
    pub fn radii(&self) -> [f64; 7] {
        [self.rho0, self.rho1, self.sigma1, self.sigma2, self.big_r, self.rho2, self.rho3]
    }

    pub fn is_ordered(&self) -> bool {
        let r = [
            self.a,
            self.rho0,
            self.rho1,
            self.sigma1,
            self.sigma2,
            self.big_r,
            self.rho2,
            self.rho3,
            1.0 / self.a,
        ];
        r.windows(2).all(|w| w[0] < w[1])
    }

    /// Multiplies every radius by `factor`; fails if the ordering breaks.
    pub fn perturbed(&self, factor: f64) -> Result<RadiiLadder> {
        let p = RadiiLadder {
            a: self.a,
            rho0: self.rho0 * factor,
            rho1: self.rho1 * factor,
            sigma1: self.sigma1 * factor,
            sigma2: self.sigma2 * factor,
            big_r: self.big_r * factor,
            rho2: self.rho2 * factor,
            rho3: self.rho3 * factor,
        };
        if p.is_ordered() {
            Ok(p)
        } else {
            Err(Error::Quadrature(format!("perturbation {factor} breaks the radii ordering")))
        }
    }
}

/// Geometric ladder `a^(1 − 2(k+1)/9)`, `k = 0..8`, strictly inside `(a, 1/a)`.
pub fn default_ladder(a: f64) -> Result<RadiiLadder> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Quadrature(format!(
            "radii ladder needs 0 < a < 1 (got {a}); use the scaled contours instead"
        )));
    }
    let r = |k: i32| a.powf(1.0 - 2.0 * (k + 1) as f64 / 9.0);
    Ok(RadiiLadder {
        a,
        rho0: r(0),
        rho1: r(1),
        sigma1: r(2),
        sigma2: r(3),
        big_r: r(4),
        rho2: r(5),
        rho3: r(6),
    })
}

/// Node counts and geometric constants for the scaled and limiting kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Trapezoid nodes on small circles.
    pub circle_nodes: usize,
    /// Gauss–Legendre nodes per unit length on vertical lines.
    pub line_nodes_per_unit: usize,
    /// Upper bound on nodes of one vertical line.
    pub max_line_nodes: usize,
    /// Truncation `|Im| ≤ half_height` of vertical lines.
    pub line_half_height: f64,
    /// Abscissa of the vertical line `L₀₊`.
    pub line_abscissa: f64,
    /// Horizontal offset of the second vertical line in nested double integrals.
    pub line_offset: f64,
    /// Radius of `Γ₀`.
    pub circle_radius: f64,
    /// Radius of the inner circle `Γ₀′`, as a fraction of `circle_radius`.
    pub inner_ratio: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            circle_nodes: 128,
            line_nodes_per_unit: 32,
            max_line_nodes: 4096,
            line_half_height: 12.0,
            line_abscissa: 1.0,
            line_offset: 0.2,
            circle_radius: 0.5,
            inner_ratio: 0.7,
        }
    }
}

impl QuadratureConfig {
    /// Same geometry with all node counts doubled.
    pub fn refined(&self) -> Self {
        QuadratureConfig {
            circle_nodes: self.circle_nodes * 2,
            line_nodes_per_unit: self.line_nodes_per_unit * 2,
            max_line_nodes: self.max_line_nodes * 2,
            ..*self
        }
    }

    pub fn line_nodes(&self) -> usize {
        let n = (2.0 * self.line_half_height * self.line_nodes_per_unit as f64).ceil() as usize;
        let n = n.min(self.max_line_nodes).max(PANEL_POINTS);
        n.div_ceil(PANEL_POINTS) * PANEL_POINTS
    }

    /// Truncation height for Gaussian-decaying line integrands: `6 + 2|β| + √(2|e|)`,
    /// never below the configured `line_half_height`.
    pub fn half_height_for(&self, beta: f64, min_exponent: f64) -> f64 {
        (6.0 + 2.0 * beta.abs() + (2.0 * min_exponent.abs()).sqrt()).max(self.line_half_height)
    }

    pub fn validate(&self) -> Result<()> {
        if self.circle_nodes < 16 || !self.circle_nodes.is_multiple_of(2) {
            return Err(Error::Quadrature("circle_nodes must be even and at least 16".into()));
        }
        if self.line_nodes_per_unit == 0 || self.max_line_nodes < PANEL_POINTS {
            return Err(Error::Quadrature("line node counts too small".into()));
        }
        if !(self.circle_radius > 0.0
            && self.inner_ratio > 0.0
            && self.inner_ratio < 1.0
            && self.line_abscissa > self.circle_radius
            && self.line_offset > 0.0
            && self.line_half_height > 0.0)
        {
            return Err(Error::Quadrature(format!("inconsistent contour geometry {self:?}")));
        }
        Ok(())
    }
}

/// Contours of the scaled kernel: `Γ₀`, the right semicircle `Γ̃` of radius `1/t²`
/// through `1/t`, and the vertical line `L₀₊` right of `Γ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledContours {
    pub gamma0: ContourSpec,
    pub gamma_tilde: ContourSpec,
    pub line: ContourSpec,
}

pub fn scaled_contours(t: f64, beta: f64, cfg: &QuadratureConfig) -> Result<ScaledContours> {
    if !(t > 0.0) {
        return Err(Error::Quadrature(format!("scaled contours need t > 0 (got {t})")));
    }
    let half = cfg.half_height_for(beta, 0.0);
    let line = ContourSpec::vertical_line(cfg.line_abscissa, half, cfg.line_nodes());
    let big = 1.0 / (t * t);
    Ok(ScaledContours {
        gamma0: ContourSpec::circle(C64::new(0.0, 0.0), cfg.circle_radius, cfg.circle_nodes),
        gamma_tilde: ContourSpec::semicircle_right(cfg.line_abscissa, big, cfg.line_nodes()),
        line,
    })
}
