//! Bands, gaps, flat-band eigenvalues, Dirac points and Bloch level sets.
//!
//! Everything is read off the scalar discriminant: the absolutely continuous
//! spectrum is `{λ : Δ(λ) ∈ [-1,1]}`, band edges are the λ with `Δ = ±1`,
//! the point spectrum Σ₀ collects the roots of `D₀`, and Dirac points sit at
//! the roots of `Δ` paired with the quasimomenta `±(2π/3, -2π/3)`.
//!
//! Band edges come in two numerical flavors. Simple crossings of `Δ = ±1`
//! are bracketed by a sign change on the scan grid and bisected to
//! floating-point exhaustion. Tangential touchings (double roots, e.g. the
//! graphene band contacts at `λ = n²π²`) produce no sign change; they are
//! detected as interior extrema of the sampled discriminant and pinned by
//! bracketed extremum refinement plus a `|Δ| - 1` tolerance test.

use serde::Serialize;

use crate::dispersion::{self, Quasimomentum};
use crate::error::Error;
use crate::potential::Potential;
use crate::rootfind;
use crate::special::sinc_sqrt;
use crate::transfer::{self, Params};
use crate::Result;

/// Gaps narrower than this (in λ units) are treated as degenerate touchings.
pub const GAP_MIN: f64 = 1e-7;

/// Default λ scan window.
pub const DEFAULT_SCAN_RANGE: (f64, f64) = (-10.0, 400.0);

/// Default number of grid cells for scans.
pub const DEFAULT_GRID_N: usize = 20_000;

/// Residual tolerance of the band-edge classifier identities.
pub const EDGE_CASE_TOL: f64 = 1e-8;

/// A tangential contact counts as an edge when the refined extremum of Δ
/// comes within this distance of ±1.
const TOUCH_TOL: f64 = 1e-9;

/// Input gate of [`classify_free_edges`]: `|Δ(λ)|` must be within this of 1.
const EDGE_INPUT_TOL: f64 = 1e-6;

const MIN_GRID_N: usize = 100;

/// A maximal interval with `Δ ∈ [-1,1]`. Touching bands share an endpoint.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

/// An open interval with `|Δ| > 1` separating two bands; only gaps wider
/// than [`GAP_MIN`] are reported.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Gap {
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

/// Band-edge classification result: which defining identities of the free
/// operator hold at the edge, with their residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCase {
    /// Case tag 1-6.
    pub tag: u8,
    /// Residual of the defining identity at the edge.
    pub residual: f64,
}

/// Case tags attached to one band edge of the free operator.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeClassEntry {
    pub lambda: f64,
    pub tags: Vec<u8>,
}

/// Full output of a band scan.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub bands: Vec<Band>,
    pub gaps: Vec<Gap>,
    /// Flat-band eigenvalues (roots of `D₀`) when requested.
    pub sigma0: Vec<f64>,
    /// Dirac λ-values (roots of `Δ`) when requested; each pairs with the
    /// quasimomenta `±(2π/3, -2π/3)`.
    pub dirac: Vec<f64>,
    pub scan_range: (f64, f64),
    pub params: Params,
    /// Free-operator band-edge classification, `None` for nonzero potentials.
    pub edge_classes: Option<Vec<EdgeClassEntry>>,
    pub warnings: Vec<String>,
}

/// One point of the dispersion surface.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SurfaceSample {
    pub theta1: f64,
    pub theta2: f64,
    /// +1 for the `Δ = +|S|/3` sheet, -1 for `Δ = -|S|/3`; flat branches
    /// carry +1 together with `flat = true`.
    pub branch_sign: i8,
    pub lambda: f64,
    pub level_index: usize,
    /// True for flat-branch entries at Σ₀ eigenvalues.
    pub flat: bool,
}

// ---------------------------------------------------------------------------
// Scalar evaluators
// ---------------------------------------------------------------------------

/// Discriminant (or `D₀`) evaluator with the symmetry gate hoisted out of the
/// per-λ path; the free potential routes to closed forms.
struct Evaluator<'p> {
    potential: &'p Potential,
    params: Params,
    steps: usize,
    free: bool,
}

impl<'p> Evaluator<'p> {
    fn new(potential: &'p Potential, params: &Params) -> Result<Self> {
        let free = potential.is_zero();
        if !free {
            potential.ensure_symmetric()?;
        }
        Ok(Evaluator {
            potential,
            params: *params,
            steps: transfer::DEFAULT_STEPS,
            free,
        })
    }

    fn monodromy(&self, lambda: f64) -> transfer::MonodromyMatrix {
        if self.free {
            transfer::monodromy_free(lambda, self.params.a).expect("a > 0 by construction")
        } else {
            transfer::monodromy_numeric_unchecked(self.potential, lambda, self.params.a, self.steps)
        }
    }

    fn delta_eval(&self, lambda: f64) -> dispersion::DeltaEval {
        if self.free {
            dispersion::delta_free(&self.params, lambda)
        } else {
            let m = self.monodromy(lambda);
            let d = dispersion::d_values(&m, &self.params);
            dispersion::delta_from_dvalues(&d, &self.params)
        }
    }

    fn delta(&self, lambda: f64) -> f64 {
        self.delta_eval(lambda).delta
    }

    fn d0(&self, lambda: f64) -> f64 {
        let m = self.monodromy(lambda);
        dispersion::d_values(&m, &self.params).d0
    }
}

fn validate_range(range: (f64, f64)) -> Result<()> {
    if !(range.0.is_finite() && range.1.is_finite()) {
        return Err(Error::Range(format!("non-finite λ range {range:?}")));
    }
    if range.0 > range.1 {
        return Err(Error::Range(format!(
            "λ range must be ordered, got ({}, {})",
            range.0, range.1
        )));
    }
    Ok(())
}

fn validate_grid(grid_n: usize) -> Result<()> {
    if grid_n < MIN_GRID_N {
        return Err(Error::Parameter(format!(
            "grid_n must be at least {MIN_GRID_N}, got {grid_n}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Grid scanning core
// ---------------------------------------------------------------------------

struct Sampled {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

fn sample(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, grid_n: usize) -> Sampled {
    let xs: Vec<f64> = (0..=grid_n)
        .map(|i| lo + (hi - lo) * i as f64 / grid_n as f64)
        .collect();
    let fs = xs.iter().map(|&x| f(x)).collect();
    Sampled { xs, fs }
}

/// All λ in the sampled window where `f(λ) = target`, including tangential
/// contacts detected at interior extrema of the samples.
fn level_crossings(f: &impl Fn(f64) -> f64, s: &Sampled, target: f64) -> Vec<f64> {
    let g = |x: f64| f(x) - target;
    let gs: Vec<f64> = s.fs.iter().map(|v| v - target).collect();
    let n = s.xs.len() - 1;
    let mut out = Vec::new();

    for i in 0..=n {
        if gs[i] == 0.0 {
            out.push(s.xs[i]);
        }
    }
    for i in 0..n {
        if gs[i] != 0.0 && gs[i + 1] != 0.0 && (gs[i] > 0.0) != (gs[i + 1] > 0.0) {
            out.push(rootfind::bisect(&g, s.xs[i], s.xs[i + 1], gs[i]));
        }
    }

    // Tangential contacts: equal-sign triples around an interior extremum.
    for i in 1..n {
        let (ga, gb, gc) = (gs[i - 1], gs[i], gs[i + 1]);
        if ga == 0.0 || gb == 0.0 || gc == 0.0 {
            continue;
        }
        let pos = ga > 0.0;
        if (gb > 0.0) != pos || (gc > 0.0) != pos {
            continue;
        }
        let is_max = s.fs[i] >= s.fs[i - 1] && s.fs[i] >= s.fs[i + 1];
        let is_min = s.fs[i] <= s.fs[i - 1] && s.fs[i] <= s.fs[i + 1];
        // only an extremum pointing at the level can touch it
        if !((is_max && !pos) || (is_min && pos)) {
            continue;
        }
        let (x_star, f_star) = rootfind::refine_extremum(f, s.xs[i - 1], s.xs[i + 1], is_max);
        let g_star = f_star - target;
        if g_star != 0.0 && (g_star > 0.0) != pos {
            // the extremum overshoots the level: two crossings hidden in one cell
            out.push(rootfind::bisect(&g, s.xs[i - 1], x_star, ga));
            out.push(rootfind::bisect(&g, x_star, s.xs[i + 1], g_star));
        } else if g_star.abs() <= TOUCH_TOL {
            out.push(x_star);
        }
    }
    out
}

/// Sort and merge points closer than `min_sep` into their group mean.
fn collapse(mut xs: Vec<f64>, min_sep: f64) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(xs.len());
    let mut group: Vec<f64> = Vec::new();
    for x in xs {
        if let Some(&last) = group.last() {
            if x - last >= min_sep {
                out.push(group.iter().sum::<f64>() / group.len() as f64);
                group.clear();
            }
        }
        group.push(x);
    }
    if !group.is_empty() {
        out.push(group.iter().sum::<f64>() / group.len() as f64);
    }
    out
}

fn coarse_grid_warning(s: &Sampled) -> Option<String> {
    let n = s.xs.len() - 1;
    for i in 0..n {
        let swing = (s.fs[i + 1] - s.fs[i]).abs();
        if swing > 0.5 * (1.0 + s.fs[i].abs().max(s.fs[i + 1].abs())) {
            return Some(format!(
                "grid may be too coarse: Δ swings by {swing:.3} across one cell near λ = {:.6}",
                s.xs[i]
            ));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Scan `Δ` over `lambda_range` and assemble bands and gaps.
///
/// Band edges are all roots of `Δ = ±1` (simple and tangential); intervals
/// between consecutive edges are classified by the midpoint value of `Δ`.
/// Edges closer than [`GAP_MIN`] merge into a single touching point, so every
/// reported [`Gap`] is non-degenerate. For the free potential each interior
/// edge also receives its classification tags.
pub fn scan_bands(
    p: &Potential,
    params: &Params,
    lambda_range: (f64, f64),
    grid_n: usize,
) -> Result<SpectrumReport> {
    validate_range(lambda_range)?;
    validate_grid(grid_n)?;
    let (lo, hi) = lambda_range;
    let mut report = SpectrumReport {
        bands: Vec::new(),
        gaps: Vec::new(),
        sigma0: Vec::new(),
        dirac: Vec::new(),
        scan_range: lambda_range,
        params: *params,
        edge_classes: if p.is_zero() { Some(Vec::new()) } else { None },
        warnings: Vec::new(),
    };
    if lo == hi {
        return Ok(report);
    }

    let ev = Evaluator::new(p, params)?;
    let delta = |x: f64| ev.delta(x);
    let s = sample(&delta, lo, hi, grid_n);
    if let Some(w) = coarse_grid_warning(&s) {
        report.warnings.push(w);
    }

    let mut edges = level_crossings(&delta, &s, 1.0);
    edges.extend(level_crossings(&delta, &s, -1.0));
    let edges = collapse(edges, GAP_MIN);

    if let Some(classes) = report.edge_classes.as_mut() {
        for &e in &edges {
            if let Ok(cases) = classify_free_edges(params, e) {
                classes.push(EdgeClassEntry {
                    lambda: e,
                    tags: cases.iter().map(|c| c.tag).collect(),
                });
            }
        }
    }

    let mut points = vec![lo];
    points.extend(edges.iter().copied().filter(|&e| e > lo + GAP_MIN && e < hi - GAP_MIN));
    points.push(hi);

    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < GAP_MIN {
            continue;
        }
        if delta(0.5 * (a + b)).abs() <= 1.0 {
            report.bands.push(Band { lo: a, hi: b });
        } else {
            report.gaps.push(Gap { lo: a, hi: b, width: b - a });
        }
    }
    Ok(report)
}

/// All sign-change roots of `D₀` in the range: the flat-band eigenvalues Σ₀.
pub fn sigma0_roots(
    p: &Potential,
    params: &Params,
    lambda_range: (f64, f64),
    grid_n: usize,
) -> Result<Vec<f64>> {
    validate_range(lambda_range)?;
    validate_grid(grid_n)?;
    if lambda_range.0 == lambda_range.1 {
        return Ok(Vec::new());
    }
    let ev = Evaluator::new(p, params)?;
    let d0 = |x: f64| ev.d0(x);
    let s = sample(&d0, lambda_range.0, lambda_range.1, grid_n);
    Ok(collapse(simple_roots(&d0, &s), 1e-9))
}

/// All sign-change roots of `Δ` in the range: the Dirac λ-values. Each pairs
/// with the quasimomenta [`Quasimomentum::dirac_pair`].
pub fn dirac_roots(
    p: &Potential,
    params: &Params,
    lambda_range: (f64, f64),
    grid_n: usize,
) -> Result<Vec<f64>> {
    validate_range(lambda_range)?;
    validate_grid(grid_n)?;
    if lambda_range.0 == lambda_range.1 {
        return Ok(Vec::new());
    }
    let ev = Evaluator::new(p, params)?;
    let delta = |x: f64| ev.delta(x);
    let s = sample(&delta, lambda_range.0, lambda_range.1, grid_n);
    Ok(collapse(simple_roots(&delta, &s), 1e-9))
}

fn simple_roots(f: &impl Fn(f64) -> f64, s: &Sampled) -> Vec<f64> {
    let n = s.xs.len() - 1;
    let mut out = Vec::new();
    for i in 0..=n {
        if s.fs[i] == 0.0 {
            out.push(s.xs[i]);
        }
    }
    for i in 0..n {
        if s.fs[i] != 0.0 && s.fs[i + 1] != 0.0 && (s.fs[i] > 0.0) != (s.fs[i + 1] > 0.0) {
            out.push(rootfind::bisect(f, s.xs[i], s.xs[i + 1], s.fs[i]));
        }
    }
    out
}

/// Bloch levels at one quasimomentum: ascending solutions of
/// `Δ(λ) = ±|S(q)|/3` tagged by branch sign, plus a flat-branch entry at
/// every Σ₀ root in range, truncated to `max_levels` entries.
pub fn solve_bloch_levels(
    p: &Potential,
    params: &Params,
    q: &Quasimomentum,
    lambda_range: (f64, f64),
    grid_n: usize,
    max_levels: usize,
) -> Result<Vec<SurfaceSample>> {
    validate_range(lambda_range)?;
    validate_grid(grid_n)?;
    let mut entries: Vec<(f64, i8, bool)> = Vec::new();
    if lambda_range.0 < lambda_range.1 {
        let ev = Evaluator::new(p, params)?;
        let delta = |x: f64| ev.delta(x);
        let s = sample(&delta, lambda_range.0, lambda_range.1, grid_n);
        let tau = dispersion::s_magnitude(q) / 3.0;
        if tau < 1e-12 {
            // the two sheets coincide: Δ = 0, conical level
            for r in collapse(level_crossings(&delta, &s, 0.0), 1e-9) {
                entries.push((r, 1, false));
            }
        } else {
            for (target, sign) in [(tau, 1i8), (-tau, -1i8)] {
                for r in collapse(level_crossings(&delta, &s, target), 1e-9) {
                    entries.push((r, sign, false));
                }
            }
        }
        for r in sigma0_roots(p, params, lambda_range, grid_n)? {
            entries.push((r, 1, true));
        }
    }
    entries.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.2.cmp(&b.2))
            .then(b.1.cmp(&a.1))
    });
    entries.truncate(max_levels);
    Ok(entries
        .into_iter()
        .enumerate()
        .map(|(level_index, (lambda, branch_sign, flat))| SurfaceSample {
            theta1: q.theta1,
            theta2: q.theta2,
            branch_sign,
            lambda,
            level_index,
            flat,
        })
        .collect())
}

/// [`solve_bloch_levels`] on every node of a uniform `theta_grid_n ×
/// theta_grid_n` grid over `[-π,π]²`, in canonical `(θ₁, θ₂, λ)` order.
pub fn surface_grid(
    p: &Potential,
    params: &Params,
    theta_grid_n: usize,
    lambda_range: (f64, f64),
    grid_n: usize,
    max_levels: usize,
) -> Result<Vec<SurfaceSample>> {
    if theta_grid_n < 3 {
        return Err(Error::Parameter(format!(
            "theta grid needs at least 3 nodes per axis, got {theta_grid_n}"
        )));
    }
    let pi = std::f64::consts::PI;
    let node = |i: usize| -pi + 2.0 * pi * i as f64 / (theta_grid_n - 1) as f64;
    let mut out = Vec::new();
    for i in 0..theta_grid_n {
        for j in 0..theta_grid_n {
            let q = Quasimomentum::new(node(i).clamp(-pi, pi), node(j).clamp(-pi, pi))?;
            out.extend(solve_bloch_levels(p, params, &q, lambda_range, grid_n, max_levels)?);
        }
    }
    Ok(out)
}

/// Classify a band edge of the free operator: return every case tag 1-6
/// whose defining identity holds at `edge_lambda` within [`EDGE_CASE_TOL`].
///
/// The cases are: (1) `λ = 0`; (2) `sin(μ)/μ = 0` with `m·κ⁻¹ = 0`;
/// (3) `sin(μ)/μ = 0` with `3/(π·m·a·κ⁻¹) ∈ ℕ`; (4) `D₀ = 0`;
/// (5) `(m/3)(D₁-1) + sin(μ)/μ = 0`; (6) `(m/3)(D₁+1) + sin(μ)/μ = 0`.
/// Fails unless `|Δ(edge_lambda)|` is within 1e-6 of 1.
pub fn classify_free_edges(params: &Params, edge_lambda: f64) -> Result<Vec<EdgeCase>> {
    let delta = dispersion::delta_free(params, edge_lambda).delta;
    if (delta.abs() - 1.0).abs() > EDGE_INPUT_TOL {
        return Err(Error::Classification(format!(
            "λ = {edge_lambda} is not a band edge: Δ = {delta}"
        )));
    }
    let t = edge_lambda / params.a;
    let sinc = sinc_sqrt(t);
    let m = transfer::monodromy_free(edge_lambda, params.a)?;
    let d = dispersion::d_values(&m, params);
    let third_mass = params.mass / 3.0;

    let mut cases = Vec::new();
    if edge_lambda.abs() <= EDGE_CASE_TOL {
        cases.push(EdgeCase { tag: 1, residual: edge_lambda.abs() });
    }
    if sinc.abs() <= EDGE_CASE_TOL && params.mass * params.kappa_inv == 0.0 {
        cases.push(EdgeCase { tag: 2, residual: sinc.abs() });
    }
    let mak = params.mass * params.ak();
    if sinc.abs() <= EDGE_CASE_TOL && mak > 0.0 {
        let ratio = 3.0 / (std::f64::consts::PI * mak);
        let nearest = ratio.round();
        let dist = (ratio - nearest).abs();
        if nearest >= 1.0 && dist <= EDGE_CASE_TOL {
            cases.push(EdgeCase { tag: 3, residual: sinc.abs().max(dist) });
        }
    }
    if d.d0.abs() <= EDGE_CASE_TOL {
        cases.push(EdgeCase { tag: 4, residual: d.d0.abs() });
    }
    let c5 = third_mass * (d.d1 - 1.0) + sinc;
    if c5.abs() <= EDGE_CASE_TOL {
        cases.push(EdgeCase { tag: 5, residual: c5.abs() });
    }
    let c6 = third_mass * (d.d1 + 1.0) + sinc;
    if c6.abs() <= EDGE_CASE_TOL {
        cases.push(EdgeCase { tag: 6, residual: c6.abs() });
    }
    Ok(cases)
}

/// Evaluate `(λ, T₁, T₂, Δ)` on a uniform grid, the data behind the
/// discriminant plots: spectral bands are the preimage of `Δ ∈ [-1,1]`.
pub fn delta_profile(
    p: &Potential,
    params: &Params,
    lambda_range: (f64, f64),
    grid_n: usize,
) -> Result<Vec<dispersion::DeltaEval>> {
    validate_range(lambda_range)?;
    validate_grid(grid_n)?;
    let (lo, hi) = lambda_range;
    let ev = Evaluator::new(p, params)?;
    Ok((0..=grid_n)
        .map(|i| ev.delta_eval(lo + (hi - lo) * i as f64 / grid_n as f64))
        .collect())
}

/// Band scan augmented with Σ₀ and Dirac roots over the same window.
pub fn full_report(
    p: &Potential,
    params: &Params,
    lambda_range: (f64, f64),
    grid_n: usize,
) -> Result<SpectrumReport> {
    let mut report = scan_bands(p, params, lambda_range, grid_n)?;
    report.sigma0 = sigma0_roots(p, params, lambda_range, grid_n)?;
    report.dirac = dirac_roots(p, params, lambda_range, grid_n)?;
    Ok(report)
}
