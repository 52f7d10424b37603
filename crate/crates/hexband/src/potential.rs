//! Edge potentials on the unit interval.
//!
//! Every edge of the lattice carries the same real potential `q` on `[0,1]`,
//! and the discriminant pipeline is only valid when `q(x) = q(1-x)`: the
//! reduction of the Bloch system to the scalar relation goes through the
//! boundary symmetry `ψ₁'(0) = -ψ₂'(1)` of the edge solutions, which is a
//! consequence of that mirror symmetry. Potentials are therefore checked
//! against a probe grid before any spectral object is built from them.

use crate::error::Error;
use crate::Result;

/// Number of probe points used by the symmetry check.
pub const SYMMETRY_PROBE_POINTS: usize = 1001;

/// Default interpolation order for tabulated potentials (cubic, matching the
/// order of the edge integrator).
pub const DEFAULT_INTERPOLATION_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Zero,
    /// `q(x) = amplitude · cos(2πx)`.
    Cosine { amplitude: f64 },
    Tabulated {
        xs: Vec<f64>,
        qs: Vec<f64>,
        order: usize,
    },
}

/// A real potential on the unit edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    kind: Kind,
}

/// Outcome of probing `|q(x) - q(1-x)|` over a uniform grid.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryReport {
    /// Largest asymmetry found on the probe grid.
    pub max_asymmetry: f64,
    /// Location of the maximum.
    pub at_x: f64,
    /// Whether the maximum stayed below the requested tolerance.
    pub symmetric: bool,
}

impl Potential {
    /// The zero potential (free operator).
    pub fn zero() -> Self {
        Potential { kind: Kind::Zero }
    }

    /// `amplitude · cos(2πx)`; symmetric since `cos(2π(1-x)) = cos(2πx)`.
    pub fn cosine(amplitude: f64) -> Self {
        Potential {
            kind: Kind::Cosine { amplitude },
        }
    }

    /// Build a builtin potential by name, `zero` or `cosine`.
    pub fn make_builtin(name: &str, amplitude: f64) -> Result<Self> {
        match name {
            "zero" => Ok(Potential::zero()),
            "cosine" => Ok(Potential::cosine(amplitude)),
            other => Err(Error::InvalidInput(format!(
                "unknown builtin potential '{other}' (expected 'zero' or 'cosine')"
            ))),
        }
    }

    /// Build a tabulated potential from `(x, q(x))` samples on `[0,1]`.
    ///
    /// Requires strictly increasing abscissae starting at 0 and ending at 1,
    /// and an interpolation order of 1 (linear) or 3 (cubic).
    pub fn from_samples(xs: Vec<f64>, qs: Vec<f64>, order: usize) -> Result<Self> {
        if xs.len() != qs.len() {
            return Err(Error::InvalidInput(format!(
                "sample count mismatch: {} abscissae vs {} values",
                xs.len(),
                qs.len()
            )));
        }
        if xs.len() < order + 1 {
            return Err(Error::InvalidInput(format!(
                "need at least {} samples for interpolation order {order}, got {}",
                order + 1,
                xs.len()
            )));
        }
        if order != 1 && order != 3 {
            return Err(Error::InvalidInput(format!(
                "unsupported interpolation order {order} (expected 1 or 3)"
            )));
        }
        if xs[0] != 0.0 || *xs.last().unwrap() != 1.0 {
            return Err(Error::InvalidInput(
                "tabulated potential must start at x = 0 and end at x = 1".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "tabulated abscissae must be strictly increasing".into(),
            ));
        }
        if qs.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidInput(
                "tabulated potential values must be finite".into(),
            ));
        }
        Ok(Potential {
            kind: Kind::Tabulated { xs, qs, order },
        })
    }

    /// Load a tabulated potential from a two-column text file, one
    /// whitespace-separated `x value` pair per line. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut xs = Vec::new();
        let mut qs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (x, q) = match (cols.next(), cols.next(), cols.next()) {
                (Some(x), Some(q), None) => (x, q),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "{}:{}: expected two columns 'x value'",
                        path.display(),
                        lineno + 1
                    )))
                }
            };
            let parse = |s: &str| -> Result<f64> {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!(
                        "{}:{}: malformed number '{s}'",
                        path.display(),
                        lineno + 1
                    ))
                })
            };
            xs.push(parse(x)?);
            qs.push(parse(q)?);
        }
        Self::from_samples(xs, qs, DEFAULT_INTERPOLATION_ORDER)
    }

    /// Whether this is exactly the zero potential (free operator fast path).
    pub fn is_zero(&self) -> bool {
        match &self.kind {
            Kind::Zero => true,
            Kind::Cosine { amplitude } => *amplitude == 0.0,
            Kind::Tabulated { .. } => false,
        }
    }

    /// Evaluate `q(x)` for `x ∈ [0,1]`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!(
                "potential evaluated at x = {x}, outside [0,1]"
            )));
        }
        Ok(self.eval_clamped(x))
    }

    /// Evaluation with the argument clamped to `[0,1]`; used by integrators
    /// whose stage abscissae can exceed the endpoints by rounding.
    pub(crate) fn eval_clamped(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match &self.kind {
            Kind::Zero => 0.0,
            Kind::Cosine { amplitude } => amplitude * (2.0 * std::f64::consts::PI * x).cos(),
            Kind::Tabulated { xs, qs, order } => interpolate(xs, qs, *order, x),
        }
    }

    /// Probe `|q(x) - q(1-x)|` on a uniform grid and compare against `tol`.
    pub fn check_symmetry(&self, tol: f64) -> SymmetryReport {
        let n = SYMMETRY_PROBE_POINTS;
        let mut max_asymmetry = 0.0;
        let mut at_x = 0.0;
        for i in 0..n {
            let x = i as f64 / (n - 1) as f64;
            let d = (self.eval_clamped(x) - self.eval_clamped(1.0 - x)).abs();
            if d > max_asymmetry {
                max_asymmetry = d;
                at_x = x;
            }
        }
        SymmetryReport {
            max_asymmetry,
            at_x,
            symmetric: max_asymmetry <= tol,
        }
    }

    /// Gate used by every downstream spectral constructor: rejects the
    /// potential unless the probe asymmetry is negligible against its scale.
    pub(crate) fn ensure_symmetric(&self) -> Result<()> {
        let scale = 1.0 + self.probe_magnitude();
        let report = self.check_symmetry(1e-9 * scale);
        if report.symmetric {
            Ok(())
        } else {
            Err(Error::AsymmetricPotential {
                max_asymmetry: report.max_asymmetry,
                at_x: report.at_x,
            })
        }
    }

    fn probe_magnitude(&self) -> f64 {
        let n = SYMMETRY_PROBE_POINTS;
        (0..n)
            .map(|i| self.eval_clamped(i as f64 / (n - 1) as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Lagrange interpolation of order `order` on the `order + 1` nodes nearest
/// to `x`. Works on non-uniform grids; on uniform grids with `order = 3` this
/// is the usual 4-point cubic.
fn interpolate(xs: &[f64], qs: &[f64], order: usize, x: f64) -> f64 {
    let n = xs.len();
    // index of the segment containing x
    let seg = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => return qs[i],
        Err(i) => i.saturating_sub(1).min(n - 2),
    };
    // window of order+1 nodes centered on the segment, clamped to the table
    let window = order + 1;
    let lo = seg.saturating_sub(order / 2).min(n - window);
    let xs = &xs[lo..lo + window];
    let qs = &qs[lo..lo + window];
    let mut acc = 0.0;
    for j in 0..window {
        let mut basis = 1.0;
        for k in 0..window {
            if k != j {
                basis *= (x - xs[k]) / (xs[j] - xs[k]);
            }
        }
        acc += basis * qs[j];
    }
    acc
}
