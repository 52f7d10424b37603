//! Fundamental solutions and period maps of the single-edge operator.
//!
//! The broken Hill equation `-a u'' + q(x) u = λ u` on the periodically
//! extended edge has fundamental solutions `c_λ`, `s_λ` normalized at `x = 0`
//! by `(c, c') = (1, 0)` and `(s, s') = (0, 1)`. Their values and derivatives
//! at the period endpoint `x = 1` form the monodromy matrix, whose four
//! entries are everything the downstream dispersion machinery ever needs.
//!
//! For the free operator the entries are closed-form trigonometric functions
//! of `t = λ/a`. For general symmetric potentials the two initial-value
//! problems are integrated with a fixed-step 3-stage Gauss-Legendre
//! collocation scheme (order 6, A-stable, symplectic). Symplecticity keeps
//! the Wronskian `c·s' - s·c' = 1` at rounding level for any step count,
//! which the band machinery relies on.

use crate::dispersion;
use crate::error::Error;
use crate::potential::Potential;
use crate::special::{cos_sqrt, sinc_sqrt};
use crate::Result;

/// Default step count for the edge integrator.
pub const DEFAULT_STEPS: usize = 512;

/// Minimum accepted step count.
pub const MIN_STEPS: usize = 16;

/// Relative threshold below which `D₀` is treated as singular (λ ∈ Σ₀).
const SINGULARITY_REL: f64 = 1e-9;

/// Physical parameters of the vertex model.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Params {
    /// Stiffness `a > 0` of the edge operator `-a d²/dx² + q`.
    pub a: f64,
    /// Semi-rigidity `κ⁻¹ ≥ 0`; zero gives rigid (continuous) vertices.
    pub kappa_inv: f64,
    /// Concentrated vertex mass `m ≥ 0`.
    pub mass: f64,
}

impl Params {
    pub fn new(a: f64, kappa_inv: f64, mass: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Parameter(format!("stiffness a must be positive, got {a}")));
        }
        if !(kappa_inv.is_finite() && kappa_inv >= 0.0) {
            return Err(Error::Parameter(format!(
                "semi-rigidity kappa_inv must be nonnegative, got {kappa_inv}"
            )));
        }
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::Parameter(format!(
                "vertex mass must be nonnegative, got {mass}"
            )));
        }
        Ok(Params { a, kappa_inv, mass })
    }

    /// Rigid massless vertices with unit stiffness: the graphene model.
    pub fn graphene() -> Self {
        Params { a: 1.0, kappa_inv: 0.0, mass: 0.0 }
    }

    /// The combination `a·κ⁻¹` appearing in every vertex scalar.
    pub fn ak(&self) -> f64 {
        self.a * self.kappa_inv
    }
}

/// Endpoint data of the fundamental solutions at `x = 1`.
#[derive(Debug, Clone, Copy)]
pub struct MonodromyMatrix {
    /// `c_λ(1)`.
    pub c1: f64,
    /// `s_λ(1)`.
    pub s1: f64,
    /// `c_λ'(1)`.
    pub cp1: f64,
    /// `s_λ'(1)`.
    pub sp1: f64,
    /// Spectral parameter the entries were evaluated at.
    pub lambda: f64,
}

impl MonodromyMatrix {
    /// Wronskian `c·s' - s·c'`; identically 1 along exact solutions.
    pub fn det(&self) -> f64 {
        self.c1 * self.sp1 - self.s1 * self.cp1
    }

    /// `(c_λ(1) + s_λ'(1))/2`; equals the discriminant Δ for rigid massless
    /// vertices.
    pub fn half_trace(&self) -> f64 {
        0.5 * (self.c1 + self.sp1)
    }

    /// `c_λ(1) - s_λ'(1)`; vanishes for symmetric potentials.
    pub fn symmetry_defect(&self) -> f64 {
        self.c1 - self.sp1
    }
}

/// Boundary data of the solution `ψ₂` (and the coefficients building it) used
/// by the 2×2 Bloch matrix form of the dispersion relation. Meaningless when
/// `valid` is false, i.e. when λ sits on (or numerically near) a flat-band
/// eigenvalue where `D₀` vanishes.
#[derive(Debug, Clone, Copy)]
pub struct PsiBoundary {
    /// `ψ₂'(0) = 1/D₀(λ)`.
    pub psi2p0: f64,
    /// `ψ₂'(1) = D₁(λ)/D₀(λ)`.
    pub psi2p1: f64,
    /// `A₁ = -D₁/D₀`.
    pub a1: f64,
    /// `A₂ = 1/D₀`.
    pub a2: f64,
    /// `B₁ = 1 + a·κ⁻¹·A₁`.
    pub b1: f64,
    /// `B₂ = a·κ⁻¹·A₂`.
    pub b2: f64,
    /// False when `|D₀|` is below the singularity threshold.
    pub valid: bool,
}

/// Closed-form monodromy matrix of the free operator.
///
/// With `μ = √(λ/a)` the entries are `(cos μ, sin(μ)/μ, -μ·sin μ, cos μ)`;
/// negative λ continues hyperbolically.
pub fn monodromy_free(lambda: f64, a: f64) -> Result<MonodromyMatrix> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Parameter(format!("stiffness a must be positive, got {a}")));
    }
    let t = lambda / a;
    let c = cos_sqrt(t);
    let s = sinc_sqrt(t);
    Ok(MonodromyMatrix {
        c1: c,
        s1: s,
        cp1: -t * s,
        sp1: c,
        lambda,
    })
}

/// Monodromy matrix by numerical integration of the two initial-value
/// problems `u'' = (q(x) - λ)/a · u` across one period.
///
/// Rejects asymmetric potentials and step counts below [`MIN_STEPS`].
pub fn monodromy_numeric(
    p: &Potential,
    lambda: f64,
    a: f64,
    steps: usize,
) -> Result<MonodromyMatrix> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Parameter(format!("stiffness a must be positive, got {a}")));
    }
    if steps < MIN_STEPS {
        return Err(Error::Parameter(format!(
            "integrator needs at least {MIN_STEPS} steps, got {steps}"
        )));
    }
    p.ensure_symmetric()?;
    Ok(integrate_monodromy(p, lambda, a, steps))
}

/// Integration without the per-call symmetry gate, for scan loops that have
/// already validated the potential once.
pub(crate) fn monodromy_numeric_unchecked(
    p: &Potential,
    lambda: f64,
    a: f64,
    steps: usize,
) -> MonodromyMatrix {
    integrate_monodromy(p, lambda, a, steps)
}

/// ψ-solution boundary data from a monodromy matrix.
///
/// Never fails: proximity to Σ₀ is reported through the `valid` flag, with
/// the threshold `|D₀| < 1e-9·max(1, |D₁|)`.
pub fn psi_boundary(m: &MonodromyMatrix, params: &Params) -> PsiBoundary {
    let d = dispersion::d_values(m, params);
    if d.d0.abs() < SINGULARITY_REL * d.d1.abs().max(1.0) {
        return PsiBoundary {
            psi2p0: f64::INFINITY,
            psi2p1: f64::INFINITY,
            a1: f64::INFINITY,
            a2: f64::INFINITY,
            b1: f64::INFINITY,
            b2: f64::INFINITY,
            valid: false,
        };
    }
    let a1 = -d.d1 / d.d0;
    let a2 = 1.0 / d.d0;
    PsiBoundary {
        psi2p0: a2,
        psi2p1: d.d1 / d.d0,
        a1,
        a2,
        b1: 1.0 + params.ak() * a1,
        b2: params.ak() * a2,
        valid: true,
    }
}

// ---------------------------------------------------------------------------
// Gauss-Legendre edge integrator
// ---------------------------------------------------------------------------

/// Integrates the fundamental 2×2 system `U' = [[0,1],[w(x),0]]·U` from 0 to 1
/// with `w = (q - λ)/a`, returning the endpoint matrix. The three implicit
/// stages of each step form a 6×6 linear system solved directly, so the
/// scheme stays non-iterative and bit-deterministic.
fn integrate_monodromy(p: &Potential, lambda: f64, a: f64, steps: usize) -> MonodromyMatrix {
    let s15 = 15.0_f64.sqrt();
    let nodes = [0.5 - s15 / 10.0, 0.5, 0.5 + s15 / 10.0];
    let coeff = [
        [5.0 / 36.0, 2.0 / 9.0 - s15 / 15.0, 5.0 / 36.0 - s15 / 30.0],
        [5.0 / 36.0 + s15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - s15 / 24.0],
        [5.0 / 36.0 + s15 / 30.0, 2.0 / 9.0 + s15 / 15.0, 5.0 / 36.0],
    ];
    let weights = [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0];

    let h = 1.0 / steps as f64;
    // columns of the fundamental matrix: (c, c') and (s, s')
    let mut u = [[1.0, 0.0], [0.0, 1.0]];

    for step in 0..steps {
        let x0 = step as f64 * h;
        let w: [f64; 3] =
            std::array::from_fn(|i| (p.eval_clamped(x0 + nodes[i] * h) - lambda) / a);

        // Stage system M·K = rhs per column, with 2×2 blocks
        // M[i][j] = δ_ij·I - h·a_ij·A_i and A_i = [[0,1],[w_i,0]].
        let mut m = [[0.0_f64; 6]; 6];
        for i in 0..3 {
            for j in 0..3 {
                let ha = h * coeff[i][j];
                // -h a_ij * A_i rows: row 2i is (0,1), row 2i+1 is (w_i,0)
                m[2 * i][2 * j + 1] -= ha;
                m[2 * i + 1][2 * j] -= ha * w[i];
            }
            m[2 * i][2 * i] += 1.0;
            m[2 * i + 1][2 * i + 1] += 1.0;
        }
        let mut rhs = [[0.0_f64; 2]; 6];
        for col in 0..2 {
            let (y, yp) = (u[0][col], u[1][col]);
            for i in 0..3 {
                rhs[2 * i][col] = yp;
                rhs[2 * i + 1][col] = w[i] * y;
            }
        }
        let k = solve6(&mut m, &mut rhs);
        for col in 0..2 {
            for i in 0..3 {
                u[0][col] += h * weights[i] * k[2 * i][col];
                u[1][col] += h * weights[i] * k[2 * i + 1][col];
            }
        }
    }

    MonodromyMatrix {
        c1: u[0][0],
        s1: u[0][1],
        cp1: u[1][0],
        sp1: u[1][1],
        lambda,
    }
}

/// In-place Gaussian elimination with partial pivoting for the 6×6 stage
/// system with two right-hand sides.
fn solve6(m: &mut [[f64; 6]; 6], rhs: &mut [[f64; 2]; 6]) -> [[f64; 2]; 6] {
    for col in 0..6 {
        let mut pivot = col;
        for row in col + 1..6 {
            if m[row][col].abs() > m[pivot][col].abs() {
                pivot = row;
            }
        }
        if pivot != col {
            m.swap(col, pivot);
            rhs.swap(col, pivot);
        }
        let inv = 1.0 / m[col][col];
        for row in col + 1..6 {
            let factor = m[row][col] * inv;
            if factor != 0.0 {
                for k in col..6 {
                    m[row][k] -= factor * m[col][k];
                }
                rhs[row][0] -= factor * rhs[col][0];
                rhs[row][1] -= factor * rhs[col][1];
            }
        }
    }
    let mut out = [[0.0; 2]; 6];
    for col in 0..2 {
        for row in (0..6).rev() {
            let mut acc = rhs[row][col];
            for k in row + 1..6 {
                acc -= m[row][k] * out[k][col];
            }
            out[row][col] = acc / m[row][row];
        }
    }
    out
}
