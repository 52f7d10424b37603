//! Finite-difference oracle for the Bloch Hamiltonian on the fundamental
//! domain.
//!
//! Independently of the monodromy/discriminant pipeline in `hexband`, this
//! crate discretizes the operator `-a u'' + q u` on the three edges of the
//! fundamental domain directly: second-order central stencils on edge
//! interiors, three semi-rigidity rows per vertex tying `u_e(v) ± aκ⁻¹u_e'(v)`
//! to the shared vertex value ω (with Floquet phases `e^{iθ₁}`, `e^{iθ₂}` on
//! edges 2 and 3 at the far vertex), and one net-force row per vertex whose
//! right-hand side `λ·m·ω` is linear in λ and therefore fits a generalized
//! pencil `A·x = λ·B·x` exactly.
//!
//! The pencil is non-Hermitian and `B` is singular on the constraint rows, so
//! eigenvalues are extracted by a shift-invert reduction to an ordinary dense
//! eigenproblem: with a complex shift σ off the real axis, the eigenvalues ν
//! of `(A - σB)⁻¹B` map back through `λ = σ + 1/ν`, and the constraint rows
//! turn into harmless `ν = 0` modes. Agreement of the surviving real
//! eigenvalues with the analytic Bloch levels is the strongest end-to-end
//! check the artifact has.

use ndarray::Array2;
use num_complex::Complex64;

use hexband::dispersion::Quasimomentum;
use hexband::potential::Potential;
use hexband::spectrum;
use hexband::transfer::Params;
use hexband::{Error, Result};

mod lapack;

/// Minimum nodes per edge.
pub const FD_MIN_POINTS: usize = 20;

/// Eigenvalues with `|Im λ| > 1e-6·(1 + |Re λ|)` are discarded as spurious.
const IMAG_FILTER_REL: f64 = 1e-6;

/// Magnitude cap separating physical eigenvalues from constraint artifacts.
const EIG_CAP: f64 = 1e6;

/// FD multiplets split by O(h²); values closer than `2e-2·(1+|λ|)` are
/// clustered into one level when extracting distinct eigenvalues.
const CLUSTER_REL: f64 = 2e-2;

/// Discretized Bloch Hamiltonian `A·x = λ·B·x` on the fundamental domain.
///
/// Unknowns: `n` nodes per edge (endpoints included, spacing `h = 1/(n-1)`)
/// for the three edges, then the vertex values ω₀, ω₁; `dim = 3n + 2`.
/// Row layout: `3(n-2)` interior stencils, six semi-rigidity rows (zero rows
/// of `B`), two net-force rows (`B` carries `m` on the ω columns).
#[derive(Debug, Clone)]
pub struct FdBlochSystem {
    pub n: usize,
    pub dim: usize,
    pub a: Array2<Complex64>,
    pub b: Array2<Complex64>,
    pub theta: Quasimomentum,
    pub params: Params,
}

/// Assemble the finite-difference pencil for one quasimomentum.
pub fn assemble(
    p: &Potential,
    params: &Params,
    q: &Quasimomentum,
    n: usize,
) -> Result<FdBlochSystem> {
    if n < FD_MIN_POINTS {
        return Err(Error::Parameter(format!(
            "finite-difference grid needs at least {FD_MIN_POINTS} nodes per edge, got {n}"
        )));
    }
    let dim = 3 * n + 2;
    let h = 1.0 / (n - 1) as f64;
    let (a, kinv, mass) = (params.a, params.kappa_inv, params.mass);
    let col = |e: usize, j: usize| e * n + j;
    let (w0, w1) = (3 * n, 3 * n + 1);
    let one = Complex64::new(1.0, 0.0);
    let phases = [
        one,
        Complex64::from_polar(1.0, q.theta1),
        Complex64::from_polar(1.0, q.theta2),
    ];
    // second-order one-sided derivative stencils at the two edge ends
    let dleft = |e: usize| {
        [
            (col(e, 0), -1.5 / h),
            (col(e, 1), 2.0 / h),
            (col(e, 2), -0.5 / h),
        ]
    };
    let dright = |e: usize| {
        [
            (col(e, n - 1), 1.5 / h),
            (col(e, n - 2), -2.0 / h),
            (col(e, n - 3), 0.5 / h),
        ]
    };

    let mut ma = Array2::<Complex64>::zeros((dim, dim));
    let mut mb = Array2::<Complex64>::zeros((dim, dim));
    let mut row = 0;

    for e in 0..3 {
        for j in 1..n - 1 {
            let x = j as f64 * h;
            ma[[row, col(e, j - 1)]] = Complex64::new(-a / (h * h), 0.0);
            ma[[row, col(e, j)]] = Complex64::new(2.0 * a / (h * h) + p.evaluate(x)?, 0.0);
            ma[[row, col(e, j + 1)]] = Complex64::new(-a / (h * h), 0.0);
            mb[[row, col(e, j)]] = one;
            row += 1;
        }
    }

    // semi-rigidity at v₁ (x = 0): u_e(0) - aκ⁻¹u_e'(0) = ω₀
    for e in 0..3 {
        ma[[row, col(e, 0)]] += one;
        for (c, v) in dleft(e) {
            ma[[row, c]] += Complex64::new(-a * kinv * v, 0.0);
        }
        ma[[row, w0]] = -one;
        row += 1;
    }
    // semi-rigidity at v₂ (x = 1): (u_e(1) + aκ⁻¹u_e'(1))·phase_e = ω₁
    for e in 0..3 {
        ma[[row, col(e, n - 1)]] += phases[e];
        for (c, v) in dright(e) {
            ma[[row, c]] += phases[e] * (a * kinv * v);
        }
        ma[[row, w1]] = -one;
        row += 1;
    }
    // net force at v₁: -a(u₁'(0) + u₂'(0) + u₃'(0)) = λ·m·ω₀
    for e in 0..3 {
        for (c, v) in dleft(e) {
            ma[[row, c]] += Complex64::new(-a * v, 0.0);
        }
    }
    mb[[row, w0]] = Complex64::new(mass, 0.0);
    row += 1;
    // net force at v₂: a(u₁'(1) + u₂'(1)e^{iθ₁} + u₃'(1)e^{iθ₂}) = λ·m·ω₁
    for (e, phase) in phases.iter().enumerate() {
        for (c, v) in dright(e) {
            ma[[row, c]] += phase * (a * v);
        }
    }
    mb[[row, w1]] = Complex64::new(mass, 0.0);
    row += 1;
    debug_assert_eq!(row, dim);

    Ok(FdBlochSystem {
        n,
        dim,
        a: ma,
        b: mb,
        theta: *q,
        params: *params,
    })
}

impl FdBlochSystem {
    /// Eigenvalues of the pencil after shift-invert, before the reality
    /// filter. Constraint rows appear as `ν ≈ 0` modes and are dropped.
    pub fn raw_eigenvalues(&self) -> Result<Vec<Complex64>> {
        let sigma = Complex64::new(-17.0, 9.0);
        let dim = self.dim;
        let shifted = &self.a - &self.b.mapv(|v| v * sigma);
        let mut lhs = shifted.into_raw_vec();
        let mut rhs = self.b.clone().into_raw_vec();
        // rhs becomes F = (A - σB)⁻¹ B
        self.eig_step(lapack::solve(&mut lhs, &mut rhs, dim))?;
        let mut f = rhs;
        let nus = self.eig_step(lapack::eigenvalues(&mut f, dim))?;
        Ok(nus
            .into_iter()
            .filter(|nu| nu.norm() > 1e-14)
            .map(|nu| sigma + 1.0 / nu)
            .collect())
    }

    /// The `k` lowest distinct real eigenvalues, ascending. Spurious modes
    /// (complex beyond the filter, or beyond the magnitude cap) are dropped
    /// and O(h²)-split multiplets are clustered into single levels.
    pub fn eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        let mut real: Vec<f64> = self
            .raw_eigenvalues()?
            .into_iter()
            .filter(|l| {
                l.re.is_finite()
                    && l.im.abs() <= IMAG_FILTER_REL * (1.0 + l.re.abs())
                    && l.norm() <= EIG_CAP
            })
            .map(|l| l.re)
            .collect();
        real.sort_by(f64::total_cmp);
        let mut distinct: Vec<f64> = Vec::new();
        let mut cluster: Vec<f64> = Vec::new();
        for v in real {
            if let Some(&last) = cluster.last() {
                if v - last > CLUSTER_REL * (1.0 + v.abs()) {
                    distinct.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
                    cluster.clear();
                }
            }
            cluster.push(v);
        }
        if !cluster.is_empty() {
            distinct.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
        }
        distinct.truncate(k);
        Ok(distinct)
    }

    /// Wrap a LAPACK step result; on failure, dump the pencil for inspection
    /// and attach the dump path to the error.
    fn eig_step<T>(&self, result: Result<T>) -> Result<T> {
        result.map_err(|e| {
            let path = std::env::temp_dir().join("hexband_fd_dump.txt");
            let dumped = std::fs::File::create(&path)
                .map(|mut f| self.dump_text(&mut f).is_ok())
                .unwrap_or(false);
            if dumped {
                Error::Numerical(format!("{e}; pencil dumped to {}", path.display()))
            } else {
                e
            }
        })
    }

    /// Dump `(A, B)` as text: a `dim n` header, then the `dim²` row-major
    /// entries of `A` as `re im` lines, then those of `B`.
    pub fn dump_text(&self, w: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.dim, self.n)?;
        for m in [&self.a, &self.b] {
            for v in m.iter() {
                writeln!(w, "{} {}", v.re, v.im)?;
            }
        }
        Ok(())
    }
}

/// Assemble and solve in one call: the `k` lowest distinct real Bloch
/// eigenvalues at quasimomentum `q`.
pub fn bloch_eigs_fd(
    p: &Potential,
    params: &Params,
    q: &Quasimomentum,
    n: usize,
    k: usize,
) -> Result<Vec<f64>> {
    assemble(p, params, q, n)?.eigenvalues(k)
}

/// Match the `k` lowest FD eigenvalues against the `k` lowest analytic Bloch
/// levels (variety solutions plus Σ₀ flat branches, deduplicated) and return
/// the largest relative discrepancy `|λ_fd - λ_an| / (1 + |λ_an|)`.
pub fn compare_dispersion(
    p: &Potential,
    params: &Params,
    q: &Quasimomentum,
    n: usize,
    k: usize,
) -> Result<f64> {
    if k == 0 {
        return Ok(0.0);
    }
    let fd = bloch_eigs_fd(p, params, q, n, k)?;
    if fd.len() < k {
        return Err(Error::Numerical(format!(
            "finite-difference solve produced only {} distinct real eigenvalues, need {k}",
            fd.len()
        )));
    }
    let analytic = analytic_levels(p, params, q, k)?;
    let max = fd
        .iter()
        .zip(&analytic)
        .map(|(f, a)| (f - a).abs() / (1.0 + a.abs()))
        .fold(0.0, f64::max);
    Ok(max)
}

/// The `k` lowest distinct analytic levels at `q`, growing the λ window until
/// enough levels are found.
fn analytic_levels(p: &Potential, params: &Params, q: &Quasimomentum, k: usize) -> Result<Vec<f64>> {
    let mut hi = 50.0 * params.a.max(1.0);
    loop {
        let lo = -1.0 * params.a.max(1.0);
        let grid = (((hi - lo) * 4.0) as usize).max(2000);
        let samples = spectrum::solve_bloch_levels(p, params, q, (lo, hi), grid, 16 * k + 64)?;
        let mut distinct: Vec<f64> = Vec::new();
        for s in &samples {
            match distinct.last() {
                Some(&last) if (s.lambda - last).abs() <= 1e-9 * (1.0 + s.lambda.abs()) => {}
                _ => distinct.push(s.lambda),
            }
        }
        if distinct.len() >= k {
            distinct.truncate(k);
            return Ok(distinct);
        }
        hi *= 2.0;
        if hi > 1e6 * params.a.max(1.0) {
            return Err(Error::Range(format!(
                "analytic level search exhausted λ ≤ {hi} with only {} levels, need {k}",
                distinct.len()
            )));
        }
    }
}
