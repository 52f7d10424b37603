//! The Brillouin-zone function `|S|`, the vertex scalars `D₀, D₁, D₂`, the
//! discriminant `Δ` and the 2×2 Bloch coefficient matrix.
//!
//! The scalar dispersion relation is `Δ(λ)² = |S(θ₁,θ₂)|²/9`. `Δ` is entire
//! in λ (it never divides by `D₀`), so a single uniform tolerance works
//! across flat-band eigenvalues; the ψ-ratio form of the same relation is
//! available through [`bloch_matrix`] for cross-checking away from Σ₀.

use num_complex::Complex64;

use crate::error::Error;
use crate::potential::Potential;
use crate::transfer::{self, MonodromyMatrix, Params};
use crate::Result;

/// A point of the Brillouin zone `[-π,π]²`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Quasimomentum {
    pub theta1: f64,
    pub theta2: f64,
}

impl Quasimomentum {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        const PI: f64 = std::f64::consts::PI;
        for (name, v) in [("theta1", theta1), ("theta2", theta2)] {
            if !v.is_finite() || !(-PI..=PI).contains(&v) {
                return Err(Error::Parameter(format!(
                    "{name} = {v} outside the Brillouin zone [-π,π]"
                )));
            }
        }
        Ok(Quasimomentum { theta1, theta2 })
    }

    /// The two quasimomenta carrying the conical points of `|S|`.
    pub fn dirac_pair() -> [Quasimomentum; 2] {
        let third = 2.0 * std::f64::consts::PI / 3.0;
        [
            Quasimomentum { theta1: third, theta2: -third },
            Quasimomentum { theta1: -third, theta2: third },
        ]
    }
}

/// The vertex scalars built from one monodromy matrix:
/// `D₁ = (1, aκ⁻¹)·M·e₁`, `D₂ = (1, aκ⁻¹)·M·e₂`, `D₀ = D₂ + aκ⁻¹·D₁`.
#[derive(Debug, Clone, Copy)]
pub struct DValues {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub lambda: f64,
}

/// The discriminant `Δ = T₁ - (m/3)·T₂` with `T₁ = D₁` and `T₂ = (λ/a)·D₀`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DeltaEval {
    pub lambda: f64,
    pub t1: f64,
    pub t2: f64,
    pub delta: f64,
}

/// `|S(θ₁,θ₂)|²` through the real product identity
/// `1 + 8·cos((θ₁-θ₂)/2)·cos(θ₁/2)·cos(θ₂/2)`, clamped to `[0,9]` so rounding
/// can never produce a negative square.
pub fn s_magnitude_squared(q: &Quasimomentum) -> f64 {
    let c12 = (0.5 * (q.theta1 - q.theta2)).cos();
    let c1 = (0.5 * q.theta1).cos();
    let c2 = (0.5 * q.theta2).cos();
    (1.0 + 8.0 * c12 * c1 * c2).clamp(0.0, 9.0)
}

/// `|S(θ₁,θ₂)| ∈ [0,3]`.
pub fn s_magnitude(q: &Quasimomentum) -> f64 {
    s_magnitude_squared(q).sqrt()
}

/// The complex sum `S = 1 + e^{-iθ₁} + e^{-iθ₂}` itself (Bloch matrix
/// off-diagonals and identity checks).
pub fn s_complex(q: &Quasimomentum) -> Complex64 {
    Complex64::new(1.0, 0.0)
        + Complex64::from_polar(1.0, -q.theta1)
        + Complex64::from_polar(1.0, -q.theta2)
}

/// Vertex scalars from monodromy entries.
pub fn d_values(m: &MonodromyMatrix, params: &Params) -> DValues {
    let ak = params.ak();
    let d1 = m.c1 + ak * m.cp1;
    let d2 = m.s1 + ak * m.sp1;
    DValues {
        d0: d2 + ak * d1,
        d1,
        d2,
        lambda: m.lambda,
    }
}

/// Discriminant from precomputed vertex scalars.
pub fn delta_from_dvalues(d: &DValues, params: &Params) -> DeltaEval {
    let t1 = d.d1;
    let t2 = d.lambda / params.a * d.d0;
    DeltaEval {
        lambda: d.lambda,
        t1,
        t2,
        delta: t1 - params.mass / 3.0 * t2,
    }
}

/// Discriminant of the free operator (closed-form monodromy).
pub fn delta_free(params: &Params, lambda: f64) -> DeltaEval {
    let m = transfer::monodromy_free(lambda, params.a)
        .expect("Params guarantees a > 0");
    delta_from_dvalues(&d_values(&m, params), params)
}

/// Discriminant for an arbitrary symmetric potential; routes to the closed
/// form when the potential is identically zero.
pub fn delta_eval(p: &Potential, params: &Params, lambda: f64) -> Result<DeltaEval> {
    delta_eval_steps(p, params, lambda, transfer::DEFAULT_STEPS)
}

/// Same as [`delta_eval`] with an explicit integrator step count.
pub fn delta_eval_steps(
    p: &Potential,
    params: &Params,
    lambda: f64,
    steps: usize,
) -> Result<DeltaEval> {
    if p.is_zero() {
        return Ok(delta_free(params, lambda));
    }
    let m = transfer::monodromy_numeric(p, lambda, params.a, steps)?;
    Ok(delta_from_dvalues(&d_values(&m, params), params))
}

/// The 2×2 Bloch coefficient matrix and its determinant.
#[derive(Debug, Clone, Copy)]
pub struct BlochMatrix {
    /// Row-major entries `[[3ψ₂'(1) - λm/a, -S·ψ₂'(0)], [-S̄·ψ₂'(0), 3ψ₂'(1) - λm/a]]`.
    pub entries: [[Complex64; 2]; 2],
    pub det: Complex64,
}

/// Assemble the Bloch coefficient matrix from ψ boundary data.
///
/// Fails when the boundary data is marked invalid (λ ∈ Σ₀, where the
/// ψ-representation has a pole and the Δ form must be used instead).
pub fn bloch_matrix(
    pb: &transfer::PsiBoundary,
    params: &Params,
    q: &Quasimomentum,
    lambda: f64,
) -> Result<BlochMatrix> {
    if !pb.valid {
        return Err(Error::Singular(format!(
            "ψ boundary data invalid at λ = {lambda}: D₀ vanishes (flat-band eigenvalue)"
        )));
    }
    let s = s_complex(q);
    let diag = Complex64::new(3.0 * pb.psi2p1 - lambda * params.mass / params.a, 0.0);
    let off = -s * pb.psi2p0;
    let entries = [[diag, off], [-s.conj() * pb.psi2p0, diag]];
    let det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
    Ok(BlochMatrix { entries, det })
}

/// `Δ(λ)² - |S(θ)|²/9`; vanishes exactly on the Bloch variety (for λ ∉ Σ₀).
pub fn dispersion_residual(
    p: &Potential,
    params: &Params,
    lambda: f64,
    q: &Quasimomentum,
) -> Result<f64> {
    let d = delta_eval(p, params, lambda)?;
    Ok(d.delta * d.delta - s_magnitude_squared(q) / 9.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{sinc_sqrt, sqrt_sin_sqrt};
    use crate::transfer::monodromy_free;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn qm(t1: f64, t2: f64) -> Quasimomentum {
        Quasimomentum::new(t1, t2).unwrap()
    }

    #[test]
    fn s_magnitude_landmarks() {
        assert_relative_eq!(s_magnitude(&qm(0.0, 0.0)), 3.0, max_relative = 1e-15);
        let third = 2.0 * PI / 3.0;
        assert!(s_magnitude(&qm(third, -third)) < 1e-7);
        assert!(s_magnitude(&qm(-third, third)) < 1e-7);
        assert_relative_eq!(s_magnitude(&qm(PI, PI)), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn s_magnitude_symmetries_and_range() {
        let n = 101;
        for i in 0..n {
            for j in 0..n {
                let t1 = -PI + 2.0 * PI * i as f64 / (n - 1) as f64;
                let t2 = -PI + 2.0 * PI * j as f64 / (n - 1) as f64;
                let s = s_magnitude(&qm(t1, t2));
                assert!((0.0..=3.0 + 1e-12).contains(&s));
                assert_abs_diff_eq!(s, s_magnitude(&qm(t2, t1)), epsilon = 1e-12);
                assert_abs_diff_eq!(s, s_magnitude(&qm(-t1, -t2)), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn product_identity_matches_complex_sum() {
        let n = 201;
        for i in 0..n {
            for j in 0..n {
                let t1 = -PI + 2.0 * PI * i as f64 / (n - 1) as f64;
                let t2 = -PI + 2.0 * PI * j as f64 / (n - 1) as f64;
                let q = qm(t1, t2);
                let via_product = s_magnitude_squared(&q);
                let via_sum = s_complex(&q).norm_sqr();
                assert_abs_diff_eq!(via_product, via_sum, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn quasimomentum_validation() {
        assert!(Quasimomentum::new(3.2, 0.0).is_err());
        assert!(Quasimomentum::new(0.0, -3.2).is_err());
        assert!(Quasimomentum::new(f64::NAN, 0.0).is_err());
        assert!(Quasimomentum::new(PI, -PI).is_ok());
    }

    #[test]
    fn d_values_examples() {
        // identity monodromy at λ = 0
        let params = Params::graphene();
        let m = monodromy_free(0.0, 1.0).unwrap();
        let d = d_values(&m, &params);
        assert_eq!((d.d0, d.d1, d.d2), (1.0, 1.0, 1.0));

        // λ = 0, κ⁻¹ = 2: d1 = 1, d2 = 3, d0 = 2aκ⁻¹ + 1 = 5
        let params = Params::new(1.0, 2.0, 0.0).unwrap();
        let d = d_values(&m, &params);
        assert_eq!((d.d0, d.d1, d.d2), (5.0, 1.0, 3.0));

        // λ = π², κ⁻¹ = 1: cos π = -1, sin π = 0
        let params = Params::new(1.0, 1.0, 0.0).unwrap();
        let m = monodromy_free(PI * PI, 1.0).unwrap();
        let d = d_values(&m, &params);
        assert_abs_diff_eq!(d.d1, -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(d.d2, -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(d.d0, -2.0, epsilon = 1e-13);
    }

    #[test]
    fn d0_identity_is_exact_as_computed() {
        let params = Params::new(1.3, 0.7, 0.4).unwrap();
        let mut lam = -20.0;
        while lam <= 400.0 {
            let m = monodromy_free(lam, params.a).unwrap();
            let d = d_values(&m, &params);
            // bitwise: d0 is defined as this exact expression
            assert_eq!(d.d0, d.d2 + params.ak() * d.d1);
            lam += 1.7;
        }
    }

    #[test]
    fn delta_examples() {
        let zero = Potential::zero();
        // graphene: Δ = cos(√λ)
        let g = Params::graphene();
        let d = delta_eval(&zero, &g, PI * PI / 4.0).unwrap();
        assert_abs_diff_eq!(d.delta, 0.0, epsilon = 1e-15);
        let d = delta_eval(&zero, &g, 0.0).unwrap();
        assert_eq!(d.delta, 1.0);

        // m = 3: Δ(π²) = cos π - π²·(sin π / π) = -1
        let p = Params::new(1.0, 0.0, 3.0).unwrap();
        let d = delta_eval(&zero, &p, PI * PI).unwrap();
        assert_abs_diff_eq!(d.delta, -1.0, epsilon = 1e-13);
        // t2 = (λ/a)·D₀ and invariant delta = t1 - m/3·t2 exactly
        assert_eq!(d.delta, d.t1 - p.mass / 3.0 * d.t2);
    }

    #[test]
    fn free_d1_d0_identity_over_grid() {
        // D₁² = 1 - √t·sin(√t)·D₀ for the free operator
        for params in [
            Params::graphene(),
            Params::new(1.0, 0.5, 0.0).unwrap(),
            Params::new(2.0, 1.2, 1.0).unwrap(),
        ] {
            let mut lam = -20.0;
            while lam <= 400.0 {
                let m = monodromy_free(lam, params.a).unwrap();
                let d = d_values(&m, &params);
                let t = lam / params.a;
                let residual = d.d1 * d.d1 - (1.0 - sqrt_sin_sqrt(t) * d.d0);
                assert!(
                    residual.abs() <= 1e-11,
                    "λ = {lam}, ak = {}: residual {residual:.2e}",
                    params.ak()
                );
                lam += 0.37;
            }
        }
    }

    #[test]
    fn delta_equals_half_trace_for_rigid_massless() {
        let params = Params::graphene();
        let p = Potential::cosine(1.5);
        for &lam in &[-5.0, 0.0, 3.0, 42.0, 150.0] {
            let m = crate::transfer::monodromy_numeric(&p, lam, 1.0, 512).unwrap();
            let d = delta_from_dvalues(&d_values(&m, &params), &params);
            assert_abs_diff_eq!(d.delta, m.half_trace(), epsilon = 1e-11);
        }
    }

    #[test]
    fn bloch_matrix_free_graphene() {
        let params = Params::graphene();
        let lam = PI * PI / 4.0;
        let m = monodromy_free(lam, 1.0).unwrap();
        let pb = crate::transfer::psi_boundary(&m, &params);
        let bm = bloch_matrix(&pb, &params, &qm(0.0, 0.0), lam).unwrap();
        // ψ₂'(1) = 0, ψ₂'(0) = π/2, S = 3 → [[0, -3π/2], [-3π/2, 0]]
        assert_abs_diff_eq!(bm.entries[0][0].re, 0.0, epsilon = 1e-13);
        assert_relative_eq!(bm.entries[0][1].re, -1.5 * PI, max_relative = 1e-13);
        assert_abs_diff_eq!(bm.entries[0][1].im, 0.0, epsilon = 1e-13);
        assert_relative_eq!(bm.det.re, -2.25 * PI * PI, max_relative = 1e-13);
        assert_abs_diff_eq!(bm.det.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bloch_matrix_offdiagonal_vanishes_at_dirac_momentum() {
        let params = Params::new(1.0, 0.3, 0.7).unwrap();
        let lam = 3.21;
        let m = monodromy_free(lam, 1.0).unwrap();
        let pb = crate::transfer::psi_boundary(&m, &params);
        let [qd, _] = Quasimomentum::dirac_pair();
        let bm = bloch_matrix(&pb, &params, &qd, lam).unwrap();
        assert!(bm.entries[0][1].norm() < 1e-14);
        let diag = bm.entries[0][0];
        assert_abs_diff_eq!((bm.det - diag * diag).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bloch_matrix_rejects_sigma0() {
        let params = Params::graphene();
        let m = monodromy_free(PI * PI, 1.0).unwrap();
        let pb = crate::transfer::psi_boundary(&m, &params);
        assert!(matches!(
            bloch_matrix(&pb, &params, &qm(0.0, 0.0), PI * PI),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn bloch_det_consistent_with_delta_on_random_samples() {
        // det / (3ψ₂'(0))² = Δ² - |S|²/9
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let zero = Potential::zero();
        for _ in 0..200 {
            let params = Params::new(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..2.0),
            )
            .unwrap();
            let lam: f64 = rng.gen_range(-5.0..150.0);
            let q = qm(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            let m = monodromy_free(lam, params.a).unwrap();
            let pb = crate::transfer::psi_boundary(&m, &params);
            if !pb.valid {
                continue;
            }
            let bm = bloch_matrix(&pb, &params, &q, lam).unwrap();
            let lhs = bm.det.re / (3.0 * pb.psi2p0).powi(2);
            let rhs = dispersion_residual(&zero, &params, lam, &q).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()),
                "λ = {lam}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn residual_examples() {
        let zero = Potential::zero();
        let g = Params::graphene();
        let third = 2.0 * PI / 3.0;
        let r = dispersion_residual(&zero, &g, PI * PI / 4.0, &qm(third, -third)).unwrap();
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
        let r = dispersion_residual(&zero, &g, 0.0, &qm(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-15);
        let r = dispersion_residual(&zero, &g, 0.0, &qm(PI, PI)).unwrap();
        assert_relative_eq!(r, 8.0 / 9.0, max_relative = 1e-12);
    }

    #[test]
    fn sinc_consistency_of_t2() {
        // T₂ = (λ/a)·D₀ stays finite and entire through λ = 0
        let params = Params::new(1.0, 0.5, 1.0).unwrap();
        let d = delta_free(&params, 1e-12);
        assert!(d.t2.abs() < 1e-10);
        let _ = sinc_sqrt(0.0);
    }
}
