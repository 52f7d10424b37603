//! The `verify` subcommand: cross-checks every identity the pipeline rests
//! on and prints a pass/fail table.

use std::f64::consts::PI;

use hexband::dispersion::{self, Quasimomentum};
use hexband::potential::Potential;
use hexband::special::sqrt_sin_sqrt;
use hexband::transfer::{self, Params};

struct Check {
    name: &'static str,
    max_residual: f64,
    threshold: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.max_residual.is_finite() && self.max_residual <= self.threshold
    }
}

const LAMBDA_SET: [f64; 6] = [-10.0, 0.0, 1.0, 9.869604401089358, 50.0, 200.0];

fn wronskian_free() -> Check {
    let mut max = 0.0f64;
    for &a in &[0.5, 1.0, 2.0] {
        let mut lam = -10.0;
        while lam <= 400.0 {
            let m = transfer::monodromy_free(lam, a).unwrap();
            max = max.max((m.det() - 1.0).abs());
            lam += 0.5;
        }
    }
    Check { name: "Wronskian det M = 1 (free, closed form)", max_residual: max, threshold: 1e-12 }
}

fn wronskian_numeric() -> Check {
    let p = Potential::cosine(1.0);
    let mut max = 0.0f64;
    for &lam in &LAMBDA_SET {
        let m = transfer::monodromy_numeric(&p, lam, 1.0, transfer::DEFAULT_STEPS).unwrap();
        max = max.max((m.det() - 1.0).abs());
    }
    Check { name: "Wronskian det M = 1 (cosine, integrated)", max_residual: max, threshold: 1e-10 }
}

fn monodromy_symmetry() -> Check {
    let p = Potential::cosine(1.0);
    let mut max = 0.0f64;
    for &lam in &LAMBDA_SET {
        let m = transfer::monodromy_numeric(&p, lam, 1.0, transfer::DEFAULT_STEPS).unwrap();
        max = max.max(m.symmetry_defect().abs());
    }
    Check { name: "monodromy symmetry c(1) = s'(1) (cosine)", max_residual: max, threshold: 1e-8 }
}

fn numeric_vs_closed_form() -> Check {
    let zero = Potential::zero();
    let mut max = 0.0f64;
    for &a in &[0.5, 1.0, 2.0] {
        for &lam in &LAMBDA_SET {
            let num = transfer::monodromy_numeric(&zero, lam, a, transfer::DEFAULT_STEPS).unwrap();
            let exact = transfer::monodromy_free(lam, a).unwrap();
            for (g, e) in [
                (num.c1, exact.c1),
                (num.s1, exact.s1),
                (num.cp1, exact.cp1),
                (num.sp1, exact.sp1),
            ] {
                max = max.max((g - e).abs());
            }
        }
    }
    Check { name: "integrated monodromy matches closed form", max_residual: max, threshold: 1e-8 }
}

fn d1_d0_identity() -> Check {
    let mut max = 0.0f64;
    for params in [
        Params::graphene(),
        Params::new(1.0, 0.5, 0.0).unwrap(),
        Params::new(2.0, 1.0, 1.0).unwrap(),
    ] {
        for i in 0..=4000 {
            let lam = -20.0 + 420.0 * i as f64 / 4000.0;
            let m = transfer::monodromy_free(lam, params.a).unwrap();
            let d = dispersion::d_values(&m, &params);
            let t = lam / params.a;
            max = max.max((d.d1 * d.d1 - (1.0 - sqrt_sin_sqrt(t) * d.d0)).abs());
        }
    }
    Check { name: "free identity D₁² = 1 - √t·sin√t·D₀", max_residual: max, threshold: 1e-11 }
}

fn half_trace_identity() -> Check {
    let p = Potential::cosine(1.5);
    let params = Params::graphene();
    let mut max = 0.0f64;
    for &lam in &LAMBDA_SET {
        let m = transfer::monodromy_numeric(&p, lam, 1.0, transfer::DEFAULT_STEPS).unwrap();
        let d = dispersion::delta_from_dvalues(&dispersion::d_values(&m, &params), &params);
        max = max.max((d.delta - m.half_trace()).abs());
    }
    Check { name: "Δ = tr(M)/2 for rigid massless vertices", max_residual: max, threshold: 1e-10 }
}

fn s_product_identity() -> Check {
    let n = 301;
    let mut max = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let t1 = -PI + 2.0 * PI * i as f64 / (n - 1) as f64;
            let t2 = -PI + 2.0 * PI * j as f64 / (n - 1) as f64;
            let q = Quasimomentum::new(t1.clamp(-PI, PI), t2.clamp(-PI, PI)).unwrap();
            let product = dispersion::s_magnitude_squared(&q);
            let complex = dispersion::s_complex(&q).norm_sqr();
            max = max.max((product - complex).abs());
        }
    }
    Check { name: "|S|² product identity vs complex sum", max_residual: max, threshold: 1e-12 }
}

fn bloch_det_identity() -> Check {
    // det 𝕄 / (3ψ₂'(0))² = Δ² - |S|²/9 on a deterministic sample set
    let zero = Potential::zero();
    let mut max = 0.0f64;
    let mut state: u64 = 0x243F6A8885A308D3;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..300 {
        let params = Params::new(0.5 + 1.5 * next(), next(), 2.0 * next()).unwrap();
        let lam = -5.0 + 155.0 * next();
        let q = Quasimomentum::new(-PI + 2.0 * PI * next(), -PI + 2.0 * PI * next()).unwrap();
        let m = transfer::monodromy_free(lam, params.a).unwrap();
        let pb = transfer::psi_boundary(&m, &params);
        if !pb.valid {
            continue;
        }
        let bm = dispersion::bloch_matrix(&pb, &params, &q, lam).unwrap();
        let lhs = bm.det.re / (3.0 * pb.psi2p0).powi(2);
        let rhs = dispersion::dispersion_residual(&zero, &params, lam, &q).unwrap();
        max = max.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
    }
    Check { name: "Bloch det / (3ψ₂'(0))² = Δ² - |S|²/9", max_residual: max, threshold: 1e-10 }
}

fn oracle_compare() -> Check {
    let zero = Potential::zero();
    let params = Params::graphene();
    let third = 2.0 * PI / 3.0;
    let mut max = 0.0f64;
    for (t1, t2) in [(0.0, 0.0), (third, -third), (1.0, -1.0)] {
        let q = Quasimomentum::new(t1, t2).unwrap();
        match hexband_oracle::compare_dispersion(&zero, &params, &q, 200, 3) {
            Ok(d) => max = max.max(d),
            Err(_) => max = f64::INFINITY,
        }
    }
    // O(n⁻²) at n = 200
    Check { name: "finite-difference oracle at 3 sampled Θ", max_residual: max, threshold: 2e-2 }
}

/// Run every check; returns true when all pass.
pub fn run_suite() -> bool {
    let checks = [
        wronskian_free(),
        wronskian_numeric(),
        monodromy_symmetry(),
        numeric_vs_closed_form(),
        d1_d0_identity(),
        half_trace_identity(),
        s_product_identity(),
        bloch_det_identity(),
        oracle_compare(),
    ];
    println!("{:<4} {:<48} {:>12} {:>10}", "", "check", "residual", "limit");
    let mut all = true;
    for c in &checks {
        let status = if c.pass() { "PASS" } else { "FAIL" };
        all &= c.pass();
        println!(
            "{:<4} {:<48} {:>12.3e} {:>10.1e}",
            status, c.name, c.max_residual, c.threshold
        );
    }
    println!();
    println!("{}", if all { "all checks passed" } else { "FAILURES present" });
    all
}
