//! Entire continuations of `cos(√t)` and `sin(√t)/√t`.
//!
//! Every closed-form quantity of the free operator is a polynomial in these
//! two functions of `t = λ/a`. Both are entire in `t`, so negative spectral
//! parameters are handled by the hyperbolic branch rather than by complex
//! arithmetic: `cos(√t) → cosh(√-t)` and `sin(√t)/√t → sinh(√-t)/√-t`.

/// Taylor series kicks in below this threshold on `t = μ²`, i.e. `|μ| < 1e-4`.
const SERIES_THRESHOLD: f64 = 1e-8;

/// `cos(√t)` for `t ≥ 0`, `cosh(√-t)` for `t < 0`.
pub fn cos_sqrt(t: f64) -> f64 {
    if t >= 0.0 {
        t.sqrt().cos()
    } else {
        (-t).sqrt().cosh()
    }
}

/// `sin(√t)/√t` for `t > 0`, `sinh(√-t)/√-t` for `t < 0`, `1` at `t = 0`.
///
/// Near `t = 0` the ratio is evaluated by a five-term Taylor series
/// `1 - t/6 + t²/120 - t³/5040 + t⁴/362880` so the `0/0` limit never forms.
pub fn sinc_sqrt(t: f64) -> f64 {
    if t.abs() < SERIES_THRESHOLD {
        1.0 + t * (-1.0 / 6.0
            + t * (1.0 / 120.0 + t * (-1.0 / 5040.0 + t * (1.0 / 362_880.0))))
    } else if t > 0.0 {
        let mu = t.sqrt();
        mu.sin() / mu
    } else {
        let nu = (-t).sqrt();
        nu.sinh() / nu
    }
}

/// `√t·sin(√t)` continued to `t < 0` as `-√-t·sinh(√-t)`.
///
/// Equal to `t · sinc_sqrt(t)` identically; kept as a named helper because it
/// is the factor appearing in `D₁² = 1 - √t·sin(√t)·D₀`.
pub fn sqrt_sin_sqrt(t: f64) -> f64 {
    t * sinc_sqrt(t)
}
