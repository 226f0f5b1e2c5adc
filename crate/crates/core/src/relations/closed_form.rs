//! Closed-form values of the entanglement triality on the two worked
//! families, used to cross-check the full pipeline.

/// lhs on the two-path pure family: ¼ + p(1-p)(c_u - 1)(c_d - 1).
pub fn example1_lhs(p: f64, c_u: f64, c_d: f64) -> f64 {
    0.25 + p * (1.0 - p) * (c_u - 1.0) * (c_d - 1.0)
}

/// rhs on the two-path pure family: ¼ + p(1-p)(1 - c_d).
pub fn example1_rhs(p: f64, c_d: f64) -> f64 {
    0.25 + p * (1.0 - p) * (1.0 - c_d)
}

/// lhs on the Werner family for p ≥ 1/3 (entangled branch), overlap
/// x = |⟨d₁|d₂⟩|: 5/16 - x²/4 + (9p² - 6p)/16.
pub fn werner_lhs_entangled(p: f64, x: f64) -> f64 {
    5.0 / 16.0 - x * x / 4.0 + (9.0 * p * p - 6.0 * p) / 16.0
}

/// lhs on the Werner family for p < 1/3, where the concurrence vanishes:
/// ¼ - x²/4.
pub fn werner_lhs_separable(x: f64) -> f64 {
    0.25 - x * x / 4.0
}

/// rhs on the Werner family: 5/8 - p²(1 + 2x²)/8.
pub fn werner_rhs(p: f64, x: f64) -> f64 {
    5.0 / 8.0 - p * p * (1.0 + 2.0 * x * x) / 8.0
}

/// V² of the three-path family after detectors with ⟨d₂|d₁⟩ = 1/3: 8pq/3⁶.
pub fn threepath_v2(p: f64, q: f64) -> f64 {
    8.0 * p * q / 729.0
}

/// X² of the same family: 4pq/3⁶.
pub fn threepath_x2(p: f64, q: f64) -> f64 {
    4.0 * p * q / 729.0
}
