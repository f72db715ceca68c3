use std::f64::consts::PI;

/// Largest moment order accepted by [`gaussian_moment`].
pub const MAX_MOMENT: usize = 40;

/// `∫ x^m e^{-x²} dx` over the real line: zero for odd `m`, `Γ((m+1)/2)` for even `m`.
///
/// # Panics
/// If `m > MAX_MOMENT`.
pub fn gaussian_moment(m: usize) -> f64 {
    assert!(m <= MAX_MOMENT, "gaussian_moment supports m <= {MAX_MOMENT}, got {m}");
    if m % 2 == 1 {
        return 0.0;
    }
    (2..=m).step_by(2).fold(PI.sqrt(), |acc, k| acc * (k as f64 - 1.0) / 2.0)
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
