use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_STEP: f64 = 1e-4;

/// Stencil estimate of `∂β ∂Q ln f` at `(Q, β) = (0, 0)`.
///
/// Central differences in `Q`. `β = 0` is a boundary, so the `β` derivative is
/// one-sided and Richardson-extrapolated over steps `h_beta` and `h_beta / 2`.
/// The `Q` difference is taken as the log of a ratio, which keeps it off the
/// branch cut of the complex logarithm.
pub fn mixed_fd<F>(f: F, h_q: f64, h_beta: f64) -> Result<Complex64>
where
    F: Fn(Complex64, Complex64) -> Result<Complex64>,
{
    if !(h_q > 0.0 && h_beta > 0.0) {
        return Err(Error::InvalidArgument("finite-difference steps must be positive".into()));
    }
    let slope_q = |beta: f64| -> Result<Complex64> {
        let b = Complex64::new(beta, 0.0);
        let plus = f(Complex64::new(h_q, 0.0), b)?;
        let minus = f(Complex64::new(-h_q, 0.0), b)?;
        if plus == Complex64::new(0.0, 0.0) || minus == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain(format!("wavefunction vanishes on the stencil at beta = {beta}")));
        }
        Ok((plus / minus).ln() / (2.0 * h_q))
    };
    let g0 = slope_q(0.0)?;
    let g_half = slope_q(0.5 * h_beta)?;
    let g_full = slope_q(h_beta)?;
    let coarse = (g_full - g0) / h_beta;
    let fine = (g_half - g0) / (0.5 * h_beta);
    Ok(fine * 2.0 - coarse)
}
