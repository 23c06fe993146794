//! Numerical ground truth for the symbolic derivative.

use crate::error::TermError;
use crate::smooth::SmoothMap;

/// Central-difference directional derivative `(F(p + h v) - F(p - h v)) / 2h`.
pub fn fd_oracle(f: &SmoothMap, p: &[f64], v: &[f64], h: f64) -> Result<Vec<f64>, TermError> {
    let n = f.dom().dim();
    if p.len() != n || v.len() != n {
        return Err(TermError::DimensionMismatch {
            expected: n,
            got: if p.len() != n { p.len() } else { v.len() },
        });
    }
    let plus: Vec<f64> = p.iter().zip(v).map(|(a, b)| a + h * b).collect();
    let minus: Vec<f64> = p.iter().zip(v).map(|(a, b)| a - h * b).collect();
    let fp = f.eval(&plus)?;
    let fm = f.eval(&minus)?;
    Ok(fp
        .iter()
        .zip(&fm)
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect())
}
