//! Small least-squares fits against a cosine regressor.

/// Result of fitting `y ≈ offset + amplitude·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub offset: f64,
    pub amplitude: f64,
    /// Largest absolute residual over the data.
    pub max_residual: f64,
}

/// Fits `y ≈ amplitude·x` (no offset).
pub fn fit_proportional(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len(), "fit inputs differ in length");
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let amplitude = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    LinearFit {
        offset: 0.0,
        amplitude,
        max_residual: max_residual(x, y, 0.0, amplitude),
    }
}

/// Fits `y ≈ offset + amplitude·x`.
pub fn fit_affine(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len(), "fit inputs differ in length");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let amplitude = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let offset = my - amplitude * mx;
    LinearFit {
        offset,
        amplitude,
        max_residual: max_residual(x, y, offset, amplitude),
    }
}

fn max_residual(x: &[f64], y: &[f64], offset: f64, amplitude: f64) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (b - offset - amplitude * a).abs())
        .fold(0.0, f64::max)
}

/// `n` evenly spaced points on `[start, stop)`.
pub fn grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| start + (stop - start) * i as f64 / n as f64)
        .collect()
}
