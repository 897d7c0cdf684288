/// Least-squares line `y ≈ intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the residuals.
    pub residual: f64,
    pub points: usize,
}

impl LineFit {
    /// Fits a line; `None` with fewer than two distinct abscissae.
    pub fn fit(points: &[(f64, f64)]) -> Option<LineFit> {
        let n = points.len() as f64;
        if points.len() < 2 {
            return None;
        }
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        if sxx == 0.0 {
            return None;
        }
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss: f64 = points
            .iter()
            .map(|p| {
                let r = p.1 - intercept - slope * p.0;
                r * r
            })
            .sum();
        Some(LineFit { slope, intercept, residual: libm::sqrt(ss / n), points: points.len() })
    }

    /// Base of the fitted exponential when `y` is a logarithm.
    pub fn rate(&self) -> f64 {
        libm::exp(self.slope)
    }
}
