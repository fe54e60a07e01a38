/// Error statistics of repeated estimates of one true value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub trials: usize,
    /// `mean(est/true - 1)`
    pub rel_bias: f64,
    /// `sqrt(mean((est/true - 1)^2))`
    pub rel_rmse: f64,
    /// Pearson kurtosis `m4 / m2^2` of the relative errors; `None` below
    /// four trials or without spread.
    pub kurtosis: Option<f64>,
}

impl ErrorSummary {
    pub fn from_estimates(estimates: &[f64], truth: f64) -> Self {
        let errors: Vec<f64> = estimates.iter().map(|e| e / truth - 1.0).collect();
        Self::from_relative_errors(&errors)
    }

    pub fn from_relative_errors(errors: &[f64]) -> Self {
        let n = errors.len() as f64;
        let mean = errors.iter().sum::<f64>() / n;
        let mse = errors.iter().map(|e| e * e).sum::<f64>() / n;
        let m2 = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
        let m4 = errors.iter().map(|e| (e - mean).powi(4)).sum::<f64>() / n;
        let kurtosis = (errors.len() >= 4 && m2 > 0.0).then(|| m4 / (m2 * m2));
        Self {
            trials: errors.len(),
            rel_bias: mean,
            rel_rmse: mse.sqrt(),
            kurtosis,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial() {
        let s = ErrorSummary::from_estimates(&[90.0], 100.0);
        assert!((s.rel_rmse - 0.1).abs() < 1e-15);
        assert!((s.rel_bias + 0.1).abs() < 1e-15);
        assert_eq!(s.kurtosis, None);
    }

    #[test]
    fn moments() {
        // Errors -1, 1, -1, 1: m2 = 1, m4 = 1.
        let s = ErrorSummary::from_relative_errors(&[-1.0, 1.0, -1.0, 1.0]);
        assert_eq!(s.rel_bias, 0.0);
        assert_eq!(s.rel_rmse, 1.0);
        assert_eq!(s.kurtosis, Some(1.0));
        // Errors 0, 0, 0, 4: mean 1, m2 = 3, m4 = (1+1+1+81)/4 = 21.
        let s = ErrorSummary::from_relative_errors(&[0.0, 0.0, 0.0, 4.0]);
        assert!((s.kurtosis.unwrap() - 21.0 / 9.0).abs() < 1e-12);
        assert!(s.rel_rmse >= s.rel_bias.abs());
        assert_eq!(ErrorSummary::from_relative_errors(&[0.5; 6]).kurtosis, None);
    }
}
