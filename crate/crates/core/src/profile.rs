//! Sampled 1-D intensity profiles.

use crate::error::{Error, Result};

/// Relative tolerance on sample spacing uniformity.
const SPACING_TOLERANCE: f64 = 1e-9;

/// Negative values smaller than this fraction of the profile peak are
/// treated as rounding noise and clamped to zero.
const NEGATIVE_CLAMP: f64 = 1e-12;

/// Non-negative intensity samples on a uniform position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    positions: Vec<f64>,
    values: Vec<f64>,
    spacing: f64,
}

impl IntensityProfile {
    pub fn new(positions: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidProfile {
                reason: "no samples".into(),
            });
        }
        if positions.len() != values.len() {
            return Err(Error::InvalidProfile {
                reason: format!(
                    "{} positions but {} values",
                    positions.len(),
                    values.len()
                ),
            });
        }
        for &p in &positions {
            if !p.is_finite() {
                return Err(Error::NonFinite {
                    what: "profile position",
                    value: p,
                });
            }
        }
        let peak = values.iter().cloned().fold(0.0_f64, f64::max);
        for v in &mut values {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    what: "profile value",
                    value: *v,
                });
            }
            if *v < 0.0 {
                if *v >= -NEGATIVE_CLAMP * peak.max(1.0) {
                    *v = 0.0;
                } else {
                    return Err(Error::InvalidProfile {
                        reason: format!("negative intensity {v}"),
                    });
                }
            }
        }
        let spacing = if positions.len() == 1 {
            // A single sample carries no spacing information; use 1 so that
            // integrals reduce to the bare value.
            1.0
        } else {
            let spacing = positions[1] - positions[0];
            if spacing <= 0.0 {
                return Err(Error::InvalidProfile {
                    reason: "positions not strictly increasing".into(),
                });
            }
            for w in positions.windows(2) {
                let step = w[1] - w[0];
                if step <= 0.0 || (step - spacing).abs() > SPACING_TOLERANCE * spacing.abs() {
                    return Err(Error::InvalidProfile {
                        reason: format!(
                            "non-uniform spacing: {step} differs from {spacing}"
                        ),
                    });
                }
            }
            spacing
        };
        Ok(Self {
            positions,
            values,
            spacing,
        })
    }

    pub fn from_uniform(start: f64, spacing: f64, values: Vec<f64>) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidProfile {
                reason: format!("spacing {spacing} must be positive"),
            });
        }
        let positions = (0..values.len())
            .map(|i| start + i as f64 * spacing)
            .collect();
        Self::new(positions, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty profiles
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Riemann integral of the profile over its support.
    pub fn total_power(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spacing
    }

    /// Integral restricted to positions in `[lo, hi]` (inclusive).
    pub fn power_in(&self, lo: f64, hi: f64) -> f64 {
        self.positions
            .iter()
            .zip(&self.values)
            .filter(|(&x, _)| x >= lo && x <= hi)
            .map(|(_, &v)| v)
            .sum::<f64>()
            * self.spacing
    }

    /// Sub-profile of samples with positions in `[lo, hi]` (inclusive).
    pub fn window(&self, lo: f64, hi: f64) -> Result<Self> {
        let (positions, values): (Vec<f64>, Vec<f64>) = self
            .positions
            .iter()
            .zip(&self.values)
            .filter(|(&x, _)| x >= lo && x <= hi)
            .map(|(&x, &v)| (x, v))
            .unzip();
        Self::new(positions, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_construction_and_power() {
        let p = IntensityProfile::from_uniform(-1.0, 0.5, vec![1.0, 2.0, 3.0, 2.0, 1.0]).unwrap();
        assert_eq!(p.len(), 5);
        assert!((p.total_power() - 4.5).abs() < 1e-12);
        assert_eq!(p.max_value(), 3.0);
    }

    #[test]
    fn non_uniform_positions_rejected() {
        let r = IntensityProfile::new(vec![0.0, 1.0, 2.5], vec![1.0, 1.0, 1.0]);
        assert!(r.is_err());
    }

    #[test]
    fn tiny_negative_values_are_clamped_larger_rejected() {
        let ok = IntensityProfile::from_uniform(0.0, 1.0, vec![1.0, -1e-13]).unwrap();
        assert_eq!(ok.min_value(), 0.0);
        assert!(IntensityProfile::from_uniform(0.0, 1.0, vec![1.0, -1e-3]).is_err());
    }

    #[test]
    fn window_selects_inclusive_bounds() {
        let p = IntensityProfile::from_uniform(0.0, 1.0, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let w = p.window(1.0, 2.0).unwrap();
        assert_eq!(w.values(), &[2.0, 3.0]);
    }

    #[test]
    fn empty_profile_rejected() {
        assert!(IntensityProfile::new(vec![], vec![]).is_err());
    }
}
