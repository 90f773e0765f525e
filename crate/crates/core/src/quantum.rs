//! Two-path amplitude model with a which-way marker degree of freedom.
//!
//! A particle reaching position `x` on a screen carries one amplitude per
//! slit, `a` and `b`. If each slit also tags an internal marker state
//! (`v_u` for the upper slit, `v_l` for the lower), the screen intensity is
//!
//! ```text
//! I(x) = |a|^2 + |b|^2 + 2 Re( gamma * conj(a) * b ),    gamma = <v_u|v_l>
//! ```
//!
//! so the marker overlap `gamma` directly scales the interference cross
//! term: orthogonal markers give an incoherent sum, identical markers give
//! the full coherent pattern, and the phase of `gamma` slides the fringes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profile::IntensityProfile;

/// Accepted deviation of an input marker state's norm from 1. States inside
/// the tolerance are renormalized, states outside are rejected.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Slack on the duality bound V^2 + D^2 <= 1 to absorb rounding.
pub const DUALITY_SLACK: f64 = 1e-9;

/// Internal state tagged onto a path by a which-way marker.
///
/// Stored unit-normalized; the constructor renormalizes inputs whose norm is
/// within [`NORM_TOLERANCE`] of 1 and rejects anything farther out.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerState {
    components: Vec<Complex64>,
}

impl MarkerState {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyState);
        }
        for c in &components {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite {
                    what: "marker state component",
                    value: if c.re.is_finite() { c.im } else { c.re },
                });
            }
        }
        let norm = components.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOLERANCE,
            });
        }
        let components = components.into_iter().map(|c| c / norm).collect();
        Ok(Self { components })
    }

    /// Basis vector `|index>` in `dim` dimensions.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut components = vec![Complex64::new(0.0, 0.0); dim];
        components[index] = Complex64::new(1.0, 0.0);
        Self::new(components)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }
}

/// Inner product `<v_u|v_l>` between two marker states.
///
/// Its modulus sets the surviving fringe contrast, its phase the fringe
/// position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerOverlap {
    gamma: Complex64,
}

impl MarkerOverlap {
    /// Tolerance on |gamma| <= 1.
    pub const MAGNITUDE_SLACK: f64 = 1e-12;

    pub fn new(gamma: Complex64) -> Result<Self> {
        if !gamma.re.is_finite() || !gamma.im.is_finite() {
            return Err(Error::NonFinite {
                what: "marker overlap",
                value: if gamma.re.is_finite() {
                    gamma.im
                } else {
                    gamma.re
                },
            });
        }
        if gamma.norm() > 1.0 + Self::MAGNITUDE_SLACK {
            return Err(Error::OverlapOutOfRange {
                magnitude: gamma.norm(),
            });
        }
        Ok(Self { gamma })
    }

    pub fn from_polar(magnitude: f64, phase: f64) -> Result<Self> {
        if !magnitude.is_finite() || !phase.is_finite() {
            return Err(Error::NonFinite {
                what: "marker overlap",
                value: if magnitude.is_finite() {
                    phase
                } else {
                    magnitude
                },
            });
        }
        if magnitude < 0.0 {
            return Err(Error::OutOfRange {
                what: "overlap magnitude",
                value: magnitude,
                range: "[0, 1]",
            });
        }
        Self::new(Complex64::from_polar(magnitude, phase))
    }

    /// Identical markers: no which-way information, full interference.
    pub fn identical() -> Self {
        Self {
            gamma: Complex64::new(1.0, 0.0),
        }
    }

    /// Orthogonal markers: complete which-way tagging, no interference.
    pub fn orthogonal() -> Self {
        Self {
            gamma: Complex64::new(0.0, 0.0),
        }
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn magnitude(&self) -> f64 {
        self.gamma.norm().min(1.0)
    }
}

/// The two slit amplitudes contributing at one detection position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitAmplitudePair {
    pub a: Complex64,
    pub b: Complex64,
    pub x: f64,
}

impl SlitAmplitudePair {
    pub fn new(a: Complex64, b: Complex64, x: f64) -> Result<Self> {
        for (what, v) in [
            ("amplitude a", a.re),
            ("amplitude a", a.im),
            ("amplitude b", b.re),
            ("amplitude b", b.im),
            ("position x", x),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite { what, value: v });
            }
        }
        Ok(Self { a, b, x })
    }
}

/// Visibility/distinguishability pair with its duality sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub visibility: f64,
    pub distinguishability: f64,
    pub duality_sum: f64,
}

/// `<v_u|v_l>` for two states of equal dimension.
pub fn marker_overlap(v_u: &MarkerState, v_l: &MarkerState) -> Result<MarkerOverlap> {
    if v_u.dim() != v_l.dim() {
        return Err(Error::DimensionMismatch {
            expected: v_u.dim(),
            got: v_l.dim(),
        });
    }
    let gamma: Complex64 = v_u
        .components
        .iter()
        .zip(&v_l.components)
        .map(|(u, l)| u.conj() * l)
        .sum();
    // Unit-norm inputs bound |gamma| by 1 up to rounding, which the
    // constructor's slack absorbs.
    MarkerOverlap::new(gamma)
}

/// Screen intensity with no marker present: the fully coherent two-slit sum.
pub fn intensity_no_marker(pair: &SlitAmplitudePair) -> f64 {
    let cross = 2.0 * (pair.a.conj() * pair.b).re;
    (pair.a.norm_sqr() + pair.b.norm_sqr() + cross).max(0.0)
}

/// Screen intensity with the interference term scaled by the marker overlap.
///
/// For `gamma = 0` the cross term vanishes exactly and the result is the
/// incoherent sum of the single-slit intensities; for `gamma = 1` it reduces
/// to [`intensity_no_marker`].
pub fn intensity_with_marker(pair: &SlitAmplitudePair, overlap: &MarkerOverlap) -> f64 {
    let cross = 2.0 * (overlap.gamma * pair.a.conj() * pair.b).re;
    (pair.a.norm_sqr() + pair.b.norm_sqr() + cross).max(0.0)
}

/// Fringe visibility (max - min) / (max + min) of a sampled profile.
pub fn visibility(profile: &IntensityProfile) -> Result<f64> {
    let max = profile.max_value();
    let min = profile.min_value();
    if max + min <= 0.0 {
        return Err(Error::ZeroProfile);
    }
    Ok((max - min) / (max + min))
}

/// Closed-form visibility 2AB|gamma| / (A^2 + B^2) for arm magnitudes A, B.
pub fn analytic_visibility(mag_a: f64, mag_b: f64, overlap: &MarkerOverlap) -> Result<f64> {
    for (what, v) in [("arm magnitude A", mag_a), ("arm magnitude B", mag_b)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::OutOfRange {
                what,
                value: v,
                range: "[0, inf)",
            });
        }
    }
    let denom = mag_a * mag_a + mag_b * mag_b;
    if denom == 0.0 {
        return Err(Error::OutOfRange {
            what: "arm magnitudes",
            value: 0.0,
            range: "at least one arm non-zero",
        });
    }
    Ok((2.0 * mag_a * mag_b * overlap.magnitude() / denom).min(1.0))
}

/// Which-way distinguishability sqrt(1 - |gamma|^2).
pub fn distinguishability(overlap: &MarkerOverlap) -> f64 {
    let m = overlap.magnitude();
    (1.0 - m * m).max(0.0).sqrt()
}

/// Bundle a visibility and distinguishability, enforcing V^2 + D^2 <= 1.
pub fn duality_report(visibility: f64, distinguishability: f64) -> Result<DualityReport> {
    for (what, v) in [
        ("visibility", visibility),
        ("distinguishability", distinguishability),
    ] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                what,
                value: v,
                range: "[0, 1]",
            });
        }
    }
    let duality_sum = visibility * visibility + distinguishability * distinguishability;
    if duality_sum > 1.0 + DUALITY_SLACK {
        return Err(Error::DualityExceeded { sum: duality_sum });
    }
    Ok(DualityReport {
        visibility,
        distinguishability,
        duality_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equal_arms_no_marker_interfere_fully() {
        let pair = SlitAmplitudePair::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), 0.0)
            .unwrap();
        assert!((intensity_no_marker(&pair) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn opposite_arms_cancel() {
        let pair = SlitAmplitudePair::new(c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0), 0.0)
            .unwrap();
        assert!(intensity_no_marker(&pair).abs() < 1e-12);
    }

    #[test]
    fn half_overlap_halves_the_cross_term() {
        // Joint-state check for the same numbers lives in the Born-rule
        // property test; here the closed form only.
        let pair = SlitAmplitudePair::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), 0.0)
            .unwrap();
        let overlap = MarkerOverlap::from_polar(0.5, 0.0).unwrap();
        assert!((intensity_with_marker(&pair, &overlap) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_markers_give_incoherent_sum() {
        let pair = SlitAmplitudePair::new(c(0.3, 0.4), c(-0.2, 0.7), 1.0).unwrap();
        let expected = pair.a.norm_sqr() + pair.b.norm_sqr();
        assert_eq!(
            intensity_with_marker(&pair, &MarkerOverlap::orthogonal()),
            expected
        );
    }

    #[test]
    fn overlap_of_orthogonal_basis_states_is_zero() {
        let u = MarkerState::basis(2, 0).unwrap();
        let l = MarkerState::basis(2, 1).unwrap();
        assert_eq!(marker_overlap(&u, &l).unwrap().gamma(), c(0.0, 0.0));
    }

    #[test]
    fn overlap_is_conjugate_linear_in_the_first_slot() {
        let u = MarkerState::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let l = MarkerState::new(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let g = marker_overlap(&u, &l).unwrap().gamma();
        assert!((g - c(0.0, 0.6)).norm() < 1e-12);
    }

    #[test]
    fn slightly_off_norm_states_are_renormalized() {
        let s = MarkerState::new(vec![c(1.0 + 4e-10, 0.0)]).unwrap();
        let norm: f64 = s.components().iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn badly_normalized_state_is_rejected() {
        let err = MarkerState::new(vec![c(0.9, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let u = MarkerState::basis(2, 0).unwrap();
        let l = MarkerState::basis(3, 0).unwrap();
        assert!(matches!(
            marker_overlap(&u, &l),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn analytic_visibility_unbalanced_arms() {
        let v = analytic_visibility(1.0, 0.5, &MarkerOverlap::identical()).unwrap();
        assert!((v - 0.8).abs() < 1e-12);
    }

    #[test]
    fn analytic_visibility_needs_a_non_zero_arm() {
        assert!(analytic_visibility(0.0, 0.0, &MarkerOverlap::identical()).is_err());
    }

    #[test]
    fn distinguishability_complements_overlap() {
        let overlap = MarkerOverlap::from_polar(0.6, 0.0).unwrap();
        assert!((distinguishability(&overlap) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn duality_report_on_a_3_4_5_pair() {
        let r = duality_report(0.6, 0.8).unwrap();
        assert!((r.duality_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duality_report_rejects_out_of_range_and_excess() {
        assert!(matches!(
            duality_report(1.5, 0.0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            duality_report(0.9, 0.9),
            Err(Error::DualityExceeded { .. })
        ));
    }

    #[test]
    fn overlap_magnitude_above_one_is_rejected() {
        assert!(MarkerOverlap::new(c(1.1, 0.0)).is_err());
        assert!(MarkerOverlap::from_polar(1.0 + 1e-13, 0.0).is_ok());
    }
}
