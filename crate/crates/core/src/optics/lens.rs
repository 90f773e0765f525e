//! Ideal thin lens as a quadratic phase factor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::grid::FieldGrid;

/// Converging thin lens of positive focal length. No aperture: truncation, if
/// wanted, is a separate [`TransmissionMask`](crate::optics::TransmissionMask).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensSpec {
    focal_length: f64,
}

impl LensSpec {
    pub fn new(focal_length: f64) -> Result<Self> {
        if !(focal_length.is_finite() && focal_length > 0.0) {
            return Err(Error::InvalidLens { focal_length });
        }
        Ok(Self { focal_length })
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }
}

/// Multiply each sample by exp(-i·k·x²/(2f)). Pure phase, so power is
/// untouched.
pub fn apply_thin_lens(field: &FieldGrid, lens: &LensSpec) -> Result<FieldGrid> {
    let spec = *field.spec();
    let k = spec.wavenumber();
    let half_inv_f = 0.5 / lens.focal_length;
    let samples = field
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let x = spec.position(i);
            s * Complex64::from_polar(1.0, -k * x * x * half_inv_f)
        })
        .collect();
    FieldGrid::from_samples(spec, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::grid::GridSpec;

    #[test]
    fn non_positive_focal_length_rejected() {
        assert!(LensSpec::new(0.0).is_err());
        assert!(LensSpec::new(-0.5).is_err());
        assert!(LensSpec::new(f64::NAN).is_err());
    }

    #[test]
    fn power_is_conserved() {
        let spec = GridSpec::new(2048, 10e-3, 650e-9).unwrap();
        let samples = (0..spec.n())
            .map(|i| {
                let x = spec.position(i);
                Complex64::new((-(x / 1e-3).powi(2)).exp(), 0.1)
            })
            .collect();
        let field = FieldGrid::from_samples(spec, samples).unwrap();
        let lensed = apply_thin_lens(&field, &LensSpec::new(0.2).unwrap()).unwrap();
        let drift = (lensed.total_power() - field.total_power()).abs() / field.total_power();
        assert!(drift < 1e-12);
    }

    #[test]
    fn center_sample_is_untouched() {
        let spec = GridSpec::new(64, 1e-3, 650e-9).unwrap();
        let field = FieldGrid::uniform(spec, Complex64::new(0.3, 0.7)).unwrap();
        let lensed = apply_thin_lens(&field, &LensSpec::new(0.1).unwrap()).unwrap();
        let center = spec.n() / 2;
        assert_eq!(lensed.samples()[center], field.samples()[center]);
    }

    #[test]
    fn phase_profile_matches_the_quadratic() {
        let spec = GridSpec::new(256, 2e-4, 650e-9).unwrap();
        let field = FieldGrid::uniform(spec, Complex64::new(1.0, 0.0)).unwrap();
        let f = 0.25;
        let lensed = apply_thin_lens(&field, &LensSpec::new(f).unwrap()).unwrap();
        for (i, s) in lensed.samples().iter().enumerate() {
            let x = spec.position(i);
            let expected = Complex64::from_polar(1.0, -spec.wavenumber() * x * x / (2.0 * f));
            assert!((s - expected).norm() < 1e-12);
        }
    }
}
