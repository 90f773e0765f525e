//! Sampled complex field on a uniform transverse grid.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::profile::IntensityProfile;

/// Geometry of a transverse sampling grid: `n` samples spanning `extent`
/// meters, carrying light of one `wavelength`.
///
/// Sample `i` sits at `x = (i - n/2) * spacing`, so the axis falls on a
/// sample and the grid covers `[-extent/2, extent/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    extent: f64,
    wavelength: f64,
}

impl GridSpec {
    pub fn new(n: usize, extent: f64, wavelength: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid {
                reason: format!("sample count {n} must be a power of two >= 2"),
            });
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidGrid {
                reason: format!("extent {extent} must be positive"),
            });
        }
        if !(wavelength.is_finite() && wavelength > 0.0 && wavelength < extent) {
            return Err(Error::InvalidGrid {
                reason: format!("wavelength {wavelength} must be positive and below the extent"),
            });
        }
        Ok(Self {
            n,
            extent,
            wavelength,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.n as f64
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Position of sample `i`.
    pub fn position(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.spacing()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.position(i)).collect()
    }

    /// Spatial frequency (cycles per meter) of FFT bin `j`, wrapped to the
    /// signed Nyquist band.
    pub fn frequency(&self, j: usize) -> f64 {
        let n = self.n as f64;
        let f = if j <= self.n / 2 {
            j as f64
        } else {
            j as f64 - n
        };
        f / self.extent
    }

    pub(crate) fn matches(&self, other: &GridSpec) -> bool {
        self.n == other.n
            && (self.extent - other.extent).abs() <= 1e-12 * self.extent.abs()
    }
}

/// Complex scalar field sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    spec: GridSpec,
    samples: Vec<Complex64>,
}

impl FieldGrid {
    pub fn from_samples(spec: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != spec.n() {
            return Err(Error::GeometryMismatch {
                reason: format!(
                    "{} samples on a grid of {} points",
                    samples.len(),
                    spec.n()
                ),
            });
        }
        for s in &samples {
            if !s.re.is_finite() || !s.im.is_finite() {
                return Err(Error::NonFinite {
                    what: "field sample",
                    value: if s.re.is_finite() { s.im } else { s.re },
                });
            }
        }
        Ok(Self { spec, samples })
    }

    /// Uniform plane-wave illumination of the given amplitude.
    pub fn uniform(spec: GridSpec, amplitude: Complex64) -> Result<Self> {
        Self::from_samples(spec, vec![amplitude; spec.n()])
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    /// |field|^2 sampled on the grid positions.
    pub fn intensity(&self) -> IntensityProfile {
        let values = self.samples.iter().map(|s| s.norm_sqr()).collect();
        IntensityProfile::new(self.spec.positions(), values)
            .expect("a finite field always yields a valid profile")
    }

    /// Integral of |field|^2 over the grid.
    pub fn total_power(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.spec.spacing()
    }
}

/// |field|^2 as a standalone operation.
pub fn intensity(field: &FieldGrid) -> IntensityProfile {
    field.intensity()
}

/// Integral of |field|^2 as a standalone operation.
pub fn total_power(field: &FieldGrid) -> f64 {
    field.total_power()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_centering_puts_the_axis_on_a_sample() {
        let spec = GridSpec::new(8, 8.0, 0.5).unwrap();
        assert_eq!(spec.position(4), 0.0);
        assert_eq!(spec.position(0), -4.0);
        assert_eq!(spec.spacing(), 1.0);
    }

    #[test]
    fn frequencies_wrap_above_nyquist() {
        let spec = GridSpec::new(8, 2.0, 0.5).unwrap();
        assert_eq!(spec.frequency(0), 0.0);
        assert_eq!(spec.frequency(1), 0.5);
        assert_eq!(spec.frequency(7), -0.5);
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(GridSpec::new(100, 1.0, 1e-6).is_err());
    }

    #[test]
    fn single_sample_intensity() {
        let spec = GridSpec::new(2, 1.0, 0.1).unwrap();
        let f = FieldGrid::from_samples(
            spec,
            vec![
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let i = f.intensity();
        assert!((i.values()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_field_power_is_amplitude_squared_times_extent() {
        let spec = GridSpec::new(64, 4.0, 0.1).unwrap();
        let f = FieldGrid::uniform(spec, Complex64::new(0.5, 0.0)).unwrap();
        assert!((f.total_power() - 1.0).abs() < 1e-12);
    }
}
