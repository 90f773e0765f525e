//! Apparatus geometry and defaults.

use crate::error::{Error, Result};
use crate::optics::{GridSpec, LensSpec};
use crate::quantum::MarkerOverlap;

/// Complete description of the bench: slits, wire grid, lens, detector
/// windows, marker overlap, and the sampling grid everything lives on.
///
/// Three derived quantities may be left on automatic:
/// `dist_lens_to_image = None` solves the thin-lens equation for the image
/// plane, `wire_width = None` uses a tenth of the fringe period, and
/// `detector_halfwidth = None` uses 0.4 × magnification × slit separation.
#[derive(Debug, Clone, PartialEq)]
pub struct ApparatusConfig {
    pub wavelength: f64,
    pub slit_separation: f64,
    pub slit_width: f64,
    pub dist_slit_to_wires: f64,
    pub dist_wires_to_lens: f64,
    pub focal_length: f64,
    pub dist_lens_to_image: Option<f64>,
    pub wire_count: usize,
    pub wire_width: Option<f64>,
    pub detector_halfwidth: Option<f64>,
    pub marker_gamma: MarkerOverlap,
    pub grid_n: usize,
    pub grid_extent: f64,
}

/// Relative slack allowed between an explicit image distance and the one the
/// lens equation demands.
pub const IMAGING_TOLERANCE: f64 = 1e-6;

impl Default for ApparatusConfig {
    /// Desk-scale red-laser bench: 2.6 mm fringes at the wire plane, slits
    /// imaged at magnification 5/6 onto well-separated detector windows.
    fn default() -> Self {
        Self {
            wavelength: 650e-9,
            slit_separation: 250e-6,
            slit_width: 40e-6,
            dist_slit_to_wires: 1.0,
            dist_wires_to_lens: 0.1,
            focal_length: 0.5,
            dist_lens_to_image: None,
            wire_count: 6,
            wire_width: None,
            detector_halfwidth: None,
            marker_gamma: MarkerOverlap::orthogonal(),
            grid_n: 1 << 16,
            grid_extent: 0.24,
        }
    }
}

impl ApparatusConfig {
    pub fn validate(&self) -> Result<()> {
        let lengths: [(&'static str, f64); 6] = [
            ("wavelength", self.wavelength),
            ("slit_separation", self.slit_separation),
            ("slit_width", self.slit_width),
            ("dist_slit_to_wires", self.dist_slit_to_wires),
            ("dist_wires_to_lens", self.dist_wires_to_lens),
            ("focal_length", self.focal_length),
        ];
        for (field, value) in lengths {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig {
                    field,
                    reason: format!("{value} is not a positive length"),
                });
            }
        }
        self.grid_spec()?;
        let z3 = self.image_distance()?;
        if !(z3.is_finite() && z3 > 0.0) {
            return Err(Error::InvalidConfig {
                field: "dist_lens_to_image",
                reason: format!("{z3} is not a positive length"),
            });
        }
        let lhs = 1.0 / self.object_distance() + 1.0 / z3;
        let rhs = 1.0 / self.focal_length;
        if (lhs - rhs).abs() > IMAGING_TOLERANCE * rhs {
            return Err(Error::InvalidConfig {
                field: "dist_lens_to_image",
                reason: format!(
                    "image plane at {z3} m breaks the lens equation \
                     (1/(z1+z2) + 1/z3 deviates {:.3e} relative); \
                     leave it on automatic to place it exactly",
                    (lhs - rhs).abs() / rhs
                ),
            });
        }
        let wire_width = self.wire_width_value();
        if !(wire_width.is_finite() && wire_width > 0.0) {
            return Err(Error::InvalidConfig {
                field: "wire_width",
                reason: format!("{wire_width} is not a positive length"),
            });
        }
        if self.wire_count as f64 * wire_width >= self.grid_extent / 4.0 {
            return Err(Error::InvalidConfig {
                field: "wire_count",
                reason: format!(
                    "{} wires of {:.3e} m cover more than a quarter of the {:.3e} m extent",
                    self.wire_count, wire_width, self.grid_extent
                ),
            });
        }
        let halfwidth = self.detector_halfwidth_value()?;
        if !(halfwidth.is_finite() && halfwidth > 0.0) {
            return Err(Error::InvalidConfig {
                field: "detector_halfwidth",
                reason: format!("{halfwidth} is not a positive length"),
            });
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid_n, self.grid_extent, self.wavelength)
    }

    pub fn lens(&self) -> Result<LensSpec> {
        LensSpec::new(self.focal_length)
    }

    /// Slit-to-lens distance, the object distance of the imaging system.
    pub fn object_distance(&self) -> f64 {
        self.dist_slit_to_wires + self.dist_wires_to_lens
    }

    /// Lens-to-image distance: the explicit value if set, otherwise the
    /// thin-lens solution 1/z3 = 1/f - 1/(z1+z2).
    pub fn image_distance(&self) -> Result<f64> {
        if let Some(z3) = self.dist_lens_to_image {
            return Ok(z3);
        }
        let inv = 1.0 / self.focal_length - 1.0 / self.object_distance();
        if inv <= 0.0 {
            return Err(Error::InvalidConfig {
                field: "focal_length",
                reason: format!(
                    "object distance {} m at or inside the focal length {} m forms no real image",
                    self.object_distance(),
                    self.focal_length
                ),
            });
        }
        Ok(1.0 / inv)
    }

    pub fn magnification(&self) -> Result<f64> {
        Ok(self.image_distance()? / self.object_distance())
    }

    /// Fringe period of the two-slit pattern at the wire plane.
    pub fn fringe_period(&self) -> f64 {
        self.wavelength * self.dist_slit_to_wires / self.slit_separation
    }

    pub fn wire_width_value(&self) -> f64 {
        self.wire_width.unwrap_or(self.fringe_period() / 10.0)
    }

    pub fn detector_halfwidth_value(&self) -> Result<f64> {
        match self.detector_halfwidth {
            Some(h) => Ok(h),
            None => Ok(0.4 * self.magnification()? * self.slit_separation),
        }
    }
}
