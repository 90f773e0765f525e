//! Amplitude transmission masks: slit apertures and wire grids.

use crate::error::{Error, Result};
use crate::optics::grid::{FieldGrid, GridSpec};

/// Real transmission factors in [0, 1] on a sampling grid. Purely
/// amplitude-modulating; phase is never touched.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionMask {
    n: usize,
    extent: f64,
    samples: Vec<f64>,
}

impl TransmissionMask {
    pub fn new(spec: &GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != spec.n() {
            return Err(Error::InvalidMask {
                reason: format!(
                    "{} samples on a grid of {} points",
                    samples.len(),
                    spec.n()
                ),
            });
        }
        for &t in &samples {
            if !t.is_finite() || !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidMask {
                    reason: format!("transmission {t} outside [0, 1]"),
                });
            }
        }
        Ok(Self {
            n: spec.n(),
            extent: spec.extent(),
            samples,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Fraction of the extent with unit transmission.
    pub fn open_fraction(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.n as f64
    }

    pub fn blocked_fraction(&self) -> f64 {
        1.0 - self.open_fraction()
    }

    fn matches(&self, spec: &GridSpec) -> bool {
        self.n == spec.n() && (self.extent - spec.extent()).abs() <= 1e-12 * self.extent.abs()
    }
}

/// Binary mask for `intervals` given as (center, width) pairs; `open_inside`
/// selects slit-style (transmit inside) or wire-style (block inside).
fn interval_mask(
    spec: &GridSpec,
    intervals: &[(f64, f64)],
    open_inside: bool,
) -> TransmissionMask {
    let inside = |x: f64| {
        intervals
            .iter()
            .any(|&(c, w)| (x - c).abs() <= 0.5 * w)
    };
    let samples = (0..spec.n())
        .map(|i| {
            let hit = inside(spec.position(i));
            if hit == open_inside {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    TransmissionMask::new(spec, samples).expect("binary samples are always valid")
}

/// Double-slit aperture: unit transmission inside two slits of `slit_width`
/// centered at +/- `separation`/2, zero elsewhere. Overlapping slits merge;
/// zero separation degenerates to a single slit.
pub fn make_double_slit(
    spec: &GridSpec,
    separation: f64,
    slit_width: f64,
) -> Result<TransmissionMask> {
    if !(separation.is_finite() && separation >= 0.0) {
        return Err(Error::OutOfRange {
            what: "slit separation",
            value: separation,
            range: "[0, extent)",
        });
    }
    if !(slit_width.is_finite() && slit_width > 0.0) {
        return Err(Error::OutOfRange {
            what: "slit width",
            value: slit_width,
            range: "(0, extent)",
        });
    }
    if separation + slit_width >= spec.extent() {
        return Err(Error::InvalidMask {
            reason: format!(
                "slits spanning {:.3e} m do not fit the extent {:.3e} m",
                separation + slit_width,
                spec.extent()
            ),
        });
    }
    let spacing = spec.spacing();
    if slit_width < 4.0 * spacing {
        let min_n = (4.0 * spec.extent() / slit_width).ceil() as usize;
        return Err(Error::UnderResolved {
            feature: "slit",
            width: slit_width,
            spacing,
            min_samples: 4,
            min_n: min_n.next_power_of_two(),
        });
    }
    let half = 0.5 * separation;
    Ok(interval_mask(
        spec,
        &[(half, slit_width), (-half, slit_width)],
        true,
    ))
}

/// Single slit of `width` centered at `center`; the per-branch aperture
/// behind [`make_double_slit`].
pub(crate) fn make_offset_slit(
    spec: &GridSpec,
    center: f64,
    width: f64,
) -> Result<TransmissionMask> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::OutOfRange {
            what: "slit width",
            value: width,
            range: "(0, extent)",
        });
    }
    if !center.is_finite() || center.abs() + 0.5 * width >= 0.5 * spec.extent() {
        return Err(Error::InvalidMask {
            reason: format!("slit at {center:.6e} m reaches outside the extent"),
        });
    }
    let spacing = spec.spacing();
    if width < 4.0 * spacing {
        let min_n = (4.0 * spec.extent() / width).ceil() as usize;
        return Err(Error::UnderResolved {
            feature: "slit",
            width,
            spacing,
            min_samples: 4,
            min_n: min_n.next_power_of_two(),
        });
    }
    Ok(interval_mask(spec, &[(center, width)], true))
}

/// Opaque wires of `wire_width` centered at `wire_centers`, transparent
/// elsewhere. Wires must be disjoint and lie inside the extent.
pub fn make_wire_grid(
    spec: &GridSpec,
    wire_centers: &[f64],
    wire_width: f64,
) -> Result<TransmissionMask> {
    if !(wire_width.is_finite() && wire_width > 0.0) {
        return Err(Error::OutOfRange {
            what: "wire width",
            value: wire_width,
            range: "(0, extent)",
        });
    }
    let spacing = spec.spacing();
    if !wire_centers.is_empty() && wire_width < 2.0 * spacing {
        let min_n = (2.0 * spec.extent() / wire_width).ceil() as usize;
        return Err(Error::UnderResolved {
            feature: "wire",
            width: wire_width,
            spacing,
            min_samples: 2,
            min_n: min_n.next_power_of_two(),
        });
    }
    let half_extent = 0.5 * spec.extent();
    for &c in wire_centers {
        if !c.is_finite() || c.abs() + 0.5 * wire_width > half_extent {
            return Err(Error::InvalidMask {
                reason: format!("wire at {c:.6e} m reaches outside the extent"),
            });
        }
    }
    let mut sorted: Vec<f64> = wire_centers.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite centers"));
    for pair in sorted.windows(2) {
        if pair[1] - pair[0] < wire_width {
            return Err(Error::WireOverlap {
                a: pair[0],
                b: pair[1],
            });
        }
    }
    let intervals: Vec<(f64, f64)> = sorted.iter().map(|&c| (c, wire_width)).collect();
    Ok(interval_mask(spec, &intervals, false))
}

/// Pointwise product of a field with a transmission mask.
pub fn apply_mask(field: &FieldGrid, mask: &TransmissionMask) -> Result<FieldGrid> {
    if !mask.matches(field.spec()) {
        return Err(Error::GeometryMismatch {
            reason: format!(
                "mask ({} samples over {:.3e} m) does not match field ({} samples over {:.3e} m)",
                mask.n,
                mask.extent,
                field.spec().n(),
                field.spec().extent()
            ),
        });
    }
    let samples = field
        .samples()
        .iter()
        .zip(&mask.samples)
        .map(|(&s, &t)| s * t)
        .collect();
    FieldGrid::from_samples(*field.spec(), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn spec(n: usize, extent: f64) -> GridSpec {
        GridSpec::new(n, extent, 650e-9).unwrap()
    }

    #[test]
    fn double_slit_open_fraction_close_to_two_widths() {
        let spec = spec(4096, 10e-3);
        let mask = make_double_slit(&spec, 1e-3, 200e-6).unwrap();
        let open = mask.open_fraction() * spec.extent();
        assert!((open - 400e-6).abs() <= spec.spacing());
    }

    #[test]
    fn double_slit_is_mirror_symmetric() {
        let spec = spec(1024, 10e-3);
        let mask = make_double_slit(&spec, 1e-3, 150e-6).unwrap();
        let s = mask.samples();
        for i in 1..spec.n() {
            assert_eq!(s[i], s[spec.n() - i], "asymmetry at sample {i}");
        }
    }

    #[test]
    fn zero_separation_degenerates_to_single_slit() {
        let spec = spec(4096, 10e-3);
        let mask = make_double_slit(&spec, 0.0, 200e-6).unwrap();
        let open = mask.open_fraction() * spec.extent();
        assert!((open - 200e-6).abs() <= spec.spacing());
        // contiguous run
        let s = mask.samples();
        let first = s.iter().position(|&t| t == 1.0).unwrap();
        let last = s.iter().rposition(|&t| t == 1.0).unwrap();
        assert!(s[first..=last].iter().all(|&t| t == 1.0));
    }

    #[test]
    fn under_resolved_slit_names_a_sufficient_n() {
        let spec = spec(256, 10e-3);
        let err = make_double_slit(&spec, 1e-3, 100e-6).unwrap_err();
        match err {
            Error::UnderResolved { min_n, .. } => {
                let fine = GridSpec::new(min_n, 10e-3, 650e-9).unwrap();
                assert!(make_double_slit(&fine, 1e-3, 100e-6).is_ok());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn wire_grid_blocked_fraction() {
        let spec = spec(1024, 10e-3);
        let centers = [-1.25e-3, -0.75e-3, -0.25e-3, 0.25e-3, 0.75e-3, 1.25e-3];
        let mask = make_wire_grid(&spec, &centers, 50e-6).unwrap();
        let blocked = mask.blocked_fraction();
        assert!((blocked - 0.03).abs() <= 6.0 * spec.spacing() / spec.extent());
    }

    #[test]
    fn empty_wire_list_is_fully_open() {
        let spec = spec(256, 10e-3);
        let mask = make_wire_grid(&spec, &[], 50e-6).unwrap();
        assert_eq!(mask.open_fraction(), 1.0);
    }

    #[test]
    fn overlapping_wires_rejected() {
        let spec = spec(1024, 10e-3);
        let err = make_wire_grid(&spec, &[0.0, 30e-6], 50e-6).unwrap_err();
        assert!(matches!(err, Error::WireOverlap { .. }));
    }

    #[test]
    fn wire_outside_extent_rejected() {
        let spec = spec(1024, 10e-3);
        assert!(make_wire_grid(&spec, &[5.0e-3], 50e-6).is_err());
    }

    #[test]
    fn half_open_mask_halves_the_power() {
        let spec = spec(512, 4.0e-3);
        let field = FieldGrid::uniform(spec, Complex64::new(1.0, 0.0)).unwrap();
        let half: Vec<f64> = (0..spec.n())
            .map(|i| if i < spec.n() / 2 { 1.0 } else { 0.0 })
            .collect();
        let mask = TransmissionMask::new(&spec, half).unwrap();
        let out = apply_mask(&field, &mask).unwrap();
        assert!((out.total_power() - 0.5 * field.total_power()).abs() < 1e-12);
    }

    #[test]
    fn mismatched_mask_rejected() {
        let a = spec(256, 10e-3);
        let b = spec(512, 10e-3);
        let field = FieldGrid::uniform(a, Complex64::new(1.0, 0.0)).unwrap();
        let mask = make_double_slit(&b, 1e-3, 200e-6).unwrap();
        assert!(matches!(
            apply_mask(&field, &mask),
            Err(Error::GeometryMismatch { .. })
        ));
    }
}
