//! Band-limited angular-spectrum propagation between parallel planes.
//!
//! A field sampled on `N` points over extent `L` is advanced a distance `z`
//! by multiplying its spatial-frequency components with
//!
//! ```text
//! H(u) = exp(i·z·sqrt(k^2 - (2*pi*u)^2))
//! ```
//!
//! Evanescent components (|2*pi*u| >= k) are dropped outright. Because the
//! sampled transfer function oscillates faster with growing `z`, frequencies
//! above
//!
//! ```text
//! u_limit(z) = 1 / (lambda * sqrt((2z/L)^2 + 1))
//! ```
//!
//! would alias across the grid's frequency step and are dropped as well.
//! Both cuts only remove power, so propagation never amplifies; for fields
//! whose spectrum lies well inside the surviving band it is unitary to
//! rounding error.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::optics::grid::{FieldGrid, GridSpec};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Positive-frequency bins that must survive the anti-alias truncation for a
/// propagation step to be meaningful at all.
const MIN_KEPT_BINS: f64 = 8.0;

/// Largest distance the grid supports before the anti-alias truncation leaves
/// fewer than [`MIN_KEPT_BINS`] propagating frequency samples. Solving
/// `u_limit(z) = MIN_KEPT_BINS / L` for `z` gives
///
/// ```text
/// z_max = (L/2) * sqrt((L / (MIN_KEPT_BINS * lambda))^2 - 1)
/// ```
pub fn max_safe_distance(spec: &GridSpec) -> f64 {
    let ratio = spec.extent() / (MIN_KEPT_BINS * spec.wavelength());
    if ratio <= 1.0 {
        return 0.0;
    }
    0.5 * spec.extent() * (ratio * ratio - 1.0).sqrt()
}

/// Advance `field` by `distance` along the optical axis.
///
/// `distance = 0` returns the field unchanged. Distances beyond
/// [`max_safe_distance`] are rejected rather than silently degraded.
pub fn propagate(field: &FieldGrid, distance: f64) -> Result<FieldGrid> {
    if !distance.is_finite() {
        return Err(Error::NonFinite {
            what: "propagation distance",
            value: distance,
        });
    }
    if distance < 0.0 {
        return Err(Error::NegativeDistance { distance });
    }
    if distance == 0.0 {
        return Ok(field.clone());
    }
    let spec = *field.spec();
    let max_safe = max_safe_distance(&spec);
    if distance > max_safe {
        return Err(Error::AliasingBound { distance, max_safe });
    }

    let k = spec.wavenumber();
    let u_limit = 1.0
        / (spec.wavelength() * (1.0 + (2.0 * distance / spec.extent()).powi(2)).sqrt());

    let mut buf = field.samples().to_vec();
    fft_forward(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let u = spec.frequency(j);
        let kt = 2.0 * PI * u;
        let kz_sq = k * k - kt * kt;
        if kz_sq <= 0.0 || u.abs() > u_limit {
            *c = Complex64::ZERO;
        } else {
            *c *= Complex64::from_polar(1.0, distance * kz_sq.sqrt());
        }
    }
    fft_inverse(&mut buf);
    let scale = 1.0 / spec.n() as f64;
    for c in &mut buf {
        *c *= scale;
    }
    FieldGrid::from_samples(spec, buf)
}
