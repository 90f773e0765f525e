//! Two marker-tagged field branches and their combined intensity.

use crate::error::{Error, Result};
use crate::optics::grid::FieldGrid;
use crate::profile::IntensityProfile;
use crate::quantum::MarkerOverlap;

/// One field branch per slit, plus the overlap of the marker states riding on
/// them. The branches never interfere more strongly than the overlap allows.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedFieldPair {
    psi_u: FieldGrid,
    psi_l: FieldGrid,
    overlap: MarkerOverlap,
}

impl MarkedFieldPair {
    pub fn new(psi_u: FieldGrid, psi_l: FieldGrid, overlap: MarkerOverlap) -> Result<Self> {
        if psi_u.spec() != psi_l.spec() {
            return Err(Error::GeometryMismatch {
                reason: format!(
                    "branch grids differ: {} samples over {:.3e} m vs {} samples over {:.3e} m",
                    psi_u.spec().n(),
                    psi_u.spec().extent(),
                    psi_l.spec().n(),
                    psi_l.spec().extent()
                ),
            });
        }
        Ok(Self {
            psi_u,
            psi_l,
            overlap,
        })
    }

    pub fn psi_u(&self) -> &FieldGrid {
        &self.psi_u
    }

    pub fn psi_l(&self) -> &FieldGrid {
        &self.psi_l
    }

    pub fn overlap(&self) -> MarkerOverlap {
        self.overlap
    }
}

/// Pointwise I(x) = |psi_U|^2 + |psi_L|^2 + 2·Re(gamma·conj(psi_U)·psi_L).
///
/// With gamma = 0 the cross term vanishes identically and the result is the
/// plain sum of the branch intensities; with gamma = 1 it is |psi_U + psi_L|^2.
pub fn marked_intensity(pair: &MarkedFieldPair) -> IntensityProfile {
    let spec = pair.psi_u.spec();
    let gamma = pair.overlap.gamma();
    let values = pair
        .psi_u
        .samples()
        .iter()
        .zip(pair.psi_l.samples())
        .map(|(&u, &l)| {
            let cross = 2.0 * (gamma * u.conj() * l).re;
            (u.norm_sqr() + l.norm_sqr() + cross).max(0.0)
        })
        .collect();
    IntensityProfile::from_uniform(
        spec.position(0),
        spec.spacing(),
        values,
    )
    .expect("branch samples are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::grid::GridSpec;
    use num_complex::Complex64;

    fn branch(spec: GridSpec, seed: u64) -> FieldGrid {
        // deterministic pseudo-random samples, no RNG crate needed here
        let mut state = seed;
        let samples = (0..spec.n())
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let re = ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let im = ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                Complex64::new(re, im)
            })
            .collect();
        FieldGrid::from_samples(spec, samples).unwrap()
    }

    #[test]
    fn orthogonal_marker_gives_the_exact_incoherent_sum() {
        let spec = GridSpec::new(512, 4e-3, 650e-9).unwrap();
        let u = branch(spec, 7);
        let l = branch(spec, 13);
        let pair = MarkedFieldPair::new(u.clone(), l.clone(), MarkerOverlap::orthogonal()).unwrap();
        let marked = marked_intensity(&pair);
        let sum_u = u.intensity();
        let sum_l = l.intensity();
        for i in 0..spec.n() {
            assert_eq!(marked.values()[i], sum_u.values()[i] + sum_l.values()[i]);
        }
    }

    #[test]
    fn identical_marker_reproduces_the_coherent_sum() {
        let spec = GridSpec::new(512, 4e-3, 650e-9).unwrap();
        let u = branch(spec, 3);
        let l = branch(spec, 5);
        let coherent: Vec<f64> = u
            .samples()
            .iter()
            .zip(l.samples())
            .map(|(&a, &b)| (a + b).norm_sqr())
            .collect();
        let pair = MarkedFieldPair::new(u, l, MarkerOverlap::identical()).unwrap();
        let marked = marked_intensity(&pair);
        for i in 0..spec.n() {
            assert!((marked.values()[i] - coherent[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_overlap_phase_enters_the_cross_term() {
        let spec = GridSpec::new(2, 2e-6, 650e-9).unwrap();
        let u = FieldGrid::uniform(spec, Complex64::new(1.0, 0.0)).unwrap();
        let l = FieldGrid::uniform(spec, Complex64::new(0.0, 1.0)).unwrap();
        // gamma = -i rotates the cross term back onto the real axis
        let overlap = MarkerOverlap::new(Complex64::new(0.0, -1.0)).unwrap();
        let pair = MarkedFieldPair::new(u, l, overlap).unwrap();
        let marked = marked_intensity(&pair);
        for &v in marked.values() {
            assert!((v - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn half_overlap_interpolates() {
        let spec = GridSpec::new(4, 4e-6, 650e-9).unwrap();
        let u = FieldGrid::uniform(spec, Complex64::new(1.0, 0.0)).unwrap();
        let l = FieldGrid::uniform(spec, Complex64::new(1.0, 0.0)).unwrap();
        let overlap = MarkerOverlap::new(Complex64::new(0.5, 0.0)).unwrap();
        let pair = MarkedFieldPair::new(u, l, overlap).unwrap();
        for &v in marked_intensity(&pair).values() {
            assert!((v - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_branches_rejected() {
        let a = GridSpec::new(256, 4e-3, 650e-9).unwrap();
        let b = GridSpec::new(512, 4e-3, 650e-9).unwrap();
        let u = FieldGrid::uniform(a, Complex64::new(1.0, 0.0)).unwrap();
        let l = FieldGrid::uniform(b, Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            MarkedFieldPair::new(u, l, MarkerOverlap::identical()),
            Err(Error::GeometryMismatch { .. })
        ));
    }
}
