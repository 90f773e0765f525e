//! Scenario execution: slits → wire grid → lens → slit-image detectors.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiment::config::ApparatusConfig;
use crate::experiment::scenario::{
    AfsharReport, MarkerSetting, Scenario, ScenarioKey, ScenarioResult, SlitSelection, SweepRow,
    WireSetting,
};
use crate::optics::{
    apply_mask, apply_thin_lens, make_double_slit, make_offset_slit, make_wire_grid,
    marked_intensity, propagate, FieldGrid, GridSpec, MarkedFieldPair, TransmissionMask,
};
use crate::profile::IntensityProfile;
use crate::quantum::{
    analytic_visibility, distinguishability, duality_report, visibility, MarkerOverlap,
};

const PLANE_Z1: &str = "slits to wire plane";
const PLANE_Z2: &str = "wire plane to lens";
const PLANE_Z3: &str = "lens to image plane";

/// Image-plane interval that counts as one detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorWindow {
    pub center: f64,
    pub halfwidth: f64,
}

impl DetectorWindow {
    pub fn lo(&self) -> f64 {
        self.center - self.halfwidth
    }

    pub fn hi(&self) -> f64 {
        self.center + self.halfwidth
    }
}

/// Detector windows for the two slit images. Slit A sits at +d/2 and the lens
/// inverts, so window A is centered at −m·d/2 and window B at +m·d/2, with
/// magnification m = z3/(z1+z2).
pub fn detector_windows(config: &ApparatusConfig) -> Result<(DetectorWindow, DetectorWindow)> {
    let m = config.magnification()?;
    let halfwidth = config.detector_halfwidth_value()?;
    let separation = m * config.slit_separation;
    if separation <= 2.0 * halfwidth {
        return Err(Error::WindowsOverlap {
            separation,
            halfwidth,
        });
    }
    let window_a = DetectorWindow {
        center: -0.5 * separation,
        halfwidth,
    };
    let window_b = DetectorWindow {
        center: 0.5 * separation,
        halfwidth,
    };
    Ok((window_a, window_b))
}

/// The `count` innermost minima of the coherent two-slit pattern at the wire
/// plane, refined by quadratic interpolation through each sampled minimum and
/// returned in ascending order. Even counts come out as symmetric ± pairs.
///
/// The search stays inside the central diffraction lobe (|x| below the first
/// envelope zero λ·z1/w), where fringe minima are unambiguous.
pub fn dark_fringe_positions(config: &ApparatusConfig, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let spec = config.grid_spec()?;
    let mask = make_double_slit(&spec, config.slit_separation, config.slit_width)?;
    let field = apply_mask(&incident_field(spec)?, &mask)?;
    let at_wires = hop(&field, config.dist_slit_to_wires, PLANE_Z1)?;
    let profile = at_wires.intensity();

    let lobe =
        0.98 * config.wavelength * config.dist_slit_to_wires / config.slit_width;
    let positions = profile.positions();
    let values = profile.values();
    let spacing = profile.spacing();
    let mut negative: Vec<f64> = Vec::new();
    let mut positive: Vec<f64> = Vec::new();
    for i in 1..values.len() - 1 {
        let x = positions[i];
        if x.abs() > lobe {
            continue;
        }
        if values[i] < values[i - 1] && values[i] <= values[i + 1] {
            let curvature = values[i - 1] - 2.0 * values[i] + values[i + 1];
            let refined = if curvature > 0.0 {
                x + 0.5 * spacing * (values[i - 1] - values[i + 1]) / curvature
            } else {
                x
            };
            if refined < 0.0 {
                negative.push(refined);
            } else {
                positive.push(refined);
            }
        }
    }
    negative.sort_by(|a, b| b.partial_cmp(a).expect("finite positions"));
    positive.sort_by(|a, b| a.partial_cmp(b).expect("finite positions"));

    let pairs = count / 2;
    let extra = count % 2;
    if negative.len() < pairs || positive.len() < pairs + extra {
        return Err(Error::TooFewMinima {
            found: negative.len() + positive.len(),
            requested: count,
        });
    }
    let mut out: Vec<f64> = negative[..pairs]
        .iter()
        .chain(positive[..pairs + extra].iter())
        .copied()
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite positions"));
    Ok(out)
}

/// Intensity recorded at each plane of a scenario run. The wire-plane profile
/// is taken before the wires so it shows the pattern the wires are placed in.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneProfiles {
    pub slit: IntensityProfile,
    pub wires: IntensityProfile,
    pub lens: IntensityProfile,
    pub image: IntensityProfile,
}

pub fn run_scenario(config: &ApparatusConfig, scenario: &Scenario) -> Result<ScenarioResult> {
    run_scenario_with_planes(config, scenario).map(|(result, _)| result)
}

pub fn run_scenario_with_planes(
    config: &ApparatusConfig,
    scenario: &Scenario,
) -> Result<(ScenarioResult, PlaneProfiles)> {
    config.validate()?;
    scenario.validate()?;
    match scenario.marker {
        MarkerSetting::On(overlap) => run_marked(config, scenario, overlap),
        MarkerSetting::Off => run_plain(config, scenario),
    }
}

/// Marker off: one field through the whole train.
fn run_plain(
    config: &ApparatusConfig,
    scenario: &Scenario,
) -> Result<(ScenarioResult, PlaneProfiles)> {
    let spec = config.grid_spec()?;
    let mask = slit_mask(config, &spec, scenario.slits)?;
    let field = apply_mask(&incident_field(spec)?, &mask)?;
    let slit_profile = field.intensity();

    let at_wires = hop(&field, config.dist_slit_to_wires, PLANE_Z1)?;
    let wire_profile = at_wires.intensity();
    let wire_plane_visibility = match scenario.slits {
        SlitSelection::Both => {
            // contrast is judged against the incoherent single-slit envelope,
            // which takes one extra pass per branch up to the wire plane
            let envelope = branch_envelope(config, &spec)?;
            normalized_visibility(&wire_profile, &envelope, config.fringe_period())?
        }
        // a lone branch is its own envelope: no fringes, zero contrast
        _ => 0.0,
    };

    let (after_wires, intercepted) = pass_wires(config, &spec, scenario.wires, &at_wires)?;
    let at_lens = hop(&after_wires, config.dist_wires_to_lens, PLANE_Z2)?;
    let lens_profile = at_lens.intensity();
    let lensed = apply_thin_lens(&at_lens, &config.lens()?)?;
    let image = hop(&lensed, config.image_distance()?, PLANE_Z3)?;
    let image_profile = image.intensity();

    finish(
        config,
        intercepted,
        wire_plane_visibility,
        slit_profile,
        wire_profile,
        lens_profile,
        image_profile,
    )
}

/// Marker on: one field per slit, recombined through the overlap at every
/// recorded plane.
fn run_marked(
    config: &ApparatusConfig,
    scenario: &Scenario,
    overlap: MarkerOverlap,
) -> Result<(ScenarioResult, PlaneProfiles)> {
    debug_assert_eq!(scenario.slits, SlitSelection::Both);
    let spec = config.grid_spec()?;
    let half = 0.5 * config.slit_separation;
    let mask_a = make_offset_slit(&spec, half, config.slit_width)?;
    let mask_b = make_offset_slit(&spec, -half, config.slit_width)?;
    let incident = incident_field(spec)?;
    let mut branch_a = apply_mask(&incident, &mask_a)?;
    let mut branch_b = apply_mask(&incident, &mask_b)?;
    let slit_profile = marked_pair_intensity(&branch_a, &branch_b, overlap)?;

    branch_a = hop(&branch_a, config.dist_slit_to_wires, PLANE_Z1)?;
    branch_b = hop(&branch_b, config.dist_slit_to_wires, PLANE_Z1)?;
    let wire_profile = marked_pair_intensity(&branch_a, &branch_b, overlap)?;
    let envelope = sum_profiles(&branch_a.intensity(), &branch_b.intensity());
    let wire_plane_visibility =
        normalized_visibility(&wire_profile, &envelope, config.fringe_period())?;

    let intercepted = match scenario.wires {
        WireSetting::In => {
            let wires = wire_mask(config, &spec)?;
            branch_a = apply_mask(&branch_a, &wires)?;
            branch_b = apply_mask(&branch_b, &wires)?;
            let remaining = marked_pair_intensity(&branch_a, &branch_b, overlap)?;
            (wire_profile.total_power() - remaining.total_power()).max(0.0)
        }
        WireSetting::Out => 0.0,
    };

    branch_a = hop(&branch_a, config.dist_wires_to_lens, PLANE_Z2)?;
    branch_b = hop(&branch_b, config.dist_wires_to_lens, PLANE_Z2)?;
    let lens_profile = marked_pair_intensity(&branch_a, &branch_b, overlap)?;
    let lens = config.lens()?;
    branch_a = apply_thin_lens(&branch_a, &lens)?;
    branch_b = apply_thin_lens(&branch_b, &lens)?;
    let z3 = config.image_distance()?;
    branch_a = hop(&branch_a, z3, PLANE_Z3)?;
    branch_b = hop(&branch_b, z3, PLANE_Z3)?;
    let image_profile = marked_pair_intensity(&branch_a, &branch_b, overlap)?;

    finish(
        config,
        intercepted,
        wire_plane_visibility,
        slit_profile,
        wire_profile,
        lens_profile,
        image_profile,
    )
}

fn finish(
    config: &ApparatusConfig,
    intercepted: f64,
    wire_plane_visibility: f64,
    slit: IntensityProfile,
    wires: IntensityProfile,
    lens: IntensityProfile,
    image: IntensityProfile,
) -> Result<(ScenarioResult, PlaneProfiles)> {
    let (window_a, window_b) = detector_windows(config)?;
    let result = ScenarioResult {
        power_da: image.power_in(window_a.lo(), window_a.hi()),
        power_db: image.power_in(window_b.lo(), window_b.hi()),
        power_intercepted_by_wires: intercepted,
        power_total_at_image: image.total_power(),
        wire_plane_visibility,
    };
    let profiles = PlaneProfiles {
        slit,
        wires,
        lens,
        image,
    };
    Ok((result, profiles))
}

/// All eight scenario combinations {A, B, both, both + marker} × {wires in,
/// out}, run concurrently, plus per-setting detector losses and the
/// visibility/distinguishability budget of the configured marker overlap.
pub fn run_afshar(config: &ApparatusConfig) -> Result<AfsharReport> {
    config.validate()?;
    let overlap = config.marker_gamma;
    let mut scenarios = Vec::with_capacity(8);
    for wires in [WireSetting::In, WireSetting::Out] {
        for (slits, marker) in [
            (SlitSelection::AOnly, MarkerSetting::Off),
            (SlitSelection::BOnly, MarkerSetting::Off),
            (SlitSelection::Both, MarkerSetting::Off),
            (SlitSelection::Both, MarkerSetting::On(overlap)),
        ] {
            scenarios.push(Scenario {
                slits,
                wires,
                marker,
            });
        }
    }
    let outcomes: Vec<_> = scenarios
        .par_iter()
        .map(|scenario| run_scenario(config, scenario).map(|r| (scenario.key(), r)))
        .collect::<Result<_>>()?;
    let results: std::collections::BTreeMap<_, _> = outcomes.into_iter().collect();

    let mut relative_loss = std::collections::BTreeMap::new();
    for (key, result) in &results {
        let loss = match key.wires {
            WireSetting::Out => 0.0,
            WireSetting::In => {
                let twin = results[&ScenarioKey {
                    wires: WireSetting::Out,
                    ..*key
                }];
                let detected_out = twin.power_da + twin.power_db;
                let detected_in = result.power_da + result.power_db;
                if detected_out > 0.0 {
                    ((detected_out - detected_in) / detected_out).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            }
        };
        relative_loss.insert(*key, loss);
    }

    let duality = duality_report(
        analytic_visibility(1.0, 1.0, &overlap)?,
        distinguishability(&overlap),
    )?;
    Ok(AfsharReport {
        results,
        relative_loss,
        duality,
    })
}

/// Wire-plane visibility against overlap magnitude, one row per requested
/// |γ|, in input order. The branch fields are propagated once and recombined
/// per row.
pub fn gamma_sweep(config: &ApparatusConfig, gammas: &[f64]) -> Result<Vec<SweepRow>> {
    config.validate()?;
    for &g in gammas {
        if !(g.is_finite() && (0.0..=1.0).contains(&g)) {
            return Err(Error::OutOfRange {
                what: "overlap magnitude",
                value: g,
                range: "[0, 1]",
            });
        }
    }
    let spec = config.grid_spec()?;
    let half = 0.5 * config.slit_separation;
    let incident = incident_field(spec)?;
    let branch_a = hop(
        &apply_mask(&incident, &make_offset_slit(&spec, half, config.slit_width)?)?,
        config.dist_slit_to_wires,
        PLANE_Z1,
    )?;
    let branch_b = hop(
        &apply_mask(&incident, &make_offset_slit(&spec, -half, config.slit_width)?)?,
        config.dist_slit_to_wires,
        PLANE_Z1,
    )?;
    let envelope = sum_profiles(&branch_a.intensity(), &branch_b.intensity());
    let period = config.fringe_period();

    gammas
        .iter()
        .map(|&g| {
            let overlap = MarkerOverlap::from_polar(g, 0.0)?;
            let profile = marked_pair_intensity(&branch_a, &branch_b, overlap)?;
            let visibility = normalized_visibility(&profile, &envelope, period)?;
            let distinguishability = distinguishability(&overlap);
            Ok(SweepRow {
                gamma_abs: g,
                visibility,
                distinguishability,
                duality_sum: visibility * visibility
                    + distinguishability * distinguishability,
            })
        })
        .collect()
}

fn incident_field(spec: GridSpec) -> Result<FieldGrid> {
    FieldGrid::uniform(spec, Complex64::new(1.0, 0.0))
}

fn hop(field: &FieldGrid, distance: f64, plane: &'static str) -> Result<FieldGrid> {
    propagate(field, distance).map_err(|source| Error::Propagation {
        plane,
        source: Box::new(source),
    })
}

fn slit_mask(
    config: &ApparatusConfig,
    spec: &GridSpec,
    slits: SlitSelection,
) -> Result<TransmissionMask> {
    let half = 0.5 * config.slit_separation;
    match slits {
        SlitSelection::Both => make_double_slit(spec, config.slit_separation, config.slit_width),
        SlitSelection::AOnly => make_offset_slit(spec, half, config.slit_width),
        SlitSelection::BOnly => make_offset_slit(spec, -half, config.slit_width),
    }
}

fn wire_mask(config: &ApparatusConfig, spec: &GridSpec) -> Result<TransmissionMask> {
    let centers = dark_fringe_positions(config, config.wire_count)?;
    make_wire_grid(spec, &centers, config.wire_width_value())
}

fn pass_wires(
    config: &ApparatusConfig,
    spec: &GridSpec,
    wires: WireSetting,
    at_wires: &FieldGrid,
) -> Result<(FieldGrid, f64)> {
    match wires {
        WireSetting::Out => Ok((at_wires.clone(), 0.0)),
        WireSetting::In => {
            let mask = wire_mask(config, spec)?;
            let masked = apply_mask(at_wires, &mask)?;
            let intercepted = (at_wires.total_power() - masked.total_power()).max(0.0);
            Ok((masked, intercepted))
        }
    }
}

fn branch_envelope(config: &ApparatusConfig, spec: &GridSpec) -> Result<IntensityProfile> {
    let half = 0.5 * config.slit_separation;
    let incident = incident_field(*spec)?;
    let a = hop(
        &apply_mask(&incident, &make_offset_slit(spec, half, config.slit_width)?)?,
        config.dist_slit_to_wires,
        PLANE_Z1,
    )?;
    let b = hop(
        &apply_mask(&incident, &make_offset_slit(spec, -half, config.slit_width)?)?,
        config.dist_slit_to_wires,
        PLANE_Z1,
    )?;
    Ok(sum_profiles(&a.intensity(), &b.intensity()))
}

fn marked_pair_intensity(
    branch_a: &FieldGrid,
    branch_b: &FieldGrid,
    overlap: MarkerOverlap,
) -> Result<IntensityProfile> {
    let pair = MarkedFieldPair::new(branch_a.clone(), branch_b.clone(), overlap)?;
    Ok(marked_intensity(&pair))
}

fn sum_profiles(a: &IntensityProfile, b: &IntensityProfile) -> IntensityProfile {
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| x + y)
        .collect();
    IntensityProfile::from_uniform(a.positions()[0], a.spacing(), values)
        .expect("sum of valid profiles is valid")
}

/// Fringe contrast with the single-slit envelope divided out: the profile is
/// pointwise divided by the incoherent branch sum over the central three
/// fringe periods, and the visibility of that ratio is returned. Without the
/// normalization the envelope's own falloff across the window would read as
/// spurious contrast (about 0.1 at zero overlap for the default bench).
fn normalized_visibility(
    profile: &IntensityProfile,
    envelope: &IntensityProfile,
    fringe_period: f64,
) -> Result<f64> {
    let half = 1.5 * fringe_period;
    let windowed = profile.window(-half, half)?;
    let env = envelope.window(-half, half)?;
    let floor = env.max_value() * 1e-9;
    let ratio: Vec<f64> = windowed
        .values()
        .iter()
        .zip(env.values())
        .map(|(&t, &e)| {
            if e <= floor {
                return Err(Error::InvalidProfile {
                    reason: format!(
                        "envelope vanishes inside the visibility window (value {e:.3e})"
                    ),
                });
            }
            Ok(t / e)
        })
        .collect::<Result<_>>()?;
    let ratio_profile =
        IntensityProfile::from_uniform(windowed.positions()[0], windowed.spacing(), ratio)?;
    visibility(&ratio_profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Small fast bench with the same slit geometry as the default.
    fn mini() -> ApparatusConfig {
        ApparatusConfig {
            dist_slit_to_wires: 0.15,
            dist_wires_to_lens: 0.02,
            focal_length: 0.06,
            grid_n: 1 << 12,
            grid_extent: 24e-3,
            ..ApparatusConfig::default()
        }
    }

    #[test]
    fn windows_sit_at_the_inverted_images() {
        let config = ApparatusConfig::default();
        let (a, b) = detector_windows(&config).unwrap();
        let m = config.magnification().unwrap();
        assert!((a.center + 0.5 * m * config.slit_separation).abs() < 1e-15);
        assert!((b.center - 0.5 * m * config.slit_separation).abs() < 1e-15);
        assert!(a.hi() < b.lo());
    }

    #[test]
    fn oversized_windows_rejected() {
        let mut config = ApparatusConfig::default();
        config.detector_halfwidth = Some(150e-6);
        assert!(matches!(
            detector_windows(&config),
            Err(Error::WindowsOverlap { .. })
        ));
    }

    #[test]
    fn no_fringes_requested_no_fringes_returned() {
        assert!(dark_fringe_positions(&mini(), 0).unwrap().is_empty());
    }

    #[test]
    fn fringe_minima_match_the_two_source_formula() {
        let config = mini();
        let period = config.fringe_period();
        let found = dark_fringe_positions(&config, 6).unwrap();
        assert_eq!(found.len(), 6);
        let expected = [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5].map(|m: f64| m * period);
        for (got, want) in found.iter().zip(expected) {
            assert!(
                (got - want).abs() < 0.01 * period,
                "minimum at {got:.6e}, expected {want:.6e}"
            );
        }
        for i in 0..3 {
            assert!((found[i] + found[5 - i]).abs() < 1e-9);
        }
    }

    #[test]
    fn asking_beyond_the_central_lobe_fails() {
        let err = dark_fringe_positions(&mini(), 40).unwrap_err();
        match err {
            Error::TooFewMinima { found, requested } => {
                assert_eq!(requested, 40);
                assert!(found >= 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coherent_run_keeps_power_and_contrast() {
        let config = mini();
        let scenario = Scenario {
            slits: SlitSelection::Both,
            wires: WireSetting::Out,
            marker: MarkerSetting::Off,
        };
        let (result, profiles) = run_scenario_with_planes(&config, &scenario).unwrap();
        assert_eq!(result.power_intercepted_by_wires, 0.0);
        assert!(result.wire_plane_visibility > 0.98);
        let detected = result.power_da + result.power_db;
        assert!(detected > 0.0);
        assert!(detected <= result.power_total_at_image * (1.0 + 1e-9));
        // nothing absorbs in this run, so the image carries the slit power
        let injected = profiles.slit.total_power();
        let drift = (result.power_total_at_image - injected).abs() / injected;
        assert!(drift < 1e-9, "power drift {drift:.3e}");
    }

    #[test]
    fn single_slit_lands_in_its_own_window() {
        let config = mini();
        let a_only = run_scenario(
            &config,
            &Scenario {
                slits: SlitSelection::AOnly,
                wires: WireSetting::Out,
                marker: MarkerSetting::Off,
            },
        )
        .unwrap();
        assert_eq!(a_only.wire_plane_visibility, 0.0);
        assert!(a_only.power_da > 5.0 * a_only.power_db);
        let b_only = run_scenario(
            &config,
            &Scenario {
                slits: SlitSelection::BOnly,
                wires: WireSetting::Out,
                marker: MarkerSetting::Off,
            },
        )
        .unwrap();
        assert!(b_only.power_db > 5.0 * b_only.power_da);
    }

    #[test]
    fn marker_demands_both_slits() {
        let scenario = Scenario {
            slits: SlitSelection::BOnly,
            wires: WireSetting::In,
            marker: MarkerSetting::On(MarkerOverlap::orthogonal()),
        };
        assert!(matches!(
            run_scenario(&mini(), &scenario),
            Err(Error::MarkerOnSingleSlit)
        ));
    }

    #[test]
    fn orthogonal_marker_shows_no_fringes_but_coherent_does() {
        let config = mini();
        let marked = run_scenario(
            &config,
            &Scenario {
                slits: SlitSelection::Both,
                wires: WireSetting::Out,
                marker: MarkerSetting::On(MarkerOverlap::orthogonal()),
            },
        )
        .unwrap();
        assert!(marked.wire_plane_visibility < 0.02);
    }

    #[test]
    fn full_report_covers_eight_scenarios() {
        let report = run_afshar(&mini()).unwrap();
        assert_eq!(report.results.len(), 8);
        assert_eq!(report.relative_loss.len(), 8);
        for (key, loss) in &report.relative_loss {
            assert!((0.0..=1.0).contains(loss));
            if key.wires == WireSetting::Out {
                assert_eq!(*loss, 0.0);
            }
        }
        // orthogonal marker: full which-way information, no fringes
        assert!((report.duality.distinguishability - 1.0).abs() < 1e-12);
        assert!(report.duality.visibility.abs() < 1e-12);
        let coherent_in = report.relative_loss[&ScenarioKey {
            slits: SlitSelection::Both,
            wires: WireSetting::In,
            marker_on: false,
        }];
        let marked_in = report.relative_loss[&ScenarioKey {
            slits: SlitSelection::Both,
            wires: WireSetting::In,
            marker_on: true,
        }];
        assert!(
            coherent_in < 0.1 * marked_in,
            "coherent loss {coherent_in:.3e} vs marked loss {marked_in:.3e}"
        );
    }

    #[test]
    fn sweep_runs_from_dark_to_full_contrast() {
        let rows = gamma_sweep(&mini(), &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows[0].visibility < 0.02);
        assert!(rows[4].visibility > 0.98);
        for pair in rows.windows(2) {
            assert!(pair[1].visibility >= pair[0].visibility - 1e-3);
        }
        for row in &rows {
            assert!(row.duality_sum <= 1.02);
            let expected_d = (1.0 - row.gamma_abs * row.gamma_abs).sqrt();
            assert!((row.distinguishability - expected_d).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_rejects_out_of_range_overlap() {
        assert!(matches!(
            gamma_sweep(&mini(), &[0.5, 1.2]),
            Err(Error::OutOfRange { .. })
        ));
    }
}
