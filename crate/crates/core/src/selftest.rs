//! Built-in invariant suite behind the CLI `selftest` subcommand.
//!
//! Each check is small enough to run on every install: amplitude-algebra
//! identities, engine conservation laws on a reduced grid, and the
//! experiment-level symmetries. Failures carry a message naming the violated
//! bound.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::experiment::{
    dark_fringe_positions, detector_windows, gamma_sweep, run_afshar, run_scenario_with_planes,
    ApparatusConfig, MarkerSetting, Scenario, SlitSelection, WireSetting,
};
use crate::optics::{
    apply_mask, intensity, make_double_slit, marked_intensity, propagate, total_power, FieldGrid,
    GridSpec, MarkedFieldPair, TransmissionMask,
};
use crate::profile::IntensityProfile;
use crate::quantum::{
    analytic_visibility, distinguishability, intensity_no_marker, intensity_with_marker,
    marker_overlap, visibility, MarkerOverlap, MarkerState, SlitAmplitudePair,
};

#[derive(Debug, Clone)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.error.is_none())
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.error.is_some()).count()
    }
}

pub fn run_selftest() -> SelftestReport {
    let table: &[(&'static str, fn() -> std::result::Result<(), String>)] = &[
        ("quantum: marked intensity nonnegative", check_nonnegative),
        ("quantum: unit overlap reduces to plain interference", check_coherent_reduction),
        ("quantum: zero overlap gives the incoherent sum", check_incoherent_sum),
        ("quantum: joint-state norm agrees", check_joint_state),
        ("quantum: equal arms saturate the duality bound", check_duality_saturation),
        ("quantum: duality bound holds for unequal arms", check_duality_bound),
        ("quantum: phase-scan visibility matches closed form", check_phase_scan),
        ("optics: propagation is linear", check_linearity),
        ("optics: propagation conserves band-limited power", check_unitarity),
        ("optics: propagation composes", check_composition),
        ("optics: masks never amplify", check_mask_power),
        ("optics: zero overlap sums branch intensities", check_marked_zero),
        ("optics: wire-plane field matches direct summation", check_quadrature),
        ("experiment: dark fringes sit at the two-source minima", check_dark_fringes),
        ("experiment: detector windows invert the slit layout", check_windows),
        ("experiment: power is accounted for in every scenario", check_power_accounting),
        ("experiment: single-slit runs mirror each other", check_swap_symmetry),
        ("experiment: visibility grows with overlap", check_monotonic_sweep),
        ("experiment: wires out means zero loss", check_wires_out_loss),
        ("experiment: coherent run equals unit-overlap run", check_coherent_vs_marked),
        ("experiment: reports are bit-reproducible", check_determinism),
    ];
    let checks = table
        .iter()
        .map(|&(name, f)| SelftestCheck {
            name,
            error: f().err(),
        })
        .collect();
    SelftestReport { checks }
}

// -- small deterministic RNG (no external dependency needed here) --

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn uniform(state: &mut u64) -> f64 {
    (splitmix(state) >> 11) as f64 / (1u64 << 53) as f64
}

fn amplitude(state: &mut u64) -> Complex64 {
    Complex64::new(2.0 * uniform(state) - 1.0, 2.0 * uniform(state) - 1.0)
}

fn fail(message: String) -> std::result::Result<(), String> {
    Err(message)
}

fn ok_or_report<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("unexpected error: {e}"))
}

// -- quantum-core invariants --

fn check_nonnegative() -> std::result::Result<(), String> {
    let mut state = 0x51u64;
    for _ in 0..2000 {
        let pair = ok_or_report(SlitAmplitudePair::new(
            amplitude(&mut state),
            amplitude(&mut state),
            0.0,
        ))?;
        let overlap = ok_or_report(MarkerOverlap::from_polar(
            uniform(&mut state),
            2.0 * PI * uniform(&mut state),
        ))?;
        let value = intensity_with_marker(&pair, &overlap);
        if value < 0.0 {
            return fail(format!("negative intensity {value:.3e}"));
        }
    }
    Ok(())
}

fn check_coherent_reduction() -> std::result::Result<(), String> {
    let mut state = 0x52u64;
    for _ in 0..2000 {
        let pair = ok_or_report(SlitAmplitudePair::new(
            amplitude(&mut state),
            amplitude(&mut state),
            0.0,
        ))?;
        let with = intensity_with_marker(&pair, &MarkerOverlap::identical());
        let without = intensity_no_marker(&pair);
        if (with - without).abs() > 1e-12 {
            return fail(format!("deviation {:.3e} beyond 1e-12", (with - without).abs()));
        }
    }
    Ok(())
}

fn check_incoherent_sum() -> std::result::Result<(), String> {
    let mut state = 0x53u64;
    for _ in 0..10_000 {
        let a = amplitude(&mut state);
        let b = amplitude(&mut state);
        let pair = ok_or_report(SlitAmplitudePair::new(a, b, 0.0))?;
        let value = intensity_with_marker(&pair, &MarkerOverlap::orthogonal());
        let plain = a.norm_sqr() + b.norm_sqr();
        if (value - plain).abs() > 1e-12 {
            return fail(format!("deviation {:.3e} beyond 1e-12", (value - plain).abs()));
        }
    }
    Ok(())
}

fn check_joint_state() -> std::result::Result<(), String> {
    let mut state = 0x54u64;
    for _ in 0..1000 {
        let make_state = |state: &mut u64| {
            let raw = [amplitude(state), amplitude(state)];
            let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
            MarkerState::new(vec![raw[0] / norm, raw[1] / norm])
        };
        let v_u = ok_or_report(make_state(&mut state))?;
        let v_l = ok_or_report(make_state(&mut state))?;
        let overlap = ok_or_report(marker_overlap(&v_u, &v_l))?;
        let a = amplitude(&mut state);
        let b = amplitude(&mut state);
        let pair = ok_or_report(SlitAmplitudePair::new(a, b, 0.0))?;
        let via_overlap = intensity_with_marker(&pair, &overlap);
        // the joint particle+marker vector at one detector position
        let joint: f64 = v_u
            .components()
            .iter()
            .zip(v_l.components())
            .map(|(&u, &l)| (a * u + b * l).norm_sqr())
            .sum();
        if (via_overlap - joint).abs() > 1e-10 {
            return fail(format!(
                "overlap form {via_overlap:.12e} vs joint norm {joint:.12e}"
            ));
        }
    }
    Ok(())
}

fn check_duality_saturation() -> std::result::Result<(), String> {
    for step in 0..=100 {
        let g = step as f64 / 100.0;
        let overlap = ok_or_report(MarkerOverlap::from_polar(g, 0.3))?;
        let v = ok_or_report(analytic_visibility(0.7, 0.7, &overlap))?;
        let d = distinguishability(&overlap);
        let sum = v * v + d * d;
        if (sum - 1.0).abs() > 1e-10 {
            return fail(format!("V^2+D^2 = {sum:.12} at |gamma| = {g}"));
        }
    }
    Ok(())
}

fn check_duality_bound() -> std::result::Result<(), String> {
    let mut state = 0x55u64;
    for _ in 0..2000 {
        let mag_a = uniform(&mut state) * 2.0;
        let mag_b = uniform(&mut state) * 2.0;
        if mag_a + mag_b == 0.0 {
            continue;
        }
        let overlap = ok_or_report(MarkerOverlap::from_polar(
            uniform(&mut state),
            2.0 * PI * uniform(&mut state),
        ))?;
        let v = ok_or_report(analytic_visibility(mag_a, mag_b, &overlap))?;
        let d = distinguishability(&overlap);
        if v * v + d * d > 1.0 + 1e-10 {
            return fail(format!(
                "V^2+D^2 = {:.12} for arms {mag_a:.3}, {mag_b:.3}",
                v * v + d * d
            ));
        }
    }
    Ok(())
}

fn check_phase_scan() -> std::result::Result<(), String> {
    let cases = [
        (1.0, 1.0, MarkerOverlap::identical()),
        (1.0, 0.5, MarkerOverlap::identical()),
        (0.7, 0.7, ok_or_report(MarkerOverlap::from_polar(0.38, 1.1))?),
    ];
    let samples = 8192;
    for (mag_a, mag_b, overlap) in cases {
        let values: Vec<f64> = (0..samples)
            .map(|j| {
                let phase = 2.0 * PI * j as f64 / samples as f64;
                let pair = SlitAmplitudePair::new(
                    Complex64::new(mag_a, 0.0),
                    Complex64::from_polar(mag_b, phase),
                    0.0,
                )
                .expect("finite amplitudes");
                intensity_with_marker(&pair, &overlap)
            })
            .collect();
        let profile = ok_or_report(IntensityProfile::from_uniform(
            0.0,
            2.0 * PI / samples as f64,
            values,
        ))?;
        let measured = ok_or_report(visibility(&profile))?;
        let expected = ok_or_report(analytic_visibility(mag_a, mag_b, &overlap))?;
        if (measured - expected).abs() > 1e-6 {
            return fail(format!(
                "scan gives {measured:.9}, closed form {expected:.9}"
            ));
        }
    }
    Ok(())
}

// -- wave-optics invariants --

fn small_grid() -> GridSpec {
    GridSpec::new(2048, 20e-3, 650e-9).expect("valid grid")
}

fn gaussian_field(spec: GridSpec, waist: f64, center: f64) -> FieldGrid {
    let samples = (0..spec.n())
        .map(|i| {
            let x = spec.position(i) - center;
            Complex64::new((-(x / waist).powi(2)).exp(), 0.0)
        })
        .collect();
    FieldGrid::from_samples(spec, samples).expect("finite samples")
}

fn rel_l2(a: &FieldGrid, b: &FieldGrid) -> f64 {
    let mut diff = 0.0;
    let mut norm = 0.0;
    for (&x, &y) in a.samples().iter().zip(b.samples()) {
        diff += (x - y).norm_sqr();
        norm += y.norm_sqr();
    }
    (diff / norm).sqrt()
}

fn check_linearity() -> std::result::Result<(), String> {
    let spec = small_grid();
    let f = gaussian_field(spec, 1.2e-3, 0.0);
    let g = gaussian_field(spec, 0.6e-3, 2.0e-3);
    let alpha = Complex64::new(0.8, -0.3);
    let beta = Complex64::new(-0.2, 0.55);
    let combined = FieldGrid::from_samples(
        spec,
        f.samples()
            .iter()
            .zip(g.samples())
            .map(|(&x, &y)| alpha * x + beta * y)
            .collect(),
    )
    .expect("finite samples");
    let z = 0.08;
    let lhs = ok_or_report(propagate(&combined, z))?;
    let pf = ok_or_report(propagate(&f, z))?;
    let pg = ok_or_report(propagate(&g, z))?;
    let rhs = FieldGrid::from_samples(
        spec,
        pf.samples()
            .iter()
            .zip(pg.samples())
            .map(|(&x, &y)| alpha * x + beta * y)
            .collect(),
    )
    .expect("finite samples");
    let err = rel_l2(&lhs, &rhs);
    if err > 1e-10 {
        return fail(format!("linearity error {err:.3e} beyond 1e-10"));
    }
    Ok(())
}

fn check_unitarity() -> std::result::Result<(), String> {
    let spec = small_grid();
    let field = gaussian_field(spec, 1.5e-3, 0.0);
    let out = ok_or_report(propagate(&field, 0.15))?;
    let drift = (out.total_power() - field.total_power()).abs() / field.total_power();
    if drift > 1e-9 {
        return fail(format!("power drift {drift:.3e} beyond 1e-9"));
    }
    Ok(())
}

fn check_composition() -> std::result::Result<(), String> {
    let spec = small_grid();
    let field = gaussian_field(spec, 1.0e-3, 0.5e-3);
    let two_hops = ok_or_report(propagate(&ok_or_report(propagate(&field, 2e-3))?, 3e-3))?;
    let one_hop = ok_or_report(propagate(&field, 5e-3))?;
    let err = rel_l2(&two_hops, &one_hop);
    if err > 1e-9 {
        return fail(format!("composition error {err:.3e} beyond 1e-9"));
    }
    Ok(())
}

fn check_mask_power() -> std::result::Result<(), String> {
    let spec = small_grid();
    let field = gaussian_field(spec, 2.0e-3, 0.0);
    let slits = ok_or_report(make_double_slit(&spec, 1.0e-3, 200e-6))?;
    let masked = ok_or_report(apply_mask(&field, &slits))?;
    if masked.total_power() > field.total_power() {
        return fail("slit mask increased power".into());
    }
    let half: Vec<f64> = (0..spec.n())
        .map(|i| if i < spec.n() / 2 { 1.0 } else { 0.0 })
        .collect();
    let mask = ok_or_report(TransmissionMask::new(&spec, half))?;
    let uniform_in = ok_or_report(FieldGrid::uniform(spec, Complex64::new(1.0, 0.0)))?;
    let halved = ok_or_report(apply_mask(&uniform_in, &mask))?;
    let expect = 0.5 * uniform_in.total_power();
    if (halved.total_power() - expect).abs() > 1e-12 * expect {
        return fail(format!(
            "half-open mask gives {:.15e}, expected {expect:.15e}",
            halved.total_power()
        ));
    }
    Ok(())
}

fn check_marked_zero() -> std::result::Result<(), String> {
    let spec = GridSpec::new(512, 5e-3, 650e-9).expect("valid grid");
    let mut state = 0x56u64;
    let random_field = |state: &mut u64| {
        FieldGrid::from_samples(spec, (0..spec.n()).map(|_| amplitude(state)).collect())
            .expect("finite samples")
    };
    let u = random_field(&mut state);
    let l = random_field(&mut state);
    let pair = ok_or_report(MarkedFieldPair::new(
        u.clone(),
        l.clone(),
        MarkerOverlap::orthogonal(),
    ))?;
    let marked = marked_intensity(&pair);
    let iu = intensity(&u);
    let il = intensity(&l);
    for i in 0..spec.n() {
        let sum = iu.values()[i] + il.values()[i];
        if (marked.values()[i] - sum).abs() > 1e-12 * sum.max(1.0) {
            return fail(format!("pointwise deviation at sample {i}"));
        }
    }
    Ok(())
}

fn selftest_bench() -> ApparatusConfig {
    ApparatusConfig {
        dist_slit_to_wires: 0.15,
        dist_wires_to_lens: 0.02,
        focal_length: 0.06,
        grid_n: 1 << 12,
        grid_extent: 24e-3,
        ..ApparatusConfig::default()
    }
}

/// Direct Rayleigh–Sommerfeld summation over band-limited refined source
/// nodes; deliberately a different route to the wire plane than the FFT
/// transfer function.
fn check_quadrature() -> std::result::Result<(), String> {
    let config = selftest_bench();
    let spec = ok_or_report(config.grid_spec())?;
    let mask = ok_or_report(make_double_slit(
        &spec,
        config.slit_separation,
        config.slit_width,
    ))?;
    let source = ok_or_report(apply_mask(
        &ok_or_report(FieldGrid::uniform(spec, Complex64::new(1.0, 0.0)))?,
        &mask,
    ))?;
    let z = config.dist_slit_to_wires;
    let engine = intensity(&ok_or_report(propagate(&source, z))?);

    let refine = 8;
    let nodes = refined_nodes(&source, refine);
    let node_step = spec.spacing() / refine as f64;
    let k = spec.wavenumber();
    let mut diff = 0.0;
    let mut norm = 0.0;
    let stride = 32;
    let quarter = spec.n() / 4;
    for idx in (quarter..3 * quarter).step_by(stride) {
        let x = spec.position(idx);
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, &value) in nodes.iter().enumerate() {
            if value == Complex64::new(0.0, 0.0) {
                continue;
            }
            let xs = (m as f64 - (nodes.len() / 2) as f64) * node_step;
            sum += value * rs_kernel(k, z, x - xs);
        }
        sum *= node_step;
        let oracle = sum.norm_sqr();
        let sample = engine.values()[idx];
        diff += (sample - oracle) * (sample - oracle);
        norm += oracle * oracle;
    }
    let err = (diff / norm).sqrt();
    if err > 1e-4 {
        return fail(format!("relative L2 deviation {err:.3e} beyond 1e-4"));
    }
    Ok(())
}

/// Zero-padded spectral interpolation of the source samples onto a
/// `refine`-times finer comb.
fn refined_nodes(field: &FieldGrid, refine: usize) -> Vec<Complex64> {
    use rustfft::FftPlanner;
    let n = field.spec().n();
    let padded_len = n * refine;
    let mut planner = FftPlanner::new();
    let mut spectrum = field.samples().to_vec();
    planner.plan_fft_forward(n).process(&mut spectrum);
    let mut padded = vec![Complex64::new(0.0, 0.0); padded_len];
    for (j, &c) in spectrum.iter().enumerate() {
        let dest = if j <= n / 2 { j } else { padded_len - (n - j) };
        padded[dest] = c;
    }
    planner.plan_fft_inverse(padded_len).process(&mut padded);
    let scale = 1.0 / n as f64;
    for c in &mut padded {
        *c *= scale;
    }
    padded
}

/// Outgoing cylindrical-wave kernel between planes `z` apart, first two terms
/// of the large-argument expansion.
fn rs_kernel(k: f64, z: f64, dx: f64) -> Complex64 {
    let r = (z * z + dx * dx).sqrt();
    let kr = k * r;
    let amplitude = (z / r) * (k / (2.0 * PI * r)).sqrt();
    let correction = Complex64::new(1.0, 3.0 / (8.0 * kr));
    Complex64::from_polar(amplitude, kr - PI / 4.0) * correction
}

// -- experiment invariants --

fn check_dark_fringes() -> std::result::Result<(), String> {
    let config = selftest_bench();
    let period = config.fringe_period();
    let minima = ok_or_report(dark_fringe_positions(&config, 6))?;
    for (i, &x) in minima.iter().enumerate() {
        let nearest = ((x / period - 0.5).round() + 0.5) * period;
        if (x - nearest).abs() > 0.01 * period {
            return fail(format!(
                "minimum {i} at {x:.6e} m, nearest half-order at {nearest:.6e} m"
            ));
        }
    }
    // depth: sampled intensity at each minimum far below the flanking maxima
    let spec = ok_or_report(config.grid_spec())?;
    let mask = ok_or_report(make_double_slit(
        &spec,
        config.slit_separation,
        config.slit_width,
    ))?;
    let source = ok_or_report(apply_mask(
        &ok_or_report(FieldGrid::uniform(spec, Complex64::new(1.0, 0.0)))?,
        &mask,
    ))?;
    let profile = intensity(&ok_or_report(propagate(&source, config.dist_slit_to_wires))?);
    let positions = profile.positions();
    let values = profile.values();
    let half_period = (0.5 * period / profile.spacing()).round() as usize;
    for &x in &minima {
        let idx = positions
            .iter()
            .position(|&p| (p - x).abs() <= 0.5 * profile.spacing())
            .ok_or_else(|| format!("minimum {x:.6e} m outside the profile"))?;
        let lo = idx.saturating_sub(half_period);
        let hi = (idx + half_period).min(values.len() - 1);
        let peak = values[lo..=hi].iter().cloned().fold(0.0_f64, f64::max);
        if values[idx] > 1e-3 * peak {
            return fail(format!(
                "residual {:.3e} at {x:.6e} m vs flanking peak {peak:.3e}",
                values[idx]
            ));
        }
    }
    Ok(())
}

fn check_windows() -> std::result::Result<(), String> {
    let config = selftest_bench();
    let (a, b) = ok_or_report(detector_windows(&config))?;
    let m = ok_or_report(config.magnification())?;
    let expect = 0.5 * m * config.slit_separation;
    if (a.center + expect).abs() > 1e-15 || (b.center - expect).abs() > 1e-15 {
        return fail(format!(
            "window centers {:.6e}, {:.6e}; expected inverted images at -/+{expect:.6e}",
            a.center, b.center
        ));
    }
    if a.hi() >= b.lo() {
        return fail("windows overlap".into());
    }
    Ok(())
}

fn all_scenarios(overlap: MarkerOverlap) -> Vec<Scenario> {
    let mut scenarios = Vec::new();
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
    scenarios
}

fn check_power_accounting() -> std::result::Result<(), String> {
    let config = selftest_bench();
    for scenario in all_scenarios(config.marker_gamma) {
        let (result, profiles) =
            ok_or_report(run_scenario_with_planes(&config, &scenario))?;
        let injected = profiles.slit.total_power();
        let out = result.power_intercepted_by_wires + result.power_total_at_image;
        if out > injected * (1.0 + 1e-6) {
            return fail(format!(
                "{}: intercepted + image power {out:.9e} exceeds injected {injected:.9e}",
                scenario.key().label()
            ));
        }
        if result.power_da < 0.0 || result.power_db < 0.0 {
            return fail(format!("{}: negative window power", scenario.key().label()));
        }
        if result.power_da + result.power_db
            > result.power_total_at_image + 1e-9
        {
            return fail(format!(
                "{}: window powers exceed the image total",
                scenario.key().label()
            ));
        }
    }
    Ok(())
}

fn check_swap_symmetry() -> std::result::Result<(), String> {
    let config = selftest_bench();
    for wires in [WireSetting::In, WireSetting::Out] {
        let a = ok_or_report(run_scenario_with_planes(
            &config,
            &Scenario {
                slits: SlitSelection::AOnly,
                wires,
                marker: MarkerSetting::Off,
            },
        ))?
        .0;
        let b = ok_or_report(run_scenario_with_planes(
            &config,
            &Scenario {
                slits: SlitSelection::BOnly,
                wires,
                marker: MarkerSetting::Off,
            },
        ))?
        .0;
        let deviation = (a.power_da - b.power_db).abs() / a.power_da;
        if deviation > 1e-6 {
            return fail(format!(
                "mirrored powers differ by {deviation:.3e} with wires {wires}"
            ));
        }
    }
    Ok(())
}

fn check_monotonic_sweep() -> std::result::Result<(), String> {
    let config = selftest_bench();
    let gammas: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let rows = ok_or_report(gamma_sweep(&config, &gammas))?;
    for pair in rows.windows(2) {
        if pair[1].visibility < pair[0].visibility - 1e-3 {
            return fail(format!(
                "visibility drops from {:.6} to {:.6} between |gamma| {:.2} and {:.2}",
                pair[0].visibility, pair[1].visibility, pair[0].gamma_abs, pair[1].gamma_abs
            ));
        }
    }
    for row in &rows {
        if row.duality_sum > 1.02 {
            return fail(format!(
                "V^2+D^2 = {:.6} at |gamma| = {:.2}",
                row.duality_sum, row.gamma_abs
            ));
        }
    }
    Ok(())
}

fn check_wires_out_loss() -> std::result::Result<(), String> {
    let report = ok_or_report(run_afshar(&selftest_bench()))?;
    for (key, loss) in &report.relative_loss {
        if key.wires == WireSetting::Out && *loss != 0.0 {
            return fail(format!("{} reports loss {loss:.3e}", key.label()));
        }
        if !(0.0..=1.0).contains(loss) {
            return fail(format!("{} loss {loss:.3e} outside [0, 1]", key.label()));
        }
    }
    Ok(())
}

fn check_coherent_vs_marked() -> std::result::Result<(), String> {
    let config = selftest_bench();
    let coherent = ok_or_report(run_scenario_with_planes(
        &config,
        &Scenario {
            slits: SlitSelection::Both,
            wires: WireSetting::In,
            marker: MarkerSetting::Off,
        },
    ))?
    .1;
    let marked = ok_or_report(run_scenario_with_planes(
        &config,
        &Scenario {
            slits: SlitSelection::Both,
            wires: WireSetting::In,
            marker: MarkerSetting::On(MarkerOverlap::identical()),
        },
    ))?
    .1;
    for (plane, x, y) in [
        ("wire plane", &coherent.wires, &marked.wires),
        ("image plane", &coherent.image, &marked.image),
    ] {
        let scale = x.max_value();
        for (vx, vy) in x.values().iter().zip(y.values()) {
            if (vx - vy).abs() > 1e-12 * scale {
                return fail(format!(
                    "{plane}: paths deviate by {:.3e} against scale {scale:.3e}",
                    (vx - vy).abs()
                ));
            }
        }
    }
    Ok(())
}

fn check_determinism() -> std::result::Result<(), String> {
    let config = selftest_bench();
    let first = ok_or_report(run_afshar(&config))?;
    let second = ok_or_report(run_afshar(&config))?;
    for (key, a) in &first.results {
        let b = second.results[key];
        let fields = [
            (a.power_da, b.power_da),
            (a.power_db, b.power_db),
            (a.power_intercepted_by_wires, b.power_intercepted_by_wires),
            (a.power_total_at_image, b.power_total_at_image),
            (a.wire_plane_visibility, b.wire_plane_visibility),
        ];
        for (x, y) in fields {
            if x.to_bits() != y.to_bits() {
                return fail(format!("{} differs between runs", key.label()));
            }
        }
    }
    for (key, x) in &first.relative_loss {
        if x.to_bits() != second.relative_loss[key].to_bits() {
            return fail(format!("loss for {} differs between runs", key.label()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_whole_suite_passes() {
        let report = run_selftest();
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter_map(|c| c.error.as_ref().map(|e| format!("{}: {e}", c.name)))
            .collect();
        assert!(report.passed(), "failed checks:\n{}", failed.join("\n"));
        assert_eq!(report.failures(), 0);
    }
}
