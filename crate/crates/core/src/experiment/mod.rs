//! The full bench: apparatus configuration, scenario runs, fringe-anchored
//! wire placement, and overlap sweeps.

mod config;
mod run;
mod scenario;

pub use config::{ApparatusConfig, IMAGING_TOLERANCE};
pub use run::{
    dark_fringe_positions, detector_windows, gamma_sweep, run_afshar, run_scenario,
    run_scenario_with_planes, DetectorWindow, PlaneProfiles,
};
pub use scenario::{
    AfsharReport, MarkerSetting, Scenario, ScenarioKey, ScenarioResult, SlitSelection, SweepRow,
    WireSetting,
};
