//! Scenario vocabulary and result containers.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{DualityReport, MarkerOverlap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SlitSelection {
    AOnly,
    BOnly,
    Both,
}

impl fmt::Display for SlitSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlitSelection::AOnly => "A",
            SlitSelection::BOnly => "B",
            SlitSelection::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WireSetting {
    In,
    Out,
}

impl fmt::Display for WireSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WireSetting::In => "in",
            WireSetting::Out => "out",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarkerSetting {
    Off,
    On(MarkerOverlap),
}

/// One run of the bench: which slits are open, whether the wire grid sits in
/// the beam, and whether the slits are tagged with marker states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub slits: SlitSelection,
    pub wires: WireSetting,
    pub marker: MarkerSetting,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if matches!(self.marker, MarkerSetting::On(_)) && self.slits != SlitSelection::Both {
            return Err(Error::MarkerOnSingleSlit);
        }
        Ok(())
    }

    pub fn key(&self) -> ScenarioKey {
        ScenarioKey {
            slits: self.slits,
            wires: self.wires,
            marker_on: matches!(self.marker, MarkerSetting::On(_)),
        }
    }
}

/// Ordering-friendly identity of a scenario; the marker overlap value itself
/// lives in the config, so the key only records whether the marker is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScenarioKey {
    pub slits: SlitSelection,
    pub wires: WireSetting,
    pub marker_on: bool,
}

impl ScenarioKey {
    /// Stable text form, e.g. `slits=both,wires=in,marker=gamma`.
    pub fn label(&self) -> String {
        format!(
            "slits={},wires={},marker={}",
            self.slits,
            self.wires,
            if self.marker_on { "gamma" } else { "off" }
        )
    }
}

/// Powers and wire-plane contrast from a single scenario run. Powers are in
/// the arbitrary units of the input field, consistent within a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioResult {
    pub power_da: f64,
    pub power_db: f64,
    pub power_intercepted_by_wires: f64,
    pub power_total_at_image: f64,
    pub wire_plane_visibility: f64,
}

/// The eight-scenario comparison, the per-setting detector losses, and the
/// visibility/distinguishability balance for the configured marker.
#[derive(Debug, Clone, PartialEq)]
pub struct AfsharReport {
    pub results: BTreeMap<ScenarioKey, ScenarioResult>,
    pub relative_loss: BTreeMap<ScenarioKey, f64>,
    pub duality: DualityReport,
}

/// One row of a marker-overlap sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub gamma_abs: f64,
    pub visibility: f64,
    pub distinguishability: f64,
    pub duality_sum: f64,
}
