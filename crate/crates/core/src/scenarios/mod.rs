//! Scenario files, bundled presets and the optical polarization analog.

mod optical;
mod presets;
mod scenario;

pub use optical::{
    optical_equivalent_system, optical_wavefunction, optical_weak_value_closed_form, OpticalParams, OpticalWave,
    OPTICAL_SOURCE,
};
pub use presets::{preset, preset_names, preset_source};
pub use scenario::{
    load_scenario, save_scenario, write_atomic, Amplitude, ExpressionSpec, MatrixSystem, Scenario, ScenarioSystem,
};
