//! Boundary Control operators of the Dirac-type system: control and
//! extended control operators on an orthonormalized bump basis, the
//! connecting operator, controllability diagnostics, wavefront amplitudes
//! and sampled elements of the dynamic de Branges space.

mod amplitude;
mod basis;
mod control;
mod space;

pub use amplitude::{boundary_amplitude, wavefront_amplitude, AmplitudeProfile, WavefrontReport, MAX_WIDTH_FRACTION};
pub use basis::ControlBasis;
pub use control::{
    connecting_operator, control_operator, controllability_check, reachability_defect, sigma_min_trend,
    ConnectingOperatorMatrix, ControlMode, ControlOperatorMatrix, ControllabilityReport, DefectReport,
    CONNECTING_PSD_FLOOR, RANK_THRESHOLD, SIGMA_FLOOR,
};
pub use space::{bt_element, bt_element_from_coeffs, bt_inner, BTElement, BTSpace};
