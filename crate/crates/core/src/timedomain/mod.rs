//! Forward solvers, field transformations, residual checks and response
//! operator assembly.

mod assembly;
mod characteristic;
pub mod jacobi;
pub mod residual;
pub mod transform;
pub mod wave;
pub mod dirac;
pub mod result;

pub use assembly::{basis_controls, bump_centers, compare_responses, response_matrix, response_matrix_on, trace_discrepancy, trace_distance, Relation, ResponseComparison, SystemDescriptor, BUMP_STEPS, CAUSALITY_TOL};
pub use dirac::{solve_canonical_i, solve_dirac, solve_dirac_type, DiracSign, Orientation};
pub use jacobi::{
    boundary_relation, full_recording, jacobi_fields_from_v, printed_boundary_relation, solve_jacobi_continuous,
    solve_jacobi_discrete, DiscreteDt, JacobiDynamics, JacobiField, JACOBI_STEP_BOUND,
};
pub use residual::{canonical_residual, convergence_slope, with_slope, ResidualMode, ResidualOptions, ResidualReport};
pub use transform::{
    boundary_trace, canonical_fields_from_density_wave, canonical_fields_from_dirac, canonical_fields_from_wave,
    extrapolated_trace,
};
pub use wave::{solve_wave_density, solve_wave_potential};
pub use result::{EvolutionResult, FieldData, Recording, SolveOptions, SolverMeta};
