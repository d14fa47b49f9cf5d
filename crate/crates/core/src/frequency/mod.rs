//! Frequency domain: transfer solutions of `-JY' = lambda H Y`, de Branges
//! functions, reproducing kernels, Dirichlet spectral solutions of the
//! Dirac-type operator and Fourier images of states.

mod debranges;
mod kernel;
mod spectral;
mod transfer;

pub use debranges::{
    debranges_e, hb_check, standard_hb_grid, write_sweep_csv, ClosedForm, DeBrangesFunction, DeBrangesOptions,
    EntireFunction, HbPoint, HbReport,
};
pub use kernel::{kernel_gram, reproducing_kernel, KernelSample, PSD_FLOOR, SINGULAR_RADIUS};
pub use spectral::{
    debranges_inner, fourier_image, solve_theta_dirichlet, InnerProduct, SpectralCoefficients, ThetaSolution,
};
pub use transfer::{solve_transfer, FundamentalMatrix, TransferSolver};
