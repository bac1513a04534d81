//! Exact oracles: Laplace inversion for subordinators, Hankel inversion for
//! isotropic densities and radial tails.

pub mod laplace;

pub use laplace::{
    euler_bromwich, forward_laplace_check, levy_tail_exact, subordinator_tail_exact, subordinator_tail_unchecked, tail_moment_transform, InversionConfig,
    LaplaceMethod, TailSource,
};

pub mod hankel;

pub use hankel::{density_exact, hankel_integral, radial_mass_between, radial_tail_ball, radial_tail_exact, total_mass, RadialTail};
