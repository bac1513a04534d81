//! H, g, the Gaussian-averaged exponent and every closed-form asymptotic
//! prediction, each with its regime parameter epsilon.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::processes::{IsotropicExponentSpec, Quantity, Regime, SubordinatorSpec};
use crate::quadrature::{integrate_pieces, QuadratureConfig};
use crate::specfun::gamma;

/// Values of H in (-H_CLAMP, 0) are rounding noise and are set to 0.
pub const H_CLAMP: f64 = 1e-12;
/// |g| below this multiple of psi counts as g = 0.
pub const G_DEGENERATE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremTag {
    /// Subordinator tail, H form.
    T1_1,
    /// Subordinator tail, phi form.
    C1_2,
    /// Isotropic tail, psi form.
    T1_3i,
    /// Isotropic tail, g form.
    T1_3ii,
    T1_4iDensity,
    T1_4iKernel,
    T1_4iiDensity,
    T1_4iiKernel,
    /// Levy-measure tail of a subordinator.
    P2LevyTail,
    /// Isotropic density through the H of the Gaussian-averaged exponent.
    T4Main2,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 10] = [
        TheoremTag::T1_1,
        TheoremTag::C1_2,
        TheoremTag::T1_3i,
        TheoremTag::T1_3ii,
        TheoremTag::T1_4iDensity,
        TheoremTag::T1_4iKernel,
        TheoremTag::T1_4iiDensity,
        TheoremTag::T1_4iiKernel,
        TheoremTag::P2LevyTail,
        TheoremTag::T4Main2,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            TheoremTag::T1_1 => "T1_1",
            TheoremTag::C1_2 => "C1_2",
            TheoremTag::T1_3i => "T1_3i",
            TheoremTag::T1_3ii => "T1_3ii",
            TheoremTag::T1_4iDensity => "T1_4i_density",
            TheoremTag::T1_4iKernel => "T1_4i_kernel",
            TheoremTag::T1_4iiDensity => "T1_4ii_density",
            TheoremTag::T1_4iiKernel => "T1_4ii_kernel",
            TheoremTag::P2LevyTail => "P2_levy_tail",
            TheoremTag::T4Main2 => "T4_main2",
        }
    }

    /// Descriptive alias accepted on the command line.
    pub fn alias(&self) -> &'static str {
        match self {
            TheoremTag::T1_1 => "subordinator-tail",
            TheoremTag::C1_2 => "subordinator-tail-phi",
            TheoremTag::T1_3i => "isotropic-tail-psi",
            TheoremTag::T1_3ii => "isotropic-tail-g",
            TheoremTag::T1_4iDensity => "density-psi",
            TheoremTag::T1_4iKernel => "kernel-psi",
            TheoremTag::T1_4iiDensity => "density-g",
            TheoremTag::T1_4iiKernel => "kernel-g",
            TheoremTag::P2LevyTail => "levy-tail",
            TheoremTag::T4Main2 => "density-h",
        }
    }

    /// True for statements about subordinators.
    pub fn is_subordinator(&self) -> bool {
        matches!(self, TheoremTag::T1_1 | TheoremTag::C1_2 | TheoremTag::P2LevyTail)
    }

    /// True when the prediction does not depend on t.
    pub fn is_time_free(&self) -> bool {
        matches!(self, TheoremTag::T1_4iKernel | TheoremTag::T1_4iiKernel | TheoremTag::P2LevyTail)
    }

    /// True when the spatial argument is a density radius rather than a tail level.
    pub fn is_radius(&self) -> bool {
        matches!(self, TheoremTag::T1_4iDensity | TheoremTag::T1_4iKernel | TheoremTag::T1_4iiDensity | TheoremTag::T1_4iiKernel | TheoremTag::T4Main2)
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TheoremTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL.into_iter().find(|t| t.tag().eq_ignore_ascii_case(s) || t.alias() == s).ok_or_else(|| Error::Config(format!("unknown theorem {s:?}")))
    }
}

/// A predicted value with its constant and regime parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub value: f64,
    pub leading_constant: f64,
    /// Must tend to 0 for the prediction to be valid.
    pub epsilon: f64,
    pub regime: Regime,
    pub theorem: TheoremTag,
    /// The constant or the driving function vanishes; value is 0 at first order.
    pub degenerate: bool,
}

impl AsymptoticPrediction {
    pub fn is_valid(&self, threshold: f64) -> bool {
        !self.degenerate && self.epsilon <= threshold
    }
}

/// H(lambda) = phi(lambda) - lambda phi'(lambda).
pub fn h_of(spec: &SubordinatorSpec, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain { what: "H argument", value: lambda });
    }
    let h = match spec.h_closed_form(lambda) {
        Some(h) => h,
        None => spec.phi(lambda) - lambda * spec.phi_prime(lambda)?,
    };
    clamp_h(h)
}

fn clamp_h(h: f64) -> Result<f64> {
    if !h.is_finite() {
        return Err(Error::NonFinite(h));
    }
    if h < 0.0 {
        if h > -H_CLAMP {
            return Ok(0.0);
        }
        return Err(Error::Precondition(format!("H = {h} is negative; phi is not concave")));
    }
    Ok(h)
}

/// g(u) = psi(u) - (u/2) psi'(u).
pub fn g_of(spec: &IsotropicExponentSpec, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain { what: "g argument", value: u });
    }
    match spec.g_closed_form(u) {
        Some(g) => Ok(g),
        None => Ok(spec.psi(u) - 0.5 * u * spec.psi_prime(u)?),
    }
}

const AUX_BREAKS: [f64; 10] = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 12.0];

fn aux_integral(spec: &IsotropicExponentSpec, lambda: f64, cfg: &QuadratureConfig, weight: impl Fn(f64) -> f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain { what: "aux argument", value: lambda });
    }
    let d = spec.dimension as f64;
    let scale = 2.0 * lambda.sqrt();
    let f = |v: f64| {
        if v == 0.0 {
            return 0.0;
        }
        (-v * v).exp() * v.powf(d - 1.0) * weight(v) * spec.psi(scale * v)
    };
    let e = integrate_pieces(f, &AUX_BREAKS, cfg)?;
    Ok(2.0 * e.value / gamma(0.5 * d)?)
}

/// Gaussian average of psi: (2/Gamma(d/2)) int e^(-v^2) v^(d-1) psi(2 sqrt(lambda) v) dv.
pub fn aux_phi(spec: &IsotropicExponentSpec, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    aux_integral(spec, lambda, cfg, |_| 1.0)
}

/// H of the Gaussian-averaged exponent, via the signed kernel (d+2)/2 - v^2.
pub fn aux_h(spec: &IsotropicExponentSpec, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let d = spec.dimension as f64;
    aux_integral(spec, lambda, cfg, |v| 0.5 * (d + 2.0) - v * v)
}

/// H of the Gaussian-averaged exponent as the Gaussian average of g.
pub fn aux_h_from_g(spec: &IsotropicExponentSpec, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain { what: "aux argument", value: lambda });
    }
    let d = spec.dimension as f64;
    let scale = 2.0 * lambda.sqrt();
    let f = |v: f64| {
        if v == 0.0 {
            return 0.0;
        }
        (-v * v).exp() * v.powf(d - 1.0) * g_of(spec, scale * v).unwrap_or(f64::NAN)
    };
    let e = integrate_pieces(f, &AUX_BREAKS, cfg)?;
    Ok(2.0 * e.value / gamma(0.5 * d)?)
}

/// aux_phi(lambda) / psi(sqrt(lambda)) in the limit, psi of index alpha.
pub fn aux_phi_constant(alpha: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(2f64.powf(alpha) * gamma(0.5 * (df + alpha))? / gamma(0.5 * df)?)
}

/// aux_H(lambda) / psi(sqrt(lambda)) in the limit, psi of index alpha.
pub fn aux_h_psi_constant(alpha: f64, d: usize) -> Result<f64> {
    Ok((1.0 - 0.5 * alpha) * aux_phi_constant(alpha, d)?)
}

/// aux_H(lambda) / g(sqrt(lambda)) in the limit, g of index alpha.
pub fn aux_h_g_constant(alpha: f64, d: usize) -> Result<f64> {
    aux_phi_constant(alpha, d)
}

pub fn tail_psi_constant(alpha: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok((2.0 - alpha) * 2f64.powf(alpha - 1.0) * gamma(0.5 * (df + alpha))? / (gamma(2.0 - 0.5 * alpha)? * gamma(0.5 * df)?))
}

pub fn tail_g_constant(alpha: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(2f64.powf(alpha - 1.0) * gamma(0.5 * (df + alpha))? / (gamma(2.0 - 0.5 * alpha)? * gamma(0.5 * df)?))
}

pub fn density_psi_constant(alpha: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(alpha * 2f64.powf(alpha - 1.0) * PI.powf(-0.5 * df) * gamma(0.5 * (df + alpha))? / gamma(1.0 - 0.5 * alpha)?)
}

/// Same constant written with sin(alpha pi/2) Gamma(alpha/2).
pub fn density_psi_constant_sine_form(alpha: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(alpha * 2f64.powf(alpha - 1.0) * PI.powf(-0.5 * df - 1.0) * (0.5 * alpha * PI).sin() * gamma(0.5 * alpha)? * gamma(0.5 * (df + alpha))?)
}

pub fn density_g_constant(alpha: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(alpha * 2f64.powf(alpha - 1.0) * PI.powf(-0.5 * df) * gamma(0.5 * (df + alpha))? / gamma(2.0 - 0.5 * alpha)?)
}

pub fn density_h_constant(gamma_index: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(gamma_index * PI.powf(-0.5 * df) * gamma(0.5 * df)? / gamma(2.0 - gamma_index)?)
}

/// Density constant of B_{T_t} against t |x|^-d phi(|x|^-2), phi of index gamma < 1.
pub fn sbm_density_phi_constant(gamma_index: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(gamma_index * 4f64.powf(gamma_index) * PI.powf(-0.5 * df) * gamma(0.5 * df + gamma_index)? / gamma(1.0 - gamma_index)?)
}

/// Density constant of B_{T_t} against t |x|^-d H(|x|^-2), H of index gamma < 2.
pub fn sbm_density_h_constant(gamma_index: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(gamma_index * 4f64.powf(gamma_index) * PI.powf(-0.5 * df) * gamma(0.5 * df + gamma_index)? / gamma(2.0 - gamma_index)?)
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: name, value: x })
    }
}

fn check_index(index: f64, ok: bool, allowed: &'static str) -> Result<()> {
    if ok && index.is_finite() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, allowed })
    }
}

/// P(T_t >= r) ~ t H(1/r) / Gamma(2 - gamma).
pub fn predict_subordinator_tail(spec: &SubordinatorSpec, t: f64, r: f64, gamma_index: f64, regime: Regime) -> Result<AsymptoticPrediction> {
    check_positive("t", t)?;
    check_positive("r", r)?;
    check_index(gamma_index, (0.0..2.0).contains(&gamma_index), "[0, 2)")?;
    let lambda = 1.0 / r;
    let h = h_of(spec, lambda)?;
    if h == 0.0 {
        return Err(Error::DegenerateH(lambda));
    }
    let phi = spec.phi(lambda);
    let c = 1.0 / gamma(2.0 - gamma_index)?;
    Ok(AsymptoticPrediction { value: c * t * h, leading_constant: c, epsilon: t * phi * phi / h, regime, theorem: TheoremTag::T1_1, degenerate: false })
}

/// P(T_t >= r) ~ t phi(1/r) / Gamma(1 - gamma), gamma < 1.
pub fn predict_subordinator_tail_simple(spec: &SubordinatorSpec, t: f64, r: f64, gamma_index: f64, regime: Regime) -> Result<AsymptoticPrediction> {
    check_positive("t", t)?;
    check_positive("r", r)?;
    check_index(gamma_index, (0.0..1.0).contains(&gamma_index), "[0, 1)")?;
    let phi = spec.phi(1.0 / r);
    let c = 1.0 / gamma(1.0 - gamma_index)?;
    Ok(AsymptoticPrediction { value: c * t * phi, leading_constant: c, epsilon: t * phi, regime, theorem: TheoremTag::C1_2, degenerate: false })
}

/// mu(r, inf) ~ H(1/r) / Gamma(2 - gamma), gamma in [0, 1].
pub fn predict_levy_measure_tail(spec: &SubordinatorSpec, r: f64, gamma_index: f64, regime: Regime) -> Result<AsymptoticPrediction> {
    check_positive("r", r)?;
    check_index(gamma_index, (0.0..=1.0).contains(&gamma_index), "[0, 1]")?;
    let h = h_of(spec, 1.0 / r)?;
    let c = 1.0 / gamma(2.0 - gamma_index)?;
    Ok(AsymptoticPrediction { value: c * h, leading_constant: c, epsilon: 0.0, regime, theorem: TheoremTag::P2LevyTail, degenerate: h == 0.0 })
}

/// Which of the two forms of an isotropic statement to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsotropicMode {
    /// Driven by psi, index alpha in [0, 2).
    Psi,
    /// Driven by g, index alpha in [0, 4).
    G,
}

fn check_no_diffusion(spec: &IsotropicExponentSpec, alpha: f64, regime: Regime) -> Result<()> {
    if regime == Regime::AtInfinity && alpha < 2.0 && spec.diffusion_a != 0.0 {
        return Err(Error::Precondition(format!("g-form at infinity with index {alpha} < 2 requires no diffusion part (a = {})", spec.diffusion_a)));
    }
    Ok(())
}

fn g_nondegenerate(spec: &IsotropicExponentSpec, u: f64) -> Result<f64> {
    let g = g_of(spec, u)?;
    if g.abs() <= G_DEGENERATE * spec.psi(u).abs() {
        return Err(Error::DegenerateG(u));
    }
    Ok(g)
}

/// P(|X_t| >= r) in psi form or g form.
pub fn predict_isotropic_tail(spec: &IsotropicExponentSpec, t: f64, r: f64, alpha: f64, mode: IsotropicMode, regime: Regime) -> Result<AsymptoticPrediction> {
    check_positive("t", t)?;
    check_positive("r", r)?;
    let u = 1.0 / r;
    let psi = spec.psi(u);
    let d = spec.dimension;
    match mode {
        IsotropicMode::Psi => {
            check_index(alpha, (0.0..2.0).contains(&alpha), "[0, 2)")?;
            let c = tail_psi_constant(alpha, d)?;
            Ok(AsymptoticPrediction { value: c * t * psi, leading_constant: c, epsilon: t * psi, regime, theorem: TheoremTag::T1_3i, degenerate: false })
        }
        IsotropicMode::G => {
            check_index(alpha, (0.0..4.0).contains(&alpha), "[0, 4)")?;
            check_no_diffusion(spec, alpha, regime)?;
            let g = g_nondegenerate(spec, u)?;
            let c = tail_g_constant(alpha, d)?;
            Ok(AsymptoticPrediction {
                value: c * t * g,
                leading_constant: c,
                epsilon: t * psi * psi / g,
                regime,
                theorem: TheoremTag::T1_3ii,
                degenerate: false,
            })
        }
    }
}

fn check_unimodal(spec: &IsotropicExponentSpec) -> Result<()> {
    if spec.unimodal {
        Ok(())
    } else {
        Err(Error::NotUnimodal(spec.name.clone()))
    }
}

/// Density q(t, rho) in psi form or g form; requires a unimodal process.
pub fn predict_density(spec: &IsotropicExponentSpec, t: f64, rho: f64, alpha: f64, mode: IsotropicMode, regime: Regime) -> Result<AsymptoticPrediction> {
    check_unimodal(spec)?;
    check_positive("t", t)?;
    check_positive("rho", rho)?;
    let u = 1.0 / rho;
    let psi = spec.psi(u);
    let d = spec.dimension;
    let rho_d = rho.powi(-(d as i32));
    match mode {
        IsotropicMode::Psi => {
            check_index(alpha, (0.0..2.0).contains(&alpha), "[0, 2)")?;
            let c = density_psi_constant(alpha, d)?;
            Ok(AsymptoticPrediction {
                value: c * t * rho_d * psi,
                leading_constant: c,
                epsilon: t * psi,
                regime,
                theorem: TheoremTag::T1_4iDensity,
                degenerate: c == 0.0,
            })
        }
        IsotropicMode::G => {
            check_index(alpha, (0.0..4.0).contains(&alpha), "[0, 4)")?;
            check_no_diffusion(spec, alpha, regime)?;
            let g = g_nondegenerate(spec, u)?;
            let c = density_g_constant(alpha, d)?;
            Ok(AsymptoticPrediction {
                value: c * t * rho_d * g,
                leading_constant: c,
                epsilon: t * psi * psi / g,
                regime,
                theorem: TheoremTag::T1_4iiDensity,
                degenerate: c == 0.0,
            })
        }
    }
}

/// Levy kernel J(rho) in psi form or g form; no time dependence.
pub fn predict_levy_kernel(spec: &IsotropicExponentSpec, rho: f64, alpha: f64, mode: IsotropicMode, regime: Regime) -> Result<AsymptoticPrediction> {
    let mut p = predict_density(spec, 1.0, rho, alpha, mode, regime)?;
    p.epsilon = 0.0;
    p.theorem = match mode {
        IsotropicMode::Psi => TheoremTag::T1_4iKernel,
        IsotropicMode::G => TheoremTag::T1_4iiKernel,
    };
    Ok(p)
}

/// Density through aux_H: (gamma pi^(-d/2) Gamma(d/2) / Gamma(2 - gamma)) t rho^-d aux_H(rho^-2).
pub fn predict_density_h_form(
    spec: &IsotropicExponentSpec,
    t: f64,
    rho: f64,
    gamma_index: f64,
    regime: Regime,
    cfg: &QuadratureConfig,
) -> Result<AsymptoticPrediction> {
    check_unimodal(spec)?;
    check_positive("t", t)?;
    check_positive("rho", rho)?;
    check_index(gamma_index, (0.0..2.0).contains(&gamma_index), "[0, 2)")?;
    let lambda = rho.powi(-2);
    let h = clamp_h(aux_h(spec, lambda, cfg)?)?;
    let psi = spec.psi(1.0 / rho);
    let c = density_h_constant(gamma_index, spec.dimension)?;
    let epsilon = if h > 0.0 { t * psi * psi / h } else { f64::INFINITY };
    Ok(AsymptoticPrediction {
        value: c * t * rho.powi(-(spec.dimension as i32)) * h,
        leading_constant: c,
        epsilon,
        regime,
        theorem: TheoremTag::T4Main2,
        degenerate: c == 0.0 || h == 0.0,
    })
}

/// Which function drives a subordinate-Brownian density prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SbmForm {
    /// phi of index gamma in [0, 1).
    Phi,
    /// H of index gamma in [0, 2).
    H,
}

/// Density of B_{T_t} in R^d directly from the subordinator.
pub fn predict_sbm_density(
    sub: &SubordinatorSpec,
    d: usize,
    t: f64,
    rho: f64,
    gamma_index: f64,
    form: SbmForm,
    regime: Regime,
) -> Result<AsymptoticPrediction> {
    check_positive("t", t)?;
    check_positive("rho", rho)?;
    let lambda = rho.powi(-2);
    let phi = sub.phi(lambda);
    let rho_d = rho.powi(-(d as i32));
    match form {
        SbmForm::Phi => {
            check_index(gamma_index, (0.0..1.0).contains(&gamma_index), "[0, 1)")?;
            let c = sbm_density_phi_constant(gamma_index, d)?;
            Ok(AsymptoticPrediction {
                value: c * t * rho_d * phi,
                leading_constant: c,
                epsilon: t * phi,
                regime,
                theorem: TheoremTag::T1_4iDensity,
                degenerate: c == 0.0,
            })
        }
        SbmForm::H => {
            check_index(gamma_index, (0.0..2.0).contains(&gamma_index), "[0, 2)")?;
            if regime == Regime::AtInfinity && gamma_index < 1.0 && sub.drift_b != 0.0 {
                return Err(Error::Precondition("H form at infinity with index < 1 requires zero drift".into()));
            }
            let h = h_of(sub, lambda)?;
            let c = sbm_density_h_constant(gamma_index, d)?;
            let epsilon = if h > 0.0 { t * phi * phi / h } else { f64::INFINITY };
            Ok(AsymptoticPrediction {
                value: c * t * rho_d * h,
                leading_constant: c,
                epsilon,
                regime,
                theorem: TheoremTag::T4Main2,
                degenerate: c == 0.0 || h == 0.0,
            })
        }
    }
}

/// Index of aux_H implied by the declared g or psi index.
pub fn aux_h_index(spec: &IsotropicExponentSpec, regime: Regime) -> Result<f64> {
    if let Some(g) = spec.regvar.get(Quantity::G, regime) {
        let gamma_index = 0.5 * g.index;
        check_index(gamma_index, gamma_index < 2.0, "[0, 2)")?;
        return Ok(gamma_index);
    }
    let psi = spec.regvar.require(Quantity::Psi, regime)?;
    if psi.index < 2.0 {
        Ok(0.5 * psi.index)
    } else {
        Err(Error::MissingRegVar { quantity: "g", regime: regime.as_str() })
    }
}

/// Prediction with indices taken from the declared metadata.
pub fn predict_subordinator(spec: &SubordinatorSpec, theorem: TheoremTag, regime: Regime, t: f64, r: f64) -> Result<AsymptoticPrediction> {
    match theorem {
        TheoremTag::T1_1 => {
            let g = spec.regvar.require(Quantity::H, regime)?.index;
            predict_subordinator_tail(spec, t, r, g, regime)
        }
        TheoremTag::C1_2 => {
            let g = spec.regvar.require(Quantity::Phi, regime)?.index;
            predict_subordinator_tail_simple(spec, t, r, g, regime)
        }
        TheoremTag::P2LevyTail => {
            let g = match spec.regvar.get(Quantity::H, regime) {
                Some(info) => info.index,
                // H = 0 identically for a pure drift; any index gives 0
                None if spec.h_closed_form(1.0) == Some(0.0) => 0.0,
                None => return Err(Error::MissingRegVar { quantity: "H", regime: regime.as_str() }),
            };
            predict_levy_measure_tail(spec, r, g, regime)
        }
        other => Err(Error::Precondition(format!("{other} applies to isotropic processes, not subordinators"))),
    }
}

/// Prediction with indices taken from the declared metadata.
pub fn predict_isotropic(
    spec: &IsotropicExponentSpec,
    theorem: TheoremTag,
    regime: Regime,
    t: f64,
    r: f64,
    cfg: &QuadratureConfig,
) -> Result<AsymptoticPrediction> {
    let psi_index = || spec.regvar.require(Quantity::Psi, regime).map(|i| i.index);
    let g_index = || spec.regvar.require(Quantity::G, regime).map(|i| i.index);
    match theorem {
        TheoremTag::T1_3i => predict_isotropic_tail(spec, t, r, psi_index()?, IsotropicMode::Psi, regime),
        TheoremTag::T1_3ii => predict_isotropic_tail(spec, t, r, g_index()?, IsotropicMode::G, regime),
        TheoremTag::T1_4iDensity => predict_density(spec, t, r, psi_index()?, IsotropicMode::Psi, regime),
        TheoremTag::T1_4iiDensity => predict_density(spec, t, r, g_index()?, IsotropicMode::G, regime),
        TheoremTag::T1_4iKernel => predict_levy_kernel(spec, r, psi_index()?, IsotropicMode::Psi, regime),
        TheoremTag::T1_4iiKernel => predict_levy_kernel(spec, r, g_index()?, IsotropicMode::G, regime),
        TheoremTag::T4Main2 => {
            psi_index()?;
            predict_density_h_form(spec, t, r, aux_h_index(spec, regime)?, regime, cfg)
        }
        other => Err(Error::Precondition(format!("{other} applies to subordinators, not isotropic processes"))),
    }
}
