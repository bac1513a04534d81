//! Tails of subordinators and of their Levy measures by numerical Laplace inversion.

use std::f64::consts::LN_2;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::h_of;
use crate::error::{Error, Result};
use crate::processes::SubordinatorSpec;
use crate::quadrature::{integrate, QuadratureConfig};

/// Relative disagreement between two node counts that counts as unstable.
pub const INSTABILITY_TOL: f64 = 1e-4;
/// Absolute floor of the disagreement test, below which values are noise.
pub const INSTABILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplaceMethod {
    /// Fixed Talbot when the spec has a complex phi, else Gaver-Stehfest.
    Auto,
    GaverStehfest,
    FixedTalbot,
}

impl std::str::FromStr for LaplaceMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(LaplaceMethod::Auto),
            "gaver-stehfest" | "gaver_stehfest" | "gs" => Ok(LaplaceMethod::GaverStehfest),
            "fixed-talbot" | "fixed_talbot" | "talbot" => Ok(LaplaceMethod::FixedTalbot),
            other => Err(Error::Config(format!("unknown inversion method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    pub method: LaplaceMethod,
    /// Even, in [8, 20].
    pub gs_terms: usize,
    /// At least 16; the stability check reruns with 8 fewer nodes.
    pub talbot_nodes: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self { method: LaplaceMethod::Auto, gs_terms: 16, talbot_nodes: 32 }
    }
}

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.gs_terms.is_multiple_of(2) || !(8..=20).contains(&self.gs_terms) {
            return Err(Error::Config(format!("gs_terms must be even and in [8, 20], got {}", self.gs_terms)));
        }
        if !(16..=256).contains(&self.talbot_nodes) {
            return Err(Error::Config(format!("talbot_nodes must be in [16, 256], got {}", self.talbot_nodes)));
        }
        Ok(())
    }

    fn uses_talbot(&self, spec: &SubordinatorSpec) -> Result<bool> {
        match self.method {
            LaplaceMethod::GaverStehfest => Ok(false),
            LaplaceMethod::FixedTalbot if !spec.has_complex_phi() => {
                Err(Error::Config(format!("{} has no complex phi; fixed Talbot is unavailable", spec.name)))
            }
            LaplaceMethod::FixedTalbot => Ok(true),
            LaplaceMethod::Auto => Ok(spec.has_complex_phi()),
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Gaver-Stehfest weights V_1..V_n.
pub fn stehfest_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    (1..=n)
        .map(|k| {
            let mut sum = 0.0;
            for j in k.div_ceil(2)..=k.min(half) {
                sum += (j as f64).powi(half as i32) * factorial(2 * j)
                    / (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k));
            }
            if (k + half).is_multiple_of(2) {
                sum
            } else {
                -sum
            }
        })
        .collect()
}

/// Inverse Laplace transform of a real-axis sampled F at x > 0.
pub fn gaver_stehfest(f: &dyn Fn(f64) -> f64, x: f64, n: usize) -> f64 {
    let a = LN_2 / x;
    stehfest_weights(n).iter().enumerate().map(|(i, w)| w * f((i + 1) as f64 * a)).sum::<f64>() * a
}

/// Inverse Laplace transform by the fixed Talbot contour with m nodes.
pub fn fixed_talbot(f: &dyn Fn(Complex64) -> Complex64, x: f64, m: usize) -> f64 {
    let r = 2.0 * m as f64 / (5.0 * x);
    let mut sum = 0.5 * (f(Complex64::new(r, 0.0)) * (r * x).exp()).re;
    for k in 1..m {
        let theta = k as f64 * PI / m as f64;
        let cot = 1.0 / theta.tan();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        sum += ((s * x).exp() * f(s) * Complex64::new(1.0, sigma)).re;
    }
    sum * r / m as f64
}

const EULER_SHIFT: f64 = 23.0;
const EULER_TERMS: usize = 60;
const EULER_AVERAGING: usize = 15;

/// Inverse Laplace transform from the Bromwich line Re s = A/(2x), with
/// Euler summation (binomial averaging of partial sums n..n+m).
///
/// Discretization error is about e^-A times the bound on f; only Re s > 0 is sampled.
pub fn euler_bromwich(f: &dyn Fn(Complex64) -> Complex64, x: f64, n: usize, m: usize) -> f64 {
    let a = EULER_SHIFT;
    let h = (0.5 * a).exp() / x;
    let mut sum = 0.5 * h * f(Complex64::new(a / (2.0 * x), 0.0)).re;
    let mut partial = Vec::with_capacity(m + 1);
    for k in 1..=n + m {
        let z = Complex64::new(a, 2.0 * PI * k as f64) / (2.0 * x);
        let term = h * f(z).re;
        sum += if k % 2 == 0 { term } else { -term };
        if k >= n {
            partial.push(sum);
        }
    }
    let mut binom = 1.0;
    let mut total = 0.0;
    for (j, p) in partial.iter().enumerate() {
        total += binom * p;
        binom *= (m - j) as f64 / (j + 1) as f64;
    }
    total / 2f64.powi(m as i32)
}

/// 1 - e^(-z) without cancellation for small |z|.
fn one_minus_exp_neg(z: Complex64) -> Complex64 {
    // e^w - 1 with w = -z, real part written as expm1(x) cos y - 2 sin^2(y/2)
    let (x, y) = (-z.re, -z.im);
    let half = (0.5 * y).sin();
    let em1 = Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin());
    -em1
}

fn pair_agrees(primary: f64, secondary: f64) -> bool {
    primary.is_finite() && secondary.is_finite() && (primary - secondary).abs() <= INSTABILITY_TOL * primary.abs().max(secondary.abs()) + INSTABILITY_FLOOR
}

fn checked(primary: f64, secondary: f64) -> Result<f64> {
    if !pair_agrees(primary, secondary) {
        return Err(Error::InversionInstability { primary, secondary });
    }
    let clamped = primary.clamp(0.0, 1.0);
    if (clamped - primary).abs() > INSTABILITY_TOL {
        return Err(Error::InversionInstability { primary, secondary: clamped });
    }
    Ok(clamped)
}

/// Runs the chosen method at the configured and at the reduced node count.
fn invert_pair(
    spec: &SubordinatorSpec,
    x: f64,
    cfg: &InversionConfig,
    real: &dyn Fn(f64) -> f64,
    complex: &dyn Fn(Complex64) -> Complex64,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    let stehfest = || (gaver_stehfest(real, x, cfg.gs_terms), gaver_stehfest(real, x, cfg.gs_terms - 2));
    if !cfg.uses_talbot(spec)? {
        return Ok(stehfest());
    }
    let pair = (fixed_talbot(complex, x, cfg.talbot_nodes), fixed_talbot(complex, x, cfg.talbot_nodes - 8));
    // e^(-t phi) can blow up on the left half of the contour when x is small
    if cfg.method == LaplaceMethod::Auto && !pair_agrees(pair.0, pair.1) {
        return Ok((euler_bromwich(complex, x, EULER_TERMS, EULER_AVERAGING), euler_bromwich(complex, x, EULER_TERMS - 15, EULER_AVERAGING)));
    }
    Ok(pair)
}

fn check_positive(what: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

fn tail_pair(spec: &SubordinatorSpec, t: f64, x: f64, cfg: &InversionConfig) -> Result<(f64, f64)> {
    let b = spec.drift_b;
    let real = |l: f64| -(-t * (spec.phi(l) - b * l)).exp_m1() / l;
    let complex = |s: Complex64| {
        let phi = spec.phi_complex(s).unwrap_or(Complex64::new(f64::NAN, 0.0));
        one_minus_exp_neg((phi - s * b) * t) / s
    };
    invert_pair(spec, x, cfg, &real, &complex)
}

/// P(T_t >= r) by inverting (1 - e^(-t phi(l)))/l, after removing the drift.
pub fn subordinator_tail_exact(spec: &SubordinatorSpec, t: f64, r: f64, cfg: &InversionConfig) -> Result<f64> {
    check_positive("time", t)?;
    check_positive("radius", r)?;
    let x = r - spec.drift_b * t;
    if x <= 0.0 {
        return Ok(1.0);
    }
    let (p, s) = tail_pair(spec, t, x, cfg)?;
    checked(p, s)
}

/// Same as [`subordinator_tail_exact`] but clamps without the stability check.
pub fn subordinator_tail_unchecked(spec: &SubordinatorSpec, t: f64, r: f64, cfg: &InversionConfig) -> Result<f64> {
    check_positive("time", t)?;
    check_positive("radius", r)?;
    let x = r - spec.drift_b * t;
    if x <= 0.0 {
        return Ok(1.0);
    }
    Ok(tail_pair(spec, t, x, cfg)?.0.clamp(0.0, 1.0))
}

/// Levy-measure tail mu(r, inf) by inverting (phi(l) - b l)/l.
pub fn levy_tail_exact(spec: &SubordinatorSpec, r: f64, cfg: &InversionConfig) -> Result<f64> {
    check_positive("radius", r)?;
    let b = spec.drift_b;
    let real = |l: f64| (spec.phi(l) - b * l) / l;
    let complex = |s: Complex64| (spec.phi_complex(s).unwrap_or(Complex64::new(f64::NAN, 0.0)) - s * b) / s;
    let (p, s) = invert_pair(spec, r, cfg, &real, &complex)?;
    if !pair_agrees(p, s) {
        return Err(Error::InversionInstability { primary: p, secondary: s });
    }
    Ok(p.max(0.0))
}

/// Where the tail values in [`forward_laplace_check`] come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailSource {
    Inversion(InversionConfig),
    /// The catalog closed form; an error if the spec has none.
    ClosedForm,
}

/// (e^x - 1 - x) accurate for small x.
fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let mut term = x * x / 2.0;
        let mut sum = term;
        for k in 3..30 {
            term *= x / k as f64;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// int_0^inf e^(-l r) r P(T_t >= r) dr in closed form.
pub fn tail_moment_transform(spec: &SubordinatorSpec, t: f64, lambda: f64) -> Result<f64> {
    let x = t * spec.phi(lambda);
    let h = h_of(spec, lambda)?;
    Ok((-x).exp() * (expm1_minus_x(x) + t * h) / (lambda * lambda))
}

/// Relative deviation between the quadrature of e^(-l r) r P(T_t >= r)
/// and its closed form.
pub fn forward_laplace_check(spec: &SubordinatorSpec, t: f64, lambda: f64, cfg: &QuadratureConfig, source: TailSource) -> Result<f64> {
    check_positive("time", t)?;
    check_positive("lambda", lambda)?;
    cfg.validate()?;
    let tail = |r: f64| -> Result<f64> {
        match source {
            TailSource::Inversion(inv) => subordinator_tail_unchecked(spec, t, r, &inv),
            TailSource::ClosedForm => spec.exact_tail(t, r).ok_or_else(|| Error::NoOracle(format!("{} has no closed-form tail", spec.name))),
        }
    };
    tail(1.0)?;
    let c = spec.drift_b * t;
    // the tail is 1 on [0, bt]
    let lc = lambda * c;
    let head = -((-lc).exp() * (1.0 + lc) - 1.0) / (lambda * lambda);
    let head = if lc < 0.1 { (-lc).exp() * expm1_minus_x(lc) / (lambda * lambda) } else { head };
    // r = c - ln(v)/lambda maps (0, 1] onto [c, inf)
    let f = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let r = c - v.ln() / lambda;
        if r <= 0.0 {
            return 0.0;
        }
        r * tail(r).unwrap_or(f64::NAN)
    };
    let rel_tol = match source {
        TailSource::Inversion(_) => cfg.rel_tol.max(1e-8),
        TailSource::ClosedForm => cfg.rel_tol,
    };
    let body = integrate(f, 0.0, 1.0, cfg.abs_tol, rel_tol, cfg.max_depth)?;
    let left = head + (-lc).exp() * body.value / lambda;
    let right = tail_moment_transform(spec, t, lambda)?;
    Ok(((left - right) / right).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::catalog::{drift_subordinator, gamma_subordinator, log_ratio_subordinator, stable_subordinator};
    use crate::specfun::{erf, gamma_q};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn stehfest_weights_sum_to_zero() {
        for n in [8, 12, 16, 20] {
            let w = stehfest_weights(n);
            let s: f64 = w.iter().sum();
            let scale: f64 = w.iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert!(s.abs() < 1e-10 * scale, "{n}: {s}");
        }
        let w = stehfest_weights(8);
        assert!((w[0] + 1.0 / 3.0).abs() < 1e-12);
        let want = [-1.0 / 3.0, 145.0 / 3.0, -906.0, 16394.0 / 3.0, -43130.0 / 3.0, 18730.0, -35840.0 / 3.0, 8960.0 / 3.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-9 * b.abs());
        }
    }

    #[test]
    fn known_transform_pairs() {
        // 1/(s+1) <-> e^-x, 1/s^2 <-> x
        let x: f64 = 1.3;
        assert!(rel(gaver_stehfest(&|s| 1.0 / (s + 1.0), x, 16), (-x).exp()) < 1e-5);
        assert!(rel(fixed_talbot(&|s| (s + 1.0).inv(), x, 32), (-x).exp()) < 1e-9);
        assert!(rel(fixed_talbot(&|s| (s * s).inv(), x, 32), x) < 1e-9);
        assert!(rel(euler_bromwich(&|s| (s + 1.0).inv(), x, 60, 15), (-x).exp()) < 1e-8);
        assert!(rel(euler_bromwich(&|s| (s * s).inv(), x, 60, 15), x) < 1e-8);
    }

    #[test]
    fn near_drift_tail_falls_back_to_the_bromwich_line() {
        // Re s^g < 0 on part of the Talbot contour once g > 1/2
        let s = stable_subordinator(0.9).unwrap();
        let cfg = InversionConfig::default();
        let talbot = InversionConfig { method: LaplaceMethod::FixedTalbot, ..cfg };
        assert!(subordinator_tail_exact(&s, 0.1, 1e-3, &talbot).is_err());
        let v = subordinator_tail_exact(&s, 0.1, 1e-3, &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
        // where both work they agree
        let a = subordinator_tail_exact(&s, 0.1, 1.0, &talbot).unwrap();
        let complex = |z: Complex64| one_minus_exp_neg(z.powf(0.9) * 0.1) / z;
        assert!(rel(euler_bromwich(&complex, 1.0, 60, 15), a) < 1e-8);
    }

    #[test]
    fn stable_half_tail_matches_erf() {
        let s = stable_subordinator(0.5).unwrap();
        let cfg = InversionConfig::default();
        let v = subordinator_tail_exact(&s, 1.0, 1.0, &cfg).unwrap();
        assert!((v - 0.520_499_877_813_046_5).abs() < 1e-10, "{v}");
        for (t, r) in [(0.1, 0.01), (1.0, 10.0), (0.01, 1e4), (3.0, 0.5)] {
            let v = subordinator_tail_exact(&s, t, r, &cfg).unwrap();
            assert!(rel(v, erf(t / (2.0 * f64::sqrt(r)))) < 1e-6, "{t} {r}");
        }
        let gs = InversionConfig { method: LaplaceMethod::GaverStehfest, ..cfg };
        let v = subordinator_tail_exact(&s, 1.0, 1.0, &gs).unwrap();
        assert!(rel(v, 0.520_499_877_813_046_5) < 1e-4, "{v}");
    }

    #[test]
    fn gamma_tail_matches_incomplete_gamma() {
        let s = gamma_subordinator().unwrap();
        let cfg = InversionConfig::default();
        for (t, r) in [(0.5, 0.1), (1.0, 1.0), (2.0, 3.0), (0.1, 5.0)] {
            let v = subordinator_tail_exact(&s, t, r, &cfg).unwrap();
            assert!(rel(v, gamma_q(t, r).unwrap()) < 1e-6, "{t} {r}: {v}");
        }
    }

    #[test]
    fn drift_is_a_step() {
        let b = drift_subordinator(1.0).unwrap();
        let cfg = InversionConfig::default();
        assert_eq!(subordinator_tail_exact(&b, 1.0, 0.5, &cfg).unwrap(), 1.0);
        assert!(subordinator_tail_exact(&b, 1.0, 2.0, &cfg).unwrap().abs() < 1e-3);
        let gs = InversionConfig { method: LaplaceMethod::GaverStehfest, ..cfg };
        assert!(subordinator_tail_exact(&b, 1.0, 2.0, &gs).unwrap().abs() < 1e-3);
    }

    #[test]
    fn levy_tails() {
        let cfg = InversionConfig::default();
        let s = stable_subordinator(0.5).unwrap();
        assert!(rel(levy_tail_exact(&s, 4.0, &cfg).unwrap(), 0.282_094_791_773_878_14) < 1e-9);
        let g = gamma_subordinator().unwrap();
        for r in [1e-3, 0.5, 2.0] {
            assert!(rel(levy_tail_exact(&g, r, &cfg).unwrap(), g.exact_levy_tail(r).unwrap()) < 1e-8, "{r}");
        }
        let e = log_ratio_subordinator().unwrap();
        assert!(rel(levy_tail_exact(&e, 0.7, &cfg).unwrap(), e.exact_levy_tail(0.7).unwrap()) < 1e-8);
        assert_eq!(levy_tail_exact(&drift_subordinator(2.0).unwrap(), 1.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(InversionConfig { gs_terms: 15, ..Default::default() }.validate().is_err());
        assert!(InversionConfig { gs_terms: 22, ..Default::default() }.validate().is_err());
        assert!(InversionConfig { talbot_nodes: 8, ..Default::default() }.validate().is_err());
        let fake = SubordinatorSpec::new("real only", |l: f64| l.sqrt());
        let cfg = InversionConfig { method: LaplaceMethod::FixedTalbot, ..Default::default() };
        assert!(matches!(subordinator_tail_exact(&fake, 1.0, 1.0, &cfg), Err(Error::Config(_))));
        let auto = InversionConfig::default();
        let v = subordinator_tail_exact(&fake, 1.0, 1.0, &auto).unwrap();
        assert!(rel(v, 0.520_499_877_813_046_5) < 1e-4);
    }

    #[test]
    fn forward_check_examples() {
        let q = QuadratureConfig::default();
        let s = stable_subordinator(0.5).unwrap();
        assert!(forward_laplace_check(&s, 1.0, 1.0, &q, TailSource::ClosedForm).unwrap() < 1e-5);
        let b = drift_subordinator(1.0).unwrap();
        let d = forward_laplace_check(&b, 1.0, 1.0, &q, TailSource::ClosedForm).unwrap();
        assert!(d < 1e-14, "{d}");
        let right = tail_moment_transform(&b, 1.0, 1.0).unwrap();
        assert!((right - (1.0 - 2.0 / std::f64::consts::E)).abs() < 1e-15);
        let g = gamma_subordinator().unwrap();
        let inv = TailSource::Inversion(InversionConfig::default());
        assert!(forward_laplace_check(&g, 0.5, 2.0, &q, inv).unwrap() < 1e-4);
        assert!(matches!(forward_laplace_check(&log_ratio_subordinator().unwrap(), 1.0, 1.0, &q, TailSource::ClosedForm), Err(Error::NoOracle(_))));
    }
}
