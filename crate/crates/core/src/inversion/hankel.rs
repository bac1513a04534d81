//! Densities and radial tails of isotropic processes by Hankel inversion.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::processes::catalog::sphere_area;
use crate::processes::{IsotropicExponentSpec, Quantity, Regime};
use crate::quadrature::{integrate, integrate_pieces, integrate_to_infinity, wynn_epsilon, Estimate, QuadratureConfig};
use crate::specfun::{bessel_j_unchecked, bessel_j_zero, gamma};

/// Routes A and B of a radial tail must agree to this relative tolerance.
pub const ROUTE_AGREEMENT: f64 = 1e-6;
/// Tails below this are not resolved in double precision.
pub const TAIL_FLOOR: f64 = 1e-12;

const WYNN_WINDOW: usize = 40;
/// Levels of t psi(u) used as extra panel breakpoints.
const DAMPING_LEVELS: [f64; 7] = [1e-2, 0.1, 1.0, 4.0, 16.0, 40.0, 100.0];

/// Smallest u with t psi(u) >= level, by bisection on log u.
fn damping_point(spec: &IsotropicExponentSpec, t: f64, level: f64) -> Option<f64> {
    let target = level / t;
    if let Some(limit) = spec.psi_limit {
        if target >= 0.99 * limit {
            return None;
        }
    }
    let (mut lo, mut hi) = (-300.0_f64, 300.0_f64);
    if spec.psi(10f64.powf(hi)) < target || spec.psi(10f64.powf(lo)) >= target {
        return None;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if spec.psi(10f64.powf(mid)) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(10f64.powf(hi))
}

fn damping_breaks(spec: &IsotropicExponentSpec, t: f64) -> Vec<f64> {
    DAMPING_LEVELS.iter().filter_map(|&l| damping_point(spec, t, l)).collect()
}

/// One panel; `floor` is an absolute accuracy that is good enough for the sum.
fn panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], floor: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
    points.push(b);
    let inner = QuadratureConfig { abs_tol: floor.max(f64::MIN_POSITIVE), rel_tol: (0.01 * cfg.rel_tol).max(1e-14), ..*cfg };
    Ok(integrate_pieces(f, &points, &inner)?.value)
}

/// int_0^inf f(u) J_nu(u rho) du, summed over the panels between zeros of
/// J_nu(u rho) and extrapolated with Wynn's epsilon once
/// `cfg.oscillatory_segments` panels have been summed.
///
/// `decayed(u)` tells whether f is already in its damped range at u, so that
/// tiny panel contributions mean the rest is negligible.
pub fn hankel_integral(f: &dyn Fn(f64) -> f64, nu: f64, rho: f64, breaks: &[f64], decayed: &dyn Fn(f64) -> bool, cfg: &QuadratureConfig) -> Result<Estimate> {
    cfg.validate()?;
    let g = |u: f64| f(u) * bessel_j_unchecked(nu, u * rho);
    let mut sums: Vec<f64> = Vec::new();
    let mut estimates: Vec<f64> = Vec::new();
    let mut sum = 0.0;
    let mut largest = 0.0_f64;
    let mut quiet = 0;
    let mut a = 0.0;
    for k in 1..=cfg.max_panels {
        let b = bessel_j_zero(nu, k) / rho;
        let c = panel(&g, a, b, breaks, 1e-3 * cfg.rel_tol * largest, cfg)?;
        sum += c;
        largest = largest.max(sum.abs());
        sums.push(sum);
        a = b;
        let floor = 64.0 * f64::EPSILON * largest;
        if decayed(b) && c.abs() <= (1e-3 * cfg.rel_tol * sum.abs()).max(floor) {
            quiet += 1;
            if quiet >= 2 {
                return Ok(Estimate { value: sum, error: c.abs() });
            }
        } else {
            quiet = 0;
        }
        if k >= cfg.oscillatory_segments {
            let window = &sums[sums.len().saturating_sub(WYNN_WINDOW)..];
            let e = wynn_epsilon(window).value;
            estimates.push(e);
            if estimates.len() >= 3 {
                let last = &estimates[estimates.len() - 3..];
                let spread = last.iter().fold(0.0_f64, |m, v| m.max((v - e).abs()));
                if spread <= (cfg.rel_tol * e.abs()).max(floor) {
                    return Ok(Estimate { value: e, error: spread });
                }
            }
        }
    }
    Err(Error::OscillatoryNonConvergence { panels: cfg.max_panels, estimate: estimates.last().copied().unwrap_or(sum) })
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "time", value: t })
    }
}

/// Density q(t, rho) of X_t at any point of norm rho, without the atom at 0
/// when psi is bounded.
pub fn density_exact(spec: &IsotropicExponentSpec, t: f64, rho: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Domain { what: "radius", value: rho });
    }
    let d = spec.dimension as f64;
    let breaks = damping_breaks(spec, t);
    if rho == 0.0 {
        return density_at_origin(spec, t, &breaks, cfg);
    }
    // integrated by parts: the kernel u^(d/2) J_(d/2-1) becomes psi' u^(d/2) J_(d/2)
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let e = (-t * spec.psi(u)).exp();
        if e == 0.0 {
            return 0.0;
        }
        spec.psi_prime(u).unwrap_or(f64::NAN) * e * u.powf(0.5 * d)
    };
    let decayed = |u: f64| t * spec.psi(u) >= 2.0;
    let integral = hankel_integral(&f, 0.5 * d, rho, &breaks, &decayed, cfg)?;
    Ok(t * (2.0 * PI).powf(-0.5 * d) * rho.powf(-0.5 * d) * integral.value)
}

fn density_at_origin(spec: &IsotropicExponentSpec, t: f64, breaks: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    let d = spec.dimension as f64;
    let far = 1e100_f64;
    if spec.psi_limit.is_some() || t * spec.psi(far) < d * far.ln() {
        return Err(Error::NonIntegrable);
    }
    let f = |u: f64| {
        let e = (-t * spec.psi(u)).exp();
        if e == 0.0 {
            0.0
        } else {
            e * u.powf(d - 1.0)
        }
    };
    let mut points = vec![0.0];
    points.extend_from_slice(breaks);
    let last = *points.last().unwrap();
    let head = integrate_pieces(f, &points, cfg)?;
    let scale = last.max(1e-300);
    let tail = integrate_to_infinity(|x| scale * f(last + scale * x), 0.0, cfg)?;
    let norm = (2.0 * PI).powf(-0.5 * d) * 2f64.powf(1.0 - 0.5 * d) / gamma(0.5 * d)?;
    Ok(norm * (head.value + tail.value))
}

/// P(|X_t| >= r) from the ball-indicator transform alone.
pub fn radial_tail_ball(spec: &IsotropicExponentSpec, t: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain { what: "radius", value: r });
    }
    let d = spec.dimension as f64;
    let atom = spec.atom(t);
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        ((-t * spec.psi(u)).exp() - atom) * u.powf(0.5 * d - 1.0)
    };
    let decayed = |u: f64| spec.psi_limit.is_none() && t * spec.psi(u) >= 2.0;
    let breaks = damping_breaks(spec, t);
    let integral = hankel_integral(&f, 0.5 * d, r, &breaks, &decayed, cfg)?;
    let inside = atom + (2.0 * PI).powf(-0.5 * d) * sphere_area(spec.dimension) * r.powf(0.5 * d) * integral.value;
    Ok((1.0 - inside).clamp(0.0, 1.0))
}

/// Radial tail from both routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialTail {
    /// Integral of the density over the ball or its complement.
    pub value: f64,
    /// The ball-indicator transform.
    pub ball_value: f64,
    pub routes_agree: bool,
}

/// omega_d int_a^b q(t, s) s^(d-1) ds, with b = inf allowed.
pub fn radial_mass_between(spec: &IsotropicExponentSpec, t: f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_time(t)?;
    let d = spec.dimension as f64;
    let outer = QuadratureConfig { rel_tol: cfg.rel_tol.max(1e-9), abs_tol: cfg.abs_tol.min(1e-16), ..*cfg };
    let shell = |s: f64| {
        if s == 0.0 {
            return 0.0;
        }
        density_exact(spec, t, s, cfg).unwrap_or(f64::NAN) * s.powf(d - 1.0)
    };
    let value = if b.is_infinite() {
        // shells decay like s^(-1-alpha); s = a w^(-p) with p alpha >= 2 keeps the w integrand smooth
        let p = spec.regvar.get(Quantity::Psi, Regime::AtZero).map_or(1.0, |i| (2.0 / i.index).clamp(1.0, 40.0));
        let a = a.max(f64::MIN_POSITIVE);
        let g = |v: f64| {
            let w = 1.0 - v;
            if w <= 0.0 {
                return 0.0;
            }
            let s = a * w.powf(-p);
            if !s.is_finite() {
                return 0.0;
            }
            let val = shell(s) * p * s / w;
            if val.is_finite() {
                val
            } else {
                f64::NAN
            }
        };
        integrate(g, 0.0, 1.0, outer.abs_tol, outer.rel_tol, outer.max_depth)?.value
    } else {
        integrate(shell, a, b, outer.abs_tol, outer.rel_tol, outer.max_depth)?.value
    };
    Ok(sphere_area(spec.dimension) * value)
}

/// Total probability: the atom plus the integral of the density over R^d.
pub fn total_mass(spec: &IsotropicExponentSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let scale = damping_point(spec, t, 1.0).map(|u| 1.0 / u).unwrap_or(1.0);
    let inner = radial_mass_between(spec, t, 0.0, scale, cfg)?;
    let outer = radial_mass_between(spec, t, scale, f64::INFINITY, cfg)?;
    Ok(spec.atom(t) + inner + outer)
}

/// P(|X_t| >= r) by integrating the density, cross-checked against the
/// ball-indicator transform.
pub fn radial_tail_exact(spec: &IsotropicExponentSpec, t: f64, r: f64, cfg: &QuadratureConfig) -> Result<RadialTail> {
    let ball_value = radial_tail_ball(spec, t, r, cfg)?;
    let value =
        if ball_value > 0.5 { 1.0 - spec.atom(t) - radial_mass_between(spec, t, 0.0, r, cfg)? } else { radial_mass_between(spec, t, r, f64::INFINITY, cfg)? };
    let value = value.clamp(0.0, 1.0);
    if value < TAIL_FLOOR {
        return Err(Error::PrecisionFloor(value));
    }
    let routes_agree = (value - ball_value).abs() <= ROUTE_AGREEMENT * value + TAIL_FLOOR;
    Ok(RadialTail { value, ball_value, routes_agree })
}
