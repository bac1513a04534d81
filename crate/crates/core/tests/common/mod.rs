#![allow(dead_code)]

use levy_tails::asymptotics::{g_of, h_of};
use levy_tails::processes::{catalog, IsotropicExponentSpec, Process, Quantity, Regime, SubordinatorSpec};

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn subordinators() -> Vec<SubordinatorSpec> {
    catalog()
        .into_iter()
        .filter_map(|p| match p {
            Process::Subordinator(s) => Some(s),
            Process::Isotropic(_) => None,
        })
        .collect()
}

pub fn isotropics() -> Vec<IsotropicExponentSpec> {
    catalog()
        .into_iter()
        .filter_map(|p| match p {
            Process::Isotropic(s) => Some(s),
            Process::Subordinator(_) => None,
        })
        .collect()
}

/// phi nondecreasing and concave, 0 <= H <= phi, H nondecreasing.
pub fn bernstein_violation(s: &SubordinatorSpec, grid: &[f64]) -> Option<String> {
    let mut prev: Option<(f64, f64, f64, f64)> = None;
    for &l in grid {
        let phi = s.phi(l);
        let dphi = s.phi_prime(l).ok()?;
        let h = h_of(s, l).ok()?;
        let slack = 1e-12 * phi.abs();
        if phi.is_nan() || dphi.is_nan() || phi < 0.0 || dphi < 0.0 {
            return Some(format!("{}: phi or phi' negative at {l:e}", s.name));
        }
        if h < -slack || h > phi + slack {
            return Some(format!("{}: H = {h:e} outside [0, phi = {phi:e}] at {l:e}", s.name));
        }
        if let Some((l0, phi0, dphi0, h0)) = prev {
            if phi < phi0 * (1.0 - 1e-12) {
                return Some(format!("{}: phi decreases between {l0:e} and {l:e}", s.name));
            }
            if dphi > dphi0 * (1.0 + 1e-7) + 1e-300 {
                return Some(format!("{}: phi' increases between {l0:e} and {l:e}", s.name));
            }
            if h < h0 * (1.0 - 1e-9) - 1e-300 {
                return Some(format!("{}: H decreases between {l0:e} and {l:e}", s.name));
            }
        }
        prev = Some((l, phi, dphi, h));
    }
    None
}

/// psi(lambda t) <= 2 (1 + lambda^2) psi(t) on a grid.
pub fn lemma_violation(s: &IsotropicExponentSpec, lambdas: &[f64], ts: &[f64]) -> Option<String> {
    for &l in lambdas {
        for &t in ts {
            let lhs = s.psi(l * t);
            let rhs = 2.0 * (1.0 + l * l) * s.psi(t);
            if lhs > rhs * (1.0 + 1e-12) {
                return Some(format!("{}: psi({l:e} * {t:e}) = {lhs:e} > {rhs:e}", s.name));
            }
        }
    }
    None
}

pub fn quantity_fn<'a>(process: &'a Process, q: Quantity) -> Box<dyn Fn(f64) -> f64 + 'a> {
    match (process, q) {
        (Process::Subordinator(s), Quantity::Phi) => Box::new(move |l| s.phi(l)),
        (Process::Subordinator(s), Quantity::H) => Box::new(move |l| h_of(s, l).unwrap_or(f64::NAN)),
        (Process::Isotropic(s), Quantity::Psi) => Box::new(move |u| s.psi(u)),
        (Process::Isotropic(s), Quantity::G) => Box::new(move |u| g_of(s, u).unwrap_or(f64::NAN)),
        _ => Box::new(|_| f64::NAN),
    }
}

pub const REGVAR_DECADES: u32 = 12;

pub fn regimes() -> [Regime; 2] {
    [Regime::AtZero, Regime::AtInfinity]
}
