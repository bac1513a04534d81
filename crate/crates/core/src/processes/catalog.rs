//! Named processes with parameter schemas and closed-form oracles.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{IsotropicExponentSpec, Quantity, Regime, SubordinatorSpec};
use crate::error::{Error, Result};
use crate::specfun::{erf, expint_e1, gamma, gamma_q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Subordinator,
    Isotropic,
}

/// Range and default of one catalog parameter.
#[derive(Debug, Clone, Serialize)]
pub struct ParamSchema {
    pub name: &'static str,
    pub default: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_open: bool,
    pub upper_open: bool,
    pub integer: bool,
    pub description: &'static str,
}

impl ParamSchema {
    fn check(&self, value: f64) -> Result<()> {
        let above = if self.lower_open { value > self.lower } else { value >= self.lower };
        let below = if self.upper_open { value < self.upper } else { value <= self.upper };
        if !value.is_finite() || !above || !below {
            return Err(Error::BadParam { name: self.name.into(), reason: format!("{value} not in {}", self.range_text()) });
        }
        if self.integer && value.fract() != 0.0 {
            return Err(Error::BadParam { name: self.name.into(), reason: format!("{value} is not an integer") });
        }
        Ok(())
    }

    pub fn range_text(&self) -> String {
        let fmt = |x: f64| if x.is_infinite() { "inf".to_string() } else { x.to_string() };
        format!("{}{}, {}{}", if self.lower_open { "(" } else { "[" }, fmt(self.lower), fmt(self.upper), if self.upper_open { ")" } else { "]" })
    }
}

#[derive(Debug, Clone)]
pub enum Process {
    Subordinator(SubordinatorSpec),
    Isotropic(IsotropicExponentSpec),
}

impl Process {
    pub fn name(&self) -> &str {
        match self {
            Process::Subordinator(s) => &s.name,
            Process::Isotropic(s) => &s.name,
        }
    }

    pub fn kind(&self) -> ProcessKind {
        match self {
            Process::Subordinator(_) => ProcessKind::Subordinator,
            Process::Isotropic(_) => ProcessKind::Isotropic,
        }
    }
}

type Builder = fn(&BTreeMap<String, f64>) -> Result<Process>;

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: ProcessKind,
    pub description: &'static str,
    pub params: Vec<ParamSchema>,
    build: Builder,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry").field("name", &self.name).field("kind", &self.kind).field("params", &self.params).finish()
    }
}

impl CatalogEntry {
    /// Fills defaults, validates ranges and rejects unknown names.
    pub fn build(&self, given: &BTreeMap<String, f64>) -> Result<Process> {
        for key in given.keys() {
            if !self.params.iter().any(|p| p.name == key) {
                return Err(Error::BadParam { name: key.clone(), reason: format!("not a parameter of {}", self.name) });
            }
        }
        let mut full = BTreeMap::new();
        for p in &self.params {
            let v = given.get(p.name).copied().unwrap_or(p.default);
            p.check(v)?;
            full.insert(p.name.to_string(), v);
        }
        (self.build)(&full)
    }
}

fn gamma_param() -> ParamSchema {
    ParamSchema {
        name: "gamma",
        default: 0.5,
        lower: 0.0,
        upper: 1.0,
        lower_open: true,
        upper_open: true,
        integer: false,
        description: "stability index of the subordinator",
    }
}

fn dim_param() -> ParamSchema {
    ParamSchema { name: "d", default: 1.0, lower: 1.0, upper: 20.0, lower_open: false, upper_open: false, integer: true, description: "space dimension" }
}

fn alpha_param(upper_open: bool) -> ParamSchema {
    ParamSchema { name: "alpha", default: 1.0, lower: 0.0, upper: 2.0, lower_open: true, upper_open, integer: false, description: "stability index" }
}

/// All catalog entries with their parameter schemas.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "stable-sub",
            kind: ProcessKind::Subordinator,
            description: "stable subordinator, phi(l) = l^gamma",
            params: vec![gamma_param()],
            build: |p| Ok(Process::Subordinator(stable_subordinator(p["gamma"])?)),
        },
        CatalogEntry {
            name: "gamma-sub",
            kind: ProcessKind::Subordinator,
            description: "gamma subordinator, phi(l) = log(1 + l)",
            params: vec![],
            build: |_| Ok(Process::Subordinator(gamma_subordinator()?)),
        },
        CatalogEntry {
            name: "paper-example",
            kind: ProcessKind::Subordinator,
            description: "phi(l) = l log(1 + 1/l), H(l) = l/(l + 1)",
            params: vec![],
            build: |_| Ok(Process::Subordinator(log_ratio_subordinator()?)),
        },
        CatalogEntry {
            name: "sqrt-ratio-sub",
            kind: ProcessKind::Subordinator,
            description: "phi(l) = l/(1 + sqrt(l))",
            params: vec![],
            build: |_| Ok(Process::Subordinator(sqrt_ratio_subordinator()?)),
        },
        CatalogEntry {
            name: "drift",
            kind: ProcessKind::Subordinator,
            description: "pure drift, phi(l) = b l, T_t = b t",
            params: vec![ParamSchema {
                name: "b",
                default: 1.0,
                lower: 0.0,
                upper: f64::INFINITY,
                lower_open: true,
                upper_open: true,
                integer: false,
                description: "drift",
            }],
            build: |p| Ok(Process::Subordinator(drift_subordinator(p["b"])?)),
        },
        CatalogEntry {
            name: "stable-iso",
            kind: ProcessKind::Isotropic,
            description: "isotropic alpha-stable, psi(u) = u^alpha",
            params: vec![alpha_param(false), dim_param()],
            build: |p| Ok(Process::Isotropic(isotropic_stable(p["alpha"], p["d"] as usize)?)),
        },
        CatalogEntry {
            name: "cauchy",
            kind: ProcessKind::Isotropic,
            description: "Cauchy process, psi(u) = u",
            params: vec![dim_param()],
            build: |p| Ok(Process::Isotropic(isotropic_stable(1.0, p["d"] as usize)?)),
        },
        CatalogEntry {
            name: "brownian",
            kind: ProcessKind::Isotropic,
            description: "Brownian motion with generator Laplacian, psi(u) = u^2",
            params: vec![dim_param()],
            build: |p| Ok(Process::Isotropic(brownian(p["d"] as usize)?)),
        },
        CatalogEntry {
            name: "relativistic",
            kind: ProcessKind::Isotropic,
            description: "relativistic stable, psi(u) = (u^2 + m^(2/alpha))^(alpha/2) - m",
            params: vec![
                alpha_param(true),
                ParamSchema {
                    name: "m",
                    default: 1.0,
                    lower: 0.0,
                    upper: f64::INFINITY,
                    lower_open: true,
                    upper_open: true,
                    integer: false,
                    description: "mass",
                },
                dim_param(),
            ],
            build: |p| Ok(Process::Isotropic(relativistic_stable(p["alpha"], p["m"], p["d"] as usize)?)),
        },
        CatalogEntry {
            name: "sbm-paper-example",
            kind: ProcessKind::Isotropic,
            description: "Brownian motion subordinated by paper-example, psi(u) = u^2 log(1 + u^-2)",
            params: vec![dim_param()],
            build: |p| {
                Ok(Process::Isotropic(
                    IsotropicExponentSpec::subordinate_brownian("sbm-paper-example", &log_ratio_subordinator()?, p["d"] as usize)?.with_param("d", p["d"]),
                ))
            },
        },
        CatalogEntry {
            name: "sbm-sqrt-ratio",
            kind: ProcessKind::Isotropic,
            description: "Brownian motion subordinated by sqrt-ratio-sub, psi(u) = u^2/(1 + u)",
            params: vec![dim_param()],
            build: |p| {
                Ok(Process::Isotropic(
                    IsotropicExponentSpec::subordinate_brownian("sbm-sqrt-ratio", &sqrt_ratio_subordinator()?, p["d"] as usize)?.with_param("d", p["d"]),
                ))
            },
        },
    ]
}

pub fn find_entry(name: &str) -> Result<CatalogEntry> {
    catalog_entries().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownProcess(name.to_string()))
}

pub fn build_process(name: &str, params: &BTreeMap<String, f64>) -> Result<Process> {
    find_entry(name)?.build(params)
}

/// Every catalog entry instantiated with its default parameters.
pub fn catalog() -> Vec<Process> {
    catalog_entries().iter().map(|e| e.build(&BTreeMap::new()).expect("catalog defaults are valid")).collect()
}

/// ln(1 + x) - x/(1 + x), accurate for small x.
pub(crate) fn log1p_minus_ratio(x: f64) -> f64 {
    if x < 0.1 {
        let mut sum = 0.0;
        let mut pow = x;
        for k in 2..60 {
            pow *= -x;
            let kf = k as f64;
            let term = -pow * (1.0 - 1.0 / kf);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        x.ln_1p() - x / (1.0 + x)
    }
}

/// ln(1 + 1/x) without overflow for tiny x.
fn log1p_recip(x: f64) -> f64 {
    if x < 1.0 {
        x.ln_1p() - x.ln()
    } else {
        (1.0 / x).ln_1p()
    }
}

pub fn stable_subordinator(g: f64) -> Result<SubordinatorSpec> {
    let inv_gamma_1mg = 1.0 / gamma(1.0 - g)?;
    let mut spec = SubordinatorSpec::new("stable-sub", move |l: f64| l.powf(g))
        .with_param("gamma", g)
        .with_phi_prime(move |l: f64| g * l.powf(g - 1.0))
        .with_h(move |l: f64| (1.0 - g) * l.powf(g))
        .with_complex_phi(move |s: Complex64| if s == Complex64::new(0.0, 0.0) { s } else { s.powf(g) })
        .with_exact_levy_tail(move |r: f64| r.powf(-g) * inv_gamma_1mg);
    if g == 0.5 {
        spec = spec.with_exact_tail(|t: f64, r: f64| erf(t / (2.0 * r.sqrt())));
    }
    for regime in [Regime::AtZero, Regime::AtInfinity] {
        spec = spec.with_regvar(Quantity::Phi, regime, g)?.with_regvar(Quantity::H, regime, g)?;
    }
    Ok(spec)
}

pub fn gamma_subordinator() -> Result<SubordinatorSpec> {
    SubordinatorSpec::new("gamma-sub", |l: f64| l.ln_1p())
        .with_phi_prime(|l: f64| 1.0 / (1.0 + l))
        .with_h(log1p_minus_ratio)
        .with_complex_phi(|s: Complex64| (s + 1.0).ln())
        .with_exact_tail(|t: f64, r: f64| gamma_q(t, r).unwrap_or(f64::NAN))
        .with_exact_levy_tail(|r: f64| expint_e1(r).unwrap_or(f64::NAN))
        .with_regvar(Quantity::Phi, Regime::AtZero, 1.0)?
        .with_regvar(Quantity::Phi, Regime::AtInfinity, 0.0)?
        .with_regvar(Quantity::H, Regime::AtInfinity, 0.0)
}

pub fn log_ratio_subordinator() -> Result<SubordinatorSpec> {
    SubordinatorSpec::new("paper-example", |l: f64| l * log1p_recip(l))
        .with_phi_prime(|l: f64| log1p_minus_ratio(1.0 / l))
        .with_h(|l: f64| l / (l + 1.0))
        .with_complex_phi(|s: Complex64| if s == Complex64::new(0.0, 0.0) { s } else { s * (s.inv() + 1.0).ln() })
        .with_phi_limit(1.0)
        .with_exact_levy_tail(|r: f64| -(-r).exp_m1() / r)
        .with_regvar(Quantity::Phi, Regime::AtZero, 1.0)?
        .with_regvar(Quantity::H, Regime::AtZero, 1.0)?
        .with_regvar(Quantity::Phi, Regime::AtInfinity, 0.0)?
        .with_regvar(Quantity::H, Regime::AtInfinity, 0.0)
}

pub fn sqrt_ratio_subordinator() -> Result<SubordinatorSpec> {
    SubordinatorSpec::new("sqrt-ratio-sub", |l: f64| l / (1.0 + l.sqrt()))
        .with_phi_prime(|l: f64| {
            let s = l.sqrt();
            (1.0 + 0.5 * s) / ((1.0 + s) * (1.0 + s))
        })
        .with_h(|l: f64| {
            let s = l.sqrt();
            0.5 * l * s / ((1.0 + s) * (1.0 + s))
        })
        .with_complex_phi(|s: Complex64| s / (s.sqrt() + 1.0))
        .with_regvar(Quantity::Phi, Regime::AtZero, 1.0)?
        .with_regvar(Quantity::H, Regime::AtZero, 1.5)?
        .with_regvar(Quantity::Phi, Regime::AtInfinity, 0.5)?
        .with_regvar(Quantity::H, Regime::AtInfinity, 0.5)
}

pub fn drift_subordinator(b: f64) -> Result<SubordinatorSpec> {
    SubordinatorSpec::new("drift", move |l: f64| b * l)
        .with_param("b", b)
        .with_drift(b)
        .with_phi_prime(move |_| b)
        .with_h(|_| 0.0)
        .with_complex_phi(move |s: Complex64| s * b)
        .with_exact_tail(move |t: f64, r: f64| if r <= b * t { 1.0 } else { 0.0 })
        .with_exact_levy_tail(|_| 0.0)
        .with_regvar(Quantity::Phi, Regime::AtZero, 1.0)?
        .with_regvar(Quantity::Phi, Regime::AtInfinity, 1.0)
}

/// Surface area of the unit sphere in R^d.
pub(crate) fn sphere_area(d: usize) -> f64 {
    let h = 0.5 * d as f64;
    2.0 * PI.powf(h) / gamma(h).expect("d >= 1")
}

fn gaussian_density(t: f64, rho: f64, d: usize) -> f64 {
    (4.0 * PI * t).powf(-0.5 * d as f64) * (-rho * rho / (4.0 * t)).exp()
}

fn gaussian_radial_tail(t: f64, r: f64, d: usize) -> f64 {
    gamma_q(0.5 * d as f64, r * r / (4.0 * t)).unwrap_or(f64::NAN)
}

pub fn isotropic_stable(alpha: f64, d: usize) -> Result<IsotropicExponentSpec> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::BadParam { name: "alpha".into(), reason: format!("{alpha} not in (0, 2]") });
    }
    let df = d as f64;
    let name = if alpha == 1.0 { "cauchy" } else { "stable-iso" };
    let mut spec = IsotropicExponentSpec::new(name, d, move |u: f64| u.powf(alpha))?
        .with_param("alpha", alpha)
        .with_param("d", df)
        .with_psi_prime(move |u: f64| alpha * u.powf(alpha - 1.0))
        .with_g(move |u: f64| (1.0 - 0.5 * alpha) * u.powf(alpha))
        .with_unimodal(true);
    for regime in [Regime::AtZero, Regime::AtInfinity] {
        spec = spec.with_regvar(Quantity::Psi, regime, alpha)?;
        if alpha < 2.0 {
            spec = spec.with_regvar(Quantity::G, regime, alpha)?;
        }
    }
    if alpha == 2.0 {
        spec = spec
            .with_diffusion(1.0)
            .with_exact_density(move |t, rho| gaussian_density(t, rho, d))
            .with_exact_radial_tail(move |t, r| gaussian_radial_tail(t, r, d));
    } else {
        let c = alpha * 2f64.powf(alpha - 1.0) * gamma(0.5 * (df + alpha))? / (PI.powf(0.5 * df) * gamma(1.0 - 0.5 * alpha)?);
        spec = spec.with_exact_levy_kernel(move |rho: f64| c * rho.powf(-df - alpha));
    }
    if alpha == 1.0 {
        let c = gamma(0.5 * (df + 1.0))? / PI.powf(0.5 * (df + 1.0));
        spec = spec.with_exact_density(move |t, rho| c * t / (t * t + rho * rho).powf(0.5 * (df + 1.0)));
        match d {
            1 => spec = spec.with_exact_radial_tail(|t, r| 1.0 - 2.0 / PI * (r / t).atan()),
            2 => spec = spec.with_exact_radial_tail(|t, r| t / (t * t + r * r).sqrt()),
            3 => spec = spec.with_exact_radial_tail(|t, r| 1.0 - 2.0 / PI * ((r / t).atan() - r * t / (r * r + t * t))),
            _ => {}
        }
    }
    Ok(spec)
}

pub fn brownian(d: usize) -> Result<IsotropicExponentSpec> {
    let mut spec = isotropic_stable(2.0, d)?;
    spec.name = "brownian".into();
    spec.params.remove("alpha");
    Ok(spec)
}

/// expm1 of (a-1) ln(1+s) + ln(1+(1-a)s), with the O(s) cancellation removed.
fn relativistic_g_factor(a: f64, s: f64) -> f64 {
    let l = if s < 0.1 {
        let mut sum = 0.0;
        let mut pow = s;
        let mut c_pow = 1.0 - a;
        for k in 2..80 {
            pow *= -s;
            c_pow *= 1.0 - a;
            let kf = k as f64;
            // (-1)^(k+1) s^k / k * ((a - 1) + (1 - a)^k)
            let term = pow / kf * ((a - 1.0) + c_pow);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (a - 1.0) * s.ln_1p() + ((1.0 - a) * s).ln_1p()
    };
    l.exp_m1()
}

pub fn relativistic_stable(alpha: f64, m: f64, d: usize) -> Result<IsotropicExponentSpec> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::BadParam { name: "alpha".into(), reason: format!("{alpha} not in (0, 2)") });
    }
    if !(m > 0.0) {
        return Err(Error::BadParam { name: "m".into(), reason: "mass must be positive".into() });
    }
    let a = 0.5 * alpha;
    let mass_sq = m.powf(2.0 / alpha);
    IsotropicExponentSpec::new("relativistic", d, move |u: f64| m * (a * (u * u / mass_sq).ln_1p()).exp_m1())?
        .with_param("alpha", alpha)
        .with_param("m", m)
        .with_param("d", d as f64)
        .with_psi_prime(move |u: f64| alpha * u * (u * u + mass_sq).powf(a - 1.0))
        .with_g(move |u: f64| m * relativistic_g_factor(a, u * u / mass_sq))
        .with_unimodal(true)
        .with_regvar(Quantity::Psi, Regime::AtZero, 2.0)?
        .with_regvar(Quantity::G, Regime::AtZero, 4.0)?
        .with_regvar(Quantity::Psi, Regime::AtInfinity, alpha)?
        .with_regvar(Quantity::G, Regime::AtInfinity, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::central_difference;

    #[test]
    fn names_are_present() {
        let names: Vec<_> = catalog_entries().iter().map(|e| e.name).collect();
        for n in ["stable-sub", "gamma-sub", "paper-example", "stable-iso", "relativistic", "brownian", "cauchy"] {
            assert!(names.contains(&n), "{n}");
        }
        assert_eq!(catalog().len(), names.len());
    }

    #[test]
    fn parameter_validation() {
        let mut p = BTreeMap::new();
        p.insert("gamma".to_string(), 1.0);
        assert!(build_process("stable-sub", &p).is_err());
        p.insert("gamma".to_string(), 0.3);
        assert!(build_process("stable-sub", &p).is_ok());
        p.insert("delta".to_string(), 0.3);
        assert!(build_process("stable-sub", &p).is_err());
        let mut q = BTreeMap::new();
        q.insert("d".to_string(), 2.5);
        assert!(build_process("brownian", &q).is_err());
        assert!(matches!(build_process("nope", &BTreeMap::new()), Err(Error::UnknownProcess(_))));
    }

    #[test]
    fn closed_forms_match_definitions() {
        let ex = log_ratio_subordinator().unwrap();
        for l in [1e-9, 1e-3, 0.5, 2.0, 1e3, 1e9] {
            let h = ex.phi(l) - l * ex.phi_prime(l).unwrap();
            let hc = ex.h_closed_form(l).unwrap();
            assert!((h - hc).abs() <= 1e-10 * hc, "{l}: {h} vs {hc}");
        }
        assert!((ex.h_closed_form(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);

        let rel = relativistic_stable(1.0, 1.0, 1).unwrap();
        for u in [1e-2, 0.3, 1.0, 5.0, 100.0] {
            let g = rel.psi(u) - 0.5 * u * rel.psi_prime(u).unwrap();
            let gc = rel.g_closed_form(u).unwrap();
            assert!((g - gc).abs() <= 1e-9 * gc.abs().max(1e-300), "{u}: {g} vs {gc}");
            let fd = central_difference(&|x| rel.psi(x), u).unwrap();
            assert!((fd - rel.psi_prime(u).unwrap()).abs() <= 1e-7 * fd.abs());
        }
        // g ~ m a(1-a)/2 s^2 as s -> 0 with s = u^2 / m^(2/alpha)
        let u: f64 = 1e-5;
        let gc = rel.g_closed_form(u).unwrap();
        assert!((gc / (0.125 * u.powi(4)) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn subordinate_brownian_metadata() {
        let s = build_process("sbm-sqrt-ratio", &BTreeMap::new()).unwrap();
        let Process::Isotropic(s) = s else { panic!() };
        assert_eq!(s.regvar.get(Quantity::G, Regime::AtZero).unwrap().index, 3.0);
        assert_eq!(s.regvar.get(Quantity::Psi, Regime::AtZero).unwrap().index, 2.0);
        assert!((s.psi(2.0) - 4.0 / 3.0).abs() < 1e-15);
        let p = build_process("sbm-paper-example", &BTreeMap::new()).unwrap();
        let Process::Isotropic(p) = p else { panic!() };
        assert_eq!(p.psi_limit, Some(1.0));
        assert!((p.atom(2.0) - (-2.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn exact_oracle_values() {
        let s = stable_subordinator(0.5).unwrap();
        assert!((s.exact_tail(1.0, 1.0).unwrap() - 0.520_499_877_813_046_5).abs() < 1e-13);
        assert!((s.exact_levy_tail(4.0).unwrap() - 0.282_094_791_773_878_14).abs() < 1e-14);
        let c = isotropic_stable(1.0, 1).unwrap();
        assert!((c.exact_density(1.0, 2.0).unwrap() - 1.0 / (5.0 * PI)).abs() < 1e-16);
        assert!((c.exact_radial_tail(1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let b = brownian(1).unwrap();
        assert!((b.exact_radial_tail(1.0, 2.0).unwrap() - 0.157_299_207_050_285_13).abs() < 1e-13);
        assert!((b.exact_density(1.0, 0.0).unwrap() - (4.0 * PI).powf(-0.5)).abs() < 1e-16);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }
}
