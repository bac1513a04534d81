//! Subordinators and isotropic Levy processes described by their exponents.

pub mod catalog;

pub use catalog::{build_process, catalog, catalog_entries, find_entry, CatalogEntry, ParamSchema, Process, ProcessKind};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
pub type BivariateFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Which end of the half line a limit or a regular-variation index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    AtZero,
    AtInfinity,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::AtZero => "at-zero",
            Regime::AtInfinity => "at-infinity",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "at-zero" | "at_zero" | "zero" | "0" => Ok(Regime::AtZero),
            "at-infinity" | "at_infinity" | "infinity" | "inf" => Ok(Regime::AtInfinity),
            other => Err(Error::Config(format!("unknown regime {other:?}; use at-zero or at-infinity"))),
        }
    }
}

/// The function a regular-variation index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// Laplace exponent of a subordinator.
    Phi,
    /// H = phi - lambda phi'.
    H,
    /// Radial characteristic exponent.
    Psi,
    /// g = psi - (u/2) psi'.
    G,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Phi => "phi",
            Quantity::H => "H",
            Quantity::Psi => "psi",
            Quantity::G => "g",
        }
    }

    /// Admissible index range, checked when an index is declared.
    pub fn index_range(&self) -> (&'static str, fn(f64) -> bool) {
        match self {
            Quantity::Phi => ("[0, 1]", |x| (0.0..=1.0).contains(&x)),
            Quantity::H => ("[0, 2)", |x| (0.0..2.0).contains(&x)),
            Quantity::Psi => ("[0, 2]", |x| (0.0..=2.0).contains(&x)),
            Quantity::G => ("[0, 4]", |x| (0.0..=4.0).contains(&x)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegVarSource {
    Declared,
    Estimated,
}

/// Regular-variation index of a function at zero or at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegVarInfo {
    pub location: Regime,
    pub index: f64,
    pub source: RegVarSource,
}

/// Declared indices, keyed by quantity and regime.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RegVarTable {
    entries: Vec<(Quantity, RegVarInfo)>,
}

impl RegVarTable {
    pub fn declare(&mut self, quantity: Quantity, location: Regime, index: f64) -> Result<()> {
        let (allowed, ok) = quantity.index_range();
        if !index.is_finite() || !ok(index) {
            return Err(Error::IndexOutOfRange { index, allowed });
        }
        self.entries.retain(|(q, info)| !(*q == quantity && info.location == location));
        self.entries.push((quantity, RegVarInfo { location, index, source: RegVarSource::Declared }));
        Ok(())
    }

    pub fn get(&self, quantity: Quantity, location: Regime) -> Option<RegVarInfo> {
        self.entries.iter().find(|(q, info)| *q == quantity && info.location == location).map(|(_, info)| *info)
    }

    pub fn require(&self, quantity: Quantity, location: Regime) -> Result<RegVarInfo> {
        self.get(quantity, location).ok_or(Error::MissingRegVar { quantity: quantity.as_str(), regime: location.as_str() })
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Quantity, RegVarInfo)> {
        self.entries.iter()
    }
}

/// Central difference with relative step h = x * eps^(1/3).
pub fn central_difference(f: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    if !(x >= 1e-300) {
        return Err(Error::StepUnderflow(x));
    }
    let h = x * f64::EPSILON.cbrt();
    let d = (f(x + h) - f(x - h)) / (2.0 * h);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFinite(x))
    }
}

/// A subordinator given by its Laplace exponent.
#[derive(Clone)]
pub struct SubordinatorSpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub drift_b: f64,
    pub regvar: RegVarTable,
    /// phi(+inf) when finite (zero drift and finite Levy measure).
    pub phi_limit: Option<f64>,
    phi: RealFn,
    phi_prime: Option<RealFn>,
    h_closed: Option<RealFn>,
    phi_complex: Option<ComplexFn>,
    exact_tail: Option<BivariateFn>,
    exact_levy_tail: Option<RealFn>,
}

impl fmt::Debug for SubordinatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubordinatorSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("drift_b", &self.drift_b)
            .field("regvar", &self.regvar)
            .field("analytic_phi_prime", &self.phi_prime.is_some())
            .field("complex_phi", &self.phi_complex.is_some())
            .field("exact_tail", &self.exact_tail.is_some())
            .field("exact_levy_tail", &self.exact_levy_tail.is_some())
            .finish()
    }
}

impl SubordinatorSpec {
    pub fn new(name: impl Into<String>, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            drift_b: 0.0,
            regvar: RegVarTable::default(),
            phi_limit: None,
            phi: Arc::new(phi),
            phi_prime: None,
            h_closed: None,
            phi_complex: None,
            exact_tail: None,
            exact_levy_tail: None,
        }
    }

    pub fn with_phi_prime(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.phi_prime = Some(Arc::new(f));
        self
    }

    /// Closed form of H, used instead of phi - lambda phi' where it cancels badly.
    pub fn with_h(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.h_closed = Some(Arc::new(f));
        self
    }

    /// Analytic continuation of phi to the cut plane C \ (-inf, 0].
    pub fn with_complex_phi(mut self, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.phi_complex = Some(Arc::new(f));
        self
    }

    pub fn with_drift(mut self, b: f64) -> Self {
        self.drift_b = b;
        self
    }

    pub fn with_phi_limit(mut self, limit: f64) -> Self {
        self.phi_limit = Some(limit);
        self
    }

    pub fn with_exact_tail(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact_tail = Some(Arc::new(f));
        self
    }

    pub fn with_exact_levy_tail(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact_levy_tail = Some(Arc::new(f));
        self
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn with_regvar(mut self, quantity: Quantity, location: Regime, index: f64) -> Result<Self> {
        if !matches!(quantity, Quantity::Phi | Quantity::H) {
            return Err(Error::Precondition(format!("a subordinator has no {} index", quantity.as_str())));
        }
        self.regvar.declare(quantity, location, index)?;
        Ok(self)
    }

    pub fn phi(&self, lambda: f64) -> f64 {
        (self.phi)(lambda)
    }

    /// phi'(lambda), analytic when supplied, else a central difference.
    pub fn phi_prime(&self, lambda: f64) -> Result<f64> {
        match &self.phi_prime {
            Some(f) => Ok(f(lambda)),
            None => phi_prime_fallback(self, lambda),
        }
    }

    pub fn has_analytic_phi_prime(&self) -> bool {
        self.phi_prime.is_some()
    }

    pub fn h_closed_form(&self, lambda: f64) -> Option<f64> {
        self.h_closed.as_ref().map(|f| f(lambda))
    }

    pub fn phi_complex(&self, s: Complex64) -> Option<Complex64> {
        self.phi_complex.as_ref().map(|f| f(s))
    }

    pub fn has_complex_phi(&self) -> bool {
        self.phi_complex.is_some()
    }

    pub fn exact_tail(&self, t: f64, r: f64) -> Option<f64> {
        self.exact_tail.as_ref().map(|f| f(t, r))
    }

    pub fn has_exact_tail(&self) -> bool {
        self.exact_tail.is_some()
    }

    pub fn exact_levy_tail(&self, r: f64) -> Option<f64> {
        self.exact_levy_tail.as_ref().map(|f| f(r))
    }

    pub fn has_exact_levy_tail(&self) -> bool {
        self.exact_levy_tail.is_some()
    }

    pub(crate) fn phi_fn(&self) -> RealFn {
        self.phi.clone()
    }

    pub(crate) fn phi_prime_fn(&self) -> Option<RealFn> {
        self.phi_prime.clone()
    }

    pub(crate) fn h_fn(&self) -> Option<RealFn> {
        self.h_closed.clone()
    }
}

/// Central-difference derivative of phi with relative step lambda * eps^(1/3).
pub fn phi_prime_fallback(spec: &SubordinatorSpec, lambda: f64) -> Result<f64> {
    let phi = spec.phi_fn();
    central_difference(&move |x| phi(x), lambda)
}

/// An isotropic Levy process in R^d given by its radial exponent psi.
#[derive(Clone)]
pub struct IsotropicExponentSpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub dimension: usize,
    pub diffusion_a: f64,
    pub regvar: RegVarTable,
    pub unimodal: bool,
    /// psi(+inf) when psi is bounded; the law then has an atom exp(-t psi_limit) at 0.
    pub psi_limit: Option<f64>,
    psi: RealFn,
    psi_prime: Option<RealFn>,
    g_closed: Option<RealFn>,
    exact_density: Option<BivariateFn>,
    exact_radial_tail: Option<BivariateFn>,
    exact_levy_kernel: Option<RealFn>,
}

impl fmt::Debug for IsotropicExponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IsotropicExponentSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("dimension", &self.dimension)
            .field("diffusion_a", &self.diffusion_a)
            .field("regvar", &self.regvar)
            .field("unimodal", &self.unimodal)
            .field("psi_limit", &self.psi_limit)
            .field("exact_density", &self.exact_density.is_some())
            .field("exact_radial_tail", &self.exact_radial_tail.is_some())
            .field("exact_levy_kernel", &self.exact_levy_kernel.is_some())
            .finish()
    }
}

impl IsotropicExponentSpec {
    pub fn new(name: impl Into<String>, dimension: usize, psi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::BadParam { name: "d".into(), reason: "dimension must be positive".into() });
        }
        Ok(Self {
            name: name.into(),
            params: BTreeMap::new(),
            dimension,
            diffusion_a: 0.0,
            regvar: RegVarTable::default(),
            unimodal: false,
            psi_limit: None,
            psi: Arc::new(psi),
            psi_prime: None,
            g_closed: None,
            exact_density: None,
            exact_radial_tail: None,
            exact_levy_kernel: None,
        })
    }

    /// X_t = B_{T_t} with E exp(i xi.B_s) = exp(-s |xi|^2), so psi(u) = phi(u^2).
    pub fn subordinate_brownian(name: impl Into<String>, sub: &SubordinatorSpec, dimension: usize) -> Result<Self> {
        let phi = sub.phi_fn();
        let mut spec = Self::new(name, dimension, move |u| phi(u * u))?;
        if let Some(dphi) = sub.phi_prime_fn() {
            spec.psi_prime = Some(Arc::new(move |u| 2.0 * u * dphi(u * u)));
        }
        if let Some(h) = sub.h_fn() {
            spec.g_closed = Some(Arc::new(move |u| h(u * u)));
        }
        spec.diffusion_a = sub.drift_b;
        spec.unimodal = true;
        spec.psi_limit = sub.phi_limit;
        spec.params = sub.params.clone();
        for (q, info) in sub.regvar.iter() {
            let target = match q {
                Quantity::Phi => Quantity::Psi,
                Quantity::H => Quantity::G,
                _ => continue,
            };
            spec.regvar.declare(target, info.location, 2.0 * info.index)?;
        }
        Ok(spec)
    }

    pub fn with_psi_prime(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.psi_prime = Some(Arc::new(f));
        self
    }

    /// Closed form of g, used instead of psi - (u/2) psi' where it cancels badly.
    pub fn with_g(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.g_closed = Some(Arc::new(f));
        self
    }

    pub fn with_diffusion(mut self, a: f64) -> Self {
        self.diffusion_a = a;
        self
    }

    pub fn with_unimodal(mut self, unimodal: bool) -> Self {
        self.unimodal = unimodal;
        self
    }

    pub fn with_psi_limit(mut self, limit: f64) -> Self {
        self.psi_limit = Some(limit);
        self
    }

    pub fn with_exact_density(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact_density = Some(Arc::new(f));
        self
    }

    pub fn with_exact_radial_tail(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact_radial_tail = Some(Arc::new(f));
        self
    }

    pub fn with_exact_levy_kernel(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact_levy_kernel = Some(Arc::new(f));
        self
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn with_regvar(mut self, quantity: Quantity, location: Regime, index: f64) -> Result<Self> {
        if !matches!(quantity, Quantity::Psi | Quantity::G) {
            return Err(Error::Precondition(format!("an isotropic exponent has no {} index", quantity.as_str())));
        }
        self.regvar.declare(quantity, location, index)?;
        Ok(self)
    }

    pub fn psi(&self, u: f64) -> f64 {
        (self.psi)(u)
    }

    pub fn psi_prime(&self, u: f64) -> Result<f64> {
        match &self.psi_prime {
            Some(f) => Ok(f(u)),
            None => {
                let psi = self.psi.clone();
                central_difference(&move |x| psi(x), u)
            }
        }
    }

    pub fn g_closed_form(&self, u: f64) -> Option<f64> {
        self.g_closed.as_ref().map(|f| f(u))
    }

    /// Mass exp(-t psi(inf)) of the atom at the origin (0 for unbounded psi).
    pub fn atom(&self, t: f64) -> f64 {
        self.psi_limit.map(|l| (-t * l).exp()).unwrap_or(0.0)
    }

    pub fn exact_density(&self, t: f64, rho: f64) -> Option<f64> {
        self.exact_density.as_ref().map(|f| f(t, rho))
    }

    pub fn has_exact_density(&self) -> bool {
        self.exact_density.is_some()
    }

    pub fn exact_radial_tail(&self, t: f64, r: f64) -> Option<f64> {
        self.exact_radial_tail.as_ref().map(|f| f(t, r))
    }

    pub fn has_exact_radial_tail(&self) -> bool {
        self.exact_radial_tail.is_some()
    }

    pub fn exact_levy_kernel(&self, rho: f64) -> Option<f64> {
        self.exact_levy_kernel.as_ref().map(|f| f(rho))
    }

    pub fn has_exact_levy_kernel(&self) -> bool {
        self.exact_levy_kernel.is_some()
    }
}

/// Number of probe points per decade in [`estimate_regvar_index`].
pub const REGVAR_POINTS_PER_DECADE: usize = 10;

/// Least-squares slope of log f against log lambda over `decades` decades
/// ending at 1e-6 (at zero) or starting at 1e6 (at infinity).
pub fn estimate_regvar_index(f: &dyn Fn(f64) -> f64, location: Regime, decades: u32) -> Result<RegVarInfo> {
    if decades < 2 {
        return Err(Error::Config("regvar estimation needs at least 2 decades".into()));
    }
    let (lo, hi) = match location {
        Regime::AtZero => (-6.0 - decades as f64, -6.0),
        Regime::AtInfinity => (6.0, 6.0 + decades as f64),
    };
    let n = REGVAR_POINTS_PER_DECADE * decades as usize + 1;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let e = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let lambda = 10f64.powf(e);
        let v = f(lambda);
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveValue { at: lambda, value: v });
        }
        let x = lambda.ln();
        let y = v.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let nf = n as f64;
    let slope = (nf * sxy - sx * sy) / (nf * sxx - sx * sx);
    Ok(RegVarInfo { location, index: slope, source: RegVarSource::Estimated })
}
