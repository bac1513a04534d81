//! Adaptive Gauss-Kronrod (10/21) integration and Wynn's epsilon algorithm.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for the adaptive and oscillatory integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
    /// Bessel-zero panels summed directly before extrapolation starts.
    pub oscillatory_segments: usize,
    /// Hard cap on the number of panels in an oscillatory integral.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_depth: 30, oscillatory_segments: 64, max_panels: 200_000 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Config("rel_tol and abs_tol must be positive".into()));
        }
        if self.max_depth < 4 {
            return Err(Error::Config("max_depth must be at least 4".into()));
        }
        if self.oscillatory_segments < 4 || self.max_panels < self.oscillatory_segments {
            return Err(Error::Config("need oscillatory_segments >= 4 and max_panels >= oscillatory_segments".into()));
        }
        Ok(())
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

struct Rule {
    value: f64,
    error: f64,
    abs_value: f64,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Rule> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::NonFinite(center));
    }
    let mut resg = 0.0;
    let mut resk = WGK[10] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let x1 = center - dx;
        let x2 = center + dx;
        let f1 = f(x1);
        let f2 = f(x2);
        if !f1.is_finite() {
            return Err(Error::NonFinite(x1));
        }
        if !f2.is_finite() {
            return Err(Error::NonFinite(x2));
        }
        fv1[j] = f1;
        fv2[j] = f2;
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Rule { value, error, abs_value: resabs })
}

struct Piece {
    a: f64,
    b: f64,
    depth: u32,
    rule: Rule,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.rule.error == other.rule.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule.error.total_cmp(&other.rule.error)
    }
}

const MAX_PIECES: usize = 20_000;

/// Globally adaptive integration of f over [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let first = gk21(&f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, depth: 0, rule: first });
    let mut frozen_error = 0.0;
    let mut rounding_error = 0.0;
    let mut pieces = 1;
    loop {
        let tol = abs_tol.max(rel_tol * value.abs());
        if error - rounding_error <= tol {
            return Ok(Estimate { value, error });
        }
        let Some(worst) = heap.pop() else { break };
        // pieces whose error is at the rounding floor cannot improve
        if worst.rule.error <= 51.0 * f64::EPSILON * worst.rule.abs_value {
            rounding_error += worst.rule.error;
            continue;
        }
        if worst.depth >= max_depth || pieces >= MAX_PIECES {
            frozen_error += worst.rule.error;
            if frozen_error > tol {
                break;
            }
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk21(&f, worst.a, mid)?;
        let right = gk21(&f, mid, worst.b)?;
        value += left.value + right.value - worst.rule.value;
        error += left.error + right.error - worst.rule.error;
        heap.push(Piece { a: worst.a, b: mid, depth: worst.depth + 1, rule: left });
        heap.push(Piece { a: mid, b: worst.b, depth: worst.depth + 1, rule: right });
        pieces += 1;
    }
    let tol = abs_tol.max(rel_tol * value.abs());
    if error - rounding_error <= tol {
        Ok(Estimate { value, error })
    } else {
        Err(Error::QuadratureNonConvergence { estimate: value, error })
    }
}

/// Adaptive integration with the tolerances of a config.
pub fn integrate_cfg<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    integrate(f, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_depth)
}

/// Integral of f over [a, b] split at the given interior breakpoints.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<Estimate> {
    let mut total = Estimate { value: 0.0, error: 0.0 };
    for w in points.windows(2) {
        let e = integrate_cfg(&f, w[0], w[1], cfg)?;
        total.value += e.value;
        total.error += e.error;
    }
    Ok(total)
}

/// Integral of f over [a, inf) for f decaying at least like x^-(1+delta).
///
/// Uses x = a + s/(1 - s) on [0, 1).
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    let g = |s: f64| {
        let one_minus = 1.0 - s;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let x = a + s / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else if x.is_infinite() {
            0.0
        } else {
            v
        }
    };
    integrate_cfg(g, 0.0, 1.0, cfg)
}

/// Wynn's epsilon extrapolation of a sequence of partial sums.
///
/// Returns the limit estimate and the difference between the last two
/// estimates on the highest usable even column as an error indicator.
pub fn wynn_epsilon(sums: &[f64]) -> Estimate {
    let n = sums.len();
    if n < 3 {
        let v = *sums.last().unwrap_or(&0.0);
        return Estimate { value: v, error: f64::INFINITY };
    }
    // column k holds eps_k for consecutive starting indices
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    let mut best = Estimate { value: sums[n - 1], error: (sums[n - 1] - sums[n - 2]).abs() };
    let mut k = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut broken = false;
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 || !diff.is_finite() {
                broken = true;
                break;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        if broken {
            break;
        }
        k += 1;
        if k % 2 == 0 && next.len() >= 2 {
            let last = next[next.len() - 1];
            let before = next[next.len() - 2];
            let err = (last - before).abs();
            if last.is_finite() && err <= best.error {
                best = Estimate { value: last, error: err };
            }
        }
        prev = cur;
        cur = next;
    }
    best
}
