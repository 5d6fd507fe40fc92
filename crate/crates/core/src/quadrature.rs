//! Globally adaptive Gauss-Kronrod (10/21 point) quadrature on a finite
//! interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
const MAX_INTERVALS: usize = 4000;

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

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for (j, (&x, &wk)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += wk * pair;
        // Gauss nodes sit at the odd Kronrod positions
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

/// Integrates `f` over `[a, b]` until the summed error estimate falls below
/// `abs_tol`. The integrand is never evaluated at the endpoints.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let (v, e) = gk21(&f, a, b);
    if !v.is_finite() {
        return Err(Error::Quadrature {
            tol: abs_tol,
            estimate: f64::INFINITY,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, error: e });
    let mut total_err = e;
    while total_err > abs_tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                tol: abs_tol,
                estimate: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in f64
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        // recompute rather than update to avoid drift
        total_err = heap.iter().map(|p| p.error).sum();
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    if !value.is_finite() {
        return Err(Error::Quadrature {
            tol: abs_tol,
            estimate: f64::INFINITY,
        });
    }
    Ok(Integral {
        value,
        error: total_err,
        intervals: panels.len(),
    })
}

/// `∫₀¹ f` to [`DEFAULT_ABS_TOL`], returning only the value.
pub fn integrate_unit<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    integrate(f, 0.0, 1.0, DEFAULT_ABS_TOL).map(|i| i.value)
}

/// `∫₀¹ s^c f(s) ds` for `c ∈ (-1, 0]`.
///
/// The substitution `s = v^{1/(1+c)}` turns it into
/// `(1+c)⁻¹ ∫₀¹ f(v^{1/(1+c)}) dv`, which has no endpoint singularity.
pub fn integrate_unit_power_weight<F: Fn(f64) -> f64>(c: f64, f: F) -> Result<f64> {
    if !(c > -1.0 && c <= 0.0) {
        return Err(Error::domain(format!(
            "power weight exponent must lie in (-1, 0], got {c}"
        )));
    }
    let a = 1.0 + c;
    let inv = 1.0 / a;
    integrate_unit(|v| f(v.powf(inv))).map(|v| v * inv)
}
