//! Adaptive Gauss–Kronrod quadrature (21-point Kronrod rule embedding the
//! 10-point Gauss rule).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::sum::Accumulator;

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

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_707_253_419,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-13, max_panels: 4000 }
    }
}

/// Kronrod estimate and |Kronrod - Gauss| on one panel.
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[10] * fc;
    let mut g = 0.0;
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
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
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Globally adaptive integration of `f` over `[a, b]`, always bisecting the
/// panel with the largest error estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, panels: 0 });
    }
    let (value, error) = gk21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total_err = error;
    let mut total_val = value;
    let mut panels = 1;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total_val.abs());
        if total_err <= target {
            break;
        }
        if panels >= opts.max_panels {
            return Err(Error::Quadrature { error: total_err });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel can no longer be split in floating point.
            heap.push(Panel { error: 0.0, ..worst });
            total_err = heap.iter().map(|p| p.error).sum();
            if total_err <= target {
                break;
            }
            continue;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        panels += 1;
        total_val += (v1 + v2) - worst.value;
        total_err += (e1 + e2) - worst.error;
    }
    // Final deterministic re-summation in left-to-right panel order.
    let mut sorted: Vec<Panel> = heap.into_vec();
    sorted.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut v = Accumulator::new();
    let mut e = Accumulator::new();
    for p in &sorted {
        v.add(p.value);
        e.add(p.error);
    }
    let (total_val, total_err) = (v.value(), e.value());
    Ok(Quadrature { value: total_val, error: total_err, panels })
}

/// Integrates over `[a, b]` after the substitution `t = a + (b - a)(3u² - 2u³)`,
/// whose Jacobian vanishes at both ends. Square-root type endpoint behaviour
/// becomes smooth, so the adaptive rule converges quickly.
pub fn integrate_smoothed<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<Quadrature> {
    let w = b - a;
    integrate(
        |u: f64| {
            let t = a + w * u * u * (3.0 - 2.0 * u);
            let jac = 6.0 * w * u * (1.0 - u);
            if jac == 0.0 {
                0.0
            } else {
                f(t) * jac
            }
        },
        0.0,
        1.0,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_for_degree_31() {
        // Integral of x^31 + x^30 over [-1, 1] is 2/31.
        let (v, _) = gk21(&|x: f64| x.powi(31) + x.powi(30), -1.0, 1.0);
        assert!((v - 2.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_rule_is_exact_for_degree_19() {
        // |K - G| vanishes when both rules are exact.
        let (_, e) = gk21(&|x: f64| x.powi(18) + x.powi(19), -1.0, 1.0);
        assert!(e < 1e-15);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let q = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn smoothed_handles_inverse_sqrt_at_both_ends() {
        // Integral of 1/sqrt(x(1-x)) over (0, 1) is pi.
        let q = integrate_smoothed(
            |x: f64| 1.0 / (x * (1.0 - x)).sqrt(),
            0.0,
            1.0,
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((q.value - std::f64::consts::PI).abs() < 1e-11, "{}", q.value);
    }

    #[test]
    fn narrow_lorentzian_peak() {
        let beta = 1e-6;
        let q = integrate(|s: f64| beta / (beta * beta + s * s), 0.0, 1.0, &QuadOptions::default())
            .unwrap();
        assert!((q.value - (1.0 / beta).atan()).abs() < 1e-11);
    }
}
