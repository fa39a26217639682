//! Globally adaptive Gauss-Kronrod (10/21) quadrature.
//!
//! Infinite ranges are mapped onto `[0, 1)` with `x = origin ± u / (1 - u)`,
//! i.e. `u = |x - origin| / (1 + |x - origin|)`, Jacobian `1 / (1 - u)²`.
//! The whole real line is split at 0 (or at the caller's break points) so
//! each half uses this map. Interval bisection is driven by a max-heap on
//! the local error estimate, as in QUADPACK's QAG.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Integration range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    /// `[a, ∞)`
    UpperHalfLine(f64),
    /// `(-∞, b]`
    LowerHalfLine(f64),
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-8, max_evaluations: 200_000 }
    }
}

impl QuadratureOptions {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

// Nodes and weights as tabulated, beyond f64 precision.
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
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_634_260,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights, paired with XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    Upper(f64),
    Lower(f64),
}

impl Map {
    /// Point and Jacobian for a node `u` of the mapped segment.
    #[inline]
    fn apply(self, u: f64) -> (f64, f64) {
        match self {
            Map::Identity => (u, 1.0),
            Map::Upper(o) => {
                let w = 1.0 - u;
                (o + u / w, 1.0 / (w * w))
            }
            Map::Lower(o) => {
                let w = 1.0 - u;
                (o - u / w, 1.0 / (w * w))
            }
        }
    }
}

struct Piece {
    map: Map,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    at_floor: bool,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
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
        self.error.total_cmp(&other.error)
    }
}

fn eval_mapped<F: FnMut(f64) -> f64>(f: &mut F, map: Map, u: f64) -> Result<f64> {
    let (x, jac) = map.apply(u);
    if !x.is_finite() || !jac.is_finite() {
        // Only reachable at the far end of an infinite range.
        return Ok(0.0);
    }
    let y = f(x);
    if !y.is_finite() {
        return Err(domain("integrate", format!("integrand is not finite at x = {x}")));
    }
    Ok(if y == 0.0 { 0.0 } else { y * jac })
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, map: Map, a: f64, b: f64) -> Result<Piece> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_mapped(f, map, center)?;
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval_mapped(f, map, center - dx)?;
        let f2 = eval_mapped(f, map, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    let mut at_floor = false;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && error <= floor {
        error = floor;
        at_floor = true;
    }
    Ok(Piece { map, a, b, value, error, at_floor })
}

/// `∫ f` over `range`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, range: Domain, opts: &QuadratureOptions) -> Result<QuadratureResult> {
    integrate_with_breaks(f, range, &[], opts)
}

/// `∫ f` over `range`, with the range first split at `breaks` (points
/// outside the domain are ignored). Break points belong where the
/// integrand peaks or has a kink.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    range: Domain,
    breaks: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(opts.abs_tol >= 0.0 && opts.rel_tol >= 0.0) || (opts.abs_tol == 0.0 && opts.rel_tol == 0.0) {
        return Err(domain("integrate", "tolerances must be nonnegative and not both zero"));
    }
    let (lo, hi) = match range {
        Domain::Finite(a, b) => {
            if !(a.is_finite() && b.is_finite()) || a > b {
                return Err(domain("integrate", format!("bad finite interval [{a}, {b}]")));
            }
            (a, b)
        }
        Domain::UpperHalfLine(a) => (a, f64::INFINITY),
        Domain::LowerHalfLine(b) => (f64::NEG_INFINITY, b),
        Domain::Real => (f64::NEG_INFINITY, f64::INFINITY),
    };
    if lo == hi {
        return Ok(QuadratureResult { value: 0.0, abs_error_estimate: 0.0, evaluations: 1 });
    }
    let mut points: Vec<f64> = breaks.iter().copied().filter(|p| p.is_finite() && *p > lo && *p < hi).collect();
    if points.is_empty() && lo.is_infinite() && hi.is_infinite() {
        points.push(0.0);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut knots = Vec::with_capacity(points.len() + 2);
    knots.push(lo);
    knots.extend(points);
    knots.push(hi);

    let mut heap = BinaryHeap::new();
    let mut settled: Vec<Piece> = Vec::new();
    let mut evaluations = 0usize;
    for w in knots.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let piece = if x0.is_infinite() {
            gauss_kronrod(&mut f, Map::Lower(x1), 0.0, 1.0)?
        } else if x1.is_infinite() {
            gauss_kronrod(&mut f, Map::Upper(x0), 0.0, 1.0)?
        } else {
            gauss_kronrod(&mut f, Map::Identity, x0, x1)?
        };
        evaluations += 21;
        if piece.at_floor {
            settled.push(piece);
        } else {
            heap.push(piece);
        }
    }

    loop {
        let total: f64 = heap.iter().chain(settled.iter()).map(|p| p.value).sum();
        let err: f64 = heap.iter().chain(settled.iter()).map(|p| p.error).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= tol || heap.is_empty() {
            return Ok(QuadratureResult { value: total, abs_error_estimate: err, evaluations });
        }
        if evaluations + 42 > opts.max_evaluations {
            return Err(Error::Quadrature { estimate: total, abs_error: err, evaluations });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 1e-14 * worst.a.abs().max(worst.b.abs()) {
            settled.push(worst);
            continue;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let piece = gauss_kronrod(&mut f, worst.map, a, b)?;
            evaluations += 21;
            if piece.at_floor {
                settled.push(piece);
            } else {
                heap.push(piece);
            }
        }
    }
}
