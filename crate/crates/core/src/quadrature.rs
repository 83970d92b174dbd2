//! Numerical integration and the interference kernel.
//!
//! * [`Kernel`] evaluates `ℱ(s, x) = x² ₂F₁(1, 2/α; 1 + 2/α; −xᵅ/s)`, which
//!   equals `2 ∫₀ˣ t / (1 + tᵅ/s) dt`.
//! * [`integrate`] / [`try_integrate`] are globally adaptive 21-point
//!   Gauss–Kronrod integrators with a QUADPACK-style error estimate.
//! * [`integrate_tail`] handles `[a, ∞)` by truncating at an analytically
//!   chosen cutoff and integrating over geometrically growing panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("subdivision budget exhausted: estimate {estimate:e}, error bound {error:e}")]
    BudgetExceeded { estimate: f64, error: f64 },
    #[error("integrand returned a non-finite value at {0}")]
    NonFinite(f64),
    #[error("invalid integration interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("invalid kernel arguments: s = {s}, x = {x}, alpha = {alpha}")]
    InvalidKernelArgs { s: f64, x: f64, alpha: f64 },
    #[error("hypergeometric series did not converge within {0} terms")]
    SeriesNotConverged(usize),
    #[error("could not place a tail cutoff below tolerance {0:e}")]
    TailCutoff(f64),
    #[error("invalid quadrature settings: {0}")]
    InvalidSettings(&'static str),
}

/// Tolerances shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Bound on the discarded part of a semi-infinite integral.
    pub tail_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            max_subdivisions: 2000,
            tail_tol: 1e-10,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.tail_tol > 0.0) {
            return Err(QuadratureError::InvalidSettings("tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(QuadratureError::InvalidSettings("max_subdivisions must be positive"));
        }
        Ok(())
    }

    /// Settings for an integral nested inside another one: every tolerance is
    /// `factor` times tighter.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            tail_tol: self.tail_tol / factor,
            ..*self
        }
    }

    pub fn with_abs_tol(&self, abs_tol: f64) -> Self {
        Self { abs_tol, ..*self }
    }
}

/// Value and error estimate of a finite integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Value of a semi-infinite integral plus where it was truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIntegral {
    pub value: f64,
    pub abs_error: f64,
    /// Upper limit actually used; the discarded tail is below `tail_tol`.
    pub cutoff: f64,
}

// ---------------------------------------------------------------------------
// Interference kernel
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    pub s: f64,
    pub x: f64,
    pub alpha: f64,
}

const MAX_SERIES_TERMS: usize = 400;
// Pfaff series below, 1/z expansion above. At the golden ratio both converge
// geometrically with ratio 0.618.
const SERIES_SWITCH: f64 = 1.618_033_988_749_895;

/// `ℱ(s, x)` for a fixed path-loss exponent, with the α-dependent constants
/// precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    alpha: f64,
    b: f64,
    // ∫₀^∞ 2t / (1 + tᵅ) dt = (2π/α) / sin(2π/α)
    full_plane: f64,
}

impl Kernel {
    pub fn new(alpha: f64) -> Result<Self, QuadratureError> {
        if !(alpha > 2.0) || !alpha.is_finite() {
            return Err(QuadratureError::InvalidKernelArgs {
                s: f64::NAN,
                x: f64::NAN,
                alpha,
            });
        }
        let b = 2.0 / alpha;
        Ok(Self {
            alpha,
            b,
            full_plane: (2.0 * PI / alpha) / (2.0 * PI / alpha).sin(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `lim_{x→∞} ℱ(s, x) = s^{2/α} (2π/α) / sin(2π/α)`.
    pub fn limit(&self, s: f64) -> f64 {
        s.powf(self.b) * self.full_plane
    }

    /// `ℱ(s, x)`; returns NaN for arguments outside the domain.
    #[inline]
    pub fn eval(&self, s: f64, x: f64) -> f64 {
        self.try_eval(s, x).unwrap_or(f64::NAN)
    }

    pub fn try_eval(&self, s: f64, x: f64) -> Result<f64, QuadratureError> {
        if !(s > 0.0) || !(x >= 0.0) || x.is_infinite() {
            return Err(QuadratureError::InvalidKernelArgs {
                s,
                x,
                alpha: self.alpha,
            });
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        if s.is_infinite() {
            return Ok(x * x);
        }
        // z = xᵅ / s, formed in log space to dodge overflow.
        let z = (self.alpha * x.ln() - s.ln()).exp();
        if z <= SERIES_SWITCH {
            self.pfaff_series(x, z)
        } else {
            self.inverse_series(s, x, z)
        }
    }

    /// `ℱ(s, b) − ℱ(s, a) = 2 ∫ₐᵇ t / (1 + tᵅ/s) dt`.
    ///
    /// Far from the origin both terms sit close to [`Kernel::limit`], so the
    /// difference is summed term by term instead of subtracted.
    pub fn diff(&self, s: f64, a: f64, b: f64) -> Result<f64, QuadratureError> {
        if a > b {
            return Ok(-self.diff(s, b, a)?);
        }
        if !(s > 0.0) || !(a >= 0.0) || b.is_infinite() {
            return Err(QuadratureError::InvalidKernelArgs {
                s,
                x: a,
                alpha: self.alpha,
            });
        }
        if a == b {
            return Ok(0.0);
        }
        if a == 0.0 || s.is_infinite() {
            return Ok(self.try_eval(s, b)? - self.try_eval(s, a)?);
        }
        if b - a <= 0.25 * a {
            // Short interval: the integrand is analytic well beyond it, so a
            // fixed Gauss rule beats subtracting two nearly equal values.
            let center = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let ln_s = s.ln();
            let h = |t: f64| t / (1.0 + (self.alpha * t.ln() - ln_s).exp());
            let mut sum = 0.0;
            for (j, w) in WG.iter().enumerate() {
                let dx = half * XGK[2 * j + 1];
                sum += w * (h(center - dx) + h(center + dx));
            }
            return Ok(2.0 * half * sum);
        }
        let za = (self.alpha * a.ln() - s.ln()).exp();
        if za <= SERIES_SWITCH {
            return Ok(self.try_eval(s, b)? - self.try_eval(s, a)?);
        }
        let ln_ratio = (a / b).ln();
        let inv = 1.0 / za;
        let mut power = inv;
        let mut sum = 0.0;
        for k in 0..MAX_SERIES_TERMS {
            let p = self.alpha * (k + 1) as f64 - 2.0;
            let term = power * (-(p * ln_ratio).exp_m1()) / p;
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            if term <= f64::EPSILON * 0.25 * sum.abs() || term == 0.0 {
                return Ok(2.0 * a * a * sum);
            }
            power *= inv;
        }
        Err(QuadratureError::SeriesNotConverged(MAX_SERIES_TERMS))
    }

    // ₂F₁(1, b; 1+b; −z) = (1+z)^{−b} ₂F₁(b, b; 1+b; w), w = z/(1+z).
    fn pfaff_series(&self, x: f64, z: f64) -> Result<f64, QuadratureError> {
        let b = self.b;
        let w = z / (1.0 + z);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..MAX_SERIES_TERMS {
            let nf = n as f64;
            term *= (b + nf) * (b + nf) / ((1.0 + b + nf) * (nf + 1.0)) * w;
            sum += term;
            if term <= f64::EPSILON * 0.25 * sum {
                return Ok(x * x * (1.0 + z).powf(-b) * sum);
            }
        }
        Err(QuadratureError::SeriesNotConverged(MAX_SERIES_TERMS))
    }

    // 2∫₀ˣ = 2∫₀^∞ − 2∫ₓ^∞, the latter expanded in powers of 1/z.
    fn inverse_series(&self, s: f64, x: f64, z: f64) -> Result<f64, QuadratureError> {
        let inv = 1.0 / z;
        let mut power = inv * inv;
        let mut sum = 0.0;
        for k in 1..MAX_SERIES_TERMS {
            let kp1 = (k + 1) as f64;
            let term = power / (self.alpha * kp1 - 2.0);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            if term <= f64::EPSILON * 0.25 * sum.abs() || term == 0.0 {
                return Ok((self.inverse_head(s, x) - 2.0 * x * x * sum).max(0.0));
            }
            power *= inv;
        }
        Err(QuadratureError::SeriesNotConverged(MAX_SERIES_TERMS))
    }

    /// `limit(s) − 2 s x^{2−α} / (α − 2)`: the limit minus the leading term
    /// of the 1/z expansion. Both blow up like `1/(α − 2)` as α → 2, so they
    /// are combined analytically. With `ε = α − 2` and `y = πε/α`,
    /// the result is `2s [s^{−ε/α}(y/sin y − 1) + x^{−ε} expm1(ε ln x − ε ln s/α)] / ε`.
    fn inverse_head(&self, s: f64, x: f64) -> f64 {
        let eps = self.alpha - 2.0;
        let y = PI * eps / self.alpha;
        let y2 = y * y;
        let sinc_excess = if y < 0.1 {
            y2 * (1.0 / 6.0 + y2 * (7.0 / 360.0 + y2 * (31.0 / 15120.0 + y2 * 127.0 / 604800.0)))
        } else {
            y / y.sin() - 1.0
        };
        let ln_s = s.ln();
        let ln_x = x.ln();
        let a = (-eps * ln_s / self.alpha).exp() * sinc_excess;
        let b = (-eps * ln_x).exp() * (eps * (ln_x - ln_s / self.alpha)).exp_m1();
        2.0 * s * (a + b) / eps
    }
}

/// `ℱ(s, x) = x² ₂F₁(1, 2/α; 1 + 2/α; −xᵅ/s)`.
pub fn kernel_f(args: KernelArgs) -> Result<f64, QuadratureError> {
    Kernel::new(args.alpha)
        .map_err(|_| QuadratureError::InvalidKernelArgs {
            s: args.s,
            x: args.x,
            alpha: args.alpha,
        })?
        .try_eval(args.s, args.x)
}

// ---------------------------------------------------------------------------
// Gauss–Kronrod 21
// ---------------------------------------------------------------------------

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
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
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

fn gk21<F, E>(f: &mut F, a: f64, b: f64) -> Result<Panel, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let check = |x: f64, v: f64| -> Result<f64, E> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFinite(x).into())
        }
    };
    let fc = check(center, f(center)?)?;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let x1 = center - dx;
        let x2 = center + dx;
        let f1 = check(x1, f(x1)?)?;
        let f2 = check(x2, f(x2)?)?;
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
    let hl = half.abs();
    let result = resk * half;
    resabs *= hl;
    resasc *= hl;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel {
        a,
        b,
        value: result,
        error: err,
    })
}

/// Adaptive integral of a fallible integrand over `[a, b]`.
///
/// The returned estimate satisfies `abs_error ≤ max(abs_tol, rel_tol·|value|)`
/// unless the subdivision budget runs out, in which case
/// [`QuadratureError::BudgetExceeded`] carries the best estimate.
pub fn try_integrate<F, E>(
    mut f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<Integral, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadratureError::InvalidInterval(a, b).into());
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let first = gk21(&mut f, a, b)?;
    let mut evaluations = 21;
    let tol = |v: f64| settings.abs_tol.max(settings.rel_tol * v.abs());
    if first.error <= tol(first.value) {
        return Ok(Integral {
            value: first.value,
            abs_error: first.error,
            evaluations,
        });
    }

    let mut heap = BinaryHeap::with_capacity(64);
    let mut value = first.value;
    let mut error = first.error;
    // Panels too narrow to split further; their error is final.
    let mut frozen_error = 0.0;
    let mut frozen_value = 0.0;
    heap.push(first);
    let mut subdivisions = 1;
    while error + frozen_error > tol(value + frozen_value) {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        let width = worst.b - worst.a;
        if width <= 64.0 * f64::EPSILON * (worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE))
            || mid <= worst.a
            || mid >= worst.b
        {
            value -= worst.value;
            error -= worst.error;
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        if subdivisions >= settings.max_subdivisions {
            heap.push(worst);
            let total: f64 = heap.iter().map(|p| p.value).sum::<f64>() + frozen_value;
            let err: f64 = heap.iter().map(|p| p.error).sum::<f64>() + frozen_error;
            return Err(QuadratureError::BudgetExceeded {
                estimate: total,
                error: err,
            }
            .into());
        }
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        evaluations += 42;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Re-summing now and then keeps the running totals from drifting.
        if subdivisions % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let value_sum: f64 = heap.iter().map(|p| p.value).sum::<f64>() + frozen_value;
    let error_sum: f64 = heap.iter().map(|p| p.error).sum::<f64>() + frozen_error;
    Ok(Integral {
        value: value_sum,
        abs_error: error_sum,
        evaluations,
    })
}

/// Adaptive integral of an infallible integrand over `[a, b]`.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<Integral, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok::<f64, QuadratureError>(f(x)), a, b, settings)
}

/// Integral over `[a, b]` split at the interior `breaks`, summing the pieces.
/// Breakpoints outside `(a, b)` are ignored.
pub fn try_integrate_pieces<F, E>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    settings: &QuadratureSettings,
) -> Result<Integral, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    let mut points: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    points.push(a);
    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > a && x < b && x.is_finite())
        .collect();
    inner.sort_by(|x, y| x.total_cmp(y));
    inner.dedup();
    points.extend(inner);
    points.push(b);
    let pieces = (points.len() - 1) as f64;
    let piece_settings = settings.with_abs_tol(settings.abs_tol / pieces);
    let mut total = Integral {
        value: 0.0,
        abs_error: 0.0,
        evaluations: 0,
    };
    for w in points.windows(2) {
        let part = try_integrate(&mut f, w[0], w[1], &piece_settings)?;
        total.value += part.value;
        total.abs_error += part.abs_error;
        total.evaluations += part.evaluations;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Semi-infinite integrals
// ---------------------------------------------------------------------------

/// Analytic majorant of `|f|` on the tail, used to choose the cutoff.
pub enum TailBound<'a> {
    /// `|f(u)| ≤ scale · (u − shift)^(−exponent)` for `u ≥ valid_from`, with
    /// `exponent > 1`.
    PowerLaw {
        scale: f64,
        exponent: f64,
        shift: f64,
        valid_from: f64,
    },
    /// `|f(u)| ≤ scale · exp(−rate · u)`.
    Exponential { scale: f64, rate: f64 },
    /// `∫_U^∞ |f| ≤ mass(U)`, with `mass` nonincreasing.
    Mass(&'a dyn Fn(f64) -> f64),
}

impl TailBound<'_> {
    /// Smallest convenient `U ≥ a` whose discarded tail is at most `tol`.
    pub fn cutoff(&self, a: f64, tol: f64) -> Result<f64, QuadratureError> {
        let u = match *self {
            TailBound::PowerLaw {
                scale,
                exponent,
                shift,
                valid_from,
            } => {
                if !(exponent > 1.0) {
                    return Err(QuadratureError::InvalidSettings("power-law tail needs exponent > 1"));
                }
                if scale <= 0.0 {
                    a
                } else {
                    let p1 = exponent - 1.0;
                    let u = shift + (scale / (p1 * tol)).powf(1.0 / p1);
                    u.max(valid_from)
                }
            }
            TailBound::Exponential { scale, rate } => {
                if !(rate > 0.0) {
                    return Err(QuadratureError::InvalidSettings("exponential tail needs rate > 0"));
                }
                if scale <= 0.0 {
                    a
                } else {
                    (scale / (rate * tol)).ln() / rate
                }
            }
            TailBound::Mass(mass) => {
                let step = a.abs().max(1.0);
                let mut u = a;
                let mut k = 0;
                while mass(u) > tol {
                    u = a + step * 2f64.powi(k);
                    k += 1;
                    if k > 200 {
                        return Err(QuadratureError::TailCutoff(tol));
                    }
                }
                u
            }
        };
        if !u.is_finite() {
            return Err(QuadratureError::TailCutoff(tol));
        }
        Ok(u.max(a))
    }
}

/// `∫_a^∞ f(u) du`, truncated where `tail` guarantees the remainder is below
/// `settings.tail_tol`, then integrated over panels that double in width.
pub fn try_integrate_tail<F, E>(
    mut f: F,
    a: f64,
    tail: &TailBound<'_>,
    settings: &QuadratureSettings,
) -> Result<TailIntegral, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    let cutoff = tail.cutoff(a, settings.tail_tol)?;
    let mut edges = vec![a];
    let mut width = a.abs().max(1.0);
    let mut x = a;
    while x < cutoff {
        x = (x + width).min(cutoff);
        edges.push(x);
        width *= 2.0;
    }
    let panels = (edges.len().max(2) - 1) as f64;
    let panel_settings = settings.with_abs_tol(settings.abs_tol / panels);
    let mut value = 0.0;
    let mut abs_error = settings.tail_tol;
    for w in edges.windows(2) {
        let part = try_integrate(&mut f, w[0], w[1], &panel_settings)?;
        value += part.value;
        abs_error += part.abs_error;
    }
    Ok(TailIntegral {
        value,
        abs_error,
        cutoff,
    })
}

/// Infallible-integrand form of [`try_integrate_tail`].
pub fn integrate_tail<F>(
    mut f: F,
    a: f64,
    tail: &TailBound<'_>,
    settings: &QuadratureSettings,
) -> Result<TailIntegral, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_tail(|x| Ok::<f64, QuadratureError>(f(x)), a, tail, settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn kernel_at_zero_radius_and_infinite_s() {
        let k = Kernel::new(4.0).unwrap();
        assert_eq!(k.eval(3.0, 0.0), 0.0);
        assert_eq!(k.eval(f64::INFINITY, 10.0), 100.0);
        assert!((k.eval(1e30, 10.0) - 100.0).abs() < 1e-10);
    }

    #[test]
    fn kernel_closed_form_alpha_four() {
        // α = 4: ℱ(s, x) = √s · atan(x²/√s).
        let k = Kernel::new(4.0).unwrap();
        for &(s, x) in &[(1.0f64, 2.0f64), (0.3, 0.1), (5.0, 1.2), (1e-3, 40.0), (1e6, 3.0), (2.0, 1.5)] {
            let exact = s.sqrt() * (x * x / s.sqrt()).atan();
            let got = k.eval(s, x);
            assert!((got - exact).abs() <= 1e-13 * exact, "s={s} x={x}: {got} vs {exact}");
        }
        assert!((kernel_f(KernelArgs { s: 1.0, x: 2.0, alpha: 4.0 }).unwrap() - 4f64.atan()).abs() < 1e-14);
    }

    #[test]
    fn kernel_rejects_bad_arguments() {
        assert!(kernel_f(KernelArgs { s: 0.0, x: 1.0, alpha: 4.0 }).is_err());
        assert!(kernel_f(KernelArgs { s: 1.0, x: -1.0, alpha: 4.0 }).is_err());
        assert!(kernel_f(KernelArgs { s: 1.0, x: 1.0, alpha: 2.0 }).is_err());
        assert!(Kernel::new(4.0).unwrap().eval(-1.0, 1.0).is_nan());
    }

    #[test]
    fn kernel_continuous_across_series_switch() {
        for &alpha in &[2.05, 3.0, 4.0, 6.0] {
            let k = Kernel::new(alpha).unwrap();
            let s = 1.0;
            let x0 = SERIES_SWITCH.powf(1.0 / alpha);
            let below = k.eval(s, x0 * (1.0 - 1e-12));
            let above = k.eval(s, x0 * (1.0 + 1e-12));
            assert!((below - above).abs() < 1e-10 * below, "alpha={alpha}");
        }
    }

    #[test]
    fn kernel_difference_far_field() {
        // α = 4: ℱ(s,b) − ℱ(s,a) = √s (atan(b²/√s) − atan(a²/√s)) = √s atan(√s (b² − a²)/(s + a²b²))
        let k = Kernel::new(4.0).unwrap();
        for &(s, a, b) in &[(1.0f64, 1e4f64, 1e4 + 15.0), (50.0, 3.0, 9.0), (2.0, 0.0, 1.0), (1e3, 1e7, 2e7)] {
            let rs = s.sqrt();
            let exact = rs * (rs * (b * b - a * a) / (s + a * a * b * b)).atan();
            let got = k.diff(s, a, b).unwrap();
            assert!((got - exact).abs() <= 1e-12 * exact.abs(), "{s} {a} {b}: {got} vs {exact}");
            assert!((k.diff(s, b, a).unwrap() + got).abs() <= 1e-12 * exact.abs());
        }
    }

    #[test]
    fn polynomial_integral() {
        let r = integrate(|t| 2.0 * PI * t, 0.0, 15.0, &settings()).unwrap();
        assert!((r.value - 225.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|t| 1.0 / t.sqrt(), 0.0, 1.0, &settings()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn budget_exceeded_carries_estimate() {
        let tight = QuadratureSettings {
            abs_tol: 1e-300,
            rel_tol: 1e-300,
            max_subdivisions: 5,
            ..settings()
        };
        match integrate(|t| t.sin().abs(), 0.0, 50.0, &tight) {
            Err(QuadratureError::BudgetExceeded { estimate, error }) => {
                assert!(estimate.is_finite() && error >= 0.0);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_interval_and_non_finite() {
        assert!(matches!(
            integrate(|t| t, 1.0, 0.0, &settings()),
            Err(QuadratureError::InvalidInterval(_, _))
        ));
        assert!(matches!(
            integrate(|_| f64::NAN, 0.0, 1.0, &settings()),
            Err(QuadratureError::NonFinite(_))
        ));
        assert_eq!(integrate(|t| t, 2.0, 2.0, &settings()).unwrap().value, 0.0);
    }

    #[test]
    fn tail_power_law() {
        let tail = TailBound::PowerLaw {
            scale: 1.0,
            exponent: 3.0,
            shift: 0.0,
            valid_from: 1.0,
        };
        let r = integrate_tail(|u| u.powi(-3), 1.0, &tail, &settings()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9, "{}", r.value);
        assert!(r.cutoff > 1000.0);
    }

    #[test]
    fn tail_exponential() {
        // u e^{-u} ≤ (2/e) e^{-u/2}
        let tail = TailBound::Exponential {
            scale: 2.0 / std::f64::consts::E,
            rate: 0.5,
        };
        let r = integrate_tail(|u| u * (-u).exp(), 0.0, &tail, &settings()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn tail_mass_bound() {
        let mass = |u: f64| (-u * u).exp();
        let tail = TailBound::Mass(&mass);
        // ∫₀^∞ 2u e^{-u²} du = 1
        let r = integrate_tail(|u| 2.0 * u * (-u * u).exp(), 0.0, &tail, &settings()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pieces_match_whole() {
        let s = settings();
        let whole = integrate(|t| t.cos(), 0.0, 3.0, &s).unwrap().value;
        let parts = try_integrate_pieces(|t| Ok::<_, QuadratureError>(t.cos()), 0.0, 3.0, &[1.0, -2.0, 2.5, 7.0], &s)
            .unwrap()
            .value;
        assert!((whole - parts).abs() < 1e-12);
    }
}
