//! Monte Carlo surface means over `dB_r`.
//!
//! Samples come from [`SphereSampler`] in fixed chunks of [`CHUNK_SAMPLES`]
//! draws. Each chunk keeps its own Welford accumulator; chunks run on the
//! rayon pool and are merged in chunk order, so the result does not depend
//! on the number of worker threads.
//!
//! Points where the integrand hits a zero or pole are rejected and redrawn
//! from the same chunk stream. Calls with the same configuration see the
//! same nodes, which is what the shared-stream identity checks rely on.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nevanlinna::WeilFunction;
use crate::poly::{spherical_conjugate, SliceFunction};
use crate::quat::CHUNK_SAMPLES;
use crate::quat::{Quaternion, SliceComplex, SphereSampler};

pub const DEFAULT_SAMPLES: usize = 300_000;
pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    MonteCarlo,
    /// Every draw `w` is paired with `conj(w)`; the pair average is one
    /// observation.
    AntitheticPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub samples: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub reject_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            scheme: Scheme::MonteCarlo,
            reject_tol: 1e-12,
        }
    }
}

impl IntegratorConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        IntegratorConfig {
            samples,
            seed,
            ..Default::default()
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "samples must be at least {MIN_SAMPLES}, got {}",
                self.samples
            )));
        }
        if !(self.reject_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "reject_tol must be positive, got {}",
                self.reject_tol
            )));
        }
        Ok(())
    }

    /// `reject_tol (1 + r)^deg`.
    pub fn reject_threshold(&self, r: f64, degree: usize) -> f64 {
        self.reject_tol * (1.0 + r).powi(degree as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalMean {
    pub value: f64,
    pub std_error: f64,
    /// Number of independent observations behind `std_error` (pairs under
    /// the antithetic scheme).
    pub effective_samples: usize,
    pub rejected: usize,
}

impl SphericalMean {
    /// An exact value with no sampling error.
    pub fn exact(value: f64) -> Self {
        SphericalMean {
            value,
            std_error: 0.0,
            effective_samples: 0,
            rejected: 0,
        }
    }

    /// `value +- k * std_error` contains `x`.
    pub fn within(&self, x: f64, k: f64) -> bool {
        (self.value - x).abs() <= k * self.std_error
    }
}

/// Outcome of one integrand evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eval {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Welford) {
        if o.n == 0.0 {
            return;
        }
        if self.n == 0.0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n / n;
        self.m2 += o.m2 + d * d * self.n * o.n / n;
        self.n = n;
    }
}

struct ChunkStats {
    acc: Vec<Welford>,
    rejected: usize,
}

/// Shared-node estimator of `width` surface means at once.
///
/// `kernel(w, out)` fills `out[..width]` with the integrand values at `w`
/// or returns [`Eval::Reject`] to have `w` redrawn. Errors abort the run.
pub fn estimate<K>(r: f64, cfg: &IntegratorConfig, width: usize, kernel: K) -> Result<Vec<SphericalMean>>
where
    K: Fn(Quaternion, &mut [f64]) -> Result<Eval> + Sync,
{
    cfg.validate()?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let antithetic = cfg.scheme == Scheme::AntitheticPair;
    let draws = if antithetic { cfg.samples / 2 } else { cfg.samples };
    let nchunks = draws.div_ceil(CHUNK_SAMPLES);
    let sampler = SphereSampler::new(r, cfg.seed, 0);

    let chunks: Vec<Result<ChunkStats>> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let take = CHUNK_SAMPLES.min(draws - c * CHUNK_SAMPLES);
            let mut rng = sampler.chunk_rng(c as u64);
            let mut acc = vec![Welford::default(); width];
            let mut a = vec![0.0; width];
            let mut b = vec![0.0; width];
            let mut rejected = 0;
            let mut accepted = 0;
            while accepted < take {
                let w = sampler.draw(&mut rng);
                let ok = if antithetic {
                    kernel(w, &mut a)? == Eval::Accept && kernel(w.conj(), &mut b)? == Eval::Accept
                } else {
                    kernel(w, &mut a)? == Eval::Accept
                };
                if !ok {
                    rejected += 1;
                    if rejected > take {
                        return Err(Error::TooManyRejections {
                            rejected,
                            samples: take,
                        });
                    }
                    continue;
                }
                for k in 0..width {
                    let x = if antithetic { 0.5 * (a[k] + b[k]) } else { a[k] };
                    acc[k].push(x);
                }
                accepted += 1;
            }
            Ok(ChunkStats { acc, rejected })
        })
        .collect();

    let mut total = vec![Welford::default(); width];
    let mut rejected = 0;
    for c in chunks {
        let c = c?;
        rejected += c.rejected;
        for (t, x) in total.iter_mut().zip(&c.acc) {
            t.merge(x);
        }
    }
    if rejected as f64 > 1e-3 * cfg.samples as f64 {
        return Err(Error::TooManyRejections {
            rejected,
            samples: cfg.samples,
        });
    }
    Ok(total
        .iter()
        .map(|w| {
            let var = if w.n > 1.0 { w.m2 / (w.n - 1.0) } else { 0.0 };
            SphericalMean {
                value: w.mean,
                std_error: (var / w.n).sqrt(),
                effective_samples: w.n as usize,
                rejected,
            }
        })
        .collect())
}

/// `f(q)`, or `None` at a pole.
pub fn eval_or_pole<F: SliceFunction + ?Sized>(f: &F, q: Quaternion) -> Result<Option<Quaternion>> {
    match f.eval(q) {
        Ok(v) => Ok(Some(v)),
        Err(Error::EvalAtPole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `|f(q)|`, or `None` at a pole.
pub fn abs_or_pole<F: SliceFunction + ?Sized>(f: &F, q: Quaternion) -> Result<Option<f64>> {
    match f.abs_at(q) {
        Ok(v) => Ok(Some(v)),
        Err(Error::EvalAtPole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `S_g(w)`, or `None` where it is undefined.
pub fn conjugate_or_none<G: SliceFunction + ?Sized>(g: &G, w: Quaternion) -> Result<Option<Quaternion>> {
    match spherical_conjugate(g, w) {
        Ok(s) => Ok(Some(s)),
        Err(Error::UndefinedAtZeroPole) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `|f(S_g(w))|`. `S_g(w)` lies on the sphere of `w` by construction, so
/// for slice-preserving `f` the modulus is read off `S_w` directly.
pub fn abs_after_conjugate<F, G>(f: &F, g: &G, w: Quaternion) -> Result<Option<f64>>
where
    F: SliceFunction + ?Sized,
    G: SliceFunction + ?Sized,
{
    let Some(s) = conjugate_or_none(g, w)? else {
        return Ok(None);
    };
    if f.is_slice_preserving() {
        match crate::poly::abs_on_sphere(f, SliceComplex::new(w.w, w.im_norm())) {
            Ok(v) => Ok(Some(v)),
            Err(Error::EvalAtPole { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    } else {
        abs_or_pole(f, s)
    }
}

/// Surface mean of `log|f|` over `dB_r`.
pub fn mean_log_abs<F: SliceFunction + ?Sized>(
    f: &F,
    r: f64,
    cfg: &IntegratorConfig,
) -> Result<SphericalMean> {
    let tol = cfg.reject_threshold(r, f.growth_degree());
    let v = estimate(r, cfg, 1, |w, out| {
        Ok(match abs_or_pole(f, w)? {
            Some(m) if m >= tol && m.is_finite() => {
                out[0] = m.ln();
                Eval::Accept
            }
            _ => Eval::Reject,
        })
    })?;
    Ok(v[0])
}

/// Boundary terms of the Jensen formula on shared nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMeans {
    /// Mean of `log|f|`.
    pub f: SphericalMean,
    /// Mean of `log|f o S_f|`.
    pub f_sf: SphericalMean,
    /// Mean of `(log|f| + log|f o S_f|) / 2`.
    pub average: SphericalMean,
}

pub fn mean_log_abs_pair<F: SliceFunction + ?Sized>(
    f: &F,
    r: f64,
    cfg: &IntegratorConfig,
) -> Result<BoundaryMeans> {
    let tol = cfg.reject_threshold(r, f.growth_degree());
    let v = estimate(r, cfg, 3, |w, out| {
        let (Some(a), Some(b)) = (abs_or_pole(f, w)?, abs_after_conjugate(f, f, w)?) else {
            return Ok(Eval::Reject);
        };
        if a < tol || b < tol || !a.is_finite() || !b.is_finite() {
            return Ok(Eval::Reject);
        }
        out[0] = a.ln();
        out[1] = b.ln();
        out[2] = 0.5 * (out[0] + out[1]);
        Ok(Eval::Accept)
    })?;
    Ok(BoundaryMeans {
        f: v[0],
        f_sf: v[1],
        average: v[2],
    })
}

/// Surface mean of `lambda(f(q))` for a Weil function `lambda`.
pub fn mean_weil<F: SliceFunction + ?Sized>(
    f: &F,
    weil: &WeilFunction,
    r: f64,
    cfg: &IntegratorConfig,
) -> Result<SphericalMean> {
    let tol = cfg.reject_threshold(r, f.growth_degree());
    let v = estimate(r, cfg, 1, |w, out| {
        match weil.eval_at(eval_or_pole(f, w)?, tol) {
            Some(x) => {
                out[0] = x;
                Ok(Eval::Accept)
            }
            None => Ok(Eval::Reject),
        }
    })?;
    Ok(v[0])
}

/// `log|f(w)|` and `log|f(conj w)|` over the same draws.
pub fn paired_reflection_mean<F: SliceFunction + ?Sized>(
    f: &F,
    r: f64,
    cfg: &IntegratorConfig,
) -> Result<(SphericalMean, SphericalMean)> {
    let tol = cfg.reject_threshold(r, f.growth_degree());
    let v = estimate(r, cfg, 2, |w, out| {
        let (Some(a), Some(b)) = (abs_or_pole(f, w)?, abs_or_pole(f, w.conj())?) else {
            return Ok(Eval::Reject);
        };
        if a < tol || b < tol || !a.is_finite() || !b.is_finite() {
            return Ok(Eval::Reject);
        }
        out[0] = a.ln();
        out[1] = b.ln();
        Ok(Eval::Accept)
    })?;
    Ok((v[0], v[1]))
}
