//! Monte Carlo for the Poisson transposition process on the complete graph.
//!
//! A realisation `omega` is drawn by sampling the total number of rings on
//! `[0, beta/n]` and then placing each ring on a uniform edge at a uniform
//! time. Samples are grouped into chunks; chunk `c` draws from the ChaCha8
//! stream `c` of the configured seed, so every estimate is a deterministic
//! function of `(seed, chunk_size)` regardless of how chunks are scheduled.
//!
//! Optionally the process is sampled at a tilted ring rate `q` per edge and
//! reweighted by the likelihood ratio of the ring count,
//! `dP/dQ = exp((q - 1) m) q^{-N}` with `m = binom(n, 2) beta / n`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{domain, Result};
use crate::fmath;
use crate::perm::Permutation;

/// Number of batches used for batch-means standard errors.
pub const BATCHES: usize = 64;
/// Effective sample size below which a weighted estimate is flagged.
pub const MIN_RELIABLE_ESS: f64 = 100.0;

/// One ring of the edge `{x, y}` (1-based, `x < y`) at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub x: usize,
    pub y: usize,
    pub t: f64,
}

/// Time-ordered rings on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventList {
    events: Vec<Event>,
    horizon: f64,
}

impl EventList {
    /// Checks vertex bounds and strict time order.
    pub fn new(n: usize, events: Vec<Event>, horizon: f64) -> Result<Self> {
        for e in &events {
            if !(1 <= e.x && e.x < e.y && e.y <= n) || !(0.0..=horizon).contains(&e.t) {
                return Err(domain("event outside the complete graph or time window"));
            }
        }
        if events.windows(2).any(|w| w[0].t >= w[1].t) {
            return Err(domain("event times must be strictly increasing"));
        }
        Ok(EventList { events, horizon })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// The stream for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn edge_count(n: usize) -> f64 {
    n as f64 * (n as f64 - 1.0) / 2.0
}

/// Expected ring count `binom(n, 2) beta / n` under the untilted process.
pub fn mean_event_count(n: usize, beta: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    edge_count(n) * beta / n as f64
}

/// Rings of independent rate-1 Poisson clocks on every edge over `[0, beta/n]`.
pub fn sample_events<R: Rng + ?Sized>(n: usize, beta: f64, rng: &mut R) -> EventList {
    sample_events_with_rate(n, beta, 1.0, rng)
}

/// As [`sample_events`] with every clock running at rate `rate`.
pub fn sample_events_with_rate<R: Rng + ?Sized>(
    n: usize,
    beta: f64,
    rate: f64,
    rng: &mut R,
) -> EventList {
    let horizon = beta / n as f64;
    let mean = rate * mean_event_count(n, beta);
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .expect("positive finite Poisson mean")
            .sample(rng) as usize
    } else {
        0
    };
    let mut events: Vec<Event> = (0..count)
        .map(|_| {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            Event {
                x: a.min(b) + 1,
                y: a.max(b) + 1,
                t: 0.0,
            }
        })
        .collect();
    loop {
        let mut times: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * horizon).collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if times.windows(2).all(|w| w[0] < w[1]) {
            for (e, t) in events.iter_mut().zip(times) {
                e.t = t;
            }
            break;
        }
    }
    EventList { events, horizon }
}

/// `sigma(omega)`: the rings applied earliest first, each swapping the
/// current contents of positions `x` and `y`.
pub fn compose(events: &EventList, n: usize) -> Permutation {
    let mut sigma = Permutation::identity(n);
    for e in events.events() {
        sigma.swap(e.x - 1, e.y - 1);
    }
    sigma
}

/// Cycle structure of a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStats {
    cycle_lengths: Vec<usize>,
    n: usize,
}

impl CycleStats {
    pub fn of(sigma: &Permutation) -> Self {
        CycleStats {
            cycle_lengths: sigma.cycle_type(),
            n: sigma.len(),
        }
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_lengths(&self) -> &[usize] {
        &self.cycle_lengths
    }

    /// Number of cycles `ell`.
    pub fn ell(&self) -> usize {
        self.cycle_lengths.len()
    }

    /// `X_n(k)`: fraction of points in cycles of length at least `k`.
    pub fn x_mass(&self, k: usize) -> f64 {
        let big: usize = self.cycle_lengths.iter().filter(|&&c| c >= k).sum();
        big as f64 / self.n as f64
    }

    /// `ln prod_gamma (e^{h|gamma|} + theta - 1)`.
    pub fn log_field_product(&self, theta: f64, h: f64) -> f64 {
        self.cycle_lengths
            .iter()
            .map(|&c| fmath::ln_exp_plus(h * c as f64, theta - 1.0))
            .sum()
    }
}

/// Parameters of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub theta: f64,
    pub beta: f64,
    pub h: f64,
    pub samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
    /// Per-edge ring rate of the sampling process; `None` picks the
    /// estimator's default.
    pub proposal_rate: Option<f64>,
}

impl McConfig {
    pub fn new(n: usize, theta: f64, beta: f64, samples: usize, seed: u64) -> Self {
        McConfig {
            n,
            theta,
            beta,
            h: 0.0,
            samples,
            seed,
            chunk_size: 4096,
            proposal_rate: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(domain("n must be at least 1"));
        }
        if !(self.theta >= 1.0 && self.theta.is_finite()) {
            return Err(domain("theta must be a finite real >= 1"));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(domain("beta must be a finite nonnegative real"));
        }
        if !self.h.is_finite() {
            return Err(domain("field must be finite"));
        }
        if self.samples == 0 || self.chunk_size == 0 {
            return Err(domain("sample count and chunk size must be positive"));
        }
        if let Some(q) = self.proposal_rate {
            if !(q > 0.0 && q.is_finite()) {
                return Err(domain("proposal rate must be positive"));
            }
        }
        Ok(())
    }

    pub fn chunk_count(&self) -> usize {
        self.samples.div_ceil(self.chunk_size)
    }

    fn chunk_len(&self, chunk: usize) -> usize {
        let start = chunk * self.chunk_size;
        self.chunk_size.min(self.samples.saturating_sub(start))
    }
}

/// Per-sample quantities needed by the estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    /// `ln dP/dQ` of the ring count; zero for untilted sampling.
    pub log_lr: f64,
    pub ell: usize,
    /// `-(h/theta) n + ln prod_gamma (e^{h|gamma|} + theta - 1)`.
    pub log_field: f64,
    /// `X_n(k)` for the requested `k`, or NaN when none was requested.
    pub x_mass: f64,
}

/// Composes every sample of one chunk and reports `(ring count, sigma)`.
pub fn for_each_sample(
    cfg: &McConfig,
    rate: f64,
    chunk: usize,
    mut f: impl FnMut(usize, &Permutation),
) {
    let mut rng = chunk_rng(cfg.seed, chunk as u64);
    for _ in 0..cfg.chunk_len(chunk) {
        let events = sample_events_with_rate(cfg.n, cfg.beta, rate, &mut rng);
        let sigma = compose(&events, cfg.n);
        f(events.len(), &sigma);
    }
}

/// Draws of chunk `chunk` sampled at ring rate `rate`.
pub fn draws_for_chunk(cfg: &McConfig, rate: f64, chunk: usize, k: Option<usize>) -> Vec<Draw> {
    let m = mean_event_count(cfg.n, cfg.beta);
    let ln_rate = fmath::ln(rate);
    let shift = -cfg.h / cfg.theta * cfg.n as f64;
    let mut out = Vec::with_capacity(cfg.chunk_len(chunk));
    for_each_sample(cfg, rate, chunk, |rings, sigma| {
        let stats = CycleStats::of(sigma);
        assert_eq!(
            (cfg.n - stats.ell()) % 2,
            rings % 2,
            "sign of sigma disagrees with the ring count"
        );
        let log_lr = if rate == 1.0 {
            0.0
        } else {
            (rate - 1.0) * m - rings as f64 * ln_rate
        };
        out.push(Draw {
            log_lr,
            ell: stats.ell(),
            log_field: shift + stats.log_field_product(cfg.theta, cfg.h),
            x_mass: k.map_or(f64::NAN, |k| stats.x_mass(k)),
        });
    });
    out
}

/// All draws of a run, chunk by chunk in order.
pub fn draws(cfg: &McConfig, rate: f64, k: Option<usize>) -> Vec<Draw> {
    (0..cfg.chunk_count())
        .flat_map(|c| draws_for_chunk(cfg, rate, c, k))
        .collect()
}

/// Sample mean with a batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Mean and batch-means standard error of `scale * values`.
fn batch_estimate(values: &[f64], scale: f64) -> Estimate {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Estimate {
            mean: mean * scale,
            std_error: f64::NAN,
        };
    }
    let b = BATCHES.min(n);
    let batch_means: Vec<f64> = (0..b)
        .map(|i| {
            let (lo, hi) = (i * n / b, (i + 1) * n / b);
            values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    let bm = batch_means.iter().sum::<f64>() / b as f64;
    let var = batch_means.iter().map(|v| (v - bm) * (v - bm)).sum::<f64>() / (b - 1) as f64;
    Estimate {
        mean: mean * scale,
        std_error: fmath::sqrt(var / b as f64) * scale,
    }
}

/// Importance weights `theta^ell dP/dQ`, returned relative to a common
/// scale as `(weights, ln scale)`.
fn theta_weights(draws: &[Draw], theta: f64) -> (Vec<f64>, f64) {
    let ell_max = draws.iter().map(|d| d.ell).max().unwrap_or(0);
    let lr_max = draws
        .iter()
        .map(|d| d.log_lr)
        .fold(f64::NEG_INFINITY, f64::max);
    let w = draws
        .iter()
        .map(|d| {
            let power = libm::pow(theta, d.ell as f64 - ell_max as f64);
            if d.log_lr == lr_max {
                power
            } else {
                power * fmath::exp(d.log_lr - lr_max)
            }
        })
        .collect();
    (w, ell_max as f64 * fmath::ln(theta) + lr_max)
}

/// Reduces ordered draws to the estimate of `E[theta^ell]`.
pub fn reduce_z(draws: &[Draw], theta: f64) -> Estimate {
    let (w, ln_scale) = theta_weights(draws, theta);
    let ell_max = draws.iter().map(|d| d.ell).max().unwrap_or(0);
    let lr_max = draws
        .iter()
        .map(|d| d.log_lr)
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = if lr_max == 0.0 {
        libm::pow(theta, ell_max as f64)
    } else {
        fmath::exp(ln_scale)
    };
    batch_estimate(&w, scale)
}

/// Effective sample size `(sum w)^2 / sum w^2` of the weights `theta^ell dP/dQ`.
pub fn weight_ess(draws: &[Draw], theta: f64) -> f64 {
    let (w, _) = theta_weights(draws, theta);
    let total: f64 = w.iter().sum();
    let sq: f64 = w.iter().map(|wi| wi * wi).sum();
    total * total / sq
}

/// Reduces ordered draws to the estimate of `Z_n(beta, h)`.
pub fn reduce_z_field(draws: &[Draw]) -> Estimate {
    let ln_scale = draws
        .iter()
        .map(|d| d.log_field + d.log_lr)
        .fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = draws
        .iter()
        .map(|d| fmath::exp(d.log_field + d.log_lr - ln_scale))
        .collect();
    batch_estimate(&w, fmath::exp(ln_scale))
}

/// Self-normalised estimate of a tail probability under `P_theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub estimate: f64,
    pub std_error: f64,
    /// `(sum w)^2 / sum w^2`.
    pub ess: f64,
    pub reliable: bool,
}

/// Reduces ordered draws (with `x_mass` filled in) to `P_theta(X >= eps)`.
pub fn reduce_tail(draws: &[Draw], theta: f64, eps: f64) -> TailEstimate {
    let (w, _) = theta_weights(draws, theta);
    let total: f64 = w.iter().sum();
    let hit: f64 = w
        .iter()
        .zip(draws)
        .map(|(wi, d)| if d.x_mass >= eps { *wi } else { 0.0 })
        .sum();
    let estimate = hit / total;
    let sq: f64 = w.iter().map(|wi| wi * wi).sum();
    let spread: f64 = w
        .iter()
        .zip(draws)
        .map(|(wi, d)| {
            let ind = if d.x_mass >= eps { 1.0 } else { 0.0 };
            wi * wi * (ind - estimate) * (ind - estimate)
        })
        .sum();
    let ess = total * total / sq;
    let reliable = ess >= MIN_RELIABLE_ESS;
    if !reliable {
        log::warn!("effective sample size {ess:.1} is below {MIN_RELIABLE_ESS}; tail estimate is unreliable");
    }
    TailEstimate {
        estimate,
        std_error: fmath::sqrt(spread) / total,
        ess,
        reliable,
    }
}

/// `E[theta^ell]`, an unbiased estimate of `Z_n(beta)`.
pub fn estimate_z(cfg: &McConfig) -> Result<Estimate> {
    cfg.validate()?;
    let rate = cfg.proposal_rate.unwrap_or(1.0);
    Ok(reduce_z(&draws(cfg, rate, None), cfg.theta))
}

/// Unbiased estimate of `Z_n(beta, h)`.
pub fn estimate_z_field(cfg: &McConfig) -> Result<Estimate> {
    cfg.validate()?;
    let rate = cfg.proposal_rate.unwrap_or(1.0);
    Ok(reduce_z_field(&draws(cfg, rate, None)))
}

/// Default ring rate for tail estimates: `1/theta`, which moves the
/// sampling law towards the cycle-weighted one.
pub fn default_tail_rate(theta: f64) -> f64 {
    1.0 / theta
}

/// `P_theta(X_n(k) >= eps)` by importance sampling.
pub fn weighted_tail(cfg: &McConfig, k: usize, eps: f64) -> Result<TailEstimate> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(domain("eps must lie in [0, 1]"));
    }
    let rate = cfg
        .proposal_rate
        .unwrap_or_else(|| default_tail_rate(cfg.theta));
    Ok(reduce_tail(&draws(cfg, rate, Some(k)), cfg.theta, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn figure_cycle_stats() {
        let s = Permutation::from_cycles(10, &[&[1, 3], &[2, 6, 7, 4], &[9, 10]]).unwrap();
        let st = CycleStats::of(&s);
        assert_eq!(st.ell(), 5);
        assert_eq!(st.x_mass(2), 0.8);
        assert_eq!(st.x_mass(1), 1.0);
        let id = CycleStats::of(&Permutation::identity(10));
        assert_eq!((id.ell(), id.x_mass(2)), (10, 0.0));
    }

    #[test]
    fn compose_single_and_empty() {
        let empty = EventList::new(4, vec![], 0.5).unwrap();
        assert_eq!(compose(&empty, 4), Permutation::identity(4));
        let one = EventList::new(4, vec![Event { x: 2, y: 4, t: 0.1 }], 0.5).unwrap();
        assert_eq!(compose(&one, 4).images(), &[0, 3, 2, 1]);
        assert!(EventList::new(4, vec![Event { x: 3, y: 2, t: 0.1 }], 0.5).is_err());
    }

    #[test]
    fn events_are_ordered_and_in_range() {
        let mut rng = chunk_rng(3, 0);
        let mut total = 0usize;
        for _ in 0..2000 {
            let ev = sample_events(10, 2.0, &mut rng);
            assert!(EventList::new(10, ev.events().to_vec(), 0.2).is_ok());
            total += ev.len();
        }
        // mean (n - 1) beta / 2 = 9
        let mean = total as f64 / 2000.0;
        assert!((mean - 9.0).abs() < 0.3, "{mean}");
    }

    #[test]
    fn tiny_beta_gives_empty_lists() {
        let mut rng = chunk_rng(1, 0);
        let empty = (0..1000)
            .filter(|_| sample_events(5, 1e-9, &mut rng).is_empty())
            .count();
        assert_eq!(empty, 1000);
    }

    #[test]
    fn trivial_estimates_are_exact() {
        let cfg = McConfig::new(1, 3.0, 1.0, 500, 9);
        let e = estimate_z(&cfg).unwrap();
        assert_eq!((e.mean, e.std_error), (3.0, 0.0));
        let cfg = McConfig::new(7, 1.0, 1.0, 500, 9);
        let e = estimate_z(&cfg).unwrap();
        assert_eq!((e.mean, e.std_error), (1.0, 0.0));
    }

    #[test]
    fn reversed_events_keep_cycle_type() {
        let mut rng = chunk_rng(5, 2);
        for _ in 0..1000 {
            let ev = sample_events(8, 3.0, &mut rng);
            let forward = compose(&ev, 8);
            let mut sigma = Permutation::identity(8);
            for e in ev.events().iter().rev() {
                sigma.swap(e.x - 1, e.y - 1);
            }
            assert_eq!(CycleStats::of(&forward), CycleStats::of(&sigma));
        }
    }

    #[test]
    fn tail_edge_cases_are_one() {
        let cfg = McConfig::new(30, 2.0, 1.0, 300, 4);
        assert_eq!(weighted_tail(&cfg, 3, 0.0).unwrap().estimate, 1.0);
        assert_eq!(weighted_tail(&cfg, 1, 1.0).unwrap().estimate, 1.0);
        assert!(weighted_tail(&cfg, 1, 1.5).is_err());
    }

    #[test]
    fn chunking_is_deterministic() {
        let mut cfg = McConfig::new(6, 2.0, 1.0, 1000, 77);
        cfg.chunk_size = 100;
        let a = estimate_z(&cfg).unwrap();
        let b = estimate_z(&cfg).unwrap();
        assert_eq!(a, b);
        let joined: Vec<Draw> = (0..cfg.chunk_count())
            .rev()
            .flat_map(|c| draws_for_chunk(&cfg, 1.0, c, None))
            .collect();
        assert_eq!(joined.len(), 1000);
    }
}
