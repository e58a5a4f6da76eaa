//! Segmented prime generation and gap statistics: block and range spacing
//! summaries with maximum-likelihood gamma shapes, and the observed-versus-
//! model gap histogram.
//!
//! Primes stream from an odd-only segmented sieve of Eratosthenes (2²²
//! candidates per segment), so memory stays bounded for runs up to the
//! configured cap (`ENTROFLOW_MAX_PRIMES`, default 10⁸). Gap statistics
//! accumulate in one pass: mean, population standard deviation,
//! `cv = sd/mean`, and the fitted gamma shape `κ` of the gap sample.

use crate::error::{Error, Result};
use crate::gamma::{GammaFit, LogMomentAccumulator};
use crate::specfun::reg_lower_incomplete_gamma;

/// Default ceiling on how many primes a single call may generate.
pub const DEFAULT_MAX_PRIMES: u64 = 100_000_000;

/// Odd candidates per sieve segment (spans 2²³ integers).
const SEGMENT_ODDS: usize = 1 << 22;

/// Env var overriding [`DEFAULT_MAX_PRIMES`]; unparsable values fall back
/// to the default.
pub const MAX_PRIMES_ENV: &str = "ENTROFLOW_MAX_PRIMES";

fn prime_cap() -> u64 {
    std::env::var(MAX_PRIMES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_PRIMES)
}

fn isqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// Upper bound on the n-th prime: `n (ln n + ln ln n)` for `n ≥ 6`.
fn nth_prime_bound(n: u64) -> u64 {
    if n < 6 {
        return 15;
    }
    let nf = n as f64;
    (nf * (nf.ln() + nf.ln().ln())).ceil() as u64 + 2
}

/// Odd primes `3, 5, …` up to `limit` inclusive, by a plain sieve.
fn simple_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let m = ((limit - 3) / 2 + 1) as usize;
    let mut composite = vec![false; m];
    let mut i = 0;
    loop {
        let p = 2 * i as u64 + 3;
        if p * p > limit {
            break;
        }
        if !composite[i] {
            let mut j = ((p * p - 3) / 2) as usize;
            while j < m {
                composite[j] = true;
                j += p as usize;
            }
        }
        i += 1;
    }
    (0..m)
        .filter(|&i| !composite[i])
        .map(|i| 2 * i as u64 + 3)
        .collect()
}

/// Streams the first `n` primes in increasing order into `f`.
///
/// Exact and deterministic; fails with a resource error when `n` exceeds
/// the configured cap.
pub fn for_each_prime<F: FnMut(u64)>(n: u64, mut f: F) -> Result<()> {
    let cap = prime_cap();
    if n > cap {
        return Err(Error::ResourceLimit(format!(
            "{n} primes requested, cap is {cap} (override with {MAX_PRIMES_ENV})"
        )));
    }
    if n == 0 {
        return Err(Error::domain("at least one prime must be requested"));
    }
    f(2);
    if n == 1 {
        return Ok(());
    }

    let limit = nth_prime_bound(n);
    let base = simple_odd_primes(isqrt(limit));
    let mut words = vec![0u64; SEGMENT_ODDS / 64];
    let mut found = 1u64;
    let mut lo = 3u64;
    while lo <= limit {
        let hi = (lo + 2 * SEGMENT_ODDS as u64).min(limit + 1);
        let cand = (hi - lo).div_ceil(2);
        words.iter_mut().for_each(|w| *w = 0);
        for &p in &base {
            let p2 = p * p;
            if p2 >= hi {
                break;
            }
            let mut m = if p2 > lo { p2 } else { lo.div_ceil(p) * p };
            if m % 2 == 0 {
                m += p;
            }
            let mut idx = ((m - lo) / 2) as usize;
            while (idx as u64) < cand {
                words[idx >> 6] |= 1 << (idx & 63);
                idx += p as usize;
            }
        }
        let n_words = cand.div_ceil(64) as usize;
        for (w_i, &w) in words.iter().enumerate().take(n_words) {
            let mut bits = !w;
            let rem = cand - (w_i as u64) * 64;
            if rem < 64 {
                bits &= (1u64 << rem) - 1;
            }
            while bits != 0 {
                let idx = w_i * 64 + bits.trailing_zeros() as usize;
                f(lo + 2 * idx as u64);
                found += 1;
                if found == n {
                    return Ok(());
                }
                bits &= bits - 1;
            }
        }
        lo = hi;
    }
    Err(Error::Convergence(format!(
        "sieve bound {limit} produced only {found} of {n} primes"
    )))
}

/// The first `n` primes as a vector.
pub fn generate_primes(n: u64) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(n.min(DEFAULT_MAX_PRIMES) as usize);
    for_each_prime(n, |p| out.push(p))?;
    Ok(out)
}

/// Consecutive differences `primes[i+1] − primes[i]`.
pub fn gaps(primes: &[u64]) -> Result<Vec<u64>> {
    if primes.len() < 2 {
        return Err(Error::domain("gaps need at least two primes"));
    }
    let mut out = Vec::with_capacity(primes.len() - 1);
    for w in primes.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Ordering(format!(
                "sequence not strictly increasing at {} followed by {}",
                w[0], w[1]
            )));
        }
        out.push(w[1] - w[0]);
    }
    Ok(out)
}

/// Gap statistics of one block or range of consecutive primes: mean,
/// population standard deviation, `cv = sd/mean`, and the fitted gamma
/// shape `κ` of the gap sample.
#[derive(Debug, Clone)]
pub struct SpacingStats {
    pub label: String,
    pub count: u64,
    pub mean: f64,
    pub sd: f64,
    pub cv: f64,
    pub kappa: f64,
}

fn finalize_stats(label: String, acc: &LogMomentAccumulator) -> Result<SpacingStats> {
    let fit = acc.fit().map_err(|e| match e {
        Error::DegenerateSample(msg) => Error::DegenerateSample(format!("block {label}: {msg}")),
        other => other,
    })?;
    let mean = acc.mean();
    let sd = acc.sd();
    Ok(SpacingStats {
        label,
        count: acc.count(),
        mean,
        sd,
        cv: sd / mean,
        kappa: fit.params.kappa(),
    })
}

fn block_label(block: u64, block_size: u64) -> String {
    format!("{}-{}", block * block_size + 1, (block + 1) * block_size)
}

/// Accumulates per-block gap statistics from a prime stream. Gaps are the
/// `block_size − 1` differences strictly inside each block; the gap that
/// straddles two blocks belongs to neither.
struct BlockAccumulator {
    block_size: u64,
    seen: u64,
    prev: u64,
    current: LogMomentAccumulator,
    done: Vec<LogMomentAccumulator>,
}

impl BlockAccumulator {
    fn new(block_size: u64) -> Self {
        BlockAccumulator {
            block_size,
            seen: 0,
            prev: 0,
            current: LogMomentAccumulator::new(),
            done: Vec::new(),
        }
    }

    fn push(&mut self, p: u64) {
        if !self.seen.is_multiple_of(self.block_size) {
            self.current.push((p - self.prev) as f64);
        }
        self.prev = p;
        self.seen += 1;
        if self.seen.is_multiple_of(self.block_size) {
            self.done.push(self.current);
            self.current = LogMomentAccumulator::new();
        }
    }

    fn finalize(self) -> Result<Vec<SpacingStats>> {
        self.done
            .into_iter()
            .enumerate()
            .map(|(k, acc)| finalize_stats(block_label(k as u64, self.block_size), &acc))
            .collect()
    }
}

/// Gap statistics for consecutive blocks of `block_size` primes among the
/// first `n_primes`. Only complete blocks are reported; `block_size` must
/// be at least 2 and `n_primes` at least `block_size`.
pub fn block_stats(n_primes: u64, block_size: u64) -> Result<Vec<SpacingStats>> {
    check_block_args(n_primes, block_size)?;
    let full = (n_primes / block_size) * block_size;
    let mut blocks = BlockAccumulator::new(block_size);
    for_each_prime(full, |p| blocks.push(p))?;
    blocks.finalize()
}

/// [`block_stats`] over an explicit strictly increasing sequence.
pub fn block_stats_over(primes: &[u64], block_size: u64) -> Result<Vec<SpacingStats>> {
    check_block_args(primes.len() as u64, block_size)?;
    let mut blocks = BlockAccumulator::new(block_size);
    for w in primes.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Ordering(format!(
                "sequence not strictly increasing at {} followed by {}",
                w[0], w[1]
            )));
        }
    }
    for &p in &primes[..((primes.len() as u64 / block_size * block_size) as usize)] {
        blocks.push(p);
    }
    blocks.finalize()
}

fn check_block_args(n_primes: u64, block_size: u64) -> Result<()> {
    if block_size < 2 {
        return Err(Error::domain("block size must be at least 2"));
    }
    if n_primes < block_size {
        return Err(Error::domain(format!(
            "{n_primes} primes cannot fill a block of {block_size}"
        )));
    }
    Ok(())
}

/// Gap statistics over all `n_primes − 1` gaps among the first `n_primes`
/// primes; equals `block_stats(n, n)` by construction.
pub fn range_stats(n_primes: u64) -> Result<SpacingStats> {
    if n_primes < 2 {
        return Err(Error::domain("range statistics need at least two primes"));
    }
    let mut acc = LogMomentAccumulator::new();
    let mut prev = 0u64;
    for_each_prime(n_primes, |p| {
        if prev != 0 {
            acc.push((p - prev) as f64);
        }
        prev = p;
    })?;
    finalize_stats(format!("1-{n_primes}"), &acc)
}

/// One histogram row: a gap value, how often it occurred, and the count
/// the fitted gamma model assigns to its width-2 bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCount {
    pub gap: u64,
    pub observed: u64,
    pub model: f64,
}

/// Observed gap frequencies against the fitted gamma model.
#[derive(Debug, Clone)]
pub struct GapHistogram {
    /// Rows in increasing gap order; only gaps that occur are listed.
    pub entries: Vec<GapCount>,
    /// Total number of gaps (sum of observed counts).
    pub total: u64,
    /// Gamma fit of the raw gap sample that defines the model column.
    pub fit: GammaFit,
}

impl GapHistogram {
    /// Rows ranked by observed frequency, most frequent first; ties break
    /// toward the smaller gap.
    pub fn ranked(&self) -> Vec<GapCount> {
        let mut rows = self.entries.clone();
        rows.sort_by(|a, b| b.observed.cmp(&a.observed).then(a.gap.cmp(&b.gap)));
        rows
    }
}

/// Histogram of the gaps among the first `n_primes` primes with gamma
/// model counts.
///
/// For an even gap `d` the model count is `total · [P(d+1) − P(d−1)]`
/// where `P` is the CDF of the fitted gamma (width-2 bin centered on the
/// even-gap lattice); the single odd gap 1 uses `total · P(2)`.
pub fn gap_histogram(n_primes: u64) -> Result<GapHistogram> {
    if n_primes < 3 {
        return Err(Error::domain("histogram needs at least three primes"));
    }
    let mut counts: Vec<u64> = Vec::new();
    let mut acc = LogMomentAccumulator::new();
    let mut prev = 0u64;
    for_each_prime(n_primes, |p| {
        if prev != 0 {
            let gap = p - prev;
            if counts.len() as u64 <= gap {
                counts.resize(gap as usize + 1, 0);
            }
            counts[gap as usize] += 1;
            acc.push(gap as f64);
        }
        prev = p;
    })?;
    let fit = acc.fit()?;
    let total = acc.count();
    let (mu, kappa) = (fit.params.mu(), fit.params.kappa());
    let cdf = |x: f64| reg_lower_incomplete_gamma(kappa, kappa * x / mu);
    let mut entries = Vec::new();
    for (gap, &observed) in counts.iter().enumerate() {
        if observed == 0 {
            continue;
        }
        let gap = gap as u64;
        let model = if gap == 1 {
            total as f64 * cdf(2.0)?
        } else {
            total as f64 * (cdf(gap as f64 + 1.0)? - cdf(gap as f64 - 1.0)?)
        };
        entries.push(GapCount {
            gap,
            observed,
            model,
        });
    }
    Ok(GapHistogram {
        entries,
        total,
        fit,
    })
}

/// Renders spacing rows as CSV with header `label,count,mean,sd,cv,kappa`
/// and six-decimal values.
pub fn stats_csv(rows: &[SpacingStats]) -> String {
    let mut out = String::from("label,count,mean,sd,cv,kappa\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{:.6}\n",
            r.label, r.count, r.mean, r.sd, r.cv, r.kappa
        ));
    }
    out
}

/// Renders a histogram as CSV with header `gap,observed,model` and
/// six-decimal model counts.
pub fn histogram_csv(h: &GapHistogram) -> String {
    let mut out = String::from("gap,observed,model\n");
    for e in &h.entries {
        out.push_str(&format!("{},{},{:.6}\n", e.gap, e.observed, e.model));
    }
    out
}
