//! Scanning machinery shared by the verifiers: set families, per-set checks,
//! sharded exhaustive enumeration and seeded sampling, and the merge rule.
//!
//! Merging keeps the instance with the smallest slack, ties broken by the
//! smaller bitmask (smaller `n` first), so the result does not depend on how
//! the work was sharded or how many workers ran it.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::Slack;
use crate::sample::{between, choose, random_k_subset, rng_for, stream_id, ChaCha8Rng};
use crate::zn::{ExhaustiveLimits, Modulus, ResidueSet};

/// How a verifier draws its sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    /// `samples` draws per modulus.
    Random { samples: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub limits: ExhaustiveLimits,
    pub workers: usize,
    /// Test hook: treat this instance as a violation of whatever is checked.
    #[doc(hidden)]
    pub falsify_at: Option<ResidueSet>,
}

impl RunConfig {
    pub fn exhaustive() -> Self {
        RunConfig {
            mode: Mode::Exhaustive,
            limits: ExhaustiveLimits::default(),
            workers: 1,
            falsify_at: None,
        }
    }

    pub fn random(samples: u64, seed: u64) -> Self {
        RunConfig {
            mode: Mode::Random { samples, seed },
            ..Self::exhaustive()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_limits(mut self, limits: ExhaustiveLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            Mode::Exhaustive => None,
            Mode::Random { seed, .. } => Some(seed),
        }
    }

    pub fn samples(&self) -> Option<u64> {
        match self.mode {
            Mode::Exhaustive => None,
            Mode::Random { samples, .. } => Some(samples),
        }
    }
}

type SlackFn<'a> = Box<dyn Fn(&ResidueSet) -> Slack + Sync + 'a>;
type DescribeFn<'a> = Box<dyn Fn(&ResidueSet) -> String + Sync + 'a>;

/// A per-set predicate expressed as a slack (negative = violated), plus a
/// description of the instance for witness reports.
pub struct Check<'a> {
    slack: SlackFn<'a>,
    describe: DescribeFn<'a>,
    falsify_at: Option<ResidueSet>,
}

impl<'a> Check<'a> {
    pub fn new(
        slack: impl Fn(&ResidueSet) -> Slack + Sync + 'a,
        describe: impl Fn(&ResidueSet) -> String + Sync + 'a,
    ) -> Self {
        Check {
            slack: Box::new(slack),
            describe: Box::new(describe),
            falsify_at: None,
        }
    }

    pub(crate) fn falsified(mut self, at: Option<ResidueSet>) -> Self {
        self.falsify_at = at;
        self
    }

    pub fn slack(&self, a: &ResidueSet) -> Slack {
        let s = (self.slack)(a);
        if self.falsify_at.as_ref() == Some(a) {
            return match s {
                Slack::Int(_) => Slack::Int(-1_000_000),
                Slack::Real(_) => Slack::Real(-1e6),
            };
        }
        s
    }

    pub fn describe(&self, a: &ResidueSet) -> String {
        if self.falsify_at.as_ref() == Some(a) {
            return format!("injected violation; {}", (self.describe)(a));
        }
        (self.describe)(a)
    }
}

type MaskFilter<'a> = Box<dyn Fn(u64) -> bool + Sync + 'a>;
type Sampler<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Option<ResidueSet> + Sync + 'a>;

/// The sets a hypothesis admits at one modulus: a bitmask filter for
/// exhaustive runs and a sampler for random runs.
pub struct Family<'a> {
    pub modulus: Modulus,
    filter: MaskFilter<'a>,
    sampler: Sampler<'a>,
    /// Distinguishes sampling streams of several families at one modulus.
    tag: u8,
}

impl<'a> Family<'a> {
    pub fn new(
        modulus: Modulus,
        tag: u8,
        filter: impl Fn(u64) -> bool + Sync + 'a,
        sampler: impl Fn(&mut ChaCha8Rng) -> Option<ResidueSet> + Sync + 'a,
    ) -> Self {
        Family {
            modulus,
            filter: Box::new(filter),
            sampler: Box::new(sampler),
            tag,
        }
    }

    /// Sets with `kmin <= |A| <= kmax`; random draws pick the size uniformly,
    /// then a uniform subset of that size.
    pub fn sizes(modulus: Modulus, kmin: usize, kmax: usize) -> Self {
        let kmax = kmax.min(modulus.as_usize());
        Family::new(
            modulus,
            0,
            move |mask| {
                let c = mask.count_ones() as usize;
                c >= kmin && c <= kmax
            },
            move |rng| {
                (kmin <= kmax).then(|| {
                    let k = between(rng, kmin as u64, kmax as u64) as usize;
                    random_k_subset(rng, modulus, k)
                })
            },
        )
    }

    /// Subsets of `pool` (all within `Z_n`) with `kmin <= |A| <= kmax`.
    pub fn subsets_of(modulus: Modulus, tag: u8, pool: ResidueSet, kmin: usize, kmax: usize) -> Self {
        let kmax = kmax.min(pool.len());
        let pool_mask = pool.mask();
        let elems = pool.to_vec();
        Family::new(
            modulus,
            tag,
            move |mask| {
                let c = mask.count_ones() as usize;
                pool_mask.is_some_and(|p| mask & !p == 0) && c >= kmin && c <= kmax
            },
            move |rng| {
                (kmin <= kmax).then(|| {
                    let k = between(rng, kmin as u64, kmax as u64) as usize;
                    let mut pool = elems.clone();
                    let picked = choose(rng, &mut pool, k);
                    ResidueSet::from_residues_mod(modulus, picked.into_iter().map(i64::from))
                })
            },
        )
    }
}

/// Aggregate of a scan.
#[derive(Debug, Clone, Default)]
pub struct Tally {
    pub checked: u64,
    pub best: Option<(Slack, ResidueSet)>,
    /// `|A| -> (min slack, max slack)`, when requested.
    pub by_size: Option<BTreeMap<usize, (Slack, Slack)>>,
}

fn better(a: &(Slack, ResidueSet), b: &(Slack, ResidueSet)) -> bool {
    a.0.total_cmp(&b.0)
        .then_with(|| a.1.cmp_bitmask(&b.1))
        .is_lt()
}

impl Tally {
    fn new(track_sizes: bool) -> Self {
        Tally {
            checked: 0,
            best: None,
            by_size: track_sizes.then(BTreeMap::new),
        }
    }

    pub fn record(&mut self, slack: Slack, a: &ResidueSet) {
        self.checked += 1;
        let cand = (slack, a);
        let replace = match &self.best {
            None => true,
            Some(b) => {
                cand.0
                    .total_cmp(&b.0)
                    .then_with(|| cand.1.cmp_bitmask(&b.1))
                    .is_lt()
            }
        };
        if replace {
            self.best = Some((slack, a.clone()));
        }
        if let Some(m) = &mut self.by_size {
            let e = m.entry(a.len()).or_insert((slack, slack));
            if slack.total_cmp(&e.0).is_lt() {
                e.0 = slack;
            }
            if slack.total_cmp(&e.1).is_gt() {
                e.1 = slack;
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.best = match (self.best.take(), other.best) {
            (None, b) | (b, None) => b,
            (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
        };
        self.by_size = match (self.by_size.take(), other.by_size) {
            (None, b) | (b, None) => b,
            (Some(mut a), Some(b)) => {
                for (k, (lo, hi)) in b {
                    let e = a.entry(k).or_insert((lo, hi));
                    if lo.total_cmp(&e.0).is_lt() {
                        e.0 = lo;
                    }
                    if hi.total_cmp(&e.1).is_gt() {
                        e.1 = hi;
                    }
                }
                Some(a)
            }
        };
        self
    }

    pub fn min_slack(&self) -> Option<Slack> {
        self.best.as_ref().map(|b| b.0)
    }
}

/// Executes scans on a worker pool of the configured size.
pub struct Runner {
    cfg: RunConfig,
    pool: Option<rayon::ThreadPool>,
}

const SAMPLE_BLOCK: u64 = 256;

impl Runner {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        let pool = if cfg.workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(cfg.workers)
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Runner { cfg, pool })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn check_with_hook<'a>(&self, check: Check<'a>) -> Check<'a> {
        check.falsified(self.cfg.falsify_at.clone())
    }

    fn map_reduce<T, F>(&self, items: Vec<T>, track: bool, f: F) -> Tally
    where
        T: Send,
        F: Fn(T) -> Tally + Sync + Send,
    {
        match &self.pool {
            None => items
                .into_iter()
                .map(&f)
                .fold(Tally::new(track), Tally::merge),
            Some(pool) => pool.install(|| {
                items
                    .into_par_iter()
                    .map(&f)
                    .reduce(|| Tally::new(track), Tally::merge)
            }),
        }
    }

    /// Exhaustive or random scan of one family under the configured mode.
    pub fn scan(&self, family: &Family<'_>, check: &Check<'_>, track_sizes: bool) -> Result<Tally> {
        match self.cfg.mode {
            Mode::Exhaustive => self.scan_exhaustive(family, check, track_sizes),
            Mode::Random { samples, seed } => {
                Ok(self.scan_random(family, check, samples, seed, track_sizes))
            }
        }
    }

    pub fn scan_exhaustive(
        &self,
        family: &Family<'_>,
        check: &Check<'_>,
        track_sizes: bool,
    ) -> Result<Tally> {
        let n = family.modulus.get();
        self.cfg.limits.check(n)?;
        let total = 1u64 << n;
        let shard = (total / 64).max(1 << 10);
        let shards: Vec<Range<u64>> = (0..total)
            .step_by(shard as usize)
            .map(|lo| lo..(lo + shard).min(total))
            .collect();
        Ok(self.map_reduce(shards, track_sizes, |range| {
            let mut t = Tally::new(track_sizes);
            for mask in range {
                if (family.filter)(mask) {
                    let a = ResidueSet::from_mask(family.modulus, mask);
                    t.record(check.slack(&a), &a);
                }
            }
            t
        }))
    }

    pub fn scan_random(
        &self,
        family: &Family<'_>,
        check: &Check<'_>,
        samples: u64,
        seed: u64,
        track_sizes: bool,
    ) -> Tally {
        let n = family.modulus.get();
        let blocks: Vec<Range<u64>> = (0..samples)
            .step_by(SAMPLE_BLOCK as usize)
            .map(|lo| lo..(lo + SAMPLE_BLOCK).min(samples))
            .collect();
        self.map_reduce(blocks, track_sizes, |range| {
            let mut t = Tally::new(track_sizes);
            for i in range {
                let mut rng = rng_for(seed, stream_id(family.tag, n, i));
                if let Some(a) = (family.sampler)(&mut rng) {
                    t.record(check.slack(&a), &a);
                }
            }
            t
        })
    }
}
