//! One verifier per covering result, each producing a [`VerificationReport`].
//!
//! Every verifier phrases its statement as a per-set slack (negative means
//! the statement fails on that set), scans the sets its hypothesis admits,
//! and reports the minimum slack with its argmin. Hypothesis boundaries are
//! spelled out in each report's `params.hypothesis`; strict and non-strict
//! inequalities follow the original statements exactly.
//!
//! Ranges are inclusive. A verifier restricted to even or prime moduli skips
//! the other moduli of a multi-value range; a single-value range that fails
//! the restriction is an error.

mod engine;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{json, Value};

pub use engine::{Check, Family, Mode, RunConfig, Runner, Tally};

use crate::error::{Error, Result};
use crate::expsum::{
    alpha0, analytic_chain, cubic_condition, cutoff_N, lemma1_max, lemma1_vertex_argmax,
    r1_lower_bound, spectrum, ABS_TOL, MAX_VERTEX_D,
};
use crate::report::{
    Instance, ModeName, Params, Slack, Stats, Verdict, VerificationReport, Witness, SCHEMA,
};
use crate::reps::{pushforward, rep_profile};
use crate::sumset::{restricted_sumset, unrestricted_sumset};
use crate::zn::{is_prime, ExhaustiveLimits, Modulus, ResidueSet};

/// Relative tolerance of the Parseval check.
pub const PARSEVAL_TOL: f64 = 1e-6;
/// Largest modulus accepted by [`enumerate_extremal_2hat`].
pub const EXTREMAL_MAX_N: u32 = 20;
/// Default cube sides for the trigonometric-maximum check.
pub const LEMMA1_DEFAULT_X: [f64; 2] = [1.0, 2.5];

/// Inclusive modulus range `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: u32,
    pub hi: u32,
}

impl NRange {
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidArgument(format!("bad range {lo}..{hi}")));
        }
        Modulus::new(hi as u64)?;
        Ok(NRange { lo, hi })
    }

    pub fn single(n: u32) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }

    pub fn is_single(&self) -> bool {
        self.lo == self.hi
    }

    /// Moduli satisfying `keep`; see the module docs for the error rule.
    fn select(&self, keep: impl Fn(u32) -> bool, what: &str) -> Result<Vec<u32>> {
        if self.is_single() && !keep(self.lo) {
            return Err(Error::Precondition(format!("n = {}: {what}", self.lo)));
        }
        let ns: Vec<u32> = self.iter().filter(|&n| keep(n)).collect();
        if ns.is_empty() {
            return Err(Error::Precondition(format!("no n in {self} satisfies: {what}")));
        }
        Ok(ns)
    }

    fn require_lo(&self, min: u32, what: &str) -> Result<()> {
        if self.lo < min {
            return Err(Error::Precondition(format!("n = {} < {min}: {what}", self.lo)));
        }
        Ok(())
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// Accepts `a..b` (inclusive) or a bare `a`.
impl FromStr for NRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("`{s}` is not a range a..b"));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                NRange::new(num(a)?, num(b)?)
            }
            None => NRange::single(num(s)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VerifierId {
    ThmA,
    ThmB,
    ThmCDOdd,
    ThmD,
    ThmEven,
    ThmParity,
    ThmOddDensity,
    Lemma1,
    Lemma2,
    Lemma4,
    Lemma5,
    Lemma6,
    Lemma20,
    FactI,
    Parseval,
    Problem1,
}

impl VerifierId {
    /// Ids accepted by `verify` (the open-problem search has its own command).
    pub const VERIFY: [VerifierId; 15] = [
        VerifierId::ThmA,
        VerifierId::ThmB,
        VerifierId::ThmCDOdd,
        VerifierId::ThmD,
        VerifierId::ThmEven,
        VerifierId::ThmParity,
        VerifierId::ThmOddDensity,
        VerifierId::Lemma1,
        VerifierId::Lemma2,
        VerifierId::Lemma4,
        VerifierId::Lemma5,
        VerifierId::Lemma6,
        VerifierId::Lemma20,
        VerifierId::FactI,
        VerifierId::Parseval,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VerifierId::ThmA => "thmA",
            VerifierId::ThmB => "thmB",
            VerifierId::ThmCDOdd => "thmC-d-odd",
            VerifierId::ThmD => "thmD",
            VerifierId::ThmEven => "thm-even",
            VerifierId::ThmParity => "thm-parity",
            VerifierId::ThmOddDensity => "thm-odd-density",
            VerifierId::Lemma1 => "lemma1",
            VerifierId::Lemma2 => "lemma2",
            VerifierId::Lemma4 => "lemma4",
            VerifierId::Lemma5 => "lemma5",
            VerifierId::Lemma6 => "lemma6",
            VerifierId::Lemma20 => "lemma20",
            VerifierId::FactI => "factI",
            VerifierId::Parseval => "parseval",
            VerifierId::Problem1 => "problem1",
        }
    }

    pub fn valid_ids() -> String {
        Self::VERIFY
            .iter()
            .map(|v| v.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for VerifierId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VerifierId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::VERIFY
            .iter()
            .chain(std::iter::once(&VerifierId::Problem1))
            .find(|v| v.as_str() == s)
            .copied()
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown verifier `{s}`; valid ids: {}",
                    Self::valid_ids()
                ))
            })
    }
}

/// Parameters some verifiers need beyond the range and run mode.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Summand count for `thmA`.
    pub m: u32,
    /// Density for `thm-odd-density`.
    pub alpha: f64,
    /// Cube sides for `lemma1`.
    pub x_values: Vec<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            m: 3,
            alpha: 0.45,
            x_values: LEMMA1_DEFAULT_X.to_vec(),
        }
    }
}

/// Dispatches by id. `thm-odd-density` takes a single odd `n` (the range's
/// lower end must equal its upper end).
pub fn run_verifier(
    id: VerifierId,
    range: NRange,
    cfg: &RunConfig,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    match id {
        VerifierId::ThmA => verify_theorem_a(opts.m, range, cfg),
        VerifierId::ThmB => verify_theorem_b(range, cfg),
        VerifierId::ThmCDOdd => verify_theorem_c_d_odd(range, cfg),
        VerifierId::ThmD => verify_theorem_d(range, cfg),
        VerifierId::ThmEven => verify_even_n(range, cfg),
        VerifierId::ThmParity => verify_parity_split(range, cfg),
        VerifierId::ThmOddDensity => {
            if !range.is_single() {
                return Err(Error::InvalidArgument(
                    "thm-odd-density takes a single n (use --n or a..a)".into(),
                ));
            }
            verify_odd_density(opts.alpha, range.lo, cfg)
        }
        VerifierId::Lemma1 => verify_lemma1(range, &opts.x_values, cfg),
        VerifierId::Lemma2 => verify_lemma2(range, cfg),
        VerifierId::Lemma4 => verify_lemma4(range, cfg),
        VerifierId::Lemma5 => verify_lemma5(range, cfg),
        VerifierId::Lemma6 => verify_lemma6(range, cfg),
        VerifierId::Lemma20 => verify_lemma20(range, cfg),
        VerifierId::FactI => verify_fact_i(range, cfg),
        VerifierId::Parseval => verify_parseval(range, cfg),
        VerifierId::Problem1 => search_problem1(range, cfg),
    }
}

// ---------------------------------------------------------------------------
// per-set predicates

fn card(a: &ResidueSet, h: usize) -> i64 {
    restricted_sumset(a, h).len() as i64
}

fn missing_list(s: &ResidueSet) -> String {
    let m = s.missing();
    if m.is_empty() {
        "nothing".into()
    } else {
        format!(
            "{{{}}}",
            m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        )
    }
}

/// `h^A = Z_n` for every `h` in `hs`; slack is `min_h |h^A| - n`.
fn covers_check(hs: &'static [usize]) -> Check<'static> {
    Check::new(
        move |a| Slack::Int(hs.iter().map(|&h| card(a, h)).min().unwrap() - a.n() as i64),
        move |a| {
            hs.iter()
                .map(|&h| format!("{h}^A misses {}", missing_list(&restricted_sumset(a, h))))
                .collect::<Vec<_>>()
                .join("; ")
        },
    )
}

/// `|h^A| >= |A| - offset`.
fn size_check(h: usize, offset: i64) -> Check<'static> {
    Check::new(
        move |a| Slack::Int(card(a, h) - (a.len() as i64 - offset)),
        move |a| {
            format!(
                "|{h}^A| = {} vs bound |A| - {offset} = {}",
                card(a, h),
                a.len() as i64 - offset
            )
        },
    )
}

fn theorem_a_bound(m: u32, a: &ResidueSet) -> i64 {
    let (m, k, p) = (m as i64, a.len() as i64, a.n() as i64);
    p.min(m * k - m * m + 1)
}

fn theorem_a_check(m: u32) -> Check<'static> {
    Check::new(
        move |a| Slack::Int(card(a, m as usize) - theorem_a_bound(m, a)),
        move |a| {
            format!(
                "|{m}^A| = {} vs min(p, m|A| - m^2 + 1) = {}",
                card(a, m as usize),
                theorem_a_bound(m, a)
            )
        },
    )
}

/// For even `n`, a subset of `E` is judged against `E`, anything else
/// against `Z_n`. The two hypothesis families never overlap.
fn lemma5_check() -> Check<'static> {
    fn target(a: &ResidueSet) -> (i64, &'static str) {
        let m = a.modulus();
        if m.is_even() && a.is_subset(&ResidueSet::evens(m)) {
            (m.get() as i64 / 2, "E")
        } else {
            (m.get() as i64, "Z_n")
        }
    }
    Check::new(
        |a| Slack::Int(card(a, 2) - target(a).0),
        |a| {
            let (size, g) = target(a);
            format!(
                "G = {g} (|G| = {size}): 2^A misses {} of G",
                size - card(a, 2)
            )
        },
    )
}

fn lemma20_check() -> Check<'static> {
    Check::new(
        |a| {
            let max = spectrum(a).max_offdc().map_or(0.0, |(_, v)| v);
            Slack::Real(a.n() as f64 / 3.0 + ABS_TOL - max)
        },
        |a| {
            let (h, v) = spectrum(a).max_offdc().unwrap_or((0, 0.0));
            format!("|S({h}/{n})| = {v:.12} > n/3 = {:.12}", a.n() as f64 / 3.0, n = a.n())
        },
    )
}

fn parseval_check() -> Check<'static> {
    Check::new(
        |a| Slack::Real(PARSEVAL_TOL - spectrum(a).parseval_error(a.len())),
        |a| {
            let s = spectrum(a);
            format!(
                "sum |S|^2 = {:.9} vs n|A| = {} (relative error {:e})",
                s.energy(),
                a.n() as u64 * a.len() as u64,
                s.parseval_error(a.len())
            )
        },
    )
}

fn lemma2_check() -> Check<'static> {
    fn worst(a: &ResidueSet) -> (u32, i128) {
        let p = rep_profile(a).expect("desk-scale counts fit in 64 bits");
        (0..a.n())
            .map(|m| (m, p.residual(m)))
            .max_by_key(|&(m, r)| (r.unsigned_abs(), std::cmp::Reverse(m)))
            .unwrap_or((0, 0))
    }
    Check::new(
        |a| Slack::Int(-(worst(a).1.unsigned_abs() as i64)),
        |a| {
            let (m, r) = worst(a);
            format!("R1-6R2+3R3+8R4-6R5 - 24*C4 = {r} at m = {m}")
        },
    )
}

/// Data of a set with `|A| = floor(n/2) + 1` and `|2^A| = n - 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalSet {
    pub set: ResidueSet,
    /// `2A \ 2^A`, ascending.
    pub missing: (u32, u32),
    /// Order of the difference of the two missing doubles.
    pub d: u32,
}

/// Extremal data of `a`, or an invariant error if `2A \ 2^A` is not a pair.
pub fn extremal_data(a: &ResidueSet) -> Result<ExtremalSet> {
    let gap = unrestricted_sumset(a, 2).difference(&restricted_sumset(a, 2))?;
    let v = gap.to_vec();
    if v.len() != 2 {
        return Err(Error::Invariant(format!(
            "n = {}, A = {{{a}}}: 2A \\ 2^A = {{{gap}}} has {} elements, expected 2",
            a.n(),
            v.len()
        )));
    }
    let d = a.modulus().order_of(v[1] - v[0]);
    Ok(ExtremalSet {
        set: a.clone(),
        missing: (v[0], v[1]),
        d,
    })
}

fn theorem_c_check() -> Check<'static> {
    Check::new(
        |a| match extremal_data(a) {
            Ok(e) if e.d > 1 && e.d % 2 == 1 => Slack::Int(0),
            _ => Slack::Int(-1),
        },
        |a| match extremal_data(a) {
            Ok(e) => format!("2A \\ 2^A = {{{},{}}}, d = {}", e.missing.0, e.missing.1, e.d),
            Err(e) => e.to_string(),
        },
    )
}

fn lemma6_expected(n: u32) -> u32 {
    if n.is_multiple_of(4) {
        2
    } else {
        1
    }
}

fn lemma6_check() -> Check<'static> {
    Check::new(
        |e| {
            let l = doubling_constant(e).unwrap_or(0) as i64;
            Slack::Int(-(l - lemma6_expected(e.n()) as i64).abs())
        },
        |e| {
            format!(
                "L(E) = {} for n = {}, expected {}",
                doubling_constant(e).unwrap_or(0),
                e.n(),
                lemma6_expected(e.n())
            )
        },
    )
}

fn lemma1_gap(d: u32, x: f64) -> f64 {
    let brute = lemma1_vertex_argmax(d, x).map(|(v, _)| v).unwrap_or(f64::NAN);
    let formula = lemma1_max(d, x).unwrap_or(f64::NAN);
    (brute - formula).abs()
}

/// The set is a cube vertex over `Z_d` (bit `j-1` for coordinate `j`); the
/// slack depends only on `d` and the cube sides.
fn lemma1_check(xs: Vec<f64>) -> Check<'static> {
    let xs2 = xs.clone();
    Check::new(
        move |v| {
            let worst = xs.iter().map(|&x| lemma1_gap(v.n(), x)).fold(0.0, f64::max);
            Slack::Real(ABS_TOL - worst)
        },
        move |v| {
            xs2.iter()
                .map(|&x| {
                    format!(
                        "d = {}, X = {x}: vertex max {:.12} vs X/(2 sin(pi/2d)) = {:.12}",
                        v.n(),
                        lemma1_vertex_argmax(v.n(), x).map(|(v, _)| v).unwrap_or(f64::NAN),
                        lemma1_max(v.n(), x).unwrap_or(f64::NAN)
                    )
                })
                .collect::<Vec<_>>()
                .join("; ")
        },
    )
}

/// The predicate a verifier applies to one set, rebuilt from the report's
/// `params.extra`. Used both by the verifiers and by [`recheck`].
pub fn check_for(id: VerifierId, extra: &BTreeMap<String, Value>) -> Result<Check<'static>> {
    Ok(match id {
        VerifierId::ThmA => {
            let m = extra
                .get("m")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidArgument("thmA needs m".into()))?;
            theorem_a_check(m as u32)
        }
        VerifierId::ThmB => covers_check(&[2]),
        VerifierId::ThmCDOdd => theorem_c_check(),
        VerifierId::ThmD => covers_check(&[3]),
        VerifierId::ThmEven => covers_check(&[4, 5]),
        VerifierId::ThmParity | VerifierId::ThmOddDensity => covers_check(&[4]),
        VerifierId::Lemma1 => {
            let xs = extra
                .get("x_values")
                .and_then(Value::as_array)
                .map(|v| v.iter().filter_map(Value::as_f64).collect())
                .unwrap_or_else(|| LEMMA1_DEFAULT_X.to_vec());
            lemma1_check(xs)
        }
        VerifierId::Lemma2 => lemma2_check(),
        VerifierId::Lemma4 => size_check(2, 0),
        VerifierId::Lemma5 => lemma5_check(),
        VerifierId::Lemma6 => lemma6_check(),
        VerifierId::Lemma20 => lemma20_check(),
        VerifierId::FactI => size_check(3, 2),
        VerifierId::Parseval => parseval_check(),
        VerifierId::Problem1 => size_check(3, 0),
    })
}

/// Re-runs the report's predicate on its witness alone. `Ok(true)` means
/// the recorded violation reproduces; `Ok(false)` for reports without one.
pub fn recheck(report: &VerificationReport) -> Result<bool> {
    let Some(w) = &report.witness else {
        return Ok(false);
    };
    let id: VerifierId = report.verifier_id.parse()?;
    let check = check_for(id, &report.params.extra)?;
    Ok(check.slack(&w.set).is_violation())
}

// ---------------------------------------------------------------------------
// report assembly

struct Draft {
    id: VerifierId,
    range: NRange,
    hypothesis: String,
    extra: BTreeMap<String, Value>,
    mode: ModeName,
    samples: Option<u64>,
    seed: Option<u64>,
    start: Instant,
    info: BTreeMap<String, Value>,
    exceptions: Vec<Witness>,
    forced_fail: Option<Witness>,
}

impl Draft {
    fn new(id: VerifierId, range: NRange, cfg: &RunConfig, hypothesis: impl Into<String>) -> Self {
        Draft {
            id,
            range,
            hypothesis: hypothesis.into(),
            extra: BTreeMap::new(),
            mode: match cfg.mode {
                Mode::Exhaustive => ModeName::Exhaustive,
                Mode::Random { .. } => ModeName::Random,
            },
            samples: cfg.samples(),
            seed: cfg.seed(),
            start: Instant::now(),
            info: BTreeMap::new(),
            exceptions: Vec::new(),
            forced_fail: None,
        }
    }

    fn extra(mut self, key: &str, v: Value) -> Self {
        self.extra.insert(key.into(), v);
        self
    }

    fn finish(self, tally: Tally, check: &Check<'_>) -> VerificationReport {
        let (min_slack, argmin) = match &tally.best {
            Some((s, a)) => (Some(*s), Some(a.clone())),
            None => (None, None),
        };
        let (verdict, witness) = if let Some(w) = self.forced_fail {
            (Verdict::Fail, Some(w))
        } else if tally.checked == 0 {
            (Verdict::Vacuous, None)
        } else {
            match (&min_slack, &argmin) {
                (Some(s), Some(a)) if s.is_violation() => (
                    Verdict::Fail,
                    Some(Witness {
                        set: a.clone(),
                        detail: check.describe(a),
                    }),
                ),
                _ => (Verdict::Pass, None),
            }
        };
        let mut info = self.info;
        if let Some(by_size) = &tally.by_size {
            let m: serde_json::Map<String, Value> = by_size
                .iter()
                .map(|(k, (lo, hi))| (k.to_string(), json!({"min": lo, "max": hi})))
                .collect();
            info.insert("slack_by_size".into(), Value::Object(m));
        }
        VerificationReport {
            schema: SCHEMA,
            verifier_id: self.id.as_str().into(),
            params: Params {
                n_min: self.range.lo,
                n_max: self.range.hi,
                hypothesis: self.hypothesis,
                mode: self.mode,
                samples: self.samples,
                extra: self.extra,
            },
            verdict,
            witness,
            stats: Stats {
                min_slack,
                argmin: argmin.map(Instance),
            },
            sets_checked: tally.checked,
            expected_exceptions: self.exceptions,
            info,
            seed: self.seed,
            elapsed_s: self.start.elapsed().as_secs_f64(),
        }
    }
}

/// Scans `families(n)` for every `n` in `ns` and folds the tallies.
fn scan_all<'a>(
    runner: &Runner,
    ns: &[u32],
    check: &Check<'_>,
    track_sizes: bool,
    families: impl Fn(Modulus) -> Vec<Family<'a>>,
) -> Result<Tally> {
    let mut total = Tally::default();
    for &n in ns {
        let m = Modulus::new(n as u64)?;
        for fam in families(m) {
            total = total.merge(runner.scan(&fam, check, track_sizes)?);
        }
    }
    Ok(total)
}

/// Common shape: one size-range family per modulus.
fn sized_verifier(
    draft: Draft,
    ns: &[u32],
    cfg: &RunConfig,
    track_sizes: bool,
    sizes: impl Fn(u32) -> (usize, usize),
) -> Result<VerificationReport> {
    let runner = Runner::new(cfg.clone())?;
    let check = runner.check_with_hook(check_for(draft.id, &draft.extra)?);
    let tally = scan_all(&runner, ns, &check, track_sizes, |m| {
        let (lo, hi) = sizes(m.get());
        vec![Family::sizes(m, lo, hi)]
    })?;
    Ok(draft.finish(tally, &check))
}

// ---------------------------------------------------------------------------
// verifiers

/// Even `n >= 6`, `|A| >= n/2 + 3` (non-strict) implies `4^A = 5^A = Z_n`.
pub fn verify_even_n(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    range.require_lo(6, "statement needs even n >= 6")?;
    let ns = range.select(|n| n % 2 == 0, "statement needs even n")?;
    let draft = Draft::new(
        VerifierId::ThmEven,
        range,
        cfg,
        "n even >= 6, |A| >= n/2 + 3 => 4^A = 5^A = Z_n",
    );
    sized_verifier(draft, &ns, cfg, false, |n| (n as usize / 2 + 3, n as usize))
}

/// Even `n`, `|A_e| >= n/4 + 3` and `|A_o| >= 2` (both non-strict) implies
/// `4^A = Z_n`. Moduli where `n/4 + 3 > n/2` admit no set.
pub fn verify_parity_split(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns = range.select(|n| n % 2 == 0, "parity split undefined for odd n")?;
    let draft = Draft::new(
        VerifierId::ThmParity,
        range,
        cfg,
        "n even, |A_e| >= n/4 + 3 and |A_o| >= 2 => 4^A = Z_n",
    );
    let runner = Runner::new(cfg.clone())?;
    let check = runner.check_with_hook(check_for(draft.id, &draft.extra)?);
    let even_bits = 0x5555_5555_5555_5555u64;
    let tally = scan_all(&runner, &ns, &check, false, |m| {
        let n = m.as_usize();
        // 4|A_e| >= n + 12
        let e_min = (n + 12).div_ceil(4);
        let half = n / 2;
        let evens = ResidueSet::evens(m).to_vec();
        let odds = ResidueSet::odds(m).to_vec();
        vec![Family::new(
            m,
            0,
            move |mask| {
                (mask & even_bits).count_ones() as usize >= e_min
                    && (mask & !even_bits).count_ones() >= 2
            },
            move |rng| {
                if e_min > half || half < 2 {
                    return None;
                }
                let ke = crate::sample::between(rng, e_min as u64, half as u64) as usize;
                let ko = crate::sample::between(rng, 2, half as u64) as usize;
                let mut pe = evens.clone();
                let mut po = odds.clone();
                let mut picked = crate::sample::choose(rng, &mut pe, ke);
                picked.extend(crate::sample::choose(rng, &mut po, ko));
                Some(ResidueSet::from_residues_mod(m, picked.into_iter().map(i64::from)))
            },
        )]
    })?;
    Ok(draft.finish(tally, &check))
}

/// Odd `n > N(alpha)`, `alpha > alpha0`, and `|A| > alpha n` (strict; the
/// sampled size is `floor(alpha n) + 1`) implies `4^A = Z_n`. Random mode
/// only. The analytic lower bound on the distinct representation count is
/// also evaluated and must be positive.
pub fn verify_odd_density(alpha: f64, n: u32, cfg: &RunConfig) -> Result<VerificationReport> {
    let a0 = alpha0();
    if !(alpha > a0) {
        return Err(Error::BelowCriticalDensity(alpha));
    }
    if n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n = {n} must be odd")));
    }
    let cutoff = cutoff_N(alpha)?;
    if !(n as f64 > cutoff) {
        return Err(Error::Precondition(format!(
            "n below cutoff: n = {n} <= N({alpha}) = {cutoff:.6}"
        )));
    }
    if cfg.mode == Mode::Exhaustive {
        return Err(Error::InvalidArgument(
            "thm-odd-density runs in random mode only".into(),
        ));
    }
    let k = (alpha * n as f64).floor() as u32 + 1;
    if k > n {
        return Err(Error::Precondition(format!("|A| = {k} exceeds n = {n}")));
    }
    let range = NRange::single(n)?;
    let mut draft = Draft::new(
        VerifierId::ThmOddDensity,
        range,
        cfg,
        "n odd > N(alpha), alpha > alpha0, |A| = floor(alpha n) + 1 > alpha n => 4^A = Z_n",
    )
    .extra("alpha", json!(alpha))
    .extra("k", json!(k));
    let chain = analytic_chain(n, k);
    let cubic = cubic_condition(n, k);
    draft.info.insert("alpha0".into(), json!(a0));
    draft.info.insert("cutoff_N".into(), json!(cutoff));
    draft.info.insert("r1_lower_bound".into(), json!(r1_lower_bound(n, k)));
    draft.info.insert("cubic_condition".into(), json!(cubic));
    draft.info.insert("analytic_chain".into(), json!(chain));

    let runner = Runner::new(cfg.clone())?;
    let check = runner.check_with_hook(check_for(draft.id, &draft.extra)?);
    let m = Modulus::new(n as u64)?;
    let tally = runner.scan(&Family::sizes(m, k as usize, k as usize), &check, false)?;
    if !(chain > 0.0 && cubic > 0.0) {
        if let Some((_, a)) = &tally.best {
            draft.forced_fail = Some(Witness {
                set: a.clone(),
                detail: format!("analytic chain {chain} / cubic condition {cubic} not positive"),
            });
        }
    }
    Ok(draft.finish(tally, &check))
}

/// Prime `p`, every `A`: `|m^A| >= min(p, m|A| - m^2 + 1)`, `m` in 2..=4.
pub fn verify_theorem_a(m: u32, range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    if !(2..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!("m = {m} must be 2, 3 or 4")));
    }
    let ns = range.select(|n| is_prime(n as u64), "statement needs prime n")?;
    let draft = Draft::new(
        VerifierId::ThmA,
        range,
        cfg,
        "p prime, all A => |m^A| >= min(p, m|A| - m^2 + 1)",
    )
    .extra("m", json!(m));
    sized_verifier(draft, &ns, cfg, false, |n| (0, n as usize))
}

/// `|A| > n/2 + 1` (strict) implies `2^A = Z_n`.
pub fn verify_theorem_b(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns: Vec<u32> = range.iter().collect();
    let draft = Draft::new(VerifierId::ThmB, range, cfg, "|A| > n/2 + 1 (strict) => 2^A = Z_n");
    // 2|A| > n + 2
    sized_verifier(draft, &ns, cfg, false, |n| ((n as usize + 2) / 2 + 1, n as usize))
}

/// `n >= 12`, `n != 15`, `|A| > n/2` (strict) implies `3^A = Z_n`. At
/// `n = 15` the exception is confirmed by finding the smallest-bitmask set
/// with `|A| >= 8` and `3^A != Z_15`; it is reported under
/// `expected_exceptions`, not as a counterexample.
pub fn verify_theorem_d(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    range.require_lo(12, "statement needs n >= 12")?;
    let ns: Vec<u32> = range.iter().filter(|&n| n != 15).collect();
    let mut draft = Draft::new(
        VerifierId::ThmD,
        range,
        cfg,
        "n >= 12, n != 15, |A| > n/2 (strict) => 3^A = Z_n",
    );
    let runner = Runner::new(cfg.clone())?;
    let check = runner.check_with_hook(check_for(draft.id, &draft.extra)?);
    let tally = scan_all(&runner, &ns, &check, false, |m| {
        vec![Family::sizes(m, m.as_usize() / 2 + 1, m.as_usize())]
    })?;

    if range.iter().any(|n| n == 15) {
        let m = Modulus::new(15)?;
        let mut found = None;
        let mut searched = 0u64;
        crate::zn::enumerate_subsets(m, 8, 15, ExhaustiveLimits::new(15)?, |a| {
            searched += 1;
            if found.is_none() && !restricted_sumset(a, 3).is_full() {
                found = Some(a.clone());
            }
        })?;
        draft.info.insert("exception_sets_searched".into(), json!(searched));
        match found {
            Some(a) => draft.exceptions.push(Witness {
                detail: format!(
                    "expected exception: |A| = {}, 3^A misses {}",
                    a.len(),
                    missing_list(&restricted_sumset(&a, 3))
                ),
                set: a,
            }),
            None => {
                draft.forced_fail = Some(Witness {
                    set: ResidueSet::full(m),
                    detail: "no set with |A| >= 8 and 3^A != Z_15 exists; the n = 15 exception is not genuine".into(),
                })
            }
        }
    }
    Ok(draft.finish(tally, &check))
}

/// `|A| >= 3` implies `|2^A| >= |A|`.
pub fn verify_lemma4(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns: Vec<u32> = range.iter().collect();
    let draft = Draft::new(VerifierId::Lemma4, range, cfg, "|A| >= 3 => |2^A| >= |A|");
    sized_verifier(draft, &ns, cfg, false, |n| (3, n as usize))
}

/// Every `A`: `|3^A| >= |A| - 2`.
pub fn verify_fact_i(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns: Vec<u32> = range.iter().collect();
    let draft = Draft::new(VerifierId::FactI, range, cfg, "all A => |3^A| >= |A| - 2");
    sized_verifier(draft, &ns, cfg, false, |n| (0, n as usize))
}

/// `max_{h != 0} |S(h/n)| <= n/3` for every `A`, as stated (no parity
/// restriction on `n`).
pub fn verify_lemma20(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    range.require_lo(2, "needs n >= 2")?;
    let ns: Vec<u32> = range.iter().collect();
    let draft = Draft::new(
        VerifierId::Lemma20,
        range,
        cfg,
        "all A, n does not divide h => |S(h/n)| <= n/3 (+1e-9)",
    )
    .extra("tolerance", json!(ABS_TOL));
    sized_verifier(draft, &ns, cfg, false, |n| (0, n as usize))
}

/// `sum_h |S(h/n)|^2 = n|A|` to relative `1e-6`.
pub fn verify_parseval(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns: Vec<u32> = range.iter().collect();
    let draft = Draft::new(
        VerifierId::Parseval,
        range,
        cfg,
        "all A => sum_h |S(h/n)|^2 = n|A| (relative 1e-6)",
    )
    .extra("tolerance", json!(PARSEVAL_TOL));
    sized_verifier(draft, &ns, cfg, false, |n| (0, n as usize))
}

/// `R1 - 6R2 + 3R3 + 8R4 - 6R5 = 24 C4` exactly, at every residue.
pub fn verify_lemma2(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns: Vec<u32> = range.iter().collect();
    let draft = Draft::new(
        VerifierId::Lemma2,
        range,
        cfg,
        "all A, all m => R1 - 6R2 + 3R3 + 8R4 - 6R5 = 24 C4 (exact)",
    );
    sized_verifier(draft, &ns, cfg, false, |n| (0, n as usize))
}

/// Searches for `|A| >= 4` with `|3^A| < |A|`. A negative minimum slack is a
/// counterexample to the open question and yields verdict `fail`.
pub fn search_problem1(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns: Vec<u32> = range.iter().collect();
    let draft = Draft::new(
        VerifierId::Problem1,
        range,
        cfg,
        "|A| >= 4 => |3^A| >= |A| ? (open; fail = counterexample found)",
    );
    sized_verifier(draft, &ns, cfg, true, |n| (4, n as usize))
}

/// `max_c #{s in S : 2s = c}`.
pub fn doubling_constant(s: &ResidueSet) -> Result<u32> {
    if s.is_empty() {
        return Err(Error::InvalidArgument("doubling constant of an empty set".into()));
    }
    Ok(pushforward(s, 2).as_slice().iter().copied().max().unwrap_or(0) as u32)
}

/// `|A| > (|G| + L(G))/2` (strict) implies `2^A = G`, for `G = Z_n` and, when
/// `n` is even, for `G = E` with `A` ranging over subsets of `E`.
pub fn verify_lemma5(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns: Vec<u32> = range.iter().collect();
    let mut draft = Draft::new(
        VerifierId::Lemma5,
        range,
        cfg,
        "G in {Z_n, E (n even)}, A subset of G, |A| > (|G| + L(G))/2 (strict) => 2^A = G",
    );
    let mut constants = serde_json::Map::new();
    for &n in &ns {
        let m = Modulus::new(n as u64)?;
        let l = doubling_constant(&ResidueSet::full(m))?;
        let mut entry = json!({ "L_Zn": l });
        if m.is_even() {
            entry["L_E"] = json!(doubling_constant(&ResidueSet::evens(m))?);
        }
        constants.insert(n.to_string(), entry);
    }
    draft.info.insert("doubling_constants".into(), Value::Object(constants));

    let runner = Runner::new(cfg.clone())?;
    let check = runner.check_with_hook(check_for(draft.id, &draft.extra)?);
    let tally = scan_all(&runner, &ns, &check, false, |m| {
        let n = m.as_usize();
        let l = doubling_constant(&ResidueSet::full(m)).unwrap() as usize;
        let mut fams = vec![Family::sizes(m, (n + l) / 2 + 1, n)];
        if m.is_even() {
            let e = ResidueSet::evens(m);
            let le = doubling_constant(&e).unwrap() as usize;
            fams.push(Family::subsets_of(m, 1, e, (n / 2 + le) / 2 + 1, n / 2));
        }
        fams
    })?;
    Ok(draft.finish(tally, &check))
}

/// `L(E) = 2` when `4 | n` and `1` when `n = 2 mod 4`, for every even `n`.
pub fn verify_lemma6(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    let ns = range.select(|n| n % 2 == 0, "E is defined for even n only")?;
    let draft = Draft::new(
        VerifierId::Lemma6,
        range,
        cfg,
        "n even => L(E) = 2 if n = 0 mod 4, 1 if n = 2 mod 4",
    );
    let runner = Runner::new(cfg.clone())?;
    let check = runner.check_with_hook(check_for(draft.id, &draft.extra)?);
    let mut tally = Tally::default();
    for n in ns {
        let e = ResidueSet::evens(Modulus::new(n as u64)?);
        tally.record(check.slack(&e), &e);
    }
    Ok(draft.finish(tally, &check))
}

/// Vertex enumeration of `[0, X]^d` against `X / (2 sin(pi/2d))`, odd `d`
/// in the range (read as `d`, not `n`), each `X` in `x_values`. The instance
/// recorded per `d` is the maximising vertex for the first `X`.
pub fn verify_lemma1(range: NRange, x_values: &[f64], cfg: &RunConfig) -> Result<VerificationReport> {
    range.require_lo(3, "needs d >= 3")?;
    if range.hi > MAX_VERTEX_D {
        return Err(Error::Precondition(format!(
            "d = {} exceeds vertex enumeration guard {MAX_VERTEX_D}",
            range.hi
        )));
    }
    if x_values.is_empty() || x_values.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::InvalidArgument("cube sides must be positive".into()));
    }
    let ds = range.select(|d| d % 2 == 1, "needs odd d")?;
    let draft = Draft::new(
        VerifierId::Lemma1,
        range,
        cfg,
        "d odd >= 3, X > 0 => max over vertices of [0,X]^d of |sum x_j e(j/d)| = X/(2 sin(pi/2d)) (+-1e-9)",
    )
    .extra("x_values", json!(x_values));
    let runner = Runner::new(cfg.clone())?;
    let check = runner.check_with_hook(check_for(draft.id, &draft.extra)?);
    let mut tally = Tally::default();
    for d in ds {
        let (_, vertex) = lemma1_vertex_argmax(d, x_values[0])?;
        let m = Modulus::new(d as u64)?;
        let v = ResidueSet::from_residues_mod(
            m,
            (0..d).filter(|j| vertex >> j & 1 == 1).map(i64::from),
        );
        tally.record(check.slack(&v), &v);
    }
    Ok(draft.finish(tally, &check))
}

/// All sets with `|A| = floor(n/2) + 1` and `|2^A| = n - 2`, ascending by
/// bitmask, each with its missing pair and `d`.
pub fn enumerate_extremal_2hat(modulus: Modulus, limits: ExhaustiveLimits) -> Result<Vec<ExtremalSet>> {
    let n = modulus.get();
    if n > EXTREMAL_MAX_N {
        return Err(Error::OverCeiling {
            n,
            ceiling: EXTREMAL_MAX_N,
        });
    }
    if n < 3 {
        return Ok(Vec::new());
    }
    let k = n as usize / 2 + 1;
    let mut out = Vec::new();
    let mut err = None;
    crate::zn::enumerate_subsets(modulus, k, k, limits, |a| {
        if err.is_none() && restricted_sumset(a, 2).len() == n as usize - 2 {
            match extremal_data(a) {
                Ok(e) => out.push(e),
                Err(e) => err = Some(e),
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// For every extremal set (see [`enumerate_extremal_2hat`]) the order `d` of
/// the difference of the two missing doubles is odd and greater than 1.
pub fn verify_theorem_c_d_odd(range: NRange, cfg: &RunConfig) -> Result<VerificationReport> {
    if cfg.mode != Mode::Exhaustive {
        return Err(Error::InvalidArgument("thmC-d-odd is exhaustive only".into()));
    }
    let mut draft = Draft::new(
        VerifierId::ThmCDOdd,
        range,
        cfg,
        "|A| = floor(n/2) + 1, |2^A| = n - 2 => 2A \\ 2^A = {2a, 2b}, d = ord(2(b - a)) odd > 1",
    );
    let runner = Runner::new(cfg.clone())?;
    let check = runner.check_with_hook(check_for(draft.id, &draft.extra)?);
    let mut tally = Tally::default();
    let mut per_n = serde_json::Map::new();
    let mut ds = std::collections::BTreeSet::new();
    for n in range.iter() {
        let list = enumerate_extremal_2hat(Modulus::new(n as u64)?, cfg.limits)?;
        per_n.insert(n.to_string(), json!(list.len()));
        for e in &list {
            ds.insert(e.d);
            tally.record(check.slack(&e.set), &e.set);
        }
    }
    draft.info.insert("extremal_sets_per_n".into(), Value::Object(per_n));
    draft.info.insert("d_values".into(), json!(ds));
    Ok(draft.finish(tally, &check))
}
