//! Residue arithmetic in `Z_n` and the word-packed [`ResidueSet`].
//!
//! Every residue is stored canonically in `[0, n)`. Sets are bit vectors
//! (bit `i` set means residue `i` is a member) with a cached cardinality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Order of the cyclic group `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u32);

impl Modulus {
    pub const MAX: u32 = 1 << 20;

    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > Self::MAX as u64 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// Canonical representative of `x mod n`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u32 {
        ((a % self.0 as u64) * (b % self.0 as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Multiplicative inverse of `u`, if `u` is a unit.
    pub fn inverse(self, u: u64) -> Option<u32> {
        let n = self.0 as i64;
        let (mut r0, mut r1) = (n, (u % self.0 as u64) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            // n = 1 has the single unit 0 = 1.
            return if n == 1 { Some(0) } else { None };
        }
        Some(t0.rem_euclid(n) as u32)
    }

    /// Additive order of `x` in `Z_n`.
    pub fn order_of(self, x: u32) -> u32 {
        self.0 / gcd(self.0 as u64, x as u64) as u32
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
fn top_mask(n: usize) -> u64 {
    match n % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// `dst |= rotate(src, t)` on `n`-bit cyclic bit vectors, where the rotation
/// sends bit `i` to bit `(i + t) mod n`. Requires `t < n`.
pub(crate) fn or_rotated(dst: &mut [u64], src: &[u64], t: usize, n: usize) {
    debug_assert!(t < n);
    if n <= WORD {
        let v = src[0];
        let r = if t == 0 { v } else { (v << t) | (v >> (n - t)) };
        dst[0] |= r & top_mask(n);
        return;
    }
    if t == 0 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
        return;
    }
    let len = src.len();
    // low part: bits i < n - t move up by t
    let (ws, bs) = (t / WORD, t % WORD);
    for i in (ws..len).rev() {
        let mut w = src[i - ws] << bs;
        if bs != 0 && i > ws {
            w |= src[i - ws - 1] >> (WORD - bs);
        }
        dst[i] |= w;
    }
    // high part: bits i >= n - t wrap down by n - t
    let s = n - t;
    let (ws, bs) = (s / WORD, s % WORD);
    for i in 0..len - ws {
        let mut w = src[i + ws] >> bs;
        if bs != 0 && i + ws + 1 < len {
            w |= src[i + ws + 1] << (WORD - bs);
        }
        dst[i] |= w;
    }
    dst[len - 1] &= top_mask(n);
}

/// A subset of `Z_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: Modulus,
    words: Vec<u64>,
    card: usize,
}

impl ResidueSet {
    pub fn empty(modulus: Modulus) -> Self {
        ResidueSet {
            modulus,
            words: vec![0; words_for(modulus.as_usize())],
            card: 0,
        }
    }

    pub fn full(modulus: Modulus) -> Self {
        let n = modulus.as_usize();
        let mut words = vec![u64::MAX; words_for(n)];
        *words.last_mut().unwrap() = top_mask(n);
        ResidueSet {
            modulus,
            words,
            card: n,
        }
    }

    /// Builds a set from arbitrary integers, reducing each mod `n`.
    /// Repeated residues collapse.
    pub fn from_residues_mod<I: IntoIterator<Item = i64>>(modulus: Modulus, items: I) -> Self {
        let mut words = vec![0u64; words_for(modulus.as_usize())];
        for x in items {
            let r = modulus.reduce(x) as usize;
            words[r / WORD] |= 1 << (r % WORD);
        }
        Self::from_words(modulus, words)
    }

    /// Builds a set from residues already in `[0, n)`; out-of-range or repeated
    /// residues are rejected.
    pub fn from_residues<I: IntoIterator<Item = u32>>(modulus: Modulus, items: I) -> Result<Self> {
        let mut set = Self::empty(modulus);
        for r in items {
            if r >= modulus.get() {
                return Err(Error::SetLiteral {
                    token: r.to_string(),
                    reason: format!("residue out of range for n = {modulus}"),
                });
            }
            if set.contains(r) {
                return Err(Error::SetLiteral {
                    token: r.to_string(),
                    reason: "duplicate residue".into(),
                });
            }
            set.words[r as usize / WORD] |= 1 << (r as usize % WORD);
            set.card += 1;
        }
        Ok(set)
    }

    /// Set whose bit `i` is bit `i` of `mask`. Requires `n <= 64`; bits at or
    /// above `n` are dropped.
    pub fn from_mask(modulus: Modulus, mask: u64) -> Self {
        assert!(modulus.get() <= 64, "from_mask needs n <= 64");
        let mask = mask & top_mask(modulus.as_usize());
        ResidueSet {
            modulus,
            words: vec![mask],
            card: mask.count_ones() as usize,
        }
    }

    pub(crate) fn from_words(modulus: Modulus, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(modulus.as_usize()));
        if let Some(last) = words.last_mut() {
            *last &= top_mask(modulus.as_usize());
        }
        let card = words.iter().map(|w| w.count_ones() as usize).sum();
        ResidueSet {
            modulus,
            words,
            card,
        }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.modulus.get()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.card
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn is_full(&self) -> bool {
        self.card == self.modulus.as_usize()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The bitmask as a `u64`, when `n <= 64`.
    pub fn mask(&self) -> Option<u64> {
        (self.words.len() == 1).then(|| self.words[0])
    }

    #[inline]
    pub fn contains(&self, r: u32) -> bool {
        let r = r as usize;
        r < self.modulus.as_usize() && self.words[r / WORD] >> (r % WORD) & 1 == 1
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn with(&self, r: u32) -> Self {
        let mut out = self.clone();
        let r = self.modulus.reduce(r as i64) as usize;
        if out.words[r / WORD] >> (r % WORD) & 1 == 0 {
            out.words[r / WORD] |= 1 << (r % WORD);
            out.card += 1;
        }
        out
    }

    pub fn without(&self, r: u32) -> Self {
        let mut out = self.clone();
        if self.contains(r) {
            let r = r as usize;
            out.words[r / WORD] &= !(1 << (r % WORD));
            out.card -= 1;
        }
        out
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check_same(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| op(*a, *b))
            .collect();
        Ok(Self::from_words(self.modulus, words))
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let words = self.words.iter().map(|w| !w).collect();
        Self::from_words(self.modulus, words)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.modulus == other.modulus
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Residues of `Z_n` missing from the set, ascending.
    pub fn missing(&self) -> Vec<u32> {
        self.complement().to_vec()
    }

    /// The even residues `E` of `Z_n` (every residue when `n` is odd is
    /// reachable from an even one, so callers guard on parity themselves).
    pub fn evens(modulus: Modulus) -> Self {
        Self::from_residues_mod(modulus, (0..modulus.get() as i64).step_by(2))
    }

    pub fn odds(modulus: Modulus) -> Self {
        Self::from_residues_mod(modulus, (1..modulus.get() as i64).step_by(2))
    }

    /// `(A_e, A_o)`: the even and odd members. Parity is only well defined
    /// for even `n`.
    pub fn parity_split(&self) -> Result<(Self, Self)> {
        if !self.modulus.is_even() {
            return Err(Error::ParityUndefined(self.n()));
        }
        let n = self.modulus.as_usize();
        let even_pattern = 0x5555_5555_5555_5555u64;
        let mut evens = self.words.clone();
        let mut odds = self.words.clone();
        for (e, o) in evens.iter_mut().zip(odds.iter_mut()) {
            *e &= even_pattern;
            *o &= !even_pattern;
        }
        debug_assert!(n.is_multiple_of(2));
        Ok((
            Self::from_words(self.modulus, evens),
            Self::from_words(self.modulus, odds),
        ))
    }

    /// `A + t`.
    pub fn translate(&self, t: i64) -> Self {
        let t = self.modulus.reduce(t) as usize;
        let mut words = vec![0u64; self.words.len()];
        or_rotated(&mut words, &self.words, t, self.modulus.as_usize());
        ResidueSet {
            modulus: self.modulus,
            words,
            card: self.card,
        }
    }

    /// `u·A` for a unit `u`.
    pub fn dilate(&self, u: u64) -> Result<Self> {
        if gcd(u % self.n() as u64, self.n() as u64) != 1 {
            return Err(Error::NotAUnit { u, n: self.n() });
        }
        Ok(self.scale(u))
    }

    /// `{c·a : a in A}` without the unit check; cardinality may drop.
    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        Self::from_residues_mod(m, self.iter().map(|a| m.mul(a as u64, c) as i64))
    }

    /// `-A`.
    pub fn negate(&self) -> Self {
        let m = self.modulus;
        Self::from_residues_mod(m, self.iter().map(|a| -(a as i64)))
    }

    /// Lowercase hex bitmask literal, `0x`-prefixed.
    pub fn to_hex(&self) -> String {
        let mut s = String::from("0x");
        let mut started = false;
        for w in self.words.iter().rev() {
            if started {
                s.push_str(&format!("{w:016x}"));
            } else if *w != 0 {
                s.push_str(&format!("{w:x}"));
                started = true;
            }
        }
        if !started {
            s.push('0');
        }
        s
    }

    /// Parses a set literal: comma-separated residues (`"0,1,2,5"`), or a
    /// `0x`-prefixed hexadecimal bitmask where bit `i` stands for residue `i`.
    /// The empty string is the empty set.
    pub fn parse(modulus: Modulus, text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
            return Self::parse_hex(modulus, hex);
        }
        let mut set = Self::empty(modulus);
        if text.is_empty() {
            return Ok(set);
        }
        for token in text.split(',') {
            let tok = token.trim();
            let r: u64 = tok.parse().map_err(|_| Error::SetLiteral {
                token: tok.to_string(),
                reason: "not a nonnegative integer".into(),
            })?;
            if r >= modulus.get() as u64 {
                return Err(Error::SetLiteral {
                    token: tok.to_string(),
                    reason: format!("residue out of range for n = {modulus}"),
                });
            }
            if set.contains(r as u32) {
                return Err(Error::SetLiteral {
                    token: tok.to_string(),
                    reason: "duplicate residue".into(),
                });
            }
            set = set.with(r as u32);
        }
        Ok(set)
    }

    fn parse_hex(modulus: Modulus, hex: &str) -> Result<Self> {
        let bad = |reason: &str| Error::SetLiteral {
            token: format!("0x{hex}"),
            reason: reason.into(),
        };
        if hex.is_empty() {
            return Err(bad("empty hex literal"));
        }
        let n = modulus.as_usize();
        let mut words = vec![0u64; words_for(n)];
        for (pos, ch) in hex.chars().rev().enumerate() {
            let digit = ch.to_digit(16).ok_or_else(|| bad("not a hex digit"))? as u64;
            if digit == 0 {
                continue;
            }
            let bit = pos * 4;
            if bit + (64 - digit.leading_zeros() as usize) > n {
                return Err(bad(&format!("bit set at or above n = {modulus}")));
            }
            words[bit / WORD] |= digit << (bit % WORD);
        }
        Ok(Self::from_words(modulus, words))
    }

    /// Orders sets by modulus, then by bitmask value read as an unsigned integer.
    pub fn cmp_bitmask(&self, other: &Self) -> Ordering {
        self.modulus
            .cmp(&other.modulus)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }

    #[cfg(test)]
    pub(crate) fn card_consistent(&self) -> bool {
        self.card == self.words.iter().map(|w| w.count_ones() as usize).sum::<usize>()
            && self.words.last().is_none_or(|w| w & !top_mask(self.modulus.as_usize()) == 0)
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueSet(n={}, {{{}}})", self.modulus, self)
    }
}

/// Comma-separated ascending residues; empty string for the empty set.
impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for r in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
            first = false;
        }
        Ok(())
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros();
                self.cur &= self.cur - 1;
                return Some((self.idx * WORD) as u32 + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a ResidueSet {
    type Item = u32;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Guard on exhaustive subset enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveLimits {
    pub ceiling: u32,
}

impl ExhaustiveLimits {
    pub const DEFAULT_CEILING: u32 = 24;
    /// Masks are `u64`, and `2^63` subsets is already absurd.
    pub const HARD_CEILING: u32 = 40;
    pub const ENV_VAR: &'static str = "ZN_EXHAUSTIVE_CEILING";

    pub fn new(ceiling: u32) -> Result<Self> {
        if ceiling > Self::HARD_CEILING {
            return Err(Error::InvalidArgument(format!(
                "exhaustive ceiling {ceiling} above hard limit {}",
                Self::HARD_CEILING
            )));
        }
        Ok(ExhaustiveLimits { ceiling })
    }

    /// Default ceiling, overridden by `ZN_EXHAUSTIVE_CEILING` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(v) => {
                let c = v.trim().parse::<u32>().map_err(|_| {
                    Error::InvalidArgument(format!("{}={v} is not an integer", Self::ENV_VAR))
                })?;
                Self::new(c)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn check(&self, n: u32) -> Result<()> {
        if n > self.ceiling {
            return Err(Error::OverCeiling {
                n,
                ceiling: self.ceiling,
            });
        }
        Ok(())
    }
}

impl Default for ExhaustiveLimits {
    fn default() -> Self {
        ExhaustiveLimits {
            ceiling: Self::DEFAULT_CEILING,
        }
    }
}

/// Calls `visitor` once per subset `A` of `Z_n` with
/// `size_min <= |A| <= size_max`, in increasing bitmask order.
pub fn enumerate_subsets<F>(
    modulus: Modulus,
    size_min: usize,
    size_max: usize,
    limits: ExhaustiveLimits,
    mut visitor: F,
) -> Result<()>
where
    F: FnMut(&ResidueSet),
{
    limits.check(modulus.get())?;
    let end = 1u64 << modulus.get();
    enumerate_shard(modulus, 0..end, size_min, size_max, &mut visitor);
    Ok(())
}

/// One shard of [`enumerate_subsets`]: the masks in `range`, ascending.
/// Shards over disjoint ranges visit disjoint families.
pub fn enumerate_shard<F>(
    modulus: Modulus,
    range: std::ops::Range<u64>,
    size_min: usize,
    size_max: usize,
    visitor: &mut F,
) where
    F: FnMut(&ResidueSet),
{
    for mask in range {
        let c = mask.count_ones() as usize;
        if c >= size_min && c <= size_max {
            visitor(&ResidueSet::from_mask(modulus, mask));
        }
    }
}

impl FromStr for Modulus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a modulus")))?;
        Modulus::new(n)
    }
}
