//! Exact representation counts for sums of four elements.
//!
//! With `f` the indicator of `A` and `g_c` the pushforward of `A` under
//! `a -> c·a`, the ordered counts are
//!
//! ```text
//! R1 = f*f*f*f   R2 = f*f*g2   R3 = g2*g2   R4 = f*g3   R5 = g4
//! ```
//!
//! and the number `R(m)` of ordered quadruples of pairwise distinct elements
//! summing to `m` satisfies `R = R1 - 6 R2 + 3 R3 + 8 R4 - 6 R5`. The
//! independent distinct-subset DP gives `R = 24 C4`.

use std::fmt;

use crate::error::{Error, Result};
use crate::zn::{Modulus, ResidueSet};

/// Largest `h` accepted by [`distinct_subset_counts`].
pub const MAX_SUBSET_H: usize = 8;

/// Length-`n` vector of exact nonnegative counts indexed by residue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountVector {
    modulus: Modulus,
    counts: Vec<u64>,
}

impl CountVector {
    pub fn zeros(modulus: Modulus) -> Self {
        CountVector {
            modulus,
            counts: vec![0; modulus.as_usize()],
        }
    }

    /// Point mass at residue `r`.
    pub fn delta(modulus: Modulus, r: u32) -> Self {
        let mut v = Self::zeros(modulus);
        v.counts[modulus.reduce(r as i64) as usize] = 1;
        v
    }

    pub fn indicator(a: &ResidueSet) -> Self {
        let mut v = Self::zeros(a.modulus());
        for x in a {
            v.counts[x as usize] = 1;
        }
        v
    }

    pub fn from_counts(modulus: Modulus, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != modulus.as_usize() {
            return Err(Error::InvalidArgument(format!(
                "count vector of length {} for n = {modulus}",
                counts.len()
            )));
        }
        Ok(CountVector { modulus, counts })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, m: u32) -> u64 {
        self.counts[m as usize]
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// Residues with a nonzero count.
    pub fn support(&self) -> ResidueSet {
        ResidueSet::from_residues_mod(
            self.modulus,
            self.counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, _)| i as i64),
        )
    }
}

impl fmt::Display for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// `g_c(m) = #{a in A : c·a = m}`.
pub fn pushforward(a: &ResidueSet, c: u64) -> CountVector {
    let m = a.modulus();
    let mut v = CountVector::zeros(m);
    for x in a {
        v.counts[m.mul(x as u64, c) as usize] += 1;
    }
    v
}

/// Exact cyclic convolution `w(m) = sum_{i+j=m} u(i) v(j)`, schoolbook.
pub fn cyclic_convolve(u: &CountVector, v: &CountVector) -> Result<CountVector> {
    if u.modulus != v.modulus {
        return Err(Error::ModulusMismatch(u.modulus.get(), v.modulus.get()));
    }
    let n = u.modulus.as_usize();
    let mut w = vec![0u64; n];
    let nz: Vec<(usize, u64)> = v
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    for (i, &ui) in u.counts.iter().enumerate() {
        if ui == 0 {
            continue;
        }
        for &(j, vj) in &nz {
            let k = if i + j >= n { i + j - n } else { i + j };
            let p = ui.checked_mul(vj).ok_or(Error::Overflow("cyclic_convolve"))?;
            w[k] = w[k].checked_add(p).ok_or(Error::Overflow("cyclic_convolve"))?;
        }
    }
    Ok(CountVector {
        modulus: u.modulus,
        counts: w,
    })
}

/// `C_h(m)`: number of `h`-element subsets of `A` summing to `m`.
pub fn distinct_subset_counts(a: &ResidueSet, h: usize) -> Result<CountVector> {
    if h > MAX_SUBSET_H {
        return Err(Error::HGuard {
            h,
            max: MAX_SUBSET_H,
        });
    }
    let m = a.modulus();
    let n = m.as_usize();
    let mut table = vec![vec![0u64; n]; h + 1];
    table[0][0] = 1;
    let mut row = vec![0u64; n];
    for (used, x) in a.iter().enumerate() {
        let x = x as usize;
        for j in (1..=h.min(used + 1)).rev() {
            let (lo, hi) = table.split_at_mut(j);
            let prev = &lo[j - 1];
            row.copy_from_slice(&hi[0]);
            for (r, &c) in prev.iter().enumerate() {
                if c != 0 {
                    let k = (r + x) % n;
                    row[k] = row[k]
                        .checked_add(c)
                        .ok_or(Error::Overflow("distinct_subset_counts"))?;
                }
            }
            hi[0].copy_from_slice(&row);
        }
    }
    Ok(CountVector {
        modulus: m,
        counts: table.swap_remove(h),
    })
}

/// All representation counts of `A` for four summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepProfile {
    /// Ordered quadruples of pairwise distinct elements.
    pub r: CountVector,
    /// Ordered quadruples, repetition allowed.
    pub r1: CountVector,
    /// Ordered pairs `(a1, a2)` together with `a3`: `a1 + a2 + 2a3`.
    pub r2: CountVector,
    /// Ordered pairs: `2a1 + 2a2`.
    pub r3: CountVector,
    /// Ordered pairs: `a1 + 3a2`.
    pub r4: CountVector,
    /// Single elements: `4a1`.
    pub r5: CountVector,
    /// Unordered 4-subsets.
    pub c4: CountVector,
}

impl RepProfile {
    /// `R1 - 6R2 + 3R3 + 8R4 - 6R5` at `m`, in signed arithmetic.
    pub fn signed_combination(&self, m: u32) -> i128 {
        signed_combination(
            [
                self.r1.get(m),
                self.r2.get(m),
                self.r3.get(m),
                self.r4.get(m),
                self.r5.get(m),
            ],
        )
    }

    /// `combination(m) - 24·C4(m)`; zero everywhere when the identity holds.
    pub fn residual(&self, m: u32) -> i128 {
        self.signed_combination(m) - 24 * self.c4.get(m) as i128
    }

    pub fn max_abs_residual(&self) -> u128 {
        (0..self.r.modulus.get())
            .map(|m| self.residual(m).unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

fn signed_combination([r1, r2, r3, r4, r5]: [u64; 5]) -> i128 {
    r1 as i128 - 6 * r2 as i128 + 3 * r3 as i128 + 8 * r4 as i128 - 6 * r5 as i128
}

/// Computes every count of [`RepProfile`].
///
/// # Panics
///
/// If the signed combination is negative anywhere. That cannot happen for a
/// correct implementation, so it is treated as a tripwire rather than an error.
pub fn rep_profile(a: &ResidueSet) -> Result<RepProfile> {
    let m = a.modulus();
    let f = CountVector::indicator(a);
    let g2 = pushforward(a, 2);
    let g3 = pushforward(a, 3);
    let g4 = pushforward(a, 4);

    let ff = cyclic_convolve(&f, &f)?;
    let r1 = cyclic_convolve(&ff, &ff)?;
    let r2 = cyclic_convolve(&ff, &g2)?;
    let r3 = cyclic_convolve(&g2, &g2)?;
    let r4 = cyclic_convolve(&f, &g3)?;
    let r5 = g4;

    let mut r = Vec::with_capacity(m.as_usize());
    for i in 0..m.as_usize() {
        let v = signed_combination([
            r1.counts[i],
            r2.counts[i],
            r3.counts[i],
            r4.counts[i],
            r5.counts[i],
        ]);
        assert!(v >= 0, "representation identity violated: R({i}) = {v} < 0 for A = {{{a}}}");
        r.push(u64::try_from(v).map_err(|_| Error::Overflow("rep_profile"))?);
    }
    Ok(RepProfile {
        r: CountVector { modulus: m, counts: r },
        r1,
        r2,
        r3,
        r4,
        r5,
        c4: distinct_subset_counts(a, 4)?,
    })
}

/// `R1 = f*f*f*f` alone.
pub fn r1_counts(a: &ResidueSet) -> Result<CountVector> {
    let f = CountVector::indicator(a);
    let ff = cyclic_convolve(&f, &f)?;
    cyclic_convolve(&ff, &ff)
}

/// Residue minimising `R1`, with the minimum; ties go to the smallest residue.
pub fn min_r1(a: &ResidueSet) -> Result<(u32, u64)> {
    let r1 = r1_counts(a)?;
    Ok(r1
        .counts
        .iter()
        .enumerate()
        .min_by_key(|&(i, &c)| (c, i))
        .map(|(i, &c)| (i as u32, c))
        .unwrap_or((0, 0)))
}
