//! Restricted sumsets `h^A` (sums of `h` pairwise distinct elements) and
//! unrestricted sumsets `hA`.
//!
//! The fast path is a layered 0/1-knapsack over bit vectors: elements of `A`
//! are taken in ascending order and layer `j` absorbs layer `j-1` rotated by
//! the element, high layers first so no element is used twice in one sum.

use crate::error::{Error, Result};
use crate::zn::{binomial, or_rotated, ResidueSet};

/// Default cap on `C(|A|, h)` for [`restricted_sumset_naive`].
pub const NAIVE_CEILING: u128 = 10_000_000;

/// All layers `j^A` for `0 <= j <= h_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetLayers {
    h_max: usize,
    layers: Vec<ResidueSet>,
}

impl SumsetLayers {
    pub fn compute(a: &ResidueSet, h_max: usize) -> Self {
        let layers = layer_words(a, h_max)
            .into_iter()
            .map(|w| ResidueSet::from_words(a.modulus(), w))
            .collect();
        SumsetLayers { h_max, layers }
    }

    pub fn h_max(&self) -> usize {
        self.h_max
    }

    /// `j^A`.
    pub fn layer(&self, j: usize) -> &ResidueSet {
        &self.layers[j]
    }

    pub fn layers(&self) -> &[ResidueSet] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<ResidueSet> {
        self.layers
    }
}

fn layer_words(a: &ResidueSet, h: usize) -> Vec<Vec<u64>> {
    let n = a.n() as usize;
    let nw = a.words().len();
    let mut layers = vec![vec![0u64; nw]; h + 1];
    layers[0][0] = 1;
    let mut scratch = vec![0u64; nw];
    for (used, x) in a.iter().enumerate() {
        let top = h.min(used + 1);
        for j in (1..=top).rev() {
            scratch.copy_from_slice(&layers[j]);
            or_rotated(&mut scratch, &layers[j - 1], x as usize, n);
            layers[j].copy_from_slice(&scratch);
        }
    }
    layers
}

/// Single-word kernel for `n <= 64`, used by the exhaustive verifiers.
#[inline]
fn restricted_mask(mask: u64, n: u32, h: usize) -> u64 {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let rot = |v: u64, t: u32| -> u64 {
        if t == 0 {
            v
        } else {
            ((v << t) | (v >> (n - t))) & full
        }
    };
    let mut layers = [0u64; 16];
    let mut big;
    let layers: &mut [u64] = if h < 16 {
        &mut layers[..=h]
    } else {
        big = vec![0u64; h + 1];
        &mut big[..]
    };
    layers[0] = 1;
    let mut rest = mask;
    let mut used = 0;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        used += 1;
        for j in (1..=h.min(used)).rev() {
            layers[j] |= rot(layers[j - 1], x);
        }
    }
    layers[h]
}

/// `h^A`: residues that are sums of `h` pairwise distinct elements of `A`.
/// `0^A = {0}`, and `h^A` is empty once `h > |A|`.
pub fn restricted_sumset(a: &ResidueSet, h: usize) -> ResidueSet {
    if h > a.len() {
        return ResidueSet::empty(a.modulus());
    }
    if let Some(mask) = a.mask() {
        return ResidueSet::from_mask(a.modulus(), restricted_mask(mask, a.n(), h));
    }
    let mut layers = layer_words(a, h);
    ResidueSet::from_words(a.modulus(), layers.swap_remove(h))
}

/// `hA`: sums of `h` elements of `A`, repetition allowed. `0A = {0}`.
pub fn unrestricted_sumset(a: &ResidueSet, h: usize) -> ResidueSet {
    let m = a.modulus();
    let n = m.as_usize();
    let mut acc = ResidueSet::from_residues_mod(m, [0]);
    for _ in 0..h {
        let mut next = vec![0u64; acc.words().len()];
        for x in a.iter() {
            or_rotated(&mut next, acc.words(), x as usize, n);
        }
        acc = ResidueSet::from_words(m, next);
    }
    acc
}

/// Reference implementation of [`restricted_sumset`] by explicit enumeration
/// of every `h`-subset of `A`.
pub fn restricted_sumset_naive(a: &ResidueSet, h: usize) -> Result<ResidueSet> {
    restricted_sumset_naive_with(a, h, NAIVE_CEILING)
}

pub fn restricted_sumset_naive_with(a: &ResidueSet, h: usize, ceiling: u128) -> Result<ResidueSet> {
    let k = a.len();
    let combos = binomial(k as u64, h as u64);
    if combos > ceiling {
        return Err(Error::OracleCeiling {
            combinations: combos,
            ceiling,
        });
    }
    let m = a.modulus();
    let elems = a.to_vec();
    let mut sums = Vec::new();
    if h > k {
        return Ok(ResidueSet::empty(m));
    }
    // lexicographic index combinations
    let mut idx: Vec<usize> = (0..h).collect();
    loop {
        let s: u64 = idx.iter().map(|&i| elems[i] as u64).sum();
        sums.push((s % m.get() as u64) as i64);
        let mut i = h;
        loop {
            if i == 0 {
                return Ok(ResidueSet::from_residues_mod(m, sums));
            }
            i -= 1;
            if idx[i] != i + k - h {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..h {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::Modulus;
    use proptest::prelude::*;

    fn set(n: u64, xs: &[u32]) -> ResidueSet {
        ResidueSet::from_residues(Modulus::new(n).unwrap(), xs.iter().copied()).unwrap()
    }

    #[test]
    fn restricted_examples() {
        assert_eq!(restricted_sumset(&set(6, &[0, 1, 2]), 2), set(6, &[1, 2, 3]));
        assert_eq!(restricted_sumset(&set(5, &[1, 2, 4]), 3), set(5, &[2]));
        assert!(restricted_sumset(&set(5, &[1, 2, 4]), 4).is_empty());
        let a = set(10, &[0, 1, 2, 3, 4, 5, 6]);
        assert!(restricted_sumset(&a, 2).is_full());
        assert_eq!(restricted_sumset(&set(7, &[3, 5]), 0), set(7, &[0]));
    }

    #[test]
    fn unrestricted_examples() {
        assert_eq!(unrestricted_sumset(&set(6, &[0, 3]), 2), set(6, &[0, 3]));
        assert_eq!(unrestricted_sumset(&set(5, &[1]), 3), set(5, &[3]));
        assert_eq!(
            unrestricted_sumset(&set(6, &[0, 1, 2]), 2),
            set(6, &[0, 1, 2, 3, 4])
        );
        assert!(unrestricted_sumset(&set(6, &[]), 1).is_empty());
        assert_eq!(unrestricted_sumset(&set(6, &[]), 0), set(6, &[0]));
    }

    #[test]
    fn naive_examples() {
        assert_eq!(restricted_sumset_naive(&set(7, &[0, 1, 2, 3]), 4).unwrap(), set(7, &[6]));
        assert_eq!(restricted_sumset_naive(&set(7, &[1, 2]), 0).unwrap(), set(7, &[0]));
        assert!(restricted_sumset_naive(&set(7, &[1, 2]), 3).unwrap().is_empty());
        let big = ResidueSet::full(Modulus::new(60).unwrap());
        assert!(matches!(
            restricted_sumset_naive(&big, 10),
            Err(Error::OracleCeiling { .. })
        ));
    }

    #[test]
    fn layers_are_consistent() {
        let a = set(11, &[0, 2, 3, 7, 9]);
        let layers = SumsetLayers::compute(&a, 7);
        assert_eq!(layers.layer(0), &set(11, &[0]));
        for j in 1..=7 {
            assert_eq!(layers.layer(j), &restricted_sumset(&a, j));
            let prev_plus_a = layers
                .layer(j - 1)
                .iter()
                .flat_map(|s| a.iter().map(move |x| (s + x) as i64));
            let bound = ResidueSet::from_residues_mod(a.modulus(), prev_plus_a);
            assert!(layers.layer(j).is_subset(&bound));
        }
        assert!(layers.layer(6).is_empty() && layers.layer(7).is_empty());
    }

    #[test]
    fn multiword_matches_naive() {
        let a = ResidueSet::from_residues_mod(Modulus::new(131).unwrap(), [0, 5, 17, 63, 64, 65, 99, 130]);
        for h in 0..=5 {
            assert_eq!(restricted_sumset(&a, h), restricted_sumset_naive(&a, h).unwrap(), "h={h}");
        }
    }

    fn arb_set(max_n: u64) -> impl Strategy<Value = ResidueSet> {
        (1u64..max_n).prop_flat_map(|n| {
            proptest::collection::vec(0..n as i64, 0..14).prop_map(move |xs| {
                ResidueSet::from_residues_mod(Modulus::new(n).unwrap(), xs)
            })
        })
    }

    proptest! {
        #[test]
        fn covariance(a in arb_set(150), t in 0i64..500, h in 0usize..6) {
            let m = a.modulus();
            let base = restricted_sumset(&a, h);
            prop_assert_eq!(restricted_sumset(&a.translate(t), h), base.translate(h as i64 * t));
            prop_assert_eq!(restricted_sumset(&a.negate(), h), base.negate());
            for u in [1u64, 2, 3, 5, 7, 11] {
                if m.inverse(u).is_some() {
                    prop_assert_eq!(restricted_sumset(&a.dilate(u).unwrap(), h), base.dilate(u).unwrap());
                }
            }
            prop_assert_eq!(h == 0 || !base.is_empty(), a.len() >= h);
        }

        #[test]
        fn monotone_and_matches_oracle(a in arb_set(90), extra in proptest::collection::vec(0i64..90, 0..4), h in 0usize..5) {
            let b = a.union(&ResidueSet::from_residues_mod(a.modulus(), extra)).unwrap();
            let ha = restricted_sumset(&a, h);
            prop_assert!(ha.is_subset(&restricted_sumset(&b, h)));
            prop_assert_eq!(ha, restricted_sumset_naive(&a, h).unwrap());
        }
    }
}
