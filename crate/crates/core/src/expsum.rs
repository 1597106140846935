//! Exponential sums `S(h/n) = sum_{a in A} e(ha/n)`, the trigonometric
//! maximum over the cube `[0, X]^d`, and the density constants of the
//! odd-modulus covering theorem.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::zn::{Modulus, ResidueSet};

/// Absolute tolerance for analytic comparisons.
pub const ABS_TOL: f64 = 1e-9;
/// Tolerance on polynomial root residuals.
pub const ROOT_TOL: f64 = 1e-12;
/// Largest `d` accepted by [`lemma1_vertex_bruteforce`] (`2^d` vertices).
pub const MAX_VERTEX_D: u32 = 21;

/// Above this modulus [`spectrum`] switches from direct summation to an FFT.
const DIRECT_LIMIT: u32 = 4096;

/// `e(j/n) = exp(2 pi i j / n)` for `j` in `0..n`.
fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    modulus: Modulus,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `S(h/n)`.
    pub fn at(&self, h: u32) -> Complex64 {
        self.values[self.modulus.reduce(h as i64) as usize]
    }

    /// `(h, |S(h/n)|)` maximising the modulus over `h != 0`; smallest `h` on ties.
    pub fn max_offdc(&self) -> Option<(u32, f64)> {
        let mut best: Option<(u32, f64)> = None;
        for (h, v) in self.values.iter().enumerate().skip(1) {
            let r = v.norm();
            if best.is_none_or(|(_, b)| r > b) {
                best = Some((h as u32, r));
            }
        }
        best
    }

    /// `sum_h |S(h/n)|^2`; equals `n·|A|` exactly in exact arithmetic.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Relative deviation of [`Spectrum::energy`] from `n·|A|`.
    pub fn parseval_error(&self, card: usize) -> f64 {
        let expect = self.modulus.get() as f64 * card as f64;
        if expect == 0.0 {
            return self.energy();
        }
        (self.energy() - expect).abs() / expect
    }
}

/// All `n` values `S(h/n)`, `h = 0..n`.
pub fn spectrum(a: &ResidueSet) -> Spectrum {
    if a.n() <= DIRECT_LIMIT {
        spectrum_direct(a)
    } else {
        spectrum_fft(a)
    }
}

/// Direct summation. Phases are looked up as `e((h·a mod n)/n)` so the angle
/// never grows beyond one turn.
pub fn spectrum_direct(a: &ResidueSet) -> Spectrum {
    let n = a.n() as usize;
    let roots = roots_of_unity(n);
    let elems = a.to_vec();
    let values = (0..n)
        .map(|h| {
            elems
                .iter()
                .map(|&x| roots[(h * x as usize) % n])
                .sum::<Complex64>()
        })
        .collect();
    Spectrum {
        modulus: a.modulus(),
        values,
    }
}

/// Unnormalised inverse DFT of the indicator (the `+2 pi i` sign convention).
pub fn spectrum_fft(a: &ResidueSet) -> Spectrum {
    let n = a.n() as usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for x in a {
        buf[x as usize] = Complex64::new(1.0, 0.0);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Spectrum {
        modulus: a.modulus(),
        values: buf,
    }
}

/// `max_{h != 0} |S(h/n)|`.
pub fn spectrum_max_offdc(a: &ResidueSet) -> Result<f64> {
    if a.n() < 2 {
        return Err(Error::Precondition("spectrum_max_offdc needs n >= 2".into()));
    }
    Ok(spectrum(a).max_offdc().map_or(0.0, |(_, v)| v))
}

fn check_lemma1_args(d: u32, x: f64) -> Result<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("d = {d} must be odd and >= 3")));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidArgument(format!("X = {x} must be positive")));
    }
    Ok(())
}

/// `max_{x in [0,X]^d} |sum_j x_j e(j/d)| = X / (2 sin(pi/2d))` for odd `d >= 3`.
pub fn lemma1_max(d: u32, x: f64) -> Result<f64> {
    check_lemma1_args(d, x)?;
    Ok(x / (2.0 * (PI / (2.0 * d as f64)).sin()))
}

/// The same maximum by enumerating the `2^d` vertices of the cube. Returns the
/// value and the maximising vertex as a bitmask (bit `j-1` set means `x_j = X`).
pub fn lemma1_vertex_argmax(d: u32, x: f64) -> Result<(f64, u32)> {
    check_lemma1_args(d, x)?;
    if d > MAX_VERTEX_D {
        return Err(Error::InvalidArgument(format!(
            "d = {d} exceeds vertex enumeration guard {MAX_VERTEX_D}"
        )));
    }
    let dirs: Vec<Complex64> = (1..=d)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j % d) as f64 / d as f64))
        .collect();
    let mut best = (0.0f64, 0u32);
    for mask in 0u32..(1 << d) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut rest = mask;
        while rest != 0 {
            acc += dirs[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        let v = acc.norm() * x;
        if v > best.0 {
            best = (v, mask);
        }
    }
    Ok(best)
}

pub fn lemma1_vertex_bruteforce(d: u32, x: f64) -> Result<f64> {
    lemma1_vertex_argmax(d, x).map(|(v, _)| v)
}

/// `9a^3 + a - 1`.
pub fn density_cubic(alpha: f64) -> f64 {
    9.0 * alpha.powi(3) + alpha - 1.0
}

/// Real root of `9a^3 + a - 1` from the closed radical form.
pub fn alpha0_cardano() -> f64 {
    let s = 741f64.sqrt();
    ((27.0 + s) / 486.0).cbrt() + ((27.0 - s) / 486.0).cbrt()
}

/// Real root of `9a^3 + a - 1` by bisection on `[0.4, 0.41]`, run until the
/// bracket stops shrinking.
pub fn alpha0_bisection() -> f64 {
    let (mut lo, mut hi) = (0.4f64, 0.41f64);
    debug_assert!(density_cubic(lo) < 0.0 && density_cubic(hi) > 0.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if density_cubic(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if density_cubic(lo).abs() <= density_cubic(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Critical density of the odd-modulus theorem, by both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityConstants {
    /// The bisection root; this is the value used everywhere.
    pub alpha0: f64,
    pub alpha0_cardano: f64,
}

impl DensityConstants {
    pub fn compute() -> Self {
        DensityConstants {
            alpha0: alpha0_bisection(),
            alpha0_cardano: alpha0_cardano(),
        }
    }

    pub fn disagreement(&self) -> f64 {
        (self.alpha0 - self.alpha0_cardano).abs()
    }

    pub fn residual(&self) -> f64 {
        density_cubic(self.alpha0)
    }

    pub fn agree(&self) -> bool {
        self.disagreement() <= ABS_TOL
    }
}

/// Bisection value of the critical density. The radical form is checked
/// against it to `1e-9`.
///
/// # Panics
///
/// If the two routes disagree, which would mean a broken float environment.
pub fn alpha0() -> f64 {
    let c = DensityConstants::compute();
    assert!(
        c.agree(),
        "alpha0 routes disagree: bisection {} vs radical {}",
        c.alpha0,
        c.alpha0_cardano
    );
    c.alpha0
}

/// `N(alpha) = 54 / (9 alpha^3 + alpha - 1)`, defined above the critical density.
#[allow(non_snake_case)]
pub fn cutoff_N(alpha: f64) -> Result<f64> {
    if !(alpha > alpha0()) {
        return Err(Error::BelowCriticalDensity(alpha));
    }
    Ok(54.0 / density_cubic(alpha))
}

/// Lower bound `k^4/n - (n/3)^2 (k - k^2/n)` on every `R1(m)`, valid for odd `n`.
pub fn r1_lower_bound(n: u32, k: u32) -> f64 {
    let (n, k) = (n as f64, k as f64);
    k.powi(4) / n - (n / 3.0).powi(2) * (k - k * k / n)
}

/// `k^3/n - n^2/9 + kn/9 - 6k`.
pub fn cubic_condition(n: u32, k: u32) -> f64 {
    let (n, k) = (n as f64, k as f64);
    k.powi(3) / n - n * n / 9.0 + k * n / 9.0 - 6.0 * k
}

/// `r1_lower_bound(n, k) - 6k(k-1) - 6k`: a lower bound on the distinct
/// representation count `R(m)`, so positivity forces `4^A = Z_n`.
pub fn analytic_chain(n: u32, k: u32) -> f64 {
    let kf = k as f64;
    r1_lower_bound(n, k) - 6.0 * kf * (kf - 1.0) - 6.0 * kf
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn set(n: u64, xs: &[u32]) -> ResidueSet {
        ResidueSet::from_residues(Modulus::new(n).unwrap(), xs.iter().copied()).unwrap()
    }

    #[test]
    fn spectrum_examples() {
        let a = set(7, &[0, 2, 3]);
        assert_abs_diff_eq!(spectrum(&a).at(0).re, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spectrum(&set(4, &[0, 2])).at(1).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spectrum(&set(9, &[0, 3, 6])).at(1).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fft_matches_direct() {
        let a = ResidueSet::from_residues_mod(Modulus::new(97).unwrap(), [0, 1, 5, 33, 60, 96]);
        let (d, f) = (spectrum_direct(&a), spectrum_fft(&a));
        for (x, y) in d.values().iter().zip(f.values()) {
            assert!((x - y).norm() < 1e-9);
        }
        let big = ResidueSet::from_residues_mod(Modulus::new(5000).unwrap(), (0..5000).step_by(7));
        let s = spectrum(&big);
        assert!(s.parseval_error(big.len()) < 1e-9);
        assert_abs_diff_eq!(s.at(0).re, big.len() as f64, epsilon = 1e-6);
    }

    #[test]
    fn max_offdc_examples() {
        let full = ResidueSet::full(Modulus::new(10).unwrap());
        assert!(spectrum_max_offdc(&full).unwrap() < 1e-9);
        assert_abs_diff_eq!(spectrum_max_offdc(&set(3, &[0])).unwrap(), 1.0, epsilon = 1e-12);
        assert!(spectrum_max_offdc(&set(1, &[0])).is_err());
    }

    #[test]
    fn lemma1_examples() {
        assert_abs_diff_eq!(lemma1_max(3, 1.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lemma1_max(3, 2.0).unwrap(), 2.0, epsilon = 1e-12);
        // golden ratio: 1 / (2 sin(pi/10))
        assert_abs_diff_eq!(lemma1_max(5, 1.0).unwrap(), (1.0 + 5f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert!(lemma1_max(4, 1.0).is_err());
        assert!(lemma1_max(1, 1.0).is_err());
        assert!(lemma1_max(5, 0.0).is_err());
        assert!(lemma1_vertex_bruteforce(23, 1.0).is_err());

        // (0,0,1) attains 1; so does (1,1,0), up to rounding
        let (v, mask) = lemma1_vertex_argmax(3, 1.0).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        assert!(mask == 0b100 || mask == 0b011);
        for d in [5, 7] {
            assert_abs_diff_eq!(
                lemma1_vertex_bruteforce(d, 1.0).unwrap(),
                lemma1_max(d, 1.0).unwrap(),
                epsilon = ABS_TOL
            );
        }
    }

    #[test]
    fn alpha0_routes_agree() {
        let c = DensityConstants::compute();
        assert!(c.disagreement() <= ABS_TOL);
        assert!(c.residual().abs() <= ROOT_TOL);
        assert!((c.alpha0 - 0.40447).abs() < 5e-6);
        assert!(c.alpha0 < 0.4045);
    }

    #[test]
    fn cutoff_examples() {
        assert_abs_diff_eq!(cutoff_N(0.45).unwrap(), 54.0 / 0.270125, epsilon = 1e-9);
        assert_abs_diff_eq!(cutoff_N(0.45).unwrap(), 199.9074, epsilon = 1e-4);
        assert_abs_diff_eq!(cutoff_N(0.5).unwrap(), 86.4, epsilon = 1e-9);
        assert_eq!(cutoff_N(0.40), Err(Error::BelowCriticalDensity(0.40)));
        assert!(cutoff_N(alpha0()).is_err());
        let mut prev = f64::INFINITY;
        for i in 1..50 {
            let n = cutoff_N(alpha0() + i as f64 * 1e-3).unwrap();
            assert!(n < prev);
            prev = n;
        }
        assert!(cutoff_N(alpha0() + 1e-9).unwrap() > 1e6);
    }

    #[test]
    fn bound_examples() {
        for n in [5u32, 55, 201] {
            assert_abs_diff_eq!(r1_lower_bound(n, n), (n as f64).powi(3), epsilon = 1e-6);
        }
        assert_eq!(r1_lower_bound(17, 0), 0.0);
        assert!(r1_lower_bound(201, 91) > 0.0);
        assert!(cubic_condition(201, 91) > 0.0);
        assert!(cubic_condition(100, 10) < 0.0);
        for n in [55u32, 100, 1001] {
            let nf = n as f64;
            assert_abs_diff_eq!(cubic_condition(n, n), nf * nf - 6.0 * nf, epsilon = 1e-6);
            assert!(cubic_condition(n, n) > 0.0);
        }
        assert!(analytic_chain(201, 91) > 0.0);
    }
}
