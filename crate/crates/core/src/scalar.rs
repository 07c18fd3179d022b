//! Exact scalars in the ring ℤ[ω, 1/√2], ω = e^{iπ/4}.
//!
//! Every weight that appears in a decomposition and every global factor a
//! rewrite produces lives in this ring, so amplitudes are computed exactly
//! and summation order never matters.
//!
//! A value is stored as `2^(p/2) * (a + b·ω + c·ω² + d·ω³)`. The only
//! reduction relation on the coefficients is ω⁴ = −1. Canonical form strips
//! every factor of √2 out of the coefficients into `p`, which makes the
//! representation unique: two scalars are equal exactly when their fields
//! are equal.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    coeffs: [i128; 4],
    half_power: i32,
}

/// Returned when a textual scalar cannot be parsed.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed scalar `{0}`: expected `2^(p/2) * (a + b*w + c*w^2 + d*w^3)`")]
pub struct ParseScalarError(pub String);

#[inline]
fn overflow() -> ! {
    panic!("exact scalar coefficient overflow (i128)")
}

#[inline]
fn cmul(x: i128, y: i128) -> i128 {
    x.checked_mul(y).unwrap_or_else(|| overflow())
}

#[inline]
fn cadd(x: i128, y: i128) -> i128 {
    x.checked_add(y).unwrap_or_else(|| overflow())
}

#[inline]
fn csub(x: i128, y: i128) -> i128 {
    x.checked_sub(y).unwrap_or_else(|| overflow())
}

/// Product in ℤ[ω]/(ω⁴ + 1).
fn poly_mul(x: &[i128; 4], y: &[i128; 4]) -> [i128; 4] {
    let mut out = [0i128; 4];
    for i in 0..4 {
        if x[i] == 0 {
            continue;
        }
        for j in 0..4 {
            if y[j] == 0 {
                continue;
            }
            let t = cmul(x[i], y[j]);
            let k = i + j;
            if k < 4 {
                out[k] = cadd(out[k], t);
            } else {
                out[k - 4] = csub(out[k - 4], t);
            }
        }
    }
    out
}

/// Multiplies by √2 = ω − ω³.
fn times_sqrt2(x: &[i128; 4]) -> [i128; 4] {
    // (a + bω + cω² + dω³)(ω − ω³)
    //   = (b − d) + (a + c)ω + (b + d)ω² + (c − a)ω³
    let [a, b, c, d] = *x;
    [csub(b, d), cadd(a, c), cadd(b, d), csub(c, a)]
}

/// Multiplies by `2^(k/2)` for `k >= 0`.
fn times_sqrt2_pow(x: &[i128; 4], k: u32) -> [i128; 4] {
    let mut out = *x;
    if k % 2 == 1 {
        out = times_sqrt2(&out);
    }
    let shift = k / 2;
    if shift > 0 {
        for c in out.iter_mut() {
            if *c != 0 {
                if shift >= 126 || c.unsigned_abs().leading_zeros() <= shift + 1 {
                    overflow();
                }
                *c <<= shift;
            }
        }
    }
    out
}

impl ExactScalar {
    pub const ZERO: ExactScalar = ExactScalar { coeffs: [0; 4], half_power: 0 };
    pub const ONE: ExactScalar = ExactScalar { coeffs: [1, 0, 0, 0], half_power: 0 };

    /// Builds `2^(half_power/2) * (a + bω + cω² + dω³)` and canonicalises it.
    pub fn new(coeffs: [i128; 4], half_power: i32) -> ExactScalar {
        let mut s = ExactScalar { coeffs, half_power };
        s.canonicalize();
        s
    }

    pub fn zero() -> ExactScalar {
        Self::ZERO
    }

    pub fn one() -> ExactScalar {
        Self::ONE
    }

    pub fn from_int(n: i128) -> ExactScalar {
        Self::new([n, 0, 0, 0], 0)
    }

    /// ω^k for any integer k.
    pub fn omega_pow(k: i64) -> ExactScalar {
        let k = k.rem_euclid(8) as usize;
        let mut coeffs = [0i128; 4];
        if k < 4 {
            coeffs[k] = 1;
        } else {
            coeffs[k - 4] = -1;
        }
        ExactScalar { coeffs, half_power: 0 }
    }

    /// `2^(p/2)`.
    pub fn sqrt2_pow(p: i32) -> ExactScalar {
        ExactScalar { coeffs: [1, 0, 0, 0], half_power: p }
    }

    pub fn coeffs(&self) -> [i128; 4] {
        self.coeffs
    }

    pub fn half_power(&self) -> i32 {
        self.half_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; 4]
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    fn canonicalize(&mut self) {
        if self.is_zero() {
            self.half_power = 0;
            return;
        }
        loop {
            if self.coeffs.iter().all(|c| c % 2 == 0) {
                for c in self.coeffs.iter_mut() {
                    *c /= 2;
                }
                self.half_power += 2;
                continue;
            }
            // x/√2 = x·√2/2, which stays integral exactly when x·√2 has even coefficients
            let r = times_sqrt2(&self.coeffs);
            if r.iter().all(|c| c % 2 == 0) {
                self.coeffs = [r[0] / 2, r[1] / 2, r[2] / 2, r[3] / 2];
                self.half_power += 1;
                continue;
            }
            break;
        }
    }

    pub fn mul_sqrt2_pow(&mut self, p: i32) {
        if !self.is_zero() {
            self.half_power += p;
        }
    }

    pub fn mul_omega_pow(&mut self, k: i64) {
        *self *= ExactScalar::omega_pow(k);
    }

    /// Complex conjugate (ω ↦ ω⁷).
    pub fn conj(&self) -> ExactScalar {
        let [a, b, c, d] = self.coeffs;
        // ω^k ↦ ω^{-k}: ω ↦ −ω³, ω² ↦ −ω², ω³ ↦ −ω
        ExactScalar { coeffs: [a, -d, -c, -b], half_power: self.half_power }
    }

    pub fn to_complex(&self) -> Complex64 {
        const R: f64 = std::f64::consts::FRAC_1_SQRT_2;
        let [a, b, c, d] = self.coeffs.map(|x| x as f64);
        // ω = (R, R), ω² = (0, 1), ω³ = (−R, R)
        let re = a + R * (b - d);
        let im = c + R * (b + d);
        let scale = 2f64.powf(self.half_power as f64 / 2.0);
        Complex64::new(re * scale, im * scale)
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::ONE
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        ExactScalar::new(poly_mul(&self.coeffs, &rhs.coeffs), self.half_power + rhs.half_power)
    }
}

impl MulAssign for ExactScalar {
    fn mul_assign(&mut self, rhs: ExactScalar) {
        *self = *self * rhs;
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (lo, hi) = if self.half_power <= rhs.half_power { (self, rhs) } else { (rhs, self) };
        let rebased = times_sqrt2_pow(&hi.coeffs, (hi.half_power - lo.half_power) as u32);
        let mut coeffs = [0i128; 4];
        for i in 0..4 {
            coeffs[i] = cadd(lo.coeffs[i], rebased[i]);
        }
        ExactScalar::new(coeffs, lo.half_power)
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, rhs: ExactScalar) {
        *self = *self + rhs;
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { coeffs: self.coeffs.map(|c| csub(0, c)), half_power: self.half_power }
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        self + (-rhs)
    }
}

impl Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> ExactScalar {
        iter.fold(Self::ZERO, |acc, x| acc + x)
    }
}

impl Product for ExactScalar {
    fn product<I: Iterator<Item = ExactScalar>>(iter: I) -> ExactScalar {
        iter.fold(Self::ONE, |acc, x| acc * x)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coeffs;
        write!(f, "2^({}/2) * ({} + {}*w + {}*w^2 + {}*w^3)", self.half_power, a, b, c, d)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_complex();
        write!(f, "{} [≈ {:.6}{:+.6}i]", self, z.re, z.im)
    }
}

impl FromStr for ExactScalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact.strip_prefix("2^(").ok_or_else(err)?;
        let (p, rest) = rest.split_once("/2)*(").ok_or_else(err)?;
        let body = rest.strip_suffix(')').ok_or_else(err)?;
        let half_power: i32 = p.parse().map_err(|_| err())?;

        // terms are joined by '+'; a coefficient may carry its own leading '-'
        let mut coeffs = [0i128; 4];
        let mut seen = [false; 4];
        for term in body.split('+') {
            let (num, slot) = if let Some(n) = term.strip_suffix("*w^3") {
                (n, 3)
            } else if let Some(n) = term.strip_suffix("*w^2") {
                (n, 2)
            } else if let Some(n) = term.strip_suffix("*w") {
                (n, 1)
            } else {
                (term, 0)
            };
            if seen[slot] {
                return Err(err());
            }
            seen[slot] = true;
            coeffs[slot] = num.parse().map_err(|_| err())?;
        }
        if !seen.iter().all(|&x| x) {
            return Err(err());
        }
        Ok(ExactScalar::new(coeffs, half_power))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn phases() {
        assert_eq!(ExactScalar::omega_pow(0), ExactScalar::one());
        assert_eq!(ExactScalar::omega_pow(2).coeffs(), [0, 0, 1, 0]);
        assert_eq!(ExactScalar::omega_pow(4), -ExactScalar::one());
        assert_eq!(ExactScalar::omega_pow(-1), ExactScalar::omega_pow(7));
    }

    #[test]
    fn products() {
        assert_eq!(ExactScalar::omega_pow(1) * ExactScalar::omega_pow(7), ExactScalar::one());
        assert_eq!(ExactScalar::sqrt2_pow(1) * ExactScalar::sqrt2_pow(1), ExactScalar::from_int(2));

        let one_w = ExactScalar::new([1, 1, 0, 0], 0);
        let one_w3 = ExactScalar::new([1, 0, 0, 1], 0);
        let got = one_w * one_w3;
        assert_eq!(got, ExactScalar::new([0, 1, 0, 1], 0));
        let expect = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4))
            * (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, 3.0 * std::f64::consts::FRAC_PI_4));
        assert!(close(got.to_complex(), expect, 1e-14));
        assert!(close(got.to_complex(), Complex64::new(0.0, 2f64.sqrt()), 1e-14));
    }

    #[allow(clippy::approx_constant)]
    #[test]
    fn sums() {
        assert!((ExactScalar::one() + -ExactScalar::one()).is_zero());
        let a = ExactScalar::new([1, 1, 0, 0], 0);
        let b = ExactScalar::new([1, -1, 0, 0], 0);
        assert_eq!(a + b, ExactScalar::from_int(2));
        let z = (ExactScalar::one() + ExactScalar::omega_pow(1)).to_complex();
        assert!((z.re - 1.707_106_78).abs() < 1e-8);
        assert!((z.im - 0.707_106_78).abs() < 1e-8);
    }

    // literal decimals on purpose, independent of std::f64::consts
    #[allow(clippy::approx_constant)]
    #[test]
    fn float_view() {
        assert_eq!(ExactScalar::one().to_complex(), Complex64::new(1.0, 0.0));
        let w = ExactScalar::omega_pow(1).to_complex();
        assert!((w.re - 0.707_106_78).abs() < 1e-8 && (w.im - 0.707_106_78).abs() < 1e-8);
        let r2 = ExactScalar::new([0, 1, 0, -1], 0);
        assert!((r2.to_complex().re - 1.414_213_56).abs() < 1e-8);
        assert!(r2.to_complex().im.abs() < 1e-15);
    }

    #[test]
    fn sqrt2_identity() {
        let r2 = ExactScalar::new([0, 1, 0, -1], 0);
        assert_eq!(r2 * r2, ExactScalar::from_int(2));
        // canonical form pulls the √2 into the exponent
        assert_eq!(r2, ExactScalar::sqrt2_pow(1));
    }

    #[test]
    fn zero_is_unique() {
        let z = ExactScalar::new([0, 0, 0, 0], 17);
        assert_eq!(z, ExactScalar::zero());
        assert_eq!(z.half_power(), 0);
        let mut s = ExactScalar::zero();
        s.mul_sqrt2_pow(5);
        assert_eq!(s, ExactScalar::zero());
    }

    #[test]
    fn mixed_parity_addition() {
        // 1 + √2
        let s = ExactScalar::one() + ExactScalar::sqrt2_pow(1);
        assert!(close(s.to_complex(), Complex64::new(1.0 + 2f64.sqrt(), 0.0), 1e-14));
        // 2^(-3/2) + 2^(4/2)
        let s = ExactScalar::sqrt2_pow(-3) + ExactScalar::sqrt2_pow(4);
        assert!(close(s.to_complex(), Complex64::new(2f64.powf(-1.5) + 4.0, 0.0), 1e-14));
    }

    #[test]
    fn text_form() {
        let s = ExactScalar::new([3, -1, 0, 2], -5);
        let text = s.to_string();
        assert_eq!(text, "2^(-5/2) * (3 + -1*w + 0*w^2 + 2*w^3)");
        assert_eq!(text.parse::<ExactScalar>().unwrap(), s);
        assert!("2^(1/2) * (1 + 2*w)".parse::<ExactScalar>().is_err());
        assert!("nonsense".parse::<ExactScalar>().is_err());
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_is_detected() {
        let big = ExactScalar::new([i128::MAX / 3, 1, 0, 0], 0);
        let _ = big * big;
    }

    fn arb_scalar(max_coeff: i128, max_pow: i32) -> impl Strategy<Value = ExactScalar> {
        (
            proptest::array::uniform4(-max_coeff..=max_coeff),
            -max_pow..=max_pow,
        )
            .prop_map(|(c, p)| ExactScalar::new(c, p))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn ring_axioms(x in arb_scalar(1000, 40), y in arb_scalar(1000, 40), z in arb_scalar(1000, 40)) {
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!((x + y) + z, x + (y + z));
            prop_assert_eq!(x + y, y + x);
        }

        #[test]
        fn float_view_is_homomorphic(x in arb_scalar(1000, 40), y in arb_scalar(1000, 40)) {
            let (fx, fy) = (x.to_complex(), y.to_complex());
            prop_assert!(close((x * y).to_complex(), fx * fy, 1e-12));
            let sum_tol = 1e-12 * (fx.norm() + fy.norm());
            prop_assert!(((x + y).to_complex() - (fx + fy)).norm() <= sum_tol + 1e-300);
        }

        #[test]
        fn canonical_form_is_unique(x in arb_scalar(1000, 20), k in 0u32..6) {
            // the same value written with extra √2 factors in the coefficients
            let mut coeffs = x.coeffs();
            for _ in 0..k {
                coeffs = times_sqrt2(&coeffs);
            }
            let y = ExactScalar::new(coeffs, x.half_power() - k as i32);
            prop_assert_eq!(x, y);
        }

        #[test]
        fn text_round_trip(x in arb_scalar(1_000_000, 60)) {
            prop_assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x);
        }
    }
}
