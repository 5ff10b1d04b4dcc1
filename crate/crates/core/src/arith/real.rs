//! High-precision reals backed by `astro-float`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default mantissa precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A real number carrying its own precision.
///
/// Binary operations run at the smaller precision of the two operands.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Real {
        Real { v, prec }
    }

    pub fn from_f64(x: f64, prec: usize) -> Real {
        Real::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Real {
        Real::wrap(BigFloat::from_i64(x, prec), prec)
    }

    pub fn zero(prec: usize) -> Real {
        Real::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Real {
        Real::from_i64(1, prec)
    }

    pub fn from_bigint(x: &BigInt, prec: usize) -> Real {
        if x.is_zero() {
            return Real::zero(prec);
        }
        let (sign, digits) = x.to_u64_digits();
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (64 * words.len()) as i32;
        let raw = BigFloat::from_words(&words, s, e);
        let mut v = raw.clone();
        v.set_precision(prec, RM).ok();
        Real::wrap(v, prec)
    }

    pub fn from_ratio(x: &BigRational, prec: usize) -> Real {
        let n = Real::from_bigint(x.numer(), prec + 64);
        let d = Real::from_bigint(x.denom(), prec + 64);
        let mut v = n.v.div(&d.v, prec, RM);
        v.set_precision(prec, RM).ok();
        Real::wrap(v, prec)
    }

    /// Parses a decimal or fraction string (`"3/7"`, `"0.25"`, `"1e-3"`).
    pub fn parse(s: &str, prec: usize) -> Result<Real> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a = Real::parse(a, prec)?;
            let b = Real::parse(b, prec)?;
            return a.checked_div(&b);
        }
        let v = with_consts(|cc| BigFloat::parse(s, astro_float::Radix::Dec, prec, RM, cc));
        if v.is_nan() {
            return Err(Error::Config(format!("not a number: {s}")));
        }
        Ok(Real::wrap(v, prec))
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Same value re-rounded to a new precision.
    pub fn with_precision(&self, prec: usize) -> Real {
        let mut v = self.v.clone();
        v.set_precision(prec, RM).ok();
        Real::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.v.is_zero() {
            return 0.0;
        }
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let len = m.len();
        let top = m[len - 1] as f64;
        let next = if len > 1 { m[len - 2] as f64 } else { 0.0 };
        let mant = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
        let mag = if e > 1100 {
            f64::INFINITY
        } else if e < -1100 {
            0.0
        } else {
            mant * 2f64.powi(e)
        };
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Nearest integer (ties away from zero).
    pub fn round_to_bigint(&self) -> BigInt {
        let half = Real::from_f64(0.5, self.prec);
        let shifted = if self.is_negative() {
            self - &half
        } else {
            self + &half
        };
        shifted.trunc_to_bigint()
    }

    fn trunc_to_bigint(&self) -> BigInt {
        if self.v.is_zero() {
            return BigInt::zero();
        }
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return BigInt::zero();
        };
        if e <= 0 {
            return BigInt::zero();
        }
        let digits: Vec<u32> = m
            .iter()
            .flat_map(|&w| [(w & 0xffff_ffff) as u32, (w >> 32) as u32])
            .collect();
        let mant = BigInt::from_slice(BigSign::Plus, &digits);
        let total = (m.len() * 64) as i64;
        let shift = total - e as i64;
        let mag = if shift >= 0 {
            mant >> (shift as usize)
        } else {
            mant << ((-shift) as usize)
        };
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    pub fn powi(&self, n: i64) -> Real {
        let p = self.v.powi(n.unsigned_abs() as usize, self.prec, RM);
        if n < 0 {
            Real::wrap(BigFloat::from_i64(1, self.prec).div(&p, self.prec, RM), self.prec)
        } else {
            Real::wrap(p, self.prec)
        }
    }

    /// `self^y` for positive `self`.
    pub fn powf(&self, y: &Real) -> Real {
        let prec = self.prec.min(y.prec);
        let v = with_consts(|cc| self.v.pow(&y.v, prec, RM, cc));
        Real::wrap(v, prec)
    }

    pub fn ln(&self) -> Real {
        let v = with_consts(|cc| self.v.ln(self.prec, RM, cc));
        Real::wrap(v, self.prec)
    }

    pub fn exp(&self) -> Real {
        let v = with_consts(|cc| self.v.exp(self.prec, RM, cc));
        Real::wrap(v, self.prec)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn sin(&self) -> Real {
        let v = with_consts(|cc| self.v.sin(self.prec, RM, cc));
        Real::wrap(v, self.prec)
    }

    pub fn pi(prec: usize) -> Real {
        let v = with_consts(|cc| cc.pi(prec, RM));
        Real::wrap(v, prec)
    }

    pub fn checked_div(&self, d: &Real) -> Result<Real> {
        if d.is_zero() {
            return Err(Error::DivisionByZero("real division".into()));
        }
        Ok(self / d)
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Euler's Gamma function.
    ///
    /// Stirling's series after shifting the argument upwards; reflection for
    /// negative non-integers.
    pub fn gamma(&self) -> Result<Real> {
        let prec = self.prec;
        let wp = prec + 32;
        let x = self.with_precision(wp);
        let is_int = self.v.is_int();
        if (x.is_zero() || x.is_negative()) && is_int {
            return Err(Error::GammaPole(format!("{}", self.to_f64())));
        }
        if x.is_negative() {
            // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
            let one = Real::one(wp);
            let g = (&one - &x).gamma()?;
            let pi = Real::pi(wp);
            let s = (&pi * &x).sin();
            return Ok((&pi / &(&s * &g)).with_precision(prec));
        }
        let threshold = (wp as f64 * 0.35 + 12.0).ceil();
        let mut z = x.clone();
        let mut shift_prod = Real::one(wp);
        while z.to_f64() < threshold {
            shift_prod = &shift_prod * &z;
            z = &z + &Real::one(wp);
        }
        let lg = ln_gamma_stirling(&z, wp);
        Ok((&lg.exp() / &shift_prod).with_precision(prec))
    }

    /// Decimal rendering with `digits` significant digits, deterministic.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        let digits = digits.max(1);
        let a = self.abs();
        let f = a.to_f64();
        let mut e10 = if f > 0.0 && f.is_finite() {
            f.log10().floor() as i64
        } else {
            0
        };
        let ten = Real::from_i64(10, self.prec + 16);
        let a = a.with_precision(self.prec + 16);
        let mut scaled;
        loop {
            let shift = digits as i64 - 1 - e10;
            scaled = (&a * &ten.powi(shift)).round_to_bigint();
            let s = scaled.to_string();
            if s.len() > digits {
                e10 += 1;
                continue;
            }
            if s.len() < digits {
                e10 -= 1;
                continue;
            }
            break;
        }
        let s = scaled.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

fn bernoulli_even() -> &'static Vec<BigRational> {
    static B: OnceLock<Vec<BigRational>> = OnceLock::new();
    B.get_or_init(|| {
        // Akiyama-Tanigawa; returns B_0..B_N with B_1 = +1/2 convention (unused here).
        let n = 260usize;
        let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
        let mut out = Vec::with_capacity(n + 1);
        for mm in 0..=n {
            a.push(BigRational::new(BigInt::one(), BigInt::from(mm as u64 + 1)));
            for j in (1..=mm).rev() {
                let jj = BigRational::from_integer(BigInt::from(j as u64));
                a[j - 1] = &jj * (&a[j - 1] - &a[j]);
            }
            out.push(a[0].clone());
        }
        out
    })
}

/// `ln Gamma(z)` for large positive `z`.
fn ln_gamma_stirling(z: &Real, prec: usize) -> Real {
    let half = Real::from_f64(0.5, prec);
    let two_pi = &Real::pi(prec) * &Real::from_i64(2, prec);
    let mut s = &(&(z - &half) * &z.ln()) - z;
    s = &s + &(&two_pi.ln() * &half);
    let b = bernoulli_even();
    let z2 = z * z;
    let mut zpow = z.clone();
    let eps = Real::from_f64(2f64.powi(-(prec as i32) - 8), prec);
    let mut k = 1usize;
    while 2 * k < b.len() {
        let bk = Real::from_ratio(&b[2 * k], prec);
        let denom = Real::from_i64(((2 * k) * (2 * k - 1)) as i64, prec);
        let term = &bk / &(&denom * &zpow);
        s = &s + &term;
        if term.abs() < eps {
            break;
        }
        zpow = &zpow * &z2;
        k += 1;
    }
    s
}

macro_rules! real_binop {
    ($tr:ident, $f:ident, $op:ident) => {
        impl<'a> $tr<&'a Real> for &'a Real {
            type Output = Real;
            fn $f(self, rhs: &'a Real) -> Real {
                let p = self.prec.min(rhs.prec);
                Real::wrap(self.v.$op(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $f(self, rhs: Real) -> Real {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $f(self, rhs: &'a Real) -> Real {
                (&self).$f(rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) * 0.30103) as usize - 2);
        write!(f, "{}", self.to_sci_string(digits))
    }
}

/// Convenience for tests and drivers.
pub fn real(x: f64) -> Real {
    Real::from_f64(x, DEFAULT_PRECISION)
}

pub(crate) fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| Real::from_ratio(x, 64).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        assert_eq!(real(0.375).to_f64(), 0.375);
        assert_eq!(real(-3.0).to_f64(), -3.0);
        let big = BigInt::from(1u64 << 62) * BigInt::from(12345);
        assert_eq!(Real::from_bigint(&big, 192).round_to_bigint(), big);
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!((Real::from_ratio(&r, 128).to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(Real::from_i64(-7, 128).round_to_bigint(), BigInt::from(-7));
    }

    #[test]
    fn gamma_values() {
        let g = Real::from_f64(5.0, 128).gamma().unwrap();
        assert!((g.to_f64() - 24.0).abs() < 1e-25);
        let h = Real::from_f64(0.5, 192).gamma().unwrap();
        let sqrt_pi = Real::pi(192).sqrt();
        assert!((&h - &sqrt_pi).abs().to_f64() < 1e-50);
        let neg = Real::from_f64(-0.5, 128).gamma().unwrap();
        assert!((neg.to_f64() + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!(matches!(Real::from_i64(-2, 128).gamma(), Err(Error::GammaPole(_))));
    }

    #[test]
    fn scientific_strings() {
        assert_eq!(real(0.25).to_sci_string(3), "2.50e-1");
        assert_eq!(real(-1234.5).to_sci_string(4), "-1.235e3");
        assert_eq!(Real::parse("3/8", 128).unwrap().to_f64(), 0.375);
    }

    #[test]
    fn mixed_precision_takes_minimum() {
        let a = Real::from_f64(1.0, 256);
        let b = Real::from_f64(2.0, 128);
        assert_eq!((&a + &b).precision(), 128);
    }
}
