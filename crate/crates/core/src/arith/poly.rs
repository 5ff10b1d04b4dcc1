//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in `q` with integer coefficients, lowest degree first.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> ZPoly {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> ZPoly {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(a: BigInt) -> ZPoly {
        ZPoly::from_coeffs(vec![a])
    }

    /// `a * q^d`.
    pub fn monomial(a: BigInt, d: usize) -> ZPoly {
        if a.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::zero(); d + 1];
        c[d] = a;
        ZPoly { c }
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> ZPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64s(c: &[i64]) -> ZPoly {
        ZPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, d: usize) -> BigInt {
        self.c.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Order of vanishing at `q = 0`; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn leading(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides every coefficient by `d`, which must divide them exactly.
    pub fn div_scalar(&self, d: &BigInt) -> ZPoly {
        ZPoly::from_coeffs(self.c.iter().map(|x| x / d).collect())
    }

    pub fn scale(&self, a: &BigInt) -> ZPoly {
        ZPoly::from_coeffs(self.c.iter().map(|x| x * a).collect())
    }

    /// Primitive part with positive leading coefficient, and the signed content removed.
    pub fn primitive(&self) -> (BigInt, ZPoly) {
        if self.is_zero() {
            return (BigInt::one(), ZPoly::zero());
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        (g.clone(), self.div_scalar(&g))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + BigRational::from_integer(a.clone());
        }
        acc
    }

    /// Exact quotient `self / d`; `None` if `d` does not divide `self` in `Z[q]`.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        let dd = d.degree().unwrap();
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let lc = d.leading();
        let mut r = self.c.clone();
        let mut quo = vec![BigInt::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qq, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[i + j] -= &qq * dj;
                }
            }
            quo[i] = qq;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(ZPoly::from_coeffs(quo))
    }

    /// Pseudo-remainder of `self` by `d`.
    pub fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let dd = d.degree().expect("pseudo-division by zero");
        let lc = d.leading();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let a = r.leading();
            let shift = rd - dd;
            let scaled = r.scale(&lc);
            let sub = ZPoly::monomial(a, shift) * d.clone();
            r = scaled - sub;
        }
        r
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        let (_, mut a) = self.primitive();
        let (_, mut b) = other.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return ZPoly::one();
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive().1;
        }
        a.primitive().1
    }

    /// Drops the factor `q^v` where `v` is the valuation.
    pub fn shift_down(&self, v: usize) -> ZPoly {
        ZPoly::from_coeffs(self.c[v.min(self.c.len())..].to_vec())
    }
}

impl Add for ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: ZPoly) -> ZPoly {
        &self + &rhs
    }
}

impl<'a> Add<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &'a ZPoly) -> ZPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = self.c.get(i).cloned().unwrap_or_default();
            if let Some(y) = rhs.c.get(i) {
                x += y;
            }
            c.push(x);
        }
        ZPoly::from_coeffs(c)
    }
}

impl Sub for ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: ZPoly) -> ZPoly {
        &self - &rhs
    }
}

impl<'a> Sub<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &'a ZPoly) -> ZPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = self.c.get(i).cloned().unwrap_or_default();
            if let Some(y) = rhs.c.get(i) {
                x -= y;
            }
            c.push(x);
        }
        ZPoly::from_coeffs(c)
    }
}

impl Mul for ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: ZPoly) -> ZPoly {
        &self * &rhs
    }
}

impl<'a> Mul<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &'a ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        ZPoly::from_coeffs(c)
    }
}

impl Neg for ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly::from_coeffs(self.c.into_iter().map(|x| -x).collect())
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (d, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{d}")?,
                (_, false) => write!(f, "{mag}*q^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division_and_gcd() {
        let a = ZPoly::from_i64s(&[1, 1]); // 1 + q
        let b = ZPoly::from_i64s(&[-2, 0, 3]); // 3q^2 - 2
        let c = ZPoly::from_i64s(&[5, -1]);
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&b), Some(a.clone()));
        assert_eq!(ZPoly::from_i64s(&[1, 0, 1]).div_exact(&a), None);
        let g = (&ab * &c).gcd(&(&a * &c).scale(&BigInt::from(6)));
        assert_eq!(g, (&a * &c).primitive().1);
        assert_eq!(a.gcd(&b), ZPoly::one());
    }

    #[test]
    fn valuation_and_eval() {
        let p = ZPoly::from_i64s(&[0, 0, 2, 1]);
        assert_eq!(p.valuation(), Some(2));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(p.eval(&half), BigRational::new(BigInt::from(5), BigInt::from(8)));
        assert_eq!(format!("{p}"), "2*q^2 + q^3");
    }
}
