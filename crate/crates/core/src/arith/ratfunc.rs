//! Reduced rational functions in `q` over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::ZPoly;
use crate::error::{Error, Result};

/// `coef * num(q) / den(q)` with `num`, `den` primitive integer polynomials,
/// positive leading coefficients and no common factor.
///
/// This normal form is unique, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    coef: BigRational,
    num: ZPoly,
    den: ZPoly,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc::from_rational(BigRational::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> RatFunc {
        RatFunc { coef: c, num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_i64(c: i64) -> RatFunc {
        RatFunc::from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    /// The indeterminate `q`.
    pub fn q() -> RatFunc {
        RatFunc::from_poly(&ZPoly::from_i64s(&[0, 1]))
    }

    pub fn from_poly(p: &ZPoly) -> RatFunc {
        RatFunc::from_parts(BigRational::one(), p.clone(), ZPoly::one())
    }

    /// Builds and normalizes `coef * num / den`.
    pub fn from_parts(coef: BigRational, num: ZPoly, den: ZPoly) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if coef.is_zero() || num.is_zero() {
            return RatFunc::zero();
        }
        let (cn, n) = num.primitive();
        let (cd, d) = den.primitive();
        let g = n.gcd(&d);
        let (n, d) = if g.degree() == Some(0) {
            (n, d)
        } else {
            (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
        };
        let coef = coef * BigRational::new(cn, cd);
        RatFunc { coef, num: n, den: d }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    /// Constant value if the function does not depend on `q`.
    pub fn as_constant(&self) -> Option<BigRational> {
        (self.num.degree() == Some(0) && self.den.degree() == Some(0)).then(|| self.coef.clone())
    }

    /// Numerator with rational coefficients, paired with the monic denominator.
    pub fn numerator(&self) -> Vec<BigRational> {
        let lc = BigRational::from_integer(self.den.leading());
        self.num
            .coeffs()
            .iter()
            .map(|a| &self.coef * &lc * BigRational::from_integer(a.clone()))
            .collect()
    }

    /// Monic denominator coefficients, lowest degree first.
    pub fn denominator(&self) -> Vec<BigRational> {
        let lc = self.den.leading();
        self.den.coeffs().iter().map(|a| BigRational::new(a.clone(), lc.clone())).collect()
    }

    pub fn eval(&self, q: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(Error::DivisionByZero(format!("denominator of {self} vanishes at q = {q}")));
        }
        Ok(&self.coef * self.num.eval(q) / d)
    }

    /// Exact value at `q = 0`, failing if the reduced denominator vanishes there.
    pub fn at_zero(&self) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::PoleAtZero(format!("{self}")));
        }
        Ok(&self.coef * BigRational::new(self.num.coeff(0), d0))
    }

    fn split(c: &BigRational) -> (BigInt, BigInt) {
        (c.numer().clone(), c.denom().clone())
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a1, b1) = RatFunc::split(&self.coef);
        let (a2, b2) = RatFunc::split(&o.coef);
        let l = b1.lcm(&b2);
        let s1 = a1 * (&l / &b1);
        let s2 = a2 * (&l / &b2);
        let inv_l = BigRational::new(BigInt::one(), l);
        if self.den == o.den {
            let n = &self.num.scale(&s1) + &o.num.scale(&s2);
            return RatFunc::from_parts(inv_l, n, self.den.clone());
        }
        let n = &(&self.num * &o.den).scale(&s1) + &(&o.num * &self.den).scale(&s2);
        RatFunc::from_parts(inv_l, n, &self.den * &o.den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { coef: -self.coef.clone(), num: self.num.clone(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let coef = &self.coef * &o.coef;
        let (cn, n) = (&n1 * &n2).primitive();
        let (cd, d) = (&d1 * &d2).primitive();
        RatFunc { coef: coef * BigRational::new(cn, cd), num: n, den: d }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of the zero rational function".into()));
        }
        Ok(RatFunc { coef: self.coef.recip(), num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { coef: &self.coef * c, num: self.num.clone(), den: self.den.clone() }
    }

    /// Total degree of numerator plus denominator; a pivoting heuristic.
    pub fn complexity(&self) -> usize {
        self.num.degree().unwrap_or(0) + self.den.degree().unwrap_or(0)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num: Vec<String> = fmt_coeffs(&self.numerator());
        let den: Vec<String> = fmt_coeffs(&self.denominator());
        let n = if num.len() == 1 { num[0].clone() } else { format!("({})", num.join(" + ")) };
        if den.len() == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/({})", den.join(" + "))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn fmt_coeffs(c: &[BigRational]) -> Vec<String> {
    c.iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(d, a)| {
            let a = if a.is_negative() || !a.is_integer() { format!("({a})") } else { a.to_string() };
            match d {
                0 => a,
                1 => format!("{a}*q"),
                _ => format!("{a}*q^{d}"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn normal_form_is_canonical() {
        let q = RatFunc::q();
        let one = RatFunc::one();
        // (q^2 - 1)/(q - 1) = q + 1
        let a = q.mul(&q).sub(&one).div(&q.sub(&one)).unwrap();
        assert_eq!(a, q.add(&one));
        assert_eq!(a.denominator(), vec![r(1, 1)]);
        let h = RatFunc::from_rational(r(1, 2));
        let b = h.mul(&q).add(&h.mul(&q));
        assert_eq!(b, q);
    }

    #[test]
    fn evaluation_at_zero() {
        let q = RatFunc::q();
        let f = q.add(&RatFunc::from_i64(3)).div(&q.sub(&RatFunc::from_i64(2))).unwrap();
        assert_eq!(f.at_zero().unwrap(), r(-3, 2));
        let g = RatFunc::one().div(&q).unwrap();
        assert!(matches!(g.at_zero(), Err(Error::PoleAtZero(_))));
        assert_eq!(f.eval(&r(1, 1)).unwrap(), r(-4, 1));
    }

    #[test]
    fn monic_denominator() {
        let q = RatFunc::q();
        let f = RatFunc::one().div(&q.scale(&r(3, 1)).add(&RatFunc::from_i64(6))).unwrap();
        assert_eq!(f.denominator(), vec![r(2, 1), r(1, 1)]);
        assert_eq!(f.numerator(), vec![r(1, 3)]);
    }
}
