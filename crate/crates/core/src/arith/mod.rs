//! Scalar domains and the q-series kernels shared by every other module.

pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod real;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use poly::ZPoly;
pub use ratfunc::RatFunc;
pub use real::{Real, DEFAULT_PRECISION};

use crate::error::{Error, Result};

/// Exact rational shorthand.
pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn int(a: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(a))
}

/// Arithmetic every scalar domain supports.
///
/// Constants are produced "like" an existing value so that floats inherit
/// their precision.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn ratio_like(&self, x: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    fn fdiv(&self, o: &Self) -> Result<Self>;
    /// Larger is a better elimination pivot.
    fn pivot_score(&self) -> f64;

    fn fpow(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.one_like().fdiv(self)? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.fmul(&base);
            }
            base = base.fmul(&base);
            e >>= 1;
        }
        Ok(acc)
    }
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn int_like(&self, n: i64) -> Self {
        int(n)
    }
    fn ratio_like(&self, x: &BigRational) -> Self {
        x.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn fdiv(&self, o: &Self) -> Result<Self> {
        if Zero::is_zero(o) {
            return Err(Error::DivisionByZero("rational division".into()));
        }
        Ok(self / o)
    }
    fn pivot_score(&self) -> f64 {
        // Prefer small heights to limit coefficient growth.
        if Zero::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        -((self.numer().bits() + self.denom().bits()) as f64)
    }
}

impl Field for Real {
    fn zero_like(&self) -> Self {
        Real::zero(self.precision())
    }
    fn one_like(&self) -> Self {
        Real::one(self.precision())
    }
    fn int_like(&self, n: i64) -> Self {
        Real::from_i64(n, self.precision())
    }
    fn ratio_like(&self, x: &BigRational) -> Self {
        Real::from_ratio(x, self.precision())
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn fdiv(&self, o: &Self) -> Result<Self> {
        self.checked_div(o)
    }
    fn pivot_score(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        let f = a.to_f64();
        if f > 0.0 {
            f.ln()
        } else {
            // Below f64 range: compare via log of the rescaled value.
            a.ln().to_f64()
        }
    }
}

impl Field for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero()
    }
    fn one_like(&self) -> Self {
        RatFunc::one()
    }
    fn int_like(&self, n: i64) -> Self {
        RatFunc::from_i64(n)
    }
    fn ratio_like(&self, x: &BigRational) -> Self {
        RatFunc::from_rational(x.clone())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn fsub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn fmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn fneg(&self) -> Self {
        self.neg()
    }
    fn fdiv(&self, o: &Self) -> Result<Self> {
        self.div(o)
    }
    fn pivot_score(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        -(self.complexity() as f64)
    }
}

/// A value in one of the three scalar domains.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Func(RatFunc),
    Real(Real),
}

impl Scalar {
    pub fn exact(a: i64, b: i64) -> Scalar {
        Scalar::Exact(rat(a, b))
    }

    pub fn float(x: f64, prec: usize) -> Scalar {
        Scalar::Real(Real::from_f64(x, prec))
    }

    /// Numeric value as a float, if the scalar has one.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Exact(r) => Some(real::ratio_to_f64(r)),
            Scalar::Func(f) => f.as_constant().map(|c| real::ratio_to_f64(&c)),
            Scalar::Real(x) => Some(x.to_f64()),
        }
    }

    /// Lossless text form: `num/den` for exact values, scientific otherwise.
    pub fn render(&self, digits: usize) -> String {
        match self {
            Scalar::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            Scalar::Func(f) => f.to_string(),
            Scalar::Real(x) => x.to_sci_string(digits),
        }
    }

    fn binop(
        &self,
        o: &Scalar,
        fe: impl Fn(&BigRational, &BigRational) -> Result<BigRational>,
        ff: impl Fn(&RatFunc, &RatFunc) -> Result<RatFunc>,
        fr: impl Fn(&Real, &Real) -> Result<Real>,
    ) -> Result<Scalar> {
        use Scalar::*;
        Ok(match (self, o) {
            (Exact(a), Exact(b)) => Exact(fe(a, b)?),
            (Func(a), Func(b)) => Func(ff(a, b)?),
            (Real(a), Real(b)) => Real(fr(a, b)?),
            (Exact(a), Func(b)) => Func(ff(&RatFunc::from_rational(a.clone()), b)?),
            (Func(a), Exact(b)) => Func(ff(a, &RatFunc::from_rational(b.clone()))?),
            (Exact(a), Real(b)) => Real(fr(&real::Real::from_ratio(a, b.precision()), b)?),
            (Real(a), Exact(b)) => Real(fr(a, &real::Real::from_ratio(b, a.precision()))?),
            (Func(a), Real(b)) | (Real(b), Func(a)) => match a.as_constant() {
                Some(c) => {
                    let c = real::Real::from_ratio(&c, b.precision());
                    if matches!(self, Func(_)) {
                        Real(fr(&c, b)?)
                    } else {
                        Real(fr(b, &c)?)
                    }
                }
                None => {
                    return Err(Error::Config(
                        "cannot combine a rational function of q with a float".into(),
                    ))
                }
            },
        })
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        self.binop(o, |a, b| Ok(a + b), |a, b| Ok(a.add(b)), |a, b| Ok(a + b))
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.binop(o, |a, b| Ok(a - b), |a, b| Ok(a.sub(b)), |a, b| Ok(a - b))
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        self.binop(o, |a, b| Ok(a * b), |a, b| Ok(a.mul(b)), |a, b| Ok(a * b))
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar> {
        self.binop(o, |a, b| a.fdiv(b), |a, b| a.div(b), |a, b| a.checked_div(b))
    }
}

impl Field for Scalar {
    fn zero_like(&self) -> Self {
        match self {
            Scalar::Exact(_) => Scalar::Exact(BigRational::zero()),
            Scalar::Func(_) => Scalar::Func(RatFunc::zero()),
            Scalar::Real(x) => Scalar::Real(x.zero_like()),
        }
    }
    fn one_like(&self) -> Self {
        self.int_like(1)
    }
    fn int_like(&self, n: i64) -> Self {
        match self {
            Scalar::Exact(_) => Scalar::Exact(int(n)),
            Scalar::Func(_) => Scalar::Func(RatFunc::from_i64(n)),
            Scalar::Real(x) => Scalar::Real(x.int_like(n)),
        }
    }
    fn ratio_like(&self, r: &BigRational) -> Self {
        match self {
            Scalar::Exact(_) => Scalar::Exact(r.clone()),
            Scalar::Func(_) => Scalar::Func(RatFunc::from_rational(r.clone())),
            Scalar::Real(x) => Scalar::Real(x.ratio_like(r)),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(a) => Zero::is_zero(a),
            Scalar::Func(a) => a.is_zero(),
            Scalar::Real(a) => a.is_zero(),
        }
    }
    fn fadd(&self, o: &Self) -> Self {
        self.try_add(o).expect("incompatible scalar domains")
    }
    fn fsub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("incompatible scalar domains")
    }
    fn fmul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("incompatible scalar domains")
    }
    fn fneg(&self) -> Self {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Func(a) => Scalar::Func(a.neg()),
            Scalar::Real(a) => Scalar::Real(-a),
        }
    }
    fn fdiv(&self, o: &Self) -> Result<Self> {
        self.try_div(o)
    }
    fn pivot_score(&self) -> f64 {
        match self {
            Scalar::Exact(a) => a.pivot_score(),
            Scalar::Func(a) => a.pivot_score(),
            Scalar::Real(a) => a.pivot_score(),
        }
    }
}

/// `(x; q)_n = prod_{i<n} (1 - q^i x)`.
pub fn qpoch_finite<F: Field>(x: &F, q: &F, n: usize) -> F {
    let one = x.one_like();
    let mut acc = one.clone();
    let mut term = x.clone();
    for _ in 0..n {
        acc = acc.fmul(&one.fsub(&term));
        term = term.fmul(q);
    }
    acc
}

/// `(x; q)_inf`, truncated once `|q^i x| / (1 - |q|) < tol`.
pub fn qpoch_infinite(x: &Real, q: &Real, tol: f64) -> Result<Real> {
    let prec = x.precision().min(q.precision());
    let one = Real::one(prec);
    let aq = q.abs();
    if aq >= one {
        return Err(Error::DivergentParameter(format!("|q| = {} >= 1", aq.to_f64())));
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::InvalidRange(format!("tolerance {tol} must be positive")));
    }
    let gap = (&one - &aq).to_f64();
    let mut acc = one.clone();
    let mut term = x.clone();
    loop {
        let t = term.abs().to_f64();
        if t / gap < tol {
            // The remaining tail multiplies by 1 + O(tol); fold in this factor too.
            acc = &acc * &(&one - &term);
            break;
        }
        acc = &acc * &(&one - &term);
        term = &term * q;
    }
    Ok(acc)
}

/// `[i]_q! = prod_{j=1}^{i} (1 - q^j)`.
pub fn bracket_factorial<F: Field>(i: usize, q: &F) -> F {
    let one = q.one_like();
    let mut acc = one.clone();
    let mut qp = q.clone();
    for _ in 0..i {
        acc = acc.fmul(&one.fsub(&qp));
        qp = qp.fmul(q);
    }
    acc
}

/// Bracket binomial `[i over i']_q = [i]! / ([i']! [i - i']!)`.
pub fn gauss_factorials<F: Field>(i: usize, ip: usize, q: &F) -> Result<F> {
    if ip > i {
        return Err(Error::InvalidRange(format!("[{i} over {ip}] needs {ip} <= {i}")));
    }
    let one = q.one_like();
    let k = ip.min(i - ip);
    let mut num = one.clone();
    let mut den = one.clone();
    for j in 1..=k {
        num = num.fmul(&one.fsub(&q.fpow((i - k + j) as i64)?));
        den = den.fmul(&one.fsub(&q.fpow(j as i64)?));
    }
    if den.is_zero() {
        return Err(Error::DivisionByZero(format!("bracket [{i} over {ip}] at a root of unity")));
    }
    num.fdiv(&den)
}

/// Term coefficients `c_j` of the terminating `2F1[-lambda, a2; a3; u] = sum c_j u^j`.
pub fn hyper_2f1_coefficients<F: Field>(lambda: usize, a2: &F, a3: &F) -> Result<Vec<F>> {
    let one = a2.one_like();
    let mut out = vec![one.clone()];
    let mut c = one;
    for j in 0..lambda {
        let jj = a2.int_like(j as i64);
        let den_a = a3.fadd(&jj);
        if den_a.is_zero() {
            return Err(Error::PoleInDenominator(j + 1));
        }
        let num = a2.int_like(j as i64 - lambda as i64).fmul(&a2.fadd(&jj));
        let den = den_a.fmul(&a2.int_like(j as i64 + 1));
        c = c.fmul(&num).fdiv(&den)?;
        out.push(c.clone());
    }
    Ok(out)
}

pub fn hyper_2f1_terminating<F: Field>(lambda: usize, a2: &F, a3: &F, u: &F) -> Result<F> {
    Ok(horner(&hyper_2f1_coefficients(lambda, a2, a3)?, u))
}

/// Term coefficients of the terminating `2phi1[q^-lambda, a2; a3; q, u]`.
pub fn hyper_2phi1_coefficients<F: Field>(lambda: usize, a2: &F, a3: &F, q: &F) -> Result<Vec<F>> {
    let one = q.one_like();
    let mut out = vec![one.clone()];
    let mut c = one.clone();
    let mut qj = one.clone();
    let qml = q.fpow(-(lambda as i64))?;
    for j in 0..lambda {
        let den = one.fsub(&a3.fmul(&qj)).fmul(&one.fsub(&qj.fmul(q)));
        if den.is_zero() {
            return Err(Error::PoleInDenominator(j + 1));
        }
        let num = one.fsub(&qml.fmul(&qj)).fmul(&one.fsub(&a2.fmul(&qj)));
        c = c.fmul(&num).fdiv(&den)?;
        out.push(c.clone());
        qj = qj.fmul(q);
    }
    Ok(out)
}

pub fn hyper_2phi1_terminating<F: Field>(lambda: usize, a2: &F, a3: &F, q: &F, u: &F) -> Result<F> {
    Ok(horner(&hyper_2phi1_coefficients(lambda, a2, a3, q)?, u))
}

pub fn horner<F: Field>(c: &[F], u: &F) -> F {
    let mut acc = u.zero_like();
    for a in c.iter().rev() {
        acc = acc.fmul(u).fadd(a);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_pochhammer_examples() {
        assert_eq!(qpoch_finite(&rat(7, 3), &rat(1, 2), 0), int(1));
        assert_eq!(qpoch_finite(&int(1), &rat(1, 2), 3), int(0));
        assert_eq!(qpoch_finite(&rat(1, 2), &rat(1, 2), 2), rat(3, 8));
    }

    #[test]
    fn finite_pochhammer_recursion() {
        let x = rat(2, 7);
        let q = rat(-3, 5);
        let mut qn = int(1);
        for n in 0..50 {
            let lhs = qpoch_finite(&x, &q, n + 1);
            let rhs = qpoch_finite(&x, &q, n) * (int(1) - &qn * &x);
            assert_eq!(lhs, rhs);
            qn *= &q;
        }
    }

    #[test]
    fn infinite_pochhammer() {
        let p = 192;
        let h = Real::from_f64(0.5, p);
        assert_eq!(qpoch_infinite(&Real::zero(p), &h, 1e-30).unwrap().to_f64(), 1.0);
        let v = qpoch_infinite(&h, &h, 1e-12).unwrap().to_f64();
        // Re-summed independently through the pentagonal-number form of (q;q)_inf.
        let mut euler = 0.0f64;
        for k in -30i64..=30 {
            let e = (k * (3 * k - 1) / 2) as i32;
            let s = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            euler += s * 0.5f64.powi(e);
        }
        assert!((v - euler).abs() < 1e-11, "{v} vs {euler}");
        assert!((v - 0.288788).abs() < 1e-6);
        let a = qpoch_infinite(&Real::from_ratio(&rat(3, 10), p), &h, 1e-30).unwrap();
        let b = qpoch_infinite(&Real::from_ratio(&rat(3, 20), p), &h, 1e-30).unwrap();
        assert!((&a - &(&Real::from_ratio(&rat(7, 10), p) * &b)).abs().to_f64() < 1e-28);
        assert!(matches!(
            qpoch_infinite(&h, &Real::from_f64(1.0, p), 1e-9),
            Err(Error::DivergentParameter(_))
        ));
    }

    #[test]
    fn gauss_binomials() {
        assert_eq!(gauss_factorials(5, 0, &int(3)).unwrap(), int(1));
        assert_eq!(gauss_factorials(2, 1, &int(2)).unwrap(), int(3));
        assert_eq!(gauss_factorials(4, 2, &int(2)).unwrap(), int(35));
        assert!(matches!(gauss_factorials(1, 2, &int(2)), Err(Error::InvalidRange(_))));
        assert!(matches!(gauss_factorials(2, 1, &int(1)), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn gauss_binomial_inversion() {
        for q in [int(2), int(3), rat(1, 2), rat(1, 3)] {
            let qi = q.recip();
            for i in 0..=8usize {
                for ip in 0..=i {
                    let a = gauss_factorials(i, ip, &q).unwrap();
                    let b = gauss_factorials(i, ip, &qi).unwrap();
                    let e = q.fpow((ip * (i - ip)) as i64).unwrap();
                    assert_eq!(a, b * e);
                }
            }
        }
    }

    #[test]
    fn hypergeometric_examples() {
        assert_eq!(hyper_2f1_terminating(0, &rat(5, 7), &int(3), &int(9)).unwrap(), int(1));
        assert_eq!(hyper_2f1_terminating(1, &int(2), &int(4), &rat(1, 2)).unwrap(), rat(3, 4));
        let q = rat(1, 3);
        let a2 = &q * rat(1, 2) * rat(1, 5);
        assert_eq!(hyper_2phi1_terminating(1, &a2, &rat(1, 2), &q, &int(0)).unwrap(), int(1));
        assert!(matches!(
            hyper_2f1_terminating(2, &int(1), &int(-1), &int(1)),
            Err(Error::PoleInDenominator(2))
        ));
        assert!(matches!(
            hyper_2phi1_terminating(2, &int(1), &rat(1, 3), &int(3), &int(1)),
            Err(Error::PoleInDenominator(2))
        ));
    }

    #[test]
    fn scalar_promotion() {
        let a = Scalar::exact(1, 2);
        let b = Scalar::Func(RatFunc::q());
        let c = a.try_add(&b).unwrap();
        assert!(matches!(c, Scalar::Func(_)));
        let r = Scalar::float(0.25, 128);
        assert_eq!(a.try_mul(&r).unwrap().to_f64(), Some(0.125));
        assert!(b.try_add(&r).is_err());
        assert_eq!(Scalar::exact(6, -4).render(10), "-3/2");
    }
}
