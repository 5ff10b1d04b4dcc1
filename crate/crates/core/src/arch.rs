//! The Archimedean side: the Selberg density on the ordered simplex
//! `0 <= u_1 <= ... <= u_m <= 1`, generalized Jacobi polynomials and the
//! one-variable closed forms.
//!
//! The density is `s_m Π u_i^{α/2-1} (1-u_i)^{β/2-1} Π_{i<j} |u_i - u_j|^γ`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{hyper_2f1_coefficients, Field, Real};
use crate::error::{Error, Result};
use crate::partitions::{up_to_weight, Partition};
use crate::sympoly::{DiscreteMeasure, SymPoly};

/// Real or complex Grassmannian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrassField {
    Real,
    Complex,
}

impl GrassField {
    fn dim(self) -> usize {
        match self {
            GrassField::Real => 1,
            GrassField::Complex => 2,
        }
    }
}

/// `(α, β, γ)` with `m` variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArchParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub m: usize,
}

impl ArchParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, m: usize) -> Result<ArchParams> {
        if !(alpha > 0.0 && beta > 0.0 && gamma > 0.0) {
            return Err(Error::GammaPole(format!("parameters ({alpha}, {beta}, {gamma}) must be positive")));
        }
        if m == 0 {
            return Err(Error::InvalidRange("need at least one variable".into()));
        }
        Ok(ArchParams { alpha, beta, gamma, m })
    }

    /// `(α, β, γ) = d(n - 2m + 1, 1, 1)` with `d = 1` (real) or `2` (complex).
    pub fn grassmannian(n: usize, m: usize, field: GrassField) -> Result<ArchParams> {
        if m == 0 || 2 * m > n {
            return Err(Error::Config(format!("need 1 <= m <= n/2, got n={n}, m={m}")));
        }
        let d = field.dim() as f64;
        ArchParams::new(d * (n - 2 * m + 1) as f64, d, d, m)
    }
}

/// `s_m`, making the density a probability measure on the ordered simplex.
pub fn selberg_constant(m: usize, alpha: f64, beta: f64, gamma: f64, prec: usize) -> Result<Real> {
    let r = |x: f64| Real::from_f64(x, prec);
    let (a, b, c) = (alpha / 2.0, beta / 2.0, gamma / 2.0);
    let mut acc = Real::one(prec);
    for j in 1..=m {
        let jf = j as f64;
        let num = &r(a + b + (m as f64 + jf - 2.0) * c).gamma()? * &r(c).gamma()?;
        let den = &(&r(a + (jf - 1.0) * c).gamma()? * &r(b + (jf - 1.0) * c).gamma()?) * &r(jf * c).gamma()?;
        acc = &acc * &num.checked_div(&den)?;
    }
    Ok(acc)
}

fn ln_beta(p: f64, q: f64) -> Result<f64> {
    let g = |x: f64| Real::from_f64(x, 64).gamma().map(|v| v.ln().to_f64());
    Ok(g(p)? + g(q)? - g(p + q)?)
}

/// Gauss rule for `∫_0^1 f(x) x^p (1-x)^q dx` (`p, q > -1`) via the
/// Golub-Welsch eigenproblem.
pub fn gauss_jacobi(order: usize, p: f64, q: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(p > -1.0 && q > -1.0) {
        return Err(Error::InvalidRange(format!("weight exponents ({p}, {q}) must exceed -1")));
    }
    // Jacobi polynomials on [-1, 1] with weight (1-x)^al (1+x)^be
    let (al, be) = (q, p);
    let s = al + be;
    let mut jm = DMatrix::<f64>::zeros(order, order);
    for n in 0..order {
        let nf = n as f64;
        let d = if n == 0 {
            (be - al) / (s + 2.0)
        } else {
            (be * be - al * al) / ((2.0 * nf + s) * (2.0 * nf + s + 2.0))
        };
        jm[(n, n)] = d;
        if n + 1 < order {
            let k = nf + 1.0;
            let b2 = if n == 0 {
                4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s).powi(2) * (3.0 + s))
            } else {
                4.0 * k * (k + al) * (k + be) * (k + s)
                    / ((2.0 * k + s).powi(2) * (2.0 * k + s + 1.0) * (2.0 * k + s - 1.0))
            };
            jm[(n, n + 1)] = b2.sqrt();
            jm[(n + 1, n)] = b2.sqrt();
        }
    }
    let eig = SymmetricEigen::new(jm);
    let mu0 = ln_beta(p + 1.0, q + 1.0)?.exp();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| ((1.0 + eig.eigenvalues[i]) / 2.0, mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs.into_iter().unzip())
}

/// Quadrature for the Selberg density with `m <= 2`, order `order` per axis.
///
/// `m = 2` splits the ordered triangle into the corner pieces
/// `u_2 <= 1/2` and `u_1 >= 1/2`, each flattened by a Duffy map so the
/// diagonal factor becomes a Jacobi weight, and the square between them.
pub fn selberg_rule(p: &ArchParams, order: usize, prec: usize) -> Result<DiscreteMeasure> {
    let (a, b, c2) = (p.alpha / 2.0, p.beta / 2.0, p.gamma);
    let s = selberg_constant(p.m, p.alpha, p.beta, p.gamma, 64)?.to_f64();
    let mut pts: Vec<Vec<f64>> = Vec::new();
    let mut wts: Vec<f64> = Vec::new();
    match p.m {
        1 => {
            let (x, w) = gauss_jacobi(order, a - 1.0, b - 1.0)?;
            for (xi, wi) in x.into_iter().zip(w) {
                pts.push(vec![xi]);
                wts.push(s * wi);
            }
        }
        2 => {
            let half = 0.5f64;
            // corner at 0: u2 = v/2, u1 = u2 w
            let (v, wv) = gauss_jacobi(order, 2.0 * a + c2 - 1.0, 0.0)?;
            let (w, ww) = gauss_jacobi(order, a - 1.0, c2)?;
            let scale = half.powf(2.0 * a + c2);
            for (vi, wvi) in v.iter().zip(&wv) {
                let u2 = half * vi;
                for (wi, wwi) in w.iter().zip(&ww) {
                    let u1 = u2 * wi;
                    let smooth = ((1.0 - u1) * (1.0 - u2)).powf(b - 1.0);
                    pts.push(vec![u1, u2]);
                    wts.push(s * scale * wvi * wwi * smooth);
                }
            }
            // corner at 1, mirrored
            let (v, wv) = gauss_jacobi(order, 2.0 * b + c2 - 1.0, 0.0)?;
            let (w, ww) = gauss_jacobi(order, b - 1.0, c2)?;
            let scale = half.powf(2.0 * b + c2);
            for (vi, wvi) in v.iter().zip(&wv) {
                let s1 = half * vi;
                for (wi, wwi) in w.iter().zip(&ww) {
                    let (u1, u2) = (1.0 - s1, 1.0 - s1 * wi);
                    let smooth = (u1 * u2).powf(a - 1.0);
                    pts.push(vec![u1, u2]);
                    wts.push(s * scale * wvi * wwi * smooth);
                }
            }
            // square [0,1/2] x [1/2,1]
            let (x, wx) = gauss_jacobi(order, a - 1.0, 0.0)?;
            let (y, wy) = gauss_jacobi(order, 0.0, b - 1.0)?;
            let sx = half.powf(a);
            let sy = half.powf(b);
            for (xi, wxi) in x.iter().zip(&wx) {
                let u1 = half * xi;
                for (yi, wyi) in y.iter().zip(&wy) {
                    let u2 = half + half * yi;
                    let smooth = (1.0 - u1).powf(b - 1.0) * u2.powf(a - 1.0) * (u2 - u1).powf(c2);
                    pts.push(vec![u1, u2]);
                    wts.push(s * sx * sy * wxi * wyi * smooth);
                }
            }
        }
        m => return Err(Error::InvalidRange(format!("continuous quadrature supports m <= 2, got {m}"))),
    }
    let points = pts.into_iter().map(|x| x.into_iter().map(|u| Real::from_f64(u, prec)).collect()).collect();
    let weights = wts.into_iter().map(|w| Real::from_f64(w, prec)).collect();
    Ok(DiscreteMeasure::new(p.m, points, weights))
}

/// Refinement schedule for [`selberg_rule`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub start: usize,
    pub max: usize,
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { start: 16, max: 256, tol: 1e-9 }
    }
}

/// A converged rule with its last refinement gap.
#[derive(Clone, Debug)]
pub struct SelbergMeasure {
    pub measure: DiscreteMeasure,
    pub order: usize,
    pub error: f64,
}

/// Refines the order until all moments `∫ m_ν`, `|ν| <= degree`, change by
/// less than `spec.tol`.
pub fn selberg_measure(p: &ArchParams, degree: usize, spec: QuadratureSpec, prec: usize) -> Result<SelbergMeasure> {
    let basis = up_to_weight(degree, p.m);
    let mut order = spec.start.max(2);
    let mut prev = selberg_rule(p, order, prec)?;
    let mut prev_mom: Vec<f64> = prev.moments(&basis).iter().map(Real::to_f64).collect();
    let mut gap = f64::INFINITY;
    while order < spec.max {
        let next_order = (order * 2).min(spec.max);
        let next = selberg_rule(p, next_order, prec)?;
        let mom: Vec<f64> = next.moments(&basis).iter().map(Real::to_f64).collect();
        gap = prev_mom.iter().zip(&mom).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prev = next;
        prev_mom = mom;
        order = next_order;
        if gap < spec.tol {
            return Ok(SelbergMeasure { measure: prev, order, error: gap });
        }
    }
    Err(Error::QuadratureNotConverged(gap))
}

/// `∫ 1` over the ordered simplex, `m <= 2`.
pub fn selberg_total(p: &ArchParams, spec: QuadratureSpec) -> Result<(Real, f64)> {
    let sm = selberg_measure(p, 0, spec, 128)?;
    Ok((sm.measure.total(), sm.error))
}

/// `⟨f, g⟩_{α,β,γ}`, `m <= 2`.
pub fn inner_product(f: &SymPoly<Real>, g: &SymPoly<Real>, p: &ArchParams, spec: QuadratureSpec) -> Result<Real> {
    let deg = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    let sm = selberg_measure(p, deg, spec, 128)?;
    Ok(sm.measure.inner_product(f, g))
}

/// `E_λ(u; α, β, γ)` by Gram-Schmidt against the Selberg density, `m <= 2`.
pub fn gen_jacobi(lambda: &Partition, p: &ArchParams, spec: QuadratureSpec) -> Result<SymPoly<Real>> {
    let sm = selberg_measure(p, 2 * lambda.weight(), spec, 128)?;
    sm.measure.flag_orthogonal(lambda)
}

/// Rising factorial `(x)_n`.
pub fn rising<F: Field>(x: &F, n: usize) -> F {
    let mut acc = x.one_like();
    for i in 0..n {
        acc = acc.fmul(&x.fadd(&x.int_like(i as i64)));
    }
    acc
}

/// One-variable `E_λ(0)`: `(α/2)_λ (s)_λ / ((β/2)_λ λ!) · (2λ-1+s)/(λ-1+s)`
/// with `s = (α+β)/2`.
pub fn jacobi_1d_origin<F: Field>(lambda: usize, alpha: &F, beta: &F) -> Result<F> {
    let one = alpha.one_like();
    if lambda == 0 {
        return Ok(one);
    }
    let two = alpha.int_like(2);
    let (a, b) = (alpha.fdiv(&two)?, beta.fdiv(&two)?);
    let s = a.fadd(&b);
    let l = alpha.int_like(lambda as i64);
    let num = rising(&a, lambda).fmul(&rising(&s, lambda)).fmul(&l.fadd(&l).fsub(&one).fadd(&s));
    let den = rising(&b, lambda).fmul(&rising(&one, lambda)).fmul(&l.fsub(&one).fadd(&s));
    num.fdiv(&den)
}

/// One-variable `E_λ(u) = E_λ(0) · 2F1[-λ, λ + s - 1; α/2; u]`.
pub fn jacobi_1d<F: Field>(lambda: usize, alpha: &F, beta: &F) -> Result<SymPoly<F>> {
    let pre = jacobi_1d_origin(lambda, alpha, beta)?;
    let two = alpha.int_like(2);
    let (a, b) = (alpha.fdiv(&two)?, beta.fdiv(&two)?);
    let a2 = a.fadd(&b).fadd(&alpha.int_like(lambda as i64 - 1));
    let c = hyper_2f1_coefficients(lambda, &a2, &a)?;
    Ok(SymPoly::from_coeffs(
        1,
        c.iter().enumerate().map(|(j, cj)| (Partition::rectangle(j, 1), pre.fmul(cj))),
    ))
}

/// `dim` of the `λ`-th spherical representation of the rank-one
/// Grassmannian (projective space) of lines in `K^n`.
pub fn dims_arch(lambda: usize, n: usize, field: GrassField) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::Config(format!("projective space needs n >= 2, got {n}")));
    }
    if lambda == 0 {
        return Ok(BigRational::one());
    }
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let (nn, l) = (n as i64, lambda as i64);
    Ok(match field {
        GrassField::Real => {
            let num = rising(&r(nn - 1, 2), lambda) * rising(&r(nn, 2), lambda) * (r(2 * l - 1, 1) + r(nn, 2));
            let den = rising(&r(1, 2), lambda) * rising(&r(1, 1), lambda) * (r(l - 1, 1) + r(nn, 2));
            num / den
        }
        GrassField::Complex => {
            let c = binomial(n + lambda - 2, lambda);
            r(2 * l + nn - 1, nn - 1) * BigRational::from_integer(&c * &c)
        }
    })
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Whether `x` is within `tol` of a non-negative integer.
pub fn near_integer(x: f64, tol: f64) -> bool {
    x >= -tol && (x - x.round()).abs() < tol
}
