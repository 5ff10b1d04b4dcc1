//! The quantum side: the `q`-Selberg atomic measure on the points
//! `q^λ t^ρ`, its inner product, multivariable little `q`-Jacobi
//! polynomials and the dimension interpolant `D^q`.

use num_rational::BigRational;

use crate::arith::{hyper_2phi1_coefficients, qpoch_finite, qpoch_infinite, Field, Real};
use crate::error::{Error, Result};
use crate::partitions::{of_weight, up_to_weight, Partition};
use crate::sympoly::{DiscreteMeasure, SymPoly};

/// `(q, a, b, t)` with `m` variables; `ρ = (m-1, ..., 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QParams {
    pub q: Real,
    pub a: Real,
    pub b: Real,
    pub t: Real,
    pub m: usize,
}

impl QParams {
    pub fn new(q: Real, a: Real, b: Real, t: Real, m: usize) -> Result<QParams> {
        if m == 0 {
            return Err(Error::InvalidRange("need at least one variable".into()));
        }
        let prec = q.precision();
        let (zero, one) = (Real::zero(prec), Real::one(prec));
        if q <= zero || q >= one {
            return Err(Error::DivergentParameter(format!("q = {} outside (0,1)", q.to_f64())));
        }
        for (name, v) in [("a", &a), ("b", &b), ("t", &t)] {
            if *v <= zero || *v >= one {
                return Err(Error::InvalidRange(format!("{name} = {} outside (0,1)", v.to_f64())));
            }
        }
        Ok(QParams { q, a, b, t, m })
    }

    pub fn from_f64(q: f64, a: f64, b: f64, t: f64, m: usize, prec: usize) -> Result<QParams> {
        let r = |x| Real::from_f64(x, prec);
        QParams::new(r(q), r(a), r(b), r(t), m)
    }

    pub fn from_ratios(q: &BigRational, a: &BigRational, b: &BigRational, t: &BigRational, m: usize, prec: usize) -> Result<QParams> {
        let r = |x| Real::from_ratio(x, prec);
        QParams::new(r(q), r(a), r(b), r(t), m)
    }

    pub fn precision(&self) -> usize {
        self.q.precision()
    }

    pub fn with_precision(&self, prec: usize) -> QParams {
        QParams {
            q: self.q.with_precision(prec),
            a: self.a.with_precision(prec),
            b: self.b.with_precision(prec),
            t: self.t.with_precision(prec),
            m: self.m,
        }
    }

    /// The atom `q^μ t^ρ`.
    pub fn point(&self, mu: &Partition) -> Vec<Real> {
        let m = self.m;
        mu.padded(m).iter().enumerate().map(|(i, &e)| &self.q.powi(e as i64) * &self.t.powi((m - 1 - i) as i64)).collect()
    }

    /// Truncation tolerance for infinite products at this precision.
    fn product_tol(&self) -> f64 {
        2f64.powi(-(self.precision().min(1000) as i32) + 4)
    }
}

/// Which power of `t` multiplies `a^{λ_j}` in the local factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum F2Exponent {
    /// `t^{2 λ_j (j-1)}`.
    #[default]
    Proof,
    /// `t^{2j-2}`, independent of `λ`.
    Display,
}

/// Evaluator for the `q`-Selberg masses at one parameter set.
///
/// The `λ`-independent infinite products are computed once; shifted ones use
/// `(x q^k; q)_∞ = (x; q)_∞ / (x; q)_k`.
#[derive(Clone, Debug)]
pub struct QSelberg {
    p: QParams,
    variant: F2Exponent,
    f1: Real,
    // per row j: (q t^{m-j}; q)_∞ and (b t^{m-j}; q)_∞
    row_num: Vec<Real>,
    row_den: Vec<Real>,
    // per gap d = i - j: (q t^{d-1}; q)_∞ and (t^{d+1}; q)_∞
    gap_num: Vec<Real>,
    gap_den: Vec<Real>,
}

impl QSelberg {
    pub fn new(p: &QParams, variant: F2Exponent) -> Result<QSelberg> {
        let (q, a, b, t, m) = (&p.q, &p.a, &p.b, &p.t, p.m);
        let tol = p.product_tol();
        let inf = |x: &Real| qpoch_infinite(x, q, tol);
        let tp = |e: usize| t.powi(e as i64);
        let ab = a * b;
        let mut f1 = Real::one(p.precision());
        let (qq, tt) = (inf(q)?, inf(t)?);
        for j in 1..=m {
            let num = &(&inf(&(a * &tp(m - j)))? * &inf(&(b * &tp(j - 1)))?) * &inf(&tp(j))?;
            let den = &(&inf(&(&ab * &tp(m + j - 2)))? * &tt) * &qq;
            f1 = &f1 * &num.checked_div(&den)?;
        }
        let mut row_num = Vec::with_capacity(m);
        let mut row_den = Vec::with_capacity(m);
        for j in 1..=m {
            row_num.push(inf(&(q * &tp(m - j)))?);
            row_den.push(inf(&(b * &tp(m - j)))?);
        }
        let mut gap_num = vec![Real::one(p.precision())];
        let mut gap_den = vec![Real::one(p.precision())];
        for d in 1..m {
            gap_num.push(inf(&(q * &tp(d - 1)))?);
            gap_den.push(inf(&tp(d + 1))?);
        }
        Ok(QSelberg { p: p.clone(), variant, f1, row_num, row_den, gap_num, gap_den })
    }

    pub fn params(&self) -> &QParams {
        &self.p
    }

    /// Mass of the atom `q^λ t^ρ`.
    pub fn mass(&self, lambda: &Partition) -> Result<Real> {
        let m = self.p.m;
        if lambda.len() > m {
            return Err(Error::InvalidRange(format!("{lambda} has more than {m} parts")));
        }
        let table = self.table(lambda.part(1))?;
        Ok(self.mass_from(&table, lambda))
    }

    /// Per-row and per-gap factors for all exponents up to `kmax`, built with
    /// running products so that each mass is `O(m^2)` multiplications.
    fn table(&self, kmax: usize) -> Result<MassTable> {
        let p = &self.p;
        let (q, t, m, prec) = (&p.q, &p.t, p.m, p.precision());
        let one = Real::one(prec);
        let mut row = Vec::with_capacity(m);
        for j in 1..=m {
            let tm = t.powi((m - j) as i64);
            let (xn, xd) = (q * &tm, &p.b * &tm);
            // ratio_k = (x_n q^k)_∞ / (x_d q^k)_∞ · a^k
            let mut cur = self.row_num[j - 1].checked_div(&self.row_den[j - 1])?;
            let mut col = Vec::with_capacity(kmax + 1);
            let (mut qk, mut ak) = (one.clone(), one.clone());
            for _ in 0..=kmax {
                col.push(&cur * &ak);
                let fnum = &one - &(&xn * &qk);
                let fden = &one - &(&xd * &qk);
                cur = fden.checked_div(&fnum).map(|r| &cur * &r)?;
                qk = &qk * q;
                ak = &ak * &p.a;
            }
            row.push(col);
        }
        let mut gap = vec![Vec::new()];
        for d in 1..m {
            let (xn, xd) = (q * &t.powi(d as i64 - 1), t.powi(d as i64 + 1));
            let td = t.powi(d as i64);
            let mut cur = self.gap_num[d].checked_div(&self.gap_den[d])?;
            let mut col = Vec::with_capacity(kmax + 1);
            let mut qs = one.clone();
            for _ in 0..=kmax {
                col.push(&cur * &(&one - &(&qs * &td)));
                let fnum = &one - &(&xn * &qs);
                let fden = &one - &(&xd * &qs);
                cur = fden.checked_div(&fnum).map(|r| &cur * &r)?;
                qs = &qs * q;
            }
            gap.push(col);
        }
        let tmax = match self.variant {
            F2Exponent::Proof => 2 * kmax * m.saturating_sub(1),
            F2Exponent::Display => 2 * m,
        };
        let mut tpow = Vec::with_capacity(tmax + 1);
        let mut acc = one;
        for _ in 0..=tmax {
            tpow.push(acc.clone());
            acc = &acc * t;
        }
        Ok(MassTable { row, gap, tpow })
    }

    fn mass_from(&self, table: &MassTable, lambda: &Partition) -> Real {
        let m = self.p.m;
        let l = lambda.padded(m);
        let mut acc = self.f1.clone();
        for j in 1..=m {
            let lj = l[j - 1];
            let texp = match self.variant {
                F2Exponent::Proof => 2 * lj * (j - 1),
                F2Exponent::Display => 2 * j - 2,
            };
            acc = &(&acc * &table.row[j - 1][lj]) * &table.tpow[texp];
        }
        for j in 1..=m {
            for i in j + 1..=m {
                acc = &acc * &table.gap[i - j][l[j - 1] - l[i - 1]];
            }
        }
        acc
    }

    /// All atoms of weight at most `cutoff` with their masses.
    pub fn atoms(&self, cutoff: usize) -> Result<Vec<(Partition, Real)>> {
        let table = self.table(cutoff)?;
        Ok(up_to_weight(cutoff, self.p.m).into_iter().map(|l| {
            let w = self.mass_from(&table, &l);
            (l, w)
        }).collect())
    }

    /// Truncated total mass with a geometric tail estimate.
    pub fn total(&self, cutoff: usize, tol: f64) -> Result<QTotal> {
        let prec = self.p.precision();
        let table = self.table(cutoff)?;
        let mut shells = Vec::with_capacity(cutoff + 1);
        let mut total = Real::zero(prec);
        for w in 0..=cutoff {
            let mut s = Real::zero(prec);
            for l in of_weight(w, self.p.m) {
                s = &s + &self.mass_from(&table, &l);
            }
            total = &total + &s;
            shells.push(s.to_f64());
        }
        let tail = tail_bound(&shells, self.p.a.to_f64());
        if tail > tol {
            return Err(Error::CutoffTooSmall { tail, tol });
        }
        Ok(QTotal { total, tail, cutoff })
    }

    /// [`QSelberg::total`], growing the cutoff by half until the tail fits.
    pub fn total_auto(&self, start: usize, tol: f64, max_cutoff: usize) -> Result<QTotal> {
        let mut cutoff = start.max(1);
        loop {
            match self.total(cutoff, tol) {
                Err(Error::CutoffTooSmall { .. }) if cutoff < max_cutoff => cutoff = (cutoff * 3 / 2).clamp(cutoff + 1, max_cutoff),
                other => return other,
            }
        }
    }
}

struct MassTable {
    row: Vec<Vec<Real>>,
    gap: Vec<Vec<Real>>,
    tpow: Vec<Real>,
}

/// Margin applied to the observed shell ratio.
pub const TAIL_MARGIN: f64 = 0.1;

/// `S_N ρ / (1 - ρ)` with `1 - ρ = (1 - max(S_N / S_{N-1}, a))(1 - margin)`.
fn tail_bound(shells: &[f64], a: f64) -> f64 {
    let n = shells.len();
    let last = shells[n - 1].abs();
    let observed = if n >= 2 && shells[n - 2] > 0.0 { last / shells[n - 2] } else { a };
    let rho = 1.0 - (1.0 - observed.max(a)) * (1.0 - TAIL_MARGIN);
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    last * rho / (1.0 - rho)
}

/// Result of a truncated summation.
#[derive(Clone, Debug)]
pub struct QTotal {
    pub total: Real,
    pub tail: f64,
    pub cutoff: usize,
}

/// Mass at `q^λ t^ρ` with the default local factor.
pub fn qselberg_mass(lambda: &Partition, p: &QParams, precision: usize) -> Result<Real> {
    QSelberg::new(&p.with_precision(precision), F2Exponent::Proof)?.mass(lambda)
}

/// `Σ_{|λ| <= N} mass(λ)` with the default local factor.
pub fn qselberg_total(p: &QParams, cutoff: usize, tol: f64) -> Result<QTotal> {
    QSelberg::new(p, F2Exponent::Proof)?.total(cutoff, tol)
}

/// The measure truncated to `|λ| <= N`.
#[derive(Clone, Debug)]
pub struct QJacobiFamily {
    p: QParams,
    measure: DiscreteMeasure,
    tail: f64,
    cutoff: usize,
}

impl QJacobiFamily {
    /// Fails with `CutoffTooSmall` if the mass beyond `cutoff` may exceed `tol`.
    pub fn new(p: &QParams, cutoff: usize, tol: f64) -> Result<QJacobiFamily> {
        let sel = QSelberg::new(p, F2Exponent::Proof)?;
        let tot = sel.total(cutoff, tol)?;
        let atoms = sel.atoms(cutoff)?;
        let points = atoms.iter().map(|(l, _)| p.point(l)).collect();
        let masses = atoms.into_iter().map(|(_, w)| w).collect();
        Ok(QJacobiFamily { p: p.clone(), measure: DiscreteMeasure::new(p.m, points, masses), tail: tot.tail, cutoff })
    }

    /// Smallest cutoff (searched upward from `start`) meeting `tol`.
    pub fn with_auto_cutoff(p: &QParams, start: usize, tol: f64, max_cutoff: usize) -> Result<QJacobiFamily> {
        let mut n = start.max(1);
        loop {
            match QJacobiFamily::new(p, n, tol) {
                Err(Error::CutoffTooSmall { .. }) if n < max_cutoff => {
                    n = (n * 3 / 2).max(n + 1).min(max_cutoff);
                }
                r => return r,
            }
        }
    }

    pub fn params(&self) -> &QParams {
        &self.p
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    /// `⟨f, g⟩ = Σ f(q^λ t^ρ) g(q^λ t^ρ) mass(λ)`.
    pub fn inner_product(&self, f: &SymPoly<Real>, g: &SymPoly<Real>) -> Real {
        self.measure.inner_product(f, g)
    }

    /// `E_λ`: Gram-Schmidt on the graded-lex monomial flag, normalized so
    /// that `‖E‖² = E(0)`.
    pub fn jacobi(&self, lambda: &Partition) -> Result<SymPoly<Real>> {
        self.measure.flag_orthogonal(lambda)
    }
}

/// `E_λ` for the `q`-Selberg measure, truncated at weight `cutoff`.
pub fn qjacobi(lambda: &Partition, p: &QParams, cutoff: usize, tol: f64) -> Result<SymPoly<Real>> {
    QJacobiFamily::new(p, cutoff, tol)?.jacobi(lambda)
}

/// `D^q_λ(a, b)` for one variable: the value of `E_λ` at 0.
pub fn qdim_1d<F: Field>(lambda: usize, q: &F, a: &F, b: &F) -> Result<F> {
    let one = q.one_like();
    if lambda == 0 {
        return Ok(one);
    }
    let l = lambda as i64;
    let ab = a.fmul(b);
    let num = one
        .fsub(&ab.fmul(&q.fpow(2 * l - 1)?))
        .fmul(&qpoch_finite(&ab, q, lambda - 1))
        .fmul(&qpoch_finite(a, q, lambda));
    let den = qpoch_finite(q, q, lambda).fmul(&qpoch_finite(b, q, lambda)).fmul(&a.fpow(l)?);
    if den.is_zero() {
        return Err(Error::PoleInDenominator(lambda));
    }
    num.fdiv(&den)
}

/// One-variable `E_λ` as `D^q · 2φ1[q^{-λ}, q^{λ-1}ab; a; q, qx]`.
pub fn qjacobi_1d<F: Field>(lambda: usize, q: &F, a: &F, b: &F) -> Result<SymPoly<F>> {
    let pre = qdim_1d(lambda, q, a, b)?;
    let a2 = q.fpow(lambda as i64 - 1)?.fmul(a).fmul(b);
    let c = hyper_2phi1_coefficients(lambda, &a2, a, q)?;
    let mut coeffs = Vec::with_capacity(c.len());
    let mut qj = q.one_like();
    for (j, cj) in c.iter().enumerate() {
        coeffs.push((Partition::rectangle(j, 1), pre.fmul(cj).fmul(&qj)));
        qj = qj.fmul(q);
    }
    Ok(SymPoly::from_coeffs(1, coeffs))
}

/// `D^q_λ = E_λ(0)`: closed form for `m = 1`, Gram-Schmidt otherwise.
pub fn qdim(lambda: &Partition, p: &QParams, cutoff: usize, tol: f64) -> Result<Real> {
    if p.m == 1 {
        return qdim_1d(lambda.weight(), &p.q, &p.a, &p.b);
    }
    let e = qjacobi(lambda, p, cutoff, tol)?;
    Ok(e.constant_term().cloned().unwrap_or_else(|| Real::zero(p.precision())))
}
