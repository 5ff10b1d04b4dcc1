//! Shifted Macdonald polynomials by exact interpolation, generalized
//! `(q,t)`-binomial coefficients and the `C^q` basis.
//!
//! `P*_λ` is the unique polynomial of degree `|λ|`, symmetric in
//! `w_i = x_i t^{-i}`, vanishing at `x = q^μ` for every other `μ` with
//! `|μ| <= |λ|`, and normalized by
//! `P*_λ(q^λ) = (-1)^{|λ|} t^{-2n(λ)} q^{n(λ')} v'_λ`.
//! The interpolation nodes and the monomial basis `m_ν(w)` are both indexed
//! by partitions of weight at most `|λ|`, so the defining system is square.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::linalg::{bareiss_solve, solve};
use crate::arith::{Field, RatFunc, ZPoly};
use crate::error::{Error, Result};
use crate::partitions::{up_to_weight, Partition};
use crate::sympoly::{distinct_permutations, monomial_value, SymPoly};

/// `(v_λ, v'_λ)`, products over the cells of `λ`.
pub fn v_products<F: Field>(lambda: &Partition, q: &F, t: &F) -> Result<(F, F)> {
    let conj = lambda.conjugate();
    let one = q.one_like();
    let mut v = one.clone();
    let mut vp = one.clone();
    for (i, j) in lambda.cells() {
        let li = lambda.part(i) as i64;
        let cj = conj.part(j) as i64;
        let (i, j) = (i as i64, j as i64);
        v = v.fmul(&one.fsub(&q.fpow(li - j)?.fmul(&t.fpow(cj - i + 1)?)));
        vp = vp.fmul(&one.fsub(&q.fpow(li - j + 1)?.fmul(&t.fpow(cj - i)?)));
    }
    Ok((v, vp))
}

/// The prescribed value `P*_λ(q^λ)`.
pub fn top_value<F: Field>(lambda: &Partition, q: &F, t: &F) -> Result<F> {
    let (_, vp) = v_products(lambda, q, t)?;
    let sign = if lambda.weight() % 2 == 0 { 1 } else { -1 };
    let nl = lambda.nstat() as i64;
    let nc = lambda.conjugate().nstat() as i64;
    Ok(vp.fmul(&t.fpow(-2 * nl)?).fmul(&q.fpow(nc)?).fmul(&q.int_like(sign)))
}

/// The point `x = q^μ` padded to `m` coordinates.
pub fn lattice_point<F: Field>(mu: &Partition, m: usize, q: &F) -> Result<Vec<F>> {
    mu.padded(m).iter().map(|&e| q.fpow(e as i64)).collect()
}

fn shifted_coords<F: Field>(x: &[F], t: &F) -> Result<Vec<F>> {
    x.iter().enumerate().map(|(i, xi)| Ok(xi.fmul(&t.fpow(-(i as i64 + 1))?))).collect()
}

fn check_lengths(parts: &[&Partition], m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidRange("at least one variable is required".into()));
    }
    for p in parts {
        if p.len() > m {
            return Err(Error::InvalidRange(format!("{p} has more than {m} parts")));
        }
    }
    Ok(())
}

/// `P*_λ` stored as a symmetric polynomial in the shifted coordinates `w`.
#[derive(Clone, Debug)]
pub struct ShiftedPoly<F> {
    lambda: Partition,
    t: F,
    poly: SymPoly<F>,
}

impl<F: Field> ShiftedPoly<F> {
    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    /// Coefficients in the monomial basis `m_ν(w)`.
    pub fn in_shifted_coords(&self) -> &SymPoly<F> {
        &self.poly
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    /// Value at a point given in the original coordinates `x`.
    pub fn eval(&self, x: &[F]) -> Result<F> {
        Ok(self.poly.eval(&shifted_coords(x, &self.t)?))
    }

    /// Value at `x = q^μ`.
    pub fn eval_lattice(&self, mu: &Partition, q: &F) -> Result<F> {
        self.eval(&lattice_point(mu, self.nvars(), q)?)
    }
}

/// Solves the interpolation system in any field with `q`, `t` fixed.
pub fn shifted_macdonald<F: Field>(lambda: &Partition, m: usize, q: &F, t: &F) -> Result<ShiftedPoly<F>> {
    check_lengths(&[lambda], m)?;
    let basis = up_to_weight(lambda.weight(), m);
    let mut a = Vec::with_capacity(basis.len());
    let mut b = Vec::with_capacity(basis.len());
    let top = top_value(lambda, q, t)?;
    for node in &basis {
        let w = shifted_coords(&lattice_point(node, m, q)?, t)?;
        a.push(basis.iter().map(|k| monomial_value(k, &w)).collect::<Vec<_>>());
        b.push(vec![if node == lambda { top.clone() } else { q.zero_like() }]);
    }
    let x = solve(a, b).ok_or_else(|| {
        Error::ParameterDegeneracy(format!("interpolation system for {lambda} with {m} variables is singular"))
    })?;
    let poly = SymPoly::from_coeffs(m, basis.into_iter().zip(x.into_iter().map(|r| r[0].clone())));
    Ok(ShiftedPoly { lambda: lambda.clone(), t: t.clone(), poly })
}

/// `(μ over λ)_{q,t} = P*_λ(q^μ) / P*_λ(q^λ)` with `q`, `t` fixed.
pub fn gen_binomial<F: Field>(mu: &Partition, lambda: &Partition, m: usize, q: &F, t: &F) -> Result<F> {
    check_lengths(&[mu, lambda], m)?;
    let p = shifted_macdonald(lambda, m, q, t)?;
    let top = p.eval_lattice(lambda, q)?;
    p.eval_lattice(mu, q)?.fdiv(&top)
}

/// `C^q_λ(x) = P*_λ(x_1 t^{1-m}, ..., x_m) / P*_λ(q^λ)`.
pub fn cq_value<F: Field>(lambda: &Partition, x: &[F], q: &F, t: &F) -> Result<F> {
    let m = x.len();
    let p = shifted_macdonald(lambda, m, q, t)?;
    let y: Vec<F> = x
        .iter()
        .enumerate()
        .map(|(i, xi)| Ok(xi.fmul(&t.fpow(i as i64 + 1 - m as i64)?)))
        .collect::<Result<_>>()?;
    let top = p.eval_lattice(lambda, q)?;
    p.eval(&y)?.fdiv(&top)
}

/// The lattice point `q^μ t^ρ` with `ρ = (m-1, ..., 0)`.
pub fn rho_point<F: Field>(mu: &Partition, m: usize, q: &F, t: &F) -> Result<Vec<F>> {
    mu.padded(m)
        .iter()
        .enumerate()
        .map(|(i, &e)| Ok(q.fpow(e as i64)?.fmul(&t.fpow((m - 1 - i) as i64)?)))
        .collect()
}

/// `m_κ(w)` at `x = q^μ` as a polynomial in an indeterminate `q`, with
/// `t^{-1}` given.
fn monomial_in_q(kappa: &Partition, mu: &Partition, m: usize, tinv: &BigRational) -> Vec<BigRational> {
    let mu = mu.padded(m);
    let mut out: Vec<BigRational> = Vec::new();
    for perm in distinct_permutations(&kappa.padded(m)) {
        let deg: usize = perm.iter().zip(&mu).map(|(e, u)| e * u).sum();
        let tpow: i32 = perm.iter().enumerate().map(|(i, e)| ((i + 1) * e) as i32).sum();
        if out.len() <= deg {
            out.resize(deg + 1, BigRational::zero());
        }
        out[deg] += num_traits::pow::Pow::pow(tinv, tpow);
    }
    out
}

/// Clears denominators of a list of rational polynomials with one common
/// factor `s`: returns `(s * p_i, s)`.
fn integral_row(entries: &[Vec<BigRational>]) -> (Vec<ZPoly>, BigInt) {
    let mut l = BigInt::one();
    for e in entries {
        for c in e {
            l = l.lcm(c.denom());
        }
    }
    let polys = entries
        .iter()
        .map(|e| ZPoly::from_coeffs(e.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()))
        .collect();
    (polys, l)
}

/// `P*_λ / P*_λ(q^λ) = Σ_κ (num_κ / det) m_κ(w)` over `Q(q)` at fixed `t`.
#[derive(Clone, Debug)]
pub struct NormalizedSolve {
    basis: Vec<Partition>,
    num: Vec<ZPoly>,
    det: ZPoly,
}

impl NormalizedSolve {
    fn new(lambda: &Partition, m: usize, tinv: &BigRational) -> Result<NormalizedSolve> {
        let basis = up_to_weight(lambda.weight(), m);
        let mut a = Vec::with_capacity(basis.len());
        let mut b = Vec::with_capacity(basis.len());
        for node in &basis {
            let entries: Vec<Vec<BigRational>> = basis.iter().map(|k| monomial_in_q(k, node, m, tinv)).collect();
            let (row, s) = integral_row(&entries);
            a.push(row);
            b.push(if node == lambda { ZPoly::constant(s) } else { ZPoly::zero() });
        }
        let (num, det) = bareiss_solve(a, b).ok_or_else(|| {
            Error::ParameterDegeneracy(format!("interpolation system for {lambda} with {m} variables is singular"))
        })?;
        Ok(NormalizedSolve { basis, num, det })
    }

    fn value_at(&self, mu: &Partition, m: usize, tinv: &BigRational) -> RatFunc {
        let entries: Vec<Vec<BigRational>> = self.basis.iter().map(|k| monomial_in_q(k, mu, m, tinv)).collect();
        let (row, s) = integral_row(&entries);
        let mut acc = ZPoly::zero();
        for (n, r) in self.num.iter().zip(&row) {
            if !n.is_zero() && !r.is_zero() {
                acc = &acc + &(n * r);
            }
        }
        RatFunc::from_parts(BigRational::new(BigInt::one(), s), acc, self.det.clone())
    }
}

/// Generalized binomials and shifted Macdonald polynomials over `Q(q)` at a
/// fixed rational `t`, caching one interpolation solve per `(λ, m)`.
///
/// Safe to share between threads.
#[derive(Debug)]
pub struct BinomialSolver {
    t: BigRational,
    tinv: BigRational,
    cache: Mutex<HashMap<(Partition, usize), Arc<NormalizedSolve>>>,
}

impl BinomialSolver {
    pub fn new(t: BigRational) -> Result<BinomialSolver> {
        if Zero::is_zero(&t) {
            return Err(Error::ParameterDegeneracy("t = 0".into()));
        }
        let tinv = t.recip();
        Ok(BinomialSolver { t, tinv, cache: Mutex::new(HashMap::new()) })
    }

    /// Solver at `t = p^{-r}`, the residue-field specialization.
    pub fn residue(p: u64, r: u32) -> BinomialSolver {
        let t = BigRational::new(BigInt::one(), BigInt::from(p).pow(r));
        BinomialSolver::new(t).expect("non-zero t")
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    fn solved(&self, lambda: &Partition, m: usize) -> Result<Arc<NormalizedSolve>> {
        let key = (lambda.clone(), m);
        if let Some(s) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(NormalizedSolve::new(lambda, m, &self.tinv)?);
        self.cache.lock().expect("cache lock").insert(key, s.clone());
        Ok(s)
    }

    /// `(μ over λ)_{q,t}` as a reduced rational function of `q`.
    pub fn gen_binomial(&self, mu: &Partition, lambda: &Partition, m: usize) -> Result<RatFunc> {
        check_lengths(&[mu, lambda], m)?;
        if mu == lambda {
            return Ok(RatFunc::one());
        }
        if mu.weight() <= lambda.weight() {
            // interpolation node: vanishes by construction
            return Ok(RatFunc::zero());
        }
        Ok(self.solved(lambda, m)?.value_at(mu, m, &self.tinv))
    }

    /// `(μ over λ)` at `q = 0`, failing if the reduced denominator vanishes there.
    pub fn gen_binomial_at_zero(&self, mu: &Partition, lambda: &Partition, m: usize) -> Result<BigRational> {
        self.gen_binomial(mu, lambda, m)?.at_zero()
    }

    /// `P*_λ` with coefficients in `Q(q)`.
    pub fn shifted_macdonald(&self, lambda: &Partition, m: usize) -> Result<ShiftedPoly<RatFunc>> {
        check_lengths(&[lambda], m)?;
        let s = self.solved(lambda, m)?;
        let q = RatFunc::q();
        let t = RatFunc::from_rational(self.t.clone());
        let top = top_value(lambda, &q, &t)?;
        let det = RatFunc::from_poly(&s.det);
        let coeffs = s
            .basis
            .iter()
            .zip(&s.num)
            .map(|(k, n)| Ok((k.clone(), RatFunc::from_poly(n).div(&det)?.mul(&top))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ShiftedPoly { lambda: lambda.clone(), t, poly: SymPoly::from_coeffs(m, coeffs) })
    }
}

/// One-shot `(μ over λ)_{q,t}` over `Q(q)`.
pub fn gen_binomial_qfunc(mu: &Partition, lambda: &Partition, m: usize, t: &BigRational) -> Result<RatFunc> {
    BinomialSolver::new(t.clone())?.gen_binomial(mu, lambda, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::partitions::{leq_contain, part};

    fn q() -> RatFunc {
        RatFunc::q()
    }

    #[test]
    fn v_product_examples() {
        let (q, t) = (rat(1, 3), rat(1, 5));
        assert_eq!(v_products(&part(&[]), &q, &t).unwrap(), (int(1), int(1)));
        assert_eq!(v_products(&part(&[1]), &q, &t).unwrap(), (int(1) - &t, int(1) - &q));
        let (_, vp) = v_products(&part(&[2]), &q, &t).unwrap();
        assert_eq!(vp, (int(1) - &q * &q) * (int(1) - &q));
    }

    #[test]
    fn one_variable_product_form() {
        let (qq, t) = (rat(2, 7), rat(3, 5));
        let p = shifted_macdonald(&part(&[2]), 1, &qq, &t).unwrap();
        for x in [int(0), rat(1, 2), int(3)] {
            let w = (&x - int(1)) * (&x - &qq);
            assert_eq!(p.eval(&[x]).unwrap(), w);
        }
        let top = p.eval_lattice(&part(&[2]), &qq).unwrap();
        assert_eq!(top, &qq * (int(1) - &qq) * (int(1) - &qq * &qq));
        assert_eq!(p.eval_lattice(&part(&[1]), &qq).unwrap(), int(0));
    }

    #[test]
    fn two_variable_degree_one() {
        let (qq, t) = (rat(2, 7), rat(3, 5));
        let p = shifted_macdonald(&part(&[1]), 2, &qq, &t).unwrap();
        for (x1, x2) in [(int(0), int(0)), (rat(1, 2), int(3)), (int(-1), rat(5, 4))] {
            let want = &x1 + &x2 / &t - int(1) - t.recip();
            assert_eq!(p.eval(&[x1, x2]).unwrap(), want);
        }
    }

    #[test]
    fn binomial_examples_in_q() {
        let s = BinomialSolver::new(rat(1, 2)).unwrap();
        assert_eq!(s.gen_binomial(&part(&[2]), &part(&[1]), 1).unwrap(), q().add(&RatFunc::one()));
        let b = s.gen_binomial(&part(&[1, 1]), &part(&[1]), 2).unwrap();
        assert_eq!(b, RatFunc::from_i64(3));
        assert_eq!(s.gen_binomial(&part(&[2, 1]), &part(&[2, 1]), 2).unwrap(), RatFunc::one());
        // generic t: 1 + 1/t
        let t = rat(2, 9);
        let b = gen_binomial(&part(&[1, 1]), &part(&[1]), 2, &rat(1, 3), &t).unwrap();
        assert_eq!(b, int(1) + t.recip());
    }

    #[test]
    fn generic_and_fraction_free_routes_agree() {
        let t = rat(1, 3);
        let s = BinomialSolver::new(t.clone()).unwrap();
        for lambda in [part(&[1]), part(&[1, 1]), part(&[2]), part(&[2, 1])] {
            let p1 = s.shifted_macdonald(&lambda, 2).unwrap();
            let p2 = shifted_macdonald(&lambda, 2, &q(), &RatFunc::from_rational(t.clone())).unwrap();
            assert_eq!(p1.in_shifted_coords(), p2.in_shifted_coords());
            for mu in up_to_weight(4, 2) {
                let g = s.gen_binomial(&mu, &lambda, 2).unwrap();
                let qv = rat(2, 5);
                let direct = gen_binomial(&mu, &lambda, 2, &qv, &t).unwrap();
                assert_eq!(g.eval(&qv).unwrap(), direct, "{mu} over {lambda}");
            }
        }
    }

    #[test]
    fn degree_and_symmetry() {
        let (qq, t) = (rat(1, 3), rat(1, 5));
        for lambda in up_to_weight(3, 3) {
            let p = shifted_macdonald(&lambda, 3, &qq, &t).unwrap();
            assert_eq!(p.degree(), Some(lambda.weight()));
            let w = [rat(1, 2), rat(-3, 7), int(2)];
            let ws = [rat(-3, 7), rat(1, 2), int(2)];
            let sp = p.in_shifted_coords();
            assert_eq!(sp.eval(&w), sp.eval(&ws));
        }
    }

    #[test]
    fn vanishing_beyond_the_nodes() {
        let (qq, t) = (rat(1, 3), rat(1, 5));
        for m in 1..=3 {
            for lambda in up_to_weight(3, m) {
                let p = shifted_macdonald(&lambda, m, &qq, &t).unwrap();
                for mu in up_to_weight(6, m) {
                    if mu.weight() > lambda.weight() && !leq_contain(&lambda, &mu) {
                        assert_eq!(p.eval_lattice(&mu, &qq).unwrap(), int(0), "P*_{lambda} at {mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn cq_matches_binomials_on_the_lattice() {
        let (qq, t) = (rat(1, 3), rat(2, 5));
        for m in 1..=3 {
            for lambda in up_to_weight(3, m) {
                for mu in up_to_weight(4, m) {
                    let x = rho_point(&mu, m, &qq, &t).unwrap();
                    let a = cq_value(&lambda, &x, &qq, &t).unwrap();
                    let b = gen_binomial(&mu, &lambda, m, &qq, &t).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn one_variable_cq_closed_form() {
        let qq = rat(2, 7);
        let t = rat(1, 2);
        for l in 0..=4usize {
            for x in [rat(1, 3), int(2)] {
                let mut want = int(1);
                for i in 0..l {
                    let qi = num_traits::pow::Pow::pow(&qq, i as i32);
                    let ql = num_traits::pow::Pow::pow(&qq, l as i32);
                    want *= (&x - &qi) / (ql - &qi);
                }
                let got = cq_value(&Partition::rectangle(l, 1), &[x], &qq, &t).unwrap();
                assert_eq!(got, want);
            }
        }
        let c = cq_value(&part(&[1]), &[&qq * &qq], &qq, &t).unwrap();
        assert_eq!(c, int(1) + &qq);
    }

    #[test]
    fn stable_in_the_number_of_variables() {
        let s = BinomialSolver::new(rat(1, 2)).unwrap();
        for mu in up_to_weight(4, 2) {
            for lambda in up_to_weight(3, 2) {
                let a = s.gen_binomial(&mu, &lambda, 2).unwrap();
                let b = s.gen_binomial(&mu, &lambda, 3).unwrap();
                assert_eq!(a, b, "{mu} over {lambda}");
            }
        }
    }
}
