//! The non-Archimedean side: orbit measures on the Grassmannian of free
//! rank-`m` summands of `O^n`, the geometric, cellular and idempotent bases
//! of the finite-level Hecke algebra, and convolution.
//!
//! Orbits of pairs `(x, z)` at level `k` are indexed by the type of
//! `x ∩ z` in `(O/p^k)^m`, a partition in `Λ_m^k` (at most `m` parts, each at
//! most `k`). The diagonal orbit is the rectangle `k^m`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{bracket_factorial, gauss_factorials};
use crate::error::{Error, Result};
use crate::interp::BinomialSolver;
use crate::oracle::{grassmannian_with_budget, is_prime, DEFAULT_BUDGET};
use crate::partitions::{bar, enumerate, leq_contain, Partition};

/// `(n, m, p, r)`: free `O`-module of rank `n`, summands of rank `m`,
/// residue field of cardinality `p^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NonArchParams {
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub r: u32,
}

impl NonArchParams {
    pub fn new(n: usize, m: usize, p: u64, r: u32) -> Result<NonArchParams> {
        if m == 0 || 2 * m > n {
            return Err(Error::Config(format!("need 1 <= m <= n/2, got n={n}, m={m}")));
        }
        if !is_prime(p) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::Config("residue degree must be positive".into()));
        }
        Ok(NonArchParams { n, m, p, r })
    }

    /// Residue cardinality `p^r`.
    pub fn residue_size(&self) -> BigInt {
        BigInt::from(self.p).pow(self.r)
    }

    /// `p^{-r}`, the value at which brackets are evaluated.
    pub fn t(&self) -> BigRational {
        BigRational::new(BigInt::one(), self.residue_size())
    }

    /// `(α, β, γ) = r(n - 2m + 1, 1, 1)`.
    pub fn selberg_exponents(&self) -> (u32, u32, u32) {
        let r = self.r;
        (r * (self.n - 2 * self.m + 1) as u32, r, r)
    }

    /// `p^{-r e}`.
    fn tpow(&self, e: usize) -> BigRational {
        num_traits::pow::Pow::pow(&self.t(), e)
    }
}

fn check_orbit(lambda: &Partition, m: usize, k: usize) -> Result<()> {
    if lambda.len() > m || lambda.height() > k {
        return Err(Error::InvalidOrbit(format!("{lambda} is not in Λ_{m}^{k}")));
    }
    Ok(())
}

/// Level-1 orbit measure: the `q`-Johnson distribution of `dim(x ∩ z)`.
pub fn dh_level1(lambda: &Partition, pr: &NonArchParams) -> Result<BigRational> {
    check_orbit(lambda, pr.m, 1)?;
    let (n, m) = (pr.n, pr.m);
    let l = lambda.len();
    let t = pr.t();
    let num = gauss_factorials(m, l, &t)? * gauss_factorials(n - m, m - l, &t)?;
    Ok(num / gauss_factorials(n, m, &t)? * pr.tpow(l * (n - 2 * m + l)))
}

/// Ratio `dh_k(λ) / dh_{k-1}(bar(λ, k))`.
fn level_ratio(lambda: &Partition, k: usize, pr: &NonArchParams) -> Result<BigRational> {
    let conj = lambda.conjugate();
    let (prev, cur) = (conj.part(k - 1), conj.part(k));
    let d = pr.n - 2 * pr.m;
    let t = pr.t();
    Ok(gauss_factorials(prev, cur, &t)? * bracket_factorial(d + prev, &t) / bracket_factorial(d + cur, &t)
        * pr.tpow(cur * (d + cur)))
}

/// Level-`k` orbit measure on `Λ_m^k`.
pub fn dh_level(lambda: &Partition, k: usize, pr: &NonArchParams) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::InvalidOrbit("level must be at least 1".into()));
    }
    check_orbit(lambda, pr.m, k)?;
    let mut acc = dh_level1(&bar(lambda, 2), pr)?;
    for j in 2..=k {
        acc *= level_ratio(&bar(lambda, j + 1), j, pr)?;
    }
    Ok(acc)
}

/// Limiting orbit measure on all of `Λ_m`.
pub fn dh_infty(lambda: &Partition, pr: &NonArchParams) -> Result<BigRational> {
    if lambda.len() > pr.m {
        return Err(Error::InvalidOrbit(format!("{lambda} has more than {} parts", pr.m)));
    }
    let (n, m) = (pr.n, pr.m);
    let t = pr.t();
    let conj = lambda.conjugate();
    let c = conj.parts();
    // multinomial [m; m - λ'_1, λ'_1 - λ'_2, ...]
    let mut multi = bracket_factorial(m, &t);
    let mut prev = m;
    for &ci in c.iter().chain(std::iter::once(&0)) {
        multi /= bracket_factorial(prev - ci, &t);
        prev = ci;
    }
    let l1 = conj.part(1);
    let front = multi * bracket_factorial(n - m, &t)
        / (bracket_factorial(m - l1, &t) * bracket_factorial(n - 2 * m, &t))
        / gauss_factorials(n, m, &t)?;
    let e = lambda.conjugate_square_sum() + (n - 2 * m) * lambda.weight();
    Ok(front * pr.tpow(e))
}

/// `c_λ(p^{-μ}) = (μ over λ)` at `(q, t) = (0, p^{-r})`: the number of
/// submodules of type `λ` in a module of type `μ`.
pub fn cellular_value(lambda: &Partition, mu: &Partition, pr: &NonArchParams) -> Result<BigRational> {
    CellularTable::new(pr).value(lambda, mu)
}

/// Cached cellular values for one parameter set.
#[derive(Debug)]
pub struct CellularTable {
    solver: BinomialSolver,
}

impl CellularTable {
    pub fn new(pr: &NonArchParams) -> CellularTable {
        CellularTable { solver: BinomialSolver::residue(pr.p, pr.r) }
    }

    pub fn value(&self, lambda: &Partition, mu: &Partition) -> Result<BigRational> {
        if !leq_contain(lambda, mu) {
            return Ok(BigRational::zero());
        }
        self.solver.gen_binomial_at_zero(mu, lambda, mu.len().max(1))
    }
}

/// A function on the orbits `Λ_m^k`, i.e. an element of the level-`k` Hecke
/// algebra in the geometric basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    k: usize,
    m: usize,
    values: BTreeMap<Partition, BigRational>,
}

impl HeckeElement {
    pub fn zero(m: usize, k: usize) -> HeckeElement {
        let values = enumerate(m, k).into_iter().map(|l| (l, BigRational::zero())).collect();
        HeckeElement { k, m, values }
    }

    pub fn from_fn(m: usize, k: usize, mut f: impl FnMut(&Partition) -> Result<BigRational>) -> Result<HeckeElement> {
        let values = enumerate(m, k).into_iter().map(|l| Ok((l.clone(), f(&l)?))).collect::<Result<_>>()?;
        Ok(HeckeElement { k, m, values })
    }

    /// Indicator `g_λ` of one orbit.
    pub fn geometric(lambda: &Partition, m: usize, k: usize) -> Result<HeckeElement> {
        check_orbit(lambda, m, k)?;
        HeckeElement::from_fn(m, k, |mu| Ok(if mu == lambda { BigRational::one() } else { BigRational::zero() }))
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn value(&self, mu: &Partition) -> Option<&BigRational> {
        self.values.get(mu)
    }

    pub fn values(&self) -> &BTreeMap<Partition, BigRational> {
        &self.values
    }

    /// Value on the diagonal orbit `k^m`.
    pub fn at_origin(&self) -> &BigRational {
        &self.values[&Partition::rectangle(self.k, self.m)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    fn zip(&self, o: &HeckeElement, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> HeckeElement {
        assert_eq!((self.k, self.m), (o.k, o.m), "elements live at different levels");
        let values = self.values.iter().map(|(l, a)| (l.clone(), f(a, &o.values[l]))).collect();
        HeckeElement { k: self.k, m: self.m, values }
    }

    pub fn add(&self, o: &HeckeElement) -> HeckeElement {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &HeckeElement) -> HeckeElement {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &BigRational) -> HeckeElement {
        let values = self.values.iter().map(|(l, a)| (l.clone(), a * c)).collect();
        HeckeElement { k: self.k, m: self.m, values }
    }
}

/// `⟨f, g⟩_k = Σ_μ f(μ) g(μ) dh_k(μ)`.
pub fn inner_product(f: &HeckeElement, g: &HeckeElement, pr: &NonArchParams) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (mu, a) in &f.values {
        acc += a * &g.values[mu] * dh_level(mu, f.k, pr)?;
    }
    Ok(acc)
}

/// The cellular basis `{c_λ : λ ∈ Λ_m^k}` in graded-lex order.
pub fn cellular_basis(pr: &NonArchParams, k: usize) -> Result<Vec<(Partition, HeckeElement)>> {
    let table = CellularTable::new(pr);
    enumerate(pr.m, k)
        .into_iter()
        .map(|l| {
            let c = HeckeElement::from_fn(pr.m, k, |mu| table.value(&l, mu))?;
            Ok((l, c))
        })
        .collect()
}

/// Minimal idempotents `e_λ`, `λ ∈ Λ_m^k`, in graded-lex order.
///
/// Gram-Schmidt over the cellular basis, then `ẽ ↦ ẽ · ẽ(0) / ‖ẽ‖²`.
pub fn idempotents(pr: &NonArchParams, k: usize) -> Result<Vec<(Partition, HeckeElement)>> {
    if k == 0 {
        return Err(Error::InvalidOrbit("level must be at least 1".into()));
    }
    let basis = cellular_basis(pr, k)?;
    let dh: BTreeMap<Partition, BigRational> =
        enumerate(pr.m, k).into_iter().map(|l| Ok((l.clone(), dh_level(&l, k, pr)?))).collect::<Result<_>>()?;
    let ip = |f: &HeckeElement, g: &HeckeElement| -> BigRational {
        f.values.iter().map(|(mu, a)| a * &g.values[mu] * &dh[mu]).sum()
    };
    let mut ortho: Vec<(HeckeElement, BigRational)> = Vec::new();
    let mut out = Vec::with_capacity(basis.len());
    for (lambda, c) in basis {
        let mut e = c.clone();
        for (f, nf) in &ortho {
            e = e.sub(&f.scale(&(ip(&c, f) / nf)));
        }
        let norm = ip(&e, &e);
        if norm.is_zero() {
            return Err(Error::DegenerateGram(format!("cellular vector {lambda} is dependent on its predecessors")));
        }
        let origin = e.at_origin().clone();
        if origin.is_zero() {
            return Err(Error::DegenerateNormalization(format!("e_{lambda} vanishes at the origin")));
        }
        out.push((lambda, e.scale(&(&origin / &norm))));
        ortho.push((e, norm));
    }
    Ok(out)
}

/// Structure constants of the level-`k` Hecke algebra, counted on the
/// Grassmannian (requires `r = 1`).
#[derive(Clone, Debug)]
pub struct HeckeAlgebra {
    m: usize,
    k: usize,
    size: u64,
    // for each target orbit μ: (λ, ν) -> #{w : type(x∩w)=λ, type(w∩z)=ν}
    table: BTreeMap<Partition, BTreeMap<(Partition, Partition), u64>>,
}

impl HeckeAlgebra {
    pub fn new(pr: &NonArchParams, k: usize) -> Result<HeckeAlgebra> {
        HeckeAlgebra::with_budget(pr, k, DEFAULT_BUDGET)
    }

    pub fn with_budget(pr: &NonArchParams, k: usize, budget: u128) -> Result<HeckeAlgebra> {
        if pr.r != 1 {
            return Err(Error::Config("structure constants are counted over Z/p^k, so r must be 1".into()));
        }
        let g = grassmannian_with_budget(pr.n, pr.m, pr.p, k, budget)?;
        Ok(HeckeAlgebra { m: pr.m, k, size: g.len() as u64, table: g.structure_constants() })
    }

    /// `|X|`, the number of points of the Grassmannian at this level.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `1_k = |X| g_{k^m}`.
    pub fn unit(&self) -> HeckeElement {
        HeckeElement::geometric(&Partition::rectangle(self.k, self.m), self.m, self.k)
            .expect("diagonal orbit")
            .scale(&BigRational::from_integer(self.size.into()))
    }

    /// `(f * g)(x, z) = |X|^{-1} Σ_w f(x, w) g(w, z)`.
    pub fn convolve(&self, f: &HeckeElement, g: &HeckeElement) -> HeckeElement {
        assert_eq!((f.k, f.m), (self.k, self.m), "element at the wrong level");
        assert_eq!((g.k, g.m), (self.k, self.m), "element at the wrong level");
        let inv = BigRational::new(BigInt::one(), self.size.into());
        let values = self
            .table
            .iter()
            .map(|(mu, tab)| {
                let s: BigRational = tab
                    .iter()
                    .map(|((l, n), c)| &f.values[l] * &g.values[n] * BigRational::from_integer((*c).into()))
                    .sum();
                (mu.clone(), s * &inv)
            })
            .collect();
        HeckeElement { k: self.k, m: self.m, values }
    }
}

/// One-shot convolution; prefer [`HeckeAlgebra`] for repeated products.
pub fn convolve(f: &HeckeElement, g: &HeckeElement, pr: &NonArchParams) -> Result<HeckeElement> {
    if f.k != g.k {
        return Err(Error::InvalidOrbit("convolution of elements at different levels".into()));
    }
    Ok(HeckeAlgebra::new(pr, f.k)?.convolve(f, g))
}

/// `dim U^K_λ` for `m = 1`.
pub fn dims_1d(lambda: usize, pr: &NonArchParams) -> Result<BigRational> {
    if pr.m != 1 {
        return Err(Error::Config("the one-dimensional formula needs m = 1".into()));
    }
    let t = pr.t();
    let one = BigRational::one();
    let up = |e: usize| BigRational::from_integer(pr.residue_size().pow(e as u32));
    let n = pr.n;
    Ok(match lambda {
        0 => one,
        1 => (&one - pr.tpow(n - 1)) / (&one - &t) * up(n - 1),
        l => (&one - pr.tpow(n)) * (&one - pr.tpow(n - 1)) / (&one - &t) * up((n - 1) * l),
    })
}

/// `|P^{n-1}(O/p^k)|` with residue field of size `p^r`.
pub fn proj_count(n: usize, p: u64, r: u32, k: usize) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let q = BigInt::from(p).pow(r);
    let t = BigRational::new(BigInt::one(), q.clone());
    let one = BigRational::one();
    (&one - num_traits::pow::Pow::pow(&t, n)) / (&one - &t) * BigRational::from_integer(q.pow(((n - 1) * k) as u32))
}
