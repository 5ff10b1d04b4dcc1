//! Symmetric polynomials in the monomial basis.

use std::collections::BTreeMap;

use crate::arith::linalg::solve;
use crate::arith::{Field, Real};
use crate::error::{Error, Result};
use crate::partitions::{up_to_weight, Partition};

/// Distinct rearrangements of `v`, in lexicographic order.
pub fn distinct_permutations(v: &[usize]) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // Narayana's next-permutation walk visits each multiset arrangement once.
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

/// `m_ν(x)` for the monomial symmetric polynomial with exponent multiset `ν`.
pub fn monomial_value<F: Field>(nu: &Partition, x: &[F]) -> F {
    let m = x.len();
    let one = x.first().map(|a| a.one_like()).expect("at least one variable");
    if nu.len() > m {
        return one.zero_like();
    }
    let mut acc = one.zero_like();
    for perm in distinct_permutations(&nu.padded(m)) {
        let mut term = one.clone();
        for (xi, &e) in x.iter().zip(&perm) {
            if e > 0 {
                term = term.fmul(&xi.fpow(e as i64).expect("non-negative power"));
            }
        }
        acc = acc.fadd(&term);
    }
    acc
}

/// A symmetric polynomial in `m` variables, `Σ c_ν m_ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPoly<F> {
    m: usize,
    coeffs: BTreeMap<Partition, F>,
}

impl<F: Field> SymPoly<F> {
    pub fn zero(m: usize) -> SymPoly<F> {
        SymPoly { m, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(m: usize, coeffs: impl IntoIterator<Item = (Partition, F)>) -> SymPoly<F> {
        let coeffs = coeffs.into_iter().filter(|(k, v)| k.len() <= m && !v.is_zero()).collect();
        SymPoly { m, coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, F> {
        &self.coeffs
    }

    pub fn coeff(&self, nu: &Partition) -> Option<&F> {
        self.coeffs.get(nu)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|k| k.weight()).max()
    }

    pub fn eval(&self, x: &[F]) -> F {
        assert_eq!(x.len(), self.m, "point has the wrong number of coordinates");
        let mut acc = x[0].zero_like();
        for (nu, c) in &self.coeffs {
            acc = acc.fadd(&c.fmul(&monomial_value(nu, x)));
        }
        acc
    }

    /// Value at the origin, i.e. the constant term.
    pub fn constant_term(&self) -> Option<&F> {
        self.coeffs.get(&Partition::empty())
    }

    /// Expansion into ordinary monomials keyed by exponent vectors.
    pub fn expand(&self) -> BTreeMap<Vec<usize>, F> {
        let mut out = BTreeMap::new();
        for (nu, c) in &self.coeffs {
            for perm in distinct_permutations(&nu.padded(self.m)) {
                out.insert(perm, c.clone());
            }
        }
        out
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> SymPoly<G> {
        SymPoly::from_coeffs(self.m, self.coeffs.iter().map(|(k, v)| (k.clone(), f(v))))
    }
}

/// A finitely supported measure: weighted points in `R^m`.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    m: usize,
    points: Vec<Vec<Real>>,
    weights: Vec<Real>,
}

impl DiscreteMeasure {
    pub fn new(m: usize, points: Vec<Vec<Real>>, weights: Vec<Real>) -> DiscreteMeasure {
        assert_eq!(points.len(), weights.len());
        assert!(points.iter().all(|x| x.len() == m));
        DiscreteMeasure { m, points, weights }
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn precision(&self) -> usize {
        self.weights.first().map(|w| w.precision()).unwrap_or(crate::arith::real::DEFAULT_PRECISION)
    }

    fn pair(&self, fv: &[Real], gv: &[Real]) -> Real {
        let mut acc = Real::zero(self.precision());
        for ((a, b), w) in fv.iter().zip(gv).zip(&self.weights) {
            acc = &acc + &(&(a * b) * w);
        }
        acc
    }

    pub fn total(&self) -> Real {
        let mut acc = Real::zero(self.precision());
        for w in &self.weights {
            acc = &acc + w;
        }
        acc
    }

    /// `∫ f g`.
    pub fn inner_product(&self, f: &SymPoly<Real>, g: &SymPoly<Real>) -> Real {
        let fv: Vec<Real> = self.points.iter().map(|x| f.eval(x)).collect();
        let gv: Vec<Real> = self.points.iter().map(|x| g.eval(x)).collect();
        self.pair(&fv, &gv)
    }

    /// `∫ m_ν` for each `ν` in `basis`.
    pub fn moments(&self, basis: &[Partition]) -> Vec<Real> {
        let one: Vec<Real> = vec![Real::one(self.precision()); self.len()];
        basis.iter().map(|nu| {
            let v: Vec<Real> = self.points.iter().map(|x| monomial_value(nu, x)).collect();
            self.pair(&v, &one)
        }).collect()
    }

    /// Orthogonalizes `m_λ` against every `m_ν` with `ν < λ` in graded-lex
    /// order and rescales by `E(0) / ‖E‖²`, so that `‖E‖² = E(0)`.
    pub fn flag_orthogonal(&self, lambda: &Partition) -> Result<SymPoly<Real>> {
        let m = self.m;
        if lambda.len() > m {
            return Err(Error::InvalidRange(format!("{lambda} has more than {m} parts")));
        }
        let prec = self.precision();
        let basis: Vec<Partition> = up_to_weight(lambda.weight(), m).into_iter().filter(|nu| nu <= lambda).collect();
        let vals: Vec<Vec<Real>> =
            basis.iter().map(|nu| self.points.iter().map(|x| monomial_value(nu, x)).collect()).collect();
        let top = basis.len() - 1;
        let against_top: Vec<Real> = (0..=top).map(|i| self.pair(&vals[i], &vals[top])).collect();
        // E = m_λ + Σ_{ν<λ} c_ν m_ν with ⟨E, m_κ⟩ = 0 for κ < λ
        let mut coeffs = Vec::with_capacity(top + 1);
        if top > 0 {
            let a: Vec<Vec<Real>> = (0..top).map(|i| (0..top).map(|j| self.pair(&vals[i], &vals[j])).collect()).collect();
            let b: Vec<Vec<Real>> = (0..top).map(|i| vec![-against_top[i].clone()]).collect();
            let x = solve(a, b)
                .ok_or_else(|| Error::DegenerateNormalization(format!("Gram matrix below {lambda} is singular")))?;
            coeffs.extend(x.into_iter().map(|r| r[0].clone()));
        }
        coeffs.push(Real::one(prec));
        let origin = if lambda.is_empty() { Real::one(prec) } else { coeffs[0].clone() };
        if origin.is_zero() {
            return Err(Error::DegenerateNormalization(format!("E_{lambda} vanishes at the origin")));
        }
        // ‖E‖² = ⟨E, m_λ⟩ since E is orthogonal to the lower flag
        let mut norm = Real::zero(prec);
        for (c, g) in coeffs.iter().zip(&against_top) {
            norm = &norm + &(c * g);
        }
        let s = origin.checked_div(&norm)?;
        Ok(SymPoly::from_coeffs(m, basis.into_iter().zip(coeffs.iter().map(|c| c * &s))))
    }
}
