//! Brute-force ground truth over the finite rings `Z/p^k`.
//!
//! Everything here enumerates elements explicitly, so it is only usable on
//! small modules; the enumeration budget guards against accidental blowup.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Default cap on the number of enumerated elements or matrices.
pub const DEFAULT_BUDGET: u128 = 1 << 16;

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

fn pow_u128(p: u64, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(p as u128))
}

/// Checks that `p` is prime.
pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Bitset over module elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet {
    bits: Vec<u64>,
}

impl ElemSet {
    fn new(n: usize) -> ElemSet {
        ElemSet { bits: vec![0; n.div_ceil(64)] }
    }

    fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x / 64, x % 64);
        let was = self.bits[w] >> b & 1 == 1;
        self.bits[w] |= 1 << b;
        !was
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &ElemSet) -> ElemSet {
        ElemSet { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }
}

/// `⊕ Z/p^{λ_i}` with elements encoded as mixed-radix integers.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    p: u64,
    lambda: Partition,
    moduli: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
    /// Smallest `e` with `p^e x = 0`.
    order_exp: Vec<u8>,
    /// Index of `p x`.
    times_p: Vec<u32>,
}

impl FiniteModule {
    pub fn new(lambda: &Partition, p: u64, budget: u128) -> Result<FiniteModule> {
        if !is_prime(p) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        check_budget(pow_u128(p, lambda.weight()), budget)?;
        let moduli: Vec<u64> = lambda.parts().iter().map(|&e| p.pow(e as u32)).collect();
        let mut strides = Vec::with_capacity(moduli.len());
        let mut size = 1usize;
        for &m in &moduli {
            strides.push(size);
            size *= m as usize;
        }
        let mut module = FiniteModule {
            p,
            lambda: lambda.clone(),
            moduli,
            strides,
            size,
            order_exp: Vec::new(),
            times_p: Vec::new(),
        };
        module.times_p = (0..size).map(|x| module.scale(x, p) as u32).collect();
        let mut order_exp = vec![0u8; size];
        for (x, slot) in order_exp.iter_mut().enumerate() {
            let mut y = x;
            let mut e = 0u8;
            while y != 0 {
                y = module.times_p[y] as usize;
                e += 1;
            }
            *slot = e;
        }
        module.order_exp = order_exp;
        Ok(module)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn cardinality(&self) -> usize {
        self.size
    }

    pub fn module_type(&self) -> &Partition {
        &self.lambda
    }

    pub fn decode(&self, x: usize) -> Vec<u64> {
        self.moduli.iter().zip(&self.strides).map(|(&m, &s)| ((x / s) as u64) % m).collect()
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        v.iter().zip(&self.moduli).zip(&self.strides).map(|((&a, &m), &s)| (a % m) as usize * s).sum()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let m = m as usize;
            let da = (a / s) % m;
            let db = (b / s) % m;
            out += ((da + db) % m) * s;
        }
        out
    }

    pub fn scale(&self, a: usize, c: u64) -> usize {
        let mut out = 0;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let da = ((a / s) as u64) % m;
            out += ((da * (c % m)) % m) as usize * s;
        }
        out
    }

    /// Type of a submodule from its element-order statistics `|H[p^j]|`.
    pub fn type_of(&self, h: &ElemSet) -> Partition {
        let mut hist = [0usize; 64];
        for x in h.iter() {
            hist[self.order_exp[x] as usize] += 1;
        }
        self.type_from_counts(&hist)
    }

    fn type_from_counts(&self, hist: &[usize; 64]) -> Partition {
        let mut cols = Vec::new();
        let mut prev = hist[0];
        let mut cum = hist[0];
        for &c in &hist[1..] {
            cum += c;
            if cum == prev {
                break;
            }
            cols.push(log_p(cum / prev, self.p));
            prev = cum;
        }
        Partition::from_conjugate(&cols).expect("order statistics give a partition")
    }

    /// Type of the quotient `M / H` from `|{x : p^j x ∈ H}| / |H|`.
    pub fn cotype_of(&self, h: &ElemSet) -> Partition {
        let hsize = h.len();
        let mut cur: Vec<u32> = (0..self.size as u32).collect();
        let mut cols = Vec::new();
        let mut prev = 1usize;
        for _ in 0..=self.lambda.height() {
            cur.iter_mut().for_each(|x| *x = self.times_p[*x as usize]);
            // after j steps cur[x] = p^j x
            let c = cur.iter().filter(|&&y| h.contains(y as usize)).count() / hsize;
            if c == prev {
                break;
            }
            cols.push(log_p(c / prev, self.p));
            prev = c;
        }
        Partition::from_conjugate(&cols).expect("order statistics give a partition")
    }

    /// Cyclic submodule generated by `g`.
    pub fn cyclic(&self, g: usize) -> ElemSet {
        let mut s = ElemSet::new(self.size);
        let mut x = 0usize;
        loop {
            s.insert(x);
            x = self.add(x, g);
            if x == 0 {
                break;
            }
        }
        s
    }

    /// Sum of two submodules.
    pub fn join(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut s = ElemSet::new(self.size);
        let bs: Vec<usize> = b.iter().collect();
        for x in a.iter() {
            for &y in &bs {
                s.insert(self.add(x, y));
            }
        }
        s
    }

    /// Every submodule, each exactly once, sorted by element set.
    pub fn submodules(&self) -> Vec<ElemSet> {
        let mut cyclic: BTreeSet<ElemSet> = BTreeSet::new();
        for g in 0..self.size {
            cyclic.insert(self.cyclic(g));
        }
        let cyclic: Vec<ElemSet> = cyclic.into_iter().collect();
        let mut seen: HashSet<ElemSet> = cyclic.iter().cloned().collect();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let next: Vec<ElemSet> = frontier
                .par_iter()
                .flat_map_iter(|h| {
                    cyclic
                        .iter()
                        .filter(|c| !c.is_subset(h))
                        .map(|c| self.join(h, c))
                        .collect::<Vec<_>>()
                })
                .collect();
            frontier = Vec::new();
            for s in next {
                if seen.insert(s.clone()) {
                    frontier.push(s);
                }
            }
        }
        let mut all: Vec<ElemSet> = seen.into_iter().collect();
        all.sort();
        all
    }

    /// Number of elements killed by `p^e`.
    pub fn torsion_count(&self, e: usize) -> usize {
        self.order_exp.iter().filter(|&&o| (o as usize) <= e).count()
    }
}

fn log_p(mut x: usize, p: u64) -> usize {
    let mut e = 0;
    while x > 1 {
        debug_assert_eq!(x % p as usize, 0);
        x /= p as usize;
        e += 1;
    }
    e
}

/// Counts of submodules of a type-`μ` module by `(type, cotype)`.
pub fn hall_table(mu: &Partition, p: u64, budget: u128) -> Result<BTreeMap<(Partition, Partition), u64>> {
    let m = FiniteModule::new(mu, p, budget)?;
    let subs = m.submodules();
    let classified: Vec<(Partition, Partition)> =
        subs.par_iter().map(|h| (m.type_of(h), m.cotype_of(h))).collect();
    let mut out = BTreeMap::new();
    for key in classified {
        *out.entry(key).or_insert(0) += 1;
    }
    Ok(out)
}

/// Number of submodules of type `λ` in a module of type `μ`.
pub fn count_submodules(mu: &Partition, lambda: &Partition, p: u64) -> Result<u64> {
    count_submodules_with_budget(mu, lambda, p, DEFAULT_BUDGET)
}

pub fn count_submodules_with_budget(mu: &Partition, lambda: &Partition, p: u64, budget: u128) -> Result<u64> {
    Ok(hall_table(mu, p, budget)?.iter().filter(|((t, _), _)| t == lambda).map(|(_, c)| c).sum())
}

/// Number of submodules of type `λ` and cotype `ν` in a module of type `μ`.
pub fn count_hall(mu: &Partition, lambda: &Partition, nu: &Partition, p: u64) -> Result<u64> {
    Ok(hall_table(mu, p, DEFAULT_BUDGET)?.get(&(lambda.clone(), nu.clone())).copied().unwrap_or(0))
}

/// `|End(M)|` for `M` of type `λ`, counted as admissible images of the
/// standard generators: the `i`-th may go to any element killed by `p^{λ_i}`.
pub fn endomorphism_count(lambda: &Partition, p: u64) -> Result<BigInt> {
    let m = FiniteModule::new(lambda, p, DEFAULT_BUDGET)?;
    Ok(lambda.parts().iter().map(|&e| BigInt::from(m.torsion_count(e))).product())
}

/// Free rank-`m` submodules of `(Z/p^k)^n` as canonical generator matrices.
#[derive(Clone, Debug)]
pub struct FreeSubmoduleSet {
    pub p: u64,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    ambient: FiniteModule,
    points: Vec<Vec<Vec<u64>>>,
    elems: Vec<ElemSet>,
}

/// Enumerates the Grassmannian of free rank-`m` submodules of `(Z/p^k)^n`.
pub fn grassmannian(n: usize, m: usize, p: u64, k: usize) -> Result<FreeSubmoduleSet> {
    grassmannian_with_budget(n, m, p, k, DEFAULT_BUDGET)
}

pub fn grassmannian_with_budget(n: usize, m: usize, p: u64, k: usize, budget: u128) -> Result<FreeSubmoduleSet> {
    if m > n {
        return Err(Error::Config(format!("rank {m} exceeds dimension {n}")));
    }
    if k == 0 {
        return Err(Error::Config("level k must be at least 1".into()));
    }
    let raw = pow_u128(p, k * m * n);
    check_budget(raw, budget)?;
    let ambient = FiniteModule::new(&Partition::rectangle(k, n), p, budget)?;
    let modulus = p.pow(k as u32);
    let total = raw as u64;
    let found: BTreeSet<Vec<Vec<u64>>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut c = code;
            let mut a = vec![vec![0u64; n]; m];
            for row in a.iter_mut() {
                for x in row.iter_mut() {
                    *x = c % modulus;
                    c /= modulus;
                }
            }
            canonical_form(&a, p, modulus)
        })
        .collect();
    let points: Vec<Vec<Vec<u64>>> = found.into_iter().collect();
    let elems = points.par_iter().map(|a| span(&ambient, a, modulus)).collect();
    Ok(FreeSubmoduleSet { p, k, n, m, ambient, points, elems })
}

fn inv_mod(a: u64, modulus: u64) -> Option<u64> {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (modulus as i128, a as i128 % modulus as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    (r == 1).then(|| t.rem_euclid(modulus as i128) as u64)
}

/// `B^{-1} A` where `B` is the block of `A` on its mod-`p` pivot columns;
/// `None` unless `A` has full rank modulo `p`.
fn canonical_form(a: &[Vec<u64>], p: u64, modulus: u64) -> Option<Vec<Vec<u64>>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    // Pivot columns of the reduced echelon form mod p.
    let mut red: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let mut pivots = Vec::with_capacity(m);
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(r) = (row..m).find(|&r| red[r][col] != 0) else {
            continue;
        };
        red.swap(row, r);
        let inv = inv_mod(red[row][col], p).unwrap();
        for x in red[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r2 in 0..m {
            if r2 != row && red[r2][col] != 0 {
                let f = red[r2][col];
                for c in 0..n {
                    red[r2][c] = (red[r2][c] + p * p - f * red[row][c] % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() < m {
        return None;
    }
    // Row-reduce A over Z/p^k so that the pivot block becomes the identity.
    let mut w: Vec<Vec<u64>> = a.to_vec();
    for (i, &col) in pivots.iter().enumerate() {
        let r = (i..m).find(|&r| w[r][col] % p != 0)?;
        w.swap(i, r);
        let inv = inv_mod(w[i][col], modulus)?;
        for x in w[i].iter_mut() {
            *x = ((*x as u128 * inv as u128) % modulus as u128) as u64;
        }
        for r2 in 0..m {
            if r2 != i && w[r2][col] != 0 {
                let f = w[r2][col] as u128;
                for c in 0..n {
                    let sub = (f * w[i][c] as u128) % modulus as u128;
                    w[r2][c] = ((w[r2][c] as u128 + modulus as u128 - sub) % modulus as u128) as u64;
                }
            }
        }
    }
    Some(w)
}

fn span(ambient: &FiniteModule, a: &[Vec<u64>], modulus: u64) -> ElemSet {
    let m = a.len();
    let n = ambient.moduli().len();
    let mut s = ElemSet::new(ambient.cardinality());
    let total = (modulus as usize).pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut v = vec![0u64; n];
        for row in a {
            let coef = (c % modulus as usize) as u64;
            c /= modulus as usize;
            for (x, &r) in v.iter_mut().zip(row) {
                *x = (*x + coef * r) % modulus;
            }
        }
        s.insert(ambient.encode(&v));
    }
    s
}

impl FreeSubmoduleSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Vec<u64>>] {
        &self.points
    }

    /// Type of `y ∩ z` for point indices `y`, `z`.
    pub fn intersection_type(&self, y: usize, z: usize) -> Partition {
        self.ambient.type_of(&self.elems[y].intersect(&self.elems[z]))
    }

    /// Intersection types of every point against point `y`.
    pub fn types_against(&self, y: usize) -> Vec<Partition> {
        (0..self.len()).into_par_iter().map(|z| self.intersection_type(y, z)).collect()
    }

    /// Fraction of points `z` in each intersection-type orbit relative to a
    /// fixed point.
    pub fn orbit_measure(&self) -> BTreeMap<Partition, BigRational> {
        let mut counts: BTreeMap<Partition, u64> = BTreeMap::new();
        for t in self.types_against(0) {
            *counts.entry(t).or_insert(0) += 1;
        }
        let total = BigInt::from(self.len());
        counts
            .into_iter()
            .map(|(k, c)| (k, BigRational::new(BigInt::from(c), total.clone())))
            .collect()
    }

    /// For each orbit `μ` (represented by a pair `(x, z)` with `x` the first
    /// point), the number of `w` with `type(x ∩ w) = λ` and `type(w ∩ z) = ν`.
    pub fn structure_constants(&self) -> BTreeMap<Partition, BTreeMap<(Partition, Partition), u64>> {
        let tx = self.types_against(0);
        let mut reps: BTreeMap<Partition, usize> = BTreeMap::new();
        for (z, t) in tx.iter().enumerate() {
            reps.entry(t.clone()).or_insert(z);
        }
        reps.into_iter()
            .map(|(mu, z)| {
                let tz = self.types_against(z);
                let mut table = BTreeMap::new();
                for w in 0..self.len() {
                    *table.entry((tx[w].clone(), tz[w].clone())).or_insert(0) += 1;
                }
                (mu, table)
            })
            .collect()
    }
}

/// `orbit_measure` for the Grassmannian `(n, m, p, k)`.
pub fn orbit_measure(n: usize, m: usize, p: u64, k: usize) -> Result<BTreeMap<Partition, BigRational>> {
    Ok(grassmannian(n, m, p, k)?.orbit_measure())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gauss_factorials, int, rat};
    use crate::partitions::{of_weight, part, up_to_weight};

    #[test]
    fn module_type_recovered() {
        for l in up_to_weight(5, 5) {
            for p in [2u64, 3] {
                let m = FiniteModule::new(&l, p, DEFAULT_BUDGET).unwrap();
                let mut all = ElemSet::new(m.cardinality());
                (0..m.cardinality()).for_each(|x| {
                    all.insert(x);
                });
                assert_eq!(m.cardinality() as u128, pow_u128(p, l.weight()));
                assert_eq!(m.type_of(&all), l);
                assert_eq!(m.cotype_of(&all), Partition::empty());
            }
        }
    }

    #[test]
    fn submodule_examples() {
        assert_eq!(count_submodules(&part(&[1, 1]), &part(&[1]), 2).unwrap(), 3);
        assert_eq!(count_submodules(&part(&[2]), &part(&[1]), 3).unwrap(), 1);
        assert_eq!(count_submodules(&part(&[2, 1]), &part(&[]), 5).unwrap(), 1);
        assert_eq!(count_submodules(&part(&[2, 1]), &part(&[1]), 2).unwrap(), 3);
        assert_eq!(count_submodules(&part(&[1]), &part(&[2]), 2).unwrap(), 0);
    }

    #[test]
    fn hall_examples() {
        assert_eq!(count_hall(&part(&[1, 1]), &part(&[1]), &part(&[1]), 2).unwrap(), 3);
        assert_eq!(count_hall(&part(&[2]), &part(&[2]), &part(&[]), 7).unwrap(), 1);
        assert_eq!(count_hall(&part(&[2]), &part(&[1]), &part(&[1]), 2).unwrap(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let e = count_submodules_with_budget(&part(&[3, 3]), &part(&[1]), 3, 100);
        assert!(matches!(e, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn elementary_counts_are_gauss_binomials() {
        for p in [2u64, 3] {
            for m in 0..=4 {
                for j in 0..=m {
                    let c = count_submodules(&Partition::rectangle(1, m), &Partition::rectangle(1, j), p).unwrap();
                    assert_eq!(int(c as i64), gauss_factorials(m, j, &int(p as i64)).unwrap());
                }
            }
        }
    }

    #[test]
    fn types_and_quotient_types_are_equinumerous() {
        for w in 0..=5 {
            for mu in of_weight(w, w) {
                for p in [2u64, 3] {
                    let t = hall_table(&mu, p, DEFAULT_BUDGET).unwrap();
                    let mut by_type: BTreeMap<Partition, u64> = BTreeMap::new();
                    let mut by_cotype: BTreeMap<Partition, u64> = BTreeMap::new();
                    for ((a, b), c) in &t {
                        *by_type.entry(a.clone()).or_default() += c;
                        *by_cotype.entry(b.clone()).or_default() += c;
                    }
                    assert_eq!(by_type, by_cotype, "mu = {mu}, p = {p}");
                }
            }
        }
    }

    #[test]
    fn endomorphism_counts() {
        for l in up_to_weight(5, 5) {
            for p in [2u64, 3] {
                let e = endomorphism_count(&l, p).unwrap();
                let a = BigInt::from(p).pow(l.conjugate_square_sum() as u32);
                let s: usize = l.parts().iter().enumerate().map(|(j, &x)| x * (2 * j + 1)).sum();
                assert_eq!(e, a);
                assert_eq!(e, BigInt::from(p).pow(s as u32));
            }
        }
    }

    #[test]
    fn grassmannian_sizes() {
        assert_eq!(grassmannian(2, 1, 2, 1).unwrap().len(), 3);
        assert_eq!(grassmannian(4, 2, 2, 1).unwrap().len(), 35);
        assert_eq!(grassmannian(2, 1, 2, 2).unwrap().len(), 6);
        assert!(matches!(grassmannian(6, 3, 3, 2), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn orbit_measures() {
        let g = grassmannian(2, 1, 2, 2).unwrap();
        assert_eq!(g.intersection_type(0, 0), part(&[2]));
        let om = g.orbit_measure();
        assert_eq!(om[&part(&[])], rat(4, 6));
        assert_eq!(om[&part(&[1])], rat(1, 6));
        assert_eq!(om[&part(&[2])], rat(1, 6));
        let om = orbit_measure(4, 2, 2, 1).unwrap();
        assert_eq!(om[&part(&[])], rat(16, 35));
        assert_eq!(om[&part(&[1])], rat(18, 35));
        assert_eq!(om[&part(&[1, 1])], rat(1, 35));
        let total: BigRational = om.values().sum();
        assert_eq!(total, int(1));
    }

    #[test]
    fn structure_constants_count_all_points() {
        let g = grassmannian(4, 2, 2, 1).unwrap();
        let sc = g.structure_constants();
        assert_eq!(sc.len(), 3);
        for table in sc.values() {
            assert_eq!(table.values().sum::<u64>(), 35);
        }
    }
}
