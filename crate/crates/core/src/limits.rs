//! The two degenerations of the `q`-Grassmannian picture and drivers that
//! check them numerically or exactly.
//!
//! Non-Archimedean: `(a, b, t) = (p^{-α}, p^{-β}, p^{-γ})`, `q → 0`, atoms
//! `q^μ p^{-γρ}` standing for the orbits `p^{-μ}`.
//! Archimedean: `(a, b, t) = (q^{α/2}, q^{β/2}, q^{γ/2})`, `q → 1`, with
//! `x` identified with `u`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arch::{dims_arch, gen_jacobi, jacobi_1d, ArchParams, GrassField, QuadratureSpec};
use crate::arith::real::ratio_to_f64;
use crate::arith::{gauss_factorials, Real};
use crate::error::{Error, Result};
use crate::interp::BinomialSolver;
use crate::nonarch::{dh_infty, dims_1d, idempotents, NonArchParams};
use crate::oracle::count_submodules;
use crate::partitions::{leq_contain, up_to_weight, Partition};
use crate::qgrass::{qdim_1d, qjacobi_1d, F2Exponent, QJacobiFamily, QParams, QSelberg};
use crate::sympoly::SymPoly;

/// Working precision of the numeric drivers, in bits.
pub const LIMIT_PRECISION: usize = 192;

/// `{10^-1, 10^-2, 10^-3, 10^-4}`.
pub fn default_non_arch_sequence() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3, 1e-4]
}

/// `{1 - 2^-j : j = 3..10}`.
pub fn default_arch_sequence() -> Vec<f64> {
    (3..=10).map(|j| 1.0 - 2f64.powi(-j)).collect()
}

/// Non-Archimedean substitution at a given `q`.
pub fn non_arch_pack(pr: &NonArchParams, q: &Real) -> Result<QParams> {
    let prec = q.precision();
    let (al, be, ga) = pr.selberg_exponents();
    let inv = |e: u32| Real::from_ratio(&BigRational::new(BigInt::one(), BigInt::from(pr.p).pow(e)), prec);
    QParams::new(q.clone(), inv(al), inv(be), inv(ga), pr.m)
}

/// Archimedean substitution at a given `q`.
pub fn arch_pack(ap: &ArchParams, q: &Real) -> Result<QParams> {
    let prec = q.precision();
    let pw = |e: f64| q.powf(&Real::from_f64(e / 2.0, prec));
    QParams::new(q.clone(), pw(ap.alpha), pw(ap.beta), pw(ap.gamma), ap.m)
}

/// Outcome of one limit check along a `q`-sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub instance: String,
    pub q_values: Vec<f64>,
    pub deviations: Vec<f64>,
    /// Least-squares slope of `log deviation` against `log q` (or `log(1-q)`).
    pub rate: Option<f64>,
    pub pass: bool,
    pub detail: String,
}

/// Acceptance rule for a deviation sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Criteria {
    /// Required bound on the last deviation.
    pub final_tol: Option<f64>,
    /// Admissible interval for the fitted rate.
    pub rate_range: Option<(f64, f64)>,
}

impl Criteria {
    pub fn decay_only() -> Criteria {
        Criteria { final_tol: None, rate_range: None }
    }
}

/// Slope of the least-squares line through `(ln h_i, ln d_i)`.
pub fn fit_rate(h: &[f64], d: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = h.iter().zip(d).filter(|(_, &d)| d > 0.0).map(|(&h, &d)| (h.ln(), d.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    if den == 0.0 {
        return None;
    }
    Some(num / den)
}

/// Non-increasing over the final three points.
pub fn dominated_decay(d: &[f64]) -> bool {
    let n = d.len();
    if n < 3 {
        return n > 0 && d.windows(2).all(|w| w[1] <= w[0]);
    }
    d[n - 3] >= d[n - 2] && d[n - 2] >= d[n - 1]
}

/// Assembles a report; `h` are the distances to the limit point.
pub fn assess(instance: String, qs: &[f64], h: &[f64], deviations: Vec<f64>, crit: Criteria) -> LimitReport {
    let rate = fit_rate(h, &deviations);
    let mut fails = Vec::new();
    if !dominated_decay(&deviations) {
        fails.push("no dominated decay over the last three points".to_string());
    }
    if let (Some(tol), Some(last)) = (crit.final_tol, deviations.last()) {
        if !(*last < tol) {
            fails.push(format!("final deviation {last:.3e} >= {tol:.0e}"));
        }
    }
    if let Some((lo, hi)) = crit.rate_range {
        match rate {
            Some(r) if r >= lo && r <= hi => {}
            Some(r) => fails.push(format!("rate {r:.3} outside [{lo}, {hi}]")),
            None => fails.push("rate undefined".to_string()),
        }
    }
    let pass = fails.is_empty();
    let rate_s = rate.map(|r| format!("{r:.3}")).unwrap_or_else(|| "n/a".into());
    let last = deviations.last().copied().unwrap_or(f64::NAN);
    let detail = if pass {
        format!("final deviation {last:.3e}, rate {rate_s}")
    } else {
        format!("{}; final deviation {last:.3e}, rate {rate_s}", fails.join("; "))
    };
    LimitReport { instance, q_values: qs.to_vec(), deviations, rate, pass, detail }
}

fn check_sequence(qs: &[f64], arch: bool) -> Result<()> {
    if qs.is_empty() {
        return Err(Error::Config("empty q-sequence".into()));
    }
    for &q in qs {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Config(format!("q = {q} outside (0,1)")));
        }
    }
    let toward = |w: &[f64]| if arch { w[1] > w[0] } else { w[1] < w[0] };
    if !qs.windows(2).all(toward) {
        return Err(Error::Config("q-sequence must move monotonically toward the limit".into()));
    }
    Ok(())
}

/// `max_{|λ| <= cutoff} |mass_q(λ) - dh_∞(λ)|` along the sequence.
pub fn verify_measure_limit(pr: &NonArchParams, qs: &[f64], cutoff: usize, crit: Criteria) -> Result<LimitReport> {
    check_sequence(qs, false)?;
    let lams = up_to_weight(cutoff, pr.m);
    let targets: Vec<f64> = lams.iter().map(|l| dh_infty(l, pr).map(|v| ratio_to_f64(&v))).collect::<Result<_>>()?;
    let devs: Vec<f64> = qs
        .par_iter()
        .map(|&q| {
            let qp = non_arch_pack(pr, &Real::from_f64(q, LIMIT_PRECISION))?;
            let sel = QSelberg::new(&qp, F2Exponent::Proof)?;
            let mut worst = 0f64;
            for (l, t) in lams.iter().zip(&targets) {
                worst = worst.max((sel.mass(l)?.to_f64() - t).abs());
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let inst = format!("measure (n,m,p,r)=({},{},{},{}) |λ|<={cutoff}", pr.n, pr.m, pr.p, pr.r);
    Ok(assess(inst, qs, qs, devs, crit))
}

/// Submodule count from the closed product over columns of `λ ⊆ μ`, with
/// residue cardinality `Q`.
pub fn closed_form_count(mu: &Partition, lambda: &Partition, residue: &BigInt) -> BigRational {
    if !leq_contain(lambda, mu) {
        return BigRational::from_integer(0.into());
    }
    let (mc, lc) = (mu.conjugate(), lambda.conjugate());
    let qq = BigRational::from_integer(residue.clone());
    let mut acc = BigRational::one();
    for i in 1..=mu.height().max(1) {
        let (mi, li, lnext) = (mc.part(i), lc.part(i), lc.part(i + 1));
        acc *= num_traits::pow::Pow::pow(&qq, (lnext * (mi - li)) as u32);
        acc *= gauss_factorials(mi - lnext, li - lnext, &qq).expect("integer base");
    }
    acc
}

/// Exact comparison of `(μ over λ)` at `q = 0`, `t = p^{-r}` with a count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqVerdict {
    pub mu: Partition,
    pub lambda: Partition,
    pub p: u64,
    pub r: u32,
    /// `q = 0` value of the interpolation route, as `num/den`.
    pub limit: String,
    /// Brute-force count (`r = 1`) or closed-form count.
    pub count: String,
    pub pass: bool,
}

/// `(μ over λ)_{0, p^{-r}}` against the number of type-`λ` submodules.
///
/// A pole at `q = 0` is returned as an error, not a failed verdict.
pub fn verify_cq_limit(mu: &Partition, lambda: &Partition, p: u64, r: u32) -> Result<CqVerdict> {
    verify_cq_limit_with(&BinomialSolver::residue(p, r), mu, lambda, p, r)
}

/// As [`verify_cq_limit`], reusing a solver at `t = p^{-r}`.
pub fn verify_cq_limit_with(s: &BinomialSolver, mu: &Partition, lambda: &Partition, p: u64, r: u32) -> Result<CqVerdict> {
    let m = mu.len().max(lambda.len()).max(1);
    let limit = s.gen_binomial(mu, lambda, m)?.at_zero()?;
    let count = if r == 1 {
        BigRational::from_integer(count_submodules(mu, lambda, p)?.into())
    } else {
        closed_form_count(mu, lambda, &BigInt::from(p).pow(r))
    };
    let show = |x: &BigRational| if x.is_integer() { x.numer().to_string() } else { x.to_string() };
    Ok(CqVerdict {
        mu: mu.clone(),
        lambda: lambda.clone(),
        p,
        r,
        pass: limit == count,
        limit: show(&limit),
        count: show(&count),
    })
}

/// Parameters of an idempotent-limit check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LimitParams {
    NonArch(NonArchParams),
    Arch(ArchParams),
}

/// Cutoff search controls for the truncated `q`-Selberg inner product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub start: usize,
    pub max: usize,
    pub tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { start: 24, max: 4000, tol: 1e-24 }
    }
}

/// Non-Archimedean branch: `max_μ |E^q_λ(q^μ p^{-γρ}) - e_λ(p^{-μ})|` over
/// `window`. Archimedean branch: coefficientwise `|E^q_λ - E_λ|`.
pub fn verify_idempotent_limits(
    lambda: &Partition,
    params: &LimitParams,
    qs: &[f64],
    window: &[Partition],
    trunc: Truncation,
    crit: Criteria,
) -> Result<LimitReport> {
    match params {
        LimitParams::NonArch(pr) => {
            check_sequence(qs, false)?;
            let targets = idempotent_targets(lambda, pr, window)?;
            let devs: Vec<f64> = qs
                .par_iter()
                .map(|&q| {
                    let qp = non_arch_pack(pr, &Real::from_f64(q, LIMIT_PRECISION))?;
                    let fam = QJacobiFamily::with_auto_cutoff(&qp, trunc.start, trunc.tol, trunc.max)?;
                    let e = fam.jacobi(lambda)?;
                    let mut worst = 0f64;
                    for (mu, t) in window.iter().zip(&targets) {
                        worst = worst.max((e.eval(&qp.point(mu)).to_f64() - ratio_to_f64(t)).abs());
                    }
                    Ok(worst)
                })
                .collect::<Result<_>>()?;
            let inst = format!("idempotent {lambda} (n,m,p,r)=({},{},{},{})", pr.n, pr.m, pr.p, pr.r);
            Ok(assess(inst, qs, qs, devs, crit))
        }
        LimitParams::Arch(ap) => {
            check_sequence(qs, true)?;
            let target: SymPoly<Real> = if ap.m == 1 {
                let r = |x: f64| Real::from_f64(x, LIMIT_PRECISION);
                jacobi_1d(lambda.weight(), &r(ap.alpha), &r(ap.beta))?
            } else {
                gen_jacobi(lambda, ap, QuadratureSpec::default())?
            };
            let devs: Vec<f64> = qs
                .par_iter()
                .map(|&q| {
                    let qr = Real::from_f64(q, LIMIT_PRECISION);
                    let qp = arch_pack(ap, &qr)?;
                    let e = if ap.m == 1 {
                        qjacobi_1d(lambda.weight(), &qp.q, &qp.a, &qp.b)?
                    } else {
                        QJacobiFamily::with_auto_cutoff(&qp, trunc.start, trunc.tol, trunc.max)?.jacobi(lambda)?
                    };
                    Ok(coefficient_gap(&e, &target))
                })
                .collect::<Result<_>>()?;
            let h: Vec<f64> = qs.iter().map(|q| 1.0 - q).collect();
            let inst = format!("idempotent {lambda} (α,β,γ)=({},{},{}) m={}", ap.alpha, ap.beta, ap.gamma, ap.m);
            Ok(assess(inst, qs, &h, devs, crit))
        }
    }
}

/// `e_λ(p^{-μ})` on the infinite support, read off at a level where every
/// `μ` in the window is an orbit (level stability makes this exact).
pub fn idempotent_targets(lambda: &Partition, pr: &NonArchParams, window: &[Partition]) -> Result<Vec<BigRational>> {
    let k = window.iter().map(Partition::height).chain([lambda.height(), 1]).max().unwrap_or(1);
    let es: BTreeMap<Partition, _> = idempotents(pr, k)?.into_iter().collect();
    let e = es.get(lambda).ok_or_else(|| Error::InvalidOrbit(format!("{lambda} has more than {} parts", pr.m)))?;
    window
        .iter()
        .map(|mu| e.value(mu).cloned().ok_or_else(|| Error::InvalidOrbit(format!("{mu} outside the window level"))))
        .collect()
}

/// Largest coefficient difference.
pub fn coefficient_gap(a: &SymPoly<Real>, b: &SymPoly<Real>) -> f64 {
    let mut keys: Vec<&Partition> = a.coeffs().keys().chain(b.coeffs().keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|k| {
            let x = a.coeff(k).map(Real::to_f64).unwrap_or(0.0);
            let y = b.coeff(k).map(Real::to_f64).unwrap_or(0.0);
            (x - y).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest coefficient difference relative to the target's largest coefficient.
pub fn relative_coefficient_gap(a: &SymPoly<Real>, b: &SymPoly<Real>) -> f64 {
    let scale = b.coeffs().values().map(|c| c.to_f64().abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    coefficient_gap(a, b) / scale
}

/// Coefficientwise distance of the one-variable closed form from its
/// `q → 1` limit, `jacobi_1d(λ; α, β)`.
pub fn verify_jacobi_1d_arch_limit(lambda: usize, alpha: f64, beta: f64, qs: &[f64], crit: Criteria) -> Result<(LimitReport, f64)> {
    check_sequence(qs, true)?;
    let r = |x: f64| Real::from_f64(x, LIMIT_PRECISION);
    let target = jacobi_1d(lambda, &r(alpha), &r(beta))?;
    let ap = ArchParams::new(alpha, beta, 1.0, 1)?;
    let mut devs = Vec::with_capacity(qs.len());
    let mut rel = 0.0;
    for &q in qs {
        let qp = arch_pack(&ap, &r(q))?;
        let e = qjacobi_1d(lambda, &qp.q, &qp.a, &qp.b)?;
        devs.push(coefficient_gap(&e, &target));
        rel = relative_coefficient_gap(&e, &target);
    }
    let h: Vec<f64> = qs.iter().map(|q| 1.0 - q).collect();
    let inst = format!("jacobi λ={lambda} (α,β)=({alpha},{beta})");
    Ok((assess(inst, qs, &h, devs, crit), rel))
}

/// Where the dimension interpolant is taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DimLimit {
    /// `m = 1` orbit data; `q → 0`, target `dims_1d`.
    NonArch(NonArchParams),
    /// Projective space over `R` or `C`; `q → 1`, target `dims_arch`.
    Arch { n: usize, field: GrassField },
}

/// Relative deviation of `D^q_λ` from the representation dimension.
pub fn verify_dim_limit(lambda: usize, which: &DimLimit, qs: &[f64], crit: Criteria) -> Result<LimitReport> {
    let (target, arch) = match which {
        DimLimit::NonArch(pr) => (dims_1d(lambda, pr)?, false),
        DimLimit::Arch { n, field } => (dims_arch(lambda, *n, *field)?, true),
    };
    check_sequence(qs, arch)?;
    let t = ratio_to_f64(&target);
    let mut devs = Vec::with_capacity(qs.len());
    for &q in qs {
        let qr = Real::from_f64(q, LIMIT_PRECISION);
        let qp = match which {
            DimLimit::NonArch(pr) => non_arch_pack(pr, &qr)?,
            DimLimit::Arch { n, field } => arch_pack(&ArchParams::grassmannian(*n, 1, *field)?, &qr)?,
        };
        let d = qdim_1d(lambda, &qp.q, &qp.a, &qp.b)?.to_f64();
        devs.push(((d - t) / t).abs());
    }
    let h: Vec<f64> = if arch { qs.iter().map(|q| 1.0 - q).collect() } else { qs.to_vec() };
    let inst = match which {
        DimLimit::NonArch(pr) => format!("dim λ={lambda} (n,p,r)=({},{},{}) target {}", pr.n, pr.p, pr.r, target),
        DimLimit::Arch { n, field } => format!("dim λ={lambda} n={n} {field:?} target {}", target),
    };
    Ok(assess(inst, qs, &h, devs, crit))
}

/// The value as a machine integer, when it is one.
pub fn as_count(x: &BigRational) -> Option<u64> {
    if x.is_integer() {
        x.numer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;

    fn na(n: usize, m: usize, p: u64, r: u32) -> NonArchParams {
        NonArchParams::new(n, m, p, r).unwrap()
    }

    #[test]
    fn rate_fit() {
        let h = [1e-1, 1e-2, 1e-3];
        let d: Vec<f64> = h.iter().map(|x| 3.0 * x).collect();
        assert!((fit_rate(&h, &d).unwrap() - 1.0).abs() < 1e-12);
        let d2: Vec<f64> = h.iter().map(|x| x * x).collect();
        assert!((fit_rate(&h, &d2).unwrap() - 2.0).abs() < 1e-12);
        assert!(dominated_decay(&[3.0, 2.0, 1.0, 1.0]));
        assert!(!dominated_decay(&[3.0, 1.0, 2.0]));
    }

    #[test]
    fn packs() {
        let q = Real::from_f64(0.25, 128);
        let qp = non_arch_pack(&na(4, 2, 2, 1), &q).unwrap();
        assert_eq!(qp.a.to_f64(), 0.5);
        assert_eq!(qp.t.to_f64(), 0.5);
        let qp = arch_pack(&ArchParams::new(2.0, 1.0, 1.0, 1).unwrap(), &q).unwrap();
        assert!((qp.a.to_f64() - 0.25).abs() < 1e-15);
        assert!((qp.b.to_f64() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn measure_limit_small_instances() {
        for p in [na(2, 1, 2, 1), na(4, 2, 2, 1)] {
            let crit = Criteria { final_tol: Some(1e-3), rate_range: Some((0.8, 1.2)) };
            let rep = verify_measure_limit(&p, &default_non_arch_sequence(), 6, crit).unwrap();
            assert!(rep.pass, "{}", rep.detail);
        }
        let bad = verify_measure_limit(&na(2, 1, 2, 1), &[1e-2, 1e-1], 3, Criteria::decay_only());
        assert!(matches!(bad, Err(Error::Config(_))));
    }

    #[test]
    fn closed_form_count_matches_brute_force() {
        for p in [2u64, 3] {
            for mu in up_to_weight(4, 4) {
                for l in up_to_weight(4, 4) {
                    let c = closed_form_count(&mu, &l, &BigInt::from(p));
                    let want = if leq_contain(&l, &mu) { count_submodules(&mu, &l, p).unwrap() } else { 0 };
                    assert_eq!(as_count(&c), Some(want), "{mu} {l} p={p}");
                }
            }
        }
    }

    #[test]
    fn cq_examples() {
        let v = verify_cq_limit(&part(&[1, 1]), &part(&[1]), 2, 1).unwrap();
        assert!(v.pass);
        assert_eq!(v.count, "3");
        assert_eq!(verify_cq_limit(&part(&[2]), &part(&[1]), 2, 1).unwrap().limit, "1");
        let v = verify_cq_limit(&part(&[2, 1]), &part(&[1]), 3, 2).unwrap();
        assert!(v.pass, "{v:?}");
    }

    #[test]
    fn idempotent_limit_one_variable() {
        let p = na(2, 1, 2, 1);
        let window = [part(&[]), part(&[1]), part(&[2])];
        let t = idempotent_targets(&part(&[1]), &p, &window).unwrap();
        assert_eq!(t, vec![crate::arith::int(-1), crate::arith::int(2), crate::arith::int(2)]);
        let crit = Criteria { final_tol: Some(1e-2), rate_range: None };
        let rep = verify_idempotent_limits(&part(&[1]), &LimitParams::NonArch(p), &default_non_arch_sequence(), &window, Truncation::default(), crit).unwrap();
        assert!(rep.pass, "{}", rep.detail);
    }

    #[test]
    fn arch_limit_one_variable() {
        let ap = ArchParams::grassmannian(3, 1, GrassField::Real).unwrap();
        let rep = verify_idempotent_limits(&part(&[1]), &LimitParams::Arch(ap), &default_arch_sequence(), &[], Truncation::default(), Criteria::decay_only()).unwrap();
        assert!(rep.pass, "{}", rep.detail);
        let r = rep.rate.unwrap();
        assert!((0.8..=1.2).contains(&r), "{r}");
    }

    #[test]
    fn dimension_limits() {
        let crit = Criteria { final_tol: Some(1e-2), rate_range: None };
        for l in 0..5 {
            let r = verify_dim_limit(l, &DimLimit::NonArch(na(2, 1, 2, 1)), &default_non_arch_sequence(), crit).unwrap();
            assert!(r.pass, "{}", r.detail);
            let r = verify_dim_limit(l, &DimLimit::Arch { n: 2, field: GrassField::Complex }, &default_arch_sequence(), crit).unwrap();
            assert!(r.pass, "{}", r.detail);
        }
    }
}
