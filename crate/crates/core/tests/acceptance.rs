//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line with its
//! measured quantities and wall time; the process exits non-zero if any
//! criterion fails or overruns its time budget.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use grassq::arch::{gen_jacobi, jacobi_1d, ArchParams, GrassField, QuadratureSpec};
use grassq::arith::{qpoch_finite, rat, RatFunc, Real};
use grassq::interp::{cq_value, rho_point, BinomialSolver};
use grassq::limits::{
    default_arch_sequence, default_non_arch_sequence, idempotent_targets, verify_dim_limit, verify_idempotent_limits,
    verify_jacobi_1d_arch_limit, verify_measure_limit, Criteria, DimLimit, LimitParams, Truncation,
};
use grassq::nonarch::{dh_infty, dh_level, dh_level1, dims_1d, idempotents, HeckeAlgebra, HeckeElement, NonArchParams};
use grassq::oracle::{count_hall, count_submodules, grassmannian, orbit_measure};
use grassq::partitions::{enumerate, leq_contain, of_weight, part, up_to_weight, Partition};
use grassq::qgrass::{qjacobi_1d, F2Exponent, QJacobiFamily, QParams, QSelberg};
use num_rational::BigRational;
use num_traits::{One, Zero};

type Outcome = (bool, String);

const MIN: u64 = 60;

/// Every partition of weight at most `w` with every `λ ⊆ μ`.
fn grid(w: usize) -> Vec<(Partition, Partition)> {
    let all = up_to_weight(w, w);
    let mut out = Vec::new();
    for mu in &all {
        for l in &all {
            if leq_contain(l, mu) {
                out.push((mu.clone(), l.clone()));
            }
        }
    }
    out
}

fn len_of(mu: &Partition) -> usize {
    mu.len().max(1)
}

fn c1_counting_grid() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let s = BinomialSolver::residue(p, 1);
        for (mu, l) in grid(5) {
            let v = s.gen_binomial_at_zero(&mu, &l, len_of(&mu)).expect("binomial");
            let c = count_submodules(&mu, &l, p).expect("oracle");
            checked += 1;
            if v != BigRational::from_integer(c.into()) {
                bad.push(format!("p={p} ({mu} over {l}) = {v} vs {c}"));
            }
        }
    }
    (bad.is_empty(), format!("{checked} pairs, {} mismatches{}", bad.len(), first(&bad)))
}

fn c2_hall_consistency() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        for (mu, l) in grid(5) {
            let cot = of_weight(mu.weight() - l.weight(), mu.len().max(1));
            let sum: u64 = cot.iter().map(|nu| count_hall(&mu, &l, nu, p).expect("hall")).sum();
            let c = count_submodules(&mu, &l, p).expect("oracle");
            checked += 1;
            if sum != c {
                bad.push(format!("p={p} ({mu},{l}) Σ={sum} vs {c}"));
            }
        }
    }
    (bad.is_empty(), format!("{checked} pairs, {} mismatches{}", bad.len(), first(&bad)))
}

fn measure_vs_oracle(cases: &[(usize, usize, u64)], k: usize) -> Vec<String> {
    let mut bad = Vec::new();
    for &(n, m, p) in cases {
        let pr = NonArchParams::new(n, m, p, 1).unwrap();
        let om = orbit_measure(n, m, p, k).expect("oracle");
        let ls = enumerate(m, k);
        if om.len() != ls.len() {
            bad.push(format!("({n},{m},{p}) {} orbits vs {}", om.len(), ls.len()));
        }
        for l in ls {
            let v = if k == 1 { dh_level1(&l, &pr) } else { dh_level(&l, k, &pr) }.unwrap();
            if om.get(&l) != Some(&v) {
                bad.push(format!("({n},{m},{p}) {l}: {v} vs {:?}", om.get(&l)));
            }
        }
    }
    bad
}

fn c3_level1_measure() -> Outcome {
    let cases = [(2, 1, 2), (3, 1, 2), (4, 2, 2), (3, 1, 3)];
    let bad = measure_vs_oracle(&cases, 1);
    (bad.is_empty(), format!("{} instances, {} mismatches{}", cases.len(), bad.len(), first(&bad)))
}

fn c4_level2_measure() -> Outcome {
    let cases = [(2, 1, 2), (3, 1, 2)];
    let bad = measure_vs_oracle(&cases, 2);
    let pr = NonArchParams::new(2, 1, 2, 1).unwrap();
    let got: Vec<BigRational> = enumerate(1, 2).iter().map(|l| dh_level(l, 2, &pr).unwrap()).collect();
    let want = vec![rat(4, 6), rat(1, 6), rat(1, 6)];
    let ok = bad.is_empty() && got == want;
    (ok, format!("{} mismatches, (2,1,2) = {}", bad.len(), got.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
}

fn c5_normalization() -> Outcome {
    let cases = [(2, 1, 2, 1), (3, 1, 3, 1), (3, 1, 2, 2), (4, 2, 2, 1), (5, 2, 3, 1), (4, 2, 3, 2)];
    let mut bad = Vec::new();
    let mut worst_deficit = 0f64;
    for (n, m, p, r) in cases {
        let pr = NonArchParams::new(n, m, p, r).unwrap();
        for k in 1..=3 {
            let s: BigRational = enumerate(m, k).iter().map(|l| dh_level(l, k, &pr).unwrap()).sum();
            if !s.is_one() {
                bad.push(format!("({n},{m},{p},{r}) k={k} Σ={s}"));
            }
        }
        let s: BigRational = up_to_weight(40, m).iter().map(|l| dh_infty(l, &pr).unwrap()).sum();
        let deficit = 1.0 - Real::from_ratio(&s, 128).to_f64();
        worst_deficit = worst_deficit.max(deficit);
        if s > BigRational::one() || deficit > 1e-6 {
            bad.push(format!("({n},{m},{p},{r}) Σ dh_infty deficit {deficit:e}"));
        }
    }
    (bad.is_empty(), format!("{} instances, worst truncated deficit {worst_deficit:.2e}, failures {:?}", cases.len(), bad))
}

fn qparams(v: [(i64, i64); 4], m: usize) -> QParams {
    let r = |(a, b): (i64, i64)| rat(a, b);
    QParams::from_ratios(&r(v[0]), &r(v[1]), &r(v[2]), &r(v[3]), m, 192).unwrap()
}

fn c6_qselberg_mass_one() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    // m = 1: the total against 1 and against the exact q-binomial partial sum
    for v in [[(1, 2), (1, 4), (1, 2), (1, 2)], [(3, 10), (2, 5), (7, 10), (1, 2)], [(1, 10), (1, 2), (1, 2), (1, 2)]] {
        let p = qparams(v, 1);
        let sel = QSelberg::new(&p, F2Exponent::Proof).unwrap();
        let t = sel.total_auto(24, 1e-12, 4000).unwrap();
        let (q, a, b) = (rat(v[0].0, v[0].1), rat(v[1].0, v[1].1), rat(v[2].0, v[2].1));
        let mut partial = BigRational::zero();
        let mut apow = BigRational::one();
        for k in 0..=t.cutoff {
            partial += qpoch_finite(&b, &q, k) / qpoch_finite(&q, &q, k) * &apow;
            apow *= &a;
        }
        let m0 = sel.mass(&Partition::empty()).unwrap();
        let cross = (&m0 * &Real::from_ratio(&partial, 192)).to_f64();
        let dev = (t.total.to_f64() - 1.0).abs();
        let dcross = (t.total.to_f64() - cross).abs();
        ok &= dev < 1e-8 && dcross < 1e-12;
        notes.push(format!("m=1 {dev:.1e}/{dcross:.1e}"));
    }
    // m = 2: both local exponents
    let points = [
        [(1, 2), (3, 10), (2, 5), (3, 5)],
        [(3, 10), (1, 2), (1, 2), (1, 2)],
        [(1, 10), (1, 2), (1, 2), (1, 2)],
        [(7, 10), (1, 5), (3, 5), (2, 5)],
        [(1, 5), (2, 3), (1, 4), (1, 3)],
    ];
    let mut worst = [0f64; 2];
    for v in points {
        let p = qparams(v, 2);
        for (i, variant) in [F2Exponent::Proof, F2Exponent::Display].into_iter().enumerate() {
            let t = QSelberg::new(&p, variant).unwrap().total_auto(24, 1e-9, 4000).unwrap();
            worst[i] = worst[i].max((t.total.to_f64() - 1.0).abs());
        }
    }
    ok &= worst[0] < 1e-6 && worst[1] > 1e-6;
    notes.push(format!("m=2 proof exponent worst {:.1e}, display exponent worst {:.3}", worst[0], worst[1]));
    (ok, notes.join(", "))
}

fn c7_measure_limit() -> Outcome {
    let crit = Criteria { final_tol: Some(1e-3), rate_range: Some((0.8, 1.2)) };
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, m) in [(2, 1), (4, 2)] {
        let pr = NonArchParams::new(n, m, 2, 1).unwrap();
        let r = verify_measure_limit(&pr, &default_non_arch_sequence(), 6, crit).unwrap();
        ok &= r.pass;
        notes.push(format!("({n},{m},2,1): {}", r.detail));
    }
    (ok, notes.join("; "))
}

fn c8_cq_limit() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let t = RatFunc::from_rational(rat(1, p as i64));
        let q = RatFunc::q();
        for (mu, l) in grid(5) {
            let m = len_of(&mu);
            let x = rho_point(&mu, m, &q, &t).unwrap();
            let v = cq_value(&l, &x, &q, &t).and_then(|f| f.at_zero());
            let c = BigRational::from_integer(count_submodules(&mu, &l, p).unwrap().into());
            checked += 1;
            match v {
                Ok(v) if v == c => {}
                other => bad.push(format!("p={p} C^q_{l}(q^{mu} t^ρ) at q=0 = {other:?} vs {c}")),
            }
        }
    }
    (bad.is_empty(), format!("{checked} pairs, {} mismatches{}", bad.len(), first(&bad)))
}

fn c9_idempotent_limit() -> Outcome {
    let qs = default_non_arch_sequence();
    let pr = NonArchParams::new(2, 1, 2, 1).unwrap();
    let u = part(&[1]);
    let window = vec![Partition::empty(), part(&[1]), part(&[2])];
    let targets = idempotent_targets(&u, &pr, &window).unwrap();
    let targets_ok = targets == vec![rat(-1, 1), rat(2, 1), rat(2, 1)];
    let crit = Criteria { final_tol: Some(1e-2), rate_range: None };
    let a = verify_idempotent_limits(&u, &LimitParams::NonArch(pr), &qs, &window, Truncation::default(), crit).unwrap();
    let pr = NonArchParams::new(4, 2, 2, 1).unwrap();
    let b = verify_idempotent_limits(&u, &LimitParams::NonArch(pr), &qs, &up_to_weight(4, 2), Truncation::default(), Criteria::decay_only())
        .unwrap();
    (
        targets_ok && a.pass && b.pass,
        format!(
            "targets {}; (2,1,2,1): {}; (4,2,2,1): {}",
            targets.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            a.detail,
            b.detail
        ),
    )
}

fn c10_one_dimensional() -> Outcome {
    // q-side: Gram-Schmidt against the truncated measure vs the closed form
    let mut qgap = 0f64;
    for v in [[(1, 2), (1, 4), (1, 2), (1, 2)], [(1, 5), (1, 2), (1, 3), (1, 2)]] {
        let p = QParams::from_ratios(&rat(v[0].0, v[0].1), &rat(v[1].0, v[1].1), &rat(v[2].0, v[2].1), &rat(v[3].0, v[3].1), 1, 256)
            .unwrap();
        let fam = QJacobiFamily::new(&p, 160, 1e-40).unwrap();
        for l in 0..=4usize {
            let e = fam.jacobi(&Partition::rectangle(l, 1)).unwrap();
            let c = qjacobi_1d(l, &p.q, &p.a, &p.b).unwrap();
            qgap = qgap.max(grassq::limits::coefficient_gap(&e, &c));
        }
    }
    // continuous side: quadrature Gram-Schmidt vs the 2F1 closed form
    let mut agap = 0f64;
    for (al, be) in [(2.0, 1.0), (1.0, 1.0), (3.0, 2.0), (2.5, 0.5)] {
        let ap = ArchParams::new(al, be, 1.0, 1).unwrap();
        for l in 0..=4usize {
            let e = gen_jacobi(&Partition::rectangle(l, 1), &ap, QuadratureSpec::default()).unwrap();
            let r = |x: f64| Real::from_f64(x, 128);
            let c = jacobi_1d(l, &r(al), &r(be)).unwrap();
            agap = agap.max(grassq::limits::coefficient_gap(&e, &c));
        }
    }
    let crit = Criteria { final_tol: Some(1e-3), rate_range: None };
    let (lim, rel) = verify_jacobi_1d_arch_limit(1, 2.0, 1.0, &default_arch_sequence(), crit).unwrap();
    let ok = qgap < 1e-9 && agap < 1e-8 && lim.pass;
    (ok, format!("q-side gap {qgap:.1e}, continuous gap {agap:.1e}, limit at q=1-2^-10 (α,β)=(2,1) λ=1: {} (relative {rel:.2e})", lim.detail))
}

fn c11_dimensions() -> Outcome {
    let pr = NonArchParams::new(2, 1, 2, 1).unwrap();
    let crit = Criteria { final_tol: Some(0.01), rate_range: None };
    let mut ok = true;
    let mut targets = Vec::new();
    let mut prev = 0usize;
    for l in 0..=4usize {
        // orbit count increments on P^1(Z/2^l) as the independent target
        let size = grassmannian(2, 1, 2, l.max(1)).unwrap().len();
        let size = if l == 0 { 1 } else { size };
        let t = dims_1d(l, &pr).unwrap();
        ok &= t == BigRational::from_integer((size - prev).into());
        prev = size;
        targets.push(t.to_string());
        ok &= verify_dim_limit(l, &DimLimit::NonArch(pr), &default_non_arch_sequence(), crit).unwrap().pass;
        ok &= verify_dim_limit(l, &DimLimit::Arch { n: 2, field: GrassField::Complex }, &default_arch_sequence(), crit).unwrap().pass;
    }
    (ok, format!("p-adic targets {} and complex targets 2λ+1 reached within 1%", targets.join(", ")))
}

fn c12_convolution() -> Outcome {
    let pr = NonArchParams::new(4, 2, 2, 1).unwrap();
    let mut bad = Vec::new();
    let mut products = 0;
    for k in 1..=2 {
        let alg = HeckeAlgebra::new(&pr, k).unwrap();
        let es = idempotents(&pr, k).unwrap();
        for (l, e) in &es {
            for (mu, f) in &es {
                let prod = alg.convolve(e, f);
                products += 1;
                if (l == mu && prod != *e) || (l != mu && !prod.is_zero()) {
                    bad.push(format!("k={k} e_{l} * e_{mu}"));
                }
            }
        }
    }
    (bad.is_empty(), format!("{products} products at levels 1, 2, failures {bad:?}"))
}

fn c13_multiplicity_free() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (n, m, p, ks) in [(4usize, 2usize, 2u64, 1..=1usize), (2, 1, 2, 1..=3)] {
        let pr = NonArchParams::new(n, m, p, 1).unwrap();
        for k in ks {
            let es = idempotents(&pr, k).unwrap();
            let orbits = orbit_measure(n, m, p, k).unwrap().len();
            let alg = HeckeAlgebra::new(&pr, k).unwrap();
            let sum = es.iter().fold(HeckeElement::zero(m, k), |acc, (_, e)| acc.add(e));
            let good = es.len() == enumerate(m, k).len() && es.len() == orbits && sum == alg.unit();
            ok &= good;
            notes.push(format!("({n},{m},{p}) k={k}: {} idempotents, {orbits} orbits", es.len()));
        }
    }
    (ok, notes.join("; "))
}

fn main() {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("1 counting grid", 2 * MIN, c1_counting_grid),
        ("2 Hall consistency", 2 * MIN, c2_hall_consistency),
        ("3 level-1 measure vs oracle", MIN, c3_level1_measure),
        ("4 level-2 measure vs oracle", 2 * MIN, c4_level2_measure),
        ("5 probability normalization", MIN, c5_normalization),
        ("6 q-Selberg mass one", 2 * MIN, c6_qselberg_mass_one),
        ("7 measure limit", 2 * MIN, c7_measure_limit),
        ("8 C^q limit at q=0", 3 * MIN, c8_cq_limit),
        ("9 idempotent limit", 5 * MIN, c9_idempotent_limit),
        ("10 one-dimensional coherence", 2 * MIN, c10_one_dimensional),
        ("11 dimension interpolation", 2 * MIN, c11_dimensions),
        ("12 idempotency under convolution", 5 * MIN, c12_convolution),
        ("13 multiplicity-free resolution", 2 * MIN, c13_multiplicity_free),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    let mut summary: BTreeMap<bool, usize> = BTreeMap::new();
    for (name, budget, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = f();
        let took = start.elapsed();
        let in_time = took < Duration::from_secs(budget);
        let pass = pass && in_time;
        let budget_note = if in_time { String::new() } else { format!(" over budget {budget} s") };
        println!("{} criterion {name}: {detail} [{:.1} s{budget_note}]", if pass { "PASS" } else { "FAIL" }, took.as_secs_f64());
        *summary.entry(pass).or_default() += 1;
        if !pass {
            failed.push(name);
        }
    }
    println!("acceptance: {} passed, {} failed", summary.get(&true).unwrap_or(&0), summary.get(&false).unwrap_or(&0));
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}

fn first<T: std::fmt::Debug>(bad: &[T]) -> String {
    bad.first().map(|b| format!(", first {b:?}")).unwrap_or_default()
}
