//! Command-line surface: tables, verification suites and replay.
//!
//! [`execute`] is pure and deterministic; [`run`] adds rendering, output and
//! the exit-code convention (0 all checks pass, 1 a check failed, 2 bad
//! configuration or a library error).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arch::{dims_arch, gen_jacobi, inner_product as arch_inner_product, selberg_measure, selberg_total, ArchParams, GrassField, QuadratureSpec};
use crate::arith::real::ratio_to_f64;
use crate::arith::Real;
use crate::error::{Error, Result};
use crate::interp::BinomialSolver;
use crate::limits::{
    arch_pack, default_arch_sequence, default_non_arch_sequence, non_arch_pack, verify_cq_limit_with, verify_dim_limit,
    verify_idempotent_limits, verify_jacobi_1d_arch_limit, verify_measure_limit, Criteria, DimLimit, LimitParams, LimitReport,
    Truncation,
};
use crate::nonarch::{dh_infty, dh_level, dims_1d, idempotents, inner_product, HeckeAlgebra, HeckeElement, NonArchParams};
use crate::oracle::{count_submodules, hall_table, is_prime, orbit_measure, DEFAULT_BUDGET};
use crate::partitions::{enumerate, leq_contain, part, up_to_weight, Partition};
use crate::qgrass::{qdim_1d, F2Exponent, QJacobiFamily, QSelberg};

/// Truncated `Σ dh_∞` must reach `1 - NORMALIZATION_TOL` by this weight.
pub const NORMALIZATION_WEIGHT: usize = 40;
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Arch `q`-sequence used for two-variable idempotent limits; the truncated
/// inner product grows roughly sixfold per step beyond this.
pub fn short_arch_sequence() -> Vec<f64> {
    (2..=5).map(|j| 1.0 - 2f64.powi(-j)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Counting,
    Measures,
    Orthogonality,
    Limits,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Counting => "counting",
            Suite::Measures => "measures",
            Suite::Orthogonality => "orthogonality",
            Suite::Limits => "limits",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Measure,
    Idempotents,
    Binomial,
    Dims,
    Oracle,
    Verify { suite: Suite, replay: Option<PathBuf> },
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Measure => "measure".into(),
            Command::Idempotents => "idempotents".into(),
            Command::Binomial => "binomial".into(),
            Command::Dims => "dims".into(),
            Command::Oracle => "oracle".into(),
            Command::Verify { replay: Some(_), .. } => "verify replay".into(),
            Command::Verify { suite, .. } => format!("verify {}", suite.name()),
        }
    }

    fn parse(s: &str) -> Result<Command> {
        let bad = || Error::Config(format!("unknown command {s:?}"));
        Ok(match s {
            "measure" => Command::Measure,
            "idempotents" => Command::Idempotents,
            "binomial" => Command::Binomial,
            "dims" => Command::Dims,
            "oracle" => Command::Oracle,
            _ => {
                let suite = s.strip_prefix("verify ").ok_or_else(bad)?;
                let suite = Suite::from_str(suite, false).map_err(|_| bad())?;
                Command::Verify { suite, replay: None }
            }
        })
    }
}

/// Numeric parameters shared by every command; serialized into each report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub r: u32,
    pub k: usize,
    pub cutoff: usize,
    pub precision: usize,
    pub tol: f64,
    pub q_seq: Option<Vec<f64>>,
    pub arch_q_seq: Option<Vec<f64>>,
}

impl Default for Params {
    fn default() -> Self {
        Params { n: 2, m: 1, p: 2, r: 1, k: 2, cutoff: 6, precision: 128, tol: 1e-8, q_seq: None, arch_q_seq: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, params: Params) -> RunConfig {
        RunConfig { command, params, format: Format::Json, out: None }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        if p.m == 0 || p.m > p.n / 2 {
            return Err(Error::Config(format!("need 1 <= m <= floor(n/2), got n = {}, m = {}", p.n, p.m)));
        }
        if !is_prime(p.p) {
            return Err(Error::Config(format!("p = {} is not prime", p.p)));
        }
        if p.r == 0 || p.k == 0 {
            return Err(Error::Config("r and k must be positive".into()));
        }
        if p.precision < 64 {
            return Err(Error::Config(format!("precision {} below 64 bits", p.precision)));
        }
        if !(p.tol > 0.0 && p.tol.is_finite()) {
            return Err(Error::Config(format!("tolerance {} must be positive", p.tol)));
        }
        for q in p.q_seq.iter().chain(&p.arch_q_seq).flatten() {
            if !(*q > 0.0 && *q < 1.0) {
                return Err(Error::Config(format!("q = {q} outside (0,1)")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Formula,
    Oracle,
    Limit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub key: Partition,
    pub value: String,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: Params,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("unreadable report: {e}")))
    }

    /// `key,value,provenance,series`, one line per row.
    pub fn to_csv(&self) -> String {
        #[derive(Serialize)]
        struct CsvRow<'a> {
            key: String,
            value: &'a str,
            provenance: Provenance,
            series: &'a str,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            let key = format!("[{}]", r.key.parts().iter().map(usize::to_string).collect::<Vec<_>>().join(","));
            w.serialize(CsvRow { key, value: &r.value, provenance: r.provenance, series: r.series.as_deref().unwrap_or("") })
                .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }

    /// Rows of one series in emission order.
    pub fn series(&self, name: &str) -> Vec<&Row> {
        self.rows.iter().filter(|r| r.series.as_deref() == Some(name)).collect()
    }
}

/// `num/den`, also for integers.
pub fn frac(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Inverse of [`frac`]; plain integers are accepted too.
pub fn parse_frac(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (BigInt, BigInt) = (a.parse().ok()?, b.parse().ok()?);
            (!b.is_zero()).then(|| BigRational::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Significant decimal digits carried by `precision` bits, less a guard.
pub fn decimal_digits(precision: usize) -> usize {
    ((precision as f64 * std::f64::consts::LOG10_2) as usize).saturating_sub(3).max(6)
}

struct Ctx {
    p: Params,
    digits: usize,
}

impl Ctx {
    fn new(p: &Params) -> Ctx {
        Ctx { p: p.clone(), digits: decimal_digits(p.precision) }
    }

    fn pr(&self) -> Result<NonArchParams> {
        NonArchParams::new(self.p.n, self.p.m, self.p.p, self.p.r)
    }

    fn non_arch_qs(&self) -> Vec<f64> {
        self.p.q_seq.clone().unwrap_or_else(default_non_arch_sequence)
    }

    fn arch_qs(&self, m: usize) -> Vec<f64> {
        self.p.arch_q_seq.clone().unwrap_or_else(|| if m == 1 { default_arch_sequence() } else { short_arch_sequence() })
    }

    fn real(&self, x: f64) -> Real {
        Real::from_f64(x, self.p.precision)
    }

    fn exact(&self, key: &Partition, v: &BigRational, prov: Provenance, series: &str) -> Row {
        Row { key: key.clone(), value: frac(v), provenance: prov, series: Some(series.into()) }
    }

    fn decimal(&self, key: &Partition, v: &Real, prov: Provenance, series: &str) -> Row {
        Row { key: key.clone(), value: v.to_sci_string(self.digits), provenance: prov, series: Some(series.into()) }
    }
}

#[derive(Default)]
struct Section {
    rows: Vec<Row>,
    verdicts: Vec<Verdict>,
}

impl Section {
    fn verdict(&mut self, check: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { check: check.into(), pass, detail: detail.into() });
    }

    fn limit(&mut self, r: LimitReport) {
        self.verdicts.push(Verdict { check: format!("limit {}", r.instance), pass: r.pass, detail: r.detail });
    }

    fn extend(&mut self, o: Section) {
        self.rows.extend(o.rows);
        self.verdicts.extend(o.verdicts);
    }
}

type Job<'a> = Box<dyn Fn() -> Result<Section> + Send + Sync + 'a>;

/// Runs independent jobs on the worker pool and concatenates in job order.
fn fan_out(jobs: Vec<Job<'_>>) -> Result<Section> {
    let parts: Vec<Section> = jobs.par_iter().map(|j| j()).collect::<Result<_>>()?;
    let mut out = Section::default();
    for s in parts {
        out.extend(s);
    }
    Ok(out)
}

fn qlabel(name: &str, q: f64) -> String {
    format!("{name} q={q}")
}

fn single(l: usize) -> Partition {
    Partition::from_unsorted(&[l])
}

/// All partitions of weight at most `w`, any length.
fn grid(w: usize) -> Vec<Partition> {
    up_to_weight(w, w.max(1))
}

/// Pairs `λ ⊆ μ` with `|μ| <= w`, grouped by `μ`.
fn contained_pairs(w: usize) -> Vec<(Partition, Vec<Partition>)> {
    let all = grid(w);
    all.iter().map(|mu| (mu.clone(), all.iter().filter(|l| leq_contain(l, mu)).cloned().collect())).collect()
}

fn measure(c: &Ctx) -> Result<Section> {
    let pr = c.pr()?;
    let (m, k) = (c.p.m, c.p.k);
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(move || {
        let mut s = Section::default();
        let name = format!("dh_level k={k}");
        let mut total = BigRational::zero();
        for l in enumerate(m, k) {
            let v = dh_level(&l, k, &pr)?;
            total += &v;
            s.rows.push(c.exact(&l, &v, Provenance::Formula, &name));
        }
        s.verdict(format!("Σ dh_level k={k} = 1"), total.is_one(), format!("total {}", frac(&total)));
        Ok(s)
    }));
    jobs.push(Box::new(move || {
        let mut s = Section::default();
        for l in up_to_weight(c.p.cutoff, m) {
            s.rows.push(c.exact(&l, &dh_infty(&l, &pr)?, Provenance::Formula, "dh_infty"));
        }
        Ok(s)
    }));
    for q in c.non_arch_qs() {
        jobs.push(Box::new(move || {
            let qp = non_arch_pack(&pr, &c.real(q))?;
            let sel = QSelberg::new(&qp, F2Exponent::Proof)?;
            let name = qlabel("qselberg", q);
            Ok(Section {
                rows: sel.atoms(c.p.cutoff)?.iter().map(|(l, w)| c.decimal(l, w, Provenance::Limit, &name)).collect(),
                verdicts: vec![],
            })
        }));
    }
    if m <= 2 {
        for field in [GrassField::Real, GrassField::Complex] {
            jobs.push(Box::new(move || {
                let ap = ArchParams::grassmannian(c.p.n, m, field)?;
                let deg = c.p.cutoff.min(4);
                let sm = selberg_measure(&ap, deg, QuadratureSpec::default(), c.p.precision)?;
                let basis = up_to_weight(deg, m);
                let name = format!("selberg moments {}", field_name(field));
                let rows = basis.iter().zip(sm.measure.moments(&basis)).map(|(l, v)| c.decimal(l, &v, Provenance::Formula, &name)).collect();
                Ok(Section { rows, verdicts: vec![] })
            }));
        }
    }
    fan_out(jobs)
}

fn field_name(f: GrassField) -> &'static str {
    match f {
        GrassField::Real => "real",
        GrassField::Complex => "complex",
    }
}

fn idempotent_tables(c: &Ctx) -> Result<Section> {
    let pr = c.pr()?;
    let (m, k) = (c.p.m, c.p.k);
    let window = enumerate(m, k);
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(move || {
        let mut s = Section::default();
        for (l, e) in idempotents(&pr, k)? {
            let name = format!("e_{l} k={k}");
            s.rows.extend(e.values().iter().map(|(mu, v)| c.exact(mu, v, Provenance::Formula, &name)));
        }
        Ok(s)
    }));
    for q in c.non_arch_qs() {
        let window = window.clone();
        jobs.push(Box::new(move || {
            let qp = non_arch_pack(&pr, &c.real(q))?;
            let t = Truncation::default();
            let fam = QJacobiFamily::with_auto_cutoff(&qp, t.start, t.tol, t.max)?;
            let mut s = Section::default();
            for l in &window {
                let e = fam.jacobi(l)?;
                let name = qlabel(&format!("E^q_{l} coefficients"), q);
                s.rows.extend(e.coeffs().iter().map(|(nu, v)| c.decimal(nu, v, Provenance::Limit, &name)));
                let name = qlabel(&format!("E^q_{l} at q^μ t^ρ"), q);
                s.rows.extend(window.iter().map(|mu| c.decimal(mu, &e.eval(&qp.point(mu)), Provenance::Limit, &name)));
            }
            Ok(s)
        }));
    }
    fan_out(jobs)
}

fn binomial(c: &Ctx) -> Result<Section> {
    let solver = BinomialSolver::residue(c.p.p, c.p.r);
    let pairs = contained_pairs(c.p.cutoff);
    let rows: Vec<Vec<Row>> = pairs
        .par_iter()
        .map(|(mu, ls)| {
            ls.iter()
                .map(|l| Ok(c.exact(mu, &solver.gen_binomial_at_zero(mu, l, mu.len().max(1))?, Provenance::Formula, &format!("λ={l} q=0"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(Section { rows: regroup(rows), verdicts: vec![] })
}

/// Rows computed per `μ` with series per `λ`; re-sort by series then key.
fn regroup(rows: Vec<Vec<Row>>) -> Vec<Row> {
    let mut by: BTreeMap<(Partition, Partition), Row> = BTreeMap::new();
    for r in rows.into_iter().flatten() {
        let l: Partition = series_partition(r.series.as_deref().unwrap_or(""));
        by.insert((l, r.key.clone()), r);
    }
    by.into_values().collect()
}

fn series_partition(s: &str) -> Partition {
    s.strip_prefix("λ=")
        .and_then(|x| x.split_whitespace().next())
        .and_then(|x| x.parse().ok())
        .unwrap_or_default()
}

fn oracle_tables(c: &Ctx) -> Result<Section> {
    let p = c.p.p;
    let pairs = contained_pairs(c.p.cutoff);
    let rows: Vec<Vec<Row>> = pairs
        .par_iter()
        .map(|(mu, ls)| {
            ls.iter()
                .map(|l| {
                    let v = BigRational::from_integer(count_submodules(mu, l, p)?.into());
                    Ok(c.exact(mu, &v, Provenance::Oracle, &format!("λ={l} submodules")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut s = Section { rows: regroup(rows), verdicts: vec![] };
    let k = c.p.k;
    let om = orbit_measure(c.p.n, c.p.m, p, k)?;
    let name = format!("orbit measure k={k}");
    s.rows.extend(om.iter().map(|(l, v)| c.exact(l, v, Provenance::Oracle, &name)));
    Ok(s)
}

fn dims(c: &Ctx) -> Result<Section> {
    if c.p.m != 1 {
        return Err(Error::Config("dims tables are one-dimensional: use --m 1".into()));
    }
    let pr = c.pr()?;
    let ls: Vec<usize> = (0..=c.p.cutoff).collect();
    let mut s = Section::default();
    for &l in &ls {
        s.rows.push(c.exact(&single(l), &dims_1d(l, &pr)?, Provenance::Formula, "dims_1d"));
    }
    for q in c.non_arch_qs() {
        let qp = non_arch_pack(&pr, &c.real(q))?;
        let name = qlabel("qdim p-adic", q);
        for &l in &ls {
            s.rows.push(c.decimal(&single(l), &qdim_1d(l, &qp.q, &qp.a, &qp.b)?, Provenance::Limit, &name));
        }
    }
    for field in [GrassField::Complex, GrassField::Real] {
        let fname = field_name(field);
        for &l in &ls {
            s.rows.push(c.exact(&single(l), &dims_arch(l, c.p.n, field)?, Provenance::Formula, &format!("dims {fname}")));
        }
        let ap = ArchParams::grassmannian(c.p.n, 1, field)?;
        for q in c.arch_qs(1) {
            let qp = arch_pack(&ap, &c.real(q))?;
            let name = qlabel(&format!("qdim {fname}"), q);
            for &l in &ls {
                s.rows.push(c.decimal(&single(l), &qdim_1d(l, &qp.q, &qp.a, &qp.b)?, Provenance::Limit, &name));
            }
        }
    }
    Ok(s)
}

fn first_failures(bad: &[String]) -> String {
    if bad.is_empty() {
        return String::new();
    }
    let shown: Vec<&str> = bad.iter().take(3).map(String::as_str).collect();
    format!(": {}", shown.join("; "))
}

fn verify_counting(c: &Ctx) -> Result<Section> {
    let (p, r) = (c.p.p, c.p.r);
    let solver = BinomialSolver::residue(p, r);
    let pairs = contained_pairs(c.p.cutoff);
    struct Out {
        rows: Vec<Row>,
        binomial: Vec<String>,
        hall: Vec<String>,
        cq: Vec<String>,
    }
    let outs: Vec<Out> = pairs
        .par_iter()
        .map(|(mu, ls)| {
            let mut o = Out { rows: vec![], binomial: vec![], hall: vec![], cq: vec![] };
            let hall = if r == 1 { Some(hall_table(mu, p, DEFAULT_BUDGET)?) } else { None };
            for l in ls {
                let v = solver.gen_binomial_at_zero(mu, l, mu.len().max(1))?;
                let cq = verify_cq_limit_with(&solver, mu, l, p, r)?;
                let count = parse_frac(&cq.count).expect("integer count");
                if v != count {
                    o.binomial.push(format!("({mu} over {l}) = {} vs {}", frac(&v), cq.count));
                }
                if !cq.pass {
                    o.cq.push(format!("({mu},{l}): {} vs {}", cq.limit, cq.count));
                }
                if let Some(h) = &hall {
                    let sum: u64 = h.iter().filter(|((t, _), _)| t == l).map(|(_, n)| n).sum();
                    if BigRational::from_integer(sum.into()) != count {
                        o.hall.push(format!("({mu},{l}): Σ_ν = {sum} vs {}", cq.count));
                    }
                }
                let prov = if r == 1 { Provenance::Oracle } else { Provenance::Formula };
                o.rows.push(c.exact(mu, &count, prov, &format!("λ={l} submodules")));
            }
            Ok(o)
        })
        .collect::<Result<_>>()?;
    let n: usize = pairs.iter().map(|(_, ls)| ls.len()).sum();
    let mut s = Section::default();
    let mut rows = Vec::new();
    let (mut b, mut h, mut q) = (vec![], vec![], vec![]);
    for o in outs {
        rows.push(o.rows);
        b.extend(o.binomial);
        h.extend(o.hall);
        q.extend(o.cq);
    }
    s.rows = regroup(rows);
    let what = if r == 1 { "brute-force count" } else { "closed-form count" };
    let tag = format!("|μ| <= {}, p = {p}, r = {r}", c.p.cutoff);
    s.verdict(format!("binomial at q=0 = {what} ({tag})"), b.is_empty(), format!("{} of {n} pairs differ{}", b.len(), first_failures(&b)));
    if r == 1 {
        s.verdict(format!("Σ_ν Hall = submodule count ({tag})"), h.is_empty(), format!("{} of {n} pairs differ{}", h.len(), first_failures(&h)));
    }
    s.verdict(format!("C^q limit at q=0 ({tag})"), q.is_empty(), format!("{} of {n} pairs differ{}", q.len(), first_failures(&q)));
    Ok(s)
}

fn verify_measures(c: &Ctx) -> Result<Section> {
    let pr = c.pr()?;
    let (n, m, p, k) = (c.p.n, c.p.m, c.p.p, c.p.k);
    let mut jobs: Vec<Job> = Vec::new();
    for lev in 1..=k {
        jobs.push(Box::new(move || {
            let mut s = Section::default();
            let mut total = BigRational::zero();
            let mut bad = Vec::new();
            let om = if c.p.r == 1 { Some(orbit_measure(n, m, p, lev)?) } else { None };
            let name = format!("dh_level k={lev}");
            for l in enumerate(m, lev) {
                let v = dh_level(&l, lev, &pr)?;
                total += &v;
                if let Some(om) = &om {
                    let o = om.get(&l).cloned().unwrap_or_default();
                    if o != v {
                        bad.push(format!("{l}: {} vs oracle {}", frac(&v), frac(&o)));
                    }
                }
                s.rows.push(c.exact(&l, &v, Provenance::Formula, &name));
            }
            s.verdict(format!("Σ dh_level k={lev} = 1"), total.is_one(), format!("total {}", frac(&total)));
            if om.is_some() {
                s.verdict(format!("dh_level k={lev} = orbit measure"), bad.is_empty(), format!("{} mismatches{}", bad.len(), first_failures(&bad)));
            }
            Ok(s)
        }));
    }
    jobs.push(Box::new(move || {
        let mut s = Section::default();
        let w = c.p.cutoff.max(NORMALIZATION_WEIGHT);
        let total: BigRational = up_to_weight(w, m).iter().map(|l| dh_infty(l, &pr)).sum::<Result<BigRational>>()?;
        let deficit = 1.0 - ratio_to_f64(&total);
        s.verdict(
            format!("Σ_{{|λ|<={w}}} dh_infty >= 1 - {NORMALIZATION_TOL:e}"),
            total <= BigRational::one() && deficit <= NORMALIZATION_TOL,
            format!("deficit {deficit:.3e}"),
        );
        Ok(s)
    }));
    for q in c.non_arch_qs() {
        jobs.push(Box::new(move || {
            let mut s = Section::default();
            let qp = non_arch_pack(&pr, &c.real(q))?;
            let sel = QSelberg::new(&qp, F2Exponent::Proof)?;
            let tr = Truncation::default();
            let t = sel.total_auto(tr.start, c.p.tol * 1e-2, tr.max)?;
            let dev = (t.total.to_f64() - 1.0).abs();
            s.verdict(format!("q-Selberg total = 1 at q={q}"), dev <= c.p.tol, format!("|total - 1| = {dev:.3e}, tail {:.1e}, cutoff {}", t.tail, t.cutoff));
            Ok(s)
        }));
    }
    if m <= 2 {
        for field in [GrassField::Real, GrassField::Complex] {
            jobs.push(Box::new(move || {
                let mut s = Section::default();
                let ap = ArchParams::grassmannian(n, m, field)?;
                let (t, err) = selberg_total(&ap, QuadratureSpec::default())?;
                let dev = (t.to_f64() - 1.0).abs();
                let tol = c.p.tol.max(QuadratureSpec::default().tol);
                s.verdict(format!("Selberg total = 1 ({})", field_name(field)), dev <= tol, format!("|total - 1| = {dev:.3e}, refinement gap {err:.1e}"));
                Ok(s)
            }));
        }
    }
    fan_out(jobs)
}

fn verify_orthogonality(c: &Ctx) -> Result<Section> {
    let pr = c.pr()?;
    let (n, m, k) = (c.p.n, c.p.m, c.p.k);
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(move || {
        let mut s = Section::default();
        let es = idempotents(&pr, k)?;
        let orbits = enumerate(m, k);
        s.verdict(
            format!("#idempotents = |Λ_{m}^{k}|"),
            es.len() == orbits.len(),
            format!("{} idempotents, {} orbits", es.len(), orbits.len()),
        );
        let mut bad = Vec::new();
        for (i, (l, e)) in es.iter().enumerate() {
            for (mu, f) in &es[i + 1..] {
                let ip = inner_product(e, f, &pr)?;
                if !ip.is_zero() {
                    bad.push(format!("⟨e_{l}, e_{mu}⟩ = {}", frac(&ip)));
                }
            }
        }
        s.verdict(format!("e_λ pairwise orthogonal, level {k}"), bad.is_empty(), format!("{} nonzero pairings{}", bad.len(), first_failures(&bad)));
        if c.p.r != 1 {
            return Ok(s);
        }
        let alg = HeckeAlgebra::new(&pr, k)?;
        let sum = es.iter().fold(HeckeElement::zero(m, k), |acc, (_, e)| acc.add(e));
        s.verdict(format!("Σ e_λ = unit, level {k}"), sum == alg.unit(), format!("|X| = {}", alg.size()));
        let mut bad = Vec::new();
        for (l, e) in &es {
            for (mu, f) in &es {
                let prod = alg.convolve(e, f);
                let ok = if l == mu { prod == *e } else { prod.is_zero() };
                if !ok {
                    bad.push(format!("e_{l} * e_{mu}"));
                }
            }
        }
        s.verdict(format!("e_λ * e_μ = δ_λμ e_λ, level {k}"), bad.is_empty(), format!("{} failing products{}", bad.len(), first_failures(&bad)));
        Ok(s)
    }));
    for q in c.non_arch_qs() {
        jobs.push(Box::new(move || {
            let mut s = Section::default();
            let qp = non_arch_pack(&pr, &c.real(q))?;
            let t = Truncation::default();
            let fam = QJacobiFamily::with_auto_cutoff(&qp, t.start, t.tol, t.max)?;
            let ls = enumerate(m, k);
            let es: Vec<_> = ls.iter().map(|l| fam.jacobi(l)).collect::<Result<_>>()?;
            let worst = worst_cosine(&es, |f, g| fam.inner_product(f, g).to_f64());
            s.verdict(format!("E^q_λ orthogonal at q={q}"), worst <= c.p.tol, format!("max normalized pairing {worst:.3e}"));
            Ok(s)
        }));
    }
    if m <= 2 {
        jobs.push(Box::new(move || {
            let mut s = Section::default();
            let ap = ArchParams::grassmannian(n, m, GrassField::Real)?;
            let spec = QuadratureSpec::default();
            let ls = up_to_weight(2, m);
            let es: Vec<_> = ls.iter().map(|l| gen_jacobi(l, &ap, spec)).collect::<Result<_>>()?;
            let mut err = None;
            let worst = worst_cosine(&es, |f, g| match arch_inner_product(f, g, &ap, spec) {
                Ok(x) => x.to_f64(),
                Err(e) => {
                    err = Some(e);
                    f64::NAN
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            let tol = c.p.tol.max(spec.tol);
            s.verdict("Jacobi E_λ orthogonal (real Grassmannian)", worst <= tol, format!("max normalized pairing {worst:.3e}"));
            Ok(s)
        }));
    }
    fan_out(jobs)
}

fn worst_cosine<P>(es: &[P], mut ip: impl FnMut(&P, &P) -> f64) -> f64 {
    let norms: Vec<f64> = es.iter().map(|e| ip(e, e)).collect();
    let mut worst = 0f64;
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            worst = worst.max(ip(&es[i], &es[j]).abs() / (norms[i] * norms[j]).sqrt());
        }
    }
    worst
}

fn limit_rows(c: &Ctx, r: &LimitReport, key: &Partition) -> Vec<Row> {
    r.q_values
        .iter()
        .zip(&r.deviations)
        .map(|(q, d)| c.decimal(key, &c.real(*d), Provenance::Limit, &qlabel(&format!("deviation {}", r.instance), *q)))
        .collect()
}

fn verify_limits(c: &Ctx) -> Result<Section> {
    let pr = c.pr()?;
    let (n, m, k) = (c.p.n, c.p.m, c.p.k);
    let crit = Criteria::decay_only();
    let mut jobs: Vec<Job> = Vec::new();
    let unit = part(&[1]);
    jobs.push(Box::new(move || {
        let r = verify_measure_limit(&pr, &c.non_arch_qs(), c.p.cutoff, crit)?;
        let rows = limit_rows(c, &r, &Partition::empty());
        let mut s = Section { rows, verdicts: vec![] };
        s.limit(r);
        Ok(s)
    }));
    let u = unit.clone();
    jobs.push(Box::new(move || {
        let window = enumerate(m, k);
        let r = verify_idempotent_limits(&u, &LimitParams::NonArch(pr), &c.non_arch_qs(), &window, Truncation::default(), crit)?;
        let mut s = Section { rows: limit_rows(c, &r, &u), verdicts: vec![] };
        s.limit(r);
        Ok(s)
    }));
    if m <= 2 {
        let u = unit.clone();
        jobs.push(Box::new(move || {
            let ap = ArchParams::grassmannian(n, m, GrassField::Real)?;
            let trunc = Truncation { tol: 1e-12, ..Truncation::default() };
            let r = verify_idempotent_limits(&u, &LimitParams::Arch(ap), &c.arch_qs(m), &[], trunc, crit)?;
            let mut s = Section { rows: limit_rows(c, &r, &u), verdicts: vec![] };
            s.limit(r);
            Ok(s)
        }));
    }
    if m == 1 {
        for l in 1..=3usize {
            jobs.push(Box::new(move || {
                let mut s = Section::default();
                let r = verify_dim_limit(l, &DimLimit::NonArch(pr), &c.non_arch_qs(), crit)?;
                s.rows.extend(limit_rows(c, &r, &single(l)));
                s.limit(r);
                for field in [GrassField::Complex, GrassField::Real] {
                    let r = verify_dim_limit(l, &DimLimit::Arch { n, field }, &c.arch_qs(1), crit)?;
                    s.rows.extend(limit_rows(c, &r, &single(l)));
                    s.limit(r);
                }
                let ap = ArchParams::grassmannian(n, 1, GrassField::Real)?;
                let (r, _) = verify_jacobi_1d_arch_limit(l, ap.alpha, ap.beta, &c.arch_qs(1), crit)?;
                s.rows.extend(limit_rows(c, &r, &single(l)));
                s.limit(r);
                Ok(s)
            }));
        }
    }
    fan_out(jobs)
}

fn suite(c: &Ctx, s: Suite) -> Result<Section> {
    match s {
        Suite::Counting => verify_counting(c),
        Suite::Measures => verify_measures(c),
        Suite::Orthogonality => verify_orthogonality(c),
        Suite::Limits => verify_limits(c),
        Suite::All => {
            let mut out = Section::default();
            for s in [Suite::Counting, Suite::Measures, Suite::Orthogonality, Suite::Limits] {
                out.extend(suite(c, s)?);
            }
            Ok(out)
        }
    }
}

/// Numeric agreement of two rendered values: exact strings must match as
/// rationals, decimals to `digits - 3` significant digits.
fn same_value(a: &str, b: &str, digits: usize) -> bool {
    if a == b {
        return true;
    }
    match (parse_frac(a), parse_frac(b)) {
        (Some(x), Some(y)) => x == y,
        (None, None) => match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(y)) => {
                let tol = 10f64.powi(-(digits.min(15) as i32 - 3));
                (x - y).abs() <= tol * x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
            }
            _ => false,
        },
        _ => false,
    }
}

/// Recomputes a saved report from its command and parameters and compares
/// every row; the recomputed verdicts are carried over.
pub fn replay(saved: &Report) -> Result<Report> {
    let cmd = Command::parse(&saved.command)?;
    let cfg = RunConfig::new(cmd, saved.params.clone());
    cfg.validate()?;
    let fresh = execute(&cfg)?;
    let digits = decimal_digits(saved.params.precision);
    let index: BTreeMap<(Option<&str>, &Partition), &Row> = fresh.rows.iter().map(|r| ((r.series.as_deref(), &r.key), r)).collect();
    let mut bad = Vec::new();
    for r in &saved.rows {
        match index.get(&(r.series.as_deref(), &r.key)) {
            Some(f) if f.provenance == r.provenance && same_value(&f.value, &r.value, digits) => {}
            Some(f) => bad.push(format!("{} {}: saved {} recomputed {}", r.series.as_deref().unwrap_or(""), r.key, r.value, f.value)),
            None => bad.push(format!("{} {}: not recomputed", r.series.as_deref().unwrap_or(""), r.key)),
        }
    }
    let mut verdicts = vec![Verdict {
        check: format!("replay {} ({} rows)", saved.command, saved.rows.len()),
        pass: bad.is_empty() && saved.rows.len() == fresh.rows.len(),
        detail: format!("{} mismatched, {} recomputed rows{}", bad.len(), fresh.rows.len(), first_failures(&bad)),
    }];
    for v in &saved.verdicts {
        let now = fresh.verdicts.iter().find(|f| f.check == v.check);
        verdicts.push(Verdict {
            check: format!("replay verdict {}", v.check),
            pass: now.is_some_and(|f| f.pass == v.pass),
            detail: match now {
                Some(f) => format!("saved pass={} recomputed pass={}: {}", v.pass, f.pass, f.detail),
                None => "not recomputed".into(),
            },
        });
    }
    verdicts.extend(fresh.verdicts.iter().cloned());
    Ok(Report { command: "verify replay".into(), params: saved.params.clone(), rows: fresh.rows, verdicts })
}

/// Builds the report for a validated configuration.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if let Command::Verify { replay: Some(path), .. } = &cfg.command {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        return replay(&Report::from_json(&text)?);
    }
    let c = Ctx::new(&cfg.params);
    let s = match &cfg.command {
        Command::Measure => measure(&c)?,
        Command::Idempotents => idempotent_tables(&c)?,
        Command::Binomial => binomial(&c)?,
        Command::Dims => dims(&c)?,
        Command::Oracle => oracle_tables(&c)?,
        Command::Verify { suite: which, .. } => suite(&c, *which)?,
    };
    Ok(Report { command: cfg.command.name(), params: cfg.params.clone(), rows: s.rows, verdicts: s.verdicts })
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    }
}

/// Executes, writes the report and returns the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let report = match execute(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = render(&report, cfg.format);
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    for v in report.verdicts.iter().filter(|v| !v.pass) {
        eprintln!("FAIL {}: {}", v.check, v.detail);
    }
    if report.passed() {
        0
    } else {
        1
    }
}

#[derive(Debug, Parser)]
#[command(name = "grassq", version, about = "Grassmannian harmonic analysis tables and verification suites")]
pub struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Ambient rank.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Grassmannian rank, at most n/2.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
    /// Residue characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Residue field degree.
    #[arg(long, global = true, default_value_t = 1)]
    r: u32,
    /// Level.
    #[arg(long, global = true, default_value_t = 2)]
    k: usize,
    /// Weight cutoff for tables and grids.
    #[arg(long, global = true, default_value_t = 6)]
    cutoff: usize,
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    precision: usize,
    /// Tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// q-values for the q -> 0 direction, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    q_seq: Option<Vec<f64>>,
    /// q-values for the q -> 1 direction, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    arch_q_seq: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// dh_k, dh_infty, q-Selberg and Selberg tables.
    Measure,
    /// e_λ values and E^q coefficients.
    Idempotents,
    /// Generalized binomial coefficients at q = 0.
    Binomial,
    /// Dimension interpolants along q-sweeps.
    Dims,
    /// Brute-force submodule counts and orbit measure.
    Oracle,
    /// Run a verification suite, or replay a saved JSON report.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        replay: Option<PathBuf>,
    },
}

impl Args {
    pub fn into_config(self) -> RunConfig {
        let command = match self.command {
            Cmd::Measure => Command::Measure,
            Cmd::Idempotents => Command::Idempotents,
            Cmd::Binomial => Command::Binomial,
            Cmd::Dims => Command::Dims,
            Cmd::Oracle => Command::Oracle,
            Cmd::Verify { suite, replay } => Command::Verify { suite, replay },
        };
        let params = Params {
            n: self.n,
            m: self.m,
            p: self.p,
            r: self.r,
            k: self.k,
            cutoff: self.cutoff,
            precision: self.precision,
            tol: self.tol,
            q_seq: self.q_seq,
            arch_q_seq: self.arch_q_seq,
        };
        RunConfig { command, params, format: self.format, out: self.out }
    }
}

/// Parses arguments and runs; help and version exit 0, parse errors exit 2.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Args::try_parse_from(args) {
        Ok(a) => run(&a.into_config()),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
