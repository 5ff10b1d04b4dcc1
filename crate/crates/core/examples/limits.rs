//! The q -> 0 and q -> 1 limits: measures, cellular values, idempotents,
//! one-variable Jacobi polynomials and dimensions.

use grassq::arch::GrassField;
use grassq::limits::{
    default_arch_sequence, default_non_arch_sequence, verify_cq_limit, verify_dim_limit, verify_idempotent_limits,
    verify_jacobi_1d_arch_limit, verify_measure_limit, Criteria, DimLimit, LimitParams, Truncation,
};
use grassq::nonarch::NonArchParams;
use grassq::partitions::{part, up_to_weight};

fn main() -> grassq::Result<()> {
    let crit = Criteria::decay_only();
    let pr = NonArchParams::new(4, 2, 2, 1)?;
    let r = verify_measure_limit(&pr, &default_non_arch_sequence(), 6, crit)?;
    println!("{}: {:?} -> {}", r.instance, r.deviations, r.detail);

    let v = verify_cq_limit(&part(&[2, 1]), &part(&[1]), 2, 1)?;
    println!("C^q at q = 0 for ((2,1),(1)): {} vs count {}", v.limit, v.count);

    let r = verify_idempotent_limits(&part(&[1]), &LimitParams::NonArch(pr), &default_non_arch_sequence(), &up_to_weight(3, 2), Truncation::default(), crit)?;
    println!("{}: {}", r.instance, r.detail);

    let (r, rel) = verify_jacobi_1d_arch_limit(1, 2.0, 1.0, &default_arch_sequence(), crit)?;
    println!("{}: {} (relative {rel:.2e})", r.instance, r.detail);

    let line = NonArchParams::new(2, 1, 2, 1)?;
    for l in 1..=3 {
        let a = verify_dim_limit(l, &DimLimit::NonArch(line), &default_non_arch_sequence(), crit)?;
        let b = verify_dim_limit(l, &DimLimit::Arch { n: 2, field: GrassField::Complex }, &default_arch_sequence(), crit)?;
        println!("{}: {}\n{}: {}", a.instance, a.detail, b.instance, b.detail);
    }
    Ok(())
}
