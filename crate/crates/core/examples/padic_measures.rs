//! The p-adic measures: finite level `dh_k` and the limit `dh_∞`.

use grassq::nonarch::{dh_infty, dh_level, NonArchParams};
use grassq::partitions::{enumerate, up_to_weight};
use num_rational::BigRational;

fn main() -> grassq::Result<()> {
    for (n, m, p, r) in [(2, 1, 2, 1), (4, 2, 2, 1), (3, 1, 3, 2)] {
        let pr = NonArchParams::new(n, m, p, r)?;
        println!("(n,m,p,r) = ({n},{m},{p},{r}), residue field of size {}", pr.residue_size());
        for k in 1..=2 {
            let row: Vec<String> = enumerate(m, k).iter().map(|l| Ok(format!("{l}:{}", dh_level(l, k, &pr)?))).collect::<grassq::Result<_>>()?;
            println!("  dh_{k}: {}", row.join("  "));
        }
        let ls = up_to_weight(3, m);
        let row: Vec<String> = ls.iter().map(|l| Ok(format!("{l}:{}", dh_infty(l, &pr)?))).collect::<grassq::Result<_>>()?;
        println!("  dh_∞: {}", row.join("  "));
        let mass: BigRational = up_to_weight(20, m).iter().map(|l| dh_infty(l, &pr)).sum::<grassq::Result<_>>()?;
        println!("  mass of |λ| <= 20: {:.12}", grassq::arith::Real::from_ratio(&mass, 64).to_f64());
    }
    Ok(())
}
