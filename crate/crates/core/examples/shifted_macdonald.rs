//! Shifted Macdonald polynomials by exact interpolation and the generalized
//! binomial coefficients they produce, over `Q(q)` with `t` fixed.

use grassq::arith::{rat, RatFunc};
use grassq::interp::{shifted_macdonald, BinomialSolver};
use grassq::partitions::{leq_contain, part, up_to_weight};

fn main() -> grassq::Result<()> {
    // numeric q and t
    let p = shifted_macdonald(&part(&[1]), 2, &rat(1, 3), &rat(1, 2))?;
    println!("P*_(1) at q = 1/3, t = 1/2:");
    for (nu, c) in p.in_shifted_coords().coeffs() {
        println!("  m_{nu:<5} {c}");
    }

    // q symbolic, t = 1/2
    let s = BinomialSolver::residue(2, 1);
    let mu = part(&[2, 1]);
    println!("(μ over λ) for μ = {mu}, t = 1/2:");
    for l in up_to_weight(3, 2).iter().filter(|l| leq_contain(l, &mu)) {
        let f: RatFunc = s.gen_binomial(&mu, l, 2)?;
        println!("  λ = {l:<6} {f}   at q = 0: {}", f.at_zero()?);
    }
    Ok(())
}
