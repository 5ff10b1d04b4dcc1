//! Little q-Jacobi polynomials: Gram-Schmidt against the q-Selberg measure,
//! the one-variable closed form, and the dimension interpolant.

use grassq::arith::rat;
use grassq::partitions::{up_to_weight, Partition};
use grassq::qgrass::{qdim_1d, qjacobi_1d, QJacobiFamily, QParams};

fn main() -> grassq::Result<()> {
    let p = QParams::from_ratios(&rat(1, 2), &rat(1, 4), &rat(1, 2), &rat(1, 3), 1, 192)?;
    let fam = QJacobiFamily::new(&p, 120, 1e-30)?;
    for l in 0..=3usize {
        let e = fam.jacobi(&Partition::rectangle(l, 1))?;
        let c = qjacobi_1d(l, &p.q, &p.a, &p.b)?;
        let gap = grassq::limits::coefficient_gap(&e, &c);
        println!("E_{l}: x^1 coefficient {}  closed-form gap {gap:.1e}", e.coeff(&Partition::rectangle(1, 1)).map(|x| x.to_sci_string(12)).unwrap_or("0".into()));
    }
    let d: Vec<String> = (0..5).map(|l| qdim_1d(l, &rat(1, 2), &rat(1, 2), &rat(1, 2)).map(|x| x.to_string())).collect::<grassq::Result<_>>()?;
    println!("D^q at q = a = b = 1/2: {}", d.join(", "));

    let p2 = QParams::from_ratios(&rat(1, 2), &rat(3, 10), &rat(2, 5), &rat(3, 5), 2, 192)?;
    let fam = QJacobiFamily::with_auto_cutoff(&p2, 40, 1e-24, 400)?;
    println!("two variables, cutoff {}:", fam.cutoff());
    for l in up_to_weight(2, 2) {
        let e = fam.jacobi(&l)?;
        let terms: Vec<String> = e.coeffs().iter().map(|(nu, c)| format!("{}·m_{nu}", c.to_sci_string(6))).collect();
        println!("  E_{l:<5} = {}", terms.join(" + "));
    }
    Ok(())
}
