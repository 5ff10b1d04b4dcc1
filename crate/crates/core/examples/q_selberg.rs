//! The q-Selberg measure: atom masses, truncated totals with tail bounds,
//! and the two candidate local exponents.

use grassq::arith::rat;
use grassq::partitions::up_to_weight;
use grassq::qgrass::{F2Exponent, QParams, QSelberg};

fn main() -> grassq::Result<()> {
    let p = QParams::from_ratios(&rat(1, 2), &rat(3, 10), &rat(2, 5), &rat(3, 5), 2, 128)?;
    let s = QSelberg::new(&p, F2Exponent::Proof)?;
    for l in up_to_weight(3, 2) {
        println!("w(q^{l} t^ρ) = {}", s.mass(&l)?.to_sci_string(12));
    }
    for v in [F2Exponent::Proof, F2Exponent::Display] {
        let t = QSelberg::new(&p, v)?.total_auto(24, 1e-12, 2000)?;
        println!("{v:?}: total {} (cutoff {}, tail {:.1e})", t.total.to_sci_string(15), t.cutoff, t.tail);
    }
    Ok(())
}
