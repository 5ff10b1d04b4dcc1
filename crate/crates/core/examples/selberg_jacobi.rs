//! The Selberg measure on real and complex Grassmannians, generalized Jacobi
//! polynomials by quadrature, and representation dimensions.

use grassq::arch::{dims_arch, gen_jacobi, jacobi_1d, selberg_total, ArchParams, GrassField, QuadratureSpec};
use grassq::arith::Real;
use grassq::partitions::{up_to_weight, Partition};

fn main() -> grassq::Result<()> {
    for field in [GrassField::Real, GrassField::Complex] {
        let ap = ArchParams::grassmannian(4, 2, field)?;
        let (total, err) = selberg_total(&ap, QuadratureSpec::default())?;
        println!("{field:?} Gr(2,4): (α,β,γ) = ({},{},{}), total {} ± {err:.0e}", ap.alpha, ap.beta, ap.gamma, total.to_sci_string(12));
        for l in up_to_weight(2, 2) {
            let e = gen_jacobi(&l, &ap, QuadratureSpec::default())?;
            let terms: Vec<String> = e.coeffs().iter().map(|(nu, c)| format!("{}·m_{nu}", c.to_sci_string(6))).collect();
            println!("  E_{l:<5} = {}", terms.join(" + "));
        }
    }
    let e = jacobi_1d(2, &Real::from_f64(2.0, 128), &Real::from_f64(1.0, 128))?;
    println!("closed form, λ = 2, (α,β) = (2,1): {:?}", e.coeffs().values().map(|c| c.to_f64()).collect::<Vec<_>>());
    let ap = ArchParams::new(2.0, 1.0, 1.0, 1)?;
    let q = gen_jacobi(&Partition::rectangle(2, 1), &ap, QuadratureSpec::default())?;
    println!("by quadrature:                     {:?}", q.coeffs().values().map(|c| c.to_f64()).collect::<Vec<_>>());
    for (n, f) in [(3, GrassField::Real), (2, GrassField::Complex)] {
        let d: Vec<String> = (0..5).map(|l| dims_arch(l, n, f).map(|x| x.to_string())).collect::<grassq::Result<_>>()?;
        println!("dims on P^{} over {f:?}: {}", n - 1, d.join(", "));
    }
    Ok(())
}
