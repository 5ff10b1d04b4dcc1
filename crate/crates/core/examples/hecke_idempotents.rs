//! Minimal idempotents of the spherical Hecke algebra at finite level,
//! checked under convolution with counted structure constants.

use grassq::nonarch::{dims_1d, idempotents, HeckeAlgebra, HeckeElement, NonArchParams};

fn main() -> grassq::Result<()> {
    let pr = NonArchParams::new(4, 2, 2, 1)?;
    let k = 2;
    let es = idempotents(&pr, k)?;
    for (l, e) in &es {
        let vals: Vec<String> = e.values().iter().map(|(mu, v)| format!("{mu}:{v}")).collect();
        println!("e_{l:<6} {}", vals.join("  "));
    }

    let alg = HeckeAlgebra::new(&pr, k)?;
    let sum = es.iter().fold(HeckeElement::zero(pr.m, k), |acc, (_, e)| acc.add(e));
    println!("Σ e_λ is the unit: {}", sum == alg.unit());
    let ok = es.iter().all(|(l, e)| es.iter().all(|(mu, f)| {
        let g = alg.convolve(e, f);
        if l == mu { g == *e } else { g.is_zero() }
    }));
    println!("e_λ * e_μ = δ e_λ: {ok}");

    let line = NonArchParams::new(2, 1, 2, 1)?;
    let d: Vec<String> = (0..6).map(|l| dims_1d(l, &line).map(|x| x.to_string())).collect::<grassq::Result<_>>()?;
    println!("projective line over Z_2, dim e_λ: {}", d.join(", "));
    Ok(())
}
