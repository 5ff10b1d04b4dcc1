//! Brute-force counts over finite rings: submodules of `Z/p^μ` by type,
//! Hall numbers, and the orbit measure on a Grassmannian over `Z/p^k`.

use grassq::oracle::{count_hall, count_submodules, grassmannian, orbit_measure};
use grassq::partitions::{leq_contain, part, up_to_weight};

fn main() -> grassq::Result<()> {
    let p = 2;
    let mu = part(&[2, 1]);
    println!("submodules of Z/{}^(2,1) by type:", p);
    for l in up_to_weight(3, 2).iter().filter(|l| leq_contain(l, &mu)) {
        println!("  {l:<6} {}", count_submodules(&mu, l, p)?);
    }

    let (l, nu) = (part(&[1]), part(&[2]));
    println!("Hall number g^{mu}_{{{nu},{l}}} at p = {p}: {}", count_hall(&mu, &l, &nu, p)?);

    let gr = grassmannian(4, 2, 2, 1)?;
    println!("Gr(2,4) over Z/2 has {} points; orbit measure:", gr.len());
    for (orbit, m) in orbit_measure(4, 2, 2, 1)? {
        println!("  {orbit:<6} {m}");
    }
    Ok(())
}
