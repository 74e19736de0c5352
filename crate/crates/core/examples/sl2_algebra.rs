//! The sl(2) algebra: structure constants, Jacobi identity, the group
//! exponential and the adjoint action.

use liouville_defect::lie::{adjoint, commutator, exp_alg, LieElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> liouville_defect::Result<()> {
    let basis = [("h", LieElement::H), ("E+", LieElement::E_PLUS), ("E-", LieElement::E_MINUS)];
    println!("commutator table [a, b] in (h, E+, E-) coordinates:");
    for (na, a) in basis {
        for (nb, b) in basis {
            println!("  [{na:>2}, {nb:>2}] = {:?}", commutator(a, b).as_array());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut random = || LieElement::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut jacobi: f64 = 0.0;
    for _ in 0..100 {
        let (a, b, c) = (random(), random(), random());
        let j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
        jacobi = jacobi.max(j.max_abs());
    }
    println!("max Jacobi violation over 100 triples: {jacobi:.2e}");

    let x = LieElement::new(0.3, -0.7, 0.4);
    let g = exp_alg(x);
    println!("exp(x) = {:?}, det = {:.15}", g.entries(), g.det());
    println!("exp(x) exp(-x) distance from 1: {:.2e}", (g * exp_alg(-x)).distance_from_identity());
    let y = LieElement::new(1.0, 0.5, -0.25);
    let ad = adjoint(&g, y)?;
    println!("g y g^-1 = {:?}", ad.as_array());
    println!(
        "Ad preserves brackets: {:.2e}",
        (adjoint(&g, commutator(x, y))? - commutator(adjoint(&g, x)?, ad)).max_abs()
    );
    Ok(())
}
