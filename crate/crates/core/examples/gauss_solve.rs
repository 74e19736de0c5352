//! Solves for the Gauss parameters of the defect gauge element and checks
//! the gauge relation between the two hatted connections.

use liouville_defect::gauge::{
    flat_time_derivatives, gauge_relation_residual, solve_gauss_parameters, verify_gauge_relation, GaussParams,
};
use liouville_defect::sim::{BorderFunction, Jet, JetPair, Params};

fn main() -> liouville_defect::Result<()> {
    let samples = [(0.1, -0.3), (0.7, 0.2), (-0.5, 1.1), (1.3, -0.9), (-1.2, -1.4), (0.4, 0.9)];
    for (mu, lambda) in [(1.0, 0.8), (0.5, -1.5), (-2.0, 0.3), (2.5, 2.9)] {
        let p = solve_gauss_parameters(mu, lambda, &samples)?;
        println!(
            "mu = {mu:>4}, lambda = {lambda:>4}: (l1, l2, l3) = ({:.12}, {:.2e}, {:.2e}), expected 2 lambda = {}",
            p.lambda1,
            p.lambda2,
            p.lambda3,
            2.0 * lambda
        );
    }

    let border: BorderFunction = Params::new(1.0, Params::DEFAULT_K, 0.8).border()?;
    let (p1, p2) = (0.4, -0.6);
    let (t1, t2) = flat_time_derivatives(&border, p1, p2);
    let jet = |phi, phi_t| Jet { phi, phi_t, ..Jet::default() };
    let pair = JetPair::new(jet(p1, t1), jet(p2, t2));
    println!("gauge relation residual, g_c = exp(2 lambda E+): {:.2e}", verify_gauge_relation(&pair, &border)?.max_abs());
    let wrong = gauge_relation_residual(&pair, &border, &GaussParams::new(1.6, 0.0, 0.1))?;
    println!("gauge relation residual, perturbed g_c:          {:.2e}", wrong.max_abs());
    Ok(())
}
