//! Iterative proportional fitting moves a table to new margins and keeps
//! its dependence; an infeasible target is detected before fitting.
use depcore::projection::{ipf, IpfOptions};
use depcore::support::frechet_feasible;
use depcore::{same_dependence, MarginPair, ProbTable};
use ndarray::array;

fn main() -> depcore::Result<()> {
    let start = ProbTable::from_weights(array![[4.0, 1.0, 0.0], [2.0, 3.0, 1.0], [0.0, 1.0, 5.0]])?;
    let target = MarginPair::new(vec![0.2, 0.5, 0.3], vec![0.4, 0.35, 0.25])?;
    println!("feasibility: {:?}", frechet_feasible(start.support(), &target)?.verdict);

    let rep = ipf(&start, &target, IpfOptions::default())?;
    println!(
        "converged = {} after {} sweeps, margin gap {:.1e}, contraction {:.3}",
        rep.converged,
        rep.iterations,
        rep.final_margin_gap,
        rep.contraction.unwrap_or(0.0)
    );
    println!("result =\n{:.6}", rep.result.probs());
    println!("alpha = {:.4?}\nbeta = {:.4?}", rep.alpha, rep.beta);
    println!("factorization residual = {:.2e}", rep.factorization_residual(&start));
    println!("same dependence as start: {}", same_dependence(&start, &rep.result, 1e-9)?);

    let diagonal = ProbTable::new(array![[0.5, 0.0], [0.0, 0.5]])?;
    let unequal = MarginPair::new(vec![0.3, 0.7], vec![0.6, 0.4])?;
    let verdict = frechet_feasible(diagonal.support(), &unequal)?;
    println!("diagonal support with unequal margins: {:?}, witnesses {:?}", verdict.verdict, verdict.witnesses);
    Ok(())
}
