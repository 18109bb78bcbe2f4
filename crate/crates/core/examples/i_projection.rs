//! The I-projection onto a Fréchet class and the Pythagorean identity of
//! Kullback-Leibler divergence.
use depcore::projection::{i_project, kl_divergence, pythagoras_check, IpfOptions};
use depcore::ProbTable;
use ndarray::array;

fn main() -> depcore::Result<()> {
    let source = ProbTable::from_weights(array![[3.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 4.0]])?;
    let other = ProbTable::from_weights(array![[1.0, 1.0, 2.0], [2.0, 1.0, 1.0], [1.0, 3.0, 1.0]])?;
    let proj = i_project(&source, &other.margins(), IpfOptions::default())?.result;
    println!("projection of source onto the margins of other =\n{:.6}", proj.probs());
    println!("I(proj || source) = {:.10}", kl_divergence(&proj, &source)?);
    println!("I(other || source) = {:.10}", kl_divergence(&other, &source)?);

    let terms = pythagoras_check(&source, &other, IpfOptions::default())?;
    println!(
        "I(other||source) = {:.12}, I(other||proj) + I(proj||source) = {:.12}, defect {:.1e}",
        terms.lhs,
        terms.rhs_other_to_projection + terms.rhs_projection_to_source,
        terms.defect()
    );
    Ok(())
}
