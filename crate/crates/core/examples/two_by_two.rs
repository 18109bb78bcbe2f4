//! For a 2x2 table the dependence is one number: half the log odds ratio.
use depcore::measures::{overall_dependence, Calibration};
use depcore::{signature_of, ProbTable};
use ndarray::array;

fn main() -> depcore::Result<()> {
    let t = ProbTable::new(array![[0.4, 0.1], [0.2, 0.3]])?;
    let p = t.probs();
    let omega = p[[0, 0]] * p[[1, 1]] / (p[[0, 1]] * p[[1, 0]]);
    let sig = signature_of(&t);
    println!("odds ratio = {omega}");
    println!("norm of delta = {:.12}, half log odds ratio = {:.12}", sig.norm2, 0.5 * omega.ln());
    let yule = (omega.sqrt() - 1.0) / (omega.sqrt() + 1.0);
    let m = overall_dependence(&t, Calibration::Yule);
    println!("yule-calibrated Q = {:.12}, colligation coefficient = {:.12}", m.quasi_deviation, yule);
    println!("lambda_circ =\n{:.6}", sig.lambda_circ);
    Ok(())
}
