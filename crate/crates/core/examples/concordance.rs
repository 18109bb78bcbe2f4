//! Concordance indices are not functions of the dependence alone: the cross
//! example keeps its dependence while Kendall's tau sweeps (2a-1)(2b-1).
use depcore::measures::{cross_example_table, cross_example_tau, plrd_check, pqd_check, spearman_rho};
use depcore::{same_dependence, ProbTable};
use ndarray::array;

fn main() -> depcore::Result<()> {
    let n = 400;
    for (a, b) in [(0.5, 0.5), (0.9, 0.9), (0.9, 0.1), (0.75, 0.6)] {
        let tau = cross_example_tau(n, a, b)?;
        println!("a = {a}, b = {b}: tau = {tau:.4}, limit (2a-1)(2b-1) = {:.4}", (2.0 * a - 1.0) * (2.0 * b - 1.0));
    }
    let c1 = cross_example_table(40, 0.9, 0.9)?;
    let c2 = cross_example_table(40, 0.2, 0.7)?;
    println!("two cross tables share their dependence: {}", same_dependence(&c1, &c2, 1e-9)?);
    println!("Spearman rho: {:.4} vs {:.4}", spearman_rho(&c1), spearman_rho(&c2));

    // Likelihood-ratio dependence is a property of the odds ratios, so it
    // survives rescaling; quadrant dependence need not.
    let plrd = ProbTable::from_weights(array![[3.0, 2.0, 1.0], [2.0, 2.0, 2.0], [1.0, 2.0, 3.0]])?;
    let plrd_scaled = plrd.group_transform(&[1.0, 5.0, 0.2], &[0.3, 1.0, 4.0])?;
    println!("PLRD before and after rescaling: {} -> {}", plrd_check(&plrd), plrd_check(&plrd_scaled));
    let t = ProbTable::from_weights(array![[4.0, 5.0, 1.0], [5.0, 5.0, 4.0], [5.0, 4.0, 5.0]])?;
    let u = t.group_transform(&[5.0, 3.0, 5.0], &[5.0, 2.0, 1.0])?;
    println!("PQD before and after rescaling: {} -> {} (same dependence: {})", pqd_check(&t), pqd_check(&u), same_dependence(&t, &u, 1e-9)?);
    Ok(())
}
