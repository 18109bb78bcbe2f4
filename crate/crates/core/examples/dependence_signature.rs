//! Rescaling rows and columns changes the margins but never the dependence;
//! transposing or permuting a table generally does.
use depcore::measures::{kendall_tau, mutual_information};
use depcore::{compare, signature_of, ProbTable};
use ndarray::array;

fn main() -> depcore::Result<()> {
    let t = ProbTable::from_weights(array![[5.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 1.0, 6.0]])?;
    let u = t.group_transform(&[3.0, 1.0, 0.2], &[0.5, 2.0, 1.0])?;
    println!("original margins: {:?} / {:?}", t.row_margin(), t.col_margin());
    println!("rescaled margins: {:?} / {:?}", u.row_margin(), u.col_margin());

    let c = compare(&t, &u)?;
    println!("same dependence after rescaling: {} (gap {:.2e})", c.same_dependence(1e-9), c.lambda_gap.unwrap());
    println!(
        "norms: {:.12} vs {:.12}",
        signature_of(&t).norm2,
        signature_of(&u).norm2
    );
    println!(
        "mutual information moves: {:.6} -> {:.6}; Kendall tau moves: {:.6} -> {:.6}",
        mutual_information(&t),
        mutual_information(&u),
        kendall_tau(&t),
        kendall_tau(&u)
    );

    let swapped = t.permute(&[1, 0, 2], &[0, 1, 2])?;
    println!("same dependence after swapping two rows: {}", compare(&t, &swapped)?.same_dependence(1e-9));
    Ok(())
}
