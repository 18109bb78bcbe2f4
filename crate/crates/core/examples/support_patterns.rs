//! Structural zeros: how many dependence parameters a support leaves free,
//! its maximal zero rectangles, and which margins it can carry.
use depcore::support::{frechet_feasible, gamma_basis, maximal_zero_rectangles};
use depcore::{dim_gamma, MarginPair, SupportPattern};

fn main() -> depcore::Result<()> {
    let patterns = [
        ("full 3x3", "xxx/xxx/xxx"),
        ("block diagonal", "x../.xx/.xx"),
        ("zero diagonal", ".xx/x.x/xx."),
        ("diagonal", "x../.x./..x"),
    ];
    for (name, picture) in patterns {
        let s = SupportPattern::parse(picture)?;
        let rects: Vec<String> = maximal_zero_rectangles(&s)
            .iter()
            .map(|r| format!("{:?}x{:?}", r.rows, r.cols))
            .collect();
        println!(
            "{name:15} {picture}: dim = {}, components = {}, zero rectangles = [{}]",
            dim_gamma(&s),
            s.components(),
            rects.join(", ")
        );
    }

    let loop_basis = gamma_basis(&SupportPattern::parse(".xx/x.x/xx.")?);
    println!("zero-diagonal basis element:\n{:.4}", loop_basis.elements()[0]);

    let triangle = SupportPattern::parse("xx/.x")?;
    for rows in [[0.7, 0.3], [0.5, 0.5], [0.3, 0.7]] {
        let m = MarginPair::new(rows.to_vec(), vec![0.5, 0.5])?;
        let rep = frechet_feasible(&triangle, &m)?;
        println!("support xx/.x, rows {rows:?}, cols [0.5, 0.5]: {:?}", rep.verdict);
    }
    Ok(())
}
