//! Haar dependence norm of the Gaussian copula as the grid is refined.
use depcore::grid::{gaussian_copula_grid, haar_delta, odds_ratio_function};
use depcore::measures::Calibration;

fn main() -> depcore::Result<()> {
    let rho = 0.5;
    let limit = rho / (1.0 - rho * rho);
    println!("rho = {rho}, limit |rho|/(1-rho^2) = {limit:.6}");
    for level in 5..=9 {
        let g = gaussian_copula_grid(rho, level)?;
        let h = haar_delta(&g)?;
        println!(
            "K = {level}: norm = {:.6}, error = {:.2e}, gauss-calibrated Q = {:.4}",
            h.norm2(),
            (h.norm2() - limit).abs(),
            Calibration::Gauss.apply(h.norm2())
        );
    }
    let g = gaussian_copula_grid(rho, 8)?;
    let om = odds_ratio_function(&g, (128, 128))?;
    println!("odds ratio function at (0.75, 0.75) relative to the median: {:.4}", om[[192, 192]]);
    Ok(())
}
