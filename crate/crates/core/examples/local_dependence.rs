//! Local dependence: constant for the bivariate normal and for the
//! logistic binary-continuous model, varying for the probit model.
use depcore::grid::{gaussian_density_grid, local_dependence_scaled, mixed_local_dependence};
use depcore::normal::inverse_normal_cdf;
use ndarray::Array2;

fn main() -> depcore::Result<()> {
    let rho = 0.5;
    let g = gaussian_density_grid(rho, 7, 4.0)?;
    let gamma = local_dependence_scaled(&g, 8.0, 8.0)?;
    let (lo, hi) = gamma.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    println!("normal density, rho = {rho}: local dependence in [{lo:.6}, {hi:.6}], expected {:.6}", rho / (1.0 - rho * rho));

    let n = 256;
    let conditional = |p1: &dyn Fn(f64) -> f64| {
        Array2::from_shape_fn((2, n), |(x, j)| {
            let p = p1((j as f64 + 0.5) / n as f64);
            if x == 1 { p } else { 1.0 - p }
        })
    };
    let logistic = conditional(&|y| 1.0 / (1.0 + (1.0 - 2.0 * y).exp()));
    let gamma = mixed_local_dependence(&logistic)?;
    println!("logistic, alpha = -1, beta = 2: first {:.6}, last {:.6}", gamma[0], gamma[n - 2]);

    // Probit link: P(X = 1 | y) = Phi(y). Phi is inverted by bisection on
    // the quantile function to keep this example dependency-free.
    let phi = |y: f64| {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if inverse_normal_cdf(mid) < y { lo = mid } else { hi = mid }
        }
        0.5 * (lo + hi)
    };
    let gamma = mixed_local_dependence(&conditional(&phi))?;
    println!("probit, alpha = 0, beta = 1: first {:.6}, last {:.6}", gamma[0], gamma[n - 2]);
    Ok(())
}
