//! Regional, quasi and overall dependence for a few tables.
use depcore::measures::{overall_dependence, Calibration};
use depcore::ProbTable;
use ndarray::{array, Array2};

fn main() -> depcore::Result<()> {
    let tables = [
        ("uniform", ProbTable::new(Array2::from_elem((3, 3), 1.0 / 9.0))?),
        ("odds ratio 6", ProbTable::new(array![[0.4, 0.1], [0.2, 0.3]])?),
        ("block diagonal", ProbTable::from_weights(array![[2.0, 0.0, 0.0], [0.0, 1.0, 3.0], [0.0, 2.0, 1.0]])?),
        ("diagonal", ProbTable::new(array![[0.3, 0.0], [0.0, 0.7]])?),
    ];
    for (name, t) in &tables {
        for cal in [Calibration::Yule, Calibration::Gauss] {
            let m = overall_dependence(t, cal);
            println!(
                "{name:15} {cal:5}: R = {:.4}, Q = {:.4}, D = {:.4} (norm {:.4}, {} of {} parameters free)",
                m.regional, m.quasi_deviation, m.overall, m.norm2, m.dim_gamma, m.max_parameters
            );
        }
    }
    Ok(())
}
