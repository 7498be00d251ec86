//! Gibbs initialization of the battery by both routes.
//!
//! Builds the thermal state from the closed-form matrix elements and
//! from the matrix exponential, reports their agreement, and shows how
//! temperature washes out the two coherences.
//!
//! Run with: cargo run --example thermal_state

use qbattery::{gibbs_closed_form, gibbs_numeric, BatteryParams, ThermalSpec};

fn main() {
    let params = BatteryParams {
        delta: 2.0,
        epsilon: 2.0,
        dm: 1.0,
        field: 1.0,
    };

    println!(
        "{:>6}  {:>14}  {:>12}  {:>12}  {:>12}",
        "T", "Z", "|rho_14|", "|rho_23|", "route diff"
    );
    for temperature in [0.5, 1.0, 1.5, 2.0, 5.0] {
        let spec = ThermalSpec::new(temperature).unwrap();
        let closed = gibbs_closed_form(&params, &spec).unwrap();
        let numeric = gibbs_numeric(&params, &spec).unwrap();
        let diff = closed.rho.matrix().max_abs_diff(numeric.rho.matrix());
        println!(
            "{temperature:>6}  {:>14.8}  {:>12.8}  {:>12.8}  {diff:>12.3e}",
            closed.partition_function,
            closed.rho.matrix()[(0, 3)].norm(),
            closed.rho.matrix()[(1, 2)].norm(),
        );
    }

    // Low-temperature limit: the state collapses onto the ground level.
    let cold = gibbs_numeric(&params, &ThermalSpec::from_beta(100.0).unwrap()).unwrap();
    println!();
    println!(
        "beta = 100 populations (ascending energy): {:?}",
        cold.rho.eigenvalues()
    );
    println!("the ground level here is lambda_3 = (-Delta - chi)/6 = {:.12}", (-2.0 - 13.0f64.sqrt()) / 6.0);
}
