//! Closed-form battery spectrum against the numeric eigensolver.
//!
//! Prints the four levels, the derived scales eta and chi, and the
//! residual of each closed-form eigenvector in the eigen-equation.
//!
//! Run with: cargo run --example spectrum

use qbattery::{
    battery_hamiltonian, closed_form_spectrum, hermitian_eigen, BatteryParams,
};

fn main() {
    let params = BatteryParams {
        delta: 2.0,
        epsilon: 2.0,
        dm: 1.0,
        field: 1.0,
    };
    let h = battery_hamiltonian(&params);
    let spectrum = closed_form_spectrum(&params).expect("non-degenerate parameters");
    let numeric = hermitian_eigen(&h).expect("Hermitian by construction");

    println!("couplings: {params:?}");
    println!(
        "eta = sqrt(B^2 + eps^2) = {:.12},  chi = sqrt(Delta^2 + 9 D^2) = {:.12}",
        spectrum.eta, spectrum.chi
    );
    println!();
    println!("{:>8}  {:>20}  {:>14}", "level", "closed form", "|H v - l v|");
    for (k, (lambda, vector)) in spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.eigenvectors)
        .enumerate()
    {
        let hv = h.mul_vec(vector);
        let residual: f64 = hv
            .iter()
            .zip(vector)
            .map(|(a, b)| (a - b * *lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        println!("{:>8}  {lambda:>20.15}  {residual:>14.3e}", format!("lambda_{}", k + 1));
    }

    let mut sorted = spectrum.eigenvalues;
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let worst = sorted
        .iter()
        .zip(&numeric.eigenvalues)
        .map(|(c, n)| (c - n).abs())
        .fold(0.0f64, f64::max);
    println!();
    println!("sorted closed form vs eigensolver: max |diff| = {worst:.3e}");
    println!(
        "trace check: sum of levels = {:.3e} (the Hamiltonian is traceless)",
        spectrum.eigenvalues.iter().sum::<f64>()
    );
}
