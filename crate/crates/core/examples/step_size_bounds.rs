//! Correlation-matrix spectra and LMS step-size limits, with Monte Carlo
//! estimates of the drive statistics they rest on.

use chaoticlms::logistic::{center, LogisticParams};
use chaoticlms::theory::{
    analytic_spectrum, build_correlation_matrix, empirical_correlation_matrix, empirical_fourth_moment_matrix,
    fluctuation_decay_factor, fourth_moment_coefficient, mu_bound_fluctuation, mu_bound_mean, wiener_solution,
};

fn main() {
    println!(
        "{:>5}  {:>10}  {:>10}  {:>12}  {:>12}",
        "m", "sigma raw", "2/l_max", "16/(3+2m)", "decay"
    );
    for m in [0, 1, 3, 8, 32, 128] {
        let mu = mu_bound_fluctuation(m);
        println!(
            "{m:>5}  {:>10}  {:>10.5}  {:>12.6}  {:>12.8}",
            analytic_spectrum(m, false).sigma,
            mu_bound_mean(m, false),
            mu,
            fluctuation_decay_factor(mu, m)
        );
    }

    let m = 4;
    let raw = LogisticParams::default().orbit(400_000).unwrap();
    let centered = center(raw.clone()).unwrap();
    let r_hat = empirical_correlation_matrix(&raw.samples, m).unwrap();
    let f_hat = empirical_fourth_moment_matrix(&centered.samples, m).unwrap();
    println!(
        "\nraw R, m = {m} (theory 3/8 on the diagonal, 1/4 elsewhere):\n{:.4}",
        r_hat.entries
    );
    println!(
        "centered E[(x'x) xx'] (theory {} I):\n{:.4}",
        fourth_moment_coefficient(m),
        f_hat.entries
    );

    // with uncorrelated residuum the Wiener solution is b itself
    let b = [1.0, 0.2, -0.45, -0.472, 0.0];
    let r = build_correlation_matrix(m, true);
    let w = wiener_solution(&b, &r, &[0.0; 5]).unwrap();
    println!("Wiener solution with rho = 0: {w:?}");
}
