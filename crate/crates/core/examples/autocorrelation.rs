//! Autocorrelation of raw and zero-mean logistic sequences. At lambda = 4 the
//! centered sequence is white; slightly below 4 it is not.

use chaoticlms::logistic::{center, generate_orbit, LambdaSchedule, LogisticParams};
use chaoticlms::stats::{empirical_autocorr, quadrature_autocorr, theoretical_autocorr, to_f64};

fn main() {
    let n = 500_000;
    let lags = 8;
    let orbit = |lambda: f64| {
        let p = LogisticParams::new(lambda, 0.3, 1000).unwrap();
        generate_orbit(&p, n, &LambdaSchedule::Constant(lambda)).unwrap()
    };
    let raw = orbit(4.0);
    let centered = center(raw.clone()).unwrap();
    // subtract the sample mean, since 1/2 is only the lambda = 4 mean
    let s395 = orbit(3.95).samples;
    let mean = s395.iter().sum::<f64>() / n as f64;
    let c395: Vec<f64> = s395.iter().map(|x| x - mean).collect();

    let a = empirical_autocorr(&raw.samples, lags).unwrap();
    let b = empirical_autocorr(&centered.samples, lags).unwrap();
    let c = empirical_autocorr(&c395, lags).unwrap();
    println!("lag   raw theory  raw quad    raw emp   cen theory   cen emp   cen emp (3.95)");
    for m in 0..=lags {
        println!(
            "{m:>3}  {:>10}  {:>8.6}  {:>9.6}  {:>11}  {:>8.5}  {:>15.5}",
            theoretical_autocorr(m as u32, false).to_string(),
            quadrature_autocorr(m as u32).unwrap(),
            a.values[m],
            theoretical_autocorr(m as u32, true).to_string(),
            b.values[m],
            c.values[m]
        );
    }
    println!("\nC4(0) = {}", to_f64(&theoretical_autocorr(0, false)));
}
