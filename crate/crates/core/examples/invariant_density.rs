//! Histogram of a long f4 orbit against the arcsine density.

use chaoticlms::logistic::LogisticParams;
use chaoticlms::stats::{histogram, invariant_density};

fn main() {
    let n = 1_000_000;
    let orbit = LogisticParams::default().orbit(n).unwrap();
    let h = histogram(&orbit.samples, 20, (0.0, 1.0), true).unwrap();
    let expected = h.expected.as_ref().unwrap();
    let width = 1.0 / h.bins() as f64;
    println!("{:>13}  {:>9}  {:>9}", "bin", "observed", "expected");
    for (k, (&c, &p)) in h.counts.iter().zip(expected).enumerate() {
        let (lo, hi) = h.edges(k);
        let obs = c as f64 / n as f64;
        let bar = "#".repeat((obs / width * 20.0).round() as usize);
        println!("[{lo:.2}, {hi:.2})  {obs:>9.5}  {p:>9.5}  {bar}");
    }
    println!("\nrho_4(1/2) = {:.6} (= 2/pi)", invariant_density(0.5).unwrap());
}
