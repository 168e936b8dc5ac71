//! Exact moments of the f4 invariant density, checked three ways: the
//! closed-form product, the Kummer-series route, and direct quadrature.

use chaoticlms::stats::{kummer_moment, kummer_series, quadrature_moment, to_f64, MomentTable};

fn main() {
    let t = MomentTable::new(14);
    println!(
        "{:>3}  {:>14}  {:>18}  {:>12}",
        "nu", "m_nu", "centered m_nu", "quadrature"
    );
    for nu in 0..=t.max_order as usize {
        let raw = &t.raw[nu];
        assert_eq!(*raw, kummer_moment(nu as u32));
        println!(
            "{nu:>3}  {:>14}  {:>18}  {:>12.10}",
            raw.to_string(),
            t.centered[nu].to_string(),
            quadrature_moment(nu as u32)
        );
    }

    // characteristic function of the density at xi = 1: M(1/2, 1, 1) = sum m_nu / nu!
    let psi = kummer_series(0.5, 1.0, 1.0, 1e-15).unwrap();
    let mut fact = 1.0;
    let mut sum = 0.0;
    for nu in 0..=t.max_order {
        if nu > 0 {
            fact *= nu as f64;
        }
        sum += to_f64(&t.raw[nu as usize]) / fact;
    }
    println!("\nM(1/2, 1, 1) = {psi:.12}  (truncated moment sum {sum:.12})");
}
