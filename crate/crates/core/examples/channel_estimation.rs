//! One LMS channel-estimation run on the reference IIR channel with a
//! centered f4 drive at the largest stable step size.

use chaoticlms::logistic::{LambdaSchedule, LogisticParams};
use chaoticlms::sim::{DriveSource, Estimation, IirChannel, StepSize};
use chaoticlms::theory::mu_bound_fluctuation;

fn main() -> chaoticlms::Result<()> {
    let channel = IirChannel::reference();
    let m = 128;
    println!("channel pole radius {:.4}", channel.pole_radius());
    println!("first taps {:?}", channel.impulse_response(6)?.0);

    for (label, scale) in [("mu_max", 1.0), ("3 mu_max", 3.0)] {
        let run = Estimation {
            drive: DriveSource::ChaoticCentered {
                params: LogisticParams::default(),
                schedule: LambdaSchedule::Constant(4.0),
            },
            channel: channel.clone(),
            m,
            mu: StepSize::Fixed(scale * mu_bound_fluctuation(m)),
            n_steps: 5000,
            noise_std: 1e-4,
            seed: 1,
        }
        .run()?;
        print!("{label:>9}:");
        for step in (0..=5000).step_by(1000) {
            match run.db_at(step) {
                Some(db) => print!(" {db:>8.1}"),
                None => print!(" {:>8}", "-"),
            }
        }
        match run.diverged_at {
            Some(s) => println!("  diverged at step {s}"),
            None => println!("  dB"),
        }
    }
    Ok(())
}
