//! Time-domain simulation of FIR channel estimation with LMS adaptation.

pub mod channel;
pub mod drive;
pub mod estimate;
pub mod lms;

pub use channel::IirChannel;
pub use drive::{
    gaussian_source, load_external_signal, normalize_peak, seeded_x0, stream_seed, synthetic_speech, DriveSource,
    ExternalSignal, GaussianSource,
};
pub use estimate::{average_traces, run_estimation, Estimation, MmaTrace, TraceMeta};
pub use lms::{FirTaps, LmsState, StepSize, DIVERGENCE_NORM};
