//! Statistical theory of the ergodic map `f_4` and empirical estimators.
//!
//! Closed forms are kept in exact rational arithmetic ([`exact`]); the
//! quadrature routines in [`quadrature`] evaluate the defining integrals
//! directly and act as independent checks on those closed forms.

pub mod density;
pub mod empirical;
pub mod exact;
pub mod kummer;
pub mod quadrature;
pub mod report;

pub use density::{expected_bin_probability, invariant_cdf, invariant_density};
pub use empirical::{empirical_autocorr, empirical_moments, histogram, AutocorrEstimate, Histogram};
pub use exact::{
    centered_moment, kummer_moment, pochhammer, theoretical_autocorr, theoretical_moment, to_f64, MomentTable,
};
pub use kummer::kummer_series;
pub use quadrature::{quadrature_autocorr, quadrature_moment, GaussLegendre};
pub use report::{write_report_csv, ReportRow};
