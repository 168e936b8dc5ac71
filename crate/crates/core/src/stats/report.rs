use std::io::Write;

/// One line of a moment or autocorrelation report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub order_or_lag: usize,
    pub theoretical: f64,
    pub empirical: f64,
}

impl ReportRow {
    pub fn abs_error(&self) -> f64 {
        (self.theoretical - self.empirical).abs()
    }
}

/// CSV `order_or_lag,theoretical,empirical,abs_error`.
pub fn write_report_csv<W: Write>(rows: &[ReportRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "order_or_lag,theoretical,empirical,abs_error")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.order_or_lag,
            r.theoretical,
            r.empirical,
            r.abs_error()
        )?;
    }
    Ok(())
}
