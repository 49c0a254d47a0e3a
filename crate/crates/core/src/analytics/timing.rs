use std::time::Instant;

use crate::error::{Error, Result};

/// Wall-clock timing of one stage, in milliseconds per input sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    pub label: String,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub batch: usize,
    pub reps: usize,
    pub warmup: usize,
    pub threads: usize,
}

impl TimingReport {
    pub fn to_key_value(&self) -> String {
        format!(
            "label={} median_ms_per_sample={:.6} min_ms={:.6} max_ms={:.6} batch={} reps={} warmup={} threads={}",
            self.label,
            self.median_ms,
            self.min_ms,
            self.max_ms,
            self.batch,
            self.reps,
            self.warmup,
            self.threads
        )
    }

    pub const CSV_HEADER: &'static str =
        "label,median_ms_per_sample,min_ms,max_ms,batch,reps,warmup,threads";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{:.6},{:.6},{:.6},{},{},{},{}",
            self.label,
            self.median_ms,
            self.min_ms,
            self.max_ms,
            self.batch,
            self.reps,
            self.warmup,
            self.threads
        )
    }
}

/// Runs `stage` once per sample: `warmup` untimed batches, then `reps` timed
/// batches of `batch` calls each. Reports the median per-sample time.
///
/// Everything runs on the calling thread.
pub fn time_stage<E>(
    label: &str,
    mut stage: impl FnMut() -> std::result::Result<(), E>,
    batch: usize,
    reps: usize,
    warmup: usize,
) -> Result<TimingReport>
where
    E: Into<Error>,
{
    if reps < 3 {
        return Err(Error::InvalidArgument(format!(
            "timing needs at least 3 repetitions, got {reps}"
        )));
    }
    if batch == 0 {
        return Err(Error::InvalidArgument("batch size must be positive".into()));
    }
    for _ in 0..warmup {
        for _ in 0..batch {
            stage().map_err(Into::into)?;
        }
    }
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        for _ in 0..batch {
            stage().map_err(Into::into)?;
        }
        let ms = start.elapsed().as_secs_f64() * 1e3 / batch as f64;
        samples.push(ms.max(f64::MIN_POSITIVE));
    }
    samples.sort_by(f64::total_cmp);
    let median = if reps % 2 == 1 {
        samples[reps / 2]
    } else {
        0.5 * (samples[reps / 2 - 1] + samples[reps / 2])
    };
    Ok(TimingReport {
        label: label.to_string(),
        median_ms: median,
        min_ms: samples[0],
        max_ms: samples[reps - 1],
        batch,
        reps,
        warmup,
        threads: 1,
    })
}
