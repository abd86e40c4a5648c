use super::{Measurement, WorkloadError};

/// Relative spread above which a standard deviation is worth displaying.
pub const STDDEV_DISPLAY_RATIO: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub mean_time: f64,
    pub stddev_time: f64,
    pub mean_ram: Option<f64>,
    pub stddev_ram: Option<f64>,
    pub show_stddev_time: bool,
    pub show_stddev_ram: bool,
    pub samples: usize,
}

/// `stddev > 1% of mean`.
pub fn show_stddev(mean: f64, stddev: f64) -> bool {
    stddev > STDDEV_DISPLAY_RATIO * mean
}

/// Arithmetic mean and sample (n - 1) standard deviation; a single value has
/// zero spread.
pub fn mean_stddev(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

/// RAM statistics cover only measurements with a probe reading.
pub fn summarize(ms: &[Measurement]) -> Result<Summary, WorkloadError> {
    let times: Vec<f64> = ms.iter().map(Measurement::seconds).collect();
    let (mean_time, stddev_time) = mean_stddev(&times).ok_or(WorkloadError::NoMeasurements)?;
    let rams: Vec<f64> = ms.iter().filter_map(|m| m.peak_ram.map(|r| r as f64)).collect();
    let ram = mean_stddev(&rams);
    Ok(Summary {
        mean_time,
        stddev_time,
        mean_ram: ram.map(|r| r.0),
        stddev_ram: ram.map(|r| r.1),
        show_stddev_time: show_stddev(mean_time, stddev_time),
        show_stddev_ram: ram.is_some_and(|(m, s)| show_stddev(m, s)),
        samples: ms.len(),
    })
}
