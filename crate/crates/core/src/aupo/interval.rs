use crate::error::{Error, Result};
use crate::special::z_critical;

/// Closed interval over the extended reals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const EVERYTHING: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn centered(center: f64, half_width: f64) -> Self {
        Self::new(center - half_width, center + half_width)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        intervals_overlap(self, other)
    }
}

/// Touching endpoints count as overlap.
pub fn intervals_overlap(a: &Interval, b: &Interval) -> bool {
    a.lo.max(b.lo) <= a.hi.min(b.hi)
}

/// A confidence level with its two-sided critical value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Confidence {
    q: f64,
    z: f64,
}

impl Confidence {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid(format!("confidence level {q} outside [0, 1]")));
        }
        let z = if q == 0.0 {
            0.0
        } else if q == 1.0 {
            f64::INFINITY
        } else {
            z_critical(q)
        };
        Ok(Self { q, z })
    }

    pub fn level(&self) -> f64 {
        self.q
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    fn is_zero(&self) -> bool {
        self.q == 0.0
    }

    fn is_one(&self) -> bool {
        self.q == 1.0
    }
}

/// Mean and Bessel-corrected standard deviation (`None` below two samples).
pub fn sample_mean_std(samples: &[f64]) -> Result<(f64, Option<f64>)> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return Ok((mean, None));
    }
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((mean, Some((ss / (n - 1.0)).sqrt())))
}

pub(crate) fn mean_interval_from(mean: f64, std: Option<f64>, n: usize, conf: Confidence) -> Interval {
    if conf.is_zero() {
        return Interval::point(mean);
    }
    match std {
        Some(s) if !conf.is_one() => Interval::centered(mean, conf.z * s / (n as f64).sqrt()),
        _ => Interval::EVERYTHING,
    }
}

pub(crate) fn std_interval_from(std: Option<f64>, n: usize, conf: Confidence) -> Interval {
    let Some(s) = std else {
        return Interval::EVERYTHING;
    };
    if conf.is_zero() {
        return Interval::point(s);
    }
    if conf.is_one() {
        return Interval::EVERYTHING;
    }
    let half = conf.z * s / (2.0 * n as f64).sqrt();
    Interval::new((s - half).max(0.0), s + half)
}

/// Gaussian interval for the mean: `x̄ ± z*·s/√n`.
///
/// `q = 0` gives the point `[x̄, x̄]`, `q = 1` the whole line. With fewer than
/// two samples (and `q > 0`) the interval is the whole line.
pub fn mean_conf_interval(samples: &[f64], q: f64) -> Result<Interval> {
    let conf = Confidence::new(q)?;
    let (mean, std) = sample_mean_std(samples)?;
    Ok(mean_interval_from(mean, std, samples.len(), conf))
}

/// Mean interval with a known standard deviation `sigma`: `x̄ ± z*·σ/√n`.
pub fn mean_interval_known_std(mean: f64, sigma: f64, n: usize, q: f64) -> Result<Interval> {
    let conf = Confidence::new(q)?;
    if n == 0 {
        return Err(Error::EmptySamples);
    }
    Ok(mean_interval_from(mean, Some(sigma), n, conf))
}

/// Large-sample normal interval for the standard deviation,
/// `s ± z*·s/√(2n)` floored at zero. Fewer than two samples give the whole
/// line whatever `q` is.
pub fn std_conf_interval(samples: &[f64], q: f64) -> Result<Interval> {
    let conf = Confidence::new(q)?;
    let (_, std) = sample_mean_std(samples)?;
    Ok(std_interval_from(std, samples.len(), conf))
}
