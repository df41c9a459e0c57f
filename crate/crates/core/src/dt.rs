//! Discrete-time LTI systems: sampled sequences, difference equations and
//! their responses.

use num_complex::Complex64;

use crate::ct::FrequencyResponse;
use crate::error::{Error, Result};
use crate::rational::{Domain, Polynomial, RationalTf};

/// Uniformly sampled real signal.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    samples: Vec<f64>,
    sample_rate: f64,
    origin: i64,
}

impl Sequence {
    pub fn new(samples: impl Into<Vec<f64>>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate > 0.0) || !sample_rate.is_finite() {
            return Err(Error::NonPositive {
                name: "sample rate",
                value: sample_rate,
            });
        }
        let samples = samples.into();
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("sequence samples"));
        }
        Ok(Self {
            samples,
            sample_rate,
            origin: 0,
        })
    }

    /// Index of the first stored sample.
    pub fn with_origin(mut self, origin: i64) -> Self {
        self.origin = origin;
        self
    }

    pub fn zeros(n: usize, sample_rate: f64) -> Result<Self> {
        Self::new(vec![0.0; n], sample_rate)
    }

    /// Unit impulse `delta[n]` of length `n`.
    pub fn impulse(n: usize, sample_rate: f64) -> Result<Self> {
        let mut x = vec![0.0; n];
        if let Some(first) = x.first_mut() {
            *first = 1.0;
        }
        Self::new(x, sample_rate)
    }

    /// Unit step `u[n]` of length `n`.
    pub fn step(n: usize, sample_rate: f64) -> Result<Self> {
        Self::new(vec![1.0; n], sample_rate)
    }

    /// Samples `f(t)` at `t = k / Fs`, `k = 0..n`.
    pub fn from_fn(n: usize, sample_rate: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            (0..n).map(|k| f(k as f64 / sample_rate)).collect::<Vec<_>>(),
            sample_rate,
        )
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn period(&self) -> f64 {
        1.0 / self.sample_rate
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample at storage index `k`, reading zero outside the stored range.
    pub fn get(&self, k: isize) -> f64 {
        if k < 0 {
            return 0.0;
        }
        self.samples.get(k as usize).copied().unwrap_or(0.0)
    }

    /// Time of storage index `k` in seconds.
    pub fn time(&self, k: usize) -> f64 {
        (self.origin + k as i64) as f64 / self.sample_rate
    }
}

/// Recurrence `sum_k a[k] y[n-k] = sum_j b[j] x[n-j]`, stored with `a[0] = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceEquation {
    b: Vec<f64>,
    a: Vec<f64>,
}

impl DifferenceEquation {
    /// Builds the recurrence and divides both coefficient sets by `a[0]`.
    pub fn new(b: impl Into<Vec<f64>>, a: impl Into<Vec<f64>>) -> Result<Self> {
        let mut b = b.into();
        let mut a = a.into();
        let a0 = a.first().copied().unwrap_or(0.0);
        if a0 == 0.0 {
            return Err(Error::ZeroLeadingFeedback);
        }
        if b.iter().chain(&a).any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("difference equation coefficients"));
        }
        if b.is_empty() {
            b.push(0.0);
        }
        if a0 != 1.0 {
            b.iter_mut().for_each(|c| *c /= a0);
            a.iter_mut().for_each(|c| *c /= a0);
        }
        Ok(Self { b, a })
    }

    /// Feedforward-only recurrence.
    pub fn fir(b: impl Into<Vec<f64>>) -> Result<Self> {
        Self::new(b, vec![1.0])
    }

    pub fn from_tf(tf: &RationalTf) -> Result<Self> {
        if tf.domain() != Domain::Discrete {
            return Err(Error::DomainMismatch {
                expected: Domain::Discrete,
                found: tf.domain(),
            });
        }
        Self::new(tf.num().coeffs().to_vec(), tf.den().coeffs().to_vec())
    }

    pub fn to_tf(&self) -> RationalTf {
        RationalTf::new(
            Polynomial::new(self.b.clone()),
            Polynomial::new(self.a.clone()),
            Domain::Discrete,
        )
        .expect("a[0] is nonzero")
    }

    /// Feedforward coefficients.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Feedback coefficients, `a[0] == 1`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `B(w) / A(w)` evaluated at a value `w` of the unit delay.
    pub fn eval_delay(&self, w: Complex64) -> Complex64 {
        let horner = |c: &[f64]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * w + v);
        horner(&self.b) / horner(&self.a)
    }

    /// Transfer function at a point `z` of the plane.
    pub fn eval_z(&self, z: Complex64) -> Complex64 {
        self.eval_delay(z.inv())
    }

    pub fn kind(&self) -> FilterKind {
        classify(self)
    }
}

/// Impulse-response class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterKind {
    Fir,
    Iir,
}

/// FIR iff every feedback coefficient past `a[0]` is zero.
pub fn classify(de: &DifferenceEquation) -> FilterKind {
    if de.a[1..].iter().all(|&c| c == 0.0) {
        FilterKind::Fir
    } else {
        FilterKind::Iir
    }
}

/// Runs the recurrence from zero state for `n_out` samples. Input samples
/// past the end of `input` read as zero.
pub fn simulate(de: &DifferenceEquation, input: &Sequence, n_out: usize) -> Sequence {
    let mut y = vec![0.0; n_out];
    for n in 0..n_out {
        let mut acc = 0.0;
        for (j, &bj) in de.b.iter().enumerate() {
            acc += bj * input.get(n as isize - j as isize);
        }
        for (k, &ak) in de.a.iter().enumerate().skip(1) {
            if k <= n {
                acc -= ak * y[n - k];
            }
        }
        y[n] = acc;
    }
    Sequence {
        samples: y,
        sample_rate: input.sample_rate,
        origin: input.origin,
    }
}

/// First `n` samples of the impulse response (unit sample rate).
pub fn impulse_response(de: &DifferenceEquation, n: usize) -> Sequence {
    let x = Sequence::impulse(n, 1.0).expect("unit rate");
    simulate(de, &x, n)
}

/// First `n` samples of the step response (unit sample rate).
pub fn step_response(de: &DifferenceEquation, n: usize) -> Sequence {
    let x = Sequence::step(n, 1.0).expect("unit rate");
    simulate(de, &x, n)
}

/// Geometric sequence `x0 * c^k` for `k = 0..n`, generated by the
/// first-order recurrence `x[k] = c x[k-1]`.
pub fn geometric_mode(c: Complex64, x0: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    let mut x = x0;
    for _ in 0..n {
        out.push(x);
        x *= c;
    }
    out
}

/// `e^{-i 2 pi f / Fs}`, exact at multiples of a quarter turn.
pub fn unit_delay_at(f: f64, fs: f64) -> Complex64 {
    let half_turns = (2.0 * f / fs).rem_euclid(2.0);
    if half_turns == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if half_turns == 0.5 {
        Complex64::new(0.0, -1.0)
    } else if half_turns == 1.0 {
        Complex64::new(-1.0, 0.0)
    } else if half_turns == 1.5 {
        Complex64::new(0.0, 1.0)
    } else {
        Complex64::from_polar(1.0, -std::f64::consts::PI * half_turns)
    }
}

/// Response on the unit circle, `z = e^{i 2 pi f / Fs}`, reported against
/// the equivalent continuous-time angular frequency `2 pi f`.
///
/// Frequencies outside `[0, Fs/2]` are evaluated but flag the response as
/// out of band.
pub fn freq_response(de: &DifferenceEquation, fs: f64, f_grid: &[f64]) -> Result<FrequencyResponse> {
    if !(fs > 0.0) {
        return Err(Error::NonPositive {
            name: "sample rate",
            value: fs,
        });
    }
    let mut values = Vec::with_capacity(f_grid.len());
    let mut out_of_band = false;
    for &f in f_grid {
        if !(0.0..=fs / 2.0).contains(&f) {
            out_of_band = true;
        }
        let w = unit_delay_at(f, fs);
        let horner = |c: &[f64]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * w + v);
        let den = horner(&de.a);
        if den.norm() < 1e-300 {
            return Err(Error::PoleOnGrid {
                omega: std::f64::consts::TAU * f,
            });
        }
        values.push(horner(&de.b) / den);
    }
    let omega = f_grid.iter().map(|f| std::f64::consts::TAU * f).collect();
    let mut fr = FrequencyResponse::new(omega, values);
    fr.out_of_band = out_of_band;
    Ok(fr)
}
