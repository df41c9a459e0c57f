//! Continuous-time analysis: modal impulse responses, frequency responses and
//! the first-order RC prototypes.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::dt::Sequence;
use crate::error::{Error, Result};
use crate::rational::{is_stable, Domain, PartialFractionExpansion, RationalTf, Stability};

/// One modal group: `e^{pole t} * sum_k coeffs[k-1] t^{k-1} / (k-1)!`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalTerm {
    pub pole: Complex64,
    pub multiplicity: usize,
    pub coeffs: Vec<Complex64>,
}

impl ModalTerm {
    fn eval(&self, t: f64) -> Complex64 {
        let mut poly = Complex64::new(0.0, 0.0);
        let mut tk = 1.0;
        let mut fact = 1.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                tk *= t;
                fact *= k as f64;
            }
            poly += c * (tk / fact);
        }
        (self.pole * t).exp() * poly
    }
}

/// A conjugate pole pair folded into `2 rho e^{sigma t} cos(omega t + phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampedCosine {
    pub rho: f64,
    pub sigma: f64,
    pub omega: f64,
    pub phi: f64,
}

impl DampedCosine {
    pub fn eval(&self, t: f64) -> f64 {
        2.0 * self.rho * (self.sigma * t).exp() * (self.omega * t + self.phi).cos()
    }
}

/// Impulse response as a sum of exponential modes.
#[derive(Clone, Debug, PartialEq)]
pub struct ImpulseResponseModel {
    pub terms: Vec<ModalTerm>,
    /// Multiply by the unit step `u(t)`, with `u(0) = 1`.
    pub causal: bool,
}

impl ImpulseResponseModel {
    fn partner(&self, i: usize) -> Option<usize> {
        let t = &self.terms[i];
        if t.pole.im == 0.0 {
            return None;
        }
        self.terms.iter().position(|o| {
            o.pole == t.pole.conj()
                && o.multiplicity == t.multiplicity
                && o.coeffs.iter().zip(&t.coeffs).all(|(a, b)| *a == b.conj())
        })
    }

    /// Real-valued response; conjugate pairs are summed as twice the real
    /// part of the upper member.
    pub fn eval(&self, t: f64) -> f64 {
        if self.causal && t < 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for (i, term) in self.terms.iter().enumerate() {
            match self.partner(i) {
                Some(_) if term.pole.im > 0.0 => acc += 2.0 * term.eval(t).re,
                Some(_) => {}
                None => acc += term.eval(t).re,
            }
        }
        acc
    }

    /// Raw modal sum including any imaginary residue.
    pub fn eval_complex(&self, t: f64) -> Complex64 {
        if self.causal && t < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    /// Simple conjugate pairs in damped-cosine form.
    pub fn damped_cosines(&self) -> Vec<DampedCosine> {
        (0..self.terms.len())
            .filter(|&i| self.terms[i].pole.im > 0.0 && self.terms[i].multiplicity == 1 && self.partner(i).is_some())
            .map(|i| {
                let t = &self.terms[i];
                DampedCosine {
                    rho: t.coeffs[0].norm(),
                    sigma: t.pole.re,
                    omega: t.pole.im,
                    phi: t.coeffs[0].arg(),
                }
            })
            .collect()
    }
}

/// Builds the causal modal impulse response of a strictly proper expansion.
pub fn impulse_model(pfe: &PartialFractionExpansion) -> Result<ImpulseResponseModel> {
    if !pfe.is_strictly_proper() {
        return Err(Error::NonStrictlyProper);
    }
    Ok(ImpulseResponseModel {
        terms: pfe
            .terms
            .iter()
            .map(|t| ModalTerm {
                pole: t.pole,
                multiplicity: t.multiplicity,
                coeffs: t.coeffs.clone(),
            })
            .collect(),
        causal: true,
    })
}

pub fn evaluate_impulse(model: &ImpulseResponseModel, t_grid: &[f64]) -> Vec<f64> {
    t_grid.iter().map(|&t| model.eval(t)).collect()
}

/// Complex response samples over an angular-frequency grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyResponse {
    /// Angular frequencies in rad/s.
    pub omega: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Set when the system has a pole in the right half-plane (or outside the
    /// unit circle).
    pub unstable: bool,
    /// Set when a discrete-time grid point lies outside `[0, Fs/2]`.
    pub out_of_band: bool,
}

impl FrequencyResponse {
    pub fn new(omega: Vec<f64>, values: Vec<Complex64>) -> Self {
        Self {
            omega,
            values,
            unstable: false,
            out_of_band: false,
        }
    }

    pub fn frequencies_hz(&self) -> Vec<f64> {
        self.omega.iter().map(|w| w / TAU).collect()
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn magnitude_db(&self) -> Vec<f64> {
        self.values.iter().map(|v| 20.0 * v.norm().log10()).collect()
    }

    /// Principal phase in `(-pi, pi]`.
    pub fn phase(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.arg()).collect()
    }

    /// Phase with `2 pi` jumps removed between consecutive samples.
    pub fn phase_unwrapped(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut offset = 0.0;
        let mut prev: Option<f64> = None;
        for v in &self.values {
            let p = v.arg();
            if let Some(q) = prev {
                let d = p + offset - q;
                if d > PI {
                    offset -= TAU * ((d - PI) / TAU).ceil();
                } else if d < -PI {
                    offset += TAU * ((-d - PI) / TAU).ceil();
                }
            }
            let u = p + offset;
            out.push(u);
            prev = Some(u);
        }
        out
    }
}

/// `H(i omega)` over `omega_grid`.
pub fn freq_response(tf: &RationalTf, omega_grid: &[f64]) -> Result<FrequencyResponse> {
    if tf.domain() != Domain::Continuous {
        return Err(Error::DomainMismatch {
            expected: Domain::Continuous,
            found: tf.domain(),
        });
    }
    let mut values = Vec::with_capacity(omega_grid.len());
    for &w in omega_grid {
        let s = Complex64::new(0.0, w);
        let den = tf.den().eval_complex(s);
        if den.norm() < 1e-300 {
            return Err(Error::PoleOnGrid { omega: w });
        }
        values.push(tf.num().eval_complex(s) / den);
    }
    let mut fr = FrequencyResponse::new(omega_grid.to_vec(), values);
    fr.unstable = is_stable(&tf.to_pzg()?) == Stability::Unstable;
    Ok(fr)
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            name: "time constant",
            value: tau,
        })
    }
}

/// First-order low-pass `1 / (1 + s tau)`, pole at `-1/tau`.
pub fn lpf(tau: f64) -> Result<RationalTf> {
    check_tau(tau)?;
    RationalTf::continuous(vec![1.0], vec![1.0, tau])
}

/// First-order high-pass `s tau / (1 + s tau)`, the identity minus [`lpf`].
pub fn hpf(tau: f64) -> Result<RationalTf> {
    check_tau(tau)?;
    RationalTf::continuous(vec![0.0, tau], vec![1.0, tau])
}

/// Adds a non-dominant pole at `-1/tau_nd` by cascading a unit-DC-gain
/// low-pass section.
pub fn with_parasitic_pole(tf: &RationalTf, tau_nd: f64) -> Result<RationalTf> {
    tf.cascade(&lpf(tau_nd)?)
}

/// Applies a pure propagation delay `e^{-i omega tau_d}`. Magnitudes are
/// untouched.
pub fn with_delay(fr: &FrequencyResponse, tau_d: f64) -> FrequencyResponse {
    let values = fr
        .omega
        .iter()
        .zip(&fr.values)
        .map(|(&w, &v)| v * Complex64::from_polar(1.0, -w * tau_d))
        .collect();
    FrequencyResponse {
        omega: fr.omega.clone(),
        values,
        ..*fr
    }
}

/// Dominant angular frequency of an edge with a 10 %–90 % transition time.
pub fn transition_bandwidth(t_trans: f64) -> Result<f64> {
    if !(t_trans > 0.0) {
        return Err(Error::NonPositive {
            name: "transition time",
            value: t_trans,
        });
    }
    Ok(TAU * 0.35 / t_trans)
}

/// Causal convolution of the modal impulse response with a sampled input,
/// integrated with the trapezoid rule on the input's grid.
pub fn convolve_response(model: &ImpulseResponseModel, input: &Sequence) -> Sequence {
    let ts = input.period();
    let n = input.len();
    let h: Vec<f64> = (0..n).map(|m| model.eval(m as f64 * ts)).collect();
    let x = input.samples();
    let mut y = vec![0.0; n];
    for (i, yi) in y.iter_mut().enumerate().skip(1) {
        let mut acc = 0.5 * (h[i] * x[0] + h[0] * x[i]);
        for k in 1..i {
            acc += h[i - k] * x[k];
        }
        *yi = acc * ts;
    }
    Sequence::new(y, input.sample_rate())
        .expect("finite convolution")
        .with_origin(input.origin())
}
