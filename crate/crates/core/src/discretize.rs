//! Conversions between the s-plane and the z-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dt::DifferenceEquation;
use crate::error::{Error, Result};
use crate::rational::{Domain, PoleZeroGain, Polynomial, RationalTf, Root};

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

fn check_ct(tf_domain: Domain) -> Result<()> {
    if tf_domain != Domain::Continuous {
        return Err(Error::DomainMismatch {
            expected: Domain::Continuous,
            found: tf_domain,
        });
    }
    Ok(())
}

/// Replaces `s` by `p(w) / q(w)` and clears the common `q(w)^n`, then scales
/// so that the leading feedback coefficient is 1.
fn substitute(tf: &RationalTf, ts: f64, p: &Polynomial, q: &Polynomial) -> Result<RationalTf> {
    check_ct(tf.domain())?;
    check_positive("Ts", ts)?;
    if !tf.is_proper() {
        return Err(Error::ImproperTf {
            num: tf.num().degree(),
            den: tf.den().degree(),
        });
    }
    let n = tf.den().degree();
    let expand = |poly: &Polynomial| {
        poly.coeffs().iter().enumerate().fold(Polynomial::zero(), |acc, (k, &c)| {
            if c == 0.0 {
                return acc;
            }
            &acc + &(&p.pow(k) * &q.pow(n - k)).scale(c)
        })
    };
    let num = expand(tf.num());
    let den = expand(tf.den());
    let a0 = den.coeffs()[0];
    if a0 == 0.0 {
        return RationalTf::new(num, den, Domain::Discrete);
    }
    let unit = |poly: &Polynomial| Polynomial::new(poly.coeffs().iter().map(|c| c / a0).collect::<Vec<_>>());
    RationalTf::new(unit(&num), unit(&den), Domain::Discrete)
}

/// Backward-Euler rule `s <- (1 - z^-1) / Ts`.
///
/// Strictly left-half-plane poles land strictly inside the unit circle.
pub fn backward_euler(tf: &RationalTf, ts: f64) -> Result<RationalTf> {
    substitute(tf, ts, &Polynomial::new([1.0, -1.0]), &Polynomial::constant(ts))
}

/// Bilinear rule `s <- (2 / Ts) (1 - z^-1) / (1 + z^-1)`.
pub fn tustin(tf: &RationalTf, ts: f64) -> Result<RationalTf> {
    substitute(tf, ts, &Polynomial::new([2.0, -2.0]), &Polynomial::new([ts, ts]))
}

fn map_roots(roots: &[Root], ts: f64) -> Result<Vec<Root>> {
    roots
        .iter()
        .map(|r| {
            let product = r.value.im.abs() * ts;
            if product >= PI {
                return Err(Error::NyquistViolation {
                    s: r.value.to_string(),
                    product,
                });
            }
            Ok(Root::new(snap_real((r.value * ts).exp(), r.value.im), r.multiplicity))
        })
        .collect()
}

fn snap_real(z: Complex64, source_im: f64) -> Complex64 {
    if source_im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

fn factored(roots: &[Root], x: Complex64) -> Complex64 {
    roots
        .iter()
        .map(|r| (x - r.value).powi(r.multiplicity as i32))
        .product()
}

/// Response of the factored form at the plane point `x`.
fn pzg_at(pzg: &PoleZeroGain, x: Complex64) -> Complex64 {
    pzg.gain * factored(&pzg.zeros, x) / factored(&pzg.poles, x)
}

fn usable(h: Complex64) -> bool {
    h.is_finite() && h.norm() > 0.0
}

/// Gain that makes `unit` (the factored DT form with gain 1) reproduce
/// `target` in magnitude. The sign follows the real part of their ratio.
fn matching_gain(target: Complex64, unit: Complex64, omega: f64) -> Result<f64> {
    if !usable(target) || !usable(unit) {
        return Err(Error::PoleOnGrid { omega });
    }
    let ratio = target / unit;
    let sign = if ratio.re < 0.0 { -1.0 } else { 1.0 };
    Ok(sign * target.norm() / unit.norm())
}

/// Exact pole-zero mapping `z = e^{s Ts}`.
///
/// The gain is fixed so that the magnitudes agree at `gain_match_omega`. With
/// `None` the match is at DC unless the continuous response there is zero or
/// infinite, in which case `pi / (2 Ts)` is used.
pub fn matched_pz(pzg: &PoleZeroGain, ts: f64, gain_match_omega: Option<f64>) -> Result<PoleZeroGain> {
    check_ct(pzg.domain)?;
    check_positive("Ts", ts)?;
    let zeros = map_roots(&pzg.zeros, ts)?;
    let poles = map_roots(&pzg.poles, ts)?;
    let omega = match gain_match_omega {
        Some(w) => {
            if !(w.abs() * ts < PI) {
                return Err(Error::NyquistViolation {
                    s: format!("gain match frequency {w}"),
                    product: w.abs() * ts,
                });
            }
            w
        }
        None if usable(pzg_at(pzg, Complex64::new(0.0, 0.0))) => 0.0,
        None => PI / (2.0 * ts),
    };
    let target = pzg_at(pzg, Complex64::new(0.0, omega));
    let unit = PoleZeroGain::new(zeros.clone(), poles.clone(), 1.0, Domain::Discrete);
    let gain = matching_gain(target, pzg_at(&unit, Complex64::from_polar(1.0, omega * ts)), omega)?;
    Ok(PoleZeroGain::new(zeros, poles, gain, Domain::Discrete))
}

/// Principal branch of `log(z) / Ts`, with `Im(s) Ts` in `(-pi, pi]`.
pub fn inv_map(z: Complex64, ts: f64) -> Result<Complex64> {
    check_positive("Ts", ts)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    let arg = if z.im == 0.0 && z.re < 0.0 { PI } else { z.arg() };
    Ok(Complex64::new(z.norm().ln(), arg) / ts)
}

fn check_pole(zp: f64) -> Result<()> {
    if zp > 0.0 && zp < 1.0 {
        Ok(())
    } else {
        Err(Error::BadPole(zp))
    }
}

/// Delayed one-pole low-pass `(1 - z_p) z^-1 / (1 - z_p z^-1)` with
/// `z_p = tau / (tau + Ts)`.
pub fn dt_lpf(tau: f64, ts: f64) -> Result<DifferenceEquation> {
    check_positive("tau", tau)?;
    check_positive("Ts", ts)?;
    dt_lpf_with_pole(tau / (tau + ts))
}

/// [`dt_lpf`] parametrized directly by its pole.
pub fn dt_lpf_with_pole(zp: f64) -> Result<DifferenceEquation> {
    check_pole(zp)?;
    DifferenceEquation::new([0.0, 1.0 - zp], [1.0, -zp])
}

/// One-pole high-pass `(1 - z^-1) / (1 - z_p z^-1)`.
pub fn dt_hpf(zp: f64) -> Result<DifferenceEquation> {
    check_pole(zp)?;
    DifferenceEquation::new([1.0, -1.0], [1.0, -zp])
}

/// Low-pass with its pole reflected to `-z_p`: `(1 + z_p) z^-1 / (1 + z_p z^-1)`.
pub fn negative_pole_filter(zp: f64) -> Result<DifferenceEquation> {
    check_pole(zp)?;
    DifferenceEquation::new([0.0, 1.0 + zp], [1.0, zp])
}

/// Moves a DT system to a new sample rate while holding the equivalent
/// continuous-time roots fixed.
///
/// Roots at the origin are pure delays and stay where they are. A root on the
/// negative real axis sits exactly at the old Nyquist frequency and has no
/// conjugate-symmetric image at another rate, so it is only accepted when the
/// rate does not change. The gain is rematched at DC, or at a quarter of the
/// lower sample rate when DC is a zero or a pole.
pub fn retune(pzg: &PoleZeroGain, fs_old: f64, fs_new: f64) -> Result<PoleZeroGain> {
    if pzg.domain != Domain::Discrete {
        return Err(Error::DomainMismatch {
            expected: Domain::Discrete,
            found: pzg.domain,
        });
    }
    check_positive("Fs_old", fs_old)?;
    check_positive("Fs_new", fs_new)?;
    let (ts_old, ts_new) = (1.0 / fs_old, 1.0 / fs_new);
    let move_roots = |roots: &[Root]| -> Result<Vec<Root>> {
        roots
            .iter()
            .map(|r| {
                if r.value.norm() == 0.0 {
                    return Ok(*r);
                }
                let s = inv_map(r.value, ts_old)?;
                let product = s.im.abs() * ts_new;
                let on_nyquist = r.value.im == 0.0 && r.value.re < 0.0;
                if product > PI * (1.0 + 1e-12) || (on_nyquist && fs_new != fs_old) {
                    return Err(Error::NyquistViolation {
                        s: s.to_string(),
                        product,
                    });
                }
                if on_nyquist {
                    return Ok(*r);
                }
                Ok(Root::new(snap_real((s * ts_new).exp(), r.value.im), r.multiplicity))
            })
            .collect()
    };
    let zeros = move_roots(&pzg.zeros)?;
    let poles = move_roots(&pzg.poles)?;
    let dc = Complex64::new(1.0, 0.0);
    let (z_old, z_new, omega) = if usable(pzg_at(pzg, dc)) {
        (dc, dc, 0.0)
    } else {
        let omega = PI * fs_old.min(fs_new) / 2.0;
        (
            Complex64::from_polar(1.0, omega * ts_old),
            Complex64::from_polar(1.0, omega * ts_new),
            omega,
        )
    };
    let unit = PoleZeroGain::new(zeros.clone(), poles.clone(), 1.0, Domain::Discrete);
    let gain = matching_gain(pzg_at(pzg, z_old), pzg_at(&unit, z_new), omega)?;
    Ok(PoleZeroGain::new(zeros, poles, gain, Domain::Discrete))
}
