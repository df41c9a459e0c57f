//! Discrete differentiation and integration with measurable error orders.

use crate::dt::Sequence;
use crate::error::{Error, Result};

/// Signed binomial stencil `(-1)^m C(n, m)` of the n-th backward difference.
pub fn backward_difference_weights(order: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(order + 1);
    let mut c = 1.0;
    for m in 0..=order {
        w.push(if m % 2 == 0 { c } else { -c });
        c = c * (order - m) as f64 / (m + 1) as f64;
    }
    w
}

/// n-th backward difference divided by `Ts^n`.
///
/// The first `order` samples have no complete stencil and are dropped, so the
/// output is shorter by `order` and its origin moves forward by `order`.
pub fn backward_difference(x: &Sequence, order: usize) -> Result<Sequence> {
    if order == 0 {
        return Err(Error::NonPositive {
            name: "difference order",
            value: 0.0,
        });
    }
    if x.len() <= order {
        return Err(Error::SequenceTooShort {
            len: x.len(),
            need: order,
        });
    }
    let w = backward_difference_weights(order);
    let scale = x.period().powi(order as i32);
    let s = x.samples();
    let out: Vec<f64> = (order..s.len())
        .map(|k| w.iter().enumerate().map(|(m, wm)| wm * s[k - m]).sum::<f64>() / scale)
        .collect();
    Ok(Sequence::new(out, x.sample_rate())?.with_origin(x.origin() + order as i64))
}

fn check_range(x: &Sequence, p: usize, q: usize) -> Result<()> {
    if p < q && q < x.len() {
        Ok(())
    } else {
        Err(Error::BadRange { p, q, len: x.len() })
    }
}

/// Rectangle rule `Ts * sum_{k=p}^{q-1} x[k]`.
pub fn rect_integrate(x: &Sequence, p: usize, q: usize) -> Result<f64> {
    check_range(x, p, q)?;
    Ok(x.samples()[p..q].iter().sum::<f64>() * x.period())
}

/// Trapezoid rule `Ts * sum_{k=p+1}^{q} (x[k-1] + x[k]) / 2`.
pub fn trap_integrate(x: &Sequence, p: usize, q: usize) -> Result<f64> {
    check_range(x, p, q)?;
    let s = x.samples();
    Ok(s[p..=q].windows(2).map(|w| 0.5 * (w[0] + w[1])).sum::<f64>() * x.period())
}

/// Discrete operator whose convergence order is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Rectangle,
    Trapezoid,
    BackwardDifference(usize),
}

impl Rule {
    pub fn theoretical_order(&self) -> f64 {
        match self {
            Rule::Rectangle | Rule::BackwardDifference(_) => 1.0,
            Rule::Trapezoid => 2.0,
        }
    }
}

/// Analytic test signal with closed-form derivatives and integrals.
#[derive(Clone, Debug, PartialEq)]
pub enum TestSignal {
    Sin,
    Exp,
    /// Ascending coefficients.
    Poly(Vec<f64>),
}

impl TestSignal {
    pub fn value(&self, t: f64) -> f64 {
        self.derivative(0, t)
    }

    pub fn derivative(&self, n: usize, t: f64) -> f64 {
        match self {
            TestSignal::Sin => (t + n as f64 * std::f64::consts::FRAC_PI_2).sin(),
            TestSignal::Exp => t.exp(),
            TestSignal::Poly(c) => {
                let mut d = c.clone();
                for _ in 0..n {
                    d = d.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect();
                }
                d.iter().rev().fold(0.0, |acc, v| acc * t + v)
            }
        }
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            TestSignal::Sin => a.cos() - b.cos(),
            TestSignal::Exp => b.exp() - a.exp(),
            TestSignal::Poly(c) => {
                let anti = |t: f64| {
                    c.iter()
                        .enumerate()
                        .rev()
                        .fold(0.0, |acc, (k, v)| acc * t + v / (k + 1) as f64)
                        * t
                };
                anti(b) - anti(a)
            }
        }
    }
}

/// Measured global errors and their log-log slope.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorOrderReport {
    pub step_sizes: Vec<f64>,
    pub errors: Vec<f64>,
    pub fitted_slope: f64,
}

/// Largest deviation of the rule from the analytic result over every sample
/// instant in `span`, for one step size.
fn global_error(rule: Rule, signal: &TestSignal, span: (f64, f64), ts: f64) -> Result<(f64, f64)> {
    let (t0, t1) = span;
    let steps = ((t1 - t0) / ts + 1e-9).floor() as usize;
    let x = Sequence::from_fn(steps + 1, 1.0 / ts, |t| signal.value(t0 + t))?;
    let s = x.samples();
    let peak = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    match rule {
        Rule::Rectangle | Rule::Trapezoid => {
            let mut acc = 0.0;
            for q in 1..=steps {
                acc += match rule {
                    Rule::Rectangle => s[q - 1] * ts,
                    _ => 0.5 * (s[q - 1] + s[q]) * ts,
                };
                let exact = signal.integral(t0, t0 + q as f64 * ts);
                worst = worst.max((acc - exact).abs());
            }
        }
        Rule::BackwardDifference(n) => {
            let d = backward_difference(&x, n)?;
            for (i, v) in d.samples().iter().enumerate() {
                let t = t0 + (i + n) as f64 * ts;
                worst = worst.max((v - signal.derivative(n, t)).abs());
            }
        }
    }
    Ok((worst, peak))
}

/// Fits the convergence order of `rule` on `signal` over `span`.
///
/// `ts_list` needs at least three entries, each half the previous one. The
/// slope is the least-squares fit of `log2(error)` against `log2(Ts)`.
pub fn error_order(rule: Rule, signal: &TestSignal, span: (f64, f64), ts_list: &[f64]) -> Result<ErrorOrderReport> {
    if ts_list.len() < 3 {
        return Err(Error::InvalidStepSizes(format!("need at least 3, got {}", ts_list.len())));
    }
    for w in ts_list.windows(2) {
        if !(w[0] > 0.0) || ((w[1] / w[0]) - 0.5).abs() > 1e-12 {
            return Err(Error::InvalidStepSizes(format!("{} does not halve {}", w[1], w[0])));
        }
    }
    let mut errors = Vec::with_capacity(ts_list.len());
    for &ts in ts_list {
        let (e, peak) = global_error(rule, signal, span, ts)?;
        if !(e > 1e-12 * peak.max(1.0)) {
            return Err(Error::DegenerateSignal { ts });
        }
        errors.push(e);
    }
    let xs: Vec<f64> = ts_list.iter().map(|t| t.log2()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.log2()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(ErrorOrderReport {
        step_sizes: ts_list.to_vec(),
        errors,
        fitted_slope: sxy / sxx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const HALVINGS: [f64; 3] = [0.1, 0.05, 0.025];

    #[test]
    fn stencils() {
        assert_eq!(backward_difference_weights(1), vec![1.0, -1.0]);
        assert_eq!(backward_difference_weights(3), vec![1.0, -3.0, 3.0, -1.0]);
        for n in 1..12 {
            assert_eq!(backward_difference_weights(n).iter().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn third_difference_scaling() {
        let ts = 0.5;
        let x = Sequence::new(vec![0.0, 0.0, 0.0, 1.0], 1.0 / ts).unwrap();
        let d = backward_difference(&x, 3).unwrap();
        assert_eq!(d.samples(), &[1.0 / ts.powi(3)]);
        assert_eq!(d.origin(), 3);
    }

    #[test]
    fn differences_of_polynomials() {
        let ramp = Sequence::from_fn(10, 10.0, |t| t).unwrap();
        let d = backward_difference(&ramp, 1).unwrap();
        assert!(d.samples().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let c = Sequence::new(vec![3.0; 8], 1.0).unwrap();
        assert!(backward_difference(&c, 2).unwrap().samples().iter().all(|&v| v == 0.0));
        assert!(matches!(backward_difference(&c, 8), Err(Error::SequenceTooShort { .. })));
    }

    #[test]
    fn rectangle_rule() {
        let ones = Sequence::new(vec![1.0; 11], 4.0).unwrap();
        assert_eq!(rect_integrate(&ones, 0, 10).unwrap(), 2.5);
        let ramp = Sequence::from_fn(11, 10.0, |t| t).unwrap();
        assert_abs_diff_eq!(rect_integrate(&ramp, 0, 10).unwrap(), 0.45, epsilon = 1e-15);
        let fine = Sequence::from_fn(21, 20.0, |t| t).unwrap();
        assert_abs_diff_eq!(0.5 - rect_integrate(&fine, 0, 20).unwrap(), 0.025, epsilon = 1e-15);
        assert!(matches!(rect_integrate(&ones, 5, 5), Err(Error::BadRange { .. })));
        assert!(matches!(rect_integrate(&ones, 0, 11), Err(Error::BadRange { .. })));
    }

    #[test]
    fn trapezoid_rule() {
        let ramp = Sequence::from_fn(11, 10.0, |t| t).unwrap();
        assert_abs_diff_eq!(trap_integrate(&ramp, 0, 10).unwrap(), 0.5, epsilon = 1e-15);
        let sq = Sequence::from_fn(11, 10.0, |t| t * t).unwrap();
        assert_abs_diff_eq!(trap_integrate(&sq, 0, 10).unwrap(), 0.335, epsilon = 1e-15);
        let ones = Sequence::new(vec![1.0; 11], 4.0).unwrap();
        assert_eq!(trap_integrate(&ones, 0, 10).unwrap(), rect_integrate(&ones, 0, 10).unwrap());
    }

    #[test]
    fn telescoping() {
        let x = Sequence::from_fn(30, 8.0, |t| (3.0 * t).sin() + t * t).unwrap();
        let d = backward_difference(&x, 1).unwrap();
        // d[j] corresponds to x index j + 1
        let (p, q) = (4, 21);
        let got = rect_integrate(&d, p - 1, q - 1).unwrap();
        assert_abs_diff_eq!(got, x.samples()[q - 1] - x.samples()[p - 1], epsilon = 1e-12);
    }

    #[test]
    fn orders_on_sin() {
        let r = error_order(Rule::Rectangle, &TestSignal::Sin, (0.0, PI), &HALVINGS).unwrap();
        assert!((r.fitted_slope - 1.0).abs() < 0.2, "{r:?}");
        let r = error_order(Rule::Trapezoid, &TestSignal::Sin, (0.0, PI), &HALVINGS).unwrap();
        assert!((r.fitted_slope - 2.0).abs() < 0.2, "{r:?}");
        let r = error_order(Rule::BackwardDifference(2), &TestSignal::Exp, (0.0, 1.0), &HALVINGS).unwrap();
        assert!((r.fitted_slope - 1.0).abs() < 0.2, "{r:?}");
    }

    #[test]
    fn exact_rule_is_degenerate() {
        let lin = TestSignal::Poly(vec![0.5, 2.0]);
        assert!(matches!(
            error_order(Rule::Trapezoid, &lin, (0.0, PI), &HALVINGS),
            Err(Error::DegenerateSignal { .. })
        ));
    }

    #[test]
    fn step_list_validation() {
        assert!(matches!(
            error_order(Rule::Rectangle, &TestSignal::Sin, (0.0, PI), &[0.1, 0.05]),
            Err(Error::InvalidStepSizes(_))
        ));
        assert!(matches!(
            error_order(Rule::Rectangle, &TestSignal::Sin, (0.0, PI), &[0.1, 0.04, 0.02]),
            Err(Error::InvalidStepSizes(_))
        ));
    }

    #[test]
    fn analytic_descriptors() {
        let p = TestSignal::Poly(vec![1.0, 0.0, 3.0]);
        assert_eq!(p.derivative(1, 2.0), 12.0);
        assert_eq!(p.integral(0.0, 1.0), 2.0);
        assert_abs_diff_eq!(TestSignal::Sin.integral(0.0, PI), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(TestSignal::Sin.derivative(1, 0.0), 1.0, epsilon = 1e-15);
    }
}
