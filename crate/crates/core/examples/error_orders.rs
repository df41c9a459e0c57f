//! Convergence orders of discrete integration and differentiation.

use std::f64::consts::PI;

use firstorder::calculus::{error_order, Rule, TestSignal};

fn main() -> firstorder::Result<()> {
    let steps = [0.1, 0.05, 0.025, 0.0125];
    for rule in [Rule::Rectangle, Rule::Trapezoid, Rule::BackwardDifference(1)] {
        let r = error_order(rule, &TestSignal::Sin, (0.0, PI), &steps)?;
        println!("{rule:?}: slope {:.3} (expected {})", r.fitted_slope, rule.theoretical_order());
        for (ts, e) in r.step_sizes.iter().zip(&r.errors) {
            println!("  Ts {ts:<7} max error {e:.3e}");
        }
    }
    Ok(())
}
