//! Partial fractions of a proper CT system and its modal impulse response.

use firstorder::ct::{evaluate_impulse, impulse_model};
use firstorder::rational::RationalTf;

fn main() -> firstorder::Result<()> {
    // (s + 3) / ((s + 1)(s^2 + 2s + 5))
    let tf = RationalTf::continuous([3.0, 1.0], [5.0, 7.0, 3.0, 1.0])?;
    let pfe = tf.partial_fractions()?;
    for t in &pfe.terms {
        println!("pole {:.4}  residues {:?}", t.pole, t.coeffs);
    }
    let model = impulse_model(&pfe)?;
    for dc in model.damped_cosines() {
        println!(
            "rho {:.4} sigma {:.4} omega {:.4} phi {:.4}",
            dc.rho, dc.sigma, dc.omega, dc.phi
        );
    }
    let t: Vec<f64> = (0..=10).map(|k| 0.5 * k as f64).collect();
    for (ti, h) in t.iter().zip(evaluate_impulse(&model, &t)) {
        println!("h({ti:4.1}) = {h:+.6}");
    }
    Ok(())
}
