//! DFT of on-bin and off-bin cosines and the resulting leakage.

use std::f64::consts::TAU;

use firstorder::dt::Sequence;
use firstorder::spectral::{dft, leakage_ratio};

fn main() -> firstorder::Result<()> {
    let on_bin = Sequence::from_fn(8, 1.0, |t| (TAU * 2.0 * t / 8.0).cos())?;
    let mags: Vec<String> = dft(&on_bin).magnitudes().iter().map(|m| format!("{m:.3}")).collect();
    println!("cos, 2 cycles in 8: |X| = [{}]", mags.join(", "));

    let half = Sequence::from_fn(16, 1.0, |t| (TAU * 2.5 * t / 16.0).cos())?;
    println!("2.5 cycles in 16: leakage {:.4}", leakage_ratio(&half, 2)?);

    // same physical frequency, four times the record length
    let longer = Sequence::from_fn(64, 1.0, |t| (TAU * 10.0 * t / 64.0).cos())?;
    println!("10 cycles in 64: leakage {:.3e}", leakage_ratio(&longer, 10)?);

    // leakage follows the fractional bin offset, not the length alone
    for n in [16, 64, 256, 1024] {
        let cycles = 2.3 * n as f64 / 16.0;
        let x = Sequence::from_fn(n, 1.0, |t| (TAU * cycles * t / n as f64).cos())?;
        println!("{cycles:7.1} cycles in {n:4}: leakage {:.5}", leakage_ratio(&x, cycles.round() as usize)?);
    }
    Ok(())
}
