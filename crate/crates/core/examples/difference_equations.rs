//! Recurrences, their impulse and step responses, and DT frequency response.

use firstorder::dt::{freq_response, impulse_response, step_response, DifferenceEquation};

fn main() -> firstorder::Result<()> {
    let systems = [
        ("differentiator", DifferenceEquation::new([1.0, -1.0], [1.0])?),
        ("moving sum", DifferenceEquation::new([1.0, 1.0], [1.0])?),
        ("leaky accumulator", DifferenceEquation::new([1.0], [1.0, -0.6])?),
    ];
    for (name, de) in &systems {
        let h = impulse_response(de, 6);
        let s = step_response(de, 6);
        println!("{name} ({:?})", de.kind());
        println!("  h = {:?}", h.samples());
        println!("  s = {:?}", s.samples());
        let r = freq_response(de, 1.0, &[0.0, 0.25, 0.5])?;
        println!("  dB at 0, Fs/4, Fs/2: {:?}", r.magnitude_db());
    }
    Ok(())
}
