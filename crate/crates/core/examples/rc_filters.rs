//! First-order CT low- and high-pass responses around the cutoff.

use firstorder::ct::{freq_response, hpf, lpf, with_parasitic_pole};

fn main() -> firstorder::Result<()> {
    let tau = 1e-3;
    let omega: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 10.0].iter().map(|k| k / tau).collect();
    let lo = freq_response(&lpf(tau)?, &omega)?;
    let hi = freq_response(&hpf(tau)?, &omega)?;
    println!("{:>10} {:>10} {:>10}", "omega", "LPF dB", "HPF dB");
    for ((w, l), h) in omega.iter().zip(lo.magnitude_db()).zip(hi.magnitude_db()) {
        println!("{w:>10.1} {l:>10.4} {h:>10.4}");
    }

    // a parasitic pole two decades above the cutoff adds a second roll-off
    let lp2 = with_parasitic_pole(&lpf(tau)?, tau / 100.0)?;
    let far = freq_response(&lp2, &[1e6 / tau])?;
    println!("two-pole LPF at 1e6/tau: {:.2} dB", far.magnitude_db()[0]);
    Ok(())
}
