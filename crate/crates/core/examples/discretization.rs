//! Backward Euler, bilinear and matched mappings of a CT low-pass, plus
//! the canonical DT filters and sample-rate retuning.

use num_complex::Complex64;

use firstorder::ct::lpf;
use firstorder::discretize::{backward_euler, dt_hpf, dt_lpf, inv_map, matched_pz, retune, tustin};

fn main() -> firstorder::Result<()> {
    let tau = 1.0;
    for ts in [0.5, 0.1, 0.01] {
        let be = backward_euler(&lpf(tau)?, ts)?;
        let bl = tustin(&lpf(tau)?, ts)?;
        let mp = matched_pz(&lpf(tau)?.to_pzg()?, ts, None)?;
        let p = mp.poles[0].value;
        println!(
            "Ts {ts:<5} euler {:.6}  tustin {:.6}  matched {:.6}  log map {:.6}",
            -be.den().coeffs()[1],
            -bl.den().coeffs()[1],
            p.re,
            inv_map(p, ts)?.re
        );
    }

    let lp = dt_lpf(1.5, 1.0)?;
    let hp = dt_hpf(0.6)?;
    let at = |z: f64| Complex64::new(z, 0.0);
    println!("dt lpf: DC {} Nyquist {}", lp.eval_z(at(1.0)).norm(), lp.eval_z(at(-1.0)).norm());
    println!("dt hpf: DC {} Nyquist {}", hp.eval_z(at(1.0)).norm(), hp.eval_z(at(-1.0)).norm());

    let pzg = lp.to_tf().to_pzg()?;
    let faster = retune(&pzg, 1.0, 2.0)?;
    println!("pole {:.6} at 1 Hz becomes {:.6} at 2 Hz", pzg.poles[0].value.re, faster.poles[0].value.re);
    Ok(())
}
