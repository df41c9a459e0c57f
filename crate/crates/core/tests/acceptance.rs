//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::process::Command;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use firstorder::blocks::{flatten, simulate_graph, Architecture, BlockGraph};
use firstorder::calculus::{error_order, Rule, TestSignal};
use firstorder::ct::{freq_response, hpf, impulse_model, lpf};
use firstorder::discretize::{backward_euler, dt_lpf_with_pole, inv_map};
use firstorder::dt::{self, impulse_response, simulate, DifferenceEquation, Sequence};
use firstorder::rational::{PartialFractionExpansion, Polynomial, RationalTf, Root};
use firstorder::spectral::{dft, leakage_ratio};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn db(x: f64) -> f64 {
    20.0 * x.log10()
}

fn cutoff_magnitudes() -> Outcome {
    let target = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst = 0.0f64;
    for tau in [0.01, 1.0, 100.0] {
        for tf in [lpf(tau).unwrap(), hpf(tau).unwrap()] {
            let m = freq_response(&tf, &[1.0 / tau]).unwrap().magnitude()[0];
            worst = worst.max((m - target).abs());
        }
    }
    check(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max |H(i/tau)| - 1/sqrt2 = {worst:.1e}"))
}

fn memory_window() -> Outcome {
    let mut ratios = Vec::new();
    for tau in [1e-3, 1.0, 50.0] {
        let model = impulse_model(&lpf(tau).unwrap().partial_fractions().unwrap()).unwrap();
        let h0 = model.eval(0.0);
        check((h0 - 1.0 / tau).abs() <= 1e-12 / tau, || format!("h(0+) = {h0} for tau {tau}"))?;
        let r = model.eval(4.6 * tau) / h0;
        check((r - 0.01).abs() <= 0.0005, || format!("ratio {r} for tau {tau}"))?;
        ratios.push(r);
    }
    Ok(format!("h(4.6 tau)/h(0+) = {:.6} %", 100.0 * ratios[0]))
}

fn architecture_gains() -> Outcome {
    let six = db(2.0);
    let gain_at = |arch, f: f64| {
        let de = flatten(&BlockGraph::canonical(arch).unwrap()).unwrap();
        dt::freq_response(&de, 1.0, &[f]).unwrap().magnitude()[0]
    };
    let d = db(gain_at(Architecture::FirDifferentiator(1.0), 0.5));
    check((d - six).abs() <= 1e-9, || format!("differentiator {d} dB"))?;
    let m0 = db(gain_at(Architecture::MovingSum(1.0), 0.0));
    check((m0 - six).abs() <= 1e-9, || format!("moving sum DC {m0} dB"))?;
    let mn = gain_at(Architecture::MovingSum(1.0), 0.5);
    check(mn == 0.0, || format!("moving sum Nyquist |H| = {mn:e}"))?;
    let a = db(gain_at(Architecture::Accumulator(1.0), 0.5));
    check((a + six).abs() <= 1e-9, || format!("accumulator {a} dB"))?;
    for (v, want) in [(d, 6.0206), (m0, 6.0206), (a, -6.0206)] {
        check((v - want).abs() < 5e-5, || format!("{v} does not round to {want}"))?;
    }
    let osc = BlockGraph::canonical(Architecture::Oscillator(1.0)).unwrap();
    let h = simulate_graph(&osc, &Sequence::impulse(64, 1.0).unwrap(), 64).unwrap();
    let alternating = h
        .samples()
        .iter()
        .enumerate()
        .all(|(n, &v)| v == if n % 2 == 0 { 1.0 } else { -1.0 });
    check(alternating, || format!("oscillator h = {:?}", &h.samples()[..8]))?;
    Ok(format!("+{d:.4} dB, +{m0:.4} dB / null, {a:.4} dB, +-1 x64"))
}

fn discrete_lpf_gains() -> Outcome {
    let zp = 0.6;
    let f = dt_lpf_with_pole(zp).unwrap();
    let r = dt::freq_response(&f, 1.0, &[0.0, 0.5]).unwrap().magnitude();
    check(r[0] == 1.0, || format!("DC gain {:e}", r[0]))?;
    check(r[1] == 0.25, || format!("Nyquist gain {:.17}", r[1]))?;
    Ok("DC 1, Nyquist 0.25".into())
}

fn pole_mappings(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..100 {
        let tau = 10f64.powf(rng.gen_range(-3.0..2.0));
        let ts = 10f64.powf(rng.gen_range(-4.0..1.0));
        let d = backward_euler(&lpf(tau).unwrap(), ts).unwrap();
        let got = d.den().coeffs()[1];
        check(got == -(tau / (tau + ts)), || format!("tau {tau} Ts {ts}: {got}"))?;
    }

    let steps = [0.01, 0.1, 1.0];
    let mut worst = 0.0f64;
    for i in 0..200 {
        let ts = steps[i % 3];
        let s = Complex64::new(rng.gen_range(-10.0..-1e-3), rng.gen_range(-0.99..0.99) * PI / ts);
        let back = inv_map((s * ts).exp(), ts).unwrap();
        worst = worst.max((back - s).norm());
    }
    check(worst <= 1e-12, || format!("round trip error {worst:e}"))?;

    let mut inside = 0;
    for _ in 0..200 {
        let p = Complex64::new(rng.gen_range(-50.0..-1e-3), rng.gen_range(0.0..50.0));
        let den = Polynomial::from_roots(&[Root::new(p, 1), Root::new(p.conj(), 1)], 1.0).unwrap();
        let tf = RationalTf::new(Polynomial::one(), den, firstorder::rational::Domain::Continuous).unwrap();
        for ts in steps {
            let poles = backward_euler(&tf, ts).unwrap().poles().unwrap();
            let r = poles.iter().map(|q| q.value.norm()).fold(0.0, f64::max);
            check(r < 1.0, || format!("pole {p} Ts {ts}: image modulus {r}"))?;
            inside += 1;
        }
    }
    Ok(format!("exact Euler pole x100, log round trip {worst:.1e}, {inside} images inside"))
}

fn error_orders() -> Outcome {
    let steps = [0.1, 0.05, 0.025, 0.0125];
    let mut slopes = Vec::new();
    for (rule, want) in [
        (Rule::Rectangle, 1.0),
        (Rule::BackwardDifference(1), 1.0),
        (Rule::Trapezoid, 2.0),
    ] {
        let r = error_order(rule, &TestSignal::Sin, (0.0, PI), &steps).unwrap();
        check((r.fitted_slope - want).abs() <= 0.2, || format!("{rule:?} slope {}", r.fitted_slope))?;
        slopes.push(r.fitted_slope);
    }
    Ok(format!("slopes rect {:.3}, diff {:.3}, trap {:.3}", slopes[0], slopes[1], slopes[2]))
}

fn dft_exactness(rng: &mut ChaCha8Rng) -> Outcome {
    let x = Sequence::from_fn(8, 1.0, |t| (TAU * 2.0 * t / 8.0).cos()).unwrap();
    let m = dft(&x).magnitudes();
    for (k, v) in m.iter().enumerate() {
        if k == 2 || k == 6 {
            check((v - 4.0).abs() <= 1e-12, || format!("|X[{k}]| = {v}"))?;
        } else {
            check(*v < 1e-12, || format!("|X[{k}]| = {v:e}"))?;
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=128);
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let time: f64 = v.iter().map(|a| a * a).sum::<f64>() * n as f64;
        let freq = dft(&Sequence::new(v, 1.0).unwrap()).energy();
        worst = worst.max((time - freq).abs() / time);
    }
    check(worst <= 1e-9, || format!("Parseval relative error {worst:e}"))?;
    Ok(format!("bins 2/6 = 4, Parseval {worst:.1e}"))
}

fn spectral_leakage() -> Outcome {
    let half = Sequence::from_fn(16, 1.0, |t| (TAU * 2.5 * t / 16.0).cos()).unwrap();
    let r16 = leakage_ratio(&half, 2).unwrap();
    check(r16 > 0.1, || format!("N=16 ratio {r16}"))?;
    let longer = Sequence::from_fn(64, 1.0, |t| (TAU * 10.0 * t / 64.0).cos()).unwrap();
    let r64 = leakage_ratio(&longer, 10).unwrap();
    check(r64 < r16, || format!("N=64 ratio {r64} not below {r16}"))?;
    Ok(format!("N=16 {r16:.4} -> N=64 {r64:.1e}"))
}

fn random_stable_de(rng: &mut ChaCha8Rng, order: usize) -> DifferenceEquation {
    let a = if order == 1 {
        vec![1.0, -rng.gen_range(-0.95..0.95)]
    } else if rng.gen_bool(0.5) {
        let (p1, p2): (f64, f64) = (rng.gen_range(-0.95..0.95), rng.gen_range(-0.95..0.95));
        vec![1.0, -(p1 + p2), p1 * p2]
    } else {
        let r: f64 = rng.gen_range(0.05..0.95);
        let th: f64 = rng.gen_range(0.0..PI);
        vec![1.0, -2.0 * r * th.cos(), r * r]
    };
    let b: Vec<f64> = (0..rng.gen_range(1..=order + 1)).map(|_| rng.gen_range(-2.0..2.0)).collect();
    DifferenceEquation::new(b, a).unwrap()
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> Outcome {
    let n = 64;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let de = random_stable_de(rng, 1 + i % 2);
        let x = Sequence::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>(), 1.0).unwrap();
        let y = simulate(&de, &x, n);
        let h = impulse_response(&de, n);
        for k in 0..n {
            let conv: f64 = (0..=k).map(|j| h.samples()[j] * x.samples()[k - j]).sum();
            worst = worst.max((conv - y.samples()[k]).abs());
        }
        let g = BlockGraph::direct_form(&de);
        let flat = flatten(&g).unwrap();
        check(flat == de, || format!("flatten changed {de:?} into {flat:?}"))?;
        let yg = simulate_graph(&g, &x, n).unwrap();
        check(yg.samples() == simulate(&flat, &x, n).samples(), || format!("graph and recurrence differ for {de:?}"))?;
    }
    check(worst <= 1e-9, || format!("convolution mismatch {worst:e}"))?;
    Ok(format!("convolution {worst:.1e}, graph == recurrence bitwise"))
}

fn random_ct(rng: &mut ChaCha8Rng) -> (RationalTf, Vec<Complex64>) {
    let order = rng.gen_range(1..=4);
    let mut poles: Vec<Complex64> = Vec::new();
    let far = |poles: &[Complex64], p: Complex64| poles.iter().all(|q| (q - p).norm() > 0.25);
    while poles.len() < order {
        if order - poles.len() >= 2 && rng.gen_bool(0.5) {
            let p = Complex64::new(rng.gen_range(-4.0..-0.2), rng.gen_range(0.3..4.0));
            if far(&poles, p) {
                poles.push(p);
                poles.push(p.conj());
            }
        } else {
            let p = Complex64::new(rng.gen_range(-5.0..-0.1), 0.0);
            if far(&poles, p) {
                poles.push(p);
            }
        }
    }
    let roots: Vec<Root> = poles.iter().map(|&p| Root::new(p, 1)).collect();
    let den = Polynomial::from_roots(&roots, 1.0).unwrap();
    let m = rng.gen_range(0..=order);
    let mut num: Vec<f64> = (0..=m).map(|_| rng.gen_range(-2.0..2.0)).collect();
    num[m] = rng.gen_range(0.5..2.0);
    let tf = RationalTf::new(Polynomial::new(num), den, firstorder::rational::Domain::Continuous).unwrap();
    (tf, poles)
}

fn partial_fraction_recombination(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst_rel = 0.0f64;
    let mut worst_im = 0.0f64;
    for _ in 0..100 {
        let (tf, poles) = random_ct(rng);
        let pfe = tf.partial_fractions().unwrap();
        let mut probes = 0;
        while probes < 16 {
            let s = Complex64::new(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
            if poles.iter().any(|p| (p - s).norm() < 0.3) {
                continue;
            }
            let h = tf.eval(s);
            if h.norm() < 1e-3 {
                continue;
            }
            worst_rel = worst_rel.max((pfe.eval(s) - h).norm() / h.norm());
            probes += 1;
        }
        let strict = PartialFractionExpansion {
            terms: pfe.terms.clone(),
            direct: Polynomial::zero(),
        };
        let model = impulse_model(&strict).unwrap();
        for k in 0..50 {
            worst_im = worst_im.max(model.eval_complex(0.1 * k as f64).im.abs());
        }
    }
    check(worst_rel <= 1e-9, || format!("recombination error {worst_rel:e}"))?;
    check(worst_im < 1e-12, || format!("imaginary residue {worst_im:e}"))?;
    Ok(format!("relative {worst_rel:.1e}, imaginary {worst_im:.1e}"))
}

fn figure_run(dir: &Path, id: &str) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_firstorder"))
        .args(["figure", id, "--out-dir"])
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    check(status.status.success(), || {
        format!("figure {id} failed: {}", String::from_utf8_lossy(&status.stderr))
    })
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn golden_figures() -> Outcome {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let run_a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run_b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for n in 3..=9 {
        let id = format!("f{n}");
        figure_run(run_a.path(), &id)?;
        figure_run(run_b.path(), &id)?;
        for name in [format!("{id}_transient.csv"), format!("{id}_freq.csv"), format!("{id}.svg")] {
            let a = std::fs::read(run_a.path().join(&name)).map_err(|e| format!("{name}: {e}"))?;
            let b = std::fs::read(run_b.path().join(&name)).map_err(|e| format!("{name}: {e}"))?;
            check(a == b, || format!("{name} differs between runs"))?;
            if !name.ends_with(".csv") {
                continue;
            }
            let fresh = parse_csv(&String::from_utf8(a).unwrap());
            let gold_text = std::fs::read_to_string(fixtures.join(&name)).map_err(|e| format!("fixture {name}: {e}"))?;
            let gold = parse_csv(&gold_text);
            check(fresh.len() == gold.len(), || format!("{name}: {} rows vs {}", fresh.len(), gold.len()))?;
            for (r, (x, y)) in fresh.iter().zip(&gold).enumerate() {
                for (u, v) in x.iter().zip(y) {
                    check((u - v).abs() <= 1e-9, || format!("{name} row {r}: {u} vs {v}"))?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} values within 1e-9, reruns byte-identical"))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f157);
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>)> = vec![
        ("cutoff magnitudes", Box::new(|_| cutoff_magnitudes())),
        ("memory window", Box::new(|_| memory_window())),
        ("architecture gains", Box::new(|_| architecture_gains())),
        ("discrete LPF gains", Box::new(|_| discrete_lpf_gains())),
        ("pole mappings", Box::new(pole_mappings)),
        ("error orders", Box::new(|_| error_orders())),
        ("DFT exactness", Box::new(dft_exactness)),
        ("spectral leakage", Box::new(|_| spectral_leakage())),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("partial-fraction recombination", Box::new(partial_fraction_recombination)),
        ("golden figures", Box::new(|_| golden_figures())),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut rng)))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
