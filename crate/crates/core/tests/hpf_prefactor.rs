//! The discrete HPF as built here against the variant scaled by `z_p`. The
//! two differ by a constant `20 log10(z_p)` dB. Set `FIRSTORDER_BLESS=1` to
//! rewrite the fixture.

use std::path::Path;

use firstorder::discretize::dt_hpf;
use firstorder::dt::{self, DifferenceEquation};

const ZP: f64 = 0.6;

fn table() -> String {
    let ours = dt_hpf(ZP).unwrap();
    let scaled = DifferenceEquation::new(ours.b().iter().map(|v| ZP * v).collect::<Vec<_>>(), ours.a().to_vec()).unwrap();
    let grid: Vec<f64> = (1..=32).map(|k| k as f64 / 64.0).collect();
    let a = dt::freq_response(&ours, 1.0, &grid).unwrap().magnitude_db();
    let b = dt::freq_response(&scaled, 1.0, &grid).unwrap().magnitude_db();
    let mut out = String::from("freq_hz,unscaled_db,scaled_db\n");
    for ((f, x), y) in grid.iter().zip(&a).zip(&b) {
        out.push_str(&format!("{f},{x},{y}\n"));
    }
    out
}

#[test]
fn scaled_variant_sits_a_constant_offset_below() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/hpf_prefactor.csv");
    let fresh = table();
    if std::env::var_os("FIRSTORDER_BLESS").is_some() {
        std::fs::write(&path, &fresh).unwrap();
    }
    let gold = std::fs::read_to_string(&path).unwrap();
    let offset = 20.0 * ZP.log10();
    for (f, g) in fresh.lines().skip(1).zip(gold.lines().skip(1)) {
        let f: Vec<f64> = f.split(',').map(|v| v.parse().unwrap()).collect();
        let g: Vec<f64> = g.split(',').map(|v| v.parse().unwrap()).collect();
        for (u, v) in f.iter().zip(&g) {
            assert!((u - v).abs() <= 1e-9);
        }
        assert!((f[2] - f[1] - offset).abs() <= 1e-12);
    }
    let nyquist = fresh.lines().last().unwrap().split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert!((nyquist - 20.0 * (2.0 / (1.0 + ZP)).log10()).abs() <= 1e-12);
}
