//! Numeric reproductions of the figure set.
//!
//! Each figure yields CSV tables and one SVG rendering of them. Outputs depend
//! only on [`FigureParams`], so identical parameters give identical bytes.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::blocks::{flatten, Architecture, BlockGraph};
use crate::ct;
use crate::discretize::{dt_hpf, dt_lpf_with_pole, negative_pole_filter};
use crate::dt::{self, simulate, DifferenceEquation, Sequence};
use crate::error::{Error, Result};
use crate::rational::RationalTf;

use super::svg::{self, Panel, Series, Style};

/// Magnitudes below this level are written as this level.
pub const DB_FLOOR: f64 = -300.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    F1,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::F1,
        FigureId::F3,
        FigureId::F4,
        FigureId::F5,
        FigureId::F6,
        FigureId::F7,
        FigureId::F8,
        FigureId::F9,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::F1 => "f1",
            FigureId::F3 => "f3",
            FigureId::F4 => "f4",
            FigureId::F5 => "f5",
            FigureId::F6 => "f6",
            FigureId::F7 => "f7",
            FigureId::F8 => "f8",
            FigureId::F9 => "f9",
        }
    }

    fn title(&self) -> &'static str {
        match self {
            FigureId::F1 => "Pole-zero stage with a non-dominant pole",
            FigureId::F3 => "Discrete differentiator",
            FigureId::F4 => "Two-sample moving sum",
            FigureId::F5 => "Discrete accumulator",
            FigureId::F6 => "Discrete oscillator",
            FigureId::F7 => "Discrete low-pass",
            FigureId::F8 => "Low-pass with negative pole",
            FigureId::F9 => "Discrete high-pass",
        }
    }

    fn default_coefficient(&self) -> f64 {
        match self {
            FigureId::F7 | FigureId::F8 | FigureId::F9 => 0.6,
            _ => 1.0,
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        FigureId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown figure {s:?}; expected one of f1, f3..f9"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureParams {
    /// Pole or zero coefficient; `None` uses the figure's default.
    pub zp: Option<f64>,
    /// Sample rate in Hz for the discrete figures.
    pub fs: f64,
    /// Transient length in samples.
    pub n: usize,
    /// Points on the linear discrete frequency grid.
    pub points: usize,
}

impl Default for FigureParams {
    fn default() -> Self {
        Self {
            zp: None,
            fs: 1.0,
            n: 16,
            points: 512,
        }
    }
}

/// A named output file.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Writes rows with a header, `,` separators and LF line endings.
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

fn to_db(mag: f64) -> f64 {
    (20.0 * mag.log10()).max(DB_FLOOR)
}

/// The discrete system behind figures 3 to 9.
pub fn discrete_system(id: FigureId, params: &FigureParams) -> Result<DifferenceEquation> {
    let c = params.zp.unwrap_or(id.default_coefficient());
    let graph = |arch| flatten(&BlockGraph::canonical(arch)?);
    match id {
        FigureId::F1 => Err(Error::UnsupportedTopology("figure f1 is continuous-time".into())),
        FigureId::F3 => graph(Architecture::FirDifferentiator(c)),
        FigureId::F4 => graph(Architecture::MovingSum(c)),
        FigureId::F5 => graph(Architecture::Accumulator(c)),
        FigureId::F6 => graph(Architecture::Oscillator(c)),
        FigureId::F7 => dt_lpf_with_pole(c),
        FigureId::F8 => negative_pole_filter(c),
        FigureId::F9 => dt_hpf(c),
    }
}

/// `(freq_hz, magnitude_db, phase_rad)` on `points` linear samples of
/// `[0, Fs/2]`, skipping samples that land on a pole.
pub fn dt_frequency_rows(de: &DifferenceEquation, fs: f64, points: usize) -> Result<Vec<Vec<f64>>> {
    if points < 2 {
        return Err(Error::Empty("frequency grid"));
    }
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let f = 0.5 * fs * k as f64 / (points - 1) as f64;
        match dt::freq_response(de, fs, &[f]) {
            Ok(r) => rows.push(vec![f, to_db(r.values[0].norm()), r.values[0].arg()]),
            Err(Error::PoleOnGrid { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

/// `(freq_hz, magnitude_db, phase_rad)` for a continuous system.
pub fn ct_frequency_rows(tf: &RationalTf, f_hz: &[f64]) -> Result<Vec<Vec<f64>>> {
    let omega: Vec<f64> = f_hz.iter().map(|f| TAU * f).collect();
    let r = ct::freq_response(tf, &omega)?;
    Ok(f_hz
        .iter()
        .zip(&r.values)
        .map(|(&f, v)| vec![f, to_db(v.norm()), v.arg()])
        .collect())
}

/// `512` log-spaced points per decade from `10^lo` to `10^hi` Hz.
pub fn log_grid(lo: i32, hi: i32) -> Vec<f64> {
    let per = 512;
    let total = (hi - lo) as usize * per;
    (0..=total).map(|k| 10f64.powf(lo as f64 + k as f64 / per as f64)).collect()
}

/// `K (s - s_z) / (s - s_p)` with unit DC gain, followed by a parasitic
/// pole at `s_nd`.
pub fn pole_zero_stage(s_z: f64, s_p: f64, s_nd: f64) -> Result<RationalTf> {
    let k = s_p / s_z;
    let stage = RationalTf::continuous([-k * s_z, k], [-s_p, 1.0])?;
    ct::with_parasitic_pole(&stage, -1.0 / s_nd)
}

fn figure_one() -> Result<Vec<Artifact>> {
    let grid = log_grid(-3, 6);
    let configs = [
        ("integrator", -1e3, -1.0),
        ("differentiator", -1.0, -1e3),
    ];
    let header = ["freq_hz", "magnitude_db", "phase_rad"];
    let mut artifacts = Vec::new();
    let mut series = Vec::new();
    for (name, s_z, s_p) in configs {
        let rows = ct_frequency_rows(&pole_zero_stage(s_z, s_p, -1e5)?, &grid)?;
        series.push(Series {
            label: name.into(),
            points: rows.iter().map(|r| (r[0], r[1])).collect(),
        });
        artifacts.push(Artifact {
            name: format!("f1_{name}_freq.csv"),
            contents: csv_table(&header, &rows),
        });
    }
    artifacts.push(Artifact {
        name: "f1.svg".into(),
        contents: svg::render(&[Panel {
            title: FigureId::F1.title().into(),
            x_label: "frequency (Hz)".into(),
            y_label: "magnitude (dB)".into(),
            log_x: true,
            style: Style::Line,
            series,
        }]),
    });
    Ok(artifacts)
}

/// All artifacts of one figure.
pub fn generate(id: FigureId, params: &FigureParams) -> Result<Vec<Artifact>> {
    if id == FigureId::F1 {
        return figure_one();
    }
    if !(params.fs > 0.0 && params.fs.is_finite()) {
        return Err(Error::NonPositive {
            name: "sample rate",
            value: params.fs,
        });
    }
    if params.n == 0 {
        return Err(Error::Empty("transient length"));
    }
    let de = discrete_system(id, params)?;
    let impulse = simulate(&de, &Sequence::impulse(params.n, params.fs)?, params.n);
    let step = simulate(&de, &Sequence::step(params.n, params.fs)?, params.n);
    let transient: Vec<Vec<f64>> = (0..params.n)
        .map(|k| vec![k as f64, impulse.samples()[k], step.samples()[k]])
        .collect();
    let freq = dt_frequency_rows(&de, params.fs, params.points)?;
    let stems = |col: usize| transient.iter().map(|r| (r[0], r[col])).collect();
    let svg = svg::render(&[
        Panel {
            title: format!("{} (transient)", id.title()),
            x_label: "sample n".into(),
            y_label: "amplitude".into(),
            log_x: false,
            style: Style::Stem,
            series: vec![
                Series {
                    label: "impulse".into(),
                    points: stems(1),
                },
                Series {
                    label: "step".into(),
                    points: stems(2),
                },
            ],
        },
        Panel {
            title: format!("{} (frequency)", id.title()),
            x_label: "frequency (Hz)".into(),
            y_label: "magnitude (dB)".into(),
            log_x: false,
            style: Style::Line,
            series: vec![Series {
                label: "|H|".into(),
                points: freq.iter().map(|r| (r[0], r[1])).collect(),
            }],
        },
    ]);
    Ok(vec![
        Artifact {
            name: format!("{id}_transient.csv"),
            contents: csv_table(&["n", "impulse", "step"], &transient),
        },
        Artifact {
            name: format!("{id}_freq.csv"),
            contents: csv_table(&["freq_hz", "magnitude_db", "phase_rad"], &freq),
        },
        Artifact {
            name: format!("{id}.svg"),
            contents: svg,
        },
    ])
}
