//! Time-series CSV and JSON checkpoints.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::energies::EnergyReport;
use crate::error::{Error, Result};
use crate::model::{Label, Mode, WaveState};
use crate::spectral::{Field, Grid};
use crate::stepper::{Resume, StopReason};
use crate::C64;

pub const CSV_COLUMNS: [&str; 10] = ["t", "dt", "E1", "E2", "E3", "Ea", "E", "Ecal", "blowup_B", "holo_residual"];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV row; `d_pinch` is written only when the table has that column.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub step: u64,
    pub dt: f64,
    pub report: EnergyReport,
    pub d_pinch: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub with_pinch: bool,
    pub rows: Vec<Row>,
    pub stop: Option<StopReason>,
}

impl Table {
    pub fn new(with_pinch: bool) -> Self {
        Table { with_pinch, rows: Vec::new(), stop: None }
    }

    pub fn header(&self) -> String {
        let mut cols: Vec<&str> = CSV_COLUMNS.to_vec();
        if self.with_pinch {
            cols.push("d_pinch");
        }
        cols.push("stop_reason");
        cols.join(",")
    }

    pub fn render(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        let last = self.rows.len().saturating_sub(1);
        for (i, row) in self.rows.iter().enumerate() {
            let r = &row.report;
            let mut cells: Vec<String> =
                [r.t, row.dt, r.e1, r.e2, r.e3, r.ea, r.e, r.ecal, r.blowup_b, r.holo_residual]
                    .iter()
                    .map(|&x| num(x))
                    .collect();
            if self.with_pinch {
                cells.push(row.d_pinch.map(num).unwrap_or_default());
            }
            cells.push(if i == last {
                self.stop.map(|s| s.as_str().to_string()).unwrap_or_default()
            } else {
                String::new()
            });
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub mode: Mode,
    pub n: usize,
    pub offset: f64,
    pub cutoff: usize,
    pub t: f64,
    pub step: u64,
    pub next_output: u64,
    pub last_dt: f64,
    pub labels: Vec<Label>,
    /// Fourier coefficients in FFT order
    pub z: Vec<C64>,
    pub q: Vec<C64>,
    pub ztbar: Vec<C64>,
}

pub const CHECKPOINT_FORMAT: &str = "crestflow-checkpoint";

impl Checkpoint {
    pub fn capture(s: &WaveState, resume: Resume, last_dt: f64) -> Self {
        let g = s.grid();
        Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: 1,
            mode: s.mode,
            n: g.n(),
            offset: g.offset(),
            cutoff: g.cutoff(),
            t: s.t,
            step: resume.step,
            next_output: resume.next_output,
            last_dt,
            labels: s.labels.clone(),
            z: s.z.coeffs().to_vec(),
            q: s.q.coeffs().to_vec(),
            ztbar: s.ztbar.coeffs().to_vec(),
        }
    }

    pub fn restore(&self) -> Result<(WaveState, Resume)> {
        if self.format != CHECKPOINT_FORMAT || self.version != 1 {
            return Err(Error::InvalidInput(format!("not a version 1 checkpoint: {} v{}", self.format, self.version)));
        }
        let g = Grid::build(self.n, self.offset, self.cutoff)?;
        for (name, c) in [("z", &self.z), ("q", &self.q), ("ztbar", &self.ztbar)] {
            if c.len() != self.n {
                return Err(Error::InvalidInput(format!("{name} has {} coefficients, grid has {}", c.len(), self.n)));
            }
        }
        let f = |c: &Vec<C64>| Field::from_coeffs(&g, c.clone());
        let mut s = WaveState::new(self.mode, f(&self.z), f(&self.q), f(&self.ztbar))?;
        s.t = self.t;
        s.labels = self.labels.clone();
        Ok((s, Resume { step: self.step, next_output: self.next_output }))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Rebuild every field from its coefficients so that a state and its
/// checkpoint evaluate identically.
pub fn canonical(s: &WaveState) -> WaveState {
    let f = |x: &Field| Field::from_coeffs(x.grid(), x.coeffs().to_vec());
    let mut out = s.clone();
    out.z = f(&s.z);
    out.q = f(&s.q);
    out.ztbar = f(&s.ztbar);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initialdata::disc_random;

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let g = Grid::with_offset(32, 0.5).unwrap();
        let mut s = canonical(&disc_random(&g, 5).unwrap());
        s.t = 0.1 + 0.2;
        s.track(&[0.0, 1.0 / 3.0]);
        let cp = Checkpoint::capture(&s, Resume { step: 7, next_output: 2 }, 1e-3 / 3.0);
        let back: Checkpoint = serde_json::from_str(&serde_json::to_string(&cp).unwrap()).unwrap();
        assert_eq!(back, cp);
        let (r, resume) = back.restore().unwrap();
        assert_eq!(resume, Resume { step: 7, next_output: 2 });
        assert_eq!(r.t.to_bits(), s.t.to_bits());
        for (a, b) in [(&r.z, &s.z), (&r.q, &s.q), (&r.ztbar, &s.ztbar)] {
            assert_eq!(a.values(), b.values());
        }
        assert_eq!(r.labels, s.labels);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(true);
        t.rows.push(Row { step: 0, dt: 0.0, report: EnergyReport::default(), d_pinch: Some(1.5) });
        t.rows.push(Row {
            step: 1,
            dt: 0.1,
            report: EnergyReport { t: 0.1, ..Default::default() },
            d_pinch: Some(1.25),
        });
        t.stop = Some(StopReason::TFinal);
        let text = t.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,dt,E1,E2,E3,Ea,E,Ecal,blowup_B,holo_residual,d_pinch,stop_reason");
        assert!(lines[1].ends_with(",1.5000000000000000e0,"));
        assert!(lines[2].starts_with("1.0000000000000001e-1,1.0000000000000001e-1,"));
        assert!(lines[2].ends_with(",t_final"));
        let x: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert_eq!(x, 0.1);
    }
}
