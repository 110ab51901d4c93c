//! Quantum PageRank: second-register occupation under `U_walk^2`.
//!
//! `Q(j, t) = |<j|_2 U^{2t} |psi_0>|^2` with `|psi_0>` the uniform
//! superposition of projector states, and `<Q(j)>` its mean over
//! `t = 0..T`.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::Array1;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::markov::TransitionMatrix;
use crate::oracle::{initial_state, initial_superposition, WalkOracle};
use crate::qubits_for;
use crate::simulator::{marginal_register2, StateVector};

pub const DEFAULT_STEPS: usize = 1000;

/// Probability allowed outside the valid subspace before a run aborts.
pub const LEAKAGE_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub enum Walk<'a> {
    Circuit(&'a Circuit),
    Oracle(&'a WalkOracle),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PagerankSeries {
    pub n_vertices: usize,
    pub steps: usize,
    /// `instantaneous[t][j] = Q(j, t)`.
    pub instantaneous: Vec<Vec<f64>>,
    pub average: Vec<f64>,
    /// Largest probability seen outside the valid subspace.
    pub max_leakage: f64,
}

impl PagerankSeries {
    /// Mean of `Q(j, t)` over the first `t_max` steps.
    pub fn average_over(&self, t_max: usize) -> Vec<f64> {
        let t_max = t_max.clamp(1, self.steps);
        let mut avg = vec![0.0; self.n_vertices];
        for row in &self.instantaneous[..t_max] {
            for (a, q) in avg.iter_mut().zip(row) {
                *a += q;
            }
        }
        avg.iter_mut().for_each(|a| *a /= t_max as f64);
        avg
    }

    /// Largest `|sum_j Q(j, t) - 1|` over all recorded steps.
    pub fn max_normalization_error(&self) -> f64 {
        self.instantaneous
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn check_steps(steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::param("steps must be at least 1"));
    }
    Ok(())
}

pub fn run(walk: Walk<'_>, p: &TransitionMatrix, steps: usize) -> Result<PagerankSeries> {
    check_steps(steps)?;
    let big_n = p.n();
    let mut instantaneous = Vec::with_capacity(steps);
    let mut max_leakage: f64 = 0.0;
    match walk {
        Walk::Circuit(c) => {
            let n = qubits_for(big_n);
            if c.width() != 2 * n {
                return Err(Error::WidthMismatch {
                    expected: 2 * n,
                    found: c.width(),
                });
            }
            let reg = 1usize << n;
            let mut state = initial_state(p, n)?;
            for t in 0..steps {
                let leak = invalid_weight(&state, big_n, reg);
                max_leakage = max_leakage.max(leak);
                if leak > LEAKAGE_LIMIT {
                    return Err(Error::Leakage(leak));
                }
                let marginal = marginal_register2(&state, n)?;
                instantaneous.push(marginal[..big_n].to_vec());
                if t + 1 < steps {
                    state.evolve(c)?;
                    state.evolve(c)?;
                }
            }
        }
        Walk::Oracle(o) => {
            if o.n_states() != big_n {
                return Err(Error::WidthMismatch {
                    expected: big_n,
                    found: o.n_states(),
                });
            }
            let u = o.matrix();
            let mut state = Array1::from(initial_superposition(p));
            for t in 0..steps {
                let mut q = vec![0.0; big_n];
                for (k, a) in state.iter().enumerate() {
                    q[k % big_n] += a * a;
                }
                instantaneous.push(q);
                if t + 1 < steps {
                    state = u.dot(&u.dot(&state));
                }
            }
        }
    }
    let mut series = PagerankSeries {
        n_vertices: big_n,
        steps,
        instantaneous,
        average: Vec::new(),
        max_leakage,
    };
    series.average = series.average_over(steps);
    Ok(series)
}

fn invalid_weight(s: &StateVector, big_n: usize, reg: usize) -> f64 {
    s.amplitudes()
        .iter()
        .enumerate()
        .filter(|(k, _)| k / reg >= big_n || k % reg >= big_n)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HubComparison {
    pub undirected_hub: f64,
    pub directed_hub: f64,
    /// `directed_hub - undirected_hub`.
    pub difference: f64,
    pub directed_higher: bool,
}

/// Compares the average rank of the last vertex (the hub) in two series.
pub fn compare_hub(
    undirected: &PagerankSeries,
    directed: &PagerankSeries,
) -> Result<HubComparison> {
    if undirected.n_vertices != directed.n_vertices || undirected.n_vertices == 0 {
        return Err(Error::WidthMismatch {
            expected: undirected.n_vertices,
            found: directed.n_vertices,
        });
    }
    let hub = undirected.n_vertices - 1;
    let (u, d) = (undirected.average[hub], directed.average[hub]);
    Ok(HubComparison {
        undirected_hub: u,
        directed_hub: d,
        difference: d - u,
        directed_higher: d > u,
    })
}

pub const SERIES_HEADER: &str = "# pagerank series v1";
pub const SUMMARY_HEADER: &str = "# pagerank summary v1";

/// Files written by [`export`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExportPaths {
    pub series: PathBuf,
    pub summary: PathBuf,
    pub summary_json: PathBuf,
    pub plot: Option<PathBuf>,
}

/// Writes `<dir>/<stem>.csv` (`t,vertex,Q`), `<stem>_summary.csv`
/// (`vertex,avg_Q`), `<stem>_summary.json` and optionally `<stem>.svg`.
pub fn export(series: &PagerankSeries, dir: &Path, stem: &str, plot: bool) -> Result<ExportPaths> {
    std::fs::create_dir_all(dir)?;
    let paths = ExportPaths {
        series: dir.join(format!("{stem}.csv")),
        summary: dir.join(format!("{stem}_summary.csv")),
        summary_json: dir.join(format!("{stem}_summary.json")),
        plot: plot.then(|| dir.join(format!("{stem}.svg"))),
    };

    let mut out = BufWriter::new(File::create(&paths.series)?);
    writeln!(out, "{SERIES_HEADER}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "vertex", "Q"])?;
    for (t, row) in series.instantaneous.iter().enumerate() {
        for (j, q) in row.iter().enumerate() {
            w.write_record([t.to_string(), j.to_string(), q.to_string()])?;
        }
    }
    w.flush()?;

    let mut out = BufWriter::new(File::create(&paths.summary)?);
    writeln!(out, "{SUMMARY_HEADER}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["vertex", "avg_Q"])?;
    for (j, a) in series.average.iter().enumerate() {
        w.write_record([j.to_string(), a.to_string()])?;
    }
    w.flush()?;

    let summary: serde_json::Map<String, serde_json::Value> = series
        .average
        .iter()
        .enumerate()
        .map(|(j, a)| (j.to_string(), serde_json::Value::from(*a)))
        .collect();
    let mut out = BufWriter::new(File::create(&paths.summary_json)?);
    serde_json::to_writer_pretty(&mut out, &summary)?;
    writeln!(out)?;
    out.flush()?;

    if let Some(path) = &paths.plot {
        std::fs::write(path, svg_plot(series))?;
    }
    Ok(paths)
}

/// Reads a series CSV written by [`export`] back as `(t, vertex, Q)` rows.
pub fn read_series_csv(path: &Path) -> Result<Vec<(usize, usize, f64)>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    let mut rows = Vec::new();
    for (line, rec) in r.deserialize::<(usize, usize, f64)>().enumerate() {
        rows.push(rec.map_err(|e| Error::Parse {
            line: line + 2,
            msg: e.to_string(),
        })?);
    }
    Ok(rows)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Line plot of `Q(j, t)` for every vertex, one polyline each.
pub fn svg_plot(series: &PagerankSeries) -> String {
    let (w, h, margin) = (800.0, 400.0, 40.0);
    let q_max = series
        .instantaneous
        .iter()
        .flatten()
        .copied()
        .fold(0.0, f64::max)
        .max(1e-12);
    let t_span = (series.steps.max(2) - 1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{margin} {margin} V{} H{}" stroke="black" fill="none"/>"#,
        h - margin,
        w - margin
    );
    let _ = writeln!(
        s,
        r#"<text x="{margin}" y="{}" font-size="12">Q max {q_max:.4}, t 0..{}</text>"#,
        margin - 10.0,
        series.steps - 1
    );
    for j in 0..series.n_vertices {
        let points: Vec<String> = series
            .instantaneous
            .iter()
            .enumerate()
            .map(|(t, row)| {
                let x = margin + (w - 2.0 * margin) * t as f64 / t_span;
                let y = h - margin - (h - 2.0 * margin) * row[j] / q_max;
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1"><title>vertex {j}</title></polyline>"#,
            points.join(" "),
            PALETTE[j % PALETTE.len()]
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{complete_graph, cycle_graph};
    use crate::oracle::walk_operator;
    use crate::synth::{synth_circulant, synth_k2, CirculantColumn};

    #[test]
    fn first_step_is_column_average() {
        let p = cycle_graph(4).unwrap();
        let o = walk_operator(&p).unwrap();
        let s = run(Walk::Oracle(&o), &p, 1).unwrap();
        for j in 0..4 {
            let expected: f64 = (0..4).map(|i| p.get(j, i) / 4.0).sum();
            assert!((s.instantaneous[0][j] - expected).abs() < 1e-15);
        }
        assert_eq!(s.average, s.instantaneous[0]);
    }

    #[test]
    fn backends_agree() {
        let p = cycle_graph(8).unwrap();
        let o = walk_operator(&p).unwrap();
        let c = synth_circulant(3, &CirculantColumn::Cycle, 1).unwrap();
        let a = run(Walk::Oracle(&o), &p, 20).unwrap();
        let b = run(Walk::Circuit(&c), &p, 20).unwrap();
        for (ra, rb) in a.instantaneous.iter().zip(&b.instantaneous) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(b.max_normalization_error() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let p = complete_graph(2).unwrap();
        let c = synth_k2();
        assert!(run(Walk::Circuit(&c), &p, 0).is_err());
        let p4 = cycle_graph(4).unwrap();
        assert!(run(Walk::Circuit(&c), &p4, 3).is_err());
    }

    #[test]
    fn leaking_circuit_aborts() {
        // a rotation on the low qubit of register 2 mixes row 2 into the unused row 3
        let p = cycle_graph(3).unwrap();
        let mut c = Circuit::new(4);
        c.push(crate::circuit::Gate::ry(3, 0.3)).unwrap();
        assert!(matches!(
            run(Walk::Circuit(&c), &p, 3),
            Err(Error::Leakage(_))
        ));
    }

    #[test]
    fn hub_comparison_is_antisymmetric() {
        let s = PagerankSeries {
            n_vertices: 2,
            steps: 1,
            instantaneous: vec![vec![0.4, 0.6]],
            average: vec![0.4, 0.6],
            max_leakage: 0.0,
        };
        let mut t = s.clone();
        t.average = vec![0.3, 0.7];
        assert_eq!(compare_hub(&s, &s).unwrap().difference, 0.0);
        let ab = compare_hub(&s, &t).unwrap();
        let ba = compare_hub(&t, &s).unwrap();
        assert_eq!(ab.difference, -ba.difference);
        assert!(ab.directed_higher);
    }

    #[test]
    fn export_round_trip() {
        let p = complete_graph(2).unwrap();
        let s = run(Walk::Circuit(&synth_k2()), &p, 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = export(&s, dir.path(), "k2", true).unwrap();
        let rows = read_series_csv(&paths.series).unwrap();
        assert_eq!(rows.len(), 4);
        for (t, j, q) in rows {
            assert_eq!(q, s.instantaneous[t][j]);
        }
        let text = std::fs::read_to_string(&paths.series).unwrap();
        assert!(text.starts_with(SERIES_HEADER));
        assert!(std::fs::read_to_string(paths.plot.unwrap())
            .unwrap()
            .contains("<polyline"));
        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(paths.summary_json).unwrap()).unwrap();
        assert_eq!(json["1"].as_f64().unwrap(), s.average[1]);
    }
}
