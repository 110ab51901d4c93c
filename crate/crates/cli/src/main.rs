use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use szegedy::circuit::{to_qasm, Circuit};
use szegedy::oracle::{initial_state, walk_operator};
use szegedy::pagerank::{self, Walk};
use szegedy::synth::{verify_with_tolerance, WalkSpec};
use szegedy::{qubits_for, Error};

#[derive(Parser)]
#[command(
    name = "szegedy",
    version,
    about = "Compile, verify and simulate Szegedy quantum walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the synthesized circuit.
    Synth {
        #[command(flatten)]
        graph: GraphArgs,
        /// Emit OpenQASM 3 instead of the native text format.
        #[arg(long)]
        qasm: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a circuit with the dense walk operator; exit 1 on failure.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Circuit text file to check instead of synthesizing one.
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the walk to the uniform projector-state superposition and
    /// write the statevector as CSV.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Number of walk applications.
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run quantum PageRank and write the series and summary files.
    Pagerank {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = pagerank::DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Backend::Circuit)]
        backend: Backend,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// File name stem for the outputs.
        #[arg(long, default_value = "pagerank")]
        stem: String,
        /// Also write an SVG line plot.
        #[arg(long)]
        plot: bool,
    },
    /// Gate counts of the synthesized circuits across sizes.
    Gatecount {
        /// Restrict to one family.
        #[arg(long, value_enum)]
        graph: Option<Family>,
        /// Largest register width for the circulant families.
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Cycle,
    Complete,
    Circulant,
    Bipartite,
    K2,
    Crown,
    Win,
    Wheel,
    Directed8,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Circuit,
    Oracle,
}

#[derive(Args)]
struct GraphArgs {
    /// Chain family.
    #[arg(long, value_enum, required_unless_present = "spec")]
    graph: Option<Family>,
    /// JSON walk description instead of --graph.
    #[arg(long, conflicts_with = "graph")]
    spec: Option<PathBuf>,
    /// Vertex count (outer vertices for the wheel).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    /// Wheel size as an exponent, N = 2^m.
    #[arg(long, conflicts_with = "n")]
    m: Option<u32>,
    #[arg(long)]
    directed: bool,
    #[arg(long, default_value_t = 0.85)]
    alpha: f64,
    /// Rotation between successive circulant columns.
    #[arg(long)]
    offset_x: Option<u64>,
    /// Seed for the random circulant column.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Io(String),
    VerifyFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) => CliError::Io(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn need(v: Option<usize>, flag: &str) -> CliResult<usize> {
    v.ok_or_else(|| CliError::Input(format!("this graph needs --{flag}")))
}

fn seeded_column(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

fn fixed_column(family: Family, n: usize) -> CliResult<Vec<f64>> {
    if n < 2 {
        return Err(CliError::Input(format!("--n must be at least 2, got {n}")));
    }
    let mut col = vec![0.0; n];
    match family {
        Family::Cycle => {
            col[1] += 0.5;
            col[n - 1] += 0.5;
        }
        _ => col[1..].iter_mut().for_each(|c| *c = 1.0 / (n - 1) as f64),
    }
    Ok(col)
}

impl GraphArgs {
    fn walk_spec(&self) -> CliResult<WalkSpec> {
        if let Some(path) = &self.spec {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            return Ok(WalkSpec::from_json(&text)?);
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(CliError::Input(format!(
                "--alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        let family = self
            .graph
            .ok_or_else(|| CliError::Input("missing --graph".into()))?;
        let n = match self.m {
            Some(m) if m < 31 => Some(1usize << m),
            Some(m) => return Err(CliError::Input(format!("--m {m} is too large"))),
            None => self.n,
        };
        Ok(match family {
            Family::Cycle | Family::Complete => {
                let n = need(n, "n")?;
                match self.offset_x {
                    Some(x) if x != 1 => WalkSpec::Circulant {
                        column: fixed_column(family, n)?,
                        offset_x: x,
                    },
                    _ if family == Family::Cycle => WalkSpec::Cycle { n },
                    _ => WalkSpec::Complete { n },
                }
            }
            Family::Circulant => WalkSpec::Circulant {
                column: seeded_column(need(n, "n")?, self.seed),
                offset_x: self.offset_x.unwrap_or(1),
            },
            Family::Bipartite => WalkSpec::Bipartite {
                n1: need(self.n1, "n1")?,
                n2: need(self.n2, "n2")?,
            },
            Family::K2 => WalkSpec::K2,
            Family::Crown => WalkSpec::Crown { n: need(n, "n")? },
            Family::Win => WalkSpec::Win {
                n1: need(self.n1, "n1")?,
                n2: need(self.n2, "n2")?,
            },
            Family::Wheel => WalkSpec::Wheel {
                n: need(n, "n")?,
                directed: self.directed,
                alpha: self.alpha,
            },
            Family::Directed8 => WalkSpec::Directed8 { alpha: self.alpha },
        })
    }
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_or_synthesize(spec: &WalkSpec, circuit: Option<&Path>) -> CliResult<Circuit> {
    match circuit {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(text.parse()?)
        }
        None => Ok(spec.synthesize()?),
    }
}

/// Vertex count without building the dense matrix.
fn vertex_count(spec: &WalkSpec) -> usize {
    match spec {
        WalkSpec::Cycle { n } | WalkSpec::Complete { n } => *n,
        WalkSpec::Crown { n } => 2 * n,
        WalkSpec::Circulant { column, .. } => column.len(),
        WalkSpec::Bipartite { n1, n2 } | WalkSpec::Win { n1, n2 } => n1 + n2,
        WalkSpec::Wheel { n, .. } => n + 1,
        WalkSpec::K2 => 2,
        WalkSpec::Directed8 { .. } => 8,
        WalkSpec::Tensor(a, b) => vertex_count(a) * vertex_count(b),
        WalkSpec::Custom { matrix, .. } => matrix.n(),
    }
}

fn gatecount_rows(only: Option<Family>, max_n: usize) -> CliResult<String> {
    let mut rows: Vec<(&str, WalkSpec)> = Vec::new();
    let wants = |f: Family| only.is_none_or(|o| o == f);
    let top = max_n.clamp(2, 20);
    if wants(Family::Cycle) {
        rows.extend((2..=top).map(|k| ("cycle", WalkSpec::Cycle { n: 1 << k })));
    }
    if wants(Family::Complete) {
        rows.extend((1..=top).map(|k| ("complete", WalkSpec::Complete { n: 1 << k })));
    }
    if wants(Family::Circulant) {
        rows.extend((1..=top.min(12)).map(|k| {
            (
                "circulant",
                WalkSpec::Circulant {
                    column: seeded_column(1 << k, 0),
                    offset_x: 1,
                },
            )
        }));
    }
    if wants(Family::Bipartite) {
        rows.extend((0..=top.min(10)).map(|k| {
            (
                "bipartite",
                WalkSpec::Bipartite {
                    n1: 1 << k,
                    n2: 1 << k,
                },
            )
        }));
    }
    if wants(Family::K2) {
        rows.push(("k2", WalkSpec::K2));
    }
    if wants(Family::Crown) {
        rows.extend((2..=top).map(|k| ("crown", WalkSpec::Crown { n: 1 << k })));
    }
    if wants(Family::Win) {
        rows.extend((1..=top.min(8)).map(|k| {
            (
                "win",
                WalkSpec::Win {
                    n1: 1 << k,
                    n2: 1 << k,
                },
            )
        }));
    }
    if wants(Family::Wheel) {
        rows.extend((2..=top.min(8)).map(|k| {
            (
                "wheel",
                WalkSpec::Wheel {
                    n: 1 << k,
                    directed: false,
                    alpha: 0.85,
                },
            )
        }));
    }
    if wants(Family::Directed8) {
        rows.push(("directed8", WalkSpec::Directed8 { alpha: 0.85 }));
    }

    let mut out =
        String::from("# gatecount v1\nclass,vertices,qubits_per_register,total,decomposed\n");
    for (name, spec) in rows {
        let vertices = vertex_count(&spec);
        let c = spec.synthesize()?;
        let g = c.gate_count();
        out.push_str(&format!(
            "{name},{vertices},{},{},{}\n",
            qubits_for(vertices),
            g.total,
            g.decomposed
        ));
    }
    Ok(out)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Synth { graph, qasm, out } => {
            let c = graph.walk_spec()?.synthesize()?;
            let text = if qasm { to_qasm(&c) } else { c.to_string() };
            emit(&text, out.as_deref())
        }
        Command::Verify {
            graph,
            circuit,
            tol,
            out,
        } => {
            if tol.is_nan() || tol <= 0.0 {
                return Err(CliError::Input(format!(
                    "--tol must be positive, got {tol}"
                )));
            }
            let spec = graph.walk_spec()?;
            let c = load_or_synthesize(&spec, circuit.as_deref())?;
            let report = verify_with_tolerance(&c, &spec.transition_matrix()?, tol)?;
            let json = report.to_json() + "\n";
            if let Some(path) = &out {
                emit(&json, Some(path))?;
            }
            emit(&json, None)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
        Command::Simulate {
            graph,
            circuit,
            steps,
            out,
        } => {
            let spec = graph.walk_spec()?;
            let p = spec.transition_matrix()?;
            let c = load_or_synthesize(&spec, circuit.as_deref())?;
            let mut state = initial_state(&p, qubits_for(p.n()))?;
            for _ in 0..steps {
                state.evolve(&c)?;
            }
            let mut buf = Vec::new();
            state.write_csv(&mut buf)?;
            emit(&String::from_utf8_lossy(&buf), out.as_deref())
        }
        Command::Pagerank {
            graph,
            steps,
            backend,
            out,
            stem,
            plot,
        } => {
            if steps == 0 {
                return Err(CliError::Input("--steps must be at least 1".into()));
            }
            let spec = graph.walk_spec()?;
            let p = spec.transition_matrix()?;
            let series = match backend {
                Backend::Circuit => pagerank::run(Walk::Circuit(&spec.synthesize()?), &p, steps)?,
                Backend::Oracle => pagerank::run(Walk::Oracle(&walk_operator(&p)?), &p, steps)?,
            };
            let paths = pagerank::export(&series, &out, &stem, plot)?;
            let mut ranked: Vec<(usize, f64)> =
                series.average.iter().copied().enumerate().collect();
            ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let mut text = String::from("vertex,avg_Q\n");
            for (j, a) in ranked {
                text.push_str(&format!("{j},{a}\n"));
            }
            text.push_str(&format!("# wrote {}\n", paths.series.display()));
            emit(&text, None)
        }
        Command::Gatecount { graph, max_n, out } => {
            emit(&gatecount_rows(graph, max_n)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::VerifyFailed) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
