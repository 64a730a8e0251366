//! `twoband` command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch or failed computation,
//! 2 invalid input.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::band::{BandMatrix, Mode};
use crate::cyclic::extract_cyclic;
use crate::error::Error;
use crate::io::{parse_instance, GeneratorSpec, InstanceFile};
use crate::spectrum::{base_index, block_product, structured_eigenvalues};
use crate::split::split;
use crate::sweep::{run_sweep, to_csv, SweepSpec};
use crate::tn::{oscillatory_check_capped, DEFAULT_MAX_DIM};
use crate::verify::{verify, VerifyConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "twoband", version, about = "Spectra of two-band matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Instance JSON file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Emit JSON (the default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV where a tabular form exists.
    #[arg(long)]
    csv: bool,
    /// Refuse instances of order above this.
    #[arg(long)]
    max_n: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structured spectrum report.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Structured spectrum against the dense oracle.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Matching tolerance, relative to max(1, spectral radius).
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Relative threshold below which oracle eigenvalues count as zero.
        #[arg(long, default_value_t = 1e-5)]
        zero_tol: f64,
    },
    /// Permutation similarities: gcd split, and with --cyclic the block-cyclic form.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cyclic: bool,
    },
    /// Oscillatory certificate for the base product of every block.
    CheckTn {
        #[command(flatten)]
        common: Common,
        /// Minor nonnegativity tolerance, relative to the minor's magnitude bound.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Largest product order examined exhaustively.
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: usize,
    },
    /// Seeded verification over an (n, b, k) grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        zero_tol: Option<f64>,
        /// Master seed, overriding the one in the sweep file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Random instance with entries uniform in [low, high].
    Generate {
        /// Generator JSON instead of flags.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, required_unless_present = "input")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "input")]
        b: Option<usize>,
        #[arg(long, required_unless_present = "input")]
        k: Option<usize>,
        #[arg(long, default_value = "positive")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        low: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        high: f64,
    },
}

enum Failure {
    Invalid(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Mismatch(e.to_string())
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_input(&mut self, path: &str) -> Result<String, Failure> {
        let mut text = String::new();
        let res = if path == "-" {
            self.stdin.read_to_string(&mut text).map(|_| ())
        } else {
            std::fs::read_to_string(PathBuf::from(path)).map(|t| text = t)
        };
        res.map_err(|e| Failure::Invalid(format!("cannot read {path}: {e}")))?;
        Ok(text)
    }

    fn emit(&mut self, value: &impl serde::Serialize) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| Failure::Mismatch(format!("serialization failed: {e}")))?;
        self.emit_text(&(text + "\n"))
    }

    fn emit_text(&mut self, text: &str) -> Result<(), Failure> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Mismatch(format!("cannot write output: {e}")))
    }

    fn instance(&mut self, common: &Common) -> Result<BandMatrix, Failure> {
        let text = self.read_input(&common.input)?;
        let bm = parse_instance(&text)?;
        if let Some(cap) = common.max_n {
            if bm.n() > cap {
                return Err(Failure::Invalid(format!("n = {} exceeds --max-n {cap}", bm.n())));
            }
        }
        Ok(bm)
    }
}

/// Runs the CLI on explicit streams and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let mut io = Io { stdin, stdout };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_MISMATCH
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<u8, Failure> {
    match command {
        Command::Analyze { common } => {
            let bm = io.instance(&common)?;
            let rep = structured_eigenvalues(&bm, &Default::default())?;
            if common.csv {
                let mut s = String::from("re,im\n");
                for z in &rep.eigenvalues.values {
                    s.push_str(&format!("{},{}\n", z.re, z.im));
                }
                io.emit_text(&s)?;
            } else {
                io.emit(&rep)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            common,
            tol,
            zero_tol,
        } => {
            let bm = io.instance(&common)?;
            let cfg = VerifyConfig {
                tol,
                zero_tol,
                ..Default::default()
            };
            let rep = verify(&bm, &cfg)?;
            io.emit(&rep)?;
            Ok(if rep.passed { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Decompose { common, cyclic } => {
            let bm = io.instance(&common)?;
            io.emit(&decompose(&bm, cyclic)?)?;
            Ok(EXIT_OK)
        }
        Command::CheckTn {
            common,
            tol,
            max_dim,
        } => {
            let bm = io.instance(&common)?;
            let (value, ok) = check_tn(&bm, tol, max_dim)?;
            io.emit(&value)?;
            Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Sweep {
            common,
            tol,
            zero_tol,
            seed,
        } => {
            let text = io.read_input(&common.input)?;
            let mut spec: SweepSpec = serde_json::from_str(&text)
                .map_err(|e| Failure::Invalid(format!("bad sweep spec: {e}")))?;
            if let Some(s) = seed {
                spec.seed = s;
            }
            spec.tol = tol.or(spec.tol);
            spec.zero_tol = zero_tol.or(spec.zero_tol);
            if let Some(cap) = common.max_n {
                spec.n[1] = spec.n[1].min(cap);
            }
            if spec.cells().is_empty() {
                io.emit_text(if common.csv { "" } else { "[]\n" })?;
                return Ok(EXIT_OK);
            }
            // reject bad generator ranges up front rather than per cell
            spec.cells()[0].validate()?;
            let results = run_sweep(&spec, &VerifyConfig::default());
            if common.csv {
                io.emit_text(&to_csv(&results))?;
            } else {
                io.emit(&results)?;
            }
            Ok(if results.iter().all(|r| r.passed) {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
        Command::Generate {
            input,
            n,
            b,
            k,
            mode,
            seed,
            low,
            high,
        } => {
            let spec = match input {
                Some(path) => {
                    let text = io.read_input(&path)?;
                    serde_json::from_str::<GeneratorSpec>(&text)
                        .map_err(|e| Failure::Invalid(format!("bad generator spec: {e}")))?
                }
                None => GeneratorSpec {
                    n: n.unwrap_or_default(),
                    b: b.unwrap_or_default(),
                    k: k.unwrap_or_default(),
                    mode,
                    seed,
                    low,
                    high,
                },
            };
            let bm = spec.generate()?;
            io.emit(&InstanceFile::from(&bm))?;
            Ok(EXIT_OK)
        }
    }
}

fn pairs(values: impl IntoIterator<Item = num_complex::Complex64>) -> Value {
    values
        .into_iter()
        .map(|z| if z.im == 0.0 { json!(z.re) } else { json!([z.re, z.im]) })
        .collect()
}

fn decompose(bm: &BandMatrix, cyclic: bool) -> Result<Value, Failure> {
    let dec = split(bm)?;
    let mut blocks = Vec::new();
    for (t, block) in dec.blocks.iter().enumerate() {
        let mut entry = json!({
            "t": t + 1,
            "instance": InstanceFile::from(block),
        });
        if cyclic {
            entry["cyclic"] = if block.has_empty_band() {
                Value::Null
            } else {
                let cd = extract_cyclic(block)?;
                let idx = &cd.index_data;
                json!({
                    "p": cd.p(),
                    "gammas": idx.gammas,
                    "z": idx.zs,
                    "sizes": idx.sizes,
                    "perm": cd.perm,
                    "base_index": base_index(&cd),
                    "blocks": cd.blocks.iter().enumerate().map(|(i, c)| json!({
                        "i": i + 1,
                        "rows": c.rows,
                        "cols": c.cols,
                        "orientation": c.orientation,
                        "main": pairs(c.main.iter().copied()),
                        "off": pairs(c.off.iter().copied()),
                    })).collect::<Vec<_>>(),
                })
            };
        }
        blocks.push(entry);
    }
    Ok(json!({
        "n": bm.n(),
        "b": bm.b(),
        "k": bm.k(),
        "g": dec.g(),
        "perm": dec.perm,
        "block_sizes": dec.block_sizes,
        "blocks": blocks,
    }))
}

fn check_tn(bm: &BandMatrix, tol: f64, max_dim: usize) -> Result<(Value, bool), Failure> {
    let dec = split(bm)?;
    let mut out = Vec::new();
    let mut ok = true;
    for (t, block) in dec.blocks.iter().enumerate() {
        let p = block.b() + block.k();
        if block.n() / p == 0 {
            out.push(json!({ "t": t + 1, "m": 0, "report": Value::Null }));
            continue;
        }
        let cd = extract_cyclic(block)?;
        let j = base_index(&cd);
        let d = block_product(&cd, j)?;
        let rep = oscillatory_check_capped(&d, tol, max_dim)?;
        ok &= rep.is_oscillatory();
        out.push(json!({ "t": t + 1, "j": j, "m": d.rows(), "report": rep }));
    }
    Ok((json!({ "oscillatory": ok, "blocks": out }), ok))
}

/// Entry point for the binary.
pub fn main() -> std::process::ExitCode {
    let code = run(
        std::env::args_os(),
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::ExitCode::from(code)
}
