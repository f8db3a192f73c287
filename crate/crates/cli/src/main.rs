//! Command-line front end: interpret 2-tag and cyclic tag programs,
//! compile cyclic programs to 2-tag systems, verify the compilation by
//! lockstep execution, and profile step counts.
//!
//! Exit codes: 0 on success (and on Equivalent verdicts), 1 on divergence
//! or invariant failure, 2 on usage or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use tagforge_core::compile::{
    compile, gen_parity_tester, parity_input, parity_verdict, ParityVerdict,
};
use tagforge_core::cyclic::{crun, format_bits, parse_bits, CyclicLimits};
use tagforge_core::lockstep::{lockstep_verify, LockstepOptions};
use tagforge_core::profile::{bench, points_csv, summarize, Family};
use tagforge_core::tag::{run, RunLimits, TraceMode};
use tagforge_core::text::{parse_2tag, parse_ctag, render_2tag};

#[derive(Parser)]
#[command(
    name = "tagforge",
    version,
    about = "2-tag and cyclic tag system toolchain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input dataword, e.g. 011.
    #[arg(long)]
    input: Option<String>,
    /// Read the input dataword from a file instead.
    #[arg(long, conflicts_with = "input")]
    input_file: Option<PathBuf>,
}

impl InputArgs {
    fn resolve(&self) -> Result<String> {
        match (&self.input, &self.input_file) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(path)) => Ok(fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?
                .trim()
                .to_string()),
            (None, None) => Err(anyhow!(
                "an input dataword is required (--input or --input-file)"
            )),
        }
    }

    fn bits(&self) -> Result<Vec<bool>> {
        let text = self.resolve()?;
        parse_bits(&text).map_err(|c| anyhow!("input contains non-binary symbol {c:?}"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a 2-tag system from a .2tag file.
    #[command(name = "run-2tag")]
    Run2tag {
        program: PathBuf,
        /// Input word as whitespace-separated symbol tokens.
        #[arg(long)]
        input: String,
        /// Maximum number of steps.
        #[arg(long, default_value_t = 1 << 20)]
        steps: u64,
        /// Print a per-step trace (step, read symbol, appended length).
        #[arg(long)]
        trace: bool,
        /// Disable cycle detection.
        #[arg(long)]
        no_cycle_detection: bool,
    },
    /// Run a cyclic tag system from a .ctag file.
    RunCyclic {
        program: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1 << 20)]
        steps: u64,
        /// Print every configuration.
        #[arg(long)]
        trace: bool,
    },
    /// Compile a .ctag program into an equivalent .2tag system.
    Compile {
        program: PathBuf,
        /// Output .2tag path; a .meta.json sidecar is written next to it.
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Verify a compiled system against the reference interpreter.
    Verify {
        #[arg(long)]
        program: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        /// Number of simulated cyclic steps.
        #[arg(long, default_value_t = 100)]
        steps: u64,
        /// Also write the checkpoint dump to this path.
        #[arg(long)]
        dump_checkpoints: Option<PathBuf>,
    },
    /// Profile steps-between-checkpoints over a benchmark input family.
    Bench {
        /// Input family: a (reference program, random inputs),
        /// b (growth-heavy), or c (shrink-heavy).
        #[arg(long, default_value = "a")]
        family: String,
        /// Comma-separated input lengths.
        #[arg(long, default_value = "8,16,32,64,128")]
        lengths: String,
        /// Simulated cyclic steps per input.
        #[arg(long, default_value_t = 32)]
        steps: u64,
        #[arg(long, default_value_t = 0xC0DE)]
        seed: u64,
        /// Write the per-checkpoint CSV here.
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Tabulate the six-rule parity tester's exact step counts.
    ParityDemo {
        /// Largest encoded word length to test.
        #[arg(long, default_value_t = 64)]
        len: usize,
    },
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run2tag {
            program,
            input,
            steps,
            trace,
            no_cycle_detection,
        } => {
            let ts = parse_2tag(&read_file(&program)?)?;
            let word: Vec<String> = input.split_whitespace().map(str::to_string).collect();
            let limits = RunLimits {
                max_steps: steps,
                detect_cycles: !no_cycle_detection,
                ..Default::default()
            };
            let mode = if trace {
                TraceMode::Summary
            } else {
                TraceMode::Off
            };
            let res = run(&ts, &word, &limits, mode);
            for t in &res.trace {
                println!("step {} read {} appended {}", t.step, t.read, t.appended);
            }
            println!("steps: {}", res.steps);
            println!("halt: {}", res.halt);
            println!("final: {}", res.final_word.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Command::RunCyclic {
            program,
            input,
            steps,
            trace,
        } => {
            let ts = parse_ctag(&read_file(&program)?)?;
            if let Some(v) = ts.validate().first() {
                return Err(anyhow!("invalid program: {v}"));
            }
            let bits = input.bits()?;
            let limits = CyclicLimits {
                max_steps: steps,
                ..Default::default()
            };
            let res = crun(&ts, &bits, &limits, trace);
            for cfg in &res.trace {
                println!("{cfg}");
            }
            println!("steps: {}", res.steps);
            println!("halt: {}", res.halt);
            println!(
                "final: [{}] {}",
                res.final_config.marker,
                format_bits(&res.final_config.dataword)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Compile { program, output } => {
            let ts = parse_ctag(&read_file(&program)?)?;
            let compiled = compile(&ts)?;
            fs::write(&output, render_2tag(compiled.tag()))
                .with_context(|| format!("writing {}", output.display()))?;
            let meta_path = output.with_extension("meta.json");
            fs::write(
                &meta_path,
                serde_json::to_string_pretty(&compiled.metadata())?,
            )
            .with_context(|| format!("writing {}", meta_path.display()))?;
            println!(
                "compiled p={} q={} alphabet={} rules={} -> {} (+ {})",
                compiled.p(),
                compiled.q(),
                compiled.tag().alphabet().len(),
                compiled.tag().rules().len(),
                output.display(),
                meta_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            program,
            input,
            steps,
            dump_checkpoints,
        } => {
            let ts = parse_ctag(&read_file(&program)?)?;
            let bits = input.bits()?;
            let opts = LockstepOptions {
                max_cyclic_steps: steps,
                ..Default::default()
            };
            let report = lockstep_verify(&ts, &bits, &opts)?;
            let mut dump = String::new();
            for rec in &report.records {
                let line = serde_json::to_string(rec)?;
                println!("{line}");
                dump.push_str(&line);
                dump.push('\n');
            }
            if let Some(path) = dump_checkpoints {
                fs::write(&path, dump).with_context(|| format!("writing {}", path.display()))?;
            }
            println!("{}", serde_json::to_string(&report.verdict)?);
            if report.verdict.is_equivalent() && report.invariants_hold {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Bench {
            family,
            lengths,
            steps,
            seed,
            metrics,
        } => {
            let family = Family::parse(&family)
                .ok_or_else(|| anyhow!("unknown family {family:?} (expected a, b, or c)"))?;
            let lengths: Vec<usize> = lengths
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| anyhow!("bad length {s:?}")))
                .collect::<Result<_>>()?;
            let program = family.program();
            let inputs = family.inputs(&lengths, seed);
            match bench(&program, &inputs, steps) {
                Ok(profile) => {
                    if let Some(path) = metrics {
                        fs::write(&path, points_csv(&profile))
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    println!("{}", serde_json::to_string_pretty(&summarize(&profile))?);
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("bench failed verification: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::ParityDemo { len } => {
            if len < 2 {
                return Err(anyhow!("--len must be at least 2"));
            }
            let ts = gen_parity_tester();
            println!("{:>4} {:>6} verdict", "|w|", "steps");
            for n in 2..=len {
                let bits: Vec<bool> = (0..n - 1).map(|i| i % 2 == 0).collect();
                let input = parity_input(&bits);
                let res = run(&ts, &input, &RunLimits::default(), TraceMode::Off);
                let verdict = match parity_verdict(&res.final_word) {
                    Some(ParityVerdict::Odd) => "odd",
                    Some(ParityVerdict::Even) => "even",
                    None => return Err(anyhow!("malformed verdict at |w| = {n}")),
                };
                println!("{n:>4} {:>6} {verdict}", res.steps);
                if res.steps != (n / 2 + 1) as u64 {
                    eprintln!("step count deviates from ⌊|w|/2⌋+1 at |w| = {n}");
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
