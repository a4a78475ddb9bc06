//! Batch front door over the framekit library: load mask systems from
//! JSON, run checks, extensions, exact verification, rendering, and the
//! named demo systems, and emit machine-readable reports.
//!
//! Exit codes are a stable contract:
//!   0  success / expected outcome
//!   1  a check or verification failed
//!   2  necessary conditions fail (extend)
//!   3  condition (II) fails (extend, single-pair mode)
//!   4  internal mismatch during extension
//!   5  cascade did not converge (render)
//!   64 usage error (bad flags, unknown demo)
//!   65 input data could not be parsed
//!   66 input file could not be read

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use framekit_core::{
    cascade, demo_names, demo_registry, extend_one_pair, extend_two_pairs, frame_reconstruct,
    l2_relative_error, mep_residual_float, mep_verify, necessary_conditions, realize_real_pair,
    run_demo, wavelet_from_mask, ExtensionError, ExtensionOutcome, FrameSpec, MaskSystem,
    RenderError, SampledFunction, Verdict, DEFAULT_MAX_ITER,
};
use serde::Serialize;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_NECESSARY_FAIL: u8 = 2;
const EXIT_CONDITION_II_FAIL: u8 = 3;
const EXIT_INTERNAL_MISMATCH: u8 = 4;
const EXIT_NON_CONVERGENCE: u8 = 5;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_IO: u8 = 66;

#[derive(Parser)]
#[command(
    name = "framekit",
    about = "Exact construction and verification of dual wavelet frames from polynomial masks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    One,
    Two,
}

#[derive(Subcommand)]
enum Command {
    /// Run the setup and necessary-condition checks on a mask system
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Extend a one-generator system by one or two dual wavelet pairs
    Extend {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Verify the exact matrix identity and Bessel conditions
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Render scaling functions and wavelets to CSV and run a truncated
    /// frame-reconstruction experiment
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        level: u32,
        #[arg(long, default_value_t = -6, allow_negative_numbers = true)]
        jmin: i32,
        #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
        jmax: i32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Run a named example system ("list" to enumerate, "all" for every one)
    Demo {
        name: String,
        /// Order parameter for the centered-spline family
        #[arg(long)]
        l: Option<u32>,
    },
}

#[derive(Serialize)]
struct CommandReport<I: Serialize, O: Serialize> {
    command: &'static str,
    inputs: I,
    outcome: O,
    exit_code: u8,
}

fn emit<I: Serialize, O: Serialize>(command: &'static str, inputs: I, outcome: O, code: u8) -> u8 {
    let report = CommandReport {
        command,
        inputs,
        outcome,
        exit_code: code,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    code
}

fn fail(msg: &str, code: u8) -> u8 {
    eprintln!("framekit: {msg}");
    code
}

fn load_system(path: &Path) -> Result<MaskSystem, u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(&format!("cannot read {}: {e}", path.display()), EXIT_IO))?;
    let sys: MaskSystem = serde_json::from_str(&text)
        .map_err(|e| fail(&format!("cannot parse {}: {e}", path.display()), EXIT_PARSE))?;
    if sys.gens.is_empty() || sys.gens.len() != sys.tgens.len() {
        return Err(fail(
            "system needs matching, nonempty generator lists",
            EXIT_PARSE,
        ));
    }
    Ok(sys)
}

fn cmd_check(input: &Path) -> u8 {
    let sys = match load_system(input) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match necessary_conditions(&sys.m0, &sys.mt0, &sys.gens[0], &sys.tgens[0]) {
        Ok(report) => {
            let code = if report.all_pass() { 0 } else { EXIT_CHECK_FAILED };
            emit("check", input.display().to_string(), report, code)
        }
        Err(e) => {
            // setup violation is itself a failed check, reported as such
            emit(
                "check",
                input.display().to_string(),
                serde_json::json!({ "setup_ok": false, "error": e.to_string() }),
                EXIT_CHECK_FAILED,
            )
        }
    }
}

fn extension_exit(e: &ExtensionError) -> u8 {
    match e {
        ExtensionError::NecessaryConditionsFail(_) => EXIT_NECESSARY_FAIL,
        ExtensionError::ConditionIIFails => EXIT_CONDITION_II_FAIL,
        ExtensionError::InternalShiftMismatch { .. } => EXIT_INTERNAL_MISMATCH,
        ExtensionError::Mask(_) => EXIT_NECESSARY_FAIL,
        ExtensionError::UnknownDemo(_) => EXIT_USAGE,
    }
}

fn cmd_extend(input: &Path, mode: Mode) -> u8 {
    let sys = match load_system(input) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let (m0, mt0, m1, mt1) = (&sys.m0, &sys.mt0, &sys.gens[0], &sys.tgens[0]);
    let result: Result<ExtensionOutcome, ExtensionError> = match mode {
        Mode::One => extend_one_pair(m0, mt0, m1, mt1),
        Mode::Two => extend_two_pairs(m0, mt0, m1, mt1),
    };
    let inputs = serde_json::json!({
        "input": input.display().to_string(),
        "mode": match mode { Mode::One => "one", Mode::Two => "two" },
    });
    match result {
        Ok(outcome) => {
            let code = if outcome.report.verdict == Verdict::DualFrames {
                0
            } else {
                EXIT_CHECK_FAILED
            };
            emit("extend", inputs, outcome, code)
        }
        Err(e) => {
            let code = extension_exit(&e);
            emit(
                "extend",
                inputs,
                serde_json::json!({ "error": e.to_string() }),
                code,
            )
        }
    }
}

fn cmd_verify(input: &Path) -> u8 {
    let sys = match load_system(input) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let report = mep_verify(&sys);
    let code = if report.verdict == Verdict::DualFrames {
        0
    } else {
        EXIT_CHECK_FAILED
    };
    emit("verify", input.display().to_string(), report, code)
}

fn write_csv(dir: &Path, name: &str, f: &SampledFunction, level: u32) -> Result<(), u8> {
    // functions are built on a finer internal grid; export at the
    // requested level by exact dyadic subsampling
    let stride = 1i64 << (f.level - level);
    let h = 0.5f64.powi(level as i32);
    let mut text = String::from("x,value\n");
    let lo = f.start.div_euclid(stride);
    let hi = (f.start + f.samples.len() as i64 - 1).div_euclid(stride);
    for i in lo..=hi {
        text.push_str(&format!("{},{}\n", i as f64 * h, f.at_index(i * stride)));
    }
    let path = dir.join(format!("{name}.csv"));
    std::fs::write(&path, text)
        .map_err(|e| fail(&format!("cannot write {}: {e}", path.display()), EXIT_IO))
}

#[derive(Serialize)]
struct ReconReport {
    j_min: i32,
    j_max: i32,
    level: u32,
    l2_rel_error: f64,
    residual_row1: f64,
    residual_row2: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    input: &Path,
    level: u32,
    jmin: i32,
    jmax: i32,
    out: &Path,
    tol: f64,
    samples: usize,
) -> u8 {
    if jmin > jmax || level == 0 || samples < 2 {
        return fail("render needs jmin <= jmax, level >= 1, samples >= 2", EXIT_USAGE);
    }
    let sys = match load_system(input) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let verify = mep_verify(&sys);
    if verify.verdict != Verdict::DualFrames {
        return fail("system is not an exactly verified dual pair", EXIT_CHECK_FAILED);
    }
    if jmax > level as i32 {
        return fail("jmax must not exceed the grid level", EXIT_USAGE);
    }
    if let Err(e) = std::fs::create_dir_all(out) {
        return fail(&format!("cannot create {}: {e}", out.display()), EXIT_IO);
    }

    // common internal grid fine enough to represent every dilation
    let internal = level + jmin.min(0).unsigned_abs();
    let mut scaling = Vec::new();
    for (name, mask) in [("phi", &sys.m0), ("phit", &sys.mt0)] {
        let c = match cascade(mask, internal, tol, DEFAULT_MAX_ITER) {
            Ok(c) => c,
            Err(e) => return fail(&format!("cascade for {name}: {e}"), EXIT_CHECK_FAILED),
        };
        if !c.converged {
            return fail(
                &format!(
                    "cascade for {name} did not converge (last change {:.3e})",
                    c.last_change
                ),
                EXIT_NON_CONVERGENCE,
            );
        }
        scaling.push(c.function);
    }

    let mut generators = Vec::new();
    for (i, (g, tg)) in sys.gens.iter().zip(sys.tgens.iter()).enumerate() {
        let (g, tg) = if g.poly.has_real_coeffs() && tg.poly.has_real_coeffs() {
            (g.clone(), tg.clone())
        } else {
            match realize_real_pair(g, tg) {
                Some(pair) => pair,
                None => {
                    return fail(
                        &format!("generator pair {} has no real realization", i + 1),
                        EXIT_CHECK_FAILED,
                    )
                }
            }
        };
        let psi = match wavelet_from_mask(&g, &scaling[0]) {
            Ok(f) => f,
            Err(e) => return fail(&format!("wavelet {}: {e}", i + 1), EXIT_CHECK_FAILED),
        };
        let psit = match wavelet_from_mask(&tg, &scaling[1]) {
            Ok(f) => f,
            Err(e) => return fail(&format!("dual wavelet {}: {e}", i + 1), EXIT_CHECK_FAILED),
        };
        generators.push((psi, psit));
    }

    if let Err(code) = write_csv(out, "phi", &scaling[0], level) {
        return code;
    }
    if let Err(code) = write_csv(out, "phit", &scaling[1], level) {
        return code;
    }
    for (i, (psi, psit)) in generators.iter().enumerate() {
        if let Err(code) = write_csv(out, &format!("psi{}", i + 1), psi, level) {
            return code;
        }
        if let Err(code) = write_csv(out, &format!("psit{}", i + 1), psit, level) {
            return code;
        }
    }

    let f = generators[0].0.clone();
    let spec = FrameSpec {
        j_min: jmin,
        j_max: jmax,
        generators,
    };
    let rec = match frame_reconstruct(&f, &spec) {
        Ok(r) => r,
        Err(RenderError::LevelTooCoarse { j, level }) => {
            return fail(&format!("dilation {j} too fine for level {level}"), EXIT_USAGE)
        }
        Err(e) => return fail(&format!("reconstruction: {e}"), EXIT_CHECK_FAILED),
    };
    let (r1, r2) = mep_residual_float(&sys, samples);
    let report = ReconReport {
        j_min: jmin,
        j_max: jmax,
        level,
        l2_rel_error: l2_relative_error(&rec, &f),
        residual_row1: r1,
        residual_row2: r2,
    };
    let path = out.join("reconstruction.json");
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Err(e) = std::fs::write(&path, &text) {
        return fail(&format!("cannot write {}: {e}", path.display()), EXIT_IO);
    }
    emit("render", input.display().to_string(), report, 0)
}

fn cmd_demo(name: &str, l: Option<u32>) -> u8 {
    if name == "list" {
        for n in demo_names() {
            println!("{n}");
        }
        return 0;
    }
    let resolved = |n: &str| -> String {
        match (n, l) {
            ("b2l-two-pairs", Some(l)) if l > 1 => format!("b2l-two-pairs-{l}"),
            _ => n.to_string(),
        }
    };
    let names: Vec<String> = if name == "all" {
        demo_names().iter().map(|n| resolved(n)).collect()
    } else {
        let n = resolved(name);
        if demo_registry(&n).is_err() {
            return fail(&format!("unknown demo {name:?}"), EXIT_USAGE);
        }
        vec![n]
    };
    let mut all_ok = true;
    let mut outcomes = Vec::new();
    for n in &names {
        match run_demo(n) {
            Ok(out) => {
                all_ok &= out.as_expected;
                outcomes.push(out);
            }
            Err(e) => return fail(&format!("demo {n}: {e}"), EXIT_USAGE),
        }
    }
    let code = if all_ok { 0 } else { EXIT_CHECK_FAILED };
    emit("demo", name.to_string(), outcomes, code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { input } => cmd_check(&input),
        Command::Extend { input, mode } => cmd_extend(&input, mode),
        Command::Verify { input } => cmd_verify(&input),
        Command::Render {
            input,
            level,
            jmin,
            jmax,
            out,
            tol,
            samples,
        } => cmd_render(&input, level, jmin, jmax, &out, tol, samples),
        Command::Demo { name, l } => cmd_demo(&name, l),
    };
    ExitCode::from(code)
}
