//! `cowkit` — construct, verify, bound, decode, and simulate errorless
//! signature codes for over-loaded synchronous CDMA.
//!
//! Exit codes: 0 success (or an errorless verdict), 1 negative verdict,
//! 2 input error, 3 resource limit.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cowkit_core::capacity::{self, BoundKind};
use cowkit_core::construct::{self, CodeDescriptor, Structure};
use cowkit_core::decoder::{self, DecodeError};
use cowkit_core::matrix::{hadamard, Alphabet, CodeMatrix, IntMatrix};
use cowkit_core::sim::{self, DecoderKind, SimConfig};
use cowkit_core::verify::{self, VerifyError, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "cowkit",
    version,
    about = "Errorless signature codes for over-loaded CDMA"
)]
struct Cli {
    /// Worker threads (default: machine parallelism)
    #[arg(long, global = true, env = "COWKIT_THREADS")]
    threads: Option<usize>,
    /// Base seed for every randomized step
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructKind {
    Hadamard,
    Kron,
    Augment,
    Optical,
    Builtin,
    Cow2coo,
    Coo2cow,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyMethod {
    Auto,
    Naive,
    Fast,
    Structural,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a code and write its matrix + descriptor files
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        /// Built-in name (for `builtin`)
        name: Option<String>,
        /// Left Kronecker factor (H<k>, I<k>, builtin, or file)
        #[arg(long)]
        p: Option<String>,
        /// Input code (builtin name or matrix/descriptor file)
        #[arg(long)]
        c: Option<String>,
        /// Order / chip count (hadamard, optical)
        #[arg(long)]
        m: Option<usize>,
        /// Candidate draws for augmentation
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Output stem (writes <stem>.mat and <stem>.desc)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a code is errorless
    Verify {
        /// Matrix or descriptor file, or a builtin name
        path: String,
        #[arg(long, value_enum, default_value_t = VerifyMethod::Auto)]
        method: VerifyMethod,
        /// Candidate-evaluation cap for the fast check
        #[arg(long, default_value_t = verify::DEFAULT_WORK_LIMIT)]
        work_limit: u64,
        /// Column cap for the naive check
        #[arg(long, default_value_t = verify::DEFAULT_NAIVE_LIMIT)]
        naive_limit: usize,
    },
    /// Evaluate user-count and sum-capacity bounds
    Bounds {
        /// Chip count or range start:step:stop
        #[arg(long)]
        m: Option<String>,
        /// User count or range start:step:stop
        #[arg(long)]
        n: Option<String>,
        /// Comma-separated bound names (thm6, appxA, lemma2_n, lemma2_log,
        /// lemma3, thm7_lower, thm8_upper)
        #[arg(long)]
        bound: Option<String>,
        /// Emit a canned figure sweep: 1, 2a, 2b, 3a, 3b
        #[arg(long)]
        fig: Option<String>,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a received vector
    Decode {
        /// Code (builtin name or matrix/descriptor file)
        #[arg(long)]
        code: String,
        /// Whitespace-separated real samples
        #[arg(long = "in")]
        input: PathBuf,
        /// ml | block | tensor | auto
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Monte-Carlo bit-error-rate sweep over an AWGN channel
    Simulate {
        #[arg(long)]
        code: Option<String>,
        /// tensor | ml | hadamard
        #[arg(long)]
        decoder: Option<String>,
        /// Eb/N0 grid in dB: value or start:step:stop
        #[arg(long)]
        ebn0: Option<String>,
        #[arg(long)]
        max_trials: Option<u64>,
        #[arg(long)]
        min_errors: Option<u64>,
        /// Line-oriented `key value` config; flags override it
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify built-ins and spot-check the numeric kernels
    Selftest,
}

struct Failure {
    exit: u8,
    msg: String,
}

type CliResult<T> = Result<T, Failure>;

fn input_err(e: impl Display) -> Failure {
    Failure {
        exit: 2,
        msg: e.to_string(),
    }
}

fn classify_verify(e: VerifyError) -> Failure {
    let exit = match &e {
        VerifyError::WorkLimit { .. } | VerifyError::NaiveOverLimit { .. } => 3,
        _ => 2,
    };
    Failure {
        exit,
        msg: e.to_string(),
    }
}

fn classify_decode(e: DecodeError) -> Failure {
    let exit = match &e {
        DecodeError::TableCap { .. } | DecodeError::MlOverLimit { .. } => 3,
        _ => 2,
    };
    Failure {
        exit,
        msg: e.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // a second build attempt in one process is harmless; ignore it
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    eprintln!("cowkit {} seed {}", env!("CARGO_PKG_VERSION"), cli.seed);
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.exit)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.cmd {
        Cmd::Construct {
            kind,
            name,
            p,
            c,
            m,
            budget,
            out,
        } => cmd_construct(kind, name, p, c, m, budget, out, cli.seed),
        Cmd::Verify {
            path,
            method,
            work_limit,
            naive_limit,
        } => cmd_verify(&path, method, work_limit, naive_limit),
        Cmd::Bounds {
            m,
            n,
            bound,
            fig,
            out,
        } => cmd_bounds(m, n, bound, fig, out),
        Cmd::Decode {
            code,
            input,
            method,
        } => cmd_decode(&code, &input, &method),
        Cmd::Simulate {
            code,
            decoder,
            ebn0,
            max_trials,
            min_errors,
            config,
            out,
        } => cmd_simulate(
            code, decoder, ebn0, max_trials, min_errors, config, out, cli.seed,
        ),
        Cmd::Selftest => cmd_selftest(),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

/// Resolves a code token: builtin name, `H<k>` Hadamard, `I<k>` binary
/// identity, a `.desc` descriptor, or a matrix text file.
fn resolve_code(token: &str) -> CliResult<CodeDescriptor> {
    if construct::BUILTIN_NAMES
        .iter()
        .any(|n| n.eq_ignore_ascii_case(token))
    {
        return construct::builtin(token).map_err(input_err);
    }
    if let Some(desc) = synthetic_code(token)? {
        return Ok(desc);
    }
    let path = Path::new(token);
    if path.extension().is_some_and(|e| e == "desc") {
        return construct::load_descriptor(path).map_err(input_err);
    }
    if path.exists() {
        let matrix = construct::load_matrix(path).map_err(input_err)?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "code".into());
        return CodeDescriptor::new(stem, matrix, Structure::Plain).map_err(input_err);
    }
    Err(input_err(format!(
        "cannot resolve code `{token}`: not a builtin, H<k>, I<k>, or readable file"
    )))
}

/// `H<k>` and `I<k>` tokens.
fn synthetic_code(token: &str) -> CliResult<Option<CodeDescriptor>> {
    let (head, rest) = match token.split_at_checked(1) {
        Some(pair) => pair,
        None => return Ok(None),
    };
    let Ok(k) = rest.parse::<usize>() else {
        return Ok(None);
    };
    match head {
        "H" | "h" => {
            let h = hadamard(k).map_err(input_err)?;
            let desc = CodeDescriptor::new(
                format!("H{k}"),
                CodeMatrix::Sign(h),
                Structure::Partitioned {
                    basis: (0..k).collect(),
                },
            )
            .map_err(input_err)?;
            Ok(Some(desc))
        }
        "I" | "i" => {
            let m = CodeMatrix::try_from_int(IntMatrix::identity(k), Alphabet::ZeroOne)
                .map_err(input_err)?;
            let desc = CodeDescriptor::new(
                format!("I{k}"),
                m,
                Structure::Partitioned {
                    basis: (0..k).collect(),
                },
            )
            .map_err(input_err)?;
            Ok(Some(desc))
        }
        _ => Ok(None),
    }
}

fn parse_u32_grid(spec: &str) -> CliResult<Vec<u32>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![one
            .parse()
            .map_err(|_| input_err(format!("bad integer `{one}`")))?]),
        [start, step, stop] => {
            let (a, s, b): (u32, u32, u32) = (
                start.parse().map_err(|_| input_err("bad range start"))?,
                step.parse().map_err(|_| input_err("bad range step"))?,
                stop.parse().map_err(|_| input_err("bad range stop"))?,
            );
            if s == 0 {
                return Err(input_err("range step must be positive"));
            }
            Ok((a..=b).step_by(s as usize).collect())
        }
        _ => Err(input_err(format!(
            "range `{spec}` must be a value or start:step:stop"
        ))),
    }
}

fn parse_f64_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![one
            .parse()
            .map_err(|_| input_err(format!("bad number `{one}`")))?]),
        [start, step, stop] => {
            let (a, s, b): (f64, f64, f64) = (
                start.parse().map_err(|_| input_err("bad range start"))?,
                step.parse().map_err(|_| input_err("bad range step"))?,
                stop.parse().map_err(|_| input_err("bad range stop"))?,
            );
            if s <= 0.0 {
                return Err(input_err("range step must be positive"));
            }
            let mut out = Vec::new();
            let mut v = a;
            while v <= b + s * 1e-9 {
                out.push(v);
                v += s;
            }
            Ok(out)
        }
        _ => Err(input_err(format!(
            "range `{spec}` must be a value or start:step:stop"
        ))),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(input_err),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    kind: ConstructKind,
    name: Option<String>,
    p: Option<String>,
    c: Option<String>,
    m: Option<usize>,
    budget: u64,
    out: Option<PathBuf>,
    seed: u64,
) -> CliResult<u8> {
    let need = |opt: Option<String>, what: &str| {
        opt.ok_or_else(|| input_err(format!("construct {what} is required for this kind")))
    };
    let (desc, provenance) = match kind {
        ConstructKind::Builtin => {
            let name = need(name, "NAME")?;
            let d = construct::builtin(&name).map_err(input_err)?;
            let prov = format!("builtin {}", d.name);
            (d, prov)
        }
        ConstructKind::Hadamard => {
            let k = m.ok_or_else(|| input_err("construct hadamard needs --m"))?;
            let d = synthetic_code(&format!("H{k}"))?.expect("H token");
            (d, format!("sylvester hadamard order {k}"))
        }
        ConstructKind::Optical => {
            let m = m.ok_or_else(|| input_err("construct optical needs --m"))?;
            let d = construct::optical_geometric(m).map_err(input_err)?;
            let prov = format!("geometric optical, {} chips, {} users", d.rows(), d.cols());
            (d, prov)
        }
        ConstructKind::Kron => {
            let p_tok = need(p, "--p")?;
            let c_tok = need(c, "--c")?;
            let p_desc = resolve_code(&p_tok)?;
            let c_desc = resolve_code(&c_tok)?;
            let name = format!("{}x{}", p_desc.name, c_desc.name);
            let d = construct::kronecker_lift(name, p_desc.matrix.clone(), &c_desc)
                .map_err(input_err)?;
            let prov = format!("kronecker {} (x) {}", p_desc.name, c_desc.name);
            (d, prov)
        }
        ConstructKind::Augment => {
            let c_tok = need(c, "--c")?;
            let c_desc = resolve_code(&c_tok)?;
            let a = construct::augment_columns(&c_desc, budget, seed).map_err(input_err)?;
            let prov = format!(
                "doubled {} then added {} columns in {} draws (floor {}{})",
                c_desc.name,
                a.added,
                a.draws,
                construct::augment_floor(c_desc.rows()),
                if a.budget_exhausted {
                    ", budget exhausted"
                } else {
                    ""
                }
            );
            (a.descriptor, prov)
        }
        ConstructKind::Cow2coo => {
            let c_tok = need(c, "--c")?;
            let c_desc = resolve_code(&c_tok)?;
            let d = construct::cow_to_coo(&c_desc).map_err(input_err)?;
            (d, format!("optical image of {}", c_desc.name))
        }
        ConstructKind::Coo2cow => {
            let c_tok = need(c, "--c")?;
            let c_desc = resolve_code(&c_tok)?;
            let d = construct::coo_to_cow(&c_desc).map_err(input_err)?;
            (d, format!("wireless image of {}", c_desc.name))
        }
    };
    let stem_path = out.unwrap_or_else(|| PathBuf::from(desc.name.to_ascii_lowercase()));
    let dir = match stem_path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let stem = stem_path
        .file_name()
        .ok_or_else(|| input_err("--out needs a file stem"))?
        .to_string_lossy()
        .into_owned();
    let files = construct::save_descriptor(&desc, &dir, &stem).map_err(input_err)?;
    println!(
        "{} {}x{} {} ({provenance})",
        desc.name,
        desc.rows(),
        desc.cols(),
        desc.alphabet()
    );
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(
    path: &str,
    method: VerifyMethod,
    work_limit: u64,
    naive_limit: usize,
) -> CliResult<u8> {
    let desc = resolve_code(path)?;
    let opts = VerifyOptions {
        naive_limit,
        work_limit,
    };
    let verdict = match method {
        VerifyMethod::Auto => verify::verify_auto(&desc, &opts),
        VerifyMethod::Naive => verify::verify_naive_with(&desc.matrix, &opts),
        VerifyMethod::Fast => verify::verify_fast_with(&desc.matrix, &opts),
        VerifyMethod::Structural => verify::verify_structural_with(&desc, &opts),
    }
    .map_err(classify_verify)?;
    println!("{}", verify::verdict_line(&verdict, desc.alphabet()));
    Ok(if verdict.is_errorless { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

fn parse_bounds(spec: &str) -> CliResult<Vec<BoundKind>> {
    spec.split(',')
        .map(|tok| {
            BoundKind::from_token(tok.trim())
                .ok_or_else(|| input_err(format!("unknown bound `{tok}`")))
        })
        .collect()
}

fn cmd_bounds(
    m: Option<String>,
    n: Option<String>,
    bound: Option<String>,
    fig: Option<String>,
    out: Option<PathBuf>,
) -> CliResult<u8> {
    if let Some(fig) = fig {
        let reports = match fig.as_str() {
            "1" => capacity::sweep(
                &[2, 4, 8, 16, 32, 64],
                &[],
                &[BoundKind::Thm6, BoundKind::AppxA],
            ),
            "2a" => capacity::sweep(
                &[64],
                &(2..=300).collect::<Vec<_>>(),
                &[BoundKind::Thm7Lower, BoundKind::Thm8Upper],
            ),
            "2b" => capacity::sweep(
                &(2..=128).collect::<Vec<_>>(),
                &[220],
                &[BoundKind::Thm7Lower, BoundKind::Thm8Upper],
            ),
            "3a" => capacity::sweep(
                &[16, 32, 64],
                &(2..=300).collect::<Vec<_>>(),
                &[BoundKind::Thm7Lower, BoundKind::Lemma3],
            ),
            "3b" => capacity::sweep(
                &(2..=128).collect::<Vec<_>>(),
                &[64, 128, 220],
                &[BoundKind::Thm7Lower, BoundKind::Lemma3],
            ),
            other => return Err(input_err(format!("unknown figure `{other}`"))),
        };
        emit(out.as_ref(), &capacity::reports_to_csv(&reports))?;
        return Ok(0);
    }

    let bounds = parse_bounds(&bound.ok_or_else(|| input_err("bounds needs --bound or --fig"))?)?;
    let ms = parse_u32_grid(&m.ok_or_else(|| input_err("bounds needs --m"))?)?;
    let ns = match n {
        Some(spec) => parse_u32_grid(&spec)?,
        None => Vec::new(),
    };

    // single point: print the bare value
    if ms.len() == 1 && bounds.len() == 1 && ns.len() <= 1 {
        let kind = bounds[0];
        let m = ms[0];
        if kind.is_user_bound() {
            let r = capacity::evaluate_bound(m, 0, kind).map_err(input_err)?;
            let mut line = format!("{}", r.n);
            if let Some(aux) = r.aux {
                line.push_str(&format!(" # {aux}"));
            }
            println!("{line}");
            return Ok(0);
        }
        let n = *ns
            .first()
            .ok_or_else(|| input_err("this bound needs --n"))?;
        let r = capacity::evaluate_bound(m, n, kind).map_err(input_err)?;
        println!("{}", capacity::fmt_sig(r.value_bits, 12));
        return Ok(0);
    }

    if !bounds.iter().all(|b| b.is_user_bound()) && ns.is_empty() {
        return Err(input_err("capacity bounds need --n"));
    }
    let reports = capacity::sweep(&ms, &ns, &bounds);
    emit(out.as_ref(), &capacity::reports_to_csv(&reports))?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

fn read_vector(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(input_err)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            out.push(
                tok.parse::<f64>()
                    .map_err(|_| input_err(format!("bad sample `{tok}`")))?,
            );
        }
    }
    Ok(out)
}

fn cmd_decode(code: &str, input: &Path, method: &str) -> CliResult<u8> {
    let desc = resolve_code(code)?;
    let y = read_vector(input)?;
    let word = match (desc.alphabet(), method) {
        (Alphabet::ZeroOne, "auto") => {
            decoder::decode_optical(&desc, &y).map_err(classify_decode)?
        }
        (_, "auto") => decoder::Engine::build(&desc)
            .and_then(|e| e.decode(&y))
            .map_err(classify_decode)?,
        (_, "ml") if desc.alphabet() == Alphabet::Pm1 => {
            decoder::ml_exhaustive(&desc.matrix, &y).map_err(classify_decode)?
        }
        (_, "ml") => decoder::decode_optical(&desc, &y).map_err(classify_decode)?,
        (_, "block") => decoder::DecoderTables::build(&desc)
            .and_then(|t| decoder::decode_block(&t, &y))
            .map_err(classify_decode)?,
        (_, "tensor") => decoder::TensorDecoder::build(&desc)
            .and_then(|t| decoder::decode_tensor(&t, &y))
            .map_err(classify_decode)?,
        (_, other) => return Err(input_err(format!("unknown decode method `{other}`"))),
    };
    let mut line = String::from("word");
    for &b in &word.bits {
        match desc.alphabet() {
            Alphabet::Pm1 => line.push_str(if b == 1 { " +1" } else { " -1" }),
            Alphabet::ZeroOne => line.push_str(if b == 1 { " 1" } else { " 0" }),
        }
    }
    println!("{line}");
    println!("score {}", capacity::fmt_sig(word.score, 12));
    Ok(0)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[derive(Default)]
struct SimArgs {
    code: Option<String>,
    decoder: Option<String>,
    ebn0: Option<String>,
    max_trials: Option<u64>,
    min_errors: Option<u64>,
    seed: Option<u64>,
}

fn parse_sim_config(path: &Path) -> CliResult<SimArgs> {
    let text = fs::read_to_string(path).map_err(input_err)?;
    let mut args = SimArgs::default();
    for (lno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| input_err(format!("config line {} needs `key value`", lno + 1)))?;
        let value = value.trim().to_string();
        match key {
            "code" => args.code = Some(value),
            "decoder" => args.decoder = Some(value),
            "ebn0" => args.ebn0 = Some(value),
            "max-trials" | "max_trials" => {
                args.max_trials = Some(value.parse().map_err(input_err)?)
            }
            "min-errors" | "min_errors" => {
                args.min_errors = Some(value.parse().map_err(input_err)?)
            }
            "seed" => args.seed = Some(value.parse().map_err(input_err)?),
            other => return Err(input_err(format!("unknown config key `{other}`"))),
        }
    }
    Ok(args)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    code: Option<String>,
    decoder: Option<String>,
    ebn0: Option<String>,
    max_trials: Option<u64>,
    min_errors: Option<u64>,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: u64,
) -> CliResult<u8> {
    let file_args = match config {
        Some(path) => parse_sim_config(&path)?,
        None => SimArgs::default(),
    };
    let code_tok = code
        .or(file_args.code)
        .ok_or_else(|| input_err("simulate needs --code (or a config with one)"))?;
    let decoder_tok = decoder
        .or(file_args.decoder)
        .ok_or_else(|| input_err("simulate needs --decoder"))?;
    let ebn0_spec = ebn0
        .or(file_args.ebn0)
        .ok_or_else(|| input_err("simulate needs --ebn0"))?;

    let desc = resolve_code(&code_tok)?;
    let kind = DecoderKind::from_token(&decoder_tok)
        .ok_or_else(|| input_err(format!("unknown decoder `{decoder_tok}`")))?;
    let grid = parse_f64_grid(&ebn0_spec)?;
    let mut cfg = SimConfig::new(desc, kind, grid);
    if let Some(v) = max_trials.or(file_args.max_trials) {
        cfg.max_trials = v;
    }
    if let Some(v) = min_errors.or(file_args.min_errors) {
        cfg.min_bit_errors = v;
    }
    cfg.base_seed = file_args.seed.unwrap_or(seed);

    let records = sim::run_sweep(&cfg).map_err(|e| match e {
        sim::SimError::Decode(d) => classify_decode(d),
        other => input_err(other),
    })?;
    emit(out.as_ref(), &sim::records_to_csv(&records))?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

fn cmd_selftest() -> CliResult<u8> {
    let check = |name: &str, ok: bool| -> CliResult<()> {
        if ok {
            println!("ok {name}");
            Ok(())
        } else {
            Err(Failure {
                exit: 1,
                msg: format!("selftest failed: {name}"),
            })
        }
    };

    let c4 = construct::builtin("C4x5").map_err(input_err)?;
    let c8 = construct::builtin("C8x13").map_err(input_err)?;
    let d64 = construct::builtin("D64x104").map_err(input_err)?;

    let v4 = verify::verify_fast(&c4.matrix).map_err(classify_verify)?;
    check("builtin 4x5 errorless (fast)", v4.is_errorless)?;
    let v8 = verify::verify_fast(&c8.matrix).map_err(classify_verify)?;
    check(
        "builtin 8x13 errorless at 121 candidates",
        v8.is_errorless && v8.work == 121,
    )?;
    let vs = verify::verify_structural(&d64).map_err(classify_verify)?;
    check("builtin 64x104 errorless (structural)", vs.is_errorless)?;

    let geo = construct::optical_geometric(8).map_err(input_err)?;
    let naive = verify::verify_naive(&geo.matrix).map_err(classify_verify)?;
    let fast = verify::verify_fast(&geo.matrix).map_err(classify_verify)?;
    check(
        "geometric optical 8x10: naive and fast agree errorless",
        naive.is_errorless && fast.is_errorless,
    )?;

    check(
        "capacity lower bound (4,5) near 4.21 bits",
        (capacity::capacity_lower_thm7(4, 5) - 4.21).abs() < 0.01,
    )?;
    check(
        "capacity lower bound (8,13) near 12.164 bits",
        (capacity::capacity_lower_thm7(8, 13) - 12.164).abs() < 0.005,
    )?;
    let t8 = capacity::capacity_upper_thm8(8, 13);
    check(
        "lambda equation residual flips sign around the root",
        capacity::thm8_residual(8, 13, t8.lambda - 1e-6) > 0.0
            && capacity::thm8_residual(8, 13, t8.lambda + 1e-6) < 0.0,
    )?;

    // noiseless decode round trips
    let tables = decoder::DecoderTables::build(&c4).map_err(classify_decode)?;
    let mut exact = true;
    for idx in 0..32usize {
        let bits: Vec<i8> = (0..5)
            .map(|j| if idx >> (4 - j) & 1 == 0 { 1 } else { -1 })
            .collect();
        let y: Vec<f64> = c4
            .matrix
            .as_int()
            .mul_ivec(&bits.iter().map(|&b| b as i64).collect::<Vec<_>>())
            .iter()
            .map(|&v| v as f64)
            .collect();
        let out = decoder::decode_block(&tables, &y).map_err(classify_decode)?;
        exact &= out.bits == bits;
    }
    check("4x5 block decoder exact on all noiseless words", exact)?;

    let mut cfg = SimConfig::new(d64, DecoderKind::Tensor, vec![500.0]);
    cfg.max_trials = 200;
    cfg.min_bit_errors = 1;
    let rec = sim::run_point(&cfg, 0, 500.0).map_err(input_err)?;
    check(
        "64x104 tensor decoder errorless without noise",
        rec.bit_errors == 0,
    )?;

    check(
        "analytic BPSK curve at 0 dB",
        (sim::bpsk_theoretical(0.0) - 0.0786496).abs() < 1e-6,
    )?;
    println!("selftest passed");
    Ok(0)
}
