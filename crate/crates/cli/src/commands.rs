use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use lexbound::chordcheck::{summarize, sweep_alphas};
use lexbound::format::sig17;
use lexbound::infomeasure::mutual_info_naive;
use lexbound::table::alpha_grid;
use lexbound::talpha::{curve_csv, curve_values, TALPHA_MAX_DEPTH};
use lexbound::verify::{
    default_alpha_grid, triple_alpha_grid, unix_timestamp, verify_conj1, verify_conj2,
    verify_harper, verify_sum_inequality, verify_triple_counterexample, EXHAUSTIVE_MAX_ARITY,
};
use lexbound::{
    enumerate_sn, mutual_info, sum_single_mi, test_inequality, ChannelParam,
    ChordCertificate, Outcome, TruthTable, VerificationReport,
};

use crate::config::{Command, Driver, Format, Mode, RunConfig};
use crate::exit;

const DEFAULT_ALPHA: f64 = 0.1;
const DEFAULT_SWEEP_STEP: f64 = 0.001;
const DEFAULT_FIGURE_DEPTH: usize = 10;
const DEFAULT_VERIFY_ARITY: usize = 4;
const FIGURE_SLACK: f64 = 1e-12;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(lexbound::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Core(lexbound::Error::Io(_)) | CliError::Io(_) => exit::FAIL,
            CliError::Core(_) => exit::USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<lexbound::Error> for CliError {
    fn from(e: lexbound::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(command: &Command, cfg: &RunConfig) -> CliResult<u8> {
    match command {
        Command::Mi => cmd_mi(cfg),
        Command::Enumerate => cmd_enumerate(cfg),
        Command::Verify { driver } => cmd_verify(*driver, cfg),
        Command::Chords => cmd_chords(cfg),
        Command::Figure => cmd_figure(cfg),
    }
}

fn single_alpha(cfg: &RunConfig) -> CliResult<ChannelParam> {
    Ok(ChannelParam::new(cfg.alpha.unwrap_or(DEFAULT_ALPHA))?)
}

fn has_range(cfg: &RunConfig) -> bool {
    cfg.alpha_start.is_some() || cfg.alpha_end.is_some() || cfg.alpha_step.is_some()
}

/// `--alpha`, or the range flags, or `fallback` when neither is given.
fn alpha_list(cfg: &RunConfig, fallback: Vec<ChannelParam>) -> CliResult<Vec<ChannelParam>> {
    if cfg.alpha.is_some() && has_range(cfg) {
        return Err(CliError::Usage(
            "--alpha cannot be combined with --alpha-start/--alpha-end/--alpha-step".into(),
        ));
    }
    if let Some(a) = cfg.alpha {
        return Ok(vec![ChannelParam::new(a)?]);
    }
    if !has_range(cfg) {
        return Ok(fallback);
    }
    let (Some(start), Some(end)) = (cfg.alpha_start, cfg.alpha_end) else {
        return Err(CliError::Usage("a range needs both --alpha-start and --alpha-end".into()));
    };
    let grid = alpha_grid(start, end, cfg.alpha_step.unwrap_or(DEFAULT_SWEEP_STEP))?;
    if grid.is_empty() {
        return Err(CliError::Usage(format!("empty alpha range {start}..{end}")));
    }
    Ok(grid)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn alpha_tag(alpha: f64) -> String {
    format!("{alpha}").replace('.', "p")
}

fn cmd_mi(cfg: &RunConfig) -> CliResult<u8> {
    let hex = cfg
        .table
        .as_deref()
        .ok_or_else(|| CliError::Usage("mi needs --table <hex>, e.g. --table n=3:0f".into()))?;
    let b: TruthTable = hex.parse()?;
    if let Some(n) = cfg.n {
        if n != b.n() {
            return Err(CliError::Usage(format!("--n {n} disagrees with table arity {}", b.n())));
        }
    }
    let ch = single_alpha(cfg)?;
    let mi = if cfg.naive {
        mutual_info_naive(&b, ch)?
    } else {
        mutual_info(&b, ch)?
    };
    let ce = b.zero_probability();
    let h_cond = lexbound::binary_entropy(ce)? - mi;
    let sum = sum_single_mi(&b, ch)?;
    match cfg.format.unwrap_or(Format::Text) {
        Format::Json => {
            let v = serde_json::json!({
                "table": b.to_hex(),
                "alpha": ch.alpha(),
                "mutual_information": mi,
                "conditional_entropy": h_cond,
                "sum_single_mi": sum,
                "capacity": ch.capacity(),
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Csv => {
            println!("table,alpha,mutual_information,conditional_entropy,sum_single_mi");
            println!("{},{},{},{},{}", b.to_hex(), ch.alpha(), sig17(mi), sig17(h_cond), sig17(sum));
        }
        Format::Text => {
            println!("table: {}", b.to_hex());
            println!("alpha: {}", ch.alpha());
            println!("I(b;Y^n): {mi:.12}");
            println!("H(b|Y^n): {h_cond:.12}");
            println!("sum_i I(b;Y_i): {sum:.12}");
        }
    }
    Ok(exit::SUCCESS)
}

fn cmd_enumerate(cfg: &RunConfig) -> CliResult<u8> {
    let n = cfg
        .n
        .ok_or_else(|| CliError::Usage("enumerate needs --n".into()))?;
    let tables = enumerate_sn(n)?;
    let dump = lexbound::compression::sn_dump(n, &tables);
    match &cfg.output {
        Some(dir) => {
            let path = dir.join(format!("S_n{n}.txt"));
            write_file(&path, &dump)?;
            println!("n={n} count={} file={}", tables.len(), path.display());
        }
        None => {
            print!("{dump}");
            println!("count={}", tables.len());
        }
    }
    Ok(exit::SUCCESS)
}

fn outcome_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Pass => exit::SUCCESS,
        Outcome::Fail => exit::FAIL,
        Outcome::Partial => exit::INCONCLUSIVE,
    }
}

fn cmd_verify(driver: Driver, cfg: &RunConfig) -> CliResult<u8> {
    let n = cfg.n.unwrap_or(DEFAULT_VERIFY_ARITY);
    let tol = cfg.tolerance;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage(format!("--tolerance must be a nonnegative number, got {tol}")));
    }
    let report: VerificationReport = match driver {
        Driver::Conj1 => verify_conj1(n, &alpha_list(cfg, default_alpha_grid())?, tol)?,
        Driver::Conj2 => verify_conj2(n, &alpha_list(cfg, default_alpha_grid())?, tol)?,
        Driver::Sum => {
            let mode = cfg.mode.unwrap_or(if n <= EXHAUSTIVE_MAX_ARITY {
                Mode::Exhaustive
            } else {
                Mode::Compressed
            });
            let space = match mode {
                Mode::Exhaustive => lexbound::verify::SearchSpace::Exhaustive,
                Mode::Compressed => lexbound::verify::SearchSpace::Compressed,
            };
            verify_sum_inequality(n, &alpha_list(cfg, default_alpha_grid())?, tol, space)?
        }
        Driver::Harper => verify_harper(n)?,
        Driver::TripleCe => verify_triple_counterexample(&alpha_list(cfg, triple_alpha_grid())?)?,
    };
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("reports"));
    let (json, text) = report.write_to_dir(&dir, unix_timestamp())?;
    match cfg.format.unwrap_or(Format::Text) {
        Format::Json => println!("{}", report.to_json()),
        _ => print!("{}", report.to_text()),
    }
    eprintln!("wrote {} and {}", json.display(), text.display());
    Ok(outcome_code(report.outcome))
}

fn certificate_code(certs: &[ChordCertificate]) -> u8 {
    if certs.iter().all(ChordCertificate::is_verified) {
        exit::SUCCESS
    } else {
        exit::INCONCLUSIVE
    }
}

fn cmd_chords(cfg: &RunConfig) -> CliResult<u8> {
    if has_range(cfg) {
        return cmd_chord_sweep(cfg);
    }
    let ch = single_alpha(cfg)?;
    let cert = test_inequality(ch, cfg.depth_cap, cfg.epsilon)?;
    if let Some(dir) = &cfg.output {
        let tag = alpha_tag(ch.alpha());
        write_file(&dir.join(format!("certificate_alpha{tag}.json")), &cert.to_json())?;
        write_file(&dir.join(format!("chords_alpha{tag}.csv")), &cert.chords_csv())?;
    }
    match cfg.format.unwrap_or(Format::Text) {
        Format::Json => println!("{}", cert.to_json()),
        Format::Csv => print!("{}", cert.chords_csv()),
        Format::Text => {
            println!(
                "alpha={} status={:?} chords={} max_depth={}",
                cert.alpha,
                cert.status,
                cert.chords.len(),
                cert.max_depth_reached
            );
            for c in &cert.chords {
                println!(
                    "[{}, {}] nu={:.3e} depth={}",
                    c.p_minus().value(),
                    c.p_plus().value(),
                    c.nu,
                    c.depth
                );
            }
            if let Some(c) = &cert.failing {
                println!("failing: [{}, {}] nu={:.3e}", c.p_minus().value(), c.p_plus().value(), c.nu);
            }
        }
    }
    Ok(certificate_code(std::slice::from_ref(&cert)))
}

fn cmd_chord_sweep(cfg: &RunConfig) -> CliResult<u8> {
    let grid = alpha_list(cfg, Vec::new())?;
    let certs = sweep_alphas(&grid, cfg.depth_cap, cfg.epsilon)?;
    let summary = summarize(&certs);
    if let Some(dir) = &cfg.output {
        for cert in &certs {
            let tag = alpha_tag(cert.alpha);
            write_file(&dir.join(format!("certificate_alpha{tag}.json")), &cert.to_json())?;
            write_file(&dir.join(format!("chords_alpha{tag}.csv")), &cert.chords_csv())?;
        }
        let mut csv = String::from("alpha,status,chords,max_depth\n");
        for cert in &certs {
            csv.push_str(&format!(
                "{},{:?},{},{}\n",
                cert.alpha,
                cert.status,
                cert.chords.len(),
                cert.max_depth_reached
            ));
        }
        write_file(&dir.join("sweep.csv"), &csv)?;
        let json = serde_json::to_string_pretty(&summary).expect("json");
        write_file(&dir.join("sweep_summary.json"), &json)?;
    }
    match cfg.format.unwrap_or(Format::Text) {
        Format::Json => println!("{}", serde_json::to_string_pretty(&summary).expect("json")),
        _ => {
            println!(
                "alphas={} verified={} inconclusive={} max_chords={} max_depth={}",
                summary.total,
                summary.verified,
                summary.inconclusive_alphas.len(),
                summary.max_chords,
                summary.max_depth_reached
            );
            for a in &summary.inconclusive_alphas {
                println!("inconclusive: alpha={a}");
            }
        }
    }
    Ok(certificate_code(&certs))
}

fn cmd_figure(cfg: &RunConfig) -> CliResult<u8> {
    let m = cfg.n.unwrap_or(DEFAULT_FIGURE_DEPTH);
    if m == 0 || m > TALPHA_MAX_DEPTH as usize {
        return Err(CliError::Usage(format!(
            "figure depth --n must lie in 1..={TALPHA_MAX_DEPTH}, got {m}"
        )));
    }
    let m = m as u32;
    let ch = single_alpha(cfg)?;
    let cert = test_inequality(ch, cfg.depth_cap, cfg.epsilon)?;
    let curve = curve_csv(m, ch)?;
    let hh = ch.entropy();
    let violations = curve_values(m, ch)?
        .into_iter()
        .filter(|&(p, t)| t < lexbound::entropy_f(p).unwrap_or(0.0) * hh - FIGURE_SLACK)
        .count();
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
    let tag = alpha_tag(ch.alpha());
    let curve_path = dir.join(format!("figure_curve_alpha{tag}_m{m}.csv"));
    let chord_path = dir.join(format!("figure_chords_alpha{tag}.csv"));
    write_file(&curve_path, &curve)?;
    write_file(&chord_path, &cert.chords_csv())?;
    println!(
        "alpha={} m={m} rows={} violations={violations} chords={} status={:?}",
        ch.alpha(),
        (1u64 << m) + 1,
        cert.chords.len(),
        cert.status
    );
    println!("wrote {} and {}", curve_path.display(), chord_path.display());
    if violations > 0 {
        Ok(exit::FAIL)
    } else {
        Ok(certificate_code(std::slice::from_ref(&cert)))
    }
}
