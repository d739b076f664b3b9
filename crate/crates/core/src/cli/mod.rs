//! Command-line front end.

pub mod config;
pub mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error as ThisError;

use crate::error::Error;
use crate::gaussian::stats::Histogram;
use crate::gaussian::{sample_continuous, seeded_rng, DiscreteSampler, GaussianParams};
use crate::grlwe::{decision_instance, write_samples, Coin, LweParams, SecretMode};
use crate::lattices::LatticeBasis;
use crate::pke::{correctness_rate, decrypt, encrypt, keygen, Ciphertext, PkeParams, Plaintext, PublicKey, SecretKey};
pub use config::Config;
pub use suites::{Check, Suite};

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGroup(_)
            | Error::InvalidElement { .. }
            | Error::TooLarge { .. }
            | Error::UnsupportedRing(_)
            | Error::NotImplemented(_)
            | Error::DimensionCap { .. }
            | Error::Parameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "grlwe", version, about = "Group-ring LWE toolkit: verification suites, samplers and a toy cryptosystem")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// `key=value` file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["I", "II"])]
    pub family: Option<String>,
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub p: Option<usize>,
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true, value_parser = ["none", "auto"])]
    pub quotient: Option<String>,
    #[arg(long, global = true)]
    pub q: Option<i64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub width: Option<f64>,
    /// Decimal or 0x-prefixed hexadecimal
    #[arg(long, global = true)]
    pub seed: Option<String>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub preset: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a property suite and print one line per check
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Key generation, encryption, decryption and correctness rate
    Pke {
        #[command(subcommand)]
        action: PkeCommand,
    },
    /// Emit samples
    Sample {
        #[arg(value_enum)]
        kind: SampleKind,
        #[command(flatten)]
        args: SampleArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum PkeCommand {
    /// Write a key pair
    Keygen {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        sk: PathBuf,
    },
    /// Encrypt a bit string under a public key file
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        /// Bits as a string of 0 and 1, one per ring coordinate
        #[arg(long)]
        msg: String,
    },
    /// Decrypt a ciphertext file
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        /// Compare the result against these bits
        #[arg(long)]
        expect: Option<String>,
    },
    /// Monte-Carlo exact-message rate
    Rate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Lwe,
    Gaussian,
    Discrete,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub count: Option<usize>,
    /// Gaussian width
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_parser = ["Zn"])]
    pub lattice: Option<String>,
    /// Draw from the LWE distribution or from uniform
    #[arg(long, value_parser = ["real", "random"])]
    pub coin: Option<String>,
    /// Emit `value,count` rows instead of samples (one-dimensional discrete only)
    #[arg(long)]
    pub histogram: bool,
}

fn flag_pairs(common: &CommonArgs, sample: Option<&SampleArgs>) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut push = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            out.push((k.to_string(), v));
        }
    };
    push("family", common.family.clone());
    push("m", common.m.map(|x| x.to_string()));
    push("n", common.n.map(|x| x.to_string()));
    push("p", common.p.map(|x| x.to_string()));
    push("k", common.k.map(|x| x.to_string()));
    push("quotient", common.quotient.clone());
    push("q", common.q.map(|x| x.to_string()));
    push("alpha", common.alpha.map(|x| x.to_string()));
    push("width", common.width.map(|x| x.to_string()));
    push("seed", common.seed.clone());
    push("trials", common.trials.map(|x| x.to_string()));
    push("jobs", common.jobs.map(|x| x.to_string()));
    push("preset", common.preset.clone());
    push("out", common.out.as_ref().map(|p| p.display().to_string()));
    if let Some(s) = sample {
        push("count", s.count.map(|x| x.to_string()));
        push("r", s.r.map(|x| x.to_string()));
        push("dim", s.dim.map(|x| x.to_string()));
        push("lattice", s.lattice.clone());
        push("coin", s.coin.clone());
    }
    out
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writing primary output to `--out` or `stdout`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    let sample_args = match &cli.command {
        Command::Sample { args, .. } => Some(args),
        _ => None,
    };
    let cfg = Config::resolve(cli.common.config.as_deref(), &flag_pairs(&cli.common, sample_args))?;
    eprintln!("config {cfg}");
    let (code, body) = match &cli.command {
        Command::Verify { suite } => verify(*suite, &cfg)?,
        Command::Pke { action } => (0, pke(action, &cfg)?),
        Command::Sample { kind, args } => (0, sample(*kind, args, &cfg)?),
    };
    match cfg.out() {
        Some(path) => write_file(&path, &body)?,
        None => stdout.write_all(body.as_bytes()).map_err(|e| CliError::Runtime(format!("stdout: {e}")))?,
    }
    Ok(code)
}

fn write_file(path: &Path, body: &str) -> CliResult<()> {
    fs::write(path, body).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Reads and parses a file; every failure is a data error.
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> crate::Result<T>) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

/// Report lines, then `RESULT pass=<k> fail=<k>`; exit 1 on any failure.
pub fn report(checks: &[Check]) -> (i32, String) {
    let mut body: String = checks.iter().map(|c| c.line() + "\n").collect();
    let pass = checks.iter().filter(|c| c.passed).count();
    let fail = checks.len() - pass;
    body.push_str(&format!("RESULT pass={pass} fail={fail}\n"));
    (i32::from(fail > 0), body)
}

fn verify(suite: Suite, cfg: &Config) -> CliResult<(i32, String)> {
    Ok(report(&suites::run(suite, cfg)?))
}

fn pke_params(cfg: &Config) -> CliResult<PkeParams> {
    Ok(PkeParams::new(cfg.ring()?, cfg.i64("q")?, cfg.f64("width")?)?)
}

fn pke(action: &PkeCommand, cfg: &Config) -> CliResult<String> {
    let seed = cfg.seed()?;
    match action {
        PkeCommand::Keygen { pk, sk } => {
            let params = pke_params(cfg)?;
            let kp = keygen(&params, &mut seeded_rng(seed, 1))?;
            write_file(pk, &kp.pk.to_text())?;
            write_file(sk, &kp.sk.to_text())?;
            Ok(format!("keygen {}\n", params.header()))
        }
        PkeCommand::Encrypt { pk, msg } => {
            let pk = load(pk, PublicKey::from_text)?;
            let m = Plaintext::from_bitstring(msg)?;
            if m.bits.len() != pk.params.dim() {
                return Err(CliError::Usage(format!("message needs {} bits, got {}", pk.params.dim(), m.bits.len())));
            }
            let (ct, _) = encrypt(&pk, &m, &mut seeded_rng(seed, 2))?;
            Ok(ct.to_text(&pk.params))
        }
        PkeCommand::Decrypt { sk, ct, expect } => {
            let sk = load(sk, SecretKey::from_text)?;
            let (params, ct) = load(ct, Ciphertext::from_text)?;
            if params != sk.params {
                return Err(CliError::Runtime(format!(
                    "ciphertext parameters ({}) differ from key parameters ({})",
                    params.header(),
                    sk.params.header()
                )));
            }
            let m = decrypt(&sk, &ct);
            let mut out = format!("{}\n", m.to_bitstring());
            if let Some(bits) = expect {
                let expected = Plaintext::from_bitstring(bits)?;
                out.push_str(&format!("match={}\n", expected == m));
            }
            Ok(out)
        }
        PkeCommand::Rate => {
            let params = pke_params(cfg)?;
            let trials = cfg.usize("trials")?;
            let rep = correctness_rate(&params, trials, seed, cfg.jobs()?)?;
            let mut out = format!(
                "rate={:.6} successes={} trials={} identity_failures={}\n",
                rep.rate(),
                rep.successes,
                rep.trials,
                rep.identity_failures
            );
            for (lo, count) in rep.margin_histogram(10) {
                out.push_str(&format!("margin {lo:.3} {count}\n"));
            }
            Ok(out)
        }
    }
}

fn sample(kind: SampleKind, args: &SampleArgs, cfg: &Config) -> CliResult<String> {
    let mut rng = seeded_rng(cfg.seed()?, 3);
    let count = cfg.usize("count")?;
    if args.histogram && kind != SampleKind::Discrete {
        return Err(CliError::Usage("--histogram applies to discrete samples".into()));
    }
    match kind {
        SampleKind::Lwe => {
            let params = LweParams::new(cfg.ring()?, cfg.i64("q")?, cfg.f64("alpha")?, SecretMode::UniformModQ)?;
            let coin = if cfg.str("coin") == "random" { Coin::Random } else { Coin::Real };
            Ok(write_samples(&params, &decision_instance(&params, count, coin, &mut rng)?))
        }
        SampleKind::Gaussian => {
            let params = GaussianParams::spherical(cfg.f64("r")?)?;
            let dim = cfg.usize("dim")?;
            let mut out = String::new();
            for _ in 0..count {
                let x = sample_continuous(&params, dim, &mut rng)?;
                out.push_str(&x.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            Ok(out)
        }
        SampleKind::Discrete => {
            if cfg.str("lattice") != "Zn" {
                return Err(CliError::Usage(format!("unsupported lattice {:?}", cfg.str("lattice"))));
            }
            let dim = cfg.usize("dim")?;
            if dim == 0 {
                return Err(CliError::Usage("dim must be positive".into()));
            }
            let sampler = DiscreteSampler::new(&LatticeBasis::integer(dim), &GaussianParams::spherical(cfg.f64("r")?)?)?;
            let center = vec![0.0; dim];
            if args.histogram {
                if dim != 1 {
                    return Err(CliError::Usage("--histogram needs dim 1".into()));
                }
                let hist: Histogram = (0..count)
                    .map(|_| sampler.sample_coords(&center, &mut rng).map(|z| z[0]))
                    .collect::<crate::Result<Vec<i64>>>()?
                    .into_iter()
                    .collect();
                return Ok(hist.to_csv());
            }
            let mut out = String::new();
            for _ in 0..count {
                let z = sampler.sample_coords(&center, &mut rng)?;
                out.push_str(&z.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (CliResult<i32>, String) {
        let cli = Cli::try_parse_from(std::iter::once("grlwe").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let code = execute(&cli, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn report_counts() {
        let checks = vec![
            Check { name: "a".into(), passed: true, detail: "x".into() },
            Check { name: "b".into(), passed: false, detail: "y".into() },
        ];
        let (code, body) = report(&checks);
        assert_eq!(code, 1);
        assert_eq!(body, "PASS a x\nFAIL b y\nRESULT pass=1 fail=1\n");
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        let err = Cli::try_parse_from(["grlwe", "verify", "bogus"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn verify_eigen_small() {
        let (code, body) = run(&["verify", "eigen", "--family", "I", "--m", "2", "--n", "4", "--trials", "10"]);
        assert_eq!(code.unwrap(), 0);
        assert!(body.ends_with("RESULT pass=1 fail=0\n"), "{body}");
    }

    #[test]
    fn lwe_count_zero_is_header_only() {
        let (code, body) = run(&["sample", "lwe", "--q", "17", "--count", "0"]);
        assert_eq!(code.unwrap(), 0);
        assert!(body.lines().all(|l| !l.starts_with("a=")), "{body}");
        assert!(body.starts_with("I(2,4)") || body.contains("q=17"), "{body}");
    }

    #[test]
    fn narrow_discrete_width_is_usage_error() {
        let (code, _) = run(&["sample", "discrete", "--dim", "4", "--r", "0.1"]);
        assert_eq!(code.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn full_ring_pke_is_usage_error() {
        let (code, _) = run(&["pke", "rate", "--trials", "5"]);
        assert_eq!(code.unwrap_err().exit_code(), 2);
    }
}
