//! Public-key encryption over a quotient group ring: `pk = (a, s·a + e)`,
//! `u = a·r + e1`, `v = b·r + e2 + ⌊q/2⌉·m`.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::seeded_rng;
use crate::groupring::{join_coeffs, split_coeffs, RingElem, RingSpec};
use crate::groups::{parse_record, record_value, GroupSpec};
use crate::grlwe::{rounded_gaussian, uniform_mod_q};

#[derive(Debug, Clone, PartialEq)]
pub struct PkeParams {
    pub ring: RingSpec,
    pub q: i64,
    /// Width of the rounded Gaussian used for secrets and noise.
    pub width: f64,
}

impl PkeParams {
    pub fn new(ring: RingSpec, q: i64, width: f64) -> Result<Self> {
        if ring.is_full() {
            return Err(Error::UnsupportedRing(format!("encryption needs a quotient ring, got {ring}")));
        }
        if q < 3 {
            return Err(Error::Parameter(format!("modulus must be at least 3, got {q}")));
        }
        if !(width >= 0.0 && width.is_finite()) {
            return Err(Error::Parameter(format!("width must be non-negative, got {width}")));
        }
        Ok(PkeParams { ring, q, width })
    }

    /// `Z[Z_2 ⋉ Z_8] / ⟨t^4 + 1⟩`, `q = 257`, width 1.
    pub fn desk() -> Self {
        let ring = RingSpec::quotient_of(GroupSpec::type_i(2, 8).expect("valid group")).expect("valid quotient");
        PkeParams::new(ring, 257, 1.0).expect("valid preset")
    }

    /// `⌊q/2⌉` rounding halves up.
    pub fn half_q(&self) -> i64 {
        (self.q + 1) / 2
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn header(&self) -> String {
        format!("{} q={} width={}", self.ring, self.q, self.width)
    }

    pub fn parse_header(line: &str) -> Result<Self> {
        let fields = parse_record(line)?;
        let ring: RingSpec = line.parse()?;
        let q = record_value(&fields, "q")?.parse().map_err(|_| Error::Parse("bad q".into()))?;
        let width = record_value(&fields, "width")?.parse().map_err(|_| Error::Parse("bad width".into()))?;
        PkeParams::new(ring, q, width)
    }

    fn short<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<RingElem<i64>> {
        rounded_gaussian(&self.ring, self.width, rng)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PublicKey {
    pub params: PkeParams,
    pub a: RingElem<i64>,
    pub b: RingElem<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecretKey {
    pub params: PkeParams,
    pub s: RingElem<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeyPair {
    pub pk: PublicKey,
    pub sk: SecretKey,
    /// Key-generation error, logged for verification.
    pub e: RingElem<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ciphertext {
    pub u: RingElem<i64>,
    pub v: RingElem<i64>,
}

/// Encryption randomness, logged for verification.
#[derive(Debug, Clone, PartialEq)]
pub struct EncryptionLog {
    pub r: RingElem<i64>,
    pub e1: RingElem<i64>,
    pub e2: RingElem<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaintext {
    pub bits: Vec<u8>,
}

impl Plaintext {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parameter("plaintext bits must be 0 or 1".into()));
        }
        Ok(Plaintext { bits })
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        Plaintext { bits: (0..dim).map(|_| rng.random_range(0..=1u8)).collect() }
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(|bits| Plaintext { bits })
    }
}

pub fn keygen<R: Rng + ?Sized>(params: &PkeParams, rng: &mut R) -> Result<KeyPair> {
    let a = uniform_mod_q(&params.ring, params.q, rng);
    let s = params.short(rng)?;
    let e = params.short(rng)?;
    let b = (&(&s * &a) + &e).reduce_mod(params.q);
    Ok(KeyPair {
        pk: PublicKey { params: params.clone(), a, b },
        sk: SecretKey { params: params.clone(), s },
        e,
    })
}

fn message_elem(params: &PkeParams, m: &Plaintext) -> Result<RingElem<i64>> {
    if m.bits.len() != params.dim() {
        return Err(Error::DimensionMismatch { expected: params.dim(), got: m.bits.len() });
    }
    RingElem::from_coeffs(&params.ring, m.bits.iter().map(|&b| i64::from(b) * params.half_q()).collect())
}

/// Encryption with explicit randomness; multiplication by `r` is on the right.
pub fn encrypt_with(pk: &PublicKey, m: &Plaintext, log: &EncryptionLog) -> Result<Ciphertext> {
    let p = &pk.params;
    let msg = message_elem(p, m)?;
    let u = (&(&pk.a * &log.r) + &log.e1).reduce_mod(p.q);
    let v = (&(&(&pk.b * &log.r) + &log.e2) + &msg).reduce_mod(p.q);
    Ok(Ciphertext { u, v })
}

pub fn encrypt<R: Rng + ?Sized>(pk: &PublicKey, m: &Plaintext, rng: &mut R) -> Result<(Ciphertext, EncryptionLog)> {
    let p = &pk.params;
    let log = EncryptionLog { r: p.short(rng)?, e1: p.short(rng)?, e2: p.short(rng)? };
    Ok((encrypt_with(pk, m, &log)?, log))
}

/// Representative of `x mod q` in `(-q/2, q/2]`.
pub fn centered(x: i64, q: i64) -> i64 {
    let r = x.rem_euclid(q);
    if 2 * r > q {
        r - q
    } else {
        r
    }
}

/// `v - s·u mod q`.
pub fn decryption_value(sk: &SecretKey, ct: &Ciphertext) -> RingElem<i64> {
    (&ct.v - &(&sk.s * &ct.u)).reduce_mod(sk.params.q)
}

/// Each coefficient of `v - s·u` decodes to 1 when it is circularly nearer to `⌊q/2⌉` than to 0.
pub fn decrypt(sk: &SecretKey, ct: &Ciphertext) -> Plaintext {
    let q = sk.params.q;
    let half = sk.params.half_q();
    let bits = decryption_value(sk, ct)
        .coeffs()
        .iter()
        .map(|&c| u8::from(centered(c - half, q).abs() < centered(c, q).abs()))
        .collect();
    Plaintext { bits }
}

/// `e·r - s·e1 + e2`, the noise term in `v - s·u`.
pub fn noise_term(kp: &KeyPair, log: &EncryptionLog) -> RingElem<i64> {
    &(&(&kp.e * &log.r) - &(&kp.sk.s * &log.e1)) + &log.e2
}

/// `v - s·u ≡ noise + ⌊q/2⌉·m (mod q)` with the logged randomness.
pub fn decryption_identity_holds(kp: &KeyPair, ct: &Ciphertext, log: &EncryptionLog, m: &Plaintext) -> Result<bool> {
    let p = &kp.pk.params;
    // s·(a·r) = (s·a)·r is what lets the key relation pass through encryption
    let assoc = &kp.sk.s * &(&kp.pk.a * &log.r) == &(&kp.sk.s * &kp.pk.a) * &log.r;
    let expected = (&noise_term(kp, log) + &message_elem(p, m)?).reduce_mod(p.q);
    Ok(assoc && decryption_value(&kp.sk, ct) == expected)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectnessReport {
    pub trials: usize,
    pub successes: usize,
    pub identity_failures: usize,
    /// `‖e·r - s·e1 + e2‖_∞ / q` per trial, in trial order.
    pub margins: Vec<f64>,
}

impl CorrectnessReport {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Counts of margins in `bins` equal-width bins over `[0, 1/2]`.
    pub fn margin_histogram(&self, bins: usize) -> Vec<(f64, usize)> {
        let width = 0.5 / bins as f64;
        let mut counts = vec![0usize; bins];
        for &m in &self.margins {
            counts[((m / width) as usize).min(bins - 1)] += 1;
        }
        counts.into_iter().enumerate().map(|(i, c)| (i as f64 * width, c)).collect()
    }
}

/// Keygen, encrypt and decrypt per trial with stream `trial` of `seed`, over `jobs` threads.
pub fn correctness_rate(params: &PkeParams, trials: usize, seed: u64, jobs: usize) -> Result<CorrectnessReport> {
    if trials == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    let run = |trial: usize| -> Result<(bool, bool, f64)> {
        let mut rng = seeded_rng(seed, trial as u64);
        let kp = keygen(params, &mut rng)?;
        let m = Plaintext::random(params.dim(), &mut rng);
        let (ct, log) = encrypt(&kp.pk, &m, &mut rng)?;
        let ok = decrypt(&kp.sk, &ct) == m;
        let identity = decryption_identity_holds(&kp, &ct, &log, &m)?;
        let noise = noise_term(&kp, &log);
        let margin = noise.coeffs().iter().map(|&c| centered(c, params.q).abs()).max().unwrap_or(0) as f64 / params.q as f64;
        Ok((ok, identity, margin))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    let results: Vec<(bool, bool, f64)> = pool.install(|| (0..trials).into_par_iter().map(run).collect::<Result<_>>())?;
    Ok(CorrectnessReport {
        trials,
        successes: results.iter().filter(|r| r.0).count(),
        identity_failures: results.iter().filter(|r| !r.1).count(),
        margins: results.iter().map(|r| r.2).collect(),
    })
}

fn labeled(out: &mut String, label: &str, x: &RingElem<i64>) {
    let _ = writeln!(out, "{label}={}", join_coeffs(x.coeffs()));
}

fn read_labeled(params: &PkeParams, text: &str, labels: &[&str]) -> Result<Vec<RingElem<i64>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty()).skip(1);
    labels
        .iter()
        .map(|label| {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing {label}= line")))?;
            let body = line
                .trim()
                .strip_prefix(label)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| Error::Parse(format!("expected {label}=, got {line:?}")))?;
            let coeffs: Vec<i64> = split_coeffs(body)?;
            if coeffs.iter().any(|&c| c < 0 || c >= params.q) {
                return Err(Error::Parse(format!("{label} coefficients must lie in [0, q)")));
            }
            RingElem::from_coeffs(&params.ring, coeffs)
        })
        .collect()
}

fn read_header(text: &str) -> Result<PkeParams> {
    let header = text.lines().find(|l| !l.trim().is_empty()).ok_or_else(|| Error::Parse("empty file".into()))?;
    PkeParams::parse_header(header)
}

impl PublicKey {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.params.header());
        labeled(&mut out, "a", &self.a);
        labeled(&mut out, "b", &self.b);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let params = read_header(text)?;
        let mut v = read_labeled(&params, text, &["a", "b"])?;
        let b = v.pop().expect("two entries");
        let a = v.pop().expect("two entries");
        Ok(PublicKey { params, a, b })
    }
}

impl SecretKey {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.params.header());
        labeled(&mut out, "s", &self.s.reduce_mod(self.params.q));
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let params = read_header(text)?;
        let s = read_labeled(&params, text, &["s"])?.pop().expect("one entry");
        Ok(SecretKey { params, s })
    }
}

impl Ciphertext {
    pub fn to_text(&self, params: &PkeParams) -> String {
        let mut out = format!("{}\n", params.header());
        labeled(&mut out, "u", &self.u);
        labeled(&mut out, "v", &self.v);
        out
    }

    pub fn from_text(text: &str) -> Result<(PkeParams, Self)> {
        let params = read_header(text)?;
        let mut v = read_labeled(&params, text, &["u", "v"])?;
        let vv = v.pop().expect("two entries");
        let u = v.pop().expect("two entries");
        Ok((params, Ciphertext { u, v: vv }))
    }
}
