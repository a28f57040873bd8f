//! Jobs, verification suites and deterministic JSON reports behind the
//! `frobcheck` binary.
//!
//! A [`Job`] is built from a JSON job file and command-line flags (flags win).
//! Reports serialize with a fixed field order; timings are kept outside the
//! report body.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{parse_in, Poly, Ring, RingBuilder};
use crate::derham::{
    duality_check, hara_functoriality, hara_package_with, inverse_cartier, residue_sequence_with, DeRhamDatum,
    LogDivisor, Mask,
};
use crate::error::{Error, Result};
use crate::fincheck::{k_f_injective, Verdict};
use crate::frob::quasi_homogeneous_weights;
use crate::groebner::monomials_of_degree;
use crate::sncforms::{verify_snc_exact, SncContext};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// A verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cartier,
    Snc,
    Duality,
    Hara,
    Residue,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "cartier" => Ok(Suite::Cartier),
            "snc" => Ok(Suite::Snc),
            "duality" => Ok(Suite::Duality),
            "hara" => Ok(Suite::Hara),
            "residue" => Ok(Suite::Residue),
            _ => Err(Error::Invalid(format!("unknown suite '{s}'"))),
        }
    }
}

/// Everything a command needs; unset fields take command defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Job {
    pub f: Option<String>,
    pub vars: Option<Vec<String>>,
    pub primes: Option<Vec<u64>>,
    pub k: Option<usize>,
    /// Truncation degree for degree-wise checks.
    pub degree: Option<i64>,
    pub n_max: Option<u32>,
    pub suite: Option<Suite>,
    /// Number of variables for the verification suites.
    pub n: Option<usize>,
    /// Log divisor for the suites, as the variables it contains (e.g. `xy`).
    pub log: Option<String>,
}

impl Job {
    pub fn from_json(text: &str) -> Result<Job> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("job file: {e}")))
    }

    /// Fields set in `over` replace those of `self`.
    pub fn overridden_by(self, over: Job) -> Job {
        Job {
            f: over.f.or(self.f),
            vars: over.vars.or(self.vars),
            primes: over.primes.or(self.primes),
            k: over.k.or(self.k),
            degree: over.degree.or(self.degree),
            n_max: over.n_max.or(self.n_max),
            suite: over.suite.or(self.suite),
            n: over.n.or(self.n),
            log: over.log.or(self.log),
        }
    }

    fn polynomial_text(&self) -> Result<&str> {
        self.f.as_deref().ok_or_else(|| Error::Invalid("no polynomial given (--f)".into()))
    }

    fn variables(&self) -> Result<Vec<&str>> {
        let vars: Vec<&str> = self
            .vars
            .as_ref()
            .ok_or_else(|| Error::Invalid("no variables given (--vars)".into()))?
            .iter()
            .map(String::as_str)
            .collect();
        let mut sorted = vars.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(Error::Invalid("variables must be distinct".into()));
        }
        Ok(vars)
    }

    fn prime_list(&self) -> Result<Vec<u64>> {
        let primes = self.primes.clone().unwrap_or_default();
        if primes.is_empty() {
            return Err(Error::Invalid("no primes given (--p / --primes)".into()));
        }
        Ok(primes)
    }
}

/// Parse `text` over `𝔽_p[vars]`, switching to the weights that make it
/// quasi-homogeneous when it is not homogeneous for the standard grading.
pub fn parse_hypersurface(text: &str, vars: &[&str], p: u64) -> Result<Poly> {
    let ring = Ring::new(p, vars)?;
    let f = parse_in(text, &ring)?;
    if f.is_homogeneous() {
        return Ok(f);
    }
    match quasi_homogeneous_weights(&f) {
        Some(w) => {
            let ring = RingBuilder::new(p, vars).weights(w).build()?;
            parse_in(text, &ring)
        }
        None => Err(Error::NotHomogeneous(format!("{} is not quasi-homogeneous", f.to_text()))),
    }
}

/// Echo of the job as it was interpreted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub command: String,
    pub job: Job,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub i: usize,
    pub j: usize,
    pub injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Oracles {
    pub fedder: bool,
    pub cech: bool,
    pub duality: bool,
}

/// One prime's result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictEntry {
    pub p: u64,
    /// `"ok"` or `"error"`.
    pub status: String,
    pub overall: Option<bool>,
    pub f: Option<String>,
    pub reflexive: BTreeMap<String, bool>,
    pub grid: Vec<GridCell>,
    pub cartier_surjective: BTreeMap<String, bool>,
    pub oracles: Option<Oracles>,
    pub diagnostics: Vec<String>,
    pub error: Option<ErrorEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorEntry {
    pub kind: String,
    pub message: String,
}

impl ErrorEntry {
    pub fn from_error(e: &Error) -> ErrorEntry {
        let kind = format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        ErrorEntry { kind, message: e.to_string() }
    }
}

impl VerdictEntry {
    fn from_verdict(p: u64, v: &Verdict) -> VerdictEntry {
        VerdictEntry {
            p,
            status: "ok".into(),
            overall: Some(v.overall),
            f: Some(v.f.clone()),
            reflexive: v.reflexive.iter().map(|&(i, b)| (i.to_string(), b)).collect(),
            grid: v.grid.iter().map(|c| GridCell { i: c.i, j: c.j, injective: c.injective }).collect(),
            cartier_surjective: v.cartier_surjective.iter().map(|&(i, b)| (i.to_string(), b)).collect(),
            oracles: Some(Oracles { fedder: v.fedder, cech: v.cech, duality: v.duality }),
            diagnostics: v.diagnostics.clone(),
            error: None,
        }
    }

    fn from_error(p: u64, e: &Error) -> VerdictEntry {
        VerdictEntry {
            p,
            status: "error".into(),
            overall: None,
            f: None,
            reflexive: BTreeMap::new(),
            grid: vec![],
            cartier_surjective: BTreeMap::new(),
            oracles: None,
            diagnostics: vec![],
            error: Some(ErrorEntry::from_error(e)),
        }
    }
}

/// Fraction of primes with an injective `(i, j)` cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryCell {
    pub i: usize,
    pub j: usize,
    pub passing: usize,
    pub total: usize,
}

/// One certificate of a verification suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub suite: Suite,
    pub label: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Engine {
    pub version: String,
}

/// The deterministic report body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub input: InputEcho,
    pub verdicts: Vec<VerdictEntry>,
    pub summary: Vec<SummaryCell>,
    pub certificates: Vec<Certificate>,
    pub errors: Vec<ErrorEntry>,
    pub engine: Engine,
}

impl Report {
    fn new(command: &str, job: &Job) -> Report {
        Report {
            input: InputEcho { command: command.into(), job: job.clone() },
            verdicts: vec![],
            summary: vec![],
            certificates: vec![],
            errors: vec![],
            engine: Engine { version: ENGINE_VERSION.into() },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// A report with its exit code and wall-clock timings (not part of the body).
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
    pub timings: BTreeMap<String, f64>,
}

fn failed(mut report: Report, e: &Error) -> Outcome {
    report.errors.push(ErrorEntry::from_error(e));
    Outcome { report, exit_code: EXIT_ERROR, timings: BTreeMap::new() }
}

fn verdict_for(job: &Job, p: u64) -> Result<Verdict> {
    let f = parse_hypersurface(job.polynomial_text()?, &job.variables()?, p)?;
    k_f_injective(&f, job.k.unwrap_or(0))
}

/// `check`: the k-F-injectivity verdict at a single prime.
pub fn run_check(job: &Job) -> Outcome {
    let report = Report::new("check", job);
    let primes = match job.prime_list() {
        Ok(p) if p.len() == 1 => p,
        Ok(_) => return failed(report, &Error::Invalid("check takes a single prime".into())),
        Err(e) => return failed(report, &e),
    };
    let p = primes[0];
    let start = Instant::now();
    let mut outcome = match verdict_for(job, p) {
        Ok(v) => {
            let mut report = report;
            let code = if v.overall { EXIT_PASS } else { EXIT_FALSE };
            report.verdicts.push(VerdictEntry::from_verdict(p, &v));
            Outcome { report, exit_code: code, timings: BTreeMap::new() }
        }
        Err(e) => {
            let mut o = failed(report, &e);
            o.report.verdicts.push(VerdictEntry::from_error(p, &e));
            o
        }
    };
    outcome.timings.insert(format!("p={p}"), start.elapsed().as_secs_f64());
    outcome
}

/// `sweep`: verdicts over a list of primes, computed concurrently and merged
/// in prime order.
pub fn run_sweep(job: &Job) -> Outcome {
    let mut report = Report::new("sweep", job);
    let mut primes = match job.prime_list() {
        Ok(p) => p,
        Err(e) => return failed(report, &e),
    };
    primes.sort_unstable();
    primes.dedup();
    let results: Vec<(u64, Result<Verdict>, f64)> = primes
        .par_iter()
        .map(|&p| {
            let start = Instant::now();
            let v = verdict_for(job, p);
            (p, v, start.elapsed().as_secs_f64())
        })
        .collect();
    let mut timings = BTreeMap::new();
    let mut cells: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    let mut any_error = false;
    let mut all_true = true;
    for (p, v, secs) in results {
        timings.insert(format!("p={p}"), secs);
        match v {
            Ok(v) => {
                all_true &= v.overall;
                for c in &v.grid {
                    let e = cells.entry((c.i, c.j)).or_insert((0, 0));
                    e.0 += c.injective as usize;
                    e.1 += 1;
                }
                report.verdicts.push(VerdictEntry::from_verdict(p, &v));
            }
            Err(e) => {
                any_error = true;
                report.verdicts.push(VerdictEntry::from_error(p, &e));
            }
        }
    }
    report.summary =
        cells.into_iter().map(|((i, j), (passing, total))| SummaryCell { i, j, passing, total }).collect();
    let exit_code = if any_error {
        EXIT_ERROR
    } else if all_true {
        EXIT_PASS
    } else {
        EXIT_FALSE
    };
    Outcome { report, exit_code, timings }
}

fn suite_ring(n: usize, p: u64) -> Result<crate::arith::RingRef> {
    if n == 0 || n > 4 {
        return Err(Error::Invalid(format!("suite dimension {n} outside 1..=4")));
    }
    let names: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ring::new(p, &refs)
}

/// The log divisor mask from variable names (`x1x2`, `xy`) or digits (`12`).
pub fn parse_log(spec: Option<&str>, n: usize) -> Result<Mask> {
    let Some(s) = spec else { return Ok(0) };
    let letters = ["x", "y", "z", "w"];
    let mut mask: Mask = 0;
    let mut rest = s.trim();
    while !rest.is_empty() {
        let (k, len) = if let Some(r) = rest.strip_prefix('x').and_then(|r| r.chars().next().filter(char::is_ascii_digit)) {
            ((r as u8 - b'1') as usize, 2)
        } else if let Some(c) = rest.chars().next().filter(char::is_ascii_digit) {
            ((c as u8 - b'1') as usize, 1)
        } else if let Some(k) = letters.iter().position(|l| rest.starts_with(l)) {
            (k, 1)
        } else {
            return Err(Error::Invalid(format!("cannot read the divisor '{s}'")));
        };
        if k >= n {
            return Err(Error::BadSupport);
        }
        mask |= 1 << k;
        rest = &rest[len..];
    }
    Ok(mask)
}

/// `dim (Ω^i_{𝔽_p[x_1..x_n]})_t` in the standard grading.
pub fn affine_form_dim(n: usize, i: usize, t: i64) -> usize {
    let binom = (0..i).fold(1usize, |acc, j| if j >= n { 0 } else { acc * (n - j) / (j + 1) });
    if t < i as i64 {
        0
    } else {
        binom * monomials_of_degree(&vec![1; n], t - i as i64).len()
    }
}

/// `C^{-1}: Ω^i → ZΩ^i/BΩ^i` on affine `n`-space is bijective, and the
/// quotient has the dimensions of `Ω^i` in every degree `≤ top`.
pub fn cartier_certificates(n: usize, p: u64, top: Option<i64>) -> Result<Vec<Certificate>> {
    let ring = suite_ring(n, p)?;
    let datum = DeRhamDatum::new(&Poly::zero(&ring))?;
    let scale = ring.scale();
    let top = top.unwrap_or(2 * n as i64 * p as i64);
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let ic = inverse_cartier(&datum, i)?;
            let bijective = ic.map.is_injective()? && ic.map.is_surjective()?;
            let mut witness = None;
            for t in 0..=top {
                let got = ic.quotient.graded_piece_dim(t * scale)?;
                let want = affine_form_dim(n, i, t);
                if got != want {
                    witness = Some(format!("degree {t}: dim Z/B = {got}, dim Ω = {want}"));
                    break;
                }
            }
            if !bijective && witness.is_none() {
                witness = Some("C^{-1} is not bijective".into());
            }
            Ok(Certificate {
                suite: Suite::Cartier,
                label: format!("n={n} p={p} i={i}"),
                pass: bijective && witness.is_none(),
                witness,
            })
        })
        .collect()
}

pub fn snc_certificates(n: usize, p: u64, top: i64) -> Result<Vec<Certificate>> {
    let ctx = SncContext::new(p, n)?;
    (1..=n)
        .into_par_iter()
        .map(|i| {
            let c = verify_snc_exact(&ctx, i, top)?;
            let witness = c.failure.as_ref().map(|(claim, w)| format!("{claim} fails at {w}")).or_else(|| {
                (!c.bad_degrees.is_empty()).then(|| format!("degree-wise failure at {:?}", c.bad_degrees))
            });
            Ok(Certificate { suite: Suite::Snc, label: format!("n={n} p={p} i={i}"), pass: c.holds(), witness })
        })
        .collect()
}

pub fn duality_certificates(n: usize, p: u64, log: Mask) -> Result<Vec<Certificate>> {
    let ring = suite_ring(n, p)?;
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let rep = duality_check(&ring, log, i)?;
            let witness = rep
                .classes
                .iter()
                .find(|c| !(c.forms_iso && c.boundaries_iso && c.cycles_iso && c.dims_agree.iter().all(|&b| b)))
                .map(|c| format!("class {:?}: {:?}", c.class, c));
            Ok(Certificate {
                suite: Suite::Duality,
                label: format!("n={n} p={p} E={log:#b} i={i}"),
                pass: rep.holds(),
                witness,
            })
        })
        .collect()
}

/// Hara sequences for `Δ ∈ {0, -E/p^{n_level}, …, -E/p}` and the functoriality ladders between consecutive `Δ`.
pub fn hara_certificates(n: usize, p: u64, log: Mask, n_level: u32, top: i64) -> Result<Vec<Certificate>> {
    let ring = suite_ring(n, p)?;
    let deltas: Vec<(String, LogDivisor)> = std::iter::once(Ok(("0".to_string(), LogDivisor::zero(&ring, log)?)))
        .chain((1..=n_level).rev().map(|e| Ok((format!("-E/p^{e}"), LogDivisor::uniform(&ring, log, -1, e)?))))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..deltas.len()).flat_map(|d| (0..=n).map(move |i| (d, i))).collect();
    let packages = jobs
        .par_iter()
        .map(|&(d, i)| hara_package_with(&ring, log, &deltas[d].1, i, n_level, top))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (&(d, i), pk) in jobs.iter().zip(&packages) {
        out.push(Certificate {
            suite: Suite::Hara,
            label: format!("n={n} p={p} E={log:#b} Δ={} i={i} levels={n_level}", deltas[d].0),
            pass: pk.holds(),
            witness: None,
        });
    }
    // the twists decrease along `deltas`: ladders run from Δ_{d+1} to Δ_d
    for d in 0..deltas.len().saturating_sub(1) {
        for i in 0..=n {
            let big = &packages[d * (n + 1) + i];
            let small = &packages[(d + 1) * (n + 1) + i];
            let checks = hara_functoriality(small, big)?;
            let bad = checks.iter().find(|c| !(c.left && c.right));
            out.push(Certificate {
                suite: Suite::Hara,
                label: format!("n={n} p={p} E={log:#b} ladder {} → {} i={i}", deltas[d + 1].0, deltas[d].0),
                pass: bad.is_none(),
                witness: bad.map(|c| format!("level {} class {:?}", c.n_level, c.class)),
            });
        }
    }
    Ok(out)
}

pub fn residue_certificates(n: usize, p: u64, log: Mask, top: i64) -> Result<Vec<Certificate>> {
    let ring = suite_ring(n, p)?;
    let log = if log == 0 { (1u32 << n) - 1 } else { log };
    let jobs: Vec<(usize, usize, u8)> = (0..n)
        .filter(|&c| log >> c & 1 == 1)
        .flat_map(|c| (0..=n).flat_map(move |i| (1..=4u8).map(move |w| (c, i, w))))
        .collect();
    jobs.par_iter()
        .map(|&(c, i, w)| {
            let rep = residue_sequence_with(&ring, log, c, i, w, top)?;
            let bad = rep.classes.iter().find(|(_, cert)| !cert.holds());
            Ok(Certificate {
                suite: Suite::Residue,
                label: format!("n={n} p={p} E={log:#b} D=x{} i={i} sequence={w}", c + 1),
                pass: rep.holds(),
                witness: bad.map(|(class, cert)| format!("class {class:?}: {:?}", cert.module)),
            })
        })
        .collect()
}

/// `verify`: run one suite for every listed prime.
pub fn run_verify(job: &Job) -> Outcome {
    let mut report = Report::new("verify", job);
    let Some(suite) = job.suite else {
        return failed(report, &Error::Invalid("no suite selected (--suite)".into()));
    };
    let primes = match job.prime_list() {
        Ok(p) => p,
        Err(e) => return failed(report, &e),
    };
    let n = job.n.unwrap_or(2);
    let mut timings = BTreeMap::new();
    for p in primes {
        let start = Instant::now();
        let certs = parse_log(job.log.as_deref(), n).and_then(|log| match suite {
            Suite::Cartier => cartier_certificates(n, p, job.degree),
            Suite::Snc => snc_certificates(n, p, job.degree.unwrap_or(6)),
            Suite::Duality => duality_certificates(n, p, log),
            Suite::Hara => hara_certificates(n, p, log, job.n_max.unwrap_or(1), job.degree.unwrap_or(12)),
            Suite::Residue => residue_certificates(n, p, log, job.degree.unwrap_or(8)),
        });
        timings.insert(format!("p={p}"), start.elapsed().as_secs_f64());
        match certs {
            Ok(c) => report.certificates.extend(c),
            Err(e) => report.errors.push(ErrorEntry::from_error(&e)),
        }
    }
    let exit_code = if !report.errors.is_empty() {
        EXIT_ERROR
    } else if report.certificates.iter().all(|c| c.pass) {
        EXIT_PASS
    } else {
        EXIT_FALSE
    };
    Outcome { report, exit_code, timings }
}
