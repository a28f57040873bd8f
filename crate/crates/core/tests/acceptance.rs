//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Every check is exact (no numeric tolerance). Run with
//! `cargo test --test acceptance`; the process exits non-zero if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use frobcheck::cli::{
    cartier_certificates, duality_certificates, hara_certificates, parse_hypersurface, residue_certificates,
    Certificate,
};
use frobcheck::derham::{reflexive_forms, DeRhamDatum};
use frobcheck::fincheck::{cartier_split_check, cartier_surjectivity, k_f_injective, omega_reflexive, perf_stabilize_row};
use frobcheck::frob::{cech_f_injective, f_injective_via_duality, fedder_is_fpure, Hypersurface};
use frobcheck::sncforms::{torsion_cross_check, verify_snc_grid, SncContext, SncKind};
use frobcheck::{Error, Result};

type Outcome = Result<std::result::Result<String, String>>;

fn tally(certs: &[Certificate]) -> std::result::Result<String, String> {
    match certs.iter().find(|c| !c.pass) {
        None => Ok(format!("{} certificates", certs.len())),
        Some(c) => Err(format!("{} failed ({:?})", c.label, c.witness)),
    }
}

/// Cartier isomorphism on affine space, degrees ≤ 2np.
fn criterion_1() -> Outcome {
    let mut certs = Vec::new();
    for n in 1..=3 {
        for p in [2, 3, 5] {
            certs.extend(cartier_certificates(n, p, Some(2 * n as i64 * p as i64))?);
        }
    }
    Ok(tally(&certs))
}

/// Hara sequences and Δ-functoriality, degrees ≤ 12, two levels.
fn criterion_2() -> Outcome {
    let mut certs = Vec::new();
    for p in [2, 3] {
        certs.extend(hara_certificates(1, p, 0b1, 2, 12)?);
        certs.extend(hara_certificates(2, p, 0b01, 2, 12)?);
        certs.extend(hara_certificates(2, p, 0b11, 2, 12)?);
    }
    Ok(tally(&certs))
}

/// Duality isomorphisms on the plane.
fn criterion_3() -> Outcome {
    let mut certs = Vec::new();
    for p in [2, 3] {
        for log in [0b00, 0b01, 0b11] {
            certs.extend(duality_certificates(2, p, log)?);
        }
    }
    Ok(tally(&certs))
}

/// Residue sequences along every component of the full SNC divisor.
fn criterion_4() -> Outcome {
    let mut certs = Vec::new();
    for n in 1..=3 {
        for p in [2, 3] {
            certs.extend(residue_certificates(n, p, (1 << n) - 1, 8)?);
        }
    }
    Ok(tally(&certs))
}

/// SNC exactness grid and the torsion cross-check.
fn criterion_5() -> Outcome {
    let grid = verify_snc_grid(4, 3, &[2, 3, 5], 6)?;
    if let Some(c) = grid.iter().find(|c| !c.holds()) {
        return Ok(Err(format!("n={} i={} p={}: {:?}", c.n, c.i, c.p, c.failure)));
    }
    let mut checked = 0;
    for p in [2, 3, 5] {
        for n in 1..=3 {
            let ctx = SncContext::new(p, n)?;
            for i in 1..=n {
                for which in [SncKind::Divisor, SncKind::Complement, SncKind::Component, SncKind::Restricted] {
                    if !torsion_cross_check(&ctx, which, i)? {
                        return Ok(Err(format!("torsion mismatch p={p} n={n} i={i} {which:?}")));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(Ok(format!("{} grid certificates, {checked} torsion checks", grid.len())))
}

const CORPUS: [(&str, &[&str]); 5] = [
    ("x*y - z*w", &["x", "y", "z", "w"]),
    ("x^3 + y^3 + z^3", &["x", "y", "z"]),
    ("x^2 + y^2 + z^2", &["x", "y", "z"]),
    ("x^2 + y^3 + z^5", &["x", "y", "z"]),
    ("a^2 + b^2 + c^2 + d^2 + e^2", &["a", "b", "c", "d", "e"]),
];

/// Fedder ⇒ Čech = duality on the corpus, with the known patterns.
fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    let mut skipped = Vec::new();
    for (text, vars) in CORPUS {
        for p in [3, 5, 7] {
            let f = parse_hypersurface(text, vars, p)?;
            let hs = Hypersurface::new(&f)?;
            match hs.require_isolated() {
                Ok(()) => {}
                Err(Error::NotIsolated | Error::Indeterminate(_)) => {
                    skipped.push(format!("{text} at p={p}"));
                    continue;
                }
                Err(e) => return Err(e),
            }
            let fedder = fedder_is_fpure(&f)?;
            let cech = cech_f_injective(&hs)?;
            let duality = f_injective_via_duality(&hs)?;
            if cech != duality || (fedder && !cech) {
                return Ok(Err(format!("{text} p={p}: fedder {fedder} cech {cech} duality {duality}")));
            }
            lines.push((text, p, duality));
        }
    }
    let expect = [("x^3 + y^3 + z^3", 5, false), ("x^3 + y^3 + z^3", 7, true)]
        .into_iter()
        .chain([3, 5, 7].map(|p| ("x*y - z*w", p, true)));
    for (text, p, want) in expect {
        match lines.iter().find(|l| l.0 == text && l.1 == p) {
            Some(l) if l.2 == want => {}
            other => return Ok(Err(format!("{text} p={p}: expected {want}, got {other:?}"))),
        }
    }
    Ok(Ok(format!("{} cases agree; skipped {}", lines.len(), skipped.join(", "))))
}

/// `(f, vars, p, form degrees, n_max)`.
type InvariantCase = (&'static str, &'static [&'static str], u64, &'static [usize], u32);

/// Corpus cases for the invariants.
///
/// Level `m` of the iterated pushforward has `p^{m(n-1)}` generators per
/// class for a standard-graded `f` in `n` variables, so `n_max` is lowered
/// where that count passes a few thousand; `n_max = 1` leaves only the
/// level-one invariants.
const INVARIANT_CASES: [InvariantCase; 10] = [
    ("x*y - z*w", &["x", "y", "z", "w"], 3, &[0, 1, 2], 3),
    ("x*y - z*w", &["x", "y", "z", "w"], 5, &[0, 1, 2], 3),
    ("x*y - z*w", &["x", "y", "z", "w"], 7, &[0, 1, 2], 3),
    ("x^3 + y^3 + z^3", &["x", "y", "z"], 5, &[0, 1], 2),
    ("x^3 + y^3 + z^3", &["x", "y", "z"], 7, &[0, 1], 2),
    ("x^2 + y^2 + z^2", &["x", "y", "z"], 3, &[0, 1], 3),
    ("x^2 + y^2 + z^2", &["x", "y", "z"], 5, &[0, 1], 2),
    ("x^2 + y^2 + z^2", &["x", "y", "z"], 7, &[0, 1], 2),
    ("x^2 + y^3 + z^5", &["x", "y", "z"], 7, &[0], 2),
    ("a^2 + b^2 + c^2 + d^2 + e^2", &["a", "b", "c", "d", "e"], 3, &[0, 1, 2], 1),
];

/// k = 0 verdict = oracles; reflexive ⇒ C surjective; C∘C^{-1} = id; split ⇒ injective row;
/// injectivity persists along iterated C^{-1}.
fn criterion_7() -> Outcome {
    let (mut checked, mut full_depth) = (0, 0);
    for (text, vars, p, degrees, n_max) in INVARIANT_CASES {
        let f = parse_hypersurface(text, vars, p)?;
        let hs = Hypersurface::new(&f)?;
        let datum = DeRhamDatum::new(&f)?;
        for &i in degrees {
            let mut reflexive = true;
            for l in 0..=i {
                reflexive &= omega_reflexive(&f, l)?;
            }
            if !reflexive {
                continue;
            }
            let tag = format!("{text} p={p} i={i}");
            if i == 0 && k_f_injective(&f, 0)?.overall != f_injective_via_duality(&hs)? {
                return Ok(Err(format!("{tag}: k = 0 verdict differs from the oracles")));
            }
            if !cartier_surjectivity(&f, i)?.surjective {
                return Ok(Err(format!("{tag}: reflexive but C not surjective")));
            }
            if !reflexive_forms(&datum, i)?.split_identity()? {
                return Ok(Err(format!("{tag}: C∘C^{{-1}} ≠ id")));
            }
            if cartier_split_check(&f, i)?.is_some() {
                let v = k_f_injective(&f, i)?;
                if let Some(c) = v.grid.iter().find(|c| c.i == i && !c.injective) {
                    return Ok(Err(format!("{tag}: split but cell ({}, {}) not injective", c.i, c.j)));
                }
            }
            for s in perf_stabilize_row(&f, i, n_max)? {
                if s.violation {
                    return Ok(Err(format!("{tag} j={}: chain {:?}", s.j, s.chain)));
                }
            }
            checked += 1;
            full_depth += usize::from(n_max == 3);
        }
    }
    Ok(Ok(format!("{checked} (f, p, i) cases, {full_depth} iterated to level 3")))
}

const FIXTURE: &str = include_str!("fixtures/xy_zw_p5_k1.json");

/// The end-to-end verdict for `xy - zw`, `p = 5`, `k = 1`.
fn criterion_8() -> Outcome {
    let f = parse_hypersurface("x*y - z*w", &["x", "y", "z", "w"], 5)?;
    let v = k_f_injective(&f, 1)?;
    if !v.grid.iter().all(|c| c.finite_length) {
        return Ok(Err("a cokernel is not supported at the origin".into()));
    }
    let row0 = v.grid.iter().filter(|c| c.i == 0).all(|c| c.injective);
    if row0 != v.cech || row0 != v.duality {
        return Ok(Err(format!("k = 0 row {row0} vs cech {} duality {}", v.cech, v.duality)));
    }
    let json = serde_json::to_string_pretty(&v).expect("verdicts serialise");
    if json.trim() != FIXTURE.trim() {
        return Ok(Err(format!("verdict differs from the fixture:\n{json}")));
    }
    Ok(Ok(format!("overall {}", v.overall)))
}

fn run_binary(args: &[&str]) -> std::result::Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_frobcheck"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run the binary: {e}"))?;
    if out.status.code() == Some(2) {
        return Err(format!("{args:?} exited with an error: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

/// Byte-identical reports across runs and thread counts.
fn criterion_9() -> Outcome {
    let jobs: [&[&str]; 4] = [
        &["sweep", "--f", "x*y - z*w", "--vars", "x,y,z,w", "--primes", "7,3,5", "--k", "1"],
        &["sweep", "--f", "x^3+y^3+z^3", "--vars", "x,y,z", "--primes", "5,7", "--k", "0"],
        &["verify", "--suite", "snc", "--n", "3", "--primes", "2,3"],
        &["verify", "--suite", "hara", "--n", "2", "--E", "xy", "--nmax", "2", "--primes", "3"],
    ];
    for job in jobs {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "1"] {
            let mut args = job.to_vec();
            args.extend(["--jobs", threads]);
            match run_binary(&args) {
                Ok(o) => outputs.push(o),
                Err(e) => return Ok(Err(e)),
            }
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Ok(Err(format!("{job:?}: reports differ")));
        }
    }
    Ok(Ok(format!("{} jobs × 3 runs identical", jobs.len())))
}

fn main() -> ExitCode {
    let criteria: [(u8, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let only: Vec<u8> = std::env::var("ACCEPTANCE_ONLY")
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for (n, run) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(Ok(detail)) => println!("criterion {n}: PASS ({detail}; {secs:.1}s)"),
            Ok(Err(why)) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why}; {secs:.1}s)");
            }
            Err(e) => {
                failed += 1;
                println!("criterion {n}: FAIL (error: {e}; {secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
