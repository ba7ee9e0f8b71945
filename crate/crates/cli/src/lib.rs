//! Reports behind the `halfgraph` command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use halfgraph_core::formula::{Atom, Relation};
use halfgraph_core::oracle::{ladder_exists, verify_decomposition, verify_ladder};
use halfgraph_core::qe::eliminate_quantifiers;
use halfgraph_core::scalar::render;
use halfgraph_core::stability::{analyze_set, union_of, Culprit, LadderWitness, SpecialStablePiece};
use halfgraph_core::{Error, Partition, Problem, Rational, Scalar, SemilinearSet, StabilityVerdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const EXIT_STABLE: i32 = 0;
pub const EXIT_UNSTABLE: i32 = 10;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Ladder lengths checked by `--verify` on unstable verdicts.
pub const VERIFY_LENGTHS: [usize; 4] = [1, 5, 10, 25];

const SPOT_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceReport {
    #[serde(rename = "Z")]
    pub z: String,
    #[serde(rename = "W")]
    pub w: String,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "Y")]
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub k: usize,
    pub a: Vec<Vec<String>>,
    pub b: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub max_k: usize,
    /// Longest ladder found, at most `max_k`.
    pub longest: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: String,
    pub pieces: Vec<PieceReport>,
    pub witness: Option<WitnessReport>,
    pub checks: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

impl Report {
    pub fn checks_passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    pub fn exit_code(&self) -> i32 {
        if !self.checks_passed() {
            EXIT_VERIFY
        } else if self.verdict == "stable" {
            EXIT_STABLE
        } else {
            EXIT_UNSTABLE
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub verify: bool,
    pub seed: u64,
}

pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

pub fn load(path: &Path) -> Result<Problem, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Syntax {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    halfgraph_core::parse(&text)
}

fn piece_report(p: &SpecialStablePiece, vars: &[String]) -> PieceReport {
    PieceReport {
        z: p.z.to_formula(vars).to_string(),
        w: p.w.to_formula(vars).to_string(),
        x: p.x.to_formula().to_string(),
        y: p.y.to_formula().to_string(),
    }
}

fn witness_report(w: &LadderWitness) -> WitnessReport {
    let rows = |pts: &[Vec<Rational>]| pts.iter().map(|p| p.iter().map(render).collect()).collect();
    WitnessReport {
        k: w.k(),
        a: rows(&w.a),
        b: rows(&w.b),
    }
}

fn facet_text(c: &Culprit, vars: &[String]) -> String {
    let e = c.facet.hyperplane.expr();
    Atom::from_term(e.to_term(vars), Relation::Eq).to_string()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::from_ratio(rng.gen_range(-12..=12), rng.gen_range(1..=3)))
        .collect()
}

/// Independent checks of a stable verdict: the decomposition report plus
/// agreement of `d` and the union at seeded random points.
pub fn verify_stable(
    d: &SemilinearSet,
    pieces: &[SpecialStablePiece],
    partition: &Partition,
    seed: u64,
) -> Result<BTreeMap<String, bool>, Error> {
    let r = verify_decomposition(d, pieces, partition)?;
    let union = union_of(pieces, &partition.variables())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spot = (0..SPOT_POINTS).all(|_| {
        let p = random_point(&mut rng, partition.len());
        d.contains(&p) == union.contains(&p)
    });
    Ok(BTreeMap::from([
        ("decomposition_union".to_string(), r.union_equivalent),
        ("decomposition_special".to_string(), r.special_stable),
        ("decomposition_inside".to_string(), r.pieces_inside),
        ("spot_points".to_string(), spot),
    ]))
}

pub fn verify_unstable(
    d: &SemilinearSet,
    partition: &Partition,
    culprit: &Culprit,
    extra: Option<usize>,
) -> Result<BTreeMap<String, bool>, Error> {
    let mut lengths = VERIFY_LENGTHS.to_vec();
    lengths.extend(extra);
    lengths.sort_unstable();
    lengths.dedup();
    let mut out = BTreeMap::new();
    for k in lengths {
        out.insert(
            format!("ladder_k{k}"),
            verify_ladder(d, partition, &culprit.witness(k)?)?,
        );
    }
    Ok(out)
}

/// Classifies the problem; unstable verdicts carry a ladder of length
/// `witness_len`.
pub fn check(problem: &Problem, witness_len: usize, opts: Options) -> Result<Report, Error> {
    let d = eliminate_quantifiers(problem)?;
    let vars = problem.partition.variables();
    let (verdict, _) = analyze_set(&d, &problem.partition, problem.theory)?;
    Ok(match verdict {
        StabilityVerdict::Stable(pieces) => Report {
            verdict: "stable".into(),
            pieces: pieces.iter().map(|p| piece_report(p, &vars)).collect(),
            witness: None,
            checks: if opts.verify {
                verify_stable(&d, &pieces, &problem.partition, opts.seed)?
            } else {
                BTreeMap::new()
            },
            facet: None,
            oracle: None,
        },
        StabilityVerdict::Unstable(c) => Report {
            verdict: "unstable".into(),
            pieces: Vec::new(),
            witness: Some(witness_report(&c.witness(witness_len)?)),
            checks: if opts.verify {
                verify_unstable(&d, &problem.partition, &c, Some(witness_len))?
            } else {
                BTreeMap::new()
            },
            facet: Some(facet_text(&c, &vars)),
            oracle: None,
        },
    })
}

/// Brute-force search for ladders of length `1..=max_k`, independent of
/// the classification.
pub fn oracle(problem: &Problem, max_k: usize, budget: usize, opts: Options) -> Result<Report, Error> {
    let d = eliminate_quantifiers(problem)?;
    let mut longest = None;
    for k in 1..=max_k {
        match ladder_exists(&d, &problem.partition, k, budget)? {
            Some(w) => longest = Some(w),
            None => break,
        }
    }
    let found = longest.as_ref().map_or(0, |w| w.k());
    let mut checks = BTreeMap::new();
    if opts.verify {
        if let Some(w) = &longest {
            checks.insert("oracle_ladder".to_string(), verify_ladder(&d, &problem.partition, w)?);
        }
    }
    Ok(Report {
        verdict: if found == max_k && max_k > 0 {
            "unstable"
        } else {
            "stable"
        }
        .into(),
        pieces: Vec::new(),
        witness: longest.as_ref().map(witness_report),
        checks,
        facet: None,
        oracle: Some(OracleReport { max_k, longest: found }),
    })
}

pub fn render_human(report: &Report, detailed: bool) -> String {
    let mut s = String::new();
    match &report.facet {
        Some(f) => writeln!(s, "verdict: {} (facet {f})", report.verdict).unwrap(),
        None if report.oracle.is_none() => {
            let n = report.pieces.len();
            writeln!(
                s,
                "verdict: {} ({n} piece{})",
                report.verdict,
                if n == 1 { "" } else { "s" }
            )
            .unwrap()
        }
        None => writeln!(s, "verdict: {}", report.verdict).unwrap(),
    }
    if let Some(o) = &report.oracle {
        writeln!(s, "longest ladder: {} (searched up to {})", o.longest, o.max_k).unwrap();
    }
    if detailed {
        for (i, p) in report.pieces.iter().enumerate() {
            writeln!(
                s,
                "piece {}:\n  Z = {}\n  W = {}\n  X = {}\n  Y = {}",
                i + 1,
                p.z,
                p.w,
                p.x,
                p.y
            )
            .unwrap();
        }
        if let Some(w) = &report.witness {
            let tuple = |v: &Vec<String>| format!("({})", v.join(", "));
            for i in 0..w.k {
                writeln!(s, "a_{} = {}  b_{} = {}", i + 1, tuple(&w.a[i]), i + 1, tuple(&w.b[i])).unwrap();
            }
        }
    }
    for (name, ok) in &report.checks {
        writeln!(s, "check {name}: {}", if *ok { "pass" } else { "FAIL" }).unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub file: String,
    pub expected: Option<String>,
    pub report: Option<Report>,
    pub error: Option<String>,
}

impl CorpusEntry {
    pub fn passed(&self) -> bool {
        match &self.report {
            Some(r) => r.checks_passed() && self.expected.as_ref().is_none_or(|e| *e == r.verdict),
            None => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub entries: Vec<CorpusEntry>,
    pub passed: bool,
}

impl CorpusReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else if self.entries.iter().any(|e| e.error.is_some()) {
            EXIT_INPUT
        } else {
            EXIT_VERIFY
        }
    }
}

/// Reads `name verdict` lines; `#` starts a comment and further columns
/// are ignored.
pub fn read_manifest(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            Some((it.next()?.to_string(), it.next()?.to_string()))
        })
        .collect()
}

/// Checks every `*.problem` file in `dir` (sorted by name) and compares
/// against `expected.txt` when present.
pub fn corpus(dir: &Path, opts: Options, parallel: bool) -> Result<CorpusReport, Error> {
    let io = |e: std::io::Error| Error::Syntax {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", dir.display()),
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "problem"))
        .collect();
    files.sort();
    let manifest = std::fs::read_to_string(dir.join("expected.txt"))
        .map(|t| read_manifest(&t))
        .unwrap_or_default();
    let run = |path: &PathBuf| -> CorpusEntry {
        let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        let result = load(path).and_then(|p| check(&p, 3, opts));
        let (report, error) = match result {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        CorpusEntry {
            expected: manifest.get(&stem).cloned(),
            file: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
            report,
            error,
        }
    };
    let entries: Vec<CorpusEntry> = if parallel {
        files.par_iter().map(run).collect()
    } else {
        files.iter().map(run).collect()
    };
    let passed = entries.iter().all(CorpusEntry::passed);
    Ok(CorpusReport { entries, passed })
}
