//! Command-line front end: `analyze`, `compare` and `generate`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::domain::DiscAutomorphism;
use crate::error::GammaError;
use crate::fundamental::{check_pf_intertwining, solve_fundamental};
use crate::invariant::{search_witness, verify_equivalence, SearchOutcome, Verdict, Witness};
use crate::io::{
    poly_terms, read_text, to_json_matrix, ComparisonBlock, FundamentalBlock, InputSummary, Metadata, ModelBlock,
    PairFile, PairSummary, ProbeBlock, Report, ScreenBlock, TransportBlock, WitnessFile,
};
use crate::mobius::transport_crosscheck;
use crate::model::{build_model, key_identity, Truncation};
use crate::pair::{is_pure, random_gamma_unitary, random_pure_gamma, vn_probe, GammaPair};
use crate::scalar::c;

pub const SEED_ENV: &str = "GAMMAOPS_SEED";
pub const DEFAULT_SEED: u64 = 1;

pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const NOT_GAMMA: i32 = 2;
    pub const BREACH: i32 = 3;
    pub const NOT_EQUIVALENT: i32 = 4;
    pub const INCONCLUSIVE: i32 = 5;
    pub const NOT_PURE: i32 = 6;
}

const FUNDAMENTAL_TOL: f64 = 1e-9;
const PF_TOL: f64 = 1e-8;
const NUMRAD_SLACK: f64 = 1e-8;
const MODEL_TOL: f64 = 1e-7;

#[derive(Debug, Parser)]
#[command(name = "gammaops", version, about = "Diagnostics for commuting operator pairs (S, P)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncArg {
    Auto,
    Fixed(usize),
}

fn parse_trunc(s: &str) -> Result<TruncArg, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TruncArg::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(TruncArg::Fixed(n)),
        _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
    }
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    match nums {
        Ok(v) if v.len() == 1 => Ok([v[0], 0.0]),
        Ok(v) if v.len() == 2 => Ok([v[0], v[1]]),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Symmetrized,
    GammaUnitary,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a pair, solve for its fundamental operators and verify the functional model.
    Analyze {
        input: PathBuf,
        /// Truncation degree of the model, or `auto`.
        #[arg(long, default_value = "auto", value_parser = parse_trunc)]
        trunc: TruncArg,
        /// Random polynomials tried by the von Neumann probe.
        #[arg(long = "vn-trials", default_value_t = 50)]
        vn_trials: usize,
        /// Maximum total degree of probe polynomials.
        #[arg(long = "vn-degree", default_value_t = 4)]
        vn_degree: usize,
        /// Also transport the pair by the disc automorphism with this `a` (`re,im`).
        #[arg(long, value_parser = parse_point)]
        transport: Option<[f64; 2]>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decide unitary equivalence of two pure pairs.
    Compare {
        input_a: PathBuf,
        input_b: PathBuf,
        /// Witness file to verify.
        #[arg(long, conflicts_with = "search")]
        witness: Option<PathBuf>,
        /// Number of search restarts.
        #[arg(long)]
        search: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write a random pair file.
    Generate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "symmetrized")]
        kind: Kind,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Explicit flag, then `GAMMAOPS_SEED`, then the built-in default.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("{SEED_ENV}: expected an unsigned integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

struct Loaded {
    pair: Result<GammaPair<f64>, GammaError>,
    summary_input: InputSummary,
}

fn load_pair(path: &Path) -> Result<Loaded, String> {
    let text = read_text(path).map_err(|e| e.to_string())?;
    let pf = PairFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let (s, p) = pf.matrices().map_err(|e| format!("{}: {e}", path.display()))?;
    let meta = pf.metadata.unwrap_or_default();
    Ok(Loaded {
        summary_input: InputSummary {
            path: path.display().to_string(),
            dim: s.nrows(),
            label: meta.label,
            seed: meta.seed,
        },
        pair: GammaPair::validate(s, p),
    })
}

fn summarize(pair: &GammaPair<f64>, input: InputSummary) -> PairSummary {
    PairSummary {
        input,
        flags: pair.flags,
        norm_s: pair.norm_s,
        norm_p: pair.norm_p,
        commutator: pair.commutator,
        spectral_radius_p: pair.spectral_radius_p,
        joint_spectrum: pair
            .joint_spectrum
            .iter()
            .map(|pt| [[pt.s.re, pt.s.im], [pt.p.re, pt.p.im]])
            .collect(),
    }
}

fn emit(report: &Report, json: Option<&Path>) -> i32 {
    let text = report.to_json();
    match json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return exit::INPUT;
            }
            eprintln!("{}: {}", report.command, report.verdict);
        }
        None => print!("{text}"),
    }
    report.exit_code
}

fn input_failure(report: &mut Report, msg: String) -> i32 {
    eprintln!("error: {msg}");
    report.diagnostics.push(msg);
    report.verdict = "MALFORMED_INPUT";
    report.exit_code = exit::INPUT;
    exit::INPUT
}

/// Runs `analyze` and returns the report; the exit code is `report.exit_code`.
pub fn analyze_report(
    input: &Path,
    trunc: TruncArg,
    vn_trials: usize,
    vn_degree: usize,
    transport: Option<[f64; 2]>,
    seed: u64,
) -> Report {
    let start = Instant::now();
    let mut report = Report::new("analyze");
    let loaded = match load_pair(input) {
        Ok(l) => l,
        Err(msg) => {
            input_failure(&mut report, msg);
            return report;
        }
    };
    let pair = match loaded.pair {
        Ok(p) => p,
        Err(GammaError::NotCommuting { defect, tol }) => {
            report
                .diagnostics
                .push(format!("S and P do not commute: ‖SP − PS‖ = {defect:.3e} > {tol:.1e}"));
            report.verdict = "NOT_GAMMA_CONTRACTION";
            report.exit_code = exit::NOT_GAMMA;
            return report;
        }
        Err(e) => {
            input_failure(&mut report, format!("{}: {e}", input.display()));
            return report;
        }
    };
    report.elapsed_ms.insert("validate", ms(start));

    let t = Instant::now();
    let probe = vn_probe(&pair, vn_trials, vn_degree, seed);
    let pair = pair.with_probe(&probe);
    report.probe = Some(ProbeBlock {
        trials: probe.trials,
        max_degree: vn_degree,
        seed,
        worst_ratio: probe.worst_ratio,
        certified_non_gamma: probe.certified_non_gamma,
        certificate: probe.certified_non_gamma.then(|| poly_terms(&probe.worst_poly)),
    });
    report.elapsed_ms.insert("vn_probe", ms(t));
    report.pairs.push(summarize(&pair, loaded.summary_input));

    let mut not_gamma = !pair.passes_necessary() || probe.certified_non_gamma;
    let mut breach = false;
    let f = pair.flags;
    for (ok, msg) in [
        (f.contraction, "‖P‖ > 1"),
        (f.s_bounded, "‖S‖ > 2"),
        (f.spectrum_in_gamma, "joint spectrum leaves Γ"),
        (!probe.certified_non_gamma, "von Neumann probe found a polynomial certificate"),
    ] {
        if !ok {
            report.diagnostics.push(msg.into());
        }
    }

    if f.contraction {
        let t = Instant::now();
        match solve_fundamental(&pair) {
            Ok(fp) => {
                let scale = 1.0 + pair.norm_s;
                let pf_res = check_pf_intertwining(&pair, &fp);
                let key = key_identity(&pair, &fp);
                if !fp.within(&pair, FUNDAMENTAL_TOL) {
                    breach = true;
                    report.diagnostics.push(format!(
                        "fundamental equation residuals {:.3e}, {:.3e} exceed {:.1e}",
                        fp.residual_f,
                        fp.residual_f_star,
                        FUNDAMENTAL_TOL * scale
                    ));
                }
                if fp.w_f > 1.0 + NUMRAD_SLACK || fp.w_f_star > 1.0 + NUMRAD_SLACK {
                    not_gamma = true;
                    report.diagnostics.push(format!(
                        "numerical radii {:.6}, {:.6} exceed 1",
                        fp.w_f, fp.w_f_star
                    ));
                }
                if pf_res > PF_TOL * scale {
                    breach = true;
                    report
                        .diagnostics
                        .push(format!("PF − F_*^*P residual {pf_res:.3e} exceeds {:.1e}", PF_TOL * scale));
                }
                if key > FUNDAMENTAL_TOL * scale {
                    breach = true;
                    report.diagnostics.push(format!("key identity residual {key:.3e}"));
                }
                report.fundamental = Some(FundamentalBlock {
                    f: to_json_matrix(&fp.f),
                    f_star: to_json_matrix(&fp.f_star),
                    defect_rank: fp.defect_p.rank(),
                    defect_rank_star: fp.defect_p_star.rank(),
                    residual_f: fp.residual_f,
                    residual_f_star: fp.residual_f_star,
                    numerical_radius_f: fp.w_f,
                    numerical_radius_f_star: fp.w_f_star,
                    intertwining_residual: pf_res,
                    key_identity_residual: key,
                });
            }
            Err(e) => {
                breach = true;
                report.diagnostics.push(format!("fundamental solve failed: {e}"));
            }
        }
        report.elapsed_ms.insert("fundamental", ms(t));
    }

    if !not_gamma && is_pure(pair.p()) {
        let t = Instant::now();
        let tr = match trunc {
            TruncArg::Auto => Truncation::Auto,
            TruncArg::Fixed(n) => Truncation::Fixed(n),
        };
        match build_model(&pair, tr) {
            Ok(md) => {
                let worst = md.max_residual();
                if worst > MODEL_TOL {
                    breach = true;
                    report
                        .diagnostics
                        .push(format!("model residual {worst:.3e} exceeds {MODEL_TOL:.1e}"));
                }
                report.model = Some(ModelBlock {
                    n_trunc: md.n_trunc,
                    tail: md.tail,
                    residuals: md.residuals.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                });
            }
            Err(e) => {
                breach = true;
                report.diagnostics.push(format!("model construction failed: {e}"));
            }
        }
        report.elapsed_ms.insert("model", ms(t));
    } else if !not_gamma {
        report.diagnostics.push("P is not pure; functional model skipped".into());
    }

    if let Some(a) = transport {
        if !not_gamma {
            let t = Instant::now();
            let a = c(a[0], a[1]);
            match DiscAutomorphism::new(a, c(1.0, 0.0)).and_then(|m| transport_crosscheck(&pair, &m)) {
                Ok(tr) => {
                    report.transport = Some(TransportBlock {
                        a: [a.re, a.im],
                        beta: [1.0, 0.0],
                        resolvent_condition: tr.cond_resolvent,
                        crosscheck_residual: tr.crosscheck_residual,
                        gram_residual: tr.gram_residual,
                        unitarity_defect: tr.unitarity_defect,
                        f_tau: to_json_matrix(&tr.f_tau_direct),
                    });
                }
                Err(e) => report.diagnostics.push(format!("transport failed: {e}")),
            }
            report.elapsed_ms.insert("transport", ms(t));
        }
    }

    let (verdict, code) = if not_gamma {
        ("NOT_GAMMA_CONTRACTION", exit::NOT_GAMMA)
    } else if breach {
        ("CONTRACT_BREACH", exit::BREACH)
    } else {
        ("CONTRACTS_MET", exit::OK)
    };
    report.verdict = verdict;
    report.exit_code = code;
    report.elapsed_ms.insert("total", ms(start));
    report
}

fn screen_block(sc: &crate::invariant::TraceScreen) -> ScreenBlock {
    ScreenBlock {
        passed: sc.passed,
        words_checked: sc.words_checked,
        worst_relative_difference: sc.worst,
        failing_word: sc.failing_word.clone(),
    }
}

/// Runs `compare`; `--search` defaults to 20 restarts when no witness is given.
pub fn compare_report(a: &Path, b: &Path, witness: Option<&Path>, search: Option<usize>, seed: u64) -> Report {
    let start = Instant::now();
    let mut report = Report::new("compare");
    let mut pairs = Vec::new();
    for path in [a, b] {
        let loaded = match load_pair(path) {
            Ok(l) => l,
            Err(msg) => {
                input_failure(&mut report, msg);
                return report;
            }
        };
        match loaded.pair {
            Ok(p) => {
                report.pairs.push(summarize(&p, loaded.summary_input));
                pairs.push(p);
            }
            Err(GammaError::DimensionMismatch(m)) => {
                input_failure(&mut report, format!("{}: {m}", path.display()));
                return report;
            }
            Err(e) => {
                report.diagnostics.push(format!("{}: {e}", path.display()));
                report.verdict = "NOT_PURE";
                report.exit_code = exit::NOT_PURE;
                return report;
            }
        }
    }
    let (pa, pb) = (&pairs[0], &pairs[1]);
    for (p, path) in [(pa, a), (pb, b)] {
        if !is_pure(p.p()) || !p.passes_necessary() {
            report.diagnostics.push(format!(
                "{}: not a pure Γ-contraction (spectral radius of P {:.6})",
                path.display(),
                p.spectral_radius_p
            ));
            report.verdict = "NOT_PURE";
            report.exit_code = exit::NOT_PURE;
            return report;
        }
    }
    if pa.dim() != pb.dim() {
        report.comparison = Some(ComparisonBlock {
            verdict: Verdict::NotEquivalent.as_str(),
            note: format!("dimensions differ: {} vs {}", pa.dim(), pb.dim()),
            witness_source: "none".into(),
            screen: None,
            residuals: BTreeMap::new(),
            witness: None,
        });
        report.verdict = Verdict::NotEquivalent.as_str();
        report.exit_code = exit::NOT_EQUIVALENT;
        return report;
    }

    let block = match witness {
        Some(wpath) => {
            let w = match read_text(wpath)
                .map_err(|e| e.to_string())
                .and_then(|t| WitnessFile::parse(&t).map_err(|e| format!("{}: {e}", wpath.display())))
                .and_then(|wf| wf.witness().map_err(|e| format!("{}: {e}", wpath.display())))
            {
                Ok(w) => w,
                Err(msg) => {
                    input_failure(&mut report, msg);
                    return report;
                }
            };
            verify_block(pa, pb, &w, wpath.display().to_string(), &mut report)
        }
        None => {
            let restarts = search.unwrap_or(20);
            match search_witness(pa, pb, restarts, seed) {
                Ok(SearchOutcome::Found { witness, report: rep, restart }) => ComparisonBlock {
                    verdict: rep.verdict.as_str(),
                    note: rep.note.into(),
                    witness_source: format!("search (restart {restart} of {restarts}, seed {seed})"),
                    screen: Some(screen_block(&rep.screen)),
                    residuals: rep.residuals.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                    witness: Some(WitnessFile::from_witness(&witness)),
                },
                Ok(SearchOutcome::Screened(sc)) => ComparisonBlock {
                    verdict: Verdict::NotEquivalent.as_str(),
                    note: "trace screen failed".into(),
                    witness_source: "none".into(),
                    screen: Some(screen_block(&sc)),
                    residuals: BTreeMap::new(),
                    witness: None,
                },
                Ok(SearchOutcome::NotFound { best_residual, .. }) => {
                    let mut residuals = BTreeMap::new();
                    residuals.insert("best_intertwining".to_string(), best_residual);
                    ComparisonBlock {
                        verdict: Verdict::Inconclusive.as_str(),
                        note: "no verified witness found".into(),
                        witness_source: format!("search ({restarts} restarts, seed {seed})"),
                        screen: None,
                        residuals,
                        witness: None,
                    }
                }
                Err(e) => error_block(e, &mut report),
            }
        }
    };
    report.verdict = block.verdict;
    report.exit_code = match block.verdict {
        "EQUIVALENT" => exit::OK,
        "NOT_EQUIVALENT" => exit::NOT_EQUIVALENT,
        "NOT_PURE" => exit::NOT_PURE,
        "MALFORMED_INPUT" => exit::INPUT,
        _ => exit::INCONCLUSIVE,
    };
    report.comparison = Some(block);
    report.elapsed_ms.insert("total", ms(start));
    report
}

fn error_block(e: GammaError, report: &mut Report) -> ComparisonBlock {
    let verdict = match e {
        GammaError::NotPure { .. } => "NOT_PURE",
        GammaError::DefectRankMismatch { .. } => Verdict::NotEquivalent.as_str(),
        GammaError::DimensionMismatch(_) => "MALFORMED_INPUT",
        _ => Verdict::Inconclusive.as_str(),
    };
    report.diagnostics.push(e.to_string());
    ComparisonBlock {
        verdict,
        note: e.to_string(),
        witness_source: "none".into(),
        screen: None,
        residuals: BTreeMap::new(),
        witness: None,
    }
}

fn verify_block(
    a: &GammaPair<f64>,
    b: &GammaPair<f64>,
    w: &Witness<f64>,
    source: String,
    report: &mut Report,
) -> ComparisonBlock {
    match verify_equivalence(a, b, w) {
        Ok(rep) => {
            ComparisonBlock {
                verdict: rep.verdict.as_str(),
                note: rep.note.into(),
                witness_source: source,
                screen: Some(screen_block(&rep.screen)),
                residuals: rep.residuals.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                witness: None,
            }
        }
        Err(e) => error_block(e, report),
    }
}

/// The pair file written by `generate`.
pub fn generate_file(dim: usize, seed: u64, kind: Kind) -> PairFile {
    let (pair, name) = match kind {
        Kind::Symmetrized => (random_pure_gamma::<f64>(dim, seed), "symmetrized"),
        Kind::GammaUnitary => (random_gamma_unitary::<f64>(dim, seed), "gamma-unitary"),
    };
    PairFile::new(
        pair.s(),
        pair.p(),
        Some(Metadata {
            label: Some(format!("{name} n={dim}")),
            seed: Some(seed),
        }),
    )
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Analyze {
            input,
            trunc,
            vn_trials,
            vn_degree,
            transport,
            json,
            seed,
        } => {
            let seed = match resolve_seed(seed) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit::INPUT;
                }
            };
            let report = analyze_report(&input, trunc, vn_trials, vn_degree, transport, seed);
            emit(&report, json.as_deref())
        }
        Command::Compare {
            input_a,
            input_b,
            witness,
            search,
            json,
            seed,
        } => {
            let seed = match resolve_seed(seed) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit::INPUT;
                }
            };
            let report = compare_report(&input_a, &input_b, witness.as_deref(), search, seed);
            emit(&report, json.as_deref())
        }
        Command::Generate { dim, seed, kind, out } => {
            if dim == 0 {
                eprintln!("error: --dim must be at least 1");
                return exit::INPUT;
            }
            let seed = match resolve_seed(seed) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit::INPUT;
                }
            };
            let text = generate_file(dim, seed, kind).to_json();
            match out {
                Some(path) => match std::fs::write(&path, text) {
                    Ok(()) => exit::OK,
                    Err(e) => {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        exit::INPUT
                    }
                },
                None => {
                    print!("{text}");
                    exit::OK
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{classify_point, SymPoint};
    use crate::pair::is_gamma_unitary;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn scalar_file(s: f64, p: f64) -> String {
        format!(r#"{{"schema_version":"1","S":[[[{s},0]]],"P":[[[{p},0]]]}}"#)
    }

    #[test]
    fn trunc_and_point_parsing() {
        assert_eq!(parse_trunc("auto"), Ok(TruncArg::Auto));
        assert_eq!(parse_trunc("12"), Ok(TruncArg::Fixed(12)));
        assert!(parse_trunc("0").is_err());
        assert_eq!(parse_point("0.5,-0.25"), Ok([0.5, -0.25]));
        assert_eq!(parse_point("0.3"), Ok([0.3, 0.0]));
        assert!(parse_point("a,b").is_err());
    }

    #[test]
    fn zero_and_scalar_analyze() {
        let dir = tempfile::tempdir().unwrap();
        let zero = write(dir.path(), "z.json", &scalar_file(0.0, 0.0));
        let rep = analyze_report(&zero, TruncArg::Auto, 10, 3, None, 1);
        assert_eq!(rep.exit_code, exit::OK, "{:?}", rep.diagnostics);
        let f = &rep.fundamental.as_ref().unwrap().f;
        assert_eq!(f, &vec![vec![[0.0, 0.0]]]);

        let bad = write(dir.path(), "b.json", &scalar_file(3.0, 1.0));
        let rep = analyze_report(&bad, TruncArg::Auto, 10, 3, None, 1);
        assert_eq!(rep.exit_code, exit::NOT_GAMMA);
        let probe = rep.probe.unwrap();
        assert!(probe.worst_ratio >= 1.5 - 1e-9, "{}", probe.worst_ratio);
        assert!(probe.certificate.is_some());
    }

    #[test]
    fn non_commuting_pair_is_not_gamma() {
        let dir = tempfile::tempdir().unwrap();
        let text = r#"{"schema_version":"1","S":[[[0,0],[1,0]],[[0,0],[0,0]]],"P":[[[0.5,0],[0,0]],[[0,0],[0,0]]]}"#;
        let path = write(dir.path(), "nc.json", text);
        assert_eq!(analyze_report(&path, TruncArg::Auto, 5, 2, None, 1).exit_code, exit::NOT_GAMMA);
    }

    #[test]
    fn generated_pairs_analyze_cleanly() {
        let dir = tempfile::tempdir().unwrap();
        let pf = generate_file(6, 3, Kind::Symmetrized);
        let path = write(dir.path(), "g.json", &pf.to_json());
        let rep = analyze_report(&path, TruncArg::Auto, 10, 3, Some([0.3, -0.2]), 3);
        assert_eq!(rep.exit_code, exit::OK, "{:?}", rep.diagnostics);
        for v in rep.model.as_ref().unwrap().residuals.values() {
            assert!(*v <= 1e-7);
        }
        assert!(rep.transport.unwrap().crosscheck_residual <= 1e-7);
    }

    #[test]
    fn generate_examples() {
        let pf = generate_file(1, 7, Kind::Symmetrized);
        let (s, p) = pf.matrices().unwrap();
        assert!(classify_point(SymPoint::new(s[(0, 0)], p[(0, 0)]), 1e-9).in_gamma());
        assert_eq!(pf.to_json(), generate_file(1, 7, Kind::Symmetrized).to_json());
        let pf = generate_file(3, 7, Kind::GammaUnitary);
        let (s, p) = pf.matrices().unwrap();
        assert!(is_gamma_unitary(&GammaPair::validate(s, p).unwrap(), 1e-9));
    }

    #[test]
    fn compare_examples() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.json", &generate_file(4, 11, Kind::Symmetrized).to_json());
        assert_eq!(compare_report(&a, &a, None, Some(3), 1).exit_code, exit::OK);
        let x = write(dir.path(), "x.json", &scalar_file(1.0, 0.25));
        let y = write(dir.path(), "y.json", &scalar_file(1.0, 0.5));
        let rep = compare_report(&x, &y, None, Some(5), 1);
        assert_eq!(rep.exit_code, exit::NOT_EQUIVALENT);
        assert!(!rep.comparison.unwrap().screen.unwrap().passed);
        let u = write(dir.path(), "u.json", &generate_file(2, 1, Kind::GammaUnitary).to_json());
        assert_eq!(compare_report(&a, &u, None, None, 1).exit_code, exit::NOT_PURE);
        let w = write(dir.path(), "w.json", "{\"schema_version\":\"1\"}");
        assert_eq!(compare_report(&a, &a, Some(&w), None, 1).exit_code, exit::INPUT);
    }

    #[test]
    fn witness_files_are_verified() {
        let dir = tempfile::tempdir().unwrap();
        let pair = random_pure_gamma::<f64>(3, 2);
        let a = write(dir.path(), "a.json", &PairFile::new(pair.s(), pair.p(), None).to_json());
        let w = Witness::identity_for(&pair).unwrap();
        let text = serde_json::to_string(&WitnessFile::from_witness(&w)).unwrap();
        let wp = write(dir.path(), "w.json", &text);
        let rep = compare_report(&a, &a, Some(&wp), None, 1);
        assert_eq!(rep.exit_code, exit::OK, "{:?}", rep.comparison);
    }
}
