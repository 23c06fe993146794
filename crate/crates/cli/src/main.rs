//! Command-line front end for the differential engine.
//!
//! Exit codes: 0 on success or an all-pass law suite, 1 when a law suite
//! reports failures (the report is still emitted), 2 on usage or parse
//! errors.

use cdk_core::diffop::{d, d_partial, partial_derivative};
use cdk_core::harness::pipeline::{run_full_pipeline, PipelineConfig};
use cdk_core::harness::report::CheckReport;
use cdk_core::harness::suite::{run_cd_suite, CdSuiteConfig, SmoothCat};
use cdk_core::kleisli::{check_abstract, check_kd, check_kleisli_category, Kleisli};
use cdk_core::monads::{
    check_cartesian_k_linear, check_cdm, check_monad_laws, constant_monad, identity_monad,
    tangent_monad, Cdm, MonadCheckConfig, MonadSpec,
};
use cdk_core::seeding::subseed;
use cdk_core::text::{parse_map, print_map};
use cdk_core::vfields::{vf_compose, GenVectorField};
use cdk_core::{EqPolicy, Scalar, Side, SmoothMap};
use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "cdk",
    about = "Symbolic derivatives and law suites over a smooth-map calculus",
    after_help = "Maps use the grammar: map (params) -> tuple, for example\n  \
                  cdk diff \"map (x, y) -> (x*y, sin(x))\"\n  \
                  cdk check all --monad tangent --seed 42 --json"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Total derivative: for f : A -> B prints d(f) : A x A -> B
    Diff { map: String },
    /// Componentwise partial derivative with respect to one coordinate
    PartialDiff {
        #[arg(long)]
        coord: usize,
        map: String,
    },
    /// Partial derivative combinator of the simple slice over the left
    /// factor of the domain: f : C x A -> B gives C x (A x A) -> B
    SliceDiff { map: String },
    /// Composition G . F (F applied first)
    Compose { f: String, g: String },
    /// Evaluate a map at a point
    Eval {
        map: String,
        /// Comma-separated coordinates, rationals in exact mode
        #[arg(long)]
        at: String,
        #[arg(long)]
        exact: bool,
    },
    /// Compose generalized vector fields: G . F (F applied first)
    VfCompose { f: String, g: String },
    /// Run law suites
    Check {
        target: CheckTarget,
        #[arg(long, value_enum, default_value_t = MonadName::Tangent)]
        monad: MonadName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        trials: u32,
        /// Restrict to exact polynomial passes
        #[arg(long)]
        exact: bool,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Absolute and relative tolerance for sampled comparisons
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Run the base-category suite against a deliberately corrupted
        /// handle instead of the honest one (cdc target only); the suite
        /// must flag the corruption
        #[arg(long, value_enum)]
        mutate: Option<MutantName>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantName {
    AffineShift,
    TangentSquare,
    ZeroDerivative,
    DoubleOnWideCodomains,
    InnerCube,
    OnesForZero,
    ConformalScale,
}

impl MutantName {
    fn build(self) -> cdk_core::harness::mutants::CdMutant {
        use cdk_core::harness::mutants::CdMutant;
        match self {
            MutantName::AffineShift => CdMutant::AffineShift,
            MutantName::TangentSquare => CdMutant::TangentSquare,
            MutantName::ZeroDerivative => CdMutant::ZeroDerivative,
            MutantName::DoubleOnWideCodomains => CdMutant::DoubleOnWideCodomains,
            MutantName::InnerCube => CdMutant::InnerCube,
            MutantName::OnesForZero => CdMutant::OnesForZero,
            MutantName::ConformalScale => CdMutant::ConformalScale,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckTarget {
    /// Differential-combinator axioms on the base category
    Cdc,
    /// Monad laws, k-linear structure, and differential compatibility
    Monad,
    /// Kleisli category laws and the lifted combinator axioms
    Kleisli,
    /// Thunk-force structure of the Kleisli category
    Abstract,
    /// Direct Kleisli derivative combinator axioms
    Kd,
    /// Algebras and the lifted tangent structure
    Em,
    /// The full staged pipeline
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MonadName {
    Identity,
    Constant,
    Tangent,
}

impl MonadName {
    fn build(self) -> Arc<MonadSpec> {
        match self {
            MonadName::Identity => identity_monad(),
            MonadName::Constant => constant_monad(),
            MonadName::Tangent => tangent_monad(),
        }
    }
}

// Writing to a closed pipe (for example into `head`) must not panic.
fn emit(text: impl AsRef<str>) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{}", text.as_ref());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Diff { map } => {
            let f = parse_map(&map).map_err(|e| e.to_string())?;
            emit(print_map(&d(&f)));
            Ok(ExitCode::SUCCESS)
        }
        Command::PartialDiff { coord, map } => {
            let f = parse_map(&map).map_err(|e| e.to_string())?;
            let df = partial_derivative(&f, coord).map_err(|e| e.to_string())?;
            emit(print_map(&df));
            Ok(ExitCode::SUCCESS)
        }
        Command::SliceDiff { map } => {
            let f = parse_map(&map).map_err(|e| e.to_string())?;
            let context = match f.dom().split() {
                Some((c, _)) => c.clone(),
                None => {
                    return Err(format!(
                        "slice-diff needs a product domain C x A, found {}",
                        f.dom()
                    ))
                }
            };
            let df = d_partial(&context, &f).map_err(|e| e.to_string())?;
            emit(print_map(&df));
            Ok(ExitCode::SUCCESS)
        }
        Command::Compose { f, g } => {
            let fm = parse_map(&f).map_err(|e| e.to_string())?;
            let gm = parse_map(&g).map_err(|e| e.to_string())?;
            let composed = SmoothMap::compose(&gm, &fm).map_err(|e| e.to_string())?;
            emit(print_map(&composed));
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { map, at, exact } => {
            let f = parse_map(&map).map_err(|e| e.to_string())?;
            if exact {
                let point = parse_rational_point(&at)?;
                let values = f.eval_exact(&point).map_err(|e| e.to_string())?;
                emit(format!("({})", join(values.iter().map(|v| v.to_string()))));
            } else {
                let point = parse_float_point(&at)?;
                let values = f.eval(&point).map_err(|e| e.to_string())?;
                emit(format!("({})", join(values.iter().map(|v| format!("{v}")))));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VfCompose { f, g } => {
            let ff = parse_field(&f)?;
            let gf = parse_field(&g)?;
            let composed = vf_compose(&gf, &ff).map_err(|e| e.to_string())?;
            let carrier =
                SmoothMap::pair(composed.base(), composed.tangent()).map_err(|e| e.to_string())?;
            emit(print_map(&carrier.normalized()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            target,
            monad,
            seed,
            trials,
            exact,
            json,
            tol,
            mutate,
        } => {
            if tol <= 0.0 {
                return Err("--tol must be positive".to_string());
            }
            if mutate.is_some() && !matches!(target, CheckTarget::Cdc) {
                return Err("--mutate only applies to the cdc target".to_string());
            }
            let report = run_check(target, monad.build(), seed, trials, exact, tol, mutate)?;
            if json {
                emit(report.to_json());
            } else {
                print_human(&report);
            }
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn run_check(
    target: CheckTarget,
    monad: Arc<MonadSpec>,
    seed: u64,
    trials: u32,
    exact_only: bool,
    tol: f64,
    mutate: Option<MutantName>,
) -> Result<CheckReport, String> {
    let stage_cfg = |tag: u64| MonadCheckConfig::with_trials(subseed(seed, tag), trials);
    let sampled_policy = EqPolicy::sampled_with_tol(subseed(seed, 0xE), tol);
    let cd_pair = |cat_exact: CheckReport, cat_sampled: Option<CheckReport>, name: &str| {
        let mut parts = vec![CheckReport {
            suite: "exact".into(),
            ..cat_exact
        }];
        if let Some(s) = cat_sampled {
            parts.push(CheckReport {
                suite: "sampled".into(),
                ..s
            });
        }
        CheckReport::merged(name, parts)
    };
    // later stages need a lawful differential monad first
    let require_cdm = || {
        Cdm::validate(monad.clone(), &stage_cfg(0xC)).map_err(|e| {
            format!(
                "monad '{}' failed validation before the requested suite: {e}",
                monad.name()
            )
        })
    };
    match target {
        CheckTarget::Cdc => {
            let exact_cfg = CdSuiteConfig {
                trials,
                ..CdSuiteConfig::exact(seed)
            };
            let sampled_cfg = CdSuiteConfig {
                trials,
                policy: sampled_policy.clone(),
                ..CdSuiteConfig::sampled(subseed(seed, 1))
            };
            let (exact, sampled) = match mutate {
                None => (
                    run_cd_suite(&SmoothCat, &exact_cfg),
                    (!exact_only).then(|| run_cd_suite(&SmoothCat, &sampled_cfg)),
                ),
                Some(name) => {
                    let handle = cdk_core::harness::mutants::MutantSmooth {
                        mutant: name.build(),
                    };
                    (
                        run_cd_suite(&handle, &exact_cfg),
                        (!exact_only).then(|| run_cd_suite(&handle, &sampled_cfg)),
                    )
                }
            };
            Ok(cd_pair(exact, sampled, "cd/smooth"))
        }
        CheckTarget::Monad => Ok(CheckReport::merged(
            format!("monad/{}", monad.name()),
            vec![
                check_monad_laws(&monad, &stage_cfg(1)),
                check_cartesian_k_linear(&monad, &stage_cfg(2)),
                check_cdm(&monad, &stage_cfg(3)),
            ],
        )),
        CheckTarget::Kleisli => {
            let kl = Kleisli::new(monad.clone());
            let laws = check_kleisli_category(&monad, &stage_cfg(4));
            let exact = run_cd_suite(
                &kl,
                &CdSuiteConfig {
                    trials,
                    ..CdSuiteConfig::exact(seed)
                },
            );
            let sampled = (!exact_only).then(|| {
                run_cd_suite(
                    &kl,
                    &CdSuiteConfig {
                        trials,
                        policy: sampled_policy.clone(),
                        ..CdSuiteConfig::sampled(subseed(seed, 1))
                    },
                )
            });
            let cd = cd_pair(exact, sampled, "cd");
            Ok(CheckReport::merged(
                format!("kleisli/{}", monad.name()),
                vec![laws, cd],
            ))
        }
        CheckTarget::Abstract => {
            let cdm = require_cdm()?;
            Ok(check_abstract(&cdm, &stage_cfg(5)))
        }
        CheckTarget::Kd => {
            let cdm = require_cdm()?;
            Ok(check_kd(&cdm, &stage_cfg(6)))
        }
        CheckTarget::Em => {
            let cdm = require_cdm()?;
            Ok(cdk_core::em::check_em(&cdm, &stage_cfg(7)))
        }
        CheckTarget::All => Ok(run_full_pipeline(
            &monad,
            &PipelineConfig {
                seed,
                stage_trials: trials,
                cd_exact_trials: trials.max(1),
                cd_sampled_trials: if exact_only { 0 } else { trials.max(1) / 2 + 1 },
            },
        )),
    }
}

fn print_human(report: &CheckReport) {
    let mut out = format!("suite {}\n", report.suite);
    let mut seen: Vec<String> = Vec::new();
    for case in &report.cases {
        if seen.contains(&case.axiom) {
            continue;
        }
        seen.push(case.axiom.clone());
        let group: Vec<_> = report
            .cases
            .iter()
            .filter(|c| c.axiom == case.axiom)
            .collect();
        let failed: Vec<_> = group.iter().filter(|c| !c.ok).collect();
        if failed.is_empty() {
            out.push_str(&format!("  ok    {} ({} trials)\n", case.axiom, group.len()));
        } else {
            let first = failed[0];
            let where_ = first
                .witness
                .as_ref()
                .map(|w| format!(" at {w:?}"))
                .unwrap_or_default();
            let residual = first
                .residual
                .map(|r| format!(" residual {r:.3e}"))
                .unwrap_or_default();
            out.push_str(&format!(
                "  FAIL  {} ({}/{} trials failed{}{})\n",
                case.axiom,
                failed.len(),
                group.len(),
                where_,
                residual
            ));
        }
    }
    out.push_str(&format!(
        "result: {}",
        if report.passed { "PASSED" } else { "FAILED" }
    ));
    emit(out);
}

fn parse_field(text: &str) -> Result<GenVectorField, String> {
    let map = parse_map(text).map_err(|e| e.to_string())?;
    let (left, right) = map
        .cod()
        .split()
        .filter(|(a, b)| a == b)
        .ok_or_else(|| {
            format!(
                "a vector field needs codomain B x B with equal factors, found {}",
                map.cod()
            )
        })?;
    let f1 = SmoothMap::compose(&SmoothMap::proj(left, right, Side::Left), &map)
        .map_err(|e| e.to_string())?;
    let f2 = SmoothMap::compose(&SmoothMap::proj(left, right, Side::Right), &map)
        .map_err(|e| e.to_string())?;
    GenVectorField::new(f1, f2).map_err(|e| e.to_string())
}

fn parse_float_point(text: &str) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad coordinate '{}': {e}", s.trim()))
        })
        .collect()
}

fn parse_rational_point(text: &str) -> Result<Vec<Scalar>, String> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<Scalar>()
                .map_err(|e| format!("bad coordinate '{}': {e}", s.trim()))
        })
        .collect()
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}
