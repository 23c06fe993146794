//! Staged validation of one monad, from the monad laws to the algebra side.
//!
//! The three monad-level stages always run: they only need the presented
//! data. Everything past them builds on a lawful differential monad, so the
//! Kleisli-and-beyond stages are skipped, with markers in the report, when
//! any monad-level stage fails. Stage order:
//!
//! 1. monad-laws        unit, associativity, naturality
//! 2. k-linear          product comparison and module structure
//! 3. cdm               derivative compatibility of functor, unit, multiplication
//! 4. kleisli-laws      category and lifted-structure laws
//! 5. kleisli-cd        the seven combinator axioms inside the Kleisli category
//! 6. abstract          thunk-force structure and thunkability
//! 7. kd                the direct Kleisli derivative combinator
//! 8. em                algebras, lifted tangent structure, differential objects

use crate::harness::report::{CheckCase, CheckReport};
use crate::harness::suite::{run_cd_suite, CdSuiteConfig};
use crate::kleisli::{check_abstract, check_kd, check_kleisli_category, Kleisli};
use crate::monads::{
    check_cartesian_k_linear, check_cdm, check_monad_laws, Cdm, MonadCheckConfig, MonadSpec,
};
use crate::seeding::subseed;
use crate::shape::Shape;
use crate::harness::mutants::ZeroD;
use std::sync::Arc;

/// Trial counts and seeding for a full pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Trials for the monad, Kleisli-law, abstract, kd, and em stages.
    pub stage_trials: u32,
    /// Exact polynomial trials per axiom in the Kleisli combinator suite.
    pub cd_exact_trials: u32,
    /// Sampled transcendental trials per axiom in the Kleisli combinator suite.
    pub cd_sampled_trials: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            stage_trials: 8,
            cd_exact_trials: 16,
            cd_sampled_trials: 8,
        }
    }
}

impl PipelineConfig {
    pub fn seeded(seed: u64) -> Self {
        PipelineConfig {
            seed,
            ..PipelineConfig::default()
        }
    }

    /// A light configuration for unit tests.
    pub fn quick(seed: u64) -> Self {
        PipelineConfig {
            seed,
            stage_trials: 3,
            cd_exact_trials: 3,
            cd_sampled_trials: 2,
        }
    }

    fn stage_cfg(&self, tag: u64) -> MonadCheckConfig {
        MonadCheckConfig::with_trials(subseed(self.seed, tag), self.stage_trials)
    }
}

/// Injected corruption for mutation-sensitivity testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineMutation {
    None,
    /// Replace the Kleisli-level differential combinator by zero inside the
    /// combinator-axiom stage only.
    ZeroKleisliDerivative,
}

const LATER_STAGES: [&str; 5] = ["kleisli-laws", "kleisli-cd", "abstract", "kd", "em"];

/// Runs every suite for one monad, in stage order.
pub fn run_full_pipeline(m: &Arc<MonadSpec>, cfg: &PipelineConfig) -> CheckReport {
    run_full_pipeline_mutated(m, cfg, PipelineMutation::None)
}

/// Pipeline run with an optional injected corruption.
pub fn run_full_pipeline_mutated(
    m: &Arc<MonadSpec>,
    cfg: &PipelineConfig,
    mutation: PipelineMutation,
) -> CheckReport {
    let degenerate = m.on_obj(&Shape::Line).dim() == 0;
    let suite_name = if degenerate {
        format!(
            "pipeline/{} (degenerate: image objects have dimension 0)",
            m.name()
        )
    } else {
        format!("pipeline/{}", m.name())
    };

    let mut parts: Vec<CheckReport> = Vec::new();
    let laws = check_monad_laws(m, &cfg.stage_cfg(1));
    let klin = check_cartesian_k_linear(m, &cfg.stage_cfg(2));
    let cdm_report = check_cdm(m, &cfg.stage_cfg(3));
    let prerequisites_ok = laws.passed && klin.passed && cdm_report.passed;
    parts.push(renamed(laws, "monad-laws"));
    parts.push(renamed(klin, "k-linear"));
    parts.push(renamed(cdm_report, "cdm"));

    if prerequisites_ok {
        let cdm = Cdm::validate(m.clone(), &cfg.stage_cfg(4))
            .expect("stages already passed with a different seed");
        parts.push(renamed(
            check_kleisli_category(m, &cfg.stage_cfg(5)),
            "kleisli-laws",
        ));

        let kl = Kleisli::new(m.clone());
        let exact = CdSuiteConfig {
            trials: cfg.cd_exact_trials,
            ..CdSuiteConfig::exact(subseed(cfg.seed, 6))
        };
        let sampled = CdSuiteConfig {
            trials: cfg.cd_sampled_trials,
            ..CdSuiteConfig::sampled(subseed(cfg.seed, 7))
        };
        let cd_report = match mutation {
            PipelineMutation::None => {
                let a = run_cd_suite(&kl, &exact);
                let b = run_cd_suite(&kl, &sampled);
                CheckReport::merged(
                    "kleisli-cd",
                    vec![
                        CheckReport {
                            suite: "exact".into(),
                            ..a
                        },
                        CheckReport {
                            suite: "sampled".into(),
                            ..b
                        },
                    ],
                )
            }
            PipelineMutation::ZeroKleisliDerivative => {
                let broken = ZeroD { inner: kl };
                let a = run_cd_suite(&broken, &exact);
                let b = run_cd_suite(&broken, &sampled);
                CheckReport::merged(
                    "kleisli-cd",
                    vec![
                        CheckReport {
                            suite: "exact".into(),
                            ..a
                        },
                        CheckReport {
                            suite: "sampled".into(),
                            ..b
                        },
                    ],
                )
            }
        };
        parts.push(cd_report);

        parts.push(renamed(check_abstract(&cdm, &cfg.stage_cfg(8)), "abstract"));
        parts.push(renamed(check_kd(&cdm, &cfg.stage_cfg(9)), "kd"));
        parts.push(renamed(
            crate::em::check_em(&cdm, &cfg.stage_cfg(10)),
            "em",
        ));
    } else {
        for stage in LATER_STAGES {
            parts.push(CheckReport::new(
                stage,
                vec![CheckCase::fail("skipped", 0, cfg.seed)],
            ));
        }
    }
    CheckReport::merged(suite_name, parts)
}

fn renamed(report: CheckReport, stage: &str) -> CheckReport {
    CheckReport {
        suite: stage.to_string(),
        ..report
    }
}

/// Stage names with genuine (non-skip) failures, in stage order.
pub fn failing_stages(report: &CheckReport) -> Vec<String> {
    let mut out = Vec::new();
    for case in &report.cases {
        if case.ok {
            continue;
        }
        let stage = case.axiom.split('/').next().unwrap_or("").to_string();
        let is_skip = case.axiom.ends_with("/skipped");
        if !is_skip && !out.contains(&stage) {
            out.push(stage);
        }
    }
    out
}

/// Stage names that were skipped.
pub fn skipped_stages(report: &CheckReport) -> Vec<String> {
    let mut out = Vec::new();
    for case in &report.cases {
        if case.axiom.ends_with("/skipped") {
            let stage = case.axiom.split('/').next().unwrap_or("").to_string();
            if !out.contains(&stage) {
                out.push(stage);
            }
        }
    }
    out
}
