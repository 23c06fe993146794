//! The differential-category axiom suite.
//!
//! `DiffCategory` abstracts exactly the operations needed to state the seven
//! axioms of a differential combinator over a Cartesian left k-linear
//! category. `run_cd_suite` instantiates each axiom with seeded random
//! shapes and maps and reports per-trial verdicts. All product bookkeeping
//! goes through the handle's own proj/pair/zero, never through raw index
//! arithmetic, so the suite works unchanged for any instance.

use crate::harness::gen::{gen_shape, RandomMapConfig};
use crate::harness::report::{CheckCase, CheckReport};
use crate::scalar::Scalar;
use crate::seeding::{stream_rng, subseed};
use crate::shape::Shape;
use crate::smooth::{EqPolicy, Side, Verdict};
use rand::seq::SliceRandom;

/// Operations of a Cartesian k-differential category over `Shape` objects.
///
/// All operations are total on well-typed inputs; implementations panic on
/// type mismatches, which indicate suite bugs rather than law failures.
pub trait DiffCategory {
    type Map: Clone;

    fn name(&self) -> String;
    fn dom(&self, f: &Self::Map) -> Shape;
    fn cod(&self, f: &Self::Map) -> Shape;
    fn identity(&self, a: &Shape) -> Self::Map;
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Self::Map;
    fn proj(&self, a: &Shape, b: &Shape, side: Side) -> Self::Map;
    fn pair(&self, f: &Self::Map, g: &Self::Map) -> Self::Map;
    fn lin_comb(&self, r: &Scalar, f: &Self::Map, s: &Scalar, g: &Self::Map) -> Self::Map;
    fn zero(&self, dom: &Shape, cod: &Shape) -> Self::Map;
    fn d(&self, f: &Self::Map) -> Self::Map;
    fn maps_equal(&self, f: &Self::Map, g: &Self::Map, policy: &EqPolicy) -> Verdict;
    fn gen_map(&self, cfg: &RandomMapConfig, stream: u64, dom: &Shape, cod: &Shape) -> Self::Map;
}

/// The base category of smooth maps.
pub struct SmoothCat;

impl DiffCategory for SmoothCat {
    type Map = crate::smooth::SmoothMap;

    fn name(&self) -> String {
        "smooth".to_string()
    }
    fn dom(&self, f: &Self::Map) -> Shape {
        f.dom().clone()
    }
    fn cod(&self, f: &Self::Map) -> Shape {
        f.cod().clone()
    }
    fn identity(&self, a: &Shape) -> Self::Map {
        crate::smooth::SmoothMap::identity(a)
    }
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Self::Map {
        crate::smooth::SmoothMap::compose(g, f).expect("suite composition is well-typed")
    }
    fn proj(&self, a: &Shape, b: &Shape, side: Side) -> Self::Map {
        crate::smooth::SmoothMap::proj(a, b, side)
    }
    fn pair(&self, f: &Self::Map, g: &Self::Map) -> Self::Map {
        crate::smooth::SmoothMap::pair(f, g).expect("suite pairing is well-typed")
    }
    fn lin_comb(&self, r: &Scalar, f: &Self::Map, s: &Scalar, g: &Self::Map) -> Self::Map {
        crate::smooth::SmoothMap::lin_comb(r, f, s, g).expect("suite lin_comb is well-typed")
    }
    fn zero(&self, dom: &Shape, cod: &Shape) -> Self::Map {
        crate::smooth::SmoothMap::zero(dom, cod)
    }
    fn d(&self, f: &Self::Map) -> Self::Map {
        crate::diffop::d(f)
    }
    fn maps_equal(&self, f: &Self::Map, g: &Self::Map, policy: &EqPolicy) -> Verdict {
        crate::smooth::maps_equal(f, g, policy).expect("suite equality is well-typed")
    }
    fn gen_map(&self, cfg: &RandomMapConfig, stream: u64, dom: &Shape, cod: &Shape) -> Self::Map {
        crate::harness::gen::gen_map(cfg, stream, dom, cod)
    }
}

/// One pass of the axiom suite.
#[derive(Clone, Debug)]
pub struct CdSuiteConfig {
    pub gen: RandomMapConfig,
    pub policy: EqPolicy,
    pub trials: u32,
}

impl CdSuiteConfig {
    /// Polynomial maps compared by exact normal forms; 16 trials per axiom.
    pub fn exact(seed: u64) -> CdSuiteConfig {
        CdSuiteConfig {
            gen: RandomMapConfig::polynomial(seed),
            policy: EqPolicy::Exact,
            trials: 16,
        }
    }

    /// Transcendental maps compared by seeded sampling; 8 trials per axiom.
    pub fn sampled(seed: u64) -> CdSuiteConfig {
        CdSuiteConfig {
            gen: RandomMapConfig::transcendental(seed),
            policy: EqPolicy::sampled(subseed(seed, 0xEA)),
            trials: 8,
        }
    }
}

const AXIOMS: [&str; 8] = [
    "CD.1", "CD.2", "CD.3", "CD.4", "CD.4d", "CD.5", "CD.6", "CD.7",
];

/// Runs every axiom for `cfg.trials` random instantiations.
pub fn run_cd_suite<C: DiffCategory>(cat: &C, cfg: &CdSuiteConfig) -> CheckReport {
    let mut cases = Vec::new();
    for (ai, axiom) in AXIOMS.iter().enumerate() {
        for trial in 0..cfg.trials {
            let stream = subseed(cfg.gen.seed, (ai as u64) << 32 | u64::from(trial));
            let verdict = run_axiom(cat, cfg, axiom, stream);
            cases.push(CheckCase::from_verdict(axiom, trial, stream, &verdict));
        }
    }
    CheckReport::new(format!("cd/{}", cat.name()), cases)
}

fn pick_scalar(cfg: &CdSuiteConfig, stream: u64, tag: u64) -> Scalar {
    let mut rng = stream_rng(stream, tag);
    cfg.gen
        .coefficient_pool
        .choose(&mut rng)
        .cloned()
        .unwrap_or_else(Scalar::one)
}

fn run_axiom<C: DiffCategory>(cat: &C, cfg: &CdSuiteConfig, axiom: &str, stream: u64) -> Verdict {
    let a = gen_shape(&cfg.gen, subseed(stream, 1));
    let b = gen_shape(&cfg.gen, subseed(stream, 2));
    let c = gen_shape(&cfg.gen, subseed(stream, 3));
    let r = pick_scalar(cfg, stream, 4);
    let s = pick_scalar(cfg, stream, 5);
    let policy = &cfg.policy;

    match axiom {
        "CD.1" => {
            // d(r f + s g) = r d(f) + s d(g)
            let f = cat.gen_map(&cfg.gen, subseed(stream, 6), &a, &b);
            let g = cat.gen_map(&cfg.gen, subseed(stream, 7), &a, &b);
            let lhs = cat.d(&cat.lin_comb(&r, &f, &s, &g));
            let rhs = cat.lin_comb(&r, &cat.d(&f), &s, &cat.d(&g));
            cat.maps_equal(&lhs, &rhs, policy)
        }
        "CD.2" => {
            // the derivative is k-linear in its tangent argument
            let f = cat.gen_map(&cfg.gen, subseed(stream, 6), &a, &b);
            let aa = a.doubled();
            // projections of A x (A x A)
            let p1 = cat.proj(&a, &aa, Side::Left);
            let rest = cat.proj(&a, &aa, Side::Right);
            let p2 = cat.compose(&cat.proj(&a, &a, Side::Left), &rest);
            let p3 = cat.compose(&cat.proj(&a, &a, Side::Right), &rest);
            let df = cat.d(&f);
            let lhs = cat.compose(&df, &cat.pair(&p1, &cat.lin_comb(&r, &p2, &s, &p3)));
            let rhs = cat.lin_comb(
                &r,
                &cat.compose(&df, &cat.pair(&p1, &p2)),
                &s,
                &cat.compose(&df, &cat.pair(&p1, &p3)),
            );
            cat.maps_equal(&lhs, &rhs, policy)
        }
        "CD.3" => {
            // d(identity) and d(projections) are second-block projections
            let v1 = cat.maps_equal(
                &cat.d(&cat.identity(&a)),
                &cat.proj(&a, &a, Side::Right),
                policy,
            );
            if !v1.equal {
                return v1;
            }
            let ab = Shape::prod(a.clone(), b.clone());
            let second = cat.proj(&ab, &ab, Side::Right);
            for side in [Side::Left, Side::Right] {
                let lhs = cat.d(&cat.proj(&a, &b, side));
                let rhs = cat.compose(&cat.proj(&a, &b, side), &second);
                let v = cat.maps_equal(&lhs, &rhs, policy);
                if !v.equal {
                    return v;
                }
            }
            v1
        }
        "CD.4" => {
            // d of a pairing is the pairing of the d's
            let f1 = cat.gen_map(&cfg.gen, subseed(stream, 6), &a, &b);
            let f2 = cat.gen_map(&cfg.gen, subseed(stream, 7), &a, &c);
            let lhs = cat.d(&cat.pair(&f1, &f2));
            let rhs = cat.pair(&cat.d(&f1), &cat.d(&f2));
            cat.maps_equal(&lhs, &rhs, policy)
        }
        "CD.4d" => {
            // the same law derived through projections and the chain rule
            let f1 = cat.gen_map(&cfg.gen, subseed(stream, 6), &a, &b);
            let f2 = cat.gen_map(&cfg.gen, subseed(stream, 7), &a, &c);
            let h = cat.pair(&f1, &f2);
            let bc = Shape::prod(b.clone(), c.clone());
            let chain = cat.pair(
                &cat.compose(&h, &cat.proj(&a, &a, Side::Left)),
                &cat.d(&h),
            );
            let second = cat.proj(&bc, &bc, Side::Right);
            let legs = [(Side::Left, &f1, &b), (Side::Right, &f2, &c)];
            let mut last = Verdict::passed(0.0);
            for (side, f, _) in legs {
                let via = cat.compose(&cat.compose(&cat.proj(&b, &c, side), &second), &chain);
                let v = cat.maps_equal(&cat.d(f), &via, policy);
                if !v.equal {
                    return v;
                }
                last = v;
            }
            last
        }
        "CD.5" => {
            // chain rule
            let f = cat.gen_map(&cfg.gen, subseed(stream, 6), &a, &b);
            let g = cat.gen_map(&cfg.gen, subseed(stream, 7), &b, &c);
            let lhs = cat.d(&cat.compose(&g, &f));
            let tangent = cat.pair(&cat.compose(&f, &cat.proj(&a, &a, Side::Left)), &cat.d(&f));
            let rhs = cat.compose(&cat.d(&g), &tangent);
            cat.maps_equal(&lhs, &rhs, policy)
        }
        "CD.6" => {
            // the derivative is differential linear in its tangent argument
            let f = cat.gen_map(&cfg.gen, subseed(stream, 6), &a, &b);
            let aa = a.doubled();
            let z = cat.zero(&aa, &a);
            let incl = cat.pair(
                &cat.pair(&cat.proj(&a, &a, Side::Left), &z),
                &cat.pair(&z, &cat.proj(&a, &a, Side::Right)),
            );
            let lhs = cat.compose(&cat.d(&cat.d(&f)), &incl);
            cat.maps_equal(&lhs, &cat.d(&f), policy)
        }
        "CD.7" => {
            // symmetry of second derivatives in the two tangent slots
            let f = cat.gen_map(&cfg.gen, subseed(stream, 6), &a, &b);
            let aa = a.doubled();
            let outer_l = cat.proj(&aa, &aa, Side::Left);
            let outer_r = cat.proj(&aa, &aa, Side::Right);
            let q = |side: Side, outer: &C::Map| cat.compose(&cat.proj(&a, &a, side), outer);
            let q1 = q(Side::Left, &outer_l);
            let q2 = q(Side::Right, &outer_l);
            let q3 = q(Side::Left, &outer_r);
            let q4 = q(Side::Right, &outer_r);
            let arr_id = cat.pair(&cat.pair(&q1, &q2), &cat.pair(&q3, &q4));
            let arr_swap = cat.pair(&cat.pair(&q1, &q3), &cat.pair(&q2, &q4));
            let ddf = cat.d(&cat.d(&f));
            let lhs = cat.compose(&ddf, &arr_id);
            let rhs = cat.compose(&ddf, &arr_swap);
            cat.maps_equal(&lhs, &rhs, policy)
        }
        other => unreachable!("unknown axiom id {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_passes_a_small_exact_pass() {
        let cfg = CdSuiteConfig {
            trials: 4,
            ..CdSuiteConfig::exact(2024)
        };
        let report = run_cd_suite(&SmoothCat, &cfg);
        assert!(report.passed, "failures: {:?}", report.failing_axioms());
    }

    #[test]
    fn smooth_passes_a_small_sampled_pass() {
        let cfg = CdSuiteConfig {
            trials: 3,
            ..CdSuiteConfig::sampled(2025)
        };
        let report = run_cd_suite(&SmoothCat, &cfg);
        assert!(report.passed, "failures: {:?}", report.failing_axioms());
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let cfg = CdSuiteConfig {
            trials: 2,
            ..CdSuiteConfig::exact(7)
        };
        let a = run_cd_suite(&SmoothCat, &cfg).to_json();
        let b = run_cd_suite(&SmoothCat, &cfg).to_json();
        assert_eq!(a, b);
    }
}
