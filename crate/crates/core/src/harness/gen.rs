//! Seeded random shapes and maps.
//!
//! Generation is deterministic in `(config.seed, stream, dom, cod)`. Degree
//! and magnitude are kept small on purpose: exponential nodes only take
//! low-degree polynomial arguments with quartered coefficients so that
//! sampled comparisons stay well inside their tolerances.

use crate::expr::ScalarExpr;
use crate::scalar::Scalar;
use crate::seeding::{stream_rng, subseed};
use crate::shape::Shape;
use crate::smooth::SmoothMap;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::ops::RangeInclusive;

/// Configuration for the random map generator.
#[derive(Clone, Debug)]
pub struct RandomMapConfig {
    pub seed: u64,
    /// Maximum expression tree depth.
    pub max_depth: u32,
    /// Range of line-leaf counts for generated shapes.
    pub dims: RangeInclusive<usize>,
    pub allow_transcendental: bool,
    pub coefficient_pool: Vec<Scalar>,
}

impl Default for RandomMapConfig {
    fn default() -> Self {
        RandomMapConfig {
            seed: 0,
            max_depth: 4,
            dims: 1..=3,
            allow_transcendental: false,
            coefficient_pool: vec![
                Scalar::from_int(-2),
                Scalar::from_int(-1),
                Scalar::ratio(-1, 2).unwrap(),
                Scalar::ratio(1, 2).unwrap(),
                Scalar::one(),
                Scalar::from_int(2),
                Scalar::from_int(3),
            ],
        }
    }
}

impl RandomMapConfig {
    pub fn polynomial(seed: u64) -> Self {
        RandomMapConfig {
            seed,
            ..RandomMapConfig::default()
        }
    }

    pub fn transcendental(seed: u64) -> Self {
        RandomMapConfig {
            seed,
            allow_transcendental: true,
            ..RandomMapConfig::default()
        }
    }
}

// Cap on the total degree of a generated component.
const DEGREE_BUDGET: u32 = 6;

/// Random product tree with a leaf count drawn from `cfg.dims`; occasionally
/// a unit leaf is inserted to exercise zero-dimensional factors.
pub fn gen_shape(cfg: &RandomMapConfig, stream: u64) -> Shape {
    let mut rng = stream_rng(cfg.seed, subseed(stream, 0x5A));
    let leaves = rng.gen_range(cfg.dims.clone());
    let mut shape = gen_tree(&mut rng, leaves.max(1));
    if rng.gen_bool(0.12) {
        shape = if rng.gen_bool(0.5) {
            Shape::prod(Shape::Unit, shape)
        } else {
            Shape::prod(shape, Shape::Unit)
        };
    }
    shape
}

fn gen_tree(rng: &mut ChaCha8Rng, leaves: usize) -> Shape {
    if leaves == 1 {
        Shape::Line
    } else {
        let left = rng.gen_range(1..leaves);
        Shape::prod(gen_tree(rng, left), gen_tree(rng, leaves - left))
    }
}

/// Random well-typed map; one expression per codomain leaf.
pub fn gen_map(cfg: &RandomMapConfig, stream: u64, dom: &Shape, cod: &Shape) -> SmoothMap {
    let mut rng = stream_rng(cfg.seed, subseed(stream, 0x33));
    let dim = dom.dim();
    let comps: Vec<ScalarExpr> = (0..cod.dim())
        .map(|_| {
            let depth = rng.gen_range(1..=cfg.max_depth);
            gen_expr(
                &mut rng,
                cfg,
                dim,
                depth,
                DEGREE_BUDGET,
                cfg.allow_transcendental,
                cfg.allow_transcendental,
            )
            .normalize()
        })
        .collect();
    SmoothMap::new(dom.clone(), cod.clone(), comps).expect("generated map is well-typed")
}

/// Random linear map (no constant term), for linearity-closure checks.
pub fn gen_linear_map(cfg: &RandomMapConfig, stream: u64, dom: &Shape, cod: &Shape) -> SmoothMap {
    let mut rng = stream_rng(cfg.seed, subseed(stream, 0x71));
    let dim = dom.dim();
    let mut comps: Vec<ScalarExpr> = Vec::with_capacity(cod.dim());
    for _ in 0..cod.dim() {
        let mut terms: Vec<(Scalar, ScalarExpr)> = Vec::new();
        for i in 0..dim {
            if rng.gen_bool(0.8) {
                terms.push((pick_coeff(&mut rng, cfg), ScalarExpr::coord(i)));
            }
        }
        comps.push(ScalarExpr::Sum(terms).normalize());
    }
    SmoothMap::new(dom.clone(), cod.clone(), comps).expect("generated linear map is well-typed")
}

fn pick_coeff(rng: &mut ChaCha8Rng, cfg: &RandomMapConfig) -> Scalar {
    cfg.coefficient_pool
        .choose(rng)
        .cloned()
        .unwrap_or_else(Scalar::one)
}

// Affine base case: a coefficient sum over a coordinate subset, sometimes
// with a constant term.
fn gen_affine(rng: &mut ChaCha8Rng, cfg: &RandomMapConfig, dim: usize) -> ScalarExpr {
    let mut terms: Vec<(Scalar, ScalarExpr)> = Vec::new();
    for i in 0..dim {
        if rng.gen_bool(0.7) {
            terms.push((pick_coeff(rng, cfg), ScalarExpr::coord(i)));
        }
    }
    if terms.is_empty() || rng.gen_bool(0.3) {
        terms.push((pick_coeff(rng, cfg), ScalarExpr::one()));
    }
    ScalarExpr::Sum(terms)
}

fn gen_expr(
    rng: &mut ChaCha8Rng,
    cfg: &RandomMapConfig,
    dim: usize,
    depth: u32,
    degree: u32,
    allow_tr: bool,
    allow_exp: bool,
) -> ScalarExpr {
    if dim == 0 {
        return ScalarExpr::Const(pick_coeff(rng, cfg));
    }
    if depth <= 1 || degree <= 1 {
        return gen_affine(rng, cfg, dim);
    }
    let roll = rng.gen_range(0..100u32);
    match roll {
        0..=24 => {
            // leaf, biased toward coordinates
            if rng.gen_bool(0.7) {
                ScalarExpr::coord(rng.gen_range(0..dim))
            } else {
                ScalarExpr::Const(pick_coeff(rng, cfg))
            }
        }
        25..=54 => {
            let k = rng.gen_range(2..=3usize);
            let terms = (0..k)
                .map(|_| {
                    (
                        pick_coeff(rng, cfg),
                        gen_expr(rng, cfg, dim, depth - 1, degree, allow_tr, allow_exp),
                    )
                })
                .collect();
            ScalarExpr::Sum(terms)
        }
        55..=69 if degree >= 2 => {
            let d1 = rng.gen_range(1..degree);
            ScalarExpr::Prod(vec![
                gen_expr(rng, cfg, dim, depth - 1, d1, allow_tr, allow_exp),
                gen_expr(rng, cfg, dim, depth - 1, degree - d1, allow_tr, allow_exp),
            ])
        }
        70..=79 if degree >= 2 => {
            let k = rng.gen_range(2..=3.min(degree));
            ScalarExpr::pow(
                gen_expr(rng, cfg, dim, depth - 1, degree / k, allow_tr, allow_exp),
                k,
            )
        }
        80..=92 if allow_tr => {
            // trig nodes nest freely but never contain exp
            let arg = gen_expr(rng, cfg, dim, depth - 1, degree.min(3), allow_tr, false);
            if rng.gen_bool(0.5) {
                ScalarExpr::sin(arg)
            } else {
                ScalarExpr::cos(arg)
            }
        }
        93..=99 if allow_tr && allow_exp => {
            // exp takes a small polynomial argument with quartered coefficients
            let quarter = Scalar::ratio(1, 4).unwrap();
            let small = RandomMapConfig {
                coefficient_pool: cfg
                    .coefficient_pool
                    .iter()
                    .map(|c| c.clone() * quarter.clone())
                    .collect(),
                ..cfg.clone()
            };
            let arg = gen_expr(rng, &small, dim, depth.min(2).saturating_sub(1), 2, false, false);
            ScalarExpr::exp(arg)
        }
        _ => ScalarExpr::coord(rng.gen_range(0..dim)),
    }
}
