//! The differential combinator on smooth maps.
//!
//! For `f : A -> B`, `d(f) : A x A -> B` is the total derivative: evaluated
//! at a base point in the first block along a tangent vector in the second.
//! Componentwise it is the sum over domain coordinates of the symbolic
//! partial derivative times the matching tangent coordinate. The tangent
//! functor, the partial combinator for simple slices, and the linearity
//! predicates all derive from it.

use crate::error::TermError;
use crate::expr::{partial, ScalarExpr};
use crate::harness::gen::{gen_map, RandomMapConfig};
use crate::scalar::Scalar;
use crate::seeding::{stream_rng, subseed};
use crate::shape::Shape;
use crate::smooth::{maps_equal, EqPolicy, Side, SmoothMap, Verdict};
use rand::seq::SliceRandom;

/// A map together with its derivative.
#[derive(Clone, Debug)]
pub struct DerivedMap {
    pub base: SmoothMap,
    pub deriv: SmoothMap,
}

/// Packages `f` with `d(f)`; the derivative is typed `A x A -> B`.
pub fn derived(f: &SmoothMap) -> DerivedMap {
    DerivedMap {
        base: f.clone(),
        deriv: d(f),
    }
}

/// Total derivative `d(f) : A x A -> B`, normalized.
pub fn d(f: &SmoothMap) -> SmoothMap {
    let n = f.dom().dim();
    let dom = f.dom().doubled();
    let comps = f
        .comps()
        .iter()
        .map(|e| {
            let summands: Vec<(Scalar, ScalarExpr)> = (0..n)
                .map(|i| {
                    (
                        Scalar::one(),
                        ScalarExpr::Prod(vec![partial(e, i), ScalarExpr::coord(n + i)]),
                    )
                })
                .collect();
            ScalarExpr::Sum(summands).normalize()
        })
        .collect();
    SmoothMap::new(dom, f.cod().clone(), comps).expect("derivative is well-typed")
}

/// Componentwise partial derivative with respect to coordinate `i`; the
/// domain is unchanged.
pub fn partial_derivative(f: &SmoothMap, i: usize) -> Result<SmoothMap, TermError> {
    if i >= f.dom().dim() {
        return Err(TermError::DimensionMismatch {
            expected: f.dom().dim(),
            got: i + 1,
        });
    }
    let comps = f.comps().iter().map(|e| partial(e, i).normalize()).collect();
    SmoothMap::new(f.dom().clone(), f.cod().clone(), comps)
}

/// Partial combinator of the simple slice over `context`.
///
/// For `f : C x A -> B` this is `C x (A x A) -> B`: the derivative of `f` in
/// the `A` block only, obtained by feeding a zero tangent to the context
/// block of `d(f)`.
pub fn d_partial(context: &Shape, f: &SmoothMap) -> Result<SmoothMap, TermError> {
    let (c, a) = match f.dom().split() {
        Some((c, a)) if c == context => (c.clone(), a.clone()),
        _ => {
            return Err(TermError::ShapeMismatch {
                context: "d_partial",
                left: context.clone(),
                right: f.dom().clone(),
            })
        }
    };
    let aa = a.doubled();
    let dom = Shape::prod(c.clone(), aa.clone());
    // (ctx, (u, v)) |-> ((ctx, u), (0, v))
    let p_ctx = SmoothMap::proj(&c, &aa, Side::Left);
    let p_aa = SmoothMap::proj(&c, &aa, Side::Right);
    let p_u = SmoothMap::compose(&SmoothMap::proj(&a, &a, Side::Left), &p_aa)?;
    let p_v = SmoothMap::compose(&SmoothMap::proj(&a, &a, Side::Right), &p_aa)?;
    let base = SmoothMap::pair(&p_ctx, &p_u)?;
    let tangent = SmoothMap::pair(&SmoothMap::zero(&dom, &c), &p_v)?;
    let insert = SmoothMap::pair(&base, &tangent)?;
    SmoothMap::compose(&d(f), &insert)
}

/// Tangent functor on objects: `T(A) = A x A`.
pub fn t_obj(s: &Shape) -> Shape {
    s.doubled()
}

/// Tangent functor on maps: `T(f) = <f . pi1, d(f)>`.
pub fn t_map(f: &SmoothMap) -> SmoothMap {
    let p1 = SmoothMap::proj(f.dom(), f.dom(), Side::Left);
    let base = SmoothMap::compose(f, &p1).expect("tangent base leg");
    SmoothMap::pair(&base, &d(f)).expect("tangent pairing")
}

/// Differential linearity: `d(f) = f . pi2`.
pub fn is_d_linear(f: &SmoothMap, policy: &EqPolicy) -> Result<Verdict, TermError> {
    let p2 = SmoothMap::proj(f.dom(), f.dom(), Side::Right);
    let rhs = SmoothMap::compose(f, &p2)?;
    maps_equal(&d(f), &rhs, policy)
}

/// k-linearity: post-composition by `f` preserves linear combinations,
/// checked on eight seeded random `(r, s, x, y)` instances with `x, y`
/// generated maps into the domain of `f`.
pub fn is_k_linear(f: &SmoothMap, policy: &EqPolicy, seed: u64) -> Result<Verdict, TermError> {
    let cfg = RandomMapConfig {
        seed,
        max_depth: 2,
        dims: 1..=2,
        allow_transcendental: matches!(policy, EqPolicy::Sampled { .. }),
        coefficient_pool: RandomMapConfig::default().coefficient_pool,
    };
    let pool = [
        Scalar::from_int(-2),
        Scalar::ratio(-1, 2).unwrap(),
        Scalar::one(),
        Scalar::from_int(2),
        Scalar::from_int(3),
    ];
    let mut max_residual = 0.0f64;
    for trial in 0..8u64 {
        let mut rng = stream_rng(seed, trial);
        let r = pool.choose(&mut rng).unwrap().clone();
        let s = pool.choose(&mut rng).unwrap().clone();
        let w = Shape::prod(Shape::Line, Shape::Line);
        let x = gen_map(&cfg, subseed(trial, 1), &w, f.dom());
        let y = gen_map(&cfg, subseed(trial, 2), &w, f.dom());
        let lhs = SmoothMap::compose(f, &SmoothMap::lin_comb(&r, &x, &s, &y)?)?;
        let rhs = SmoothMap::lin_comb(
            &r,
            &SmoothMap::compose(f, &x)?,
            &s,
            &SmoothMap::compose(f, &y)?,
        )?;
        let v = maps_equal(&lhs, &rhs, policy)?;
        if !v.equal {
            return Ok(v);
        }
        max_residual = max_residual.max(v.residual);
    }
    Ok(Verdict::passed(max_residual))
}
