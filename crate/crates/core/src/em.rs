//! Algebras of a monad and the lifted tangent structure on them.
//!
//! An algebra is a carrier shape with a structure map `alpha : S(A) -> A`
//! satisfying the two algebra equations. For a validated differential monad
//! the algebras form a tangent category: the tangent bundle of `(A, alpha)`
//! is `(A x A, T(alpha) . omega(A, A))`, and the projection, sum, zero,
//! vertical lift, and canonical flip transformations are algebra morphisms
//! between the appropriate tangent iterates. An algebra behaves like a
//! Euclidean space (is a differential object) exactly when its structure
//! map is differential linear; free algebras always do, and the Kleisli
//! category embeds into them.

use crate::diffop::{d, is_d_linear, t_map};
use crate::error::TermError;
use crate::harness::gen::{gen_linear_map, gen_map, gen_shape};
use crate::harness::report::{CheckCase, CheckReport};
use crate::harness::suite::DiffCategory;
use crate::kleisli::{Kleisli, KleisliError, KleisliMap};
use crate::monads::{Cdm, MonadCheckConfig, MonadSpec};
use crate::scalar::Scalar;
use crate::seeding::subseed;
use crate::shape::Shape;
use crate::smooth::{maps_equal, EqPolicy, Side, SmoothMap, Verdict};
use std::fmt;
use std::sync::Arc;

/// Errors from algebra-level operations.
#[derive(Debug)]
pub enum EmError {
    NotAnAlgebra(Verdict),
    Term(TermError),
}

impl fmt::Display for EmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmError::NotAnAlgebra(v) => {
                write!(f, "structure map fails the algebra laws (residual {})", v.residual)
            }
            EmError::Term(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EmError {}

impl From<TermError> for EmError {
    fn from(e: TermError) -> Self {
        EmError::Term(e)
    }
}

/// An algebra of a monad: a carrier with a structure map `S(A) -> A`.
#[derive(Clone)]
pub struct Algebra {
    monad: Arc<MonadSpec>,
    carrier: Shape,
    alpha: SmoothMap,
}

impl Algebra {
    /// Packages the data, checking only the typing of the structure map.
    pub fn new(
        monad: Arc<MonadSpec>,
        carrier: Shape,
        alpha: SmoothMap,
    ) -> Result<Algebra, TermError> {
        let expected_dom = monad.on_obj(&carrier);
        if alpha.dom() != &expected_dom || alpha.cod() != &carrier {
            return Err(TermError::ShapeMismatch {
                context: "algebra structure map",
                left: alpha.dom().clone(),
                right: expected_dom,
            });
        }
        Ok(Algebra {
            monad,
            carrier,
            alpha,
        })
    }

    pub fn monad(&self) -> &Arc<MonadSpec> {
        &self.monad
    }

    pub fn carrier(&self) -> &Shape {
        &self.carrier
    }

    pub fn alpha(&self) -> &SmoothMap {
        &self.alpha
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra[{}] on {}", self.monad.name(), self.carrier)
    }
}

/// Verifies `alpha . mu = alpha . S(alpha)` and `alpha . eta = 1`.
pub fn check_algebra(a: &Algebra, policy: &EqPolicy) -> Result<Verdict, TermError> {
    let m = &a.monad;
    let lhs = SmoothMap::compose(&a.alpha, &m.mu(&a.carrier))?;
    let rhs = SmoothMap::compose(&a.alpha, &m.on_map(&a.alpha))?;
    let v = maps_equal(&lhs, &rhs, policy)?;
    if !v.equal {
        return Ok(v);
    }
    let unit = SmoothMap::compose(&a.alpha, &m.eta(&a.carrier))?;
    maps_equal(&unit, &SmoothMap::identity(&a.carrier), policy)
}

/// The free algebra `(S(A), mu_A)`.
pub fn free_algebra(m: &Arc<MonadSpec>, a: &Shape) -> Algebra {
    Algebra {
        monad: m.clone(),
        carrier: m.on_obj(a),
        alpha: m.mu(a),
    }
}

/// Tangent bundle of an algebra: `(A x A, T(alpha) . omega(A, A))`.
///
/// Requires a validated differential monad and a lawful algebra.
pub fn em_tangent(a: &Algebra, cdm: &Cdm, policy: &EqPolicy) -> Result<Algebra, EmError> {
    let v = check_algebra(a, policy)?;
    if !v.equal {
        return Err(EmError::NotAnAlgebra(v));
    }
    let m = cdm.monad();
    let structure = SmoothMap::compose(&t_map(&a.alpha), &m.omega(&a.carrier, &a.carrier))?;
    Ok(Algebra {
        monad: a.monad.clone(),
        carrier: a.carrier.doubled(),
        alpha: structure,
    })
}

// T2(A) = A x (A x A), the two-fold tangent fibre, with structure map
// <alpha . p1, d(alpha) . <p1, p2>, d(alpha) . <p1, p3>> . omega3.
fn em_tangent2(a: &Algebra, cdm: &Cdm) -> Result<Algebra, EmError> {
    let m = cdm.monad();
    let c = &a.carrier;
    let cc = c.doubled();
    let t2 = Shape::prod(c.clone(), cc.clone());
    // omega3 : S(A x (A x A)) -> S A x (S A x S A)
    let sa = m.on_obj(c);
    let omega3 = SmoothMap::compose(
        &SmoothMap::times(&SmoothMap::identity(&sa), &m.omega(c, c)),
        &m.omega(c, &cc),
    )?;
    // the three projections of S A x (S A x S A)
    let saa = Shape::prod(sa.clone(), sa.clone());
    let p1 = SmoothMap::proj(&sa, &saa, Side::Left);
    let rest = SmoothMap::proj(&sa, &saa, Side::Right);
    let p2 = SmoothMap::compose(&SmoothMap::proj(&sa, &sa, Side::Left), &rest)?;
    let p3 = SmoothMap::compose(&SmoothMap::proj(&sa, &sa, Side::Right), &rest)?;
    let da = d(&a.alpha);
    let leg1 = SmoothMap::compose(&a.alpha, &p1)?;
    let leg2 = SmoothMap::compose(&da, &SmoothMap::pair(&p1, &p2)?)?;
    let leg3 = SmoothMap::compose(&da, &SmoothMap::pair(&p1, &p3)?)?;
    let t2_alpha = SmoothMap::pair(&leg1, &SmoothMap::pair(&leg2, &leg3)?)?;
    let structure = SmoothMap::compose(&t2_alpha, &omega3)?;
    Ok(Algebra {
        monad: a.monad.clone(),
        carrier: t2,
        alpha: structure,
    })
}

/// The concrete tangent-structure transformations of the base category,
/// one builder per shape: projection `T A -> A`, fibre sum `T2 A -> T A`,
/// zero section `A -> T A`, vertical lift `T A -> T^2 A`, and canonical
/// flip `T^2 A -> T^2 A`.
pub struct TangentData;

impl TangentData {
    /// `p : A x A -> A`, first projection.
    pub fn projection(a: &Shape) -> SmoothMap {
        SmoothMap::proj(a, a, Side::Left)
    }

    /// `s : A x (A x A) -> A x A`, keeping the base and adding the fibres.
    pub fn fibre_sum(a: &Shape) -> SmoothMap {
        let aa = a.doubled();
        let rest = SmoothMap::proj(a, &aa, Side::Right);
        let q1 = SmoothMap::proj(a, &aa, Side::Left);
        let q2 = SmoothMap::compose(&SmoothMap::proj(a, a, Side::Left), &rest).unwrap();
        let q3 = SmoothMap::compose(&SmoothMap::proj(a, a, Side::Right), &rest).unwrap();
        SmoothMap::pair(
            &q1,
            &SmoothMap::lin_comb(&Scalar::one(), &q2, &Scalar::one(), &q3).unwrap(),
        )
        .unwrap()
    }

    /// `z : A -> A x A`, the zero tangent vector at each point.
    pub fn zero_section(a: &Shape) -> SmoothMap {
        SmoothMap::pair(&SmoothMap::identity(a), &SmoothMap::zero(a, a)).unwrap()
    }

    /// `l : A x A -> (A x A) x (A x A)`, placing the tangent vertically.
    pub fn vertical_lift(a: &Shape) -> SmoothMap {
        let aa = a.doubled();
        let z = SmoothMap::zero(&aa, a);
        SmoothMap::pair(
            &SmoothMap::pair(&SmoothMap::proj(a, a, Side::Left), &z).unwrap(),
            &SmoothMap::pair(&z, &SmoothMap::proj(a, a, Side::Right)).unwrap(),
        )
        .unwrap()
    }

    /// `c : (A x A) x (A x A) -> (A x A) x (A x A)`, swapping the two
    /// middle blocks.
    pub fn canonical_flip(a: &Shape) -> SmoothMap {
        let aa = a.doubled();
        let outer_l = SmoothMap::proj(&aa, &aa, Side::Left);
        let outer_r = SmoothMap::proj(&aa, &aa, Side::Right);
        let b = |side: Side, outer: &SmoothMap| {
            SmoothMap::compose(&SmoothMap::proj(a, a, side), outer).unwrap()
        };
        SmoothMap::pair(
            &SmoothMap::pair(&b(Side::Left, &outer_l), &b(Side::Left, &outer_r)).unwrap(),
            &SmoothMap::pair(&b(Side::Right, &outer_l), &b(Side::Right, &outer_r)).unwrap(),
        )
        .unwrap()
    }
}

/// Morphism check: `beta . S(f) = f . alpha`.
pub fn is_algebra_morphism(
    f: &SmoothMap,
    a: &Algebra,
    b: &Algebra,
    policy: &EqPolicy,
) -> Result<Verdict, TermError> {
    if f.dom() != &a.carrier || f.cod() != &b.carrier {
        return Err(TermError::ShapeMismatch {
            context: "algebra morphism",
            left: f.dom().clone(),
            right: a.carrier.clone(),
        });
    }
    let lhs = SmoothMap::compose(&b.alpha, &a.monad.on_map(f))?;
    let rhs = SmoothMap::compose(f, &a.alpha)?;
    maps_equal(&lhs, &rhs, policy)
}

/// Product of algebras: `(A x B, (alpha x beta) . omega)`.
pub fn product_algebra(a: &Algebra, b: &Algebra) -> Result<Algebra, TermError> {
    let structure = SmoothMap::compose(
        &SmoothMap::times(&a.alpha, &b.alpha),
        &a.monad.omega(&a.carrier, &b.carrier),
    )?;
    Ok(Algebra {
        monad: a.monad.clone(),
        carrier: Shape::prod(a.carrier.clone(), b.carrier.clone()),
        alpha: structure,
    })
}

/// The terminal algebra on the unit shape.
pub fn terminal_algebra(m: &Arc<MonadSpec>) -> Algebra {
    Algebra {
        monad: m.clone(),
        carrier: Shape::Unit,
        alpha: SmoothMap::zero(&m.on_obj(&Shape::Unit), &Shape::Unit),
    }
}

/// Differential-object test: the structure map must be differential linear,
/// and then the bundle projection `pi2`, the sum `pi1 + pi2`, and the zero
/// point are algebra morphisms from the appropriate algebras.
pub fn is_differential_object(
    a: &Algebra,
    cdm: &Cdm,
    policy: &EqPolicy,
) -> Result<Verdict, EmError> {
    let lawful = check_algebra(a, policy)?;
    if !lawful.equal {
        return Err(EmError::NotAnAlgebra(lawful));
    }
    let linear = is_d_linear(&a.alpha, policy)?;
    if !linear.equal {
        return Ok(linear);
    }
    let c = &a.carrier;
    let tangent = em_tangent(a, cdm, policy)?;
    let squared = product_algebra(a, a)?;

    let p2 = SmoothMap::proj(c, c, Side::Right);
    let v = is_algebra_morphism(&p2, &tangent, a, policy)?;
    if !v.equal {
        return Ok(v);
    }
    let sigma = SmoothMap::lin_comb(
        &Scalar::one(),
        &SmoothMap::proj(c, c, Side::Left),
        &Scalar::one(),
        &p2,
    )?;
    let v = is_algebra_morphism(&sigma, &squared, a, policy)?;
    if !v.equal {
        return Ok(v);
    }
    let zeta = SmoothMap::zero(&Shape::Unit, c);
    is_algebra_morphism(&zeta, &terminal_algebra(&a.monad), a, policy).map_err(EmError::from)
}

/// Embeds a Kleisli map as a morphism of free algebras:
/// `mu_B . S(carrier) : (S A, mu_A) -> (S B, mu_B)`.
pub fn embed(f: &KleisliMap, cdm: &Cdm) -> Result<(SmoothMap, Algebra, Algebra), KleisliError> {
    let kl = Kleisli::new(cdm.monad().clone());
    let src = free_algebra(cdm.monad(), f.dom());
    let dst = free_algebra(cdm.monad(), f.cod());
    let map = kl.forget(f);
    Ok((map, src, dst))
}

/// The full algebra-side suite for one validated differential monad.
pub fn check_em(cdm: &Cdm, cfg: &MonadCheckConfig) -> CheckReport {
    let m = cdm.monad().clone();
    let kl = Kleisli::new(m.clone());
    let mut cases: Vec<CheckCase> = Vec::new();
    let push = |cases: &mut Vec<CheckCase>, axiom: &str, trial: u32, seed: u64, v: &Verdict| {
        cases.push(CheckCase::from_verdict(axiom, trial, seed, v));
    };
    let policy = &cfg.policy;
    let to_verdict = |r: Result<Verdict, TermError>| -> Verdict {
        r.unwrap_or_else(|_| Verdict::failed(None, f64::INFINITY))
    };

    for trial in 0..cfg.trials {
        let stream = subseed(cfg.gen.seed, 0x7000 + u64::from(trial));
        let shape = gen_shape(&cfg.gen, stream);
        let free = free_algebra(&m, &shape);

        // free algebras satisfy the algebra laws
        let v = to_verdict(check_algebra(&free, policy));
        push(&mut cases, "free-algebra-laws", trial, stream, &v);

        // the tangent bundle of a lawful algebra is again lawful
        let tangent = match em_tangent(&free, cdm, policy) {
            Ok(t) => t,
            Err(_) => {
                push(
                    &mut cases,
                    "tangent-algebra-laws",
                    trial,
                    stream,
                    &Verdict::failed(None, f64::INFINITY),
                );
                continue;
            }
        };
        let v = to_verdict(check_algebra(&tangent, policy));
        push(&mut cases, "tangent-algebra-laws", trial, stream, &v);

        // tangent-structure transformations are algebra morphisms
        let c = free.carrier();
        let tangent2 = em_tangent(&tangent, cdm, policy).expect("tangent of lawful algebra");
        let fibre2 = em_tangent2(&free, cdm).expect("two-fold fibre");

        let v = to_verdict(is_algebra_morphism(
            &TangentData::projection(c),
            &tangent,
            &free,
            policy,
        ));
        push(&mut cases, "projection-morphism", trial, stream, &v);

        let v = to_verdict(is_algebra_morphism(
            &TangentData::zero_section(c),
            &free,
            &tangent,
            policy,
        ));
        push(&mut cases, "zero-section-morphism", trial, stream, &v);

        let v = to_verdict(is_algebra_morphism(
            &TangentData::fibre_sum(c),
            &fibre2,
            &tangent,
            policy,
        ));
        push(&mut cases, "fibre-sum-morphism", trial, stream, &v);

        let v = to_verdict(is_algebra_morphism(
            &TangentData::vertical_lift(c),
            &tangent,
            &tangent2,
            policy,
        ));
        push(&mut cases, "vertical-lift-morphism", trial, stream, &v);

        let v = to_verdict(is_algebra_morphism(
            &TangentData::canonical_flip(c),
            &tangent2,
            &tangent2,
            policy,
        ));
        push(&mut cases, "canonical-flip-morphism", trial, stream, &v);

        // free algebras are differential objects
        let v = match is_differential_object(&free, cdm, policy) {
            Ok(v) => v,
            Err(_) => Verdict::failed(None, f64::INFINITY),
        };
        push(&mut cases, "free-differential-object", trial, stream, &v);

        // differential linearity of the structure map is equivalent to the
        // tangent functor acting as the squared map
        let base = gen_shape(&cfg.gen, subseed(stream, 1));
        let lin = gen_linear_map(&cfg.gen, subseed(stream, 2), &m.on_obj(&base), &base);
        let both_linear = {
            let d_lin = to_verdict(is_d_linear(&lin, policy));
            let squared = to_verdict(maps_equal(
                &t_map(&lin),
                &SmoothMap::times(&lin, &lin),
                policy,
            ));
            Verdict {
                equal: d_lin.equal == squared.equal && d_lin.equal,
                witness: d_lin.witness.or(squared.witness),
                residual: d_lin.residual.max(squared.residual),
            }
        };
        push(&mut cases, "linearity-biconditional-linear", trial, stream, &both_linear);
        let nonlin = nonlinear_candidate(cfg, subseed(stream, 3), &m, &base);
        let both_nonlinear = {
            let d_lin = to_verdict(is_d_linear(&nonlin, policy));
            let squared = to_verdict(maps_equal(
                &t_map(&nonlin),
                &SmoothMap::times(&nonlin, &nonlin),
                policy,
            ));
            Verdict {
                equal: !d_lin.equal && !squared.equal,
                witness: d_lin.witness.clone().or(squared.witness),
                residual: d_lin.residual.max(squared.residual),
            }
        };
        push(
            &mut cases,
            "linearity-biconditional-nonlinear",
            trial,
            stream,
            &both_nonlinear,
        );

        // derivatives of morphisms between differential objects are
        // morphisms from the product algebra
        let other = gen_shape(&cfg.gen, subseed(stream, 4));
        let dst = free_algebra(&m, &other);
        let h = kl.gen_map(&cfg.gen, subseed(stream, 5), &shape, &other);
        let morphism = kl.forget(&h);
        let v = to_verdict(is_algebra_morphism(&morphism, &free, &dst, policy));
        push(&mut cases, "embedded-morphism", trial, stream, &v);
        let squared = product_algebra(&free, &free).unwrap();
        let v = to_verdict(is_algebra_morphism(&d(&morphism), &squared, &dst, policy));
        push(&mut cases, "derivative-morphism", trial, stream, &v);

        // the embedding is functorial and injective on distinct carriers
        let g = kl.gen_map(&cfg.gen, subseed(stream, 6), &other, &base);
        let composed = kl.compose(&g, &h).unwrap();
        let v = to_verdict(maps_equal(
            &kl.forget(&composed),
            &SmoothMap::compose(&kl.forget(&g), &kl.forget(&h)).unwrap(),
            policy,
        ));
        push(&mut cases, "embedding-functorial", trial, stream, &v);
        let h2 = kl.gen_map(&cfg.gen, subseed(stream, 7), &shape, &other);
        let distinct_carriers =
            !to_verdict(maps_equal(h.carrier(), h2.carrier(), policy)).equal;
        if distinct_carriers {
            let images_differ =
                !to_verdict(maps_equal(&kl.forget(&h), &kl.forget(&h2), policy)).equal;
            let v = if images_differ {
                Verdict::passed(0.0)
            } else {
                Verdict::failed(None, 0.0)
            };
            push(&mut cases, "embedding-faithful", trial, stream, &v);
        }
    }
    CheckReport::new(format!("em/{}", m.name()), cases)
}

// A structure-map candidate that is genuinely nonlinear: a generated map
// with a squared first coordinate mixed into its first component.
fn nonlinear_candidate(
    cfg: &MonadCheckConfig,
    stream: u64,
    m: &Arc<MonadSpec>,
    base: &Shape,
) -> SmoothMap {
    use crate::expr::ScalarExpr;
    let dom = m.on_obj(base);
    let generated = gen_map(&cfg.gen, stream, &dom, base);
    if dom.dim() == 0 || base.dim() == 0 {
        return generated;
    }
    let mut comps: Vec<ScalarExpr> = generated.comps().to_vec();
    comps[0] = (comps[0].clone() + ScalarExpr::pow(ScalarExpr::coord(0), 2))
    .normalize();
    SmoothMap::new(dom, base.clone(), comps).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ScalarExpr as E;
    use crate::monads::{constant_monad, identity_monad, tangent_monad};

    fn line() -> Shape {
        Shape::Line
    }

    fn cfg() -> MonadCheckConfig {
        MonadCheckConfig::with_trials(143, 3)
    }

    fn tangent_cdm() -> Cdm {
        Cdm::validate(tangent_monad(), &cfg()).unwrap()
    }

    #[test]
    fn free_algebras_are_lawful() {
        for m in [identity_monad(), constant_monad(), tangent_monad()] {
            for shape in [line(), line().doubled()] {
                let a = free_algebra(&m, &shape);
                assert!(check_algebra(&a, &EqPolicy::Exact).unwrap().equal);
            }
        }
        // the tangent free algebra on the line has the expected structure map
        let free = free_algebra(&tangent_monad(), &line());
        assert_eq!(free.carrier(), &line().doubled());
        assert_eq!(
            free.alpha().normalized().comps(),
            &[
                E::coord(0),
                E::Sum(vec![
                    (Scalar::one(), E::coord(1)),
                    (Scalar::one(), E::coord(2))
                ])
            ]
        );
    }

    #[test]
    fn identity_monad_algebras_are_identities() {
        let m = identity_monad();
        let a = Algebra::new(m, line(), SmoothMap::identity(&line())).unwrap();
        assert!(check_algebra(&a, &EqPolicy::Exact).unwrap().equal);
    }

    #[test]
    fn sum_structure_map_is_tested_not_assumed() {
        // alpha = pi1 + pi2 : T(Line) -> Line passes the unit law but not
        // associativity: alpha . mu adds three blocks, alpha . T(alpha) all
        // four. The checker must find a concrete witness.
        let m = tangent_monad();
        let alpha = SmoothMap::lin_comb(
            &Scalar::one(),
            &SmoothMap::proj(&line(), &line(), Side::Left),
            &Scalar::one(),
            &SmoothMap::proj(&line(), &line(), Side::Right),
        )
        .unwrap();
        let a = Algebra::new(m, line(), alpha).unwrap();
        let v = check_algebra(&a, &EqPolicy::Exact).unwrap();
        assert!(!v.equal);
        assert!(v.witness.is_some());
    }

    #[test]
    fn corrupted_structure_map_fails_with_witness() {
        let m = tangent_monad();
        let alpha = SmoothMap::new(
            line().doubled(),
            line(),
            vec![(E::coord(0) + E::pow(E::coord(1), 2))],
        )
        .unwrap();
        let a = Algebra::new(m, line(), alpha).unwrap();
        let v = check_algebra(&a, &EqPolicy::Exact).unwrap();
        assert!(!v.equal);
        assert!(v.witness.is_some());
    }

    #[test]
    fn em_tangent_of_identity_algebra_is_identity() {
        let m = identity_monad();
        let cdm = Cdm::validate(m.clone(), &cfg()).unwrap();
        let a = Algebra::new(m, line(), SmoothMap::identity(&line())).unwrap();
        let t = em_tangent(&a, &cdm, &EqPolicy::Exact).unwrap();
        assert_eq!(t.carrier(), &line().doubled());
        assert_eq!(
            t.alpha().normalized(),
            SmoothMap::identity(&line().doubled())
        );
    }

    #[test]
    fn em_tangent_of_free_tangent_algebra_is_lawful() {
        let cdm = tangent_cdm();
        let free = free_algebra(cdm.monad(), &line());
        let t = em_tangent(&free, &cdm, &EqPolicy::Exact).unwrap();
        assert!(check_algebra(&t, &EqPolicy::Exact).unwrap().equal);
    }

    #[test]
    fn em_tangent_rejects_non_algebras() {
        let cdm = tangent_cdm();
        let alpha = SmoothMap::new(
            line().doubled(),
            line(),
            vec![E::pow(E::coord(0), 2)],
        )
        .unwrap();
        let bad = Algebra::new(tangent_monad(), line(), alpha).unwrap();
        assert!(matches!(
            em_tangent(&bad, &cdm, &EqPolicy::Exact),
            Err(EmError::NotAnAlgebra(_))
        ));
    }

    #[test]
    fn linear_structure_maps_give_squared_tangent_bundles() {
        // when alpha is differential linear, T(alpha) . omega is
        // (alpha x alpha) . omega
        let cdm = tangent_cdm();
        let free = free_algebra(cdm.monad(), &line());
        assert!(is_d_linear(free.alpha(), &EqPolicy::Exact).unwrap().equal);
        let t = em_tangent(&free, &cdm, &EqPolicy::Exact).unwrap();
        let squared = product_algebra(&free, &free).unwrap();
        let v = maps_equal(t.alpha(), squared.alpha(), &EqPolicy::Exact).unwrap();
        assert!(v.equal);
    }

    #[test]
    fn morphism_checks() {
        let cdm = tangent_cdm();
        let m = cdm.monad();
        let free = free_algebra(m, &line());
        // the identity is a morphism
        let v = is_algebra_morphism(
            &SmoothMap::identity(free.carrier()),
            &free,
            &free,
            &EqPolicy::Exact,
        )
        .unwrap();
        assert!(v.equal);
        // the multiplication is a morphism from the doubly free algebra
        let free2 = free_algebra(m, &m.on_obj(&line()));
        let v = is_algebra_morphism(&m.mu(&line()), &free2, &free, &EqPolicy::Exact).unwrap();
        assert!(v.equal);
    }

    #[test]
    fn free_algebras_are_differential_objects() {
        let cdm = tangent_cdm();
        for shape in [line(), line().doubled()] {
            let free = free_algebra(cdm.monad(), &shape);
            let v = is_differential_object(&free, &cdm, &EqPolicy::Exact).unwrap();
            assert!(v.equal);
        }
        // identity-monad algebras are always differential objects
        let id = identity_monad();
        let id_cdm = Cdm::validate(id.clone(), &cfg()).unwrap();
        let a = Algebra::new(id, line(), SmoothMap::identity(&line())).unwrap();
        assert!(is_differential_object(&a, &id_cdm, &EqPolicy::Exact)
            .unwrap()
            .equal);
    }

    #[test]
    fn differential_object_check_requires_lawful_algebras() {
        // a nonlinear candidate cannot even be an algebra for the identity
        // monad, so the differential-object test reports the law failure
        let id = identity_monad();
        let id_cdm = Cdm::validate(id.clone(), &cfg()).unwrap();
        let alpha =
            SmoothMap::new(line(), line(), vec![(E::coord(0) + E::pow(E::coord(0), 2))])
                .unwrap();
        let a = Algebra::new(id, line(), alpha).unwrap();
        assert!(matches!(
            is_differential_object(&a, &id_cdm, &EqPolicy::Exact),
            Err(EmError::NotAnAlgebra(_))
        ));
    }

    #[test]
    fn embedding_examples() {
        let cdm = tangent_cdm();
        let kl = Kleisli::new(cdm.monad().clone());
        // the embedding of the Kleisli identity is the identity morphism
        let (map, src, dst) = embed(&kl.id(&line()), &cdm).unwrap();
        assert_eq!(src.carrier(), dst.carrier());
        assert_eq!(map, SmoothMap::identity(src.carrier()));
        // embedded maps are morphisms landing in differential objects
        let f = kl.gen_map(
            &crate::harness::gen::RandomMapConfig::polynomial(5),
            0,
            &line(),
            &line(),
        );
        let (map, src, dst) = embed(&f, &cdm).unwrap();
        assert!(is_algebra_morphism(&map, &src, &dst, &EqPolicy::Exact)
            .unwrap()
            .equal);
        assert!(is_differential_object(&dst, &cdm, &EqPolicy::Exact)
            .unwrap()
            .equal);
    }

    #[test]
    fn em_suite_passes_for_shipped_monads() {
        for m in [identity_monad(), constant_monad(), tangent_monad()] {
            let cdm = Cdm::validate(m, &cfg()).unwrap();
            let report = check_em(&cdm, &cfg());
            assert!(
                report.passed,
                "{}: {:?}",
                cdm.monad().name(),
                report.failing_axioms()
            );
        }
    }
}
