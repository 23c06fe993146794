//! Generalized vector fields: Kleisli maps of the tangent-bundle monad.
//!
//! A field is a pair of parallel maps `<f1, f2> : A -> B x B`; a strict
//! vector field has `f1` the identity. This module carries the direct
//! composition formula
//! `<g1 . f1, g2 . f1 + d(g1) . <f1, f2> + d(g2) . <f1, f2>>` so it can be
//! cross-checked against generic Kleisli composition. The field view is
//! transparent over the Kleisli map, never a second source of truth.

use crate::diffop::d;
use crate::error::TermError;
use crate::kleisli::{Kleisli, KleisliError, KleisliMap};
use crate::monads::tangent_monad;
use crate::scalar::Scalar;
use crate::smooth::{maps_equal, EqPolicy, Side, SmoothMap, Verdict};

#[derive(Clone, Debug)]
pub struct GenVectorField {
    f1: SmoothMap,
    f2: SmoothMap,
}

impl GenVectorField {
    pub fn new(f1: SmoothMap, f2: SmoothMap) -> Result<GenVectorField, TermError> {
        if f1.dom() != f2.dom() || f1.cod() != f2.cod() {
            return Err(TermError::ShapeMismatch {
                context: "vector field components",
                left: f1.cod().clone(),
                right: f2.cod().clone(),
            });
        }
        Ok(GenVectorField { f1, f2 })
    }

    pub fn base(&self) -> &SmoothMap {
        &self.f1
    }

    pub fn tangent(&self) -> &SmoothMap {
        &self.f2
    }

    pub fn dom(&self) -> &crate::shape::Shape {
        self.f1.dom()
    }

    pub fn cod(&self) -> &crate::shape::Shape {
        self.f1.cod()
    }

    /// A strict vector field keeps the base point fixed.
    pub fn is_strict(&self) -> bool {
        self.f1.normalized() == SmoothMap::identity(self.f1.dom())
    }

    /// The corresponding Kleisli map of the given tangent-bundle monad, with
    /// carrier `<f1, f2>`.
    pub fn to_kleisli(&self, kl: &Kleisli) -> Result<KleisliMap, KleisliError> {
        let carrier = SmoothMap::pair(&self.f1, &self.f2)?;
        kl.from_carrier(self.f1.dom().clone(), self.f1.cod().clone(), carrier)
    }

    /// Splits a tangent-monad Kleisli map back into its two components.
    pub fn from_kleisli(f: &KleisliMap) -> Result<GenVectorField, TermError> {
        let cod = f.cod();
        let f1 = SmoothMap::compose(&SmoothMap::proj(cod, cod, Side::Left), f.carrier())?;
        let f2 = SmoothMap::compose(&SmoothMap::proj(cod, cod, Side::Right), f.carrier())?;
        GenVectorField::new(f1, f2)
    }
}

/// Direct composition formula for generalized vector fields:
/// `<g1 . f1, g2 . f1 + d(g1) . <f1, f2>>`.
///
/// This is the literal unfolding of Kleisli composition through the tangent
/// monad: the functor takes `<g1, g2>` to its base-and-derivative pair, and
/// the multiplication keeps the base block plus the sum of the second and
/// third blocks, so only the derivative of `g1` meets the tangent part of
/// `f`. Any extra derivative summand would break associativity.
pub fn vf_compose(
    g: &GenVectorField,
    f: &GenVectorField,
) -> Result<GenVectorField, TermError> {
    if f.cod() != g.dom() {
        return Err(TermError::ShapeMismatch {
            context: "vf_compose",
            left: g.dom().clone(),
            right: f.cod().clone(),
        });
    }
    let pair_f = SmoothMap::pair(&f.f1, &f.f2)?;
    let base = SmoothMap::compose(&g.f1, &f.f1)?;
    let term1 = SmoothMap::compose(&g.f2, &f.f1)?;
    let term2 = SmoothMap::compose(&d(&g.f1), &pair_f)?;
    let one = Scalar::one();
    let tangent = SmoothMap::lin_comb(&one, &term1, &one, &term2)?;
    GenVectorField::new(base, tangent)
}

/// Componentwise derivative; the domain doubles and strictness is lost.
pub fn vf_d(f: &GenVectorField) -> GenVectorField {
    GenVectorField {
        f1: d(&f.f1),
        f2: d(&f.f2),
    }
}

/// Asserts that the direct formula agrees with generic Kleisli composition
/// under the tangent-bundle monad.
pub fn vf_cross_check(
    g: &GenVectorField,
    f: &GenVectorField,
    policy: &EqPolicy,
) -> Result<Verdict, KleisliError> {
    let kl = Kleisli::new(tangent_monad());
    let direct = vf_compose(g, f).map_err(KleisliError::Term)?;
    let generic = kl.compose(&g.to_kleisli(&kl)?, &f.to_kleisli(&kl)?)?;
    let direct_carrier = SmoothMap::pair(&direct.f1, &direct.f2).map_err(KleisliError::Term)?;
    Ok(maps_equal(&direct_carrier, generic.carrier(), policy)?)
}

/// Shared tangent-monad Kleisli category, for callers composing many fields.
pub fn tangent_kleisli() -> Kleisli {
    Kleisli::new(tangent_monad())
}

/// The non-thunkable sample field `<1, x0^2>` on the line.
pub fn quadratic_strict_field() -> GenVectorField {
    use crate::expr::ScalarExpr as E;
    let line = crate::shape::Shape::Line;
    GenVectorField::new(
        SmoothMap::identity(&line),
        SmoothMap::new(line.clone(), line, vec![E::pow(E::coord(0), 2)]).unwrap(),
    )
    .unwrap()
}

/// Strict one-dimensional field `x |-> (x, v2(x))` from a scalar expression.
pub fn strict_field_1d(v2: SmoothMap) -> Result<GenVectorField, TermError> {
    GenVectorField::new(SmoothMap::identity(v2.dom()), v2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ScalarExpr as E;
    use crate::harness::gen::{gen_map, RandomMapConfig};
    use crate::seeding::subseed;
    use crate::shape::Shape;

    fn line() -> Shape {
        Shape::Line
    }

    fn scalar_map(e: E) -> SmoothMap {
        SmoothMap::new(line(), line(), vec![e]).unwrap()
    }

    // w . v for strict 1-d fields: the tangent parts add, (x, w2(x) + v2(x)).
    fn strict_closed_form(w2: &SmoothMap, v2: &SmoothMap) -> GenVectorField {
        let one = Scalar::one();
        let tangent = SmoothMap::lin_comb(&one, w2, &one, v2).unwrap();
        GenVectorField::new(SmoothMap::identity(&line()), tangent).unwrap()
    }

    #[test]
    fn strict_fields_compose_by_adding_tangent_parts() {
        // v2 = x^2, w2 = x^3 gives (x, x^2 + x^3)
        let v = strict_field_1d(scalar_map(E::pow(E::coord(0), 2))).unwrap();
        let w = strict_field_1d(scalar_map(E::pow(E::coord(0), 3))).unwrap();
        let wv = vf_compose(&w, &v).unwrap();
        assert_eq!(wv.base().normalized(), SmoothMap::identity(&line()));
        let expected = scalar_map(E::Sum(vec![
            (Scalar::one(), E::pow(E::coord(0), 2)),
            (Scalar::one(), E::pow(E::coord(0), 3)),
        ]));
        assert_eq!(wv.tangent().normalized(), expected.normalized());
        // strict fields therefore compose commutatively
        let vw = vf_compose(&v, &w).unwrap();
        assert_eq!(vw.tangent().normalized(), wv.tangent().normalized());
        // and match the closed form on random polynomial pairs
        let cfg = RandomMapConfig::polynomial(61);
        for t in 0..12u64 {
            let v2 = gen_map(&cfg, subseed(1, t), &line(), &line());
            let w2 = gen_map(&cfg, subseed(2, t), &line(), &line());
            let via_formula = vf_compose(
                &strict_field_1d(w2.clone()).unwrap(),
                &strict_field_1d(v2.clone()).unwrap(),
            )
            .unwrap();
            let closed = strict_closed_form(&w2, &v2);
            assert_eq!(
                via_formula.tangent().normalized(),
                closed.tangent().normalized()
            );
        }
    }

    #[test]
    fn kleisli_identity_is_a_unit_for_fields() {
        let id_field = strict_field_1d(SmoothMap::zero(&line(), &line())).unwrap();
        let v = strict_field_1d(scalar_map(E::pow(E::coord(0), 2))).unwrap();
        let left = vf_compose(&id_field, &v).unwrap();
        let right = vf_compose(&v, &id_field).unwrap();
        for got in [left, right] {
            assert_eq!(got.base().normalized(), v.base().normalized());
            assert_eq!(got.tangent().normalized(), v.tangent().normalized());
        }
    }

    #[test]
    fn derivative_of_the_unit_field_and_strictness_loss() {
        // d of <1, 0> is <pi2, 0>
        let unit = strict_field_1d(SmoothMap::zero(&line(), &line())).unwrap();
        let du = vf_d(&unit);
        assert_eq!(
            du.base().normalized(),
            SmoothMap::proj(&line(), &line(), Side::Right)
        );
        assert_eq!(
            du.tangent().normalized(),
            SmoothMap::zero(&line().doubled(), &line())
        );
        // the derivative of a strict field is not strict
        let v = strict_field_1d(scalar_map(E::pow(E::coord(0), 2))).unwrap();
        assert!(v.is_strict());
        assert!(!vf_d(&v).is_strict());
    }

    #[test]
    fn derivative_agrees_with_the_kleisli_combinator() {
        let kl = tangent_kleisli();
        let v = quadratic_strict_field();
        let via_field = vf_d(&v);
        let via_kleisli = kl.d(&v.to_kleisli(&kl).unwrap());
        let carrier = SmoothMap::pair(via_field.base(), via_field.tangent()).unwrap();
        assert!(
            maps_equal(&carrier, via_kleisli.carrier(), &EqPolicy::Exact)
                .unwrap()
                .equal
        );
    }

    #[test]
    fn cross_check_on_random_polynomial_fields() {
        let cfg = RandomMapConfig::polynomial(67);
        for t in 0..15u64 {
            let dims = (t % 3 + 1) as usize;
            let mut shape = Shape::Line;
            for _ in 1..dims {
                shape = Shape::prod(shape, Shape::Line);
            }
            let f = GenVectorField::new(
                gen_map(&cfg, subseed(3, t), &shape, &shape),
                gen_map(&cfg, subseed(4, t), &shape, &shape),
            )
            .unwrap();
            let g = GenVectorField::new(
                gen_map(&cfg, subseed(5, t), &shape, &shape),
                gen_map(&cfg, subseed(6, t), &shape, &shape),
            )
            .unwrap();
            let v = vf_cross_check(&g, &f, &EqPolicy::Exact).unwrap();
            assert!(v.equal, "trial {t}");
        }
    }

    #[test]
    fn cross_check_on_transcendental_fields() {
        let cfg = RandomMapConfig::transcendental(68);
        for t in 0..8u64 {
            let f = GenVectorField::new(
                gen_map(&cfg, subseed(7, t), &line(), &line()),
                gen_map(&cfg, subseed(8, t), &line(), &line()),
            )
            .unwrap();
            let g = GenVectorField::new(
                gen_map(&cfg, subseed(9, t), &line(), &line()),
                gen_map(&cfg, subseed(10, t), &line(), &line()),
            )
            .unwrap();
            let v = vf_cross_check(&g, &f, &EqPolicy::sampled(subseed(11, t))).unwrap();
            assert!(v.equal, "trial {t}: residual {}", v.residual);
        }
    }

    #[test]
    fn composition_is_associative_and_unital() {
        let cfg = RandomMapConfig::polynomial(69);
        for t in 0..8u64 {
            let mk = |tag: u64| {
                GenVectorField::new(
                    gen_map(&cfg, subseed(tag, t), &line(), &line()),
                    gen_map(&cfg, subseed(tag + 50, t), &line(), &line()),
                )
                .unwrap()
            };
            let f = mk(12);
            let g = mk(13);
            let h = mk(14);
            let lhs = vf_compose(&h, &vf_compose(&g, &f).unwrap()).unwrap();
            let rhs = vf_compose(&vf_compose(&h, &g).unwrap(), &f).unwrap();
            assert_eq!(lhs.base().normalized(), rhs.base().normalized());
            assert_eq!(lhs.tangent().normalized(), rhs.tangent().normalized());
        }
    }

    #[test]
    fn kleisli_view_round_trips() {
        let kl = tangent_kleisli();
        let v = quadratic_strict_field();
        let k = v.to_kleisli(&kl).unwrap();
        let back = GenVectorField::from_kleisli(&k).unwrap();
        assert_eq!(back.base().normalized(), v.base().normalized());
        assert_eq!(back.tangent().normalized(), v.tangent().normalized());
    }
}
