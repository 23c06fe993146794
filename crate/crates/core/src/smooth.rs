//! Smooth maps: typed tuples of scalar expressions.
//!
//! A `SmoothMap` from shape `A` to shape `B` carries one expression per line
//! leaf of `B`, each over the coordinates of `A`. Composition is
//! substitution, the hom-sets form modules over the rationals, and the
//! product structure is the evident one on components. `maps_equal` is the
//! equality oracle every law check in the crate reduces to: exact normal-form
//! comparison on the polynomial fragment, seeded sampling otherwise.

use crate::error::TermError;
use crate::expr::ScalarExpr;
use crate::scalar::Scalar;
use crate::seeding::stream_rng;
use crate::shape::Shape;
use rand::Rng;
use std::fmt;

/// Which projection of a binary product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A map of the base category.
#[derive(Clone, PartialEq, Eq)]
pub struct SmoothMap {
    dom: Shape,
    cod: Shape,
    comps: Vec<ScalarExpr>,
}

impl SmoothMap {
    /// Builds a map, validating component count and coordinate indices.
    pub fn new(dom: Shape, cod: Shape, comps: Vec<ScalarExpr>) -> Result<SmoothMap, TermError> {
        if comps.len() != cod.dim() {
            return Err(TermError::DimensionMismatch {
                expected: cod.dim(),
                got: comps.len(),
            });
        }
        let n = dom.dim();
        for e in &comps {
            if let Some(i) = e.max_coord() {
                if i >= n {
                    return Err(TermError::DimensionMismatch {
                        expected: n,
                        got: i + 1,
                    });
                }
            }
        }
        Ok(SmoothMap { dom, cod, comps })
    }

    pub fn dom(&self) -> &Shape {
        &self.dom
    }

    pub fn cod(&self) -> &Shape {
        &self.cod
    }

    pub fn comps(&self) -> &[ScalarExpr] {
        &self.comps
    }

    pub fn has_transcendental(&self) -> bool {
        self.comps.iter().any(|e| e.has_transcendental())
    }

    /// The same map with every component in canonical form.
    pub fn normalized(&self) -> SmoothMap {
        SmoothMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            comps: self.comps.iter().map(|e| e.normalize()).collect(),
        }
    }

    pub fn identity(s: &Shape) -> SmoothMap {
        SmoothMap {
            dom: s.clone(),
            cod: s.clone(),
            comps: (0..s.dim()).map(ScalarExpr::coord).collect(),
        }
    }

    pub fn zero(dom: &Shape, cod: &Shape) -> SmoothMap {
        SmoothMap {
            dom: dom.clone(),
            cod: cod.clone(),
            comps: (0..cod.dim()).map(|_| ScalarExpr::zero()).collect(),
        }
    }

    /// Projection out of `Prod(a, b)`.
    pub fn proj(a: &Shape, b: &Shape, side: Side) -> SmoothMap {
        let dom = Shape::prod(a.clone(), b.clone());
        let (cod, offset) = match side {
            Side::Left => (a.clone(), 0),
            Side::Right => (b.clone(), a.dim()),
        };
        let comps = (0..cod.dim()).map(|i| ScalarExpr::coord(offset + i)).collect();
        SmoothMap { dom, cod, comps }
    }

    /// Pairing into a product codomain; domains must agree.
    pub fn pair(f: &SmoothMap, g: &SmoothMap) -> Result<SmoothMap, TermError> {
        if f.dom != g.dom {
            return Err(TermError::ShapeMismatch {
                context: "pair",
                left: f.dom.clone(),
                right: g.dom.clone(),
            });
        }
        let mut comps = f.comps.clone();
        comps.extend(g.comps.iter().cloned());
        Ok(SmoothMap {
            dom: f.dom.clone(),
            cod: Shape::prod(f.cod.clone(), g.cod.clone()),
            comps,
        })
    }

    /// Composition `g . f` by substitution; `f.cod` must equal `g.dom` as a
    /// tree. The result is normalized.
    pub fn compose(g: &SmoothMap, f: &SmoothMap) -> Result<SmoothMap, TermError> {
        if f.cod != g.dom {
            return Err(TermError::ShapeMismatch {
                context: "compose",
                left: g.dom.clone(),
                right: f.cod.clone(),
            });
        }
        let comps = g
            .comps
            .iter()
            .map(|e| e.subst(&f.comps).normalize())
            .collect();
        Ok(SmoothMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            comps,
        })
    }

    /// Module structure on a hom-set: `r*f + s*g` for parallel maps.
    pub fn lin_comb(
        r: &Scalar,
        f: &SmoothMap,
        s: &Scalar,
        g: &SmoothMap,
    ) -> Result<SmoothMap, TermError> {
        if f.dom != g.dom || f.cod != g.cod {
            return Err(TermError::ShapeMismatch {
                context: "lin_comb",
                left: Shape::prod(f.dom.clone(), f.cod.clone()),
                right: Shape::prod(g.dom.clone(), g.cod.clone()),
            });
        }
        let comps = f
            .comps
            .iter()
            .zip(&g.comps)
            .map(|(a, b)| {
                ScalarExpr::Sum(vec![(r.clone(), a.clone()), (s.clone(), b.clone())]).normalize()
            })
            .collect();
        Ok(SmoothMap {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            comps,
        })
    }

    /// Product of maps: `f x g : A x C -> B x D`.
    pub fn times(f: &SmoothMap, g: &SmoothMap) -> SmoothMap {
        let pl = SmoothMap::proj(&f.dom, &g.dom, Side::Left);
        let pr = SmoothMap::proj(&f.dom, &g.dom, Side::Right);
        let left = SmoothMap::compose(f, &pl).expect("times: left leg");
        let right = SmoothMap::compose(g, &pr).expect("times: right leg");
        SmoothMap::pair(&left, &right).expect("times: pairing")
    }

    /// Constant map at a rational point of `cod`.
    pub fn constant(dom: &Shape, cod: &Shape, values: &[Scalar]) -> Result<SmoothMap, TermError> {
        if values.len() != cod.dim() {
            return Err(TermError::DimensionMismatch {
                expected: cod.dim(),
                got: values.len(),
            });
        }
        Ok(SmoothMap {
            dom: dom.clone(),
            cod: cod.clone(),
            comps: values.iter().map(|c| ScalarExpr::Const(c.clone())).collect(),
        })
    }

    /// Componentwise floating-point evaluation.
    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>, TermError> {
        if point.len() != self.dom.dim() {
            return Err(TermError::DimensionMismatch {
                expected: self.dom.dim(),
                got: point.len(),
            });
        }
        Ok(self.comps.iter().map(|e| e.eval_f64(point)).collect())
    }

    /// Componentwise exact evaluation; fails on transcendental nodes.
    pub fn eval_exact(&self, point: &[Scalar]) -> Result<Vec<Scalar>, TermError> {
        if point.len() != self.dom.dim() {
            return Err(TermError::DimensionMismatch {
                expected: self.dom.dim(),
                got: point.len(),
            });
        }
        self.comps.iter().map(|e| e.eval_exact(point)).collect()
    }
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.dom, self.cod, self.comps)
    }
}

/// Map-equality policy.
#[derive(Clone, Debug, PartialEq)]
pub enum EqPolicy {
    /// Normal-form identity; polynomial fragment only.
    Exact,
    /// Seeded evaluation at uniform points of a box around the origin.
    Sampled {
        num_points: usize,
        seed: u64,
        box_halfwidth: f64,
        abs_tol: f64,
        rel_tol: f64,
    },
}

impl EqPolicy {
    /// Default sampling policy: 32 points in [-1.5, 1.5]^n, tolerances 1e-9.
    pub fn sampled(seed: u64) -> EqPolicy {
        EqPolicy::Sampled {
            num_points: 32,
            seed,
            box_halfwidth: 1.5,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        }
    }

    pub fn sampled_with_tol(seed: u64, tol: f64) -> EqPolicy {
        EqPolicy::Sampled {
            num_points: 32,
            seed,
            box_halfwidth: 1.5,
            abs_tol: tol,
            rel_tol: tol,
        }
    }

    /// Exact when both maps are polynomial, default sampling otherwise.
    pub fn auto_for(f: &SmoothMap, g: &SmoothMap, seed: u64) -> EqPolicy {
        if f.has_transcendental() || g.has_transcendental() {
            EqPolicy::sampled(seed)
        } else {
            EqPolicy::Exact
        }
    }
}

/// Outcome of an equality check or a single law instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub equal: bool,
    pub witness: Option<Vec<f64>>,
    pub residual: f64,
}

impl Verdict {
    pub fn passed(residual: f64) -> Verdict {
        Verdict {
            equal: true,
            witness: None,
            residual,
        }
    }

    pub fn failed(witness: Option<Vec<f64>>, residual: f64) -> Verdict {
        Verdict {
            equal: false,
            witness,
            residual,
        }
    }
}

/// Decides whether two parallel maps denote the same function.
///
/// Exact mode compares normal forms and, on mismatch, searches for a rational
/// witness point. Sampled mode draws `num_points` points from the seeded box
/// and accepts when every component residual is within
/// `abs_tol + rel_tol * max(|lhs|, |rhs|)`.
pub fn maps_equal(f: &SmoothMap, g: &SmoothMap, policy: &EqPolicy) -> Result<Verdict, TermError> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(TermError::ShapeMismatch {
            context: "maps_equal",
            left: f.dom().clone(),
            right: g.dom().clone(),
        });
    }
    match policy {
        EqPolicy::Exact => {
            if f.has_transcendental() || g.has_transcendental() {
                return Err(TermError::ExactModeUnsupportedPrimitive);
            }
            let fun = f.normalized();
            let gun = g.normalized();
            if fun.comps == gun.comps {
                Ok(Verdict::passed(0.0))
            } else {
                let diff = SmoothMap::lin_comb(&Scalar::one(), &fun, &(-Scalar::one()), &gun)?;
                Ok(exact_witness(&diff))
            }
        }
        EqPolicy::Sampled {
            num_points,
            seed,
            box_halfwidth,
            abs_tol,
            rel_tol,
        } => {
            let dim = f.dom().dim();
            let mut max_residual = 0.0f64;
            for idx in 0..*num_points {
                let mut rng = stream_rng(*seed, idx as u64);
                let point: Vec<f64> = (0..dim)
                    .map(|_| rng.gen_range(-box_halfwidth..=*box_halfwidth))
                    .collect();
                let lhs = f.eval(&point)?;
                let rhs = g.eval(&point)?;
                for (l, r) in lhs.iter().zip(&rhs) {
                    let residual = (l - r).abs();
                    let bound = abs_tol + rel_tol * l.abs().max(r.abs());
                    if residual > bound || residual.is_nan() {
                        return Ok(Verdict::failed(Some(point), residual));
                    }
                    max_residual = max_residual.max(residual);
                }
            }
            Ok(Verdict::passed(max_residual))
        }
    }
}

// Searches for a rational point where a nonzero polynomial difference map is
// nonzero. Tries a 5-point grid per coordinate when the grid is small enough,
// then falls back to seeded random rational points.
fn exact_witness(diff: &SmoothMap) -> Verdict {
    let dim = diff.dom().dim();
    let grid = [-2i64, -1, 0, 1, 2];
    let grid_size = 5usize.checked_pow(dim as u32).unwrap_or(usize::MAX);
    if grid_size <= 100_000 {
        let mut indices = vec![0usize; dim];
        loop {
            let point: Vec<Scalar> = indices.iter().map(|&i| Scalar::from_int(grid[i])).collect();
            if let Some(v) = nonzero_at(diff, &point) {
                return Verdict::failed(Some(point.iter().map(Scalar::to_f64).collect()), v);
            }
            // advance odometer
            let mut k = 0;
            loop {
                if k == dim {
                    return Verdict::failed(None, 0.0);
                }
                indices[k] += 1;
                if indices[k] < grid.len() {
                    break;
                }
                indices[k] = 0;
                k += 1;
            }
        }
    } else {
        for t in 0..512u64 {
            let mut rng = stream_rng(0x5EED_CAFE, t);
            let point: Vec<Scalar> = (0..dim)
                .map(|_| {
                    let num = rng.gen_range(-8i64..=8);
                    let den = rng.gen_range(1i64..=3);
                    Scalar::ratio(num, den).unwrap()
                })
                .collect();
            if let Some(v) = nonzero_at(diff, &point) {
                return Verdict::failed(Some(point.iter().map(Scalar::to_f64).collect()), v);
            }
        }
        Verdict::failed(None, 0.0)
    }
}

fn nonzero_at(diff: &SmoothMap, point: &[Scalar]) -> Option<f64> {
    let values = diff.eval_exact(point).ok()?;
    values
        .iter()
        .find(|v| !v.is_zero())
        .map(|v| v.to_f64().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ScalarExpr as E;

    fn line() -> Shape {
        Shape::Line
    }

    fn line2() -> Shape {
        Shape::prod(Shape::Line, Shape::Line)
    }

    fn sq() -> SmoothMap {
        // x0 * x0 on Line -> Line
        SmoothMap::new(
            line(),
            line(),
            vec![(E::coord(0) * E::coord(0))],
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(sq().eval(&[3.0]).unwrap(), vec![9.0]);
        let f = SmoothMap::new(line(), line2(), vec![E::coord(0), E::zero()]).unwrap();
        assert_eq!(f.eval(&[5.0]).unwrap(), vec![5.0, 0.0]);
        let s = SmoothMap::new(line(), line(), vec![E::sin(E::coord(0))]).unwrap();
        assert_eq!(s.eval(&[0.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn eval_checks_dimensions() {
        assert_eq!(
            sq().eval(&[1.0, 2.0]).unwrap_err(),
            TermError::DimensionMismatch {
                expected: 1,
                got: 2
            }
        );
    }

    #[test]
    fn exact_eval_rejects_transcendental() {
        let s = SmoothMap::new(line(), line(), vec![E::sin(E::coord(0))]).unwrap();
        assert_eq!(
            s.eval_exact(&[Scalar::zero()]).unwrap_err(),
            TermError::ExactModeUnsupportedPrimitive
        );
    }

    #[test]
    fn construction_validates_coord_indices() {
        assert!(SmoothMap::new(line(), line(), vec![E::coord(1)]).is_err());
    }

    #[test]
    fn compose_identity_law() {
        let f = sq();
        let idl = SmoothMap::compose(&SmoothMap::identity(&line()), &f).unwrap();
        let idr = SmoothMap::compose(&f, &SmoothMap::identity(&line())).unwrap();
        assert_eq!(idl, f.normalized());
        assert_eq!(idr, f.normalized());
    }

    #[test]
    fn compose_expands_substitution() {
        // g = x0^2, f = x0 + 1: g.f = x0^2 + 2 x0 + 1
        let g = sq();
        let f = SmoothMap::new(line(), line(), vec![(E::coord(0) + E::one())]).unwrap();
        let gf = SmoothMap::compose(&g, &f).unwrap();
        let expected = SmoothMap::new(
            line(),
            line(),
            vec![E::Sum(vec![
                (Scalar::one(), E::one()),
                (Scalar::from_int(2), E::coord(0)),
                (Scalar::one(), E::pow(E::coord(0), 2)),
            ])],
        )
        .unwrap();
        assert_eq!(gf, expected);
        // exact evaluation agrees at three rational sample points
        for v in [0i64, 2, -3] {
            let p = [Scalar::from_int(v)];
            let inner = f.eval_exact(&p).unwrap();
            assert_eq!(gf.eval_exact(&p).unwrap(), g.eval_exact(&inner).unwrap());
        }
    }

    #[test]
    fn product_laws() {
        let f = sq();
        let g = SmoothMap::new(line(), line(), vec![(E::coord(0) + E::one())]).unwrap();
        let pairing = SmoothMap::pair(&f, &g).unwrap();
        let pl = SmoothMap::proj(&line(), &line(), Side::Left);
        let pr = SmoothMap::proj(&line(), &line(), Side::Right);
        // beta
        assert_eq!(
            SmoothMap::compose(&pl, &pairing).unwrap(),
            f.normalized()
        );
        assert_eq!(
            SmoothMap::compose(&pr, &pairing).unwrap(),
            g.normalized()
        );
        // eta: pairing the projections gives the identity
        let eta = SmoothMap::pair(&pl, &pr).unwrap();
        assert_eq!(eta, SmoothMap::identity(&line2()));
        // projection out of Prod(Line, Unit) is the identity on coordinates
        let pu = SmoothMap::proj(&line(), &Shape::Unit, Side::Left);
        assert_eq!(pu.comps(), &[E::coord(0)]);
    }

    #[test]
    fn lin_comb_module_laws() {
        let f = sq();
        let g = SmoothMap::new(line(), line(), vec![E::coord(0)]).unwrap();
        let unit = SmoothMap::lin_comb(&Scalar::one(), &f, &Scalar::zero(), &g).unwrap();
        assert_eq!(unit, f.normalized());
        let zero = SmoothMap::lin_comb(&Scalar::zero(), &f, &Scalar::zero(), &g).unwrap();
        assert_eq!(zero, SmoothMap::zero(&line(), &line()));
        let five = SmoothMap::lin_comb(&Scalar::from_int(2), &g, &Scalar::from_int(3), &g).unwrap();
        let expected =
            SmoothMap::new(line(), line(), vec![E::scale(Scalar::from_int(5), E::coord(0))])
                .unwrap();
        assert_eq!(five, expected);
    }

    #[test]
    fn maps_equal_exact_and_witness() {
        let f = SmoothMap::new(line(), line(), vec![E::pow(E::coord(0), 2)]).unwrap();
        let v = maps_equal(&f, &sq(), &EqPolicy::Exact).unwrap();
        assert!(v.equal);

        let g = SmoothMap::new(line(), line(), vec![(E::coord(0) + E::one())]).unwrap();
        let id = SmoothMap::identity(&line());
        let v = maps_equal(&id, &g, &EqPolicy::Exact).unwrap();
        assert!(!v.equal);
        assert!(v.witness.is_some());
        let v = maps_equal(&id, &g, &EqPolicy::sampled(3)).unwrap();
        assert!(!v.equal);
        assert!(v.witness.is_some());
    }

    #[test]
    fn double_angle_identity_sampled() {
        // sin(2 x0) = 2 sin(x0) cos(x0)
        let lhs = SmoothMap::new(
            line(),
            line(),
            vec![E::sin(E::scale(Scalar::from_int(2), E::coord(0)))],
        )
        .unwrap();
        let rhs = SmoothMap::new(
            line(),
            line(),
            vec![E::scale(
                Scalar::from_int(2),
                E::sin(E::coord(0)) * E::cos(E::coord(0)),
            )],
        )
        .unwrap();
        let policy = EqPolicy::Sampled {
            num_points: 32,
            seed: 7,
            box_halfwidth: 1.5,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        };
        assert!(maps_equal(&lhs, &rhs, &policy).unwrap().equal);
        assert_eq!(
            maps_equal(&lhs, &rhs, &EqPolicy::Exact).unwrap_err(),
            TermError::ExactModeUnsupportedPrimitive
        );
    }

    #[test]
    fn eval_of_compose_matches_composed_evals() {
        // randomly generated composable pairs, 32 seeded points each
        use crate::harness::gen::{gen_map, gen_shape, RandomMapConfig};
        use crate::seeding::subseed;
        let cfg = RandomMapConfig::transcendental(11);
        for t in 0..6u64 {
            let a = gen_shape(&cfg, subseed(1, t));
            let b = gen_shape(&cfg, subseed(2, t));
            let c = gen_shape(&cfg, subseed(3, t));
            let f = gen_map(&cfg, subseed(4, t), &a, &b);
            let g = gen_map(&cfg, subseed(5, t), &b, &c);
            let gf = SmoothMap::compose(&g, &f).unwrap();
            for idx in 0..32u64 {
                let mut rng = stream_rng(subseed(6, t), idx);
                let p: Vec<f64> = (0..a.dim()).map(|_| rng.gen_range(-1.5..=1.5)).collect();
                let via = g.eval(&f.eval(&p).unwrap()).unwrap();
                let direct = gf.eval(&p).unwrap();
                for (x, y) in via.iter().zip(&direct) {
                    assert!((x - y).abs() <= 1e-9 + 1e-9 * x.abs().max(y.abs()));
                }
            }
        }
    }

    #[test]
    fn precomposition_is_k_linear() {
        // (r f + s g) . x = r (f . x) + s (g . x)
        let f = sq();
        let g = SmoothMap::new(line(), line(), vec![(E::coord(0) + E::one())]).unwrap();
        let x = SmoothMap::new(
            line2(),
            line(),
            vec![(E::coord(0) * E::coord(1))],
        )
        .unwrap();
        let r = Scalar::from_int(2);
        let s = Scalar::ratio(-1, 2).unwrap();
        let lhs = SmoothMap::compose(&SmoothMap::lin_comb(&r, &f, &s, &g).unwrap(), &x).unwrap();
        let rhs = SmoothMap::lin_comb(
            &r,
            &SmoothMap::compose(&f, &x).unwrap(),
            &s,
            &SmoothMap::compose(&g, &x).unwrap(),
        )
        .unwrap();
        assert!(maps_equal(&lhs, &rhs, &EqPolicy::Exact).unwrap().equal);
    }

    #[test]
    fn auto_policy_picks_exact_for_polynomials() {
        let f = sq();
        let s = SmoothMap::new(line(), line(), vec![E::sin(E::coord(0))]).unwrap();
        assert_eq!(EqPolicy::auto_for(&f, &f, 9), EqPolicy::Exact);
        assert!(matches!(
            EqPolicy::auto_for(&f, &s, 9),
            EqPolicy::Sampled { .. }
        ));
    }

    #[test]
    fn exact_soundness_on_low_degree_grid() {
        // distinct normal forms of degree <= 4 disagree on the 5-point grid
        use crate::seeding::stream_rng;
        for t in 0..24u64 {
            let mut rng = stream_rng(99, t);
            let dim = rng.gen_range(1..=2usize);
            let shape = if dim == 1 { line() } else { line2() };
            let gen_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut terms = Vec::new();
                for _ in 0..rng.gen_range(1..=4) {
                    let c = Scalar::from_int(rng.gen_range(-3i64..=3));
                    let var = rng.gen_range(0..dim);
                    let k = rng.gen_range(1..=4u32);
                    let m = if k == 1 {
                        E::coord(var)
                    } else {
                        E::pow(E::coord(var), k)
                    };
                    terms.push((c, m));
                }
                E::Sum(terms)
            };
            let f = SmoothMap::new(shape.clone(), line(), vec![gen_poly(&mut rng)]).unwrap();
            let g = SmoothMap::new(shape.clone(), line(), vec![gen_poly(&mut rng)]).unwrap();
            let v = maps_equal(&f, &g, &EqPolicy::Exact).unwrap();
            if !v.equal {
                // grid search must produce a concrete disagreement point
                let w = v.witness.expect("witness point on the rational grid");
                let lhs = f.eval(&w).unwrap();
                let rhs = g.eval(&w).unwrap();
                assert!(lhs
                    .iter()
                    .zip(&rhs)
                    .any(|(a, b)| (a - b).abs() > 1e-12));
            }
        }
    }
}
