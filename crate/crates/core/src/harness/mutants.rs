//! Deliberately broken instances for sensitivity testing.
//!
//! The suites are only trustworthy if they reject wrong structure. This
//! module ships corrupted monads (wrong unit, wrong multiplication) and a
//! family of twisted differential-category handles, one per combinator
//! axiom, each of which must be flagged by its target axiom.

use crate::diffop::{d, t_map, t_obj};
use crate::expr::ScalarExpr;
use crate::harness::gen::RandomMapConfig;
use crate::harness::suite::{DiffCategory, SmoothCat};
use crate::monads::MonadSpec;
use crate::scalar::Scalar;
use crate::shape::Shape;
use crate::smooth::{EqPolicy, Side, SmoothMap, Verdict};
use std::sync::Arc;

/// Tangent monad with the unit replaced by the diagonal `<1, 1>`.
///
/// The diagonal is linear, so every k-linearity and differential-linearity
/// check still passes; only the monad unit laws reject it.
pub fn tangent_monad_corrupted_eta() -> Arc<MonadSpec> {
    let base = crate::monads::tangent_monad();
    let inner = base.clone();
    Arc::new(MonadSpec::new(
        "tangent[eta=<1,1>]",
        Box::new(t_obj),
        Box::new(|f: &SmoothMap| t_map(f)),
        Box::new(move |s: &Shape| inner.mu(s)),
        Box::new(|s: &Shape| {
            let id = SmoothMap::identity(s);
            SmoothMap::pair(&id, &id).unwrap()
        }),
        Box::new({
            let m = base.clone();
            move |a: &Shape, b: &Shape| m.omega(a, b)
        }),
        Box::new({
            let m = base.clone();
            move |a: &Shape, b: &Shape| m.omega_inv(a, b)
        }),
        base.omega_unit().clone(),
        base.omega_unit_inv().clone(),
    ))
}

/// Tangent monad with the multiplication replaced by `<pi1, pi2 * pi3>`.
///
/// The componentwise product breaks the unit laws and is not differential
/// linear, so both the monad-law stage and the differential stage reject it.
pub fn tangent_monad_corrupted_mu() -> Arc<MonadSpec> {
    let base = crate::monads::tangent_monad();
    Arc::new(MonadSpec::new(
        "tangent[mu=<pi1,pi2*pi3>]",
        Box::new(t_obj),
        Box::new(|f: &SmoothMap| t_map(f)),
        Box::new(|a: &Shape| {
            let ta = t_obj(a);
            let outer_l = SmoothMap::proj(&ta, &ta, Side::Left);
            let outer_r = SmoothMap::proj(&ta, &ta, Side::Right);
            let b1 =
                SmoothMap::compose(&SmoothMap::proj(a, a, Side::Left), &outer_l).unwrap();
            let b2 =
                SmoothMap::compose(&SmoothMap::proj(a, a, Side::Right), &outer_l).unwrap();
            let b3 =
                SmoothMap::compose(&SmoothMap::proj(a, a, Side::Left), &outer_r).unwrap();
            let prod_comps: Vec<ScalarExpr> = b2
                .comps()
                .iter()
                .zip(b3.comps())
                .map(|(x, y)| (x.clone() * y.clone()).normalize())
                .collect();
            let prod =
                SmoothMap::new(b2.dom().clone(), b2.cod().clone(), prod_comps).unwrap();
            SmoothMap::pair(&b1, &prod).unwrap()
        }),
        Box::new({
            let m = base.clone();
            move |s: &Shape| m.eta(s)
        }),
        Box::new({
            let m = base.clone();
            move |a: &Shape, b: &Shape| m.omega(a, b)
        }),
        Box::new({
            let m = base.clone();
            move |a: &Shape, b: &Shape| m.omega_inv(a, b)
        }),
        base.omega_unit().clone(),
        base.omega_unit_inv().clone(),
    ))
}

/// One targeted corruption of the smooth differential-category handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdMutant {
    /// Adds a constant one to every derivative; breaks additivity (CD.1).
    AffineShift,
    /// Squares the tangent argument; breaks tangent linearity (CD.2).
    TangentSquare,
    /// Derivatives are zero maps; breaks exactly the projection axiom (CD.3).
    ZeroDerivative,
    /// Doubles derivatives into wide codomains; breaks pairing (CD.4).
    DoubleOnWideCodomains,
    /// Cubes the base point before differentiating; breaks the chain rule (CD.5).
    InnerCube,
    /// The handle's zero map is all ones; breaks only the axiom that uses
    /// zero tangents (CD.6).
    OnesForZero,
    /// Scales the derivative by (1 + first base coordinate); breaks the
    /// symmetry of second derivatives (CD.7).
    ConformalScale,
}

impl CdMutant {
    pub fn all() -> [CdMutant; 7] {
        [
            CdMutant::AffineShift,
            CdMutant::TangentSquare,
            CdMutant::ZeroDerivative,
            CdMutant::DoubleOnWideCodomains,
            CdMutant::InnerCube,
            CdMutant::OnesForZero,
            CdMutant::ConformalScale,
        ]
    }

    /// The axiom this corruption is designed to violate.
    pub fn target_axiom(&self) -> &'static str {
        match self {
            CdMutant::AffineShift => "CD.1",
            CdMutant::TangentSquare => "CD.2",
            CdMutant::ZeroDerivative => "CD.3",
            CdMutant::DoubleOnWideCodomains => "CD.4",
            CdMutant::InnerCube => "CD.5",
            CdMutant::OnesForZero => "CD.6",
            CdMutant::ConformalScale => "CD.7",
        }
    }
}

/// Smooth-category handle with one mutated operation.
pub struct MutantSmooth {
    pub mutant: CdMutant,
}

// componentwise power map on a shape
fn pointwise_pow(s: &Shape, k: u32) -> SmoothMap {
    let comps = (0..s.dim())
        .map(|i| ScalarExpr::pow(ScalarExpr::coord(i), k))
        .collect();
    SmoothMap::new(s.clone(), s.clone(), comps).unwrap()
}

fn ones(dom: &Shape, cod: &Shape) -> SmoothMap {
    let comps = (0..cod.dim()).map(|_| ScalarExpr::one()).collect();
    SmoothMap::new(dom.clone(), cod.clone(), comps).unwrap()
}

impl DiffCategory for MutantSmooth {
    type Map = SmoothMap;

    fn name(&self) -> String {
        format!("smooth[{:?}]", self.mutant)
    }
    fn dom(&self, f: &Self::Map) -> Shape {
        f.dom().clone()
    }
    fn cod(&self, f: &Self::Map) -> Shape {
        f.cod().clone()
    }
    fn identity(&self, a: &Shape) -> Self::Map {
        SmoothMap::identity(a)
    }
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Self::Map {
        SmoothMap::compose(g, f).expect("mutant composition is well-typed")
    }
    fn proj(&self, a: &Shape, b: &Shape, side: Side) -> Self::Map {
        SmoothMap::proj(a, b, side)
    }
    fn pair(&self, f: &Self::Map, g: &Self::Map) -> Self::Map {
        SmoothMap::pair(f, g).expect("mutant pairing is well-typed")
    }
    fn lin_comb(&self, r: &Scalar, f: &Self::Map, s: &Scalar, g: &Self::Map) -> Self::Map {
        SmoothMap::lin_comb(r, f, s, g).expect("mutant lin_comb is well-typed")
    }
    fn zero(&self, dom: &Shape, cod: &Shape) -> Self::Map {
        match self.mutant {
            CdMutant::OnesForZero => ones(dom, cod),
            _ => SmoothMap::zero(dom, cod),
        }
    }
    fn d(&self, f: &Self::Map) -> Self::Map {
        let honest = d(f);
        let a = f.dom().clone();
        match self.mutant {
            CdMutant::OnesForZero => honest,
            CdMutant::ZeroDerivative => SmoothMap::zero(honest.dom(), honest.cod()),
            CdMutant::AffineShift => {
                let shift = ones(honest.dom(), honest.cod());
                SmoothMap::lin_comb(&Scalar::one(), &honest, &Scalar::one(), &shift).unwrap()
            }
            CdMutant::TangentSquare => {
                let p1 = SmoothMap::proj(&a, &a, Side::Left);
                let p2 = SmoothMap::proj(&a, &a, Side::Right);
                let warp = SmoothMap::pair(
                    &p1,
                    &SmoothMap::compose(&pointwise_pow(&a, 2), &p2).unwrap(),
                )
                .unwrap();
                SmoothMap::compose(&honest, &warp).unwrap()
            }
            CdMutant::DoubleOnWideCodomains => {
                if f.cod().dim() >= 2 {
                    SmoothMap::lin_comb(
                        &Scalar::from_int(2),
                        &honest,
                        &Scalar::zero(),
                        &honest,
                    )
                    .unwrap()
                } else {
                    honest
                }
            }
            CdMutant::InnerCube => {
                let p1 = SmoothMap::proj(&a, &a, Side::Left);
                let p2 = SmoothMap::proj(&a, &a, Side::Right);
                let warp = SmoothMap::pair(
                    &SmoothMap::compose(&pointwise_pow(&a, 3), &p1).unwrap(),
                    &p2,
                )
                .unwrap();
                SmoothMap::compose(&honest, &warp).unwrap()
            }
            CdMutant::ConformalScale => {
                if honest.dom().dim() == 0 {
                    return honest;
                }
                let comps = honest
                    .comps()
                    .iter()
                    .map(|e| {
                        let scaled = (ScalarExpr::one() + ScalarExpr::coord(0)) * e.clone();
                        scaled.normalize()
                    })
                    .collect();
                SmoothMap::new(honest.dom().clone(), honest.cod().clone(), comps).unwrap()
            }
        }
    }
    fn maps_equal(&self, f: &Self::Map, g: &Self::Map, policy: &EqPolicy) -> Verdict {
        SmoothCat.maps_equal(f, g, policy)
    }
    fn gen_map(&self, cfg: &RandomMapConfig, stream: u64, dom: &Shape, cod: &Shape) -> Self::Map {
        crate::harness::gen::gen_map(cfg, stream, dom, cod)
    }
}

/// Wraps any differential-category handle, replacing its combinator by the
/// zero map. Used to corrupt the Kleisli-level differential in the pipeline.
pub struct ZeroD<C: DiffCategory> {
    pub inner: C,
}

impl<C: DiffCategory> DiffCategory for ZeroD<C> {
    type Map = C::Map;

    fn name(&self) -> String {
        format!("{}[d=0]", self.inner.name())
    }
    fn dom(&self, f: &Self::Map) -> Shape {
        self.inner.dom(f)
    }
    fn cod(&self, f: &Self::Map) -> Shape {
        self.inner.cod(f)
    }
    fn identity(&self, a: &Shape) -> Self::Map {
        self.inner.identity(a)
    }
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Self::Map {
        self.inner.compose(g, f)
    }
    fn proj(&self, a: &Shape, b: &Shape, side: Side) -> Self::Map {
        self.inner.proj(a, b, side)
    }
    fn pair(&self, f: &Self::Map, g: &Self::Map) -> Self::Map {
        self.inner.pair(f, g)
    }
    fn lin_comb(&self, r: &Scalar, f: &Self::Map, s: &Scalar, g: &Self::Map) -> Self::Map {
        self.inner.lin_comb(r, f, s, g)
    }
    fn zero(&self, dom: &Shape, cod: &Shape) -> Self::Map {
        self.inner.zero(dom, cod)
    }
    fn d(&self, f: &Self::Map) -> Self::Map {
        let dom = self.inner.dom(f).doubled();
        self.inner.zero(&dom, &self.inner.cod(f))
    }
    fn maps_equal(&self, f: &Self::Map, g: &Self::Map, policy: &EqPolicy) -> Verdict {
        self.inner.maps_equal(f, g, policy)
    }
    fn gen_map(&self, cfg: &RandomMapConfig, stream: u64, dom: &Shape, cod: &Shape) -> Self::Map {
        self.inner.gen_map(cfg, stream, dom, cod)
    }
}
