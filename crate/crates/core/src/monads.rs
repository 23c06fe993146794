//! Presented monads on the base category.
//!
//! A [`MonadSpec`] packages a monad as closures: the object action, map
//! action, multiplication, unit, and the product comparison
//! `omega(A, B) : S(A x B) -> S(A) x S(B)` together with a supplied inverse.
//! Presenting by closures rather than syntax lets user-defined monads plug
//! into every checker. The inverse is supplied and then verified instead of
//! being derived, since symbolic inversion is not decidable in this grammar.
//!
//! Shipped monads: identity, constant (everything goes to the unit object),
//! and the tangent-bundle monad `T(A) = A x A`, `T(f) = <f . pi1, d(f)>`,
//! `mu = <pi1, pi2 + pi3>`, `eta = <1, 0>`.
//!
//! The check suites validate, in order: the monad equations and naturality;
//! Cartesian k-linear structure (omega invertibility and naturality, the
//! functor's k-linearity on hom-sets, k-linearity of mu and eta); and
//! differential compatibility (the functor commutes with `d` through omega,
//! mu and eta are differential linear, differential linearity is preserved,
//! and `omega(A, A) : S T A -> T S A` is natural).

use crate::diffop::{d, is_d_linear, is_k_linear, t_map, t_obj};
use crate::harness::gen::{gen_linear_map, gen_map, gen_shape, RandomMapConfig};
use crate::harness::report::{CheckCase, CheckReport};
use crate::scalar::Scalar;
use crate::seeding::{stream_rng, subseed};
use crate::shape::Shape;
use crate::smooth::{maps_equal, EqPolicy, Side, SmoothMap, Verdict};
use rand::seq::SliceRandom;
use std::fmt;
use std::sync::Arc;

type ObjAction = dyn Fn(&Shape) -> Shape + Send + Sync;
type MapAction = dyn Fn(&SmoothMap) -> SmoothMap + Send + Sync;
type ShapeFamily = dyn Fn(&Shape) -> SmoothMap + Send + Sync;
type PairFamily = dyn Fn(&Shape, &Shape) -> SmoothMap + Send + Sync;

/// A monad presented by closures, with product comparison data.
pub struct MonadSpec {
    name: String,
    on_obj: Box<ObjAction>,
    on_map: Box<MapAction>,
    mu: Box<ShapeFamily>,
    eta: Box<ShapeFamily>,
    omega: Box<PairFamily>,
    omega_inv: Box<PairFamily>,
    omega_unit: SmoothMap,
    omega_unit_inv: SmoothMap,
}

impl MonadSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        on_obj: Box<ObjAction>,
        on_map: Box<MapAction>,
        mu: Box<ShapeFamily>,
        eta: Box<ShapeFamily>,
        omega: Box<PairFamily>,
        omega_inv: Box<PairFamily>,
        omega_unit: SmoothMap,
        omega_unit_inv: SmoothMap,
    ) -> MonadSpec {
        MonadSpec {
            name: name.into(),
            on_obj,
            on_map,
            mu,
            eta,
            omega,
            omega_inv,
            omega_unit,
            omega_unit_inv,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn on_obj(&self, s: &Shape) -> Shape {
        (self.on_obj)(s)
    }

    pub fn on_map(&self, f: &SmoothMap) -> SmoothMap {
        (self.on_map)(f)
    }

    /// `mu(A) : S S A -> S A`.
    pub fn mu(&self, s: &Shape) -> SmoothMap {
        (self.mu)(s)
    }

    /// `eta(A) : A -> S A`.
    pub fn eta(&self, s: &Shape) -> SmoothMap {
        (self.eta)(s)
    }

    /// `omega(A, B) : S(A x B) -> S A x S B`.
    pub fn omega(&self, a: &Shape, b: &Shape) -> SmoothMap {
        (self.omega)(a, b)
    }

    pub fn omega_inv(&self, a: &Shape, b: &Shape) -> SmoothMap {
        (self.omega_inv)(a, b)
    }

    /// `S(Unit) -> Unit` and its inverse.
    pub fn omega_unit(&self) -> &SmoothMap {
        &self.omega_unit
    }

    pub fn omega_unit_inv(&self) -> &SmoothMap {
        &self.omega_unit_inv
    }
}

impl fmt::Debug for MonadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonadSpec({})", self.name)
    }
}

fn zero_to_unit(dom: &Shape) -> SmoothMap {
    SmoothMap::zero(dom, &Shape::Unit)
}

/// The identity monad: all structure maps are identities.
pub fn identity_monad() -> Arc<MonadSpec> {
    Arc::new(MonadSpec::new(
        "identity",
        Box::new(|s: &Shape| s.clone()),
        Box::new(|f: &SmoothMap| f.normalized()),
        Box::new(|s: &Shape| SmoothMap::identity(s)),
        Box::new(|s: &Shape| SmoothMap::identity(s)),
        Box::new(|a: &Shape, b: &Shape| SmoothMap::identity(&Shape::prod(a.clone(), b.clone()))),
        Box::new(|a: &Shape, b: &Shape| SmoothMap::identity(&Shape::prod(a.clone(), b.clone()))),
        SmoothMap::identity(&Shape::Unit),
        SmoothMap::identity(&Shape::Unit),
    ))
}

/// The constant monad: every object goes to the unit object, every structure
/// map is the unique (zero) map into it.
pub fn constant_monad() -> Arc<MonadSpec> {
    let unit2 = Shape::prod(Shape::Unit, Shape::Unit);
    Arc::new(MonadSpec::new(
        "constant",
        Box::new(|_: &Shape| Shape::Unit),
        Box::new(|f: &SmoothMap| {
            let _ = f;
            SmoothMap::identity(&Shape::Unit)
        }),
        Box::new(|_: &Shape| zero_to_unit(&Shape::Unit)),
        Box::new(|s: &Shape| zero_to_unit(s)),
        Box::new(move |_: &Shape, _: &Shape| SmoothMap::zero(&Shape::Unit, &unit2.clone())),
        Box::new(|_: &Shape, _: &Shape| {
            zero_to_unit(&Shape::prod(Shape::Unit, Shape::Unit))
        }),
        zero_to_unit(&Shape::Unit),
        SmoothMap::zero(&Shape::Unit, &Shape::Unit),
    ))
}

// mu for the tangent monad: <pi1, pi2 + pi3> out of (A x A) x (A x A).
fn tangent_mu(a: &Shape) -> SmoothMap {
    let ta = t_obj(a);
    let outer_l = SmoothMap::proj(&ta, &ta, Side::Left);
    let outer_r = SmoothMap::proj(&ta, &ta, Side::Right);
    let b1 = SmoothMap::compose(&SmoothMap::proj(a, a, Side::Left), &outer_l).unwrap();
    let b2 = SmoothMap::compose(&SmoothMap::proj(a, a, Side::Right), &outer_l).unwrap();
    let b3 = SmoothMap::compose(&SmoothMap::proj(a, a, Side::Left), &outer_r).unwrap();
    let sum = SmoothMap::lin_comb(&Scalar::one(), &b2, &Scalar::one(), &b3).unwrap();
    SmoothMap::pair(&b1, &sum).unwrap()
}

// eta for the tangent monad: <1, 0>.
fn tangent_eta(a: &Shape) -> SmoothMap {
    SmoothMap::pair(&SmoothMap::identity(a), &SmoothMap::zero(a, a)).unwrap()
}

// omega for the tangent monad is <T(pi1), T(pi2)>; its inverse is the
// middle-swap reassociation built from projections and pairing.
fn tangent_omega(a: &Shape, b: &Shape) -> SmoothMap {
    let p1 = SmoothMap::proj(a, b, Side::Left);
    let p2 = SmoothMap::proj(a, b, Side::Right);
    SmoothMap::pair(&t_map(&p1), &t_map(&p2)).unwrap()
}

fn tangent_omega_inv(a: &Shape, b: &Shape) -> SmoothMap {
    let ta = t_obj(a);
    let tb = t_obj(b);
    let outer_l = SmoothMap::proj(&ta, &tb, Side::Left);
    let outer_r = SmoothMap::proj(&ta, &tb, Side::Right);
    let a_base = SmoothMap::compose(&SmoothMap::proj(a, a, Side::Left), &outer_l).unwrap();
    let a_tan = SmoothMap::compose(&SmoothMap::proj(a, a, Side::Right), &outer_l).unwrap();
    let b_base = SmoothMap::compose(&SmoothMap::proj(b, b, Side::Left), &outer_r).unwrap();
    let b_tan = SmoothMap::compose(&SmoothMap::proj(b, b, Side::Right), &outer_r).unwrap();
    let base = SmoothMap::pair(&a_base, &b_base).unwrap();
    let tan = SmoothMap::pair(&a_tan, &b_tan).unwrap();
    SmoothMap::pair(&base, &tan).unwrap()
}

/// The tangent-bundle monad.
pub fn tangent_monad() -> Arc<MonadSpec> {
    let unit2 = Shape::prod(Shape::Unit, Shape::Unit);
    Arc::new(MonadSpec::new(
        "tangent",
        Box::new(t_obj),
        Box::new(|f: &SmoothMap| t_map(f)),
        Box::new(tangent_mu),
        Box::new(tangent_eta),
        Box::new(tangent_omega),
        Box::new(tangent_omega_inv),
        SmoothMap::zero(&unit2, &Shape::Unit),
        SmoothMap::zero(&Shape::Unit, &unit2),
    ))
}

/// Configuration for the monad check suites.
#[derive(Clone, Debug)]
pub struct MonadCheckConfig {
    pub policy: EqPolicy,
    pub gen: RandomMapConfig,
    pub trials: u32,
}

impl MonadCheckConfig {
    pub fn exact(seed: u64) -> MonadCheckConfig {
        MonadCheckConfig {
            policy: EqPolicy::Exact,
            gen: RandomMapConfig::polynomial(seed),
            trials: 8,
        }
    }

    pub fn with_trials(seed: u64, trials: u32) -> MonadCheckConfig {
        MonadCheckConfig {
            trials,
            ..MonadCheckConfig::exact(seed)
        }
    }
}

fn case(cases: &mut Vec<CheckCase>, axiom: &str, trial: u32, seed: u64, v: &Verdict) {
    cases.push(CheckCase::from_verdict(axiom, trial, seed, v));
}

// Equality helper that never bails out of a suite: a policy or typing error
// becomes a failing verdict so the report stays total.
fn check_eq(lhs: &SmoothMap, rhs: &SmoothMap, policy: &EqPolicy) -> Verdict {
    match maps_equal(lhs, rhs, policy) {
        Ok(v) => v,
        Err(_) => Verdict::failed(None, f64::INFINITY),
    }
}

/// Unit laws, associativity, and naturality of mu and eta.
pub fn check_monad_laws(m: &MonadSpec, cfg: &MonadCheckConfig) -> CheckReport {
    let mut cases = Vec::new();
    for trial in 0..cfg.trials {
        let stream = subseed(cfg.gen.seed, u64::from(trial));
        let a = gen_shape(&cfg.gen, stream);
        let b = gen_shape(&cfg.gen, subseed(stream, 1));
        let sa = m.on_obj(&a);
        let id_sa = SmoothMap::identity(&sa);

        // mu . eta_{S A} = 1 = mu . S(eta_A)
        let v = check_eq(
            &SmoothMap::compose(&m.mu(&a), &m.eta(&sa)).unwrap(),
            &id_sa,
            &cfg.policy,
        );
        case(&mut cases, "unit-outer", trial, stream, &v);
        let v = check_eq(
            &SmoothMap::compose(&m.mu(&a), &m.on_map(&m.eta(&a))).unwrap(),
            &id_sa,
            &cfg.policy,
        );
        case(&mut cases, "unit-inner", trial, stream, &v);

        // mu . mu_{S A} = mu . S(mu)
        let v = check_eq(
            &SmoothMap::compose(&m.mu(&a), &m.mu(&sa)).unwrap(),
            &SmoothMap::compose(&m.mu(&a), &m.on_map(&m.mu(&a))).unwrap(),
            &cfg.policy,
        );
        case(&mut cases, "assoc", trial, stream, &v);

        // naturality over a random map
        let f = gen_map(&cfg.gen, subseed(stream, 2), &a, &b);
        let v = check_eq(
            &SmoothMap::compose(&m.eta(&b), &f).unwrap(),
            &SmoothMap::compose(&m.on_map(&f), &m.eta(&a)).unwrap(),
            &cfg.policy,
        );
        case(&mut cases, "eta-natural", trial, stream, &v);
        let v = check_eq(
            &SmoothMap::compose(&m.mu(&b), &m.on_map(&m.on_map(&f))).unwrap(),
            &SmoothMap::compose(&m.on_map(&f), &m.mu(&a)).unwrap(),
            &cfg.policy,
        );
        case(&mut cases, "mu-natural", trial, stream, &v);
    }
    CheckReport::new(format!("monad-laws/{}", m.name()), cases)
}

/// Product comparison and k-linear structure.
pub fn check_cartesian_k_linear(m: &MonadSpec, cfg: &MonadCheckConfig) -> CheckReport {
    let mut cases = Vec::new();
    for trial in 0..cfg.trials {
        let stream = subseed(cfg.gen.seed, 0x1000 + u64::from(trial));
        let a = gen_shape(&cfg.gen, stream);
        let b = gen_shape(&cfg.gen, subseed(stream, 1));
        let ab = Shape::prod(a.clone(), b.clone());

        // omega is invertible both ways
        let om = m.omega(&a, &b);
        let om_inv = m.omega_inv(&a, &b);
        let v = check_eq(
            &SmoothMap::compose(&om, &om_inv).unwrap(),
            &SmoothMap::identity(om_inv.dom()),
            &cfg.policy,
        );
        case(&mut cases, "omega-right-inverse", trial, stream, &v);
        let v = check_eq(
            &SmoothMap::compose(&om_inv, &om).unwrap(),
            &SmoothMap::identity(&m.on_obj(&ab)),
            &cfg.policy,
        );
        case(&mut cases, "omega-left-inverse", trial, stream, &v);

        // the unit-object comparison is invertible
        let v = check_eq(
            &SmoothMap::compose(m.omega_unit(), m.omega_unit_inv()).unwrap(),
            &SmoothMap::identity(&Shape::Unit),
            &cfg.policy,
        );
        case(&mut cases, "omega-unit-right-inverse", trial, stream, &v);
        let v = check_eq(
            &SmoothMap::compose(m.omega_unit_inv(), m.omega_unit()).unwrap(),
            &SmoothMap::identity(&m.on_obj(&Shape::Unit)),
            &cfg.policy,
        );
        case(&mut cases, "omega-unit-left-inverse", trial, stream, &v);

        // omega is natural: (S f1 x S f2) . omega = omega . S(f1 x f2)
        let a2 = gen_shape(&cfg.gen, subseed(stream, 2));
        let b2 = gen_shape(&cfg.gen, subseed(stream, 3));
        let f1 = gen_map(&cfg.gen, subseed(stream, 4), &a, &a2);
        let f2 = gen_map(&cfg.gen, subseed(stream, 5), &b, &b2);
        let lhs = SmoothMap::compose(
            &SmoothMap::times(&m.on_map(&f1), &m.on_map(&f2)),
            &m.omega(&a, &b),
        )
        .unwrap();
        let rhs = SmoothMap::compose(
            &m.omega(&a2, &b2),
            &m.on_map(&SmoothMap::times(&f1, &f2)),
        )
        .unwrap();
        let v = check_eq(&lhs, &rhs, &cfg.policy);
        case(&mut cases, "omega-natural", trial, stream, &v);

        // the functor is k-linear on hom-sets
        let g1 = gen_map(&cfg.gen, subseed(stream, 6), &a, &b);
        let g2 = gen_map(&cfg.gen, subseed(stream, 7), &a, &b);
        let mut rng = stream_rng(stream, 8);
        let r = cfg
            .gen
            .coefficient_pool
            .choose(&mut rng)
            .cloned()
            .unwrap_or_else(Scalar::one);
        let s = cfg
            .gen
            .coefficient_pool
            .choose(&mut rng)
            .cloned()
            .unwrap_or_else(Scalar::one);
        let lhs = m.on_map(&SmoothMap::lin_comb(&r, &g1, &s, &g2).unwrap());
        let rhs = SmoothMap::lin_comb(&r, &m.on_map(&g1), &s, &m.on_map(&g2)).unwrap();
        let v = check_eq(&lhs, &rhs, &cfg.policy);
        case(&mut cases, "on-map-k-linear", trial, stream, &v);

        // mu and eta are k-linear maps
        let v = is_k_linear(&m.mu(&a), &cfg.policy, subseed(stream, 9))
            .unwrap_or_else(|_| Verdict::failed(None, f64::INFINITY));
        case(&mut cases, "mu-k-linear", trial, stream, &v);
        let v = is_k_linear(&m.eta(&a), &cfg.policy, subseed(stream, 10))
            .unwrap_or_else(|_| Verdict::failed(None, f64::INFINITY));
        case(&mut cases, "eta-k-linear", trial, stream, &v);
    }
    CheckReport::new(format!("k-linear/{}", m.name()), cases)
}

/// Differential compatibility of the monad.
pub fn check_cdm(m: &MonadSpec, cfg: &MonadCheckConfig) -> CheckReport {
    let mut cases = Vec::new();
    for trial in 0..cfg.trials {
        let stream = subseed(cfg.gen.seed, 0x2000 + u64::from(trial));
        let a = gen_shape(&cfg.gen, stream);
        let b = gen_shape(&cfg.gen, subseed(stream, 1));

        // d(S f) = S(d f) . omega_inv(A, A)
        let f = gen_map(&cfg.gen, subseed(stream, 2), &a, &b);
        let lhs = d(&m.on_map(&f));
        let rhs =
            SmoothMap::compose(&m.on_map(&d(&f)), &m.omega_inv(&a, &a)).unwrap();
        let v = check_eq(&lhs, &rhs, &cfg.policy);
        case(&mut cases, "functor-d-compat", trial, stream, &v);

        // mu and eta are differential linear
        let v = is_d_linear(&m.mu(&a), &cfg.policy)
            .unwrap_or_else(|_| Verdict::failed(None, f64::INFINITY));
        case(&mut cases, "mu-d-linear", trial, stream, &v);
        let v = is_d_linear(&m.eta(&a), &cfg.policy)
            .unwrap_or_else(|_| Verdict::failed(None, f64::INFINITY));
        case(&mut cases, "eta-d-linear", trial, stream, &v);

        // the functor preserves differential linear maps
        let lin = gen_linear_map(&cfg.gen, subseed(stream, 3), &a, &b);
        let v = is_d_linear(&m.on_map(&lin), &cfg.policy)
            .unwrap_or_else(|_| Verdict::failed(None, f64::INFINITY));
        case(&mut cases, "preserves-d-linear", trial, stream, &v);

        // omega(A, A) : S T A -> T S A is natural in A
        let g = gen_map(&cfg.gen, subseed(stream, 4), &a, &b);
        let lhs = SmoothMap::compose(&m.omega(&b, &b), &m.on_map(&t_map(&g))).unwrap();
        let rhs = SmoothMap::compose(&t_map(&m.on_map(&g)), &m.omega(&a, &a)).unwrap();
        let v = check_eq(&lhs, &rhs, &cfg.policy);
        case(&mut cases, "lambda-natural", trial, stream, &v);
    }
    CheckReport::new(format!("cdm/{}", m.name()), cases)
}

/// Failures surfaced when validating a monad.
#[derive(Clone, Debug)]
pub enum MonadError {
    NotAMonad(CheckReport),
    NotCartesianKLinear(CheckReport),
    NotACdm(CheckReport),
    MonadMismatch,
}

impl fmt::Display for MonadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadError::NotAMonad(r) => {
                write!(f, "monad laws failed: {:?}", r.failing_axioms())
            }
            MonadError::NotCartesianKLinear(r) => {
                write!(f, "Cartesian k-linear checks failed: {:?}", r.failing_axioms())
            }
            MonadError::NotACdm(r) => {
                write!(f, "differential monad checks failed: {:?}", r.failing_axioms())
            }
            MonadError::MonadMismatch => write!(f, "maps belong to different monads"),
        }
    }
}

impl std::error::Error for MonadError {}

/// A monad together with cached evidence that it passed all three suites.
///
/// Operations whose preconditions demand a validated differential monad take
/// this type; the validation failure is where `NotACdm` style errors arise.
pub struct Cdm {
    monad: Arc<MonadSpec>,
    reports: [CheckReport; 3],
}

impl Cdm {
    pub fn validate(monad: Arc<MonadSpec>, cfg: &MonadCheckConfig) -> Result<Cdm, MonadError> {
        let laws = check_monad_laws(&monad, cfg);
        if !laws.passed {
            return Err(MonadError::NotAMonad(laws));
        }
        let klin = check_cartesian_k_linear(&monad, cfg);
        if !klin.passed {
            return Err(MonadError::NotCartesianKLinear(klin));
        }
        let cdm = check_cdm(&monad, cfg);
        if !cdm.passed {
            return Err(MonadError::NotACdm(cdm));
        }
        Ok(Cdm {
            monad,
            reports: [laws, klin, cdm],
        })
    }

    pub fn monad(&self) -> &Arc<MonadSpec> {
        &self.monad
    }

    pub fn reports(&self) -> &[CheckReport; 3] {
        &self.reports
    }

    /// The tangent-distribution map `S T A -> T S A`, which for a validated
    /// differential monad is the product comparison at `(A, A)`.
    pub fn lambda(&self, a: &Shape) -> SmoothMap {
        self.monad.omega(a, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ScalarExpr as E;
    use crate::harness::oracle::fd_oracle;

    fn line() -> Shape {
        Shape::Line
    }

    fn cfg() -> MonadCheckConfig {
        MonadCheckConfig::with_trials(77, 4)
    }

    #[test]
    fn tangent_monad_structure_maps() {
        let m = tangent_monad();
        // eta on the line: x |-> (x, 0)
        let eta = m.eta(&line());
        assert_eq!(eta.comps(), &[E::coord(0), E::zero()]);
        // mu on the line: (x, y, z, w) |-> (x, y + z)
        let mu = m.mu(&line());
        assert_eq!(
            mu.normalized().comps(),
            &[
                E::coord(0),
                E::Sum(vec![
                    (Scalar::one(), E::coord(1)),
                    (Scalar::one(), E::coord(2))
                ])
            ]
        );
        // on sin: (x, y) |-> (sin x, cos x * y), matching finite differences
        let f = SmoothMap::new(line(), line(), vec![E::sin(E::coord(0))]).unwrap();
        let tf = m.on_map(&f);
        for idx in 0..8u64 {
            let mut rng = stream_rng(3, idx);
            use rand::Rng;
            let x = rng.gen_range(-1.5..=1.5);
            let y = rng.gen_range(-1.5..=1.5);
            let out = tf.eval(&[x, y]).unwrap();
            let fd = fd_oracle(&f, &[x], &[y], 1e-4).unwrap();
            assert!((out[0] - x.sin()).abs() < 1e-12);
            assert!((out[1] - fd[0]).abs() < 1e-5 + 1e-5 * fd[0].abs());
        }
    }

    #[test]
    fn shipped_monads_pass_monad_laws() {
        for m in [identity_monad(), constant_monad(), tangent_monad()] {
            let report = check_monad_laws(&m, &cfg());
            assert!(report.passed, "{}: {:?}", m.name(), report.failing_axioms());
        }
    }

    #[test]
    fn shipped_monads_pass_k_linear_checks() {
        for m in [identity_monad(), constant_monad(), tangent_monad()] {
            let report = check_cartesian_k_linear(&m, &cfg());
            assert!(report.passed, "{}: {:?}", m.name(), report.failing_axioms());
        }
    }

    #[test]
    fn shipped_monads_pass_cdm_checks() {
        for m in [identity_monad(), constant_monad(), tangent_monad()] {
            let report = check_cdm(&m, &cfg());
            assert!(report.passed, "{}: {:?}", m.name(), report.failing_axioms());
        }
    }

    #[test]
    fn functor_preserves_k_linearity_of_random_linear_maps() {
        let m = tangent_monad();
        let cfg = cfg();
        for t in 0..6u64 {
            let a = gen_shape(&cfg.gen, t);
            let b = gen_shape(&cfg.gen, t + 100);
            let lin = gen_linear_map(&cfg.gen, t, &a, &b);
            let v = is_k_linear(&m.on_map(&lin), &EqPolicy::Exact, t).unwrap();
            assert!(v.equal);
        }
    }

    #[test]
    fn sd_instance_for_scalar_maps() {
        // d(T f) = T(d f) . omega_inv on random scalar maps
        let m = tangent_monad();
        let gen_cfg = RandomMapConfig::transcendental(55);
        for t in 0..10u64 {
            let f = gen_map(&gen_cfg, t, &line(), &line());
            let lhs = d(&m.on_map(&f));
            let rhs = SmoothMap::compose(&m.on_map(&d(&f)), &m.omega_inv(&line(), &line()))
                .unwrap();
            let v = maps_equal(&lhs, &rhs, &EqPolicy::sampled(t)).unwrap();
            assert!(v.equal, "trial {t}");
        }
    }

    #[test]
    fn lambda_is_middle_swap_on_the_line() {
        let m = tangent_monad();
        let lam = m.omega(&line(), &line());
        assert_eq!(
            lam.normalized().comps(),
            &[E::coord(0), E::coord(2), E::coord(1), E::coord(3)]
        );
        // identity monad: lambda is the identity
        let id = identity_monad();
        let lam = id.omega(&line(), &line());
        assert_eq!(lam, SmoothMap::identity(&Shape::prod(line(), line())));
    }

    #[test]
    fn corrupted_eta_fails_units_but_stays_linear() {
        let m = crate::harness::mutants::tangent_monad_corrupted_eta();
        let laws = check_monad_laws(&m, &cfg());
        assert!(!laws.passed);
        assert!(laws
            .failing_axioms()
            .iter()
            .any(|a| a.starts_with("unit")));
        // the corrupted unit is still k-linear and differential linear
        let klin = check_cartesian_k_linear(&m, &cfg());
        assert!(klin.passed, "{:?}", klin.failing_axioms());
        let cdm = check_cdm(&m, &cfg());
        assert!(cdm.passed, "{:?}", cdm.failing_axioms());
        assert!(matches!(
            Cdm::validate(m, &cfg()),
            Err(MonadError::NotAMonad(_))
        ));
    }

    #[test]
    fn projection_multiplication_fails_a_unit_law() {
        // replacing the multiplication by <pi1, pi2> keeps one unit law and
        // breaks the other, with a concrete witness
        let base = tangent_monad();
        let m = Arc::new(MonadSpec::new(
            "tangent[mu=<pi1,pi2>]",
            Box::new(crate::diffop::t_obj),
            Box::new(|f: &SmoothMap| crate::diffop::t_map(f)),
            Box::new(|a: &Shape| {
                let ta = crate::diffop::t_obj(a);
                SmoothMap::proj(&ta, &ta, Side::Left)
            }),
            Box::new({
                let b = base.clone();
                move |s: &Shape| b.eta(s)
            }),
            Box::new({
                let b = base.clone();
                move |a: &Shape, bb: &Shape| b.omega(a, bb)
            }),
            Box::new({
                let b = base.clone();
                move |a: &Shape, bb: &Shape| b.omega_inv(a, bb)
            }),
            base.omega_unit().clone(),
            base.omega_unit_inv().clone(),
        ));
        let report = check_monad_laws(&m, &cfg());
        assert!(!report.passed);
        let failing = report.failing_axioms();
        assert!(failing.contains(&"unit-inner".to_string()), "{failing:?}");
        let bad = report.cases.iter().find(|c| !c.ok).unwrap();
        assert!(bad.witness.is_some());
    }

    #[test]
    fn corrupted_mu_fails_with_witness() {
        let m = crate::harness::mutants::tangent_monad_corrupted_mu();
        let laws = check_monad_laws(&m, &cfg());
        assert!(!laws.passed);
        let failure = laws.first_failure().unwrap();
        assert!(failure.witness.is_some());
        // the quadratic multiplication is not differential linear
        let cdm = check_cdm(&m, &cfg());
        assert!(cdm
            .failing_axioms()
            .contains(&"mu-d-linear".to_string()));
        let bad = cdm
            .cases
            .iter()
            .find(|c| c.axiom == "mu-d-linear" && !c.ok)
            .unwrap();
        assert!(bad.witness.is_some());
    }
}
