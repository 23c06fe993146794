//! Scalar expressions and their canonical form.
//!
//! An expression denotes one smooth coordinate function of finitely many
//! variables. The grammar is deliberately small: rational constants,
//! coordinates, k-linear sums, products, natural powers, and the three
//! transcendental primitives sin, cos, exp (the smallest set closed under
//! differentiation).
//!
//! `normalize` rewrites an expression into a canonical sum of monomials:
//! products of sums are expanded, natural powers of polynomial subterms are
//! unfolded, constants are folded, like terms are merged, and summands are
//! sorted by a fixed total order. Transcendental nodes stay structural with
//! normalized arguments. On the polynomial fragment two expressions denote
//! the same function exactly when their normal forms are identical.

use crate::error::TermError;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// A symbolic scalar expression.
///
/// Variant order defines the node-kind rank used by the canonical term
/// order, so the derived `Ord` is the total order normal forms are sorted by.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarExpr {
    Const(Scalar),
    Coord(usize),
    /// k-linear combination: a list of (coefficient, expression) summands.
    Sum(Vec<(Scalar, ScalarExpr)>),
    Prod(Vec<ScalarExpr>),
    Pow(Box<ScalarExpr>, u32),
    Sin(Box<ScalarExpr>),
    Cos(Box<ScalarExpr>),
    Exp(Box<ScalarExpr>),
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::Const(Scalar::zero())
    }

    pub fn one() -> Self {
        ScalarExpr::Const(Scalar::one())
    }

    pub fn constant(c: i64) -> Self {
        ScalarExpr::Const(Scalar::from_int(c))
    }

    pub fn coord(i: usize) -> Self {
        ScalarExpr::Coord(i)
    }

    pub fn scale(c: Scalar, e: ScalarExpr) -> Self {
        ScalarExpr::Sum(vec![(c, e)])
    }

    pub fn pow(base: ScalarExpr, k: u32) -> Self {
        ScalarExpr::Pow(Box::new(base), k)
    }

    pub fn sin(a: ScalarExpr) -> Self {
        ScalarExpr::Sin(Box::new(a))
    }

    pub fn cos(a: ScalarExpr) -> Self {
        ScalarExpr::Cos(Box::new(a))
    }

    pub fn exp(a: ScalarExpr) -> Self {
        ScalarExpr::Exp(Box::new(a))
    }

    /// True when the expression contains a sin, cos or exp node.
    pub fn has_transcendental(&self) -> bool {
        match self {
            ScalarExpr::Const(_) | ScalarExpr::Coord(_) => false,
            ScalarExpr::Sum(ts) => ts.iter().any(|(_, e)| e.has_transcendental()),
            ScalarExpr::Prod(fs) => fs.iter().any(|e| e.has_transcendental()),
            ScalarExpr::Pow(b, _) => b.has_transcendental(),
            ScalarExpr::Sin(_) | ScalarExpr::Cos(_) | ScalarExpr::Exp(_) => true,
        }
    }

    /// Largest coordinate index mentioned, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            ScalarExpr::Const(_) => None,
            ScalarExpr::Coord(i) => Some(*i),
            ScalarExpr::Sum(ts) => ts.iter().filter_map(|(_, e)| e.max_coord()).max(),
            ScalarExpr::Prod(fs) => fs.iter().filter_map(|e| e.max_coord()).max(),
            ScalarExpr::Pow(b, _) => b.max_coord(),
            ScalarExpr::Sin(a) | ScalarExpr::Cos(a) | ScalarExpr::Exp(a) => a.max_coord(),
        }
    }

    /// Substitutes `args[i]` for `Coord(i)` throughout.
    pub fn subst(&self, args: &[ScalarExpr]) -> ScalarExpr {
        match self {
            ScalarExpr::Const(_) => self.clone(),
            ScalarExpr::Coord(i) => args[*i].clone(),
            ScalarExpr::Sum(ts) => ScalarExpr::Sum(
                ts.iter()
                    .map(|(c, e)| (c.clone(), e.subst(args)))
                    .collect(),
            ),
            ScalarExpr::Prod(fs) => {
                ScalarExpr::Prod(fs.iter().map(|e| e.subst(args)).collect())
            }
            ScalarExpr::Pow(b, k) => ScalarExpr::pow(b.subst(args), *k),
            ScalarExpr::Sin(a) => ScalarExpr::sin(a.subst(args)),
            ScalarExpr::Cos(a) => ScalarExpr::cos(a.subst(args)),
            ScalarExpr::Exp(a) => ScalarExpr::exp(a.subst(args)),
        }
    }

    /// Floating-point evaluation. Coordinate indices must be in range for
    /// `coords`; maps validate this at construction time.
    pub fn eval_f64(&self, coords: &[f64]) -> f64 {
        match self {
            ScalarExpr::Const(c) => c.to_f64(),
            ScalarExpr::Coord(i) => coords[*i],
            ScalarExpr::Sum(ts) => ts
                .iter()
                .map(|(c, e)| c.to_f64() * e.eval_f64(coords))
                .sum(),
            ScalarExpr::Prod(fs) => fs.iter().map(|e| e.eval_f64(coords)).product(),
            ScalarExpr::Pow(b, k) => b.eval_f64(coords).powi(*k as i32),
            ScalarExpr::Sin(a) => a.eval_f64(coords).sin(),
            ScalarExpr::Cos(a) => a.eval_f64(coords).cos(),
            ScalarExpr::Exp(a) => a.eval_f64(coords).exp(),
        }
    }

    /// Exact rational evaluation. Fails on transcendental nodes.
    pub fn eval_exact(&self, coords: &[Scalar]) -> Result<Scalar, TermError> {
        match self {
            ScalarExpr::Const(c) => Ok(c.clone()),
            ScalarExpr::Coord(i) => Ok(coords[*i].clone()),
            ScalarExpr::Sum(ts) => {
                let mut acc = Scalar::zero();
                for (c, e) in ts {
                    acc += c.clone() * e.eval_exact(coords)?;
                }
                Ok(acc)
            }
            ScalarExpr::Prod(fs) => {
                let mut acc = Scalar::one();
                for e in fs {
                    acc *= e.eval_exact(coords)?;
                }
                Ok(acc)
            }
            ScalarExpr::Pow(b, k) => Ok(b.eval_exact(coords)?.pow(*k)),
            ScalarExpr::Sin(_) | ScalarExpr::Cos(_) | ScalarExpr::Exp(_) => {
                Err(TermError::ExactModeUnsupportedPrimitive)
            }
        }
    }

    pub fn normalize(&self) -> ScalarExpr {
        from_poly(to_poly(self))
    }
}

impl std::ops::Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::Sum(vec![(Scalar::one(), self), (Scalar::one(), rhs)])
    }
}

impl std::ops::Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: ScalarExpr) -> ScalarExpr {
        ScalarExpr::Prod(vec![self, rhs])
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarExpr::Const(c) => write!(f, "{c}"),
            ScalarExpr::Coord(i) => write!(f, "x{i}"),
            ScalarExpr::Sum(ts) => {
                write!(f, "sum[")?;
                for (i, (c, e)) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}*{e:?}")?;
                }
                write!(f, "]")
            }
            ScalarExpr::Prod(fs) => {
                write!(f, "(")?;
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{e:?}")?;
                }
                write!(f, ")")
            }
            ScalarExpr::Pow(b, k) => write!(f, "{b:?}^{k}"),
            ScalarExpr::Sin(a) => write!(f, "sin({a:?})"),
            ScalarExpr::Cos(a) => write!(f, "cos({a:?})"),
            ScalarExpr::Exp(a) => write!(f, "exp({a:?})"),
        }
    }
}

/// Symbolic partial derivative with respect to coordinate `i`.
///
/// The result is not normalized; callers normalize at the map level.
pub fn partial(e: &ScalarExpr, i: usize) -> ScalarExpr {
    match e {
        ScalarExpr::Const(_) => ScalarExpr::zero(),
        ScalarExpr::Coord(j) => {
            if *j == i {
                ScalarExpr::one()
            } else {
                ScalarExpr::zero()
            }
        }
        ScalarExpr::Sum(ts) => ScalarExpr::Sum(
            ts.iter()
                .map(|(c, t)| (c.clone(), partial(t, i)))
                .collect(),
        ),
        ScalarExpr::Prod(fs) => {
            // product rule
            let mut summands = Vec::with_capacity(fs.len());
            for (j, _) in fs.iter().enumerate() {
                let factors: Vec<ScalarExpr> = fs
                    .iter()
                    .enumerate()
                    .map(|(k, f)| if k == j { partial(f, i) } else { f.clone() })
                    .collect();
                summands.push((Scalar::one(), ScalarExpr::Prod(factors)));
            }
            ScalarExpr::Sum(summands)
        }
        ScalarExpr::Pow(b, k) => {
            let lowered = if *k == 2 {
                (**b).clone()
            } else {
                ScalarExpr::pow((**b).clone(), k - 1)
            };
            ScalarExpr::Sum(vec![(
                Scalar::from_int(i64::from(*k)),
                ScalarExpr::Prod(vec![lowered, partial(b, i)]),
            )])
        }
        ScalarExpr::Sin(a) => {
            ScalarExpr::Prod(vec![ScalarExpr::cos((**a).clone()), partial(a, i)])
        }
        ScalarExpr::Cos(a) => ScalarExpr::Sum(vec![(
            -Scalar::one(),
            ScalarExpr::Prod(vec![ScalarExpr::sin((**a).clone()), partial(a, i)]),
        )]),
        ScalarExpr::Exp(a) => {
            ScalarExpr::Prod(vec![ScalarExpr::exp((**a).clone()), partial(a, i)])
        }
    }
}

// A monomial maps each atomic factor (coordinate or transcendental node with
// normalized argument) to its exponent. The empty monomial is the constant 1.
type Monomial = BTreeMap<ScalarExpr, u32>;

// Sparse polynomial over monomials; no zero coefficients are stored.
#[derive(Clone, Default)]
struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    fn zero() -> Poly {
        Poly::default()
    }

    fn constant(c: Scalar) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::new(), c);
        p
    }

    fn atom(a: ScalarExpr) -> Poly {
        let mut m = Monomial::new();
        m.insert(a, 1);
        let mut p = Poly::zero();
        p.add_term(m, Scalar::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &Poly, k: &Scalar) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), k.clone() * c.clone());
        }
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                for (a, k) in m2 {
                    *m.entry(a.clone()).or_insert(0) += k;
                }
                out.add_term(m, c1.clone() * c2.clone());
            }
        }
        out
    }

    fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(Scalar::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

fn to_poly(e: &ScalarExpr) -> Poly {
    match e {
        ScalarExpr::Const(c) => Poly::constant(c.clone()),
        ScalarExpr::Coord(i) => Poly::atom(ScalarExpr::Coord(*i)),
        ScalarExpr::Sum(ts) => {
            let mut acc = Poly::zero();
            for (c, t) in ts {
                acc.add_scaled(&to_poly(t), c);
            }
            acc
        }
        ScalarExpr::Prod(fs) => {
            let mut acc = Poly::constant(Scalar::one());
            for f in fs {
                acc = acc.mul(&to_poly(f));
            }
            acc
        }
        ScalarExpr::Pow(b, k) => to_poly(b).pow(*k),
        ScalarExpr::Sin(a) => Poly::atom(ScalarExpr::sin(a.normalize())),
        ScalarExpr::Cos(a) => Poly::atom(ScalarExpr::cos(a.normalize())),
        ScalarExpr::Exp(a) => Poly::atom(ScalarExpr::exp(a.normalize())),
    }
}

fn mono_to_expr(m: &Monomial) -> ScalarExpr {
    let mut factors: Vec<ScalarExpr> = m
        .iter()
        .map(|(a, k)| {
            if *k == 1 {
                a.clone()
            } else {
                ScalarExpr::pow(a.clone(), *k)
            }
        })
        .collect();
    match factors.len() {
        0 => ScalarExpr::one(),
        1 => factors.pop().unwrap(),
        _ => {
            factors.sort();
            ScalarExpr::Prod(factors)
        }
    }
}

fn from_poly(p: Poly) -> ScalarExpr {
    let mut terms: Vec<(ScalarExpr, Scalar)> = p
        .terms
        .iter()
        .map(|(m, c)| (mono_to_expr(m), c.clone()))
        .collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    match terms.len() {
        0 => ScalarExpr::zero(),
        1 => {
            let (e, c) = terms.pop().unwrap();
            if e == ScalarExpr::one() {
                ScalarExpr::Const(c)
            } else if c.is_one() {
                e
            } else {
                ScalarExpr::Sum(vec![(c, e)])
            }
        }
        _ => ScalarExpr::Sum(terms.into_iter().map(|(e, c)| (c, e)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> ScalarExpr {
        ScalarExpr::coord(i)
    }

    #[test]
    fn like_terms_merge() {
        // x0 + x0 normalizes to 2*x0
        let e = x(0) + x(0);
        assert_eq!(
            e.normalize(),
            ScalarExpr::Sum(vec![(Scalar::from_int(2), x(0))])
        );
    }

    #[test]
    fn difference_of_squares() {
        // (x0 + 1)(x0 - 1) normalizes to x0^2 - 1
        let plus = x(0) + ScalarExpr::one();
        let minus = ScalarExpr::Sum(vec![
            (Scalar::one(), x(0)),
            (-Scalar::one(), ScalarExpr::one()),
        ]);
        let e = plus * minus;
        let n = e.normalize();
        let expected = ScalarExpr::Sum(vec![
            (-Scalar::one(), ScalarExpr::one()),
            (Scalar::one(), ScalarExpr::pow(x(0), 2)),
        ]);
        assert_eq!(n, expected);
        // cross-checked by exact evaluation at x0 in {0, 2, -3}
        for v in [0i64, 2, -3] {
            let point = [Scalar::from_int(v)];
            assert_eq!(
                e.eval_exact(&point).unwrap(),
                n.eval_exact(&point).unwrap()
            );
        }
    }

    #[test]
    fn transcendental_argument_normalized() {
        // sin(x0 + 0) normalizes to sin(x0)
        let e = ScalarExpr::sin(x(0) + ScalarExpr::zero());
        assert_eq!(e.normalize(), ScalarExpr::sin(x(0)));
    }

    #[test]
    fn power_of_sum_unfolds() {
        // (x0 + 1)^2 expands to x0^2 + 2 x0 + 1
        let e = ScalarExpr::pow(x(0) + ScalarExpr::one(), 2);
        let expected = ScalarExpr::Sum(vec![
            (Scalar::one(), ScalarExpr::one()),
            (Scalar::from_int(2), x(0)),
            (Scalar::one(), ScalarExpr::pow(x(0), 2)),
        ]);
        assert_eq!(e.normalize(), expected);
    }

    #[test]
    fn transcendental_powers_stay_structural() {
        // sin(x0)^3 keeps the power; sin is never expanded
        let e = ScalarExpr::pow(ScalarExpr::sin(x(0)), 3);
        assert_eq!(e.normalize(), ScalarExpr::pow(ScalarExpr::sin(x(0)), 3));
    }

    #[test]
    fn zero_coefficients_dropped() {
        let e = ScalarExpr::Sum(vec![
            (Scalar::zero(), x(0)),
            (Scalar::one(), x(1)),
            (-Scalar::one(), x(1)),
        ]);
        assert_eq!(e.normalize(), ScalarExpr::zero());
    }

    #[test]
    fn partial_derivative_rules() {
        // d/dx0 (x0^2) = 2 x0
        let e = ScalarExpr::pow(x(0), 2);
        assert_eq!(
            partial(&e, 0).normalize(),
            ScalarExpr::Sum(vec![(Scalar::from_int(2), x(0))])
        );
        // d/dx0 sin(x0) = cos(x0), d/dx1 sin(x0) = 0
        let s = ScalarExpr::sin(x(0));
        assert_eq!(partial(&s, 0).normalize(), ScalarExpr::cos(x(0)));
        assert_eq!(partial(&s, 1).normalize(), ScalarExpr::zero());
        // chain rule through exp: d/dx0 exp(x0^2) = 2 x0 exp(x0^2)
        let g = ScalarExpr::exp(ScalarExpr::pow(x(0), 2));
        let dg = partial(&g, 0).normalize();
        let expected = ScalarExpr::Sum(vec![(
            Scalar::from_int(2),
            ScalarExpr::Prod(vec![x(0), ScalarExpr::exp(ScalarExpr::pow(x(0), 2))]),
        )]);
        assert_eq!(dg, expected);
    }

    #[test]
    fn normalize_is_idempotent_on_samples() {
        let samples = vec![
            ((x(0) + x(1)) * (x(0) + ScalarExpr::constant(-1))),
            ScalarExpr::pow(x(0) + x(1), 3),
            ScalarExpr::sin(x(0) * x(0)),
            (ScalarExpr::sin(x(0)) * ScalarExpr::sin(x(0))),
        ];
        for e in samples {
            let n = e.normalize();
            assert_eq!(n.normalize(), n);
        }
    }
}
