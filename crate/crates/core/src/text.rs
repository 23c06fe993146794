//! Text syntax for maps.
//!
//! ```text
//! map     := "map" "(" params ")" "->" tuple
//! params  := pattern {"," pattern} | ""
//! pattern := ident | "(" params ")"
//! tuple   := expr | "(" [tuple {"," tuple}] ")"
//! expr    := ["+"|"-"] term {("+"|"-") term}
//! term    := factor {"*" factor}
//! factor  := atom ["^" nat]
//! atom    := rational | ident | "(" expr ")" | ("sin"|"cos"|"exp") "(" expr ")"
//! ```
//!
//! Nested parentheses in the parameter list give the domain its product
//! tree; a parenthesized single pattern is grouping, and `()` is the unit
//! shape. The codomain tree comes from nested tuples the same way. A flat
//! list of three or more entries folds to the right, so `(a, b, c)` reads as
//! `(a, (b, c))`. Printed maps use the same syntax and parse back to the
//! same normal form.

use crate::expr::ScalarExpr;
use crate::scalar::Scalar;
use crate::shape::Shape;
use crate::smooth::SmoothMap;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Map,
    Ident(String),
    Rational(Scalar),
    LParen,
    RParen,
    Comma,
    Arrow,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Map => write!(f, "'map'"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Rational(c) => write!(f, "number '{c}'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::Arrow => write!(f, "'->'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Sp {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Sp>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            ' ' | '\t' | '\r' => {}
            '(' => out.push(Sp { tok: Tok::LParen, line: tline, col: tcol }),
            ')' => out.push(Sp { tok: Tok::RParen, line: tline, col: tcol }),
            ',' => out.push(Sp { tok: Tok::Comma, line: tline, col: tcol }),
            '+' => out.push(Sp { tok: Tok::Plus, line: tline, col: tcol }),
            '*' => out.push(Sp { tok: Tok::Star, line: tline, col: tcol }),
            '^' => out.push(Sp { tok: Tok::Caret, line: tline, col: tcol }),
            '-' => {
                if i + 1 < chars.len() && chars[i + 1] == '>' {
                    out.push(Sp { tok: Tok::Arrow, line: tline, col: tcol });
                    i += 1;
                    col += 1;
                } else {
                    out.push(Sp { tok: Tok::Minus, line: tline, col: tcol });
                }
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                // a tight "num/den" is one rational literal
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && chars[i] == '.' {
                    return Err(ParseError {
                        line: tline,
                        col: tcol,
                        message: "decimal literals are not supported; use rationals like 3/2"
                            .to_string(),
                    });
                }
                let text: String = chars[start..i].iter().collect();
                let value = text.parse::<Scalar>().map_err(|e| ParseError {
                    line: tline,
                    col: tcol,
                    message: e,
                })?;
                out.push(Sp {
                    tok: Tok::Rational(value),
                    line: tline,
                    col: tcol,
                });
                col += i - start;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = if word == "map" {
                    Tok::Map
                } else {
                    Tok::Ident(word)
                };
                out.push(Sp {
                    tok,
                    line: tline,
                    col: tcol,
                });
                col += i - start;
                continue;
            }
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Sp {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[derive(Clone, Debug)]
enum Pat {
    Leaf(String, usize, usize),
    Group(Vec<Pat>),
}

#[derive(Clone, Debug)]
enum TupleNode {
    Expr(ScalarExpr),
    Group(Vec<TupleNode>),
}

struct Parser {
    toks: Vec<Sp>,
    pos: usize,
    env: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Sp {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Sp {
        let sp = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        sp
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let sp = self.peek();
        Err(ParseError {
            line: sp.line,
            col: sp.col,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if &self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {}, found {}", tok, self.peek().tok))
        }
    }

    fn map(&mut self) -> Result<SmoothMap, ParseError> {
        self.expect(&Tok::Map)?;
        self.expect(&Tok::LParen)?;
        let mut pats = Vec::new();
        if self.peek().tok != Tok::RParen {
            loop {
                pats.push(self.pattern()?);
                if self.peek().tok == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(&Tok::RParen)?;
        let group = Pat::Group(pats);
        let dom = Self::pattern_shape(&group);
        self.bind(&group)?;
        self.expect(&Tok::Arrow)?;
        let node = self.tuple_node()?;
        if self.peek().tok != Tok::Eof {
            return self.err(format!("unexpected {} after map body", self.peek().tok));
        }
        let (cod, comps) = Self::tuple_shape(&node);
        SmoothMap::new(dom, cod, comps).map_err(|e| ParseError {
            line: 1,
            col: 1,
            message: e.to_string(),
        })
    }

    fn pattern(&mut self) -> Result<Pat, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => {
                let sp = self.bump();
                Ok(Pat::Leaf(name, sp.line, sp.col))
            }
            Tok::LParen => {
                self.bump();
                let mut pats = Vec::new();
                if self.peek().tok != Tok::RParen {
                    loop {
                        pats.push(self.pattern()?);
                        if self.peek().tok == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(&Tok::RParen)?;
                Ok(Pat::Group(pats))
            }
            _ => self.err(format!(
                "expected a parameter pattern, found {}",
                self.peek().tok
            )),
        }
    }

    // A group of n >= 2 patterns folds to the right; a singleton group is
    // just grouping; an empty group is the unit shape.
    fn pattern_shape(p: &Pat) -> Shape {
        match p {
            Pat::Leaf(..) => Shape::Line,
            Pat::Group(ps) => match ps.len() {
                0 => Shape::Unit,
                1 => Self::pattern_shape(&ps[0]),
                _ => {
                    let head = Self::pattern_shape(&ps[0]);
                    let tail = Self::pattern_shape(&Pat::Group(ps[1..].to_vec()));
                    Shape::prod(head, tail)
                }
            },
        }
    }

    fn bind(&mut self, p: &Pat) -> Result<(), ParseError> {
        match p {
            Pat::Leaf(name, line, col) => {
                if ["sin", "cos", "exp"].contains(&name.as_str()) {
                    return Err(ParseError {
                        line: *line,
                        col: *col,
                        message: format!("'{name}' is reserved and cannot name a parameter"),
                    });
                }
                let idx = self.env.len();
                if self.env.insert(name.clone(), idx).is_some() {
                    return Err(ParseError {
                        line: *line,
                        col: *col,
                        message: format!("duplicate parameter '{name}'"),
                    });
                }
                Ok(())
            }
            Pat::Group(ps) => {
                for q in ps {
                    self.bind(q)?;
                }
                Ok(())
            }
        }
    }

    fn tuple_node(&mut self) -> Result<TupleNode, ParseError> {
        if self.peek().tok == Tok::LParen {
            // a parenthesized expression and a nested tuple both start with
            // '('; try the expression reading first and backtrack
            let save = self.pos;
            if let Ok(e) = self.expr() {
                if !matches!(self.peek().tok, Tok::Comma | Tok::RParen | Tok::Eof) {
                    return self.err(format!("unexpected {}", self.peek().tok));
                }
                return Ok(TupleNode::Expr(e));
            }
            self.pos = save;
            self.bump(); // '('
            let mut nodes = Vec::new();
            if self.peek().tok != Tok::RParen {
                loop {
                    nodes.push(self.tuple_node()?);
                    if self.peek().tok == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(&Tok::RParen)?;
            Ok(TupleNode::Group(nodes))
        } else {
            Ok(TupleNode::Expr(self.expr()?))
        }
    }

    fn tuple_shape(node: &TupleNode) -> (Shape, Vec<ScalarExpr>) {
        match node {
            TupleNode::Expr(e) => (Shape::Line, vec![e.clone()]),
            TupleNode::Group(ns) => match ns.len() {
                0 => (Shape::Unit, vec![]),
                1 => Self::tuple_shape(&ns[0]),
                _ => {
                    let (hs, mut hc) = Self::tuple_shape(&ns[0]);
                    let (ts, tc) = Self::tuple_shape(&TupleNode::Group(ns[1..].to_vec()));
                    hc.extend(tc);
                    (Shape::prod(hs, ts), hc)
                }
            },
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut terms = Vec::new();
        let mut lead = Scalar::one();
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                lead = -Scalar::one();
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        terms.push((lead, self.term()?));
        loop {
            let sign = match self.peek().tok {
                Tok::Plus => Scalar::one(),
                Tok::Minus => -Scalar::one(),
                _ => break,
            };
            self.bump();
            terms.push((sign, self.term()?));
        }
        if terms.len() == 1 && terms[0].0.is_one() {
            Ok(terms.pop().unwrap().1)
        } else {
            Ok(ScalarExpr::Sum(terms))
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek().tok == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(ScalarExpr::Prod(factors))
        }
    }

    fn factor(&mut self) -> Result<ScalarExpr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let sp = self.peek().clone();
            let k = match &sp.tok {
                Tok::Rational(c) => {
                    let text = c.to_string();
                    text.parse::<u32>().map_err(|_| ParseError {
                        line: sp.line,
                        col: sp.col,
                        message: format!("exponent must be a natural number, found '{c}'"),
                    })?
                }
                other => {
                    return Err(ParseError {
                        line: sp.line,
                        col: sp.col,
                        message: format!("exponent must be a natural number, found {other}"),
                    })
                }
            };
            self.bump();
            Ok(match k {
                0 => ScalarExpr::one(),
                1 => base,
                _ => ScalarExpr::pow(base, k),
            })
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<ScalarExpr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Rational(c) => {
                self.bump();
                Ok(ScalarExpr::Const(c))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let sp = self.bump();
                match name.as_str() {
                    "sin" | "cos" | "exp" => {
                        self.expect(&Tok::LParen)?;
                        let arg = self.expr()?;
                        self.expect(&Tok::RParen)?;
                        Ok(match name.as_str() {
                            "sin" => ScalarExpr::sin(arg),
                            "cos" => ScalarExpr::cos(arg),
                            _ => ScalarExpr::exp(arg),
                        })
                    }
                    _ => match self.env.get(&name) {
                        Some(idx) => Ok(ScalarExpr::coord(*idx)),
                        None => Err(ParseError {
                            line: sp.line,
                            col: sp.col,
                            message: format!("unbound identifier '{name}'"),
                        }),
                    },
                }
            }
            other => self.err(format!("expected an expression, found {other}")),
        }
    }
}

/// Parses the map grammar above into a typed map.
pub fn parse_map(input: &str) -> Result<SmoothMap, ParseError> {
    let toks = lex(input)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        env: HashMap::new(),
    };
    parser.map()
}

/// Prints a map in the input grammar with parameters named `x0, x1, ...`.
pub fn print_map(f: &SmoothMap) -> String {
    let params = print_params(f.dom());
    let mut idx = 0usize;
    let body = print_tuple_top(f.cod(), f.comps(), &mut idx);
    format!("map ({params}) -> {body}")
}

fn print_params(dom: &Shape) -> String {
    fn pat(s: &Shape, next: &mut usize) -> String {
        match s {
            Shape::Unit => "()".to_string(),
            Shape::Line => {
                let name = format!("x{next}");
                *next += 1;
                name
            }
            Shape::Prod(a, b) => format!("({}, {})", pat(a, next), pat(b, next)),
        }
    }
    let mut next = 0usize;
    match dom {
        Shape::Unit => String::new(),
        Shape::Line => pat(dom, &mut next),
        Shape::Prod(a, b) => format!("{}, {}", pat(a, &mut next), pat(b, &mut next)),
    }
}

fn print_tuple_top(cod: &Shape, comps: &[ScalarExpr], idx: &mut usize) -> String {
    match cod {
        Shape::Line => {
            let s = print_expr(&comps[*idx], 0);
            *idx += 1;
            s
        }
        _ => print_tuple(cod, comps, idx),
    }
}

fn print_tuple(cod: &Shape, comps: &[ScalarExpr], idx: &mut usize) -> String {
    match cod {
        Shape::Unit => "()".to_string(),
        Shape::Line => {
            let s = print_expr(&comps[*idx], 0);
            *idx += 1;
            s
        }
        Shape::Prod(a, b) => {
            let left = print_tuple(a, comps, idx);
            let right = print_tuple(b, comps, idx);
            format!("({left}, {right})")
        }
    }
}

/// Renders one expression; `prec` 0 = sum context, 1 = product context,
/// 2 = power-base context.
pub fn print_expr(e: &ScalarExpr, prec: u8) -> String {
    match e {
        ScalarExpr::Const(c) => {
            if c.is_negative() && prec >= 1 {
                format!("({c})")
            } else {
                c.to_string()
            }
        }
        ScalarExpr::Coord(i) => format!("x{i}"),
        ScalarExpr::Sum(terms) => {
            if terms.is_empty() {
                return "0".to_string();
            }
            let mut out = String::new();
            for (i, (c, m)) in terms.iter().enumerate() {
                let negative = c.is_negative();
                let mag = c.abs();
                let piece = if *m == ScalarExpr::one() {
                    mag.to_string()
                } else if mag.is_one() {
                    print_expr(m, 1)
                } else {
                    format!("{}*{}", mag, print_expr(m, 1))
                };
                if i == 0 {
                    if negative {
                        out.push('-');
                    }
                } else if negative {
                    out.push_str(" - ");
                } else {
                    out.push_str(" + ");
                }
                out.push_str(&piece);
            }
            if prec > 0 {
                format!("({out})")
            } else {
                out
            }
        }
        ScalarExpr::Prod(factors) => {
            if factors.is_empty() {
                return "1".to_string();
            }
            let body = factors
                .iter()
                .map(|f| print_expr(f, 1))
                .collect::<Vec<_>>()
                .join("*");
            if prec > 1 {
                format!("({body})")
            } else {
                body
            }
        }
        ScalarExpr::Pow(b, k) => {
            let base = match &**b {
                ScalarExpr::Coord(_)
                | ScalarExpr::Sin(_)
                | ScalarExpr::Cos(_)
                | ScalarExpr::Exp(_) => print_expr(b, 2),
                ScalarExpr::Const(c) if !c.is_negative() => c.to_string(),
                _ => format!("({})", print_expr(b, 0)),
            };
            format!("{base}^{k}")
        }
        ScalarExpr::Sin(a) => format!("sin({})", print_expr(a, 0)),
        ScalarExpr::Cos(a) => format!("cos({})", print_expr(a, 0)),
        ScalarExpr::Exp(a) => format!("exp({})", print_expr(a, 0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::gen::{gen_map, gen_shape, RandomMapConfig};
    use crate::seeding::subseed;

    #[test]
    fn pattern_nesting_gives_the_shape_tree() {
        let f = parse_map("map ((x,y),z) -> (x+z)").unwrap();
        assert_eq!(
            f.dom(),
            &Shape::prod(Shape::prod(Shape::Line, Shape::Line), Shape::Line)
        );
        assert_eq!(f.cod(), &Shape::Line);
    }

    #[test]
    fn empty_params_give_the_unit_shape() {
        let f = parse_map("map () -> (1)").unwrap();
        assert_eq!(f.dom(), &Shape::Unit);
        assert_eq!(f.comps(), &[ScalarExpr::one()]);
    }

    #[test]
    fn unit_factors_in_patterns() {
        let f = parse_map("map (x, ()) -> x").unwrap();
        assert_eq!(f.dom(), &Shape::prod(Shape::Line, Shape::Unit));
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse_map("map (x -> x").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 8); // the arrow
        let err = parse_map("map (x) -> y").unwrap_err();
        assert!(err.message.contains("unbound identifier"));
        let err = parse_map("map (x, x) -> x").unwrap_err();
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn rational_literals_and_signs() {
        let f = parse_map("map (x) -> 3/2*x - 1").unwrap();
        let g = parse_map("map (x) -> -1 + 3/2*x").unwrap();
        assert_eq!(f.normalized().comps(), g.normalized().comps());
    }

    #[test]
    fn nested_tuples_give_codomain_trees() {
        let f = parse_map("map (x) -> ((x, x), x)").unwrap();
        assert_eq!(
            f.cod(),
            &Shape::prod(Shape::prod(Shape::Line, Shape::Line), Shape::Line)
        );
        // flat triples fold right
        let g = parse_map("map (x) -> (x, x, x)").unwrap();
        assert_eq!(
            g.cod(),
            &Shape::prod(Shape::Line, Shape::prod(Shape::Line, Shape::Line))
        );
    }

    #[test]
    fn unit_maps_round_trip() {
        let bang = SmoothMap::zero(&Shape::Line, &Shape::Unit);
        let text = print_map(&bang);
        assert_eq!(text, "map (x0) -> ()");
        let back = parse_map(&text).unwrap();
        assert_eq!(back.cod(), &Shape::Unit);
        let empty = parse_map("map () -> ()").unwrap();
        assert_eq!(empty.dom(), &Shape::Unit);
        assert_eq!(empty.cod(), &Shape::Unit);
    }

    #[test]
    fn grouping_parens_are_not_tuples() {
        let f = parse_map("map (x) -> (x + 1)").unwrap();
        assert_eq!(f.cod(), &Shape::Line);
        let g = parse_map("map (x) -> ((x))").unwrap();
        assert_eq!(g.cod(), &Shape::Line);
    }

    #[test]
    fn print_then_parse_round_trips_on_random_corpus() {
        let poly = RandomMapConfig::polynomial(31);
        let trans = RandomMapConfig::transcendental(32);
        for (ci, cfg) in [poly, trans].iter().enumerate() {
            for t in 0..40u64 {
                let stream = subseed(ci as u64, t);
                let dom = gen_shape(cfg, stream);
                let cod = gen_shape(cfg, subseed(stream, 1));
                let f = gen_map(cfg, stream, &dom, &cod);
                let text = print_map(&f);
                let g = parse_map(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
                assert_eq!(g.dom(), f.dom(), "{text}");
                assert_eq!(g.cod(), f.cod(), "{text}");
                assert_eq!(g.normalized().comps(), f.normalized().comps(), "{text}");
            }
        }
    }

    #[test]
    fn derivative_outputs_round_trip() {
        // derivatives introduce doubled domains and nested codomains
        let f = parse_map("map (x, y) -> (x*y, sin(x))").unwrap();
        let tf = crate::diffop::t_map(&f);
        let text = print_map(&tf);
        let back = parse_map(&text).unwrap();
        assert_eq!(back.dom(), tf.dom());
        assert_eq!(back.cod(), tf.cod());
        assert_eq!(back.normalized().comps(), tf.normalized().comps());
    }
}
