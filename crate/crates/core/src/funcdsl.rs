//! Text syntax for Young functions.
//!
//! ```text
//! expr  := "id" | name "(" [ arg { "," arg } ] ")"
//! arg   := [ key "=" ] ( expr | number | pair | "finite" )
//! pair  := "(" number "," number ")"
//! number:= decimal with optional exponent, or "inf"
//! ```
//!
//! | constructor                 | meaning                                  |
//! |-----------------------------|------------------------------------------|
//! | `pow(p[, scale])`           | `scale · u^p`                            |
//! | `expm1([scale])`            | `scale · (e^u − 1)`                      |
//! | `knee(k)`                   | `max(0, u − k)`                          |
//! | `id`                        | `u`                                      |
//! | `cut(expr, b, at_b)`        | `expr` below `b`, `at_b` at `b`, `∞` above; `at_b` is `inf`, `finite` (continuous) or a number |
//! | `dilate(expr, a)`           | `u ↦ expr(a·u)`                          |
//! | `piecewise((u,v), ...)`     | linear interpolation, first point `(0,0)` |
//!
//! [`format`] prints the canonical form and `parse(format(e)) == e`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ext::INF;
use crate::young::{Young, YoungFunction};

/// Value of a cut-off function at its cut point.
#[derive(Clone, Debug, PartialEq)]
pub enum AtB {
    Inf,
    /// Continuous: the left limit of the inner function.
    Finite,
    Value(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FuncExpr {
    Pow { p: f64, scale: Option<f64> },
    Expm1 { scale: Option<f64> },
    Knee(f64),
    Id,
    Cut { inner: Box<FuncExpr>, b: f64, at_b: AtB },
    Dilate { inner: Box<FuncExpr>, a: f64 },
    Piecewise(Vec<(f64, f64)>),
}

/// A syntax or domain error with the byte span of the offending text.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{message} (at column {})", .span.0 + 1)]
pub struct ParseError {
    pub message: String,
    pub span: (usize, usize),
    pub input: String,
}

impl ParseError {
    /// The input with a caret line under the span.
    pub fn render(&self) -> String {
        let (s, e) = self.span;
        let pad = self.input[..s.min(self.input.len())].chars().count();
        let width = self.input.get(s..e.max(s)).map_or(1, |t| t.chars().count().max(1));
        format!("{}\n{}{}\n{}", self.input, " ".repeat(pad), "^".repeat(width), self.message)
    }
}

impl FuncExpr {
    pub fn lower(&self) -> Result<YoungFunction> {
        Ok(match self {
            FuncExpr::Pow { p, scale } => YoungFunction::power_scaled(*p, scale.unwrap_or(1.0))?,
            FuncExpr::Expm1 { scale } => YoungFunction::exp_minus_one(scale.unwrap_or(1.0))?,
            FuncExpr::Knee(k) => YoungFunction::knee(*k)?,
            FuncExpr::Id => YoungFunction::Identity,
            FuncExpr::Cut { inner, b, at_b } => {
                let f = inner.lower()?;
                let v = match at_b {
                    AtB::Inf => INF,
                    AtB::Value(v) => *v,
                    AtB::Finite => {
                        let v = f.eval_left(*b);
                        if !v.is_finite() {
                            return Err(Error::InvalidFunction(format!(
                                "cut at {b}: inner function has no finite left limit"
                            )));
                        }
                        v
                    }
                };
                YoungFunction::cut_off(f, *b, v)?
            }
            FuncExpr::Dilate { inner, a } => inner.lower()?.dilate(*a)?,
            FuncExpr::Piecewise(pts) => YoungFunction::piecewise(pts.clone())?,
        })
    }

    /// Exact inverse of [`FuncExpr::lower`] up to `AtB::Finite`, which lowers to a value.
    pub fn from_young(f: &YoungFunction) -> FuncExpr {
        match f {
            YoungFunction::Power { p, scale } => {
                FuncExpr::Pow { p: *p, scale: (*scale != 1.0).then_some(*scale) }
            }
            YoungFunction::ExpMinusOne { scale } => FuncExpr::Expm1 { scale: (*scale != 1.0).then_some(*scale) },
            YoungFunction::LinearAboveKnee { knee } => FuncExpr::Knee(*knee),
            YoungFunction::Identity => FuncExpr::Id,
            YoungFunction::Piecewise(p) => FuncExpr::Piecewise(p.clone()),
            YoungFunction::Dilated { inner, a } => {
                FuncExpr::Dilate { inner: Box::new(Self::from_young(inner)), a: *a }
            }
            YoungFunction::CutOff { inner, b, value_at_b } => FuncExpr::Cut {
                inner: Box::new(Self::from_young(inner)),
                b: *b,
                at_b: if value_at_b.is_infinite() { AtB::Inf } else { AtB::Value(*value_at_b) },
            },
        }
    }
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self))
    }
}

/// Canonical text of a number; parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if x == x.trunc() && a < 1e15 {
        format!("{}", x as i64)
    } else if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Canonical text of an expression.
pub fn format(e: &FuncExpr) -> String {
    let n = format_number;
    match e {
        FuncExpr::Pow { p, scale: None } => format!("pow({})", n(*p)),
        FuncExpr::Pow { p, scale: Some(s) } => format!("pow({}, {})", n(*p), n(*s)),
        FuncExpr::Expm1 { scale: None } => "expm1()".into(),
        FuncExpr::Expm1 { scale: Some(s) } => format!("expm1({})", n(*s)),
        FuncExpr::Knee(k) => format!("knee({})", n(*k)),
        FuncExpr::Id => "id".into(),
        FuncExpr::Cut { inner, b, at_b } => {
            let v = match at_b {
                AtB::Inf => "inf".into(),
                AtB::Finite => "finite".into(),
                AtB::Value(v) => n(*v),
            };
            format!("cut({}, {}, {})", format(inner), n(*b), v)
        }
        FuncExpr::Dilate { inner, a } => format!("dilate({}, {})", format(inner), n(*a)),
        FuncExpr::Piecewise(pts) => {
            let body: Vec<String> = pts.iter().map(|(u, v)| format!("({},{})", n(*u), n(*v))).collect();
            format!("piecewise({})", body.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    LParen,
    RParen,
    Comma,
    Eq,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> std::result::Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut lx = Lexer { src, toks: Vec::new() };
        let b = src.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let c = b[i];
            let start = i;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    i += 1;
                    continue;
                }
                b'(' => lx.push(Tok::LParen, i, i + 1),
                b')' => lx.push(Tok::RParen, i, i + 1),
                b',' => lx.push(Tok::Comma, i, i + 1),
                b'=' => lx.push(Tok::Eq, i, i + 1),
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                        i += 1;
                    }
                    lx.push(Tok::Ident(src[start..i].to_string()), start, i);
                    continue;
                }
                b'0'..=b'9' | b'.' | b'+' | b'-' => {
                    i = lx.number(start)?;
                    continue;
                }
                _ => {
                    let ch = src[i..].chars().next().unwrap_or('?');
                    return Err(err(src, format!("unexpected character '{ch}'"), (i, i + ch.len_utf8())));
                }
            }
            i += 1;
        }
        lx.push(Tok::End, b.len(), b.len());
        Ok(lx.toks)
    }

    fn push(&mut self, t: Tok, s: usize, e: usize) {
        self.toks.push((t, s, e));
    }

    fn number(&mut self, start: usize) -> std::result::Result<usize, ParseError> {
        let b = self.src.as_bytes();
        let mut i = start;
        if b[i] == b'+' || b[i] == b'-' {
            i += 1;
        }
        if self.src[i..].starts_with("inf") {
            i += 3;
        } else {
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    i = j;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
        }
        let text = &self.src[start..i];
        match text.parse::<f64>() {
            Ok(v) if !v.is_nan() => {
                self.push(Tok::Num(v), start, i);
                Ok(i)
            }
            _ => Err(err(self.src, format!("malformed number '{text}'"), (start, i.max(start + 1)))),
        }
    }
}

fn err(src: &str, message: String, span: (usize, usize)) -> ParseError {
    ParseError { message, span, input: src.to_string() }
}

#[derive(Clone, Debug)]
enum Val {
    Num(f64),
    Expr(FuncExpr),
    Pair(f64, f64),
    Finite,
}

impl Val {
    fn kind(&self) -> &'static str {
        match self {
            Val::Num(_) => "a number",
            Val::Expr(_) => "a function",
            Val::Pair(..) => "a pair",
            Val::Finite => "a keyword",
        }
    }
}

struct Arg {
    key: Option<String>,
    val: Val,
    span: (usize, usize),
}

/// Constructor name, parameter names and how many are required.
const REGISTRY: &[(&str, &[&str], usize)] = &[
    ("pow", &["p", "scale"], 1),
    ("expm1", &["scale"], 0),
    ("knee", &["k"], 1),
    ("id", &[], 0),
    ("cut", &["inner", "b", "at_b"], 3),
    ("dilate", &["inner", "a"], 2),
];

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn fail<T>(&self, message: impl Into<String>, span: (usize, usize)) -> std::result::Result<T, ParseError> {
        Err(err(self.src, message.into(), span))
    }

    fn expect(&mut self, t: Tok, what: &str) -> std::result::Result<usize, ParseError> {
        if *self.peek() == t {
            let end = self.toks[self.pos].2;
            self.pos += 1;
            Ok(end)
        } else {
            let found = match self.peek() {
                Tok::End => "end of input".to_string(),
                _ => format!("'{}'", &self.src[self.span().0..self.span().1]),
            };
            self.fail(format!("expected {what}, found {found}"), self.span())
        }
    }

    fn expr(&mut self) -> std::result::Result<(FuncExpr, (usize, usize)), ParseError> {
        let (start, _) = self.span();
        let name = match self.peek().clone() {
            Tok::Ident(n) => n,
            _ => return self.fail("expected a function name", self.span()),
        };
        let name_span = self.span();
        self.pos += 1;
        if name == "id" && *self.peek() != Tok::LParen {
            return Ok((FuncExpr::Id, name_span));
        }
        if name == "piecewise" {
            return self.piecewise(start);
        }
        let Some(&(_, params, required)) = REGISTRY.iter().find(|r| r.0 == name) else {
            let known: Vec<&str> = REGISTRY.iter().map(|r| r.0).chain(["piecewise"]).collect();
            return self.fail(format!("unknown function '{name}' (known: {})", known.join(", ")), name_span);
        };
        self.expect(Tok::LParen, "'('")?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.arg()?);
                if *self.peek() == Tok::Comma {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        let end = self.expect(Tok::RParen, "',' or ')'")?;
        let span = (start, end);
        let slots = self.bind(&name, params, required, args, span)?;
        let e = self.build(&name, slots, span)?;
        if let Err(e2) = e.lower() {
            return self.fail(e2.to_string(), span);
        }
        Ok((e, span))
    }

    fn piecewise(&mut self, start: usize) -> std::result::Result<(FuncExpr, (usize, usize)), ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let mut pts = Vec::new();
        loop {
            let a = self.arg()?;
            match a.val {
                Val::Pair(u, v) if a.key.is_none() => pts.push((u, v)),
                _ => return self.fail("piecewise expects (u,v) pairs", a.span),
            }
            if *self.peek() == Tok::Comma {
                self.pos += 1;
            } else {
                break;
            }
        }
        let end = self.expect(Tok::RParen, "',' or ')'")?;
        let e = FuncExpr::Piecewise(pts);
        if let Err(e2) = e.lower() {
            return self.fail(e2.to_string(), (start, end));
        }
        Ok((e, (start, end)))
    }

    fn arg(&mut self) -> std::result::Result<Arg, ParseError> {
        let start = self.span().0;
        let mut key = None;
        let next = self.toks.get(self.pos + 1).map(|t| t.0.clone());
        if let (Tok::Ident(k), Some(Tok::Eq)) = (self.peek().clone(), next) {
            key = Some(k);
            self.pos += 2;
        }
        let val_start = self.span();
        let val = match self.peek().clone() {
            Tok::Num(v) => {
                self.pos += 1;
                Val::Num(v)
            }
            Tok::Ident(w) if w == "inf" => {
                self.pos += 1;
                Val::Num(INF)
            }
            Tok::Ident(w) if w == "finite" => {
                self.pos += 1;
                Val::Finite
            }
            Tok::Ident(_) => Val::Expr(self.expr()?.0),
            Tok::LParen => {
                self.pos += 1;
                let u = self.number()?;
                self.expect(Tok::Comma, "','")?;
                let v = self.number()?;
                self.expect(Tok::RParen, "')'")?;
                Val::Pair(u, v)
            }
            _ => return self.fail("expected an argument", val_start),
        };
        let end = self.toks[self.pos - 1].2;
        Ok(Arg { key, val, span: (start, end) })
    }

    fn number(&mut self) -> std::result::Result<f64, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(v)
            }
            Tok::Ident(w) if w == "inf" => {
                self.pos += 1;
                Ok(INF)
            }
            _ => self.fail("expected a number", self.span()),
        }
    }

    fn bind(
        &self,
        name: &str,
        params: &[&str],
        required: usize,
        args: Vec<Arg>,
        span: (usize, usize),
    ) -> std::result::Result<Vec<Option<(Val, (usize, usize))>>, ParseError> {
        let mut slots: Vec<Option<(Val, (usize, usize))>> = vec![None; params.len()];
        let mut next = 0;
        let mut seen_key = false;
        for a in args {
            let idx = match &a.key {
                Some(k) => {
                    seen_key = true;
                    match params.iter().position(|p| p == k) {
                        Some(i) => i,
                        None => return self.fail(format!("{name} has no parameter '{k}'"), a.span),
                    }
                }
                None => {
                    if seen_key {
                        return self.fail("positional argument after keyword argument", a.span);
                    }
                    next += 1;
                    next - 1
                }
            };
            if idx >= params.len() {
                return self.fail(format!("{name} takes at most {} arguments", params.len()), a.span);
            }
            if slots[idx].is_some() {
                return self.fail(format!("parameter '{}' given twice", params[idx]), a.span);
            }
            slots[idx] = Some((a.val, a.span));
        }
        for (i, p) in params.iter().enumerate().take(required) {
            if slots[i].is_none() {
                return self.fail(format!("{name} is missing parameter '{p}'"), span);
            }
        }
        Ok(slots)
    }

    fn build(
        &self,
        name: &str,
        mut slots: Vec<Option<(Val, (usize, usize))>>,
        _span: (usize, usize),
    ) -> std::result::Result<FuncExpr, ParseError> {
        let mut num = |i: usize| -> std::result::Result<Option<f64>, ParseError> {
            match slots[i].take() {
                None => Ok(None),
                Some((Val::Num(v), _)) => Ok(Some(v)),
                Some((v, s)) => self.fail(format!("expected a number, found {}", v.kind()), s),
            }
        };
        Ok(match name {
            "pow" => {
                let p = num(0)?.unwrap();
                FuncExpr::Pow { p, scale: num(1)? }
            }
            "expm1" => FuncExpr::Expm1 { scale: num(0)? },
            "knee" => FuncExpr::Knee(num(0)?.unwrap()),
            "id" => FuncExpr::Id,
            "cut" => {
                let b = num(1)?.unwrap();
                let at_b = match slots[2].take().unwrap() {
                    (Val::Num(v), _) if v.is_infinite() && v > 0.0 => AtB::Inf,
                    (Val::Num(v), _) => AtB::Value(v),
                    (Val::Finite, _) => AtB::Finite,
                    (v, s) => return self.fail(format!("at_b must be inf, finite or a number, found {}", v.kind()), s),
                };
                let inner = self.inner(slots[0].take().unwrap())?;
                FuncExpr::Cut { inner, b, at_b }
            }
            "dilate" => {
                let a = num(1)?.unwrap();
                FuncExpr::Dilate { inner: self.inner(slots[0].take().unwrap())?, a }
            }
            _ => unreachable!("registry names are exhaustive"),
        })
    }

    fn inner(&self, slot: (Val, (usize, usize))) -> std::result::Result<Box<FuncExpr>, ParseError> {
        match slot {
            (Val::Expr(e), _) => Ok(Box::new(e)),
            (v, s) => self.fail(format!("expected a function, found {}", v.kind()), s),
        }
    }
}

/// Parse and validate one expression.
pub fn parse(text: &str) -> std::result::Result<FuncExpr, ParseError> {
    let toks = Lexer::run(text)?;
    let mut p = Parser { src: text, toks, pos: 0 };
    if *p.peek() == Tok::End {
        return p.fail("empty expression", (0, text.len().max(1)));
    }
    let (e, _) = p.expr()?;
    if *p.peek() != Tok::End {
        let s = p.span();
        return p.fail("unexpected trailing input", (s.0, text.len()));
    }
    Ok(e)
}

/// Parse and lower in one step.
pub fn parse_young(text: &str) -> Result<YoungFunction> {
    parse(text)?.lower()
}

/// One expression per line; blank lines and lines starting with `#` are skipped.
pub fn parse_fixtures(text: &str) -> Result<Vec<FuncExpr>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match parse(t) {
            Ok(e) => out.push(e),
            Err(e) => return Err(Error::Table { line: i + 1, message: e.render() }),
        }
    }
    Ok(out)
}
