//! Diagram files: a line-oriented language declaring a base category,
//! named shapes, named morphisms (canonical-constructor terms or explicit
//! edge lists), and equality goals.
//!
//! ```text
//! object a
//! arrow x : a -> b
//! shape P = (a * b')'
//! morphism f : P -> P {
//!   t0 -> s0 [x.w]
//!   ...
//! }
//! term g = seq(l(P), lbar(P))
//! expect equal f g
//! ```
//!
//! `#` starts a comment. In shape positions the sugar `A -o B` expands to
//! `(A * B')'` and `bot` to `I'`. Identifiers in shapes resolve to named
//! shapes first, then to declared base objects. `seq(...)` accepts two or
//! more arguments and folds left to right.

use std::collections::BTreeMap;
use std::fmt;

use crate::base::{BaseGraph, PathMorphism};
use crate::cutelim::OneSidedLinking;
use crate::goi::{Endpoint, Side};
use crate::linking::Linking;
use crate::net::{self, EqOutcome};
use crate::shape::{CutSequent, Shape};

/// A parse or elaboration error with the 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for DiagramError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, DiagramError> {
    Err(DiagramError {
        line,
        msg: msg.into(),
    })
}

/// Abstract syntax for morphism expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismTerm {
    Id(Shape),
    Assoc(Shape, Shape, Shape),
    AssocInv(Shape, Shape, Shape),
    Sym(Shape, Shape),
    L(Shape),
    R(Shape),
    LBar(Shape),
    RBar(Shape),
    Curry(Box<MorphismTerm>),
    Uncurry(Box<MorphismTerm>),
    Dual(Box<MorphismTerm>),
    Tensor(Box<MorphismTerm>, Box<MorphismTerm>),
    Seq(Box<MorphismTerm>, Box<MorphismTerm>),
    Gen(String),
    Ref(String),
}

/// A goal line from a diagram file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Goal {
    Equal(String, String),
    Distinct(String, String),
    Valid(String),
    Invalid(String),
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Equal(a, b) => write!(f, "expect equal {a} {b}"),
            Goal::Distinct(a, b) => write!(f, "expect distinct {a} {b}"),
            Goal::Valid(a) => write!(f, "expect valid {a}"),
            Goal::Invalid(a) => write!(f, "expect invalid {a}"),
        }
    }
}

/// A fully parsed and elaborated diagram file.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub base: BaseGraph,
    pub shapes: BTreeMap<String, Shape>,
    /// named morphisms in declaration order
    pub morphisms: Vec<(String, Linking)>,
    pub goals: Vec<(usize, Goal)>,
}

impl Diagram {
    pub fn morphism(&self, name: &str) -> Option<&Linking> {
        self.morphisms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l)
    }
}

// ---------------------------------------------------------------------------
// shape expressions with CLI sugar

/// Parse a shape expression, resolving named shapes and base objects.
pub fn parse_shape_expr(
    text: &str,
    shapes: &BTreeMap<String, Shape>,
    base: &BaseGraph,
    line: usize,
) -> Result<Shape, DiagramError> {
    let toks = tokenize(text, line)?;
    let mut p = Parser { toks, pos: 0, line };
    let s = p.shape(shapes, base)?;
    if p.pos != p.toks.len() {
        return err(line, format!("unexpected `{}` after shape", p.toks[p.pos].text()));
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Star,
    Prime,
    LParen,
    RParen,
    Comma,
    Lolli,  // -o
    Arrow,  // ->
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Star => "*".into(),
            Tok::Prime => "'".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Lolli => "-o".into(),
            Tok::Arrow => "->".into(),
        }
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Tok>, DiagramError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '\'' => {
                toks.push(Tok::Prime);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '-' => {
                match bytes.get(i + 1).map(|&b| b as char) {
                    Some('o') => toks.push(Tok::Lolli),
                    Some('>') => toks.push(Tok::Arrow),
                    _ => return err(line, "expected `-o` or `->` after `-`"),
                }
                i += 2;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    if d.is_ascii_alphanumeric() || d == '_' || d == '.' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(text[start..i].to_string()));
            }
            other => return err(line, format!("unexpected character `{other}`")),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), DiagramError> {
        match self.bump() {
            Some(got) if got == t => Ok(()),
            Some(got) => err(self.line, format!("expected `{}`, got `{}`", t.text(), got.text())),
            None => err(self.line, format!("expected `{}` at end of line", t.text())),
        }
    }

    // shape := tens ("-o" shape)?   (right-associative)
    fn shape(
        &mut self,
        shapes: &BTreeMap<String, Shape>,
        base: &BaseGraph,
    ) -> Result<Shape, DiagramError> {
        let left = self.tens(shapes, base)?;
        if self.peek() == Some(&Tok::Lolli) {
            self.bump();
            let right = self.shape(shapes, base)?;
            // A -o B  ==  (A * B')'
            Ok(Shape::dual(Shape::tensor(left, Shape::dual(right))))
        } else {
            Ok(left)
        }
    }

    // tens := term ("*" term)*
    fn tens(
        &mut self,
        shapes: &BTreeMap<String, Shape>,
        base: &BaseGraph,
    ) -> Result<Shape, DiagramError> {
        let mut s = self.term(shapes, base)?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let rhs = self.term(shapes, base)?;
            s = Shape::tensor(s, rhs);
        }
        Ok(s)
    }

    // term := primary "'"*
    fn term(
        &mut self,
        shapes: &BTreeMap<String, Shape>,
        base: &BaseGraph,
    ) -> Result<Shape, DiagramError> {
        let mut s = self.primary(shapes, base)?;
        while self.peek() == Some(&Tok::Prime) {
            self.bump();
            s = Shape::dual(s);
        }
        Ok(s)
    }

    fn primary(
        &mut self,
        shapes: &BTreeMap<String, Shape>,
        base: &BaseGraph,
    ) -> Result<Shape, DiagramError> {
        match self.bump() {
            Some(Tok::LParen) => {
                let s = self.shape(shapes, base)?;
                self.expect(Tok::RParen)?;
                Ok(s)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "I" => Ok(Shape::unit()),
                "bot" => Ok(Shape::dual(Shape::unit())),
                _ => {
                    if let Some(s) = shapes.get(&name) {
                        Ok(s.clone())
                    } else if base.has_object(&name) {
                        Ok(Shape::gen(name))
                    } else {
                        err(self.line, format!("unknown shape or object `{name}`"))
                    }
                }
            },
            Some(t) => err(self.line, format!("unexpected `{}` in shape", t.text())),
            None => err(self.line, "expected a shape"),
        }
    }
}

// ---------------------------------------------------------------------------
// morphism terms

/// Parse a morphism term expression.
pub fn parse_term(
    text: &str,
    shapes: &BTreeMap<String, Shape>,
    base: &BaseGraph,
    line: usize,
) -> Result<MorphismTerm, DiagramError> {
    let toks = tokenize(text, line)?;
    let mut p = Parser { toks, pos: 0, line };
    let t = p.mor_term(shapes, base)?;
    if p.pos != p.toks.len() {
        return err(line, format!("unexpected `{}` after term", p.toks[p.pos].text()));
    }
    Ok(t)
}

impl Parser {
    fn mor_term(
        &mut self,
        shapes: &BTreeMap<String, Shape>,
        base: &BaseGraph,
    ) -> Result<MorphismTerm, DiagramError> {
        let Some(Tok::Ident(head)) = self.bump() else {
            return err(self.line, "expected a morphism term");
        };
        if self.peek() != Some(&Tok::LParen) {
            // a bare identifier is a reference to a named morphism
            return Ok(MorphismTerm::Ref(head));
        }
        self.bump();
        let term = match head.as_str() {
            "id" => MorphismTerm::Id(self.shape(shapes, base)?),
            "assoc" | "assoc_inv" => {
                let s = self.shape(shapes, base)?;
                self.expect(Tok::Comma)?;
                let t = self.shape(shapes, base)?;
                self.expect(Tok::Comma)?;
                let u = self.shape(shapes, base)?;
                if head == "assoc" {
                    MorphismTerm::Assoc(s, t, u)
                } else {
                    MorphismTerm::AssocInv(s, t, u)
                }
            }
            "sym" => {
                let s = self.shape(shapes, base)?;
                self.expect(Tok::Comma)?;
                let t = self.shape(shapes, base)?;
                MorphismTerm::Sym(s, t)
            }
            "l" => MorphismTerm::L(self.shape(shapes, base)?),
            "r" => MorphismTerm::R(self.shape(shapes, base)?),
            "lbar" => MorphismTerm::LBar(self.shape(shapes, base)?),
            "rbar" => MorphismTerm::RBar(self.shape(shapes, base)?),
            "curry" => MorphismTerm::Curry(Box::new(self.mor_term(shapes, base)?)),
            "uncurry" => MorphismTerm::Uncurry(Box::new(self.mor_term(shapes, base)?)),
            "dual" => MorphismTerm::Dual(Box::new(self.mor_term(shapes, base)?)),
            "tensor" => {
                let a = self.mor_term(shapes, base)?;
                self.expect(Tok::Comma)?;
                let b = self.mor_term(shapes, base)?;
                MorphismTerm::Tensor(Box::new(a), Box::new(b))
            }
            "seq" => {
                let mut t = self.mor_term(shapes, base)?;
                self.expect(Tok::Comma)?;
                let mut u = self.mor_term(shapes, base)?;
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    let next = self.mor_term(shapes, base)?;
                    t = MorphismTerm::Seq(Box::new(t), Box::new(u));
                    u = next;
                }
                MorphismTerm::Seq(Box::new(t), Box::new(u))
            }
            "gen" | "ref" => {
                let Some(Tok::Ident(name)) = self.bump() else {
                    return err(self.line, format!("`{head}` expects a name"));
                };
                if head == "gen" {
                    MorphismTerm::Gen(name)
                } else {
                    MorphismTerm::Ref(name)
                }
            }
            other => return err(self.line, format!("unknown morphism constructor `{other}`")),
        };
        self.expect(Tok::RParen)?;
        Ok(term)
    }
}

/// Turn a term into a linking, resolving `gen` against `base` and `ref`
/// against the named morphisms.
pub fn elaborate(
    t: &MorphismTerm,
    base: &BaseGraph,
    named: &[(String, Linking)],
    line: usize,
) -> Result<Linking, DiagramError> {
    let f = match t {
        MorphismTerm::Id(s) => Linking::identity(s),
        MorphismTerm::Assoc(s, t, u) => Linking::assoc(s, t, u),
        MorphismTerm::AssocInv(s, t, u) => Linking::assoc_inv(s, t, u),
        MorphismTerm::Sym(s, t) => Linking::sym(s, t),
        MorphismTerm::L(s) => Linking::unit_l(s),
        MorphismTerm::R(s) => Linking::unit_r(s),
        MorphismTerm::LBar(s) => Linking::unit_l_inv(s),
        MorphismTerm::RBar(s) => Linking::unit_r_inv(s),
        MorphismTerm::Curry(t) => {
            let f = elaborate(t, base, named, line)?;
            Linking::curry(&f).map_err(|e| DiagramError {
                line,
                msg: e.to_string(),
            })?
        }
        MorphismTerm::Uncurry(t) => {
            let f = elaborate(t, base, named, line)?;
            Linking::uncurry(&f).map_err(|e| DiagramError {
                line,
                msg: e.to_string(),
            })?
        }
        MorphismTerm::Dual(t) => Linking::dual_mor(&elaborate(t, base, named, line)?),
        MorphismTerm::Tensor(t, u) => Linking::tensor_mor(
            &elaborate(t, base, named, line)?,
            &elaborate(u, base, named, line)?,
        ),
        MorphismTerm::Seq(t, u) => {
            let f = elaborate(t, base, named, line)?;
            let g = elaborate(u, base, named, line)?;
            f.compose(&g).map_err(|_| DiagramError {
                line,
                msg: format!(
                    "cannot compose: first factor ends at {}, second starts at {}",
                    f.target(),
                    g.source()
                ),
            })?
        }
        MorphismTerm::Gen(x) => Linking::gen(base, x).map_err(|e| DiagramError {
            line,
            msg: e.to_string(),
        })?,
        MorphismTerm::Ref(name) => named
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l.clone())
            .ok_or_else(|| DiagramError {
                line,
                msg: format!("unknown morphism `{name}`"),
            })?,
    };
    Ok(f)
}

// ---------------------------------------------------------------------------
// edge lines and labels

/// Parse an endpoint `s<i>` or `t<i>`.
fn parse_endpoint(text: &str, line: usize) -> Result<Endpoint, DiagramError> {
    let side = match text.chars().next() {
        Some('s') => Side::Source,
        Some('t') => Side::Target,
        _ => return err(line, format!("expected endpoint `s<i>` or `t<i>`, got `{text}`")),
    };
    let index: usize = text[1..]
        .parse()
        .map_err(|_| DiagramError {
            line,
            msg: format!("bad endpoint index in `{text}`"),
        })?;
    Ok(Endpoint { side, index })
}

/// Parse a label `[x.w.x]` body using the display convention: names are
/// written in composition order (last arrow first). `id_a` denotes the
/// identity path on `a`.
fn parse_label(body: &str, base: &BaseGraph, line: usize) -> Result<PathMorphism, DiagramError> {
    let body = body.trim();
    if let Some(obj) = body.strip_prefix("id_") {
        return base.identity_path(obj).map_err(|e| DiagramError {
            line,
            msg: e.to_string(),
        });
    }
    let mut names: Vec<String> = body.split('.').map(|s| s.trim().to_string()).collect();
    names.reverse();
    base.path(&names).map_err(|e| DiagramError {
        line,
        msg: e.to_string(),
    })
}

/// Split an edge line `FROM -> TO [label]` into its pieces.
fn split_edge_line<'a>(
    text: &'a str,
    line: usize,
) -> Result<(&'a str, &'a str, Option<&'a str>), DiagramError> {
    let Some((from, rest)) = text.split_once("->") else {
        return err(line, format!("expected `from -> to` in edge line `{text}`"));
    };
    let rest = rest.trim();
    let (to, label) = match rest.split_once('[') {
        Some((to, tail)) => {
            let Some(body) = tail.trim().strip_suffix(']') else {
                return err(line, "unterminated `[label]`");
            };
            (to.trim(), Some(body))
        }
        None => (rest, None),
    };
    Ok((from.trim(), to, label))
}

// ---------------------------------------------------------------------------
// diagram files

/// Parse a whole diagram file, elaborating morphisms eagerly.
pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let mut d = Diagram {
        base: BaseGraph::new(),
        shapes: BTreeMap::new(),
        morphisms: Vec::new(),
        goals: Vec::new(),
    };
    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, raw)) = lines.next() {
        let n = idx + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let (kw, rest) = split_keyword(content);
        match kw {
            "object" => {
                let name = ident_only(rest, n)?;
                d.base.add_object(name).map_err(|e| DiagramError {
                    line: n,
                    msg: e.to_string(),
                })?;
            }
            "arrow" => {
                // arrow x : a -> b
                let Some((name, ty)) = rest.split_once(':') else {
                    return err(n, "expected `arrow x : a -> b`");
                };
                let Some((src, tgt)) = ty.split_once("->") else {
                    return err(n, "expected `arrow x : a -> b`");
                };
                d.base
                    .add_arrow(name.trim(), src.trim(), tgt.trim())
                    .map_err(|e| DiagramError {
                        line: n,
                        msg: e.to_string(),
                    })?;
            }
            "shape" => {
                let Some((name, expr)) = rest.split_once('=') else {
                    return err(n, "expected `shape P = ...`");
                };
                let name = ident_only(name, n)?;
                if d.shapes.contains_key(&name) {
                    return err(n, format!("duplicate shape `{name}`"));
                }
                let s = parse_shape_expr(expr, &d.shapes, &d.base, n)?;
                d.shapes.insert(name, s);
            }
            "morphism" | "linking" => {
                // morphism f : S -> T {  ... edges ...  }
                let Some(header) = rest.strip_suffix('{') else {
                    return err(n, "expected `{` at end of morphism header");
                };
                let Some((name, ty)) = header.split_once(':') else {
                    return err(n, "expected `morphism f : S -> T {`");
                };
                let name = ident_only(name, n)?;
                let (src, tgt) = split_shapes_arrow(ty, n)?;
                let source = parse_shape_expr(src, &d.shapes, &d.base, n)?;
                let target = parse_shape_expr(tgt, &d.shapes, &d.base, n)?;
                let mut edges = Vec::new();
                let mut closed = false;
                for (eidx, eraw) in lines.by_ref() {
                    let en = eidx + 1;
                    let etext = strip_comment(eraw);
                    if etext.is_empty() {
                        continue;
                    }
                    if etext == "}" {
                        closed = true;
                        break;
                    }
                    let (from, to, label) = split_edge_line(etext, en)?;
                    let from = parse_endpoint(from, en)?;
                    let to = parse_endpoint(to, en)?;
                    let label = label
                        .map(|b| parse_label(b, &d.base, en))
                        .transpose()?;
                    edges.push((from, to, label));
                }
                if !closed {
                    return err(n, format!("morphism `{name}` block never closed"));
                }
                // an omitted label on a generator-to-generator edge means
                // the identity path (the atoms must match)
                let src_leaves = source.leaves();
                let tgt_leaves = target.leaves();
                let atom_at = |e: &Endpoint| match e.side {
                    Side::Source => src_leaves.atom(e.index),
                    Side::Target => tgt_leaves.atom(e.index),
                };
                for (from, to, label) in edges.iter_mut() {
                    if label.is_none() {
                        if let (
                            Some(crate::shape::Atom::Gen(a)),
                            Some(crate::shape::Atom::Gen(_)),
                        ) = (atom_at(from), atom_at(to))
                        {
                            *label = Some(PathMorphism::identity(a.clone()));
                        }
                    }
                }
                let f = Linking::from_edges(source, target, edges).map_err(|e| DiagramError {
                    line: n,
                    msg: format!("in morphism `{name}`: {e}"),
                })?;
                add_morphism(&mut d, name, f, n)?;
            }
            "term" => {
                let Some((name, expr)) = rest.split_once('=') else {
                    return err(n, "expected `term g = ...`");
                };
                let name = ident_only(name, n)?;
                let t = parse_term(expr, &d.shapes, &d.base, n)?;
                let f = elaborate(&t, &d.base, &d.morphisms, n)?;
                add_morphism(&mut d, name, f, n)?;
            }
            "expect" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let goal = match words.as_slice() {
                    ["equal", a, b] => Goal::Equal(a.to_string(), b.to_string()),
                    ["distinct", a, b] => Goal::Distinct(a.to_string(), b.to_string()),
                    ["valid", a] => Goal::Valid(a.to_string()),
                    ["invalid", a] => Goal::Invalid(a.to_string()),
                    _ => return err(n, "expected `expect equal|distinct|valid|invalid ...`"),
                };
                for name in goal_names(&goal) {
                    if d.morphism(name).is_none() {
                        return err(n, format!("unknown morphism `{name}` in goal"));
                    }
                }
                d.goals.push((n, goal));
            }
            other => return err(n, format!("unknown declaration `{other}`")),
        }
    }
    Ok(d)
}

fn goal_names(g: &Goal) -> Vec<&str> {
    match g {
        Goal::Equal(a, b) | Goal::Distinct(a, b) => vec![a, b],
        Goal::Valid(a) | Goal::Invalid(a) => vec![a],
    }
}

fn add_morphism(
    d: &mut Diagram,
    name: String,
    f: Linking,
    line: usize,
) -> Result<(), DiagramError> {
    if d.morphism(&name).is_some() {
        return err(line, format!("duplicate morphism `{name}`"));
    }
    d.morphisms.push((name, f));
    Ok(())
}

fn strip_comment(raw: &str) -> &str {
    match raw.split_once('#') {
        Some((before, _)) => before.trim(),
        None => raw.trim(),
    }
}

fn split_keyword(content: &str) -> (&str, &str) {
    match content.split_once(char::is_whitespace) {
        Some((kw, rest)) => (kw, rest.trim()),
        None => (content, ""),
    }
}

fn ident_only(text: &str, line: usize) -> Result<String, DiagramError> {
    let t = text.trim();
    if !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        Ok(t.to_string())
    } else {
        err(line, format!("expected a name, got `{t}`"))
    }
}

/// Split `S -> T` on the top-level arrow (shapes may contain `-o`, which
/// tokenizes separately, but textual splitting must skip it).
fn split_shapes_arrow(ty: &str, line: usize) -> Result<(&str, &str), DiagramError> {
    let bytes = ty.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    while i + 1 < bytes.len() {
        match bytes[i] as char {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '-' if depth == 0 && bytes[i + 1] as char == '>' => {
                return Ok((&ty[..i], &ty[i + 2..]));
            }
            _ => {}
        }
        i += 1;
    }
    err(line, "expected `S -> T`")
}

// ---------------------------------------------------------------------------
// goal running

/// Options controlling goal evaluation.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// arena bound for the rewiring search
    pub max_class_size: usize,
    /// force the brute-force switching enumeration instead of contraction
    pub oracle: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_class_size: net::DEFAULT_CLASS_LIMIT,
            oracle: false,
        }
    }
}

/// The outcome of running a diagram's goals.
#[derive(Debug, Clone)]
pub struct Report {
    pub lines: Vec<String>,
    /// 0 all pass, 1 some goal fails, 3 inconclusive
    pub exit_code: i32,
}

fn check_with(f: &Linking, opts: &RunOptions) -> Result<(), crate::linking::LinkingError> {
    if opts.oracle {
        f.check_oracle(crate::linking::DEFAULT_SWITCHING_BOUND)
    } else {
        f.check()
    }
}

/// Evaluate every goal of a parsed diagram, in order.
pub fn run_goals(d: &Diagram, opts: &RunOptions) -> Report {
    let mut lines = Vec::new();
    let mut failed = false;
    let mut inconclusive = false;
    for (_, goal) in &d.goals {
        match goal {
            Goal::Valid(a) | Goal::Invalid(a) => {
                let f = d.morphism(a).expect("resolved at parse time");
                let verdict = check_with(f, opts);
                let want_valid = matches!(goal, Goal::Valid(_));
                let pass = verdict.is_ok() == want_valid;
                if pass {
                    lines.push(format!("PASS {goal}"));
                } else {
                    failed = true;
                    match verdict {
                        Ok(()) => lines.push(format!("FAIL {goal}: `{a}` is valid")),
                        Err(e) => lines.push(format!("FAIL {goal}: {e}")),
                    }
                }
            }
            Goal::Equal(a, b) | Goal::Distinct(a, b) => {
                let f = d.morphism(a).expect("resolved at parse time");
                let g = d.morphism(b).expect("resolved at parse time");
                let want_equal = matches!(goal, Goal::Equal(_, _));
                match net::equivalent(f, g, opts.max_class_size) {
                    EqOutcome::Equivalent { witness } => {
                        if want_equal {
                            lines.push(format!("PASS {goal} ({} rewiring(s))", witness.len()));
                            for step in &witness {
                                lines.push(format!("  {step}"));
                            }
                        } else {
                            failed = true;
                            lines.push(format!(
                                "FAIL {goal}: equivalent via {} rewiring(s)",
                                witness.len()
                            ));
                        }
                    }
                    EqOutcome::Distinct => {
                        if want_equal {
                            failed = true;
                            lines.push(format!("FAIL {goal}: nets are distinct"));
                        } else {
                            lines.push(format!("PASS {goal}"));
                        }
                    }
                    EqOutcome::Inconclusive { explored } => {
                        inconclusive = true;
                        lines.push(format!(
                            "INCONCLUSIVE {goal}: explored {explored} linkings"
                        ));
                    }
                }
            }
        }
    }
    let exit_code = if failed {
        1
    } else if inconclusive {
        3
    } else {
        0
    };
    Report { lines, exit_code }
}

/// Parse a diagram and run its goals; parse errors map to exit code 2.
pub fn run_diagram(text: &str, opts: &RunOptions) -> Report {
    match parse_diagram(text) {
        Ok(d) => run_goals(&d, opts),
        Err(e) => Report {
            lines: vec![format!("ERROR {e}")],
            exit_code: 2,
        },
    }
}

// ---------------------------------------------------------------------------
// sequent files (for `normalize`)

/// Parse a sequent file: base/shape declarations, `sequent: S1, S2, ...`,
/// `cut: S` lines, and edge lines `g<tree>.<leaf> -> g<tree>.<leaf> [label]`.
pub fn parse_sequent_file(text: &str) -> Result<OneSidedLinking, DiagramError> {
    let mut base = BaseGraph::new();
    let mut shapes: BTreeMap<String, Shape> = BTreeMap::new();
    let mut sequent: Vec<Shape> = Vec::new();
    let mut cuts: Vec<Shape> = Vec::new();
    let mut edges: Vec<(usize, String, String, Option<String>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let n = idx + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let (kw, rest) = split_keyword(content);
        match kw {
            "object" => {
                let name = ident_only(rest, n)?;
                base.add_object(name).map_err(|e| DiagramError {
                    line: n,
                    msg: e.to_string(),
                })?;
            }
            "arrow" => {
                let Some((name, ty)) = rest.split_once(':') else {
                    return err(n, "expected `arrow x : a -> b`");
                };
                let Some((src, tgt)) = ty.split_once("->") else {
                    return err(n, "expected `arrow x : a -> b`");
                };
                base.add_arrow(name.trim(), src.trim(), tgt.trim())
                    .map_err(|e| DiagramError {
                        line: n,
                        msg: e.to_string(),
                    })?;
            }
            "shape" => {
                let Some((name, expr)) = rest.split_once('=') else {
                    return err(n, "expected `shape P = ...`");
                };
                let name = ident_only(name, n)?;
                let s = parse_shape_expr(expr, &shapes, &base, n)?;
                shapes.insert(name, s);
            }
            "sequent:" => {
                for part in rest.split(',') {
                    sequent.push(parse_shape_expr(part, &shapes, &base, n)?);
                }
            }
            "cut:" => {
                cuts.push(parse_shape_expr(rest, &shapes, &base, n)?);
            }
            _ => {
                // an edge line
                let (from, to, label) = split_edge_line(content, n)?;
                edges.push((
                    n,
                    from.to_string(),
                    to.to_string(),
                    label.map(|s| s.to_string()),
                ));
            }
        }
    }
    let Some(cs) = CutSequent::new(sequent, cuts) else {
        return err(0, "a sequent file needs at least one shape or cut");
    };
    let mut os = OneSidedLinking::new(cs);
    for (n, from, to, label) in edges {
        let from = parse_os_leaf(&from, &os, n)?;
        let to = parse_os_leaf(&to, &os, n)?;
        let label = label.map(|b| parse_label(&b, &base, n)).transpose()?;
        os.add_edge(from, to, label).map_err(|e| DiagramError {
            line: n,
            msg: e.to_string(),
        })?;
    }
    Ok(os)
}

fn parse_os_leaf(
    text: &str,
    os: &OneSidedLinking,
    line: usize,
) -> Result<crate::cutelim::OsLeaf, DiagramError> {
    let bad = || DiagramError {
        line,
        msg: format!("expected leaf `g<tree>.<leaf>`, got `{text}`"),
    };
    let rest = text.strip_prefix('g').ok_or_else(bad)?;
    let (tree, leaf) = rest.split_once('.').ok_or_else(bad)?;
    let tree: usize = tree.parse().map_err(|_| bad())?;
    let leaf: usize = leaf.parse().map_err(|_| bad())?;
    os.leaf_from_tree_index(tree, leaf).ok_or_else(|| DiagramError {
        line,
        msg: format!("leaf `{text}` is out of range"),
    })
}
