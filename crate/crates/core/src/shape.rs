//! Star-autonomous shapes: expressions over generators and the unit `I`
//! built with binary tensor and postfix dual, identified with their parse
//! trees.
//!
//! Concrete syntax: tensor `*` (left-associative), dual `'` (postfix,
//! tighter than tensor), unit `I`, parentheses. Leaves are addressed by
//! 0-based left-to-right index everywhere downstream.

use std::fmt;

use thiserror::Error;

use crate::goi::SignedSet;

/// An atom: the unit or a generator (object of the base graph).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Unit,
    Gen(String),
}

impl Atom {
    pub fn gen(name: impl Into<String>) -> Self {
        Atom::Gen(name.into())
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Atom::Unit)
    }

    pub fn generator(&self) -> Option<&str> {
        match self {
            Atom::Unit => None,
            Atom::Gen(g) => Some(g),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Unit => write!(f, "I"),
            Atom::Gen(g) => write!(f, "{g}"),
        }
    }
}

/// Positive iff under an even number of duals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Pos
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => write!(f, "+"),
            Sign::Neg => write!(f, "-"),
        }
    }
}

/// A shape: parse tree over atoms with binary tensor and unary dual.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Atom(Atom),
    Tensor(Box<Shape>, Box<Shape>),
    Dual(Box<Shape>),
}

impl Shape {
    pub fn unit() -> Shape {
        Shape::Atom(Atom::Unit)
    }

    pub fn gen(name: impl Into<String>) -> Shape {
        Shape::Atom(Atom::gen(name))
    }

    pub fn tensor(left: Shape, right: Shape) -> Shape {
        Shape::Tensor(Box::new(left), Box::new(right))
    }

    pub fn dual(arg: Shape) -> Shape {
        Shape::Dual(Box::new(arg))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Shape::Atom(_) => 1,
            Shape::Tensor(l, r) => l.leaf_count() + r.leaf_count(),
            Shape::Dual(s) => s.leaf_count(),
        }
    }

    /// Leaves in left-to-right written order, with sign and atom label.
    pub fn leaves(&self) -> SignedSet {
        let mut out = Vec::new();
        self.collect_leaves(Sign::Pos, &mut out);
        SignedSet::new(out)
    }

    fn collect_leaves(&self, sign: Sign, out: &mut Vec<(Atom, Sign)>) {
        match self {
            Shape::Atom(a) => out.push((a.clone(), sign)),
            Shape::Tensor(l, r) => {
                l.collect_leaves(sign, out);
                r.collect_leaves(sign, out);
            }
            Shape::Dual(s) => s.collect_leaves(sign.flip(), out),
        }
    }

    /// Sign of the node at `path` (sequence of child steps from the root).
    pub fn sign_at(&self, path: &[Step]) -> Result<Sign, ShapeError> {
        let mut node = self;
        let mut sign = Sign::Pos;
        for (i, step) in path.iter().enumerate() {
            node = match (node, step) {
                (Shape::Tensor(l, _), Step::Left) => l,
                (Shape::Tensor(_, r), Step::Right) => r,
                (Shape::Dual(s), Step::Arg) => {
                    sign = sign.flip();
                    s
                }
                _ => return Err(ShapeError::InvalidPosition { depth: i }),
            };
        }
        Ok(sign)
    }

    /// Iterate over every generator name occurring in the shape.
    pub fn generators(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.visit_generators(&mut out);
        out
    }

    fn visit_generators<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Shape::Atom(Atom::Gen(g)) => out.push(g),
            Shape::Atom(Atom::Unit) => {}
            Shape::Tensor(l, r) => {
                l.visit_generators(out);
                r.visit_generators(out);
            }
            Shape::Dual(s) => s.visit_generators(out),
        }
    }
}

/// One step down a parse tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Left,
    Right,
    Arg,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid tree position at step {depth}")]
    InvalidPosition { depth: usize },
}

/// Parse a shape expression. Generators are validated against `known`
/// when provided.
pub fn parse_shape(text: &str) -> Result<Shape, ShapeError> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let s = p.shape()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(ShapeError::Syntax {
            position: p.pos,
            message: "trailing input".into(),
        });
    }
    Ok(s)
}

/// Parse a shape and check every generator names an object of `objects`.
pub fn parse_shape_checked(text: &str, objects: &[String]) -> Result<Shape, ShapeError> {
    let s = parse_shape(text)?;
    for g in s.generators() {
        if !objects.iter().any(|o| o == g) {
            return Err(ShapeError::UnknownGenerator(g.to_string()));
        }
    }
    Ok(s)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    // shape := term ("*" term)*
    fn shape(&mut self) -> Result<Shape, ShapeError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                let rhs = self.term()?;
                acc = Shape::tensor(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    // term := primary "'"*
    fn term(&mut self) -> Result<Shape, ShapeError> {
        let mut s = self.primary()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'\'') {
                self.pos += 1;
                s = Shape::dual(s);
            } else {
                return Ok(s);
            }
        }
    }

    // primary := IDENT | "I" | "(" shape ")"
    fn primary(&mut self) -> Result<Shape, ShapeError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let s = self.shape()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(ShapeError::Syntax {
                        position: self.pos,
                        message: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(s)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .map(|c| c.is_ascii_alphanumeric() || c == b'_')
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.input[start..self.pos])
                    .expect("ascii ident")
                    .to_string();
                if name == "I" {
                    Ok(Shape::unit())
                } else {
                    Ok(Shape::gen(name))
                }
            }
            _ => Err(ShapeError::Syntax {
                position: self.pos,
                message: "expected atom, `I` or `(`".into(),
            }),
        }
    }
}

impl fmt::Display for Shape {
    /// Canonical printing: round-trips with `parse_shape`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Atom(a) => write!(f, "{a}"),
            Shape::Tensor(l, r) => {
                // tensor is left-associative, so a tensor on the left
                // needs no parentheses
                match l.as_ref() {
                    Shape::Tensor(_, _) | Shape::Atom(_) | Shape::Dual(_) => write!(f, "{l}")?,
                }
                write!(f, "*")?;
                match r.as_ref() {
                    Shape::Tensor(_, _) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
            Shape::Dual(s) => match s.as_ref() {
                Shape::Atom(a) => write!(f, "{a}'"),
                Shape::Dual(_) => write!(f, "{s}'"),
                Shape::Tensor(_, _) => write!(f, "({s})'"),
            },
        }
    }
}

/// A nonempty ordered sequence of shapes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent(pub Vec<Shape>);

impl Sequent {
    pub fn new(shapes: Vec<Shape>) -> Option<Sequent> {
        if shapes.is_empty() {
            None
        } else {
            Some(Sequent(shapes))
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A sequent part plus zero or more cut pairs. Each cut pair stores `S`
/// once; its partner `S'` is derived, with leaf `i` of `S` corresponding
/// to leaf `i` of `S'`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutSequent {
    pub sequent: Vec<Shape>,
    pub cuts: Vec<Shape>,
}

impl CutSequent {
    pub fn new(sequent: Vec<Shape>, cuts: Vec<Shape>) -> Option<CutSequent> {
        if sequent.is_empty() && cuts.is_empty() {
            None
        } else {
            Some(CutSequent { sequent, cuts })
        }
    }
}

impl fmt::Display for CutSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.sequent.iter().map(|s| s.to_string()).collect();
        parts.extend(self.cuts.iter().map(|s| format!("<{s}>")));
        write!(f, "{}", parts.join(", "))
    }
}
