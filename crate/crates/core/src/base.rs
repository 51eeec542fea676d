//! The base category: a free category on a finite directed multigraph.
//!
//! Objects are named generators; morphisms are arrow paths. Path equality
//! is sequence equality, so equality of labelled linkings stays decidable.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` endpoint `{object}` is not a declared object")]
    DanglingArrow { arrow: String, object: String },
    #[error("cannot compose path `{left}` ending at `{at}` with path `{right}` starting at `{from}`")]
    EndpointMismatch {
        left: String,
        right: String,
        at: String,
        from: String,
    },
}

/// A named arrow of the base graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// Finite directed multigraph generating the base category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaseGraph {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
}

impl BaseGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A discrete base over the given object names.
    pub fn discrete<I, S>(objects: I) -> Result<Self, BaseError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut g = Self::new();
        for o in objects {
            g.add_object(o)?;
        }
        Ok(g)
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> Result<(), BaseError> {
        let name = name.into();
        if self.has_object(&name) {
            return Err(BaseError::DuplicateObject(name));
        }
        self.objects.push(name);
        Ok(())
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Result<(), BaseError> {
        let (name, source, target) = (name.into(), source.into(), target.into());
        if self.arrow(&name).is_some() {
            return Err(BaseError::DuplicateArrow(name));
        }
        for obj in [&source, &target] {
            if !self.has_object(obj) {
                return Err(BaseError::DanglingArrow {
                    arrow: name,
                    object: obj.clone(),
                });
            }
        }
        self.arrows.push(Arrow {
            name,
            source,
            target,
        });
        Ok(())
    }

    pub fn has_object(&self, name: &str) -> bool {
        self.objects.iter().any(|o| o == name)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, name: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.name == name)
    }

    pub fn arrows_from<'a>(&'a self, object: &'a str) -> impl Iterator<Item = &'a Arrow> {
        self.arrows.iter().filter(move |a| a.source == object)
    }

    /// The identity path on `obj`.
    pub fn identity_path(&self, obj: &str) -> Result<PathMorphism, BaseError> {
        if !self.has_object(obj) {
            return Err(BaseError::UnknownObject(obj.to_string()));
        }
        Ok(PathMorphism::identity(obj))
    }

    /// The single-arrow path named `x`.
    pub fn arrow_path(&self, x: &str) -> Result<PathMorphism, BaseError> {
        let a = self
            .arrow(x)
            .ok_or_else(|| BaseError::UnknownArrow(x.to_string()))?;
        Ok(PathMorphism {
            source: a.source.clone(),
            target: a.target.clone(),
            arrows: vec![a.name.clone()],
        })
    }

    /// Build a path from a sequence of arrow names, validating chaining.
    pub fn path(&self, names: &[String]) -> Result<PathMorphism, BaseError> {
        let first = names
            .first()
            .ok_or_else(|| BaseError::UnknownArrow(String::new()))?;
        let mut p = self.arrow_path(first)?;
        for x in &names[1..] {
            p = p.compose(&self.arrow_path(x)?)?;
        }
        Ok(p)
    }
}

/// A morphism of the free category: a composable arrow sequence, stored in
/// left-to-right traversal order (first arrow applied first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathMorphism {
    pub source: String,
    pub target: String,
    pub arrows: Vec<String>,
}

impl PathMorphism {
    pub fn identity(obj: impl Into<String>) -> Self {
        let obj = obj.into();
        PathMorphism {
            source: obj.clone(),
            target: obj,
            arrows: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Diagram-order composition: `self` first, then `other`.
    pub fn compose(&self, other: &PathMorphism) -> Result<PathMorphism, BaseError> {
        if self.target != other.source {
            return Err(BaseError::EndpointMismatch {
                left: self.to_string(),
                right: other.to_string(),
                at: self.target.clone(),
                from: other.source.clone(),
            });
        }
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().cloned());
        Ok(PathMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            arrows,
        })
    }
}

impl fmt::Display for PathMorphism {
    /// Applicative order, last arrow first: `[x, w, x]` prints as `x.w.x`
    /// reversed, matching the usual composite notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            return write!(f, "id_{}", self.source);
        }
        let names: Vec<&str> = self.arrows.iter().rev().map(String::as_str).collect();
        write!(f, "{}", names.join("."))
    }
}
