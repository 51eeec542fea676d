//! Graphviz DOT export of a linking: the two parse forests with solid
//! undirected tree edges, dashed directed leaf-function edges (labelled
//! when the edge carries a path), and switched tensors labelled `*!`.
//!
//! Output is deterministic and byte-stable for a fixed input.

use std::fmt::Write;

use crate::linking::Linking;
use crate::shape::{Atom, Shape, Sign};

/// Render `f` as a DOT digraph (tree edges use `dir=none`).
pub fn export_dot(f: &Linking) -> String {
    let mut out = String::new();
    out.push_str("digraph linking {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=plaintext];\n");
    let src = emit_tree(&mut out, f.source(), "s", Sign::Pos);
    let tgt = emit_tree(&mut out, f.target(), "t", Sign::Neg);
    for (from, edge) in f.fun().edges() {
        let from_id = match from.side {
            crate::goi::Side::Source => &src.leaves[from.index],
            crate::goi::Side::Target => &tgt.leaves[from.index],
        };
        let to_id = match edge.to.side {
            crate::goi::Side::Source => &src.leaves[edge.to.index],
            crate::goi::Side::Target => &tgt.leaves[edge.to.index],
        };
        match &edge.label {
            Some(p) => {
                let _ = writeln!(
                    out,
                    "  {from_id} -> {to_id} [style=dashed, label=\"{p}\"];"
                );
            }
            None => {
                let _ = writeln!(out, "  {from_id} -> {to_id} [style=dashed];");
            }
        }
    }
    out.push_str("}\n");
    out
}

struct Emitted {
    leaves: Vec<String>,
}

/// Write one parse tree; tensors whose sign equals `switched_when` get
/// the `*!` label. Returns the node ids of the leaves in order.
fn emit_tree(out: &mut String, shape: &Shape, prefix: &str, switched_when: Sign) -> Emitted {
    let mut leaves = Vec::new();
    let mut next = 0usize;
    let mut tree_edges = Vec::new();
    walk(
        out,
        shape,
        prefix,
        Sign::Pos,
        switched_when,
        &mut next,
        &mut leaves,
        &mut tree_edges,
    );
    for (a, b) in tree_edges {
        let _ = writeln!(out, "  {a} -> {b} [dir=none];");
    }
    Emitted { leaves }
}

#[allow(clippy::too_many_arguments)]
fn walk(
    out: &mut String,
    shape: &Shape,
    prefix: &str,
    sign: Sign,
    switched_when: Sign,
    next: &mut usize,
    leaves: &mut Vec<String>,
    tree_edges: &mut Vec<(String, String)>,
) -> String {
    let id = format!("{prefix}_n{}", *next);
    *next += 1;
    match shape {
        Shape::Atom(a) => {
            let atom = match a {
                Atom::Unit => "I".to_string(),
                Atom::Gen(name) => name.clone(),
            };
            let _ = writeln!(
                out,
                "  {id} [label=\"{prefix}{}:{atom}\"];",
                leaves.len()
            );
            leaves.push(id.clone());
        }
        Shape::Tensor(l, r) => {
            let label = if sign == switched_when { "*!" } else { "*" };
            let _ = writeln!(out, "  {id} [label=\"{label}\"];");
            let lid = walk(out, l, prefix, sign, switched_when, next, leaves, tree_edges);
            let rid = walk(out, r, prefix, sign, switched_when, next, leaves, tree_edges);
            tree_edges.push((id.clone(), lid));
            tree_edges.push((id.clone(), rid));
        }
        Shape::Dual(arg) => {
            let _ = writeln!(out, "  {id} [label=\"'\"];");
            let aid = walk(
                out,
                arg,
                prefix,
                sign.flip(),
                switched_when,
                next,
                leaves,
                tree_edges,
            );
            tree_edges.push((id.clone(), aid));
        }
    }
    id
}
