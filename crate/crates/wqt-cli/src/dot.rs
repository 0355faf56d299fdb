//! DOT rendering of the expansion graph: one node per table row
//! labeled with the rendered monomial, one edge per applied move
//! labeled with the inverted A-monomial.

use std::fmt::Write;

use wqt_core::engine::FieldExpansion;

pub fn to_dot(fe: &FieldExpansion) -> String {
    let mut out = String::from("digraph expansion {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=box];\n");
    for (k, entry) in fe.entries().iter().enumerate() {
        writeln!(out, "  n{} [label=\"{}\"];", k, entry.monomial).expect("write to string");
    }
    for e in fe.edges() {
        writeln!(
            out,
            "  n{} -> n{} [label=\"A{}({})^-1\"];",
            e.from, e.to, e.node, e.color
        )
        .expect("write to string");
    }
    out.push_str("}\n");
    out
}
