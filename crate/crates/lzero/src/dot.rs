//! Graphviz output.
//!
//! Stage graphs are drawn the way they are built: the two copies of the
//! previous stage sit in clusters keyed by the final tail bit, and the middle
//! path added at the current level is highlighted.

use std::fmt::Write;

use lzero_core::FiniteGraph;

#[derive(Debug, Clone)]
pub struct DotStyle {
    pub name: String,
    /// Group copies and highlight the middle path when the graph is a stage.
    pub layered: bool,
}

impl Default for DotStyle {
    fn default() -> Self {
        DotStyle { name: "L".to_string(), layered: true }
    }
}

const COPY_COLORS: [&str; 2] = ["lightblue", "lightyellow"];

pub fn export_dot(g: &FiniteGraph, style: &DotStyle) -> String {
    let mut out = String::new();
    let (kind, arrow) = if g.is_oriented() { ("digraph", "->") } else { ("graph", "--") };
    writeln!(out, "{kind} {} {{", quote(&style.name)).unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();
    let node = |out: &mut String, indent: &str, i: usize, extra: &str| {
        writeln!(out, "{indent}v{i} [label={}{extra}];", quote(&g.vertex(i).to_string())).unwrap();
    };
    let stage = g.meta().map(|m| m.stage).filter(|_| style.layered);
    match stage {
        Some(n) if n > 0 => {
            for bit in 0..2u8 {
                writeln!(out, "  subgraph cluster_copy{bit} {{").unwrap();
                writeln!(out, "    label=\"copy {bit}\";").unwrap();
                writeln!(out, "    style=filled;").unwrap();
                writeln!(out, "    color={};", COPY_COLORS[bit as usize]).unwrap();
                for (i, v) in g.vertices().iter().enumerate() {
                    if (v.level as usize) < n && v.tail.last() == Some(bit) {
                        node(&mut out, "    ", i, "");
                    }
                }
                writeln!(out, "  }}").unwrap();
            }
            for (i, v) in g.vertices().iter().enumerate() {
                if v.level as usize == n {
                    node(&mut out, "  ", i, ", color=red, penwidth=2");
                }
            }
        }
        _ => {
            for i in 0..g.vertex_count() {
                node(&mut out, "  ", i, "");
            }
        }
    }
    for &(a, b) in g.edge_indices() {
        let middle = stage.is_some_and(|n| n > 0 && g.vertex(a).level as usize == n && g.vertex(b).level as usize == n);
        let attr = if middle { " [color=red, penwidth=2]" } else { "" };
        writeln!(out, "  v{a} {arrow} v{b}{attr};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
