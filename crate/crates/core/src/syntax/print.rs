//! Tree (re-sugared) and DAG renderings of concepts.

use super::term::{Node, TermId, TermStore};
use std::collections::HashMap;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintMode {
    Tree,
    Dag,
}

pub fn print_concept(store: &TermStore, t: TermId, mode: PrintMode) -> String {
    match mode {
        PrintMode::Tree => {
            let mut out = String::new();
            print_lit(store, t, true, &mut out);
            out
        }
        PrintMode::Dag => print_dag(store, t),
    }
}

fn print_lit(store: &TermStore, t: TermId, pos: bool, out: &mut String) {
    match store.node(t) {
        Node::Not(x) => print_lit(store, *x, !pos, out),
        Node::Top => out.push_str(if pos { "top" } else { "bot" }),
        Node::Atom(n) => {
            if pos {
                out.push_str(store.name_str(*n));
            } else {
                let _ = write!(out, "(not {})", store.name_str(*n));
            }
        }
        Node::And(cs) => {
            out.push_str(if pos { "(and" } else { "(or" });
            for &c in cs {
                out.push(' ');
                print_lit(store, c, pos, out);
            }
            out.push(')');
        }
        Node::AtLeast(n, r, c) => {
            let r = store.name_str(*r);
            match (pos, *n) {
                (true, 1) => {
                    let _ = write!(out, "(some {r} ");
                    print_lit(store, *c, true, out);
                }
                (true, n) => {
                    let _ = write!(out, "(atleast {n} {r} ");
                    print_lit(store, *c, true, out);
                }
                (false, 1) => {
                    let _ = write!(out, "(all {r} ");
                    print_lit(store, *c, false, out);
                }
                (false, n) => {
                    let _ = write!(out, "(atmost {} {r} ", n - 1);
                    print_lit(store, *c, true, out);
                }
            }
            out.push(')');
        }
    }
}

fn print_dag(store: &TermStore, t: TermId) -> String {
    let order = store.reachable(t);
    let mut label: HashMap<TermId, usize> = HashMap::new();
    let mut out = String::new();
    for (k, &x) in order.iter().enumerate() {
        label.insert(x, k);
        let _ = write!(out, "n{k} := ");
        match store.node(x) {
            Node::Top => out.push_str("top"),
            Node::Atom(n) => out.push_str(store.name_str(*n)),
            Node::Not(y) => {
                let _ = write!(out, "(not n{})", label[y]);
            }
            Node::And(cs) => {
                out.push_str("(and");
                for c in cs {
                    let _ = write!(out, " n{}", label[c]);
                }
                out.push(')');
            }
            Node::AtLeast(n, r, c) => {
                let _ = write!(out, "(atleast {n} {} n{})", store.name_str(*r), label[c]);
            }
        }
        out.push('\n');
    }
    let _ = writeln!(out, "root n{}", label[&t]);
    out
}
