//! S-expression readers for concepts, ontologies, signatures, models and the
//! DAG output format.

use super::ontology::{Dialect, Ontology};
use super::signature::Signature;
use super::term::{TermId, TermStore};
use crate::error::{Error, Result};
use crate::semantics::FiniteInterpretation;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Atom(_, o) | Sexp::List(_, o) => *o,
        }
    }
}

fn syntax(offset: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        msg: msg.into(),
    }
}

fn arity(offset: usize, msg: impl Into<String>) -> Error {
    Error::Arity {
        offset,
        msg: msg.into(),
    }
}

/// Reads a sequence of s-expressions. `;` starts a line comment.
pub(crate) fn read_all(text: &str) -> Result<Vec<Sexp>> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut stack: Vec<(Vec<Sexp>, usize)> = Vec::new();
    let mut top = Vec::new();
    while pos < bytes.len() {
        let c = bytes[pos];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => pos += 1,
            b';' => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            b'(' => {
                stack.push((Vec::new(), pos));
                pos += 1;
            }
            b')' => {
                let (items, start) = stack
                    .pop()
                    .ok_or_else(|| syntax(pos, "unbalanced ')'"))?;
                let e = Sexp::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
                pos += 1;
            }
            c if c.is_ascii_alphanumeric() || c == b'_' || c == b'-' => {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric()
                        || bytes[pos] == b'_'
                        || bytes[pos] == b'-')
                {
                    pos += 1;
                }
                let e = Sexp::Atom(text[start..pos].to_string(), start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
            _ => return Err(syntax(pos, format!("unexpected character {:?}", c as char))),
        }
    }
    if let Some((_, start)) = stack.last() {
        return Err(syntax(*start, "unclosed '('"));
    }
    Ok(top)
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

const KEYWORDS: &[&str] = &[
    "top", "bot", "not", "and", "or", "some", "all", "atleast", "atmost",
];

fn expect_name(e: &Sexp, what: &str) -> Result<String> {
    match e {
        Sexp::Atom(s, o) if is_name(s) && !KEYWORDS.contains(&s.as_str()) => {
            let _ = o;
            Ok(s.clone())
        }
        _ => Err(syntax(e.offset(), format!("expected {what}"))),
    }
}

fn expect_nat(e: &Sexp) -> Result<u32> {
    match e {
        Sexp::Atom(s, o) if s.bytes().all(|b| b.is_ascii_digit()) => s
            .parse()
            .map_err(|_| syntax(*o, "number out of range")),
        _ => Err(syntax(e.offset(), "expected a natural number")),
    }
}

fn head(items: &[Sexp], offset: usize) -> Result<&str> {
    match items.first() {
        Some(Sexp::Atom(s, _)) => Ok(s),
        Some(e) => Err(syntax(e.offset(), "expected an operator")),
        None => Err(syntax(offset, "empty list")),
    }
}

pub(crate) fn concept_from_sexp(store: &mut TermStore, e: &Sexp) -> Result<TermId> {
    match e {
        Sexp::Atom(s, o) => match s.as_str() {
            "top" => Ok(store.top()),
            "bot" => Ok(store.bot()),
            _ if is_name(s) && !KEYWORDS.contains(&s.as_str()) => Ok(store.atom(s)),
            _ => Err(syntax(*o, format!("unexpected token {s:?}"))),
        },
        Sexp::List(items, o) => {
            let op = head(items, *o)?;
            let args = &items[1..];
            let fixed = |n: usize| -> Result<()> {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(arity(*o, format!("'{op}' takes {n} arguments, got {}", args.len())))
                }
            };
            match op {
                "not" => {
                    fixed(1)?;
                    let c = concept_from_sexp(store, &args[0])?;
                    Ok(store.not(c))
                }
                "and" | "or" => {
                    if args.len() < 2 {
                        return Err(arity(*o, format!("'{op}' takes at least 2 arguments")));
                    }
                    let cs = args
                        .iter()
                        .map(|a| concept_from_sexp(store, a))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(if op == "and" { store.and(cs) } else { store.or(cs) })
                }
                "some" | "all" => {
                    fixed(2)?;
                    let r = expect_name(&args[0], "a role name")?;
                    let r = store.name(&r);
                    let c = concept_from_sexp(store, &args[1])?;
                    Ok(if op == "some" {
                        store.exists(r, c)
                    } else {
                        store.forall(r, c)
                    })
                }
                "atleast" | "atmost" => {
                    fixed(3)?;
                    let n = expect_nat(&args[0])?;
                    let r = expect_name(&args[1], "a role name")?;
                    let r = store.name(&r);
                    let c = concept_from_sexp(store, &args[2])?;
                    Ok(if op == "atleast" {
                        store.at_least(n, r, c)
                    } else {
                        store.at_most(n, r, c)
                    })
                }
                _ => Err(syntax(items[0].offset(), format!("unknown operator {op:?}"))),
            }
        }
    }
}

/// Parses a single concept in tree syntax.
pub fn parse_concept(store: &mut TermStore, text: &str) -> Result<TermId> {
    let es = read_all(text)?;
    match es.as_slice() {
        [e] => concept_from_sexp(store, e),
        [] => Err(syntax(0, "empty input")),
        [_, e, ..] => Err(syntax(e.offset(), "trailing input after concept")),
    }
}

/// Parses either syntax: DAG form if the text contains a `root` line,
/// tree form otherwise.
pub fn parse_concept_any(store: &mut TermStore, text: &str) -> Result<TermId> {
    if text.lines().any(|l| l.trim_start().starts_with("root ")) {
        parse_concept_dag(store, text)
    } else {
        parse_concept(store, text)
    }
}

/// Parses the line-oriented DAG format:
/// `nK := <shallow form>` lines followed by `root nK`.
pub fn parse_concept_dag(store: &mut TermStore, text: &str) -> Result<TermId> {
    let mut defs: HashMap<String, TermId> = HashMap::new();
    let mut root = None;
    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let off = line_start;
        line_start += line.len();
        let l = line.trim();
        if l.is_empty() || l.starts_with(';') {
            continue;
        }
        if let Some(rest) = l.strip_prefix("root ") {
            let r = rest.trim();
            root = Some(
                *defs
                    .get(r)
                    .ok_or_else(|| syntax(off, format!("undefined node {r}")))?,
            );
            continue;
        }
        let (lhs, rhs) = l
            .split_once(":=")
            .ok_or_else(|| syntax(off, "expected 'nK := ...' or 'root nK'"))?;
        let lhs = lhs.trim().to_string();
        let rhs_off = off + line.find(":=").unwrap_or(0) + 2;
        let es = read_all(rhs).map_err(|e| shift(e, rhs_off))?;
        let e = match es.as_slice() {
            [e] => e,
            _ => return Err(syntax(rhs_off, "expected one shallow form")),
        };
        let resolve = |e: &Sexp| -> Result<TermId> {
            match e {
                Sexp::Atom(s, o) => defs
                    .get(s)
                    .copied()
                    .ok_or_else(|| syntax(rhs_off + o, format!("undefined node {s}"))),
                _ => Err(syntax(rhs_off + e.offset(), "expected a node reference")),
            }
        };
        let t = match e {
            Sexp::Atom(s, o) => match s.as_str() {
                "top" => store.top(),
                "bot" => store.bot(),
                _ if is_name(s) && !KEYWORDS.contains(&s.as_str()) => store.atom(s),
                _ => return Err(syntax(rhs_off + o, "bad shallow form")),
            },
            Sexp::List(items, o) => {
                let op = head(items, *o).map_err(|e| shift(e, rhs_off))?;
                let args = &items[1..];
                match (op, args.len()) {
                    ("not", 1) => {
                        let c = resolve(&args[0])?;
                        store.not(c)
                    }
                    ("and", n) if n >= 2 => {
                        let cs = args.iter().map(resolve).collect::<Result<Vec<_>>>()?;
                        store.and(cs)
                    }
                    ("atleast", 3) => {
                        let n = expect_nat(&args[0]).map_err(|e| shift(e, rhs_off))?;
                        let r = expect_name(&args[1], "a role name")
                            .map_err(|e| shift(e, rhs_off))?;
                        let r = store.name(&r);
                        let c = resolve(&args[2])?;
                        store.at_least(n, r, c)
                    }
                    _ => return Err(arity(rhs_off + o, format!("bad shallow form '{op}'"))),
                }
            }
        };
        defs.insert(lhs, t);
    }
    root.ok_or_else(|| syntax(text.len(), "missing 'root' line"))
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { offset, msg } => Error::Syntax {
            offset: offset + by,
            msg,
        },
        Error::Arity { offset, msg } => Error::Arity {
            offset: offset + by,
            msg,
        },
        other => other,
    }
}

pub fn parse_ontology(store: &mut TermStore, text: &str, dialect: Dialect) -> Result<Ontology> {
    let mut cis = Vec::new();
    let mut ris = Vec::new();
    for e in read_all(text)? {
        let (items, o) = match &e {
            Sexp::List(items, o) => (items, *o),
            Sexp::Atom(_, o) => return Err(syntax(*o, "expected an axiom")),
        };
        match head(items, o)? {
            "implies" => {
                if items.len() != 3 {
                    return Err(arity(o, "'implies' takes 2 arguments"));
                }
                let l = concept_from_sexp(store, &items[1])?;
                let r = concept_from_sexp(store, &items[2])?;
                if dialect == Dialect::Alch && !(store.is_alc(l) && store.is_alc(r)) {
                    return Err(Error::CountingInAlch { offset: o });
                }
                cis.push((l, r));
            }
            "role-implies" => {
                if items.len() != 3 {
                    return Err(arity(o, "'role-implies' takes 2 arguments"));
                }
                if dialect == Dialect::Alcq {
                    return Err(Error::RoleInclusionInAlcq { offset: o });
                }
                let a = expect_name(&items[1], "a role name")?;
                let b = expect_name(&items[2], "a role name")?;
                ris.push((store.name(&a), store.name(&b)));
            }
            other => return Err(syntax(o, format!("unknown axiom {other:?}"))),
        }
    }
    Ok(Ontology::new(dialect, cis, ris))
}

pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut names = Vec::new();
    let mut off = 0;
    for tok in text.split_inclusive(char::is_whitespace) {
        let w = tok.trim();
        if !w.is_empty() {
            if !is_name(w) {
                return Err(syntax(off, format!("bad signature name {w:?}")));
            }
            names.push(w.to_string());
        }
        off += tok.len();
    }
    Ok(Signature::new(names))
}

pub fn parse_model(text: &str) -> Result<FiniteInterpretation> {
    let es = read_all(text)?;
    let (items, o) = match es.as_slice() {
        [Sexp::List(items, o)] => (items, *o),
        _ => return Err(syntax(0, "expected a single (model ...) form")),
    };
    if head(items, o)? != "model" {
        return Err(syntax(o, "expected 'model'"));
    }
    let elem = |e: &Sexp| -> Result<String> {
        match e {
            Sexp::Atom(s, _) if s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') => {
                Ok(s.clone())
            }
            _ => Err(syntax(e.offset(), "expected a domain element")),
        }
    };
    let mut domain: Vec<String> = Vec::new();
    let mut atoms = Vec::new();
    let mut edges = Vec::new();
    for part in &items[1..] {
        let (xs, po) = match part {
            Sexp::List(xs, po) => (xs, *po),
            Sexp::Atom(_, po) => return Err(syntax(*po, "expected a model clause")),
        };
        match head(xs, po)? {
            "domain" => {
                if xs.len() < 2 {
                    return Err(arity(po, "'domain' needs at least one element"));
                }
                for x in &xs[1..] {
                    domain.push(elem(x)?);
                }
            }
            "atom" => {
                if xs.len() != 3 {
                    return Err(arity(po, "'atom' takes 2 arguments"));
                }
                atoms.push((expect_name(&xs[1], "a concept name")?, elem(&xs[2])?, po));
            }
            "edge" => {
                if xs.len() != 4 {
                    return Err(arity(po, "'edge' takes 3 arguments"));
                }
                edges.push((
                    expect_name(&xs[1], "a role name")?,
                    elem(&xs[2])?,
                    elem(&xs[3])?,
                    po,
                ));
            }
            other => return Err(syntax(po, format!("unknown model clause {other:?}"))),
        }
    }
    if domain.is_empty() {
        return Err(syntax(o, "model needs a nonempty domain"));
    }
    let mut m = FiniteInterpretation::new(domain);
    for (a, d, po) in atoms {
        let i = m
            .element(&d)
            .ok_or_else(|| syntax(po, format!("unknown element {d}")))?;
        m.add_atom(&a, i);
    }
    for (r, d, e, po) in edges {
        let i = m
            .element(&d)
            .ok_or_else(|| syntax(po, format!("unknown element {d}")))?;
        let j = m
            .element(&e)
            .ok_or_else(|| syntax(po, format!("unknown element {e}")))?;
        m.add_edge(&r, i, j);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::super::term::Node;
    use super::*;

    #[test]
    fn literals_and_desugaring() {
        let mut s = TermStore::new();
        assert_eq!(parse_concept(&mut s, "top").unwrap(), s.top());
        let t = parse_concept(&mut s, "(some r (and B (not A1)))").unwrap();
        let r = s.name("r");
        let b = s.atom("B");
        let a1 = s.atom("A1");
        let na1 = s.not(a1);
        let conj = s.and([b, na1]);
        assert_eq!(t, s.at_least(1, r, conj));

        let two = parse_concept(&mut s, "(atleast 2 r top)").unwrap();
        assert!(matches!(s.node(two), Node::AtLeast(2, _, _)));
        assert!(!s.is_alc(two));

        let all = parse_concept(&mut s, "(all r A)").unwrap();
        let a = s.atom("A");
        let na = s.not(a);
        let ex = s.exists(r, na);
        assert_eq!(all, s.not(ex));

        let am = parse_concept(&mut s, "(atmost 1 r top)").unwrap();
        let top = s.top();
        let al2 = s.at_least(2, r, top);
        assert_eq!(am, s.not(al2));

        let or = parse_concept(&mut s, "(or A B)").unwrap();
        let nb = s.not(b);
        let c = s.and([na, nb]);
        assert_eq!(or, s.not(c));
        assert_eq!(parse_concept(&mut s, "bot").unwrap(), s.bot());
    }

    #[test]
    fn errors_carry_offsets() {
        let mut s = TermStore::new();
        match parse_concept(&mut s, "(some r A") {
            Err(Error::Syntax { offset: 0, .. }) => {}
            e => panic!("{e:?}"),
        }
        match parse_concept(&mut s, "(not A B)") {
            Err(Error::Arity { offset: 0, .. }) => {}
            e => panic!("{e:?}"),
        }
        match parse_concept(&mut s, "(and A (frob B))") {
            Err(Error::Syntax { offset: 8, .. }) => {}
            e => panic!("{e:?}"),
        }
        assert!(parse_concept(&mut s, "(and A)").is_err());
        assert!(parse_concept(&mut s, "A B").is_err());
        assert!(parse_concept(&mut s, "A$").is_err());
    }

    #[test]
    fn ontology_forms() {
        let mut s = TermStore::new();
        let o = parse_ontology(
            &mut s,
            "(role-implies r s1)(role-implies s1 s1p)",
            Dialect::Alch,
        )
        .unwrap();
        assert_eq!(o.ris().len(), 2);
        let empty = parse_ontology(&mut s, "", Dialect::Alch).unwrap();
        assert!(empty.cis().is_empty() && empty.ris().is_empty());
        let err = parse_ontology(
            &mut s,
            "(implies A B) (role-implies r s)",
            Dialect::Alcq,
        );
        assert!(matches!(err, Err(Error::RoleInclusionInAlcq { offset: 14 })));
        let err = parse_ontology(&mut s, "(implies A (atleast 2 r B))", Dialect::Alch);
        assert!(matches!(err, Err(Error::CountingInAlch { .. })));
    }

    #[test]
    fn signature_and_model() {
        let sig = parse_signature("s1p  A1\nB").unwrap();
        assert!(sig.contains("A1") && sig.contains("B") && !sig.contains("r"));
        assert!(parse_signature("A (").is_err());
        let m = parse_model("(model (domain d e) (atom A d) (edge r d e))").unwrap();
        assert_eq!(m.len(), 2);
        assert!(parse_model("(model (domain d) (atom A x))").is_err());
        assert!(parse_model("(model)").is_err());
    }

    #[test]
    fn dag_format() {
        let mut s = TermStore::new();
        let t = parse_concept_dag(
            &mut s,
            "n0 := A\nn1 := (not n0)\nn2 := (atleast 1 r n1)\nn3 := (and n0 n2)\nroot n3\n",
        )
        .unwrap();
        let u = parse_concept(&mut s, "(and A (some r (not A)))").unwrap();
        assert_eq!(t, u);
        assert!(parse_concept_dag(&mut s, "n0 := (not n9)\nroot n0").is_err());
    }
}
