//! Text (`.atm`) and DOT serialization.

use std::fmt::Write as _;

use super::{Alphabet, SyncAutomaton, TapeVector, PAD};
use crate::error::{Error, Result};

/// Serializes to the `.atm` text format. Relaxed automata carry an extra
/// `padding relaxed` line after `accepting`.
pub fn to_atm(a: &SyncAutomaton) -> String {
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut s = String::new();
    writeln!(s, "tapes {}", a.tapes()).unwrap();
    writeln!(s, "alphabet {}", a.alphabet().symbols().join(" ")).unwrap();
    writeln!(s, "states {}", a.num_states()).unwrap();
    writeln!(s, "initial {}", join(&mut a.initial_states().iter().copied())).unwrap();
    writeln!(s, "accepting {}", join(&mut a.accepting_states())).unwrap();
    if a.is_relaxed() {
        writeln!(s, "padding relaxed").unwrap();
    }
    for q in 0..a.num_states() {
        for (l, d) in a.transitions(q) {
            writeln!(s, "{q} {} {d}", l.render(a.alphabet())).unwrap();
        }
    }
    s
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<(usize, Vec<&'a str>)> {
    let (no, line) = lines.next().ok_or_else(|| Error::Parse {
        line: 0,
        message: format!("missing `{key}` line"),
    })?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(key) {
        return Err(Error::Parse {
            line: no,
            message: format!("expected `{key}`"),
        });
    }
    Ok((no, parts.collect()))
}

fn numbers(no: usize, parts: &[&str]) -> Result<Vec<usize>> {
    parts
        .iter()
        .map(|p| {
            p.parse().map_err(|_| Error::Parse {
                line: no,
                message: format!("bad number {p:?}"),
            })
        })
        .collect()
}

/// Parses the `.atm` text format.
pub fn from_atm(text: &str) -> Result<SyncAutomaton> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();
    let (no, t) = header(&mut lines, "tapes")?;
    let tapes = match numbers(no, &t)?.as_slice() {
        [k] => *k,
        _ => return Err(Error::Parse { line: no, message: "expected one tape count".into() }),
    };
    let (no, syms) = header(&mut lines, "alphabet")?;
    let alphabet = Alphabet::new(syms.iter().copied()).map_err(|e| Error::Parse {
        line: no,
        message: e.to_string(),
    })?;
    let (no, s) = header(&mut lines, "states")?;
    let states = match numbers(no, &s)?.as_slice() {
        [n] => *n,
        _ => return Err(Error::Parse { line: no, message: "expected one state count".into() }),
    };
    let (no, i) = header(&mut lines, "initial")?;
    let initial = numbers(no, &i)?;
    let (no, acc) = header(&mut lines, "accepting")?;
    let accepting = numbers(no, &acc)?;
    let mut relaxed = false;
    if let Some((_, l)) = lines.peek() {
        if l.starts_with("padding") {
            let (no, v) = header(&mut lines, "padding")?;
            relaxed = match v.as_slice() {
                ["relaxed"] => true,
                ["strict"] => false,
                _ => return Err(Error::Parse { line: no, message: "expected `padding relaxed`".into() }),
            };
        }
    }
    let mut transitions = Vec::new();
    for (no, line) in lines {
        let err = |m: &str| Error::Parse { line: no, message: m.into() };
        let open = line.find('(').ok_or_else(|| err("missing `(`"))?;
        let close = line.rfind(')').ok_or_else(|| err("missing `)`"))?;
        if close < open {
            return Err(err("misplaced parentheses"));
        }
        let src: usize = line[..open].trim().parse().map_err(|_| err("bad source state"))?;
        let dst: usize = line[close + 1..].trim().parse().map_err(|_| err("bad target state"))?;
        let entries = line[open + 1..close]
            .split(',')
            .map(|tok| match tok.trim() {
                "_" => Ok(PAD),
                name => alphabet
                    .index_of(name)
                    .ok_or_else(|| err(&format!("unknown symbol {name:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        transitions.push((src, TapeVector::new(entries), dst));
    }
    let build = if relaxed {
        SyncAutomaton::new_relaxed
    } else {
        SyncAutomaton::new
    };
    build(tapes, alphabet, states, initial, accepting, transitions)
}

/// Graphviz rendering; transitions between the same pair of states are
/// merged into one edge.
pub fn to_dot(a: &SyncAutomaton) -> String {
    let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in a.accepting_states() {
        writeln!(s, "  {q} [shape=doublecircle];").unwrap();
    }
    for (i, q) in a.initial_states().iter().enumerate() {
        writeln!(s, "  init{i} [shape=point];\n  init{i} -> {q};").unwrap();
    }
    for q in 0..a.num_states() {
        let ts = a.transitions(q);
        let mut i = 0;
        while i < ts.len() {
            let d = ts[i].1;
            let labels: Vec<String> = ts
                .iter()
                .filter(|(_, t)| *t == d)
                .map(|(l, _)| l.render(a.alphabet()))
                .collect();
            if ts[..i].iter().all(|(_, t)| *t != d) {
                writeln!(s, "  {q} -> {d} [label=\"{}\"];", labels.join(" ")).unwrap();
            }
            i += 1;
        }
    }
    s.push_str("}\n");
    s
}
