//! Line-oriented text formats for recognizers, automata, monoids and
//! alphabets. Sections are introduced by keywords; lines whose first
//! non-blank character is `#` are comments; every referenced name must be
//! declared before use. Parse-then-save is identity up to whitespace for
//! files this crate emits.
//!
//! Recognizer files transcribe algebra tables one to one:
//!
//! ```text
//! alphabet calls=a returns=b internals=
//! elements 1 x 0
//! identity 1
//! mult
//! 1 x 0
//! x 0 0
//! 0 0 0
//! op id = 1 x 0
//! op ext_ab = x x 0
//! extmap a b -> ext_ab
//! accept 1 x
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::{ClosureReport, ExtAlgebra};
use crate::alphabet::PushdownAlphabet;
use crate::constructions::CLOSURE_CAP;
use crate::error::Error;
use crate::morphism::{Morphism, RecognizerSpec};
use crate::translate::FiniteMonoid;
use crate::vca::Vca;
use crate::vpa::Vpa;
use crate::Result;

/// Either machine kind, as read from an automaton file.
#[derive(Debug, Clone)]
pub enum Automaton {
    Vpa(Vpa),
    Vca(Vca),
}

impl Automaton {
    /// The VPA view: counter machines are encoded on demand.
    pub fn into_vpa(self) -> Vpa {
        match self {
            Automaton::Vpa(vpa) => vpa,
            Automaton::Vca(vca) => vca.to_vpa(),
        }
    }
}

struct Cursor<'a> {
    origin: String,
    lines: Vec<(usize, Vec<&'a str>)>,
    next: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, origin: &str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, line)| (i + 1, line))
            .filter(|(_, line)| {
                let trimmed = line.trim();
                !trimmed.is_empty() && !trimmed.starts_with('#')
            })
            .map(|(number, line)| (number, line.split_whitespace().collect()))
            .collect();
        Cursor {
            origin: origin.to_string(),
            lines,
            next: 0,
        }
    }

    fn take(&mut self) -> Option<(usize, Vec<&'a str>)> {
        let item = self.lines.get(self.next).cloned();
        if item.is_some() {
            self.next += 1;
        }
        item
    }

    fn fail<T>(&self, line: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            path: self.origin.clone(),
            line,
            message: message.into(),
        })
    }
}

fn parse_letter_list(cursor: &Cursor, line: usize, text: &str) -> Result<Vec<char>> {
    let mut letters = Vec::new();
    for piece in text.split(',') {
        if piece.is_empty() {
            continue;
        }
        let mut chars = piece.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return cursor.fail(line, format!("letter '{piece}' must be a single symbol"));
        };
        letters.push(c);
    }
    Ok(letters)
}

fn parse_alphabet_tokens(cursor: &Cursor, line: usize, tokens: &[&str]) -> Result<PushdownAlphabet> {
    if tokens.len() != 4 || tokens[0] != "alphabet" {
        return cursor.fail(line, "expected: alphabet calls=... returns=... internals=...");
    }
    let mut sets: BTreeMap<&str, Vec<char>> = BTreeMap::new();
    for token in &tokens[1..] {
        let Some((key, value)) = token.split_once('=') else {
            return cursor.fail(line, format!("expected key=value, got '{token}'"));
        };
        sets.insert(key, parse_letter_list(cursor, line, value)?);
    }
    let (Some(calls), Some(returns), Some(internals)) =
        (sets.get("calls"), sets.get("returns"), sets.get("internals"))
    else {
        return cursor.fail(line, "alphabet needs calls=, returns= and internals=");
    };
    PushdownAlphabet::new(calls, returns, internals)
        .map_err(|e| parse_error(cursor, line, e))
}

fn parse_error(cursor: &Cursor, line: usize, error: Error) -> Error {
    Error::Parse {
        path: cursor.origin.clone(),
        line,
        message: error.to_string(),
    }
}

fn lookup(
    cursor: &Cursor,
    line: usize,
    names: &[String],
    name: &str,
    what: &str,
) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .map_or_else(|| cursor.fail(line, format!("undeclared {what} '{name}'")), Ok)
}

fn single_letter(cursor: &Cursor, line: usize, token: &str) -> Result<char> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => cursor.fail(line, format!("'{token}' must be a single letter")),
    }
}

/// Parses a recognizer file; with `complete` the op set is closed under
/// translations and composition (the report says what was appended —
/// declared rows are never altered).
pub fn parse_recognizer(
    text: &str,
    origin: &str,
    complete: bool,
) -> Result<(RecognizerSpec, ClosureReport)> {
    let mut cursor = Cursor::new(text, origin);
    let mut alphabet: Option<PushdownAlphabet> = None;
    let mut elements: Vec<String> = Vec::new();
    let mut identity: Option<usize> = None;
    let mut mult: Vec<usize> = Vec::new();
    let mut op_names: Vec<String> = Vec::new();
    let mut op_tables: Vec<Vec<usize>> = Vec::new();
    let mut ext_names: Vec<((char, char), String, usize)> = Vec::new();
    let mut letter_images: Vec<(char, usize)> = Vec::new();
    let mut accepting: Option<Vec<usize>> = None;

    while let Some((line, tokens)) = cursor.take() {
        match tokens[0] {
            "alphabet" => {
                alphabet = Some(parse_alphabet_tokens(&cursor, line, &tokens)?);
            }
            "elements" => {
                if tokens.len() < 2 {
                    return cursor.fail(line, "elements line needs at least one name");
                }
                elements = tokens[1..].iter().map(|s| s.to_string()).collect();
                let mut seen = BTreeSet::new();
                for name in &elements {
                    if !seen.insert(name) {
                        return cursor.fail(line, format!("element '{name}' declared twice"));
                    }
                }
            }
            "identity" => {
                if tokens.len() != 2 {
                    return cursor.fail(line, "expected: identity NAME");
                }
                identity = Some(lookup(&cursor, line, &elements, tokens[1], "element")?);
            }
            "mult" => {
                if elements.is_empty() {
                    return cursor.fail(line, "mult before elements");
                }
                for _ in 0..elements.len() {
                    let Some((row_line, row)) = cursor.take() else {
                        return cursor.fail(line, "mult table is missing rows");
                    };
                    if row.len() != elements.len() {
                        return cursor.fail(
                            row_line,
                            format!("mult row has {} entries, expected {}", row.len(), elements.len()),
                        );
                    }
                    for name in row {
                        mult.push(lookup(&cursor, row_line, &elements, name, "element")?);
                    }
                }
            }
            "op" => {
                // op NAME = v1 ... vn
                if tokens.len() != 3 + elements.len() || tokens[2] != "=" {
                    return cursor.fail(line, "expected: op NAME = one value per element");
                }
                let name = tokens[1].to_string();
                if op_names.contains(&name) {
                    return cursor.fail(line, format!("op '{name}' declared twice"));
                }
                let mut table = Vec::with_capacity(elements.len());
                for value in &tokens[3..] {
                    table.push(lookup(&cursor, line, &elements, value, "element")?);
                }
                op_names.push(name);
                op_tables.push(table);
            }
            "extmap" => {
                // extmap a b -> NAME
                if tokens.len() != 5 || tokens[3] != "->" {
                    return cursor.fail(line, "expected: extmap CALL RETURN -> OPNAME");
                }
                let call = single_letter(&cursor, line, tokens[1])?;
                let ret = single_letter(&cursor, line, tokens[2])?;
                let op = lookup(&cursor, line, &op_names, tokens[4], "op")?;
                ext_names.push(((call, ret), tokens[4].to_string(), op));
            }
            "letter" => {
                // letter c -> ELEMENT
                if tokens.len() != 4 || tokens[2] != "->" {
                    return cursor.fail(line, "expected: letter INTERNAL -> ELEMENT");
                }
                let c = single_letter(&cursor, line, tokens[1])?;
                let e = lookup(&cursor, line, &elements, tokens[3], "element")?;
                letter_images.push((c, e));
            }
            "accept" => {
                let mut set = Vec::new();
                for name in &tokens[1..] {
                    set.push(lookup(&cursor, line, &elements, name, "element")?);
                }
                accepting = Some(set);
            }
            other => {
                return cursor.fail(line, format!("unknown keyword '{other}'"));
            }
        }
    }

    let no_line = cursor.lines.last().map(|(n, _)| *n).unwrap_or(0);
    let Some(alphabet) = alphabet else {
        return cursor.fail(no_line, "missing alphabet line");
    };
    if elements.is_empty() {
        return cursor.fail(no_line, "missing elements line");
    }
    let Some(identity) = identity else {
        return cursor.fail(no_line, "missing identity line");
    };
    if mult.is_empty() {
        return cursor.fail(no_line, "missing mult table");
    }
    if op_tables.is_empty() {
        return cursor.fail(no_line, "no op rows declared");
    }
    let identity_table: Vec<usize> = (0..elements.len()).collect();
    let identity_op = op_tables
        .iter()
        .position(|t| *t == identity_table)
        .unwrap_or(0);
    let algebra = ExtAlgebra::new(elements, identity, mult, op_tables, op_names, identity_op)?;
    let (algebra, report) = if complete {
        algebra.complete_closure(CLOSURE_CAP)?
    } else {
        (algebra, ClosureReport::default())
    };
    let algebra = algebra.validated()?;

    let mut internal_image = BTreeMap::new();
    for (c, e) in letter_images {
        internal_image.insert(c, e);
    }
    let mut ext_image = BTreeMap::new();
    for ((a, b), _, op) in ext_names {
        ext_image.insert((a, b), op);
    }
    let morphism = Morphism::new(alphabet, algebra, internal_image, ext_image)?;
    let accepting: BTreeSet<usize> = accepting.unwrap_or_default().into_iter().collect();
    Ok((RecognizerSpec::new(morphism, accepting)?, report))
}

/// Loads, optionally closure-completes, and validates a recognizer file.
pub fn load_recognizer(path: &Path, complete: bool) -> Result<(RecognizerSpec, ClosureReport)> {
    let text = std::fs::read_to_string(path)?;
    parse_recognizer(&text, &path.display().to_string(), complete)
}

/// Serializes a recognizer; the emitted file reloads (without completion)
/// to an isomorphic algebra.
pub fn save_recognizer(spec: &RecognizerSpec) -> String {
    let algebra = spec.algebra();
    let mut out = String::new();
    let _ = writeln!(out, "{}", spec.alphabet());
    let _ = writeln!(out, "elements {}", algebra.element_names().join(" "));
    let _ = writeln!(out, "identity {}", algebra.element_name(algebra.identity()));
    let _ = writeln!(out, "mult");
    for x in 0..algebra.size() {
        let row: Vec<&str> = (0..algebra.size())
            .map(|y| algebra.element_name(algebra.mul(x, y)))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    for op in 0..algebra.op_count() {
        let row: Vec<&str> = algebra
            .op_table(op)
            .iter()
            .map(|&e| algebra.element_name(e))
            .collect();
        let _ = writeln!(out, "op {} = {}", algebra.op_name(op), row.join(" "));
    }
    for (&(a, b), &op) in spec.morphism.ext_images() {
        let _ = writeln!(out, "extmap {a} {b} -> {}", algebra.op_name(op));
    }
    for (&c, &e) in spec.morphism.internal_images() {
        let _ = writeln!(out, "letter {c} -> {}", algebra.element_name(e));
    }
    let accept: Vec<&str> = spec
        .accepting
        .iter()
        .map(|&e| algebra.element_name(e))
        .collect();
    let _ = writeln!(out, "accept {}", accept.join(" "));
    out
}

/// Parses an automaton file; the first keyword line picks `vpa` or `vca`.
pub fn parse_automaton(text: &str, origin: &str) -> Result<Automaton> {
    let mut cursor = Cursor::new(text, origin);
    let Some((first_line, head)) = cursor.take() else {
        return Err(Error::Parse {
            path: origin.to_string(),
            line: 1,
            message: "empty automaton file".into(),
        });
    };
    match head[0] {
        "vpa" => parse_vpa_body(&mut cursor).map(Automaton::Vpa),
        "vca" => parse_vca_body(&mut cursor).map(Automaton::Vca),
        other => cursor.fail(first_line, format!("expected 'vpa' or 'vca', got '{other}'")),
    }
}

fn parse_vpa_body(cursor: &mut Cursor) -> Result<Vpa> {
    let mut alphabet: Option<PushdownAlphabet> = None;
    let mut states: Vec<String> = Vec::new();
    let mut initial: Option<usize> = None;
    let mut stack_symbols: Vec<String> = Vec::new();
    let mut finals: BTreeSet<usize> = BTreeSet::new();
    let mut call_delta = BTreeMap::new();
    let mut return_delta = BTreeMap::new();
    let mut internal_delta = BTreeMap::new();

    while let Some((line, tokens)) = cursor.take() {
        match tokens[0] {
            "alphabet" => alphabet = Some(parse_alphabet_tokens(cursor, line, &tokens)?),
            "states" => states = tokens[1..].iter().map(|s| s.to_string()).collect(),
            "initial" => {
                if tokens.len() != 2 {
                    return cursor.fail(line, "expected: initial STATE");
                }
                initial = Some(lookup(cursor, line, &states, tokens[1], "state")?);
            }
            "stack" => {
                if tokens.len() < 2 {
                    return cursor.fail(line, "stack line needs the bottom symbol first");
                }
                stack_symbols = tokens[1..].iter().map(|s| s.to_string()).collect();
            }
            "final" => {
                for name in &tokens[1..] {
                    finals.insert(lookup(cursor, line, &states, name, "state")?);
                }
            }
            "call" => {
                // call a FROM TOP -> TO push SYM
                if tokens.len() != 8 || tokens[4] != "->" || tokens[6] != "push" {
                    return cursor.fail(line, "expected: call LETTER FROM TOP -> TO push SYM");
                }
                let letter = single_letter(cursor, line, tokens[1])?;
                let from = lookup(cursor, line, &states, tokens[2], "state")?;
                let top = lookup(cursor, line, &stack_symbols, tokens[3], "stack symbol")?;
                let to = lookup(cursor, line, &states, tokens[5], "state")?;
                let pushed = lookup(cursor, line, &stack_symbols, tokens[7], "stack symbol")?;
                if call_delta.insert((letter, from, top), (to, pushed)).is_some() {
                    return cursor.fail(line, "duplicate call transition");
                }
            }
            "return" => {
                if tokens.len() != 6 || tokens[4] != "->" {
                    return cursor.fail(line, "expected: return LETTER FROM TOP -> TO");
                }
                let letter = single_letter(cursor, line, tokens[1])?;
                let from = lookup(cursor, line, &states, tokens[2], "state")?;
                let top = lookup(cursor, line, &stack_symbols, tokens[3], "stack symbol")?;
                let to = lookup(cursor, line, &states, tokens[5], "state")?;
                if top == 0 {
                    return cursor.fail(line, "return transitions may not pop the bottom symbol");
                }
                if return_delta.insert((letter, from, top), to).is_some() {
                    return cursor.fail(line, "duplicate return transition");
                }
            }
            "internal" => {
                if tokens.len() != 6 || tokens[4] != "->" {
                    return cursor.fail(line, "expected: internal LETTER FROM TOP -> TO");
                }
                let letter = single_letter(cursor, line, tokens[1])?;
                let from = lookup(cursor, line, &states, tokens[2], "state")?;
                let top = lookup(cursor, line, &stack_symbols, tokens[3], "stack symbol")?;
                let to = lookup(cursor, line, &states, tokens[5], "state")?;
                if internal_delta.insert((letter, from, top), to).is_some() {
                    return cursor.fail(line, "duplicate internal transition");
                }
            }
            other => return cursor.fail(line, format!("unknown keyword '{other}'")),
        }
    }
    let last = cursor.lines.last().map(|(n, _)| *n).unwrap_or(0);
    let Some(alphabet) = alphabet else {
        return cursor.fail(last, "missing alphabet line");
    };
    let Some(initial) = initial else {
        return cursor.fail(last, "missing initial line");
    };
    if stack_symbols.is_empty() {
        return cursor.fail(last, "missing stack line");
    }
    let vpa = Vpa {
        alphabet,
        states,
        initial,
        stack_symbols,
        bottom: 0,
        call_delta,
        return_delta,
        internal_delta,
        finals,
    };
    vpa.validate()?;
    Ok(vpa)
}

fn parse_vca_body(cursor: &mut Cursor) -> Result<Vca> {
    let mut alphabet: Option<PushdownAlphabet> = None;
    let mut states: Vec<String> = Vec::new();
    let mut initial: Option<usize> = None;
    let mut finals: BTreeSet<usize> = BTreeSet::new();
    let mut threshold: Option<usize> = None;
    let mut deltas: Vec<BTreeMap<(char, usize), usize>> = Vec::new();

    while let Some((line, tokens)) = cursor.take() {
        match tokens[0] {
            "alphabet" => alphabet = Some(parse_alphabet_tokens(cursor, line, &tokens)?),
            "states" => states = tokens[1..].iter().map(|s| s.to_string()).collect(),
            "initial" => {
                if tokens.len() != 2 {
                    return cursor.fail(line, "expected: initial STATE");
                }
                initial = Some(lookup(cursor, line, &states, tokens[1], "state")?);
            }
            "final" => {
                for name in &tokens[1..] {
                    finals.insert(lookup(cursor, line, &states, name, "state")?);
                }
            }
            "threshold" => {
                if tokens.len() != 2 {
                    return cursor.fail(line, "expected: threshold M");
                }
                let m: usize = tokens[1]
                    .parse()
                    .map_err(|_| parse_error(cursor, line, Error::MalformedAutomaton("bad threshold".into())))?;
                threshold = Some(m);
                deltas = vec![BTreeMap::new(); m + 1];
            }
            "delta" => {
                // delta LEVEL LETTER FROM -> TO
                if tokens.len() != 6 || tokens[4] != "->" {
                    return cursor.fail(line, "expected: delta LEVEL LETTER FROM -> TO");
                }
                let Some(m) = threshold else {
                    return cursor.fail(line, "delta before threshold");
                };
                let level: usize = tokens[1]
                    .parse()
                    .map_err(|_| parse_error(cursor, line, Error::MalformedAutomaton("bad level".into())))?;
                if level > m {
                    return cursor.fail(line, format!("level {level} exceeds threshold {m}"));
                }
                let letter = single_letter(cursor, line, tokens[2])?;
                let from = lookup(cursor, line, &states, tokens[3], "state")?;
                let to = lookup(cursor, line, &states, tokens[5], "state")?;
                if deltas[level].insert((letter, from), to).is_some() {
                    return cursor.fail(line, "duplicate delta entry");
                }
            }
            other => return cursor.fail(line, format!("unknown keyword '{other}'")),
        }
    }
    let last = cursor.lines.last().map(|(n, _)| *n).unwrap_or(0);
    let Some(alphabet) = alphabet else {
        return cursor.fail(last, "missing alphabet line");
    };
    let Some(initial) = initial else {
        return cursor.fail(last, "missing initial line");
    };
    if deltas.is_empty() {
        return cursor.fail(last, "missing threshold line");
    }
    let vca = Vca {
        alphabet,
        states,
        initial,
        finals,
        deltas,
    };
    vca.validate()?;
    Ok(vca)
}

pub fn load_automaton(path: &Path) -> Result<Automaton> {
    let text = std::fs::read_to_string(path)?;
    parse_automaton(&text, &path.display().to_string())
}

/// Serializes a VPA in the canonical section order.
pub fn save_vpa(vpa: &Vpa) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vpa");
    let _ = writeln!(out, "{}", vpa.alphabet);
    let _ = writeln!(out, "states {}", vpa.states.join(" "));
    let _ = writeln!(out, "initial {}", vpa.states[vpa.initial]);
    let _ = writeln!(out, "stack {}", vpa.stack_symbols.join(" "));
    let finals: Vec<&str> = vpa.finals.iter().map(|&f| vpa.states[f].as_str()).collect();
    let _ = writeln!(out, "final {}", finals.join(" "));
    for (&(a, from, top), &(to, pushed)) in &vpa.call_delta {
        let _ = writeln!(
            out,
            "call {a} {} {} -> {} push {}",
            vpa.states[from], vpa.stack_symbols[top], vpa.states[to], vpa.stack_symbols[pushed]
        );
    }
    for (&(b, from, top), &to) in &vpa.return_delta {
        let _ = writeln!(
            out,
            "return {b} {} {} -> {}",
            vpa.states[from], vpa.stack_symbols[top], vpa.states[to]
        );
    }
    for (&(c, from, top), &to) in &vpa.internal_delta {
        let _ = writeln!(
            out,
            "internal {c} {} {} -> {}",
            vpa.states[from], vpa.stack_symbols[top], vpa.states[to]
        );
    }
    out
}

/// Parses a monoid file (keyword `monoid`, then elements/identity/mult,
/// letter images, and an optional accept line).
pub fn parse_monoid(text: &str, origin: &str) -> Result<(FiniteMonoid, BTreeSet<usize>)> {
    let mut cursor = Cursor::new(text, origin);
    let Some((first_line, head)) = cursor.take() else {
        return Err(Error::Parse {
            path: origin.to_string(),
            line: 1,
            message: "empty monoid file".into(),
        });
    };
    if head[0] != "monoid" {
        return cursor.fail(first_line, "expected 'monoid'");
    }
    let mut elements: Vec<String> = Vec::new();
    let mut identity: Option<usize> = None;
    let mut mult: Vec<usize> = Vec::new();
    let mut letter_image: BTreeMap<char, usize> = BTreeMap::new();
    let mut accepting: BTreeSet<usize> = BTreeSet::new();
    while let Some((line, tokens)) = cursor.take() {
        match tokens[0] {
            "elements" => elements = tokens[1..].iter().map(|s| s.to_string()).collect(),
            "identity" => {
                if tokens.len() != 2 {
                    return cursor.fail(line, "expected: identity NAME");
                }
                identity = Some(lookup(&cursor, line, &elements, tokens[1], "element")?);
            }
            "mult" => {
                for _ in 0..elements.len() {
                    let Some((row_line, row)) = cursor.take() else {
                        return cursor.fail(line, "mult table is missing rows");
                    };
                    if row.len() != elements.len() {
                        return cursor.fail(row_line, "mult row has the wrong width");
                    }
                    for name in row {
                        mult.push(lookup(&cursor, row_line, &elements, name, "element")?);
                    }
                }
            }
            "letter" => {
                if tokens.len() != 4 || tokens[2] != "->" {
                    return cursor.fail(line, "expected: letter LETTER -> ELEMENT");
                }
                let c = single_letter(&cursor, line, tokens[1])?;
                let e = lookup(&cursor, line, &elements, tokens[3], "element")?;
                letter_image.insert(c, e);
            }
            "accept" => {
                for name in &tokens[1..] {
                    accepting.insert(lookup(&cursor, line, &elements, name, "element")?);
                }
            }
            other => return cursor.fail(line, format!("unknown keyword '{other}'")),
        }
    }
    let last = cursor.lines.last().map(|(n, _)| *n).unwrap_or(0);
    let Some(identity) = identity else {
        return cursor.fail(last, "missing identity line");
    };
    Ok((
        FiniteMonoid {
            element_names: elements,
            identity,
            mult,
            letter_image,
        },
        accepting,
    ))
}

pub fn load_monoid(path: &Path) -> Result<(FiniteMonoid, BTreeSet<usize>)> {
    let text = std::fs::read_to_string(path)?;
    parse_monoid(&text, &path.display().to_string())
}

pub fn save_monoid(monoid: &FiniteMonoid, accepting: &BTreeSet<usize>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "monoid");
    let _ = writeln!(out, "elements {}", monoid.element_names.join(" "));
    let _ = writeln!(out, "identity {}", monoid.element_names[monoid.identity]);
    let _ = writeln!(out, "mult");
    for x in 0..monoid.size() {
        let row: Vec<&str> = (0..monoid.size())
            .map(|y| monoid.element_names[monoid.mul(x, y)].as_str())
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    for (&c, &e) in &monoid.letter_image {
        let _ = writeln!(out, "letter {c} -> {}", monoid.element_names[e]);
    }
    let accept: Vec<&str> = accepting
        .iter()
        .map(|&e| monoid.element_names[e].as_str())
        .collect();
    let _ = writeln!(out, "accept {}", accept.join(" "));
    out
}

/// Parses a file holding a single alphabet line.
pub fn parse_alphabet(text: &str, origin: &str) -> Result<PushdownAlphabet> {
    let mut cursor = Cursor::new(text, origin);
    let Some((line, tokens)) = cursor.take() else {
        return Err(Error::Parse {
            path: origin.to_string(),
            line: 1,
            message: "empty alphabet file".into(),
        });
    };
    parse_alphabet_tokens(&cursor, line, &tokens)
}

pub fn load_alphabet(path: &Path) -> Result<PushdownAlphabet> {
    let text = std::fs::read_to_string(path)?;
    parse_alphabet(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::are_isomorphic;

    const ANBN: &str = "\
alphabet calls=a returns=b internals=
elements 1 x 0
identity 1
mult
1 x 0
x 0 0
0 0 0
op id = 1 x 0
op ext_ab = x x 0
op ext_x1 = x 0 0
op ext_xx = 0 0 0
extmap a b -> ext_ab
accept 1 x
";

    #[test]
    fn recognizer_round_trip() {
        let (spec, report) = parse_recognizer(ANBN, "anbn", true).unwrap();
        assert!(report.added.is_empty());
        assert_eq!(spec.algebra().size(), 3);
        let saved = save_recognizer(&spec);
        let (reloaded, _) = parse_recognizer(&saved, "saved", false).unwrap();
        assert!(
            are_isomorphic(spec.algebra(), reloaded.algebra(), 64)
                .unwrap()
                .is_some()
        );
        assert_eq!(spec.accepting, reloaded.accepting);
    }

    #[test]
    fn undeclared_names_are_parse_errors_with_line_numbers() {
        let broken = ANBN.replace("op ext_x1 = x 0 0", "op ext_x1 = x 0 y");
        let err = parse_recognizer(&broken, "anbn", true).unwrap_err();
        let Error::Parse { line, message, .. } = err else {
            panic!("expected parse error, got {err}");
        };
        assert_eq!(line, 10);
        assert!(message.contains("undeclared element 'y'"));
    }

    #[test]
    fn incomplete_files_need_the_completion_flag() {
        // Dropping the translations leaves a raw file that fails
        // validation but completes cleanly.
        let partial = ANBN
            .replace("op ext_x1 = x 0 0\n", "")
            .replace("op ext_xx = 0 0 0\n", "");
        assert!(matches!(
            parse_recognizer(&partial, "anbn", false),
            Err(Error::Validation(_))
        ));
        let (spec, report) = parse_recognizer(&partial, "anbn", true).unwrap();
        assert_eq!(spec.algebra().op_count(), 4);
        assert_eq!(report.added.len(), 2);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let commented = format!("# a recognizer\n\n{ANBN}\n# trailing\n");
        parse_recognizer(&commented, "anbn", true).unwrap();
    }

    #[test]
    fn vpa_file_round_trip() {
        let vpa = crate::vpa::tests::anbn_vpa();
        let saved = save_vpa(&vpa);
        let Automaton::Vpa(reloaded) = parse_automaton(&saved, "anbn.vpa").unwrap() else {
            panic!("expected a vpa");
        };
        assert_eq!(vpa, reloaded);
    }

    #[test]
    fn monoid_file_round_trip() {
        let (monoid, accepting) = crate::translate::tests::astar_bstar_monoid();
        let saved = save_monoid(&monoid, &accepting);
        let (reloaded, reloaded_accepting) = parse_monoid(&saved, "m").unwrap();
        assert_eq!(monoid, reloaded);
        assert_eq!(accepting, reloaded_accepting);
    }

    #[test]
    fn alphabet_file_parses() {
        let alpha = parse_alphabet("alphabet calls=a returns=b internals=\n", "ab").unwrap();
        assert_eq!(alpha.calls(), &['a']);
        assert!(parse_alphabet("alphabet calls=a", "broken").is_err());
    }
}
