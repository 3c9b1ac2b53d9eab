//! Line-oriented text formats for nets, queries, configurations and traces.
//!
//! Net files:
//!
//! ```text
//! ionet                      rbn
//! states a b                 states p q
//! trans a @ b -> b           alphabet m
//!                            trans p !m -> q
//!                            trans q ?m -> p
//! ```
//!
//! `#` starts a comment in net files. Tokens may be separated by any amount of
//! whitespace, including none (`trans a@b->b`).
//!
//! Queries: `init: a b ; target: #b>=1 & #a=0`. Sections are separated by `;`
//! or newlines. Either section may use cube items `q:[l,u]` (`*` for no upper
//! bound) instead. In query files a `#` followed by whitespace starts a
//! comment; `#q` is an atom.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use iorbn_core::symbolic::{CrpQuery, SymbolicError, UnboundedInitialCube};
use iorbn_core::translate::TranslationCertificate;
use iorbn_core::{
    Bound, Configuration, Cube, Interval, IoNet, IoTransition, MessageId, ModelError, Net, Rbn,
    RbnStep, RbnTransition, StateId, Step, Trace,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),

    #[error("undeclared state {0}")]
    UndeclaredState(String),

    #[error("undeclared message {0}")]
    UndeclaredMessage(String),

    #[error("duplicate transition {0}")]
    DuplicateTransition(String),

    #[error("{0} declared twice")]
    DuplicateDeclaration(String),

    #[error("state {0} is required both >=1 and =0")]
    ContradictoryAtom(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        Self { line, column, kind }
    }

    fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Self::new(line, column, ParseErrorKind::Syntax(msg.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(s) => write!(f, "'{s}'"),
        }
    }
}

const SYMBOLS: [&str; 16] = [
    "->", ">=", "@", "!", "?", "[", "]", ",", ":", "{", "}", "&", ";", "=", "#", "*",
];

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokens of one line with their 1-based columns.
fn lex(line_no: usize, text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (byte, c) = chars[i];
        let column = text[..byte].chars().count() + 1;
        if c.is_whitespace() {
            i += 1;
        } else if is_ident_char(c) {
            let start = byte;
            while i < chars.len() && is_ident_char(chars[i].1) {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |(b, _)| *b);
            out.push((Tok::Ident(text[start..end].to_string()), column));
        } else if let Some(sym) = SYMBOLS.iter().find(|s| text[byte..].starts_with(**s)) {
            out.push((Tok::Sym(sym), column));
            i += sym.chars().count();
        } else {
            return Err(ParseError::syntax(
                line_no,
                column,
                format!("unexpected character {c:?}"),
            ));
        }
    }
    Ok(out)
}

/// Cursor over the tokens of one line.
struct Line {
    no: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_column: usize,
}

impl Line {
    fn new(no: usize, text: &str) -> Result<Self, ParseError> {
        Ok(Self {
            no,
            toks: lex(no, text)?,
            pos: 0,
            end_column: text.chars().count() + 1,
        })
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::syntax(self.no, self.column(), msg)
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some((Tok::Ident(s), c)) => {
                let out = (s.clone(), *c);
                self.pos += 1;
                Ok(out)
            }
            Some((t, _)) => Err(self.error(format!("expected {what}, found {t}"))),
            None => Err(self.error(format!("expected {what}, found end of line"))),
        }
    }

    fn sym(&mut self, sym: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == sym => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected '{sym}', found {t}"))),
            None => Err(self.error(format!("expected '{sym}', found end of line"))),
        }
    }

    fn eat(&mut self, sym: &'static str) -> bool {
        if self.peek() == Some(&Tok::Sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("unexpected {t}"))),
        }
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        let column = self.column();
        let (text, _) = self.ident("a number")?;
        text.parse().map_err(|_| {
            ParseError::syntax(
                self.no,
                column,
                format!("expected a number, found '{text}'"),
            )
        })
    }
}

fn state_at(name: &str, line: usize, column: usize) -> Result<StateId, ParseError> {
    StateId::new(name).map_err(|e| ParseError::syntax(line, column, e.to_string()))
}

fn message_at(name: &str, line: usize, column: usize) -> Result<MessageId, ParseError> {
    MessageId::new(name).map_err(|e| ParseError::syntax(line, column, e.to_string()))
}

fn strip_net_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before)
}

/// A name with the position it was read at.
type Located = (String, usize, usize);

enum RawTransition {
    Io {
        source: Located,
        observed: Located,
        target: Located,
    },
    Rbn {
        source: Located,
        broadcast: bool,
        message: Located,
        target: Located,
    },
}

/// Parses an `ionet` or `rbn` file.
pub fn parse_net(text: &str) -> Result<Net, ParseError> {
    let mut header: Option<bool> = None; // Some(true) = ionet
    let mut states: Vec<StateId> = Vec::new();
    let mut messages: Vec<MessageId> = Vec::new();
    let mut raw: Vec<(usize, RawTransition)> = Vec::new();
    let mut last_line = 0;

    for (idx, full) in text.lines().enumerate() {
        let no = idx + 1;
        last_line = no;
        let mut line = Line::new(no, strip_net_comment(full))?;
        if line.at_end() {
            continue;
        }
        let (keyword, _) = line.ident("a keyword")?;
        match (keyword.as_str(), header) {
            ("ionet" | "rbn", None) => {
                line.expect_end()?;
                header = Some(keyword == "ionet");
            }
            (_, None) => {
                return Err(ParseError::syntax(
                    no,
                    1,
                    "expected header 'ionet' or 'rbn'",
                ));
            }
            ("ionet" | "rbn", Some(_)) => {
                return Err(ParseError::syntax(no, 1, "header given twice"));
            }
            ("states", _) => {
                while !line.at_end() {
                    let (name, col) = line.ident("a state name")?;
                    let q = state_at(&name, no, col)?;
                    if states.contains(&q) {
                        return Err(ParseError::new(
                            no,
                            col,
                            ParseErrorKind::DuplicateDeclaration(name),
                        ));
                    }
                    states.push(q);
                }
            }
            ("alphabet", Some(false)) => {
                while !line.at_end() {
                    let (name, col) = line.ident("a message name")?;
                    let m = message_at(&name, no, col)?;
                    if messages.contains(&m) {
                        return Err(ParseError::new(
                            no,
                            col,
                            ParseErrorKind::DuplicateDeclaration(name),
                        ));
                    }
                    messages.push(m);
                }
            }
            ("alphabet", Some(true)) => {
                return Err(ParseError::syntax(no, 1, "ionet files have no alphabet"));
            }
            ("trans", Some(is_io)) => {
                let located = |line: &mut Line, what: &str| -> Result<Located, ParseError> {
                    let (name, col) = line.ident(what)?;
                    Ok((name, no, col))
                };
                let source = located(&mut line, "a source state")?;
                let t = if is_io {
                    line.sym("@")?;
                    let observed = located(&mut line, "an observed state")?;
                    line.sym("->")?;
                    let target = located(&mut line, "a target state")?;
                    RawTransition::Io {
                        source,
                        observed,
                        target,
                    }
                } else {
                    let broadcast = if line.eat("!") {
                        true
                    } else if line.eat("?") {
                        false
                    } else {
                        return Err(line.error("expected '!' or '?'"));
                    };
                    let message = located(&mut line, "a message")?;
                    line.sym("->")?;
                    let target = located(&mut line, "a target state")?;
                    RawTransition::Rbn {
                        source,
                        broadcast,
                        message,
                        target,
                    }
                };
                line.expect_end()?;
                raw.push((no, t));
            }
            (other, _) => {
                return Err(ParseError::syntax(
                    no,
                    1,
                    format!("unknown keyword '{other}'"),
                ));
            }
        }
    }

    let Some(is_io) = header else {
        return Err(ParseError::syntax(
            last_line.max(1),
            1,
            "missing header 'ionet' or 'rbn'",
        ));
    };

    let resolve_state = |(name, line, col): &Located| -> Result<StateId, ParseError> {
        let q = state_at(name, *line, *col)?;
        if states.contains(&q) {
            Ok(q)
        } else {
            Err(ParseError::new(
                *line,
                *col,
                ParseErrorKind::UndeclaredState(name.clone()),
            ))
        }
    };
    let resolve_message = |(name, line, col): &Located| -> Result<MessageId, ParseError> {
        let m = message_at(name, *line, *col)?;
        if messages.contains(&m) {
            Ok(m)
        } else {
            Err(ParseError::new(
                *line,
                *col,
                ParseErrorKind::UndeclaredMessage(name.clone()),
            ))
        }
    };
    let duplicate = |no: usize, shown: String| {
        ParseError::new(no, 1, ParseErrorKind::DuplicateTransition(shown))
    };
    let model = |e: ModelError| ParseError::syntax(last_line.max(1), 1, e.to_string());

    if is_io {
        let mut seen = BTreeSet::new();
        let mut transitions = Vec::new();
        for (no, t) in &raw {
            let RawTransition::Io {
                source,
                observed,
                target,
            } = t
            else {
                unreachable!()
            };
            let t = IoTransition::new(
                resolve_state(source)?,
                resolve_state(observed)?,
                resolve_state(target)?,
            );
            if !seen.insert(t.clone()) {
                return Err(duplicate(*no, t.to_string()));
            }
            transitions.push(t);
        }
        Ok(Net::Io(IoNet::new(states, transitions).map_err(model)?))
    } else {
        let mut seen = BTreeSet::new();
        let mut transitions = Vec::new();
        for (no, t) in &raw {
            let RawTransition::Rbn {
                source,
                broadcast,
                message,
                target,
            } = t
            else {
                unreachable!()
            };
            let (source, message, target) = (
                resolve_state(source)?,
                resolve_message(message)?,
                resolve_state(target)?,
            );
            let t = if *broadcast {
                RbnTransition::broadcast(source, message, target)
            } else {
                RbnTransition::receive(source, message, target)
            };
            if !seen.insert(t.clone()) {
                return Err(duplicate(*no, t.to_string()));
            }
            transitions.push(t);
        }
        Ok(Net::Rbn(
            Rbn::new(states, messages, transitions).map_err(model)?,
        ))
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Canonical text of a net; `parse_net` inverts it exactly.
pub fn write_net(net: &Net) -> String {
    let mut out = String::new();
    match net {
        Net::Io(n) => {
            out.push_str("ionet\n");
            writeln!(out, "states {}", join(n.states())).unwrap();
            for t in n.transitions() {
                writeln!(out, "trans {t}").unwrap();
            }
        }
        Net::Rbn(n) => {
            out.push_str("rbn\n");
            writeln!(out, "states {}", join(n.states())).unwrap();
            writeln!(out, "alphabet {}", join(n.alphabet())).unwrap();
            for t in n.transitions() {
                writeln!(out, "trans {t}").unwrap();
            }
        }
    }
    // `states` with no names would leave trailing whitespace.
    out.lines()
        .map(str::trim_end)
        .fold(String::new(), |mut acc, l| {
            acc.push_str(l);
            acc.push('\n');
            acc
        })
}

/// Comment block describing a translation certificate; safe to append to a
/// net file.
pub fn write_certificate(cert: &TranslationCertificate) -> String {
    let mut out = String::new();
    out.push_str("# certificate\n");
    writeln!(out, "# source {}", cert.source_kind).unwrap();
    writeln!(out, "# target {}", cert.target_kind).unwrap();
    for (from, to) in cert.state_map() {
        writeln!(out, "# map {from} -> {to}").unwrap();
    }
    writeln!(out, "# padding {}", cert.padding()).unwrap();
    out
}

/// Initial part of a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitSpec {
    Support(UnboundedInitialCube),
    Cube(Cube),
}

/// Target part of a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSpec {
    Crp(CrpQuery),
    Cube(Cube),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySpec {
    pub init: InitSpec,
    pub target: TargetSpec,
}

impl QuerySpec {
    pub fn init_cube(&self) -> Cube {
        match &self.init {
            InitSpec::Support(s) => s.to_cube(),
            InitSpec::Cube(c) => c.clone(),
        }
    }

    pub fn target_cube(&self) -> Cube {
        match &self.target {
            TargetSpec::Crp(q) => q.target_cube(),
            TargetSpec::Cube(c) => c.clone(),
        }
    }

    /// All state names the query mentions.
    pub fn states(&self) -> BTreeSet<StateId> {
        let mut out: BTreeSet<StateId> = match &self.init {
            InitSpec::Support(s) => s.support().clone(),
            InitSpec::Cube(c) => c.bounds().map(|(q, _)| q.clone()).collect(),
        };
        match &self.target {
            TargetSpec::Crp(q) => {
                out.extend(q.must_be_present().iter().cloned());
                out.extend(q.must_be_absent().iter().cloned());
            }
            TargetSpec::Cube(c) => out.extend(c.bounds().map(|(q, _)| q.clone())),
        }
        out
    }
}

/// Canonical text of a query; `parse_query` inverts it for nonempty cubes.
pub fn write_query(query: &QuerySpec) -> String {
    let init = match &query.init {
        InitSpec::Support(s) => s
            .support()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        InitSpec::Cube(c) => c.to_string(),
    };
    let target = match &query.target {
        TargetSpec::Crp(q) => q.to_string(),
        TargetSpec::Cube(c) => c.to_string(),
    };
    format!("init: {init} ; target: {target}")
        .replace("  ", " ")
        .trim_end()
        .to_string()
}

fn strip_query_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && bytes.get(i + 1).is_none_or(|c| c.is_ascii_whitespace()) {
            return &line[..i];
        }
    }
    line
}

enum Item {
    Name(StateId),
    Bounded(StateId, Interval),
    AtLeastOne(StateId, usize),
    Zero(StateId, usize),
}

/// `q`, `q:[l,u]`, `#q>=1` or `#q=0`.
fn parse_item(line: &mut Line) -> Result<Item, ParseError> {
    if line.eat("#") {
        let (name, col) = line.ident("a state name")?;
        let q = state_at(&name, line.no, col)?;
        if line.eat(">=") {
            let c = line.column();
            match line.number()? {
                1 => Ok(Item::AtLeastOne(q, col)),
                _ => Err(ParseError::syntax(
                    line.no,
                    c,
                    "only '>=1' atoms are supported",
                )),
            }
        } else if line.eat("=") {
            let c = line.column();
            match line.number()? {
                0 => Ok(Item::Zero(q, col)),
                _ => Err(ParseError::syntax(
                    line.no,
                    c,
                    "only '=0' atoms are supported",
                )),
            }
        } else {
            Err(line.error("expected '>=1' or '=0'"))
        }
    } else {
        let (name, col) = line.ident("a state name")?;
        let q = state_at(&name, line.no, col)?;
        if !line.eat(":") {
            return Ok(Item::Name(q));
        }
        line.sym("[")?;
        let lower = line.number()?;
        line.sym(",")?;
        let upper = if line.eat("*") {
            Bound::Infinite
        } else {
            Bound::Finite(line.number()?)
        };
        line.sym("]")?;
        Ok(Item::Bounded(q, Interval::new(lower, upper)))
    }
}

/// Parses `init: ... ; target: ...`.
pub fn parse_query(text: &str) -> Result<QuerySpec, ParseError> {
    let mut init: Option<Vec<Item>> = None;
    let mut target: Option<(Vec<Item>, usize)> = None;
    let mut last_line = 1;

    for (idx, full) in text.lines().enumerate() {
        let no = idx + 1;
        last_line = no;
        let mut line = Line::new(no, strip_query_comment(full))?;
        while !line.at_end() {
            if line.eat(";") {
                continue;
            }
            let col = line.column();
            let (section, _) = line.ident("'init' or 'target'")?;
            line.sym(":")?;
            let mut items = Vec::new();
            while !line.at_end() && line.peek() != Some(&Tok::Sym(";")) {
                if !items.is_empty() {
                    line.eat("&");
                    line.eat(",");
                }
                items.push(parse_item(&mut line)?);
            }
            match section.as_str() {
                "init" if init.is_none() => init = Some(items),
                "target" if target.is_none() => target = Some((items, no)),
                "init" | "target" => {
                    return Err(ParseError::syntax(
                        no,
                        col,
                        format!("section '{section}' given twice"),
                    ))
                }
                other => {
                    return Err(ParseError::syntax(
                        no,
                        col,
                        format!("unknown section '{other}'"),
                    ))
                }
            }
        }
    }

    let Some((target_items, target_line)) = target else {
        return Err(ParseError::syntax(
            last_line,
            1,
            "missing 'target:' section",
        ));
    };

    let init = match init {
        None => InitSpec::Support(UnboundedInitialCube::default()),
        Some(items) if items.iter().all(|i| matches!(i, Item::Name(_))) => InitSpec::Support(
            UnboundedInitialCube::new(items.into_iter().map(|i| match i {
                Item::Name(q) => q,
                _ => unreachable!(),
            })),
        ),
        Some(items) => {
            let mut cube = Cube::initial();
            for item in items {
                match item {
                    Item::Name(q) => cube.set(q, Interval::ANY),
                    Item::Bounded(q, i) => cube.set(q, i),
                    Item::AtLeastOne(q, _) => cube.set(q, Interval::AT_LEAST_ONE),
                    Item::Zero(q, _) => cube.set(q, Interval::ZERO),
                }
            }
            InitSpec::Cube(cube)
        }
    };

    let mut present = Vec::new();
    let mut absent = Vec::new();
    let mut is_cube = false;
    for item in &target_items {
        match item {
            Item::AtLeastOne(q, col) => {
                if absent.contains(q) {
                    return Err(ParseError::new(
                        target_line,
                        *col,
                        ParseErrorKind::ContradictoryAtom(q.to_string()),
                    ));
                }
                present.push(q.clone());
            }
            Item::Zero(q, col) => {
                if present.contains(q) {
                    return Err(ParseError::new(
                        target_line,
                        *col,
                        ParseErrorKind::ContradictoryAtom(q.to_string()),
                    ));
                }
                absent.push(q.clone());
            }
            Item::Bounded(..) => is_cube = true,
            Item::Name(q) => {
                return Err(ParseError::syntax(
                    target_line,
                    1,
                    format!("bare state '{q}' in target; use '#{q}>=1' or '{q}:[l,u]'"),
                ))
            }
        }
    }
    let target = if is_cube {
        let mut cube = Cube::target();
        for item in target_items {
            match item {
                Item::Bounded(q, i) => cube.set(q, i),
                Item::AtLeastOne(q, _) => cube.set(q, Interval::AT_LEAST_ONE),
                Item::Zero(q, _) => cube.set(q, Interval::ZERO),
                Item::Name(_) => unreachable!(),
            }
        }
        TargetSpec::Cube(cube)
    } else {
        let query = CrpQuery::new(present, absent).map_err(|e| match e {
            SymbolicError::ContradictoryAtom(q) => ParseError::new(
                target_line,
                1,
                ParseErrorKind::ContradictoryAtom(q.to_string()),
            ),
            other => ParseError::syntax(target_line, 1, other.to_string()),
        })?;
        TargetSpec::Crp(query)
    };
    Ok(QuerySpec { init, target })
}

/// Parses `{a:1, b:2}`; braces and commas are optional.
pub fn parse_config(text: &str) -> Result<Configuration, ParseError> {
    let mut line = Line::new(1, text.trim())?;
    let braced = line.eat("{");
    let mut config = Configuration::new();
    while !line.at_end() && !(braced && line.peek() == Some(&Tok::Sym("}"))) {
        let (name, col) = line.ident("a state name")?;
        let q = state_at(&name, 1, col)?;
        line.sym(":")?;
        let n = line.number()?;
        config.add(&q, n);
        line.eat(",");
    }
    if braced {
        line.sym("}")?;
    }
    line.expect_end()?;
    Ok(config)
}

/// `config`/`step` lines, alternating, starting and ending with `config`.
pub fn write_trace(trace: &Trace) -> String {
    let mut out = String::new();
    writeln!(out, "config {}", trace.initial).unwrap();
    for (step, c) in &trace.steps {
        writeln!(out, "step {step}").unwrap();
        writeln!(out, "config {c}").unwrap();
    }
    out
}

fn parse_rbn_transition(line: &mut Line, compact: bool) -> Result<RbnTransition, ParseError> {
    let (source, c) = line.ident("a source state")?;
    let source = state_at(&source, line.no, c)?;
    let broadcast = if line.eat("!") {
        true
    } else if line.eat("?") {
        false
    } else {
        return Err(line.error("expected '!' or '?'"));
    };
    if compact && broadcast {
        return Err(line.error("receivers must use '?'"));
    }
    let (message, c) = line.ident("a message")?;
    let message = message_at(&message, line.no, c)?;
    line.sym("->")?;
    let (target, c) = line.ident("a target state")?;
    let target = state_at(&target, line.no, c)?;
    Ok(if broadcast {
        RbnTransition::broadcast(source, message, target)
    } else {
        RbnTransition::receive(source, message, target)
    })
}

fn parse_step(line: &mut Line) -> Result<Step, ParseError> {
    let (kind, _) = line.ident("'io' or 'bcast'")?;
    match kind.as_str() {
        "io" => {
            let mut names = Vec::new();
            for (what, sep) in [
                ("a source state", Some("@")),
                ("an observed state", Some("->")),
                ("a target state", None),
            ] {
                let (name, c) = line.ident(what)?;
                names.push(state_at(&name, line.no, c)?);
                if let Some(sep) = sep {
                    line.sym(sep)?;
                }
            }
            let target = names.pop().unwrap();
            let observed = names.pop().unwrap();
            let source = names.pop().unwrap();
            Ok(Step::Io(IoTransition::new(source, observed, target)))
        }
        "bcast" => {
            let broadcast = parse_rbn_transition(line, false)?;
            let mut receives = Vec::new();
            let (kw, c) = line.ident("'recv'")?;
            if kw != "recv" {
                return Err(ParseError::syntax(line.no, c, "expected 'recv'"));
            }
            line.sym("[")?;
            while !line.eat("]") {
                if !receives.is_empty() {
                    line.sym(",")?;
                }
                receives.push(parse_rbn_transition(line, true)?);
            }
            Ok(Step::Broadcast(RbnStep::new(broadcast, receives)))
        }
        other => Err(ParseError::syntax(
            line.no,
            1,
            format!("unknown step kind '{other}'"),
        )),
    }
}

/// Reads the `config`/`step` lines of `text`, ignoring any other line.
pub fn parse_trace(text: &str) -> Result<Trace, ParseError> {
    let mut initial: Option<Configuration> = None;
    let mut steps = Vec::new();
    let mut pending: Option<(Step, usize)> = None;
    for (idx, full) in text.lines().enumerate() {
        let no = idx + 1;
        let trimmed = full.trim_start();
        if let Some(rest) = trimmed.strip_prefix("config ") {
            let c = parse_config(rest).map_err(|e| ParseError { line: no, ..e })?;
            match (initial.is_none(), pending.take()) {
                (true, None) => initial = Some(c),
                (false, Some((step, _))) => steps.push((step, c)),
                (false, None) => {
                    return Err(ParseError::syntax(
                        no,
                        1,
                        "two configurations without a step between them",
                    ))
                }
                (true, Some(_)) => unreachable!(),
            }
        } else if let Some(rest) = trimmed.strip_prefix("step ") {
            if initial.is_none() || pending.is_some() {
                return Err(ParseError::syntax(
                    no,
                    1,
                    "step must follow a configuration",
                ));
            }
            let offset = full.len() - rest.len();
            let mut line = Line::new(no, rest)?;
            let step = parse_step(&mut line).map_err(|e| ParseError {
                column: e.column + offset,
                ..e
            })?;
            line.expect_end()?;
            pending = Some((step, no));
        }
    }
    if let Some((_, no)) = pending {
        return Err(ParseError::syntax(
            no,
            1,
            "step without resulting configuration",
        ));
    }
    let initial = initial.ok_or_else(|| ParseError::syntax(1, 1, "no configuration found"))?;
    Ok(Trace { initial, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(name: &str) -> StateId {
        StateId::new(name).unwrap()
    }

    #[test]
    fn parses_two_state_ionet() {
        let net = parse_net("ionet\nstates a b\ntrans a @ b -> b\n").unwrap();
        let want = IoNet::new(
            [s("a"), s("b")],
            [IoTransition::new(s("a"), s("b"), s("b"))],
        )
        .unwrap();
        assert_eq!(net, Net::Io(want));
    }

    #[test]
    fn parses_one_state_rbn() {
        let net = parse_net("rbn\nstates p\nalphabet m\ntrans p !m -> p\n").unwrap();
        let m = MessageId::new("m").unwrap();
        let want = Rbn::new(
            [s("p")],
            [m.clone()],
            [RbnTransition::broadcast(s("p"), m, s("p"))],
        )
        .unwrap();
        assert_eq!(net, Net::Rbn(want));
    }

    #[test]
    fn reports_undeclared_state_with_position() {
        let err = parse_net("ionet\nstates a\ntrans a @ b -> a\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UndeclaredState("b".into()));
        assert_eq!((err.line, err.column), (3, 11));
    }

    #[test]
    fn whitespace_and_comments_are_insignificant() {
        let net = parse_net("# demo\n  ionet  \nstates a b # two\ntrans a@b->b\n\n").unwrap();
        assert_eq!(
            net,
            parse_net("ionet\nstates a b\ntrans a @ b -> b\n").unwrap()
        );
    }

    #[test]
    fn duplicate_transitions_are_rejected() {
        let err = parse_net("ionet\nstates a b\ntrans a @ b -> b\ntrans a @ b -> b\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::DuplicateTransition(_)));
        assert_eq!(err.line, 4);
    }

    #[test]
    fn syntax_errors_point_at_the_token() {
        let err = parse_net("rbn\nstates p\nalphabet m\ntrans p m -> p\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 9));
        assert!(parse_net("states a\n").is_err());
        assert!(parse_net("").is_err());
    }

    #[test]
    fn query_kinds() {
        let q = parse_query("init: a ; target: #b>=1").unwrap();
        assert_eq!(
            q.init,
            InitSpec::Support(UnboundedInitialCube::new([s("a")]))
        );
        assert_eq!(q.target, TargetSpec::Crp(CrpQuery::geq1([s("b")])));

        let q = parse_query("init: a b ; target: #b>=1 & #a=0").unwrap();
        let TargetSpec::Crp(crp) = q.target else {
            panic!()
        };
        assert_eq!(crp.kind(), iorbn_core::symbolic::CrpKind::Geq1Eq0);
        assert_eq!(crp.must_be_absent(), &[s("a")].into_iter().collect());

        let err = parse_query("target: #a>=1 & #a=0").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ContradictoryAtom("a".into()));
    }

    #[test]
    fn query_cubes_and_comments() {
        let q = parse_query("# reach two b\ninit: a:[1,*] b:[0,2]\ntarget: b:[2,*]\n").unwrap();
        assert_eq!(
            q.init,
            InitSpec::Cube(
                Cube::initial()
                    .with(s("a"), Interval::new(1, Bound::Infinite))
                    .with(s("b"), Interval::new(0, Bound::Finite(2)))
            )
        );
        assert_eq!(
            q.target,
            TargetSpec::Cube(Cube::target().with(s("b"), Interval::new(2, Bound::Infinite)))
        );
        assert!(parse_query("init: a").is_err());
        assert!(parse_query("target: #a>=2").is_err());
    }

    #[test]
    fn configs_with_and_without_braces() {
        let want = Configuration::from_counts([(s("a"), 1), (s("b"), 2)]);
        assert_eq!(parse_config("{a:1, b:2}").unwrap(), want);
        assert_eq!(parse_config("a:1 b:2").unwrap(), want);
        assert_eq!(parse_config("{}").unwrap(), Configuration::new());
        assert!(parse_config("{a:x}").is_err());
    }

    #[test]
    fn traces_round_trip_through_text() {
        let m = MessageId::new("m").unwrap();
        let step = RbnStep::new(
            RbnTransition::broadcast(s("q"), m.clone(), s("q")),
            vec![
                RbnTransition::receive(s("p"), m.clone(), s("r")),
                RbnTransition::receive(s("p"), m, s("r")),
            ],
        );
        let trace = Trace {
            initial: Configuration::from_counts([(s("q"), 1), (s("p"), 2)]),
            steps: vec![(
                Step::Broadcast(step),
                Configuration::from_counts([(s("q"), 1), (s("r"), 2)]),
            )],
        };
        let text = write_trace(&trace);
        assert_eq!(
            text,
            "config {p:2, q:1}\nstep bcast q !m -> q recv [p?m->r, p?m->r]\nconfig {q:1, r:2}\n"
        );
        assert_eq!(parse_trace(&text).unwrap(), trace);

        let io = "answer YES\nconfig {a:1, b:1}\nstep io a @ b -> b\nconfig {b:2}\n";
        let trace = parse_trace(io).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(write_trace(&trace), io.trim_start_matches("answer YES\n"));
    }
}
