//! A small regular-expression engine over the code alphabet.
//!
//! Supported syntax: alphabet symbols (`NnIwp,;:&Lao`), `.` for any symbol,
//! classes `[nN]` and `[^L]`, groups `(...)`, `(?:...)`, named groups
//! `(?<name>...)`, lookahead `(?=...)`, alternation `|`, and the greedy
//! quantifiers `*`, `+`, `?`, `{m}`, `{m,}`, `{m,n}`.
//!
//! Matching follows backtracking (leftmost-first) semantics: alternatives are
//! tried in the order written and quantifiers are greedy. Every
//! `(instruction, position)` state is explored at most once per search, which
//! bounds the work by `program size × input length` and keeps the matcher
//! free of recursion. Named groups record every iteration, so a group inside
//! a repetition yields one capture per pass.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::encoder::Code;

const MAX_INSTRUCTIONS: usize = 20_000;
const MAX_REPEAT: u32 = 1_000;
const MAX_NESTING: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("pattern error at offset {offset}: {kind}")]
pub struct PatternError {
    pub offset: usize,
    pub kind: PatternErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternErrorKind {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),
    #[error("unclosed group")]
    UnclosedGroup,
    #[error("unmatched ')'")]
    UnmatchedParen,
    #[error("unclosed class")]
    UnclosedClass,
    #[error("empty class")]
    EmptyClass,
    #[error("quantifier without operand")]
    NothingToRepeat,
    #[error("malformed repetition bounds")]
    BadRepetition,
    #[error("malformed group name")]
    BadGroupName,
    #[error("pattern too large")]
    TooLarge,
    #[error("groups nested too deeply")]
    TooDeep,
}

/// A set of code symbols, one bit per symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymbolSet(u16);

impl SymbolSet {
    pub const ANY: SymbolSet = SymbolSet((1 << 12) - 1);

    pub fn of(code: Code) -> Self {
        SymbolSet(1 << code.index())
    }

    pub fn insert(&mut self, code: Code) {
        self.0 |= 1 << code.index();
    }

    pub fn contains(self, code: Code) -> bool {
        self.0 & (1 << code.index()) != 0
    }

    pub fn complement(self) -> Self {
        SymbolSet(!self.0 & Self::ANY.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug)]
enum Node {
    Set(SymbolSet),
    Concat(Vec<Node>),
    Alt(Vec<Node>),
    Repeat {
        node: Box<Node>,
        min: u32,
        max: Option<u32>,
    },
    Group {
        name: Option<String>,
        node: Box<Node>,
    },
    Look(Box<Node>),
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    depth: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser {
            chars: src.char_indices().collect(),
            pos: 0,
            len: src.len(),
            depth: 0,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i)
    }

    fn err(&self, kind: PatternErrorKind) -> PatternError {
        PatternError {
            offset: self.offset(),
            kind,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Node, PatternError> {
        let node = self.alternation()?;
        match self.peek() {
            None => Ok(node),
            Some(')') => Err(self.err(PatternErrorKind::UnmatchedParen)),
            Some(c) => Err(self.err(PatternErrorKind::UnknownSymbol(c))),
        }
    }

    fn alternation(&mut self) -> Result<Node, PatternError> {
        let mut alts = vec![self.concat()?];
        while self.eat('|') {
            alts.push(self.concat()?);
        }
        Ok(if alts.len() == 1 {
            alts.pop().unwrap_or(Node::Concat(Vec::new()))
        } else {
            Node::Alt(alts)
        })
    }

    fn concat(&mut self) -> Result<Node, PatternError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            let atom = self.atom()?;
            items.push(self.quantifiers(atom)?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap_or(Node::Concat(Vec::new()))
        } else {
            Node::Concat(items)
        })
    }

    fn atom(&mut self) -> Result<Node, PatternError> {
        let c = self
            .peek()
            .ok_or_else(|| self.err(PatternErrorKind::NothingToRepeat))?;
        match c {
            '(' => self.group(),
            '[' => self.class(),
            '.' => {
                self.pos += 1;
                Ok(Node::Set(SymbolSet::ANY))
            }
            '*' | '+' | '?' | '{' => Err(self.err(PatternErrorKind::NothingToRepeat)),
            _ => {
                let code = Code::from_char(c)
                    .ok_or_else(|| self.err(PatternErrorKind::UnknownSymbol(c)))?;
                self.pos += 1;
                Ok(Node::Set(SymbolSet::of(code)))
            }
        }
    }

    fn group(&mut self) -> Result<Node, PatternError> {
        self.pos += 1;
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.err(PatternErrorKind::TooDeep));
        }
        enum Kind {
            Plain,
            Named(String),
            Look,
        }
        let kind = if self.eat('?') {
            if self.eat(':') {
                Kind::Plain
            } else if self.eat('=') {
                Kind::Look
            } else if self.eat('<') {
                let mut name = String::new();
                loop {
                    match self.peek() {
                        Some('>') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                            name.push(c);
                            self.pos += 1;
                        }
                        _ => return Err(self.err(PatternErrorKind::BadGroupName)),
                    }
                }
                if name.is_empty() {
                    return Err(self.err(PatternErrorKind::BadGroupName));
                }
                Kind::Named(name)
            } else {
                return Err(self.err(PatternErrorKind::BadGroupName));
            }
        } else {
            Kind::Plain
        };
        let inner = self.alternation()?;
        if !self.eat(')') {
            return Err(self.err(PatternErrorKind::UnclosedGroup));
        }
        self.depth -= 1;
        Ok(match kind {
            Kind::Plain => Node::Group {
                name: None,
                node: Box::new(inner),
            },
            Kind::Named(name) => Node::Group {
                name: Some(name),
                node: Box::new(inner),
            },
            Kind::Look => Node::Look(Box::new(inner)),
        })
    }

    fn class(&mut self) -> Result<Node, PatternError> {
        self.pos += 1;
        let negated = self.eat('^');
        let mut set = SymbolSet::default();
        loop {
            match self.peek() {
                None => return Err(self.err(PatternErrorKind::UnclosedClass)),
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => {
                    let code = Code::from_char(c)
                        .ok_or_else(|| self.err(PatternErrorKind::UnknownSymbol(c)))?;
                    set.insert(code);
                    self.pos += 1;
                }
            }
        }
        let set = if negated { set.complement() } else { set };
        if set.is_empty() {
            return Err(self.err(PatternErrorKind::EmptyClass));
        }
        Ok(Node::Set(set))
    }

    fn quantifiers(&mut self, mut node: Node) -> Result<Node, PatternError> {
        loop {
            let (min, max) = match self.peek() {
                Some('*') => (0, None),
                Some('+') => (1, None),
                Some('?') => (0, Some(1)),
                Some('{') => {
                    self.pos += 1;
                    let bounds = self.bounds()?;
                    node = Node::Repeat {
                        node: Box::new(node),
                        min: bounds.0,
                        max: bounds.1,
                    };
                    continue;
                }
                _ => return Ok(node),
            };
            self.pos += 1;
            node = Node::Repeat {
                node: Box::new(node),
                min,
                max,
            };
        }
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = value.saturating_mul(10).saturating_add(d);
            self.pos += 1;
        }
        (self.pos > start).then_some(value)
    }

    fn bounds(&mut self) -> Result<(u32, Option<u32>), PatternError> {
        let bad = |p: &Self| p.err(PatternErrorKind::BadRepetition);
        let min = self.number().ok_or_else(|| bad(self))?;
        let max = if self.eat(',') {
            self.number()
        } else {
            Some(min)
        };
        if !self.eat('}') {
            return Err(bad(self));
        }
        if min > MAX_REPEAT || max.is_some_and(|m| m < min || m > MAX_REPEAT) {
            return Err(bad(self));
        }
        Ok((min, max))
    }
}

#[derive(Clone, Copy, Debug)]
enum Inst {
    Set(SymbolSet),
    Split(usize, usize),
    Jmp(usize),
    Open(u16),
    Close,
    Look(usize),
    Match,
}

#[derive(Clone, Debug, Default)]
struct Program {
    insts: Vec<Inst>,
}

struct Compiler {
    looks: Vec<Program>,
    groups: Vec<String>,
    total: usize,
}

impl Compiler {
    fn program(&mut self, node: &Node) -> Result<Program, PatternError> {
        let mut prog = Program::default();
        self.emit(node, &mut prog)?;
        prog.insts.push(Inst::Match);
        Ok(prog)
    }

    fn push(&mut self, prog: &mut Program, inst: Inst) -> Result<usize, PatternError> {
        self.total += 1;
        if self.total > MAX_INSTRUCTIONS {
            return Err(PatternError {
                offset: 0,
                kind: PatternErrorKind::TooLarge,
            });
        }
        prog.insts.push(inst);
        Ok(prog.insts.len() - 1)
    }

    fn group_id(&mut self, name: &str) -> u16 {
        match self.groups.iter().position(|g| g == name) {
            Some(i) => i as u16,
            None => {
                self.groups.push(name.to_string());
                (self.groups.len() - 1) as u16
            }
        }
    }

    fn emit(&mut self, node: &Node, prog: &mut Program) -> Result<(), PatternError> {
        match node {
            Node::Set(set) => {
                self.push(prog, Inst::Set(*set))?;
            }
            Node::Concat(items) => {
                for item in items {
                    self.emit(item, prog)?;
                }
            }
            Node::Alt(alts) => {
                let mut exits = Vec::new();
                for (i, alt) in alts.iter().enumerate() {
                    if i + 1 == alts.len() {
                        self.emit(alt, prog)?;
                    } else {
                        let split = self.push(prog, Inst::Split(0, 0))?;
                        self.emit(alt, prog)?;
                        exits.push(self.push(prog, Inst::Jmp(0))?);
                        let next = prog.insts.len();
                        prog.insts[split] = Inst::Split(split + 1, next);
                    }
                }
                let end = prog.insts.len();
                for exit in exits {
                    prog.insts[exit] = Inst::Jmp(end);
                }
            }
            Node::Repeat { node, min, max } => {
                for _ in 0..*min {
                    self.emit(node, prog)?;
                }
                match max {
                    None => {
                        let split = self.push(prog, Inst::Split(0, 0))?;
                        self.emit(node, prog)?;
                        self.push(prog, Inst::Jmp(split))?;
                        let end = prog.insts.len();
                        prog.insts[split] = Inst::Split(split + 1, end);
                    }
                    Some(max) => {
                        let mut splits = Vec::new();
                        for _ in *min..*max {
                            splits.push(self.push(prog, Inst::Split(0, 0))?);
                            self.emit(node, prog)?;
                        }
                        let end = prog.insts.len();
                        for split in splits {
                            prog.insts[split] = Inst::Split(split + 1, end);
                        }
                    }
                }
            }
            Node::Group { name: None, node } => self.emit(node, prog)?,
            Node::Group {
                name: Some(name),
                node,
            } => {
                let id = self.group_id(name);
                self.push(prog, Inst::Open(id))?;
                self.emit(node, prog)?;
                self.push(prog, Inst::Close)?;
            }
            Node::Look(node) => {
                let sub = self.program(node)?;
                self.looks.push(sub);
                self.push(prog, Inst::Look(self.looks.len() - 1))?;
            }
        }
        Ok(())
    }
}

/// One recorded pass through a named group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capture {
    pub group: u16,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub start: usize,
    pub end: usize,
    /// Captures in order of their opening position along the match.
    pub captures: Vec<Capture>,
}

/// A compiled pattern.
#[derive(Clone, Debug)]
pub struct Pattern {
    source: String,
    main: Program,
    looks: Vec<Program>,
    groups: Vec<String>,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Pattern {
    pub fn new(source: &str) -> Result<Self, PatternError> {
        let node = Parser::new(source).parse()?;
        let mut compiler = Compiler {
            looks: Vec::new(),
            groups: Vec::new(),
            total: 0,
        };
        let main = compiler.program(&node)?;
        Ok(Pattern {
            source: source.to_string(),
            main,
            looks: compiler.looks,
            groups: compiler.groups,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    pub fn group_id(&self, name: &str) -> Option<u16> {
        self.groups.iter().position(|g| g == name).map(|i| i as u16)
    }

    pub fn group_name(&self, id: u16) -> Option<&str> {
        self.groups.get(id as usize).map(String::as_str)
    }

    /// All non-overlapping matches, scanning left to right.
    pub fn find_iter(&self, codes: &[Code]) -> Vec<Match> {
        let mut searcher = Searcher::new(self, codes);
        let mut matches = Vec::new();
        let mut at = 0;
        while at <= codes.len() {
            let Some(m) = searcher.find_from(at) else {
                break;
            };
            at = if m.end > m.start { m.end } else { m.end + 1 };
            matches.push(m);
        }
        matches
    }

    /// First match starting at or after `start`.
    pub fn find_at(&self, codes: &[Code], start: usize) -> Option<Match> {
        Searcher::new(self, codes).find_from(start)
    }

    /// Match anchored at `start`.
    pub fn match_at(&self, codes: &[Code], start: usize) -> Option<Match> {
        let mut searcher = Searcher::new(self, codes);
        searcher.attempt(start)
    }

    /// True when some path through the pattern consumes all of `codes`.
    pub fn is_full_match(&self, codes: &[Code]) -> bool {
        let mut searcher = Searcher::new(self, codes);
        searcher.require_end = true;
        searcher.attempt(0).is_some()
    }
}

#[derive(Clone, Copy, Debug)]
enum Event {
    Open(u16, usize),
    Close(usize),
}

trait Visited {
    /// Marks the state and reports whether it was already marked.
    fn test_and_set(&mut self, pc: usize, pos: usize) -> bool;
}

struct BitVisited {
    bits: Vec<u64>,
    width: usize,
}

impl BitVisited {
    fn new(width: usize, positions: usize) -> Self {
        let total = width * positions;
        BitVisited {
            bits: vec![0; total.div_ceil(64)],
            width,
        }
    }

    fn clear_position(&mut self, pos: usize) {
        for pc in 0..self.width {
            let i = pos * self.width + pc;
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }
}

impl Visited for BitVisited {
    fn test_and_set(&mut self, pc: usize, pos: usize) -> bool {
        let i = pos * self.width + pc;
        let (word, bit) = (i / 64, 1u64 << (i % 64));
        let seen = self.bits[word] & bit != 0;
        self.bits[word] |= bit;
        seen
    }
}

impl Visited for HashSet<(usize, usize)> {
    fn test_and_set(&mut self, pc: usize, pos: usize) -> bool {
        !self.insert((pc, pos))
    }
}

struct Job {
    pc: usize,
    pos: usize,
    trail: usize,
}

struct Searcher<'p, 'c> {
    pattern: &'p Pattern,
    codes: &'c [Code],
    visited: BitVisited,
    looks: HashMap<(usize, usize), bool>,
    require_end: bool,
}

impl<'p, 'c> Searcher<'p, 'c> {
    fn new(pattern: &'p Pattern, codes: &'c [Code]) -> Self {
        Searcher {
            pattern,
            codes,
            visited: BitVisited::new(pattern.main.insts.len(), codes.len() + 1),
            looks: HashMap::new(),
            require_end: false,
        }
    }

    fn find_from(&mut self, at: usize) -> Option<Match> {
        if at > self.codes.len() {
            return None;
        }
        // States at `at` may lie on the path of the previous match.
        self.visited.clear_position(at);
        (at..=self.codes.len()).find_map(|start| self.attempt(start))
    }

    fn attempt(&mut self, start: usize) -> Option<Match> {
        let mut trail = Vec::new();
        let mut visited = std::mem::replace(&mut self.visited, BitVisited::new(0, 0));
        let end = self.exec(None, start, &mut visited, &mut trail);
        self.visited = visited;
        end.map(|end| Match {
            start,
            end,
            captures: captures(&trail),
        })
    }

    fn lookahead(&mut self, id: usize, pos: usize) -> bool {
        if let Some(&known) = self.looks.get(&(id, pos)) {
            return known;
        }
        let mut visited = HashSet::new();
        let mut trail = Vec::new();
        let require_end = std::mem::replace(&mut self.require_end, false);
        let result = self.exec(Some(id), pos, &mut visited, &mut trail).is_some();
        self.require_end = require_end;
        self.looks.insert((id, pos), result);
        result
    }

    fn exec(
        &mut self,
        look: Option<usize>,
        start: usize,
        visited: &mut impl Visited,
        trail: &mut Vec<Event>,
    ) -> Option<usize> {
        let pattern = self.pattern;
        let insts = match look {
            None => &pattern.main.insts,
            Some(id) => &pattern.looks[id].insts,
        };
        let codes = self.codes;
        let mut stack = vec![Job {
            pc: 0,
            pos: start,
            trail: trail.len(),
        }];
        while let Some(job) = stack.pop() {
            trail.truncate(job.trail);
            let (mut pc, mut pos) = (job.pc, job.pos);
            loop {
                if visited.test_and_set(pc, pos) {
                    break;
                }
                match insts[pc] {
                    Inst::Set(set) => {
                        if pos < codes.len() && set.contains(codes[pos]) {
                            pc += 1;
                            pos += 1;
                        } else {
                            break;
                        }
                    }
                    Inst::Split(first, second) => {
                        stack.push(Job {
                            pc: second,
                            pos,
                            trail: trail.len(),
                        });
                        pc = first;
                    }
                    Inst::Jmp(target) => pc = target,
                    Inst::Open(g) => {
                        trail.push(Event::Open(g, pos));
                        pc += 1;
                    }
                    Inst::Close => {
                        trail.push(Event::Close(pos));
                        pc += 1;
                    }
                    Inst::Look(id) => {
                        if self.lookahead(id, pos) {
                            pc += 1;
                        } else {
                            break;
                        }
                    }
                    Inst::Match => {
                        if look.is_none() && self.require_end && pos != codes.len() {
                            break;
                        }
                        return Some(pos);
                    }
                }
            }
        }
        None
    }
}

fn captures(trail: &[Event]) -> Vec<Capture> {
    let mut out: Vec<Capture> = Vec::new();
    let mut open = Vec::new();
    for event in trail {
        match *event {
            Event::Open(group, pos) => {
                open.push(out.len());
                out.push(Capture {
                    group,
                    start: pos,
                    end: pos,
                });
            }
            Event::Close(pos) => {
                if let Some(i) = open.pop() {
                    out[i].end = pos;
                }
            }
        }
    }
    out
}
