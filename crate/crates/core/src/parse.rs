//! Text formats: polynomials, automaton files, system files, counting
//! constraints, words, and input series. Errors carry line/column positions.

use std::collections::HashMap;
use std::fmt;

use num::bigint::BigInt;

use crate::automaton::{Letter, ShuffleAutomaton, Word};
use crate::commlang::CountConstraint;
use crate::poly::Poly;
use crate::rational::{rat_to_string, Rat};
use crate::system::PolynomialSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |ch: char, line: &mut usize, col: &mut usize| {
            if ch == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if c.is_whitespace() {
            chars.next();
            bump(c, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while let Some(&ch) = chars.peek() {
                chars.next();
                bump(ch, &mut line, &mut col);
                if ch == '\n' {
                    break;
                }
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    s.push(ch);
                    chars.next();
                    bump(ch, &mut line, &mut col);
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(s), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_ascii_digit() {
                    s.push(ch);
                    chars.next();
                    bump(ch, &mut line, &mut col);
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: tline,
                col: tcol,
            });
            continue;
        }
        // multi-character punctuation first
        let two: String = {
            let mut it = chars.clone();
            let a = it.next().unwrap();
            match it.next() {
                Some(b) => format!("{}{}", a, b),
                None => a.to_string(),
            }
        };
        let multi = ["->", "==", ">=", "<=", "&&", "||", "!="];
        if let Some(&p) = multi.iter().find(|&&p| p == two) {
            for _ in 0..2 {
                let ch = chars.next().unwrap();
                bump(ch, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Punct(p), line: tline, col: tcol });
            continue;
        }
        let singles = [
            ('+', "+"), ('-', "-"), ('*', "*"), ('/', "/"), ('^', "^"),
            ('(', "("), (')', ")"), ('{', "{"), ('}', "}"), (';', ";"),
            (':', ":"), (',', ","), ('=', "="), ('\'', "'"), ('%', "%"),
            ('!', "!"), ('[', "["), (']', "]"),
        ];
        if let Some(&(_, p)) = singles.iter().find(|&&(ch, _)| ch == c) {
            chars.next();
            bump(c, &mut line, &mut col);
            out.push(Token { tok: Tok::Punct(p), line: tline, col: tcol });
            continue;
        }
        return Err(ParseError {
            line: tline,
            col: tcol,
            message: format!("unexpected character '{}'", c),
        });
    }
    Ok(out)
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Cursor { tokens: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .or_else(|| self.tokens.last().map(|t| (t.line, t.col + 1)))
            .unwrap_or((1, 1))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat_punct(&mut self, p: &'static str) -> bool {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &'static str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", p)))
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.next() {
                Some(Tok::Ident(s)) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.error("expected identifier")),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected '{}'", kw))),
        }
    }

    fn expect_uint(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => match self.next() {
                Some(Tok::Int(n)) => Ok(n),
                _ => unreachable!(),
            },
            _ => Err(self.error("expected integer")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }
}

/// Rational literal: `int` or `int/int`, optional leading '-' handled by the
/// caller where signs are legal.
fn parse_rat(cur: &mut Cursor) -> Result<Rat, ParseError> {
    let neg = cur.eat_punct("-");
    let n = cur.expect_uint()?;
    let r = if cur.eat_punct("/") {
        let d = cur.expect_uint()?;
        if d == BigInt::from(0) {
            return Err(cur.error("zero denominator"));
        }
        Rat::new(n, d)
    } else {
        Rat::from_integer(n)
    };
    Ok(if neg { -r } else { r })
}

// --- polynomial text syntax ---

fn parse_poly_factor(cur: &mut Cursor, vars: &HashMap<String, usize>) -> Result<Poly, ParseError> {
    match cur.peek() {
        Some(Tok::Int(_)) => {
            let r = parse_rat(cur)?;
            Ok(Poly::constant(r))
        }
        Some(Tok::Ident(_)) => {
            let name = cur.expect_ident()?;
            let &v = vars
                .get(&name)
                .ok_or_else(|| cur.error(format!("unknown indeterminate '{}'", name)))?;
            let exp = if cur.eat_punct("^") {
                let e = cur.expect_uint()?;
                u32::try_from(e).map_err(|_| cur.error("exponent too large"))?
            } else {
                1
            };
            Ok(Poly::var(v).pow(exp))
        }
        _ => Err(cur.error("expected coefficient or indeterminate")),
    }
}

fn parse_poly_term(cur: &mut Cursor, vars: &HashMap<String, usize>) -> Result<Poly, ParseError> {
    let mut p = parse_poly_factor(cur, vars)?;
    while cur.eat_punct("*") {
        p = p.mul(&parse_poly_factor(cur, vars)?);
    }
    Ok(p)
}

fn parse_poly_expr(cur: &mut Cursor, vars: &HashMap<String, usize>) -> Result<Poly, ParseError> {
    let mut negate = cur.eat_punct("-");
    let mut acc = Poly::zero();
    loop {
        let t = parse_poly_term(cur, vars)?;
        acc = if negate { acc.sub(&t) } else { acc.add(&t) };
        if cur.eat_punct("+") {
            negate = false;
        } else if cur.eat_punct("-") {
            negate = true;
        } else {
            break;
        }
    }
    Ok(acc)
}

/// Parse a standalone polynomial over the given named indeterminates.
pub fn parse_poly(text: &str, names: &[String]) -> Result<Poly, ParseError> {
    let vars: HashMap<String, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let mut cur = Cursor::new(text)?;
    let p = parse_poly_expr(&mut cur, &vars)?;
    cur.expect_end()?;
    Ok(p)
}

// --- automaton file format ---

fn parse_letter_name(cur: &mut Cursor, alphabet_size: usize) -> Result<Letter, ParseError> {
    let name = cur.expect_ident()?;
    let idx = name
        .strip_prefix('a')
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| cur.error(format!("expected a letter 'a<k>', got '{}'", name)))?;
    if idx >= alphabet_size {
        return Err(cur.error(format!("letter a{} outside alphabet of size {}", idx, alphabet_size)));
    }
    Ok(Letter(idx))
}

pub fn parse_automaton(text: &str) -> Result<ShuffleAutomaton, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.expect_keyword("automaton")?;
    cur.expect_punct("{")?;

    cur.expect_keyword("alphabet")?;
    cur.expect_punct(":")?;
    let alphabet_size = usize::try_from(cur.expect_uint()?)
        .map_err(|_| cur.error("alphabet size too large"))?;
    if alphabet_size == 0 {
        return Err(cur.error("alphabet must contain the drift letter a0"));
    }
    cur.expect_punct(";")?;

    cur.expect_keyword("nonterminals")?;
    cur.expect_punct(":")?;
    let mut nonterminals = Vec::new();
    if cur.peek() != Some(&Tok::Punct(";")) {
        loop {
            nonterminals.push(cur.expect_ident()?);
            if !cur.eat_punct(",") {
                break;
            }
        }
    }
    cur.expect_punct(";")?;
    let vars: HashMap<String, usize> = nonterminals
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    if vars.len() != nonterminals.len() {
        return Err(cur.error("duplicate nonterminal"));
    }
    let k = nonterminals.len();

    cur.expect_keyword("init")?;
    cur.expect_punct(":")?;
    let init = parse_poly_expr(&mut cur, &vars)?;
    cur.expect_punct(";")?;

    cur.expect_keyword("output")?;
    cur.expect_punct(":")?;
    let mut output = vec![Rat::from_integer(BigInt::from(0)); k];
    if cur.peek() != Some(&Tok::Punct(";")) {
        loop {
            let name = cur.expect_ident()?;
            let &v = vars
                .get(&name)
                .ok_or_else(|| cur.error(format!("unknown nonterminal '{}'", name)))?;
            cur.expect_punct("=")?;
            output[v] = parse_rat(&mut cur)?;
            if !cur.eat_punct(",") {
                break;
            }
        }
    }
    cur.expect_punct(";")?;

    let mut delta = vec![vec![Poly::zero(); k]; alphabet_size];
    while cur.peek() == Some(&Tok::Ident("delta".into())) {
        cur.expect_keyword("delta")?;
        let letter = parse_letter_name(&mut cur, alphabet_size)?;
        cur.expect_punct(":")?;
        loop {
            let name = cur.expect_ident()?;
            let &v = vars
                .get(&name)
                .ok_or_else(|| cur.error(format!("unknown nonterminal '{}'", name)))?;
            cur.expect_punct("->")?;
            delta[letter.0][v] = parse_poly_expr(&mut cur, &vars)?;
            if !cur.eat_punct(",") {
                break;
            }
        }
        cur.expect_punct(";")?;
    }
    cur.expect_punct("}")?;
    cur.expect_end()?;

    ShuffleAutomaton::new(alphabet_size, nonterminals, init, output, delta)
        .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })
}

pub fn print_automaton(a: &ShuffleAutomaton) -> String {
    let mut s = String::new();
    s.push_str(&format!("automaton {{ alphabet: {};\n", a.alphabet_size));
    s.push_str(&format!("  nonterminals: {};\n", a.nonterminals.join(", ")));
    s.push_str(&format!("  init: {};\n", a.init.display(&a.nonterminals)));
    let outs: Vec<String> = a
        .nonterminals
        .iter()
        .zip(&a.output)
        .map(|(n, o)| format!("{} = {}", n, rat_to_string(o)))
        .collect();
    s.push_str(&format!("  output: {};\n", outs.join(", ")));
    for (l, row) in a.delta.iter().enumerate() {
        let entries: Vec<String> = a
            .nonterminals
            .iter()
            .zip(row)
            .filter(|(_, p)| !p.is_zero())
            .map(|(n, p)| format!("{} -> {}", n, p.display(&a.nonterminals)))
            .collect();
        if !entries.is_empty() {
            s.push_str(&format!("  delta a{}: {};\n", l, entries.join(", ")));
        }
    }
    s.push('}');
    s
}

// --- system file format ---

pub fn parse_system(text: &str) -> Result<PolynomialSystem, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.expect_keyword("system")?;
    cur.expect_punct("{")?;

    cur.expect_keyword("inputs")?;
    cur.expect_punct(":")?;
    let m = usize::try_from(cur.expect_uint()?).map_err(|_| cur.error("too many inputs"))?;
    cur.expect_punct(";")?;

    cur.expect_keyword("states")?;
    cur.expect_punct(":")?;
    let mut state_names = Vec::new();
    let mut x0 = Vec::new();
    if cur.peek() != Some(&Tok::Punct(";")) {
        loop {
            state_names.push(cur.expect_ident()?);
            cur.expect_punct("=")?;
            x0.push(parse_rat(&mut cur)?);
            if !cur.eat_punct(",") {
                break;
            }
        }
    }
    cur.expect_punct(";")?;
    let k = state_names.len();

    // combined universe: states, then inputs u1..um
    let mut vars: HashMap<String, usize> = state_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    if vars.len() != k {
        return Err(cur.error("duplicate state name"));
    }
    for j in 1..=m {
        let name = format!("u{}", j);
        if vars.contains_key(&name) {
            return Err(cur.error(format!("state name '{}' collides with an input", name)));
        }
        vars.insert(name, k + j - 1);
    }

    cur.expect_keyword("dynamics")?;
    cur.expect_punct("{")?;
    let mut rhs = vec![Poly::zero(); k];
    let mut seen = vec![false; k];
    while cur.peek() != Some(&Tok::Punct("}")) {
        let name = cur.expect_ident()?;
        let &v = vars
            .get(&name)
            .filter(|&&v| v < k)
            .ok_or_else(|| cur.error(format!("unknown state '{}'", name)))?;
        cur.expect_punct("'")?;
        cur.expect_punct("=")?;
        rhs[v] = parse_poly_expr(&mut cur, &vars)?;
        if seen[v] {
            return Err(cur.error(format!("duplicate equation for '{}'", name)));
        }
        seen[v] = true;
        cur.expect_punct(";")?;
    }
    cur.expect_punct("}")?;

    cur.expect_keyword("output")?;
    cur.expect_punct(":")?;
    let state_vars: HashMap<String, usize> = state_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let output = parse_poly_expr(&mut cur, &state_vars)?;
    cur.expect_punct(";")?;
    cur.expect_punct("}")?;
    cur.expect_end()?;

    PolynomialSystem::from_affine_dynamics(state_names, x0, m, rhs, output)
        .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })
}

pub fn print_system(s: &PolynomialSystem) -> String {
    let k = s.num_states();
    let m = s.num_inputs();
    let mut names = s.state_names.clone();
    for j in 1..=m {
        names.push(format!("u{}", j));
    }
    let mut out = String::new();
    out.push_str(&format!("system {{ inputs: {};\n", m));
    let states: Vec<String> = s
        .state_names
        .iter()
        .zip(&s.x0)
        .map(|(n, v)| format!("{} = {}", n, rat_to_string(v)))
        .collect();
    out.push_str(&format!("  states: {};\n", states.join(", ")));
    out.push_str("  dynamics {\n");
    for i in 0..k {
        // reassemble the combined right-hand side
        let mut rhs = s.dynamics[0][i].clone();
        for j in 1..=m {
            rhs = rhs.add(&s.dynamics[j][i].mul(&Poly::var(k + j - 1)));
        }
        out.push_str(&format!("    {}' = {};\n", s.state_names[i], rhs.display(&names)));
    }
    out.push_str("  }\n");
    out.push_str(&format!("  output: {};\n", s.output.display(&s.state_names)));
    out.push('}');
    out
}

// --- counting constraints ---

fn parse_constraint_atom(cur: &mut Cursor, alphabet_size: usize) -> Result<CountConstraint, ParseError> {
    if cur.eat_punct("!") {
        return Ok(CountConstraint::Not(Box::new(parse_constraint_atom(cur, alphabet_size)?)));
    }
    if cur.eat_punct("(") {
        let c = parse_constraint_or(cur, alphabet_size)?;
        cur.expect_punct(")")?;
        return Ok(c);
    }
    cur.expect_keyword("count")?;
    cur.expect_punct("(")?;
    let letter = parse_letter_name(cur, alphabet_size)?;
    cur.expect_punct(")")?;
    let to_u32 = |cur: &Cursor, n: BigInt| {
        u32::try_from(n).map_err(|_| cur.error("constant too large"))
    };
    if cur.eat_punct("==") {
        let n = cur.expect_uint()?;
        let n = to_u32(cur, n)?;
        Ok(CountConstraint::Exactly(letter, n))
    } else if cur.eat_punct(">=") {
        let n = cur.expect_uint()?;
        let n = to_u32(cur, n)?;
        Ok(CountConstraint::AtLeast(letter, n))
    } else if cur.eat_punct("<=") {
        let n = cur.expect_uint()?;
        let n = to_u32(cur, n)?;
        Ok(CountConstraint::AtMost(letter, n))
    } else if cur.eat_punct("%") {
        let k = cur.expect_uint()?;
        let k = to_u32(cur, k)?;
        cur.expect_punct("==")?;
        let r = cur.expect_uint()?;
        let r = to_u32(cur, r)?;
        if k == 0 {
            return Err(cur.error("modulus must be >= 1"));
        }
        if r >= k {
            return Err(cur.error("residue not below modulus"));
        }
        Ok(CountConstraint::Mod(letter, r, k))
    } else {
        Err(cur.error("expected '==', '>=', '<=' or '%'"))
    }
}

fn parse_constraint_and(cur: &mut Cursor, alphabet_size: usize) -> Result<CountConstraint, ParseError> {
    let mut c = parse_constraint_atom(cur, alphabet_size)?;
    while cur.eat_punct("&&") {
        let rhs = parse_constraint_atom(cur, alphabet_size)?;
        c = CountConstraint::And(Box::new(c), Box::new(rhs));
    }
    Ok(c)
}

fn parse_constraint_or(cur: &mut Cursor, alphabet_size: usize) -> Result<CountConstraint, ParseError> {
    let mut c = parse_constraint_and(cur, alphabet_size)?;
    while cur.eat_punct("||") {
        let rhs = parse_constraint_and(cur, alphabet_size)?;
        c = CountConstraint::Or(Box::new(c), Box::new(rhs));
    }
    Ok(c)
}

pub fn parse_constraint(text: &str, alphabet_size: usize) -> Result<CountConstraint, ParseError> {
    let mut cur = Cursor::new(text)?;
    let c = parse_constraint_or(&mut cur, alphabet_size)?;
    cur.expect_end()?;
    Ok(c)
}

// --- words and input series ---

/// Concatenated letter names, e.g. `a0a1a2`; `eps` is the empty word.
pub fn parse_word(text: &str, alphabet_size: usize) -> Result<Word, ParseError> {
    let trimmed = text.trim();
    if trimmed == "eps" || trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = trimmed;
    let mut col = 1usize;
    while !rest.is_empty() {
        let err = |col: usize, msg: String| ParseError { line: 1, col, message: msg };
        if !rest.starts_with('a') {
            return Err(err(col, format!("expected letter 'a<k>' at '{}'", rest)));
        }
        let digits: String = rest[1..].chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(err(col, "letter index missing".into()));
        }
        let idx: usize = digits
            .parse()
            .map_err(|_| err(col, "letter index too large".into()))?;
        if idx >= alphabet_size {
            return Err(err(col, format!("letter a{} outside alphabet of size {}", idx, alphabet_size)));
        }
        out.push(Letter(idx));
        let consumed = 1 + digits.len();
        rest = &rest[consumed..];
        col += consumed;
    }
    Ok(out)
}

/// `u1=[1,0,2]`: input index and coefficient slots (exponential convention).
pub fn parse_input_series(text: &str) -> Result<(usize, Vec<Rat>), ParseError> {
    let mut cur = Cursor::new(text)?;
    let name = cur.expect_ident()?;
    let idx = name
        .strip_prefix('u')
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| cur.error(format!("expected input name 'u<j>', got '{}'", name)))?;
    cur.expect_punct("=")?;
    cur.expect_punct("[")?;
    let mut slots = Vec::new();
    if cur.peek() != Some(&Tok::Punct("]")) {
        loop {
            slots.push(parse_rat(&mut cur)?);
            if !cur.eat_punct(",") {
                break;
            }
        }
    }
    cur.expect_punct("]")?;
    cur.expect_end()?;
    Ok((idx, slots))
}

/// Leading keyword of an input file: `system` or `automaton`.
pub enum FileKind {
    System,
    Automaton,
}

pub fn detect_file_kind(text: &str) -> Result<FileKind, ParseError> {
    let cur = Cursor::new(text)?;
    match cur.peek() {
        Some(Tok::Ident(s)) if s == "system" => Ok(FileKind::System),
        Some(Tok::Ident(s)) if s == "automaton" => Ok(FileKind::Automaton),
        _ => Err(cur.error("expected a 'system' or 'automaton' file")),
    }
}
