//! Reader and writer for the OpenQASM 2.0 subset used by the benchmarks.
//!
//! Accepted: one `qreg`, at most one `creg`, the gates
//! `x y z h s sdg t tdg rx ry rz cx cz swap`, `measure` and `barrier`.
//! Angle expressions may use `pi`, numeric literals, `+ - * /`, unary minus
//! and parentheses. Custom gate definitions, conditionals and resets are
//! rejected.

use std::fmt::{self, Write as _};

use thiserror::Error;

use super::{Circuit, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QasmErrorKind {
    Syntax(String),
    Unsupported(String),
    QubitOutOfRange { index: usize, size: usize },
}

impl fmt::Display for QasmErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QasmErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            QasmErrorKind::Unsupported(what) => write!(f, "unsupported construct: {what}"),
            QasmErrorKind::QubitOutOfRange { index, size } => {
                write!(f, "qubit index {index} out of range for register of size {size}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub kind: QasmErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Int(usize),
    Str(String),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(x) => write!(f, "`{x}`"),
            Tok::Int(x) => write!(f, "`{x}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);

    while i < chars.len() {
        let ch = chars[i];
        let (tl, tc) = (line, col);
        let err = |msg: String| QasmError { line: tl, col: tc, kind: QasmErrorKind::Syntax(msg) };

        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if ch == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let start = i;
        let tok = if ch.is_ascii_alphabetic() || ch == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let mut is_real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                is_real = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    is_real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            if is_real {
                Tok::Num(text.parse().map_err(|_| err(format!("bad number `{text}`")))?)
            } else {
                Tok::Int(text.parse().map_err(|_| err(format!("bad integer `{text}`")))?)
            }
        } else if ch == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if chars.get(i) != Some(&'"') {
                return Err(err("unterminated string".into()));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let p = match (two.as_str(), ch) {
                ("->", _) => "->",
                ("==", _) => "==",
                (_, ';') => ";",
                (_, ',') => ",",
                (_, '(') => "(",
                (_, ')') => ")",
                (_, '[') => "[",
                (_, ']') => "]",
                (_, '{') => "{",
                (_, '}') => "}",
                (_, '+') => "+",
                (_, '-') => "-",
                (_, '*') => "*",
                (_, '/') => "/",
                (_, '^') => "^",
                _ => return Err(err(format!("unexpected character `{ch}`"))),
            };
            i += p.len();
            Tok::Punct(p)
        };
        col += i - start;
        out.push(Token { tok, line: tl, col: tc });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Register {
    name: String,
    size: usize,
}

/// A register operand: a single index or the whole register.
enum Operand {
    Index(usize),
    Whole,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qreg: Option<Register>,
    creg: Option<Register>,
    gates: Vec<Gate>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, kind: QasmErrorKind) -> QasmError {
        QasmError { line: t.line, col: t.col, kind }
    }

    fn syntax(t: &Token, msg: impl Into<String>) -> QasmError {
        Self::error_at(t, QasmErrorKind::Syntax(msg.into()))
    }

    fn expect(&mut self, p: &'static str) -> Result<Token, QasmError> {
        let t = self.next();
        if t.tok == Tok::Punct(p) {
            Ok(t)
        } else {
            Err(Self::syntax(&t, format!("expected `{p}`, found {}", t.tok)))
        }
    }

    fn eat(&mut self, p: &'static str) -> bool {
        if self.peek().tok == Tok::Punct(p) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Token), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => Err(Self::syntax(&t, format!("expected identifier, found {other}"))),
        }
    }

    fn int(&mut self) -> Result<usize, QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok(v),
            ref other => Err(Self::syntax(&t, format!("expected integer, found {other}"))),
        }
    }

    fn program(&mut self) -> Result<(), QasmError> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == "OPENQASM") {
            self.next();
            let t = self.next();
            match t.tok {
                Tok::Num(2.0) => {}
                Tok::Int(2) => {}
                Tok::Num(_) | Tok::Int(_) => {
                    return Err(Self::error_at(
                        &t,
                        QasmErrorKind::Unsupported(format!("OPENQASM version {}", t.tok)),
                    ))
                }
                ref other => return Err(Self::syntax(&t, format!("expected version, found {other}"))),
            }
            self.expect(";")?;
        }
        while self.peek().tok != Tok::Eof {
            self.statement()?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let (word, t) = self.ident()?;
        match word.as_str() {
            "include" => {
                let s = self.next();
                if !matches!(s.tok, Tok::Str(_)) {
                    return Err(Self::syntax(&s, "expected file name"));
                }
                self.expect(";")?;
            }
            "qreg" | "creg" => {
                let (name, _) = self.ident()?;
                self.expect("[")?;
                let size = self.int()?;
                self.expect("]")?;
                self.expect(";")?;
                let slot = if word == "qreg" { &mut self.qreg } else { &mut self.creg };
                if slot.is_some() {
                    let what = if word == "qreg" { "quantum" } else { "classical" };
                    return Err(Self::error_at(
                        &t,
                        QasmErrorKind::Unsupported(format!("multiple {what} registers")),
                    ));
                }
                *slot = Some(Register { name, size });
            }
            "measure" => {
                let src = self.operand(false)?;
                self.expect("->")?;
                let dst = self.operand(true)?;
                self.expect(";")?;
                match (src, dst) {
                    (Operand::Index(q), Operand::Index(_)) => {
                        self.gates.push(Gate::one(GateKind::Measure, q))
                    }
                    (Operand::Whole, Operand::Whole) => {
                        let (qn, cn) = (self.qsize(), self.creg.as_ref().map_or(0, |r| r.size));
                        if qn != cn {
                            return Err(Self::syntax(&t, "register sizes differ in measure"));
                        }
                        for q in 0..qn {
                            self.gates.push(Gate::one(GateKind::Measure, q));
                        }
                    }
                    _ => return Err(Self::syntax(&t, "measure mixes register and indexed operands")),
                }
            }
            "barrier" => {
                let ops = self.operand_list()?;
                self.expect(";")?;
                let mut qubits = Vec::new();
                for op in ops {
                    match op {
                        Operand::Index(q) => qubits.push(q),
                        Operand::Whole => qubits.extend(0..self.qsize()),
                    }
                }
                qubits.sort_unstable();
                qubits.dedup();
                if !qubits.is_empty() {
                    self.gates.push(Gate::new(GateKind::Barrier, qubits));
                }
            }
            "gate" | "opaque" | "if" | "reset" => {
                return Err(Self::error_at(&t, QasmErrorKind::Unsupported(format!("`{word}`"))))
            }
            _ => self.gate(&word, &t)?,
        }
        Ok(())
    }

    fn qsize(&self) -> usize {
        self.qreg.as_ref().map_or(0, |r| r.size)
    }

    fn gate(&mut self, name: &str, at: &Token) -> Result<(), QasmError> {
        let params = if self.eat("(") {
            let mut ps = vec![self.expr()?];
            while self.eat(",") {
                ps.push(self.expr()?);
            }
            self.expect(")")?;
            ps
        } else {
            Vec::new()
        };

        let unsupported = || Self::error_at(at, QasmErrorKind::Unsupported(format!("gate `{name}`")));
        let (n_params, n_qubits) = match name {
            "rx" | "ry" | "rz" => (1, 1),
            "x" | "y" | "z" | "h" | "s" | "sdg" | "t" | "tdg" => (0, 1),
            "cx" | "cz" | "swap" => (0, 2),
            _ => return Err(unsupported()),
        };
        if params.len() != n_params {
            return Err(Self::syntax(
                at,
                format!("`{name}` takes {n_params} parameter(s), got {}", params.len()),
            ));
        }
        let kind = match name {
            "rx" => GateKind::Rx(params[0]),
            "ry" => GateKind::Ry(params[0]),
            "rz" => GateKind::Rz(params[0]),
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "h" => GateKind::H,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "cx" => GateKind::Cx,
            "cz" => GateKind::Cz,
            _ => GateKind::Swap,
        };

        let ops = self.operand_list()?;
        self.expect(";")?;
        if ops.len() != n_qubits {
            return Err(Self::syntax(at, format!("`{name}` takes {n_qubits} operand(s), got {}", ops.len())));
        }
        match (n_qubits, ops.as_slice()) {
            (1, [Operand::Index(q)]) => self.gates.push(Gate::one(kind, *q)),
            (1, [Operand::Whole]) => {
                for q in 0..self.qsize() {
                    self.gates.push(Gate::one(kind, q));
                }
            }
            (2, [Operand::Index(a), Operand::Index(b)]) => {
                if a == b {
                    return Err(Self::syntax(at, format!("`{name}` applied to the same qubit twice")));
                }
                self.gates.push(Gate::two(kind, *a, *b));
            }
            _ => {
                return Err(Self::error_at(
                    at,
                    QasmErrorKind::Unsupported(format!("register broadcast for `{name}`")),
                ))
            }
        }
        Ok(())
    }

    fn operand_list(&mut self) -> Result<Vec<Operand>, QasmError> {
        let mut ops = vec![self.operand(false)?];
        while self.eat(",") {
            ops.push(self.operand(false)?);
        }
        Ok(ops)
    }

    fn operand(&mut self, classical: bool) -> Result<Operand, QasmError> {
        let (name, t) = self.ident()?;
        let reg = if classical { &self.creg } else { &self.qreg };
        let size = match reg {
            Some(r) if r.name == name => r.size,
            _ => return Err(Self::syntax(&t, format!("undeclared register `{name}`"))),
        };
        if !self.eat("[") {
            return Ok(Operand::Whole);
        }
        let it = self.peek().clone();
        let index = self.int()?;
        self.expect("]")?;
        if index >= size {
            return Err(Self::error_at(&it, QasmErrorKind::QubitOutOfRange { index, size }));
        }
        Ok(Operand::Index(index))
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let start = self.peek().clone();
        let v = self.sum()?;
        if !v.is_finite() {
            return Err(Self::syntax(&start, "expression is not finite"));
        }
        Ok(v)
    }

    fn sum(&mut self) -> Result<f64, QasmError> {
        let mut acc = self.product()?;
        loop {
            if self.eat("+") {
                acc += self.product()?;
            } else if self.eat("-") {
                acc -= self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<f64, QasmError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat("*") {
                acc *= self.unary()?;
            } else if self.eat("/") {
                acc /= self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat("-") {
            return Ok(-self.unary()?);
        }
        let t = self.next();
        match &t.tok {
            Tok::Num(v) => Ok(*v),
            Tok::Int(v) => Ok(*v as f64),
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(s) => Err(Self::error_at(&t, QasmErrorKind::Unsupported(format!("identifier `{s}` in expression")))),
            Tok::Punct("(") => {
                let v = self.sum()?;
                self.expect(")")?;
                Ok(v)
            }
            other => Err(Self::syntax(&t, format!("expected expression, found {other}"))),
        }
    }
}

/// Parses QASM source into a circuit named `name`.
pub fn parse_qasm_named(src: &str, name: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, qreg: None, creg: None, gates: Vec::new() };
    p.program()?;
    let Some(qreg) = p.qreg else {
        let t = p.peek().clone();
        return Err(Parser::syntax(&t, "no quantum register declared"));
    };
    Ok(Circuit { name: name.to_string(), num_qubits: qreg.size, gates: p.gates })
}

pub fn parse_qasm(src: &str) -> Result<Circuit, QasmError> {
    parse_qasm_named(src, "circuit")
}

/// Writes a circuit in the accepted subset. Angles are printed with enough
/// digits to parse back to the identical value.
pub fn to_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits);
    if c.gates.iter().any(|g| g.kind == GateKind::Measure) {
        let _ = writeln!(out, "creg c[{}];", c.num_qubits);
    }
    for g in &c.gates {
        let qs: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        match g.kind {
            GateKind::Measure => {
                let _ = writeln!(out, "measure q[{0}] -> c[{0}];", g.qubits[0]);
            }
            kind => match kind.angle() {
                Some(a) => {
                    let _ = writeln!(out, "{}({a:?}) {};", kind.name(), qs.join(","));
                }
                None => {
                    let _ = writeln!(out, "{} {};", kind.name(), qs.join(","));
                }
            },
        }
    }
    out
}
