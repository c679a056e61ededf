//! Lexer and recursive descent parser for `.pun` source.
//!
//! Identifiers may contain `-` when it is surrounded by identifier
//! characters, so `add-is-commutative` is one token while `m - n` is three
//! (and `m-n` is a single identifier: kebab-case names win over glued
//! subtraction). `--` outside an identifier starts a comment that runs to
//! the end of the line. Every declaration is terminated by `.`, and in a
//! property header the first `.` after the argument list separates the
//! header from the body.

use std::fmt;

use crate::ast::{BinOp, Declaration, Pattern, Program, Term, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourcePos {
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub pos: SourcePos,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    fn new(pos: SourcePos, expected: impl Into<String>, found: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            expected: expected.into(),
            found: found.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}: expected {}, found {}",
            self.pos, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Ident(String),
    Int(i64),
    // Keywords.
    Property,
    Let,
    In,
    If,
    Then,
    Else,
    Case,
    Of,
    Rec,
    Fst,
    Snd,
    Leaf,
    Node,
    True,
    False,
    TyInteger,
    TyBoolean,
    TyUnit,
    TyBst,
    // Operators and punctuation.
    Plus,
    Minus,
    Leq,
    Lt,
    Gt,
    EqEq,
    Equals,
    Arrow,
    Dot,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Colon,
    Backslash,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Int(n) => format!("integer literal `{n}`"),
            Token::Property => "`property`".into(),
            Token::Let => "`let`".into(),
            Token::In => "`in`".into(),
            Token::If => "`if`".into(),
            Token::Then => "`then`".into(),
            Token::Else => "`else`".into(),
            Token::Case => "`case`".into(),
            Token::Of => "`of`".into(),
            Token::Rec => "`rec`".into(),
            Token::Fst => "`fst`".into(),
            Token::Snd => "`snd`".into(),
            Token::Leaf => "`leaf`".into(),
            Token::Node => "`node`".into(),
            Token::True => "`true`".into(),
            Token::False => "`false`".into(),
            Token::TyInteger => "`integer`".into(),
            Token::TyBoolean => "`boolean`".into(),
            Token::TyUnit => "`unit`".into(),
            Token::TyBst => "`bst`".into(),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Leq => "`<=`".into(),
            Token::Lt => "`<`".into(),
            Token::Gt => "`>`".into(),
            Token::EqEq => "`==`".into(),
            Token::Equals => "`=`".into(),
            Token::Arrow => "`->`".into(),
            Token::Dot => "`.`".into(),
            Token::Comma => "`,`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::LBracket => "`[`".into(),
            Token::RBracket => "`]`".into(),
            Token::Semi => "`;`".into(),
            Token::Colon => "`:`".into(),
            Token::Backslash => "`\\`".into(),
        }
    }
}

fn keyword(word: &str) -> Option<Token> {
    Some(match word {
        "property" => Token::Property,
        "let" => Token::Let,
        "in" => Token::In,
        "if" => Token::If,
        "then" => Token::Then,
        "else" => Token::Else,
        "case" => Token::Case,
        "of" => Token::Of,
        "rec" => Token::Rec,
        "fst" => Token::Fst,
        "snd" => Token::Snd,
        "leaf" => Token::Leaf,
        "node" => Token::Node,
        "true" => Token::True,
        "false" => Token::False,
        "integer" => Token::TyInteger,
        "boolean" => Token::TyBoolean,
        "unit" => Token::TyUnit,
        "bst" => Token::TyBst,
        _ => return None,
    })
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Split source text into tokens with positions.
pub fn tokenize(source: &str) -> Result<Vec<(Token, SourcePos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0;
    let mut line = 1u32;
    let mut column = 1u32;

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = SourcePos { line, column };
        if c.is_whitespace() {
            advance!();
            continue;
        }
        // Comments: `--` to end of line. Inside identifiers the dashes have
        // already been consumed, and no valid program contains `--` as
        // operators, so this never shadows real syntax.
        if c == '-' && i + 1 < chars.len() && chars[i + 1] == '-' {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while i < chars.len() {
                let ch = chars[i];
                if is_ident_char(ch) {
                    word.push(ch);
                    advance!();
                } else if ch == '-'
                    && i + 1 < chars.len()
                    && is_ident_char(chars[i + 1])
                    && i > 0
                    && is_ident_char(chars[i - 1])
                {
                    word.push('-');
                    advance!();
                } else {
                    break;
                }
            }
            out.push((keyword(&word).unwrap_or(Token::Ident(word)), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                advance!();
            }
            let n: i64 = digits.parse().map_err(|_| {
                ParseError::new(pos, "an integer literal that fits 64 bits", digits.clone())
            })?;
            out.push((Token::Int(n), pos));
            continue;
        }
        let two = if i + 1 < chars.len() {
            Some((chars[i], chars[i + 1]))
        } else {
            None
        };
        let tok = match two {
            Some(('<', '=')) => {
                advance!();
                advance!();
                Token::Leq
            }
            Some(('=', '=')) => {
                advance!();
                advance!();
                Token::EqEq
            }
            Some(('-', '>')) => {
                advance!();
                advance!();
                Token::Arrow
            }
            _ => {
                let single = match c {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '<' => Token::Lt,
                    '>' => Token::Gt,
                    '=' => Token::Equals,
                    '.' => Token::Dot,
                    ',' => Token::Comma,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    '[' => Token::LBracket,
                    ']' => Token::RBracket,
                    ';' => Token::Semi,
                    ':' => Token::Colon,
                    '\\' => Token::Backslash,
                    other => {
                        return Err(ParseError::new(
                            pos,
                            "a token",
                            format!("unknown character `{other}`"),
                        ))
                    }
                };
                advance!();
                single
            }
        };
        out.push((tok, pos));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, SourcePos)>,
    at: usize,
}

impl Parser {
    fn new(tokens: Vec<(Token, SourcePos)>) -> Parser {
        Parser { tokens, at: 0 }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> SourcePos {
        self.tokens
            .get(self.at)
            .or_else(|| self.tokens.last())
            .map(|(_, p)| *p)
            .unwrap_or(SourcePos { line: 1, column: 1 })
    }

    fn found(&self) -> String {
        match self.tokens.get(self.at) {
            Some((t, _)) => t.describe(),
            None => "end of input".into(),
        }
    }

    fn next(&mut self, expected: &str) -> Result<Token, ParseError> {
        match self.tokens.get(self.at) {
            Some((t, _)) => {
                let t = t.clone();
                self.at += 1;
                Ok(t)
            }
            None => Err(self.err(expected)),
        }
    }

    fn err(&self, expected: impl Into<String>) -> ParseError {
        ParseError::new(self.pos(), expected, self.found())
    }

    fn expect(&mut self, tok: Token) -> Result<(), ParseError> {
        let got = self.next(&tok.describe())?;
        if got == tok {
            Ok(())
        } else {
            self.at -= 1;
            Err(self.err(tok.describe()))
        }
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token::Ident(name)) => {
                let name = name.clone();
                self.at += 1;
                Ok(name)
            }
            _ => Err(self.err(what)),
        }
    }

    // --- declarations ---

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut declarations = Vec::new();
        let mut signatures = std::collections::BTreeSet::new();
        let mut definitions = std::collections::BTreeSet::new();
        let mut properties = std::collections::BTreeSet::new();
        while self.peek().is_some() {
            let pos = self.pos();
            let decl = self.declaration()?;
            match &decl {
                Declaration::Signature { name, .. } => {
                    if !signatures.insert(name.clone()) {
                        return Err(ParseError::new(
                            pos,
                            "distinct top-level names",
                            format!("a second signature for `{name}`"),
                        ));
                    }
                }
                Declaration::Definition { name, .. } => {
                    if !signatures.contains(name) {
                        return Err(ParseError::new(
                            pos,
                            format!("a signature for `{name}` before its definition"),
                            format!("definition of `{name}` without a signature"),
                        ));
                    }
                    if !definitions.insert(name.clone()) {
                        return Err(ParseError::new(
                            pos,
                            "distinct top-level names",
                            format!("a second definition of `{name}`"),
                        ));
                    }
                }
                Declaration::Property { name, .. } => {
                    if signatures.contains(name) || !properties.insert(name.clone()) {
                        return Err(ParseError::new(
                            pos,
                            "distinct top-level names",
                            format!("a second declaration named `{name}`"),
                        ));
                    }
                }
            }
            declarations.push(decl);
        }
        Ok(Program { declarations })
    }

    fn declaration(&mut self) -> Result<Declaration, ParseError> {
        if self.eat(&Token::Property) {
            let name = self.ident("a property name")?;
            let mut args = Vec::new();
            while let Some(Token::Ident(_)) = self.peek() {
                let pos = self.pos();
                let arg = self.ident("an argument name")?;
                if args.contains(&arg) {
                    return Err(ParseError::new(
                        pos,
                        "distinct argument names",
                        format!("`{arg}` twice"),
                    ));
                }
                args.push(arg);
            }
            self.expect(Token::Dot)?;
            let body = self.term()?;
            self.expect(Token::Dot)?;
            return Ok(Declaration::Property { name, args, body });
        }
        let name = self.ident("a declaration (signature, definition, or property)")?;
        if self.eat(&Token::Colon) {
            let ty = self.ty()?;
            self.expect(Token::Dot)?;
            return Ok(Declaration::Signature { name, ty });
        }
        let mut params = Vec::new();
        while let Some(Token::Ident(_)) = self.peek() {
            let pos = self.pos();
            let param = self.ident("a parameter name")?;
            if params.contains(&param) {
                return Err(ParseError::new(
                    pos,
                    "distinct parameter names",
                    format!("`{param}` twice"),
                ));
            }
            params.push(param);
        }
        self.expect(Token::Equals)?;
        let body = self.term()?;
        self.expect(Token::Dot)?;
        Ok(Declaration::Definition { name, params, body })
    }

    // --- types ---

    fn ty(&mut self) -> Result<Type, ParseError> {
        let lhs = self.btype()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.ty()?;
            Ok(Type::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn btype(&mut self) -> Result<Type, ParseError> {
        if self.eat(&Token::TyBst) {
            let key = self.atype()?;
            let val = self.atype()?;
            return Ok(Type::bst(key, val));
        }
        self.atype()
    }

    fn atype(&mut self) -> Result<Type, ParseError> {
        match self.next("a type")? {
            Token::TyInteger => Ok(Type::Int),
            Token::TyBoolean => Ok(Type::Bool),
            Token::TyUnit => Ok(Type::Unit),
            Token::LParen => {
                let first = self.ty()?;
                if self.eat(&Token::Comma) {
                    let second = self.ty()?;
                    self.expect(Token::RParen)?;
                    Ok(Type::pair(first, second))
                } else {
                    self.expect(Token::RParen)?;
                    Ok(first)
                }
            }
            _ => {
                self.at -= 1;
                Err(self.err("a type"))
            }
        }
    }

    // --- terms ---

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Token::Backslash) => {
                self.at += 1;
                let param = self.ident("a lambda parameter")?;
                // Both `\x . t` and `\x -> t` are accepted.
                if !self.eat(&Token::Dot) {
                    self.expect(Token::Arrow)?;
                }
                let body = self.term()?;
                Ok(Term::lambda(param, body))
            }
            Some(Token::Let) => {
                self.at += 1;
                let name = self.ident("a let binder")?;
                self.expect(Token::Equals)?;
                let bound = self.term()?;
                self.expect(Token::In)?;
                let body = self.term()?;
                Ok(Term::let_(name, bound, body))
            }
            Some(Token::If) => {
                self.at += 1;
                let cond = self.term()?;
                self.expect(Token::Then)?;
                let then = self.term()?;
                self.expect(Token::Else)?;
                let els = self.term()?;
                Ok(Term::if_(cond, then, els))
            }
            Some(Token::Rec) => {
                self.at += 1;
                let name = self.ident("a rec binder")?;
                self.expect(Token::Dot)?;
                let body = self.term()?;
                Ok(Term::rec(name, body))
            }
            Some(Token::Case) => {
                self.at += 1;
                let scrutinee = self.term()?;
                self.expect(Token::Of)?;
                self.expect(Token::Semi)?;
                self.expect(Token::Leaf)?;
                self.expect(Token::Arrow)?;
                let leaf_branch = self.term()?;
                self.expect(Token::Semi)?;
                let pattern = self.pattern()?;
                check_pattern_linear(&pattern, self.pos())?;
                self.expect(Token::Arrow)?;
                let node_branch = self.term()?;
                Ok(Term::case(scrutinee, leaf_branch, pattern, node_branch))
            }
            _ => self.cmp(),
        }
    }

    fn cmp(&mut self) -> Result<Term, ParseError> {
        let lhs = self.arith()?;
        let op = match self.peek() {
            Some(Token::Leq) => BinOp::Leq,
            Some(Token::Lt) => BinOp::Lt,
            Some(Token::Gt) => BinOp::Gt,
            Some(Token::EqEq) => BinOp::Eq,
            _ => return Ok(lhs),
        };
        self.at += 1;
        let rhs = self.arith()?;
        Ok(Term::binop(op, lhs, rhs))
    }

    fn arith(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.app()?;
        loop {
            let op = match self.peek() {
                Some(Token::Plus) => BinOp::Plus,
                Some(Token::Minus) => BinOp::Minus,
                _ => return Ok(acc),
            };
            self.at += 1;
            let rhs = self.app()?;
            acc = Term::binop(op, acc, rhs);
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            acc = Term::app(acc, arg);
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Token::Int(_)
                    | Token::True
                    | Token::False
                    | Token::Ident(_)
                    | Token::Leaf
                    | Token::LParen
                    | Token::LBracket
                    | Token::Fst
                    | Token::Snd
            )
        )
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.next("a term")? {
            Token::Int(n) => Ok(Term::Num(n)),
            Token::True => Ok(Term::Bool(true)),
            Token::False => Ok(Term::Bool(false)),
            Token::Ident(name) => Ok(Term::Var(name)),
            Token::Leaf => Ok(Term::Leaf),
            Token::Fst => {
                self.expect(Token::LParen)?;
                let arg = self.term()?;
                self.expect(Token::RParen)?;
                Ok(Term::Fst(Box::new(arg)))
            }
            Token::Snd => {
                self.expect(Token::LParen)?;
                let arg = self.term()?;
                self.expect(Token::RParen)?;
                Ok(Term::Snd(Box::new(arg)))
            }
            Token::LParen => {
                if self.eat(&Token::RParen) {
                    return Ok(Term::Unit);
                }
                let first = self.term()?;
                if self.eat(&Token::Comma) {
                    let second = self.term()?;
                    self.expect(Token::RParen)?;
                    Ok(Term::pair(first, second))
                } else {
                    self.expect(Token::RParen)?;
                    Ok(first)
                }
            }
            Token::LBracket => {
                self.expect(Token::Node)?;
                let l = self.atom()?;
                let k = self.atom()?;
                let v = self.atom()?;
                let r = self.atom()?;
                self.expect(Token::RBracket)?;
                Ok(Term::node(l, k, v, r))
            }
            _ => {
                self.at -= 1;
                Err(self.err("a term"))
            }
        }
    }

    // --- patterns ---

    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        match self.next("a pattern")? {
            Token::Int(n) => Ok(Pattern::Const(Box::new(Term::Num(n)))),
            Token::True => Ok(Pattern::Const(Box::new(Term::Bool(true)))),
            Token::False => Ok(Pattern::Const(Box::new(Term::Bool(false)))),
            Token::Ident(name) => Ok(Pattern::Var(name)),
            Token::Leaf => Ok(Pattern::Leaf),
            Token::LParen => {
                if self.eat(&Token::RParen) {
                    return Ok(Pattern::Const(Box::new(Term::Unit)));
                }
                let first = self.pattern()?;
                self.expect(Token::Comma)?;
                let second = self.pattern()?;
                self.expect(Token::RParen)?;
                Ok(Pattern::Pair(Box::new(first), Box::new(second)))
            }
            Token::LBracket => {
                self.expect(Token::Node)?;
                let l = self.pattern()?;
                let k = self.pattern()?;
                let v = self.pattern()?;
                let r = self.pattern()?;
                self.expect(Token::RBracket)?;
                Ok(Pattern::Node(
                    Box::new(l),
                    Box::new(k),
                    Box::new(v),
                    Box::new(r),
                ))
            }
            _ => {
                self.at -= 1;
                Err(self.err("a pattern"))
            }
        }
    }
}

fn check_pattern_linear(pattern: &Pattern, pos: SourcePos) -> Result<(), ParseError> {
    let mut seen = std::collections::BTreeSet::new();
    for name in pattern.binders() {
        if !seen.insert(name) {
            return Err(ParseError::new(
                pos,
                "distinct variable names within the pattern",
                format!("`{name}` bound twice"),
            ));
        }
    }
    Ok(())
}

/// Parse a whole program.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(source)?;
    Parser::new(tokens).program()
}

/// Parse a single term, requiring all input to be consumed.
pub fn parse_term(source: &str) -> Result<Term, ParseError> {
    let tokens = tokenize(source)?;
    let mut p = Parser::new(tokens);
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(p.err("end of input"));
    }
    Ok(t)
}
