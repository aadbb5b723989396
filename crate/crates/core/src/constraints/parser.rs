//! Lexer and recursive-descent parser for constraint files.
//!
//! ```text
//! doc       := { "context" Name { "inv" Name ":" expr } }
//! expr      := "let" Name [":" Name] "=" expr expr | or
//! or        := and { "or" and }
//! and       := implies { "and" implies }
//! implies   := unary { "implies" unary }       (right-associative)
//! unary     := "not" unary | cmp
//! cmp       := postfix [ ("=" | "<" | "<=" | ">" | ">=") postfix ]
//! postfix   := primary { "." Name | "." "oclIsTypeOf" "(" Name ")"
//!                      | "." "oclAsType" "(" Name ")" | arrow collop }
//! arrow     := "->" | "-->"
//! collop    := "size" "(" ")" | "first" "(" ")"
//!            | ("forAll" | "exists") "(" Name "|" expr ")"
//! primary   := "self" | "true" | "false" | Int | Name | "(" expr ")"
//! ```
//!
//! `implies` binds tighter than `and` and `or`, so
//! `a <= n and a = n implies b` reads as `a <= n and (a = n implies b)`.

use super::ast::{BinOp, CollOp, ConstraintDoc, Expr, Invariant};
use super::ConstraintError;

const KEYWORDS: [&str; 16] = [
    "context",
    "inv",
    "let",
    "and",
    "or",
    "not",
    "implies",
    "forAll",
    "exists",
    "size",
    "first",
    "oclIsTypeOf",
    "oclAsType",
    "self",
    "true",
    "false",
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Dot,
    Arrow,
    LParen,
    RParen,
    Bar,
    Colon,
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ConstraintError {
    ConstraintError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ConstraintError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        // `--` line comments, but not the `-->` arrow
        if c == '-' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) != Some(&'>') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(1, &mut i, &mut col);
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i, &mut col);
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits
                .parse()
                .map_err(|_| syntax(start_line, start_col, "integer literal out of range"))?;
            Tok::Int(value)
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('-', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::Arrow, 3),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('.', _) => (Tok::Dot, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('|', _) => (Tok::Bar, 1),
                (':', _) => (Tok::Colon, 1),
                ('=', _) => (Tok::Eq, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                _ => {
                    return Err(syntax(line, col, format!("unexpected character `{c}`")));
                }
            };
            advance(len, &mut i, &mut col);
            tok
        };
        tokens.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_tok(&self) -> &Tok {
        &self.peek().tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> ConstraintError {
        let t = self.peek();
        syntax(
            t.line,
            t.column,
            format!("expected {expected}, found {}", t.tok.describe()),
        )
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek_tok(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ConstraintError> {
        if *self.peek_tok() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(&tok.describe()))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ConstraintError> {
        if self.at_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(&format!("`{kw}`")))
        }
    }

    /// A non-keyword identifier.
    fn name(&mut self, what: &str) -> Result<String, ConstraintError> {
        match self.peek_tok() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn doc(&mut self) -> Result<ConstraintDoc, ConstraintError> {
        let mut invariants = Vec::new();
        while *self.peek_tok() != Tok::Eof {
            self.expect_keyword("context")?;
            let context = self.name("a type name")?;
            while self.at_keyword("inv") {
                self.bump();
                let name = self.name("an invariant name")?;
                self.expect(Tok::Colon)?;
                let body = self.expr()?;
                invariants.push(Invariant {
                    context: context.clone(),
                    name,
                    body,
                });
            }
            if !matches!(self.peek_tok(), Tok::Eof) && !self.at_keyword("context") {
                return Err(self.error_here("`inv`, `context` or end of input"));
            }
        }
        Ok(ConstraintDoc { invariants })
    }

    fn expr(&mut self) -> Result<Expr, ConstraintError> {
        if self.at_keyword("let") {
            self.bump();
            let name = self.name("a variable name")?;
            let ty = if *self.peek_tok() == Tok::Colon {
                self.bump();
                Some(self.name("a type name")?)
            } else {
                None
            };
            self.expect(Tok::Eq)?;
            let value = self.expr()?;
            let body = self.expr()?;
            return Ok(Expr::Let {
                name,
                ty,
                value: Box::new(value),
                body: Box::new(body),
            });
        }
        self.or()
    }

    fn or(&mut self) -> Result<Expr, ConstraintError> {
        let mut lhs = self.and()?;
        while self.at_keyword("or") {
            self.bump();
            let rhs = self.and()?;
            lhs = Expr::binary(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, ConstraintError> {
        let mut lhs = self.implies()?;
        while self.at_keyword("and") {
            self.bump();
            let rhs = self.implies()?;
            lhs = Expr::binary(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Expr, ConstraintError> {
        let lhs = self.unary()?;
        if self.at_keyword("implies") {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Expr::binary(BinOp::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ConstraintError> {
        if self.at_keyword("not") {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Not(Box::new(inner)));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr, ConstraintError> {
        let lhs = self.postfix()?;
        let op = match self.peek_tok() {
            Tok::Eq => BinOp::Eq,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.postfix()?;
        Ok(Expr::binary(op, lhs, rhs))
    }

    fn postfix(&mut self) -> Result<Expr, ConstraintError> {
        let mut base = self.primary()?;
        loop {
            match self.peek_tok() {
                Tok::Dot => {
                    self.bump();
                    if self.at_keyword("oclIsTypeOf") || self.at_keyword("oclAsType") {
                        let is_test = self.at_keyword("oclIsTypeOf");
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let t = self.name("a type name")?;
                        self.expect(Tok::RParen)?;
                        base = if is_test {
                            Expr::IsTypeOf(Box::new(base), t)
                        } else {
                            Expr::AsType(Box::new(base), t)
                        };
                    } else {
                        let name = self.name("an edge type name")?;
                        base = Expr::Nav(Box::new(base), name);
                    }
                }
                Tok::Arrow => {
                    self.bump();
                    let op = self.collection_op()?;
                    base = Expr::Coll(Box::new(base), op);
                }
                _ => return Ok(base),
            }
        }
    }

    fn collection_op(&mut self) -> Result<CollOp, ConstraintError> {
        let Tok::Ident(op) = self.peek_tok().clone() else {
            return Err(self.error_here("a collection operation"));
        };
        match op.as_str() {
            "size" | "first" => {
                self.bump();
                self.expect(Tok::LParen)?;
                self.expect(Tok::RParen)?;
                Ok(if op == "size" {
                    CollOp::Size
                } else {
                    CollOp::First
                })
            }
            "forAll" | "exists" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let var = self.name("an iterator variable")?;
                self.expect(Tok::Bar)?;
                let body = Box::new(self.expr()?);
                self.expect(Tok::RParen)?;
                Ok(if op == "forAll" {
                    CollOp::ForAll(var, body)
                } else {
                    CollOp::Exists(var, body)
                })
            }
            _ => Err(self.error_here("`size`, `first`, `forAll` or `exists`")),
        }
    }

    fn primary(&mut self) -> Result<Expr, ConstraintError> {
        match self.peek_tok().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(Expr::Int(i))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(s) => match s.as_str() {
                "self" => {
                    self.bump();
                    Ok(Expr::SelfRef)
                }
                "true" | "false" => {
                    self.bump();
                    Ok(Expr::Bool(s == "true"))
                }
                _ if KEYWORDS.contains(&s.as_str()) => Err(self.error_here("an expression")),
                _ => {
                    self.bump();
                    Ok(Expr::Var(s))
                }
            },
            _ => Err(self.error_here("an expression")),
        }
    }
}

/// Parses a constraint file.
pub fn parse_constraints(text: &str) -> Result<ConstraintDoc, ConstraintError> {
    let tokens = lex(text)?;
    Parser { tokens, pos: 0 }.doc()
}

/// Parses a single expression (no surrounding `context`/`inv`).
pub fn parse_expr(text: &str) -> Result<Expr, ConstraintError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let e = parser.expr()?;
    if *parser.peek_tok() != Tok::Eof {
        return Err(parser.error_here("end of input"));
    }
    Ok(e)
}
