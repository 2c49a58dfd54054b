//! Atom-set expressions naming elements of a Boolean algebra.
//!
//! ```text
//! expr  := term (('|' | '-') term)*
//! term  := unary ('&' unary)*
//! unary := '!' unary | primary
//! primary := IDENT | 'top' | 'bottom' | '{' [IDENT (',' IDENT)*] '}' | '(' expr ')'
//! ```
//!
//! `|` is join, `&` meet, `-` difference and `!` complement. Identifiers are
//! atom names: letters, digits and `_ . : + '`.

use std::fmt;

use catmeas_core::boolalg::{BoolAlg, Element};

/// Nesting cap, so hostile input cannot exhaust the stack.
const MAX_DEPTH: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    /// Character offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at offset {})", self.message, self.offset)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Top,
    Bottom,
    Atom { name: String, offset: usize },
    Set(Vec<(String, usize)>),
    Not(Box<Expr>),
    Meet(Box<Expr>, Box<Expr>),
    Join(Box<Expr>, Box<Expr>),
    Minus(Box<Expr>, Box<Expr>),
}

pub fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | ':' | '+' | '\'')
}

/// Whether `name` can be written as a single identifier.
pub fn is_identifier(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_ident_char) && name != "top" && name != "bottom"
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(char),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    depth: usize,
}

fn lex(input: &str) -> Result<(Vec<(Tok, usize)>, usize), ExprError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "|&-!(){},".contains(c) {
            toks.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ExprError { offset: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok((toks, chars.len()))
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn error(&self, message: String) -> ExprError {
        ExprError { offset: self.offset(), message }
    }

    fn descend(&mut self) -> Result<(), ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply".into()));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        self.descend()?;
        let mut left = self.term()?;
        loop {
            if self.eat('|') {
                left = Expr::Join(Box::new(left), Box::new(self.term()?));
            } else if self.eat('-') {
                left = Expr::Minus(Box::new(left), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut left = self.unary()?;
        while self.eat('&') {
            left = Expr::Meet(Box::new(left), Box::new(self.unary()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('!') {
            self.descend()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Not(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(match name.as_str() {
                    "top" => Expr::Top,
                    "bottom" => Expr::Bottom,
                    _ => Expr::Atom { name, offset },
                })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('{')) => {
                self.pos += 1;
                let mut names = Vec::new();
                if self.eat('}') {
                    return Ok(Expr::Set(names));
                }
                loop {
                    let at = self.offset();
                    match self.peek().cloned() {
                        Some(Tok::Ident(name)) => {
                            self.pos += 1;
                            names.push((name, at));
                        }
                        _ => return Err(self.error("expected an atom name".into())),
                    }
                    if self.eat('}') {
                        return Ok(Expr::Set(names));
                    }
                    self.expect(',')?;
                }
            }
            Some(Tok::Sym(c)) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of expression".into())),
        }
    }
}

/// Parses without resolving atom names.
pub fn parse_expr(input: &str) -> Result<Expr, ExprError> {
    let (toks, end) = lex(input)?;
    let mut p = Parser { toks, pos: 0, end, depth: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input".into()));
    }
    Ok(e)
}

impl Expr {
    pub fn eval(&self, algebra: &BoolAlg) -> Result<Element, ExprError> {
        let atom = |name: &str, offset: usize| {
            algebra
                .atom_index(name)
                .map(Element::atom)
                .ok_or_else(|| ExprError { offset, message: format!("unknown atom `{name}`") })
        };
        Ok(match self {
            Expr::Top => algebra.top(),
            Expr::Bottom => Element::BOTTOM,
            Expr::Atom { name, offset } => atom(name, *offset)?,
            Expr::Set(names) => {
                let mut e = Element::BOTTOM;
                for (name, offset) in names {
                    e = e.join(atom(name, *offset)?);
                }
                e
            }
            Expr::Not(a) => algebra.complement(a.eval(algebra)?),
            Expr::Meet(a, b) => a.eval(algebra)?.meet(b.eval(algebra)?),
            Expr::Join(a, b) => a.eval(algebra)?.join(b.eval(algebra)?),
            Expr::Minus(a, b) => a.eval(algebra)?.minus(b.eval(algebra)?),
        })
    }
}

pub fn parse_element(algebra: &BoolAlg, input: &str) -> Result<Element, ExprError> {
    parse_expr(input)?.eval(algebra)
}

/// Canonical spelling: `{a,b}` with atoms in algebra order.
pub fn format_element(algebra: &BoolAlg, e: Element) -> String {
    format!("{{{}}}", algebra.atom_names(e).join(","))
}
