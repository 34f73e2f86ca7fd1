use serde::Serialize;

use crate::error::{PqlError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Keyword {
    Select,
    From,
    Where,
    And,
    Or,
    Not,
    Contains,
    In,
    Order,
    By,
    Asc,
    Desc,
    Limit,
}

impl Keyword {
    const ALL: [(Keyword, &'static str); 13] = [
        (Keyword::Select, "SELECT"),
        (Keyword::From, "FROM"),
        (Keyword::Where, "WHERE"),
        (Keyword::And, "AND"),
        (Keyword::Or, "OR"),
        (Keyword::Not, "NOT"),
        (Keyword::Contains, "CONTAINS"),
        (Keyword::In, "IN"),
        (Keyword::Order, "ORDER"),
        (Keyword::By, "BY"),
        (Keyword::Asc, "ASC"),
        (Keyword::Desc, "DESC"),
        (Keyword::Limit, "LIMIT"),
    ];

    fn lookup(word: &str) -> Option<Keyword> {
        Self::ALL
            .iter()
            .find(|(_, w)| w.eq_ignore_ascii_case(word))
            .map(|(k, _)| *k)
    }

    pub fn as_str(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(k, _)| *k == self)
            .map(|(_, w)| *w)
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symbol {
    Star,
    Comma,
    LParen,
    RParen,
    Eq,
    Ne,
}

impl Symbol {
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::Star => "*",
            Symbol::Comma => ",",
            Symbol::LParen => "(",
            Symbol::RParen => ")",
            Symbol::Eq => "=",
            Symbol::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TokenKind {
    Keyword(Keyword),
    Identifier,
    /// Carries the unescaped value; the token text keeps the quotes.
    String(String),
    Integer(u64),
    Symbol(Symbol),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Keyword(k) => format!("keyword {}", k.as_str()),
            TokenKind::Identifier => format!("identifier {}", self.text),
            TokenKind::String(_) => format!("string {}", self.text),
            TokenKind::Integer(_) => format!("integer {}", self.text),
            TokenKind::Symbol(s) => format!("'{}'", s.as_str()),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits query text into tokens with byte-offset spans.
pub fn tokenize(text: &str) -> Result<Vec<Token>, PqlError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();

    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }

        let kind = if is_ident_start(c) {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !is_ident_continue(c) {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            let word = &text[start..end];
            let kind = Keyword::lookup(word).map_or(TokenKind::Identifier, TokenKind::Keyword);
            tokens.push(Token {
                kind,
                text: word.to_string(),
                span: (start, end),
            });
            continue;
        } else if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = i + 1;
                chars.next();
            }
            let digits = &text[start..end];
            let n = digits.parse::<u64>().map_err(|_| PqlError::Lex {
                message: format!("integer {digits} is out of range"),
                span: (start, end),
            })?;
            tokens.push(Token {
                kind: TokenKind::Integer(n),
                text: digits.to_string(),
                span: (start, end),
            });
            continue;
        } else if c == '\'' || c == '"' {
            chars.next();
            let mut value = String::new();
            let mut end = None;
            while let Some((i, ch)) = chars.next() {
                if ch == '\\' {
                    match chars.next() {
                        Some((_, escaped)) => value.push(escaped),
                        None => break,
                    }
                } else if ch == c {
                    end = Some(i + 1);
                    break;
                } else {
                    value.push(ch);
                }
            }
            let end = end.ok_or_else(|| PqlError::Lex {
                message: "unterminated string".into(),
                span: (start, text.len()),
            })?;
            tokens.push(Token {
                kind: TokenKind::String(value),
                text: text[start..end].to_string(),
                span: (start, end),
            });
            continue;
        } else {
            chars.next();
            match c {
                '*' => Symbol::Star,
                ',' => Symbol::Comma,
                '(' => Symbol::LParen,
                ')' => Symbol::RParen,
                '=' => Symbol::Eq,
                '!' if chars.peek().is_some_and(|(_, n)| *n == '=') => {
                    chars.next();
                    Symbol::Ne
                }
                other => {
                    return Err(PqlError::Lex {
                        message: format!("illegal character {other:?}"),
                        span: (start, start + other.len_utf8()),
                    })
                }
            }
        };
        let len = kind.as_str().len();
        tokens.push(Token {
            kind: TokenKind::Symbol(kind),
            text: kind.as_str().to_string(),
            span: (start, start + len),
        });
    }
    Ok(tokens)
}
