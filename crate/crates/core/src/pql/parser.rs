use super::ast::{CompareOp, Direction, Expr, Field, Literal, OrderBy, Projection, Query};
use super::lexer::{tokenize, Keyword, Symbol, Token, TokenKind};
use crate::error::{PqlError, Span};

pub const TABLE_NAME: &str = "plants";

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eof_span(&self) -> Span {
        (self.source.len(), self.source.len())
    }

    fn error(&self, expected: &str) -> PqlError {
        match self.peek() {
            Some(t) => PqlError::Parse {
                message: format!("expected {expected}, found {}", t.describe()),
                span: t.span,
            },
            None => PqlError::Parse {
                message: format!("expected {expected}, found end of query"),
                span: self.eof_span(),
            },
        }
    }

    fn at_keyword(&self, kw: Keyword) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Keyword(k), .. }) if *k == kw)
    }

    fn at_symbol(&self, sym: Symbol) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Symbol(s), .. }) if *s == sym)
    }

    fn eat_keyword(&mut self, kw: Keyword) -> bool {
        let hit = self.at_keyword(kw);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat_symbol(&mut self, sym: Symbol) -> bool {
        let hit = self.at_symbol(sym);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_keyword(&mut self, kw: Keyword) -> Result<(), PqlError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.error(kw.as_str()))
        }
    }

    fn expect_symbol(&mut self, sym: Symbol) -> Result<(), PqlError> {
        if self.eat_symbol(sym) {
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", sym.as_str())))
        }
    }

    fn identifier(&mut self, what: &str) -> Result<(String, Span), PqlError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Identifier,
                text,
                span,
            }) => {
                let out = (text.clone(), *span);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.error(what)),
        }
    }

    fn field(&mut self, allow_prose: bool) -> Result<Field, PqlError> {
        let (name, span) = self.identifier("field name")?;
        let field = if allow_prose {
            Field::parse_any(&name)
        } else {
            Field::parse_queryable(&name)
        };
        field.ok_or(PqlError::UnknownField {
            name,
            span: Some(span),
        })
    }

    fn literal(&mut self) -> Result<Literal, PqlError> {
        let lit = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::String(s)) => Literal::Str(s.clone()),
            Some(TokenKind::Integer(n)) => Literal::Int(*n),
            _ => return Err(self.error("string or integer literal")),
        };
        self.pos += 1;
        Ok(lit)
    }

    fn query(&mut self) -> Result<Query, PqlError> {
        self.expect_keyword(Keyword::Select)?;
        let projection = if self.eat_symbol(Symbol::Star) {
            Projection::All
        } else {
            let mut fields = vec![self.field(false)?];
            while self.eat_symbol(Symbol::Comma) {
                fields.push(self.field(false)?);
            }
            Projection::Fields(fields)
        };

        self.expect_keyword(Keyword::From)?;
        let (table, span) = self.identifier("table name")?;
        if !table.eq_ignore_ascii_case(TABLE_NAME) {
            return Err(PqlError::Parse {
                message: format!("unknown table {table:?}, the only table is {TABLE_NAME}"),
                span,
            });
        }

        let predicate = if self.eat_keyword(Keyword::Where) {
            Some(self.or_expr()?)
        } else {
            None
        };

        let order_by = if self.eat_keyword(Keyword::Order) {
            self.expect_keyword(Keyword::By)?;
            let field = self.field(false)?;
            let direction = if self.eat_keyword(Keyword::Desc) {
                Direction::Desc
            } else {
                self.eat_keyword(Keyword::Asc);
                Direction::Asc
            };
            Some(OrderBy { field, direction })
        } else {
            None
        };

        let limit = if self.eat_keyword(Keyword::Limit) {
            match self.peek() {
                Some(Token {
                    kind: TokenKind::Integer(n),
                    span,
                    ..
                }) => {
                    if *n == 0 {
                        return Err(PqlError::Parse {
                            message: "LIMIT must be a positive integer".into(),
                            span: *span,
                        });
                    }
                    let n = *n;
                    self.pos += 1;
                    Some(n)
                }
                _ => return Err(self.error("positive integer")),
            }
        } else {
            None
        };

        if self.peek().is_some() {
            return Err(self.error("end of query"));
        }
        Ok(Query {
            projection,
            predicate,
            order_by,
            limit,
        })
    }

    fn or_expr(&mut self) -> Result<Expr, PqlError> {
        let mut terms = vec![self.and_expr()?];
        while self.eat_keyword(Keyword::Or) {
            terms.push(self.and_expr()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Or(terms)
        })
    }

    fn and_expr(&mut self) -> Result<Expr, PqlError> {
        let mut terms = vec![self.unary()?];
        while self.eat_keyword(Keyword::And) {
            terms.push(self.unary()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::And(terms)
        })
    }

    fn unary(&mut self) -> Result<Expr, PqlError> {
        if self.eat_keyword(Keyword::Not) {
            Ok(Expr::Not(Box::new(self.primary()?)))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Expr, PqlError> {
        if self.eat_symbol(Symbol::LParen) {
            let inner = self.or_expr()?;
            self.expect_symbol(Symbol::RParen)?;
            return Ok(inner);
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr, PqlError> {
        let (name, span) = self.identifier("field name or '('")?;
        let unknown = || PqlError::UnknownField {
            name: name.clone(),
            span: Some(span),
        };
        let any = Field::parse_any(&name).ok_or_else(unknown)?;

        if self.eat_keyword(Keyword::Contains) {
            return match self.peek().map(|t| &t.kind) {
                Some(TokenKind::String(s)) => {
                    let value = s.clone();
                    self.pos += 1;
                    Ok(Expr::Contains { field: any, value })
                }
                _ => Err(self.error("string")),
            };
        }

        // prose fields are reachable through CONTAINS only
        let field = Field::parse_queryable(&name).ok_or_else(unknown)?;
        if self.eat_keyword(Keyword::In) {
            self.expect_symbol(Symbol::LParen)?;
            let mut values = vec![self.literal()?];
            while self.eat_symbol(Symbol::Comma) {
                values.push(self.literal()?);
            }
            self.expect_symbol(Symbol::RParen)?;
            return Ok(Expr::In { field, values });
        }
        let op = if self.eat_symbol(Symbol::Eq) {
            CompareOp::Eq
        } else if self.eat_symbol(Symbol::Ne) {
            CompareOp::Ne
        } else {
            return Err(self.error("'=', '!=', CONTAINS or IN"));
        };
        Ok(Expr::Compare {
            field,
            op,
            value: self.literal()?,
        })
    }
}

/// Parses a PQL `SELECT` statement.
pub fn parse_query(text: &str) -> Result<Query, PqlError> {
    let tokens = tokenize(text)?;
    Parser {
        tokens,
        pos: 0,
        source: text,
    }
    .query()
}
