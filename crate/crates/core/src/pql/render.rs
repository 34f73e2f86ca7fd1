use super::ast::{CompareOp, Direction, Expr, Literal, Projection, Query};
use super::parser::TABLE_NAME;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        if c == '\'' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

fn literal(l: &Literal) -> String {
    match l {
        Literal::Str(s) => quote(s),
        Literal::Int(n) => n.to_string(),
    }
}

fn expr(e: &Expr) -> String {
    match e {
        Expr::Or(children) => children
            .iter()
            .map(|c| match c {
                Expr::Or(_) => format!("({})", expr(c)),
                _ => expr(c),
            })
            .collect::<Vec<_>>()
            .join(" OR "),
        Expr::And(children) => children
            .iter()
            .map(|c| match c {
                Expr::Or(_) | Expr::And(_) => format!("({})", expr(c)),
                _ => expr(c),
            })
            .collect::<Vec<_>>()
            .join(" AND "),
        Expr::Not(inner) if inner.is_comparison() => format!("NOT {}", expr(inner)),
        Expr::Not(inner) => format!("NOT ({})", expr(inner)),
        Expr::Compare { field, op, value } => {
            let op = match op {
                CompareOp::Eq => "=",
                CompareOp::Ne => "!=",
            };
            format!("{field} {op} {}", literal(value))
        }
        Expr::Contains { field, value } => format!("{field} CONTAINS {}", quote(value)),
        Expr::In { field, values } => format!(
            "{field} IN ({})",
            values.iter().map(literal).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// Canonical text: uppercase keywords, single spaces, and only the
/// parentheses that precedence (or nesting of like operators) requires.
pub fn render_query(query: &Query) -> String {
    let mut out = String::from("SELECT ");
    match &query.projection {
        Projection::All => out.push('*'),
        Projection::Fields(fields) => out.push_str(
            &fields
                .iter()
                .map(|f| f.name())
                .collect::<Vec<_>>()
                .join(", "),
        ),
    }
    out.push_str(" FROM ");
    out.push_str(TABLE_NAME);
    if let Some(p) = &query.predicate {
        out.push_str(" WHERE ");
        out.push_str(&expr(p));
    }
    if let Some(o) = &query.order_by {
        out.push_str(" ORDER BY ");
        out.push_str(o.field.name());
        out.push_str(match o.direction {
            Direction::Asc => " ASC",
            Direction::Desc => " DESC",
        });
    }
    if let Some(n) = query.limit {
        out.push_str(&format!(" LIMIT {n}"));
    }
    out
}
