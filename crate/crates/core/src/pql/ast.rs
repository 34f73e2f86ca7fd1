use std::fmt;

use serde::{Deserialize, Serialize};

/// Fields a query can name.
///
/// `Description` and `Pharmacology` are free prose: they may only appear on
/// the left of `CONTAINS`. All others are queryable everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    ScientificName,
    Family,
    CommonName,
    Synonym,
    LocalName,
    Ailment,
    PartUsed,
    AreaOfOrigin,
    Phytoconstituent,
    Status,
    MarketStatus,
    Description,
    Pharmacology,
}

impl Field {
    pub const QUERYABLE: [Field; 11] = [
        Field::ScientificName,
        Field::Family,
        Field::CommonName,
        Field::Synonym,
        Field::LocalName,
        Field::Ailment,
        Field::PartUsed,
        Field::AreaOfOrigin,
        Field::Phytoconstituent,
        Field::Status,
        Field::MarketStatus,
    ];

    pub const PROSE: [Field; 2] = [Field::Description, Field::Pharmacology];

    pub fn name(self) -> &'static str {
        match self {
            Field::ScientificName => "scientific_name",
            Field::Family => "family",
            Field::CommonName => "common_name",
            Field::Synonym => "synonym",
            Field::LocalName => "local_name",
            Field::Ailment => "ailment",
            Field::PartUsed => "part_used",
            Field::AreaOfOrigin => "area_of_origin",
            Field::Phytoconstituent => "phytoconstituent",
            Field::Status => "status",
            Field::MarketStatus => "market_status",
            Field::Description => "description",
            Field::Pharmacology => "pharmacology",
        }
    }

    pub fn is_prose(self) -> bool {
        Self::PROSE.contains(&self)
    }

    /// Any field, including prose fields. Case-insensitive.
    pub fn parse_any(name: &str) -> Option<Field> {
        Self::QUERYABLE
            .into_iter()
            .chain(Self::PROSE)
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }

    /// Queryable (non-prose) fields only.
    pub fn parse_queryable(name: &str) -> Option<Field> {
        Self::parse_any(name).filter(|f| !f.is_prose())
    }

    /// Fields whose values are drawn from a closed vocabulary and so are
    /// matched by equality in structured search.
    pub fn is_coded(self) -> bool {
        matches!(
            self,
            Field::Ailment | Field::PartUsed | Field::Status | Field::MarketStatus
        )
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Str(String),
    Int(u64),
}

impl Literal {
    /// Comparisons are textual: integers compare by their decimal form.
    pub fn text(&self) -> String {
        match self {
            Literal::Str(s) => s.clone(),
            Literal::Int(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompareOp {
    Eq,
    Ne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Not(Box<Expr>),
    Compare {
        field: Field,
        op: CompareOp,
        value: Literal,
    },
    Contains {
        field: Field,
        value: String,
    },
    In {
        field: Field,
        values: Vec<Literal>,
    },
}

impl Expr {
    pub fn eq(field: Field, value: &str) -> Expr {
        Expr::Compare {
            field,
            op: CompareOp::Eq,
            value: Literal::Str(value.to_string()),
        }
    }

    pub fn contains(field: Field, value: &str) -> Expr {
        Expr::Contains {
            field,
            value: value.to_string(),
        }
    }

    pub fn is_comparison(&self) -> bool {
        matches!(
            self,
            Expr::Compare { .. } | Expr::Contains { .. } | Expr::In { .. }
        )
    }

    pub fn negate(self) -> Expr {
        Expr::Not(Box::new(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projection {
    All,
    Fields(Vec<Field>),
}

impl Projection {
    pub fn fields(&self) -> Vec<Field> {
        match self {
            Projection::All => Field::QUERYABLE.to_vec(),
            Projection::Fields(f) => f.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Asc,
    Desc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderBy {
    pub field: Field,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub projection: Projection,
    pub predicate: Option<Expr>,
    pub order_by: Option<OrderBy>,
    pub limit: Option<u64>,
}

impl Query {
    pub fn all() -> Self {
        Query {
            projection: Projection::All,
            predicate: None,
            order_by: None,
            limit: None,
        }
    }

    pub fn filter(predicate: Expr) -> Self {
        Query {
            predicate: Some(predicate),
            ..Self::all()
        }
    }
}
