use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ast::{Expr, Field, Projection, Query};
use super::eval::{evaluate_query, ResultSet};
use crate::error::PqlError;
use crate::model::PlantRecord;
use crate::store::RecordStore;

/// A structured-search key: a queryable field, or `name`, which matches any
/// of the four name fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SearchKey {
    Field(Field),
    Name,
}

impl SearchKey {
    pub const NAME_FIELDS: [Field; 4] = [
        Field::ScientificName,
        Field::CommonName,
        Field::Synonym,
        Field::LocalName,
    ];

    pub fn parse(key: &str) -> Result<SearchKey, PqlError> {
        if key.eq_ignore_ascii_case("name") {
            return Ok(SearchKey::Name);
        }
        Field::parse_queryable(key)
            .map(SearchKey::Field)
            .ok_or_else(|| PqlError::UnknownField {
                name: key.to_string(),
                span: None,
            })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SearchKey::Field(f) => f.name(),
            SearchKey::Name => "name",
        }
    }

    fn to_expr(self, value: &str) -> Expr {
        match self {
            SearchKey::Field(f) if f.is_coded() => Expr::eq(f, value),
            SearchKey::Field(f) => Expr::contains(f, value),
            SearchKey::Name => Expr::Or(
                Self::NAME_FIELDS
                    .iter()
                    .map(|f| Expr::contains(*f, value))
                    .collect(),
            ),
        }
    }
}

/// Conjunctive field → value criteria.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCriteria {
    pub entries: BTreeMap<SearchKey, String>,
}

impl SearchCriteria {
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Result<Self, PqlError> {
        let mut entries = BTreeMap::new();
        for (k, v) in pairs {
            let key = SearchKey::parse(k.as_ref())?;
            if entries.insert(key, v.as_ref().to_string()).is_some() {
                return Err(PqlError::DuplicateCriterion(key.as_str().to_string()));
            }
        }
        if entries.is_empty() {
            return Err(PqlError::EmptyCriteria);
        }
        Ok(SearchCriteria { entries })
    }

    /// The desugared query: one conjunct per entry, projected to the summary
    /// columns.
    pub fn to_query(&self) -> Result<Query, PqlError> {
        let mut conjuncts: Vec<Expr> = self.entries.iter().map(|(k, v)| k.to_expr(v)).collect();
        let predicate = match conjuncts.len() {
            0 => return Err(PqlError::EmptyCriteria),
            1 => conjuncts.pop(),
            _ => Some(Expr::And(conjuncts)),
        };
        Ok(Query {
            projection: Projection::Fields(SUMMARY_FIELDS.to_vec()),
            predicate,
            order_by: None,
            limit: None,
        })
    }
}

pub const SUMMARY_FIELDS: [Field; 3] = [Field::ScientificName, Field::Family, Field::Ailment];

pub fn structured_search(
    criteria: &SearchCriteria,
    store: &RecordStore,
) -> Result<ResultSet, PqlError> {
    evaluate_query(&criteria.to_query()?, store)
}

/// The row shape shown in search listings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantSummary {
    pub id: String,
    pub scientific_name: String,
    pub family: String,
    pub ailments: Vec<String>,
}

impl PlantSummary {
    pub fn of(record: &PlantRecord) -> Self {
        PlantSummary {
            id: record.id.clone(),
            scientific_name: record.scientific_name.raw.clone(),
            family: record.family.clone(),
            ailments: record
                .ailment_codes()
                .into_iter()
                .map(str::to_string)
                .collect(),
        }
    }

    /// Summaries for the rows of a result set, in row order.
    pub fn from_results(results: &ResultSet, store: &RecordStore) -> Vec<PlantSummary> {
        results
            .rows
            .iter()
            .filter_map(|row| store.get(&row.id).ok())
            .map(PlantSummary::of)
            .collect()
    }
}
