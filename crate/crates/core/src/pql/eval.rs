use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ast::{CompareOp, Direction, Expr, Field, Literal, Query};
use crate::error::PqlError;
use crate::model::{MarketStatus, PlantPart, PlantRecord};
use crate::status::{record_status, PaperStatus};
use crate::store::index::ailment_key;
use crate::store::RecordStore;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub id: String,
    /// One entry per projected column; multi-valued fields keep every value.
    pub values: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultSet {
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
    /// Matches before `LIMIT` was applied.
    pub total: usize,
}

impl ResultSet {
    pub fn ids(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.id.as_str()).collect()
    }

    pub fn id_set(&self) -> BTreeSet<String> {
        self.rows.iter().map(|r| r.id.clone()).collect()
    }

    pub fn to_text_table(&self) -> String {
        let mut out = String::from("id");
        for c in &self.columns {
            out.push('\t');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.id);
            for v in &row.values {
                out.push('\t');
                out.push_str(&v.join("; "));
            }
            out.push('\n');
        }
        out
    }
}

/// Display values of a field, as projected into result rows.
pub fn field_values(record: &PlantRecord, field: Field) -> Vec<String> {
    let owned = |v: &[String]| v.to_vec();
    match field {
        Field::ScientificName => non_empty(record.scientific_name.raw.clone()),
        Field::Family => non_empty(record.family.clone()),
        Field::CommonName => owned(&record.common_names),
        Field::Synonym => owned(&record.synonyms),
        Field::LocalName => record.local_names.iter().map(|n| n.text.clone()).collect(),
        Field::Ailment => record
            .ailment_codes()
            .into_iter()
            .map(str::to_string)
            .collect(),
        Field::PartUsed => record
            .parts_used()
            .into_iter()
            .map(|p| p.label().to_string())
            .collect(),
        Field::AreaOfOrigin => owned(&record.areas_of_origin),
        Field::Phytoconstituent => owned(&record.phytoconstituents),
        Field::Status => record_status(record)
            .map(|s| vec![s.name().to_string()])
            .unwrap_or_default(),
        Field::MarketStatus => record
            .market_status
            .map(|m| vec![m.name().to_string()])
            .unwrap_or_default(),
        Field::Description => non_empty(record.description.clone()),
        Field::Pharmacology => record.pharmacology.iter().cloned().collect(),
    }
}

fn non_empty(s: String) -> Vec<String> {
    if s.is_empty() {
        Vec::new()
    } else {
        vec![s]
    }
}

fn eq_ci(a: &str, b: &str) -> bool {
    a.to_lowercase() == b.to_lowercase()
}

/// Does any value of `field` equal `literal`? Coded fields normalize the
/// literal through their vocabulary first.
fn any_equals(record: &PlantRecord, field: Field, literal: &str) -> Result<bool, PqlError> {
    Ok(match field {
        Field::ScientificName => {
            let name = &record.scientific_name;
            eq_ci(&name.raw, literal) || (name.is_parsed() && eq_ci(&name.binomial(), literal))
        }
        Field::Ailment => {
            let key = ailment_key(literal.trim());
            record.uses.iter().any(|u| ailment_key(&u.ailment) == key)
        }
        Field::PartUsed => match PlantPart::parse(literal) {
            Ok(part) => {
                let key = part.key().to_lowercase();
                record
                    .parts_used()
                    .into_iter()
                    .any(|p| p.key().to_lowercase() == key)
            }
            Err(_) => false,
        },
        Field::Status => match PaperStatus::parse(literal) {
            Some(wanted) => record_status(record) == Some(wanted.canonical()),
            None => false,
        },
        Field::MarketStatus => match MarketStatus::parse(literal) {
            Ok(wanted) => record.market_status == Some(wanted),
            Err(_) => false,
        },
        f if f.is_prose() => return Err(unknown(f)),
        f => field_values(record, f).iter().any(|v| eq_ci(v, literal)),
    })
}

fn any_contains(record: &PlantRecord, field: Field, needle: &str) -> bool {
    let needle = needle.to_lowercase();
    field_values(record, field)
        .iter()
        .any(|v| v.to_lowercase().contains(&needle))
}

fn unknown(field: Field) -> PqlError {
    PqlError::UnknownField {
        name: field.name().to_string(),
        span: None,
    }
}

/// Evaluates a predicate against one record.
pub fn matches(record: &PlantRecord, expr: &Expr) -> Result<bool, PqlError> {
    Ok(match expr {
        Expr::And(children) => {
            for c in children {
                if !matches(record, c)? {
                    return Ok(false);
                }
            }
            true
        }
        Expr::Or(children) => {
            for c in children {
                if matches(record, c)? {
                    return Ok(true);
                }
            }
            false
        }
        Expr::Not(inner) => !matches(record, inner)?,
        Expr::Compare { field, op, value } => {
            let hit = any_equals(record, *field, &value.text())?;
            match op {
                CompareOp::Eq => hit,
                CompareOp::Ne => !hit,
            }
        }
        Expr::Contains { field, value } => any_contains(record, *field, value),
        Expr::In { field, values } => {
            for v in values {
                if any_equals(record, *field, &v.text())? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

fn lookup(store: &RecordStore, field: Field, value: &Literal) -> Option<BTreeSet<String>> {
    let index = store.index();
    let text = value.text();
    match field {
        Field::Ailment => Some(index.by_ailment(text.trim())),
        Field::Family => Some(index.by_family(&text)),
        Field::AreaOfOrigin => Some(index.by_origin(&text)),
        Field::ScientificName | Field::CommonName | Field::Synonym | Field::LocalName => {
            index.by_name_tokens(&text)
        }
        _ => None,
    }
}

/// A superset of the ids satisfying `expr`, when the indexes can bound it.
fn candidates(store: &RecordStore, expr: &Expr) -> Option<BTreeSet<String>> {
    match expr {
        Expr::Compare {
            field,
            op: CompareOp::Eq,
            value,
        } => lookup(store, *field, value),
        Expr::In { field, values } => {
            let mut all = BTreeSet::new();
            for v in values {
                all.extend(lookup(store, *field, v)?);
            }
            Some(all)
        }
        Expr::And(children) => children
            .iter()
            .filter_map(|c| candidates(store, c))
            .reduce(|a, b| a.intersection(&b).cloned().collect()),
        Expr::Or(children) => {
            let mut all = BTreeSet::new();
            for c in children {
                all.extend(candidates(store, c)?);
            }
            Some(all)
        }
        _ => None,
    }
}

fn check_fields(query: &Query) -> Result<(), PqlError> {
    fn walk(e: &Expr) -> Result<(), PqlError> {
        match e {
            Expr::And(c) | Expr::Or(c) => c.iter().try_for_each(walk),
            Expr::Not(inner) => walk(inner),
            Expr::Compare { field, .. } | Expr::In { field, .. } if field.is_prose() => {
                Err(unknown(*field))
            }
            _ => Ok(()),
        }
    }
    if let Some(f) = query.projection.fields().into_iter().find(|f| f.is_prose()) {
        return Err(unknown(f));
    }
    if let Some(o) = query.order_by.filter(|o| o.field.is_prose()) {
        return Err(unknown(o.field));
    }
    query.predicate.as_ref().map_or(Ok(()), walk)
}

fn sort_key(record: &PlantRecord, field: Field) -> String {
    field_values(record, field)
        .into_iter()
        .next()
        .unwrap_or_default()
        .to_lowercase()
}

fn finish(query: &Query, mut hits: Vec<&PlantRecord>) -> ResultSet {
    match query.order_by {
        Some(order) => {
            let mut keyed: Vec<(String, &PlantRecord)> = hits
                .into_iter()
                .map(|r| (sort_key(r, order.field), r))
                .collect();
            keyed.sort_by(|(ka, a), (kb, b)| {
                let primary = match order.direction {
                    Direction::Asc => ka.cmp(kb),
                    Direction::Desc => kb.cmp(ka),
                };
                primary.then_with(|| a.id.cmp(&b.id))
            });
            hits = keyed.into_iter().map(|(_, r)| r).collect();
        }
        None => hits.sort_by(|a, b| a.id.cmp(&b.id)),
    }
    let total = hits.len();
    let take = query
        .limit
        .map_or(total, |n| usize::try_from(n).unwrap_or(usize::MAX));
    let fields = query.projection.fields();
    let rows = hits
        .into_iter()
        .take(take)
        .map(|r| ResultRow {
            id: r.id.clone(),
            values: fields.iter().map(|f| field_values(r, *f)).collect(),
        })
        .collect();
    ResultSet {
        columns: fields.iter().map(|f| f.name().to_string()).collect(),
        rows,
        total,
    }
}

fn filter_records<'a>(
    records: impl Iterator<Item = &'a PlantRecord>,
    predicate: Option<&Expr>,
) -> Result<Vec<&'a PlantRecord>, PqlError> {
    let mut hits = Vec::new();
    for r in records {
        if predicate.map_or(Ok(true), |p| matches(r, p))? {
            hits.push(r);
        }
    }
    Ok(hits)
}

/// Evaluates a query, narrowing through the secondary indexes where the
/// predicate allows and verifying every candidate against the predicate.
pub fn evaluate_query(query: &Query, store: &RecordStore) -> Result<ResultSet, PqlError> {
    check_fields(query)?;
    let narrowed = query.predicate.as_ref().and_then(|p| candidates(store, p));
    let hits = match narrowed {
        Some(ids) => filter_records(
            ids.iter().filter_map(|id| store.get(id).ok()),
            query.predicate.as_ref(),
        )?,
        None => filter_records(store.records(), query.predicate.as_ref())?,
    };
    Ok(finish(query, hits))
}

/// Same contract as [`evaluate_query`], always scanning every record.
pub fn evaluate_query_scan(query: &Query, store: &RecordStore) -> Result<ResultSet, PqlError> {
    check_fields(query)?;
    let hits = filter_records(store.records(), query.predicate.as_ref())?;
    Ok(finish(query, hits))
}
