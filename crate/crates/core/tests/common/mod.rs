//! Shared generators and a naive reference evaluator for integration tests.
//!
//! The reference evaluator re-implements query semantics directly over
//! record fields. It shares no code with the library evaluator beyond the
//! record types themselves.

#![allow(dead_code)]

use std::collections::BTreeSet;

use phytobase_core::model::{LocalizedName, MarketStatus, PlantPart, PlantRecord, UseEntry};
use phytobase_core::pql::{CompareOp, Direction, Expr, Field, Literal, OrderBy, Projection, Query};
use phytobase_core::status::{ConservationAssessment, PaperStatus};
use rand::seq::IndexedRandom;
use rand::Rng;

pub const GENERA: [&str; 8] = [
    "Zingiber",
    "Ficus",
    "Allium",
    "Acalypha",
    "Ageratum",
    "Euphorbia",
    "Ocimum",
    "Uraria",
];
pub const EPITHETS: [&str; 8] = [
    "officinale",
    "capensis",
    "sativum",
    "villicaulis",
    "conyzoides",
    "laterifolia",
    "gratissimum",
    "picta",
];
pub const AUTHORS: [&str; 4] = ["L.", "Rosc", "Thunb", "Wall. ex Stapf"];
pub const FAMILIES: [&str; 6] = [
    "Zingiberaceae",
    "Moraceae",
    "Alliaceae",
    "Euphorbiaceae",
    "Asteraceae",
    "",
];
pub const COMMON: [&str; 5] = ["Ginger", "Common Ginger", "Garlic", "Basil", "Fig tree"];
pub const LOCAL: [&str; 6] = [
    "Jinja",
    "Atale",
    "Opoto",
    "Ewe-Eso",
    "Orowere",
    "Alubosa ayu",
];
pub const ORIGINS: [&str; 6] = [
    "India",
    "China",
    "Nigeria",
    "Indonesia",
    "Africa",
    "southern Asia",
];
pub const CONSTITUENTS: [&str; 4] = ["gingerol", "shogaol", "allicin", "tannins"];
pub const CODES: [&str; 8] = ["WI", "INF", "AST", "CAN", "MI", "URT", "DYS", "OED"];
pub const PARTS: [PlantPart; 6] = [
    PlantPart::Root,
    PlantPart::Leaf,
    PlantPart::Stem,
    PlantPart::Rhizome,
    PlantPart::Fruit,
    PlantPart::WholePlant,
];
pub const PART_SPELLINGS: [&str; 8] = [
    "root",
    "Roots",
    "Leaves",
    "leaf",
    "stem",
    "Rhizome",
    "whole plant",
    "bark",
];
pub const STATUS_SPELLINGS: [&str; 8] = [
    "Endangered",
    "e",
    "threatened",
    "Rare",
    "COMMON",
    "available",
    "V",
    "almost extinct",
];
pub const MARKET_SPELLINGS: [&str; 5] = ["D", "i", "Persistent", "decreased", "x"];
pub const PROSE_WORDS: [&str; 5] = ["decoction", "rhizome", "bitter", "shrub", "pungent"];

fn pick<'a, R: Rng>(rng: &mut R, items: &'a [&'a str]) -> &'a str {
    items.choose(rng).copied().unwrap_or_default()
}

fn some_of<R: Rng>(rng: &mut R, items: &[&str], max: usize) -> Vec<String> {
    let n = rng.random_range(0..=max);
    let mut out: Vec<String> = Vec::new();
    for _ in 0..n {
        let s = pick(rng, items).to_string();
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn shout<R: Rng>(rng: &mut R, s: &str) -> String {
    match rng.random_range(0..3) {
        0 => s.to_lowercase(),
        1 => s.to_uppercase(),
        _ => s.to_string(),
    }
}

pub fn random_record<R: Rng>(rng: &mut R, serial: usize) -> PlantRecord {
    let name = format!(
        "{} {} {}",
        pick(rng, &GENERA),
        pick(rng, &EPITHETS),
        pick(rng, &AUTHORS)
    );
    let mut r = PlantRecord::new(&name);
    r.id = format!("{}-{serial}", r.id);
    r.family = pick(rng, &FAMILIES).to_string();
    r.common_names = some_of(rng, &COMMON, 2);
    r.local_names = some_of(rng, &LOCAL, 3)
        .iter()
        .map(|n| LocalizedName::yoruba(n))
        .collect();
    r.areas_of_origin = some_of(rng, &ORIGINS, 3);
    r.phytoconstituents = some_of(rng, &CONSTITUENTS, 2);
    r.description = some_of(rng, &PROSE_WORDS, 3).join(" ");
    if rng.random_bool(0.5) {
        r.pharmacology = Some(some_of(rng, &PROSE_WORDS, 2).join(" ")).filter(|s| !s.is_empty());
    }
    for code in some_of(rng, &CODES, 3) {
        let parts: Vec<PlantPart> = (0..rng.random_range(1..=2))
            .map(|_| PARTS.choose(rng).cloned().unwrap_or(PlantPart::Root))
            .collect();
        r.uses.push(UseEntry::new(&code, parts));
    }
    if rng.random_bool(0.6) {
        let status = *[
            PaperStatus::Endangered,
            PaperStatus::Threatened,
            PaperStatus::Rare,
            PaperStatus::Common,
            PaperStatus::Vulnerable,
            PaperStatus::AlmostExtinct,
        ]
        .choose(rng)
        .unwrap();
        r.conservation
            .push(ConservationAssessment::with_status(status));
    }
    r.market_status = [
        None,
        Some(MarketStatus::Decreased),
        Some(MarketStatus::Increased),
        Some(MarketStatus::Persistent),
    ]
    .choose(rng)
    .copied()
    .flatten();
    r.sources = vec!["generated".into()];
    r
}

pub fn random_corpus<R: Rng>(rng: &mut R, max: usize) -> Vec<PlantRecord> {
    let n = rng.random_range(0..=max);
    (0..n).map(|i| random_record(rng, i)).collect()
}

/// A literal likely to hit something for `field`.
fn field_literal<R: Rng>(rng: &mut R, field: Field) -> String {
    let base = match field {
        Field::ScientificName => {
            if rng.random_bool(0.5) {
                format!("{} {}", pick(rng, &GENERA), pick(rng, &EPITHETS))
            } else {
                format!(
                    "{} {} {}",
                    pick(rng, &GENERA),
                    pick(rng, &EPITHETS),
                    pick(rng, &AUTHORS)
                )
            }
        }
        Field::Family => pick(rng, &FAMILIES).to_string(),
        Field::CommonName => pick(rng, &COMMON).to_string(),
        Field::Synonym => "Amomum zingiber".to_string(),
        Field::LocalName => pick(rng, &LOCAL).to_string(),
        Field::Ailment => pick(rng, &CODES).to_string(),
        Field::PartUsed => pick(rng, &PART_SPELLINGS).to_string(),
        Field::AreaOfOrigin => pick(rng, &ORIGINS).to_string(),
        Field::Phytoconstituent => pick(rng, &CONSTITUENTS).to_string(),
        Field::Status => pick(rng, &STATUS_SPELLINGS).to_string(),
        Field::MarketStatus => pick(rng, &MARKET_SPELLINGS).to_string(),
        Field::Description | Field::Pharmacology => pick(rng, &PROSE_WORDS).to_string(),
    };
    shout(rng, &base)
}

fn substring<R: Rng>(rng: &mut R, s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    if chars.is_empty() {
        return String::new();
    }
    let a = rng.random_range(0..chars.len());
    let b = rng.random_range(a..=chars.len());
    chars[a..b].iter().collect()
}

fn any_field<R: Rng>(rng: &mut R) -> Field {
    let all: Vec<Field> = Field::QUERYABLE.into_iter().chain(Field::PROSE).collect();
    *all.choose(rng).unwrap()
}

fn queryable_field<R: Rng>(rng: &mut R) -> Field {
    *Field::QUERYABLE.choose(rng).unwrap()
}

/// A random evaluable predicate over the generator vocabulary.
pub fn random_predicate<R: Rng>(rng: &mut R, depth: usize) -> Expr {
    let leaf = depth == 0 || rng.random_bool(0.4);
    if leaf {
        return match rng.random_range(0..4) {
            0 => {
                let field = any_field(rng);
                let full = field_literal(rng, field);
                Expr::Contains {
                    field,
                    value: substring(rng, &full),
                }
            }
            1 => {
                let field = queryable_field(rng);
                let n = rng.random_range(1..=3);
                Expr::In {
                    field,
                    values: (0..n)
                        .map(|_| Literal::Str(field_literal(rng, field)))
                        .collect(),
                }
            }
            _ => {
                let field = queryable_field(rng);
                Expr::Compare {
                    field,
                    op: if rng.random_bool(0.75) {
                        CompareOp::Eq
                    } else {
                        CompareOp::Ne
                    },
                    value: Literal::Str(field_literal(rng, field)),
                }
            }
        };
    }
    match rng.random_range(0..3) {
        0 => Expr::Not(Box::new(random_predicate(rng, depth - 1))),
        1 => Expr::And(
            (0..rng.random_range(2..=3))
                .map(|_| random_predicate(rng, depth - 1))
                .collect(),
        ),
        _ => Expr::Or(
            (0..rng.random_range(2..=3))
                .map(|_| random_predicate(rng, depth - 1))
                .collect(),
        ),
    }
}

/// Arbitrary text for round-trip tests, including quotes, backslashes and
/// non-ASCII characters.
pub fn random_text<R: Rng>(rng: &mut R) -> String {
    const ALPHABET: [&str; 14] = [
        "a", "Z", " ", "'", "\"", "\\", "ẹ", "ọ", "-", "_", "1", "(", ")", "Ìyá",
    ];
    (0..rng.random_range(0..8))
        .map(|_| *ALPHABET.choose(rng).unwrap())
        .collect()
}

fn random_literal<R: Rng>(rng: &mut R) -> Literal {
    if rng.random_bool(0.2) {
        Literal::Int(rng.random_range(0..1_000_000))
    } else {
        Literal::Str(random_text(rng))
    }
}

/// A random well-formed AST of the given maximum depth (a lone comparison is
/// depth 1).
pub fn random_ast<R: Rng>(rng: &mut R, depth: usize) -> Expr {
    if depth <= 1 || rng.random_bool(0.3) {
        return match rng.random_range(0..3) {
            0 => Expr::Contains {
                field: any_field(rng),
                value: random_text(rng),
            },
            1 => Expr::In {
                field: queryable_field(rng),
                values: (0..rng.random_range(1..=3))
                    .map(|_| random_literal(rng))
                    .collect(),
            },
            _ => Expr::Compare {
                field: queryable_field(rng),
                op: if rng.random_bool(0.5) {
                    CompareOp::Eq
                } else {
                    CompareOp::Ne
                },
                value: random_literal(rng),
            },
        };
    }
    match rng.random_range(0..3) {
        0 => Expr::Not(Box::new(random_ast(rng, depth - 1))),
        1 => Expr::And(
            (0..rng.random_range(2..=3))
                .map(|_| random_ast(rng, depth - 1))
                .collect(),
        ),
        _ => Expr::Or(
            (0..rng.random_range(2..=3))
                .map(|_| random_ast(rng, depth - 1))
                .collect(),
        ),
    }
}

pub fn expr_depth(e: &Expr) -> usize {
    match e {
        Expr::And(c) | Expr::Or(c) => 1 + c.iter().map(expr_depth).max().unwrap_or(0),
        Expr::Not(inner) => 1 + expr_depth(inner),
        _ => 1,
    }
}

pub fn random_full_query<R: Rng>(rng: &mut R, depth: usize) -> Query {
    let projection = if rng.random_bool(0.3) {
        Projection::All
    } else {
        Projection::Fields(
            (0..rng.random_range(1..=3))
                .map(|_| queryable_field(rng))
                .collect(),
        )
    };
    Query {
        projection,
        predicate: rng.random_bool(0.9).then(|| random_ast(rng, depth)),
        order_by: rng.random_bool(0.4).then(|| OrderBy {
            field: queryable_field(rng),
            direction: if rng.random_bool(0.5) {
                Direction::Asc
            } else {
                Direction::Desc
            },
        }),
        limit: rng.random_bool(0.3).then(|| rng.random_range(1..500)),
    }
}

// ---------------------------------------------------------------------------
// reference evaluator

fn lower(s: &str) -> String {
    s.to_lowercase()
}

fn oracle_part(text: &str) -> Option<String> {
    let t = lower(text.trim().trim_end_matches('.').trim());
    if t.is_empty() {
        return None;
    }
    let t = t.replace(['_', '-'], " ");
    Some(match t.as_str() {
        "leaves" | "leaf" => "leaf".to_string(),
        "whole plant" | "whole plants" | "wholeplant" => "whole plant".to_string(),
        other => other.strip_suffix('s').unwrap_or(other).to_string(),
    })
}

fn record_part_names(r: &PlantRecord) -> Vec<String> {
    let mut out = Vec::new();
    for u in &r.uses {
        for p in &u.parts_used {
            let name = match p {
                PlantPart::Root => "root",
                PlantPart::Leaf => "leaf",
                PlantPart::Stem => "stem",
                PlantPart::Rhizome => "rhizome",
                PlantPart::Seed => "seed",
                PlantPart::Fruit => "fruit",
                PlantPart::Bark => "bark",
                PlantPart::Flower => "flower",
                PlantPart::Tuber => "tuber",
                PlantPart::Frond => "frond",
                PlantPart::Exudate => "exudate",
                PlantPart::WholePlant => "whole plant",
                PlantPart::Other(t) => t.as_str(),
            };
            out.push(lower(name));
        }
    }
    out
}

fn oracle_status(text: &str) -> Option<&'static str> {
    let t: String = lower(text)
        .chars()
        .filter(|c| c.is_ascii_alphabetic())
        .collect();
    Some(match t.as_str() {
        "extinct" | "ex" => "extinct",
        "almostextinct" => "almost extinct",
        "endangered" | "e" => "endangered",
        "threatened" => "threatened",
        "vulnerable" | "v" => "vulnerable",
        "rare" => "rare",
        "common" | "available" => "common",
        _ => return None,
    })
}

/// The generator stores at most one undated, stated assessment per record.
fn record_status_name(r: &PlantRecord) -> Option<&'static str> {
    let s = r.conservation.first()?.paper_status?;
    Some(match s {
        PaperStatus::Extinct => "extinct",
        PaperStatus::AlmostExtinct => "almost extinct",
        PaperStatus::Endangered => "endangered",
        PaperStatus::Threatened => "threatened",
        PaperStatus::Vulnerable => "vulnerable",
        PaperStatus::Rare => "rare",
        PaperStatus::Available | PaperStatus::Common => "common",
    })
}

fn oracle_market(text: &str) -> Option<MarketStatus> {
    match lower(text.trim()).as_str() {
        "d" | "decreased" => Some(MarketStatus::Decreased),
        "i" | "increased" => Some(MarketStatus::Increased),
        "p" | "persistent" => Some(MarketStatus::Persistent),
        _ => None,
    }
}

fn text_values(r: &PlantRecord, field: Field) -> Vec<String> {
    let mut out: Vec<String> = match field {
        Field::ScientificName => vec![r.scientific_name.raw.clone()],
        Field::Family => vec![r.family.clone()],
        Field::CommonName => r.common_names.clone(),
        Field::Synonym => r.synonyms.clone(),
        Field::LocalName => r.local_names.iter().map(|n| n.text.clone()).collect(),
        Field::Ailment => r.uses.iter().map(|u| u.ailment.clone()).collect(),
        Field::PartUsed => r
            .uses
            .iter()
            .flat_map(|u| u.parts_used.iter().map(|p| p.label().to_string()))
            .collect(),
        Field::AreaOfOrigin => r.areas_of_origin.clone(),
        Field::Phytoconstituent => r.phytoconstituents.clone(),
        Field::Status => record_status_name(r)
            .map(str::to_string)
            .into_iter()
            .collect(),
        Field::MarketStatus => r
            .market_status
            .map(|m| format!("{m:?}").to_lowercase())
            .into_iter()
            .collect(),
        Field::Description => vec![r.description.clone()],
        Field::Pharmacology => r.pharmacology.clone().into_iter().collect(),
    };
    out.retain(|v| !v.is_empty());
    out
}

fn oracle_equals(r: &PlantRecord, field: Field, literal: &str) -> bool {
    match field {
        Field::ScientificName => {
            let raw = &r.scientific_name.raw;
            let binomial: Vec<&str> = raw.split_whitespace().take(2).collect();
            lower(raw) == lower(literal) || lower(&binomial.join(" ")) == lower(literal)
        }
        Field::PartUsed => match oracle_part(literal) {
            Some(p) => record_part_names(r).contains(&p),
            None => false,
        },
        Field::Status => match oracle_status(literal) {
            Some(s) => record_status_name(r) == Some(s),
            None => false,
        },
        Field::MarketStatus => {
            oracle_market(literal).is_some() && r.market_status == oracle_market(literal)
        }
        Field::Ailment => r
            .uses
            .iter()
            .any(|u| u.ailment.eq_ignore_ascii_case(literal.trim())),
        other => text_values(r, other)
            .iter()
            .any(|v| lower(v) == lower(literal)),
    }
}

pub fn oracle_matches(r: &PlantRecord, e: &Expr) -> bool {
    match e {
        Expr::And(c) => c.iter().all(|x| oracle_matches(r, x)),
        Expr::Or(c) => c.iter().any(|x| oracle_matches(r, x)),
        Expr::Not(x) => !oracle_matches(r, x),
        Expr::Compare { field, op, value } => {
            let lit = match value {
                Literal::Str(s) => s.clone(),
                Literal::Int(n) => n.to_string(),
            };
            let hit = oracle_equals(r, *field, &lit);
            match op {
                CompareOp::Eq => hit,
                CompareOp::Ne => !hit,
            }
        }
        Expr::Contains { field, value } => text_values(r, *field)
            .iter()
            .any(|v| lower(v).contains(&lower(value))),
        Expr::In { field, values } => values.iter().any(|v| {
            let lit = match v {
                Literal::Str(s) => s.clone(),
                Literal::Int(n) => n.to_string(),
            };
            oracle_equals(r, *field, &lit)
        }),
    }
}

pub fn oracle_ids(records: &[PlantRecord], e: &Expr) -> BTreeSet<String> {
    records
        .iter()
        .filter(|r| oracle_matches(r, e))
        .map(|r| r.id.clone())
        .collect()
}

/// Plurality over (endangered, threatened, rare, common) with ties going to
/// the earlier, more severe, column.
pub fn plurality(row: [f64; 4]) -> &'static str {
    let names = ["Endangered", "Threatened", "Rare", "Common"];
    let mut best = 0;
    for i in 1..4 {
        if row[i] > row[best] {
            best = i;
        }
    }
    names[best]
}
