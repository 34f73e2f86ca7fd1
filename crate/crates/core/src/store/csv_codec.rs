//! One-row-per-record CSV layout.
//!
//! Columns are the survey's data-collection headers in order, followed by
//! three extension columns (`Id`, `Conservation Status`, `Market Status`) so
//! that export and import agree on everything except media detail: the
//! `Picture` column holds uris only.
//!
//! Multi-valued cells are joined with `|`. Inside a cell, `\`, `|`, `:`,
//! `+` and `@` are backslash-escaped. Use entries are `CODE:part+part:prep`,
//! with dosages aligned one-per-use in the `Preparations / Dosage` column.

use chrono::NaiveDate;

use crate::model::{
    CanonicalName, DrugInteraction, LocalizedName, MarketStatus, PlantPart, PlantRecord, UseEntry,
    ValidationReport,
};
use crate::narration::{LanguageTag, MediaKind, MediaRef};
use crate::status::{ConservationAssessment, IucnCategory, OpinionDistribution, PaperStatus};

pub const SURVEY_HEADERS: [&str; 18] = [
    "Scientific/Botanical Name",
    "Family Name",
    "Common Name",
    "Synonyms",
    "Local Names (Yoruba Lang)",
    "Description",
    "Medicinal Uses",
    "Parts Used",
    "Area(s) of Origin",
    "Preparations / Dosage",
    "Contraindications",
    "Phytoconstituents",
    "Adverse Reactions",
    "Toxicity",
    "Pharmacology",
    "Drug interactions",
    "Picture",
    "Published Source(s)",
];

pub const EXTENSION_HEADERS: [&str; 3] = ["Id", "Conservation Status", "Market Status"];

pub fn headers() -> impl Iterator<Item = &'static str> {
    SURVEY_HEADERS
        .iter()
        .chain(EXTENSION_HEADERS.iter())
        .copied()
}

const SPECIAL: [char; 5] = ['\\', '|', ':', '+', '@'];

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if SPECIAL.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// Splits on unescaped `sep`, leaving escapes in place.
fn split_escaped(s: &str, sep: char) -> Vec<&str> {
    let mut pieces = Vec::new();
    let mut start = 0;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if escaped {
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == sep {
            pieces.push(&s[start..i]);
            start = i + c.len_utf8();
        }
    }
    pieces.push(&s[start..]);
    pieces
}

fn unesc(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            out.push(
                chars
                    .next()
                    .ok_or_else(|| format!("dangling escape in {s:?}"))?,
            );
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

fn join_list<S: AsRef<str>>(items: &[S]) -> String {
    items
        .iter()
        .map(|s| esc(s.as_ref()))
        .collect::<Vec<_>>()
        .join("|")
}

fn split_list(cell: &str) -> Result<Vec<String>, String> {
    if cell.is_empty() {
        return Ok(Vec::new());
    }
    split_escaped(cell, '|').into_iter().map(unesc).collect()
}

fn opt_text(cell: &str) -> Option<String> {
    (!cell.is_empty()).then(|| cell.to_string())
}

fn encode_use(u: &UseEntry) -> String {
    let parts: Vec<String> = u.parts_used.iter().map(|p| esc(p.key())).collect();
    format!(
        "{}:{}:{}",
        esc(&u.ailment),
        parts.join("+"),
        esc(u.preparation.as_deref().unwrap_or_default())
    )
}

fn decode_use(entry: &str) -> Result<UseEntry, String> {
    let pieces = split_escaped(entry, ':');
    if pieces.len() > 3 {
        return Err(format!("use entry {entry:?} has more than three parts"));
    }
    let ailment = unesc(pieces[0])?;
    let mut parts = std::collections::BTreeSet::new();
    if let Some(cell) = pieces.get(1).filter(|c| !c.is_empty()) {
        for p in split_escaped(cell, '+') {
            parts.insert(PlantPart::parse(&unesc(p)?).map_err(|e| e.to_string())?);
        }
    }
    let preparation = match pieces.get(2) {
        Some(p) => opt_text(&unesc(p)?),
        None => None,
    };
    Ok(UseEntry {
        ailment: ailment.trim().to_ascii_uppercase(),
        parts_used: parts,
        preparation,
        dosage: None,
    })
}

fn encode_local(n: &LocalizedName) -> String {
    if n.language == LanguageTag::yoruba() {
        esc(&n.text)
    } else {
        format!("{}@{}", esc(&n.text), n.language)
    }
}

fn decode_local(entry: &str) -> Result<LocalizedName, String> {
    let pieces = split_escaped(entry, '@');
    let language = match pieces.get(1) {
        Some(tag) => LanguageTag::new(tag).map_err(|e| e.to_string())?,
        None => LanguageTag::yoruba(),
    };
    if pieces.len() > 2 {
        return Err(format!(
            "local name {entry:?} has more than one language tag"
        ));
    }
    Ok(LocalizedName {
        text: unesc(pieces[0])?,
        language,
    })
}

fn encode_interaction(d: &DrugInteraction) -> String {
    format!(
        "{}:{}:{}",
        esc(&d.agent),
        esc(&d.effect),
        esc(d.severity_note.as_deref().unwrap_or_default())
    )
}

fn decode_interaction(entry: &str) -> Result<DrugInteraction, String> {
    let pieces = split_escaped(entry, ':');
    if pieces.len() > 3 {
        return Err(format!(
            "drug interaction {entry:?} has more than three parts"
        ));
    }
    let get = |i: usize| pieces.get(i).map(|p| unesc(p)).transpose();
    Ok(DrugInteraction {
        agent: get(0)?.unwrap_or_default(),
        effect: get(1)?.unwrap_or_default(),
        severity_note: get(2)?.and_then(|s| opt_text(&s)),
    })
}

fn encode_assessment(a: &ConservationAssessment) -> String {
    let opinions = a
        .opinions
        .map(|d| {
            format!(
                "{}/{}/{}/{}",
                d.endangered_pct, d.threatened_pct, d.rare_pct, d.common_pct
            )
        })
        .unwrap_or_default();
    [
        a.paper_status
            .map(PaperStatus::key)
            .unwrap_or_default()
            .to_string(),
        a.iucn
            .map(IucnCategory::code)
            .unwrap_or_default()
            .to_string(),
        opinions,
        a.market_status
            .map(MarketStatus::letter)
            .unwrap_or_default()
            .to_string(),
        a.assessed_on.map(|d| d.to_string()).unwrap_or_default(),
        if a.manual_override {
            "override".into()
        } else {
            String::new()
        },
    ]
    .join(":")
}

fn decode_assessment(entry: &str) -> Result<ConservationAssessment, String> {
    let pieces: Vec<&str> = entry.split(':').collect();
    if pieces.len() != 6 {
        return Err(format!(
            "assessment {entry:?} must have six ':'-separated parts"
        ));
    }
    let paper_status = match pieces[0] {
        "" => None,
        s => Some(PaperStatus::parse(s).ok_or_else(|| format!("unknown status {s:?}"))?),
    };
    let iucn = match pieces[1] {
        "" => None,
        s => Some(IucnCategory::parse(s).ok_or_else(|| format!("unknown IUCN category {s:?}"))?),
    };
    let opinions = match pieces[2] {
        "" => None,
        s => {
            let values: Vec<f64> = s
                .split('/')
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| format!("bad percentage {v:?}"))
                })
                .collect::<Result<_, _>>()?;
            let [e, t, r, c] = values[..] else {
                return Err(format!("opinions {s:?} must have four values"));
            };
            Some(OpinionDistribution::new(e, t, r, c))
        }
    };
    let market_status = match pieces[3] {
        "" => None,
        s => Some(MarketStatus::parse(s).map_err(|e| e.to_string())?),
    };
    let assessed_on = match pieces[4] {
        "" => None,
        s => Some(
            s.parse::<NaiveDate>()
                .map_err(|_| format!("bad assessment date {s:?}"))?,
        ),
    };
    let manual_override = match pieces[5] {
        "" => false,
        "override" => true,
        s => return Err(format!("unexpected override flag {s:?}")),
    };
    Ok(ConservationAssessment {
        paper_status,
        iucn,
        opinions,
        market_status,
        assessed_on,
        manual_override,
    })
}

pub fn encode_row(r: &PlantRecord) -> Vec<String> {
    let parts: Vec<&str> = r.parts_used().into_iter().map(PlantPart::label).collect();
    let dosages: Vec<&str> = r
        .uses
        .iter()
        .map(|u| u.dosage.as_deref().unwrap_or_default())
        .collect();
    let dosage_cell = if dosages.iter().all(|d| d.is_empty()) {
        String::new()
    } else {
        join_list(&dosages)
    };
    let uris: Vec<&str> = r.media.items.iter().map(|m| m.uri.as_str()).collect();
    vec![
        r.scientific_name.raw.clone(),
        r.family.clone(),
        join_list(&r.common_names),
        join_list(&r.synonyms),
        r.local_names
            .iter()
            .map(encode_local)
            .collect::<Vec<_>>()
            .join("|"),
        r.description.clone(),
        r.uses.iter().map(encode_use).collect::<Vec<_>>().join("|"),
        join_list(&parts),
        join_list(&r.areas_of_origin),
        dosage_cell,
        join_list(&r.contraindications),
        join_list(&r.phytoconstituents),
        join_list(&r.adverse_reactions),
        r.toxicity.clone().unwrap_or_default(),
        r.pharmacology.clone().unwrap_or_default(),
        r.drug_interactions
            .iter()
            .map(encode_interaction)
            .collect::<Vec<_>>()
            .join("|"),
        join_list(&uris),
        join_list(&r.sources),
        r.id.clone(),
        r.conservation
            .iter()
            .map(encode_assessment)
            .collect::<Vec<_>>()
            .join("|"),
        r.market_status
            .map(MarketStatus::letter)
            .unwrap_or_default()
            .to_string(),
    ]
}

/// Decodes one row (already matched against the header). Cell-level decoding
/// problems are returned as report errors keyed by record field.
pub fn decode_row(cells: &[&str]) -> Result<PlantRecord, ValidationReport> {
    let mut report = ValidationReport::default();
    let cell = |i: usize| cells.get(i).copied().unwrap_or_default();
    let mut record = PlantRecord {
        scientific_name: CanonicalName::parse(cell(0))
            .unwrap_or_else(|_| CanonicalName::unparsed(cell(0))),
        family: cell(1).to_string(),
        description: cell(5).to_string(),
        toxicity: opt_text(cell(13)),
        pharmacology: opt_text(cell(14)),
        id: cell(18).to_string(),
        ..Default::default()
    };

    macro_rules! list {
        ($field:literal, $i:expr, $decode:expr) => {
            match split_list_raw(cell($i)).into_iter().map($decode).collect() {
                Ok(v) => v,
                Err(e) => {
                    report.error($field, e);
                    Vec::new()
                }
            }
        };
    }
    fn split_list_raw(cell: &str) -> Vec<&str> {
        if cell.is_empty() {
            Vec::new()
        } else {
            split_escaped(cell, '|')
        }
    }

    record.common_names = list!("common_names", 2, unesc);
    record.synonyms = list!("synonyms", 3, unesc);
    record.local_names = list!("local_names", 4, decode_local);
    record.uses = list!("uses", 6, decode_use);
    record.areas_of_origin = list!("areas_of_origin", 8, unesc);
    record.contraindications = list!("contraindications", 10, unesc);
    record.phytoconstituents = list!("phytoconstituents", 11, unesc);
    record.adverse_reactions = list!("adverse_reactions", 12, unesc);
    record.drug_interactions = list!("drug_interactions", 15, decode_interaction);
    record.sources = list!("sources", 17, unesc);
    record.conservation = list!("conservation", 19, |e: &str| decode_assessment(e));

    match split_list(cell(9)) {
        Ok(dosages) if dosages.is_empty() => {}
        Ok(dosages) if dosages.len() == record.uses.len() => {
            for (u, d) in record.uses.iter_mut().zip(dosages) {
                u.dosage = opt_text(&d);
            }
        }
        Ok(dosages) => report.error(
            "uses",
            format!(
                "{} dosages given for {} use entries",
                dosages.len(),
                record.uses.len()
            ),
        ),
        Err(e) => report.error("uses", e),
    }

    match split_list(cell(16)) {
        Ok(uris) => {
            record.media.items = uris
                .iter()
                .map(|u| MediaRef::new(MediaKind::infer(u), u))
                .collect()
        }
        Err(e) => report.error("media", e),
    }

    if !cell(20).is_empty() {
        match MarketStatus::parse(cell(20)) {
            Ok(m) => record.market_status = Some(m),
            Err(e) => report.error("market_status", e.to_string()),
        }
    }

    if report.is_ok() {
        Ok(record)
    } else {
        Err(report)
    }
}
