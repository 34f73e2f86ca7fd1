use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ailment::CodeTable;
use super::name::CanonicalName;
use super::record::{PlantPart, PlantRecord};
use crate::narration::media::scheme_is_supported;
use crate::status::{classify_opinions, OPINION_SUM_RANGE};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub field: String,
    pub message: String,
}

impl Issue {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Issue {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn error(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.errors.push(Issue::new(field, message));
    }

    pub fn warn(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Issue::new(field, message));
    }

    pub fn has_error(&self, field: &str, message: &str) -> bool {
        self.errors
            .iter()
            .any(|i| i.field == field && i.message == message)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .errors
            .iter()
            .map(|i| format!("error {}: {}", i.field, i.message))
            .chain(
                self.warnings
                    .iter()
                    .map(|i| format!("warning {}: {}", i.field, i.message)),
            )
            .collect();
        if parts.is_empty() {
            f.write_str("ok")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

fn check_name(name: &CanonicalName, report: &mut ValidationReport) {
    if name.raw.trim().is_empty() {
        report.error("scientific_name", "missing");
        return;
    }
    match CanonicalName::parse(&name.raw) {
        Err(e) => report.error("scientific_name", e.to_string()),
        Ok(parsed) if &parsed != name => report.error(
            "scientific_name",
            "structured fields disagree with raw name",
        ),
        Ok(_) => {}
    }
}

/// Checks a record against the schema invariants and the corpus code table.
/// Never fails; callers decide what to do with errors and warnings.
pub fn validate_record(record: &PlantRecord, codes: &CodeTable) -> ValidationReport {
    let mut report = ValidationReport::default();

    if record.id.chars().any(|c| c.is_whitespace() || c == '/') {
        report.error("id", "must not contain whitespace or '/'");
    }
    check_name(&record.scientific_name, &mut report);

    for (i, n) in record.local_names.iter().enumerate() {
        if n.text.trim().is_empty() {
            report.error(format!("local_names[{i}].text"), "empty");
        }
    }

    let mut seen = BTreeSet::new();
    for (i, u) in record.uses.iter().enumerate() {
        let field = format!("uses[{i}]");
        if !codes.contains(&u.ailment) {
            report.error(
                format!("{field}.ailment"),
                format!("unknown ailment code {:?}", u.ailment),
            );
        }
        let key = (
            u.ailment.to_ascii_uppercase(),
            u.preparation.as_deref().map(str::to_lowercase),
        );
        if !seen.insert(key) {
            report.error(field.clone(), "duplicate (ailment, preparation) pair");
        }
        if u.parts_used.is_empty() {
            if let Some(prep) = &u.preparation {
                let names_part = prep
                    .split(|c: char| !c.is_alphanumeric())
                    .filter(|w| !w.is_empty())
                    .any(|w| !matches!(PlantPart::parse(w), Ok(PlantPart::Other(_)) | Err(_)));
                if names_part {
                    report.error(
                        format!("{field}.parts_used"),
                        "empty although the preparation names a plant part",
                    );
                }
            }
        }
        for p in &u.parts_used {
            if matches!(p, PlantPart::Other(t) if t.trim().is_empty()) {
                report.error(format!("{field}.parts_used"), "blank free-text part");
            }
        }
    }

    for (i, d) in record.drug_interactions.iter().enumerate() {
        if d.agent.trim().is_empty() {
            report.error(format!("drug_interactions[{i}].agent"), "missing");
        }
    }

    for (i, a) in record.conservation.iter().enumerate() {
        let field = format!("conservation[{i}]");
        let Some(dist) = &a.opinions else { continue };
        let sum = dist.sum();
        match classify_opinions(dist) {
            Err(e) => report.error(format!("{field}.opinions"), e.to_string()),
            Ok(computed) => {
                if !OPINION_SUM_RANGE.contains(&sum) {
                    report.warn(
                        format!("{field}.opinions"),
                        format!("percentages sum to {sum}, expected 100 \u{b1} 1"),
                    );
                }
                if let Some(stated) = a.paper_status {
                    if stated.canonical() != computed && !a.manual_override {
                        report.error(
                            format!("{field}.paper_status"),
                            format!(
                                "{} disagrees with the opinion plurality {} and is not marked as an override",
                                stated.name(),
                                computed.name()
                            ),
                        );
                    }
                }
            }
        }
    }

    if record.sources.is_empty() {
        report.warn("sources", "no published source cited");
    }

    let mut uris = BTreeSet::new();
    for (i, m) in record.media.items.iter().enumerate() {
        if m.uri.trim().is_empty() {
            report.warn(format!("media[{i}].uri"), "empty uri");
        } else if !scheme_is_supported(&m.uri) {
            report.warn(
                format!("media[{i}].uri"),
                format!("unsupported scheme in {:?}", m.uri),
            );
        }
        if !uris.insert(m.uri.as_str()) {
            report.warn(format!("media[{i}].uri"), "duplicate uri");
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UseEntry;
    use crate::narration::{MediaKind, MediaRef};
    use crate::status::{ConservationAssessment, OpinionDistribution, PaperStatus};

    fn codes() -> CodeTable {
        CodeTable::builtin()
    }

    #[test]
    fn blank_name_is_missing() {
        let mut r = PlantRecord::new("");
        r.sources.push("survey".into());
        let report = validate_record(&r, &codes());
        assert!(report.has_error("scientific_name", "missing"));
    }

    #[test]
    fn unknown_code_and_duplicate_use() {
        let mut r = PlantRecord::new("Allium sativum L.");
        r.uses.push(UseEntry::new("XYZ", [PlantPart::Root]));
        r.uses.push(UseEntry::new("STR", [PlantPart::Root]));
        r.uses.push(UseEntry::new("str", [PlantPart::Leaf]));
        let report = validate_record(&r, &codes());
        assert!(report.errors.iter().any(|i| i.field == "uses[0].ailment"));
        assert!(report.errors.iter().any(|i| i.field == "uses[2]"));
    }

    #[test]
    fn preparation_naming_a_part_needs_parts() {
        let mut r = PlantRecord::new("Acalypha villicaulis Hoschst");
        r.uses
            .push(UseEntry::new("WI", []).with_preparation("root decoction"));
        let report = validate_record(&r, &codes());
        assert!(report
            .errors
            .iter()
            .any(|i| i.field == "uses[0].parts_used"));

        r.uses[0].preparation = Some("decoction".into());
        assert!(validate_record(&r, &codes()).is_ok());
    }

    #[test]
    fn opinion_sum_out_of_range_is_a_warning() {
        let mut r = PlantRecord::new("Bridelia ferruginea");
        r.sources.push("survey".into());
        r.conservation.push(ConservationAssessment {
            opinions: Some(OpinionDistribution::new(30.0, 48.0, 22.0, 24.0)),
            ..Default::default()
        });
        let report = validate_record(&r, &codes());
        assert!(report.is_ok());
        assert_eq!(report.warnings.len(), 1);
        assert_eq!(report.warnings[0].field, "conservation[0].opinions");
    }

    #[test]
    fn stated_status_must_match_plurality_unless_overridden() {
        let mut r = PlantRecord::new("Zingiber officinale Rosc");
        r.conservation.push(ConservationAssessment {
            paper_status: Some(PaperStatus::Rare),
            opinions: Some(OpinionDistribution::new(56.0, 24.0, 10.0, 10.0)),
            ..Default::default()
        });
        assert!(!validate_record(&r, &codes()).is_ok());
        r.conservation[0].manual_override = true;
        assert!(validate_record(&r, &codes()).is_ok());
    }

    #[test]
    fn media_scheme_warnings() {
        let mut r = PlantRecord::new("Zingiber officinale Rosc");
        r.sources.push("survey".into());
        r.media.items.push(MediaRef::new(
            MediaKind::Video,
            "ftp://example.org/ginger.mp4",
        ));
        r.media
            .items
            .push(MediaRef::new(MediaKind::Image, "images/ginger.jpg"));
        let report = validate_record(&r, &codes());
        assert!(report.is_ok());
        assert_eq!(report.warnings.len(), 1);
    }
}
