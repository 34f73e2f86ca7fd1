//! Narration scripts for text-to-speech adapters, and media manifests.
//!
//! A script is plain data: localized captions from a bundled label catalog
//! followed by the record's own field content, untranslated. Rendering is a
//! pure function of the record and the language.

pub mod catalog;
pub mod media;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use catalog::{LabelCatalog, SegmentKind};
pub use media::{media_manifest, ManifestResult, MediaKind, MediaManifest, MediaRef};

use crate::error::{ModelError, NarrationError};
use crate::model::{CodeTable, PlantRecord};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageTag(String);

impl LanguageTag {
    pub fn new(code: &str) -> Result<Self, ModelError> {
        if code.len() == 2 && code.bytes().all(|b| b.is_ascii_lowercase()) {
            Ok(LanguageTag(code.to_string()))
        } else {
            Err(ModelError::InvalidLanguageTag(code.to_string()))
        }
    }

    pub fn english() -> Self {
        LanguageTag("en".into())
    }

    pub fn yoruba() -> Self {
        LanguageTag("yo".into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for LanguageTag {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LanguageTag::new(s)
    }
}

impl Serialize for LanguageTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for LanguageTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        LanguageTag::new(&s).map_err(serde::de::Error::custom)
    }
}

const BUNDLED_CATALOGS: [(&str, &str); 5] = [
    ("en", include_str!("../../catalogs/en.txt")),
    ("yo", include_str!("../../catalogs/yo.txt")),
    ("ha", include_str!("../../catalogs/ha.txt")),
    ("ig", include_str!("../../catalogs/ig.txt")),
    ("fr", include_str!("../../catalogs/fr.txt")),
];

/// Languages narration can be produced in, each with a complete catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageRegistry {
    catalogs: BTreeMap<LanguageTag, LabelCatalog>,
}

impl LanguageRegistry {
    pub fn empty() -> Self {
        LanguageRegistry {
            catalogs: BTreeMap::new(),
        }
    }

    /// English, Yoruba, Hausa, Igbo, and French.
    pub fn builtin() -> Result<Self, NarrationError> {
        let mut registry = Self::empty();
        for (code, text) in BUNDLED_CATALOGS {
            registry.register(LanguageTag::new(code)?, LabelCatalog::parse(code, text)?)?;
        }
        Ok(registry)
    }

    pub fn register(
        &mut self,
        tag: LanguageTag,
        catalog: LabelCatalog,
    ) -> Result<(), NarrationError> {
        if self.catalogs.contains_key(&tag) {
            return Err(NarrationError::DuplicateLanguage(tag.0));
        }
        self.catalogs.insert(tag, catalog);
        Ok(())
    }

    pub fn catalog(&self, tag: &LanguageTag) -> Result<&LabelCatalog, NarrationError> {
        self.catalogs
            .get(tag)
            .ok_or_else(|| NarrationError::UnknownLanguage(tag.0.clone()))
    }

    /// Resolves a raw tag string against the registry.
    pub fn lookup(&self, code: &str) -> Result<LanguageTag, NarrationError> {
        let tag = LanguageTag::new(code)
            .map_err(|_| NarrationError::UnknownLanguage(code.to_string()))?;
        self.catalog(&tag)?;
        Ok(tag)
    }

    pub fn languages(&self) -> impl Iterator<Item = &LanguageTag> {
        self.catalogs.keys()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NarrationSegment {
    pub kind: SegmentKind,
    pub label: String,
    pub body: String,
}

impl NarrationSegment {
    /// `None` when the body is blank: empty fields are not narrated.
    pub fn new(kind: SegmentKind, label: &str, body: &str) -> Option<Self> {
        let body = body.trim();
        (!body.is_empty()).then(|| NarrationSegment {
            kind,
            label: label.to_string(),
            body: body.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NarrationScript {
    pub language: LanguageTag,
    pub segments: Vec<NarrationSegment>,
    pub record_id: String,
    pub record_revision: u64,
}

impl NarrationScript {
    pub fn with_revision(mut self, revision: u64) -> Self {
        self.record_revision = revision;
        self
    }

    pub fn to_plaintext(&self) -> String {
        render_narration_plaintext(self)
    }
}

fn dedup_join(items: impl IntoIterator<Item = String>, sep: &str) -> String {
    let mut seen = BTreeSet::new();
    items
        .into_iter()
        .filter(|s| !s.trim().is_empty() && seen.insert(s.clone()))
        .collect::<Vec<_>>()
        .join(sep)
}

fn segment_body(kind: SegmentKind, record: &PlantRecord, codes: &CodeTable) -> String {
    match kind {
        SegmentKind::Name => record.scientific_name.raw.clone(),
        SegmentKind::Family => record.family.clone(),
        SegmentKind::Description => record.description.clone(),
        SegmentKind::MedicinalUses => dedup_join(
            record.ailment_codes().into_iter().map(|c| {
                codes
                    .resolve(c)
                    .map(|a| a.full_name)
                    .unwrap_or_else(|_| c.to_string())
            }),
            ", ",
        ),
        SegmentKind::PartsUsed => dedup_join(
            record
                .parts_used()
                .into_iter()
                .map(|p| p.label().to_string()),
            ", ",
        ),
        SegmentKind::Preparations => dedup_join(
            record
                .uses
                .iter()
                .map(|u| match (&u.preparation, &u.dosage) {
                    (Some(p), Some(d)) => format!("{p} ({d})"),
                    (Some(p), None) => p.clone(),
                    (None, Some(d)) => d.clone(),
                    (None, None) => String::new(),
                }),
            "; ",
        ),
        SegmentKind::Contraindications => {
            dedup_join(record.contraindications.iter().cloned(), "; ")
        }
        SegmentKind::Toxicity => record.toxicity.clone().unwrap_or_default(),
        SegmentKind::DrugInteractions => dedup_join(
            record.drug_interactions.iter().map(|d| {
                let notes: Vec<&str> = [Some(d.effect.as_str()), d.severity_note.as_deref()]
                    .into_iter()
                    .flatten()
                    .filter(|s| !s.trim().is_empty())
                    .collect();
                if notes.is_empty() {
                    d.agent.clone()
                } else {
                    format!("{} ({})", d.agent, notes.join("; "))
                }
            }),
            "; ",
        ),
    }
}

/// Builds the narration script for one record. Ailment codes are spoken as
/// their full names from `codes`; everything else is passed through as is.
pub fn build_narration(
    record: &PlantRecord,
    language: &LanguageTag,
    registry: &LanguageRegistry,
    codes: &CodeTable,
) -> Result<NarrationScript, NarrationError> {
    let catalog = registry.catalog(language)?;
    let segments = SegmentKind::ORDER
        .into_iter()
        .filter_map(|kind| {
            NarrationSegment::new(
                kind,
                catalog.label(kind),
                &segment_body(kind, record, codes),
            )
        })
        .collect();
    Ok(NarrationScript {
        language: language.clone(),
        segments,
        record_id: record.id.clone(),
        record_revision: 0,
    })
}

/// One `Label: body.` line per segment. Bodies that already end in sentence
/// punctuation are not given a second period.
pub fn render_narration_plaintext(script: &NarrationScript) -> String {
    let mut out = String::new();
    for s in &script.segments {
        out.push_str(&s.label);
        out.push_str(": ");
        out.push_str(&s.body);
        if !s.body.ends_with(['.', '!', '?']) {
            out.push('.');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DrugInteraction, PlantPart, UseEntry};

    fn ginger() -> PlantRecord {
        let mut r = PlantRecord::new("Zingiber officinale Rosc");
        r.family = "Zingiberaceae".into();
        for code in ["AST", "PIL", "HEP", "OBE", "ANA", "CAN", "DYS"] {
            r.uses
                .push(UseEntry::new(code, [PlantPart::Rhizome, PlantPart::Root]));
        }
        r.drug_interactions.push(DrugInteraction {
            agent: "warfarin".into(),
            effect: "may raise bleeding risk".into(),
            severity_note: None,
        });
        r
    }

    #[test]
    fn english_script_starts_with_scientific_name() {
        let registry = LanguageRegistry::builtin().unwrap();
        let script = build_narration(
            &ginger(),
            &LanguageTag::english(),
            &registry,
            &CodeTable::builtin(),
        )
        .unwrap();
        assert_eq!(script.segments[0].label, "Scientific name");
        assert_eq!(script.segments[0].body, "Zingiber officinale Rosc");
        let text = render_narration_plaintext(&script);
        assert_eq!(
            text,
            "Scientific name: Zingiber officinale Rosc.\n\
             Family: Zingiberaceae.\n\
             Medicinal uses: Asthma, Piles, Hepatitis, Obesity, Anaemia, Cancer, Dysmenorrhoea.\n\
             Parts used: Root, Rhizome.\n\
             Drug interactions: warfarin (may raise bleeding risk).\n"
        );
    }

    #[test]
    fn empty_fields_are_skipped() {
        let registry = LanguageRegistry::builtin().unwrap();
        let script = build_narration(
            &ginger(),
            &LanguageTag::english(),
            &registry,
            &CodeTable::builtin(),
        )
        .unwrap();
        assert!(script
            .segments
            .iter()
            .all(|s| s.kind != SegmentKind::Contraindications && s.kind != SegmentKind::Toxicity));
        assert!(NarrationSegment::new(SegmentKind::Toxicity, "Toxicity", "  ").is_none());
    }

    #[test]
    fn plaintext_single_segment() {
        let script = NarrationScript {
            language: LanguageTag::english(),
            segments: vec![NarrationSegment::new(
                SegmentKind::Name,
                "Scientific name",
                "Allium sativum L.",
            )
            .unwrap()],
            record_id: "allium-sativum".into(),
            record_revision: 0,
        };
        assert_eq!(
            render_narration_plaintext(&script),
            "Scientific name: Allium sativum L.\n"
        );
    }

    #[test]
    fn segment_order_is_fixed() {
        let mut r = ginger();
        r.description = "Aromatic rhizome".into();
        r.toxicity = Some("Avoid dried rhizome in pregnancy".into());
        r.contraindications.push("gallstones".into());
        r.uses[0].preparation = Some("infusion".into());
        let registry = LanguageRegistry::builtin().unwrap();
        let script = build_narration(
            &r,
            &LanguageTag::new("fr").unwrap(),
            &registry,
            &CodeTable::builtin(),
        )
        .unwrap();
        let kinds: Vec<SegmentKind> = script.segments.iter().map(|s| s.kind).collect();
        let mut sorted = kinds.clone();
        sorted.sort_by_key(|k| SegmentKind::ORDER.iter().position(|o| o == k));
        assert_eq!(kinds, sorted);
        assert_eq!(kinds.len(), 9);
        assert_eq!(script.segments[0].label, "Nom scientifique");
    }

    #[test]
    fn unknown_language() {
        let registry = LanguageRegistry::builtin().unwrap();
        let err = build_narration(
            &ginger(),
            &LanguageTag::new("de").unwrap(),
            &registry,
            &CodeTable::builtin(),
        )
        .unwrap_err();
        assert_eq!(err, NarrationError::UnknownLanguage("de".into()));
        assert!(registry.lookup("EN").is_err());
    }

    #[test]
    fn registry_completeness_and_duplicates() {
        let mut registry = LanguageRegistry::builtin().unwrap();
        let tags: Vec<&str> = registry.languages().map(LanguageTag::as_str).collect();
        assert_eq!(tags, ["en", "fr", "ha", "ig", "yo"]);
        for tag in registry.languages() {
            let c = registry.catalog(tag).unwrap();
            for kind in SegmentKind::ORDER {
                assert!(!c.label(kind).is_empty());
            }
        }
        let dup = LabelCatalog::parse("en", BUNDLED_CATALOGS[0].1).unwrap();
        assert_eq!(
            registry.register(LanguageTag::english(), dup),
            Err(NarrationError::DuplicateLanguage("en".into()))
        );
    }

    #[test]
    fn language_tag_shape() {
        assert!(LanguageTag::new("yo").is_ok());
        assert!(LanguageTag::new("YO").is_err());
        assert!(LanguageTag::new("yor").is_err());
        assert!(serde_json::from_str::<LanguageTag>("\"e1\"").is_err());
    }
}
