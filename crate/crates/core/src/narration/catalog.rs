use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::NarrationError;

/// The nine narrated fields, in narration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Name,
    Family,
    Description,
    MedicinalUses,
    PartsUsed,
    Preparations,
    Contraindications,
    Toxicity,
    DrugInteractions,
}

impl SegmentKind {
    pub const ORDER: [SegmentKind; 9] = [
        SegmentKind::Name,
        SegmentKind::Family,
        SegmentKind::Description,
        SegmentKind::MedicinalUses,
        SegmentKind::PartsUsed,
        SegmentKind::Preparations,
        SegmentKind::Contraindications,
        SegmentKind::Toxicity,
        SegmentKind::DrugInteractions,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SegmentKind::Name => "name",
            SegmentKind::Family => "family",
            SegmentKind::Description => "description",
            SegmentKind::MedicinalUses => "medicinal_uses",
            SegmentKind::PartsUsed => "parts_used",
            SegmentKind::Preparations => "preparations",
            SegmentKind::Contraindications => "contraindications",
            SegmentKind::Toxicity => "toxicity",
            SegmentKind::DrugInteractions => "drug_interactions",
        }
    }

    fn from_key(key: &str) -> Option<SegmentKind> {
        Self::ORDER.into_iter().find(|k| k.key() == key)
    }
}

/// Localized captions for every segment kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCatalog {
    labels: BTreeMap<SegmentKind, String>,
}

impl LabelCatalog {
    /// Parses `key = label` lines. `#` starts a comment line. All nine keys
    /// must be present; unknown or repeated keys are rejected.
    pub fn parse(language: &str, text: &str) -> Result<Self, NarrationError> {
        let mut labels = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |message: String| NarrationError::CatalogSyntax {
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax("expected `key = label`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let kind = SegmentKind::from_key(key)
                .ok_or_else(|| syntax(format!("unknown segment key {key:?}")))?;
            if value.is_empty() {
                return Err(syntax(format!("empty label for {key:?}")));
            }
            if labels.insert(kind, value.to_string()).is_some() {
                return Err(syntax(format!("repeated key {key:?}")));
            }
        }
        let missing: Vec<String> = SegmentKind::ORDER
            .iter()
            .filter(|k| !labels.contains_key(k))
            .map(|k| k.key().to_string())
            .collect();
        if !missing.is_empty() {
            return Err(NarrationError::IncompleteCatalog {
                language: language.to_string(),
                missing,
            });
        }
        Ok(LabelCatalog { labels })
    }

    pub fn label(&self, kind: SegmentKind) -> &str {
        &self.labels[&kind]
    }
}
