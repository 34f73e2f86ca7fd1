use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::name::CanonicalName;
use crate::error::ModelError;
use crate::narration::{LanguageTag, MediaManifest};
use crate::status::ConservationAssessment;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlantPart {
    Root,
    Leaf,
    Stem,
    Rhizome,
    Seed,
    Fruit,
    Bark,
    Flower,
    Tuber,
    Frond,
    Exudate,
    WholePlant,
    Other(String),
}

const NAMED_PARTS: [(PlantPart, &str, &str); 12] = [
    (PlantPart::Root, "root", "Root"),
    (PlantPart::Leaf, "leaf", "Leaf"),
    (PlantPart::Stem, "stem", "Stem"),
    (PlantPart::Rhizome, "rhizome", "Rhizome"),
    (PlantPart::Seed, "seed", "Seed"),
    (PlantPart::Fruit, "fruit", "Fruit"),
    (PlantPart::Bark, "bark", "Bark"),
    (PlantPart::Flower, "flower", "Flower"),
    (PlantPart::Tuber, "tuber", "Tuber"),
    (PlantPart::Frond, "frond", "Frond"),
    (PlantPart::Exudate, "exudate", "Exudate"),
    (PlantPart::WholePlant, "whole_plant", "Whole plant"),
];

impl PlantPart {
    /// Accepts canonical keys, display names, and the plural forms found in
    /// survey sheets ("Leaves", "Fronds", "Whole plant."). Anything else
    /// becomes `Other`.
    pub fn parse(text: &str) -> Result<PlantPart, ModelError> {
        let trimmed = text.trim().trim_end_matches('.').trim();
        if trimmed.is_empty() {
            return Err(ModelError::InvalidValue {
                field: "plant part",
                value: text.to_string(),
            });
        }
        let lower = trimmed.to_lowercase();
        let norm = lower.replace(['_', '-'], " ");
        let singular = match norm.as_str() {
            "leaves" => "leaf",
            "whole plant" | "wholeplant" | "whole plants" => "whole plant",
            other => other.strip_suffix('s').unwrap_or(other),
        };
        Ok(NAMED_PARTS
            .iter()
            .find(|(_, key, _)| key.replace('_', " ") == singular)
            .map(|(p, _, _)| p.clone())
            .unwrap_or_else(|| PlantPart::Other(trimmed.to_string())))
    }

    /// Stable lowercase key used in serialized records.
    pub fn key(&self) -> &str {
        match self {
            PlantPart::Other(text) => text,
            named => NAMED_PARTS
                .iter()
                .find(|(p, _, _)| p == named)
                .map(|(_, k, _)| *k)
                .unwrap_or_default(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            PlantPart::Other(text) => text,
            named => NAMED_PARTS
                .iter()
                .find(|(p, _, _)| p == named)
                .map(|(_, _, l)| *l)
                .unwrap_or_default(),
        }
    }
}

impl fmt::Display for PlantPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PlantPart {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlantPart::parse(s)
    }
}

impl Serialize for PlantPart {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.key())
    }
}

impl<'de> Deserialize<'de> for PlantPart {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        PlantPart::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarketStatus {
    Decreased,
    Increased,
    Persistent,
}

impl MarketStatus {
    pub fn parse(text: &str) -> Result<MarketStatus, ModelError> {
        match text.trim().to_ascii_lowercase().as_str() {
            "d" | "decreased" => Ok(MarketStatus::Decreased),
            "i" | "increased" => Ok(MarketStatus::Increased),
            "p" | "persistent" => Ok(MarketStatus::Persistent),
            _ => Err(ModelError::InvalidValue {
                field: "market status",
                value: text.to_string(),
            }),
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            MarketStatus::Decreased => "D",
            MarketStatus::Increased => "I",
            MarketStatus::Persistent => "P",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MarketStatus::Decreased => "decreased",
            MarketStatus::Increased => "increased",
            MarketStatus::Persistent => "persistent",
        }
    }
}

impl FromStr for MarketStatus {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MarketStatus::parse(s)
    }
}

/// One ailment a plant treats, with how it is prepared.
///
/// `ailment` holds the code only; the full name lives in the corpus code table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UseEntry {
    pub ailment: String,
    #[serde(default)]
    pub parts_used: BTreeSet<PlantPart>,
    #[serde(default)]
    pub preparation: Option<String>,
    #[serde(default)]
    pub dosage: Option<String>,
}

impl UseEntry {
    pub fn new(ailment: &str, parts: impl IntoIterator<Item = PlantPart>) -> Self {
        UseEntry {
            ailment: ailment.to_ascii_uppercase(),
            parts_used: parts.into_iter().collect(),
            preparation: None,
            dosage: None,
        }
    }

    pub fn with_preparation(mut self, preparation: &str) -> Self {
        self.preparation = Some(preparation.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrugInteraction {
    pub agent: String,
    #[serde(default)]
    pub effect: String,
    #[serde(default)]
    pub severity_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedName {
    pub text: String,
    pub language: LanguageTag,
}

impl LocalizedName {
    pub fn yoruba(text: &str) -> Self {
        LocalizedName {
            text: text.to_string(),
            language: LanguageTag::yoruba(),
        }
    }
}

/// One plant's full profile. Field order is the serialized schema order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PlantRecord {
    pub id: String,
    pub scientific_name: CanonicalName,
    pub family: String,
    pub common_names: Vec<String>,
    pub synonyms: Vec<String>,
    pub local_names: Vec<LocalizedName>,
    pub description: String,
    pub uses: Vec<UseEntry>,
    pub areas_of_origin: Vec<String>,
    pub contraindications: Vec<String>,
    pub phytoconstituents: Vec<String>,
    pub adverse_reactions: Vec<String>,
    pub toxicity: Option<String>,
    pub pharmacology: Option<String>,
    pub drug_interactions: Vec<DrugInteraction>,
    pub media: MediaManifest,
    pub sources: Vec<String>,
    pub conservation: Vec<ConservationAssessment>,
    pub market_status: Option<MarketStatus>,
}

impl PlantRecord {
    pub fn new(scientific_name: &str) -> Self {
        let name = CanonicalName::parse(scientific_name)
            .unwrap_or_else(|_| CanonicalName::unparsed(scientific_name));
        PlantRecord {
            id: if name.is_parsed() {
                name.slug()
            } else {
                String::new()
            },
            scientific_name: name,
            ..Default::default()
        }
    }

    /// Distinct ailment codes in use order.
    pub fn ailment_codes(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.uses
            .iter()
            .map(|u| u.ailment.as_str())
            .filter(|c| seen.insert(*c))
            .collect()
    }

    /// Distinct parts across all uses, in order of first appearance.
    pub fn parts_used(&self) -> Vec<&PlantPart> {
        let mut seen = BTreeSet::new();
        self.uses
            .iter()
            .flat_map(|u| u.parts_used.iter())
            .filter(|p| seen.insert(*p))
            .collect()
    }

    /// Drops blank list entries and turns blank optional text into `None`.
    /// Applied by the store so that every persisted form round-trips.
    pub fn normalize(&mut self) {
        fn list(v: &mut Vec<String>) {
            v.retain(|s| !s.is_empty());
        }
        fn opt(v: &mut Option<String>) {
            if v.as_deref().is_some_and(str::is_empty) {
                *v = None;
            }
        }
        list(&mut self.common_names);
        list(&mut self.synonyms);
        list(&mut self.areas_of_origin);
        list(&mut self.contraindications);
        list(&mut self.phytoconstituents);
        list(&mut self.adverse_reactions);
        list(&mut self.sources);
        opt(&mut self.toxicity);
        opt(&mut self.pharmacology);
        for u in &mut self.uses {
            u.ailment = u.ailment.trim().to_ascii_uppercase();
            opt(&mut u.preparation);
            opt(&mut u.dosage);
        }
        for d in &mut self.drug_interactions {
            opt(&mut d.severity_note);
        }
        for m in &mut self.media.items {
            opt(&mut m.caption);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn part_parsing_handles_survey_spellings() {
        assert_eq!(PlantPart::parse("Leaves").unwrap(), PlantPart::Leaf);
        assert_eq!(PlantPart::parse("fruits").unwrap(), PlantPart::Fruit);
        assert_eq!(
            PlantPart::parse("Whole plant.").unwrap(),
            PlantPart::WholePlant
        );
        assert_eq!(
            PlantPart::parse("whole_plant").unwrap(),
            PlantPart::WholePlant
        );
        assert_eq!(PlantPart::parse("Tubers").unwrap(), PlantPart::Tuber);
        assert_eq!(PlantPart::parse("exudate").unwrap(), PlantPart::Exudate);
        assert_eq!(
            PlantPart::parse("peel").unwrap(),
            PlantPart::Other("peel".into())
        );
        assert!(PlantPart::parse("  ").is_err());
    }

    #[test]
    fn part_key_round_trips() {
        for (p, key, _) in NAMED_PARTS.iter() {
            assert_eq!(p.key(), *key);
            assert_eq!(&PlantPart::parse(key).unwrap(), p);
        }
    }

    #[test]
    fn market_status_codes_and_words() {
        assert_eq!(MarketStatus::parse("D").unwrap(), MarketStatus::Decreased);
        assert_eq!(MarketStatus::parse("i").unwrap(), MarketStatus::Increased);
        assert_eq!(
            MarketStatus::parse("Persistent").unwrap(),
            MarketStatus::Persistent
        );
        assert!(MarketStatus::parse("X").is_err());
    }

    #[test]
    fn minimal_json_fills_defaults() {
        let r: PlantRecord = serde_json::from_str(
            r#"{"id":"allium-sativum","scientific_name":"Allium sativum L."}"#,
        )
        .unwrap();
        assert_eq!(r.scientific_name.authority.as_deref(), Some("L."));
        assert!(r.uses.is_empty() && r.media.items.is_empty());
    }

    #[test]
    fn normalize_clears_blanks() {
        let mut r = PlantRecord::new("Allium sativum L.");
        r.toxicity = Some(String::new());
        r.common_names = vec![String::new(), "Garlic".into()];
        r.uses.push(UseEntry::new("str", []));
        r.normalize();
        assert_eq!(r.toxicity, None);
        assert_eq!(r.common_names, vec!["Garlic".to_string()]);
        assert_eq!(r.uses[0].ailment, "STR");
    }
}
