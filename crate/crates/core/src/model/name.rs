use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ModelError;

/// A binomial scientific name with an optional, uninterpreted authority.
///
/// The original input is kept in `raw` exactly as given. Serialization
/// writes `raw` only; the structured fields are re-derived on load. A name
/// that fails to parse still deserializes (with empty genus and epithet) so
/// that validation can report it against the record instead of failing the
/// whole document.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CanonicalName {
    pub genus: String,
    pub epithet: String,
    pub authority: Option<String>,
    pub raw: String,
}

impl CanonicalName {
    pub fn parse(raw: &str) -> Result<Self, ModelError> {
        let mut tokens = raw.split_whitespace();
        let genus = tokens.next().ok_or(ModelError::EmptyName)?;
        let epithet = tokens
            .next()
            .ok_or_else(|| ModelError::MalformedName(format!("{raw:?} has no species epithet")))?;

        if !genus.chars().next().is_some_and(char::is_uppercase) {
            return Err(ModelError::MalformedName(format!(
                "genus {genus:?} must start with an uppercase letter"
            )));
        }
        if !epithet.chars().all(|c| c.is_ascii_lowercase() || c == '-')
            || !epithet.chars().any(|c| c.is_ascii_lowercase())
        {
            return Err(ModelError::MalformedName(format!(
                "epithet {epithet:?} must be lowercase Latin letters or hyphens"
            )));
        }

        let rest: Vec<&str> = tokens.collect();
        Ok(CanonicalName {
            genus: genus.to_string(),
            epithet: epithet.to_string(),
            authority: (!rest.is_empty()).then(|| rest.join(" ")),
            raw: raw.to_string(),
        })
    }

    /// Holds input that did not parse. Validation rejects such names.
    pub fn unparsed(raw: &str) -> Self {
        CanonicalName {
            raw: raw.to_string(),
            ..Default::default()
        }
    }

    pub fn is_parsed(&self) -> bool {
        !self.genus.is_empty() && !self.epithet.is_empty()
    }

    /// "Genus epithet", without the authority.
    pub fn binomial(&self) -> String {
        format!("{} {}", self.genus, self.epithet)
    }

    /// "Genus epithet authority" with single spaces.
    pub fn canonical(&self) -> String {
        match &self.authority {
            Some(a) => format!("{} {} {}", self.genus, self.epithet, a),
            None => self.binomial(),
        }
    }

    /// Lowercase "genus-epithet" slug used as the default record id.
    pub fn slug(&self) -> String {
        let mut out = String::new();
        for c in format!("{}-{}", self.genus, self.epithet).chars() {
            if c.is_ascii_alphanumeric() {
                out.push(c.to_ascii_lowercase());
            } else if !out.ends_with('-') {
                out.push('-');
            }
        }
        out.trim_matches('-').to_string()
    }
}

impl fmt::Display for CanonicalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl Serialize for CanonicalName {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw)
    }
}

impl<'de> Deserialize<'de> for CanonicalName {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Ok(CanonicalName::parse(&raw).unwrap_or_else(|_| CanonicalName::unparsed(&raw)))
    }
}

/// Parses a scientific name into genus, epithet, and authority.
pub fn parse_scientific_name(raw: &str) -> Result<CanonicalName, ModelError> {
    CanonicalName::parse(raw)
}
