use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::model::PlantRecord;

pub type Postings = BTreeMap<String, BTreeSet<String>>;

/// Lowercases and splits on whitespace, commas, and hyphens. Diacritics are
/// kept: they distinguish Yoruba words.
pub fn name_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| c.is_whitespace() || c == ',' || c == '-')
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

/// Index keys for the ailment index. Codes are ASCII, so folding through
/// lowercase first makes lookups agree with case-insensitive comparison.
pub fn ailment_key(code: &str) -> String {
    code.to_lowercase().to_uppercase()
}

/// Every key a record contributes to each index.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct RecordKeys {
    pub names: BTreeSet<String>,
    pub ailments: BTreeSet<String>,
    pub families: BTreeSet<String>,
    pub origins: BTreeSet<String>,
}

impl RecordKeys {
    pub fn of(record: &PlantRecord) -> Self {
        let mut keys = RecordKeys::default();
        let name_sources = std::iter::once(record.scientific_name.raw.as_str())
            .chain(record.common_names.iter().map(String::as_str))
            .chain(record.synonyms.iter().map(String::as_str))
            .chain(record.local_names.iter().map(|n| n.text.as_str()));
        for text in name_sources {
            keys.names.extend(name_tokens(text));
        }
        keys.ailments
            .extend(record.uses.iter().map(|u| ailment_key(&u.ailment)));
        if !record.family.is_empty() {
            keys.families.insert(record.family.to_lowercase());
        }
        keys.origins.extend(
            record
                .areas_of_origin
                .iter()
                .filter(|a| !a.is_empty())
                .map(|a| a.to_lowercase()),
        );
        keys
    }
}

/// Secondary inverted indexes over a record store.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    pub name: Postings,
    pub ailment: Postings,
    pub family: Postings,
    pub origin: Postings,
}

fn add(postings: &mut Postings, keys: &BTreeSet<String>, id: &str) {
    for k in keys {
        postings
            .entry(k.clone())
            .or_default()
            .insert(id.to_string());
    }
}

fn remove(postings: &mut Postings, keys: &BTreeSet<String>, id: &str) {
    for k in keys {
        if let Some(ids) = postings.get_mut(k) {
            ids.remove(id);
            if ids.is_empty() {
                postings.remove(k);
            }
        }
    }
}

impl IndexSet {
    pub fn build<'a>(records: impl IntoIterator<Item = &'a PlantRecord>) -> Self {
        let mut index = IndexSet::default();
        for r in records {
            index.insert(r);
        }
        index
    }

    pub fn insert(&mut self, record: &PlantRecord) {
        let keys = RecordKeys::of(record);
        add(&mut self.name, &keys.names, &record.id);
        add(&mut self.ailment, &keys.ailments, &record.id);
        add(&mut self.family, &keys.families, &record.id);
        add(&mut self.origin, &keys.origins, &record.id);
    }

    pub fn remove(&mut self, record: &PlantRecord) {
        let keys = RecordKeys::of(record);
        remove(&mut self.name, &keys.names, &record.id);
        remove(&mut self.ailment, &keys.ailments, &record.id);
        remove(&mut self.family, &keys.families, &record.id);
        remove(&mut self.origin, &keys.origins, &record.id);
    }

    fn get(postings: &Postings, key: &str) -> BTreeSet<String> {
        postings.get(key).cloned().unwrap_or_default()
    }

    pub fn by_ailment(&self, code: &str) -> BTreeSet<String> {
        Self::get(&self.ailment, &ailment_key(code))
    }

    pub fn by_family(&self, family: &str) -> BTreeSet<String> {
        Self::get(&self.family, &family.to_lowercase())
    }

    pub fn by_origin(&self, region: &str) -> BTreeSet<String> {
        Self::get(&self.origin, &region.to_lowercase())
    }

    pub fn by_name_token(&self, token: &str) -> BTreeSet<String> {
        Self::get(&self.name, &token.to_lowercase())
    }

    /// Records whose names contain every token of `text`. `None` when the
    /// text has no tokens and so cannot narrow anything.
    pub fn by_name_tokens(&self, text: &str) -> Option<BTreeSet<String>> {
        let mut result: Option<BTreeSet<String>> = None;
        for token in name_tokens(text) {
            let ids = Self::get(&self.name, &token);
            result = Some(match result {
                None => ids,
                Some(acc) => acc.intersection(&ids).cloned().collect(),
            });
        }
        result
    }

    pub fn is_empty(&self) -> bool {
        self.name.is_empty()
            && self.ailment.is_empty()
            && self.family.is_empty()
            && self.origin.is_empty()
    }

    /// Every (index, key, id) triple.
    pub fn postings(&self) -> impl Iterator<Item = (&'static str, &str, &str)> {
        [
            ("name", &self.name),
            ("ailment", &self.ailment),
            ("family", &self.family),
            ("origin", &self.origin),
        ]
        .into_iter()
        .flat_map(|(which, p)| {
            p.iter().flat_map(move |(k, ids)| {
                ids.iter().map(move |id| (which, k.as_str(), id.as_str()))
            })
        })
    }
}
