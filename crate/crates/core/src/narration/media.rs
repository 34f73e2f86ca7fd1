use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::PlantRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediaKind {
    Image,
    Video,
    Audio,
}

impl MediaKind {
    /// Guesses the kind from a uri's extension or host. Defaults to `Image`,
    /// which is what the survey's picture column held.
    pub fn infer(uri: &str) -> MediaKind {
        let lower = uri.to_ascii_lowercase();
        let path = lower.split(['?', '#']).next().unwrap_or_default();
        let ext = path.rsplit_once('.').map(|(_, e)| e).unwrap_or_default();
        if lower.contains("youtube.com/") || lower.contains("youtu.be/") {
            return MediaKind::Video;
        }
        match ext {
            "mp4" | "avi" | "mkv" | "webm" | "mov" | "mpg" | "mpeg" | "flv" | "wmv" => {
                MediaKind::Video
            }
            "mp3" | "wav" | "ogg" | "oga" | "m4a" | "flac" | "aac" => MediaKind::Audio,
            _ => MediaKind::Image,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MediaRef {
    pub kind: MediaKind,
    pub uri: String,
    #[serde(default)]
    pub caption: Option<String>,
}

impl MediaRef {
    pub fn new(kind: MediaKind, uri: &str) -> Self {
        MediaRef {
            kind,
            uri: uri.to_string(),
            caption: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MediaManifest {
    pub items: Vec<MediaRef>,
}

/// The uri scheme, if the uri has one. Single letters are drive names
/// (`C:\photos\...`), not schemes.
pub fn scheme(uri: &str) -> Option<&str> {
    let (head, _) = uri.split_once(':')?;
    let mut chars = head.chars();
    let valid = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    (valid && head.len() > 1).then_some(head)
}

pub fn scheme_is_supported(uri: &str) -> bool {
    match scheme(uri) {
        None => true,
        Some(s) => ["file", "http", "https"]
            .iter()
            .any(|ok| s.eq_ignore_ascii_case(ok)),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestResult {
    pub items: Vec<MediaRef>,
    pub warnings: Vec<String>,
}

impl ManifestResult {
    pub fn manifest(&self) -> MediaManifest {
        MediaManifest {
            items: self.items.clone(),
        }
    }
}

/// A record's usable media: unsupported schemes and empty or repeated uris
/// are dropped, each with a warning.
pub fn media_manifest(record: &PlantRecord) -> ManifestResult {
    let mut out = ManifestResult::default();
    let mut seen = BTreeSet::new();
    for item in &record.media.items {
        if item.uri.trim().is_empty() {
            out.warnings
                .push("dropped media reference with empty uri".into());
        } else if !scheme_is_supported(&item.uri) {
            out.warnings
                .push(format!("dropped {:?}: unsupported uri scheme", item.uri));
        } else if !seen.insert(item.uri.clone()) {
            out.warnings
                .push(format!("dropped duplicate {:?}", item.uri));
        } else {
            out.items.push(item.clone());
        }
    }
    out
}
