//! Conservation status: respondent-opinion classification, the survey's own
//! status vocabulary, IUCN Red List categories, and corpus-level reports.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::StatusError;
use crate::model::{MarketStatus, PlantRecord};

/// Opinion rows whose percentages fall outside this range get a warning.
pub const OPINION_SUM_RANGE: RangeInclusive<f64> = 99.0..=101.0;

/// Respondent opinions in percent. Sums are kept as given, even above 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpinionDistribution {
    pub endangered_pct: f64,
    pub threatened_pct: f64,
    pub rare_pct: f64,
    pub common_pct: f64,
}

impl OpinionDistribution {
    pub fn new(endangered: f64, threatened: f64, rare: f64, common: f64) -> Self {
        OpinionDistribution {
            endangered_pct: endangered,
            threatened_pct: threatened,
            rare_pct: rare,
            common_pct: common,
        }
    }

    pub fn sum(&self) -> f64 {
        self.endangered_pct + self.threatened_pct + self.rare_pct + self.common_pct
    }

    pub fn scaled(&self, k: f64) -> Self {
        OpinionDistribution::new(
            self.endangered_pct * k,
            self.threatened_pct * k,
            self.rare_pct * k,
            self.common_pct * k,
        )
    }

    /// Components in severity order, most severe first.
    fn by_severity(&self) -> [(PaperStatus, f64); 4] {
        [
            (PaperStatus::Endangered, self.endangered_pct),
            (PaperStatus::Threatened, self.threatened_pct),
            (PaperStatus::Rare, self.rare_pct),
            (PaperStatus::Common, self.common_pct),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaperStatus {
    Extinct,
    AlmostExtinct,
    Endangered,
    Threatened,
    Vulnerable,
    Rare,
    Available,
    Common,
}

impl PaperStatus {
    pub const CANONICAL: [PaperStatus; 7] = [
        PaperStatus::Extinct,
        PaperStatus::AlmostExtinct,
        PaperStatus::Endangered,
        PaperStatus::Threatened,
        PaperStatus::Vulnerable,
        PaperStatus::Rare,
        PaperStatus::Common,
    ];

    /// Higher is more severe. `Available` and `Common` share the lowest rank.
    pub fn severity(self) -> u8 {
        match self {
            PaperStatus::Extinct => 6,
            PaperStatus::AlmostExtinct => 5,
            PaperStatus::Endangered => 4,
            PaperStatus::Threatened => 3,
            PaperStatus::Vulnerable => 2,
            PaperStatus::Rare => 1,
            PaperStatus::Available | PaperStatus::Common => 0,
        }
    }

    pub fn canonical(self) -> PaperStatus {
        match self {
            PaperStatus::Available => PaperStatus::Common,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PaperStatus::Extinct => "Extinct",
            PaperStatus::AlmostExtinct => "Almost Extinct",
            PaperStatus::Endangered => "Endangered",
            PaperStatus::Threatened => "Threatened",
            PaperStatus::Vulnerable => "Vulnerable",
            PaperStatus::Rare => "Rare",
            PaperStatus::Available => "Available",
            PaperStatus::Common => "Common",
        }
    }

    /// Stable snake_case key, matching the serialized form.
    pub fn key(self) -> &'static str {
        match self {
            PaperStatus::Extinct => "extinct",
            PaperStatus::AlmostExtinct => "almost_extinct",
            PaperStatus::Endangered => "endangered",
            PaperStatus::Threatened => "threatened",
            PaperStatus::Vulnerable => "vulnerable",
            PaperStatus::Rare => "rare",
            PaperStatus::Available => "available",
            PaperStatus::Common => "common",
        }
    }

    /// Accepts full names in any case, snake_case keys, and the one-letter
    /// conservation codes `E` and `V`.
    pub fn parse(text: &str) -> Option<PaperStatus> {
        let norm: String = text
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphabetic())
            .collect();
        Some(match norm.as_str() {
            "extinct" | "ex" => PaperStatus::Extinct,
            "almostextinct" => PaperStatus::AlmostExtinct,
            "endangered" | "e" => PaperStatus::Endangered,
            "threatened" => PaperStatus::Threatened,
            "vulnerable" | "v" => PaperStatus::Vulnerable,
            "rare" => PaperStatus::Rare,
            "available" => PaperStatus::Available,
            "common" => PaperStatus::Common,
            _ => return None,
        })
    }
}

impl fmt::Display for PaperStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PaperStatus {
    type Err = StatusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PaperStatus::parse(s)
            .ok_or_else(|| StatusError::InvalidDistribution(format!("unknown status {s:?}")))
    }
}

/// IUCN Red List categories (2007 scheme).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IucnCategory {
    EX,
    EW,
    CR,
    EN,
    VU,
    NT,
    LC,
    DD,
    NE,
}

impl IucnCategory {
    pub const ALL: [IucnCategory; 9] = [
        IucnCategory::EX,
        IucnCategory::EW,
        IucnCategory::CR,
        IucnCategory::EN,
        IucnCategory::VU,
        IucnCategory::NT,
        IucnCategory::LC,
        IucnCategory::DD,
        IucnCategory::NE,
    ];

    pub fn code(self) -> &'static str {
        match self {
            IucnCategory::EX => "EX",
            IucnCategory::EW => "EW",
            IucnCategory::CR => "CR",
            IucnCategory::EN => "EN",
            IucnCategory::VU => "VU",
            IucnCategory::NT => "NT",
            IucnCategory::LC => "LC",
            IucnCategory::DD => "DD",
            IucnCategory::NE => "NE",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IucnCategory::EX => "Extinct",
            IucnCategory::EW => "Extinct in the Wild",
            IucnCategory::CR => "Critically Endangered",
            IucnCategory::EN => "Endangered",
            IucnCategory::VU => "Vulnerable",
            IucnCategory::NT => "Near Threatened",
            IucnCategory::LC => "Least Concern",
            IucnCategory::DD => "Data Deficient",
            IucnCategory::NE => "Not Evaluated",
        }
    }

    pub fn parse(text: &str) -> Option<IucnCategory> {
        let t = text.trim();
        IucnCategory::ALL
            .into_iter()
            .find(|c| c.code().eq_ignore_ascii_case(t) || c.name().eq_ignore_ascii_case(t))
    }
}

impl fmt::Display for IucnCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Status vocabulary → IUCN mapping. The default table is fixed; entries can
/// be overridden, but never to DD or NE, which are not assessments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IucnMapping {
    table: BTreeMap<PaperStatus, IucnCategory>,
}

impl Default for IucnMapping {
    fn default() -> Self {
        use IucnCategory::*;
        use PaperStatus::*;
        IucnMapping {
            table: [
                (Extinct, EX),
                (AlmostExtinct, CR),
                (Endangered, EN),
                (Threatened, VU),
                (Vulnerable, VU),
                (Rare, NT),
                (Common, LC),
            ]
            .into_iter()
            .collect(),
        }
    }
}

impl IucnMapping {
    pub fn map(&self, status: PaperStatus) -> IucnCategory {
        self.table[&status.canonical()]
    }

    pub fn set(&mut self, status: PaperStatus, category: IucnCategory) -> Result<(), StatusError> {
        if matches!(category, IucnCategory::DD | IucnCategory::NE) {
            return Err(StatusError::ForbiddenMapping(category.code().to_string()));
        }
        self.table.insert(status.canonical(), category);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (PaperStatus, IucnCategory)> + '_ {
        self.table.iter().map(|(s, c)| (*s, *c))
    }
}

pub fn map_status_to_iucn(status: PaperStatus) -> IucnCategory {
    IucnMapping::default().map(status)
}

/// Plurality vote over the four opinion columns. Ties go to the more severe
/// category.
pub fn classify_opinions(dist: &OpinionDistribution) -> Result<PaperStatus, StatusError> {
    let components = dist.by_severity();
    if let Some((status, v)) = components.iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
        return Err(StatusError::InvalidDistribution(format!(
            "{} percentage is {v}",
            status.name()
        )));
    }
    if components.iter().all(|(_, v)| *v == 0.0) {
        return Err(StatusError::AllZero);
    }
    let mut best = components[0];
    for c in &components[1..] {
        if c.1 > best.1 {
            best = *c;
        }
    }
    Ok(best.0)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConservationAssessment {
    pub paper_status: Option<PaperStatus>,
    pub iucn: Option<IucnCategory>,
    pub opinions: Option<OpinionDistribution>,
    pub market_status: Option<MarketStatus>,
    pub assessed_on: Option<NaiveDate>,
    /// Set when `paper_status` deliberately disagrees with `opinions`.
    pub manual_override: bool,
}

impl ConservationAssessment {
    pub fn from_opinions(dist: OpinionDistribution) -> Self {
        ConservationAssessment {
            paper_status: classify_opinions(&dist).ok(),
            opinions: Some(dist),
            ..Default::default()
        }
    }

    pub fn with_status(status: PaperStatus) -> Self {
        ConservationAssessment {
            paper_status: Some(status),
            ..Default::default()
        }
    }

    /// Stated status, else the opinion plurality. Always canonical.
    pub fn effective_status(&self) -> Option<PaperStatus> {
        self.paper_status
            .or_else(|| {
                self.opinions
                    .as_ref()
                    .and_then(|d| classify_opinions(d).ok())
            })
            .map(PaperStatus::canonical)
    }
}

/// Record-level status across all of its assessments: the most recent dated
/// assessment wins; without dates, the most severe one.
pub fn record_status(record: &PlantRecord) -> Option<PaperStatus> {
    let rated: Vec<(Option<NaiveDate>, PaperStatus)> = record
        .conservation
        .iter()
        .filter_map(|a| a.effective_status().map(|s| (a.assessed_on, s)))
        .collect();
    if rated.iter().any(|(d, _)| d.is_some()) {
        rated
            .into_iter()
            .filter_map(|(d, s)| d.map(|d| (d, s)))
            .max_by_key(|(d, s)| (*d, s.severity()))
            .map(|(_, s)| s)
    } else {
        rated
            .into_iter()
            .map(|(_, s)| s)
            .max_by_key(|s| s.severity())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusReport {
    pub counts: BTreeMap<PaperStatus, usize>,
    pub total_assessed: usize,
    pub unassessed: usize,
}

impl Default for StatusReport {
    fn default() -> Self {
        StatusReport {
            counts: PaperStatus::CANONICAL.iter().map(|s| (*s, 0)).collect(),
            total_assessed: 0,
            unassessed: 0,
        }
    }
}

impl StatusReport {
    pub fn count(&self, status: PaperStatus) -> usize {
        self.counts.get(&status.canonical()).copied().unwrap_or(0)
    }

    pub fn to_text_table(&self) -> String {
        let mut rows: Vec<(String, usize)> = self
            .counts
            .iter()
            .map(|(s, n)| (s.name().to_string(), *n))
            .collect();
        rows.push(("Total assessed".into(), self.total_assessed));
        rows.push(("Unassessed".into(), self.unassessed));
        let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(6);
        let mut out = format!("{:<width$}  {:>5}\n", "Status", "Count");
        for (label, n) in rows {
            out.push_str(&format!("{label:<width$}  {n:>5}\n"));
        }
        out
    }
}

pub fn status_report<'a>(records: impl IntoIterator<Item = &'a PlantRecord>) -> StatusReport {
    let mut report = StatusReport::default();
    for record in records {
        match record_status(record) {
            Some(s) => {
                *report.counts.entry(s).or_insert(0) += 1;
                report.total_assessed += 1;
            }
            None => report.unassessed += 1,
        }
    }
    report
}
