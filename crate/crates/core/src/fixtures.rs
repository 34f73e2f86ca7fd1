//! Bundled sample corpora drawn from published survey extracts.
//!
//! * [`survey_extract`]: eight Yoruba-named medicinal plants with ailment
//!   codes, parts and preparations.
//! * [`trade_opinions`]: respondent opinion percentages for traded plants in
//!   community forests; statuses are the opinion pluralities.
//! * [`swat_market`]: market and conservation status of plants sold in Swat.
//! * [`threatened_nigeria`]: threatened species with their main use.
//!
//! [`full_corpus`] merges all four by id.

use std::collections::BTreeMap;

use crate::model::{
    DrugInteraction, LocalizedName, MarketStatus, PlantPart, PlantRecord, UseEntry,
};
use crate::narration::{MediaKind, MediaRef};
use crate::status::{map_status_to_iucn, ConservationAssessment, OpinionDistribution, PaperStatus};

const SURVEY_SOURCE: &str = "Yoruba ethnobotanical field survey, south-west Nigeria";
const OPINION_SOURCE: &str =
    "Respondent opinion survey of traded medicinal plants, community forests";
const SWAT_SOURCE: &str = "Market survey of medicinal plants, Swat, Pakistan";
const THREATENED_SOURCE: &str = "Threatened biodiversity species list, Nigeria";

fn record(name: &str, family: &str, source: &str) -> PlantRecord {
    let mut r = PlantRecord::new(name);
    r.family = family.to_string();
    r.sources = vec![source.to_string()];
    r
}

fn yoruba(names: &[&str]) -> Vec<LocalizedName> {
    names.iter().map(|n| LocalizedName::yoruba(n)).collect()
}

fn uses(codes: &[&str], parts: &[PlantPart], preparation: Option<&str>) -> Vec<UseEntry> {
    codes
        .iter()
        .map(|c| {
            let u = UseEntry::new(c, parts.iter().cloned());
            match preparation {
                Some(p) => u.with_preparation(p),
                None => u,
            }
        })
        .collect()
}

fn photo(id: &str) -> MediaRef {
    MediaRef::new(MediaKind::Image, &format!("images/{id}.jpg"))
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn ginger() -> PlantRecord {
    use PlantPart::*;
    let mut r = record("Zingiber officinale Rosc", "Zingiberaceae", SURVEY_SOURCE);
    r.common_names = strings(&["Ginger", "Common Ginger"]);
    r.local_names = yoruba(&["Jinja", "Atale", "Atalekopa"]);
    r.description = "Perennial herb grown for its pungent aromatic rhizome.".into();
    r.uses = uses(
        &["AST", "PIL", "HEP", "OBE", "ANA", "CAN", "DYS"],
        &[Rhizome, Root],
        None,
    );
    r.areas_of_origin = strings(&[
        "southern Asia",
        "India",
        "China",
        "Nigeria",
        "Indonesia",
        "Africa",
    ]);
    r.contraindications = strings(&[
        "blood coagulation disorders",
        "patients taking anticoagulant drugs",
        "gallstones",
    ]);
    r.toxicity = Some("Considered safe; avoid dried rhizome during pregnancy.".into());
    r.pharmacology = Some("Carminative, antiemetic and circulatory stimulant.".into());
    r.drug_interactions = vec![
        interaction("heparin", "raised bleeding risk"),
        interaction("warfarin", "raised bleeding risk"),
        interaction("chemotherapy drugs", "possible interaction"),
        interaction("ticlopidine", "raised bleeding risk"),
        interaction("cyclosporine", "lower oral bioavailability"),
    ];
    r.media.items = vec![
        photo(&r.id),
        MediaRef::new(MediaKind::Video, "media/zingiber-officinale.mp4"),
    ];
    r
}

fn interaction(agent: &str, effect: &str) -> DrugInteraction {
    DrugInteraction {
        agent: agent.to_string(),
        effect: effect.to_string(),
        severity_note: None,
    }
}

/// The eight-plant field survey extract.
pub fn survey_extract() -> Vec<PlantRecord> {
    use PlantPart::*;
    let mut out = Vec::new();

    let mut r = record(
        "Acalypha villicaulis Hoschst",
        "Euphorbiaceae",
        SURVEY_SOURCE,
    );
    r.local_names = yoruba(&["Jinwini"]);
    r.uses = uses(&["WI"], &[Root], Some("root decoction"));
    out.push(r);

    let mut r = record("Ageratum conyzoides L", "Asteraceae", SURVEY_SOURCE);
    r.local_names = yoruba(&["Imi-esu", "Akayunyun"]);
    r.uses = uses(&["URT", "WI"], &[Leaf], Some("leaf decoction"));
    out.push(r);

    let mut r = record("Allium sativum L.", "Alliaceae", SURVEY_SOURCE);
    r.common_names = strings(&["Garlic"]);
    r.local_names = yoruba(&["Alubosa ayu"]);
    r.uses = uses(&["STR", "EYE"], &[Root], None);
    out.push(r);

    let mut r = record("Asparagus racemosus", "", SURVEY_SOURCE);
    r.local_names = yoruba(&["Aluki", "Eye-kosun- Dangi"]);
    r.uses = uses(&["MI"], &[Root], None);
    out.push(r);

    let mut r = record("Elytraria marginata", "Acanthaceae", SURVEY_SOURCE);
    r.local_names = yoruba(&["Ewe-Eso"]);
    r.uses = uses(&["GNO", "IMP", "INF"], &[WholePlant], None);
    out.push(r);

    let mut r = record("Euphorbia laterifolia", "Euphorbiaceae", SURVEY_SOURCE);
    r.local_names = yoruba(&["Orowere", "Enuopire Enukopure"]);
    r.uses = uses(&["DMT", "INF"], &[Leaf, Exudate], None);
    out.push(r);

    let mut r = record("Ficus capensis Thunb", "Moraceae", SURVEY_SOURCE);
    r.local_names = yoruba(&["Opoto", "Farin bauree", "Anwerenwa"]);
    r.uses = uses(
        &["OED", "LEP", "EPL", "RIC", "INF"],
        &[Leaf, Stem, Root, Fruit],
        None,
    );
    out.push(r);

    out.push(ginger());

    for r in &mut out {
        if r.media.items.is_empty() {
            r.media.items.push(photo(&r.id));
        }
    }
    out
}

/// Opinion rows as (name, endangered, threatened, rare, common). A name may
/// repeat; each row is a separate assessment of the same plant.
pub const OPINION_ROWS: [(&str, f64, f64, f64, f64); 18] = [
    ("Alchornea cordifolia", 44.0, 24.0, 20.0, 12.0),
    ("Ananthus montanus", 32.0, 54.0, 10.0, 4.0),
    ("Bridelia ferruginea", 30.0, 48.0, 22.0, 24.0),
    ("Callichilia barteri", 42.0, 22.0, 20.0, 16.0),
    ("Canarium schweinfurthii", 32.0, 28.0, 24.0, 16.0),
    ("Cissus aralioides", 34.0, 48.0, 10.0, 8.0),
    ("Cocholepermum planchonni", 44.0, 26.0, 16.0, 14.0),
    ("Combretum smeathmanii", 48.0, 23.0, 24.0, 2.0),
    ("Enantia chloratha", 44.0, 30.0, 14.0, 12.0),
    ("Ocimum gratissimum", 46.0, 24.0, 20.0, 10.0),
    ("Rauwolfia vomitoria", 24.0, 64.0, 8.0, 4.0),
    ("Rauwolfia vomitoria", 22.0, 60.0, 14.0, 4.0),
    ("Rothmannia hispida", 46.0, 38.0, 10.0, 6.0),
    ("Sanseuieria guineense", 24.0, 60.0, 14.0, 2.0),
    ("Struchium sparganophora", 32.0, 48.0, 22.0, 18.0),
    ("Thorningia sanguinea", 24.0, 42.0, 20.0, 14.0),
    ("Uraria picta", 44.0, 22.0, 14.0, 20.0),
    ("Zingiber officinale", 56.0, 24.0, 10.0, 10.0),
];

fn opinion_assessment(e: f64, t: f64, r: f64, c: f64) -> ConservationAssessment {
    let mut a = ConservationAssessment::from_opinions(OpinionDistribution::new(e, t, r, c));
    a.iucn = a.paper_status.map(map_status_to_iucn);
    a
}

/// Traded plants with respondent opinions. Repeated names fold into one
/// record holding several assessments.
pub fn trade_opinions() -> Vec<PlantRecord> {
    let mut by_id: BTreeMap<String, PlantRecord> = BTreeMap::new();
    let mut order = Vec::new();
    for (name, e, t, r, c) in OPINION_ROWS {
        let fresh = record(name, "", OPINION_SOURCE);
        let entry = by_id.entry(fresh.id.clone()).or_insert_with(|| {
            order.push(fresh.id.clone());
            fresh
        });
        entry.conservation.push(opinion_assessment(e, t, r, c));
    }
    order
        .into_iter()
        .filter_map(|id| by_id.remove(&id))
        .collect()
}

/// Plants sold in Swat markets with market and conservation status.
pub fn swat_market() -> Vec<PlantRecord> {
    const ROWS: [(&str, &str, &str, &str, &str); 14] = [
        ("Acorus calamus L.", "Araceae", "Whole plant", "P", "E"),
        (
            "Berberis vulgaris Linn",
            "Berberidaceae",
            "Whole plant",
            "P",
            "E",
        ),
        (
            "Dioscorea deltoidea Wall.",
            "Dioscoreaceae",
            "Tubers",
            "D",
            "E",
        ),
        (
            "Polygonatum verticillatum All.",
            "Liliaceae",
            "Rhizome",
            "P",
            "E",
        ),
        (
            "Paeonia emodi Wall. ex Hk.f.",
            "Paeoniaceae",
            "Rhizome, seeds",
            "P",
            "E",
        ),
        (
            "Podophyllum hexandrum Royle",
            "Podophyllaceae",
            "Rhizome",
            "P",
            "E",
        ),
        (
            "Bistorta amplexicaulis (D.Don) Greene",
            "Polygonaceae",
            "Rhizome",
            "P",
            "E",
        ),
        (
            "Bergenia ciliate (Haw) Sternb.",
            "Saxifragaceae",
            "Leaves, rhizome",
            "I",
            "E",
        ),
        (
            "Valeriana jatamansi Jones",
            "Valerianaceae",
            "Rhizome",
            "D",
            "E",
        ),
        (
            "Adiantum capillus-veneris L.",
            "Adiantaceae",
            "Fronds",
            "I",
            "V",
        ),
        (
            "Pistacia integerrima Stew.ex Brand",
            "Anacardiaceae",
            "Leaves",
            "I",
            "V",
        ),
        (
            "Berberis lyceum Royle",
            "Berberidaceae",
            "Whole plant",
            "I",
            "V",
        ),
        (
            "Ephedra gerardiana Wall. ex Stapf",
            "Ephedraceae",
            "Fruit, leaves",
            "I",
            "V",
        ),
        (
            "Colchicum luteum Baker.",
            "Liliaceae",
            "Rhizome, seeds",
            "I",
            "V",
        ),
    ];
    ROWS.iter()
        .map(|(name, family, parts, market, status)| {
            let mut r = record(name, family, SWAT_SOURCE);
            r.description = format!("Part used: {parts}.");
            let market = MarketStatus::parse(market).ok();
            r.market_status = market;
            let status = PaperStatus::parse(status);
            r.conservation.push(ConservationAssessment {
                paper_status: status,
                iucn: status.map(map_status_to_iucn),
                market_status: market,
                ..Default::default()
            });
            r
        })
        .collect()
}

/// Threatened Nigerian plant species and their main use.
pub fn threatened_nigeria() -> Vec<PlantRecord> {
    const ROWS: [(&str, &str, &str); 12] = [
        ("Milicea excelsia", "Timber", "Endangered"),
        ("Diospyros elliotii", "Carving", "Endangered"),
        ("Triplochiduiton scleroxylon", "Timber", "Endangered"),
        ("Mansoiea altissima", "Timber", "Endangered"),
        ("Masilania acuminate", "Chewing stick", "Endangered"),
        ("Garcina manni", "Chewing stick", "Endangered"),
        ("Oucumbaca aubrevillei", "Trado-medical", "Almost Extinct"),
        ("Erythrina senegalensis", "Medicine", "Endangered"),
        ("Cassia nigricans", "Medicine", "Endangered"),
        ("Nigella sativa", "Medicine", "Endangered"),
        ("Hymenocardia acida", "General", "Endangered"),
        ("Kigelia africana", "General", "Endangered"),
    ];
    ROWS.iter()
        .map(|(name, main_use, status)| {
            let mut r = record(name, "", THREATENED_SOURCE);
            r.description = format!("Main use: {main_use}.");
            let status = PaperStatus::parse(status);
            r.conservation.push(ConservationAssessment {
                paper_status: status,
                iucn: status.map(map_status_to_iucn),
                ..Default::default()
            });
            r
        })
        .collect()
}

/// Every bundled corpus merged by id. A plant present in several corpora
/// keeps the first record's fields and gains the later ones' assessments
/// and sources.
pub fn full_corpus() -> Vec<PlantRecord> {
    let mut merged: BTreeMap<String, PlantRecord> = BTreeMap::new();
    let all = survey_extract()
        .into_iter()
        .chain(trade_opinions())
        .chain(swat_market())
        .chain(threatened_nigeria());
    for r in all {
        match merged.get_mut(&r.id) {
            Some(existing) => {
                existing.conservation.extend(r.conservation);
                for s in r.sources {
                    if !existing.sources.contains(&s) {
                        existing.sources.push(s);
                    }
                }
            }
            None => {
                merged.insert(r.id.clone(), r);
            }
        }
    }
    merged.into_values().collect()
}

/// Looks up a bundled corpus by name.
pub fn corpus(name: &str) -> Option<Vec<PlantRecord>> {
    Some(match name {
        "survey" => survey_extract(),
        "opinions" => trade_opinions(),
        "swat" => swat_market(),
        "threatened" => threatened_nigeria(),
        "all" => full_corpus(),
        _ => return None,
    })
}

pub const CORPUS_NAMES: [&str; 5] = ["survey", "opinions", "swat", "threatened", "all"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_record, CodeTable};

    #[test]
    fn every_fixture_record_is_valid() {
        let codes = CodeTable::builtin();
        for name in CORPUS_NAMES {
            for r in corpus(name).unwrap() {
                let report = validate_record(&r, &codes);
                assert!(report.is_ok(), "{name}/{}: {report}", r.id);
            }
        }
    }

    #[test]
    fn ids_are_slugs() {
        let ids: Vec<String> = survey_extract().into_iter().map(|r| r.id).collect();
        assert_eq!(
            ids,
            [
                "acalypha-villicaulis",
                "ageratum-conyzoides",
                "allium-sativum",
                "asparagus-racemosus",
                "elytraria-marginata",
                "euphorbia-laterifolia",
                "ficus-capensis",
                "zingiber-officinale"
            ]
        );
    }

    #[test]
    fn repeated_opinion_rows_share_a_record() {
        let records = trade_opinions();
        assert_eq!(records.len(), 17);
        let rauwolfia = records
            .iter()
            .find(|r| r.id == "rauwolfia-vomitoria")
            .unwrap();
        assert_eq!(rauwolfia.conservation.len(), 2);
    }

    #[test]
    fn full_corpus_merges_ginger() {
        let all = full_corpus();
        assert_eq!(all.len(), 8 + 17 - 1 + 14 + 12);
        let ginger = all.iter().find(|r| r.id == "zingiber-officinale").unwrap();
        assert_eq!(ginger.uses.len(), 7);
        assert_eq!(ginger.conservation.len(), 1);
        assert_eq!(ginger.sources.len(), 2);
    }
}
