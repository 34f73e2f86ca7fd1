//! Plant record schema, controlled vocabularies, and record validation.

pub mod ailment;
pub mod name;
pub mod record;
pub mod validate;

pub use ailment::{resolve_ailment_code, AilmentCode, CodeTable, BUILTIN_CODES};
pub use name::{parse_scientific_name, CanonicalName};
pub use record::{DrugInteraction, LocalizedName, MarketStatus, PlantPart, PlantRecord, UseEntry};
pub use validate::{validate_record, Issue, ValidationReport};
