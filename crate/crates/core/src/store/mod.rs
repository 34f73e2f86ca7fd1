//! In-memory record store with secondary indexes, import/export, and a
//! file-backed, single-writer wrapper.

pub mod csv_codec;
pub mod index;
pub mod io;
pub mod persist;

use std::collections::{BTreeMap, BTreeSet};

pub use index::{IndexSet, RecordKeys};
pub use io::{Format, ImportReport, Rejection};
pub use persist::Database;

use crate::error::StoreError;
use crate::model::{validate_record, AilmentCode, CodeTable, PlantRecord};
use crate::status::{status_report, StatusReport};

/// Restricts an export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    /// Records with at least one use for this ailment code.
    Ailment(String),
    Ids(BTreeSet<String>),
}

#[derive(Debug, Clone, Default)]
pub struct RecordStore {
    records: BTreeMap<String, PlantRecord>,
    codes: CodeTable,
    revision: u64,
    index: IndexSet,
}

impl RecordStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_records(
        records: impl IntoIterator<Item = PlantRecord>,
    ) -> Result<Self, StoreError> {
        let mut store = Self::new();
        for r in records {
            store.upsert(r)?;
        }
        Ok(store)
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn codes(&self) -> &CodeTable {
        &self.codes
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    /// Records in id order.
    pub fn records(&self) -> impl Iterator<Item = &PlantRecord> {
        self.records.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.records.contains_key(id)
    }

    pub fn get(&self, id: &str) -> Result<&PlantRecord, StoreError> {
        self.records
            .get(id)
            .ok_or_else(|| StoreError::NotFound(id.to_string()))
    }

    /// The slug for `record`, suffixed `-2`, `-3`, ... until unused.
    pub fn fresh_id(&self, record: &PlantRecord) -> String {
        let base = record.scientific_name.slug();
        if !self.records.contains_key(&base) {
            return base;
        }
        (2..)
            .map(|n| format!("{base}-{n}"))
            .find(|id| !self.records.contains_key(id))
            .expect("unbounded suffix search")
    }

    /// Normalizes, assigns an id when missing, and validates, without
    /// touching the store.
    pub fn prepare(&self, mut record: PlantRecord) -> Result<PlantRecord, StoreError> {
        record.normalize();
        if record.id.is_empty() && record.scientific_name.is_parsed() {
            record.id = self.fresh_id(&record);
        }
        let mut report = validate_record(&record, &self.codes);
        if record.id.is_empty() && report.is_ok() {
            report.error("id", "missing");
        }
        if report.is_ok() {
            Ok(record)
        } else {
            Err(StoreError::InvalidRecord {
                id: record.id,
                report,
            })
        }
    }

    /// Stores a prepared record. Callers must have run [`Self::prepare`].
    pub(crate) fn apply_upsert(&mut self, record: PlantRecord) -> u64 {
        if let Some(old) = self.records.remove(&record.id) {
            self.index.remove(&old);
        }
        self.index.insert(&record);
        self.records.insert(record.id.clone(), record);
        self.revision += 1;
        self.revision
    }

    pub(crate) fn apply_delete(&mut self, id: &str) -> Result<u64, StoreError> {
        let old = self
            .records
            .remove(id)
            .ok_or_else(|| StoreError::NotFound(id.to_string()))?;
        self.index.remove(&old);
        self.revision += 1;
        Ok(self.revision)
    }

    /// Inserts or replaces a record, returning the new revision.
    pub fn upsert(&mut self, record: PlantRecord) -> Result<u64, StoreError> {
        let record = self.prepare(record)?;
        Ok(self.apply_upsert(record))
    }

    pub fn delete(&mut self, id: &str) -> Result<u64, StoreError> {
        self.apply_delete(id)
    }

    /// Adds an ailment code to this corpus. Bumps the revision when the code
    /// is new.
    pub fn register_code(&mut self, code: &str, full_name: &str) -> Result<bool, StoreError> {
        let added = self.codes.register(code, full_name)?;
        if added {
            self.revision += 1;
        }
        Ok(added)
    }

    pub fn resolve_code(&self, code: &str) -> Result<AilmentCode, StoreError> {
        self.codes
            .resolve(code)
            .map_err(|_| StoreError::UnknownCode(code.to_string()))
    }

    /// Indexes recomputed from scratch; always equal to [`Self::index`].
    pub fn rebuild_indexes(&self) -> IndexSet {
        IndexSet::build(self.records.values())
    }

    pub fn import_records(
        &mut self,
        source: &[u8],
        format: Format,
    ) -> Result<ImportReport, StoreError> {
        let mut report = ImportReport::default();
        for (locator, decoded) in io::decode_source(source, format)? {
            let outcome = decoded.map_err(|report| StoreError::InvalidRecord {
                id: String::new(),
                report,
            });
            match outcome.and_then(|r| self.prepare(r)) {
                Ok(record) => {
                    report.warnings += validate_record(&record, &self.codes).warnings.len();
                    self.apply_upsert(record);
                    report.imported += 1;
                }
                Err(StoreError::InvalidRecord { report: r, .. }) => {
                    report.rejected.push(Rejection { locator, report: r })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(report)
    }

    pub fn select(&self, selection: Option<&Selection>) -> Result<Vec<&PlantRecord>, StoreError> {
        Ok(match selection {
            None => self.records.values().collect(),
            Some(Selection::Ailment(code)) => {
                let code = self.resolve_code(code)?.code;
                self.index
                    .by_ailment(&code)
                    .iter()
                    .filter_map(|id| self.records.get(id))
                    .collect()
            }
            Some(Selection::Ids(ids)) => ids.iter().filter_map(|id| self.records.get(id)).collect(),
        })
    }

    /// Deterministic export: records sorted by id, fields in schema order.
    pub fn export_records(
        &self,
        selection: Option<&Selection>,
        format: Format,
    ) -> Result<Vec<u8>, StoreError> {
        io::encode_records(self.select(selection)?, format)
    }

    pub fn status_report(&self) -> StatusReport {
        status_report(self.records.values())
    }
}
