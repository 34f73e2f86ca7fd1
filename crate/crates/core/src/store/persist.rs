//! File-backed store: a JSON snapshot plus an append-only operation log.
//!
//! Layout inside the data directory:
//!
//! * `phytobase.snapshot` - the header line `phytobase-snapshot v1`, then one
//!   JSON document holding the revision, registered codes, and all records.
//! * `phytobase.oplog` - one JSON operation per line, applied on top of the
//!   snapshot at load time. Opening a writable database replays the log,
//!   writes a fresh snapshot, and truncates the log.
//!
//! All mutations go through one write lock; readers take a read lock and
//! see the state as of the last completed mutation.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use parking_lot::{Mutex, RwLock, RwLockReadGuard};
use serde::{Deserialize, Serialize};

use super::io::{decode_source, Format, ImportReport, Rejection};
use super::RecordStore;
use crate::error::StoreError;
use crate::model::{validate_record, AilmentCode, PlantRecord};

pub const SNAPSHOT_HEADER: &str = "phytobase-snapshot v1";
pub const SNAPSHOT_FILE: &str = "phytobase.snapshot";
pub const LOG_FILE: &str = "phytobase.oplog";

#[derive(Debug, Serialize, Deserialize)]
struct Snapshot {
    revision: u64,
    codes: Vec<AilmentCode>,
    records: Vec<PlantRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum Op {
    Upsert { record: Box<PlantRecord> },
    Delete { id: String },
    RegisterCode { code: String, full_name: String },
}

fn corrupt(what: impl std::fmt::Display) -> StoreError {
    StoreError::CorruptSnapshot(what.to_string())
}

impl RecordStore {
    fn to_snapshot(&self) -> Snapshot {
        Snapshot {
            revision: self.revision,
            codes: self.codes.registered().collect(),
            records: self.records.values().cloned().collect(),
        }
    }

    fn from_snapshot(snapshot: Snapshot) -> Result<Self, StoreError> {
        let mut store = RecordStore::new();
        for c in &snapshot.codes {
            store
                .codes
                .register(&c.code, &c.full_name)
                .map_err(|e| corrupt(format!("code table: {e}")))?;
        }
        for record in snapshot.records {
            let prepared = store
                .prepare(record)
                .map_err(|e| corrupt(format!("record: {e}")))?;
            store.apply_upsert(prepared);
        }
        store.revision = snapshot.revision;
        Ok(store)
    }

    fn apply_op(&mut self, op: Op) -> Result<(), StoreError> {
        match op {
            Op::Upsert { record } => {
                self.upsert(*record)?;
            }
            Op::Delete { id } => {
                self.delete(&id)?;
            }
            Op::RegisterCode { code, full_name } => {
                self.register_code(&code, &full_name)?;
            }
        }
        Ok(())
    }
}

fn read_snapshot(path: &Path) -> Result<RecordStore, StoreError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(RecordStore::new()),
        Err(e) => return Err(StoreError::StoreUnavailable(e.to_string())),
    };
    let (header, body) = text.split_once('\n').unwrap_or((text.as_str(), ""));
    if header.trim_end() != SNAPSHOT_HEADER {
        return Err(corrupt(format!("unexpected header {header:?}")));
    }
    let snapshot: Snapshot = serde_json::from_str(body).map_err(corrupt)?;
    RecordStore::from_snapshot(snapshot)
}

fn replay_log(store: &mut RecordStore, path: &Path) -> Result<usize, StoreError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(StoreError::StoreUnavailable(e.to_string())),
    };
    let complete = text.ends_with('\n');
    let lines: Vec<&str> = text.lines().collect();
    let mut applied = 0;
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let op: Op = match serde_json::from_str(line) {
            Ok(op) => op,
            // a torn final write from a crash mid-append
            Err(_) if i + 1 == lines.len() && !complete => break,
            Err(e) => return Err(corrupt(format!("log line {}: {e}", i + 1))),
        };
        store
            .apply_op(op)
            .map_err(|e| corrupt(format!("log line {}: {e}", i + 1)))?;
        applied += 1;
    }
    Ok(applied)
}

fn write_snapshot(dir: &Path, store: &RecordStore) -> Result<(), StoreError> {
    let tmp = dir.join(format!("{SNAPSHOT_FILE}.tmp"));
    {
        let mut out = BufWriter::new(File::create(&tmp)?);
        writeln!(out, "{SNAPSHOT_HEADER}")?;
        serde_json::to_writer_pretty(&mut out, &store.to_snapshot())
            .map_err(|e| StoreError::StoreUnavailable(e.to_string()))?;
        out.write_all(b"\n")?;
        out.into_inner()
            .map_err(|e| StoreError::StoreUnavailable(e.to_string()))?
            .sync_all()?;
    }
    fs::rename(&tmp, dir.join(SNAPSHOT_FILE))?;
    Ok(())
}

struct OpLog {
    file: File,
}

impl OpLog {
    fn append(&mut self, op: &Op) -> Result<(), StoreError> {
        let mut line =
            serde_json::to_vec(op).map_err(|e| StoreError::StoreUnavailable(e.to_string()))?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.sync_data()?;
        Ok(())
    }
}

pub struct Database {
    state: RwLock<RecordStore>,
    log: Option<Mutex<OpLog>>,
    dir: Option<PathBuf>,
}

impl Database {
    /// A database with no backing files.
    pub fn in_memory(store: RecordStore) -> Self {
        Database {
            state: RwLock::new(store),
            log: None,
            dir: None,
        }
    }

    /// Loads from `dir`. Writable databases create the directory if needed
    /// and compact the log; read-only ones require it to exist and never
    /// write to it.
    pub fn open(dir: &Path, read_only: bool) -> Result<Self, StoreError> {
        if read_only && !dir.is_dir() {
            return Err(StoreError::StoreUnavailable(format!(
                "data directory {} does not exist",
                dir.display()
            )));
        }
        if !read_only {
            fs::create_dir_all(dir)?;
        }
        let mut store = read_snapshot(&dir.join(SNAPSHOT_FILE))?;
        let replayed = replay_log(&mut store, &dir.join(LOG_FILE))?;

        let log = if read_only {
            None
        } else {
            if replayed > 0 || !dir.join(SNAPSHOT_FILE).exists() {
                write_snapshot(dir, &store)?;
            }
            let file = OpenOptions::new()
                .create(true)
                .write(true)
                .truncate(true)
                .open(dir.join(LOG_FILE))?;
            Some(Mutex::new(OpLog { file }))
        };
        Ok(Database {
            state: RwLock::new(store),
            log,
            dir: Some(dir.to_path_buf()),
        })
    }

    pub fn is_read_only(&self) -> bool {
        self.dir.is_some() && self.log.is_none()
    }

    /// A consistent view as of the last completed mutation.
    pub fn read(&self) -> RwLockReadGuard<'_, RecordStore> {
        self.state.read()
    }

    fn check_writable(&self) -> Result<(), StoreError> {
        if self.is_read_only() {
            Err(StoreError::ReadOnly)
        } else {
            Ok(())
        }
    }

    fn append(&self, op: &Op) -> Result<(), StoreError> {
        match &self.log {
            Some(log) => log.lock().append(op),
            None => Ok(()),
        }
    }

    pub fn upsert(&self, record: PlantRecord) -> Result<u64, StoreError> {
        self.check_writable()?;
        let mut store = self.state.write();
        let record = store.prepare(record)?;
        let op = Op::Upsert {
            record: Box::new(record),
        };
        self.append(&op)?;
        let Op::Upsert { record } = op else {
            unreachable!()
        };
        Ok(store.apply_upsert(*record))
    }

    pub fn delete(&self, id: &str) -> Result<u64, StoreError> {
        self.check_writable()?;
        let mut store = self.state.write();
        store.get(id)?;
        self.append(&Op::Delete { id: id.to_string() })?;
        store.apply_delete(id)
    }

    pub fn register_code(&self, code: &str, full_name: &str) -> Result<bool, StoreError> {
        self.check_writable()?;
        let mut store = self.state.write();
        let mut probe = store.codes.clone();
        if !probe.register(code, full_name)? {
            return Ok(false);
        }
        self.append(&Op::RegisterCode {
            code: code.to_string(),
            full_name: full_name.to_string(),
        })?;
        store.register_code(code, full_name)
    }

    /// Per-record import: each valid record is logged and applied on its
    /// own; invalid ones are reported.
    pub fn import(&self, source: &[u8], format: Format) -> Result<ImportReport, StoreError> {
        self.check_writable()?;
        let decoded = decode_source(source, format)?;
        let mut store = self.state.write();
        let mut report = ImportReport::default();
        for (locator, item) in decoded {
            let prepared = item
                .map_err(|report| StoreError::InvalidRecord {
                    id: String::new(),
                    report,
                })
                .and_then(|r| store.prepare(r));
            match prepared {
                Ok(record) => {
                    report.warnings += validate_record(&record, &store.codes).warnings.len();
                    let op = Op::Upsert {
                        record: Box::new(record),
                    };
                    self.append(&op)?;
                    let Op::Upsert { record } = op else {
                        unreachable!()
                    };
                    store.apply_upsert(*record);
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

    /// Writes a snapshot of the current state and truncates the log.
    pub fn compact(&self) -> Result<(), StoreError> {
        let (Some(dir), Some(log)) = (&self.dir, &self.log) else {
            return Ok(());
        };
        let store = self.state.write();
        let log = log.lock();
        write_snapshot(dir, &store)?;
        log.file.set_len(0)?;
        log.file.sync_all()?;
        Ok(())
    }
}
