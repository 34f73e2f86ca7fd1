use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Built-in ailment codes, exactly as listed in the survey legend.
pub const BUILTIN_CODES: [(&str, &str); 20] = [
    ("ANA", "Anaemia"),
    ("AST", "Asthma"),
    ("CAN", "Cancer"),
    ("DMT", "Dermatitis"),
    ("DYS", "Dysmenorrhoea"),
    ("EPL", "Epilepsy"),
    ("EYE", "Eye pain"),
    ("GNO", "Gonorrhoea"),
    ("HEP", "Hepatitis"),
    ("IMP", "Impotence"),
    ("INF", "Infertility"),
    ("PIL", "Piles"),
    ("LEP", "Leprosy"),
    ("MI", "Male Infertility"),
    ("OBE", "Obesity"),
    ("OED", "Oedema"),
    ("RIC", "Rickets"),
    ("STR", "Stroke"),
    ("URT", "Urinary Tract Infecions"),
    ("WI", "Women Infertility"),
];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AilmentCode {
    pub code: String,
    pub full_name: String,
}

/// Per-corpus code table: the built-ins plus codes registered at import.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTable {
    entries: BTreeMap<String, String>,
}

impl Default for CodeTable {
    fn default() -> Self {
        Self::builtin()
    }
}

fn is_code_shape(code: &str) -> bool {
    (2..=4).contains(&code.len()) && code.bytes().all(|b| b.is_ascii_uppercase())
}

impl CodeTable {
    pub fn builtin() -> Self {
        CodeTable {
            entries: BUILTIN_CODES
                .iter()
                .map(|(c, n)| (c.to_string(), n.to_string()))
                .collect(),
        }
    }

    pub fn is_builtin(code: &str) -> bool {
        BUILTIN_CODES.iter().any(|(c, _)| *c == code)
    }

    pub fn resolve(&self, code: &str) -> Result<AilmentCode, ModelError> {
        let key = code.trim().to_ascii_uppercase();
        self.entries
            .get(&key)
            .map(|full_name| AilmentCode {
                code: key.clone(),
                full_name: full_name.clone(),
            })
            .ok_or_else(|| ModelError::UnknownCode(code.to_string()))
    }

    pub fn contains(&self, code: &str) -> bool {
        self.entries.contains_key(&code.trim().to_ascii_uppercase())
    }

    /// Adds a code. Re-registering an identical pair is a no-op; anything that
    /// would break the code/name bijection or shadow a built-in is rejected.
    pub fn register(&mut self, code: &str, full_name: &str) -> Result<bool, ModelError> {
        let key = code.trim().to_ascii_uppercase();
        let full_name = full_name.trim();
        if !is_code_shape(&key) {
            return Err(ModelError::InvalidValue {
                field: "code",
                value: code.to_string(),
            });
        }
        if full_name.is_empty() {
            return Err(ModelError::InvalidValue {
                field: "full_name",
                value: full_name.to_string(),
            });
        }
        match self.entries.get(&key) {
            Some(existing) if existing == full_name => return Ok(false),
            Some(existing) => {
                return Err(ModelError::CodeConflict(format!(
                    "{key} already means {existing:?}"
                )))
            }
            None => {}
        }
        if let Some((other, _)) = self
            .entries
            .iter()
            .find(|(_, n)| n.eq_ignore_ascii_case(full_name))
        {
            return Err(ModelError::CodeConflict(format!(
                "{full_name:?} is already the name of {other}"
            )));
        }
        self.entries.insert(key, full_name.to_string());
        Ok(true)
    }

    pub fn iter(&self) -> impl Iterator<Item = AilmentCode> + '_ {
        self.entries.iter().map(|(c, n)| AilmentCode {
            code: c.clone(),
            full_name: n.clone(),
        })
    }

    /// Codes added on top of the built-ins.
    pub fn registered(&self) -> impl Iterator<Item = AilmentCode> + '_ {
        self.iter().filter(|c| !Self::is_builtin(&c.code))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Looks a code up in the built-in table.
pub fn resolve_ailment_code(code: &str) -> Result<AilmentCode, ModelError> {
    CodeTable::builtin().resolve(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_legend_codes() {
        let wi = resolve_ailment_code("WI").unwrap();
        assert_eq!(wi.full_name, "Women Infertility");
        let ana = resolve_ailment_code("ana").unwrap();
        assert_eq!(
            (ana.code.as_str(), ana.full_name.as_str()),
            ("ANA", "Anaemia")
        );
        assert_eq!(
            resolve_ailment_code("XYZ"),
            Err(ModelError::UnknownCode("XYZ".into()))
        );
    }

    #[test]
    fn resolve_is_idempotent_on_codes() {
        for (c, _) in BUILTIN_CODES {
            let once = resolve_ailment_code(&c.to_lowercase()).unwrap();
            assert_eq!(resolve_ailment_code(&once.code).unwrap(), once);
        }
    }

    #[test]
    fn builtin_table_is_the_twenty_legend_codes() {
        let table = CodeTable::builtin();
        assert_eq!(table.len(), 20);
        let names: std::collections::BTreeSet<_> = table.iter().map(|c| c.full_name).collect();
        assert_eq!(names.len(), 20);
        assert!(table.iter().all(|c| is_code_shape(&c.code)));
    }

    #[test]
    fn register_keeps_bijection() {
        let mut table = CodeTable::builtin();
        assert_eq!(table.register("typ", "Typhoid"), Ok(true));
        assert_eq!(table.register("TYP", "Typhoid"), Ok(false));
        assert!(matches!(
            table.register("TYP", "Fever"),
            Err(ModelError::CodeConflict(_))
        ));
        assert!(matches!(
            table.register("FEV", "typhoid"),
            Err(ModelError::CodeConflict(_))
        ));
        assert!(matches!(
            table.register("WI", "Something"),
            Err(ModelError::CodeConflict(_))
        ));
        assert!(table.register("TOOLONG", "x").is_err());
        assert_eq!(table.registered().count(), 1);
    }
}
