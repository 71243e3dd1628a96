//! JSON code files. Parsing then writing yields the canonical text: fixed
//! key order, generator in reduced echelon form, no whitespace.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cyclic::{CyclicCode, CyclicError};
use crate::gf::{Fe, Field, GfError};
use crate::lincode::{CodeError, LinearCode};
use crate::polyring::Poly;
use crate::qc::{QCCode, QcError};

#[derive(Debug, Error)]
pub enum CodeFileError {
    #[error("malformed code file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing field `{0}` for this kind")]
    Missing(&'static str),
    #[error("modulus {given:?} is not the canonical modulus {canonical:?} of GF({p}^{k})")]
    Modulus {
        p: u32,
        k: u32,
        given: Vec<u32>,
        canonical: Vec<u32>,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Qc(#[from] QcError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Linear,
    Cyclic,
    Qc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub field: FieldSpec,
    pub kind: CodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gpoly: Option<Vec<Fe>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen: Option<Vec<Vec<Fe>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, Value>,
}

/// A parsed code.
#[derive(Clone, Debug)]
pub enum Code {
    Linear(LinearCode),
    Cyclic(CyclicCode),
    Qc(QCCode),
}

impl Code {
    pub fn linear(&self) -> LinearCode {
        match self {
            Code::Linear(c) => c.clone(),
            Code::Cyclic(c) => c.to_linear(),
            Code::Qc(c) => c.code().clone(),
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            Code::Linear(c) => c.field(),
            Code::Cyclic(c) => c.field(),
            Code::Qc(c) => c.field(),
        }
    }
}

fn field_spec(f: &Field) -> FieldSpec {
    FieldSpec {
        p: f.characteristic(),
        k: f.degree(),
        modulus: f.modulus().map(<[u32]>::to_vec),
    }
}

impl FieldSpec {
    pub fn field(&self) -> Result<Field, CodeFileError> {
        let f = Field::new(self.p, self.k)?;
        if let Some(given) = &self.modulus {
            let canonical = f
                .modulus()
                .map(<[u32]>::to_vec)
                .unwrap_or_else(|| vec![0, 1]);
            if *given != canonical {
                return Err(CodeFileError::Modulus {
                    p: self.p,
                    k: self.k,
                    given: given.clone(),
                    canonical,
                });
            }
        }
        Ok(f)
    }
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<CodeFile, CodeFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("code files serialize")
    }

    pub fn from_linear(code: &LinearCode) -> CodeFile {
        CodeFile {
            field: field_spec(code.field()),
            kind: CodeKind::Linear,
            n: Some(code.len()),
            gpoly: None,
            gen: Some(code.generator().to_vec()),
            l: None,
            m: None,
            meta: BTreeMap::new(),
        }
    }

    pub fn from_cyclic(code: &CyclicCode) -> CodeFile {
        CodeFile {
            field: field_spec(code.field()),
            kind: CodeKind::Cyclic,
            n: Some(code.len()),
            gpoly: Some(code.gpoly().coeffs().to_vec()),
            gen: None,
            l: None,
            m: None,
            meta: BTreeMap::new(),
        }
    }

    pub fn from_qc(code: &QCCode) -> CodeFile {
        CodeFile {
            field: field_spec(code.field()),
            kind: CodeKind::Qc,
            n: Some(code.len()),
            gpoly: None,
            gen: Some(code.code().generator().to_vec()),
            l: Some(code.index()),
            m: Some(code.co_index()),
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> CodeFile {
        self.meta.insert(key.to_string(), value);
        self
    }

    /// Builds the code object and rewrites the file in canonical form.
    pub fn load(&self) -> Result<(Code, CodeFile), CodeFileError> {
        let field = self.field.field()?;
        let code = match self.kind {
            CodeKind::Linear => {
                let gen = self.gen.clone().ok_or(CodeFileError::Missing("gen"))?;
                let n = self.n.ok_or(CodeFileError::Missing("n"))?;
                Code::Linear(LinearCode::from_rows(&field, n, check(&field, gen)?)?)
            }
            CodeKind::Cyclic => {
                let n = self.n.ok_or(CodeFileError::Missing("n"))?;
                let g = self.gpoly.clone().ok_or(CodeFileError::Missing("gpoly"))?;
                let g = Poly::new(&field, check(&field, vec![g])?.remove(0));
                Code::Cyclic(CyclicCode::from_gpoly(&field, n, &g)?)
            }
            CodeKind::Qc => {
                let l = self.l.ok_or(CodeFileError::Missing("l"))?;
                let m = self.m.ok_or(CodeFileError::Missing("m"))?;
                let gen = self.gen.clone().ok_or(CodeFileError::Missing("gen"))?;
                if let Some(n) = self.n {
                    if n != l * m {
                        return Err(CodeFileError::Invalid(format!(
                            "n = {n} is not l*m = {}",
                            l * m
                        )));
                    }
                }
                let lin = LinearCode::from_rows(&field, l * m, check(&field, gen)?)?;
                Code::Qc(QCCode::new(lin, l)?)
            }
        };
        let mut canon = match &code {
            Code::Linear(c) => CodeFile::from_linear(c),
            Code::Cyclic(c) => CodeFile::from_cyclic(c),
            Code::Qc(c) => CodeFile::from_qc(c),
        };
        canon.meta = self.meta.clone();
        Ok((code, canon))
    }
}

fn check(field: &Field, rows: Vec<Vec<Fe>>) -> Result<Vec<Vec<Fe>>, CodeFileError> {
    for r in &rows {
        if let Some(&x) = r.iter().find(|&&x| !field.contains(x)) {
            return Err(CodeError::InvalidEntry(x, field.to_string()).into());
        }
    }
    Ok(rows)
}
