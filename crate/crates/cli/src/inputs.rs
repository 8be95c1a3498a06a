//! Resolving command-line arguments to engine objects, recording a digest of
//! every input that was read.

use std::path::Path;
use std::sync::Arc;

use orbk::cocycle::{h2_group, Cocycle};
use orbk::group::{named, FiniteGroup};
use orbk::io::{parse_cocycle, parse_complex, parse_group};
use orbk::topology::GSimplicialComplex;
use orbk::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub role: &'static str,
    pub source: String,
    /// SHA-256 of the file contents, absent for builtin names.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Debug, Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

fn sha256(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl Inputs {
    fn file(&mut self, role: &'static str, path: &Path) -> Result<String> {
        let text = read(path)?;
        self.digests.push(InputDigest { role, source: path.display().to_string(), sha256: Some(sha256(&text)) });
        Ok(text)
    }

    /// A group file, or a builtin name when no such file exists.
    pub fn group(&mut self, arg: &str) -> Result<Arc<FiniteGroup>> {
        let path = Path::new(arg);
        if path.exists() {
            let text = self.file("group", path)?;
            let group = parse_group(&text).map_err(|e| prefix(path, e))?;
            return Ok(Arc::new(group));
        }
        match named::by_name(arg) {
            Some(group) => {
                self.digests.push(InputDigest { role: "group", source: format!("builtin:{arg}"), sha256: None });
                Ok(Arc::new(group?))
            }
            None => Err(Error::validation(format!("`{arg}` is neither a readable file nor a builtin group name"))),
        }
    }

    /// A complex file over `group`, regularized, together with the cell
    /// counts of the complex as given.
    pub fn complex(&mut self, path: &Path, group: &Arc<FiniteGroup>) -> Result<(GSimplicialComplex, Vec<usize>)> {
        let text = self.file("complex", path)?;
        let x = parse_complex(&text, group).map_err(|e| prefix(path, e))?;
        let given = x.complex().cell_counts();
        Ok((x.regularize()?, given))
    }

    pub fn path(&mut self, role: &'static str, path: &Path) -> Result<String> {
        self.file(role, path)
    }

    /// A cocycle file, or an index into the classes at `modulus`. No
    /// argument means the zero cocycle.
    pub fn cocycle(&mut self, arg: Option<&str>, modulus: Option<u64>, group: &Arc<FiniteGroup>) -> Result<Cocycle> {
        let m = modulus.unwrap_or(group.exponent() as u64);
        let Some(arg) = arg else {
            return Ok(Cocycle::zero(group.clone(), m));
        };
        let path = Path::new(arg);
        if path.exists() {
            if modulus.is_some() {
                return Err(Error::validation("--modulus applies to an indexed cocycle, not a cocycle file"));
            }
            let text = self.file("cocycle", path)?;
            return parse_cocycle(&text, group).map_err(|e| prefix(path, e));
        }
        let index: usize = arg
            .parse()
            .map_err(|_| Error::validation(format!("`{arg}` is neither a readable cocycle file nor a class index")))?;
        let classes = h2_group(group, m)?;
        if index as u64 >= classes.order() {
            return Err(Error::validation(format!(
                "class {index} out of range; H² has {} classes at modulus {m}",
                classes.order()
            )));
        }
        self.digests.push(InputDigest { role: "cocycle", source: format!("h2-class:{index}@{m}"), sha256: None });
        Ok(classes.class(index)?.clone())
    }
}

fn prefix(path: &Path, e: Error) -> Error {
    match e {
        Error::Validation(msg) => Error::Validation(format!("{}: {msg}", path.display())),
        other => other,
    }
}
