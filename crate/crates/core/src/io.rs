//! JSON input formats for groups, cocycles, complexes and sector data.
//!
//! Parse failures are reported as [`Error::Validation`] carrying the JSON path
//! of the offending value.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cocycle::{h2_group, Cocycle};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::series::SectorData;
use crate::topology::{GSimplicialComplex, SimplicialComplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermutationGroupFile {
    pub points: usize,
    pub generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableGroupFile {
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleValuesFile {
    pub modulus: u64,
    pub values: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleClassFile {
    pub h2_class: usize,
    /// Coefficient modulus for the class enumeration; the group exponent when absent.
    #[serde(default)]
    pub modulus: Option<u64>,
}

/// A vertex label given as a string or an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(i64),
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Text(s) => f.write_str(s),
            Label::Number(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub vertices: Vec<Label>,
    pub maximal_simplices: Vec<Vec<usize>>,
    pub action: Vec<Vec<usize>>,
}

fn parse_as<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        Error::validation(format!("{what} at `{path}`: {}", e.into_inner()))
    })?;
    de.end().map_err(|e| Error::validation(format!("{what}: {e}")))?;
    Ok(value)
}

fn keys(text: &str, what: &str) -> Result<Vec<String>> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(map)) => Ok(map.keys().cloned().collect()),
        Ok(_) => Err(Error::validation(format!("{what} at `.`: expected a JSON object"))),
        Err(e) => Err(Error::validation(format!("{what}: {e}"))),
    }
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    let k = keys(text, "group file")?;
    if k.iter().any(|s| s == "table") {
        let f: TableGroupFile = parse_as(text, "group file")?;
        FiniteGroup::from_table(&f.table)
    } else if k.iter().any(|s| s == "points" || s == "generators") {
        let f: PermutationGroupFile = parse_as(text, "group file")?;
        FiniteGroup::from_permutations(f.points, &f.generators)
    } else {
        Err(Error::validation("group file at `.`: expected `points` and `generators`, or `table`"))
    }
}

/// Parses a cocycle over `group`, either by explicit values or by its index
/// in the class enumeration of `h2_group`.
pub fn parse_cocycle(text: &str, group: &Arc<FiniteGroup>) -> Result<Cocycle> {
    let k = keys(text, "cocycle file")?;
    if k.iter().any(|s| s == "h2_class") {
        let f: CocycleClassFile = parse_as(text, "cocycle file")?;
        let m = f.modulus.unwrap_or(group.exponent() as u64);
        let classes = h2_group(group, m)?;
        let n = classes.order();
        if f.h2_class as u64 >= n {
            return Err(Error::validation(format!(
                "cocycle file at `h2_class`: class {} out of range; H² has {n} classes at modulus {m}",
                f.h2_class
            )));
        }
        Ok(classes.class(f.h2_class)?.clone())
    } else {
        let f: CocycleValuesFile = parse_as(text, "cocycle file")?;
        Cocycle::new(group.clone(), f.modulus, f.values)
    }
}

/// Parses a complex with its action; the result is not yet regularized.
pub fn parse_complex(text: &str, group: &Arc<FiniteGroup>) -> Result<GSimplicialComplex> {
    let f: ComplexFile = parse_as(text, "complex file")?;
    let labels = f.vertices.iter().map(ToString::to_string).collect();
    let complex = SimplicialComplex::new(labels, &f.maximal_simplices)?;
    GSimplicialComplex::from_generator_images(group.clone(), complex, &f.action)
}

pub fn parse_sectors(text: &str) -> Result<SectorData> {
    parse_as(text, "sector file")
}

/// The complex file describing `x`, with one action row per element.
pub fn complex_to_file(x: &GSimplicialComplex) -> ComplexFile {
    ComplexFile {
        vertices: x.complex().labels().iter().cloned().map(Label::Text).collect(),
        maximal_simplices: x.complex().maximal_simplices(),
        action: (0..x.group().order()).map(|g| x.action(g).to_vec()).collect(),
    }
}
