//! Loading inputs (files or `example:NAME`) and saving objects.

use std::fs;
use std::path::{Path, PathBuf};

use locality_core::locality::Locality;
use locality_core::partial::PartialGroupView;
use locality_core::zoo::{named_locality, ZooError};
use thiserror::Error;

use crate::format::{is_explicit, parse_description, parse_explicit, write_locality, write_partial_group, FormatError, Parsed};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error(transparent)]
    Zoo(#[from] ZooError),
}

/// A loaded input.
#[derive(Debug, Clone)]
pub enum Object {
    PartialGroup(PartialGroupView),
    Locality(Locality),
}

impl Object {
    pub fn view(&self) -> &PartialGroupView {
        match self {
            Object::PartialGroup(pg) => pg,
            Object::Locality(loc) => loc.view(),
        }
    }

    pub fn locality(&self) -> Option<&Locality> {
        match self {
            Object::Locality(loc) => Some(loc),
            Object::PartialGroup(_) => None,
        }
    }
}

/// Parses file contents in either format; `origin` is used in error messages.
pub fn load_str(text: &str, origin: &str) -> Result<Object, LoadError> {
    let wrap = |source| LoadError::Format { path: origin.to_string(), source };
    if is_explicit(text) {
        return Ok(match parse_explicit(text).map_err(wrap)? {
            Parsed::PartialGroup(pg) => Object::PartialGroup(pg),
            Parsed::Locality(loc) => Object::Locality(loc),
        });
    }
    let desc = parse_description(text).map_err(wrap)?;
    Ok(Object::Locality(desc.build()?.locality))
}

/// `example:free1`, `example:<locality name>`, or a path to a file.
pub fn load(input: &str) -> Result<Object, LoadError> {
    if let Some(name) = input.strip_prefix("example:") {
        if name == "free1" {
            return Ok(Object::PartialGroup(locality_core::partial::free_one_generator()));
        }
        return Ok(Object::Locality(named_locality(name)?.locality));
    }
    let text = fs::read_to_string(input).map_err(|source| LoadError::Io { path: input.into(), source })?;
    load_str(&text, input)
}

pub fn to_text(obj: &Object) -> Result<String, FormatError> {
    match obj {
        Object::PartialGroup(pg) => write_partial_group(pg),
        Object::Locality(loc) => Ok(write_locality(loc)),
    }
}

#[derive(Debug, Error)]
pub enum SaveError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub fn save(obj: &Object, path: &Path) -> Result<(), SaveError> {
    let text = to_text(obj)?;
    fs::write(path, text).map_err(|source| SaveError::Io { path: path.into(), source })
}
