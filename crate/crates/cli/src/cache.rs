//! Advisory on-disk cache of indecomposable modules.
//!
//! Entries are keyed by schema, preset, ring and engine version. A missing,
//! unreadable or inconsistent entry is rebuilt and overwritten; the cache
//! never changes a result, only how long it takes.

use std::fs;
use std::path::{Path, PathBuf};

use ptilt_core::ring::Ring;
use ptilt_core::rootdata::WeylGroup;
use ptilt_core::soergel::{GradedModule, Library, LibraryOptions, ModuleRepr};
use ptilt_core::ENGINE_VERSION;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::emit::{write_atomic, SCHEMA_VERSION};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CacheKey {
    schema_version: String,
    preset: String,
    ring: String,
    prime: Option<u64>,
    engine: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    key: CacheKey,
    modules: Vec<ModuleRepr>,
}

/// How a library was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    /// An entry existed but could not be used and was replaced.
    Rebuilt,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn key<R: Ring>(group: &WeylGroup, ring: &R) -> CacheKey {
        CacheKey {
            schema_version: SCHEMA_VERSION.to_string(),
            preset: group.datum().preset.to_string(),
            ring: ring.kind().tag(),
            prime: ring.kind().prime(),
            engine: ENGINE_VERSION.to_string(),
        }
    }

    /// Path of the entry for a group and ring.
    pub fn path<R: Ring>(&self, group: &WeylGroup, ring: &R) -> PathBuf {
        let key = serde_json::to_string(&Self::key(group, ring)).expect("key serializes");
        let digest = hex::encode(Sha256::digest(key.as_bytes()));
        self.dir.join(format!("{}.json", &digest[..24]))
    }

    fn load<R: Ring>(&self, group: &WeylGroup, ring: &R) -> Option<Library<R>> {
        let text = fs::read_to_string(self.path(group, ring)).ok()?;
        let file: CacheFile = serde_json::from_str(&text).ok()?;
        if file.key != Self::key(group, ring) {
            return None;
        }
        let modules = file
            .modules
            .iter()
            .map(|m| GradedModule::from_repr(ring.clone(), m))
            .collect::<ptilt_core::Result<Vec<_>>>()
            .ok()?;
        Library::from_modules(group, ring.clone(), modules).ok()
    }

    fn store<R: Ring>(&self, lib: &Library<R>) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)?;
        let file = CacheFile {
            key: Self::key(lib.group(), lib.ring()),
            modules: lib.modules().iter().map(GradedModule::to_repr).collect(),
        };
        write_atomic(&self.path(lib.group(), lib.ring()), serde_json::to_string(&file).expect("serializable").as_bytes())
    }
}

/// Loads the library from the cache or builds and stores it.
pub fn load_or_build<R: Ring>(
    cache: Option<&Cache>,
    group: &WeylGroup,
    ring: R,
    options: LibraryOptions,
) -> Result<(Library<R>, CacheStatus), CliError> {
    let Some(cache) = cache else {
        return Ok((Library::build(group, ring, options)?, CacheStatus::Disabled));
    };
    if let Some(lib) = cache.load(group, &ring) {
        return Ok((lib, CacheStatus::Hit));
    }
    let existed = cache.path(group, &ring).exists();
    let lib = Library::build(group, ring, options)?;
    cache.store(&lib)?;
    Ok((lib, if existed { CacheStatus::Rebuilt } else { CacheStatus::Miss }))
}
