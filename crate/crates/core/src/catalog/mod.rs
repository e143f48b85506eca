//! The six bundled decision models and catalog loading.
//!
//! Assets are compiled into the binary; [`load_dir`] reads the same layout
//! from disk so users can ship edited or extended catalogs.

mod slr;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dsl::{self, Diagnostic};
use crate::model::{validate_model, DecisionModel, DesignArea, Finding, Pattern, Vocabulary};

pub use slr::{slr_include, slr_quality_score, AssessmentError, QualityAssessment};

/// Name of the manifest file inside a catalog directory.
pub const MANIFEST_FILE: &str = "manifest.json";

const MANIFEST: &str = include_str!("../../assets/manifest.json");

const ASSETS: [(&str, &str); 6] = [
    ("algorithm-implementation.qdm", include_str!("../../assets/algorithm-implementation.qdm")),
    ("communication.qdm", include_str!("../../assets/communication.qdm")),
    ("data-processing.qdm", include_str!("../../assets/data-processing.qdm")),
    ("decomposition.qdm", include_str!("../../assets/decomposition.qdm")),
    ("fault-tolerance.qdm", include_str!("../../assets/fault-tolerance.qdm")),
    ("integration-optimization.qdm", include_str!("../../assets/integration-optimization.qdm")),
];

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("{file}: {} error(s), first: {}", diagnostics.iter().filter(|d| d.is_error()).count(), diagnostics.first().map(ToString::to_string).unwrap_or_default())]
    Parse { file: String, diagnostics: Vec<Diagnostic> },
    #[error("{file}: model fails validation: {}", findings.iter().map(|f| f.code.as_str()).collect::<Vec<_>>().join(", "))]
    Invalid { file: String, findings: Vec<Finding> },
    #[error("{file}: checksum {actual} does not match manifest {expected}")]
    ChecksumMismatch { file: String, expected: String, actual: String },
    #[error("{area}: manifest says {expected} patterns, model has {actual}")]
    CountMismatch { area: DesignArea, expected: usize, actual: usize },
    #[error("design area {0} is defined by more than one file")]
    DuplicateArea(DesignArea),
    #[error("manifest lists {0}, which is missing")]
    MissingFile(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("no .qdm files in {0}")]
    Empty(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub area: DesignArea,
    pub file: String,
    pub patterns: usize,
    #[serde(default)]
    pub refs: Vec<String>,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogManifest {
    pub total: usize,
    pub models: Vec<ManifestEntry>,
}

impl CatalogManifest {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        serde_json::from_str(text).map_err(|e| CatalogError::Manifest(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

/// Loaded, validated models keyed by design area.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    models: BTreeMap<DesignArea, DecisionModel>,
    manifest: CatalogManifest,
    vocabulary: Vocabulary,
    checksum: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load_sources(
    sources: Vec<(String, String)>,
    manifest: Option<CatalogManifest>,
    vocabulary: Vocabulary,
) -> Result<Catalog, CatalogError> {
    let mut models = BTreeMap::new();
    let mut entries = Vec::new();
    for (file, text) in &sources {
        let parsed = dsl::parse_with(text, &vocabulary)
            .map_err(|diagnostics| CatalogError::Parse { file: file.clone(), diagnostics })?;
        let report = validate_model(&parsed.model, &vocabulary);
        if !report.ok {
            let findings = report.errors().cloned().collect();
            return Err(CatalogError::Invalid { file: file.clone(), findings });
        }
        let model = parsed.model;
        if models.contains_key(&model.area) {
            return Err(CatalogError::DuplicateArea(model.area));
        }
        entries.push(ManifestEntry {
            area: model.area,
            file: file.clone(),
            patterns: model.patterns.len(),
            refs: model.meta.refs.clone(),
            sha256: sha256_hex(text.as_bytes()),
        });
        models.insert(model.area, model);
    }
    entries.sort_by_key(|e| e.area);

    if let Some(expected) = &manifest {
        for want in &expected.models {
            let Some(have) = entries.iter().find(|e| e.file == want.file) else {
                return Err(CatalogError::MissingFile(want.file.clone()));
            };
            if have.sha256 != want.sha256 {
                return Err(CatalogError::ChecksumMismatch {
                    file: want.file.clone(),
                    expected: want.sha256.clone(),
                    actual: have.sha256.clone(),
                });
            }
            if have.patterns != want.patterns || have.area != want.area {
                return Err(CatalogError::CountMismatch {
                    area: want.area,
                    expected: want.patterns,
                    actual: have.patterns,
                });
            }
        }
        let total: usize = entries.iter().map(|e| e.patterns).sum();
        if expected.total != total || expected.models.len() != entries.len() {
            return Err(CatalogError::Manifest(format!(
                "manifest lists {} files and {} patterns; loaded {} files and {total} patterns",
                expected.models.len(),
                expected.total,
                entries.len()
            )));
        }
    }

    let total = entries.iter().map(|e| e.patterns).sum();
    let digest_input: String = entries.iter().map(|e| format!("{}:{}\n", e.area, e.sha256)).collect();
    Ok(Catalog {
        models,
        checksum: sha256_hex(digest_input.as_bytes()),
        manifest: CatalogManifest { total, models: entries },
        vocabulary,
    })
}

fn io_err(path: &Path, source: std::io::Error) -> CatalogError {
    CatalogError::Io { path: path.to_path_buf(), source }
}

/// The bundled catalog, checked against its manifest.
pub fn load_builtin() -> Result<Catalog, CatalogError> {
    let sources = ASSETS.iter().map(|(f, t)| (f.to_string(), t.to_string())).collect();
    load_sources(sources, Some(CatalogManifest::parse(MANIFEST)?), Vocabulary::standard())
}

/// Loads every `*.qdm` file in `dir`. A `manifest.json` beside them, if
/// present, must match.
pub fn load_dir(dir: &Path) -> Result<Catalog, CatalogError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == dsl::EXTENSION) && p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CatalogError::Empty(dir.to_path_buf()));
    }
    let mut sources = Vec::new();
    for path in &files {
        let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let text = String::from_utf8(bytes).map_err(|e| {
            let diagnostics = dsl::parse_bytes(e.as_bytes()).err().unwrap_or_default();
            CatalogError::Parse { file: name.clone(), diagnostics }
        })?;
        sources.push((name, text));
    }
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest = match fs::read_to_string(&manifest_path) {
        Ok(text) => Some(CatalogManifest::parse(&text)?),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(CatalogError::Io { path: manifest_path, source: e }),
    };
    load_sources(sources, manifest, Vocabulary::standard())
}

/// Writes the bundled `.qdm` files and manifest into `dir`.
pub fn write_builtin(dir: &Path) -> Result<(), CatalogError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (file, text) in ASSETS.into_iter().chain([(MANIFEST_FILE, MANIFEST)]) {
        let path = dir.join(file);
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

/// Bundled asset sources as `(file name, text)`.
pub fn builtin_sources() -> impl Iterator<Item = (&'static str, &'static str)> {
    ASSETS.into_iter()
}

impl Catalog {
    pub fn model(&self, area: DesignArea) -> Option<&DecisionModel> {
        self.models.get(&area)
    }

    /// Models in area id order.
    pub fn models(&self) -> impl Iterator<Item = &DecisionModel> {
        self.models.values()
    }

    pub fn areas(&self) -> impl Iterator<Item = DesignArea> + '_ {
        self.models.keys().copied()
    }

    pub fn pattern(&self, area: DesignArea, id: &str) -> Option<&Pattern> {
        self.models.get(&area)?.patterns.get(id)
    }

    /// Every catalog entry with the given id, one per area that defines it.
    pub fn find(&self, id: &str) -> Vec<&Pattern> {
        self.models.values().filter_map(|m| m.patterns.get(id)).collect()
    }

    pub fn counts(&self) -> BTreeMap<DesignArea, usize> {
        self.models.iter().map(|(a, m)| (*a, m.patterns.len())).collect()
    }

    pub fn total(&self) -> usize {
        self.manifest.total
    }

    pub fn manifest(&self) -> &CatalogManifest {
        &self.manifest
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    /// Digest over every model file; changes whenever any model changes.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }
}
