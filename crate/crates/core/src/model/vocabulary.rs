//! Controlled quality-attribute vocabulary with an alias table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::validate::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualityAttribute {
    pub id: String,
    pub display_name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    /// Set for attributes that are phrased negatively (cost, latency, ...),
    /// where "improves" means the attribute gets smaller.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarity_note: Option<String>,
}

impl QualityAttribute {
    pub fn new(id: &str, display_name: &str) -> Self {
        QualityAttribute {
            id: id.to_string(),
            display_name: display_name.to_string(),
            aliases: Vec::new(),
            polarity_note: None,
        }
    }

    fn alias(mut self, alias: &str) -> Self {
        self.aliases.push(alias.to_string());
        self
    }

    fn negative(mut self, note: &str) -> Self {
        self.polarity_note = Some(note.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VocabularyError {
    #[error("attribute id `{0}` is not a lowercase-kebab identifier")]
    InvalidId(String),
    #[error("attribute `{0}` is defined twice")]
    DuplicateId(String),
    #[error("alias `{alias}` maps to both `{first}` and `{second}`")]
    AmbiguousAlias { alias: String, first: String, second: String },
    #[error("compound `{compound}` names unknown attribute `{attribute}`")]
    UnknownCompoundPart { compound: String, attribute: String },
}

/// Outcome of resolving an authored QA term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolved {
    /// Canonical ids; more than one for compound phrases like "cost and effort".
    pub ids: Vec<String>,
    /// True when the term was not already a canonical id.
    pub via_alias: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    attributes: BTreeMap<String, QualityAttribute>,
    aliases: BTreeMap<String, String>,
    compounds: BTreeMap<String, Vec<String>>,
}

fn normalize(term: &str) -> String {
    term.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

impl Vocabulary {
    /// Builds a vocabulary; display names are implicit aliases.
    pub fn new(
        attributes: Vec<QualityAttribute>,
        compounds: Vec<(String, Vec<String>)>,
    ) -> Result<Self, VocabularyError> {
        let mut by_id = BTreeMap::new();
        let mut aliases: BTreeMap<String, String> = BTreeMap::new();
        for attr in attributes {
            if !is_identifier(&attr.id) {
                return Err(VocabularyError::InvalidId(attr.id));
            }
            if by_id.contains_key(&attr.id) {
                return Err(VocabularyError::DuplicateId(attr.id));
            }
            let names = std::iter::once(&attr.display_name).chain(attr.aliases.iter());
            for name in names {
                let key = normalize(name);
                if key == attr.id {
                    continue;
                }
                match aliases.get(&key) {
                    Some(existing) if existing != &attr.id => {
                        return Err(VocabularyError::AmbiguousAlias {
                            alias: key,
                            first: existing.clone(),
                            second: attr.id.clone(),
                        })
                    }
                    _ => {
                        aliases.insert(key, attr.id.clone());
                    }
                }
            }
            by_id.insert(attr.id.clone(), attr);
        }
        // An alias may not shadow another attribute's canonical id.
        for (alias, target) in &aliases {
            if by_id.contains_key(alias) && alias != target {
                return Err(VocabularyError::AmbiguousAlias {
                    alias: alias.clone(),
                    first: alias.clone(),
                    second: target.clone(),
                });
            }
        }
        let mut compound_map = BTreeMap::new();
        for (phrase, parts) in compounds {
            for part in &parts {
                if !by_id.contains_key(part) {
                    return Err(VocabularyError::UnknownCompoundPart {
                        compound: phrase,
                        attribute: part.clone(),
                    });
                }
            }
            compound_map.insert(normalize(&phrase), parts);
        }
        Ok(Vocabulary { attributes: by_id, aliases, compounds: compound_map })
    }

    /// The vocabulary used by the bundled catalog.
    pub fn standard() -> Self {
        let qa = QualityAttribute::new;
        let attributes = vec![
            qa("accuracy", "Accuracy").alias("precision"),
            qa("adaptability", "Adaptability"),
            qa("availability", "Availability"),
            qa("capacity", "Capacity").alias("limited capacity"),
            qa("compatibility", "Compatibility"),
            qa("complexity", "Complexity")
                .alias("implementation complexity")
                .alias("low gate complexity")
                .alias("gate complexity")
                .negative("phrased negatively: `degrades complexity` means more complex"),
            qa("configurability", "Configurability"),
            qa("cost", "Cost")
                .alias("cost-efficiency")
                .alias("cost efficiency")
                .negative("phrased negatively: `improves cost` means cheaper"),
            qa("discoverability", "Discoverability"),
            qa("ease-of-implementation", "Ease of Implementation"),
            qa("effort", "Effort")
                .alias("development effort")
                .negative("phrased negatively: `degrades effort` means more effort"),
            qa("efficiency", "Efficiency"),
            qa("error-rate", "Error Rate")
                .alias("error")
                .alias("error rates")
                .negative("phrased negatively: `degrades error-rate` means more errors"),
            qa("extensibility", "Extensibility"),
            qa("fault-detection", "Fault Detection"),
            qa("fault-diagnosis", "Fault Diagnosis"),
            qa("fault-isolation", "Fault Isolation"),
            qa("fault-recovery", "Fault Recovery"),
            qa("fault-tolerance", "Fault Tolerance"),
            qa("flexibility", "Flexibility"),
            qa("functionality", "Functionality"),
            qa("interoperability", "Interoperability"),
            qa("latency", "Latency")
                .alias("latency issues")
                .negative("phrased negatively: `degrades latency` means slower responses"),
            qa("loss-tolerance", "Loss Tolerance"),
            qa("maintainability", "Maintainability"),
            qa("modularity", "Modularity"),
            qa("performance", "Performance"),
            qa("portability", "Portability"),
            qa("reliability", "Reliability"),
            qa("reusability", "Reusability"),
            qa("scalability", "Scalability"),
            qa("security", "Security"),
            qa("testability", "Testability"),
            qa("usability", "Usability"),
        ];
        let compounds =
            vec![("cost and effort".to_string(), vec!["cost".to_string(), "effort".to_string()])];
        Vocabulary::new(attributes, compounds).expect("standard vocabulary is consistent")
    }

    pub fn contains(&self, id: &str) -> bool {
        self.attributes.contains_key(id)
    }

    pub fn get(&self, id: &str) -> Option<&QualityAttribute> {
        self.attributes.get(id)
    }

    pub fn attributes(&self) -> impl Iterator<Item = &QualityAttribute> {
        self.attributes.values()
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    /// Resolves a canonical id, alias or compound phrase (case-insensitive).
    pub fn resolve(&self, term: &str) -> Option<Resolved> {
        if self.attributes.contains_key(term) {
            return Some(Resolved { ids: vec![term.to_string()], via_alias: false });
        }
        let key = normalize(term);
        if let Some(id) = self.aliases.get(&key) {
            return Some(Resolved { ids: vec![id.clone()], via_alias: true });
        }
        if self.attributes.contains_key(&key) {
            return Some(Resolved { ids: vec![key], via_alias: true });
        }
        self.compounds
            .get(&key)
            .map(|ids| Resolved { ids: ids.clone(), via_alias: true })
    }
}
