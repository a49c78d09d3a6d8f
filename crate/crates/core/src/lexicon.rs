//! The thesaurus: lemma → senses → coded meaning tags, plus the target
//! lexicon that maps tags to target-language words.
//!
//! The thesaurus lives in a JSON file whose *key order is data*: senses are
//! listed by descending frequency and meanings in thesaurus order, and the
//! whole disambiguation scheme leans on that ordering. Parsing therefore
//! preserves order exactly, rejects duplicate keys instead of silently
//! keeping one, and reports positions for everything it refuses.
//!
//! Meaning codes such as `193.5` are opaque labels inherited from the
//! thesaurus' numbering; they are compared for equality and never as
//! numbers.

use std::fmt;
use std::marker::PhantomData;
use std::path::Path;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grammar::Category;

/// Reserved top-level key introducing the target lexicon.
pub const TARGET_KEY: &str = "@TARGET";

/// One coded meaning: an opaque thesaurus code and its concept tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeaningTag {
    pub code: String,
    pub tag: String,
}

/// One sense of a lemma: its gloss and the ordered meanings beneath it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenseEntry {
    pub sense: String,
    pub meanings: Vec<MeaningTag>,
}

/// A target-language word and its syntactic category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetEntry {
    pub lemma: String,
    pub category: Category,
}

/// The full bilingual thesaurus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thesaurus {
    entries: Vec<(String, Vec<SenseEntry>)>,
    target: Vec<(String, TargetEntry)>,
}

impl Thesaurus {
    /// Source-language entries in file order.
    pub fn entries(&self) -> &[(String, Vec<SenseEntry>)] {
        &self.entries
    }

    /// The senses recorded for a lemma; empty when the lemma is unknown.
    pub fn senses(&self, lemma: &str) -> &[SenseEntry] {
        self.entries
            .iter()
            .find(|(l, _)| l == lemma)
            .map_or(&[], |(_, senses)| senses.as_slice())
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.iter().any(|(l, _)| l == lemma)
    }

    /// The target lexicon entry for a meaning tag.
    pub fn target(&self, tag: &str) -> Option<&TargetEntry> {
        self.target
            .iter()
            .find(|(t, _)| t == tag)
            .map(|(_, entry)| entry)
    }

    pub fn target_entries(&self) -> &[(String, TargetEntry)] {
        &self.target
    }

    /// Parses a thesaurus from JSON text.
    pub fn from_json(text: &str) -> Result<Thesaurus> {
        Ok(serde_json::from_str(text)?)
    }

    /// Serializes back to JSON, key order intact, so that loading the
    /// output reproduces `self` exactly.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("thesaurus serialization cannot fail")
    }
}

/// Reads and parses a thesaurus file.
pub fn load_thesaurus(path: &Path) -> Result<Thesaurus> {
    let text = std::fs::read_to_string(path)?;
    Thesaurus::from_json(&text)
}

/// Looks up every sense of a lemma. Missing lemmas simply yield nothing;
/// out-of-vocabulary handling is the caller's decision.
pub fn lookup<'a>(thesaurus: &'a Thesaurus, lemma: &str) -> &'a [SenseEntry] {
    thesaurus.senses(lemma)
}

/// A lemma's meanings with the sense structure flattened away.
///
/// Senses are discarded and their `(code, tag)` pairs concatenated in file
/// order. Repeated tags are kept — their multiplicity is the frequency
/// signal the meaning selector uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapsedMeanings {
    pub lemma: String,
    pub meanings: Vec<MeaningTag>,
}

impl CollapsedMeanings {
    pub fn len(&self) -> usize {
        self.meanings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meanings.is_empty()
    }

    /// How many times a tag occurs across all senses.
    pub fn multiplicity(&self, tag: &str) -> usize {
        self.meanings.iter().filter(|m| m.tag == tag).count()
    }
}

impl fmt::Display for CollapsedMeanings {
    /// The compact dictionary-entry notation: `{code tag, code tag, …}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.meanings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} {}", m.code, m.tag)?;
        }
        write!(f, "}}")
    }
}

/// Flattens a lemma's senses into one ordered meaning list.
pub fn collapse(lemma: &str, senses: &[SenseEntry]) -> CollapsedMeanings {
    let meanings = senses
        .iter()
        .flat_map(|s| s.meanings.iter().cloned())
        .collect();
    CollapsedMeanings {
        lemma: lemma.to_string(),
        meanings,
    }
}

// --- JSON wire format ----------------------------------------------------
//
// {
//   "ČOVJE-": { "mankind": { "193.5": "LITTLENESS", ... }, ... },
//   ...,
//   "@TARGET": { "MANKIND": { "lemma": "man", "category": "n" }, ... }
// }
//
// Deserialization is hand-rolled (rather than into serde_json's map type)
// for three reasons: key order must survive, duplicate keys must be
// errors, and validation failures should carry the parser's position.

/// An ordered JSON object that rejects duplicate keys.
struct OrderedMap<V>(Vec<(String, V)>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for OrderedMap<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MapVisitor<V>(PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for MapVisitor<V> {
            type Value = OrderedMap<V>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a JSON object")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut pairs: Vec<(String, V)> = Vec::new();
                while let Some(key) = access.next_key::<String>()? {
                    if pairs.iter().any(|(k, _)| *k == key) {
                        return Err(de::Error::custom(format!("duplicate key {key:?}")));
                    }
                    let value = access.next_value()?;
                    pairs.push((key, value));
                }
                Ok(OrderedMap(pairs))
            }
        }

        deserializer.deserialize_map(MapVisitor(PhantomData))
    }
}

impl<'de> Deserialize<'de> for Thesaurus {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ThesaurusVisitor;

        impl<'de> Visitor<'de> for ThesaurusVisitor {
            type Value = Thesaurus;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a thesaurus object")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut entries: Vec<(String, Vec<SenseEntry>)> = Vec::new();
                let mut target: Vec<(String, TargetEntry)> = Vec::new();
                let mut saw_target = false;

                while let Some(key) = access.next_key::<String>()? {
                    if key == TARGET_KEY {
                        if saw_target {
                            return Err(de::Error::custom("duplicate @TARGET section"));
                        }
                        saw_target = true;
                        let raw: OrderedMap<RawTarget> = access.next_value()?;
                        for (tag, raw_entry) in raw.0 {
                            validate_tag(&tag)?;
                            target.push((tag, raw_entry.into_entry::<A::Error>()?));
                        }
                    } else {
                        if !key.ends_with('-') || key.len() == 1 {
                            return Err(de::Error::custom(format!(
                                "lemma {key:?} must be a stem ending in '-'"
                            )));
                        }
                        if entries.iter().any(|(l, _)| *l == key) {
                            return Err(de::Error::custom(format!("duplicate lemma {key:?}")));
                        }
                        let raw: OrderedMap<OrderedMap<String>> = access.next_value()?;
                        let mut senses = Vec::new();
                        for (sense, meanings) in raw.0 {
                            let meanings = meanings
                                .0
                                .into_iter()
                                .map(|(code, tag)| {
                                    validate_tag(&tag)?;
                                    Ok(MeaningTag { code, tag })
                                })
                                .collect::<std::result::Result<Vec<_>, A::Error>>()?;
                            senses.push(SenseEntry { sense, meanings });
                        }
                        entries.push((key, senses));
                    }
                }
                Ok(Thesaurus { entries, target })
            }
        }

        fn validate_tag<E: de::Error>(tag: &str) -> std::result::Result<(), E> {
            if tag.is_empty() || tag.chars().any(|c| c.is_lowercase()) {
                return Err(de::Error::custom(format!(
                    "meaning tag {tag:?} must be a non-empty uppercase label"
                )));
            }
            Ok(())
        }

        deserializer.deserialize_map(ThesaurusVisitor)
    }
}

/// The target entry as written in JSON, before category parsing.
#[derive(serde::Deserialize)]
struct RawTarget {
    lemma: String,
    category: String,
}

impl RawTarget {
    fn into_entry<E: de::Error>(self) -> std::result::Result<TargetEntry, E> {
        if self.lemma.is_empty() || self.lemma.contains(char::is_whitespace) {
            return Err(de::Error::custom(format!(
                "target lemma {:?} must be a single word",
                self.lemma
            )));
        }
        let category =
            Category::parse(&self.category).map_err(|e| de::Error::custom(e.to_string()))?;
        Ok(TargetEntry {
            lemma: self.lemma,
            category,
        })
    }
}

impl Serialize for Thesaurus {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Senses<'a>(&'a [SenseEntry]);
        impl Serialize for Senses<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for sense in self.0 {
                    map.serialize_entry(&sense.sense, &Meanings(&sense.meanings))?;
                }
                map.end()
            }
        }
        struct Meanings<'a>(&'a [MeaningTag]);
        impl Serialize for Meanings<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for m in self.0 {
                    map.serialize_entry(&m.code, &m.tag)?;
                }
                map.end()
            }
        }
        struct Targets<'a>(&'a [(String, TargetEntry)]);
        impl Serialize for Targets<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (tag, entry) in self.0 {
                    map.serialize_entry(tag, &Target(entry))?;
                }
                map.end()
            }
        }
        struct Target<'a>(&'a TargetEntry);
        impl Serialize for Target<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("lemma", &self.0.lemma)?;
                map.serialize_entry("category", &self.0.category)?;
                map.end()
            }
        }

        let sections = self.entries.len() + usize::from(!self.target.is_empty());
        let mut map = serializer.serialize_map(Some(sections))?;
        for (lemma, senses) in &self.entries {
            map.serialize_entry(lemma, &Senses(senses))?;
        }
        if !self.target.is_empty() {
            map.serialize_entry(TARGET_KEY, &Targets(&self.target))?;
        }
        map.end()
    }
}
