//! Pipeline configuration: an INI-style key=value file, flag overrides,
//! and a stable hash of the effective settings.
//!
//! The hash is computed over a canonical serialization (every key, sorted,
//! one `key=value` per line), so two runs report the same hash exactly when
//! every effective setting matches — which is also the precondition for
//! their reports being byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use prevod_core::{Error, Result};
use sha2::{Digest, Sha256};

/// Alignment strategies selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignMethod {
    /// Rank words by unigram surprisal and pair rank for rank.
    Entropy,
    /// Minimize total bigram-surprisal mismatch.
    Bigram,
    /// Reference optimizer: exhaustive enumeration, short pairs only.
    Oracle,
}

impl AlignMethod {
    pub fn parse(text: &str) -> Result<AlignMethod> {
        match text {
            "entropy" => Ok(AlignMethod::Entropy),
            "bigram" => Ok(AlignMethod::Bigram),
            "oracle" => Ok(AlignMethod::Oracle),
            other => Err(config_error(format!(
                "unknown alignment method {other:?} (expected entropy, bigram, or oracle)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            AlignMethod::Entropy => "entropy",
            AlignMethod::Bigram => "bigram",
            AlignMethod::Oracle => "oracle",
        }
    }
}

/// Every setting a pipeline run accepts. File paths are optional; each
/// subcommand demands the ones it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub target_corpus: Option<PathBuf>,
    pub thesaurus: Option<PathBuf>,
    pub exceptions: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub pairs: Option<PathBuf>,
    pub vocab_cap: usize,
    pub codec: bool,
    pub align_method: AlignMethod,
    pub min_support: usize,
    pub trace: bool,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            corpus: None,
            target_corpus: None,
            thesaurus: None,
            exceptions: None,
            rules: None,
            pairs: None,
            vocab_cap: 10_000,
            codec: false,
            align_method: AlignMethod::Bigram,
            min_support: 1,
            trace: false,
            seed: 0,
        }
    }
}

fn config_error(reason: String) -> Error {
    Error::Io(std::io::Error::new(
        std::io::ErrorKind::InvalidInput,
        reason,
    ))
}

fn parse_bool(value: &str, line: usize) -> Result<bool> {
    match value {
        "true" | "on" | "1" => Ok(true),
        "false" | "off" | "0" => Ok(false),
        other => Err(Error::BadTableLine {
            line,
            reason: format!("expected a boolean, got {other:?}"),
        }),
    }
}

impl PipelineConfig {
    /// Parses the INI-style text: `key = value` lines, `#` or `;` comments,
    /// `[section]` headers tolerated and ignored, unknown keys rejected.
    pub fn from_ini(text: &str) -> Result<PipelineConfig> {
        let mut config = PipelineConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                continue;
            }
            let number = idx + 1;
            let bad = |reason: String| Error::BadTableLine {
                line: number,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value".to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            let int = |name: &str| -> Result<usize> {
                value
                    .parse()
                    .map_err(|_| bad(format!("{name} must be a non-negative integer")))
            };
            match key {
                "corpus" => config.corpus = Some(PathBuf::from(value)),
                "target_corpus" => config.target_corpus = Some(PathBuf::from(value)),
                "thesaurus" => config.thesaurus = Some(PathBuf::from(value)),
                "exceptions" => config.exceptions = Some(PathBuf::from(value)),
                "rules" => config.rules = Some(PathBuf::from(value)),
                "pairs" => config.pairs = Some(PathBuf::from(value)),
                "vocab_cap" => config.vocab_cap = int("vocab_cap")?,
                "min_support" => config.min_support = int("min_support")?,
                "seed" => {
                    config.seed = value
                        .parse()
                        .map_err(|_| bad("seed must be a non-negative integer".to_string()))?
                }
                "codec" => config.codec = parse_bool(value, number)?,
                "trace" => config.trace = parse_bool(value, number)?,
                "align_method" => config.align_method = AlignMethod::parse(value)?,
                other => return Err(bad(format!("unknown configuration key {other:?}"))),
            }
        }
        Ok(config)
    }

    /// Loads and parses a config file.
    pub fn from_file(path: &Path) -> Result<PipelineConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        PipelineConfig::from_ini(&text)
    }

    /// Checks the invariants: every configured file exists, the vocabulary
    /// cap is at least 1, and the suffix-support floor is at least 1.
    /// Failures are attributed to the stage that owns the setting.
    pub fn validate(&self) -> Result<()> {
        let files: [(&Option<PathBuf>, &str, &'static str); 6] = [
            (&self.corpus, "corpus", "corpus"),
            (&self.target_corpus, "target_corpus", "corpus"),
            (&self.thesaurus, "thesaurus", "lexicon"),
            (&self.exceptions, "exceptions", "morphology"),
            (&self.rules, "rules", "morphology"),
            (&self.pairs, "pairs", "aligner"),
        ];
        for (path, key, stage) in files {
            if let Some(path) = path {
                if !path.is_file() {
                    return Err(config_error(format!(
                        "{key} file {} does not exist",
                        path.display()
                    ))
                    .stage(stage));
                }
            }
        }
        if self.vocab_cap == 0 {
            return Err(config_error("vocab_cap must be at least 1".to_string()).stage("corpus"));
        }
        if self.min_support == 0 {
            return Err(Error::BadMinSupport(0).stage("morphology"));
        }
        Ok(())
    }

    /// Canonical serialization: every key, sorted, `key=value` per line.
    /// Unset paths serialize as the empty string.
    pub fn canonical(&self) -> String {
        fn path(p: &Option<PathBuf>) -> String {
            p.as_deref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        }
        let pairs = [
            ("align_method", self.align_method.as_str().to_string()),
            ("codec", self.codec.to_string()),
            ("corpus", path(&self.corpus)),
            ("exceptions", path(&self.exceptions)),
            ("min_support", self.min_support.to_string()),
            ("pairs", path(&self.pairs)),
            ("rules", path(&self.rules)),
            ("seed", self.seed.to_string()),
            ("target_corpus", path(&self.target_corpus)),
            ("thesaurus", path(&self.thesaurus)),
            ("trace", self.trace.to_string()),
            ("vocab_cap", self.vocab_cap.to_string()),
        ];
        let mut out = String::new();
        for (key, value) in pairs {
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }

    /// First 16 hex digits of the SHA-256 of [`PipelineConfig::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        let mut out = String::with_capacity(16);
        for byte in &digest[..8] {
            let _ = write!(out, "{byte:02x}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_sections() {
        let config = PipelineConfig::from_ini(
            "# pipeline under test\n[paths]\ncorpus = a.txt\nthesaurus=t.json\n\n; more\nvocab_cap = 50\ncodec = on\nalign_method = entropy\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(config.corpus.as_deref(), Some(Path::new("a.txt")));
        assert_eq!(config.thesaurus.as_deref(), Some(Path::new("t.json")));
        assert_eq!(config.vocab_cap, 50);
        assert!(config.codec);
        assert_eq!(config.align_method, AlignMethod::Entropy);
        assert_eq!(config.seed, 7);
        assert_eq!(config.min_support, 1);
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_line() {
        let err = PipelineConfig::from_ini("corpus = a.txt\nvocabulary = 9\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(err.to_string().contains("vocabulary"), "{err}");
    }

    #[test]
    fn bad_booleans_and_integers_are_rejected() {
        assert!(PipelineConfig::from_ini("codec = maybe\n").is_err());
        assert!(PipelineConfig::from_ini("vocab_cap = many\n").is_err());
        assert!(PipelineConfig::from_ini("align_method = magic\n").is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = PipelineConfig::from_ini("corpus = a.txt\n").unwrap();
        let b = PipelineConfig::from_ini("corpus = a.txt\n").unwrap();
        let c = PipelineConfig::from_ini("corpus = b.txt\n").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 16);
        assert!(a.hash().chars().all(|c| c.is_ascii_hexdigit()));
    }

    #[test]
    fn canonical_form_lists_every_key_sorted() {
        let canonical = PipelineConfig::default().canonical();
        let keys: Vec<&str> = canonical
            .lines()
            .map(|l| l.split_once('=').unwrap().0)
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), 12);
    }

    #[test]
    fn validation_requires_existing_files_and_positive_caps() {
        let config = PipelineConfig {
            thesaurus: Some(PathBuf::from("/nonexistent/thesaurus.json")),
            ..PipelineConfig::default()
        };
        let err = config.validate().unwrap_err();
        assert_eq!(err.stage_name(), Some("lexicon"));

        let config = PipelineConfig {
            vocab_cap: 0,
            ..PipelineConfig::default()
        };
        assert_eq!(config.validate().unwrap_err().stage_name(), Some("corpus"));

        let config = PipelineConfig {
            min_support: 0,
            ..PipelineConfig::default()
        };
        assert_eq!(
            config.validate().unwrap_err().stage_name(),
            Some("morphology")
        );
    }

    #[test]
    fn zero_values_for_booleans_parse() {
        let config = PipelineConfig::from_ini("codec = 1\ntrace = 0\n").unwrap();
        assert!(config.codec);
        assert!(!config.trace);
    }
}
