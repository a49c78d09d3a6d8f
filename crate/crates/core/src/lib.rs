//! A dictionary-and-entropy machine translation pipeline.
//!
//! The library models a compact translation system built from four kinds of
//! machinery, each usable on its own:
//!
//! - **Corpus statistics** ([`corpus`]): tokenization with optional
//!   grammatical-role markup, word frequency tables, vocabulary truncation.
//! - **Entropy coding** ([`codec`]): letter distributions, canonical
//!   Huffman codebooks, vowel-dropping word reduction, and character n-gram
//!   models over a sentence-marker alphabet.
//! - **Morphological analysis** ([`morphology`]): reverse-alphabetized
//!   dictionaries, suffix-rule induction from word endings, and
//!   longest-suffix lemmatization with an exception table.
//! - **Meaning selection and generation** ([`lexicon`], [`grammar`],
//!   [`translator`]): a thesaurus that maps lemmas to coded meanings,
//!   a categorial grammar that accepts or vetoes candidate readings, and a
//!   translator that picks each word's most corroborated meaning and emits
//!   target-language text.
//!
//! A separate [`aligner`] module pairs words across parallel sentences by
//! unigram or bigram information content.
//!
//! Everything is deterministic: ordered maps throughout, explicit
//! tie-breaking in every sort, and no hidden randomness.

pub mod aligner;
pub mod codec;
pub mod corpus;
pub mod error;
pub mod grammar;
pub mod lexicon;
pub mod morphology;
pub mod translator;

pub use error::{Error, Result};
