//! The translation pipeline proper: understand, disambiguate, generate.
//!
//! A source sentence is lemmatized token by token, each lemma's thesaurus
//! senses are collapsed into one ordered meaning list, and a meaning tag is
//! selected for every token. Selection ranks tags by how often they recur
//! across senses — a tag listed under several senses is the word's bread
//! and butter — and the grammar check has veto power: the chosen tag's
//! target category must let the whole sentence reduce to `s`. Generation
//! then maps tags through the target lexicon, keeping word order as is.
//!
//! Every step is recorded in a per-token trace so a translation can be
//! audited decision by decision.

use serde::Serialize;

use crate::codec::{decode, encode, CodeBook};
use crate::corpus::{Role, Sentence};
use crate::error::{Error, Result};
use crate::grammar::{check_grammar, Category};
use crate::lexicon::{collapse, CollapsedMeanings, MeaningTag, Thesaurus};
use crate::morphology::{lemmatize, LemmaTable, SuffixRule};

/// A disambiguated token in the intermediary language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterlinguaToken {
    pub lemma: String,
    pub meaning: MeaningTag,
    pub category: Category,
    pub role: Option<Role>,
}

/// What happened to one candidate tag during selection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateDecision {
    pub tag: String,
    pub code: String,
    pub multiplicity: usize,
    pub category: Option<String>,
    pub outcome: String,
}

/// The audit record for one token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenTrace {
    pub surface: String,
    pub role: Option<Role>,
    pub lemma: String,
    /// The collapsed dictionary entry, printed in `{code tag, …}` form.
    pub collapsed: String,
    pub decisions: Vec<CandidateDecision>,
    pub selected: MeaningTag,
    pub category: String,
}

/// A full translation with its audit trail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationResult {
    pub source: Sentence,
    pub interlingua: Vec<InterlinguaToken>,
    pub target: String,
    pub trace: Vec<TokenTrace>,
}

/// The sentence-level surroundings a meaning selection must fit into:
/// categories already fixed to the left, candidate sets still open to the
/// right.
#[derive(Debug, Clone, Default)]
pub struct GrammarContext {
    pub fixed: Vec<Category>,
    pub open: Vec<Vec<Category>>,
}

/// The outcome of selecting a meaning for one token.
#[derive(Debug, Clone)]
pub struct Selection {
    pub meaning: MeaningTag,
    pub category: Category,
    pub decisions: Vec<CandidateDecision>,
}

/// One tag with its selection evidence: multiplicity across senses and the
/// position (and code) of its first occurrence.
struct RankedTag {
    tag: String,
    code: String,
    multiplicity: usize,
}

/// Tags ranked by multiplicity (descending), ties by first occurrence.
fn ranked_tags(collapsed: &CollapsedMeanings) -> Vec<RankedTag> {
    let mut ranked: Vec<RankedTag> = Vec::new();
    for meaning in &collapsed.meanings {
        if !ranked.iter().any(|r| r.tag == meaning.tag) {
            ranked.push(RankedTag {
                tag: meaning.tag.clone(),
                code: meaning.code.clone(),
                multiplicity: collapsed.multiplicity(&meaning.tag),
            });
        }
    }
    ranked.sort_by_key(|r| std::cmp::Reverse(r.multiplicity));
    // The sort is stable, so equal multiplicities stay in first-occurrence
    // order.
    ranked
}

fn role_allows(role: Role, category: &Category) -> bool {
    match role {
        Role::Subj | Role::Obj => *category == Category::Noun,
        Role::Pred => *category == Category::intransitive() || *category == Category::transitive(),
    }
}

/// True when some choice from each open slot completes `prefix` into a
/// grammatical sentence.
fn completes(prefix: &mut Vec<Category>, open: &[Vec<Category>]) -> bool {
    match open.split_first() {
        None => check_grammar(prefix),
        Some((slot, rest)) => {
            for category in slot {
                prefix.push(category.clone());
                if completes(prefix, rest) {
                    return true;
                }
                prefix.pop();
            }
            false
        }
    }
}

/// Picks the meaning tag for one token: highest multiplicity first, and
/// the first candidate whose target category lets the whole sentence pass
/// the grammar check wins. Candidates without a target-lexicon entry, or
/// whose category contradicts the token's annotated role, are rejected
/// with that reason in the decision log.
pub fn select_meaning(
    collapsed: &CollapsedMeanings,
    thesaurus: &Thesaurus,
    role: Option<Role>,
    context: &GrammarContext,
) -> Result<Selection> {
    let mut decisions = Vec::new();
    for candidate in ranked_tags(collapsed) {
        let mut decision = CandidateDecision {
            tag: candidate.tag.clone(),
            code: candidate.code.clone(),
            multiplicity: candidate.multiplicity,
            category: None,
            outcome: String::new(),
        };
        let Some(target) = thesaurus.target(&candidate.tag) else {
            decision.outcome = "rejected: no target-lexicon entry".to_string();
            decisions.push(decision);
            continue;
        };
        decision.category = Some(target.category.to_string());
        if let Some(role) = role {
            if !role_allows(role, &target.category) {
                decision.outcome = format!(
                    "rejected: category {} conflicts with role {}",
                    target.category,
                    role.as_str()
                );
                decisions.push(decision);
                continue;
            }
        }
        let mut prefix = context.fixed.clone();
        prefix.push(target.category.clone());
        if !completes(&mut prefix, &context.open) {
            decision.outcome = "rejected: sentence fails grammar check".to_string();
            decisions.push(decision);
            continue;
        }
        decision.outcome = "selected".to_string();
        let category = target.category.clone();
        decisions.push(decision);
        return Ok(Selection {
            meaning: MeaningTag {
                code: candidate.code,
                tag: candidate.tag,
            },
            category,
            decisions,
        });
    }
    Err(Error::NoParse {
        token: collapsed.lemma.clone(),
        candidates: decisions
            .iter()
            .map(|d| d.tag.as_str())
            .collect::<Vec<_>>()
            .join(", "),
    })
}

/// An understood sentence: the interlingua tokens plus their audit trail.
#[derive(Debug, Clone)]
pub struct Understanding {
    pub interlingua: Vec<InterlinguaToken>,
    pub trace: Vec<TokenTrace>,
}

/// Lemmatizes, looks up, collapses, and disambiguates every token.
///
/// Tokens are resolved left to right; each selection must leave *some*
/// grammatical completion open for the tokens still pending, so when a
/// grammatical reading of the sentence exists at all, this pass finds one.
/// An empty sentence is trivially understood.
pub fn understand(
    sentence: &Sentence,
    rules: &[SuffixRule],
    lemmas: &LemmaTable,
    thesaurus: &Thesaurus,
) -> Result<Understanding> {
    if sentence.is_empty() {
        return Ok(Understanding {
            interlingua: Vec::new(),
            trace: Vec::new(),
        });
    }

    // First pass: lemma, collapsed meanings, and the viable category set
    // for every token.
    let mut collapsed_all = Vec::with_capacity(sentence.len());
    let mut category_sets: Vec<Vec<Category>> = Vec::with_capacity(sentence.len());
    for token in &sentence.tokens {
        let lemma = lemmatize(&token.surface, rules, lemmas);
        let senses = thesaurus.senses(&lemma);
        if senses.is_empty() {
            return Err(Error::OovLemma {
                token: token.surface.clone(),
                lemma,
            }
            .stage("lexicon"));
        }
        let collapsed = collapse(&lemma, senses);
        let role = sentence.role(token.position);
        let mut categories: Vec<Category> = Vec::new();
        for candidate in ranked_tags(&collapsed) {
            if let Some(target) = thesaurus.target(&candidate.tag) {
                let role_ok = role.is_none_or(|r| role_allows(r, &target.category));
                if role_ok && !categories.contains(&target.category) {
                    categories.push(target.category.clone());
                }
            }
        }
        collapsed_all.push(collapsed);
        category_sets.push(categories);
    }

    // A token with no viable category at all can never be selected; report
    // it directly instead of letting some earlier token's completion search
    // fail on its behalf.
    for idx in 0..sentence.len() {
        if category_sets[idx].is_empty() {
            let err = select_meaning(
                &collapsed_all[idx],
                thesaurus,
                sentence.role(idx),
                &GrammarContext::default(),
            )
            .expect_err("token without viable categories cannot select");
            return Err(err.stage("translator"));
        }
    }

    // Second pass: fix meanings left to right under the grammar check.
    let mut interlingua = Vec::with_capacity(sentence.len());
    let mut trace = Vec::with_capacity(sentence.len());
    let mut fixed: Vec<Category> = Vec::new();
    for (idx, token) in sentence.tokens.iter().enumerate() {
        let role = sentence.role(idx);
        let context = GrammarContext {
            fixed: fixed.clone(),
            open: category_sets[idx + 1..].to_vec(),
        };
        let selection = select_meaning(&collapsed_all[idx], thesaurus, role, &context)
            .map_err(|e| e.stage("translator"))?;
        fixed.push(selection.category.clone());
        trace.push(TokenTrace {
            surface: token.surface.clone(),
            role,
            lemma: collapsed_all[idx].lemma.clone(),
            collapsed: collapsed_all[idx].to_string(),
            decisions: selection.decisions,
            selected: selection.meaning.clone(),
            category: selection.category.to_string(),
        });
        interlingua.push(InterlinguaToken {
            lemma: collapsed_all[idx].lemma.clone(),
            meaning: selection.meaning,
            category: selection.category,
            role,
        });
    }
    Ok(Understanding { interlingua, trace })
}

/// Renders interlingua tokens in the target language, in source order.
pub fn generate(interlingua: &[InterlinguaToken], thesaurus: &Thesaurus) -> Result<String> {
    let mut words = Vec::with_capacity(interlingua.len());
    for token in interlingua {
        let target = thesaurus
            .target(&token.meaning.tag)
            .ok_or_else(|| Error::MissingTargetEntry(token.meaning.tag.clone()))?;
        words.push(target.lemma.as_str());
    }
    Ok(words.join(" "))
}

/// Everything a translation run needs, borrowed in one place.
pub struct Pipeline<'a> {
    pub rules: &'a [SuffixRule],
    pub lemmas: &'a LemmaTable,
    pub thesaurus: &'a Thesaurus,
    /// When present, every token is run through encode → decode first; the
    /// code book is a bijection on covered text, so this must not change
    /// the outcome — it exists so the claim is testable.
    pub codebook: Option<&'a CodeBook>,
}

impl Pipeline<'_> {
    /// Runs the full pipeline on one sentence.
    pub fn translate(&self, sentence: &Sentence) -> Result<TranslationResult> {
        let worked = match self.codebook {
            Some(codebook) => codec_roundtrip(sentence, codebook).map_err(|e| e.stage("codec"))?,
            None => sentence.clone(),
        };
        let understanding = understand(&worked, self.rules, self.lemmas, self.thesaurus)?;
        let target = generate(&understanding.interlingua, self.thesaurus)
            .map_err(|e| e.stage("translator"))?;
        Ok(TranslationResult {
            source: sentence.clone(),
            interlingua: understanding.interlingua,
            target,
            trace: understanding.trace,
        })
    }
}

/// Encodes and decodes every token surface, passing roles through.
fn codec_roundtrip(sentence: &Sentence, codebook: &CodeBook) -> Result<Sentence> {
    let mut words = Vec::with_capacity(sentence.len());
    for token in &sentence.tokens {
        let bits = encode(&token.surface, codebook)?;
        words.push((decode(&bits, codebook)?, sentence.role(token.position)));
    }
    Ok(Sentence::from_annotated(&words))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use crate::morphology::suffix_rules_from_tsv;

    /// A thesaurus mirroring the running dictionary example.
    fn fixture_thesaurus() -> Thesaurus {
        Thesaurus::from_json(
            r#"{
            "ČOVJE-": {
                "mankind": {"193.5": "LITTLENESS", "690.2": "AGENT"},
                "man": {"554.4": "REPRESENTATION", "372.1": "MANKIND", "372.3": "MANKIND"}
            },
            "PUŠ-": {
                "smoke": {"800.1": "SMOKE"}
            },
            "LUL-": {
                "pipe": {"801.2": "PIPE"}
            },
            "@TARGET": {
                "MANKIND": {"lemma": "man", "category": "n"},
                "AGENT": {"lemma": "agent", "category": "n"},
                "LITTLENESS": {"lemma": "littleness", "category": "n"},
                "REPRESENTATION": {"lemma": "representation", "category": "n"},
                "SMOKE": {"lemma": "smokes", "category": "(n\\s)/n"},
                "PIPE": {"lemma": "pipe", "category": "n"}
            }
        }"#,
        )
        .unwrap()
    }

    fn fixture_rules() -> Vec<SuffixRule> {
        suffix_rules_from_tsv("KOM\t1\nKA\t1\nKU\t1\nK\t1\nI\t1\nU\t1\nA\t1\nOM\t1\n").unwrap()
    }

    fn fixture_lemmas() -> LemmaTable {
        let mut table = LemmaTable::new();
        table.add_exception("ČOVJEČE", "ČOVJE-").unwrap();
        table
    }

    fn pipeline_translate(text: &str) -> Result<TranslationResult> {
        let rules = fixture_rules();
        let lemmas = fixture_lemmas();
        let thesaurus = fixture_thesaurus();
        let pipeline = Pipeline {
            rules: &rules,
            lemmas: &lemmas,
            thesaurus: &thesaurus,
            codebook: None,
        };
        let sentences = tokenize(text);
        pipeline.translate(&sentences[0])
    }

    #[test]
    fn translates_the_pipe_sentence() {
        let result = pipeline_translate("Čovjek puši lulu.").unwrap();
        assert_eq!(result.target, "man smokes pipe");
        let tags: Vec<&str> = result
            .interlingua
            .iter()
            .map(|t| t.meaning.tag.as_str())
            .collect();
        assert_eq!(tags, ["MANKIND", "SMOKE", "PIPE"]);
    }

    #[test]
    fn multiplicity_beats_first_position() {
        // MANKIND appears twice across senses; LITTLENESS comes first but
        // only once.
        let result = pipeline_translate("Čovjek puši lulu.").unwrap();
        assert_eq!(result.interlingua[0].meaning.tag, "MANKIND");
        assert_eq!(result.interlingua[0].meaning.code, "372.1");
    }

    #[test]
    fn trace_covers_every_token_with_the_collapsed_entry() {
        let result = pipeline_translate("Čovjek puši lulu.").unwrap();
        assert_eq!(result.trace.len(), result.source.len());
        assert_eq!(
            result.trace[0].collapsed,
            "{193.5 LITTLENESS, 690.2 AGENT, 554.4 REPRESENTATION, 372.1 MANKIND, 372.3 MANKIND}"
        );
        assert_eq!(result.trace[0].decisions[0].outcome, "selected");
    }

    #[test]
    fn grammar_veto_falls_through_to_the_next_tag() {
        // BB-'s top tag STONE (multiplicity 2) is a noun, which cannot
        // close [n, n] into a sentence; the runner-up SLEEP (n\s) can.
        let thesaurus = Thesaurus::from_json(
            r#"{
            "AA-": {"s1": {"1.1": "THING"}},
            "BB-": {"s1": {"2.1": "STONE", "2.2": "SLEEP"}, "s2": {"2.3": "STONE"}},
            "@TARGET": {
                "THING": {"lemma": "thing", "category": "n"},
                "STONE": {"lemma": "stone", "category": "n"},
                "SLEEP": {"lemma": "sleeps", "category": "n\\s"}
            }
        }"#,
        )
        .unwrap();
        let lemmas = LemmaTable::new();
        let pipeline = Pipeline {
            rules: &[],
            lemmas: &lemmas,
            thesaurus: &thesaurus,
            codebook: None,
        };
        let result = pipeline.translate(&tokenize("AA BB.")[0]).unwrap();
        assert_eq!(result.target, "thing sleeps");
        let bb = &result.trace[1];
        assert_eq!(bb.decisions[0].tag, "STONE");
        assert!(bb.decisions[0].outcome.contains("grammar"));
        assert_eq!(bb.decisions[1].outcome, "selected");
    }

    #[test]
    fn role_annotations_constrain_categories() {
        // With PUŠ- forced to PRED its noun reading would be rejected;
        // conversely a noun-only token annotated PRED cannot parse.
        let result = pipeline_translate("Čovjek/SUBJ puši/PRED lulu/OBJ.").unwrap();
        assert_eq!(result.target, "man smokes pipe");
        let err = pipeline_translate("Lulu/PRED puši.").unwrap_err();
        assert!(matches!(
            err,
            Error::Stage {
                stage: "translator",
                ..
            }
        ));
    }

    #[test]
    fn empty_sentence_understands_to_nothing() {
        let thesaurus = fixture_thesaurus();
        let out = understand(
            &Sentence::from_words::<&str>(&[]),
            &[],
            &LemmaTable::new(),
            &thesaurus,
        )
        .unwrap();
        assert!(out.interlingua.is_empty());
        assert!(out.trace.is_empty());
    }

    #[test]
    fn oov_lemma_names_the_token() {
        let err = pipeline_translate("Nebo je vedro.").unwrap_err();
        let text = err.to_string();
        assert_eq!(err.stage_name(), Some("lexicon"));
        assert!(text.contains("NEBO"), "{text}");
    }

    #[test]
    fn lone_noun_cannot_parse() {
        let err = pipeline_translate("Čovjek.").unwrap_err();
        assert_eq!(err.stage_name(), Some("translator"));
        assert!(err.to_string().contains("MANKIND"), "{err}");
    }

    #[test]
    fn generation_requires_target_entries() {
        let thesaurus = fixture_thesaurus();
        let interlingua = vec![InterlinguaToken {
            lemma: "X-".to_string(),
            meaning: MeaningTag {
                code: "9.9".to_string(),
                tag: "MISSING".to_string(),
            },
            category: Category::Noun,
            role: None,
        }];
        assert!(matches!(
            generate(&interlingua, &thesaurus),
            Err(Error::MissingTargetEntry(tag)) if tag == "MISSING"
        ));
    }

    #[test]
    fn target_length_matches_interlingua_length() {
        let result = pipeline_translate("Čovjek puši lulu.").unwrap();
        assert_eq!(
            result.target.split_whitespace().count(),
            result.interlingua.len()
        );
    }

    #[test]
    fn codec_roundtrip_changes_nothing() {
        let rules = fixture_rules();
        let lemmas = fixture_lemmas();
        let thesaurus = fixture_thesaurus();
        let corpus = tokenize("Čovjek puši lulu.");
        let dist = crate::codec::letter_frequencies(&corpus).unwrap();
        let codebook = crate::codec::build_codebook(&dist).unwrap();

        let plain = Pipeline {
            rules: &rules,
            lemmas: &lemmas,
            thesaurus: &thesaurus,
            codebook: None,
        }
        .translate(&corpus[0])
        .unwrap();
        let coded = Pipeline {
            rules: &rules,
            lemmas: &lemmas,
            thesaurus: &thesaurus,
            codebook: Some(&codebook),
        }
        .translate(&corpus[0])
        .unwrap();
        assert_eq!(coded, plain);
    }

    #[test]
    fn codec_errors_are_tagged_with_the_codec_stage() {
        let rules = fixture_rules();
        let lemmas = fixture_lemmas();
        let thesaurus = fixture_thesaurus();
        // Code book built over a different sentence misses some letters.
        let dist = crate::codec::letter_frequencies(&tokenize("AAA.")).unwrap();
        let codebook = crate::codec::build_codebook(&dist).unwrap();
        let err = Pipeline {
            rules: &rules,
            lemmas: &lemmas,
            thesaurus: &thesaurus,
            codebook: Some(&codebook),
        }
        .translate(&tokenize("Čovjek puši lulu.")[0])
        .unwrap_err();
        assert_eq!(err.stage_name(), Some("codec"));
    }

    #[test]
    fn selection_is_deterministic() {
        let first = pipeline_translate("Čovjek puši lulu.").unwrap();
        for _ in 0..5 {
            assert_eq!(pipeline_translate("Čovjek puši lulu.").unwrap(), first);
        }
    }
}
