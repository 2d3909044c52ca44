//! Multilingual synset lexicons and synset annotation of topics.
//!
//! A lexicon maps the lemmas of one language to synset identifiers drawn
//! from a scheme shared by every language of the run, such as the
//! interlingual offsets of the Open Multilingual WordNet. Synsets are the
//! pivot that lets independently trained topic models meet.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topics::{TopicId, TopicModel};

pub type SynsetId = String;

/// Number of top words per topic used for annotation.
pub const DEFAULT_TOP_N: usize = 5;

static NO_SYNSETS: BTreeSet<SynsetId> = BTreeSet::new();

/// Lowercases and joins the words of a multi-word lemma with `_`.
pub fn normalize_lemma(lemma: &str) -> String {
    lemma
        .to_lowercase()
        .split(|c: char| c.is_whitespace() || c == '_')
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join("_")
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynsetLexicon {
    lang: String,
    entries: HashMap<String, BTreeSet<SynsetId>>,
}

impl SynsetLexicon {
    pub fn new(lang: impl Into<String>) -> Self {
        SynsetLexicon {
            lang: lang.into(),
            entries: HashMap::new(),
        }
    }

    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn insert(&mut self, lemma: &str, synset: impl Into<SynsetId>) {
        let key = normalize_lemma(lemma);
        if key.is_empty() {
            return;
        }
        self.entries.entry(key).or_default().insert(synset.into());
    }

    /// Synsets of `lemma`; empty when the lemma is unknown.
    pub fn synsets_of(&self, lemma: &str) -> &BTreeSet<SynsetId> {
        self.entries
            .get(&normalize_lemma(lemma))
            .unwrap_or(&NO_SYNSETS)
    }

    /// Number of distinct lemmas.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `synset_id<TAB>lemma` lines; `#` starts a comment line.
    pub fn from_reader<R: BufRead>(reader: R, lang: &str) -> Result<Self> {
        let mut lexicon = SynsetLexicon::new(lang);
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(synset), Some(lemma), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::parse(lineno, "expected `synset_id<TAB>lemma`"));
            };
            let synset = synset.trim();
            if synset.is_empty() || normalize_lemma(lemma).is_empty() {
                return Err(Error::parse(lineno, "empty synset id or lemma"));
            }
            lexicon.insert(lemma, synset);
        }
        if lexicon.is_empty() {
            warn!("synset lexicon for `{lang}` is empty");
        }
        Ok(lexicon)
    }

    pub fn load(path: impl AsRef<Path>, lang: &str) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(BufReader::new(file), lang)
    }
}

pub fn load_lexicon(path: impl AsRef<Path>, lang: &str) -> Result<SynsetLexicon> {
    SynsetLexicon::load(path, lang)
}

/// Converts an Open Multilingual WordNet `wn-data-<lang>.tab` file into the
/// two-column lexicon format.
///
/// Only `lemma` relations are kept (`<lang>:lemma` or plain `lemma` in the
/// second column); definitions and examples are skipped.
pub fn convert_omw_tab<R: BufRead, W: Write>(reader: R, mut writer: W) -> Result<usize> {
    let mut written = 0;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 {
            return Err(Error::parse(lineno, "expected `synset<TAB>relation<TAB>value`"));
        }
        let relation = cols[1].rsplit(':').next().unwrap_or(cols[1]);
        if relation != "lemma" {
            continue;
        }
        let lemma = cols[2].trim();
        if lemma.is_empty() {
            continue;
        }
        writeln!(writer, "{}\t{}", cols[0].trim(), lemma)
            .map_err(|e| Error::io("<lexicon writer>", e))?;
        written += 1;
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicAnnotation {
    pub topic: TopicId,
    pub synsets: BTreeSet<SynsetId>,
}

impl TopicAnnotation {
    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }
}

/// Union of the synsets of the `n` top words of `topic`.
///
/// No sense disambiguation: every sense of every top word is included.
pub fn annotate_topic(
    model: &TopicModel,
    topic: TopicId,
    lexicon: &SynsetLexicon,
    n: usize,
) -> TopicAnnotation {
    debug_assert_eq!(model.lang(), lexicon.lang());
    let synsets = model
        .top_words(topic, n)
        .iter()
        .flat_map(|(word, _)| lexicon.synsets_of(word).iter().cloned())
        .collect();
    TopicAnnotation { topic, synsets }
}

/// Annotations for every topic of `model`, indexed by topic id.
pub fn annotate_model(
    model: &TopicModel,
    lexicon: &SynsetLexicon,
    n: usize,
) -> Result<Vec<TopicAnnotation>> {
    if model.lang() != lexicon.lang() {
        return Err(Error::InvalidArgument(format!(
            "lexicon language `{}` differs from model language `{}`",
            lexicon.lang(),
            model.lang()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("top-n must be >= 1".into()));
    }
    let annotations: Vec<_> = (0..model.num_topics())
        .map(|k| annotate_topic(model, k, lexicon, n))
        .collect();
    let empty = annotations.iter().filter(|a| a.is_empty()).count();
    if empty > 0 {
        warn!(
            "{empty} of {} `{}` topics have no synset annotation",
            annotations.len(),
            model.lang()
        );
    }
    Ok(annotations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topics::SamplerSettings;
    use crate::vocabulary::Vocabulary;
    use std::io::Cursor;

    const RADIO_TSV: &str = "\
# excerpt keyed by Princeton sense names
radio.a.01\tradio
radio.v.01\tradio
radio.n.03\tradio
radio.n.01\tradio
radio_receiver.n.01\tradio
equipment.n.01\tequipment
network.n.02\tnetwork
network.n.04\tnetwork
network.v.01\tnetwork
network.n.05\tnetwork
network.n.01\tnetwork
net.n.06\tnetwork
communication.n.02\tcommunication
communication.n.03\tcommunication
communication.n.01\tcommunication
regulative.s.01\tregulatory
";

    fn radio_model() -> TopicModel {
        let words = ["radio", "equipment", "network", "communication", "regulatory", "tariff"];
        let vocab = Vocabulary::from_parts(
            words.iter().map(|w| w.to_string()).collect(),
            vec![0.1; words.len()],
        )
        .unwrap();
        TopicModel::from_counts(
            "en",
            vocab,
            SamplerSettings::reference(0),
            vec![vec![60, 50, 40, 30, 20, 10], vec![1, 1, 1, 1, 1, 90]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn parses_and_unions_lines() {
        let lex = SynsetLexicon::from_reader(Cursor::new(RADIO_TSV), "en").unwrap();
        let radio = lex.synsets_of("radio");
        assert!(radio.contains("radio.n.01"));
        assert!(radio.contains("radio.v.01"));
        assert_eq!(radio.len(), 5);
        assert!(lex.synsets_of("unknown").is_empty());
        assert!(lex.synsets_of("").is_empty());
    }

    #[test]
    fn two_lines_same_lemma() {
        let lex = SynsetLexicon::from_reader(Cursor::new("s1\tbank\ns2\tbank\n"), "en").unwrap();
        assert_eq!(lex.synsets_of("bank").len(), 2);
    }

    #[test]
    fn lookup_is_case_insensitive() {
        let lex = SynsetLexicon::from_reader(Cursor::new("paris.n.01\tParis\n"), "en").unwrap();
        assert!(lex.synsets_of("paris").contains("paris.n.01"));
        assert!(lex.synsets_of("PARIS").contains("paris.n.01"));
    }

    #[test]
    fn multi_word_lemmas_normalized() {
        let lex = SynsetLexicon::from_reader(Cursor::new("s\tradio   receiver\n"), "en").unwrap();
        assert!(lex.synsets_of("radio_receiver").contains("s"));
        assert!(lex.synsets_of("Radio Receiver").contains("s"));
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = SynsetLexicon::from_reader(Cursor::new("a\tb\nno-tab-here\n"), "en").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = SynsetLexicon::from_reader(Cursor::new("a\tb\tc\n"), "en").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_file_gives_empty_lexicon() {
        assert!(SynsetLexicon::from_reader(Cursor::new("# nothing\n"), "en").unwrap().is_empty());
    }

    #[test]
    fn communications_topic_annotation() {
        let lex = SynsetLexicon::from_reader(Cursor::new(RADIO_TSV), "en").unwrap();
        let ann = annotate_topic(&radio_model(), 0, &lex, DEFAULT_TOP_N);
        for s in ["radio.n.01", "equipment.n.01", "network.n.01", "communication.n.01", "regulative.s.01"] {
            assert!(ann.synsets.contains(s), "missing {s}");
        }
        assert_eq!(ann.synsets.len(), 16);
    }

    #[test]
    fn topics_with_unknown_words_are_empty() {
        let lex = SynsetLexicon::from_reader(Cursor::new("x.n.01\tsomething\n"), "en").unwrap();
        assert!(annotate_topic(&radio_model(), 0, &lex, 5).is_empty());
    }

    #[test]
    fn annotation_grows_with_n() {
        let lex = SynsetLexicon::from_reader(Cursor::new(RADIO_TSV), "en").unwrap();
        let model = radio_model();
        for topic in 0..2 {
            for n in 1..6 {
                let small = annotate_topic(&model, topic, &lex, n);
                let big = annotate_topic(&model, topic, &lex, n + 1);
                assert!(small.synsets.is_subset(&big.synsets));
            }
        }
    }

    #[test]
    fn language_mismatch_rejected() {
        let lex = SynsetLexicon::new("fr");
        assert!(annotate_model(&radio_model(), &lex, 5).is_err());
    }

    #[test]
    fn omw_conversion() {
        let omw = "# Spanish\tspa\thttp://example\n02760429-n\tspa:lemma\tradio\n02760429-n\tspa:def\tun aparato\n06264398-n\tlemma\tred\n";
        let mut out = Vec::new();
        let n = convert_omw_tab(Cursor::new(omw), &mut out).unwrap();
        assert_eq!(n, 2);
        assert_eq!(String::from_utf8(out).unwrap(), "02760429-n\tradio\n06264398-n\tred\n");
    }
}
