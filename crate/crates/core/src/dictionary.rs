//! Title-translation dictionary derived from cross-language links.
//!
//! Every cross-language link from an article in L to an article in L'
//! contributes an entry translating the L title to the L' title. When the
//! same title links to several distinct targets, the majority target wins;
//! ties break lexicographically.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::corpus::{Corpus, Lang};
use crate::error::Error;

pub type ValueVector = BTreeMap<String, u64>;

#[derive(Debug, Clone)]
pub struct TranslationDictionary {
    pub from: Lang,
    pub to: Lang,
    entries: BTreeMap<String, String>,
}

impl TranslationDictionary {
    pub fn empty(from: Lang, to: Lang) -> Self {
        TranslationDictionary {
            from,
            to,
            entries: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn translate<'a>(&'a self, component: &'a str) -> &'a str {
        self.entries.get(component).map_or(component, |t| t.as_str())
    }

    pub fn insert(&mut self, source: impl Into<String>, target: impl Into<String>) {
        self.entries.insert(source.into(), target.into());
    }

    /// Dump as TSV `source<TAB>target`, sorted by source.
    pub fn write_tsv(&self, mut w: impl Write) -> Result<(), Error> {
        for (s, t) in &self.entries {
            writeln!(w, "{s}\t{t}").map_err(|e| Error::Io(e.to_string()))?;
        }
        Ok(())
    }

    pub fn read_tsv(from: Lang, to: Lang, r: impl BufRead) -> Result<Self, Error> {
        let mut dict = TranslationDictionary::empty(from, to);
        for line in r.lines() {
            let line = line.map_err(|e| Error::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let (s, t) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("bad dictionary line: {line}")))?;
            dict.insert(s, t);
        }
        Ok(dict)
    }
}

/// Build the dictionary from all cross-language links going `from` -> `to`.
pub fn build_dictionary(corpus: &Corpus, from: &Lang, to: &Lang) -> TranslationDictionary {
    // title -> target title -> vote count
    let mut votes: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for article in corpus.articles_in(from) {
        for (lang, target_id) in &article.cross_links {
            if lang != to {
                continue;
            }
            if let Some(target) = corpus.get(target_id) {
                *votes
                    .entry(article.title.clone())
                    .or_default()
                    .entry(target.title.clone())
                    .or_default() += 1;
            }
        }
    }

    let mut dict = TranslationDictionary::empty(from.clone(), to.clone());
    for (source, candidates) in votes {
        let (best, _) = candidates
            .iter()
            .fold((String::new(), 0usize), |(bt, bc), (t, &c)| {
                if c > bc {
                    (t.clone(), c)
                } else {
                    (bt, bc)
                }
            });
        dict.insert(source, best);
    }
    dict
}

/// Replace every component found in the dictionary by its translation,
/// summing the frequencies of components that collide afterwards.
pub fn translate_vector(v: &ValueVector, dict: &TranslationDictionary) -> ValueVector {
    let mut out = ValueVector::new();
    for (component, tf) in v {
        *out.entry(dict.translate(component).to_string()).or_default() += tf;
    }
    out
}
