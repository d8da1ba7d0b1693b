//! Corpus data model and ingestion.
//!
//! The corpus file is UTF-8, one JSON object per line:
//!
//! ```text
//! {"id":"...","lang":"pt","title":"...","type":"filme",
//!  "infobox":[{"name":"Directed by","value":"...","links":["..."]}],
//!  "cross_links":[{"lang":"en","id":"..."}]}
//! ```
//!
//! Malformed lines are skipped and counted, never fatal. Cross-language
//! links are symmetrized at load so downstream code can rely on
//! bidirectionality.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Language code, e.g. "pt" or "en".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lang(pub String);

impl Lang {
    pub fn new(code: impl Into<String>) -> Self {
        Lang(code.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Lang {
    fn from(s: &str) -> Self {
        Lang(s.to_string())
    }
}

/// One attribute-value pair of an infobox, after normalization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttributeValue {
    /// Normalized attribute label.
    pub name: String,
    /// Original value string as found in the record.
    pub raw_value: String,
    /// Delimiter-split, normalized value components.
    pub components: Vec<String>,
    /// Normalized titles of articles the value links to.
    pub links: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Infobox {
    pub pairs: Vec<AttributeValue>,
}

impl Infobox {
    pub fn attribute_names(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|p| p.name.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&AttributeValue> {
        self.pairs.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub lang: Lang,
    /// Normalized title.
    pub title: String,
    pub entity_type: String,
    pub infobox: Infobox,
    /// (language, target article id) pairs; symmetrized at load.
    pub cross_links: Vec<(Lang, String)>,
}

impl Article {
    /// Target id of the first cross-language link into `lang`, if any.
    pub fn cross_link_to(&self, lang: &Lang) -> Option<&str> {
        self.cross_links
            .iter()
            .find(|(l, _)| l == lang)
            .map(|(_, id)| id.as_str())
    }
}

/// Immutable article collection with canonical iteration order by id.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    articles: BTreeMap<String, Article>,
}

impl Corpus {
    pub fn get(&self, id: &str) -> Option<&Article> {
        self.articles.get(id)
    }

    pub fn articles(&self) -> impl Iterator<Item = &Article> {
        self.articles.values()
    }

    pub fn articles_in(&self, lang: &Lang) -> impl Iterator<Item = &Article> {
        let lang = lang.clone();
        self.articles.values().filter(move |a| a.lang == lang)
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    /// Distinct languages present, sorted.
    pub fn languages(&self) -> Vec<Lang> {
        let mut langs: Vec<Lang> = self.articles.values().map(|a| a.lang.clone()).collect();
        langs.sort();
        langs.dedup();
        langs
    }

    pub fn from_articles(articles: impl IntoIterator<Item = Article>) -> (Self, LoadReport) {
        let mut report = LoadReport::default();
        let mut map = BTreeMap::new();
        for article in articles {
            match map.entry(article.id.clone()) {
                Entry::Vacant(v) => {
                    v.insert(article);
                    report.loaded += 1;
                }
                Entry::Occupied(_) => report.duplicate_ids += 1,
            }
        }
        let mut corpus = Corpus { articles: map };
        corpus.symmetrize_cross_links();
        (corpus, report)
    }

    /// Ensure every cross-link between two present articles exists in both
    /// directions.
    fn symmetrize_cross_links(&mut self) {
        let mut missing: Vec<(String, Lang, String)> = Vec::new();
        for article in self.articles.values() {
            for (lang, target) in &article.cross_links {
                if let Some(other) = self.articles.get(target) {
                    let has_back = other
                        .cross_links
                        .iter()
                        .any(|(_, back)| back == &article.id);
                    if !has_back {
                        missing.push((target.clone(), article.lang.clone(), article.id.clone()));
                    }
                    debug_assert_eq!(&other.lang, lang, "cross_link lang mismatch for {target}");
                }
            }
        }
        for (target, lang, back_id) in missing {
            if let Some(a) = self.articles.get_mut(&target) {
                a.cross_links.push((lang, back_id));
            }
        }
    }
}

/// Counters produced while loading a corpus file.
#[derive(Debug, Clone, Default, Serialize)]
pub struct LoadReport {
    pub loaded: usize,
    pub skipped_lines: usize,
    pub duplicate_ids: usize,
}

#[derive(Deserialize)]
struct RawPair {
    name: String,
    #[serde(default)]
    value: String,
    #[serde(default)]
    links: Vec<String>,
}

#[derive(Deserialize)]
struct RawCrossLink {
    lang: String,
    id: String,
}

#[derive(Deserialize)]
struct RawArticle {
    id: String,
    lang: String,
    title: String,
    #[serde(rename = "type")]
    entity_type: String,
    #[serde(default)]
    infobox: Vec<RawPair>,
    #[serde(default)]
    cross_links: Vec<RawCrossLink>,
}

/// Load a line-delimited corpus file.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<(Corpus, LoadReport), Error> {
    let file = File::open(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    let reader = BufReader::new(file);

    let mut articles = Vec::new();
    let mut skipped = 0usize;
    for line in reader.lines() {
        let line = line.map_err(|e| Error::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawArticle>(&line) {
            Ok(raw) => articles.push(article_from_raw(raw)),
            Err(_) => skipped += 1,
        }
    }
    let (corpus, mut report) = Corpus::from_articles(articles);
    report.skipped_lines = skipped;
    Ok((corpus, report))
}

fn article_from_raw(raw: RawArticle) -> Article {
    let mut infobox = Infobox::default();
    for pair in raw.infobox {
        let name = normalize_name(&pair.name);
        if name.is_empty() {
            continue;
        }
        let components = normalize_value(&pair.value);
        let links: Vec<String> = pair
            .links
            .iter()
            .map(|l| normalize_component(l))
            .filter(|l| !l.is_empty())
            .collect();
        // duplicate names within one infobox merge, concatenating components
        if let Some(existing) = infobox.pairs.iter_mut().find(|p| p.name == name) {
            existing.raw_value.push('\n');
            existing.raw_value.push_str(&pair.value);
            existing.components.extend(components);
            existing.links.extend(links);
        } else {
            infobox.pairs.push(AttributeValue {
                name,
                raw_value: pair.value,
                components,
                links,
            });
        }
    }
    Article {
        id: raw.id,
        lang: Lang(raw.lang),
        title: normalize_component(&raw.title),
        entity_type: normalize_name(&raw.entity_type),
        infobox,
        cross_links: raw
            .cross_links
            .into_iter()
            .map(|cl| (Lang(cl.lang), cl.id))
            .collect(),
    }
}

/// Normalize an attribute label: lowercase, trim, collapse whitespace,
/// strip trailing colons.
pub fn normalize_name(raw: &str) -> String {
    let s = normalize_component(raw);
    s.trim_end_matches(':').trim_end().to_string()
}

/// Normalize a single value component: trim, lowercase, collapse internal
/// whitespace.
pub fn normalize_component(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut last_space = true;
    for c in raw.trim().chars().flat_map(|c| c.to_lowercase()) {
        if c.is_whitespace() {
            if !last_space {
                out.push(' ');
            }
            last_space = true;
        } else {
            out.push(c);
            last_space = false;
        }
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out
}

/// Delimiters that split a raw infobox value into components.
pub const VALUE_DELIMITERS: &[char] = &['\n', ',', '/', '·', ';'];

/// Split a raw value into normalized components.
///
/// Markup is stripped first, then the value is split on
/// [`VALUE_DELIMITERS`]; each component is trimmed, lowercased and
/// whitespace-collapsed; empty components are dropped.
pub fn normalize_value(raw: &str) -> Vec<String> {
    let stripped = strip_markup(raw);
    stripped
        .split(VALUE_DELIMITERS)
        .map(normalize_component)
        .filter(|c| !c.is_empty())
        .collect()
}

/// Remove the bits of wiki/html markup that survive into record values:
/// `[[target|text]]` keeps the text, `[[target]]` keeps the target,
/// `'''`/`''` emphasis and `<...>` tags are dropped.
fn strip_markup(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '[' if chars.peek() == Some(&'[') => {
                chars.next();
                let mut inner = String::new();
                while let Some(&n) = chars.peek() {
                    if n == ']' {
                        chars.next();
                        if chars.peek() == Some(&']') {
                            chars.next();
                        }
                        break;
                    }
                    inner.push(n);
                    chars.next();
                }
                // keep anchor text when piped, target otherwise
                match inner.rsplit_once('|') {
                    Some((_, text)) => out.push_str(text),
                    None => out.push_str(&inner),
                }
            }
            '\'' if chars.peek() == Some(&'\'') => {
                while chars.peek() == Some(&'\'') {
                    chars.next();
                }
            }
            '<' => {
                let mut tag = String::new();
                for n in chars.by_ref() {
                    if n == '>' {
                        break;
                    }
                    tag.push(n);
                }
                // a footnote's body is not part of the value
                if tag.trim_start().starts_with("ref") && !tag.trim_end().ends_with('/') {
                    let mut tail = String::new();
                    for n in chars.by_ref() {
                        tail.push(n);
                        if tail.ends_with("</ref>") {
                            break;
                        }
                    }
                }
            }
            '{' | '}' => {}
            _ => out.push(c),
        }
    }
    out
}

/// A cross-linked infobox pair belonging to a mapped type pair.
#[derive(Debug, Clone, Serialize)]
pub struct DualInfobox {
    pub left_id: String,
    pub right_id: String,
    pub type_left: String,
    pub type_right: String,
}

impl DualInfobox {
    pub fn left<'c>(&self, corpus: &'c Corpus) -> &'c Infobox {
        &corpus.get(&self.left_id).expect("left article").infobox
    }

    pub fn right<'c>(&self, corpus: &'c Corpus) -> &'c Infobox {
        &corpus.get(&self.right_id).expect("right article").infobox
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DualBuildReport {
    pub built: usize,
    pub skipped_missing_target: usize,
    pub skipped_unmapped_type: usize,
}

/// Pair up cross-linked articles whose entity types are mapped to each
/// other. Each article ends up in at most one dual per type pair.
pub fn build_dual_infoboxes(
    corpus: &Corpus,
    types: &crate::typemap::TypeMapping,
) -> (Vec<DualInfobox>, DualBuildReport) {
    let mut report = DualBuildReport::default();
    let mut duals = Vec::new();
    let mut used_right: std::collections::BTreeSet<(String, String)> = Default::default();
    let (from, to) = types.direction();

    for article in corpus.articles_in(from) {
        let Some(target_id) = article.cross_link_to(to) else {
            continue;
        };
        let Some(target) = corpus.get(target_id) else {
            report.skipped_missing_target += 1;
            continue;
        };
        let mapped = types
            .target_of(&article.entity_type)
            .is_some_and(|t| t == target.entity_type);
        if !mapped {
            report.skipped_unmapped_type += 1;
            continue;
        }
        let key = (article.entity_type.clone(), target.id.clone());
        if !used_right.insert(key) {
            continue;
        }
        duals.push(DualInfobox {
            left_id: article.id.clone(),
            right_id: target.id.clone(),
            type_left: article.entity_type.clone(),
            type_right: target.entity_type.clone(),
        });
        report.built += 1;
    }
    (duals, report)
}
