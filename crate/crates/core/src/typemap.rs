//! Entity-type matching across languages.
//!
//! Types in the two languages are paired by counting how often infoboxes
//! of a type link, through cross-language links, into each type of the
//! other language. A type maps to the argmax counterpart when both an
//! absolute support and a relative fraction threshold hold.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{Corpus, Lang};

pub const DEFAULT_MIN_TYPE_SUPPORT: usize = 3;
pub const DEFAULT_MIN_TYPE_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Serialize)]
pub struct TypePair {
    pub type_left: String,
    pub type_right: String,
    /// Number of cross-links supporting the pair.
    pub support: usize,
    /// Share of the left type's outgoing cross-links landing on the right type.
    pub fraction: f64,
}

/// Partial mapping from left-language types to right-language types.
#[derive(Debug, Clone, Serialize)]
pub struct TypeMapping {
    pub from: Lang,
    pub to: Lang,
    pub pairs: Vec<TypePair>,
    /// Left types with cross-links that failed the thresholds.
    pub unmapped: Vec<String>,
    #[serde(skip)]
    lookup: BTreeMap<String, String>,
}

impl TypeMapping {
    pub fn direction(&self) -> (&Lang, &Lang) {
        (&self.from, &self.to)
    }

    pub fn target_of(&self, type_left: &str) -> Option<&str> {
        self.lookup.get(type_left).map(|s| s.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Build a mapping directly from known pairs (tests, fixtures).
    pub fn from_pairs(
        from: Lang,
        to: Lang,
        pairs: impl IntoIterator<Item = (String, String)>,
    ) -> Self {
        let pairs: Vec<TypePair> = pairs
            .into_iter()
            .map(|(l, r)| TypePair {
                type_left: l,
                type_right: r,
                support: 0,
                fraction: 1.0,
            })
            .collect();
        let lookup = pairs
            .iter()
            .map(|p| (p.type_left.clone(), p.type_right.clone()))
            .collect();
        TypeMapping {
            from,
            to,
            pairs,
            unmapped: Vec::new(),
            lookup,
        }
    }
}

/// Count cross-links per (left type, right type) and keep the argmax
/// counterpart of every left type that clears both thresholds.
///
/// Ties between argmax candidates break lexicographically on the right
/// type label so runs are reproducible.
pub fn match_entity_types(
    corpus: &Corpus,
    from: &Lang,
    to: &Lang,
    min_type_support: usize,
    min_type_fraction: f64,
) -> TypeMapping {
    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for article in corpus.articles_in(from) {
        let Some(target_id) = article.cross_link_to(to) else {
            continue;
        };
        let Some(target) = corpus.get(target_id) else {
            continue;
        };
        *counts
            .entry(article.entity_type.clone())
            .or_default()
            .entry(target.entity_type.clone())
            .or_default() += 1;
    }

    let mut pairs = Vec::new();
    let mut unmapped = Vec::new();
    for (type_left, targets) in &counts {
        let total: usize = targets.values().sum();
        // BTreeMap iteration is ascending, so a strictly-greater fold keeps
        // the lexicographically smallest label on ties.
        let (best, support) = targets
            .iter()
            .fold((String::new(), 0usize), |(bt, bc), (t, &c)| {
                if c > bc {
                    (t.clone(), c)
                } else {
                    (bt, bc)
                }
            });
        let fraction = support as f64 / total as f64;
        if support >= min_type_support && fraction >= min_type_fraction {
            pairs.push(TypePair {
                type_left: type_left.clone(),
                type_right: best,
                support,
                fraction,
            });
        } else {
            unmapped.push(type_left.clone());
        }
    }

    let lookup = pairs
        .iter()
        .map(|p| (p.type_left.clone(), p.type_right.clone()))
        .collect();
    TypeMapping {
        from: from.clone(),
        to: to.clone(),
        pairs,
        unmapped,
        lookup,
    }
}
