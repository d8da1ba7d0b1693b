//! Scoring of match sets against a labeled ground truth: weighted and
//! macro precision/recall/F-measure, mean average precision of candidate
//! orderings, schema overlap, and the plain top-k correlation baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::alignment::{AttrInfo, MatchSet};
use crate::corpus::Lang;
use crate::error::Error;

/// Cross-language attribute pair, left-language attribute first.
pub type Pair = (String, String);

/// Labeled correct alignments, keyed by (left type, right type).
#[derive(Debug, Clone, Default)]
pub struct GroundTruth {
    pub by_type: BTreeMap<(String, String), BTreeSet<Pair>>,
}

impl GroundTruth {
    pub fn pairs_for(&self, type_left: &str, type_right: &str) -> BTreeSet<Pair> {
        self.by_type
            .get(&(type_left.to_string(), type_right.to_string()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn insert(&mut self, type_left: &str, type_right: &str, a: &str, b: &str) {
        self.by_type
            .entry((type_left.to_string(), type_right.to_string()))
            .or_default()
            .insert((a.to_string(), b.to_string()));
    }

    /// TSV format: `type_left::type_right<TAB>attr_L<TAB>attr_L'`.
    pub fn read_tsv(r: impl BufRead) -> Result<Self, Error> {
        let mut gt = GroundTruth::default();
        for line in r.lines() {
            let line = line.map_err(|e| Error::Io(e.to_string()))?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (tp, a, b) = match (fields.next(), fields.next(), fields.next()) {
                (Some(tp), Some(a), Some(b)) => (tp, a, b),
                _ => return Err(Error::Parse(format!("bad ground-truth line: {line}"))),
            };
            let (tl, tr) = tp
                .split_once("::")
                .ok_or_else(|| Error::Parse(format!("bad type pair: {tp}")))?;
            gt.insert(tl, tr, a, b);
        }
        Ok(gt)
    }

    pub fn write_tsv(&self, mut w: impl Write) -> Result<(), Error> {
        for ((tl, tr), pairs) in &self.by_type {
            for (a, b) in pairs {
                writeln!(w, "{tl}::{tr}\t{a}\t{b}").map_err(|e| Error::Io(e.to_string()))?;
            }
        }
        Ok(())
    }
}

/// Emit every cross-language member pair of every match, left language
/// first. Same-language pairs are not emitted.
pub fn flatten_matches(
    matches: &MatchSet,
    attrs: &[AttrInfo],
    from: &Lang,
    to: &Lang,
) -> BTreeSet<Pair> {
    let mut out = BTreeSet::new();
    for m in &matches.matches {
        for &i in &m.members {
            for &j in &m.members {
                let (a, b) = (&attrs[i], &attrs[j]);
                if &a.lang == from && &b.lang == to {
                    out.insert((a.name.clone(), b.name.clone()));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Metrics {
    pub fn new(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Metrics {
            precision,
            recall,
            f1,
        }
    }
}

pub type Frequencies = BTreeMap<String, f64>;

fn freq(freqs: &Frequencies, attr: &str) -> Result<f64, Error> {
    freqs
        .get(attr)
        .copied()
        .ok_or_else(|| Error::Eval(format!("attribute '{attr}' missing from frequencies")))
}

/// Attribute-frequency-weighted precision and recall.
///
/// Precision weights each left attribute by its frequency share and each
/// emitted counterpart by the counterpart's frequency share within the
/// emitted set; recall does the same over the ground-truth counterparts.
pub fn weighted_metrics(
    pairs: &BTreeSet<Pair>,
    gt: &BTreeSet<Pair>,
    freq_left: &Frequencies,
    freq_right: &Frequencies,
) -> Result<Metrics, Error> {
    let mut emitted: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in pairs {
        emitted.entry(a).or_default().push(b);
    }
    let mut truth: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in gt {
        truth.entry(a).or_default().push(b);
    }

    // Sums are accumulated in the same order for the hit and total
    // weights so full agreement yields exactly 1.0.
    let score = |attrs: &BTreeMap<&str, Vec<&str>>,
                 correct: &BTreeSet<Pair>|
     -> Result<f64, Error> {
        if attrs.is_empty() {
            return Ok(0.0);
        }
        let mut total_weight = 0.0;
        let mut scored_weight = 0.0;
        for (a, counterparts) in attrs {
            let w = freq(freq_left, a)?;
            let mut denom = 0.0;
            let mut hit = 0.0;
            for b in counterparts {
                let wb = freq(freq_right, b)?;
                denom += wb;
                if correct.contains(&(a.to_string(), b.to_string())) {
                    hit += wb;
                }
            }
            total_weight += w;
            if denom > 0.0 {
                scored_weight += w * (hit / denom);
            }
        }
        if total_weight > 0.0 {
            Ok(scored_weight / total_weight)
        } else {
            Ok(0.0)
        }
    };

    // precision over emitted attributes, recall over ground-truth ones
    let precision = score(&emitted, gt)?;
    let recall = score(&truth, pairs)?;
    Ok(Metrics::new(precision, recall))
}

/// Unweighted counting over distinct attribute-name pairs.
pub fn macro_metrics(pairs: &BTreeSet<Pair>, gt: &BTreeSet<Pair>) -> Metrics {
    let hits = pairs.intersection(gt).count() as f64;
    let precision = if pairs.is_empty() {
        0.0
    } else {
        hits / pairs.len() as f64
    };
    let recall = if gt.is_empty() {
        0.0
    } else {
        hits / gt.len() as f64
    };
    Metrics::new(precision, recall)
}

/// Mean average precision of per-attribute candidate orderings.
///
/// Only left attributes with at least one correct counterpart contribute;
/// each contributes the average of the precision values at its correct
/// hits.
pub fn map_score(rankings: &BTreeMap<String, Vec<String>>, gt: &BTreeSet<Pair>) -> f64 {
    let mut truth: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (a, b) in gt {
        truth.entry(a).or_default().insert(b);
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (a, correct) in &truth {
        let m_j = correct.len() as f64;
        count += 1;
        let Some(ranking) = rankings.get(*a) else {
            continue;
        };
        let mut hits = 0.0;
        let mut ap = 0.0;
        for (rank0, candidate) in ranking.iter().enumerate() {
            if correct.contains(candidate.as_str()) {
                hits += 1.0;
                ap += hits / (rank0 as f64 + 1.0);
            }
        }
        sum += ap / m_j;
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Ground-truth-mediated Jaccard overlap of one dual infobox's schemas.
pub fn overlap(
    left_names: &BTreeSet<String>,
    right_names: &BTreeSet<String>,
    gt: &BTreeSet<Pair>,
) -> f64 {
    let intersection = gt
        .iter()
        .filter(|(a, b)| left_names.contains(a) && right_names.contains(b))
        .count() as f64;
    let union = left_names.len() as f64 + right_names.len() as f64 - intersection;
    if union == 0.0 {
        0.0
    } else {
        intersection / union
    }
}

/// Emit the k highest-scoring cross-language counterparts of every left
/// attribute. Ties break lexicographically on the counterpart name.
pub fn topk_pairs(scored: &BTreeMap<String, Vec<(String, f64)>>, k: usize) -> BTreeSet<Pair> {
    let mut out = BTreeSet::new();
    for (a, candidates) in scored {
        let mut sorted = candidates.clone();
        sorted.sort_by(|(na, sa), (nb, sb)| sb.partial_cmp(sa).unwrap().then(na.cmp(nb)));
        for (b, _) in sorted.into_iter().take(k) {
            out.insert((a.clone(), b));
        }
    }
    out
}

/// Per-type-pair scores plus the corpus-level aggregate.
#[derive(Debug, Clone, Serialize)]
pub struct TypePairReport {
    pub type_left: String,
    pub type_right: String,
    pub weighted: Metrics,
    pub macro_avg: Metrics,
    /// MAP per correlation source (lsi, x1, x2, x3, random).
    pub map: BTreeMap<String, f64>,
    pub overlap: f64,
    pub emitted_pairs: usize,
    pub ground_truth_pairs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub per_type: Vec<TypePairReport>,
    pub weighted: Metrics,
    pub macro_avg: Metrics,
    pub map: BTreeMap<String, f64>,
    pub overlap: f64,
}

impl EvalReport {
    pub fn aggregate(per_type: Vec<TypePairReport>) -> Self {
        let n = per_type.len().max(1) as f64;
        let mean = |f: &dyn Fn(&TypePairReport) -> f64| -> f64 {
            per_type.iter().map(f).sum::<f64>() / n
        };
        let weighted = Metrics::new(
            mean(&|t| t.weighted.precision),
            mean(&|t| t.weighted.recall),
        );
        let macro_avg = Metrics::new(
            mean(&|t| t.macro_avg.precision),
            mean(&|t| t.macro_avg.recall),
        );
        let mut map = BTreeMap::new();
        for t in &per_type {
            for (k, v) in &t.map {
                *map.entry(k.clone()).or_insert(0.0) += v / n;
            }
        }
        let overlap = mean(&|t| t.overlap);
        EvalReport {
            per_type,
            weighted,
            macro_avg,
            map,
            overlap,
        }
    }

    /// Aligned-column text table, one row per type pair plus the average.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<24} {:>7} {:>7} {:>7} {:>8} {:>8} {:>8} {:>8}\n",
            "type pair", "P", "R", "F", "macro-P", "macro-R", "macro-F", "overlap"
        ));
        let row = |label: &str, w: &Metrics, m: &Metrics, ov: f64| {
            format!(
                "{:<24} {:>7.3} {:>7.3} {:>7.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}\n",
                label, w.precision, w.recall, w.f1, m.precision, m.recall, m.f1, ov
            )
        };
        for t in &self.per_type {
            let label = format!("{}::{}", t.type_left, t.type_right);
            out.push_str(&row(&label, &t.weighted, &t.macro_avg, t.overlap));
        }
        out.push_str(&row("avg", &self.weighted, &self.macro_avg, self.overlap));
        out
    }
}
