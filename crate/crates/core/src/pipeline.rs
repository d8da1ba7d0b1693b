//! End-to-end wiring: configuration, per-type-pair signal computation,
//! the match run, evaluation against a ground truth, and threshold
//! sweeps.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alignment::{
    attribute_alignment, AlignmentConfig, AttrInfo, MatchSet, SimilarityProvider,
};
use crate::corpus::{build_dual_infoboxes, Corpus, DualInfobox, Lang};
use crate::dictionary::{build_dictionary, TranslationDictionary};
use crate::error::Error;
use crate::evaluation::{
    flatten_matches, macro_metrics, map_score, overlap, topk_pairs, weighted_metrics, EvalReport,
    Frequencies, GroundTruth, Pair, TypePairReport,
};
use crate::similarity::{
    build_attribute_groups, build_occurrence_matrix, correlation_x, cosine_sparse, default_rank,
    grouping_score, lsi_score, lsim, truncated_svd, CorrelationVariant, EntityResolver,
    OccurrenceMatrix,
};
use crate::typemap::{
    match_entity_types, TypeMapping, DEFAULT_MIN_TYPE_FRACTION, DEFAULT_MIN_TYPE_SUPPORT,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub lang_left: Lang,
    pub lang_right: Lang,
    pub alignment: AlignmentConfig,
    pub min_type_support: usize,
    pub min_type_fraction: f64,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: PathBuf::from("corpus.jsonl"),
            lang_left: Lang::new("xx"),
            lang_right: Lang::new("yy"),
            alignment: AlignmentConfig::default(),
            min_type_support: DEFAULT_MIN_TYPE_SUPPORT,
            min_type_fraction: DEFAULT_MIN_TYPE_FRACTION,
            out_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Apply one `key = value` setting from the config file.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), Error> {
        let bad = |e: &dyn std::fmt::Display| Error::Param(format!("{key}: {e}"));
        match key {
            "corpus" => self.corpus = PathBuf::from(value),
            "lang_left" => self.lang_left = Lang::new(value),
            "lang_right" => self.lang_right = Lang::new(value),
            "t_sim" => self.alignment.t_sim = value.parse().map_err(|e| bad(&e))?,
            "t_lsi" => self.alignment.t_lsi = value.parse().map_err(|e| bad(&e))?,
            "t_group" => self.alignment.t_group = value.parse().map_err(|e| bad(&e))?,
            "svd_f" => self.alignment.svd_f = Some(value.parse().map_err(|e| bad(&e))?),
            "min_type_support" => self.min_type_support = value.parse().map_err(|e| bad(&e))?,
            "min_type_fraction" => self.min_type_fraction = value.parse().map_err(|e| bad(&e))?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "seed" => self.seed = value.parse().map_err(|e| bad(&e))?,
            _ => return Err(Error::Param(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    /// Parse a flat `key = value` config file ('#' starts a comment).
    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_kv_text(&text)
    }

    /// Parse config settings from `key = value` lines.
    pub fn from_kv_text(text: &str) -> Result<Self, Error> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.apply(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }
}

/// Precomputed pairwise signals for one type pair's attribute set.
pub struct Signals {
    pub attrs: Vec<AttrInfo>,
    pub matrix: OccurrenceMatrix,
    /// Mono-lingual occurrence count per attribute (|a_i|).
    pub occurrences: Vec<u64>,
    n: usize,
    vsim: Vec<f64>,
    lsim: Vec<f64>,
    lsi: Vec<f64>,
    grouping: Vec<f64>,
}

impl Signals {
    pub fn compute(
        corpus: &Corpus,
        duals: &[DualInfobox],
        dict: &TranslationDictionary,
        resolver: &mut EntityResolver,
        svd_f: Option<usize>,
    ) -> Result<Self, Error> {
        let groups = build_attribute_groups(corpus, duals, resolver);
        let matrix = build_occurrence_matrix(corpus, duals, &groups);
        if matrix.n == 0 || matrix.m == 0 {
            return Ok(Signals {
                occurrences: groups.iter().map(|g| g.occurrences).collect(),
                attrs: Vec::new(),
                matrix,
                n: 0,
                vsim: Vec::new(),
                lsim: Vec::new(),
                lsi: Vec::new(),
                grouping: Vec::new(),
            });
        }
        let n = groups.len();
        let limit = matrix.n.min(matrix.m).max(1);
        let f = svd_f
            .unwrap_or_else(|| default_rank(matrix.n, matrix.m))
            .min(limit)
            .max(1);
        let model = truncated_svd(&matrix, f)?;

        let attrs: Vec<AttrInfo> = groups
            .iter()
            .map(|g| AttrInfo {
                lang: g.lang.clone(),
                name: g.name.clone(),
            })
            .collect();
        let mut vsim_m = vec![0.0; n * n];
        let mut lsim_m = vec![0.0; n * n];
        let mut lsi_m = vec![0.0; n * n];
        let mut grouping_m = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (&groups[i], &groups[j]);
                let v = if a.lang == b.lang {
                    cosine_sparse(&a.value_vector, &b.value_vector)
                } else if a.lang == dict.from {
                    crate::similarity::vsim(a, b, dict)
                } else {
                    crate::similarity::vsim(b, a, dict)
                };
                let l = lsim(a, b);
                let c = lsi_score(i, j, &model, &matrix);
                let g = grouping_score(i, j, &matrix);
                vsim_m[i * n + j] = v;
                vsim_m[j * n + i] = v;
                lsim_m[i * n + j] = l;
                lsim_m[j * n + i] = l;
                lsi_m[i * n + j] = c;
                lsi_m[j * n + i] = c;
                grouping_m[i * n + j] = g;
                grouping_m[j * n + i] = g;
            }
        }
        Ok(Signals {
            occurrences: groups.iter().map(|g| g.occurrences).collect(),
            attrs,
            matrix,
            n,
            vsim: vsim_m,
            lsim: lsim_m,
            lsi: lsi_m,
            grouping: grouping_m,
        })
    }

    /// Mono-lingual frequency map of one language's attributes.
    pub fn frequencies(&self, lang: &Lang) -> Frequencies {
        self.attrs
            .iter()
            .zip(&self.occurrences)
            .filter(|(a, _)| &a.lang == lang)
            .map(|(a, &o)| (a.name.clone(), o as f64))
            .collect()
    }

    /// Cross-language candidates of every left attribute with the chosen
    /// correlation score.
    pub fn scored_candidates(
        &self,
        from: &Lang,
        to: &Lang,
        source: CorrelationSource,
        seed: u64,
    ) -> BTreeMap<String, Vec<(String, f64)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
        for i in 0..self.n {
            if &self.attrs[i].lang != from {
                continue;
            }
            let mut candidates = Vec::new();
            for j in 0..self.n {
                if &self.attrs[j].lang != to {
                    continue;
                }
                let score = match source {
                    CorrelationSource::Lsi => self.lsi(i, j),
                    CorrelationSource::X1 => correlation_x(i, j, &self.matrix, CorrelationVariant::X1),
                    CorrelationSource::X2 => correlation_x(i, j, &self.matrix, CorrelationVariant::X2),
                    CorrelationSource::X3 => correlation_x(i, j, &self.matrix, CorrelationVariant::X3),
                    CorrelationSource::Random => 0.0,
                };
                candidates.push((self.attrs[j].name.clone(), score));
            }
            if source == CorrelationSource::Random {
                candidates.shuffle(&mut rng);
                let len = candidates.len();
                for (rank, c) in candidates.iter_mut().enumerate() {
                    c.1 = (len - rank) as f64;
                }
            }
            out.insert(self.attrs[i].name.clone(), candidates);
        }
        out
    }

    /// Ranked counterpart lists for MAP.
    pub fn rankings(
        &self,
        from: &Lang,
        to: &Lang,
        source: CorrelationSource,
        seed: u64,
    ) -> BTreeMap<String, Vec<String>> {
        self.scored_candidates(from, to, source, seed)
            .into_iter()
            .map(|(a, mut cands)| {
                cands.sort_by(|(na, sa), (nb, sb)| sb.partial_cmp(sa).unwrap().then(na.cmp(nb)));
                (a, cands.into_iter().map(|(n, _)| n).collect())
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationSource {
    Lsi,
    X1,
    X2,
    X3,
    Random,
}

impl CorrelationSource {
    pub const ALL: [CorrelationSource; 5] = [
        CorrelationSource::Lsi,
        CorrelationSource::X1,
        CorrelationSource::X2,
        CorrelationSource::X3,
        CorrelationSource::Random,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CorrelationSource::Lsi => "lsi",
            CorrelationSource::X1 => "x1",
            CorrelationSource::X2 => "x2",
            CorrelationSource::X3 => "x3",
            CorrelationSource::Random => "random",
        }
    }
}

impl SimilarityProvider for Signals {
    fn len(&self) -> usize {
        self.n
    }

    fn attr(&self, i: usize) -> &AttrInfo {
        &self.attrs[i]
    }

    fn vsim(&self, i: usize, j: usize) -> f64 {
        self.vsim[i * self.n + j]
    }

    fn lsim(&self, i: usize, j: usize) -> f64 {
        self.lsim[i * self.n + j]
    }

    fn lsi(&self, i: usize, j: usize) -> f64 {
        self.lsi[i * self.n + j]
    }

    fn grouping(&self, i: usize, j: usize) -> f64 {
        self.grouping[i * self.n + j]
    }

    fn co_occur(&self, i: usize, j: usize) -> bool {
        self.matrix.co_occur(i, j)
    }
}

/// Result of aligning one mapped type pair.
pub struct TypePairResult {
    pub type_left: String,
    pub type_right: String,
    pub duals: Vec<DualInfobox>,
    pub signals: Signals,
    pub matches: MatchSet,
}

impl TypePairResult {
    pub fn flattened(&self, from: &Lang, to: &Lang) -> BTreeSet<Pair> {
        flatten_matches(&self.matches, &self.signals.attrs, from, to)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RunLog {
    pub duals_total: usize,
    pub type_pairs: usize,
    pub certain_events: usize,
    pub revised_events: usize,
    pub matches_total: usize,
}

pub struct MatchRun {
    pub typemap: TypeMapping,
    pub results: Vec<TypePairResult>,
    pub log: RunLog,
}

/// Run ingest -> typemap -> dictionary -> alignment over every mapped
/// type pair.
pub fn run_match(corpus: &Corpus, cfg: &RunConfig) -> Result<MatchRun, Error> {
    let typemap = match_entity_types(
        corpus,
        &cfg.lang_left,
        &cfg.lang_right,
        cfg.min_type_support,
        cfg.min_type_fraction,
    );
    if typemap.is_empty() {
        return Err(Error::NoMappedTypes);
    }
    let dict = build_dictionary(corpus, &cfg.lang_left, &cfg.lang_right);
    let mut resolver = EntityResolver::from_corpus(corpus);
    let (duals, _) = build_dual_infoboxes(corpus, &typemap);

    let mut by_type: BTreeMap<(String, String), Vec<DualInfobox>> = BTreeMap::new();
    for d in duals {
        by_type
            .entry((d.type_left.clone(), d.type_right.clone()))
            .or_default()
            .push(d);
    }

    let mut log = RunLog::default();
    let mut results = Vec::new();
    for ((type_left, type_right), duals) in by_type {
        log.duals_total += duals.len();
        let signals = Signals::compute(corpus, &duals, &dict, &mut resolver, cfg.alignment.svd_f)?;
        if signals.attrs.is_empty() {
            continue;
        }
        let matches = attribute_alignment(&signals, &cfg.alignment);
        log.type_pairs += 1;
        log.matches_total += matches.len();
        for m in &matches.matches {
            for p in &m.provenance {
                match p.phase {
                    crate::alignment::Phase::Certain => log.certain_events += 1,
                    crate::alignment::Phase::Revised => log.revised_events += 1,
                }
            }
        }
        results.push(TypePairResult {
            type_left,
            type_right,
            duals,
            signals,
            matches,
        });
    }
    Ok(MatchRun {
        typemap,
        results,
        log,
    })
}

/// Serialized form of a type pair's matches.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchFile {
    pub type_left: String,
    pub type_right: String,
    pub matches: Vec<MatchEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchEntry {
    pub members: Vec<MatchMember>,
    #[serde(default)]
    pub provenance: Vec<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchMember {
    pub lang: Lang,
    pub attribute: String,
}

impl MatchFile {
    pub fn from_result(r: &TypePairResult) -> Self {
        MatchFile {
            type_left: r.type_left.clone(),
            type_right: r.type_right.clone(),
            matches: r
                .matches
                .matches
                .iter()
                .map(|m| MatchEntry {
                    members: m
                        .members
                        .iter()
                        .map(|&i| MatchMember {
                            lang: r.signals.attrs[i].lang.clone(),
                            attribute: r.signals.attrs[i].name.clone(),
                        })
                        .collect(),
                    provenance: m
                        .provenance
                        .iter()
                        .map(|p| serde_json::to_value(p).expect("serializable provenance"))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Cross-language pairs of every match, left language first.
    pub fn flattened(&self, from: &Lang, to: &Lang) -> BTreeSet<Pair> {
        let mut out = BTreeSet::new();
        for m in &self.matches {
            for a in &m.members {
                for b in &m.members {
                    if &a.lang == from && &b.lang == to {
                        out.insert((a.attribute.clone(), b.attribute.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Evaluate flattened match pairs against the ground truth, recomputing
/// signals from the corpus for frequencies, rankings and overlap.
pub fn evaluate(
    corpus: &Corpus,
    cfg: &RunConfig,
    match_files: &[MatchFile],
    gt: &GroundTruth,
) -> Result<EvalReport, Error> {
    let run = run_signals_only(corpus, cfg)?;
    let mut per_type = Vec::new();
    let mut any_overlap_with_gt = false;

    for mf in match_files {
        let key = (mf.type_left.clone(), mf.type_right.clone());
        let Some((signals, duals)) = run.get(&key) else {
            return Err(Error::Eval(format!(
                "type pair {}::{} not derivable from the corpus",
                mf.type_left, mf.type_right
            )));
        };
        let gt_pairs = gt.pairs_for(&mf.type_left, &mf.type_right);
        if gt_pairs.is_empty() {
            continue;
        }
        any_overlap_with_gt = true;
        let pairs = mf.flattened(&cfg.lang_left, &cfg.lang_right);
        let freq_left = signals.frequencies(&cfg.lang_left);
        let freq_right = signals.frequencies(&cfg.lang_right);
        let weighted = weighted_metrics(&pairs, &gt_pairs, &freq_left, &freq_right)?;
        let macro_avg = macro_metrics(&pairs, &gt_pairs);

        let mut map = BTreeMap::new();
        for source in CorrelationSource::ALL {
            let rankings = signals.rankings(&cfg.lang_left, &cfg.lang_right, source, cfg.seed);
            map.insert(source.label().to_string(), map_score(&rankings, &gt_pairs));
        }

        let mut overlap_sum = 0.0;
        for d in duals {
            let l: BTreeSet<String> = d
                .left(corpus)
                .attribute_names()
                .map(|s| s.to_string())
                .collect();
            let r: BTreeSet<String> = d
                .right(corpus)
                .attribute_names()
                .map(|s| s.to_string())
                .collect();
            overlap_sum += overlap(&l, &r, &gt_pairs);
        }
        let overlap_avg = if duals.is_empty() {
            0.0
        } else {
            overlap_sum / duals.len() as f64
        };

        per_type.push(TypePairReport {
            type_left: mf.type_left.clone(),
            type_right: mf.type_right.clone(),
            weighted,
            macro_avg,
            map,
            overlap: overlap_avg,
            emitted_pairs: pairs.len(),
            ground_truth_pairs: gt_pairs.len(),
        });
    }

    if !any_overlap_with_gt {
        return Err(Error::Eval(
            "no match-file type pair appears in the ground truth".into(),
        ));
    }
    Ok(EvalReport::aggregate(per_type))
}

type SignalsByType = BTreeMap<(String, String), (Signals, Vec<DualInfobox>)>;

/// Signals per type pair, without running the aligner.
fn run_signals_only(corpus: &Corpus, cfg: &RunConfig) -> Result<SignalsByType, Error> {
    let typemap = match_entity_types(
        corpus,
        &cfg.lang_left,
        &cfg.lang_right,
        cfg.min_type_support,
        cfg.min_type_fraction,
    );
    if typemap.is_empty() {
        return Err(Error::NoMappedTypes);
    }
    let dict = build_dictionary(corpus, &cfg.lang_left, &cfg.lang_right);
    let mut resolver = EntityResolver::from_corpus(corpus);
    let (duals, _) = build_dual_infoboxes(corpus, &typemap);
    let mut by_type: BTreeMap<(String, String), Vec<DualInfobox>> = BTreeMap::new();
    for d in duals {
        by_type
            .entry((d.type_left.clone(), d.type_right.clone()))
            .or_default()
            .push(d);
    }
    let mut out = BTreeMap::new();
    for (key, duals) in by_type {
        let signals = Signals::compute(corpus, &duals, &dict, &mut resolver, cfg.alignment.svd_f)?;
        if signals.attrs.is_empty() {
            continue;
        }
        out.insert(key, (signals, duals));
    }
    Ok(out)
}

/// Evaluate the plain top-k correlation baseline.
pub fn evaluate_topk(
    corpus: &Corpus,
    cfg: &RunConfig,
    gt: &GroundTruth,
    k: usize,
) -> Result<EvalReport, Error> {
    let run = run_signals_only(corpus, cfg)?;
    let mut per_type = Vec::new();
    for ((type_left, type_right), (signals, _)) in &run {
        let gt_pairs = gt.pairs_for(type_left, type_right);
        if gt_pairs.is_empty() {
            continue;
        }
        let scored =
            signals.scored_candidates(&cfg.lang_left, &cfg.lang_right, CorrelationSource::Lsi, 0);
        let pairs = topk_pairs(&scored, k);
        let freq_left = signals.frequencies(&cfg.lang_left);
        let freq_right = signals.frequencies(&cfg.lang_right);
        let weighted = weighted_metrics(&pairs, &gt_pairs, &freq_left, &freq_right)?;
        per_type.push(TypePairReport {
            type_left: type_left.clone(),
            type_right: type_right.clone(),
            weighted,
            macro_avg: macro_metrics(&pairs, &gt_pairs),
            map: BTreeMap::new(),
            overlap: 0.0,
            emitted_pairs: pairs.len(),
            ground_truth_pairs: gt_pairs.len(),
        });
    }
    Ok(EvalReport::aggregate(per_type))
}

/// Run match + eval for one configuration; used by the sweep command.
pub fn match_and_eval(
    corpus: &Corpus,
    cfg: &RunConfig,
    gt: &GroundTruth,
) -> Result<EvalReport, Error> {
    let run = run_match(corpus, cfg)?;
    let files: Vec<MatchFile> = run.results.iter().map(MatchFile::from_result).collect();
    evaluate(corpus, cfg, &files, gt)
}

/// Write a file atomically (temp + rename in the target directory).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into())
    ));
    fs::write(&tmp, bytes).map_err(|e| Error::Io(e.to_string()))?;
    fs::rename(&tmp, path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate, SynthSpec};
    use std::io::Write;

    pub(crate) fn synth_corpus(spec: &SynthSpec) -> (Corpus, GroundTruth) {
        let out = generate(spec).unwrap();
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(out.corpus_jsonl.as_bytes()).unwrap();
        let (corpus, _) = crate::corpus::load_corpus(f.path()).unwrap();
        let gt = GroundTruth::read_tsv(out.ground_truth_tsv.as_bytes()).unwrap();
        (corpus, gt)
    }

    #[test]
    fn clean_pipeline_recovers_planted_pairs() {
        let spec = SynthSpec {
            seed: 11,
            n_entities: 60,
            n_synonym_sets: 6,
            ..Default::default()
        };
        let (corpus, gt) = synth_corpus(&spec);
        let cfg = RunConfig::default();
        let report = match_and_eval(&corpus, &cfg, &gt).unwrap();
        assert!(report.weighted.f1 > 0.95, "F = {}", report.weighted.f1);
    }

    #[test]
    fn no_mapped_types_is_error() {
        let (corpus, _) = crate::corpus::Corpus::from_articles(vec![]);
        let cfg = RunConfig::default();
        assert!(matches!(
            run_match(&corpus, &cfg),
            Err(Error::NoMappedTypes)
        ));
    }

    #[test]
    fn config_file_parsing() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\nt_sim = 0.7\nlang_left = pt\nseed = 3").unwrap();
        let cfg = RunConfig::from_file(f.path()).unwrap();
        assert_eq!(cfg.alignment.t_sim, 0.7);
        assert_eq!(cfg.lang_left.as_str(), "pt");
        assert_eq!(cfg.seed, 3);
        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "nonsense = 1").unwrap();
        assert!(RunConfig::from_file(bad.path()).is_err());
    }

    #[test]
    fn match_files_round_trip_and_evaluate() {
        let spec = SynthSpec {
            seed: 4,
            n_entities: 40,
            n_synonym_sets: 5,
            ..Default::default()
        };
        let (corpus, gt) = synth_corpus(&spec);
        let cfg = RunConfig::default();
        let run = run_match(&corpus, &cfg).unwrap();
        let files: Vec<MatchFile> = run.results.iter().map(MatchFile::from_result).collect();
        let json = serde_json::to_string(&files).unwrap();
        let parsed: Vec<MatchFile> = serde_json::from_str(&json).unwrap();
        let report = evaluate(&corpus, &cfg, &parsed, &gt).unwrap();
        assert!(report.weighted.f1 > 0.95);
        assert!(report.map.contains_key("lsi"));
    }

    #[test]
    fn eval_rejects_disjoint_ground_truth() {
        let spec = SynthSpec {
            seed: 4,
            n_entities: 30,
            ..Default::default()
        };
        let (corpus, _) = synth_corpus(&spec);
        let cfg = RunConfig::default();
        let run = run_match(&corpus, &cfg).unwrap();
        let files: Vec<MatchFile> = run.results.iter().map(MatchFile::from_result).collect();
        let mut other = GroundTruth::default();
        other.insert("nope", "nada", "a", "b");
        assert!(evaluate(&corpus, &cfg, &files, &other).is_err());
    }
}
