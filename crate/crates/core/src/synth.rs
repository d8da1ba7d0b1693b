//! Deterministic synthetic bilingual corpora with planted ground truth.
//!
//! Two pseudo-languages ("xx" and "yy") use disjoint token alphabets so no
//! accidental string similarity exists between them. Every planted synonym
//! set draws values from its own shared pool; translatable values get a
//! pair of cross-linked articles so the automatic dictionary can map them.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_types: usize,
    /// Entities per type; each exists in both languages with a cross-link.
    pub n_entities: usize,
    /// Planted synonym sets per type (one attribute per language each).
    pub n_synonym_sets: usize,
    /// Target schema overlap of the generated dual infoboxes, in [0,1].
    pub overlap: f64,
    /// Values per synonym set's private pool.
    pub value_pool_size: usize,
    /// Fraction of each pool that is translatable through value articles.
    pub value_overlap: f64,
    /// Probability that an attribute value carries a link to its value
    /// article.
    pub link_density: f64,
    /// Probability that the right side's value is replaced by another draw.
    pub value_perturbation: f64,
    /// Extra unmatched attributes per language, as a fraction of the
    /// synonym-set count. Rare: present in ~10% of infoboxes.
    pub rare_attr_fraction: f64,
    /// Fraction of synonym sets whose values are untranslatable and
    /// unlinked, so only co-occurrence evidence connects them.
    pub opaque_set_fraction: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            seed: 0,
            n_types: 1,
            n_entities: 100,
            n_synonym_sets: 8,
            overlap: 1.0,
            value_pool_size: 6,
            value_overlap: 1.0,
            link_density: 0.5,
            value_perturbation: 0.0,
            rare_attr_fraction: 0.0,
            opaque_set_fraction: 0.0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), Error> {
        for (name, v) in [
            ("overlap", self.overlap),
            ("value_overlap", self.value_overlap),
            ("link_density", self.link_density),
            ("value_perturbation", self.value_perturbation),
            ("rare_attr_fraction", self.rare_attr_fraction),
            ("opaque_set_fraction", self.opaque_set_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Param(format!("{name} must be in [0,1], got {v}")));
            }
        }
        if self.n_types == 0 || self.n_entities == 0 || self.n_synonym_sets == 0 {
            return Err(Error::Param(
                "n_types, n_entities and n_synonym_sets must be >= 1".into(),
            ));
        }
        if self.value_pool_size == 0 {
            return Err(Error::Param("value_pool_size must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-side presence probability q such that the expected per-dual overlap
/// I/(L+R-I) over `sets` independent synonym sets equals `target`.
///
/// The expectation is evaluated exactly over the multinomial distribution
/// of (both, one-side) set counts and inverted by bisection.
pub fn presence_for_overlap(target: f64, sets: usize) -> f64 {
    if target >= 1.0 {
        return 1.0;
    }
    if target <= 0.0 {
        return 0.0;
    }
    let expected = |q: f64| -> f64 {
        let p_both = q * q;
        let p_one = 2.0 * q * (1.0 - q);
        let p_none = (1.0 - q) * (1.0 - q);
        let k = sets;
        // multinomial over (i = both, o = one side, rest = none)
        let mut e = 0.0;
        let ln_fact = |n: usize| -> f64 { (1..=n).map(|x| (x as f64).ln()).sum() };
        for i in 0..=k {
            for o in 0..=(k - i) {
                if i + o == 0 {
                    continue;
                }
                let n = k - i - o;
                let ln_coef = ln_fact(k) - ln_fact(i) - ln_fact(o) - ln_fact(n);
                let ln_p = i as f64 * p_both.max(1e-300).ln()
                    + o as f64 * p_one.max(1e-300).ln()
                    + n as f64 * p_none.max(1e-300).ln();
                e += (ln_coef + ln_p).exp() * i as f64 / (i + o) as f64;
            }
        }
        e
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if expected(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Serialize)]
struct OutPair<'a> {
    name: String,
    value: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    links: Vec<&'a str>,
}

#[derive(Serialize)]
struct OutArticle<'a> {
    id: String,
    lang: &'a str,
    title: String,
    #[serde(rename = "type")]
    entity_type: String,
    infobox: Vec<OutPair<'a>>,
    cross_links: Vec<serde_json::Value>,
}

fn cross_link(lang: &str, id: &str) -> Vec<serde_json::Value> {
    vec![serde_json::json!({"lang": lang, "id": id})]
}

/// Generated corpus (JSONL) and ground truth (TSV) as strings. Output is a
/// pure function of the spec.
pub struct SynthOutput {
    pub corpus_jsonl: String,
    pub ground_truth_tsv: String,
}

pub fn generate(spec: &SynthSpec) -> Result<SynthOutput, Error> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut corpus = String::new();
    let mut gt = String::new();

    let presence = presence_for_overlap(spec.overlap, spec.n_synonym_sets);
    let n_opaque = (spec.opaque_set_fraction * spec.n_synonym_sets as f64).round() as usize;
    let n_rare = (spec.rare_attr_fraction * spec.n_synonym_sets as f64).ceil() as usize;
    let translatable = (spec.value_overlap * spec.value_pool_size as f64).round() as usize;

    let mut emit = |a: &OutArticle| {
        let line = serde_json::to_string(a).expect("serializable article");
        corpus.push_str(&line);
        corpus.push('\n');
    };

    for t in 0..spec.n_types {
        let type_l = format!("xtype{t}");
        let type_r = format!("ytype{t}");

        // cross-linked value articles make the pool translatable
        for s in 0..spec.n_synonym_sets {
            let opaque = s < n_opaque;
            if opaque {
                continue;
            }
            for v in 0..translatable {
                let (idl, idr) = (format!("xv_t{t}_s{s}_v{v}"), format!("yv_t{t}_s{s}_v{v}"));
                emit(&OutArticle {
                    id: idl.clone(),
                    lang: "xx",
                    title: format!("xval_t{t}_s{s}_v{v}"),
                    entity_type: "xvalue".into(),
                    infobox: vec![],
                    cross_links: cross_link("yy", &idr),
                });
                emit(&OutArticle {
                    id: idr,
                    lang: "yy",
                    title: format!("yval_t{t}_s{s}_v{v}"),
                    entity_type: "yvalue".into(),
                    infobox: vec![],
                    cross_links: cross_link("xx", &idl),
                });
            }
        }

        // planted ground truth: one cross-language pair per synonym set
        for s in 0..spec.n_synonym_sets {
            writeln!(gt, "{type_l}::{type_r}\txattr_t{t}_s{s}\tyattr_t{t}_s{s}")
                .expect("string write");
        }

        for e in 0..spec.n_entities {
            let (idl, idr) = (format!("xe_t{t}_e{e}"), format!("ye_t{t}_e{e}"));
            let mut left_pairs = Vec::new();
            let mut right_pairs = Vec::new();
            let mut left_titles: Vec<String> = Vec::new();
            let mut right_titles: Vec<String> = Vec::new();

            for s in 0..spec.n_synonym_sets {
                let opaque = s < n_opaque;
                let include_l = rng.gen_bool(presence);
                let include_r = rng.gen_bool(presence);
                let v = rng.gen_range(0..spec.value_pool_size);
                let perturb = rng.gen_bool(spec.value_perturbation);
                let linked = rng.gen_bool(spec.link_density);
                let v_r = if perturb {
                    rng.gen_range(0..spec.value_pool_size)
                } else {
                    v
                };
                if include_l {
                    let can_link = !opaque && linked && v < translatable;
                    if can_link {
                        left_titles.push(format!("xval_t{t}_s{s}_v{v}"));
                    }
                    left_pairs.push((
                        format!("xattr_t{t}_s{s}"),
                        format!("xval_t{t}_s{s}_v{v}"),
                        can_link,
                    ));
                }
                if include_r {
                    let can_link = !opaque && linked && v_r < translatable;
                    if can_link {
                        right_titles.push(format!("yval_t{t}_s{s}_v{v_r}"));
                    }
                    right_pairs.push((
                        format!("yattr_t{t}_s{s}"),
                        format!("yval_t{t}_s{s}_v{v_r}"),
                        can_link,
                    ));
                }
            }
            for r in 0..n_rare {
                if rng.gen_bool(0.1) {
                    let v = rng.gen_range(0..spec.value_pool_size);
                    left_pairs.push((format!("xrare_t{t}_r{r}"), format!("xnoise{v}"), false));
                }
                if rng.gen_bool(0.1) {
                    let v = rng.gen_range(0..spec.value_pool_size);
                    right_pairs.push((format!("yrare_t{t}_r{r}"), format!("ynoise{v}"), false));
                }
            }

            let mut li = 0usize;
            let left_infobox: Vec<OutPair> = left_pairs
                .iter()
                .map(|(name, value, linked)| OutPair {
                    name: name.clone(),
                    value: value.clone(),
                    links: if *linked {
                        let l = vec![left_titles[li].as_str()];
                        li += 1;
                        l
                    } else {
                        vec![]
                    },
                })
                .collect();
            let mut ri = 0usize;
            let right_infobox: Vec<OutPair> = right_pairs
                .iter()
                .map(|(name, value, linked)| OutPair {
                    name: name.clone(),
                    value: value.clone(),
                    links: if *linked {
                        let l = vec![right_titles[ri].as_str()];
                        ri += 1;
                        l
                    } else {
                        vec![]
                    },
                })
                .collect();

            emit(&OutArticle {
                id: idl.clone(),
                lang: "xx",
                title: format!("xent {t} {e}"),
                entity_type: type_l.clone(),
                infobox: left_infobox,
                cross_links: cross_link("yy", &idr),
            });
            emit(&OutArticle {
                id: idr,
                lang: "yy",
                title: format!("yent {t} {e}"),
                entity_type: type_r.clone(),
                infobox: right_infobox,
                cross_links: cross_link("xx", &idl),
            });
        }
    }

    Ok(SynthOutput {
        corpus_jsonl: corpus,
        ground_truth_tsv: gt,
    })
}
