//! Per-type attribute groups and the three similarity signals: value
//! similarity (vsim), link-structure similarity (lsim), and the LSI
//! co-occurrence score, plus the plain co-occurrence correlation
//! alternatives and grouping scores used by the revise phase.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;

use crate::corpus::{Corpus, DualInfobox, Lang};
use crate::dictionary::{translate_vector, TranslationDictionary, ValueVector};
use crate::error::Error;

/// Canonical entity id for link targets. Articles connected by
/// cross-language links share one cluster; unresolved targets become
/// singletons keyed by (language, title).
pub type EntityId = u32;

/// Maps (language, normalized title) link targets to entity clusters.
#[derive(Debug, Clone)]
pub struct EntityResolver {
    clusters: HashMap<(Lang, String), EntityId>,
    next: EntityId,
}

impl EntityResolver {
    /// Build clusters as connected components over the corpus's
    /// cross-language links, with title identity within a language.
    pub fn from_corpus(corpus: &Corpus) -> Self {
        // union-find over article indices keyed by (lang, title)
        let mut key_of: Vec<(Lang, String)> = Vec::new();
        let mut index: HashMap<(Lang, String), usize> = HashMap::new();
        let mut parent: Vec<usize> = Vec::new();

        let node = |key: (Lang, String),
                        index: &mut HashMap<(Lang, String), usize>,
                        key_of: &mut Vec<(Lang, String)>,
                        parent: &mut Vec<usize>| {
            *index.entry(key.clone()).or_insert_with(|| {
                key_of.push(key);
                parent.push(parent.len());
                parent.len() - 1
            })
        };

        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }

        for article in corpus.articles() {
            let a = node(
                (article.lang.clone(), article.title.clone()),
                &mut index,
                &mut key_of,
                &mut parent,
            );
            for (lang, target_id) in &article.cross_links {
                if let Some(target) = corpus.get(target_id) {
                    let b = node(
                        (lang.clone(), target.title.clone()),
                        &mut index,
                        &mut key_of,
                        &mut parent,
                    );
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }

        let mut clusters = HashMap::new();
        let mut root_ids: HashMap<usize, EntityId> = HashMap::new();
        let mut next: EntityId = 0;
        for (i, key) in key_of.iter().enumerate() {
            let root = find(&mut parent, i);
            let id = *root_ids.entry(root).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            clusters.insert(key.clone(), id);
        }
        EntityResolver { clusters, next }
    }

    /// Resolve a link target, creating a singleton cluster if unknown.
    pub fn resolve(&mut self, lang: &Lang, title: &str) -> EntityId {
        if let Some(&id) = self.clusters.get(&(lang.clone(), title.to_string())) {
            return id;
        }
        let id = self.next;
        self.next += 1;
        self.clusters.insert((lang.clone(), title.to_string()), id);
        id
    }
}

/// All occurrences of one attribute name within one type and language.
#[derive(Debug, Clone)]
pub struct AttributeGroup {
    pub name: String,
    pub lang: Lang,
    /// Raw term frequencies over value components.
    pub value_vector: ValueVector,
    /// Raw frequencies over canonical link-target entities.
    pub link_set: BTreeMap<EntityId, u64>,
    /// Number of mono-lingual infoboxes of the type containing the attribute.
    pub occurrences: u64,
}

impl AttributeGroup {
    pub fn new(name: impl Into<String>, lang: impl Into<Lang>) -> Self {
        AttributeGroup {
            name: name.into(),
            lang: lang.into(),
            value_vector: ValueVector::new(),
            link_set: BTreeMap::new(),
            occurrences: 0,
        }
    }
}

/// Merge every attribute occurrence over the dual infoboxes of one type
/// pair into per-(name, language) groups, sorted by (language, name).
pub fn build_attribute_groups(
    corpus: &Corpus,
    duals: &[DualInfobox],
    resolver: &mut EntityResolver,
) -> Vec<AttributeGroup> {
    let mut groups: BTreeMap<(Lang, String), AttributeGroup> = BTreeMap::new();
    for dual in duals {
        for (side_id, side) in [(&dual.left_id, dual.left(corpus)), (&dual.right_id, dual.right(corpus))] {
            let lang = corpus.get(side_id).expect("dual article").lang.clone();
            for pair in &side.pairs {
                let group = groups
                    .entry((lang.clone(), pair.name.clone()))
                    .or_insert_with(|| AttributeGroup::new(pair.name.clone(), lang.clone()));
                group.occurrences += 1;
                for component in &pair.components {
                    *group.value_vector.entry(component.clone()).or_default() += 1;
                }
                for target in &pair.links {
                    let entity = resolver.resolve(&lang, target);
                    *group.link_set.entry(entity).or_default() += 1;
                }
            }
        }
    }
    groups.into_values().collect()
}

/// Binary attribute-by-dual-infobox occurrence matrix with derived
/// pairwise co-occurrence counts.
#[derive(Debug, Clone)]
pub struct OccurrenceMatrix {
    /// (language, name) of each row, aligned with the group order.
    pub attrs: Vec<(Lang, String)>,
    /// n x m binary cells, row-major.
    cells: Vec<u8>,
    pub n: usize,
    pub m: usize,
    /// Per-attribute occurrence counts over the duals (O_p).
    occ: Vec<u32>,
    /// Pairwise co-occurrence counts (O_pq), n x n row-major.
    co: Vec<u32>,
}

impl OccurrenceMatrix {
    /// Build a matrix from explicit binary rows (fixtures, tests).
    pub fn from_rows(attrs: Vec<(Lang, String)>, rows: &[Vec<u8>]) -> Self {
        let n = rows.len();
        assert_eq!(attrs.len(), n);
        let m = rows.first().map_or(0, |r| r.len());
        let cells: Vec<u8> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        let mut occ = vec![0u32; n];
        for i in 0..n {
            occ[i] = rows[i].iter().map(|&c| c as u32).sum();
        }
        let mut co = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let c: u32 = (0..m).map(|k| (rows[i][k] & rows[j][k]) as u32).sum();
                co[i * n + j] = c;
                co[j * n + i] = c;
            }
        }
        OccurrenceMatrix {
            attrs,
            cells,
            n,
            m,
            occ,
            co,
        }
    }

    pub fn cell(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.m + j]
    }

    pub fn o(&self, i: usize) -> u32 {
        self.occ[i]
    }

    pub fn o_pq(&self, i: usize, j: usize) -> u32 {
        self.co[i * self.n + j]
    }

    /// Whether two attributes ever appear in the same dual infobox. For
    /// same-language pairs this is co-occurrence in a mono-lingual infobox.
    pub fn co_occur(&self, i: usize, j: usize) -> bool {
        self.o_pq(i, j) > 0
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.m).map(|j| self.cell(i, j) as f64).collect()
    }

    pub fn index_of(&self, lang: &Lang, name: &str) -> Option<usize> {
        self.attrs
            .iter()
            .position(|(l, n)| l == lang && n == name)
    }

    pub fn rank(&self) -> usize {
        let dense = self.to_dense();
        dense.rank(1e-9)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.m, |i, j| self.cell(i, j) as f64)
    }
}

/// Build the occurrence matrix for one type pair. Row order follows the
/// group order produced by [`build_attribute_groups`].
pub fn build_occurrence_matrix(
    corpus: &Corpus,
    duals: &[DualInfobox],
    groups: &[AttributeGroup],
) -> OccurrenceMatrix {
    let n = groups.len();
    let m = duals.len();
    let index: HashMap<(&Lang, &str), usize> = groups
        .iter()
        .enumerate()
        .map(|(i, g)| ((&g.lang, g.name.as_str()), i))
        .collect();

    let mut cells = vec![0u8; n * m];
    for (j, dual) in duals.iter().enumerate() {
        for side_id in [&dual.left_id, &dual.right_id] {
            let article = corpus.get(side_id).expect("dual article");
            for name in article.infobox.attribute_names() {
                if let Some(&i) = index.get(&(&article.lang, name)) {
                    cells[i * m + j] = 1;
                }
            }
        }
    }

    let mut occ = vec![0u32; n];
    for i in 0..n {
        occ[i] = (0..m).map(|j| cells[i * m + j] as u32).sum();
    }
    let mut co = vec![0u32; n * n];
    for i in 0..n {
        for j in i..n {
            let c: u32 = (0..m)
                .map(|k| (cells[i * m + k] & cells[j * m + k]) as u32)
                .sum();
            co[i * n + j] = c;
            co[j * n + i] = c;
        }
    }

    OccurrenceMatrix {
        attrs: groups.iter().map(|g| (g.lang.clone(), g.name.clone())).collect(),
        cells,
        n,
        m,
        occ,
        co,
    }
}

/// Rank-f factorization of the occurrence matrix. Attribute vectors are
/// the rows of U_f scaled by the top f singular values.
#[derive(Debug, Clone)]
pub struct LsiModel {
    pub f: usize,
    /// n x f matrix of scaled attribute vectors.
    pub attribute_vectors: DMatrix<f64>,
    /// Retained singular values, descending.
    pub singular_values: Vec<f64>,
}

impl LsiModel {
    pub fn attribute_vector(&self, i: usize) -> Vec<f64> {
        self.attribute_vectors.row(i).iter().copied().collect()
    }
}

/// Default LSI rank for an n x m matrix.
pub fn default_rank(n: usize, m: usize) -> usize {
    let min = n.min(m);
    min.min(2.max((0.2 * min as f64).ceil() as usize)).max(1)
}

/// Truncated SVD of the occurrence matrix.
pub fn truncated_svd(matrix: &OccurrenceMatrix, f: usize) -> Result<LsiModel, Error> {
    let limit = matrix.n.min(matrix.m);
    if f == 0 || f > limit {
        return Err(Error::Param(format!(
            "svd rank f={f} out of range 1..={limit}"
        )));
    }
    let dense = matrix.to_dense();
    let svd = dense.svd(true, false);
    let u = svd.u.expect("u requested");

    // nalgebra does not guarantee ordering; sort dimensions explicitly.
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("finite singular values")
    });
    let kept = &order[..f];

    let mut vectors = DMatrix::zeros(matrix.n, f);
    let mut singular_values = Vec::with_capacity(f);
    for (col, &k) in kept.iter().enumerate() {
        let s = svd.singular_values[k];
        singular_values.push(s);
        for i in 0..matrix.n {
            vectors[(i, col)] = u[(i, k)] * s;
        }
    }
    Ok(LsiModel {
        f,
        attribute_vectors: vectors,
        singular_values,
    })
}

pub fn cosine_dense(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

pub fn cosine_sparse<K: Ord>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let dot: f64 = a
        .iter()
        .filter_map(|(k, &va)| b.get(k).map(|&vb| va as f64 * vb as f64))
        .sum();
    let na: f64 = a.values().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Cosine of translated value vectors. Translation applies only in the
/// cross-language case and requires the dictionary direction to match.
pub fn vsim(a: &AttributeGroup, b: &AttributeGroup, dict: &TranslationDictionary) -> f64 {
    if a.lang == b.lang {
        return cosine_sparse(&a.value_vector, &b.value_vector);
    }
    debug_assert!(
        a.lang == dict.from && b.lang == dict.to,
        "dictionary direction must be a.lang -> b.lang"
    );
    let translated = translate_vector(&a.value_vector, dict);
    cosine_sparse(&translated, &b.value_vector)
}

/// Cosine of canonical link-target frequency vectors.
pub fn lsim(a: &AttributeGroup, b: &AttributeGroup) -> f64 {
    cosine_sparse(&a.link_set, &b.link_set)
}

/// LSI score with the three-case rule: cosine across languages, zero for
/// same-language pairs co-occurring in a mono-lingual infobox, complement
/// of the cosine otherwise. Clamped to [0, 1].
pub fn lsi_score(p: usize, q: usize, model: &LsiModel, matrix: &OccurrenceMatrix) -> f64 {
    let (lang_p, _) = &matrix.attrs[p];
    let (lang_q, _) = &matrix.attrs[q];
    let same_language = lang_p == lang_q;
    if same_language && matrix.co_occur(p, q) {
        return 0.0;
    }
    let cos = cosine_dense(&model.attribute_vector(p), &model.attribute_vector(q));
    let score = if same_language { 1.0 - cos } else { cos };
    score.clamp(0.0, 1.0)
}

/// Plain co-occurrence correlation alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationVariant {
    X1,
    X2,
    X3,
}

pub fn correlation_x(
    p: usize,
    q: usize,
    matrix: &OccurrenceMatrix,
    variant: CorrelationVariant,
) -> f64 {
    let o_p = matrix.o(p) as f64;
    let o_q = matrix.o(q) as f64;
    let o_pq = matrix.o_pq(p, q) as f64;
    match variant {
        CorrelationVariant::X1 => o_pq,
        CorrelationVariant::X2 => (1.0 + o_pq / o_p) * (1.0 + o_pq / o_q),
        CorrelationVariant::X3 => o_pq * o_pq / (o_p + o_q),
    }
}

/// Grouping score of two same-language attributes: O_pq / min(O_p, O_q).
pub fn grouping_score(p: usize, q: usize, matrix: &OccurrenceMatrix) -> f64 {
    let o_min = matrix.o(p).min(matrix.o(q));
    if o_min == 0 {
        return 0.0;
    }
    matrix.o_pq(p, q) as f64 / o_min as f64
}
