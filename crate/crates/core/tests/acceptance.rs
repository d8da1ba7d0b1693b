//! Acceptance gate: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see
//! every line.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use infomatch::alignment::{attribute_alignment, AlignmentConfig, TableProvider};
use infomatch::corpus::{load_corpus, Corpus, Lang};
use infomatch::dictionary::TranslationDictionary;
use infomatch::evaluation::{macro_metrics, weighted_metrics, Frequencies, GroundTruth, Pair};
use infomatch::pipeline::{
    evaluate, evaluate_topk, match_and_eval, run_match, MatchEntry, MatchFile, MatchMember,
    RunConfig,
};
use infomatch::similarity::{
    cosine_dense, lsi_score, truncated_svd, AttributeGroup, OccurrenceMatrix,
};
use infomatch::synth::{generate, SynthSpec};

fn criterion(n: u32, desc: &str, f: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(f) {
        Ok(()) => println!("criterion {n:2}: PASS  {desc}"),
        Err(e) => {
            println!("criterion {n:2}: FAIL  {desc}");
            std::panic::resume_unwind(e);
        }
    }
}

fn synth_corpus(spec: &SynthSpec) -> (Corpus, GroundTruth) {
    let out = generate(spec).unwrap();
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(out.corpus_jsonl.as_bytes()).unwrap();
    let (corpus, report) = load_corpus(f.path()).unwrap();
    assert_eq!(report.skipped_lines, 0);
    let gt = GroundTruth::read_tsv(out.ground_truth_tsv.as_bytes()).unwrap();
    (corpus, gt)
}

fn noisy_spec(seed: u64) -> SynthSpec {
    SynthSpec {
        seed,
        n_entities: 150,
        n_synonym_sets: 8,
        overlap: 0.7,
        value_overlap: 0.8,
        link_density: 0.4,
        value_perturbation: 0.2,
        rare_attr_fraction: 0.2,
        opaque_set_fraction: 0.125,
        ..Default::default()
    }
}

/// Figure-style scores: EN {born, died, other names, spouse},
/// PT {cônjuge, falecimento, morte, nascimento, outros nomes}.
fn actor_provider() -> TableProvider {
    let mut p = TableProvider::new(vec![
        ("en", "born"),
        ("en", "died"),
        ("en", "other names"),
        ("en", "spouse"),
        ("pt", "cônjuge"),
        ("pt", "falecimento"),
        ("pt", "morte"),
        ("pt", "nascimento"),
        ("pt", "outros nomes"),
    ]);
    p.set_scores("born", "nascimento", 0.45, 0.73, 0.99);
    p.set_scores("falecimento", "morte", 0.91, 0.83, 0.94);
    p.set_scores("died", "falecimento", 0.65, 0.71, 0.92);
    p.set_scores("spouse", "cônjuge", 0.73, 0.26, 0.73);
    p.set_scores("died", "nascimento", 0.60, 0.38, 0.39);
    p.set_scores("died", "morte", 0.68, 0.73, 0.25);
    p.set_scores("other names", "outros nomes", 0.47, 0.00, 0.20);
    p.set_scores("born", "morte", 0.51, 0.54, 0.12);
    p.set_scores("nascimento", "falecimento", 0.95, 0.58, 0.00);
    p.set_lsi("morte", "nascimento", 0.0);
    p
}

fn random_matrix(rng: &mut ChaCha8Rng) -> OccurrenceMatrix {
    let n = rng.gen_range(4..=15);
    let m = rng.gen_range(n..=30);
    let attrs: Vec<(Lang, String)> = (0..n)
        .map(|i| {
            let lang = if i % 2 == 0 { "en" } else { "pt" };
            (Lang::new(lang), format!("a{i}"))
        })
        .collect();
    let rows: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let mut row: Vec<u8> = (0..m).map(|_| rng.gen_bool(0.4) as u8).collect();
            // a silent attribute has no similarity to measure
            if row.iter().all(|&c| c == 0) {
                let k = rng.gen_range(0..m);
                row[k] = 1;
            }
            row
        })
        .collect();
    OccurrenceMatrix::from_rows(attrs, &rows)
}

#[test]
fn criterion_01_value_similarity_worked_example() {
    criterion(1, "translated value cosine = 3/sqrt(18) in < 1 ms", || {
        let mut left = AttributeGroup::new("nascimento", "pt");
        for (c, f) in [("1963 irlanda", 1), ("18 de dezembro 1950", 1), ("estados unidos", 1)] {
            left.value_vector.insert(c.to_string(), f);
        }
        let mut right = AttributeGroup::new("born", "en");
        for (c, f) in [("1963 ireland", 1), ("june 4 1975", 1), ("united states", 2)] {
            right.value_vector.insert(c.to_string(), f);
        }
        let mut dict = TranslationDictionary::empty(Lang::new("pt"), Lang::new("en"));
        dict.insert("1963 irlanda", "1963 ireland");
        dict.insert("estados unidos", "united states");

        let start = Instant::now();
        let v = infomatch::similarity::vsim(&left, &right, &dict);
        let elapsed = start.elapsed();
        let expected = 3.0 / 18f64.sqrt();
        assert!((v - expected).abs() < 0.005 && (v - 0.71).abs() < 0.005, "vsim = {v}");
        assert!(elapsed.as_micros() < 1000, "took {elapsed:?}");
    });
}

#[test]
fn criterion_02_weighted_metrics_worked_example() {
    criterion(2, "weighted P = 1.0, R = 0.775, F ~ 0.8732 on the worked fixture", || {
        let freq_left: Frequencies =
            [("a1".into(), 0.6), ("a2".into(), 0.4)].into_iter().collect();
        let freq_right: Frequencies =
            [("b1".into(), 0.5), ("b2".into(), 0.3), ("b3".into(), 0.2)]
                .into_iter()
                .collect();
        let gt: BTreeSet<Pair> = [("a1", "b1"), ("a1", "b2"), ("a2", "b3")]
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .into_iter()
            .collect();
        let derived: BTreeSet<Pair> = [("a1", "b1"), ("a2", "b3")]
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .into_iter()
            .collect();
        let m = weighted_metrics(&derived, &gt, &freq_left, &freq_right).unwrap();
        assert_eq!(m.precision, 1.0);
        assert!((m.recall - 0.775).abs() < 1e-9, "recall = {}", m.recall);
        assert!((m.f1 - 0.8732).abs() < 5e-5, "f1 = {}", m.f1);
    });
}

#[test]
fn criterion_03_integration_and_revision_behavior() {
    criterion(3, "integration groups died~falecimento~morte, revision adds other names", || {
        let mut p = actor_provider();
        p.set_grouping("other names", "born", 0.9);
        p.set_grouping("outros nomes", "nascimento", 0.9);
        p.set_grouping("born", "spouse", 0.9);
        p.set_grouping("morte", "nascimento", 0.9);
        p.set_grouping("outros nomes", "cônjuge", 0.8);
        p.set_grouping("other names", "spouse", 0.8);

        let m = attribute_alignment(&p, &AlignmentConfig::default());

        // certain phase: died, falecimento and morte share one match
        let died = m.match_of(p.index("died")).expect("died matched");
        assert_eq!(m.match_of(p.index("falecimento")), Some(died));
        assert_eq!(m.match_of(p.index("morte")), Some(died));
        // (died, nascimento) is rejected: both sides already matched
        let born = m.match_of(p.index("born")).expect("born matched");
        assert_ne!(m.match_of(p.index("nascimento")), Some(died));
        assert_eq!(m.match_of(p.index("nascimento")), Some(born));
        // revision adds the uncertain pair
        let other = m.match_of(p.index("other names")).expect("revised in");
        assert_eq!(m.match_of(p.index("outros nomes")), Some(other));
        // morte stays out of born~nascimento
        assert_ne!(m.match_of(p.index("morte")), Some(born));
    });
}

#[test]
fn criterion_04_full_rank_equals_raw_cosine() {
    criterion(4, "cross-language score at full rank matches raw-row cosine on 100 matrices", || {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let matrix = random_matrix(&mut rng);
            let f = matrix.rank();
            let model = truncated_svd(&matrix, f).unwrap();
            for i in 0..matrix.n {
                for j in (i + 1)..matrix.n {
                    if matrix.attrs[i].0 == matrix.attrs[j].0 {
                        continue;
                    }
                    let got = lsi_score(i, j, &model, &matrix);
                    let raw = cosine_dense(&matrix.row(i), &matrix.row(j));
                    assert!(
                        (got - raw).abs() < 1e-6,
                        "n={} m={} f={f} pair ({i},{j}): {got} vs {raw}",
                        matrix.n,
                        matrix.m
                    );
                }
            }
        }
    });
}

#[test]
fn criterion_05_same_language_zero_rule() {
    criterion(5, "co-occurring same-language pairs score exactly zero for every rank", || {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..25 {
            let matrix = random_matrix(&mut rng);
            for f in 1..=matrix.rank() {
                let model = truncated_svd(&matrix, f).unwrap();
                for i in 0..matrix.n {
                    for j in (i + 1)..matrix.n {
                        if matrix.attrs[i].0 == matrix.attrs[j].0 && matrix.co_occur(i, j) {
                            assert_eq!(lsi_score(i, j, &model, &matrix), 0.0);
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_06_clean_synthetic_recovery() {
    criterion(6, "weighted F >= 0.95 on the clean 200-entity corpus in < 30 s", || {
        let start = Instant::now();
        let spec = SynthSpec {
            seed: 6,
            n_entities: 200,
            n_synonym_sets: 10,
            overlap: 1.0,
            ..Default::default()
        };
        let (corpus, gt) = synth_corpus(&spec);
        let report = match_and_eval(&corpus, &RunConfig::default(), &gt).unwrap();
        assert!(report.weighted.f1 >= 0.95, "F = {}", report.weighted.f1);
        assert!(start.elapsed().as_secs() < 30, "took {:?}", start.elapsed());
    });
}

#[test]
fn criterion_07_revision_improves_recall() {
    criterion(7, "revision phase raises recall without costing > 0.05 precision", || {
        let mut strict_somewhere = false;
        for seed in [7, 17, 27] {
            // rare attributes co-occur with everything when present and
            // would dominate the grouping signal on a corpus this small
            let spec = SynthSpec {
                rare_attr_fraction: 0.0,
                ..noisy_spec(seed)
            };
            let (corpus, gt) = synth_corpus(&spec);
            let with = RunConfig::default();
            let mut without = RunConfig::default();
            without.alignment.ablation.revise = false;
            let r_with = match_and_eval(&corpus, &with, &gt).unwrap();
            let r_without = match_and_eval(&corpus, &without, &gt).unwrap();
            assert!(
                r_with.weighted.recall >= r_without.weighted.recall,
                "seed {seed}: recall {} < {}",
                r_with.weighted.recall,
                r_without.weighted.recall
            );
            assert!(
                r_with.weighted.precision >= r_without.weighted.precision - 0.05,
                "seed {seed}: precision {} vs {}",
                r_with.weighted.precision,
                r_without.weighted.precision
            );
            if r_with.weighted.recall > r_without.weighted.recall {
                strict_somewhere = true;
            }
        }
        assert!(strict_somewhere, "no fixture showed a strict recall gain");
    });
}

#[test]
fn criterion_08_correlation_beats_random_ordering() {
    criterion(8, "mean MAP of the correlation ordering beats random over 10 seeds", || {
        let mut lsi_sum = 0.0;
        let mut random_sum = 0.0;
        for seed in 0..10 {
            let (corpus, gt) = synth_corpus(&noisy_spec(seed));
            let cfg = RunConfig {
                seed,
                ..Default::default()
            };
            let run = run_match(&corpus, &cfg).unwrap();
            let files: Vec<MatchFile> = run.results.iter().map(MatchFile::from_result).collect();
            let report = evaluate(&corpus, &cfg, &files, &gt).unwrap();
            lsi_sum += report.map["lsi"];
            random_sum += report.map["random"];
        }
        assert!(
            lsi_sum > random_sum,
            "MAP lsi {} <= random {}",
            lsi_sum / 10.0,
            random_sum / 10.0
        );
    });
}

#[test]
fn criterion_09_threshold_stability() {
    criterion(9, "weighted F varies by <= 0.15 over t_lsi in 0.0..0.6", || {
        let (corpus, gt) = synth_corpus(&noisy_spec(9));
        let mut fs = Vec::new();
        for step in 0..=6 {
            let mut cfg = RunConfig::default();
            cfg.alignment.t_lsi = step as f64 * 0.1;
            fs.push(match_and_eval(&corpus, &cfg, &gt).unwrap().weighted.f1);
        }
        let max = fs.iter().cloned().fold(f64::MIN, f64::max);
        let min = fs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max - min <= 0.15, "F range {:?} spans {}", fs, max - min);
    });
}

#[test]
fn criterion_10_topk_monotonicity() {
    criterion(10, "top-k baseline: recall non-decreasing, precision non-increasing in k", || {
        let (corpus, gt) = synth_corpus(&noisy_spec(10));
        let cfg = RunConfig::default();
        let mut last_recall = -1.0;
        let mut last_precision = f64::INFINITY;
        for k in [1, 3, 5, 10] {
            let r = evaluate_topk(&corpus, &cfg, &gt, k).unwrap();
            assert!(
                r.macro_avg.recall >= last_recall,
                "recall dropped at k={k}: {} < {last_recall}",
                r.macro_avg.recall
            );
            assert!(
                r.macro_avg.precision <= last_precision,
                "precision rose at k={k}: {} > {last_precision}",
                r.macro_avg.precision
            );
            last_recall = r.macro_avg.recall;
            last_precision = r.macro_avg.precision;
        }
    });
}

#[test]
fn criterion_11_match_output_is_deterministic() {
    criterion(11, "two identical match runs write byte-identical files", || {
        let bin = env!("CARGO_BIN_EXE_infomatch");
        let dir = tempfile::tempdir().unwrap();
        let data = dir.path().join("data");
        let status = std::process::Command::new(bin)
            .args(["synth", "--n-entities", "80", "--n-synonym-sets", "6"])
            .args(["--overlap", "0.8", "--value-perturbation", "0.1", "--seed", "11"])
            .arg("--out-dir")
            .arg(&data)
            .status()
            .unwrap();
        assert!(status.success());
        let corpus = data.join("corpus.jsonl");

        let mut outputs = Vec::new();
        for run in ["one", "two"] {
            let out = dir.path().join(run);
            let status = std::process::Command::new(bin)
                .arg("match")
                .arg("--corpus")
                .arg(&corpus)
                .arg("--out-dir")
                .arg(&out)
                .status()
                .unwrap();
            assert!(status.success());
            let mut names: Vec<_> = std::fs::read_dir(&out)
                .unwrap()
                .map(|e| e.unwrap().file_name())
                .collect();
            names.sort();
            let bytes: Vec<Vec<u8>> = names
                .iter()
                .map(|n| std::fs::read(out.join(n)).unwrap())
                .collect();
            outputs.push((names, bytes));
        }
        assert!(!outputs[0].0.is_empty());
        assert_eq!(outputs[0], outputs[1]);
    });
}

#[test]
fn criterion_12_metric_identities_at_perfect_agreement() {
    criterion(12, "weighted and macro metrics are exactly 1.0 when matches equal truth", || {
        for spec in [
            SynthSpec {
                seed: 12,
                n_entities: 50,
                n_synonym_sets: 6,
                ..Default::default()
            },
            noisy_spec(12),
        ] {
            let (corpus, gt) = synth_corpus(&spec);
            let cfg = RunConfig::default();
            let files: Vec<MatchFile> = gt
                .by_type
                .iter()
                .map(|((tl, tr), pairs)| MatchFile {
                    type_left: tl.clone(),
                    type_right: tr.clone(),
                    matches: pairs
                        .iter()
                        .map(|(a, b)| MatchEntry {
                            members: vec![
                                MatchMember {
                                    lang: cfg.lang_left.clone(),
                                    attribute: a.clone(),
                                },
                                MatchMember {
                                    lang: cfg.lang_right.clone(),
                                    attribute: b.clone(),
                                },
                            ],
                            provenance: Vec::new(),
                        })
                        .collect(),
                })
                .collect();
            let report = evaluate(&corpus, &cfg, &files, &gt).unwrap();
            assert_eq!(report.weighted.precision, 1.0);
            assert_eq!(report.weighted.recall, 1.0);
            assert_eq!(report.macro_avg.precision, 1.0);
            assert_eq!(report.macro_avg.recall, 1.0);

            for ((tl, tr), pairs) in &gt.by_type {
                let m = macro_metrics(pairs, &gt.pairs_for(tl, tr));
                assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
            }
        }
    });
}
