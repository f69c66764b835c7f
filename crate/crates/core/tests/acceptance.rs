//! Acceptance suite: one test per release criterion, each printing a PASS
//! line (visible with `--nocapture`). Criteria marked directional run the
//! full experiment at the pinned configuration and assert the orderings.
//!
//! Run with `cargo test -p albatch --test acceptance -- --nocapture`.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, RngCore};

use albatch::data::{Dataset, FeatureVector, SeededRng};
use albatch::harness::{
    bench_selection, render_raw_csv, run_experiment, DatasetSpec, ExperimentConfig,
    FirstBatchMode, ModelSpec, RunResult,
};
use albatch::ingest::{load_idx, SynthConfig};
use albatch::kmeans::{kmeans, kmeanspp_init, lloyd_iterate, weighted_kmeans, KmeansConfig};
use albatch::models::{gradient_check, ProbVector, TrainConfig};
use albatch::scoring::{
    entropy_score, informativeness_margin, least_confident_score, margin, Measure,
    ScoreOrientation,
};
use albatch::submodular::{distances_to_similarities, facility_location_value, greedy_select, SimilarityMatrix};

fn pass(number: u32, name: &str) {
    println!("ACCEPTANCE {number:02} ({name}): PASS");
}

fn random_points(rng: &mut SeededRng, n: usize, d: usize, lo: f64, hi: f64) -> Vec<FeatureVector> {
    (0..n)
        .map(|_| FeatureVector::dense((0..d).map(|_| rng.random_range(lo..hi)).collect()).unwrap())
        .collect()
}

/// 1. Weighted Lloyd monotonicity over 500 random instances
///    (n <= 200, d <= 10, k <= 8, weights in [0,1]); tolerance 1e-9 absolute.
#[test]
fn criterion_01_weighted_lloyd_monotonicity() {
    let started = Instant::now();
    let mut rng = SeededRng::new(0xAC01);
    for trial in 0..500 {
        let n = rng.random_range(2..=200usize);
        let d = rng.random_range(1..=10usize);
        let k = rng.random_range(1..=8usize.min(n));
        let points = random_points(&mut rng, n, d, -10.0, 10.0);
        let refs: Vec<&FeatureVector> = points.iter().collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();

        let mut init_rng = SeededRng::new(rng.next_u64());
        let mut centers = kmeanspp_init(&refs, Some(&weights), k, &mut init_rng).unwrap();
        let mut prev = f64::INFINITY;
        for iter in 0..20 {
            let (_, next, objective) = lloyd_iterate(&refs, Some(&weights), &centers);
            assert!(
                objective <= prev + 1e-9,
                "trial {trial} iter {iter}: objective rose {prev} -> {objective}"
            );
            prev = objective;
            centers = next;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 1 min");
    pass(1, "weighted Lloyd monotonicity");
}

/// 2. At convergence every center equals sum(z w x) / sum(z w), recomputed
///    independently, within 1e-9 relative.
#[test]
fn criterion_02_weighted_centroid_formula() {
    let mut rng = SeededRng::new(0xAC02);
    for trial in 0..100 {
        let n = rng.random_range(5..=120usize);
        let d = rng.random_range(1..=8usize);
        let k = rng.random_range(1..=6usize.min(n));
        let points = random_points(&mut rng, n, d, -5.0, 5.0);
        let refs: Vec<&FeatureVector> = points.iter().collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();

        let model = weighted_kmeans(&refs, &weights, &KmeansConfig::new(k, rng.next_u64())).unwrap();

        let mut sums = vec![vec![0.0f64; d]; k];
        let mut mass = vec![0.0f64; k];
        for (i, p) in points.iter().enumerate() {
            let c = model.assignments[i];
            mass[c] += model.weights[i];
            for (j, v) in p.to_dense().iter().enumerate() {
                sums[c][j] += model.weights[i] * v;
            }
        }
        for c in 0..k {
            if mass[c] == 0.0 {
                continue;
            }
            for j in 0..d {
                let expect = sums[c][j] / mass[c];
                let got = model.centers[c][j];
                assert!(
                    (got - expect).abs() <= 1e-9 * expect.abs().max(1.0),
                    "trial {trial}: center[{c}][{j}] {got} != {expect}"
                );
            }
        }
    }
    pass(2, "weighted centroid formula oracle");
}

/// 3. Weighted k-means with uniform weights equals the unweighted path
///    (identical assignments, centers within 1e-12) under a shared init.
#[test]
fn criterion_03_uniform_weight_reduction() {
    let mut rng = SeededRng::new(0xAC03);
    for trial in 0..50 {
        let n = rng.random_range(8..=80usize);
        let d = rng.random_range(1..=6usize);
        let k = rng.random_range(1..=6usize.min(n));
        let points = random_points(&mut rng, n, d, -5.0, 5.0);
        let refs: Vec<&FeatureVector> = points.iter().collect();
        let cfg = KmeansConfig::new(k, rng.next_u64());

        let weighted = weighted_kmeans(&refs, &vec![1.0; n], &cfg).unwrap();
        let plain = kmeans(&refs, &cfg).unwrap();
        assert_eq!(weighted.assignments, plain.assignments, "trial {trial}");
        for (a, b) in weighted.centers.iter().zip(&plain.centers) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() <= 1e-12, "trial {trial}: {x} vs {y}");
            }
        }
    }
    pass(3, "uniform-weight reduction");
}

fn naive_greedy(sim: &SimilarityMatrix, k: usize) -> Vec<usize> {
    let n = sim.len();
    let mut cover = vec![0.0f64; n];
    let mut chosen = vec![false; n];
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best_gain = f64::NEG_INFINITY;
        let mut best_col = usize::MAX;
        for col in 0..n {
            if chosen[col] {
                continue;
            }
            let mut gain = 0.0;
            for row in 0..n {
                let v = sim.get(row, col) - cover[row];
                if v > 0.0 {
                    gain += v;
                }
            }
            if gain > best_gain {
                best_gain = gain;
                best_col = col;
            }
        }
        chosen[best_col] = true;
        for row in 0..n {
            let v = sim.get(row, best_col);
            if v > cover[row] {
                cover[row] = v;
            }
        }
        out.push(best_col);
    }
    out
}

fn best_subset_value(sim: &SimilarityMatrix, size: usize) -> f64 {
    fn recurse(start: usize, left: usize, subset: &mut Vec<usize>, sim: &SimilarityMatrix, best: &mut f64) {
        if left == 0 {
            *best = best.max(facility_location_value(subset, sim).unwrap());
            return;
        }
        for i in start..sim.len() {
            subset.push(i);
            recurse(i + 1, left - 1, subset, sim, best);
            subset.pop();
        }
    }
    let mut best = f64::NEG_INFINITY;
    recurse(0, size, &mut Vec::new(), sim, &mut best);
    best
}

/// 4. Greedy guarantee on 200 exhaustively solvable instances plus exact
///    lazy == naive equality; runtime < 2 min.
#[test]
fn criterion_04_greedy_guarantee_and_lazy_equality() {
    let started = Instant::now();
    let bound = 1.0 - 1.0 / std::f64::consts::E;
    let mut rng = SeededRng::new(0xAC04);
    for trial in 0..200 {
        let n = rng.random_range(4..=12usize);
        let k = rng.random_range(1..=3usize.min(n));
        let d = rng.random_range(1..=5usize);
        let points = random_points(&mut rng, n, d, -5.0, 5.0);
        let refs: Vec<&FeatureVector> = points.iter().collect();
        let sim = distances_to_similarities(&refs).unwrap();

        let lazy = greedy_select(&sim, k).unwrap();
        assert_eq!(lazy, naive_greedy(&sim, k), "trial {trial}: lazy != naive");

        let value = facility_location_value(&lazy, &sim).unwrap();
        let opt = best_subset_value(&sim, k);
        assert!(
            value >= bound * opt - 1e-9,
            "trial {trial}: {value} < (1-1/e)*{opt}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, budget 2 min");
    pass(4, "greedy guarantee + lazy equality");
}

/// 5. The size-2 subset minimizing the distance objective equals the subset
///    maximizing the transformed similarity objective, exhaustively, on 100
///    random 6-8 point instances. Instances whose minimizer is not unique
///    (exact ties happen in low dimensions) are checked by optimal value:
///    both routes must land on a subset attaining the optimum.
#[test]
fn criterion_05_min_distance_max_similarity_equivalence() {
    let mut rng = SeededRng::new(0xAC05);
    for trial in 0..100 {
        let n = rng.random_range(6..=8usize);
        let d = rng.random_range(1..=4usize);
        let points = random_points(&mut rng, n, d, -5.0, 5.0);
        let refs: Vec<&FeatureVector> = points.iter().collect();
        let sim = distances_to_similarities(&refs).unwrap();

        let distance_of = |subset: &[usize]| -> f64 {
            refs.iter()
                .map(|p| {
                    subset
                        .iter()
                        .map(|&s| albatch::data::euclidean_distance(p, refs[s]).unwrap())
                        .fold(f64::INFINITY, f64::min)
                })
                .sum()
        };

        let mut ranked: Vec<(f64, Vec<usize>)> = Vec::new();
        let mut arg_max: (f64, Vec<usize>) = (f64::NEG_INFINITY, vec![]);
        for i in 0..n {
            for j in (i + 1)..n {
                let subset = vec![i, j];
                ranked.push((distance_of(&subset), subset.clone()));
                let cover = facility_location_value(&subset, &sim).unwrap();
                if cover > arg_max.0 {
                    arg_max = (cover, subset);
                }
            }
        }
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
        let best = ranked[0].0;
        let tolerance = 1e-9 * best.max(1.0);
        if ranked[1].0 - best > tolerance {
            // unique minimizer: the subsets must coincide
            assert_eq!(ranked[0].1, arg_max.1, "trial {trial}: objectives disagree");
        } else {
            // tied optimum: the similarity winner must attain it
            let achieved = distance_of(&arg_max.1);
            assert!(
                achieved <= best + tolerance,
                "trial {trial}: similarity argmax misses the distance optimum \
                 ({achieved} vs {best})"
            );
        }
    }
    pass(5, "min-distance / max-similarity equivalence");
}

/// 6. Scoring functions match an independent formula loop on 1000 random
///    probability vectors to 1e-12; all outputs within [0,1].
#[test]
fn criterion_06_score_correctness() {
    let mut rng = SeededRng::new(0xAC06);
    for trial in 0..1000 {
        let c = rng.random_range(2..=10usize);
        let raw: Vec<f64> = (0..c).map(|_| rng.random_range(1e-6..1.0)).collect();
        let sum: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|v| v / sum).collect();
        let p = ProbVector::new(probs.clone()).unwrap();

        // independent oracle route: sort a copy, use the closed formulas
        let mut sorted = probs.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let margin_oracle = sorted[0] - sorted[1];
        let entropy_oracle =
            -probs.iter().filter(|&&q| q > 0.0).map(|&q| q * q.ln()).sum::<f64>() / (c as f64).ln();
        let lc_oracle = (1.0 - sorted[0]) * c as f64 / (c as f64 - 1.0);

        let got_margin = margin(&p).unwrap();
        let got_inf = informativeness_margin(&p).unwrap();
        let got_entropy = entropy_score(&p);
        let got_lc = least_confident_score(&p);

        assert!((got_margin - margin_oracle).abs() <= 1e-12, "trial {trial}");
        assert!((got_inf - (1.0 - margin_oracle)).abs() <= 1e-12, "trial {trial}");
        assert!((got_entropy - entropy_oracle).abs() <= 1e-12, "trial {trial}");
        assert!((got_lc - lc_oracle).abs() <= 1e-12, "trial {trial}");
        for v in [got_margin, got_inf, got_entropy, got_lc] {
            assert!((0.0..=1.0).contains(&v), "trial {trial}: {v} out of range");
        }
    }
    pass(6, "score correctness oracle");
}

/// 7. Analytic gradients match central finite differences: logreg < 1e-5,
///    MLP < 1e-4 (fixtures seeded away from ReLU kinks).
#[test]
fn criterion_07_gradient_checks() {
    let data = vec![
        (FeatureVector::dense(vec![0.5, -1.0, 2.0]).unwrap(), 0usize),
        (FeatureVector::dense(vec![1.5, 0.3, -0.7]).unwrap(), 2),
        (FeatureVector::dense(vec![-0.2, 0.9, 0.1]).unwrap(), 1),
        (FeatureVector::sparse(3, vec![(0, 1.0), (2, -2.0)]).unwrap(), 1),
    ];
    let refs: Vec<_> = data.iter().map(|(f, y)| (f, *y)).collect();

    let mut logreg = TrainConfig::logreg();
    logreg.init_seed = 11;
    let logreg_err = gradient_check(&logreg, &refs, 3).unwrap();
    assert!(logreg_err < 1e-5, "logreg gradcheck {logreg_err}");

    let mut mlp = TrainConfig::mlp();
    mlp.hidden_sizes = vec![4, 3];
    mlp.init_seed = 2;
    let mlp_err = gradient_check(&mlp, &refs, 3).unwrap();
    assert!(mlp_err < 1e-4, "mlp gradcheck {mlp_err}");
    pass(7, "gradient checks");
}

/// The pinned synthetic redundancy fixture shared by criteria 8 and 12.
fn redundancy_config(strategies: &[&str], budget: usize, first_batch: FirstBatchMode) -> ExperimentConfig {
    ExperimentConfig {
        dataset: DatasetSpec::Synthetic(SynthConfig {
            num_classes: 10,
            points_per_class: 100,
            duplication_factor: 10,
            cluster_spread: 1.0,
            dim: 32,
            seed: 2024,
        }),
        model: ModelSpec::logreg(),
        strategies: strategies.iter().map(|s| s.to_string()).collect(),
        batch_size: 100,
        budget,
        repetitions: 16,
        base_seed: 1000,
        first_batch_mode: first_batch,
        measure: Measure::Margin,
        score_orientation: ScoreOrientation::OneMinusMargin,
        train_fraction: Some(0.7),
        output_dir: None,
    }
}

fn final_accuracy_by_seed(runs: &[RunResult], strategy: &str) -> Vec<(u64, f64)> {
    let mut out: Vec<(u64, f64)> = runs
        .iter()
        .filter(|r| r.strategy == strategy)
        .map(|r| (r.seed, r.curve.last().unwrap().test_accuracy))
        .collect();
    out.sort_by_key(|&(seed, _)| seed);
    out
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

/// 8. Redundancy experiment: WCluster(10), Cluster(10) >= Uncertainty >=
///    Random in mean final accuracy, and the paired Cluster-minus-Uncertainty
///    difference is non-negative at B = 500. Runtime < 10 min.
#[test]
fn criterion_08_redundancy_experiment() {
    let started = Instant::now();
    let config = redundancy_config(
        &["random", "uncertainty", "cluster:b=10", "wcluster:b=10"],
        500,
        FirstBatchMode::Random,
    );
    let output = run_experiment(&config).unwrap();

    let random = final_accuracy_by_seed(&output.runs, "random");
    let uncertainty = final_accuracy_by_seed(&output.runs, "uncertainty");
    let cluster = final_accuracy_by_seed(&output.runs, "cluster:b=10");
    let wcluster = final_accuracy_by_seed(&output.runs, "wcluster:b=10");

    let m_random = mean(random.iter().map(|&(_, a)| a));
    let m_uncertainty = mean(uncertainty.iter().map(|&(_, a)| a));
    let m_cluster = mean(cluster.iter().map(|&(_, a)| a));
    let m_wcluster = mean(wcluster.iter().map(|&(_, a)| a));

    println!(
        "  final means: wcluster {m_wcluster:.4}, cluster {m_cluster:.4}, \
         uncertainty {m_uncertainty:.4}, random {m_random:.4}"
    );
    assert!(m_wcluster >= m_uncertainty, "{m_wcluster} < {m_uncertainty}");
    assert!(m_cluster >= m_uncertainty, "{m_cluster} < {m_uncertainty}");
    assert!(m_uncertainty >= m_random, "{m_uncertainty} < {m_random}");

    // paired across shared seeds
    let paired_diff = mean(
        cluster
            .iter()
            .zip(&uncertainty)
            .map(|(&(sa, a), &(sb, b))| {
                assert_eq!(sa, sb, "seeds must pair up");
                a - b
            }),
    );
    assert!(paired_diff >= 0.0, "paired cluster - uncertainty = {paired_diff}");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}, budget 10 min");
    pass(8, "synthetic redundancy directional experiment");
}

fn mnist_dir() -> Option<PathBuf> {
    let dir = std::env::var_os("ALBATCH_MNIST_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist")
        });
    let files = [
        "train-images-idx3-ubyte",
        "train-labels-idx1-ubyte",
        "t10k-images-idx3-ubyte",
        "t10k-labels-idx1-ubyte",
    ];
    if files.iter().all(|f| dir.join(f).exists()) {
        Some(dir)
    } else {
        None
    }
}

/// 9. MNIST desk-scale experiment: 20k-train subset / full 10k test, MLP
///    128/64, k = 100, B = 1000, beta = 10, R = 8. Margin uncertainty beats
///    Random by >= 0.01 mean accuracy at B = 1000 and Cluster(10) stays
///    within 0.002 of Uncertainty. Runs only when the four standard IDX
///    files are present (data/mnist/ or $ALBATCH_MNIST_DIR); skips with a
///    notice otherwise.
#[test]
fn criterion_09_mnist_experiment() {
    let Some(dir) = mnist_dir() else {
        println!(
            "ACCEPTANCE 09 (MNIST desk-scale experiment): SKIP — dataset not present; \
             place the IDX files under data/mnist/ or set ALBATCH_MNIST_DIR"
        );
        return;
    };
    let started = Instant::now();
    let config = ExperimentConfig {
        dataset: DatasetSpec::Idx {
            train_images: dir.join("train-images-idx3-ubyte"),
            train_labels: dir.join("train-labels-idx1-ubyte"),
            test_images: dir.join("t10k-images-idx3-ubyte"),
            test_labels: dir.join("t10k-labels-idx1-ubyte"),
            train_subset: Some(20_000),
        },
        model: ModelSpec::mlp(),
        strategies: vec!["random".into(), "uncertainty".into(), "cluster:b=10".into()],
        batch_size: 100,
        budget: 1000,
        repetitions: 8,
        base_seed: 7000,
        first_batch_mode: FirstBatchMode::Random,
        measure: Measure::Margin,
        score_orientation: ScoreOrientation::OneMinusMargin,
        train_fraction: None,
        output_dir: None,
    };
    let output = run_experiment(&config).unwrap();

    let m_random = mean(final_accuracy_by_seed(&output.runs, "random").iter().map(|&(_, a)| a));
    let m_uncertainty = mean(
        final_accuracy_by_seed(&output.runs, "uncertainty")
            .iter()
            .map(|&(_, a)| a),
    );
    let m_cluster = mean(
        final_accuracy_by_seed(&output.runs, "cluster:b=10")
            .iter()
            .map(|&(_, a)| a),
    );
    println!(
        "  MNIST means at B=1000: uncertainty {m_uncertainty:.4}, cluster {m_cluster:.4}, random {m_random:.4}"
    );
    assert!(
        m_uncertainty >= m_random + 0.01,
        "uncertainty {m_uncertainty} vs random {m_random}"
    );
    assert!(
        m_cluster >= m_uncertainty - 0.002,
        "cluster {m_cluster} vs uncertainty {m_uncertainty}"
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 3600, "took {elapsed:?}, budget 60 min");
    pass(9, "MNIST desk-scale experiment");
}

/// 10. Scalability: on a 20000-point pool snapshot with beta*k = 1000
///     candidates (k = 100, beta = 10), Cluster(10) selection time is at
///     most one tenth of Submodular(10)'s. Runtime < 10 min.
#[test]
fn criterion_10_selection_time_gap() {
    let started = Instant::now();
    let config = ExperimentConfig {
        dataset: DatasetSpec::Synthetic(SynthConfig {
            num_classes: 10,
            points_per_class: 2858, // ~28580 examples; 0.7 split -> ~20000 train
            duplication_factor: 1,
            cluster_spread: 1.0,
            dim: 32,
            seed: 11,
        }),
        model: ModelSpec {
            epochs: Some(30),
            ..ModelSpec::logreg()
        },
        strategies: vec!["cluster:b=10".into(), "submodular:b=10".into()],
        batch_size: 100,
        budget: 100,
        repetitions: 1,
        base_seed: 7,
        first_batch_mode: FirstBatchMode::Random,
        measure: Measure::Margin,
        score_orientation: ScoreOrientation::OneMinusMargin,
        train_fraction: Some(0.7),
        output_dir: None,
    };
    let rows = bench_selection(&config).unwrap();
    let time_of = |name: &str| -> f64 {
        rows.iter()
            .find(|r| r.strategy == name)
            .unwrap_or_else(|| panic!("{name} missing from bench rows"))
            .selection_seconds
    };
    let cluster = time_of("cluster:b=10");
    let submodular = time_of("submodular:b=10");
    println!(
        "  pool {}, candidates {}: cluster {:.4}s vs submodular {:.4}s ({:.0}x)",
        rows[0].pool_size,
        rows[0].candidates,
        cluster,
        submodular,
        submodular / cluster
    );
    assert!(
        cluster <= submodular / 10.0,
        "cluster {cluster}s not 10x faster than submodular {submodular}s"
    );
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}, budget 10 min");
    pass(10, "selection-time scalability gap");
}

/// 11. Re-running an experiment with the same config and seed produces a
///     byte-identical raw CSV (timing column excluded) for any thread count.
#[test]
fn criterion_11_determinism() {
    let config = ExperimentConfig {
        dataset: DatasetSpec::Synthetic(SynthConfig {
            num_classes: 5,
            points_per_class: 60,
            duplication_factor: 3,
            cluster_spread: 1.2,
            dim: 12,
            seed: 77,
        }),
        model: ModelSpec {
            epochs: Some(20),
            ..ModelSpec::logreg()
        },
        strategies: vec![
            "random".into(),
            "uncertainty".into(),
            "cluster:b=5".into(),
            "wcluster:b=5".into(),
            "submodular:b=5".into(),
            "fass:b=5:nn=20".into(),
        ],
        batch_size: 20,
        budget: 60,
        repetitions: 2,
        base_seed: 321,
        first_batch_mode: FirstBatchMode::Random,
        measure: Measure::Margin,
        score_orientation: ScoreOrientation::OneMinusMargin,
        train_fraction: Some(0.7),
        output_dir: None,
    };

    let strip_timing = |text: &str| -> String {
        text.lines()
            .map(|line| &line[..line.rfind(',').unwrap()])
            .collect::<Vec<_>>()
            .join("\n")
    };
    let run_with_threads = |threads: usize| -> String {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let output = pool.install(|| run_experiment(&config).unwrap());
        strip_timing(&render_raw_csv(&output.runs).unwrap())
    };

    let one = run_with_threads(1);
    let four = run_with_threads(4);
    let rerun = run_with_threads(2);
    assert_eq!(one, four, "results changed with thread count");
    assert_eq!(one, rerun, "results changed across reruns");
    pass(11, "byte-identical determinism across reruns and thread counts");
}

/// 12. Selecting the first batch by clustering beats a random first batch in
///     round-1 mean accuracy on the redundancy fixture (R = 16).
#[test]
fn criterion_12_cluster_first_batch() {
    let round1_mean = |mode: FirstBatchMode| -> f64 {
        let config = redundancy_config(&["random"], 100, mode);
        let output = run_experiment(&config).unwrap();
        mean(output.runs.iter().map(|r| r.curve[0].test_accuracy))
    };
    let random_first = round1_mean(FirstBatchMode::Random);
    let cluster_first = round1_mean(FirstBatchMode::Cluster);
    println!("  round-1 means: cluster-first {cluster_first:.4}, random-first {random_first:.4}");
    assert!(
        cluster_first >= random_first,
        "cluster-first {cluster_first} < random-first {random_first}"
    );
    pass(12, "cluster-selected first batch");
}

/// Smoke coverage for the library surface the acceptance criteria depend on.
#[test]
fn acceptance_support_idx_loader_silently_skips_without_data() {
    // keeps the MNIST path exercised even without the dataset: loading a
    // missing file must produce a clean error, not a panic
    let err = load_idx(
        std::path::Path::new("/nonexistent/images"),
        std::path::Path::new("/nonexistent/labels"),
    );
    assert!(err.is_err());
    let _ = Arc::new(Dataset::from_parts(vec![(FeatureVector::dense(vec![1.0]).unwrap(), 0)], 1).unwrap());
}
