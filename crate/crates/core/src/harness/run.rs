//! The active-learning loop and the multi-seed experiment runner.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::index;
use rand::RngCore;
use rayon::prelude::*;

use crate::data::{derive_seed, Dataset, ExampleId, Pool, SeededRng};
use crate::error::{Error, Result};
use crate::harness::config::{BaseData, ExperimentConfig, FirstBatchMode, ModelSpec};
use crate::kmeans::{kmeans, representatives_closest, KmeansConfig};
use crate::models::{accuracy, train, TrainedModel};
use crate::scoring::{score_pool, Measure, ScoreOrientation};
use crate::strategies::{select, SelectionRequest, StrategySpec};

/// One point of an accuracy curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub labeled_count: usize,
    pub test_accuracy: f64,
}

/// The curve of one `(strategy, seed)` run plus per-round selection timing.
///
/// `selection_seconds[i]` is the wall time spent scoring the pool and picking
/// the *next* batch during round `i`; the final round selects nothing and
/// records 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub strategy: String,
    pub seed: u64,
    pub curve: Vec<CurvePoint>,
    pub selection_seconds: Vec<f64>,
}

/// Mean and empirical 90% band of one strategy across repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatePoint {
    pub labeled_count: usize,
    pub mean_accuracy: f64,
    pub p5: f64,
    pub p95: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub strategy: String,
    pub points: Vec<AggregatePoint>,
}

/// Everything run_experiment produces.
pub struct ExperimentOutput {
    pub runs: Vec<RunResult>,
    pub aggregates: Vec<AggregateCurve>,
}

/// Runs one active-learning loop: label a first batch, then repeatedly train
/// from scratch, evaluate, score, select, and label until the budget is
/// exhausted. Accuracy is evaluated after training and before selection, so
/// the curve has one point per k labels up to the full budget.
#[allow(clippy::too_many_arguments)]
pub fn run_al_loop(
    train_set: &Arc<Dataset>,
    test_set: &Dataset,
    model: &ModelSpec,
    strategy: &StrategySpec,
    measure: Measure,
    orientation: ScoreOrientation,
    batch_size: usize,
    budget: usize,
    run_seed: u64,
    first_batch_mode: FirstBatchMode,
) -> Result<RunResult> {
    if budget > train_set.len() {
        return Err(Error::InvalidConfig(format!(
            "budget {} exceeds train set size {}",
            budget,
            train_set.len()
        )));
    }
    if batch_size == 0 || budget % batch_size != 0 {
        return Err(Error::InvalidConfig(
            "budget must be a positive multiple of batch_size".into(),
        ));
    }

    let root = SeededRng::new(run_seed);
    let mut pool = Pool::new(train_set.clone());

    // First batch: shared across strategies because it only consumes the
    // run-seed's first_batch stream.
    let mut first_rng = root.substream("first_batch");
    let first: Vec<ExampleId> = match first_batch_mode {
        FirstBatchMode::Random => {
            let ids: Vec<ExampleId> = pool.unlabeled_ids().collect();
            let mut picked: Vec<ExampleId> = index::sample(&mut first_rng, ids.len(), batch_size)
                .into_iter()
                .map(|i| ids[i])
                .collect();
            picked.sort_unstable();
            picked
        }
        FirstBatchMode::Cluster => {
            let ids: Vec<ExampleId> = pool.unlabeled_ids().collect();
            let points = ids
                .iter()
                .map(|&id| pool.features(id))
                .collect::<Result<Vec<_>>>()?;
            let config = KmeansConfig::new(batch_size, first_rng.next_u64());
            let model = kmeans(&points, &config)?;
            let mut picked = representatives_closest(&model, &points, &ids);
            picked.sort_unstable();
            picked
        }
    };
    pool = pool.label_batch(first)?;

    let mut strategy_rng = root.substream("strategy");
    let init_seed = derive_seed(run_seed, "model");
    let train_config = model.train_config(init_seed);

    let mut curve = Vec::new();
    let mut selection_seconds = Vec::new();
    loop {
        let labeled: Vec<_> = pool
            .labeled_examples()
            .map(|(_, features, label)| (features, label))
            .collect();
        let trained: TrainedModel = train(&labeled, train_set.num_classes(), &train_config)?;
        curve.push(CurvePoint {
            labeled_count: pool.num_labeled(),
            test_accuracy: accuracy(&trained, test_set)?,
        });

        if pool.num_labeled() >= budget {
            selection_seconds.push(0.0);
            break;
        }

        let started = Instant::now();
        let scores = score_pool(&trained, &pool, measure, orientation)?;
        let request = SelectionRequest {
            pool: &pool,
            scores: &scores,
            features: &pool,
            batch_size,
        };
        let batch = select(&request, strategy, &mut strategy_rng)?;
        selection_seconds.push(started.elapsed().as_secs_f64());
        pool = pool.label_batch(batch)?;
    }

    Ok(RunResult {
        strategy: strategy.to_string(),
        seed: run_seed,
        curve,
        selection_seconds,
    })
}

/// Runs every `(strategy, repetition)` pair and aggregates the curves.
///
/// Repetition `r` uses seed `base_seed + r` for its split, first batch, model
/// init, and strategy stream; strategies share those seeds so their first
/// batches (and round-1 accuracies) coincide. Jobs run as independent
/// parallel tasks; results are identical for any worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let specs = config.validate()?;
    let base = config.dataset.load()?;
    let fraction = config.train_fraction_or_default();

    let jobs: Vec<(usize, u64)> = (0..specs.len())
        .flat_map(|s| (0..config.repetitions).map(move |r| (s, config.base_seed.wrapping_add(r as u64))))
        .collect();

    let runs: Result<Vec<RunResult>> = jobs
        .par_iter()
        .map(|&(strategy_idx, run_seed)| run_one(config, &base, &specs[strategy_idx], fraction, run_seed))
        .collect();
    let runs = runs?;

    let aggregates = aggregate_runs(&runs);
    Ok(ExperimentOutput { runs, aggregates })
}

fn run_one(
    config: &ExperimentConfig,
    base: &BaseData,
    spec: &StrategySpec,
    fraction: f64,
    run_seed: u64,
) -> Result<RunResult> {
    let mut split_rng = SeededRng::new(run_seed).substream("split");
    let (train_set, test_set) = base.realize(fraction, &mut split_rng)?;
    run_al_loop(
        &train_set,
        &test_set,
        &config.model,
        spec,
        config.measure,
        config.score_orientation,
        config.batch_size,
        config.budget,
        run_seed,
        config.first_batch_mode,
    )
}

/// Groups runs by strategy and reduces each labeled count to mean and
/// empirical 5th/95th percentiles across seeds.
pub fn aggregate_runs(runs: &[RunResult]) -> Vec<AggregateCurve> {
    use std::collections::BTreeMap;

    let mut by_strategy: BTreeMap<&str, Vec<&RunResult>> = BTreeMap::new();
    for run in runs {
        by_strategy.entry(&run.strategy).or_default().push(run);
    }

    let mut out = Vec::new();
    for (strategy, group) in by_strategy {
        let mut by_count: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for run in group {
            for point in &run.curve {
                by_count
                    .entry(point.labeled_count)
                    .or_default()
                    .push(point.test_accuracy);
            }
        }
        let points = by_count
            .into_iter()
            .map(|(labeled_count, mut values)| {
                values.sort_by(f64::total_cmp);
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                AggregatePoint {
                    labeled_count,
                    mean_accuracy: mean,
                    p5: percentile_inclusive(&values, 5.0),
                    p95: percentile_inclusive(&values, 95.0),
                }
            })
            .collect();
        out.push(AggregateCurve {
            strategy: strategy.to_string(),
            points,
        });
    }
    out
}

/// Inclusive linear-interpolation percentile of ascending `sorted` values.
pub fn percentile_inclusive(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let rank = (n - 1) as f64 * p / 100.0;
    let lo = rank.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (rank - lo as f64) * (sorted[hi] - sorted[lo])
}

/// One strategy's timing on a frozen pool snapshot.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub strategy: String,
    /// Unlabeled pool size at selection time.
    pub pool_size: usize,
    /// Candidate count the strategy actually diversified over.
    pub candidates: usize,
    pub selection_seconds: f64,
}

/// Selection-time comparison: builds one pool snapshot (first batch labeled,
/// model trained, pool scored) and times each strategy's `select` call on the
/// identical snapshot. Scoring time is excluded so the numbers isolate the
/// diversification step.
pub fn bench_selection(config: &ExperimentConfig) -> Result<Vec<BenchRow>> {
    let specs = config.validate()?;
    let base = config.dataset.load()?;
    let run_seed = config.base_seed;
    let root = SeededRng::new(run_seed);

    let mut split_rng = root.substream("split");
    let (train_set, test_set) = base.realize(config.train_fraction_or_default(), &mut split_rng)?;
    let _ = &test_set;

    let pool = Pool::new(train_set.clone());
    let ids: Vec<ExampleId> = pool.unlabeled_ids().collect();
    let mut first_rng = root.substream("first_batch");
    let first: Vec<ExampleId> = index::sample(&mut first_rng, ids.len(), config.batch_size.min(ids.len()))
        .into_iter()
        .map(|i| ids[i])
        .collect();
    let pool = pool.label_batch(first)?;

    let labeled: Vec<_> = pool
        .labeled_examples()
        .map(|(_, features, label)| (features, label))
        .collect();
    let train_config = config.model.train_config(derive_seed(run_seed, "model"));
    let model = train(&labeled, train_set.num_classes(), &train_config)?;
    let scores = score_pool(&model, &pool, config.measure, config.score_orientation)?;

    let mut rows = Vec::with_capacity(specs.len());
    for spec in &specs {
        let mut rng = root.substream(&format!("bench-{spec}"));
        let request = SelectionRequest {
            pool: &pool,
            scores: &scores,
            features: &pool,
            batch_size: config.batch_size,
        };
        let started = Instant::now();
        let batch = select(&request, spec, &mut rng)?;
        let seconds = started.elapsed().as_secs_f64();
        debug_assert_eq!(batch.len(), config.batch_size.min(pool.num_unlabeled()));
        let candidates = match spec.kind {
            crate::strategies::StrategyKind::Random | crate::strategies::StrategyKind::Uncertainty => {
                pool.num_unlabeled()
            }
            _ => ((spec.beta * config.batch_size as f64).floor() as usize)
                .max(config.batch_size)
                .min(pool.num_unlabeled()),
        };
        rows.push(BenchRow {
            strategy: spec.to_string(),
            pool_size: pool.num_unlabeled(),
            candidates,
            selection_seconds: seconds,
        });
    }
    rows.sort_by(|a, b| a.strategy.cmp(&b.strategy));
    Ok(rows)
}
