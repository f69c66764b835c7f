//! Experiment configuration: a JSON document mirroring the runner's inputs.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::data::{train_test_split, Dataset, SeededRng};
use crate::error::{Error, Result};
use crate::ingest::{fit_tfidf, generate_synthetic, load_delimited, load_idx, transform_tfidf, SynthConfig, TfidfConfig};
use crate::models::{ModelKind, TrainConfig};
use crate::scoring::{Measure, ScoreOrientation};
use crate::strategies::StrategySpec;

/// Where the data comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    /// Gaussian blobs with duplication; split per repetition.
    Synthetic(SynthConfig),
    /// IDX image/label file pairs with a fixed test set. `train_subset`
    /// samples that many training examples per repetition.
    Idx {
        train_images: PathBuf,
        train_labels: PathBuf,
        test_images: PathBuf,
        test_labels: PathBuf,
        #[serde(default)]
        train_subset: Option<usize>,
    },
    /// Delimited text with TF-IDF featurization; split per repetition.
    Delimited {
        path: PathBuf,
        text_column: String,
        label_column: String,
        #[serde(default = "default_delimiter")]
        delimiter: char,
        #[serde(default)]
        tfidf: TfidfConfig,
    },
}

fn default_delimiter() -> char {
    ','
}

/// Model family plus optional hyperparameter overrides; anything left unset
/// takes the per-family default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(default)]
    pub learning_rate: Option<f64>,
    #[serde(default)]
    pub epochs: Option<usize>,
    #[serde(default)]
    pub l2_penalty: Option<f64>,
    #[serde(default)]
    pub minibatch_size: Option<usize>,
    #[serde(default)]
    pub hidden_sizes: Option<Vec<usize>>,
}

impl ModelSpec {
    pub fn logreg() -> ModelSpec {
        ModelSpec {
            kind: ModelKind::Logreg,
            learning_rate: None,
            epochs: None,
            l2_penalty: None,
            minibatch_size: None,
            hidden_sizes: None,
        }
    }

    pub fn mlp() -> ModelSpec {
        ModelSpec {
            kind: ModelKind::Mlp,
            ..ModelSpec::logreg()
        }
    }

    /// Materializes a [`TrainConfig`] with the given init seed.
    pub fn train_config(&self, init_seed: u64) -> TrainConfig {
        let mut cfg = match self.kind {
            ModelKind::Logreg => TrainConfig::logreg(),
            ModelKind::Mlp => TrainConfig::mlp(),
        };
        if let Some(lr) = self.learning_rate {
            cfg.learning_rate = lr;
        }
        if let Some(e) = self.epochs {
            cfg.epochs = e;
        }
        if let Some(l2) = self.l2_penalty {
            cfg.l2_penalty = l2;
        }
        if let Some(mb) = self.minibatch_size {
            cfg.minibatch_size = mb;
        }
        if let Some(h) = &self.hidden_sizes {
            cfg.hidden_sizes = h.clone();
        }
        cfg.init_seed = init_seed;
        cfg
    }
}

/// When labels exist for none of the pool yet, how the first batch is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FirstBatchMode {
    #[default]
    Random,
    /// Uniform-weight k-means over the whole unlabeled pool, representatives
    /// closest to the centers.
    Cluster,
}

/// The full experiment description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub model: ModelSpec,
    /// Strategy spec strings, e.g. `["random", "cluster:b=10"]`.
    pub strategies: Vec<String>,
    /// Batch size k.
    pub batch_size: usize,
    /// Label budget B; a positive multiple of k.
    pub budget: usize,
    /// Number of repetitions R; repetition r runs with seed base_seed + r
    /// shared across strategies.
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub first_batch_mode: FirstBatchMode,
    #[serde(default)]
    pub measure: Measure,
    #[serde(default)]
    pub score_orientation: ScoreOrientation,
    /// Train fraction for sources that split; defaults to 0.7.
    #[serde(default)]
    pub train_fraction: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        let config: ExperimentConfig = serde_json::from_str(&text)?;
        Ok(config)
    }

    /// Parses the strategy specs and checks the numeric invariants.
    pub fn validate(&self) -> Result<Vec<StrategySpec>> {
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be positive".into()));
        }
        if self.budget == 0 || self.budget % self.batch_size != 0 {
            return Err(Error::InvalidConfig(format!(
                "budget must be a positive multiple of batch_size, got {} and {}",
                self.budget, self.batch_size
            )));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig("repetitions must be >= 1".into()));
        }
        if let Some(f) = self.train_fraction {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidFraction(f));
            }
        }
        if self.strategies.is_empty() {
            return Err(Error::InvalidConfig("strategies must be non-empty".into()));
        }
        let specs = self
            .strategies
            .iter()
            .map(|s| StrategySpec::parse(s))
            .collect::<Result<Vec<_>>>()?;
        let mut names: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != specs.len() {
            return Err(Error::InvalidConfig(
                "strategies must be distinct after normalization".into(),
            ));
        }
        Ok(specs)
    }

    pub fn train_fraction_or_default(&self) -> f64 {
        self.train_fraction.unwrap_or(0.7)
    }
}

/// Loaded-but-not-yet-split data, shared across repetitions.
pub enum BaseData {
    /// One dataset, split per repetition.
    Whole(Arc<Dataset>),
    /// A fixed train/test pair; the train side may be subsampled per
    /// repetition.
    Pair {
        train: Arc<Dataset>,
        test: Arc<Dataset>,
        train_subset: Option<usize>,
    },
}

impl DatasetSpec {
    /// Loads (or generates) the base data. Called once per experiment.
    pub fn load(&self) -> Result<BaseData> {
        match self {
            DatasetSpec::Synthetic(cfg) => Ok(BaseData::Whole(Arc::new(generate_synthetic(cfg)?))),
            DatasetSpec::Idx {
                train_images,
                train_labels,
                test_images,
                test_labels,
                train_subset,
            } => {
                let train = load_idx(train_images, train_labels)?;
                let test = load_idx(test_images, test_labels)?;
                if train.num_classes() != test.num_classes() {
                    return Err(Error::InvalidDataset(format!(
                        "train has {} classes, test has {}",
                        train.num_classes(),
                        test.num_classes()
                    )));
                }
                Ok(BaseData::Pair {
                    train: Arc::new(train),
                    test: Arc::new(test),
                    train_subset: *train_subset,
                })
            }
            DatasetSpec::Delimited {
                path,
                text_column,
                label_column,
                delimiter,
                tfidf,
            } => {
                let data = load_delimited(path, text_column, label_column, *delimiter as u8)?;
                if data.corpus.is_empty() {
                    return Err(Error::EmptyCorpus);
                }
                let model = fit_tfidf(&data.corpus, tfidf)?;
                let rows = data
                    .corpus
                    .iter()
                    .zip(&data.labels)
                    .map(|(text, &label)| (transform_tfidf(&model, text), label))
                    .collect();
                Ok(BaseData::Whole(Arc::new(Dataset::from_parts(
                    rows,
                    data.label_names.len(),
                )?)))
            }
        }
    }
}

impl BaseData {
    /// The per-repetition train/test realization, driven by the repetition's
    /// split stream.
    pub fn realize(
        &self,
        train_fraction: f64,
        rng: &mut SeededRng,
    ) -> Result<(Arc<Dataset>, Arc<Dataset>)> {
        match self {
            BaseData::Whole(dataset) => {
                let (train, test) = train_test_split(dataset, train_fraction, rng)?;
                Ok((Arc::new(train), Arc::new(test)))
            }
            BaseData::Pair {
                train,
                test,
                train_subset,
            } => match train_subset {
                None => Ok((train.clone(), test.clone())),
                Some(n) => {
                    let n = (*n).min(train.len());
                    let mut positions = index::sample(rng, train.len(), n).into_vec();
                    positions.sort_unstable();
                    Ok((Arc::new(train.subset_by_positions(&positions)?), test.clone()))
                }
            },
        }
    }
}
