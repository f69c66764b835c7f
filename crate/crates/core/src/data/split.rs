//! Seeded train/test splitting.

use rand::seq::SliceRandom;

use crate::data::{Dataset, SeededRng};
use crate::error::{Error, Result};

/// Randomly partitions a dataset into train and test sets.
///
/// The train side gets `round(n * train_fraction)` examples. Both sides keep
/// their original ids and ascending id order. The partition depends only on
/// the rng stream, so equal seeds give equal splits.
pub fn train_test_split(
    dataset: &Dataset,
    train_fraction: f64,
    rng: &mut SeededRng,
) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidFraction(train_fraction));
    }
    let n = dataset.len();
    let train_n = ((n as f64) * train_fraction).round() as usize;

    let mut positions: Vec<usize> = (0..n).collect();
    positions.shuffle(rng);
    let mut train_pos: Vec<usize> = positions[..train_n].to_vec();
    let mut test_pos: Vec<usize> = positions[train_n..].to_vec();
    train_pos.sort_unstable();
    test_pos.sort_unstable();

    Ok((
        dataset.subset_by_positions(&train_pos)?,
        dataset.subset_by_positions(&test_pos)?,
    ))
}
