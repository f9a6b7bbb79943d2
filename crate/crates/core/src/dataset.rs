//! Feature tables: the N x d sample matrix with optional class and group
//! labels that every construction in this crate starts from.

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

/// N samples of d-dimensional features with optional per-row class labels
/// and optional group ids.
///
/// Class labels may be present on a subset of rows (the labeled pool of a
/// semi-supervised problem); group ids are all-or-nothing.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    features: Array2<f64>,
    class_labels: Vec<Option<i64>>,
    group_labels: Option<Vec<i64>>,
}

impl FeatureTable {
    pub fn new(
        features: Array2<f64>,
        class_labels: Vec<Option<i64>>,
        group_labels: Option<Vec<i64>>,
    ) -> Result<Self> {
        let n = features.nrows();
        let d = features.ncols();
        if n < 2 {
            return Err(Error::InvalidFeatures(format!(
                "need at least 2 rows, got {n}"
            )));
        }
        if d < 1 {
            return Err(Error::InvalidFeatures("need at least 1 column".into()));
        }
        if let Some(bad) = features.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidFeatures(format!(
                "non-finite feature value {bad}"
            )));
        }
        if class_labels.len() != n {
            return Err(Error::DimensionMismatch {
                what: "class labels",
                expected: n,
                got: class_labels.len(),
            });
        }
        if let Some(groups) = &group_labels {
            if groups.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "group labels",
                    expected: n,
                    got: groups.len(),
                });
            }
        }
        Ok(Self {
            features,
            class_labels,
            group_labels,
        })
    }

    /// Table with features only (no labels of either kind).
    pub fn from_features(features: Array2<f64>) -> Result<Self> {
        let n = features.nrows();
        Self::new(features, vec![None; n], None)
    }

    pub fn len(&self) -> usize {
        self.features.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires N >= 2
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    pub fn class_labels(&self) -> &[Option<i64>] {
        &self.class_labels
    }

    pub fn class_of(&self, i: usize) -> Option<i64> {
        self.class_labels[i]
    }

    pub fn group_labels(&self) -> Option<&[i64]> {
        self.group_labels.as_deref()
    }

    /// Indices of rows that carry a class label, ascending.
    pub fn labeled_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.class_labels[i].is_some())
            .collect()
    }

    /// Distinct class ids among labeled rows, ascending.
    pub fn classes(&self) -> Vec<i64> {
        let mut ids: Vec<i64> = self.class_labels.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Requires a class label on every row; errors otherwise.
    pub fn full_labels(&self) -> Result<Vec<i64>> {
        self.class_labels
            .iter()
            .map(|c| c.ok_or(Error::MissingClassLabels))
            .collect()
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        let a = self.features.row(i);
        let b = self.features.row(j);
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum()
    }

    /// Mean squared pairwise distance over all distinct pairs.
    ///
    /// This is the self-tuning bandwidth used by both the Gaussian edge
    /// weights and the default RBF kernel width.
    pub fn mean_squared_pairwise_distance(&self) -> f64 {
        let n = self.len();
        let mut sum = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                sum += self.squared_distance(i, j);
            }
        }
        sum / (n * (n - 1) / 2) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn rejects_single_row_and_nonfinite() {
        assert!(FeatureTable::from_features(array![[1.0, 2.0]]).is_err());
        assert!(FeatureTable::from_features(array![[1.0], [f64::NAN]]).is_err());
    }

    #[test]
    fn labeled_indices_and_classes() {
        let t = FeatureTable::new(
            array![[0.0], [1.0], [2.0], [3.0]],
            vec![Some(2), None, Some(0), Some(2)],
            None,
        )
        .unwrap();
        assert_eq!(t.labeled_indices(), vec![0, 2, 3]);
        assert_eq!(t.classes(), vec![0, 2]);
        assert!(t.full_labels().is_err());
    }

    #[test]
    fn mean_squared_distance_two_points() {
        let t = FeatureTable::from_features(array![[0.0, 0.0], [3.0, 4.0]]).unwrap();
        assert!((t.mean_squared_pairwise_distance() - 25.0).abs() < 1e-12);
    }

    #[test]
    fn group_label_length_must_match() {
        let r = FeatureTable::new(array![[0.0], [1.0]], vec![None, None], Some(vec![1]));
        assert!(r.is_err());
    }
}
