#pragma once

#include <string>
#include <vector>

#include "dlgn/kernels.hpp"
#include "dlgn/rng.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

/// Flattened image classification set. Labels are 1-based (raw IDX byte + 1,
/// so FMNIST classes map to 1..10). Region Simple covers classes 1..5,
/// Complex the cluster-relabeled classes 6..10.
struct LabeledImageDataset {
  Matrix X;                    // dim x n, pixels scaled to [0,1]
  std::vector<int> labels;     // in 1..num_classes
  std::vector<Region> regions;
  int num_classes = 10;
  int image_rows = 0;
  int image_cols = 0;
};

/// Parses an IDX image/label pair into a dataset; counts must agree.
LabeledImageDataset load_idx(const std::string& images_path,
                             const std::string& labels_path);

/// Keeps the first `per_class` points of every class (ordered as stored).
LabeledImageDataset subsample_per_class(const LabeledImageDataset& data,
                                        int per_class);

/// Label modification of the resource-allocation task: classes 1..5 keep
/// their labels; each class 6..10 is split into 5 k-means clusters and the
/// 25 clusters get labels 6..10, each label used exactly 5 times, by a
/// seeded shuffle. Test points of classes 6..10 take the label of the
/// nearest trained centroid within their original class. Region tags become
/// Simple for 1..5 and Complex for 6..10.
struct ModifiedFmnist {
  LabeledImageDataset train;
  LabeledImageDataset test;
};

ModifiedFmnist modify_fmnist_labels(const LabeledImageDataset& train,
                                    const LabeledImageDataset& test, Rng& rng);

}  // namespace dlgn
