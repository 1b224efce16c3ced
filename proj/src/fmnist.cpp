#include "dlgn/fmnist.hpp"

#include <map>
#include <stdexcept>

#include "dlgn/idx.hpp"
#include "dlgn/kmeans.hpp"

namespace dlgn {

LabeledImageDataset load_idx(const std::string& images_path,
                             const std::string& labels_path) {
  const IdxImages images = read_idx_images(images_path);
  const IdxLabels labels = read_idx_labels(labels_path);
  if (images.count != labels.count)
    throw std::runtime_error("load_idx: image/label count mismatch (" +
                             std::to_string(images.count) + " vs " +
                             std::to_string(labels.count) + ")");

  LabeledImageDataset data;
  data.image_rows = images.rows;
  data.image_cols = images.cols;
  const Index dim = static_cast<Index>(images.rows) * images.cols;
  data.X.resize(dim, images.count);
  data.labels.resize(static_cast<std::size_t>(images.count));
  data.regions.resize(static_cast<std::size_t>(images.count));
  int max_label = 0;
  for (int a = 0; a < images.count; ++a) {
    for (Index p = 0; p < dim; ++p)
      data.X(p, a) =
          static_cast<double>(
              images.pixels[static_cast<std::size_t>(a) * dim + p]) /
          255.0;
    // raw IDX labels are 0-based; the dataset contract is 1-based
    const int label = static_cast<int>(labels.labels[static_cast<std::size_t>(a)]) + 1;
    data.labels[static_cast<std::size_t>(a)] = label;
    max_label = std::max(max_label, label);
    data.regions[static_cast<std::size_t>(a)] =
        label <= 5 ? Region::Simple : Region::Complex;
  }
  data.num_classes = std::max(10, max_label);
  return data;
}

LabeledImageDataset subsample_per_class(const LabeledImageDataset& data,
                                        int per_class) {
  std::vector<Index> keep;
  std::map<int, int> taken;
  for (Index a = 0; a < data.X.cols(); ++a) {
    const int label = data.labels[static_cast<std::size_t>(a)];
    if (taken[label] < per_class) {
      keep.push_back(a);
      ++taken[label];
    }
  }
  LabeledImageDataset out;
  out.num_classes = data.num_classes;
  out.image_rows = data.image_rows;
  out.image_cols = data.image_cols;
  out.X.resize(data.X.rows(), static_cast<Index>(keep.size()));
  out.labels.reserve(keep.size());
  out.regions.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.X.col(static_cast<Index>(i)) = data.X.col(keep[i]);
    out.labels.push_back(data.labels[static_cast<std::size_t>(keep[i])]);
    out.regions.push_back(data.regions[static_cast<std::size_t>(keep[i])]);
  }
  return out;
}

ModifiedFmnist modify_fmnist_labels(const LabeledImageDataset& train,
                                    const LabeledImageDataset& test, Rng& rng) {
  ModifiedFmnist out{train, test};

  // Balanced cluster-to-label table: labels 6..10 each used exactly 5 times
  // across the 25 (class, cluster) cells, shuffled by a derived stream.
  std::vector<int> cluster_labels;
  for (int label = 6; label <= 10; ++label)
    for (int copy = 0; copy < 5; ++copy) cluster_labels.push_back(label);
  Rng assign_rng = rng.split(101);
  assign_rng.shuffle(cluster_labels);

  Rng cluster_rng = rng.split(102);
  for (int original = 6; original <= 10; ++original) {
    std::vector<Index> members;
    for (Index a = 0; a < train.X.cols(); ++a)
      if (train.labels[static_cast<std::size_t>(a)] == original)
        members.push_back(a);
    if (members.empty())
      throw std::invalid_argument("modify_fmnist_labels: class " +
                                  std::to_string(original) +
                                  " missing from the training set");

    Matrix points(train.X.rows(), static_cast<Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i)
      points.col(static_cast<Index>(i)) = train.X.col(members[i]);

    Rng stream = cluster_rng.split(static_cast<std::uint64_t>(original));
    const KMeansResult clusters = kmeans(points, 5, stream, 50);

    const int base = (original - 6) * 5;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const int cluster = clusters.assignment[i];
      out.train.labels[static_cast<std::size_t>(members[i])] =
          cluster_labels[static_cast<std::size_t>(base + cluster)];
    }

    // Test points of this class follow the nearest trained centroid.
    for (Index a = 0; a < test.X.cols(); ++a) {
      if (test.labels[static_cast<std::size_t>(a)] != original) continue;
      const int cluster = nearest_centroid(clusters.centroids, test.X.col(a));
      out.test.labels[static_cast<std::size_t>(a)] =
          cluster_labels[static_cast<std::size_t>(base + cluster)];
    }
  }

  for (std::size_t a = 0; a < out.train.labels.size(); ++a)
    out.train.regions[a] =
        train.labels[a] <= 5 ? Region::Simple : Region::Complex;
  for (std::size_t a = 0; a < out.test.labels.size(); ++a)
    out.test.regions[a] = test.labels[a] <= 5 ? Region::Simple : Region::Complex;
  return out;
}

}  // namespace dlgn
