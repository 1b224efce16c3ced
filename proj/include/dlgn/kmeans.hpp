#pragma once

#include <vector>

#include "dlgn/rng.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

struct KMeansResult {
  std::vector<int> assignment;  // cluster index per point
  Matrix centroids;             // dim x k
  double inertia = 0.0;         // sum of squared distances to centroids
  int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding; deterministic given the rng
/// stream. Points are columns of X. Throws when k exceeds the point count.
KMeansResult kmeans(const Matrix& X, int k, Rng& rng, int max_iters = 50);

/// Index of the centroid closest to x.
int nearest_centroid(const Matrix& centroids, const Vector& x);

}  // namespace dlgn
