#include "dlgn/kmeans.hpp"

#include <limits>
#include <stdexcept>

namespace dlgn {

int nearest_centroid(const Matrix& centroids, const Vector& x) {
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centroids.cols(); ++c) {
    const double dist = (centroids.col(c) - x).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(c);
    }
  }
  return best;
}

KMeansResult kmeans(const Matrix& X, int k, Rng& rng, int max_iters) {
  const Index n = X.cols();
  if (k < 1) throw std::invalid_argument("kmeans: need k >= 1");
  if (static_cast<Index>(k) > n)
    throw std::invalid_argument("kmeans: k exceeds the number of points");

  // k-means++ seeding.
  Matrix centroids(X.rows(), k);
  centroids.col(0) = X.col(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  Vector dist2(n);
  for (Index a = 0; a < n; ++a)
    dist2[a] = (X.col(a) - centroids.col(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      for (Index a = 0; a < n; ++a) {
        cumulative += dist2[a];
        if (cumulative >= target) {
          pick = a;
          break;
        }
        pick = a;
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centroids.col(c) = X.col(pick);
    for (Index a = 0; a < n; ++a)
      dist2[a] = std::min(dist2[a], (X.col(a) - centroids.col(c)).squaredNorm());
  }

  // Lloyd iterations.
  KMeansResult result;
  result.assignment.assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (Index a = 0; a < n; ++a) {
      const int c = nearest_centroid(centroids, X.col(a));
      if (c != result.assignment[static_cast<std::size_t>(a)]) {
        result.assignment[static_cast<std::size_t>(a)] = c;
        changed = true;
      }
    }
    result.iterations = iter + 1;
    if (!changed) break;

    Matrix sums = Matrix::Zero(X.rows(), k);
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index a = 0; a < n; ++a) {
      const int c = result.assignment[static_cast<std::size_t>(a)];
      sums.col(c) += X.col(a);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)
        centroids.col(c) =
            sums.col(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    // empty clusters keep their previous centroid
  }

  result.centroids = std::move(centroids);
  result.inertia = 0.0;
  for (Index a = 0; a < n; ++a)
    result.inertia +=
        (X.col(a) -
         result.centroids.col(result.assignment[static_cast<std::size_t>(a)]))
            .squaredNorm();
  return result;
}

}  // namespace dlgn
