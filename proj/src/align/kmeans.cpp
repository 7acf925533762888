#include "geohalu/align/kmeans.hpp"

#include <limits>

#include "geohalu/error.hpp"
#include "geohalu/random.hpp"

namespace geohalu::align {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

std::size_t nearest(const std::vector<double>& p, const std::vector<std::vector<double>>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

KMeansResult kmeans_pp(const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed,
                       std::size_t max_iter) {
  if (k == 0) throw ValidationError("k-means needs k >= 1");
  if (k > points.size())
    throw ValidationError("k-means with k = " + std::to_string(k) + " over " + std::to_string(points.size()) +
                          " points");
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw ValidationError("k-means points have unequal dimension");

  Rng rng(seed);
  KMeansResult res;
  res.centroids.push_back(points[rng.index(points.size())]);
  std::vector<double> d2(points.size());
  while (res.centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = squared_distance(points[i], res.centroids[nearest(points[i], res.centroids)]);
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      // D^2 weighting.
      double u = rng.uniform01() * total;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (u < d2[i]) {
          pick = i;
          break;
        }
        u -= d2[i];
      }
    } else {
      pick = rng.index(points.size());
    }
    res.centroids.push_back(points[pick]);
  }

  res.assignment.assign(points.size(), k);
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = nearest(points[i], res.centroids);
      if (c != res.assignment[i]) {
        res.assignment[i] = c;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<std::vector<double>> sum(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      ++count[res.assignment[i]];
      for (std::size_t d = 0; d < dim; ++d) sum[res.assignment[i]][d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t d = 0; d < dim; ++d) res.centroids[c][d] = sum[c][d] / static_cast<double>(count[c]);
    }
  }
  // Make the returned labels consistent with the returned centroids even
  // when max_iter stopped the loop early.
  for (std::size_t i = 0; i < points.size(); ++i) res.assignment[i] = nearest(points[i], res.centroids);
  return res;
}

}  // namespace geohalu::align
