#pragma once

#include <cstdint>
#include <vector>

namespace geohalu::align {

struct KMeansResult {
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> assignment;  // nearest centroid per point, ties to the lower index
  std::size_t iterations = 0;
};

// k-means++ seeding followed by Lloyd iterations until the assignment is
// stable (or max_iter). Deterministic in seed. Throws ValidationError for
// k == 0, k > points, or points of unequal dimension.
KMeansResult kmeans_pp(const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed,
                       std::size_t max_iter = 100);

double squared_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace geohalu::align
