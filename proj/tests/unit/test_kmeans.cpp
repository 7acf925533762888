#include <doctest.h>

#include <limits>

#include "geohalu/align/kmeans.hpp"
#include "geohalu/error.hpp"
#include "geohalu/random.hpp"

using namespace geohalu;
using namespace geohalu::align;

namespace {

using Points = std::vector<std::vector<double>>;

double sse(const Points& pts, const std::vector<std::size_t>& assign, std::size_t k) {
  Points c(k, std::vector<double>(pts[0].size(), 0.0));
  std::vector<double> n(k, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t d = 0; d < pts[i].size(); ++d) c[assign[i]][d] += pts[i][d];
    n[assign[i]] += 1;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t d = 0; d < pts[i].size(); ++d) {
      const double m = c[assign[i]][d] / n[assign[i]];
      s += (pts[i][d] - m) * (pts[i][d] - m);
    }
  return s;
}

// Exhaustive minimum within-cluster sum of squares over all partitions
// into exactly k non-empty clusters.
double optimal_sse(const Points& pts, std::size_t k) {
  std::vector<std::size_t> a(pts.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<bool> used(k, false);
    for (auto x : a) used[x] = true;
    if (std::find(used.begin(), used.end(), false) == used.end()) best = std::min(best, sse(pts, a, k));
    std::size_t i = 0;
    while (i < a.size() && ++a[i] == k) a[i++] = 0;
    if (i == a.size()) break;
  }
  return best;
}

}  // namespace

TEST_CASE("well separated clusters are recovered exactly") {
  Rng rng(1);
  Points pts;
  const double centers[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 6; ++i) pts.push_back({centers[c][0] + rng.uniform(-1, 1), centers[c][1] + rng.uniform(-1, 1)});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = kmeans_pp(pts, 3, seed);
    for (int c = 0; c < 3; ++c)
      for (int i = 1; i < 6; ++i) CHECK(r.assignment[c * 6 + i] == r.assignment[c * 6]);
    CHECK(r.assignment[0] != r.assignment[6]);
    CHECK(r.assignment[6] != r.assignment[12]);
    CHECK(r.assignment[0] != r.assignment[12]);
  }
}

TEST_CASE("result is a Lloyd fixed point and matches the exhaustive optimum on small sets") {
  Rng rng(2);
  for (int trial = 0; trial < 15; ++trial) {
    Points pts;
    for (int i = 0; i < 8; ++i) pts.push_back({rng.uniform(0, 1) + (i % 2) * 3.0});
    const std::size_t k = 2 + trial % 2;
    const auto r = kmeans_pp(pts, k, trial);
    REQUIRE(r.centroids.size() == k);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double own = squared_distance(pts[i], r.centroids[r.assignment[i]]);
      for (std::size_t c = 0; c < k; ++c) CHECK(own <= squared_distance(pts[i], r.centroids[c]));
    }
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0, n = 0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (r.assignment[i] == c) s += pts[i][0], n += 1;
      if (n > 0) CHECK(r.centroids[c][0] == doctest::Approx(s / n));
    }
    if (k == 2) CHECK(sse(pts, r.assignment, k) == doctest::Approx(optimal_sse(pts, k)));
    else CHECK(sse(pts, r.assignment, k) <= optimal_sse(pts, 2) + 1e-12);
  }
}

TEST_CASE("determinism and validation") {
  Rng rng(3);
  Points pts;
  for (int i = 0; i < 30; ++i) pts.push_back({rng.uniform(0, 1), rng.uniform(0, 1)});
  const auto a = kmeans_pp(pts, 4, 9);
  const auto b = kmeans_pp(pts, 4, 9);
  CHECK(a.assignment == b.assignment);
  CHECK(a.centroids == b.centroids);
  CHECK(kmeans_pp(pts, 30, 1).iterations >= 1);
  const auto one = kmeans_pp(pts, 1, 0);
  for (auto x : one.assignment) CHECK(x == 0);
  CHECK_THROWS_AS(kmeans_pp(pts, 0, 0), ValidationError);
  CHECK_THROWS_AS(kmeans_pp(pts, 31, 0), ValidationError);
  CHECK_THROWS_AS(kmeans_pp({{1.0}, {1.0, 2.0}}, 1, 0), ValidationError);
  // Duplicate points: k distinct seeds may not exist, but the call succeeds.
  const auto dup = kmeans_pp({{1.0}, {1.0}, {1.0}, {2.0}}, 3, 0);
  CHECK(dup.assignment.size() == 4);
  CHECK(squared_distance({0, 0}, {3, 4}) == 25.0);
}
