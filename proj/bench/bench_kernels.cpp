// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "geohalu/align/policy.hpp"
#include "geohalu/align/random_problems.hpp"
#include "geohalu/geokg/geometry.hpp"
#include "geohalu/geokg/relations.hpp"
#include "geohalu/random.hpp"

using namespace geohalu;

namespace {

// n POIs, n/2 AOIs and n/4 roads scattered over a ~2 km square.
geokg::EntitySet scattered_city(std::size_t n) {
  Rng rng(n);
  geokg::EntitySet s;
  auto pt = [&] { return geokg::GeoPoint{30 + rng.uniform(0, 0.02), 120 + rng.uniform(0, 0.02)}; };
  for (std::size_t i = 0; i < n; ++i) s.pois.push_back({"p" + std::to_string(i), "P" + std::to_string(i), pt(), "", "Food"});
  for (std::size_t i = 0; i < n / 2; ++i) {
    const auto c = pt();
    const double w = rng.uniform(0.0005, 0.003), h = rng.uniform(0.0005, 0.003);
    geokg::AoiEntity a{"a" + std::to_string(i), "A" + std::to_string(i),
                       {{c.lat, c.lon}, {c.lat, c.lon + w}, {c.lat + h, c.lon + w}, {c.lat + h, c.lon}},
                       geokg::LandUse::Other, 0};
    a.area_m2 = geokg::polygon_area(a.boundary);
    s.aois.push_back(a);
  }
  for (std::size_t i = 0; i < n / 4; ++i) {
    geokg::RoadEntity r{"r" + std::to_string(i), "R" + std::to_string(i), {pt(), pt(), pt(), pt()}, 0};
    r.length_m = geokg::polyline_length(r.path);
    s.roads.push_back(r);
  }
  return s;
}

template <bool Parallel>
void BM_DeriveRelations(benchmark::State& state) {
  const auto s = scattered_city(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto e = Parallel ? geokg::derive_relations(s, {}) : geokg::derive_relations_serial(s, {});
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}

struct LogprobFixture {
  align::ToyPolicy policy;
  std::vector<align::Sequence> seqs;
  std::vector<double> weights;
};

LogprobFixture logprob_fixture(std::size_t n) {
  Rng rng(7);
  align::RandomProblemConfig c;
  c.vocab = 64;
  c.order = 2;
  c.max_prompt = 16;
  c.max_completion = 8;
  LogprobFixture f{align::random_policy(c, rng), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    f.seqs.push_back({align::random_tokens(c, rng, 4, c.max_prompt), align::random_tokens(c, rng, 1, c.max_completion)});
    f.weights.push_back(rng.uniform(-1, 1));
  }
  return f;
}

template <bool Parallel>
void BM_BatchLogprob(benchmark::State& state) {
  const auto f = logprob_fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto v = Parallel ? align::batch_logprob(f.policy.theta_table(), f.seqs, align::LogProbMode::SumTokens)
                      : align::batch_logprob_serial(f.policy.theta_table(), f.seqs, align::LogProbMode::SumTokens);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_LogprobGrad(benchmark::State& state) {
  const auto f = logprob_fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<double> grad(f.policy.n_params());
  for (auto _ : state) {
    std::fill(grad.begin(), grad.end(), 0.0);
    if (Parallel)
      align::accumulate_logprob_grad(f.policy.theta_table(), f.seqs, align::LogProbMode::SumTokens, f.weights, grad);
    else
      align::accumulate_logprob_grad_serial(f.policy.theta_table(), f.seqs, align::LogProbMode::SumTokens, f.weights,
                                            grad);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_DeriveRelations<false>)->Name("derive_relations/serial")->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeriveRelations<true>)->Name("derive_relations/openmp")->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchLogprob<false>)->Name("batch_logprob/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_BatchLogprob<true>)->Name("batch_logprob/openmp")->Arg(1000)->Arg(10000);
BENCHMARK(BM_LogprobGrad<false>)->Name("logprob_grad/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_LogprobGrad<true>)->Name("logprob_grad/openmp")->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
