// Microbenchmarks: the Howell-form workhorse, phase-matrix classification,
// end-to-end decomposition (symbolic and replay-verified), and the dense
// oracle state builder.  All inputs are seeded and built outside the timed
// loops.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "stabdec/decompose.hpp"
#include "stabdec/linalg.hpp"
#include "stabdec/oracle.hpp"
#include "stabdec/phase_matrix.hpp"

using namespace stabdec;

namespace {

ModMatrix random_matrix(i64 rows, i64 cols, i64 d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ModMatrix m(rows, cols);
  for (i64 r = 0; r < rows; ++r)
    for (i64 c = 0; c < cols; ++c)
      m.at(r, c) = static_cast<i64>(rng() % static_cast<std::uint64_t>(d));
  return m;
}

StabilizerGroup seeded_group(i64 d, i64 n_sites, std::uint64_t seed) {
  RandomGroupParams params;
  params.d = d;
  params.n_sites = n_sites;
  return random_stabilizer_group(params, seed);
}

StabilizerGroup ghz9() {
  StabilizerGroup s;
  s.d = 9;
  s.n_sites = 3;
  std::vector<i64> zero(3, 0);
  s.gens = {make_pauli(9, {1, 1, 1}, zero, 0),
            make_pauli(9, zero, {1, 8, 0}, 0),
            make_pauli(9, zero, {1, 0, 8}, 0)};
  s.partition.labels = {"a", "b", "c"};
  s.partition.blocks = {{0}, {1}, {2}};
  return s;
}

void bm_howell_form(benchmark::State& state) {
  const i64 d = state.range(0);
  const i64 size = state.range(1);
  const Ring R(d);
  const ModMatrix m = random_matrix(size, size, d, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(howell_form(R, m));
  }
}
BENCHMARK(bm_howell_form)->Args({8, 8})->Args({9, 8})->Args({12, 16});

void bm_phase_classify(benchmark::State& state) {
  const StabilizerGroup s = seeded_group(state.range(0), 3, 23);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(phase_matrices(s)));
  }
}
BENCHMARK(bm_phase_classify)->Arg(4)->Arg(9);

void bm_decompose_ghz9(benchmark::State& state) {
  const StabilizerGroup s = ghz9();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(s, {}));
  }
}
BENCHMARK(bm_decompose_ghz9);

void bm_decompose_random(benchmark::State& state) {
  const StabilizerGroup s = seeded_group(state.range(0), 3, 31);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(s, {}));
  }
}
BENCHMARK(bm_decompose_random)->Arg(4)->Arg(8)->Arg(9);

void bm_decompose_verified(benchmark::State& state) {
  const StabilizerGroup s = seeded_group(9, 3, 37);
  EngineConfig cfg;
  cfg.verify = true;
  cfg.amp_cap = i64{1} << 20;
  cfg.seed = 37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(s, cfg));
  }
}
BENCHMARK(bm_decompose_verified);

void bm_state_from_group(benchmark::State& state) {
  const StabilizerGroup s = seeded_group(state.range(0), 3, 41);
  for (auto _ : state) {
    benchmark::DoNotOptimize(state_from_group(s, 41, i64{1} << 20));
  }
}
BENCHMARK(bm_state_from_group)->Arg(4)->Arg(9);

}  // namespace

BENCHMARK_MAIN();
