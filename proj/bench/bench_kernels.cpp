// Serial vs OpenMP timings for the three hot kernels: replicate sampling,
// all-rows distribution stepping, and per-target hitting solves. The parallel
// paths must reproduce the serial results exactly; this harness checks that
// while it measures.

#include <chrono>
#include <cstdio>
#include <vector>

#include "ixt/exact.hpp"
#include "ixt/families.hpp"
#include "ixt/kernels.hpp"
#include "ixt/mc.hpp"
#include "ixt/parallel.hpp"

using namespace ixt;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool matches) {
  std::printf("%-28s serial %8.3f ms   omp(%d) %8.3f ms   speedup %.2fx   %s\n", name,
              serial_s * 1e3, max_threads(), parallel_s * 1e3, serial_s / parallel_s,
              matches ? "outputs match" : "OUTPUT MISMATCH");
}

void bench_tau_batch(const FamilySpec& spec, std::uint64_t samples, std::uint64_t cap) {
  GeneratedChain g = generate(spec);
  ChainSampler sampler(g.chain);
  std::vector<double> ser(samples), par(samples);
  auto t0 = clock_type::now();
  sample_tau_i_batch_serial(g.chain, sampler, StartLaw::pi(), StartLaw::pi(), cap, 1, 0, ser);
  const double ts = seconds_since(t0);
  t0 = clock_type::now();
  sample_tau_i_batch(g.chain, sampler, StartLaw::pi(), StartLaw::pi(), cap, 1, 0, par);
  const double tp = seconds_since(t0);
  report(("tau_i batch " + spec.id()).c_str(), ts, tp, ser == par);
}

void bench_evolve_rows(const FamilySpec& spec, std::uint64_t steps) {
  GeneratedChain g = generate(spec);
  const std::size_t n = g.chain.n();
  std::vector<double> a(n * n, 0.0), b(n * n, 0.0), c(n * n, 0.0), d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = c[i * n + i] = 1.0;
  auto t0 = clock_type::now();
  for (std::uint64_t s = 0; s < steps; ++s) {
    evolve_rows_serial(g.chain, a.data(), b.data(), n);
    a.swap(b);
  }
  const double ts = seconds_since(t0);
  t0 = clock_type::now();
  for (std::uint64_t s = 0; s < steps; ++s) {
    evolve_rows(g.chain, c.data(), d.data(), n);
    c.swap(d);
  }
  const double tp = seconds_since(t0);
  report(("evolve_rows " + spec.id()).c_str(), ts, tp, a == c);
}

void bench_hitting(const FamilySpec& spec) {
  GeneratedChain g = generate(spec);
  auto t0 = clock_type::now();
  HittingTable ser = hitting_times_serial(g.chain);
  const double ts = seconds_since(t0);
  t0 = clock_type::now();
  HittingTable par = hitting_times(g.chain);
  const double tp = seconds_since(t0);
  report(("hitting_times " + spec.id()).c_str(), ts, tp, ser.h == par.h);
}

}  // namespace

int main() {
  std::printf("kernel benchmark, %d hardware threads\n\n", max_threads());
  bench_tau_batch({.family = Family::cycle, .n = 64}, 20000, 100000);
  bench_tau_batch({.family = Family::complete, .n = 256}, 50000, 100000);
  bench_evolve_rows({.family = Family::two_cliques, .small_clique = 8, .big_clique = 64}, 400);
  bench_evolve_rows({.family = Family::torus, .dim = 2, .side = 16}, 400);
  bench_hitting({.family = Family::weighted_tree, .n = 150, .seed = 9});
  bench_hitting({.family = Family::torus, .dim = 2, .side = 12});
  return 0;
}
