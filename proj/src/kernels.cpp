#include "ixt/kernels.hpp"

#include <cstring>

#include "ixt/parallel.hpp"

namespace ixt {

namespace {

inline void evolve_one_row(const ChainMatrix& p, const double* in, double* out) {
  const state_t n = p.n();
  std::memset(out, 0, sizeof(double) * n);
  for (state_t z = 0; z < n; ++z) {
    const double m = in[z];
    if (m == 0.0) continue;
    for (const Entry& e : p.row(z)) out[e.to] += m * e.p;
  }
}

}  // namespace

void evolve_rows(const ChainMatrix& p, const double* in, double* out, std::size_t nrows) {
  const std::size_t n = p.n();
  parallel_for_index(nrows, [&](std::uint64_t r, int) {
    evolve_one_row(p, in + r * n, out + r * n);
  });
}

void evolve_rows_serial(const ChainMatrix& p, const double* in, double* out, std::size_t nrows) {
  const std::size_t n = p.n();
  for (std::size_t r = 0; r < nrows; ++r) evolve_one_row(p, in + r * n, out + r * n);
}

}  // namespace ixt
