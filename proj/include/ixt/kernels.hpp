#pragma once

#include <cstddef>

#include "ixt/chain.hpp"

namespace ixt {

// Advances a row-major stack of distributions by one step: out = in * P.
// in/out are nrows x n buffers and must not alias. The parallel version
// splits over rows; per-row arithmetic is identical to the serial reference,
// so the two produce bitwise-equal output.
void evolve_rows(const ChainMatrix& p, const double* in, double* out, std::size_t nrows);
void evolve_rows_serial(const ChainMatrix& p, const double* in, double* out, std::size_t nrows);

}  // namespace ixt
