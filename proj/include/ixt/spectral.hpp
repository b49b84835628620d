#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ixt/chain.hpp"
#include "ixt/families.hpp"

namespace ixt {

enum class SpectrumSource {
  dense_eigensolve,
  closed_form_circulant,  // cycle, complete
  closed_form_product,    // torus, hypercube
};

// Real eigenvalues of a reversible chain, sorted descending (lambda_1 = 1).
struct Spectrum {
  std::vector<double> eigenvalues;
  SpectrumSource source = SpectrumSource::dense_eigensolve;
  state_t n() const { return static_cast<state_t>(eigenvalues.size()); }
};

// Dense symmetric eigensolve of D^{1/2} P D^{-1/2}; requires the reversible
// flag and n <= 4096.
Spectrum spectrum(const ChainMatrix& p);

// Closed forms for the lazy walks on cycle, complete, torus and hypercube;
// nullopt for the other families.
std::optional<Spectrum> closed_form_spectrum(const FamilySpec& spec);

struct SpectralSummary {
  double q = 0.0;      // sum over non-unit eigenvalues of (1 - lambda)^-2
  double t_rel = 0.0;  // (1 - lambda_2)^-1; 0 for the one-state chain
};

// Raises a structural error when a second eigenvalue sits within 1e-9 of 1
// (the chain is then reducible or periodic and q would blow up).
SpectralSummary compute_q(const Spectrum& s);

// g[z] = sum_{j<=t} p_j(x, z); entries sum to t+1.
struct GreenTable {
  state_t x = 0;
  std::uint64_t horizon = 0;
  std::vector<double> g;
};

GreenTable green_table(const ChainMatrix& p, state_t x, std::uint64_t t);

struct QtValue {
  double qt = 0.0;  // sum_z g_t(x,z)^2
  // For transitive-flagged chains, the same quantity as the double return
  // probability sum; filled only in that case and checked against qt.
  std::optional<double> return_sum;
};

QtValue compute_qt(const ChainMatrix& p, state_t x, std::uint64_t t);

// Q_t from the eigenvalues of a transitive chain:
// (t+1)^2/n + (1/n) sum_{k>=2} (1 - lambda_k^{t+1})^2 / (1 - lambda_k)^2.
double spectral_qt(const Spectrum& s, std::uint64_t t);

// Smallest t with max_{x,y} |p_t(x,y)/pi(y) - 1| <= 1/4. Transitive chains use
// the p_t(x,x) <= 5/(4n) criterion (checked against the definition for
// n <= 64); other lazy reversible chains use stepping plus a power-doubling
// search for large t.
std::uint64_t uniform_mixing_time(const ChainMatrix& p);

}  // namespace ixt
