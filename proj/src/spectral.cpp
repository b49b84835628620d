#include "ixt/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "dense_power.hpp"

namespace ixt {

namespace {

constexpr state_t kDenseEigCap = 4096;

std::uint64_t step_cap(state_t n) {
  // 10 n^3, the divergence guard used by all mixing-time scans
  const double c = 10.0 * std::pow(static_cast<double>(n), 3.0);
  return c > 9e18 ? std::uint64_t(9e18) : static_cast<std::uint64_t>(c);
}

// Smallest t with p_t(x,x) <= bound for a transitive chain (state 0 stands in
// for every x).
std::uint64_t return_prob_crossing(const ChainMatrix& p, double bound, std::uint64_t cap) {
  DistVector d = DistVector::delta(p.n(), 0);
  for (std::uint64_t t = 0;; ++t) {
    if (d[0] <= bound) return t;
    if (t >= cap) fail(ErrorKind::Divergence, "return probability criterion not reached");
    d = evolve(p, d, 1);
  }
}

bool uniform_crit(const double* m, std::span<const double> pi, double eps) {
  const state_t n = static_cast<state_t>(pi.size());
  for (state_t x = 0; x < n; ++x) {
    const double* row = m + static_cast<std::size_t>(x) * n;
    for (state_t y = 0; y < n; ++y) {
      if (std::abs(row[y] / pi[y] - 1.0) > eps) return false;
    }
  }
  return true;
}

}  // namespace

Spectrum spectrum(const ChainMatrix& p) {
  if (!p.flags().reversible)
    fail(ErrorKind::Unsupported, "spectrum requires a reversible chain");
  const state_t n = p.n();
  if (n > kDenseEigCap)
    fail(ErrorKind::Budget, "dense eigensolve capped at n <= 4096; use a closed form");

  // Symmetrize: S = D^{1/2} P D^{-1/2} shares the spectrum of P.
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (state_t x = 0; x < n; ++x) {
    for (const Entry& e : p.row(x)) {
      s(x, e.to) = std::sqrt(p.pi_at(x) / p.pi_at(e.to)) * e.p;
    }
  }
  s = 0.5 * (s + s.transpose().eval());  // clean up rounding asymmetry

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorKind::Structural, "eigensolve failed");
  Spectrum out;
  out.source = SpectrumSource::dense_eigensolve;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
  if (std::abs(out.eigenvalues.front() - 1.0) > Tolerances::defaults().eig_unit)
    fail(ErrorKind::Structural, "leading eigenvalue is not 1");
  return out;
}

std::optional<Spectrum> closed_form_spectrum(const FamilySpec& spec) {
  Spectrum out;
  const double pi2 = 2.0 * std::acos(-1.0);
  switch (spec.family) {
    case Family::cycle: {
      const std::uint32_t n = spec.state_count();
      out.source = SpectrumSource::closed_form_circulant;
      out.eigenvalues.reserve(n);
      for (std::uint32_t k = 0; k < n; ++k)
        out.eigenvalues.push_back(0.5 * (1.0 + std::cos(pi2 * k / n)));
      break;
    }
    case Family::complete: {
      const std::uint32_t n = spec.state_count();
      out.source = SpectrumSource::closed_form_circulant;
      out.eigenvalues.assign(n, n >= 2 ? (n - 2.0) / (2.0 * (n - 1.0)) : 1.0);
      out.eigenvalues[0] = 1.0;
      break;
    }
    case Family::hypercube: {
      // lazy walk: eigenvalue 1 - w/d with multiplicity C(d, w)
      const std::uint32_t d = spec.dim;
      spec.state_count();
      out.source = SpectrumSource::closed_form_product;
      double binom = 1.0;
      for (std::uint32_t w = 0; w <= d; ++w) {
        const double lam = 1.0 - static_cast<double>(w) / d;
        for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(binom + 0.5); ++c)
          out.eigenvalues.push_back(lam);
        binom = binom * (d - w) / (w + 1.0);
      }
      break;
    }
    case Family::torus: {
      // lazy walk: (1 + mean of per-coordinate cosines)/2 over frequency tuples
      const std::uint32_t n = spec.state_count();
      const std::uint32_t l = spec.side, d = spec.dim;
      out.source = SpectrumSource::closed_form_product;
      std::vector<double> cosv(l);
      for (std::uint32_t k = 0; k < l; ++k) cosv[k] = std::cos(pi2 * k / l);
      out.eigenvalues.reserve(n);
      std::vector<std::uint32_t> idx(d, 0);
      for (std::uint32_t v = 0; v < n; ++v) {
        double acc = 0;
        for (std::uint32_t i = 0; i < d; ++i) acc += cosv[idx[i]];
        out.eigenvalues.push_back(0.5 * (1.0 + acc / d));
        for (std::uint32_t i = 0; i < d; ++i) {
          if (++idx[i] < l) break;
          idx[i] = 0;
        }
      }
      break;
    }
    default:
      return std::nullopt;
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
  return out;
}

SpectralSummary compute_q(const Spectrum& s) {
  const auto& ev = s.eigenvalues;
  if (ev.empty()) fail(ErrorKind::Validation, "empty spectrum");
  SpectralSummary out;
  if (ev.size() == 1) return out;  // empty sum, t_rel defined as 0
  if (ev[1] > 1.0 - Tolerances::defaults().eig_unit)
    fail(ErrorKind::Structural,
         "repeated unit eigenvalue: chain is reducible or periodic, Q diverges");
  out.t_rel = 1.0 / (1.0 - ev[1]);
  for (std::size_t j = 1; j < ev.size(); ++j) {
    const double gap = 1.0 - ev[j];
    out.q += 1.0 / (gap * gap);
  }
  return out;
}

GreenTable green_table(const ChainMatrix& p, state_t x, std::uint64_t t) {
  if (x >= p.n()) fail(ErrorKind::Validation, "state out of range");
  GreenTable out{x, t, std::vector<double>(p.n(), 0.0)};
  DistVector d = DistVector::delta(p.n(), x);
  for (std::uint64_t j = 0;; ++j) {
    for (state_t z = 0; z < p.n(); ++z) out.g[z] += d[z];
    if (j == t) break;
    d = evolve(p, d, 1);
  }
  return out;
}

QtValue compute_qt(const ChainMatrix& p, state_t x, std::uint64_t t) {
  GreenTable gt = green_table(p, x, t);
  QtValue out;
  for (double v : gt.g) out.qt += v * v;
  if (p.flags().transitive) {
    // Same quantity as sum_{i,j<=t} p_{i+j}(x,x); p_s(x,x) appears with
    // weight s+1 for s <= t and 2t-s+1 above.
    double rs = 0;
    DistVector d = DistVector::delta(p.n(), x);
    for (std::uint64_t s = 0; s <= 2 * t; ++s) {
      const double w = s <= t ? static_cast<double>(s + 1) : static_cast<double>(2 * t - s + 1);
      rs += w * d[x];
      if (s < 2 * t) d = evolve(p, d, 1);
    }
    out.return_sum = rs;
    if (std::abs(rs - out.qt) > Tolerances::defaults().qt_dual_rel * out.qt)
      fail(ErrorKind::Structural,
           "Q_t return-sum disagrees with the Green-sum form; chain is likely not transitive");
  }
  return out;
}

double spectral_qt(const Spectrum& s, std::uint64_t t) {
  const double n = static_cast<double>(s.eigenvalues.size());
  const double tp1 = static_cast<double>(t + 1);
  double acc = tp1 * tp1 / n;
  for (std::size_t k = 1; k < s.eigenvalues.size(); ++k) {
    const double lam = s.eigenvalues[k];
    // geometric sum (1 - lam^{t+1})/(1 - lam), with the lam -> 1 limit
    const double geo =
        (1.0 - lam < 1e-12) ? tp1 : (1.0 - std::pow(lam, tp1)) / (1.0 - lam);
    acc += geo * geo / n;
  }
  return acc;
}

std::uint64_t uniform_mixing_time(const ChainMatrix& p) {
  if (!p.flags().lazy) fail(ErrorKind::Validation, "uniform mixing time requires a lazy chain");
  const state_t n = p.n();
  if (n == 1) return 0;
  const std::uint64_t cap = step_cap(n);

  auto general = [&] {
    return detail::monotone_first_crossing(
        p, cap, [&](const double* m, state_t) { return uniform_crit(m, p.pi(), 0.25); });
  };

  if (p.flags().transitive) {
    const std::uint64_t t = return_prob_crossing(p, 5.0 / (4.0 * n), cap);
    if (n <= 64) {
      const std::uint64_t td = general();
      if (td != t)
        fail(ErrorKind::Structural,
             "transitive return-probability criterion disagrees with the definition");
    }
    return t;
  }
  return general();
}

}  // namespace ixt
