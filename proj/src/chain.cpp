#include "ixt/chain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ixt {

namespace {

double l1_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// mu P into out (assumes out zeroed)
void apply(const ChainMatrix& p, std::span<const double> mu, std::span<double> out) {
  for (state_t x = 0; x < p.n(); ++x) {
    const double m = mu[x];
    if (m == 0.0) continue;
    for (const Entry& e : p.row(x)) out[e.to] += m * e.p;
  }
}

}  // namespace

DistVector::DistVector(std::vector<double> probs, const Tolerances& tol) : probs_(std::move(probs)) {
  double sum = 0;
  for (double& v : probs_) {
    if (v < 0) {
      if (v < tol.dist_entry_floor)
        fail(ErrorKind::Validation, "distribution entry below zero: " + std::to_string(v));
      v = 0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol.dist_sum)
    fail(ErrorKind::Validation, "distribution sums to " + std::to_string(sum) + ", not 1");
}

DistVector DistVector::delta(state_t n, state_t x) {
  std::vector<double> v(n, 0.0);
  v.at(x) = 1.0;
  return DistVector(std::move(v));
}

DistVector DistVector::uniform(state_t n) {
  return DistVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ChainMatrix ChainMatrix::build(state_t n, std::vector<std::vector<Entry>> rows, ChainFlags flags,
                               std::optional<std::vector<double>> pi, const Tolerances& tol) {
  if (n == 0) fail(ErrorKind::Validation, "chain must have at least one state");
  if (rows.size() != n) fail(ErrorKind::Validation, "row count does not match state count");

  ChainMatrix c;
  c.n_ = n;
  c.flags_ = flags;
  c.row_offset_.assign(n + 1, 0);
  c.entries_.reserve([&] {
    std::size_t s = 0;
    for (const auto& r : rows) s += r.size();
    return s;
  }());

  for (state_t x = 0; x < n; ++x) {
    auto& r = rows[x];
    std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.to < b.to; });
    double sum = 0;
    std::size_t begin = c.entries_.size();
    for (const Entry& e : r) {
      if (e.to >= n)
        fail(ErrorKind::Validation,
             "row " + std::to_string(x) + " targets state " + std::to_string(e.to));
      if (e.p < tol.dist_entry_floor || e.p > 1.0 + tol.row_sum)
        fail(ErrorKind::Validation, "row " + std::to_string(x) + " has probability " +
                                        std::to_string(e.p) + " outside [0,1]");
      sum += e.p;
      if (e.p <= tol.zero_entry) continue;  // treated as structurally absent
      if (c.entries_.size() > begin && c.entries_.back().to == e.to)
        c.entries_.back().p += e.p;
      else
        c.entries_.push_back(e);
    }
    if (std::abs(sum - 1.0) > tol.row_sum)
      fail(ErrorKind::Validation,
           "row " + std::to_string(x) + " sums to " + std::to_string(sum) + ", not 1");
    c.row_offset_[x + 1] = static_cast<std::uint32_t>(c.entries_.size());
  }

  if (flags.lazy) {
    for (state_t x = 0; x < n; ++x) {
      if (c.entry(x, x) < 0.5 - tol.lazy_diag)
        fail(ErrorKind::Validation,
             "lazy flag set but diagonal of row " + std::to_string(x) + " is below 1/2");
    }
  }

  if (pi.has_value()) {
    if (pi->size() != n) fail(ErrorKind::Validation, "pi length does not match state count");
    c.pi_ = std::move(*pi);
    double sum = 0;
    for (double v : c.pi_) {
      if (v < 0) fail(ErrorKind::Validation, "pi has a negative entry");
      sum += v;
    }
    for (double& v : c.pi_) v /= sum;
  } else {
    DistVector computed = stationary(c);
    c.pi_.assign(computed.probs().begin(), computed.probs().end());
  }

  std::vector<double> piP(n, 0.0);
  apply(c, c.pi_, piP);
  if (l1_diff(piP, c.pi_) > tol.pi_residual)
    fail(ErrorKind::Validation, "pi P - pi residual exceeds tolerance");

  if (flags.reversible) {
    ReversibilityReport rep = check_reversible(c);
    if (!rep.reversible)
      fail(ErrorKind::Validation, "reversible flag set but detailed balance violated by " +
                                      std::to_string(rep.max_violation));
  }
  return c;
}

double ChainMatrix::entry(state_t x, state_t y) const {
  auto r = row(x);
  auto it = std::lower_bound(r.begin(), r.end(), y,
                             [](const Entry& e, state_t t) { return e.to < t; });
  return (it != r.end() && it->to == y) ? it->p : 0.0;
}

ChainMatrix ChainMatrix::with_flags(ChainFlags flags, const Tolerances& tol) const {
  ChainMatrix c = *this;
  c.flags_ = flags;
  if (flags.lazy) {
    for (state_t x = 0; x < n_; ++x)
      if (c.entry(x, x) < 0.5 - tol.lazy_diag)
        fail(ErrorKind::Validation, "lazy flag set but diagonal of row " + std::to_string(x) +
                                        " is below 1/2");
  }
  if (flags.reversible && !check_reversible(c).reversible)
    fail(ErrorKind::Validation, "reversible flag set but detailed balance violated");
  return c;
}

bool ChainMatrix::strongly_connected() const {
  auto reaches_all = [&](bool reversed) {
    std::vector<char> seen(n_, 0);
    std::vector<state_t> stack{0};
    seen[0] = 1;
    state_t count = 1;
    // reversed direction needs the transpose adjacency
    std::vector<std::vector<state_t>> radj;
    if (reversed) {
      radj.resize(n_);
      for (state_t x = 0; x < n_; ++x)
        for (const Entry& e : row(x)) radj[e.to].push_back(x);
    }
    while (!stack.empty()) {
      state_t v = stack.back();
      stack.pop_back();
      if (reversed) {
        for (state_t u : radj[v])
          if (!seen[u]) {
            seen[u] = 1;
            ++count;
            stack.push_back(u);
          }
      } else {
        for (const Entry& e : row(v))
          if (!seen[e.to]) {
            seen[e.to] = 1;
            ++count;
            stack.push_back(e.to);
          }
      }
    }
    return count == n_;
  };
  return reaches_all(false) && reaches_all(true);
}

ChainMatrix make_lazy(const ChainMatrix& p) {
  std::vector<std::vector<Entry>> rows(p.n());
  for (state_t x = 0; x < p.n(); ++x) {
    bool has_diag = false;
    for (const Entry& e : p.row(x)) {
      double q = e.p / 2.0;
      if (e.to == x) {
        q += 0.5;
        has_diag = true;
      }
      rows[x].push_back({e.to, q});
    }
    if (!has_diag) rows[x].push_back({x, 0.5});
  }
  ChainFlags f = p.flags();
  f.lazy = true;
  return ChainMatrix::build(p.n(), std::move(rows), f,
                            std::vector<double>(p.pi().begin(), p.pi().end()));
}

DistVector stationary(const ChainMatrix& p) {
  const Tolerances& tol = Tolerances::defaults();
  const state_t n = p.n();
  if (!p.strongly_connected())
    fail(ErrorKind::Structural, "chain is reducible; no unique stationary distribution");
  if (n == 1) return DistVector::uniform(1);

  // Doubly stochastic chains (every walk on a regular graph) mix to exact uniform.
  {
    std::vector<double> col(n, 0.0);
    for (state_t x = 0; x < n; ++x)
      for (const Entry& e : p.row(x)) col[e.to] += e.p;
    bool doubly = true;
    for (double s : col)
      if (std::abs(s - 1.0) > tol.row_sum) {
        doubly = false;
        break;
      }
    if (doubly) return DistVector::uniform(n);
  }

  // Power iteration on the lazy version (same fixed point, aperiodic).
  std::vector<double> mu(n, 1.0 / n), nu(n, 0.0);
  for (std::int64_t it = 0; it < tol.power_iter_max; ++it) {
    std::fill(nu.begin(), nu.end(), 0.0);
    apply(p, mu, nu);
    double res = 0;
    for (state_t i = 0; i < n; ++i) {
      nu[i] = 0.5 * (nu[i] + mu[i]);  // lazy step
      res += std::abs(nu[i] - mu[i]);
    }
    mu.swap(nu);
    // residual of the lazy step is half the residual under P
    if (2.0 * res <= tol.power_iter_residual) {
      double s = 0;
      for (double v : mu) s += v;
      for (double& v : mu) v /= s;
      return DistVector(std::move(mu));
    }
  }

  // Fallback: dense solve of pi (P - I) = 0 with a normalization row.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (state_t x = 0; x < n; ++x)
    for (const Entry& e : p.row(x)) a(e.to, x) += e.p;  // transpose of P
  a.diagonal().array() -= 1.0;
  a.row(0).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
  std::vector<double> out(n);
  double s = 0;
  for (state_t i = 0; i < n; ++i) {
    out[i] = std::max(sol(i), 0.0);
    s += out[i];
  }
  if (s <= 0) fail(ErrorKind::Structural, "stationary solve produced a degenerate vector");
  for (double& v : out) v /= s;
  return DistVector(std::move(out));
}

DistVector evolve(const ChainMatrix& p, const DistVector& mu, std::uint64_t t) {
  if (mu.size() != p.n()) fail(ErrorKind::Validation, "distribution size does not match chain");
  std::vector<double> cur(mu.probs().begin(), mu.probs().end());
  std::vector<double> next(p.n(), 0.0);
  for (std::uint64_t s = 0; s < t; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    apply(p, cur, next);
    cur.swap(next);
  }
  return DistVector(std::move(cur));
}

ReversibilityReport check_reversible(const ChainMatrix& p) {
  const Tolerances& tol = Tolerances::defaults();
  double worst = 0;
  for (state_t x = 0; x < p.n(); ++x) {
    for (const Entry& e : p.row(x)) {
      double lhs = p.pi_at(x) * e.p;
      double rhs = p.pi_at(e.to) * p.entry(e.to, x);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {worst <= tol.detailed_balance, worst};
}

bool check_transitive_heuristic(const ChainMatrix& p) {
  const Tolerances& tol = Tolerances::defaults();
  const state_t n = p.n();
  if (n <= 1) return true;
  constexpr std::uint64_t kHorizon = 20;

  // Row entry multisets must coincide.
  std::vector<double> ref;
  for (const Entry& e : p.row(0)) ref.push_back(e.p);
  std::sort(ref.begin(), ref.end());
  for (state_t x = 1; x < n; ++x) {
    auto r = p.row(x);
    if (r.size() != ref.size()) return false;
    std::vector<double> probs;
    for (const Entry& e : r) probs.push_back(e.p);
    std::sort(probs.begin(), probs.end());
    for (std::size_t i = 0; i < probs.size(); ++i)
      if (std::abs(probs[i] - ref[i]) > tol.heuristic_match) return false;
  }

  // Return probability sequences p_t(x,x), t <= 20, must coincide.
  std::vector<double> ret0;
  {
    DistVector d = DistVector::delta(n, 0);
    for (std::uint64_t t = 0; t <= kHorizon; ++t) {
      ret0.push_back(d[0]);
      d = evolve(p, d, 1);
    }
  }
  for (state_t x = 1; x < n; ++x) {
    DistVector d = DistVector::delta(n, x);
    for (std::uint64_t t = 0; t <= kHorizon; ++t) {
      if (std::abs(d[x] - ret0[t]) > tol.heuristic_match) return false;
      d = evolve(p, d, 1);
    }
  }
  return true;
}

ChainMatrix read_chain(std::istream& in) {
  const Tolerances& tol = Tolerances::defaults();
  std::string line;
  state_t n = 0;
  bool have_n = false;
  std::vector<std::vector<Entry>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (!have_n) {
      std::string tag;
      if (!(ls >> tag)) continue;  // blank
      if (tag != "n") fail(ErrorKind::Io, "expected 'n <count>' header, got '" + tag + "'");
      long long count = 0;
      if (!(ls >> count) || count <= 0) fail(ErrorKind::Io, "invalid state count in header");
      n = static_cast<state_t>(count);
      rows.resize(n);
      have_n = true;
      continue;
    }
    long long src, dst;
    double prob;
    if (!(ls >> src)) continue;  // blank
    if (!(ls >> dst >> prob))
      fail(ErrorKind::Io, "malformed entry at line " + std::to_string(lineno));
    if (src < 0 || dst < 0 || src >= n || dst >= n)
      fail(ErrorKind::Io, "state out of range at line " + std::to_string(lineno));
    rows[static_cast<std::size_t>(src)].push_back({static_cast<state_t>(dst), prob});
  }
  if (!have_n) fail(ErrorKind::Io, "missing 'n <count>' header");

  ChainMatrix c = ChainMatrix::build(n, std::move(rows), ChainFlags{});

  // Detect flags the format does not carry.
  ChainFlags f;
  f.lazy = true;
  for (state_t x = 0; x < n && f.lazy; ++x)
    if (c.entry(x, x) < 0.5 - tol.lazy_diag) f.lazy = false;
  f.reversible = check_reversible(c).reversible;
  {
    std::vector<double> col(n, 0.0);
    for (state_t x = 0; x < n; ++x)
      for (const Entry& e : c.row(x)) col[e.to] += e.p;
    f.regular = true;
    for (double s : col)
      if (std::abs(s - 1.0) > tol.row_sum) {
        f.regular = false;
        break;
      }
  }
  return c.with_flags(f);
}

ChainMatrix read_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);
  return read_chain(in);
}

void write_chain(std::ostream& out, const ChainMatrix& p) {
  out << "n " << p.n() << "\n";
  char buf[64];
  for (state_t x = 0; x < p.n(); ++x) {
    for (const Entry& e : p.row(x)) {
      std::snprintf(buf, sizeof buf, "%.17g", e.p);
      out << x << " " << e.to << " " << buf << "\n";
    }
  }
}

void write_chain_file(const std::string& path, const ChainMatrix& p) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
  write_chain(out, p);
  if (!out) fail(ErrorKind::Io, "write to " + path + " failed");
}

}  // namespace ixt
