#include "spinlearn/closure/moment_equations.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace spinlearn::closure {

namespace {

using Complex = std::complex<double>;

// Pauli string with explicit site -> axis (0 x, 1 y, 2 z); identity sites absent.
struct PauliString {
  Complex phase{1.0, 0.0};
  std::map<int, int> ops;
};

int levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1 : -1;
}

// s^a s^b = delta_ab + i eps_abc s^c
PauliString multiply(const PauliString& lhs, const PauliString& rhs) {
  PauliString out;
  out.phase = lhs.phase * rhs.phase;
  out.ops = lhs.ops;
  for (const auto& [site, b] : rhs.ops) {
    auto it = out.ops.find(site);
    if (it == out.ops.end()) {
      out.ops.emplace(site, b);
      continue;
    }
    const int a = it->second;
    if (a == b) {
      out.ops.erase(it);
    } else {
      const int c = 3 - a - b;
      out.phase *= Complex(0.0, levi_civita(a, b, c));
      it->second = c;
    }
  }
  return out;
}

struct Key {
  bool drive;
  std::vector<int> variables;
  bool operator<(const Key& o) const { return std::tie(drive, variables) < std::tie(o.drive, o.variables); }
};

class Builder {
 public:
  Builder(int sites, int max_distance) : sites_(sites), max_distance_(max_distance) {}

  int local_var(int axis) const { return axis; }

  int pair_var(int s1, int a, int s2, int b) const {
    int d = ((s2 - s1) % sites_ + sites_) % sites_;
    if (d > max_distance_) {
      d = sites_ - d;
      std::swap(a, b);
    }
    return 3 + 9 * (d - 1) + 3 * a + b;
  }

  // Adds coefficient * <string> to `acc`, factorizing three-site strings.
  void add_expectation(std::map<Key, Complex>& acc, Complex coefficient, bool drive, const PauliString& s) const {
    const Complex c = coefficient * s.phase;
    std::vector<std::pair<int, int>> f(s.ops.begin(), s.ops.end());
    auto add = [&](Complex value, std::vector<int> vars) {
      std::sort(vars.begin(), vars.end());
      acc[Key{drive, std::move(vars)}] += value;
    };
    switch (f.size()) {
      case 0:
        add(c, {});
        break;
      case 1:
        add(c, {local_var(f[0].second)});
        break;
      case 2:
        add(c, {pair_var(f[0].first, f[0].second, f[1].first, f[1].second)});
        break;
      case 3: {
        const int A = local_var(f[0].second), B = local_var(f[1].second), C = local_var(f[2].second);
        const int AB = pair_var(f[0].first, f[0].second, f[1].first, f[1].second);
        const int BC = pair_var(f[1].first, f[1].second, f[2].first, f[2].second);
        const int AC = pair_var(f[0].first, f[0].second, f[2].first, f[2].second);
        add(c, {AB, C});
        add(c, {BC, A});
        add(c, {AC, B});
        add(-2.0 * c, {A, B, C});
        break;
      }
      default:
        throw std::logic_error("moment closure produced a string of weight " + std::to_string(f.size()));
    }
  }

  // i <[H, O]>, both as exact Pauli terms and as closed monomials.
  std::pair<std::vector<Monomial>, std::vector<PauliTerm>> derivative(const PauliString& o, double coupling) const {
    std::map<Key, Complex> acc;
    std::vector<PauliTerm> exact;
    auto commute = [&](const PauliString& h, double weight, bool drive) {
      const PauliString ho = multiply(h, o);
      const PauliString oh = multiply(o, h);
      PauliString comm = ho;
      comm.phase = ho.phase - oh.phase;
      if (std::abs(comm.phase) == 0.0) return;
      const Complex c = Complex(0.0, weight) * comm.phase;
      PauliTerm term{c.real(), drive, {}};
      for (const auto& [site, axis] : comm.ops) term.factors.push_back({site, static_cast<qdyn::Pauli>(axis)});
      exact.push_back(std::move(term));
      add_expectation(acc, Complex(0.0, weight), drive, comm);
    };
    auto touches = [&](int site) { return o.ops.count(site) != 0; };
    for (int i = 0; i < sites_; ++i) {
      if (touches(i)) {
        PauliString h;
        h.ops[i] = 0;
        commute(h, 1.0, true);
      }
      const int j = (i + 1) % sites_;
      if (touches(i) || touches(j)) {
        // s^z_i s^z_j as a product so that i == j (never for sites >= 2) would still reduce.
        PauliString zi, zj;
        zi.ops[i] = 2;
        zj.ops[j] = 2;
        commute(multiply(zi, zj), coupling, false);
      }
    }
    std::vector<Monomial> out;
    for (auto& [key, value] : acc) {
      if (std::abs(value.imag()) > 1e-12) {
        throw std::logic_error("moment closure produced a non-Hermitian right-hand side");
      }
      if (std::abs(value.real()) < 1e-14) continue;
      out.push_back(Monomial{value.real(), key.drive, key.variables});
    }
    return {std::move(out), std::move(exact)};
  }

 private:
  int sites_;
  int max_distance_;
};

}  // namespace

std::vector<double> MomentState::flatten() const {
  std::vector<double> out(first.begin(), first.end());
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

MomentState MomentState::from_flat(std::span<const double> flat) {
  if (flat.size() < 3 || (flat.size() - 3) % 9 != 0) {
    throw std::domain_error("moment vector length " + std::to_string(flat.size()) + " is not 3 + 9L");
  }
  MomentState s;
  std::copy_n(flat.begin(), 3, s.first.begin());
  s.second.assign(flat.begin() + 3, flat.end());
  return s;
}

qdyn::ObservableFrame MomentState::to_frame() const {
  qdyn::ObservableFrame f;
  f.locals = first;
  f.correlators = second;
  return f;
}

MomentState MomentState::from_frame(const qdyn::ObservableFrame& frame) {
  MomentState s;
  s.first = frame.locals;
  s.second = frame.correlators;
  return s;
}

MomentState product_moments(const qdyn::ProductStateSpec& spec, int max_distance) {
  return MomentState::from_frame(qdyn::product_frame(spec, max_distance));
}

MomentEquations::MomentEquations(int sites, int max_distance, double coupling)
    : sites_(sites), max_distance_(max_distance < 0 ? qdyn::default_max_distance(sites) : max_distance) {
  if (sites < 2) throw std::domain_error("moment closure needs at least 2 sites");
  if (max_distance_ < 1 || max_distance_ > qdyn::default_max_distance(sites)) {
    throw std::domain_error("max distance " + std::to_string(max_distance_) + " out of range for " +
                            std::to_string(sites) + " sites");
  }
  if (!std::isfinite(coupling)) throw std::domain_error("coupling must be finite");
  const Builder builder(sites_, max_distance_);
  terms_.reserve(qdyn::observable_count(max_distance_));
  for (int n = 0; n < 3; ++n) {
    PauliString o;
    o.ops[0] = n;
    auto [closed, exact] = builder.derivative(o, coupling);
    terms_.push_back(std::move(closed));
    exact_terms_.push_back(std::move(exact));
  }
  for (int l = 1; l <= max_distance_; ++l) {
    for (int m = 0; m < 3; ++m) {
      for (int n = 0; n < 3; ++n) {
        PauliString o;
        o.ops[0] = m;
        o.ops[l % sites_] = n;
        auto [closed, exact] = builder.derivative(o, coupling);
        terms_.push_back(std::move(closed));
        exact_terms_.push_back(std::move(exact));
      }
    }
  }
}

void MomentEquations::rhs(double drive, std::span<const double> y, std::span<double> dydt) const {
  if (y.size() != terms_.size() || dydt.size() != terms_.size()) {
    throw std::domain_error("moment vector has the wrong length");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    double sum = 0.0;
    for (const Monomial& m : terms_[i]) {
      double v = m.coefficient;
      if (m.scales_with_drive) v *= drive;
      for (int idx : m.variables) v *= y[static_cast<std::size_t>(idx)];
      sum += v;
    }
    dydt[i] = sum;
  }
}

MomentState MomentEquations::rhs(const MomentState& state, double drive) const {
  const std::vector<double> y = state.flatten();
  std::vector<double> dy(y.size());
  rhs(drive, y, dy);
  return MomentState::from_flat(dy);
}

MomentState moment_rhs(const MomentState& state, double drive, int sites, double coupling) {
  return MomentEquations(sites, state.max_distance(), coupling).rhs(state, drive);
}

}  // namespace spinlearn::closure
