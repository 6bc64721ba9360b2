#include "spinlearn/qdyn/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinlearn::qdyn {

namespace {

using cplx = std::complex<double>;

constexpr cplx kI{0.0, 1.0};

inline double zsign(std::uint64_t s, std::uint64_t mask) { return (s & mask) ? -1.0 : 1.0; }

// Phase picked up by the flipped axes: X -> 1, Y -> i(-1)^b.
inline cplx flip_phase(Pauli axis, std::uint64_t s, std::uint64_t mask) {
  return axis == Pauli::kY ? kI * zsign(s, mask) : cplx{1.0, 0.0};
}

std::size_t pair_index(int distance, int a, int b) {
  return static_cast<std::size_t>(9 * (distance - 1) + 3 * a + b);
}

void check_distance(int sites, int max_distance) {
  if (max_distance < 0 || max_distance > default_max_distance(sites)) {
    throw std::domain_error("correlator distance " + std::to_string(max_distance) +
                            " out of range for a ring of " + std::to_string(sites) + " sites");
  }
}

}  // namespace

std::complex<double> pauli_expectation(const StateVector& state, std::span<const PauliFactor> factors) {
  for (const auto& f : factors) {
    if (f.site < 0 || f.site >= state.sites()) throw std::domain_error("Pauli factor site out of range");
  }
  const auto psi = state.amplitudes();
  cplx total = 0.0;
  for (std::uint64_t s = 0; s < psi.size(); ++s) {
    std::uint64_t t = s;
    cplx phase = 1.0;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      const std::uint64_t mask = std::uint64_t{1} << it->site;
      switch (it->axis) {
        case Pauli::kX:
          t ^= mask;
          break;
        case Pauli::kY:
          phase *= kI * zsign(t, mask);
          t ^= mask;
          break;
        case Pauli::kZ:
          phase *= zsign(t, mask);
          break;
      }
    }
    total += std::conj(psi[t]) * phase * psi[s];
  }
  return total;
}

double ObservableFrame::correlator(int distance, Pauli a, Pauli b) const {
  return correlators.at(pair_index(distance, static_cast<int>(a), static_cast<int>(b)));
}

double& ObservableFrame::correlator(int distance, Pauli a, Pauli b) {
  return correlators.at(pair_index(distance, static_cast<int>(a), static_cast<int>(b)));
}

std::vector<double> ObservableFrame::flatten() const {
  std::vector<double> out(locals.begin(), locals.end());
  out.insert(out.end(), correlators.begin(), correlators.end());
  return out;
}

ObservableFrame ObservableFrame::from_flat(std::span<const double> flat) {
  if (flat.size() < 3 || (flat.size() - 3) % 9 != 0) {
    throw std::domain_error("flat observable frame has invalid width " + std::to_string(flat.size()));
  }
  ObservableFrame f;
  std::copy_n(flat.begin(), 3, f.locals.begin());
  f.correlators.assign(flat.begin() + 3, flat.end());
  return f;
}

std::vector<double> ObservableSeries::flatten() const {
  std::vector<double> out;
  if (frames.empty()) return out;
  out.reserve(frames.size() * observable_count(max_distance()));
  for (const auto& f : frames) {
    out.insert(out.end(), f.locals.begin(), f.locals.end());
    out.insert(out.end(), f.correlators.begin(), f.correlators.end());
  }
  return out;
}

ObservableSeries ObservableSeries::from_flat(std::span<const double> flat, std::size_t n_frames, double dt) {
  ObservableSeries series;
  series.dt = dt;
  if (n_frames == 0) return series;
  if (flat.size() % n_frames != 0) throw std::domain_error("flat series size is not a multiple of frame count");
  const std::size_t width = flat.size() / n_frames;
  for (std::size_t k = 0; k < n_frames; ++k) {
    series.frames.push_back(ObservableFrame::from_flat(flat.subspan(k * width, width)));
  }
  return series;
}

SiteResolvedFrame measure_sites(const StateVector& state, int max_distance) {
  const int M = state.sites();
  check_distance(M, max_distance);
  const auto psi = state.amplitudes();
  const std::uint64_t dim = psi.size();

  SiteResolvedFrame out;
  out.locals.resize(M);
  out.correlators.assign(M, std::vector<double>(9 * static_cast<std::size_t>(max_distance), 0.0));

  auto store = [&](double& slot, cplx value) {
    slot = value.real();
    out.max_imaginary_residue = std::max(out.max_imaginary_residue, std::abs(value.imag()));
  };

  for (int j = 0; j < M; ++j) {
    const std::uint64_t mj = std::uint64_t{1} << j;
    cplx x = 0.0, y = 0.0, z = 0.0;
    for (std::uint64_t s = 0; s < dim; ++s) {
      const cplx overlap = std::conj(psi[s ^ mj]) * psi[s];
      x += overlap;
      y += overlap * kI * zsign(s, mj);
      z += std::norm(psi[s]) * zsign(s, mj);
    }
    store(out.locals[j][0], x);
    store(out.locals[j][1], y);
    store(out.locals[j][2], z);

    for (int l = 1; l <= max_distance; ++l) {
      const int k = (j + l) % M;
      const std::uint64_t mk = std::uint64_t{1} << k;
      const std::uint64_t both = mj | mk;
      auto& corr = out.correlators[j];
      cplx acc[3][3] = {};
      for (std::uint64_t s = 0; s < dim; ++s) {
        const double zj = zsign(s, mj);
        const double zk = zsign(s, mk);
        const double pz = std::norm(psi[s]);
        acc[2][2] += pz * zj * zk;

        const cplx oj = std::conj(psi[s ^ mj]) * psi[s];
        acc[0][2] += oj * zk;
        acc[1][2] += oj * flip_phase(Pauli::kY, s, mj) * zk;

        const cplx ok = std::conj(psi[s ^ mk]) * psi[s];
        acc[2][0] += ok * zj;
        acc[2][1] += ok * flip_phase(Pauli::kY, s, mk) * zj;

        const cplx ob = std::conj(psi[s ^ both]) * psi[s];
        const cplx yj = flip_phase(Pauli::kY, s, mj);
        const cplx yk = flip_phase(Pauli::kY, s, mk);
        acc[0][0] += ob;
        acc[0][1] += ob * yk;
        acc[1][0] += ob * yj;
        acc[1][1] += ob * yj * yk;
      }
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) store(corr[pair_index(l, a, b)], acc[a][b]);
      }
    }
  }
  return out;
}

ObservableFrame measure(const StateVector& state, int max_distance) {
  const SiteResolvedFrame sites = measure_sites(state, max_distance);
  if (sites.max_imaginary_residue > 1e-10) {
    throw std::domain_error("expectation values have imaginary residue " +
                            std::to_string(sites.max_imaginary_residue));
  }
  const int M = state.sites();
  ObservableFrame frame;
  frame.correlators.assign(9 * static_cast<std::size_t>(max_distance), 0.0);
  for (int j = 0; j < M; ++j) {
    for (int a = 0; a < 3; ++a) frame.locals[a] += sites.locals[j][a];
    for (std::size_t i = 0; i < frame.correlators.size(); ++i) frame.correlators[i] += sites.correlators[j][i];
  }
  for (auto& v : frame.locals) v /= M;
  for (auto& v : frame.correlators) v /= M;
  return frame;
}

ObservableFrame product_frame(const ProductStateSpec& spec, int max_distance) {
  if (max_distance < 0) throw std::domain_error("negative correlator distance");
  ObservableFrame frame;
  frame.locals = spec.bloch();
  frame.correlators.resize(9 * static_cast<std::size_t>(max_distance));
  for (int l = 1; l <= max_distance; ++l) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) frame.correlators[pair_index(l, a, b)] = frame.locals[a] * frame.locals[b];
    }
  }
  return frame;
}

std::vector<std::string> observable_names(int max_distance) {
  static constexpr const char* kAxis[3] = {"X", "Y", "Z"};
  std::vector<std::string> names(kAxis, kAxis + 3);
  for (int l = 1; l <= max_distance; ++l) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) names.push_back(std::string(kAxis[a]) + kAxis[b] + std::to_string(l));
    }
  }
  return names;
}

}  // namespace spinlearn::qdyn
