#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "spinlearn/neural/parameters.hpp"

namespace oracle {

struct TensorError {
  std::string name;
  double relative = 0.0;  // ||g_fd - g|| / max(||g_fd||, ||g||)
  double fd_norm = 0.0;
};

/// Central differences of `loss` w.r.t. every parameter entry, compared per tensor.
inline std::vector<TensorError> gradient_check(spinlearn::neural::ParameterSet<double> params,
                                               const spinlearn::neural::ParameterSet<double>& analytic,
                                               const std::function<double(const spinlearn::neural::ParameterSet<double>&)>& loss,
                                               double h = 1e-5) {
  std::vector<TensorError> out;
  for (std::size_t t = 0; t < params.specs().size(); ++t) {
    const auto& spec = params.specs()[t];
    double diff2 = 0.0, fd2 = 0.0, an2 = 0.0;
    for (Eigen::Index k = 0; k < spec.size(); ++k) {
      double& p = params.values()[spec.offset + k];
      const double saved = p;
      p = saved + h;
      const double up = loss(params);
      p = saved - h;
      const double down = loss(params);
      p = saved;
      const double fd = (up - down) / (2 * h);
      const double an = analytic.values()[spec.offset + k];
      diff2 += (fd - an) * (fd - an);
      fd2 += fd * fd;
      an2 += an * an;
    }
    const double scale = std::max({std::sqrt(fd2), std::sqrt(an2), 1e-300});
    out.push_back({spec.name, std::sqrt(diff2) / scale, std::sqrt(fd2)});
  }
  return out;
}

}  // namespace oracle
