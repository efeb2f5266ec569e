#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace tailmix {

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Returns the abscissa of the maximum to within xtol.
template <typename F>
double golden_section_max(F&& f, double lo, double hi, double xtol = 1e-10,
                          int max_iter = 256) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

struct SimplexResult {
  std::array<double, 2> x{};
  double fval = 0.0;
};

/// Nelder-Mead simplex maximization in two dimensions. ftol is the absolute
/// spread of the simplex function values at convergence.
template <typename F>
SimplexResult nelder_mead_max_2d(F&& f, std::array<double, 2> start,
                                 std::array<double, 2> step,
                                 double ftol = 1e-8, int max_iter = 500) {
  struct Vertex {
    std::array<double, 2> x;
    double val;
  };
  auto eval = [&](const std::array<double, 2>& x) { return f(x); };

  std::array<Vertex, 3> simplex;
  simplex[0] = {start, eval(start)};
  for (int i = 0; i < 2; ++i) {
    auto x = start;
    x[static_cast<std::size_t>(i)] += step[static_cast<std::size_t>(i)];
    simplex[static_cast<std::size_t>(i + 1)] = {x, eval(x)};
  }

  for (int it = 0; it < max_iter; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.val > b.val; });
    const Vertex& best = simplex[0];
    Vertex& worst = simplex[2];
    if (std::abs(best.val - worst.val) < ftol &&
        std::isfinite(best.val) && std::isfinite(worst.val)) {
      break;
    }

    std::array<double, 2> centroid{};
    for (int d = 0; d < 2; ++d) {
      centroid[static_cast<std::size_t>(d)] =
          0.5 * (simplex[0].x[static_cast<std::size_t>(d)] +
                 simplex[1].x[static_cast<std::size_t>(d)]);
    }
    auto blend = [&](double coef) {
      std::array<double, 2> x{};
      for (std::size_t d = 0; d < 2; ++d) {
        x[d] = centroid[d] + coef * (worst.x[d] - centroid[d]);
      }
      return x;
    };

    const auto reflected = blend(-1.0);
    const double f_ref = eval(reflected);
    if (f_ref > best.val) {
      const auto expanded = blend(-2.0);
      const double f_exp = eval(expanded);
      worst = f_exp > f_ref ? Vertex{expanded, f_exp} : Vertex{reflected, f_ref};
    } else if (f_ref > simplex[1].val) {
      worst = {reflected, f_ref};
    } else {
      const auto contracted = blend(0.5);
      const double f_con = eval(contracted);
      if (f_con > worst.val) {
        worst = {contracted, f_con};
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i < 3; ++i) {
          for (std::size_t d = 0; d < 2; ++d) {
            simplex[i].x[d] = best.x[d] + 0.5 * (simplex[i].x[d] - best.x[d]);
          }
          simplex[i].val = eval(simplex[i].x);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(),
            [](const Vertex& a, const Vertex& b) { return a.val > b.val; });
  return {simplex[0].x, simplex[0].val};
}

}  // namespace tailmix
