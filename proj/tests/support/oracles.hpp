#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical code paths: sums are plain loops, the weight
// inversion is a generic pivoted elimination, and the normal CDF comes from
// quadrature of the density.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

// Phi(x) by composite Simpson quadrature of the density on [0, |x|].
inline double normal_cdf_quadrature(double x, int panels = 20000) {
  const double b = std::abs(x);
  const double h = b / (2.0 * panels);
  const auto f = [](double t) { return std::exp(-0.5 * t * t); };
  double s = f(0.0) + f(b);
  for (int i = 1; i < 2 * panels; ++i)
    s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  const double half_mass = s * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
  return x >= 0 ? 0.5 + half_mass : 0.5 - half_mass;
}

// Root of f(x) = target on [lo, hi] for nondecreasing f.
template <class F>
double bisect(F f, double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves M y = rhs for a 2x2 system by Gaussian elimination with pivoting.
inline std::array<double, 2> solve2(std::array<std::array<double, 2>, 2> m,
                                    std::array<double, 2> rhs) {
  if (std::abs(m[1][0]) > std::abs(m[0][0])) {
    std::swap(m[0], m[1]);
    std::swap(rhs[0], rhs[1]);
  }
  if (m[0][0] == 0.0)
    throw std::runtime_error("singular");
  const double f = m[1][0] / m[0][0];
  m[1][1] -= f * m[0][1];
  rhs[1] -= f * rhs[0];
  if (m[1][1] == 0.0)
    throw std::runtime_error("singular");
  const double y1 = rhs[1] / m[1][1];
  const double y0 = (rhs[0] - m[0][1] * y1) / m[0][0];
  return {y0, y1};
}

struct Design {
  std::vector<double> w1, w2;
  std::size_t size() const { return w1.size(); }
};

// Rows of A with tW A = n I: since tW W is symmetric, row i solves
// (tW W) a(i) = n w(i).
inline std::vector<std::array<double, 2>> inversion_rows(const Design& d) {
  const std::size_t n = d.size();
  std::array<std::array<double, 2>, 2> g{};
  for (std::size_t i = 0; i < n; ++i) {
    g[0][0] += d.w1[i] * d.w1[i];
    g[0][1] += d.w1[i] * d.w2[i];
    g[1][1] += d.w2[i] * d.w2[i];
  }
  g[1][0] = g[0][1];
  std::vector<std::array<double, 2>> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    rows[i] = solve2(g, {double(n) * d.w1[i], double(n) * d.w2[i]});
  return rows;
}

// |m_l(x) - m_l(y)| / sqrt(V) computed term by term.
inline double mixing_statistic(const Design& dx, const std::vector<double>& x,
                               const Design& dy, const std::vector<double>& y, int l) {
  const auto part = [&](const Design& d, const std::vector<double>& v, double& m_l,
                        double& var) {
    const auto a = inversion_rows(d);
    const double n = double(v.size());
    double m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      m1 += a[i][0] * v[i] / n;
      m2 += a[i][1] * v[i] / n;
    }
    m_l = l == 1 ? m1 : m2;
    var = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double al = a[i][l - 1];
      const double r = v[i] - d.w1[i] * m1 - d.w2[i] * m2;
      var += al * al * r * r / (n * n);
    }
  };
  double mx, vx, my, vy;
  part(dx, x, mx, vx);
  part(dy, y, my, vy);
  return std::abs(mx - my) / std::sqrt(vx + vy);
}

// Welch-type statistic on explicit subsets, biased variances.
inline std::optional<double> welch_statistic(const std::vector<double>& x,
                                             const std::vector<bool>& in_x,
                                             const std::vector<double>& y,
                                             const std::vector<bool>& in_y) {
  const auto moments = [](const std::vector<double>& v, const std::vector<bool>& in,
                          double& n, double& mean, double& var) {
    n = 0;
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (in[i]) {
        n += 1;
        s += v[i];
      }
    if (n == 0)
      return false;
    mean = s / n;
    double ss = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (in[i])
        ss += (v[i] - mean) * (v[i] - mean);
    var = ss / n;
    return true;
  };
  double nx, mx, vx, ny, my, vy;
  if (!moments(x, in_x, nx, mx, vx) || !moments(y, in_y, ny, my, vy))
    return std::nullopt;
  return std::abs(mx - my) / std::sqrt(vx / nx + vy / ny);
}

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// Asymptotic Kolmogorov tail P(K > sqrt(n) D), with the usual small-sample
// correction sqrt(n) + 0.12 + 0.11/sqrt(n).
inline double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(double(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16)
      break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

// Random full-rank weight design with n rows.
inline Design random_design(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    Design d;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = u(gen);
      d.w1.push_back(w);
      d.w2.push_back(1.0 - w);
    }
    double g11 = 0, g12 = 0, g22 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      g11 += d.w1[i] * d.w1[i];
      g12 += d.w1[i] * d.w2[i];
      g22 += d.w2[i] * d.w2[i];
    }
    if ((g11 * g22 - g12 * g12) / double(n * n) > 1e-4)
      return d;
  }
}

} // namespace oracle
