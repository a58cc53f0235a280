#include "mlsc/core/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mlsc/core/errors.hpp"

namespace mlsc::core {
namespace {

GaussRule build_rule(int order) {
  using std::numbers::pi;
  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  // Newton on Legendre P_n from the Chebyshev initial guess
  for (int i = 0; i < order; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = order * (x * p1 - p0) / (x * x - 1.0);
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

std::mutex rule_mutex;
std::map<int, GaussRule> rule_cache;

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 2) throw config_error("gauss_legendre: order >= 2");
  std::lock_guard<std::mutex> lock(rule_mutex);
  auto it = rule_cache.find(order);
  if (it == rule_cache.end()) it = rule_cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 int order) {
  const GaussRule& r = gauss_legendre(order);
  const double w = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    for (int i = 0; i < order; ++i)
      acc += r.weights[i] * f(lo + 0.5 * w * (r.nodes[i] + 1.0));
  }
  return acc * 0.5 * w;
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b, int panels,
                 int order) {
  const GaussRule& r = gauss_legendre(order);
  const double w = (b - a) / panels;
  cplx acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    for (int i = 0; i < order; ++i)
      acc += r.weights[i] * f(lo + 0.5 * w * (r.nodes[i] + 1.0));
  }
  return acc * (0.5 * w);
}

cplx slow_transform(const GridFunction& f, double xi) {
  using std::numbers::pi;
  if (f.grid.dim != 1) throw config_error("slow_transform: 1-d only");
  cplx acc = 0.0;
  for (int j = 0; j < f.grid.n; ++j)
    acc += f[j] * std::polar(1.0, -2.0 * pi * f.grid.coord(j) * xi);
  return acc * f.grid.spacing();
}

}  // namespace mlsc::core
