#include "mlsc/euclid/phase_symbol.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "mlsc/core/bump.hpp"
#include "mlsc/core/errors.hpp"

namespace mlsc::euclid {

namespace {

double box_weight(const EdgeCutoff& cut, bool on, const Grid& g, const double* pt) {
  if (!on) return 1.0;
  double w = 1.0;
  for (int d = 0; d < g.dim; ++d) {
    w *= core::plateau_bump(pt[d], cut.flat * g.half_width, cut.supp * g.half_width);
    if (w == 0.0) return 0.0;
  }
  return w;
}

std::function<cplx(const double*)> wrap_axis(std::function<cplx(const double*)> f,
                                             const EdgeCutoff& cut, bool on, const Grid& g) {
  return [f = std::move(f), cut, on, g](const double* pt) -> cplx {
    double w = box_weight(cut, on, g, pt);
    return w == 0.0 ? cplx(0.0) : w * f(pt);
  };
}

// interior probe lattice: 9 stations per axis at 0, +-0.2, ... +-0.8 of L
std::vector<std::array<double, 3>> probe_lattice(const Grid& g) {
  static const double frac[] = {0.0, 0.2, -0.2, 0.4, -0.4, 0.6, -0.6, 0.8, -0.8};
  const int per_axis = 9;
  int count = 1;
  for (int d = 0; d < g.dim; ++d) count *= per_axis;
  std::vector<std::array<double, 3>> pts(count);
  for (int i = 0; i < count; ++i) {
    int rem = i;
    for (int d = g.dim - 1; d >= 0; --d) {
      pts[i][d] = frac[rem % per_axis] * g.half_width;
      rem /= per_axis;
    }
  }
  return pts;
}

}  // namespace

PhaseSymbol make_symbol(const Grid& pos, const Grid& freq,
                        std::function<cplx(const double*, const double*)> f,
                        EdgeCutoff cut) {
  PhaseSymbol a;
  a.pos = pos;
  a.freq = freq;
  a.eval = [f = std::move(f), cut, pos, freq](const double* x, const double* xi) -> cplx {
    double w = box_weight(cut, cut.cut_pos, pos, x) * box_weight(cut, cut.cut_freq, freq, xi);
    return w == 0.0 ? cplx(0.0) : w * f(x, xi);
  };
  return a;
}

PhaseSymbol make_separable_symbol(const Grid& pos, const Grid& freq,
                                  std::vector<SepTerm> terms, EdgeCutoff cut) {
  PhaseSymbol a;
  a.pos = pos;
  a.freq = freq;
  a.separable.reserve(terms.size());
  for (auto& t : terms) {
    a.separable.push_back({wrap_axis(std::move(t.fx), cut, cut.cut_pos, pos),
                           wrap_axis(std::move(t.fxi), cut, cut.cut_freq, freq)});
  }
  a.eval = [terms = a.separable](const double* x, const double* xi) -> cplx {
    cplx s = 0.0;
    for (const auto& t : terms) s += t.fx(x) * t.fxi(xi);
    return s;
  };
  return a;
}

PhaseSymbol scale_symbol(const PhaseSymbol& a, double eps, double tail_tol) {
  if (!(eps > 0.0)) throw config_error("scale_symbol: eps must be positive");

  // Mass of a(x, xi') at |xi'_d| > eps*Xi would land outside the frequency
  // box after substitution; refuse rather than alias it.
  const Grid& fg = a.freq;
  double total = 0.0, outside = 0.0;
  for (const auto& x : probe_lattice(a.pos)) {
    for (std::size_t k = 0; k < fg.size(); ++k) {
      int ik[3];
      fg.unflatten(k, ik);
      double xi[3];
      bool out = false;
      for (int d = 0; d < fg.dim; ++d) {
        xi[d] = fg.coord(ik[d]);
        out = out || std::abs(xi[d]) > eps * fg.half_width;
      }
      double m = std::norm(a.eval(x.data(), xi));
      total += m;
      if (out) outside += m;
    }
  }
  if (total > 0.0 && outside / total > tail_tol) {
    throw precondition_error("scale_symbol: rescaled support exceeds the frequency grid");
  }

  PhaseSymbol r;
  r.pos = a.pos;
  r.freq = a.freq;
  r.analytic = a.analytic;
  const int fdim = a.freq.dim;
  r.eval = [inner = a.eval, eps, fdim](const double* x, const double* xi) -> cplx {
    double s[3];
    for (int d = 0; d < fdim; ++d) s[d] = eps * xi[d];
    return inner(x, s);
  };
  r.separable.reserve(a.separable.size());
  for (const auto& t : a.separable) {
    r.separable.push_back(
        {t.fx, [g = t.fxi, eps, fdim](const double* xi) -> cplx {
           double s[3];
           for (int d = 0; d < fdim; ++d) s[d] = eps * xi[d];
           return g(s);
         }});
  }
  return r;
}

double symbol_support_radius(const PhaseSymbol& a) {
  const Grid& fg = a.freq;
  auto probes = probe_lattice(a.pos);
  double peak = 0.0;
  std::vector<double> mag(probes.size() * fg.size());
  std::size_t idx = 0;
  for (const auto& x : probes) {
    for (std::size_t k = 0; k < fg.size(); ++k) {
      int ik[3];
      fg.unflatten(k, ik);
      double xi[3];
      for (int d = 0; d < fg.dim; ++d) xi[d] = fg.coord(ik[d]);
      mag[idx] = std::abs(a.eval(x.data(), xi));
      peak = std::max(peak, mag[idx]);
      ++idx;
    }
  }
  if (peak == 0.0) return 0.0;
  const double thresh = 1e-8 * peak;
  double radius = 0.0;
  idx = 0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (std::size_t k = 0; k < fg.size(); ++k, ++idx) {
      if (mag[idx] <= thresh) continue;
      int ik[3];
      fg.unflatten(k, ik);
      double r2 = 0.0;
      for (int d = 0; d < fg.dim; ++d) {
        double c = fg.coord(ik[d]);
        r2 += c * c;
      }
      radius = std::max(radius, std::sqrt(r2));
    }
  }
  return radius;
}

double symbol_tail_fraction(const PhaseSymbol& a) {
  // xi-direction tails along frequency rows at fixed x-probes; x is never
  // integrated by the quantizers, so only xi-tails threaten the quadrature
  const Grid& fg = a.freq;
  double total = 0.0, tail = 0.0;
  for (const auto& x : probe_lattice(a.pos)) {
    for (std::size_t k = 0; k < fg.size(); ++k) {
      int ik[3];
      fg.unflatten(k, ik);
      double xi[3];
      bool outer = false;
      for (int d = 0; d < fg.dim; ++d) {
        xi[d] = fg.coord(ik[d]);
        outer = outer || std::abs(xi[d]) > 0.95 * fg.half_width;
      }
      double m = std::norm(a.eval(x.data(), xi));
      total += m;
      if (outer) tail += m;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace mlsc::euclid
