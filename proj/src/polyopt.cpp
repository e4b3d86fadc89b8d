// SPDX-License-Identifier: Apache-2.0
#include "gpax/polyopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace gpax {

Poly Poly::constant(int dim, double c) {
  Poly p;
  p.dim = dim;
  if (c != 0.0) p.coeffs[MultiIndex(dim, 0)] = c;
  return p;
}

Poly Poly::variable(int dim, int i) {
  Poly p;
  p.dim = dim;
  MultiIndex m(dim, 0);
  m[i] = 1;
  p.coeffs[m] = 1.0;
  return p;
}

double Poly::eval(const Vec& x) const {
  double acc = 0.0;
  for (const auto& [m, c] : coeffs) {
    double t = c;
    for (int i = 0; i < dim; ++i)
      for (int e = 0; e < m[i]; ++e) t *= x[i];
    acc += t;
  }
  return acc;
}

Vec Poly::gradient(const Vec& x) const {
  Vec g = Vec::Zero(dim);
  for (const auto& [m, c] : coeffs) {
    for (int i = 0; i < dim; ++i) {
      if (m[i] == 0) continue;
      double t = c * m[i];
      for (int j = 0; j < dim; ++j) {
        int e = (j == i) ? m[j] - 1 : m[j];
        for (int r = 0; r < e; ++r) t *= x[j];
      }
      g[i] += t;
    }
  }
  return g;
}

Mat Poly::hessian(const Vec& x) const {
  Mat h = Mat::Zero(dim, dim);
  for (const auto& [m, c] : coeffs) {
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        double f;
        if (i == j) {
          if (m[i] < 2) continue;
          f = double(m[i]) * (m[i] - 1);
        } else {
          if (m[i] == 0 || m[j] == 0) continue;
          f = double(m[i]) * m[j];
        }
        double t = c * f;
        for (int u = 0; u < dim; ++u) {
          int e = m[u] - (u == i) - (u == j);
          for (int r = 0; r < e; ++r) t *= x[u];
        }
        h(i, j) += t;
        if (i != j) h(j, i) += t;
      }
    }
  }
  return h;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.coeffs) r.coeffs[m] += c;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.coeffs) r.coeffs[m] -= c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.dim = dim;
  for (const auto& [ma, ca] : coeffs) {
    for (const auto& [mb, cb] : o.coeffs) {
      MultiIndex m(dim);
      for (int i = 0; i < dim; ++i) m[i] = ma[i] + mb[i];
      r.coeffs[m] += ca * cb;
    }
  }
  return r;
}

Poly Poly::scaled(double s) const {
  Poly r = *this;
  for (auto& [m, c] : r.coeffs) c *= s;
  return r;
}

Poly Poly::derivative(int i) const {
  Poly r;
  r.dim = dim;
  for (const auto& [m, c] : coeffs) {
    if (m[i] == 0) continue;
    MultiIndex d = m;
    d[i] -= 1;
    r.coeffs[d] += c * m[i];
  }
  return r;
}

int Poly::total_degree() const {
  int deg = 0;
  for (const auto& [m, c] : coeffs) {
    if (c == 0.0) continue;
    int t = 0;
    for (int e : m) t += e;
    deg = std::max(deg, t);
  }
  return deg;
}

void Poly::prune(double tol) {
  for (auto it = coeffs.begin(); it != coeffs.end();)
    it = (std::abs(it->second) <= tol) ? coeffs.erase(it) : std::next(it);
}

std::vector<double> Poly::univariate_coeffs() const {
  if (dim != 1)
    throw std::invalid_argument("univariate_coeffs: polynomial is not 1-d");
  std::vector<double> out(total_degree() + 1, 0.0);
  for (const auto& [m, c] : coeffs) out[m[0]] += c;
  return out;
}

namespace {

// monomial coefficients of the classical Legendre P_n, by recurrence
std::vector<double> classical_legendre_coeffs(int n) {
  std::vector<double> p0{1.0};
  if (n == 0) return p0;
  std::vector<double> p1{0.0, 1.0};
  for (int m = 2; m <= n; ++m) {
    std::vector<double> p(m + 1, 0.0);
    for (std::size_t j = 0; j < p1.size(); ++j)
      p[j + 1] += (2.0 * m - 1.0) * p1[j] / m;
    for (std::size_t j = 0; j < p0.size(); ++j)
      p[j] -= (m - 1.0) * p0[j] / m;
    p0 = std::move(p1);
    p1 = std::move(p);
  }
  return p1;
}

// substitute z = alpha*x + beta into a dense polynomial in z (Horner
// with polynomial arithmetic)
std::vector<double> affine_substitute(const std::vector<double>& in,
                                      double alpha, double beta) {
  std::vector<double> out{0.0};
  for (int j = static_cast<int>(in.size()) - 1; j >= 0; --j) {
    std::vector<double> next(out.size() + 1, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      next[i + 1] += alpha * out[i];
      next[i] += beta * out[i];
    }
    next.resize(std::max<std::size_t>(next.size(), 1));
    next[0] += in[j];
    while (next.size() > 1 && next.back() == 0.0) next.pop_back();
    out = std::move(next);
  }
  return out;
}

}  // namespace

Poly legendre_term_poly(const BasisSpec& spec, const MultiIndex& term) {
  const int d = spec.dimension();
  Poly result = Poly::constant(d, 1.0);
  for (int i = 0; i < d; ++i) {
    int n = term[i];
    if (n > 32)
      throw std::invalid_argument(
          "legendre_term_poly: monomial conversion refused above degree 32");
    std::vector<double> cz = classical_legendre_coeffs(n);
    double norm = std::sqrt((2.0 * n + 1.0) / 2.0);
    for (double& c : cz) c *= norm;
    const auto& iv = spec.domain[i];
    double alpha = 2.0 / (iv.hi - iv.lo);
    double beta = -(iv.hi + iv.lo) / (iv.hi - iv.lo);
    std::vector<double> cx = affine_substitute(cz, alpha, beta);
    Poly axis;
    axis.dim = d;
    for (std::size_t j = 0; j < cx.size(); ++j) {
      if (cx[j] == 0.0) continue;
      MultiIndex m(d, 0);
      m[i] = static_cast<int>(j);
      axis.coeffs[m] = cx[j];
    }
    if (axis.coeffs.empty()) axis = Poly::constant(d, 0.0);
    result = result * axis;
  }
  return result;
}

Poly surrogate_poly(const SurrogateModel& model) {
  Poly acc = Poly::constant(model.spec.dimension(), 0.0);
  for (int j = 0; j < model.spec.num_terms(); ++j) {
    double c = model.coefficients[j];
    if (c == 0.0) continue;
    acc = acc + legendre_term_poly(model.spec, model.spec.terms[j]).scaled(c);
  }
  return acc;
}

PolyCost compose_cost(const SurrogateModel& model, double y_star,
                      const Vec& x_prev, double w1, double w2) {
  if (!(w1 > 0.0)) throw std::invalid_argument("compose_cost: w1 must be > 0");
  if (!(w2 >= 0.0)) throw std::invalid_argument("compose_cost: w2 must be >= 0");
  if (model.spec.max_degree > 32)
    throw std::invalid_argument("compose_cost: model degree above 32");
  const int d = model.spec.dimension();
  if (x_prev.size() != d)
    throw std::invalid_argument("compose_cost: x_prev dimension mismatch");

  Poly err = Poly::constant(d, y_star) - surrogate_poly(model);
  Poly j = (err * err).scaled(w1);
  for (int i = 0; i < d; ++i) {
    Poly dx = Poly::variable(d, i) - Poly::constant(d, x_prev[i]);
    j = j + (dx * dx).scaled(w2);
  }
  j.prune(0.0);

  PolyCost cost;
  cost.dimension = d;
  cost.poly = std::move(j);
  cost.degree = cost.poly.total_degree();
  cost.domain = model.spec.domain;
  cost.x_prev = x_prev;
  cost.w1 = w1;
  cost.w2 = w2;
  return cost;
}

std::vector<double> poly_real_roots(const std::vector<double>& coeffs,
                                    double lo, double hi) {
  // strip negligible leading coefficients
  int deg = static_cast<int>(coeffs.size()) - 1;
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  while (deg > 0 && std::abs(coeffs[deg]) < 1e-13 * scale) --deg;
  if (deg == 0) return {};
  if (deg == 1) {
    double r = -coeffs[0] / coeffs[1];
    if (r >= lo - 1e-9 && r <= hi + 1e-9)
      return {std::clamp(r, lo, hi)};
    return {};
  }

  Mat companion = Mat::Zero(deg, deg);
  for (int i = 0; i < deg; ++i)
    companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;

  Eigen::EigenSolver<Mat> es(companion);
  std::vector<double> roots;
  for (int i = 0; i < deg; ++i) {
    std::complex<double> r = es.eigenvalues()[i];
    if (std::abs(r.imag()) > 1e-8 * (1.0 + std::abs(r.real()))) continue;
    double x = r.real();
    if (x < lo - 1e-9 || x > hi + 1e-9) continue;
    roots.push_back(std::clamp(x, lo, hi));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

MinResult minimize_univariate(const PolyCost& cost) {
  if (cost.dimension != 1)
    throw std::invalid_argument("minimize_univariate: cost is not univariate");
  const double lo = cost.domain[0].lo;
  const double hi = cost.domain[0].hi;

  std::vector<double> dj = cost.poly.derivative(0).univariate_coeffs();
  bool deriv_zero = true;
  for (double c : dj)
    if (c != 0.0) deriv_zero = false;
  if (deriv_zero) {
    // flat cost: any point is optimal, stay at x'
    MinResult r;
    r.x = cost.x_prev;
    r.j = cost.eval(cost.x_prev);
    return r;
  }

  std::vector<double> candidates = poly_real_roots(dj, lo, hi);
  candidates.push_back(lo);
  candidates.push_back(hi);

  MinResult best;
  bool first = true;
  for (double x : candidates) {
    Vec xv(1);
    xv[0] = x;
    double j = cost.eval(xv);
    double dist = std::abs(x - cost.x_prev[0]);
    double best_dist =
        first ? 0.0 : std::abs(best.x[0] - cost.x_prev[0]);
    if (first || j < best.j - 1e-12 ||
        (std::abs(j - best.j) <= 1e-12 && dist < best_dist)) {
      best.x = xv;
      best.j = j;
      first = false;
    }
  }
  return best;
}

MinResult minimize_multivariate(const PolyCost& cost, int starts) {
  const int d = cost.dimension;
  if (d < 2)
    throw std::invalid_argument("minimize_multivariate: dimension must be >= 2");

  auto project = [&](Vec x) {
    for (int i = 0; i < d; ++i)
      x[i] = std::clamp(x[i], cost.domain[i].lo, cost.domain[i].hi);
    return x;
  };

  // deterministic start grid: 3 levels per axis (or more when requested)
  int levels = 3;
  if (starts > 0) {
    levels = static_cast<int>(std::round(std::pow(double(starts), 1.0 / d)));
    levels = std::max(levels, 2);
  }
  std::vector<Vec> start_points;
  std::vector<int> idx(d, 0);
  int total = 1;
  for (int i = 0; i < d; ++i) total *= levels;
  for (int r = 0; r < total; ++r) {
    Vec x(d);
    for (int i = 0; i < d; ++i)
      x[i] = cost.domain[i].lo +
             (cost.domain[i].hi - cost.domain[i].lo) * idx[i] /
                 double(levels - 1);
    start_points.push_back(x);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < levels) break;
      idx[i] = 0;
    }
  }
  start_points.push_back(project(cost.x_prev));

  MinResult best;
  bool first = true;
  bool any_converged = false;
  for (const Vec& x0 : start_points) {
    Vec x = x0;
    double j = cost.eval(x);
    bool converged = false;
    for (int it = 0; it < 500; ++it) {
      Vec g = cost.poly.gradient(x);
      // projected gradient as the stationarity measure on the box
      Vec pg = x - project(x - g);
      if (pg.cwiseAbs().maxCoeff() < 1e-11 * (1.0 + std::abs(j))) {
        converged = true;
        break;
      }
      Mat h = cost.poly.hessian(x);
      double lambda = 1e-10;
      Vec step;
      for (int tries = 0; tries < 60; ++tries) {
        Mat hs = h;
        hs.diagonal().array() += lambda;
        Eigen::LDLT<Mat> ldlt(hs);
        step = ldlt.solve(-g);
        Vec xn = project(x + step);
        double jn = cost.eval(xn);
        if (ldlt.info() == Eigen::Success && jn < j) {
          x = xn;
          j = jn;
          break;
        }
        lambda = std::max(lambda * 10.0, 1e-8);
        if (tries == 59) it = 500;  // damping exhausted, give up this start
      }
    }
    any_converged = any_converged || converged;
    double dist = (x - cost.x_prev).norm();
    if (first || j < best.j - 1e-12 ||
        (std::abs(j - best.j) <= 1e-12 &&
         dist < (best.x - cost.x_prev).norm())) {
      best.x = x;
      best.j = j;
      first = false;
    }
  }
  best.certified = any_converged;
  return best;
}

double sos_largest_q(const PolyCost& cost, double tol) {
  if (cost.dimension != 1)
    throw std::invalid_argument("sos_largest_q: univariate costs only");
  if (!(tol > 0.0)) throw std::invalid_argument("sos_largest_q: tol must be > 0");
  const double lo = cost.domain[0].lo;
  const double hi = cost.domain[0].hi;

  std::vector<double> base = cost.poly.univariate_coeffs();
  if (base.size() == 1) return base[0];  // constant cost

  auto value_at = [&](double x, double q) {
    Vec xv(1);
    xv[0] = x;
    return cost.eval(xv) - q;
  };

  // q is feasible when J - q stays nonnegative across the domain:
  // check endpoints and midpoints between consecutive real roots.
  auto feasible = [&](double q) {
    std::vector<double> shifted = base;
    shifted[0] -= q;
    std::vector<double> pts = poly_real_roots(shifted, lo, hi);
    pts.insert(pts.begin(), lo);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    double slack = 1e-9 * (1.0 + std::abs(q));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      double mid = 0.5 * (pts[i] + pts[i + 1]);
      if (value_at(mid, q) < -slack) return false;
    }
    return value_at(lo, q) >= -slack && value_at(hi, q) >= -slack;
  };

  double q_hi = value_at(cost.x_prev[0], 0.0);
  if (q_hi <= 0.0) return 0.0;
  double q_lo = 0.0;
  if (!feasible(q_lo)) return 0.0;
  if (feasible(q_hi)) return q_hi;
  while (q_hi - q_lo > tol) {
    double mid = 0.5 * (q_lo + q_hi);
    if (feasible(mid))
      q_lo = mid;
    else
      q_hi = mid;
  }
  return q_lo;
}

MinResult minimize_cost(const PolyCost& cost) {
  return cost.dimension == 1 ? minimize_univariate(cost)
                             : minimize_multivariate(cost);
}

}  // namespace gpax
