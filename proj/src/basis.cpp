// SPDX-License-Identifier: Apache-2.0
#include "gpax/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gpax {

double legendre_orthonormal(int n, double z) {
  if (n < 0) throw std::invalid_argument("legendre_orthonormal: negative degree");
  if (n > 64) throw std::invalid_argument("legendre_orthonormal: degree above 64");
  if (std::abs(z) > 1.0 + 1e-12)
    throw std::invalid_argument("legendre_orthonormal: z outside [-1,1]");
  z = std::clamp(z, -1.0, 1.0);

  // classical three-term recurrence, then orthonormal scaling
  double p0 = 1.0;
  double p1 = z;
  double p = (n == 0) ? p0 : p1;
  for (int m = 2; m <= n; ++m) {
    p = ((2.0 * m - 1.0) * z * p1 - (m - 1.0) * p0) / m;
    p0 = p1;
    p1 = p;
  }
  return std::sqrt((2.0 * n + 1.0) / 2.0) * p;
}

std::vector<MultiIndex> enumerate_terms(int d, int max_degree,
                                        int max_interaction_order,
                                        int term_budget) {
  if (d < 1) throw std::invalid_argument("enumerate_terms: d must be >= 1");
  if (max_degree < 0 || max_interaction_order < 0)
    throw std::invalid_argument("enumerate_terms: negative cap");

  std::vector<MultiIndex> out;
  MultiIndex idx(d, 0);
  // lexicographic depth-first enumeration
  auto rec = [&](auto&& self, int pos, int remaining, int active) -> void {
    if (pos == d) {
      out.push_back(idx);
      if (static_cast<int>(out.size()) > term_budget)
        throw std::runtime_error(
            "enumerate_terms: term budget exceeded; reduce max_degree or "
            "interaction order");
      return;
    }
    for (int n = 0; n <= remaining; ++n) {
      int a = active + (n > 0 ? 1 : 0);
      if (a > max_interaction_order) break;
      idx[pos] = n;
      self(self, pos + 1, remaining - n, a);
    }
    idx[pos] = 0;
  };
  rec(rec, 0, max_degree, 0);
  std::sort(out.begin(), out.end());
  return out;
}

void BasisSpec::validate() const {
  if (domain.empty()) throw std::invalid_argument("BasisSpec: empty domain");
  for (const auto& iv : domain)
    if (!(iv.lo < iv.hi))
      throw std::invalid_argument("BasisSpec: degenerate domain interval");
  if (terms.empty()) throw std::invalid_argument("BasisSpec: no terms");
  const int d = dimension();
  for (const auto& t : terms) {
    if (static_cast<int>(t.size()) != d)
      throw std::invalid_argument("BasisSpec: term dimension mismatch");
    int total = 0, active = 0;
    for (int n : t) {
      if (n < 0) throw std::invalid_argument("BasisSpec: negative degree");
      total += n;
      active += (n > 0);
    }
    if (total > max_degree || active > max_interaction_order)
      throw std::invalid_argument("BasisSpec: term violates caps");
  }
  if (!std::is_sorted(terms.begin(), terms.end()))
    throw std::invalid_argument("BasisSpec: terms not sorted");
  if (std::adjacent_find(terms.begin(), terms.end()) != terms.end())
    throw std::invalid_argument("BasisSpec: duplicate terms");
}

BasisSpec BasisSpec::make(Box domain, int max_degree,
                          int max_interaction_order) {
  BasisSpec spec;
  spec.domain = std::move(domain);
  spec.max_degree = max_degree;
  spec.max_interaction_order = max_interaction_order;
  spec.terms = enumerate_terms(spec.dimension(), max_degree,
                               max_interaction_order);
  spec.validate();
  return spec;
}

BasisSpec BasisSpec::with_terms(Box domain, std::vector<MultiIndex> terms) {
  BasisSpec spec;
  spec.domain = std::move(domain);
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  spec.terms = std::move(terms);
  for (const auto& t : spec.terms) {
    int total = 0, active = 0;
    for (int n : t) {
      total += n;
      active += (n > 0);
    }
    spec.max_degree = std::max(spec.max_degree, total);
    spec.max_interaction_order = std::max(spec.max_interaction_order, active);
  }
  spec.validate();
  return spec;
}

double map_to_unit(const Interval& iv, double x) {
  return 2.0 * (x - iv.lo) / (iv.hi - iv.lo) - 1.0;
}

Vec basis_vector(const BasisSpec& spec, const Vec& x) {
  const int d = spec.dimension();
  if (x.size() != d)
    throw std::invalid_argument("basis_vector: point dimension mismatch");

  // per-dimension Legendre values up to the max degree appearing
  Vec z(d);
  for (int i = 0; i < d; ++i) {
    double zi = map_to_unit(spec.domain[i], x[i]);
    if (std::abs(zi) > 1.0 + 1e-9)
      throw std::invalid_argument("basis_vector: point outside domain");
    z[i] = std::clamp(zi, -1.0, 1.0);
  }
  Mat table(d, spec.max_degree + 1);
  for (int i = 0; i < d; ++i)
    for (int n = 0; n <= spec.max_degree; ++n)
      table(i, n) = legendre_orthonormal(n, z[i]);

  Vec out(spec.num_terms());
  for (int j = 0; j < spec.num_terms(); ++j) {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= table(i, spec.terms[j][i]);
    out[j] = v;
  }
  return out;
}

Mat design_matrix(const BasisSpec& spec, const Mat& X) {
  if (X.rows() == 0) throw std::invalid_argument("design_matrix: empty X");
  Mat out(X.rows(), spec.num_terms());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    out.row(i) = basis_vector(spec, X.row(i).transpose()).transpose();
  return out;
}

}  // namespace gpax
