#pragma once

// k-constraints on functions F_q^n -> F_q: points plus coefficient rows, their
// action on functions and monomials, affine images, and the convolution /
// union / padding combinators.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"
#include "rmlt/linalg.hpp"
#include "rmlt/parallel.hpp"
#include "rmlt/poly.hpp"

namespace rmlt {

/// q^n, throwing EnumerationBudget when it exceeds limit.
inline std::uint64_t checked_power(std::uint64_t q, std::uint64_t n, std::uint64_t limit, const char* what) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (out > limit / q) throw Error(ErrorCode::EnumerationBudget, std::string(what) + " exceeds budget " + std::to_string(limit));
    out *= q;
  }
  if (out > limit) throw Error(ErrorCode::EnumerationBudget, std::string(what) + " exceeds budget " + std::to_string(limit));
  return out;
}

/// Mixed-radix index of a point: sum_i c_i q^i.
inline std::size_t point_index(std::span<const Element> point, unsigned q) {
  std::size_t idx = 0;
  for (std::size_t i = point.size(); i-- > 0;) idx = idx * q + point[i];
  return idx;
}

inline void index_to_point(std::size_t idx, unsigned q, std::span<Element> out) {
  for (auto& c : out) {
    c = static_cast<Element>(idx % q);
    idx /= q;
  }
}

class Constraint {
 public:
  /// points holds k rows of n codes back to back; each row of `rows` has k
  /// entries and must be nonzero.
  Constraint(Field field, std::size_t n, std::size_t k, std::vector<Element> points,
             std::vector<std::vector<Element>> rows)
      : field_(std::move(field)), n_(n), k_(k), points_(std::move(points)), rows_(std::move(rows)) {
    if (points_.size() != n_ * k_) throw Error(ErrorCode::InvalidConstraint, "point storage does not match k*n");
    if (rows_.empty()) throw Error(ErrorCode::InvalidConstraint, "constraint needs at least one row");
    for (Element c : points_)
      if (!field_.valid(c)) throw Error(ErrorCode::InvalidConstraint, "point coordinate outside the field");
    for (const auto& row : rows_) {
      if (row.size() != k_) throw Error(ErrorCode::InvalidConstraint, "row length differs from k");
      bool nonzero = false;
      for (Element c : row) {
        if (!field_.valid(c)) throw Error(ErrorCode::InvalidConstraint, "coefficient outside the field");
        nonzero |= (c != 0);
      }
      if (!nonzero) throw Error(ErrorCode::InvalidConstraint, "all-zero row");
    }
  }

  const Field& field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t r() const noexcept { return rows_.size(); }

  std::span<const Element> point(std::size_t j) const { return {points_.data() + j * n_, n_}; }
  const std::vector<Element>& points() const noexcept { return points_; }
  std::span<const Element> row(std::size_t i) const { return rows_[i]; }
  const std::vector<std::vector<Element>>& rows() const noexcept { return rows_; }

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.k_ == b.k_ && a.points_ == b.points_ && a.rows_ == b.rows_;
  }

 private:
  Field field_;
  std::size_t n_;
  std::size_t k_;
  std::vector<Element> points_;
  std::vector<std::vector<Element>> rows_;
};

/// Dense table of f : F_q^n -> F_q indexed by point_index.
class FunctionTable {
 public:
  FunctionTable(Field field, std::size_t n, std::vector<Element> values)
      : field_(std::move(field)), n_(n), values_(std::move(values)) {
    std::size_t expect = 1;
    for (std::size_t i = 0; i < n_; ++i) expect *= field_.q();
    if (values_.size() != expect) throw Error(ErrorCode::DomainMismatch, "table length must be q^n");
    for (Element v : values_)
      if (!field_.valid(v)) throw Error(ErrorCode::DomainMismatch, "table value outside the field");
  }

  static FunctionTable zero(Field field, std::size_t n) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < n; ++i) size *= field.q();
    return FunctionTable(std::move(field), n, std::vector<Element>(size, 0));
  }
  static FunctionTable from_poly(const MultiPoly& poly, unsigned workers = 1) {
    return FunctionTable(poly.field(), poly.n(), evaluate_grid(poly, workers));
  }
  static FunctionTable monomial(const Field& field, const DegreeVector& dv) {
    return from_poly(MultiPoly::monomial(field, dv));
  }

  const Field& field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Element>& values() const noexcept { return values_; }
  Element at(std::size_t idx) const { return values_[idx]; }
  Element operator()(std::span<const Element> point) const { return values_[point_index(point, field_.q())]; }

  FunctionTable operator+(const FunctionTable& o) const {
    check(o);
    std::vector<Element> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = field_.add(values_[i], o.values_[i]);
    return FunctionTable(field_, n_, std::move(out));
  }
  FunctionTable scaled(Element c) const {
    std::vector<Element> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = field_.mul(values_[i], c);
    return FunctionTable(field_, n_, std::move(out));
  }

  friend bool operator==(const FunctionTable& a, const FunctionTable& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.values_ == b.values_;
  }

 private:
  void check(const FunctionTable& o) const {
    if (field_ != o.field_ || n_ != o.n_) throw Error(ErrorCode::DomainMismatch, "tables over different domains");
  }

  Field field_;
  std::size_t n_;
  std::vector<Element> values_;
};

/// x -> A x + shift; A is any n x n matrix (row-major), singular allowed.
struct AffineTransform {
  std::size_t n = 0;
  std::vector<Element> matrix;
  std::vector<Element> shift;

  static AffineTransform identity(std::size_t n) {
    AffineTransform t{n, std::vector<Element>(n * n, 0), std::vector<Element>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) t.matrix[i * n + i] = 1;
    return t;
  }

  /// Number of affine maps of F_q^n, or EnumerationBudget past limit.
  static std::uint64_t count(unsigned q, std::size_t n, std::uint64_t limit) {
    return checked_power(q, n * n + n, limit, "transform count");
  }

  /// The idx-th map in enumeration order: matrix entries then shift, each a
  /// little-endian base-q digit of idx.
  static AffineTransform from_index(std::uint64_t idx, unsigned q, std::size_t n) {
    AffineTransform t{n, std::vector<Element>(n * n), std::vector<Element>(n)};
    for (auto& c : t.matrix) {
      c = static_cast<Element>(idx % q);
      idx /= q;
    }
    for (auto& c : t.shift) {
      c = static_cast<Element>(idx % q);
      idx /= q;
    }
    return t;
  }

  void apply(const Field& f, std::span<const Element> x, std::span<Element> out) const {
    for (std::size_t i = 0; i < n; ++i) {
      Element acc = shift[i];
      for (std::size_t j = 0; j < n; ++j) acc = f.add(acc, f.mul(matrix[i * n + j], x[j]));
      out[i] = acc;
    }
  }

  /// outer o inner: A = A_outer A_inner, shift = A_outer shift_inner + shift_outer.
  static AffineTransform compose(const Field& f, const AffineTransform& outer, const AffineTransform& inner) {
    const std::size_t n = outer.n;
    AffineTransform t{n, std::vector<Element>(n * n, 0), std::vector<Element>(n, 0)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Element acc = 0;
        for (std::size_t l = 0; l < n; ++l) acc = f.add(acc, f.mul(outer.matrix[i * n + l], inner.matrix[l * n + j]));
        t.matrix[i * n + j] = acc;
      }
    outer.apply(f, inner.shift, t.shift);
    return t;
  }

  friend bool operator==(const AffineTransform&, const AffineTransform&) = default;
};

/// Per-row sums sum_j lambda_{i,j} f(alpha_j).
inline std::vector<Element> row_sums(const Constraint& c, const FunctionTable& f) {
  if (c.field() != f.field() || c.n() != f.n())
    throw Error(ErrorCode::DomainMismatch, "constraint and function live on different domains");
  const Field& fld = c.field();
  std::vector<Element> values(c.k());
  for (std::size_t j = 0; j < c.k(); ++j) values[j] = f(c.point(j));
  std::vector<Element> out(c.r(), 0);
  for (std::size_t i = 0; i < c.r(); ++i) {
    const auto row = c.row(i);
    Element acc = 0;
    for (std::size_t j = 0; j < c.k(); ++j)
      if (row[j] != 0) acc = fld.add(acc, fld.mul(row[j], values[j]));
    out[i] = acc;
  }
  return out;
}

inline bool accepts_function(const Constraint& c, const FunctionTable& f) {
  for (Element s : row_sums(c, f))
    if (s != 0) return false;
  return true;
}

/// Per-row sums sum_j lambda_{i,j} alpha_j^dv (0^0 = 1).
inline std::vector<Element> monomial_row_sums(const Constraint& c, std::span<const unsigned> dv) {
  if (dv.size() != c.n()) throw Error(ErrorCode::DomainMismatch, "degree vector length differs from n");
  const Field& f = c.field();
  std::vector<Element> values(c.k());
  for (std::size_t j = 0; j < c.k(); ++j) {
    const auto pt = c.point(j);
    Element v = 1;
    for (std::size_t t = 0; t < dv.size() && v != 0; ++t) v = f.mul(v, f.pow(pt[t], dv[t]));
    values[j] = v;
  }
  std::vector<Element> out(c.r(), 0);
  for (std::size_t i = 0; i < c.r(); ++i) {
    const auto row = c.row(i);
    Element acc = 0;
    for (std::size_t j = 0; j < c.k(); ++j)
      if (row[j] != 0 && values[j] != 0) acc = f.add(acc, f.mul(row[j], values[j]));
    out[i] = acc;
  }
  return out;
}

inline bool accepts_monomial(const Constraint& c, std::span<const unsigned> dv) {
  for (Element s : monomial_row_sums(c, dv))
    if (s != 0) return false;
  return true;
}

/// T o C: every point mapped through T, rows unchanged.
inline Constraint apply_transform(const AffineTransform& t, const Constraint& c) {
  if (t.n != c.n()) throw Error(ErrorCode::DomainMismatch, "transform dimension differs from n");
  std::vector<Element> pts(c.points().size());
  for (std::size_t j = 0; j < c.k(); ++j)
    t.apply(c.field(), c.point(j), std::span<Element>(pts.data() + j * c.n(), c.n()));
  return Constraint(c.field(), c.n(), c.k(), std::move(pts), c.rows());
}

/// C1 (x) C2 on F_q^{n1+n2}: concatenated points and product coefficients,
/// both row-major in (j1, j2) and (i1, i2).
inline Constraint convolution(const Constraint& a, const Constraint& b) {
  if (a.field() != b.field()) throw Error(ErrorCode::FieldMismatch, "convolution over different fields");
  const Field& f = a.field();
  const std::size_t n = a.n() + b.n(), k = a.k() * b.k();
  std::vector<Element> pts;
  pts.reserve(n * k);
  for (std::size_t j1 = 0; j1 < a.k(); ++j1)
    for (std::size_t j2 = 0; j2 < b.k(); ++j2) {
      const auto p1 = a.point(j1), p2 = b.point(j2);
      pts.insert(pts.end(), p1.begin(), p1.end());
      pts.insert(pts.end(), p2.begin(), p2.end());
    }
  std::vector<std::vector<Element>> rows;
  for (std::size_t i1 = 0; i1 < a.r(); ++i1)
    for (std::size_t i2 = 0; i2 < b.r(); ++i2) {
      std::vector<Element> row(k);
      const auto r1 = a.row(i1), r2 = b.row(i2);
      for (std::size_t j1 = 0; j1 < a.k(); ++j1)
        for (std::size_t j2 = 0; j2 < b.k(); ++j2) row[j1 * b.k() + j2] = f.mul(r1[j1], r2[j2]);
      rows.push_back(std::move(row));
    }
  return Constraint(f, n, k, std::move(pts), std::move(rows));
}

/// C1 u C2: points concatenated (duplicates kept), rows zero-extended.
inline Constraint union_of(const Constraint& a, const Constraint& b) {
  if (a.field() != b.field() || a.n() != b.n()) throw Error(ErrorCode::DomainMismatch, "union over different domains");
  std::vector<Element> pts = a.points();
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  const std::size_t k = a.k() + b.k();
  std::vector<std::vector<Element>> rows;
  for (const auto& r : a.rows()) {
    std::vector<Element> row(r);
    row.resize(k, 0);
    rows.push_back(std::move(row));
  }
  for (const auto& r : b.rows()) {
    std::vector<Element> row(a.k(), 0);
    row.insert(row.end(), r.begin(), r.end());
    rows.push_back(std::move(row));
  }
  return Constraint(a.field(), a.n(), k, std::move(pts), std::move(rows));
}

/// Extends every point with coordinates equal to 1 up to arity n.
inline Constraint pad_arity(const Constraint& c, std::size_t n) {
  if (n < c.n()) throw Error(ErrorCode::ShrinkNotAllowed, "cannot pad to a smaller arity");
  std::vector<Element> pts;
  pts.reserve(n * c.k());
  for (std::size_t j = 0; j < c.k(); ++j) {
    const auto p = c.point(j);
    pts.insert(pts.end(), p.begin(), p.end());
    pts.insert(pts.end(), n - c.n(), Element{1});
  }
  return Constraint(c.field(), n, c.k(), std::move(pts), c.rows());
}

/// The 1-point constraint on F_q^0 with lambda = (1); neutral for convolution.
inline Constraint unit_constraint(const Field& f) {
  return Constraint(f, 0, 1, {}, {{Element{1}}});
}

/// Univariate (d+2)-constraint on the d+2 smallest codes accepting x^e for
/// e <= d and rejecting x^{d+1}; lambda spans the Vandermonde null space and
/// is scaled so its first nonzero entry is 1.
inline Constraint vandermonde_constraint(const Field& f, unsigned d) {
  if (f.q() < 2 || d > f.q() - 2) throw Error(ErrorCode::OutOfRange, "Vandermonde degree must lie in [0, q-2]");
  const std::size_t k = d + 2;
  std::vector<std::vector<Element>> system(d + 1, std::vector<Element>(k));
  for (unsigned l = 0; l <= d; ++l)
    for (std::size_t j = 0; j < k; ++j) system[l][j] = f.pow(static_cast<Element>(j), l);
  std::vector<Element> lambda = null_vector(f, std::move(system), k);
  const auto first = std::find_if(lambda.begin(), lambda.end(), [](Element x) { return x != 0; });
  const Element scale = f.inv(*first);
  for (auto& x : lambda) x = f.mul(x, scale);
  std::vector<Element> pts(k);
  for (std::size_t j = 0; j < k; ++j) pts[j] = static_cast<Element>(j);
  return Constraint(f, 1, k, std::move(pts), {std::move(lambda)});
}

/// Single-row constraint from a value table over F_q^m: points where the
/// table is nonzero in ascending index order, lambda_j = value.
inline Constraint from_table(const FunctionTable& table) {
  const Field& f = table.field();
  const std::size_t m = table.n();
  std::vector<Element> pts, lambda;
  std::vector<Element> pt(m);
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    const Element v = table.at(idx);
    if (v == 0) continue;
    index_to_point(idx, f.q(), pt);
    pts.insert(pts.end(), pt.begin(), pt.end());
    lambda.push_back(v);
  }
  if (lambda.empty()) throw Error(ErrorCode::ZeroFunction, "polynomial vanishes on the whole domain");
  const std::size_t k = lambda.size();
  return Constraint(f, m, k, std::move(pts), {std::move(lambda)});
}

inline Constraint from_polynomial(const MultiPoly& poly, unsigned workers = 1) {
  return from_table(FunctionTable::from_poly(poly, workers));
}

/// Dense moments G(e) = sum_x table(x) x^e for every e in {0..q-1}^n, indexed
/// like the table (exponent e_i as the i-th digit). Separable: one q x q
/// power matrix applied along each axis.
inline std::vector<Element> moment_transform(const FunctionTable& table) {
  const Field& f = table.field();
  const unsigned q = f.q();
  std::vector<Element> data = table.values();
  std::vector<Element> pw(std::size_t(q) * q);  // pw[e*q + beta] = beta^e
  for (unsigned e = 0; e < q; ++e)
    for (unsigned b = 0; b < q; ++b) pw[std::size_t(e) * q + b] = f.pow(static_cast<Element>(b), e);
  std::vector<Element> line(q), out(q);
  std::size_t stride = 1;
  for (std::size_t axis = 0; axis < table.n(); ++axis) {
    const std::size_t block = stride * q;
    for (std::size_t base = 0; base < data.size(); base += block)
      for (std::size_t off = 0; off < stride; ++off) {
        bool any = false;
        for (unsigned b = 0; b < q; ++b) {
          line[b] = data[base + off + b * stride];
          any |= line[b] != 0;
        }
        if (!any) continue;
        for (unsigned e = 0; e < q; ++e) {
          const Element* prow = pw.data() + std::size_t(e) * q;
          Element acc = 0;
          for (unsigned b = 0; b < q; ++b)
            if (line[b] != 0) acc = f.add(acc, f.mul(line[b], prow[b]));
          out[e] = acc;
        }
        for (unsigned e = 0; e < q; ++e) data[base + off + e * stride] = out[e];
      }
    stride = block;
  }
  return data;
}

/// Visits every degree vector dv in {0..q-1}^n with total degree <= max_total
/// in lexicographic order, passing the per-row sums sum_j lambda_{i,j}
/// alpha_j^dv. Points are aggregated by shared coordinate suffixes so the
/// cost scales with the number of distinct suffixes rather than k per
/// monomial. visit returns false to stop; the function then returns false.
template <typename Visit>
bool sweep_monomials(const Constraint& c, std::uint64_t max_total, Visit&& visit) {
  const Field& f = c.field();
  const unsigned q = f.q();
  const std::size_t n = c.n(), k = c.k(), r = c.r();
  // Level t holds the distinct suffixes (coords t..n-1). Level n is the empty suffix.
  std::vector<std::vector<std::uint32_t>> parent(n);
  std::vector<std::vector<Element>> coord(n);
  std::vector<std::size_t> level_size(n + 1);
  level_size[n] = 1;
  std::vector<std::uint32_t> id(k, 0);  // id of each point's suffix at the current level
  for (std::size_t t = n; t-- > 0;) {
    std::unordered_map<std::uint64_t, std::uint32_t> ids;
    ids.reserve(std::min<std::size_t>(k, level_size[t + 1] * q) * 2);
    for (std::size_t j = 0; j < k; ++j) {
      const Element ct = c.point(j)[t];
      const std::uint64_t key = std::uint64_t(id[j]) * q + ct;
      auto [it, inserted] = ids.emplace(key, static_cast<std::uint32_t>(ids.size()));
      if (inserted) {
        parent[t].push_back(id[j]);
        coord[t].push_back(ct);
      }
      id[j] = it->second;
    }
    level_size[t] = ids.size();
  }
  // weights[t] is r x level_size[t]
  std::vector<std::vector<Element>> weights(n + 1);
  for (std::size_t t = 0; t <= n; ++t) weights[t].assign(r * level_size[t], 0);
  for (std::size_t i = 0; i < r; ++i) {
    const auto row = c.row(i);
    for (std::size_t j = 0; j < k; ++j)
      if (row[j] != 0) {
        auto& w = weights[0][i * level_size[0] + id[j]];
        w = f.add(w, row[j]);
      }
  }
  std::vector<Element> pw(std::size_t(q) * q);  // pw[beta*q + e]
  for (unsigned b = 0; b < q; ++b)
    for (unsigned e = 0; e < q; ++e) pw[std::size_t(b) * q + e] = f.pow(static_cast<Element>(b), e);

  DegreeVector dv(n, 0);
  std::vector<Element> sums(r);
  auto rec = [&](auto&& self, std::size_t t, std::uint64_t used) -> bool {
    if (t == n) {
      for (std::size_t i = 0; i < r; ++i) sums[i] = weights[n][i];
      return visit(static_cast<const DegreeVector&>(dv), std::span<const Element>(sums));
    }
    const std::size_t here = level_size[t], next = level_size[t + 1];
    const std::uint64_t room = max_total - used;
    for (unsigned e = 0; e < q && e <= room; ++e) {
      auto& out = weights[t + 1];
      std::fill(out.begin(), out.end(), Element{0});
      for (std::size_t i = 0; i < r; ++i) {
        const Element* w = weights[t].data() + i * here;
        Element* o = out.data() + i * next;
        for (std::size_t u = 0; u < here; ++u) {
          if (w[u] == 0) continue;
          const Element pv = pw[std::size_t(coord[t][u]) * q + e];
          if (pv == 0) continue;
          o[parent[t][u]] = f.add(o[parent[t][u]], f.mul(w[u], pv));
        }
      }
      dv[t] = e;
      if (!self(self, t + 1, used + e)) return false;
    }
    dv[t] = 0;
    return true;
  };
  return rec(rec, 0, 0);
}

}  // namespace rmlt
