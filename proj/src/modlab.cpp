#include "ncalg/modlab.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <set>

#include "ncalg/errors.hpp"

namespace ncalg {

// ---- matrices -----------------------------------------------------------------------

MatrixOverRing::MatrixOverRing(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), entries_(rows * cols, ring_.zero()) {}

MatrixOverRing::MatrixOverRing(Ring ring, std::vector<std::vector<Value>> rows, std::size_t cols_if_empty)
    : ring_(std::move(ring)), rows_(rows.size()), cols_(rows.empty() ? cols_if_empty : rows.front().size()) {
  entries_.reserve(rows_ * cols_);
  for (auto& r : rows) {
    if (r.size() != cols_) throw PreconditionError("ragged matrix rows");
    for (auto& v : r) {
      if (!ring_.is_valid(v)) throw PreconditionError("matrix entry is not in " + ring_.name());
      entries_.push_back(std::move(v));
    }
  }
}

MatrixOverRing MatrixOverRing::identity(const Ring& ring, std::size_t n) {
  MatrixOverRing m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, ring.one());
  return m;
}

std::vector<Value> MatrixOverRing::row(std::size_t i) const {
  return std::vector<Value>(entries_.begin() + i * cols_, entries_.begin() + (i + 1) * cols_);
}

bool MatrixOverRing::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [&](const Value& v) { return ring_.is_zero(v); });
}

std::string MatrixOverRing::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + ring_.format(at(i, j));
    s += "]";
  }
  return s + "]";
}

MatrixOverRing operator*(const MatrixOverRing& u, const MatrixOverRing& v) {
  if (!(u.ring_ == v.ring_)) throw MismatchError("matrices over different rings");
  if (u.cols_ != v.rows_)
    throw MismatchError("cannot multiply " + std::to_string(u.rows_) + "x" + std::to_string(u.cols_) + " by " +
                        std::to_string(v.rows_) + "x" + std::to_string(v.cols_));
  const Ring& r = u.ring_;
  MatrixOverRing out(r, u.rows_, v.cols_);
  for (std::size_t i = 0; i < u.rows_; ++i) {
    for (std::size_t j = 0; j < v.cols_; ++j) {
      Value acc = r.zero();
      for (std::size_t k = 0; k < u.cols_; ++k) acc = r.add(acc, r.mul(u.at(i, k), v.at(k, j)));
      out.set(i, j, std::move(acc));
    }
  }
  return out;
}

bool operator==(const MatrixOverRing& u, const MatrixOverRing& v) {
  return u.ring_ == v.ring_ && u.rows_ == v.rows_ && u.cols_ == v.cols_ && u.entries_ == v.entries_;
}

Presentation::Presentation(Ring r, std::size_t n_, MatrixOverRing g) : ring(std::move(r)), n(n_), gens(std::move(g)) {
  if (gens.cols() != n) throw PreconditionError("generator rows must have length n");
  if (!(gens.ring() == ring)) throw MismatchError("generator matrix is over a different ring");
}

// ---- submodule enumeration ----------------------------------------------------------

namespace {

struct VecLess {
  const Ring* ring;
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](const Value& x, const Value& y) { return ring->value_less(x, y); });
  }
};
using VecSet = std::set<std::vector<Value>, VecLess>;

std::uint64_t sat_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

std::vector<Value> axpy(const Ring& r, const std::vector<Value>& acc, const Value& c, const std::vector<Value>& g) {
  std::vector<Value> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = r.add(acc[i], r.mul(c, g[i]));
  return out;
}

}  // namespace

std::vector<std::vector<Value>> submodule_elements(const Presentation& p, std::uint64_t limit) {
  const Ring& r = p.ring;
  const auto elems = r.elements(limit);
  VecSet span(VecLess{&r});
  span.insert(std::vector<Value>(p.n, r.zero()));
  for (std::size_t k = 0; k < p.gens.rows(); ++k) {
    const auto g = p.gens.row(k);
    VecSet next(VecLess{&r});
    for (const auto& s : span) {
      for (const auto& c : elems) {
        next.insert(axpy(r, s, c, g));
        if (next.size() > limit) throw SizeGuardError("submodule has more than " + std::to_string(limit) + " elements");
      }
    }
    span = std::move(next);
  }
  return {span.begin(), span.end()};
}

// ---- Villamayor search ----------------------------------------------------------------

namespace {

struct SearchOutcome {
  std::optional<std::uint64_t> found;
  std::uint64_t searched = 0;
};

// e has row i equal to rows[digit_i(t)], digit 0 most significant.
MatrixOverRing decode(const Ring& r, const std::vector<std::vector<Value>>& rows, std::size_t n, std::uint64_t t) {
  MatrixOverRing e(r, n, n);
  for (std::size_t i = n; i-- > 0;) {
    const auto& row = rows[t % rows.size()];
    t /= rows.size();
    for (std::size_t j = 0; j < n; ++j) e.set(i, j, row[j]);
  }
  return e;
}

bool fixes_gens(const MatrixOverRing& x, const MatrixOverRing& e) {
  const Ring& r = x.ring();
  for (std::size_t a = 0; a < x.rows(); ++a) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      Value acc = r.zero();
      for (std::size_t i = 0; i < x.cols(); ++i) acc = r.add(acc, r.mul(x.at(a, i), e.at(i, j)));
      if (!(acc == x.at(a, j))) return false;
    }
  }
  return true;
}

SearchOutcome search(const MatrixOverRing& x, const std::vector<std::vector<Value>>& rows, std::size_t n,
                     std::uint64_t limit, Execution exec) {
  const Ring& r = x.ring();
  if (exec == Execution::Serial) {
    for (std::uint64_t t = 0; t < limit; ++t) {
      if (fixes_gens(x, decode(r, rows, n, t))) return {t, t + 1};
    }
    return {std::nullopt, limit};
  }
  std::atomic<std::uint64_t> best{limit};
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(limit); ++s) {
    const auto t = static_cast<std::uint64_t>(s);
    if (t >= best.load(std::memory_order_relaxed)) continue;
    if (fixes_gens(x, decode(r, rows, n, t))) {
      std::uint64_t cur = best.load();
      while (t < cur && !best.compare_exchange_weak(cur, t)) {
      }
    }
  }
  const std::uint64_t b = best.load();
  if (b == limit) return {std::nullopt, limit};
  return {b, b + 1};
}

}  // namespace

VillamayorResult villamayor_check(const Presentation& p, std::uint64_t budget, Execution exec) {
  const Ring& r = p.ring;
  const std::size_t n = p.n;
  if (n == 0) return Flat{MatrixOverRing(r, 0, 0)};

  if (r.cardinality()) {
    const auto rows = submodule_elements(p, std::max<std::uint64_t>(budget, 1));
    const std::uint64_t total = sat_pow(rows.size(), n, budget);
    const std::uint64_t limit = std::min(total, budget);
    const auto res = search(p.gens, rows, n, limit, exec);
    if (res.found) return Flat{decode(r, rows, n, *res.found)};
    if (total > budget) return Inconclusive{res.searched};
    return NotFlat{"no e with rows in K (" + std::to_string(rows.size()) + " elements) fixes the generators",
                   res.searched};
  }

  // Infinite ring: e = c * gens with c drawn from growing pools.
  std::uint64_t used = 0;
  std::size_t last_pool = 0;
  for (int h = 1; used < budget; ++h) {
    const auto pool = r.small_elements(h);
    if (pool.size() == last_pool) break;
    last_pool = pool.size();
    VecSet rowset(VecLess{&r});
    rowset.insert(std::vector<Value>(n, r.zero()));
    const std::uint64_t combos = sat_pow(pool.size(), p.gens.rows(), budget);
    if (combos > budget - used) break;
    for (std::uint64_t t = 0; t < combos; ++t) {
      std::vector<Value> acc(n, r.zero());
      std::uint64_t u = t;
      for (std::size_t k = 0; k < p.gens.rows(); ++k) {
        acc = axpy(r, acc, pool[u % pool.size()], p.gens.row(k));
        u /= pool.size();
      }
      rowset.insert(std::move(acc));
    }
    used += combos;
    const std::vector<std::vector<Value>> rows(rowset.begin(), rowset.end());
    const std::uint64_t total = sat_pow(rows.size(), n, budget);
    const std::uint64_t limit = std::min(total, budget - std::min(used, budget));
    const auto res = search(p.gens, rows, n, limit, exec);
    used += res.searched;
    if (res.found) return Flat{decode(r, rows, n, *res.found)};
  }
  return Inconclusive{used};
}

// ---- Cohn criterion -----------------------------------------------------------------

namespace {

std::vector<Value> flatten(const MatrixOverRing& m) {
  std::vector<Value> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

// Matrix whose rows are picked from `pool` by the digits of t.
MatrixOverRing matrix_from_rows(const Ring& r, const std::vector<std::vector<Value>>& pool, std::size_t rows,
                                std::size_t cols, std::uint64_t t) {
  MatrixOverRing m(r, rows, cols);
  for (std::size_t i = rows; i-- > 0;) {
    const auto& row = pool[t % pool.size()];
    t /= pool.size();
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, row[j]);
  }
  return m;
}

}  // namespace

CohnResult cohn_flat_quotient_check(const Presentation& p, const MatrixOverRing& y, std::uint64_t guard) {
  const Ring& r = p.ring;
  if (!(y.ring() == r)) throw MismatchError("y is over a different ring");
  const auto card = r.cardinality();
  if (!card) throw UnsupportedError("the Cohn check enumerates a finite ring");
  const std::size_t l = y.rows(), m = y.cols(), n = p.n;
  const auto k_elems = submodule_elements(p, guard);
  const std::uint64_t f_count = sat_pow(*card, m * n, guard);
  const std::uint64_t k_count = sat_pow(k_elems.size(), m, guard);
  if (f_count + k_count > guard)
    throw SizeGuardError("Cohn check needs " + std::to_string(f_count) + " + " + std::to_string(k_count) +
                         " matrices; use a smaller ring, n, l or m");

  const VecSet k_set(k_elems.begin(), k_elems.end(), VecLess{&r});
  VecSet yk(VecLess{&r});
  for (std::uint64_t t = 0; t < k_count; ++t) yk.insert(flatten(y * matrix_from_rows(r, k_elems, m, n, t)));

  // F^m ranges over all m x n matrices: rows from R^n.
  std::vector<std::vector<Value>> f_rows;
  {
    const auto elems = r.elements(guard);
    const std::uint64_t cnt = sat_pow(elems.size(), n, guard);
    for (std::uint64_t t = 0; t < cnt; ++t) {
      std::vector<Value> row(n);
      std::uint64_t u = t;
      for (std::size_t j = n; j-- > 0;) {
        row[j] = elems[u % elems.size()];
        u /= elems.size();
      }
      f_rows.push_back(std::move(row));
    }
  }
  for (std::uint64_t t = 0; t < f_count; ++t) {
    const MatrixOverRing z = y * matrix_from_rows(r, f_rows, m, n, t);
    bool in_k = true;
    for (std::size_t i = 0; i < l && in_k; ++i) in_k = k_set.count(z.row(i)) > 0;
    if (in_k && !yk.count(flatten(z))) return Violated{z};
  }
  return Holds{};
}

CohnSweep cohn_sweep(const Presentation& p, std::size_t max_dim, std::uint64_t guard) {
  const Ring& r = p.ring;
  const auto elems = r.elements(guard);
  CohnSweep out;
  for (std::size_t l = 1; l <= max_dim; ++l) {
    for (std::size_t m = 1; m <= max_dim; ++m) {
      const std::uint64_t count = sat_pow(elems.size(), l * m, guard);
      if (count > guard) {
        ++out.skipped;
        continue;
      }
      for (std::uint64_t t = 0; t < count; ++t) {
        MatrixOverRing y(r, l, m);
        std::uint64_t u = t;
        for (std::size_t idx = l * m; idx-- > 0;) {
          y.set(idx / m, idx % m, elems[u % elems.size()]);
          u /= elems.size();
        }
        try {
          const auto res = cohn_flat_quotient_check(p, y, guard);
          ++out.checked;
          if (const auto* v = std::get_if<Violated>(&res)) {
            out.violation.emplace(y, v->witness);
            return out;
          }
        } catch (const SizeGuardError&) {
          ++out.skipped;
        }
      }
    }
  }
  return out;
}

// ---- Sahaev sequences ---------------------------------------------------------------

SahaevResult sahaev_check(const std::vector<MatrixOverRing>& seq) {
  for (const auto& y : seq) {
    if (y.rows() != y.cols()) throw PreconditionError("Sahaev sequences consist of square matrices");
    if (y.rows() != seq.front().rows()) throw MismatchError("matrices of different sizes");
    if (!(y.ring() == seq.front().ring())) throw MismatchError("matrices over different rings");
  }
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    if (!(seq[k] * seq[k + 1] == seq[k])) return SahaevViolation{k, "y_k y_{k+1} = y_k"};
    if (seq[k + 1] * seq[k] == seq[k + 1]) return SahaevViolation{k, "y_{k+1} y_k != y_{k+1}"};
  }
  const std::size_t pairs = seq.empty() ? 0 : seq.size() - 1;
  return ValidPrefix{pairs, "finite prefix of " + std::to_string(pairs) +
                                " pairs; the condition concerns infinite sequences, so this certifies nothing about the ring"};
}

std::vector<MatrixOverRing> sahaev_product_chain(std::size_t copies) {
  if (copies == 0) throw PreconditionError("need at least one factor");
  const Ring r(RingSpec::product(RingSpec::rationals(), copies));
  const Ring q = Ring::rationals();
  std::vector<MatrixOverRing> seq;
  for (std::size_t k = 0; k <= copies; ++k) {
    std::vector<Value> coords(copies, q.zero());
    for (std::size_t i = 0; i < k; ++i) coords[i] = q.one();
    seq.emplace_back(r, std::vector<std::vector<Value>>{{Value{Value::Rep(coords)}}});
  }
  return seq;
}

}  // namespace ncalg
