#pragma once

// Finite checkers for flatness of R^n/K (Villamayor and Cohn criteria) and
// for Sahaev sequences of square matrices. Vectors are rows; K is a left
// submodule of R^n given by generating rows.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ncalg/parallel.hpp"
#include "ncalg/ring.hpp"

namespace ncalg {

class MatrixOverRing {
 public:
  MatrixOverRing(Ring ring, std::size_t rows, std::size_t cols);  // zero matrix
  /// Throws PreconditionError on ragged input or entries outside the ring.
  MatrixOverRing(Ring ring, std::vector<std::vector<Value>> rows, std::size_t cols_if_empty = 0);
  static MatrixOverRing identity(const Ring& ring, std::size_t n);

  const Ring& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const Value& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Value v) { entries_[i * cols_ + j] = std::move(v); }
  std::vector<Value> row(std::size_t i) const;
  bool is_zero() const;
  std::string to_string() const;

  /// Throws MismatchError on ring or dimension mismatch.
  friend MatrixOverRing operator*(const MatrixOverRing& u, const MatrixOverRing& v);
  friend bool operator==(const MatrixOverRing& u, const MatrixOverRing& v);

 private:
  Ring ring_;
  std::size_t rows_, cols_;
  std::vector<Value> entries_;
};

struct Presentation {
  Ring ring;
  std::size_t n = 1;
  MatrixOverRing gens;  // l x n, rows generate K

  Presentation(Ring ring, std::size_t n, MatrixOverRing gens);  // validates gens.cols == n
};

/// All elements of K = R^l * gens for a finite ring, sorted. Throws
/// SizeGuardError beyond `limit`.
std::vector<std::vector<Value>> submodule_elements(const Presentation& p, std::uint64_t limit = 1u << 20);

struct Flat {
  MatrixOverRing e;  // rows in K, gens * e = gens
};
struct NotFlat {
  std::string witness;  // what was exhausted
  std::uint64_t searched = 0;
};
struct Inconclusive {
  std::uint64_t searched = 0;
};
using VillamayorResult = std::variant<Flat, NotFlat, Inconclusive>;

/// Searches n x n matrices e with rows in K and gens * e = gens. Over a
/// finite ring the rows range over K; over an infinite ring e = c * gens with
/// the entries of c drawn from growing pools of small elements. The result
/// is the first solution in a fixed enumeration order, independent of the
/// execution mode.
VillamayorResult villamayor_check(const Presentation& p, std::uint64_t budget = 1000000,
                                  Execution exec = Execution::Parallel);

struct Holds {};
struct Violated {
  MatrixOverRing witness;  // in y F^m and in K^l, not in y K^m
};
using CohnResult = std::variant<Holds, Violated>;

/// (y F^m) cap K^l is contained in y K^m, for y an l x m matrix and F = R^n.
/// Finite rings only; throws SizeGuardError when |R|^{mn} + |K|^m exceeds the guard.
CohnResult cohn_flat_quotient_check(const Presentation& p, const MatrixOverRing& y, std::uint64_t guard = 1000000);

/// Runs the Cohn check over every y with l, m <= max_dim, stopping at the
/// first violation; y matrices whose check would exceed the guard are skipped
/// and counted.
struct CohnSweep {
  std::optional<std::pair<MatrixOverRing, MatrixOverRing>> violation;  // (y, witness)
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
};
CohnSweep cohn_sweep(const Presentation& p, std::size_t max_dim = 1, std::uint64_t guard = 1000000);

struct ValidPrefix {
  std::size_t pairs = 0;
  std::string note;
};
struct SahaevViolation {
  std::size_t index = 0;  // pair (y_index, y_index+1)
  std::string condition;  // "y_k y_{k+1} = y_k" or "y_{k+1} y_k != y_{k+1}"
};
using SahaevResult = std::variant<ValidPrefix, SahaevViolation>;

/// Checks y_k y_{k+1} = y_k and y_{k+1} y_k != y_{k+1} for consecutive pairs.
/// Throws PreconditionError/MismatchError on non-square or mixed input.
SahaevResult sahaev_check(const std::vector<MatrixOverRing>& seq);
/// The 1 x 1 chain y_k = (1,...,1,0,...,0) with k ones over prod:q^k, k = 0..copies.
std::vector<MatrixOverRing> sahaev_product_chain(std::size_t copies);

}  // namespace ncalg
