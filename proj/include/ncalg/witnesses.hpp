#pragma once

// Concrete elements in the kernels of multiplication maps, each with a check
// that the element multiplies out to zero and a certificate that it is not
// zero in the tensor product.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ncalg/coproduct.hpp"
#include "ncalg/ring.hpp"

namespace ncalg {

struct WitnessReport {
  std::string name;
  bool zero_image_verified = false;
  bool nonzero_verified = false;
  std::string nonzero_certificate;
  std::vector<std::size_t> window;
  std::vector<std::string> transcript;

  bool passed() const { return zero_image_verified && nonzero_verified; }
};

using TensorFactor = std::variant<Value, FamilyExpr>;

struct TensorSummand {
  Value coeff;
  TensorFactor left;
  TensorFactor right;
};

/// sum coeff * (left (x) right) in I (x)_R J, all over one ring.
struct TensorExpression {
  Ring ring;
  std::vector<Value> ideal_i;  // generators of I; empty means all of R
  std::vector<Value> ideal_j;
  std::vector<TensorSummand> summands;

  /// Throws PreconditionError when a ring-element factor is outside its ideal
  /// or the factor kinds are mixed.
  void validate() const;
};

/// Image in IJ of an expression with ring-element factors.
Value multiply_out(const TensorExpression& t);
/// Image under beta_2 of an expression with family factors.
FamilyExpr multiply_out_families(const TensorExpression& t);

enum class Wd2Variant { Zp2, QXY };

/// Residue image of an expression in (I/mI) (x) (J/mJ) as a vector over the
/// residue field: Z/p (one coordinate) or Q^4 in the basis
/// x(x)x, x(x)y, y(x)x, y(x)y.
std::vector<Rational> wd2_residue_image(Wd2Variant variant, const TensorExpression& t);
/// The kernel element: p (x) p over Z/p^2, or x(x)y - y(x)x over Q[x,y].
TensorExpression wd2_expression(Wd2Variant variant, std::uint64_t p = 2);
/// A random expression equal to `t` in I (x)_R J, obtained by splitting
/// summands, moving ring elements across the tensor sign and adding balanced
/// pairs.
TensorExpression wd2_random_rewrite(const TensorExpression& t, std::mt19937_64& rng);

WitnessReport witness_wd2(Wd2Variant variant, std::uint64_t p = 2, std::size_t degree = 6);

/// A candidate for m_1 = sum v_k r_k: the generators r_k, over idem:window.
struct IdempotentCandidate {
  std::vector<Value> generators;
};
struct IdempotentRefutation {
  std::size_t fresh_index;  // e_j with j outside the window, in the even class
  bool refuted;             // e_j not in (r_1, ..., r_l)
};
/// Throws PreconditionError when window < 2.
IdempotentRefutation refute_idempotent_candidate(std::size_t window, const IdempotentCandidate& c);
IdempotentCandidate random_idempotent_candidate(std::size_t window, std::mt19937_64& rng);
WitnessReport witness_idempotent_mu(std::size_t window = 6, std::size_t random_candidates = 500,
                                    std::uint64_t seed = 1);

/// Element of R (x)_Q R for R = sqzero:W, in the basis (1, x_0, ..., x_{W-1})^{(x)2};
/// index 0 is 1 and index k+1 is x_k.
using SqTensor = std::map<std::pair<std::size_t, std::size_t>, Rational>;
/// Element of P = prod over W x W of R (x)_Q R (sparse).
using PElement = std::map<std::pair<std::size_t, std::size_t>, SqTensor>;

/// q = sum_{x0 in X0} x0 * left[x0] + sum_{y0 in Y0} right[y0] * y0.
struct Gmb2Candidate {
  std::vector<std::size_t> x0;
  std::vector<std::size_t> y0;
  std::vector<PElement> left;   // one per x0
  std::vector<PElement> right;  // one per y0
};

struct Gmb2Coordinate {
  std::size_t x;
  std::size_t y;
  Rational c_q;  // coefficient of x (x) y in q_{x,y}
  Rational c_p;  // same for the target p
};
struct RefutationFails {
  std::string reason;
};

/// q as an element of P.
PElement gmb2_candidate_value(std::size_t window, const Gmb2Candidate& c);
/// Finds (x, y) with x outside X0, y outside Y0 where q and p differ. Throws
/// PreconditionError when no such coordinate exists or indices leave the window.
std::variant<Gmb2Coordinate, RefutationFails> witness_gmb2(std::size_t window, const Gmb2Candidate& c);
/// Random candidate with |X0|, |Y0| < window; with probability 1/2 the slot
/// matrices are chosen so that q agrees with p on the rows X0 and columns Y0.
Gmb2Candidate random_gmb2_candidate(std::size_t window, std::mt19937_64& rng);
WitnessReport witness_gmb2_report(std::size_t window = 4, std::size_t random_candidates = 500,
                                  std::uint64_t seed = 1);

/// The quotient monsub -> monsub / (x^{2i} y, x^{2i} y^2) = sqzero:window that sends
/// x^{2i+1} y to the generator x_i. Formula families with y-exponent 1 map to
/// basis or zero families; y-exponent >= 2 maps to zero.
FamilyExpr quotient_family_to_sqzero(const FamilyExpr& f, std::size_t window);
WitnessReport witness_beta2_domain(std::size_t window = 4, std::size_t random_candidates = 500,
                                   std::uint64_t seed = 1);

/// Names accepted by run_witness: wd2-zp2, wd2-qxy, mu-idempotent, gmb2, beta2-domain.
const std::vector<std::string>& witness_names();
/// window = 0 picks the default. Throws PreconditionError for an unknown name.
WitnessReport run_witness(const std::string& name, std::size_t window = 0);

}  // namespace ncalg
