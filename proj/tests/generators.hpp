#pragma once

// Hand-rolled random generators shared by the property tests.

#include <random>
#include <string>

#include "ncalg/ncseries.hpp"

namespace gen {

inline const char* const kRingSpecs[] = {"z", "zmod:4", "zmod:12", "q", "prod:q^3", "idem:4", "sqzero:3", "monsub", "qxy"};

inline ncalg::Word random_word(std::mt19937_64& rng, const ncalg::Alphabet& alphabet, std::size_t max_len) {
  std::string w(std::uniform_int_distribution<std::size_t>(0, max_len)(rng), ' ');
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (auto& c : w) c = alphabet.letters()[pick(rng)];
  return ncalg::Word(w);
}

// Sparse series with up to `terms` random words; constant term forced when
// `unit_constant` is set.
inline ncalg::NcSeries random_series(std::mt19937_64& rng, const ncalg::Ring& ring, std::size_t degree,
                                     int terms = 5, const ncalg::Alphabet& alphabet = ncalg::Alphabet(),
                                     bool unit_constant = false) {
  ncalg::NcSeries::Coeffs c;
  const int n = std::uniform_int_distribution<int>(0, terms)(rng);
  for (int i = 0; i < n; ++i) c[random_word(rng, alphabet, degree)] = ring.random(rng, 2);
  if (unit_constant) c[ncalg::Word{}] = ring.one();
  return ncalg::NcSeries(ring, alphabet, degree, std::move(c));
}

}  // namespace gen

#include "ncalg/freegroup.hpp"

namespace gen {

inline ncalg::GroupWord random_group_word(std::mt19937_64& rng, std::size_t max_len) {
  const std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  std::vector<ncalg::Syllable> syl;
  for (std::size_t i = 0; i < len; ++i)
    syl.push_back({static_cast<std::uint32_t>(std::uniform_int_distribution<int>(0, 1)(rng)),
                   std::uniform_int_distribution<int>(0, 1)(rng) ? 1L : -1L});
  return ncalg::GroupWord(syl);
}

inline ncalg::GroupRingElement random_group_ring(std::mt19937_64& rng, const ncalg::Ring& ring, std::size_t max_len,
                                                 int terms = 4) {
  ncalg::GroupRingElement::Terms t;
  const int n = std::uniform_int_distribution<int>(0, terms)(rng);
  for (int i = 0; i < n; ++i) t[random_group_word(rng, max_len)] = ring.random(rng, 2);
  return ncalg::GroupRingElement(ring, std::move(t));
}

}  // namespace gen

#include "ncalg/coproduct.hpp"

namespace gen {

using namespace ncalg;

// A random element of the augmentation part of the given subring.
inline NcSeries random_slot(std::mt19937_64& rng, const CoproductContext& ctx, char letter) {
  const SubringSpec& spec = ctx.spec_for(letter);
  const Ring& r = ctx.ring;
  std::uniform_int_distribution<int> n_terms(1, 3);
  if (spec.kind == SubringKind::FullSeries) {
    NcSeries s = gen::random_series(rng, r, ctx.degree, 3, spec.alphabet());
    return s - NcSeries::constant(r, spec.alphabet(), ctx.degree, s.constant_term());
  }
  std::map<long, Value> c;
  const long lo = spec.kind == SubringKind::PolynomialOnly ? 0 : -2;
  for (int i = n_terms(rng); i > 0; --i) {
    const long m = std::uniform_int_distribution<long>(lo, 3)(rng);
    Value v = r.random(rng, 2);
    if (m < 0 && spec.kind == SubringKind::IdealAugmented) v = r.mul(v, spec.ideal.front());
    c[m] = r.add(c.count(m) ? c[m] : r.zero(), v);
  }
  NcSeries s = spec.from_laurent(c, r, ctx.degree);
  return s - NcSeries::constant(r, spec.alphabet(), ctx.degree, s.constant_term());
}

inline CoproductElement random_pure(std::mt19937_64& rng, const CoproductContext& ctx, const AlternatingType& type,
                             int tensors = 2) {
  CoproductElement u(ctx);
  for (int k = 0; k < tensors; ++k) {
    Tensor t;
    for (char l : type.pattern()) t.push_back(random_slot(rng, ctx, l));
    bool zero = false;
    for (const auto& s : t) zero = zero || s.is_zero();
    if (!zero) u = u + CoproductElement::tensor(ctx, t);
  }
  return u;
}

inline AlternatingType random_type(std::mt19937_64& rng, std::size_t max_len) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_len)(rng);
  char c = std::uniform_int_distribution<int>(0, 1)(rng) ? 'a' : 'b';
  std::string p;
  for (std::size_t i = 0; i < n; ++i, c = c == 'a' ? 'b' : 'a') p += c;
  return AlternatingType(p);
}

inline CoproductElement random_element(std::mt19937_64& rng, const CoproductContext& ctx, std::size_t max_len = 3) {
  CoproductElement u = CoproductElement::scalar(ctx, ctx.ring.random(rng, 2));
  for (int k = std::uniform_int_distribution<int>(0, 3)(rng); k > 0; --k)
    u = u + random_pure(rng, ctx, random_type(rng, max_len), 1);
  return u;
}

inline std::vector<CoproductContext> all_contexts(std::size_t d) {
  const Ring z9 = Ring::integers_mod(9);
  return {
      CoproductContext{Ring::integers(), d},
      CoproductContext{Ring::parse("monsub"), d},
      CoproductContext{Ring::parse("idem:3"), d},
      CoproductContext{Ring::integers(), d, SubringSpec::laurent('a'), SubringSpec::laurent('b')},
      CoproductContext{Ring::integers(), d, SubringSpec::polynomial('a'), SubringSpec::laurent('b')},
      CoproductContext{z9, d, SubringSpec::ideal_augmented('a', {z9.from_int(3)}),
                       SubringSpec::ideal_augmented('b', {z9.from_int(3)})},
  };
}

}  // namespace gen
