#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "ncalg/errors.hpp"
#include "ncalg/freegroup.hpp"

using namespace ncalg;

namespace {

GroupWord W(const char* s) { return parse_group_word(s); }
NcSeries S(const char* text, std::size_t d, const Ring& r = Ring::integers()) { return parse_series(text, r, d); }
GroupRingElement G(const char* s, const Ring& r = Ring::integers()) { return parse_group_ring_element(s, r); }

// Oracle: multiply generator images one letter at a time with the generic
// series product and inverse.
NcSeries magnus_oracle(const GroupWord& w, const Ring& r, std::size_t d) {
  NcSeries out = NcSeries::one(r, Alphabet(), d);
  for (const auto& s : w.syllables()) {
    const NcSeries g = S(s.gen == 0 ? "1+a" : "1+b", d, r);
    const NcSeries step = s.exp > 0 ? g : *series_invert(g);
    for (long i = 0; i < std::labs(s.exp); ++i) out = out * step;
  }
  return out;
}

}  // namespace

TEST_CASE("word_mul examples") {
  CHECK(word_mul(W("h"), W("H")).empty());
  CHECK(word_mul(W("h^2"), W("Hk")) == W("hk"));
  CHECK(word_mul(W("hk"), W("KH")).empty());
  CHECK(W("hkHK").to_string() == "hkHK");
  CHECK(W("h^-3k").to_string() == "h^-3k");
  CHECK(W("hhH").to_string() == "h");
  CHECK(W("1").empty());
  CHECK(W("1").to_string() == "1");
  CHECK(W("hkHK").letter_length() == 4);
  CHECK_THROWS_AS(W("hx"), ParseError);
  CHECK_THROWS_AS(W(""), ParseError);
}

TEST_CASE("reduced word counts") {
  std::size_t expected = 0;
  for (std::size_t len = 0; len <= 5; ++len) {
    std::size_t per = 1;
    if (len > 0) {
      per = 4;
      for (std::size_t i = 1; i < len; ++i) per *= 3;
    }
    expected += per;
    const auto words = enumerate_reduced_words(len);
    CHECK(words.size() == expected);
    for (const auto& w : words) CHECK(w.letter_length() <= len);
  }
}

TEST_CASE("group ring parsing and printing") {
  const auto f = G("2*hk - 3*H + 1");
  CHECK(f.to_string() == "1 - 3*H + 2*hk");
  CHECK(G(f.to_string().c_str()) == f);
  CHECK(G("h - h").is_zero());
  CHECK(G("2hk") == G("2*hk"));
  CHECK(Ring::integers().format(f.augmentation()) == "0");
  CHECK_THROWS_AS(G("2 +"), ParseError);
  CHECK_THROWS_AS(G("1/2 h"), ParseError);
}

TEST_CASE("magnus examples") {
  const Ring z = Ring::integers();
  CHECK(magnus(W("h"), z, 2) == S("1+a", 2));
  CHECK(magnus(W("H"), z, 3) == S("1 - a + a^2 - a^3", 3));
  CHECK(magnus(W("hkHK"), z, 2).to_string() == "1 + a*b - b*a");
  CHECK(magnus(W("hkHK"), z, 2) == magnus_oracle(W("hkHK"), z, 2));
  const auto f = G("2*hk - 3*H + 1");
  CHECK(magnus(f, 3).constant_term() == f.augmentation());
}

TEST_CASE("fox_strip examples") {
  auto s1 = fox_strip(S("1+a", 2));
  CHECK(Ring::integers().is_one(s1.eps));
  CHECK(s1.da == S("1", 1));
  CHECK(s1.db.is_zero());
  auto s2 = fox_strip(S("1 - a + a^2 - a^3", 3));
  CHECK(s2.da == S("-1 + a - a^2", 2));
  CHECK(s2.da == -magnus(W("H"), Ring::integers(), 2));
  CHECK(s2.db.is_zero());
  auto s3 = fox_strip(S("1 + a + b + ab", 2));
  CHECK(s3.da == S("1", 1));
  CHECK(s3.db == S("1 + a", 1));
  CHECK_THROWS_AS(fox_strip(S("1", 0)), PreconditionError);
}

TEST_CASE("fox_derivative examples") {
  CHECK(fox_derivative(G("h"), 0) == G("1"));
  CHECK(fox_derivative(G("H"), 0) == G("-H"));
  CHECK(fox_derivative(G("hk"), 1) == G("h"));
  CHECK(fox_derivative(G("hk"), 0) == G("1"));
  CHECK(fox_derivative(G("k"), 0).is_zero());
  CHECK(fox_derivative(G("h^3"), 0) == G("1 + h + h^2"));
  CHECK(fox_derivative(G("h^-2"), 0) == G("-H - h^-2"));
  CHECK(magnus(fox_derivative(G("hk"), 1), 1) == fox_strip(magnus(G("hk"), 2)).db);
}

TEST_CASE("order_compare examples") {
  CHECK(order_compare(W("h"), W("k")).order == Order::GT);
  CHECK(order_compare(W("hkH"), W("hkH")).order == Order::EQ);
  CHECK(order_compare(W("hkHK"), W("1")).order == Order::GT);
  CHECK(order_compare(W("khKH"), W("1")).order == Order::LT);
  CHECK(order_compare(W("H"), W("1")).order == Order::LT);
  // A cap below the first difference leaves the pair undecided.
  CHECK(order_compare(W("hkHK"), W("1"), 1).order == Order::Undecided);
}

TEST_CASE("injectivity_sweep examples") {
  const auto r3 = injectivity_sweep(3, 3);
  CHECK(r3.words == 53);
  CHECK(r3.collisions.empty());
  const auto r0 = injectivity_sweep(0, 0);
  CHECK(r0.words == 1);
  CHECK(r0.collisions.empty());
  const auto r4 = injectivity_sweep(2, 2, Ring::integers_mod(4));
  CHECK(r4.words == 17);
  CHECK(r4.collisions.empty());
  // Over Z/2, h^2 and h^-2 both map to 1 + a^2 at degree 2.
  const auto low = injectivity_sweep(2, 2, Ring::integers_mod(2));
  CHECK_FALSE(low.collisions.empty());
  CHECK_THROWS_AS(injectivity_sweep(3, 2), PreconditionError);
  const auto serial = injectivity_sweep(4, 4, Ring::integers(), Execution::Serial);
  const auto parallel = injectivity_sweep(4, 4, Ring::integers(), Execution::Parallel);
  CHECK(serial.words == 161);
  CHECK(serial.collisions == parallel.collisions);
}

TEST_CASE("property: magnus agrees with the letter-by-letter oracle") {
  std::mt19937_64 rng(41);
  for (const char* s : {"z", "zmod:4", "q"}) {
    const Ring r = Ring::parse(s);
    for (int i = 0; i < 200; ++i) {
      const GroupWord w = gen::random_group_word(rng, 6);
      const std::size_t d = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
      CHECK(magnus(w, r, d) == magnus_oracle(w, r, d));
    }
  }
}

TEST_CASE("property: magnus is a ring homomorphism") {
  for (const char* s : {"z", "zmod:6", "q", "idem:3"}) {
    const Ring r = Ring::parse(s);
    std::mt19937_64 rng(43);
    int failures = 0;
    for (int i = 0; i < 250; ++i) {
      const std::size_t d = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
      const auto f = gen::random_group_ring(rng, r, 4), g = gen::random_group_ring(rng, r, 4);
      failures += !(magnus(f * g, d) == magnus(f, d) * magnus(g, d));
      failures += !(magnus(f + g, d) == magnus(f, d) + magnus(g, d));
    }
    INFO(s);
    CHECK(failures == 0);
  }
}

TEST_CASE("property: fox_strip reconstructs, transport and fundamental identities") {
  const Ring z = Ring::integers();
  std::mt19937_64 rng(47);
  for (int i = 0; i < 300; ++i) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    const auto f = gen::random_group_ring(rng, z, 5);
    const NcSeries m = magnus(f, d);
    const FoxStrip st = fox_strip(m);
    // Re-embed at degree d: da*a has degree <= d.
    NcSeries::Coeffs back;
    for (const auto& [w, c] : st.da.coeffs()) back[Word(w.str() + "a")] = c;
    for (const auto& [w, c] : st.db.coeffs()) back[Word(w.str() + "b")] = c;
    back[Word{}] = st.eps;
    CHECK(NcSeries(z, Alphabet(), d, back) == m);

    CHECK(magnus(fox_derivative(f, 0), d - 1) == st.da);
    CHECK(magnus(fox_derivative(f, 1), d - 1) == st.db);

    const auto eps = GroupRingElement::word(z, GroupWord{}, f.augmentation());
    const auto h1 = G("h - 1"), k1 = G("k - 1");
    CHECK(f == eps + fox_derivative(f, 0) * h1 + fox_derivative(f, 1) * k1);
  }
}

TEST_CASE("property: order axioms, words of length <= 3, serial and parallel agree") {
  const auto serial = check_order_axioms(3, 5, Execution::Serial);
  const auto parallel = check_order_axioms(3, 5, Execution::Parallel);
  CHECK(serial.words == 53);
  CHECK(serial.pairs == 53 * 53);
  CHECK(serial.failures() == 0);
  CHECK(serial.cone_checks > 0);
  CHECK(serial.conjugation_checks > 0);
  CHECK(serial.transitivity_checks > 0);
  CHECK(parallel.pairs == serial.pairs);
  CHECK(parallel.cone_checks == serial.cone_checks);
  CHECK(parallel.failures() == serial.failures());
  CHECK(parallel.findings == serial.findings);
}
