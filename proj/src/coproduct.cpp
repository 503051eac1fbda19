#include "ncalg/coproduct.hpp"

#include <algorithm>
#include <sstream>

#include "ncalg/errors.hpp"

namespace ncalg {

const char* to_string(SubringKind k) {
  switch (k) {
    case SubringKind::FullSeries: return "full";
    case SubringKind::LaurentGroupRing: return "laurent";
    case SubringKind::PolynomialOnly: return "polynomial";
    case SubringKind::IdealAugmented: return "ideal";
  }
  return "?";
}

bool SubringSpec::admits_slot(const NcSeries& s) const {
  return s.alphabet() == alphabet() && s.ring().is_zero(s.constant_term());
}

NcSeries SubringSpec::from_laurent(const std::map<long, Value>& coeffs, const Ring& ring, std::size_t degree) const {
  NcSeries out(ring, alphabet(), degree);
  for (const auto& [m, c] : coeffs) {
    if (ring.is_zero(c)) continue;
    if (m < 0) {
      if (kind == SubringKind::PolynomialOnly)
        throw PreconditionError("negative power of h is not in the polynomial subring");
      if (kind == SubringKind::IdealAugmented && !ideal_contains(ring, c, ideal))
        throw PreconditionError("coefficient " + ring.format(c) + " of h^" + std::to_string(m) +
                                " is not in the declared ideal");
    }
    out = out + laurent_embed(m, degree, ring, letter, alphabet()).scaled(c);
  }
  return out;
}

AlternatingType::AlternatingType(std::string pattern) : pattern_(std::move(pattern)) {
  for (std::size_t i = 0; i < pattern_.size(); ++i) {
    if (pattern_[i] != 'a' && pattern_[i] != 'b')
      throw PreconditionError("alternating type '" + pattern_ + "' uses letters outside {a,b}");
    if (i > 0 && pattern_[i] == pattern_[i - 1])
      throw PreconditionError("alternating type '" + pattern_ + "' repeats a letter");
  }
}

AlternatingType block_pattern(const Word& w) {
  std::string p;
  for (char c : w.str()) {
    if (p.empty() || p.back() != c) p += c;
  }
  return AlternatingType(p);
}

// ---- CoproductElement ---------------------------------------------------------

CoproductElement::CoproductElement(CoproductContext ctx) : ctx_(std::move(ctx)), scalar_(ctx_.ring.zero()) {
  if (ctx_.a.letter != 'a' || ctx_.b.letter != 'b') throw PreconditionError("subring letters must be a and b");
}

CoproductElement CoproductElement::scalar(const CoproductContext& ctx, const Value& r) {
  CoproductElement out(ctx);
  out.scalar_ = r;
  return out;
}

CoproductElement CoproductElement::tensor(const CoproductContext& ctx, Tensor slots) {
  CoproductElement out(ctx);
  std::string pattern;
  for (const auto& s : slots) {
    if (!(s.ring() == ctx.ring)) throw MismatchError("slot ring " + s.ring().name() + " differs from " + ctx.ring.name());
    if (s.degree() != ctx.degree) throw MismatchError("slot degree differs from the context degree");
    if (s.alphabet().size() != 1) throw PreconditionError("slots must be single-letter series");
    const char l = s.alphabet().letters()[0];
    if (l != 'a' && l != 'b') throw PreconditionError("slot letters must be a or b");
    if (!ctx.spec_for(l).admits_slot(s))
      throw PreconditionError("slot " + s.to_string() + " has a nonzero constant term");
    pattern += l;
  }
  AlternatingType type(pattern);  // validates alternation
  if (slots.empty()) return scalar(ctx, ctx.ring.one());
  out.add_tensor(std::move(slots));
  return out;
}

void CoproductElement::add_tensor(Tensor t) {
  for (const auto& s : t) {
    if (s.is_zero()) return;
  }
  std::string pattern;
  for (const auto& s : t) pattern += s.alphabet().letters()[0];
  components_[AlternatingType(pattern)].push_back(std::move(t));
}

std::size_t CoproductElement::tensor_count() const {
  std::size_t n = 0;
  for (const auto& kv : components_) n += kv.second.size();
  return n;
}

CoproductElement CoproductElement::scaled(const Value& r) const {
  const Ring& ring = ctx_.ring;
  CoproductElement out(ctx_);
  out.scalar_ = ring.mul(r, scalar_);
  for (const auto& [type, list] : components_) {
    for (const auto& t : list) {
      Tensor s = t;
      s.front() = s.front().scaled(r);
      out.add_tensor(std::move(s));
    }
  }
  return out;
}

namespace {
void require_same_context(const CoproductElement& u, const CoproductElement& v) {
  if (!(u.context() == v.context())) throw MismatchError("coproduct elements live in different contexts");
}
}  // namespace

CoproductElement operator+(const CoproductElement& u, const CoproductElement& v) {
  require_same_context(u, v);
  CoproductElement out = u;
  out.scalar_ = u.ctx_.ring.add(u.scalar_, v.scalar_);
  for (const auto& [type, list] : v.components_) {
    for (const auto& t : list) out.add_tensor(t);
  }
  return out;
}

CoproductElement operator-(const CoproductElement& u, const CoproductElement& v) {
  const Ring& r = v.context().ring;
  return u + v.scaled(r.neg(r.one()));
}

CoproductElement operator*(const CoproductElement& u, const CoproductElement& v) {
  require_same_context(u, v);
  const Ring& ring = u.ctx_.ring;
  CoproductElement out(u.ctx_);
  out.scalar_ = ring.mul(u.scalar_, v.scalar_);
  if (!ring.is_zero(u.scalar_)) {
    for (const auto& [type, list] : v.components_) {
      for (const auto& t : list) {
        Tensor s = t;
        s.front() = s.front().scaled(u.scalar_);
        out.add_tensor(std::move(s));
      }
    }
  }
  if (!ring.is_zero(v.scalar_)) {
    for (const auto& [type, list] : u.components_) {
      for (const auto& t : list) {
        Tensor s = t;
        s.back() = s.back().scaled(v.scalar_);
        out.add_tensor(std::move(s));
      }
    }
  }
  for (const auto& [p1, l1] : u.components_) {
    for (const auto& [p2, l2] : v.components_) {
      const bool merge = p1.pattern().back() == p2.pattern().front();
      for (const auto& t1 : l1) {
        for (const auto& t2 : l2) {
          Tensor t;
          t.reserve(t1.size() + t2.size());
          t.insert(t.end(), t1.begin(), t1.end());
          if (merge) {
            t.back() = t.back() * t2.front();
            t.insert(t.end(), t2.begin() + 1, t2.end());
          } else {
            t.insert(t.end(), t2.begin(), t2.end());
          }
          out.add_tensor(std::move(t));
        }
      }
    }
  }
  return out;
}

CoproductElement cop_mul(const CoproductElement& u, const CoproductElement& v) { return u * v; }

namespace {

NcSeries eval_tensor(const Tensor& t, const Ring& ring, std::size_t degree) {
  const Alphabet ab;
  NcSeries p = NcSeries::one(ring, ab, degree);
  for (const auto& s : t) p = p * s.with_alphabet(ab);
  return p;
}

}  // namespace

NcSeries alpha_eval(const CoproductElement& u) {
  const auto& ctx = u.context();
  NcSeries out = NcSeries::constant(ctx.ring, Alphabet(), ctx.degree, u.scalar_part());
  for (const auto& [type, list] : u.components()) {
    for (const auto& t : list) out = out + eval_tensor(t, ctx.ring, ctx.degree);
  }
  return out;
}

NcSeries alpha_eval_component(const CoproductElement& u, const AlternatingType& type) {
  const auto& ctx = u.context();
  if (type.empty()) return NcSeries::constant(ctx.ring, Alphabet(), ctx.degree, u.scalar_part());
  NcSeries out(ctx.ring, Alphabet(), ctx.degree);
  auto it = u.components().find(type);
  if (it == u.components().end()) return out;
  for (const auto& t : it->second) out = out + eval_tensor(t, ctx.ring, ctx.degree);
  return out;
}

std::variant<Decomposition, NotInImage> decompose_by_support(const NcSeries& u, std::size_t ncap) {
  if (!(u.alphabet() == Alphabet("ab"))) throw PreconditionError("decompose_by_support requires alphabet {a,b}");
  std::map<AlternatingType, NcSeries::Coeffs> parts;
  for (const auto& [w, c] : u.coeffs()) {
    AlternatingType p = block_pattern(w);
    if (p.size() > 2 * ncap + 1) return NotInImage{w};
    parts[p].emplace(w, c);
  }
  Decomposition out;
  for (auto& [p, coeffs] : parts) out.emplace(p, NcSeries(u.ring(), u.alphabet(), u.degree(), std::move(coeffs)));
  return out;
}

CoproductElement from_group_ring(const GroupRingElement& f, const CoproductContext& ctx) {
  if (!(f.ring() == ctx.ring)) throw MismatchError("group ring element is over " + f.ring().name());
  const Ring& r = ctx.ring;
  CoproductElement total(ctx);
  const CoproductElement one = CoproductElement::scalar(ctx, r.one());
  for (const auto& [w, c] : f.terms()) {
    if (w.rank_used() > 2) throw PreconditionError("from_group_ring supports two generators");
    CoproductElement acc = one;
    for (const auto& s : w.syllables()) {
      const SubringSpec& spec = ctx.spec_for(s.gen == 0 ? 'a' : 'b');
      // g^e = 1 + (g^e - 1), the second summand lies in the augmentation part.
      const NcSeries x = spec.from_laurent({{s.exp, r.one()}, {0, r.neg(r.one())}}, r, ctx.degree);
      acc = acc * (one + CoproductElement::tensor(ctx, {x}));
    }
    total = total + acc.scaled(c);
  }
  return total;
}

// ---- families ------------------------------------------------------------------

long AffineForm::eval(const std::vector<std::size_t>& index) const {
  long v = constant;
  for (std::size_t k = 0; k < coeffs.size() && k < index.size(); ++k) v += coeffs[k] * static_cast<long>(index[k]);
  return v;
}

bool AffineForm::nonnegative() const {
  return constant >= 0 && std::all_of(coeffs.begin(), coeffs.end(), [](long c) { return c >= 0; });
}

AffineForm AffineForm::normalized(std::size_t arity) const {
  AffineForm out = *this;
  while (out.coeffs.size() > arity) {
    if (out.coeffs.back() != 0) throw PreconditionError("affine form uses more indices than the family arity");
    out.coeffs.pop_back();
  }
  out.coeffs.resize(arity, 0);
  return out;
}

namespace {

bool is_xy_ring(const Ring& r, bool* monsub = nullptr) {
  const auto* k = std::get_if<MonomialQuotientKind>(&r.spec().kind());
  if (k == nullptr) return false;
  if (monsub) *monsub = k->family == MonomialFamily::MonomialSubring;
  return k->family == MonomialFamily::MonomialSubring || k->family == MonomialFamily::PolynomialXY;
}

std::optional<std::size_t> generator_window(const Ring& r) {
  const auto* k = std::get_if<MonomialQuotientKind>(&r.spec().kind());
  if (k == nullptr) return std::nullopt;
  if (k->family != MonomialFamily::Idempotent && k->family != MonomialFamily::SquareZero) return std::nullopt;
  return k->generators;
}

Formula normalize_formula(const Formula& f, std::size_t arity) {
  std::map<std::pair<AffineForm, AffineForm>, Rational> acc;
  for (const auto& t : f.terms) acc[{t.x_exp.normalized(arity), t.y_exp.normalized(arity)}] += t.coeff;
  Formula out;
  for (auto& [forms, c] : acc) {
    if (c != 0) out.terms.push_back({c, forms.first, forms.second});
  }
  return out;
}

// All index tuples in a box, in lexicographic order.
std::vector<std::vector<std::size_t>> box(const std::vector<std::size_t>& extents) {
  std::vector<std::vector<std::size_t>> out;
  for (auto e : extents) {
    if (e == 0) return out;
  }
  std::vector<std::size_t> idx(extents.size(), 0);
  while (true) {
    out.push_back(idx);
    std::size_t k = extents.size();
    while (k > 0) {
      --k;
      if (++idx[k] < extents[k]) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (extents.empty()) return out;
  }
}

std::string affine_to_string(const AffineForm& f) {
  std::string out;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    const long c = f.coeffs[k];
    if (c == 0) continue;
    if (!out.empty()) out += c > 0 ? "+" : "-";
    else if (c < 0) out += "-";
    if (std::labs(c) != 1) out += std::to_string(std::labs(c)) + "*";
    out += "i" + std::to_string(k);
  }
  if (f.constant != 0 || out.empty()) {
    if (!out.empty()) out += f.constant > 0 ? "+" : "-";
    else if (f.constant < 0) out += "-";
    out += std::to_string(std::labs(f.constant));
  }
  return out;
}

}  // namespace

FamilyExpr::FamilyExpr(Ring ring, std::size_t arity, Form form, std::optional<std::vector<std::size_t>> extents)
    : ring_(std::move(ring)), arity_(arity), form_(std::move(form)), extents_(std::move(extents)) {
  if (extents_ && extents_->size() != arity_) throw PreconditionError("extents do not match the family arity");
  if (auto* fs = std::get_if<FiniteSupport>(&form_)) {
    std::map<std::vector<std::size_t>, Value> kept;
    for (auto& [idx, v] : fs->entries) {
      if (idx.size() != arity_) throw PreconditionError("finite-support index has the wrong arity");
      if (extents_) {
        for (std::size_t k = 0; k < arity_; ++k) {
          if (idx[k] >= (*extents_)[k]) throw PreconditionError("finite-support index outside the extents");
        }
      }
      if (!ring_.is_valid(v)) throw PreconditionError("family entry is not in normal form");
      if (!ring_.is_zero(v)) kept.emplace(idx, v);
    }
    fs->entries = std::move(kept);
  } else if (auto* f = std::get_if<Formula>(&form_)) {
    bool monsub = false;
    if (!is_xy_ring(ring_, &monsub)) throw UnsupportedError("monomial formulas need the monsub or qxy ring");
    *f = normalize_formula(*f, arity_);
    for (const auto& t : f->terms) {
      if (!t.x_exp.nonnegative() || !t.y_exp.nonnegative())
        throw PreconditionError("formula exponents must be nonnegative for all indices");
      const bool x_zero = t.x_exp.constant == 0 &&
                          std::all_of(t.x_exp.coeffs.begin(), t.x_exp.coeffs.end(), [](long c) { return c == 0; });
      if (monsub && t.y_exp.constant < 1 && !x_zero)
        throw PreconditionError("formula leaves the subring generated by x^i*y");
    }
  } else {
    const auto& b = std::get<BasisFamily>(form_);
    const auto window = generator_window(ring_);
    if (!window) throw UnsupportedError("basis families need an idem or sqzero ring");
    if (arity_ != 1) throw PreconditionError("basis families have arity 1");
    if (extents_ && (*extents_)[0] > 0 && b.stride * ((*extents_)[0] - 1) + b.offset >= *window)
      throw PreconditionError("basis family window exceeds the ring's generators");
  }
}

FamilyExpr FamilyExpr::zero(const Ring& ring, std::size_t arity) { return FamilyExpr(ring, arity, FiniteSupport{}); }

FamilyExpr FamilyExpr::monomial_formula(const Ring& ring, const Rational& c, long alpha, long beta, long gamma) {
  return FamilyExpr(ring, 1, Formula{{FormulaTerm{c, AffineForm{{alpha}, beta}, AffineForm{{0}, gamma}}}});
}

FamilyExpr FamilyExpr::basis(const Ring& ring, std::size_t stride, std::size_t offset, const Rational& coeff) {
  return FamilyExpr(ring, 1, BasisFamily{coeff, stride, offset});
}

FamilyExpr FamilyExpr::finite(const Ring& ring, std::vector<Value> entries) {
  FiniteSupport fs;
  for (std::size_t i = 0; i < entries.size(); ++i) fs.entries.emplace(std::vector<std::size_t>{i}, std::move(entries[i]));
  return FamilyExpr(ring, 1, std::move(fs), std::vector<std::size_t>{entries.size()});
}

FamilyExpr FamilyExpr::windowed(std::vector<std::size_t> extents) const {
  if (extents.size() != arity_) throw PreconditionError("extents do not match the family arity");
  if (extents_) {
    for (std::size_t k = 0; k < arity_; ++k) {
      if (extents[k] > (*extents_)[k]) throw PreconditionError("cannot enlarge a family window");
    }
  }
  if (const auto* fs = std::get_if<FiniteSupport>(&form_)) {
    FiniteSupport kept;
    for (const auto& [idx, v] : fs->entries) {
      bool inside = true;
      for (std::size_t k = 0; k < arity_; ++k) inside = inside && idx[k] < extents[k];
      if (inside) kept.entries.emplace(idx, v);
    }
    return FamilyExpr(ring_, arity_, std::move(kept), std::move(extents));
  }
  return FamilyExpr(ring_, arity_, form_, std::move(extents));
}

Value FamilyExpr::entry(const std::vector<std::size_t>& index) const {
  if (index.size() != arity_) throw PreconditionError("index has the wrong arity");
  if (extents_) {
    for (std::size_t k = 0; k < arity_; ++k) {
      if (index[k] >= (*extents_)[k]) throw PreconditionError("index outside the family window");
    }
  }
  return std::visit(
      [&](const auto& f) -> Value {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) {
          auto it = f.entries.find(index);
          return it == f.entries.end() ? ring_.zero() : it->second;
        } else if constexpr (std::is_same_v<T, Formula>) {
          Value acc = ring_.zero();
          for (const auto& t : f.terms) {
            const Monomial m{static_cast<std::uint32_t>(t.x_exp.eval(index)),
                             static_cast<std::uint32_t>(t.y_exp.eval(index))};
            acc = ring_.add(acc, ring_.monomial(m, t.coeff));
          }
          return acc;
        } else {
          const std::size_t g = f.stride * index[0] + f.offset;
          if (g >= *generator_window(ring_))
            throw PreconditionError("generator " + std::to_string(g) + " is outside the ring window");
          return ring_.monomial(Monomial{static_cast<std::uint32_t>(g)}, f.coeff);
        }
      },
      form_);
}

bool FamilyExpr::is_zero() const {
  return std::visit(
      [&](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiniteSupport>)
          return f.entries.empty();
        else if constexpr (std::is_same_v<T, Formula>)
          return f.terms.empty();
        else
          return f.coeff == 0 || (extents_ && (*extents_)[0] == 0);
      },
      form_);
}

std::string FamilyExpr::to_string() const {
  std::string idx = "(";
  for (std::size_t k = 0; k < arity_; ++k) idx += (k ? ",i" : "i") + std::to_string(k);
  idx += ")";
  std::string body = std::visit(
      [&](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) {
          if (f.entries.empty()) return "0";
          std::string s = "{";
          bool first = true;
          for (const auto& [i, v] : f.entries) {
            if (!first) s += ", ";
            first = false;
            s += "(";
            for (std::size_t k = 0; k < i.size(); ++k) s += (k ? "," : "") + std::to_string(i[k]);
            s += "): " + ring_.format(v);
          }
          return s + "}";
        } else if constexpr (std::is_same_v<T, Formula>) {
          if (f.terms.empty()) return "0";
          std::string s;
          for (std::size_t n = 0; n < f.terms.size(); ++n) {
            const auto& t = f.terms[n];
            if (n) s += " + ";
            if (t.coeff != 1) s += t.coeff.get_str() + "*";
            s += "x^(" + affine_to_string(t.x_exp) + ")*y^(" + affine_to_string(t.y_exp) + ")";
          }
          return s;
        } else {
          const auto* k = std::get_if<MonomialQuotientKind>(&ring_.spec().kind());
          const char* g = k->family == MonomialFamily::Idempotent ? "e" : "x";
          std::string s = f.coeff == 1 ? "" : f.coeff.get_str() + "*";
          AffineForm a{{static_cast<long>(f.stride)}, static_cast<long>(f.offset)};
          return s + g + "_(" + affine_to_string(a) + ")";
        }
      },
      form_);
  std::string out = idx + " -> " + body;
  if (extents_) {
    out += " on [";
    for (std::size_t k = 0; k < extents_->size(); ++k) out += (k ? "," : "") + std::to_string((*extents_)[k]);
    out += "]";
  }
  return out;
}

namespace {

void require_same_ring(const std::vector<FamilyExpr>& families) {
  for (const auto& f : families) {
    if (!(f.ring() == families.front().ring()))
      throw MismatchError("families over different rings: " + f.ring().name() + " vs " + families.front().ring().name());
  }
}

// Nonzero entries inside the family's box (or its support when unbounded).
std::map<std::vector<std::size_t>, Value> nonzero_entries(const FamilyExpr& f) {
  if (const auto* fs = std::get_if<FiniteSupport>(&f.form())) return fs->entries;
  if (!f.extents()) throw UnsupportedError("family over all of N^k has no finite list of entries");
  std::map<std::vector<std::size_t>, Value> out;
  for (const auto& idx : box(*f.extents())) {
    Value v = f.entry(idx);
    if (!f.ring().is_zero(v)) out.emplace(idx, std::move(v));
  }
  return out;
}

// Bounding extents for a family, using the support for unbounded finite ones.
std::vector<std::size_t> bounding_extents(const FamilyExpr& f) {
  if (f.extents()) return *f.extents();
  std::vector<std::size_t> ext(f.arity(), 0);
  for (const auto& kv : std::get<FiniteSupport>(f.form()).entries) {
    for (std::size_t k = 0; k < f.arity(); ++k) ext[k] = std::max(ext[k], kv.first[k] + 1);
  }
  return ext;
}

}  // namespace

FamilyExpr beta_image(const std::vector<FamilyExpr>& families) {
  if (families.empty()) throw PreconditionError("beta_image needs at least one family");
  require_same_ring(families);
  const Ring& ring = families.front().ring();
  std::size_t arity = 0;
  for (const auto& f : families) arity += f.arity();

  const bool all_formula_unbounded = std::all_of(families.begin(), families.end(), [](const FamilyExpr& f) {
    return std::holds_alternative<Formula>(f.form()) && !f.extents();
  });
  if (all_formula_unbounded) {
    // Index variables are concatenated; exponents add.
    std::vector<FormulaTerm> acc{FormulaTerm{1, AffineForm{{}, 0}, AffineForm{{}, 0}}};
    std::size_t shift = 0;
    for (const auto& f : families) {
      std::vector<FormulaTerm> next;
      for (const auto& t1 : acc) {
        for (const auto& t2 : std::get<Formula>(f.form()).terms) {
          FormulaTerm t{t1.coeff * t2.coeff, t1.x_exp.normalized(arity), t1.y_exp.normalized(arity)};
          for (std::size_t k = 0; k < f.arity(); ++k) {
            t.x_exp.coeffs[shift + k] += t2.x_exp.coeffs[k];
            t.y_exp.coeffs[shift + k] += t2.y_exp.coeffs[k];
          }
          t.x_exp.constant += t2.x_exp.constant;
          t.y_exp.constant += t2.y_exp.constant;
          next.push_back(std::move(t));
        }
      }
      acc = std::move(next);
      shift += f.arity();
    }
    return FamilyExpr(ring, arity, Formula{std::move(acc)});
  }

  const bool bounded = std::all_of(families.begin(), families.end(), [](const FamilyExpr& f) {
    return f.extents().has_value() || std::holds_alternative<FiniteSupport>(f.form());
  });
  if (!bounded) throw UnsupportedError("beta_image of unbounded non-formula families is not supported");
  const bool all_unbounded_finite = std::all_of(families.begin(), families.end(), [](const FamilyExpr& f) {
    return !f.extents().has_value();
  });

  std::map<std::vector<std::size_t>, Value> acc{{{}, ring.one()}};
  std::vector<std::size_t> extents;
  for (const auto& f : families) {
    const auto entries = nonzero_entries(f);
    const auto ext = bounding_extents(f);
    extents.insert(extents.end(), ext.begin(), ext.end());
    std::map<std::vector<std::size_t>, Value> next;
    for (const auto& [i1, v1] : acc) {
      for (const auto& [i2, v2] : entries) {
        Value p = ring.mul(v1, v2);
        if (ring.is_zero(p)) continue;
        std::vector<std::size_t> idx = i1;
        idx.insert(idx.end(), i2.begin(), i2.end());
        next.emplace(std::move(idx), std::move(p));
      }
    }
    acc = std::move(next);
  }
  FiniteSupport fs{std::move(acc)};
  if (all_unbounded_finite) return FamilyExpr(ring, arity, std::move(fs));
  return FamilyExpr(ring, arity, std::move(fs), std::move(extents));
}

bool family_equal(const FamilyExpr& u, const FamilyExpr& v) {
  if (u.arity() != v.arity())
    throw MismatchError("family arity mismatch: " + std::to_string(u.arity()) + " vs " + std::to_string(v.arity()));
  if (!(u.ring() == v.ring())) throw MismatchError("families over different rings");
  if (u.extents() != v.extents()) {
    if (u.extents() && v.extents()) throw MismatchError("families have different windows");
    // One side is unbounded: compare on the bounded side's window only when
    // the unbounded side is a finite-support family.
    const FamilyExpr& bounded = u.extents() ? u : v;
    const FamilyExpr& unbounded = u.extents() ? v : u;
    if (!std::holds_alternative<FiniteSupport>(unbounded.form())) throw MismatchError("families have different windows");
    return nonzero_entries(bounded) == nonzero_entries(unbounded.windowed(*bounded.extents()));
  }
  if (u.extents()) return nonzero_entries(u) == nonzero_entries(v);

  // Both unbounded: symbolic comparison.
  const auto* fu = std::get_if<Formula>(&u.form());
  const auto* fv = std::get_if<Formula>(&v.form());
  if (fu && fv) return fu->terms.size() == fv->terms.size() &&
                       std::equal(fu->terms.begin(), fu->terms.end(), fv->terms.begin(), [](const auto& a, const auto& b) {
                         return a.coeff == b.coeff && a.x_exp == b.x_exp && a.y_exp == b.y_exp;
                       });
  const auto* bu = std::get_if<BasisFamily>(&u.form());
  const auto* bv = std::get_if<BasisFamily>(&v.form());
  if (bu && bv) {
    if (bu->coeff == 0 || bv->coeff == 0) return bu->coeff == bv->coeff;
    return bu->coeff == bv->coeff && bu->stride == bv->stride && bu->offset == bv->offset;
  }
  const auto* su = std::get_if<FiniteSupport>(&u.form());
  const auto* sv = std::get_if<FiniteSupport>(&v.form());
  if (su && sv) return su->entries == sv->entries;
  // A finite-support family against a formula or basis family: equal only if
  // both are zero, since the latter have infinitely many nonzero entries.
  return u.is_zero() && v.is_zero();
}

FamilyExpr family_sub(const FamilyExpr& u, const FamilyExpr& v) {
  if (u.arity() != v.arity()) throw MismatchError("family arity mismatch");
  if (!(u.ring() == v.ring())) throw MismatchError("families over different rings");
  const Ring& ring = u.ring();
  if (!u.extents() && !v.extents()) {
    const auto* fu = std::get_if<Formula>(&u.form());
    const auto* fv = std::get_if<Formula>(&v.form());
    if (fu && fv) {
      Formula f = *fu;
      for (auto t : fv->terms) {
        t.coeff = -t.coeff;
        f.terms.push_back(std::move(t));
      }
      return FamilyExpr(ring, u.arity(), std::move(f));
    }
    const auto* bu = std::get_if<BasisFamily>(&u.form());
    const auto* bv = std::get_if<BasisFamily>(&v.form());
    if (bu && bv && bu->stride == bv->stride && bu->offset == bv->offset)
      return FamilyExpr(ring, 1, BasisFamily{bu->coeff - bv->coeff, bu->stride, bu->offset});
    if (!std::holds_alternative<FiniteSupport>(u.form()) || !std::holds_alternative<FiniteSupport>(v.form()))
      throw UnsupportedError("difference of these unbounded families is not representable");
  } else if (u.extents() != v.extents()) {
    throw MismatchError("families have different windows");
  }
  auto entries = nonzero_entries(u);
  for (const auto& [idx, val] : nonzero_entries(v)) {
    auto [it, inserted] = entries.try_emplace(idx, ring.neg(val));
    if (!inserted) it->second = ring.sub(it->second, val);
  }
  return FamilyExpr(ring, u.arity(), FiniteSupport{std::move(entries)}, u.extents());
}

NcSeries slot_from_family(const FamilyExpr& family, char letter, std::size_t degree) {
  if (family.arity() != 1) throw PreconditionError("slot_from_family needs an arity-1 family");
  const Ring& r = family.ring();
  NcSeries::Coeffs coeffs;
  for (const auto& [idx, v] : nonzero_entries(family)) {
    if (idx[0] + 1 <= degree) coeffs.emplace(Word(std::string(idx[0] + 1, letter)), v);
  }
  return NcSeries(r, Alphabet::single(letter), degree, std::move(coeffs));
}

FamilyExpr block_exponent_family(const NcSeries& u, const AlternatingType& type) {
  FiniteSupport fs;
  for (const auto& [w, c] : u.coeffs()) {
    if (!(block_pattern(w) == type)) continue;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i == 0 || w[i] != w[i - 1])
        idx.push_back(0);
      else
        ++idx.back();
    }
    fs.entries.emplace(std::move(idx), c);
  }
  return FamilyExpr(u.ring(), type.size(), std::move(fs));
}

}  // namespace ncalg
