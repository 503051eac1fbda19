#include "ncalg/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ncalg/coproduct.hpp"
#include "ncalg/errors.hpp"
#include "ncalg/freegroup.hpp"
#include "ncalg/modlab.hpp"
#include "ncalg/parallel.hpp"
#include "ncalg/witnesses.hpp"

namespace ncalg {

namespace {

using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Options {
  std::string ring = "z";
  std::size_t degree = 4;
  std::size_t window = 0;
  std::size_t max_len = 4;
  std::size_t cap = 0;  // 0: default cap
  bool pretty = false;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  Options opt;

  void emit(const json& j, const std::string& text) const {
    if (opt.pretty)
      out << text << "\n";
    else
      out << j.dump(2) << "\n";
  }
};

std::string read_input(const std::string& arg, std::istream& in) {
  if (arg == "-") {
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return arg;
  std::ifstream f(arg);
  if (!f) throw PreconditionError("cannot open '" + arg + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON", line, col);
  }
}

Value element_from_json(const Ring& r, const json& j) {
  if (j.is_string()) return r.parse_element(j.get<std::string>());
  if (j.is_number_integer()) return r.parse_element(std::to_string(j.get<long long>()));
  throw PreconditionError("ring elements must be strings or integers, got " + j.dump());
}

MatrixOverRing matrix_from_json(const Ring& r, const json& j, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) throw PreconditionError("a matrix is a list of rows");
  std::vector<std::vector<Value>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw PreconditionError("a matrix row is a list of ring elements");
    std::vector<Value> out;
    for (const auto& x : row) out.push_back(element_from_json(r, x));
    rows.push_back(std::move(out));
  }
  return MatrixOverRing(r, std::move(rows), cols_if_empty);
}

json matrix_to_json(const MatrixOverRing& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.ring().format(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_degree(std::size_t d) {
  if (d > 64) throw PreconditionError("degree " + std::to_string(d) + " is above the supported maximum 64");
}

std::uint32_t generator_index(const std::string& g) {
  if (g.size() == 1 && g[0] >= '0' && g[0] <= '9') return static_cast<std::uint32_t>(g[0] - '0');
  const GroupWord w = parse_group_word(g);
  if (w.syllables().size() != 1 || w.syllables()[0].exp != 1)
    throw PreconditionError("--gen expects a generator letter such as h or k");
  return w.syllables()[0].gen;
}

// ---- expand / order / fox / sweep -------------------------------------------------

int cmd_expand(const Io& io, const std::string& word, const std::string& element) {
  const Ring r = Ring::parse(io.opt.ring);
  check_degree(io.opt.degree);
  if (word.empty() == element.empty()) throw PreconditionError("expand needs exactly one of --word or --element");
  NcSeries s = [&] {
    if (!word.empty()) {
      const GroupWord w = parse_group_word(word);
      return magnus(w, r, io.opt.degree, std::max<std::uint32_t>(2, w.rank_used()));
    }
    const GroupRingElement f = parse_group_ring_element(element, r);
    std::uint32_t rank = 2;
    for (const auto& kv : f.terms()) rank = std::max(rank, kv.first.rank_used());
    return magnus(f, io.opt.degree, rank);
  }();
  const json j{{"ring", r.name()},
               {"degree", io.opt.degree},
               {"input", word.empty() ? element : word},
               {"series", s.to_string()}};
  io.emit(j, s.to_string());
  return kOk;
}

int cmd_order(const Io& io, const std::string& u, const std::string& v) {
  const GroupWord a = parse_group_word(u), b = parse_group_word(v);
  std::optional<std::size_t> cap;
  if (io.opt.cap) cap = io.opt.cap;
  const OrderResult res = order_compare(a, b, cap);
  const json j{{"u", a.to_string()}, {"v", b.to_string()}, {"order", to_string(res.order)}, {"degree", res.degree}};
  io.emit(j, to_string(res.order));
  return kOk;
}

int cmd_fox(const Io& io, const std::string& element, const std::string& gen) {
  const Ring r = Ring::parse(io.opt.ring);
  check_degree(io.opt.degree);
  if (io.opt.degree == 0) throw PreconditionError("fox needs degree >= 1");
  const GroupRingElement f = parse_group_ring_element(element, r);
  const std::uint32_t g = generator_index(gen);
  const GroupRingElement d = fox_derivative(f, g);
  json j{{"element", f.to_string()}, {"generator", GroupWord::generator(g).to_string()}, {"derivative", d.to_string()}};
  std::string text = d.to_string();
  bool ok = true;
  bool two = g < 2;
  for (const auto& kv : f.terms()) two = two && kv.first.rank_used() <= 2;
  if (two) {
    // Transport: the strip of magnus(f) at letter g equals magnus(D_g f) one degree lower.
    const FoxStrip strip = fox_strip(magnus(f, io.opt.degree));
    const NcSeries lhs = magnus(d, io.opt.degree - 1);
    const NcSeries& rhs = g == 0 ? strip.da : strip.db;
    ok = lhs == rhs;
    j["magnus_derivative"] = lhs.to_string();
    j["strip"] = rhs.to_string();
    j["transport_verified"] = ok;
    text += "\ntransport at degree " + std::to_string(io.opt.degree) + ": " + (ok ? "verified" : "FAILED");
  }
  io.emit(j, text);
  return ok ? kOk : kFailed;
}

int cmd_sweep(const Io& io, bool axioms, bool serial) {
  const Ring r = Ring::parse(io.opt.ring);
  check_degree(io.opt.degree);
  const Execution exec = serial ? Execution::Serial : Execution::Parallel;
  const SweepReport rep = injectivity_sweep(io.opt.max_len, io.opt.degree, r, exec);
  json collisions = json::array();
  for (const auto& [u, v] : rep.collisions) collisions.push_back({u.to_string(), v.to_string()});
  json j{{"ring", r.name()},
         {"max_len", rep.max_len},
         {"degree", rep.degree},
         {"words", rep.words},
         {"collisions", collisions},
         {"injective", rep.collisions.empty()}};
  std::ostringstream text;
  text << rep.words << " words of length <= " << rep.max_len << " at degree " << rep.degree << ": "
       << (rep.collisions.empty() ? "pairwise distinct" : std::to_string(rep.collisions.size()) + " collisions");
  bool ok = rep.collisions.empty();
  if (axioms) {
    const OrderAxiomReport a = check_order_axioms(io.opt.max_len, 1, exec);
    j["axioms"] = json{{"pairs", a.pairs},
                       {"totality_failures", a.totality_failures},
                       {"transitivity_checks", a.transitivity_checks},
                       {"transitivity_failures", a.transitivity_failures},
                       {"cone_checks", a.cone_checks},
                       {"cone_failures", a.cone_failures},
                       {"conjugation_checks", a.conjugation_checks},
                       {"conjugation_failures", a.conjugation_failures},
                       {"translation_checks", a.translation_checks},
                       {"translation_failures", a.translation_failures},
                       {"undecided", a.undecided},
                       {"findings", a.findings}};
    text << "\norder axioms over " << a.pairs << " pairs: " << a.failures() << " failures";
    ok = ok && a.failures() == 0;
  }
  io.emit(j, text.str());
  return ok ? kOk : kFailed;
}

// ---- coproduct --------------------------------------------------------------------

SubringSpec subring_from_string(const std::string& s, char letter, const Ring& r) {
  if (s == "full") return SubringSpec::full(letter);
  if (s == "laurent") return SubringSpec::laurent(letter);
  if (s == "polynomial") return SubringSpec::polynomial(letter);
  if (s.rfind("ideal:", 0) == 0) {
    std::vector<Value> gens;
    std::stringstream ss(s.substr(6));
    std::string item;
    while (std::getline(ss, item, ';')) gens.push_back(r.parse_element(item));
    return SubringSpec::ideal_augmented(letter, std::move(gens));
  }
  throw PreconditionError("unknown subring '" + s + "' (full, laurent, polynomial, ideal:<g1;g2;...>)");
}

CoproductElement element_from_json(const CoproductContext& ctx, const json& j) {
  const Ring& r = ctx.ring;
  CoproductElement out(ctx);
  auto add_component = [&](const json& c) {
    if (!c.is_object() || !c.contains("type") || !c.contains("tensors"))
      throw PreconditionError("a component is {\"type\": ..., \"tensors\": [[...], ...]}");
    const AlternatingType type(c.at("type").get<std::string>());
    for (const auto& t : c.at("tensors")) {
      if (!t.is_array() || t.size() != type.size())
        throw PreconditionError("tensor arity does not match type '" + type.pattern() + "'");
      Tensor slots;
      for (std::size_t k = 0; k < type.size(); ++k) {
        const char l = type.pattern()[k];
        slots.push_back(parse_series(t[k].get<std::string>(), r, ctx.degree, Alphabet::single(l)));
      }
      if (type.empty())
        out = out + CoproductElement::scalar(ctx, r.one());
      else
        out = out + CoproductElement::tensor(ctx, std::move(slots));
    }
  };
  if (j.is_array()) {
    for (const auto& c : j) add_component(c);
  } else if (j.is_object() && j.contains("components")) {
    for (const auto& c : j.at("components")) add_component(c);
    if (j.contains("scalar")) out = out + CoproductElement::scalar(ctx, element_from_json(r, j.at("scalar")));
  } else if (j.is_object() && j.contains("type")) {
    add_component(j);
  } else if (j.is_object() && j.contains("scalar")) {
    out = out + CoproductElement::scalar(ctx, element_from_json(r, j.at("scalar")));
  } else {
    throw PreconditionError("expected a coproduct element, a component, or a list of components");
  }
  return out;
}

json element_to_json(const CoproductElement& u) {
  json comps = json::array();
  for (const auto& [type, list] : u.components()) {
    json tensors = json::array();
    for (const auto& t : list) {
      json slots = json::array();
      for (const auto& s : t) slots.push_back(s.to_string());
      tensors.push_back(std::move(slots));
    }
    comps.push_back(json{{"type", type.pattern()}, {"tensors", std::move(tensors)}});
  }
  return json{{"scalar", u.context().ring.format(u.scalar_part())}, {"components", std::move(comps)}};
}

std::string element_to_text(const CoproductElement& u) {
  std::string s = u.context().ring.format(u.scalar_part());
  for (const auto& [type, list] : u.components()) {
    for (const auto& t : list) {
      s += " + ";
      for (std::size_t k = 0; k < t.size(); ++k) s += (k ? " (x) " : "(") + t[k].to_string();
      s += ")";
    }
  }
  return s;
}

int cmd_coproduct(const Io& io, const std::string& op, const std::vector<std::string>& inputs,
                  const std::string& a_spec, const std::string& b_spec, std::size_t ncap) {
  const Ring r = Ring::parse(io.opt.ring);
  check_degree(io.opt.degree);
  const CoproductContext ctx{r, io.opt.degree, subring_from_string(a_spec, 'a', r), subring_from_string(b_spec, 'b', r)};
  if (op == "decompose") {
    if (inputs.size() != 1) throw PreconditionError("coproduct decompose takes one series");
    const NcSeries u = parse_series(inputs[0], r, io.opt.degree);
    const auto res = decompose_by_support(u, ncap);
    if (const auto* bad = std::get_if<NotInImage>(&res)) {
      const json j{{"not_in_image", bad->word.str()}, {"ncap", ncap}};
      io.emit(j, "not in image: block pattern of " + bad->word.str() + " exceeds the cap");
      return kOk;
    }
    json parts = json::object();
    std::string text;
    for (const auto& [type, s] : std::get<Decomposition>(res)) {
      parts[type.empty() ? "1" : type.pattern()] = s.to_string();
      text += (text.empty() ? "" : "\n") + (type.empty() ? std::string("1") : type.pattern()) + ": " + s.to_string();
    }
    io.emit(json{{"components", parts}, {"ncap", ncap}}, text.empty() ? "0" : text);
    return kOk;
  }
  const std::size_t want = op == "mul" ? 2 : 1;
  if (inputs.size() != want)
    throw PreconditionError("coproduct " + op + " takes " + std::to_string(want) + " element(s)");
  std::vector<CoproductElement> elems;
  for (const auto& in : inputs) elems.push_back(element_from_json(ctx, parse_json(read_input(in, io.in))));
  const CoproductElement result = op == "mul" ? cop_mul(elems[0], elems[1]) : elems[0];
  const NcSeries alpha = alpha_eval(result);
  json j = element_to_json(result);
  j["alpha"] = alpha.to_string();
  io.emit(j, op == "mul" ? element_to_text(result) + "\nalpha: " + alpha.to_string() : alpha.to_string());
  return kOk;
}

// ---- witnesses, flatness, Sahaev ----------------------------------------------------

json report_to_json(const WitnessReport& rep) {
  return json{{"name", rep.name},
              {"zero_image_verified", rep.zero_image_verified},
              {"nonzero_verified", rep.nonzero_verified},
              {"nonzero_certificate", rep.nonzero_certificate},
              {"window", rep.window},
              {"transcript", rep.transcript},
              {"passed", rep.passed()}};
}

int cmd_witness(const Io& io, const std::string& name) {
  std::vector<std::string> names;
  if (name == "all")
    names = witness_names();
  else
    names.push_back(name);
  json reports = json::array();
  std::string text;
  bool ok = true;
  for (const auto& n : names) {
    const auto rep = run_witness(n, io.opt.window);
    ok = ok && rep.passed();
    reports.push_back(report_to_json(rep));
    text += (text.empty() ? "" : "\n") + std::string(rep.passed() ? "PASS " : "FAIL ") + rep.name + ": " +
            rep.nonzero_certificate;
  }
  io.emit(json{{"reports", reports}, {"passed", ok}}, text);
  return ok ? kOk : kFailed;
}

int cmd_flat(const Io& io, const std::string& pres_path, std::uint64_t budget, bool cohn, std::size_t max_dim,
             bool serial) {
  const Ring r = Ring::parse(io.opt.ring);
  const json j = parse_json(read_input(pres_path, io.in));
  if (!j.is_object() || !j.contains("n") || !j.contains("gens"))
    throw PreconditionError("a presentation is {\"n\": <int>, \"gens\": [[...], ...]}");
  const auto n = j.at("n").get<std::size_t>();
  const Presentation p(r, n, matrix_from_json(r, j.at("gens"), n));
  const auto res = villamayor_check(p, budget, serial ? Execution::Serial : Execution::Parallel);
  json outj{{"ring", r.name()}, {"n", n}};
  std::string text;
  int code = kOk;
  if (const auto* f = std::get_if<Flat>(&res)) {
    outj["result"] = "Flat";
    outj["e"] = matrix_to_json(f->e);
    text = "Flat, e = " + f->e.to_string();
  } else if (const auto* nf = std::get_if<NotFlat>(&res)) {
    outj["result"] = "NotFlat";
    outj["witness"] = nf->witness;
    outj["searched"] = nf->searched;
    text = "NotFlat: " + nf->witness;
    code = kFailed;
  } else {
    outj["result"] = "Inconclusive";
    outj["searched"] = std::get<Inconclusive>(res).searched;
    text = "Inconclusive after " + std::to_string(std::get<Inconclusive>(res).searched) + " candidates";
    code = kFailed;
  }
  if (cohn) {
    const CohnSweep sw = cohn_sweep(p, max_dim);
    json c{{"checked", sw.checked}, {"skipped", sw.skipped}, {"holds", !sw.violation.has_value()}};
    if (sw.violation) {
      c["y"] = matrix_to_json(sw.violation->first);
      c["witness"] = matrix_to_json(sw.violation->second);
    }
    outj["cohn"] = c;
    text += std::string("\nCohn criterion over ") + std::to_string(sw.checked) + " matrices y: " +
            (sw.violation ? "violated by " + sw.violation->second.to_string() : "holds");
  }
  io.emit(outj, text);
  return code;
}

int cmd_sahaev(const Io& io, const std::string& path) {
  const json j = parse_json(read_input(path, io.in));
  Ring r = Ring::parse(io.opt.ring);
  const json* seq = &j;
  if (j.is_object()) {
    if (j.contains("ring")) r = Ring::parse(j.at("ring").get<std::string>());
    if (!j.contains("sequence")) throw PreconditionError("expected {\"ring\": ..., \"sequence\": [...]}");
    seq = &j.at("sequence");
  }
  if (!seq->is_array()) throw PreconditionError("a Sahaev sequence is a list of square matrices");
  std::vector<MatrixOverRing> mats;
  for (const auto& m : *seq) mats.push_back(matrix_from_json(r, m));
  const auto res = sahaev_check(mats);
  if (const auto* v = std::get_if<ValidPrefix>(&res)) {
    io.emit(json{{"result", "ValidPrefix"}, {"pairs", v->pairs}, {"note", v->note}},
            "ValidPrefix (" + std::to_string(v->pairs) + " pairs): " + v->note);
    return kOk;
  }
  const auto& v = std::get<SahaevViolation>(res);
  io.emit(json{{"result", "Violation"}, {"index", v.index}, {"condition", v.condition}},
          "Violation at " + std::to_string(v.index) + ": " + v.condition + " fails");
  return kFailed;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--ring", o.ring, "base ring: z, zmod:<n>, q, prod:q^<k>, idem:<n>, sqzero:<n>, monsub, qxy");
  sub->add_option("--degree", o.degree, "truncation degree");
  sub->add_option("--window", o.window, "witness window (0 = default)");
  sub->add_option("--max-len", o.max_len, "maximal word length");
  sub->add_option("--cap", o.cap, "maximal degree for order comparisons (0 = default)");
  sub->add_flag("--pretty", o.pretty, "plain text output");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  configure_threads_from_env();
  CLI::App app{"Truncated noncommutative series, coproducts, free group rings and flatness checks", "ncalg"};
  app.require_subcommand(1);
  Options o;
  add_common(&app, o);

  std::string word, element, u, v, gen = "h", pres, sahaev_path, witness_name, a_spec = "full", b_spec = "full";
  std::vector<std::string> inputs;
  bool axioms = false, serial = false, cohn = false;
  std::uint64_t budget = 1000000;
  std::size_t max_dim = 1, ncap = 2;

  auto* expand = app.add_subcommand("expand", "Magnus expansion of a group word or group ring element");
  add_common(expand, o);
  expand->add_option("--word", word);
  expand->add_option("--element", element);

  auto* order = app.add_subcommand("order", "compare two group words in the Magnus order");
  add_common(order, o);
  order->add_option("--u", u)->required();
  order->add_option("--v", v)->required();

  auto* fox = app.add_subcommand("fox", "Fox derivative with the transport check");
  add_common(fox, o);
  fox->add_option("--element", element)->required();
  fox->add_option("--gen", gen, "generator letter (h, k, ...) or 0-based index");

  auto* sweep = app.add_subcommand("sweep", "injectivity sweep over short reduced words");
  add_common(sweep, o);
  sweep->add_flag("--axioms", axioms, "also check the order axioms");
  sweep->add_flag("--serial", serial, "use the serial reference kernels");

  auto* cop = app.add_subcommand("coproduct", "coproduct arithmetic");
  cop->require_subcommand(1);
  std::string cop_op;
  for (const char* name : {"mul", "eval", "decompose"}) {
    auto* s = cop->add_subcommand(name);
    add_common(s, o);
    s->add_option("inputs", inputs, "element JSON (inline, file, or - for stdin); a series for decompose")
        ->required();
    s->add_option("--a-subring", a_spec, "full, laurent, polynomial or ideal:<g1;g2;...>");
    s->add_option("--b-subring", b_spec);
    s->add_option("--ncap", ncap, "maximal tensor length n for decompose");
    s->callback([&cop_op, name] { cop_op = name; });
  }

  auto* wit = app.add_subcommand("witness", "non-injectivity witnesses");
  wit->require_subcommand(1);
  auto* wrun = wit->add_subcommand("run");
  add_common(wrun, o);
  wrun->add_option("name", witness_name, "wd2-zp2, wd2-qxy, mu-idempotent, gmb2, beta2-domain or all")->required();

  auto* flat = app.add_subcommand("flat-check", "Villamayor flatness check of R^n/K");
  add_common(flat, o);
  flat->add_option("--presentation", pres, "JSON {\"n\": ..., \"gens\": [[...]]}")->required();
  flat->add_option("--budget", budget, "maximal number of candidate matrices");
  flat->add_flag("--cohn", cohn, "cross-check with the Cohn criterion");
  flat->add_option("--max-dim", max_dim, "largest l, m for the Cohn cross-check");
  flat->add_flag("--serial", serial, "use the serial search");

  auto* sah = app.add_subcommand("sahaev-check", "check a matrix sequence for the Sahaev condition");
  add_common(sah, o);
  sah->add_option("sequence", sahaev_path, "JSON list of square matrices")->required();

  std::vector<std::string> argv_store{"ncalg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const Io io{in, out, o};
  try {
    if (*expand) return cmd_expand(io, word, element);
    if (*order) return cmd_order(io, u, v);
    if (*fox) return cmd_fox(io, element, gen);
    if (*sweep) return cmd_sweep(io, axioms, serial);
    if (*cop) return cmd_coproduct(io, cop_op, inputs, a_spec, b_spec, ncap);
    if (*wit) return cmd_witness(io, witness_name);
    if (*flat) return cmd_flat(io, pres, budget, cohn, max_dim, serial);
    if (*sah) return cmd_sahaev(io, sahaev_path);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const SizeGuardError& e) {
    err << "size guard: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  err << app.help();
  return kUsage;
}

}  // namespace ncalg
