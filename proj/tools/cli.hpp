#pragma once

#include "CLI11.hpp"
#include "motint/io/model_file.hpp"
#include "motint/nash/nash.hpp"
#include "motint/padic/padic.hpp"
#include "motint/witt/witt.hpp"

#include <iostream>

namespace motint::cli {

enum ExitCode { kOk = 0, kUsage = 1, kVerdictFailed = 2, kInconclusive = 3 };

struct RunConfig {
  std::string model;
  std::string model2;
  unsigned level = 1;
  std::vector<std::uint64_t> qs{3};
  bool mixed = false;
  unsigned depth = 2;
  std::string budget;
  unsigned cutoff = 3;
  bool machine = false;
  std::string modulus;
  unsigned workers = 1;

  std::string f = "1";
  std::string g = "1";
  std::string condition = "true";
  std::string domain = "true";
  std::string a_condition;
  std::string class_text;
  std::string stability = "smooth";
  bool unit = false;
  unsigned n = 0;
  unsigned m = 1;
  std::string components;
  std::string morphism;
  std::string name;
  std::string cover;
  std::string locus;
  std::string range = "1..4";
  std::uint64_t p = 2;
  unsigned len = 2;

  EnumOptions enumeration() const {
    EnumOptions o;
    if (!budget.empty()) {
      try {
        o.budget = Integer(budget);
      } catch (const std::exception&) {
        throw MathError("--budget is not an integer: " + budget);
      }
      if (*o.budget <= 0) throw MathError("--budget must be positive");
    }
    o.workers = std::max(1u, workers);
    return o;
  }

  JetMode mode() const { return mixed ? JetMode::Mixed : JetMode::Series; }
};

/// Lines of `key=value` in machine mode, free text otherwise.
class Printer {
 public:
  Printer(std::ostream& out, bool machine) : out_(out), machine_(machine) {}

  void kv(const std::string& key, const std::string& value) {
    if (machine_) out_ << key << "=" << value << "\n";
  }
  void human(const std::string& line) {
    if (!machine_) out_ << line << "\n";
  }
  bool machine() const { return machine_; }

 private:
  std::ostream& out_;
  bool machine_;
};

inline FiniteField field_for(std::uint64_t q, const RunConfig& cfg) {
  auto [p, m] = prime_power_decompose(q);
  if (cfg.mixed && m != 1) throw MathError("--mixed needs a prime q, got " + std::to_string(q));
  if (m == 1) return FiniteField::prime(p);
  if (!cfg.modulus.empty()) {
    auto F = parse_extension_field(p, cfg.modulus);
    if (F.order() != q) throw MathError("--modulus has the wrong degree for q = " + std::to_string(q));
    return F;
  }
  return FiniteField::of_order(q);
}

inline std::string rat(const Rational& r) { return motint::to_string(r); }

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), pr_(out, cfg.machine) {}

  const AffineModel& model() {
    if (cfg_.model.empty()) throw MathError("--model is required");
    if (!lib_) lib_ = load_library(cfg_.model);
    return lib_->model();
  }

  ModelLibrary morphisms() {
    const auto& path = cfg_.morphism.empty() ? cfg_.model : cfg_.morphism;
    if (path.empty()) throw MathError("--morphism is required");
    auto lib = load_library(path);
    if (lib.morphism_order.empty()) throw FileError(path + " defines no morphism");
    return lib;
  }

  ModelMorphism morphism() {
    auto lib = morphisms();
    auto h = lib.morphisms.at(cfg_.name.empty() ? lib.morphism_order.front() : cfg_.name);
    if (!cfg_.locus.empty()) h.locus = locus_from(cfg_.locus, h.source.vars);
    return h;
  }

  WeakNeronPresentation presentation() {
    if (cfg_.components.empty()) throw MathError("--components is required");
    auto lib = load_library(cfg_.components);
    if (lib.nerons.empty()) throw FileError(cfg_.components + " defines no [neron] section");
    return cfg_.name.empty() ? lib.nerons.begin()->second : lib.nerons.at(cfg_.name);
  }

  static std::vector<IntPoly> locus_from(const std::string& text, const std::vector<std::string>& vars) {
    std::vector<IntPoly> out;
    for (auto part : split_list(text)) {
      auto eq = part.find('=');
      if (eq != std::string::npos) {
        if (trim(part.substr(eq + 1)) != "0") throw MathError("locus equations must have the form f = 0");
        part = part.substr(0, eq);
      }
      out.push_back(parse_int_poly(part, vars));
    }
    return out;
  }

  void header(std::uint64_t q) {
    if (cfg_.qs.size() > 1) {
      pr_.kv("q", std::to_string(q));
    }
  }

  std::string prefix(std::uint64_t q) const { return cfg_.qs.size() > 1 ? "q=" + std::to_string(q) + ": " : ""; }

  Stability stability() const {
    const auto& s = cfg_.stability;
    if (s == "smooth") return Stability::smooth();
    if (s == "declared") return Stability::declared();
    if (s.rfind("inside:", 0) == 0) return Stability::inside(static_cast<unsigned>(std::stoul(s.substr(7))));
    throw MathError("--stability must be smooth, declared or inside:E");
  }

  int jets_count() {
    const auto& X = model();
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto c = count_jets(X, cfg_.mode(), F, cfg_.level, cfg_.enumeration());
      header(q);
      pr_.kv("count", c.str());
      pr_.human(prefix(q) + c.str());
    }
    return kOk;
  }

  int jets_list() {
    const auto& X = model();
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto jets = JetEnumerator(X, cfg_.mode(), F, cfg_.level, cfg_.enumeration()).collect();
      header(q);
      for (const auto& j : jets) {
        pr_.kv("jet", j.to_string());
        pr_.human(prefix(q) + j.to_string());
      }
      pr_.kv("count", std::to_string(jets.size()));
    }
    return kOk;
  }

  int jets_image() {
    const auto& X = model();
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto r = image_count(X, cfg_.mode(), F, cfg_.level, cfg_.depth, cfg_.enumeration());
      header(q);
      pr_.kv("lower", r.lower.str());
      pr_.kv("upper", r.upper.str());
      pr_.kv("unknown", r.unknown.str());
      pr_.human(prefix(q) + r.to_string());
      if (!r.exact()) code = kInconclusive;
    }
    return code;
  }

  int jets_fibration() {
    const auto& X = model();
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto r = fibration_check(X, cfg_.n, cfg_.m, F, cfg_.mode(), cfg_.enumeration());
      header(q);
      pr_.kv("count_n", r.lower.str());
      pr_.kv("count_n_plus_m", r.upper.str());
      pr_.kv("holds", yes_no(r.holds));
      pr_.human(prefix(q) + "count(" + std::to_string(cfg_.n) + ") = " + r.lower.str() + " ; count(" +
                std::to_string(cfg_.n + cfg_.m) + ") = " + r.upper.str() + " ; " +
                (r.holds ? "fibration holds" : "fibration fails"));
      if (!r.holds) code = kVerdictFailed;
    }
    return code;
  }

  int measure_cylinder() {
    const auto& X = model();
    CylinderSpec A{X, cfg_.level, parse_condition(cfg_.condition, X.vars), stability()};
    A.validate();
    std::optional<VirtualClass> cls;
    if (!cfg_.class_text.empty())
      cls = parse_class(cfg_.class_text, lib_->atoms);
    else
      cls = symbolic_cylinder_class(A);
    std::optional<VirtualClass> mu;
    if (cls) {
      mu = cylinder_measure_symbolic(A, cls);
      pr_.kv("class", mu->to_string());
      pr_.human("mu = " + mu->to_string());
    }
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto v = cylinder_measure_count(A, F, cfg_.mode(), cfg_.enumeration(), cfg_.depth);
      header(q);
      pr_.kv("value", rat(v));
      pr_.human("q=" + std::to_string(q) + ": " + rat(v));
      if (mu && mu->specialize_count(F) != v) {
        pr_.kv("coherent", "false");
        pr_.human("symbolic class specializes to " + rat(mu->specialize_count(F)) + ", not to the count");
        code = kVerdictFailed;
      }
    }
    return code;
  }

  IntegralOptions integral_options(const AffineModel& X) const {
    IntegralOptions o;
    o.cutoff = cfg_.cutoff;
    o.unit = cfg_.unit;
    o.domain = parse_condition(cfg_.domain, X.vars);
    o.mode = cfg_.mode();
    o.enumeration = cfg_.enumeration();
    return o;
  }

  int measure_integral() {
    const auto& X = model();
    auto f = parse_int_poly(cfg_.f, X.vars);
    auto opt = integral_options(X);
    std::optional<CompletedClass> sym;
    try {
      sym = integral_symbolic(X, f, opt);
    } catch (const ModelError&) {
      throw;
    } catch (const MathError&) {
    }
    if (sym) {
      pr_.kv("class", sym->to_string());
      pr_.kv("exact", yes_no(sym->is_exact()));
      pr_.human("integral = " + sym->to_string());
    } else {
      pr_.human("integral: no symbolic class available");
    }
    int code = kOk;
    if (cfg_.unit && sym && !sym->is_exact()) pr_.human("f is declared a unit, but the order strata did not end by the cutoff");
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto c = integral_count(X, f, F, opt);
      header(q);
      pr_.kv("value", rat(c.partial));
      pr_.kv("tail_bound", rat(c.tail_bound));
      pr_.human("q=" + std::to_string(q) + ": " + c.to_string());
      if (sym && sym->is_exact() == c.exact && sym->partial.specialize_count(F) != c.partial) {
        pr_.kv("coherent", "false");
        pr_.human("symbolic and counted values differ");
        code = kVerdictFailed;
      }
    }
    return code;
  }

  int measure_additivity() {
    if (cfg_.cover.empty()) throw MathError("--cover is required");
    auto lib = load_library(cfg_.cover);
    if (lib.covers.empty()) throw FileError(cfg_.cover + " defines no [cover] section");
    const auto& C = cfg_.name.empty() ? lib.covers.begin()->second : lib.covers.at(cfg_.name);
    auto f = parse_int_poly(cfg_.f, C.model.vars);
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto r = additivity_check(C, f, F, integral_options(C.model));
      code = std::max(code, report(q, r, "total", "pieces"));
    }
    return code;
  }

  int measure_product() {
    const auto& X = model();
    if (cfg_.model2.empty()) throw MathError("--model2 is required");
    auto lib2 = load_library(cfg_.model2);
    const auto& Y = lib2.model();
    auto f = parse_int_poly(cfg_.f, X.vars);
    auto g = parse_int_poly(cfg_.g, Y.vars);
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto r = product_check(X, Y, f, g, F, integral_options(X));
      code = std::max(code, report(q, r, "product", "factors"));
    }
    return code;
  }

  int report(std::uint64_t q, const Comparison& r, const std::string& left, const std::string& right) {
    header(q);
    pr_.kv("lhs", rat(r.lhs));
    pr_.kv("rhs", rat(r.rhs));
    if (r.lhs_class && r.rhs_class) {
      pr_.kv("lhs_class", r.lhs_class->to_string());
      pr_.kv("rhs_class", r.rhs_class->to_string());
      pr_.human(prefix(q) + left + " = " + r.lhs_class->to_string() + " ; " + right + " = " +
                r.rhs_class->to_string());
    }
    pr_.kv("equal", yes_no(r.equal));
    pr_.human(prefix(q) + left + " = " + rat(r.lhs) + " ; " + right + " = " + rat(r.rhs) + " ; " +
              (r.equal ? "equal" : "NOT equal"));
    for (const auto& n : r.notes) pr_.human("  " + n);
    return r.equal ? kOk : kVerdictFailed;
  }

  int neron() {
    auto P = presentation();
    auto v = neron_integral(P);
    pr_.kv("integral", v.to_string());
    pr_.human("integral = " + v.to_string());
    if (cfg_.machine || !cfg_.qs.empty())
      for (auto q : cfg_.qs) {
        auto F = field_for(q, cfg_);
        header(q);
        pr_.kv("value", rat(v.specialize_count(F)));
      }
    return kOk;
  }

  int serre() {
    auto P = presentation();
    auto lambda = serre_invariant(P);
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto s = serre_residue(P, F);
      auto via_lambda = residue_mod_q_minus_1(lambda.specialize_count(F), Integer(q));
      header(q);
      pr_.kv("lambda", lambda.to_string());
      pr_.kv("s_mod_q_minus_1", s.str());
      pr_.human(prefix(q) + "lambda = " + lambda.to_string() + " ; s mod (q-1) = " + s.str());
      if (via_lambda != s) {
        pr_.human("lambda specializes to " + via_lambda.str() + " mod (q-1)");
        code = kVerdictFailed;
      }
    }
    return code;
  }

  int cy() {
    auto P = presentation();
    auto v = calabi_yau_class(P);
    pr_.kv("class", v.to_string());
    pr_.human("[X] = " + v.to_string());
    return kOk;
  }

  int cov_verify() {
    auto h = morphism();
    auto B = parse_condition(cfg_.condition, h.source.vars);
    std::optional<Condition> A;
    if (!cfg_.a_condition.empty()) A = parse_condition(cfg_.a_condition, h.target.vars);
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto F = field_for(q, cfg_);
      auto r = change_of_variables_check(h, B, cfg_.level, F, A, cfg_.mode(), cfg_.enumeration());
      header(q);
      pr_.kv("lhs", rat(r.lhs));
      pr_.kv("rhs", rat(r.rhs));
      if (r.lhs_class) pr_.kv("lhs_class", r.lhs_class->to_string());
      if (r.rhs_class) pr_.kv("rhs_class", r.rhs_class->to_string());
      pr_.kv("image_jets", r.image_jets.str());
      pr_.kv("fibres_ok", yes_no(r.fibres_ok));
      pr_.kv("injective", yes_no(r.injective));
      pr_.kv("stable", yes_no(r.stable));
      pr_.kv("verdict", yes_no(r.verdict()));
      if (r.lhs_class || r.rhs_class)
        pr_.human(prefix(q) + "mu(A) = " + (r.lhs_class ? r.lhs_class->to_string() : "?") +
                  " ; int_B L^-ordJac = " + (r.rhs_class ? r.rhs_class->to_string() : "?"));
      std::string strata;
      for (const auto& [e, c] : r.jacobian_strata) strata += " e=" + std::to_string(e) + ":" + c.str();
      pr_.human(prefix(q) + "lhs = " + rat(r.lhs) + " ; rhs = " + rat(r.rhs) + " ; strata" + strata);
      pr_.human(prefix(q) + std::string(r.fibres_ok ? "fibres ok" : "fibres WRONG") + " ; " +
                (r.injective ? "injective" : "NOT injective") + " ; " + (r.stable ? "stable" : "NOT stable") +
                " ; " + (r.verdict() ? "holds" : "FAILS"));
      for (const auto& n : r.notes) pr_.human("  " + n);
      if (!r.verdict()) code = kVerdictFailed;
    }
    return code;
  }

  int witt_table() {
    const auto F = FiniteField::prime(cfg_.p);
    if (!is_prime(cfg_.p)) throw MathError("--p must be prime");
    if (ipow(Integer(cfg_.p), 2 * cfg_.len) > 1000000) throw MathError("table too large");
    const auto& W = witt_structure(cfg_.p, cfg_.len);
    for (unsigned j = 0; j < cfg_.len; ++j) {
      pr_.kv("S" + std::to_string(j), W.sum[j].to_string());
      pr_.kv("P" + std::to_string(j), W.product[j].to_string());
      pr_.human("S" + std::to_string(j) + " = " + W.sum[j].to_string());
      pr_.human("P" + std::to_string(j) + " = " + W.product[j].to_string());
    }
    std::vector<WittVector> all;
    const Integer size = ipow(Integer(cfg_.p), cfg_.len);
    for (Integer r = 0; r < size; ++r) all.push_back(residue_to_witt(cfg_.p, cfg_.len, r));
    std::sort(all.begin(), all.end(), [](const WittVector& a, const WittVector& b) { return a.comps < b.comps; });
    bool iso = true;
    pr_.human("residue map W_" + std::to_string(cfg_.len) + "(F_" + std::to_string(cfg_.p) + ") -> Z/" +
              size.str());
    for (const auto& a : all) {
      pr_.kv("residue" + a.to_string(), witt_to_residue(a).str());
      pr_.human("  " + a.to_string() + " -> " + witt_to_residue(a).str());
    }
    pr_.human("sum");
    for (const auto& a : all)
      for (const auto& b : all) {
        auto s = witt_add(a, b);
        pr_.kv("sum" + a.to_string() + b.to_string(), s.to_string());
        pr_.human("  " + a.to_string() + " + " + b.to_string() + " = " + s.to_string());
        iso = iso && witt_to_residue(s) == mod_floor(witt_to_residue(a) + witt_to_residue(b), size);
      }
    pr_.human("product");
    for (const auto& a : all)
      for (const auto& b : all) {
        auto s = witt_mul(a, b);
        pr_.kv("product" + a.to_string() + b.to_string(), s.to_string());
        pr_.human("  " + a.to_string() + " * " + b.to_string() + " = " + s.to_string());
        iso = iso && witt_to_residue(s) == mod_floor(witt_to_residue(a) * witt_to_residue(b), size);
      }
    pr_.kv("ring_isomorphism", yes_no(iso));
    pr_.human(iso ? "residue map is a ring isomorphism" : "residue map is NOT a ring isomorphism");
    (void)F;
    return iso ? kOk : kVerdictFailed;
  }

  int padic_volume() {
    const auto& X = model();
    CylinderSpec A{X, cfg_.level, parse_condition(cfg_.condition, X.vars), Stability::smooth()};
    for (auto q : cfg_.qs) {
      auto v = cylinder_volume(A, field_for(q, cfg_), cfg_.enumeration());
      header(q);
      pr_.kv("volume", rat(v.value));
      pr_.human(prefix(q) + "vol = " + rat(v.value));
    }
    return kOk;
  }

  int padic_integral_cmd() {
    const auto& X = model();
    auto f = parse_int_poly(cfg_.f, X.vars);
    for (auto q : cfg_.qs) {
      auto r = padic_integral(X, f, field_for(q, cfg_), cfg_.cutoff, cfg_.enumeration());
      header(q);
      pr_.kv("value", rat(r.partial));
      pr_.kv("tail_bound", rat(r.tail_bound));
      pr_.human(prefix(q) + "integral = " + rat(r.partial) +
                (r.exact ? "" : " (tail <= " + rat(r.tail_bound) + ")"));
    }
    return kOk;
  }

  int padic_compare() {
    const auto& X = model();
    auto f = parse_int_poly(cfg_.f, X.vars);
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto r = compare_motivic(X, f, field_for(q, cfg_), cfg_.cutoff, cfg_.enumeration());
      header(q);
      pr_.kv("motivic", rat(r.motivic_partial));
      pr_.kv("padic", rat(r.padic_partial));
      pr_.kv("motivic_tail", rat(r.motivic_tail));
      pr_.kv("padic_tail", rat(r.padic_tail));
      pr_.kv("agree", yes_no(r.agree()));
      auto tail = r.padic_tail == 0 ? std::string() : " (tail <= " + rat(r.padic_tail) + ")";
      if (r.agree()) {
        pr_.human(prefix(q) + "motivic = padic = " + rat(r.padic_partial) + tail);
      } else {
        pr_.human(prefix(q) + "motivic = " + rat(r.motivic_partial) + " (tail <= " + rat(r.motivic_tail) +
                  ") ; padic = " + rat(r.padic_partial) + tail);
        code = kVerdictFailed;
      }
    }
    return code;
  }

  int nash_nu() {
    auto h = morphism();
    for (auto q : cfg_.qs) {
      auto nu = nu_of_component(h, field_for(q, cfg_), std::max(cfg_.level, 2u), cfg_.enumeration());
      header(q);
      pr_.kv("nu", std::to_string(nu));
      pr_.human(prefix(q) + "nu = " + std::to_string(nu));
    }
    return kOk;
  }

  int nash_growth() {
    auto lib = morphisms();
    auto charts = lib.charts();
    if (!cfg_.name.empty()) charts = {lib.morphisms.at(cfg_.name)};
    if (!cfg_.locus.empty())
      for (auto& h : charts) h.locus = locus_from(cfg_.locus, h.source.vars);
    auto dots = cfg_.range.find("..");
    if (dots == std::string::npos) throw MathError("--range must look like 1..4");
    unsigned lo = static_cast<unsigned>(std::stoul(cfg_.range.substr(0, dots)));
    unsigned hi = static_cast<unsigned>(std::stoul(cfg_.range.substr(dots + 2)));
    int code = kOk;
    for (auto q : cfg_.qs) {
      auto r = growth_check(charts, field_for(q, cfg_), lo, hi, cfg_.enumeration());
      header(q);
      pr_.kv("nu", std::to_string(r.nu));
      pr_.human(prefix(q) + "nu = " + std::to_string(r.nu) + " ; predicted dim pi_n(N_E) = (n+1)*" +
                std::to_string(r.d) + " - " + std::to_string(r.nu));
      for (const auto& [n, c] : r.counts) {
        const std::string k = "[" + std::to_string(n) + "]";
        pr_.kv("count" + k, c.str());
        pr_.kv("contact" + k, r.contact_counts[n].str());
        pr_.kv("ratio" + k, rat(r.contact_ratios[n]));
        pr_.human(prefix(q) + "n=" + std::to_string(n) + " count=" + c.str() + " contact1=" +
                  r.contact_counts[n].str() + " contact1/q^" + std::to_string(r.predicted_exponent(n)) + "=" +
                  rat(r.contact_ratios[n]) + " count/q^" + std::to_string(r.predicted_exponent(n)) + "=" +
                  rat(r.ratios[n]));
      }
      pr_.kv("stable_from", r.stable_from ? std::to_string(*r.stable_from) : "none");
      pr_.kv("verdict", yes_no(r.verdict));
      pr_.human(prefix(q) + (r.stable_from ? "ratio constant from n=" + std::to_string(*r.stable_from)
                                           : std::string("ratio not stable")) +
                " ; " + (r.verdict ? "holds" : "FAILS"));
      if (!r.verdict) code = kVerdictFailed;
    }
    return code;
  }

 private:
  const RunConfig& cfg_;
  Printer pr_;
  std::optional<ModelLibrary> lib_;
};

inline void common_options(CLI::App* app, RunConfig& c) {
  app->add_option("--model", c.model, "model file (the .model suffix may be omitted)");
  app->add_option("--level", c.level, "jet level n");
  app->add_option("--q", c.qs, "field orders, comma separated")->delimiter(',');
  app->add_flag("--mixed", c.mixed, "work over Z/p^{n+1} instead of F_q[t]/t^{n+1}");
  app->add_option("--depth", c.depth, "lifting depth B");
  app->add_option("--budget", c.budget, "maximal search space q^{(n+1)N}");
  app->add_option("--cutoff", c.cutoff, "last order stratum summed");
  app->add_flag("--machine", c.machine, "print key=value lines");
  app->add_option("--modulus", c.modulus, "modulus for F_{p^m} as a polynomial in g");
  app->add_option("--workers", c.workers, "enumeration threads");
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exact motivic integration on affine models"};
  app.require_subcommand(1);
  app.add_flag("--machine", c.machine, "print key=value lines");

  std::function<int()> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, int (Runner::*fn)()) {
    auto* s = parent->add_subcommand(name, help);
    common_options(s, c);
    s->callback([&, fn] {
      action = [&, fn] {
        Runner r(c, out);
        return (r.*fn)();
      };
    });
    return s;
  };

  auto* jets = app.add_subcommand("jets", "truncated Greenberg spaces")->require_subcommand(1);
  leaf(jets, "count", "count Gr_n(X)(F_q)", &Runner::jets_count);
  leaf(jets, "list", "list Gr_n(X)(F_q) in sorted order", &Runner::jets_list);
  leaf(jets, "image", "bracket |pi_n(Gr(X))(F_q)| by bounded lifting", &Runner::jets_image);
  auto* fib = leaf(jets, "fibration", "check count(n+m) = count(n) q^{dm}", &Runner::jets_fibration);
  fib->add_option("--n", c.n, "base level");
  fib->add_option("--m", c.m, "extra levels");

  auto* measure = app.add_subcommand("measure", "motivic measure and integrals")->require_subcommand(1);
  auto* cyl = leaf(measure, "cylinder", "measure of a cylinder", &Runner::measure_cylinder);
  cyl->add_option("--cond", c.condition, "condition on level-n jets");
  cyl->add_option("--class", c.class_text, "class of pi_n(A), overriding the built-in provider");
  cyl->add_option("--stability", c.stability, "smooth, declared or inside:E");
  auto* integ = leaf(measure, "integral", "integral of L^{-ord f}", &Runner::measure_integral);
  integ->add_option("--f", c.f, "integrand order function");
  integ->add_flag("--unit", c.unit, "f is a unit on the generic fibre");
  integ->add_option("--domain", c.domain, "restrict to a cylinder");
  auto* add = leaf(measure, "additivity", "inclusion-exclusion over a cover", &Runner::measure_additivity);
  add->add_option("--cover", c.cover, "file with a [cover] section");
  add->add_option("--f", c.f, "integrand order function");
  add->add_option("--name", c.name, "cover name");
  auto* prod = leaf(measure, "product", "integral over a product", &Runner::measure_product);
  prod->add_option("--model2", c.model2, "second factor");
  prod->add_option("--f", c.f, "order function on the first factor");
  prod->add_option("--g", c.g, "order function on the second factor");

  for (auto [name, help, fn] : {std::tuple{"neron", "L^-d sum [U_i] L^-ord_i", &Runner::neron},
                                std::tuple{"serre", "Serre invariant modulo L - 1 and q - 1", &Runner::serre},
                                std::tuple{"cy", "Calabi-Yau class", &Runner::cy}}) {
    auto* s = leaf(&app, name, help, fn);
    s->add_option("--components", c.components, "weak Neron presentation file");
    s->add_option("--name", c.name, "presentation name");
  }

  auto* cov = app.add_subcommand("cov", "change of variables")->require_subcommand(1);
  auto* ver = leaf(cov, "verify", "mu(h(B)) against int_B L^{-ord Jac h}", &Runner::cov_verify);
  ver->add_option("--morphism", c.morphism, "file with a [morphism] section");
  ver->add_option("--name", c.name, "morphism name");
  ver->add_option("--B", c.condition, "cylinder condition on the source");
  ver->add_option("--A", c.a_condition, "expected image condition on the target");

  auto* witt = app.add_subcommand("witt", "Witt vectors")->require_subcommand(1);
  auto* table = leaf(witt, "table", "sum and product tables of W_len(F_p)", &Runner::witt_table);
  table->add_option("--p", c.p, "prime");
  table->add_option("--len", c.len, "length");

  auto* padic = app.add_subcommand("padic", "p-adic volumes and integrals")->require_subcommand(1);
  leaf(padic, "volume", "volume of a cylinder", &Runner::padic_volume)
      ->add_option("--cond", c.condition, "condition on level-n jets");
  leaf(padic, "integral", "integral of q^{-ord f}", &Runner::padic_integral_cmd)->add_option("--f", c.f, "f");
  leaf(padic, "compare", "motivic against p-adic", &Runner::padic_compare)->add_option("--f", c.f, "f");

  auto* nash = app.add_subcommand("nash", "dimension growth near an exceptional locus")->require_subcommand(1);
  for (auto [name, help, fn] : {std::tuple{"nu", "nu(E) = 1 + generic ord Jac along E", &Runner::nash_nu},
                                std::tuple{"growth", "counts of pi_n(N_E)", &Runner::nash_growth}}) {
    auto* s = leaf(nash, name, help, fn);
    s->add_option("--morphism", c.morphism, "file with [morphism] charts");
    s->add_option("--name", c.name, "use one chart only");
    s->add_option("--locus", c.locus, "override the locus, e.g. \"u = 0\"");
    s->add_option("--range", c.range, "levels, e.g. 1..4");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return action ? action() : kUsage;
  } catch (const Inconclusive& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::out_of_range& e) {
    err << "error: unknown name\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"motint"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace motint::cli
