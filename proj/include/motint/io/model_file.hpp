#pragma once

#include "motint/measure/integral.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace motint {

class FileError : public MathError {
 public:
  using MathError::MathError;
};

/// One `[kind name]` block of key = value lines; keys may repeat.
struct Section {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::vector<std::tuple<std::string, std::string, std::size_t>> entries;

  std::optional<std::string> get(const std::string& key) const {
    std::optional<std::string> v;
    for (const auto& [k, val, l] : entries)
      if (k == key) {
        if (v) throw FileError(where(l) + "key '" + key + "' given twice");
        v = val;
      }
    return v;
  }

  std::string require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw FileError(where(line) + "[" + kind + " " + name + "] needs '" + key + "'");
    return *v;
  }

  std::vector<std::string> get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, val, l] : entries)
      if (k == key) out.push_back(val);
    return out;
  }

  std::string source;
  std::string where(std::size_t l) const { return source + ":" + std::to_string(l) + ": "; }
};

struct Document {
  std::string source;
  std::vector<std::string> includes;
  std::vector<Section> sections;
};

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Line grammar: `# comment`, `[kind name]`, `key = value`; keys before the
/// first section may only be `include`.
inline Document parse_document(std::string_view text, std::string source = "<input>") {
  Document doc;
  doc.source = source;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw FileError(source + ":" + std::to_string(lineno) + ": unterminated section header");
      auto words = split_list(line.substr(1, line.size() - 2), ' ');
      if (words.empty() || words.size() > 2)
        throw FileError(source + ":" + std::to_string(lineno) + ": expected [kind name]");
      Section s;
      s.kind = words[0];
      s.name = words.size() == 2 ? words[1] : "";
      s.line = lineno;
      s.source = source;
      doc.sections.push_back(std::move(s));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw FileError(source + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (doc.sections.empty()) {
      if (key != "include") throw FileError(source + ":" + std::to_string(lineno) + ": key outside a section");
      doc.includes.push_back(value);
      continue;
    }
    doc.sections.back().entries.emplace_back(key, value, lineno);
  }
  return doc;
}

/// Everything a set of model files defines, by name.
struct ModelLibrary {
  AtomTable atoms;
  std::map<std::string, AffineModel> models;
  std::map<std::string, ModelMorphism> morphisms;
  std::vector<std::string> morphism_order;
  std::map<std::string, CoverPresentation> covers;
  std::map<std::string, WeakNeronPresentation> nerons;
  std::vector<std::string> model_order;

  const AffineModel& model(const std::string& name = "") const {
    if (name.empty()) {
      if (model_order.empty()) throw FileError("no model defined");
      return models.at(model_order.back());
    }
    auto it = models.find(name);
    if (it == models.end()) throw FileError("unknown model '" + name + "'");
    return it->second;
  }

  std::vector<ModelMorphism> charts() const {
    std::vector<ModelMorphism> out;
    for (const auto& n : morphism_order) out.push_back(morphisms.at(n));
    return out;
  }
};

namespace detail {

inline bool parse_bool(const Section& s, const std::string& key, bool fallback) {
  auto v = s.get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "yes" || *v == "1") return true;
  if (*v == "false" || *v == "no" || *v == "0") return false;
  throw FileError(s.where(s.line) + key + " must be true or false");
}

inline long parse_long(const std::string& text, const Section& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FileError(s.where(s.line) + what + " is not an integer: '" + text + "'");
  }
}

inline std::vector<IntPoly> poly_list(const std::string& text, const std::vector<std::string>& vars) {
  std::vector<IntPoly> out;
  for (const auto& e : split_list(text)) out.push_back(parse_int_poly(e, vars));
  return out;
}

template <class F>
auto located(const Section& s, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FileError&) {
    throw;
  } catch (const MathError& e) {
    throw FileError(s.where(s.line) + "[" + s.kind + " " + s.name + "]: " + e.what());
  }
}

inline void load_atom(ModelLibrary& lib, const Section& s) {
  located(s, [&] {
    const int dim = static_cast<int>(parse_long(s.require("dim"), s, "dim"));
    std::function<Integer(const FiniteField&)> counter;
    if (auto count = s.get("count")) {
      IntPoly c = parse_int_poly(*count, {"q"});
      counter = [c](const FiniteField& F) {
        Integer q(F.order());
        return c.evaluate(IntegerRing{}, std::span<const Integer>(&q, 1));
      };
    } else if (auto eqs = s.get("equations")) {
      auto vars = split_list(s.require("variables"));
      auto polys = poly_list(*eqs, vars);
      Integer extra = parse_long(s.get("points_at_infinity").value_or("0"), s, "points_at_infinity");
      counter = [polys, n = vars.size(), extra](const FiniteField& F) {
        return count_field_points(polys, n, F) + extra;
      };
    }
    std::optional<Integer> euler;
    if (auto e = s.get("euler")) euler = Integer(parse_long(*e, s, "euler"));
    lib.atoms[s.name] = make_atom(s.name, dim, counter, euler);
  });
}

inline void load_model(ModelLibrary& lib, const Section& s) {
  located(s, [&] {
    AffineModel m;
    m.name = s.get("name").value_or(s.name);
    m.vars = split_list(s.require("variables"));
    if (auto eqs = s.get("equations")) m.equations = poly_list(*eqs, m.vars);
    m.complete_intersection = parse_bool(s, "complete_intersection", true);
    m.rel_dim = s.get("dim") ? static_cast<int>(parse_long(*s.get("dim"), s, "dim"))
                             : static_cast<int>(m.vars.size() - m.equations.size());
    if (auto f = s.get("fitting")) m.fitting = poly_list(*f, m.vars);
    m.smooth = parse_bool(s, "smooth", false);
    if (auto b = s.get("bad_primes"))
      for (const auto& p : split_list(*b)) m.bad_primes.push_back(static_cast<std::uint64_t>(parse_long(p, s, "bad prime")));
    if (auto c = s.get("class")) m.special_fibre = parse_class(*c, lib.atoms);
    else if (m.equations.empty()) m.special_fibre = VirtualClass::lefschetz(static_cast<long>(m.vars.size()));
    if (auto u = s.get("units")) m.units = poly_list(*u, m.vars);
    if (auto coords = s.get("form.coords")) {
      GaugeForm g;
      g.coords = split_list(*coords);
      g.coeff = parse_int_poly(s.get("form.coeff").value_or("1"), m.vars);
      g.twist = static_cast<int>(parse_long(s.get("form.twist").value_or("0"), s, "form.twist"));
      m.form = std::move(g);
    }
    m.validate();
    if (lib.models.count(s.name)) throw FileError(s.where(s.line) + "model '" + s.name + "' defined twice");
    lib.models[s.name] = m;
    lib.model_order.push_back(s.name);
  });
}

inline void load_morphism(ModelLibrary& lib, const Section& s) {
  located(s, [&] {
    ModelMorphism h;
    h.name = s.name;
    h.source = lib.model(s.require("source"));
    h.target = lib.model(s.require("target"));
    h.components = poly_list(s.require("map"), h.source.vars);
    if (auto l = s.get("locus")) h.locus = poly_list(*l, h.source.vars);
    h.validate();
    lib.morphisms[s.name] = h;
    lib.morphism_order.push_back(s.name);
  });
}

inline void load_cover(ModelLibrary& lib, const Section& s) {
  located(s, [&] {
    CoverPresentation c;
    c.name = s.name;
    c.model = lib.model(s.require("model"));
    for (const auto& piece : s.get_all("piece")) c.pieces.push_back(poly_list(piece, c.model.vars));
    if (c.pieces.empty()) throw FileError(s.where(s.line) + "cover needs at least one piece");
    lib.covers[s.name] = c;
  });
}

inline void load_neron(ModelLibrary& lib, const Section& s) {
  located(s, [&] {
    WeakNeronPresentation P;
    P.name = s.name;
    P.rel_dim = static_cast<int>(parse_long(s.require("dim"), s, "dim"));
    for (const auto& c : s.get_all("component")) {
      auto comma = c.rfind(',');
      if (comma == std::string::npos) throw FileError(s.where(s.line) + "component must be '<class>, <ord>'");
      P.components.push_back({parse_class(trim(c.substr(0, comma)), lib.atoms),
                              parse_long(trim(c.substr(comma + 1)), s, "component order")});
    }
    P.validate();
    lib.nerons[s.name] = P;
  });
}

}  // namespace detail

inline void load_into(ModelLibrary& lib, const std::filesystem::path& path);

inline void load_document(ModelLibrary& lib, const Document& doc, const std::filesystem::path& dir) {
  for (const auto& inc : doc.includes) load_into(lib, dir / inc);
  static const std::vector<std::string> order = {"atom", "model", "morphism", "cover", "neron"};
  for (const auto& s : doc.sections)
    if (std::find(order.begin(), order.end(), s.kind) == order.end())
      throw FileError(s.where(s.line) + "unknown section kind '" + s.kind + "'");
  for (const auto& kind : order)
    for (const auto& s : doc.sections) {
      if (s.kind != kind) continue;
      if (s.name.empty()) throw FileError(s.where(s.line) + "section needs a name");
      if (kind == "atom") detail::load_atom(lib, s);
      if (kind == "model") detail::load_model(lib, s);
      if (kind == "morphism") detail::load_morphism(lib, s);
      if (kind == "cover") detail::load_cover(lib, s);
      if (kind == "neron") detail::load_neron(lib, s);
    }
}

/// Accepts the path as given or with a `.model` suffix.
inline std::filesystem::path resolve_model_path(const std::filesystem::path& p) {
  if (std::filesystem::is_regular_file(p)) return p;
  auto with = p;
  with += ".model";
  if (std::filesystem::is_regular_file(with)) return with;
  throw FileError("cannot open model file " + p.string());
}

inline void load_into(ModelLibrary& lib, const std::filesystem::path& path) {
  auto resolved = resolve_model_path(path);
  std::ifstream in(resolved);
  std::stringstream buf;
  buf << in.rdbuf();
  load_document(lib, parse_document(buf.str(), resolved.string()), resolved.parent_path());
}

inline ModelLibrary load_library(const std::filesystem::path& path) {
  ModelLibrary lib;
  load_into(lib, path);
  return lib;
}

inline ModelLibrary parse_library(std::string_view text, const std::filesystem::path& dir = ".") {
  ModelLibrary lib;
  load_document(lib, parse_document(text), dir);
  return lib;
}

}  // namespace motint
