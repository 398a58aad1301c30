#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "conley/instance.hpp"
#include "conley/search.hpp"

namespace conley {

using Json = nlohmann::ordered_json;

using AnyInstance =
    std::variant<Instance<PrimeField>, Instance<RationalField>, Instance<IntegerRing>>;

namespace io_detail {

inline std::string child(const std::string& path, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return path + "/" + escaped;
}
inline std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

/// Element names may be written as JSON strings or integers.
inline std::string name_of(const Json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw ParseError(path, "expected an element name");
}

inline int degree_of(const std::string& key, const std::string& path) {
  std::size_t used = 0;
  int d = 0;
  try {
    d = std::stoi(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != key.size())
    throw ParseError(path, "expected an integer degree, got '" + key + "'");
  return d;
}

inline std::size_t count_of(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw ParseError(path, "expected a non-negative integer");
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

inline Integer parse_integer_text(const std::string& s, const std::string& path) {
  const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size() || s.find_first_not_of("0123456789", start) != std::string::npos)
    throw ParseError(path, "malformed number '" + s + "'");
  return Integer(s[0] == '+' ? s.substr(1) : s);
}

/// Integers, or strings holding integers or fractions "a/b".
inline Rational parse_scalar(const Json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(Integer(j.get<std::uint64_t>()));
    return Rational(Integer(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_integer_text(s, path));
    const Integer num = parse_integer_text(s.substr(0, slash), path);
    const Integer den = parse_integer_text(s.substr(slash + 1), path);
    if (den == 0) throw ParseError(path, "zero denominator");
    return Rational(num, den);
  }
  throw ParseError(path, "expected an integer or a string like \"-3/2\"");
}

template <class R>
MatrixOver<R> parse_matrix(const R& ring, const Json& j, std::size_t rows, std::size_t cols,
                           const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected a matrix (array of rows)");
  auto shape_error = [&] {
    return ParseError(path, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " matrix");
  };
  if (rows == 0 || cols == 0) {
    if (!j.empty() && j.size() != rows) throw shape_error();
    for (const auto& row : j)
      if (!row.is_array() || !row.empty()) throw shape_error();
    return zero_matrix(ring, rows, cols);
  }
  if (j.size() != rows) throw shape_error();
  auto m = zero_matrix(ring, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols) throw shape_error();
    for (std::size_t c = 0; c < cols; ++c) {
      const auto at = child(child(path, r), c);
      try {
        m(r, c) = ring.from_rational(parse_scalar(row[c], at));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(at, e.what());
      }
    }
  }
  return m;
}

/// Integer matrix of unknown shape (presentations).
inline Matrix<Integer> parse_integer_matrix(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected a matrix (array of rows)");
  Matrix<Integer> m(0, 0);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) throw ParseError(child(path, r), "expected a row");
    std::vector<Integer> row;
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      const auto q = parse_scalar(j[r][c], child(child(path, r), c));
      if (boost::multiprecision::denominator(q) != 1)
        throw ParseError(child(child(path, r), c), "presentation entries must be integers");
      row.push_back(boost::multiprecision::numerator(q));
    }
    if (r > 0 && row.size() != m.cols()) throw ParseError(child(path, r), "ragged matrix");
    m.append_row(row);
  }
  return m;
}

inline std::map<int, std::size_t> parse_ranks(const Json& j, const std::string& path) {
  std::map<int, std::size_t> ranks;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      ranks[static_cast<int>(i)] = count_of(j[i], child(path, i));
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) ranks[degree_of(k, child(path, k))] = count_of(v, child(path, k));
  } else {
    throw ParseError(path, "expected ranks as an array (from degree 0) or a degree->rank object");
  }
  return ranks;
}

/// Module forms: an index (integer), a list of ranks from degree 0, a
/// degree->rank object, {"ranks": ..., "torsion": {deg: [factors]}}, or
/// {"presentation": {deg: {"generators": k, "relations": matrix}}}.
inline GradedModule parse_module(RingSpec ring, const Json& j, const std::string& path) {
  if (j.is_number_integer()) return graded_from_index(ring, static_cast<int>(j.get<std::int64_t>()));
  if (j.is_array()) return graded_from_ranks(ring, parse_ranks(j, path));
  if (!j.is_object()) throw ParseError(path, "expected an index, a rank list or a module object");
  try {
    if (j.contains("presentation")) {
      std::map<int, Presentation> pres;
      const auto at = child(path, "presentation");
      if (!j["presentation"].is_object()) throw ParseError(at, "expected an object keyed by degree");
      for (const auto& [k, v] : j["presentation"].items()) {
        const auto here = child(at, k);
        if (!v.is_object() || !v.contains("generators"))
          throw ParseError(here, "expected {\"generators\": k, \"relations\": matrix}");
        Presentation p;
        p.generators = count_of(v["generators"], child(here, "generators"));
        if (v.contains("relations"))
          p.relations = parse_integer_matrix(v["relations"], child(here, "relations"));
        pres[degree_of(k, here)] = std::move(p);
      }
      return graded_from_presentation(ring, pres);
    }
    if (j.contains("ranks") || j.contains("torsion")) {
      GradedModule m(ring);
      std::map<int, Component> comps;
      if (j.contains("ranks"))
        for (const auto& [n, r] : parse_ranks(j["ranks"], child(path, "ranks"))) comps[n].free_rank = r;
      if (j.contains("torsion")) {
        const auto at = child(path, "torsion");
        if (!j["torsion"].is_object()) throw ParseError(at, "expected an object keyed by degree");
        for (const auto& [k, v] : j["torsion"].items()) {
          if (!v.is_array()) throw ParseError(child(at, k), "expected a list of invariant factors");
          auto& c = comps[degree_of(k, child(at, k))];
          for (std::size_t i = 0; i < v.size(); ++i) {
            const auto q = parse_scalar(v[i], child(child(at, k), i));
            if (boost::multiprecision::denominator(q) != 1)
              throw ParseError(child(child(at, k), i), "invariant factors must be integers");
            c.torsion.push_back(boost::multiprecision::numerator(q));
          }
        }
      }
      for (auto& [n, c] : comps) m.set(n, c);
      return m;
    }
    return graded_from_ranks(ring, parse_ranks(j, path));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

template <class R>
std::vector<GroupElement<R>> parse_generators(const R& ring, const Poset& poset,
                                              const std::vector<GradedModule>& summands,
                                              const Json& sym, const std::string& path) {
  if (!sym.is_object() || !sym.contains("generators") || !sym["generators"].is_array())
    throw ParseError(path, "expected {\"generators\": [...]}");
  std::vector<GroupElement<R>> gens;
  const auto gpath = child(path, "generators");
  for (std::size_t g = 0; g < sym["generators"].size(); ++g) {
    const auto& jg = sym["generators"][g];
    const auto at = child(gpath, g);
    if (!jg.is_object() || !jg.contains("permutation"))
      throw ParseError(at, "expected {\"permutation\": ..., \"maps\": ...}");
    GroupElement<R> e;
    e.perm.resize(poset.size());
    for (std::size_t p = 0; p < poset.size(); ++p) e.perm[p] = p;
    const auto& jp = jg["permutation"];
    const auto ppath = child(at, "permutation");
    try {
      if (jp.is_array()) {
        if (jp.size() != poset.size())
          throw ParseError(ppath, "list the image of every element in element order");
        for (std::size_t p = 0; p < poset.size(); ++p)
          e.perm[p] = poset.index_of(name_of(jp[p], child(ppath, p)));
      } else if (jp.is_object()) {
        for (const auto& [k, v] : jp.items())
          e.perm[poset.index_of(k)] = poset.index_of(name_of(v, child(ppath, k)));
      } else {
        throw ParseError(ppath, "expected an array or an element->element object");
      }
    } catch (const UnknownElement& ex) {
      throw ParseError(ppath, ex.what());
    }
    e.psi.resize(poset.size());
    if (jg.contains("maps")) {
      const auto mpath = child(at, "maps");
      if (!jg["maps"].is_object()) throw ParseError(mpath, "expected an object keyed by element");
      for (const auto& [k, v] : jg["maps"].items()) {
        std::size_t p = 0;
        try {
          p = poset.index_of(k);
        } catch (const UnknownElement& ex) {
          throw ParseError(child(mpath, k), ex.what());
        }
        if (!v.is_object()) throw ParseError(child(mpath, k), "expected an object keyed by degree");
        for (const auto& [dk, mv] : v.items()) {
          const auto here = child(child(mpath, k), dk);
          const int n = degree_of(dk, here);
          const std::size_t r = summands[p].rank(n);
          const std::size_t c = summands[e.perm[p]].rank(n);
          e.psi[p][n] = parse_matrix(ring, mv, r, c, here);
        }
      }
    }
    gens.push_back(std::move(e));
  }
  return gens;
}

template <class R>
Instance<R> build_instance(const R& ring, const Poset& poset, const Json& doc) {
  const RingSpec spec = ring.spec();
  std::string mode_text = "connection";
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ParseError("/mode", "expected a string");
    mode_text = doc["mode"].get<std::string>();
    if (mode_text != "connection" && mode_text != "c-connection")
      throw ParseError("/mode", "expected \"connection\" or \"c-connection\"");
  }
  if (!doc.contains("indices") || !doc["indices"].is_object())
    throw ParseError("/indices", "expected an object keyed by interval");
  std::vector<std::pair<Interval, GradedModule>> data;
  for (const auto& [key, value] : doc["indices"].items()) {
    const auto at = child("/indices", key);
    Interval iv;
    try {
      iv = poset.parse_key(key);
    } catch (const UnknownElement& e) {
      throw ParseError(at, e.what());
    }
    if (!poset.is_interval(iv)) throw ParseError(at, poset.format(iv) + " is not an interval");
    data.emplace_back(iv, parse_module(spec, value, at));
  }

  std::optional<Instance<R>> inst;
  if (mode_text == "connection") {
    if (doc.contains("complexes"))
      throw ParseError("/complexes", "complexes are only used in c-connection mode");
    try {
      inst.emplace(Instance<R>::connection(ring, poset, std::move(data)));
    } catch (const Error& e) {
      throw ParseError("/indices", e.what());
    }
  } else {
    if (!doc.contains("complexes") || !doc["complexes"].is_object())
      throw ParseError("/complexes", "c-connection mode needs a complex for every element");
    std::vector<GradedModule> summands(poset.size(), GradedModule(spec));
    std::vector<typename Instance<R>::DiagonalBlocks> diagonal(poset.size());
    std::vector<bool> given(poset.size(), false);
    for (const auto& [key, value] : doc["complexes"].items()) {
      const auto at = child("/complexes", key);
      std::size_t p = 0;
      try {
        p = poset.index_of(key);
      } catch (const UnknownElement& e) {
        throw ParseError(at, e.what());
      }
      if (!value.is_object() || !value.contains("ranks"))
        throw ParseError(at, "expected {\"ranks\": ..., \"differential\": {degree: matrix}}");
      summands[p] = graded_from_ranks(spec, parse_ranks(value["ranks"], child(at, "ranks")));
      given[p] = true;
      if (value.contains("differential")) {
        const auto dpath = child(at, "differential");
        if (!value["differential"].is_object())
          throw ParseError(dpath, "expected an object keyed by degree");
        for (const auto& [dk, mv] : value["differential"].items()) {
          const auto here = child(dpath, dk);
          const int n = degree_of(dk, here);
          diagonal[p][n] = parse_matrix(ring, mv, summands[p].rank(n), summands[p].rank(n - 1), here);
        }
      }
    }
    for (std::size_t p = 0; p < poset.size(); ++p)
      if (!given[p]) throw ParseError("/complexes", "missing complex for " + poset.name(p));
    try {
      inst.emplace(Instance<R>::c_connection(ring, poset, std::move(summands),
                                             std::move(diagonal), std::move(data)));
    } catch (const InfeasibleDiagonal&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("/complexes", e.what());
    }
  }
  if (doc.contains("symmetry")) {
    auto gens = parse_generators(ring, poset, inst->summands(), doc["symmetry"], "/symmetry");
    try {
      inst->set_symmetry(std::move(gens));
    } catch (const Error& e) {
      throw ParseError("/symmetry", e.what());
    }
  }
  return std::move(*inst);
}

} // namespace io_detail

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("", "line " + std::to_string(line) + ", column " + std::to_string(col) +
                             ": malformed JSON");
  }
}

/// "elements" and "relations"; relations are [greater, lesser] pairs or
/// strings "q>p".
inline Poset parse_poset(const Json& doc) {
  using io_detail::child;
  if (!doc.is_object()) throw ParseError("", "instance must be a JSON object");
  if (!doc.contains("elements") || !doc["elements"].is_array() || doc["elements"].empty())
    throw ParseError("/elements", "expected a nonempty array of element names");
  std::vector<std::string> elements;
  for (std::size_t i = 0; i < doc["elements"].size(); ++i)
    elements.push_back(io_detail::name_of(doc["elements"][i], child("/elements", i)));
  std::vector<std::pair<std::string, std::string>> relations;
  if (doc.contains("relations")) {
    if (!doc["relations"].is_array()) throw ParseError("/relations", "expected an array");
    for (std::size_t i = 0; i < doc["relations"].size(); ++i) {
      const auto& r = doc["relations"][i];
      const auto at = child("/relations", i);
      if (r.is_array() && r.size() == 2) {
        relations.emplace_back(io_detail::name_of(r[0], child(at, 0)),
                               io_detail::name_of(r[1], child(at, 1)));
      } else if (r.is_string() && r.get<std::string>().find('>') != std::string::npos &&
                 r.get<std::string>().find('>') == r.get<std::string>().rfind('>')) {
        const auto s = r.get<std::string>();
        const auto gt = s.find('>');
        auto trim = [](std::string t) {
          const auto a = t.find_first_not_of(" \t");
          const auto b = t.find_last_not_of(" \t");
          return a == std::string::npos ? std::string{} : t.substr(a, b - a + 1);
        };
        relations.emplace_back(trim(s.substr(0, gt)), trim(s.substr(gt + 1)));
      } else {
        throw ParseError(at, "malformed relation " + r.dump() +
                                 " (expected [\"q\", \"p\"] or \"q>p\")");
      }
    }
  }
  try {
    return Poset::from_relations(std::move(elements), relations);
  } catch (const Error& e) {
    throw ParseError("/relations", e.what());
  }
}

inline AnyInstance parse_instance(const Json& doc) {
  const Poset poset = parse_poset(doc);
  if (!doc.contains("ring") || !doc["ring"].is_string())
    throw ParseError("/ring", "expected \"gf<p>\", \"rational\" or \"integer\"");
  RingSpec spec;
  try {
    spec = RingSpec::parse(doc["ring"].get<std::string>());
  } catch (const Error& e) {
    throw ParseError("/ring", e.what());
  }
  return with_ring(spec, [&](const auto& ring) -> AnyInstance {
    return io_detail::build_instance(ring, poset, doc);
  });
}

inline AnyInstance parse_instance_text(const std::string& text) {
  return parse_instance(parse_json(text));
}

/// Block map from {"q": {"p": {"degree": matrix}}}. Absent blocks are zero;
/// in c-connection mode absent diagonal blocks take the prescribed
/// differential.
template <class R>
BlockMap<R> parse_block_map(const Instance<R>& inst, const Json& blocks, const std::string& path) {
  using io_detail::child;
  const auto& poset = inst.poset();
  BlockMap<R> delta(inst.ring(), poset, inst.summands());
  if (!blocks.is_object()) throw ShapeMismatch(path + ": expected an object keyed by element");
  std::vector<bool> diag_given(poset.size(), false);
  for (const auto& [qk, row] : blocks.items()) {
    std::size_t q = 0;
    try {
      q = poset.index_of(qk);
    } catch (const UnknownElement& e) {
      throw ShapeMismatch(child(path, qk) + ": " + e.what());
    }
    if (!row.is_object()) throw ShapeMismatch(child(path, qk) + ": expected an object");
    for (const auto& [pk, degs] : row.items()) {
      const auto at = child(child(path, qk), pk);
      std::size_t p = 0;
      try {
        p = poset.index_of(pk);
      } catch (const UnknownElement& e) {
        throw ShapeMismatch(at + ": " + e.what());
      }
      if (!degs.is_object()) throw ShapeMismatch(at + ": expected an object keyed by degree");
      if (p == q) diag_given[p] = true;
      for (const auto& [dk, mv] : degs.items()) {
        try {
          const int n = io_detail::degree_of(dk, child(at, dk));
          delta.set_block(q, p, n,
                          io_detail::parse_matrix(inst.ring(), mv, delta.rows_of(q, n),
                                                  delta.cols_of(p, n), child(at, dk)));
        } catch (const ParseError& e) {
          throw ShapeMismatch(e.what());
        }
      }
    }
  }
  for (std::size_t p = 0; p < poset.size(); ++p)
    if (!diag_given[p])
      for (const auto& [n, m] : inst.diagonal()[p]) delta.set_block(p, p, n, m);
  return delta;
}

/// A solution document {"blocks": ...} or an enumerate document with a
/// "solutions" array.
template <class R>
std::vector<BlockMap<R>> parse_solutions(const Instance<R>& inst, const Json& doc) {
  std::vector<BlockMap<R>> out;
  if (doc.is_object() && doc.contains("ring") && doc["ring"].is_string() &&
      doc["ring"].get<std::string>() != inst.ring().spec().name())
    throw ShapeMismatch("/ring: solution is over " + doc["ring"].get<std::string>() +
                        " but the instance is over " + inst.ring().spec().name());
  if (doc.is_object() && doc.contains("solutions")) {
    if (!doc["solutions"].is_array()) throw ShapeMismatch("/solutions: expected an array");
    for (std::size_t i = 0; i < doc["solutions"].size(); ++i) {
      const auto& s = doc["solutions"][i];
      const auto at = io_detail::child("/solutions", i);
      if (!s.is_object() || !s.contains("blocks"))
        throw ShapeMismatch(at + ": expected {\"blocks\": ...}");
      out.push_back(parse_block_map(inst, s["blocks"], at + "/blocks"));
    }
  } else if (doc.is_object() && doc.contains("blocks")) {
    out.push_back(parse_block_map(inst, doc["blocks"], "/blocks"));
  } else {
    throw ShapeMismatch("expected {\"blocks\": ...} or {\"solutions\": [...]}");
  }
  return out;
}

template <class R>
Json scalar_to_json(const R& ring, const typename R::value_type& v) {
  const Rational q = ring.to_rational(v);
  const Integer num = boost::multiprecision::numerator(q);
  if (boost::multiprecision::denominator(q) == 1 &&
      num >= std::numeric_limits<std::int64_t>::min() &&
      num <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(num));
  return Json(q.str());
}

template <class R>
Json matrix_to_json(const R& ring, const MatrixOver<R>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(ring, m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Strictly sub-diagonal blocks in canonical order, zero blocks included;
/// diagonal blocks only when `with_diagonal`.
template <class R>
Json block_map_to_json(const BlockMap<R>& delta, bool with_diagonal = false) {
  const auto& poset = delta.poset();
  const auto [lo, hi] = delta.degree_window();
  auto pairs = block_pairs(poset);
  if (with_diagonal)
    for (std::size_t p = 0; p < poset.size(); ++p) pairs.emplace_back(p, p);
  Json blocks = Json::object();
  for (auto [q, p] : pairs)
    for (int n = lo; n <= hi; ++n) {
      if (delta.rows_of(q, n) == 0 || delta.cols_of(p, n) == 0) continue;
      blocks[poset.name(q)][poset.name(p)][std::to_string(n)] =
          matrix_to_json(delta.ring(), delta.block(q, p, n));
    }
  return blocks;
}

template <class R>
Json solutions_to_json(const Instance<R>& inst, const SolutionSet<R>& set, bool symmetric) {
  Json doc;
  doc["ring"] = inst.ring().spec().name();
  doc["mode"] = mode_name(inst.mode());
  doc["symmetric"] = symmetric;
  doc["count"] = set.size();
  doc["stats"] = {{"explored", set.stats.explored}, {"pruned", set.stats.pruned}};
  Json sols = Json::array();
  for (const auto& s : set.solutions) sols.push_back({{"blocks", block_map_to_json(s.delta)}});
  doc["solutions"] = std::move(sols);
  return doc;
}

inline Json module_to_json(const GradedModule& g) {
  Json ranks = Json::object(), torsion = Json::object();
  for (const auto& [n, c] : g.components()) {
    ranks[std::to_string(n)] = c.free_rank;
    if (!c.torsion.empty()) {
      Json factors = Json::array();
      for (const auto& d : c.torsion) factors.push_back(scalar_to_json(IntegerRing{}, d));
      torsion[std::to_string(n)] = std::move(factors);
    }
  }
  if (torsion.empty()) return ranks;
  return {{"ranks", std::move(ranks)}, {"torsion", std::move(torsion)}};
}

/// Instance document accepted by parse_instance.
template <class R>
Json instance_to_json(const Instance<R>& inst) {
  const auto& poset = inst.poset();
  Json doc;
  doc["elements"] = Json::array();
  for (std::size_t p = 0; p < poset.size(); ++p) doc["elements"].push_back(poset.name(p));
  doc["relations"] = Json::array();
  for (auto [q, p] : poset.relations())
    doc["relations"].push_back({poset.name(q), poset.name(p)});
  doc["ring"] = inst.ring().spec().name();
  doc["mode"] = mode_name(inst.mode());
  doc["indices"] = Json::object();
  for (const auto& [iv, g] : inst.index_data()) doc["indices"][poset.key(iv)] = module_to_json(g);
  if (inst.mode() == Mode::c_connection) {
    doc["complexes"] = Json::object();
    for (std::size_t p = 0; p < poset.size(); ++p) {
      Json c;
      c["ranks"] = module_to_json(inst.summands()[p]);
      c["differential"] = Json::object();
      for (const auto& [n, m] : inst.diagonal()[p])
        c["differential"][std::to_string(n)] = matrix_to_json(inst.ring(), m);
      doc["complexes"][poset.name(p)] = std::move(c);
    }
  }
  if (inst.symmetry()) {
    const auto& action = *inst.symmetry();
    Json gens = Json::array();
    for (auto g : action.generators()) {
      const auto& e = action.elements()[g];
      Json perm = Json::object(), maps = Json::object();
      for (std::size_t p = 0; p < poset.size(); ++p) {
        perm[poset.name(p)] = poset.name(e.perm[p]);
        for (const auto& [n, m] : e.psi[p])
          maps[poset.name(p)][std::to_string(n)] = matrix_to_json(inst.ring(), m);
      }
      gens.push_back({{"permutation", std::move(perm)}, {"maps", std::move(maps)}});
    }
    doc["symmetry"] = {{"generators", std::move(gens)}};
  }
  return doc;
}

template <class R>
std::string matrix_to_text(const R& ring, const MatrixOver<R>& m, const std::string& indent) {
  std::vector<std::vector<std::string>> cells(m.rows());
  std::size_t width = 1;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      cells[r].push_back(ring.to_rational(m(r, c)).str());
      width = std::max(width, cells[r].back().size());
    }
  std::string out;
  for (const auto& row : cells) {
    out += indent + "[";
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += " ";
      out += std::string(width - row[c].size(), ' ') + row[c];
    }
    out += "]\n";
  }
  return out;
}

/// One labelled block per (q, p, degree); rows are C_n(q), columns C_{n-1}(p).
template <class R>
std::string block_map_to_text(const BlockMap<R>& delta, const std::string& indent = "  ") {
  const auto& poset = delta.poset();
  const auto [lo, hi] = delta.degree_window();
  std::string out;
  for (auto [q, p] : block_pairs(poset))
    for (int n = lo; n <= hi; ++n) {
      if (delta.rows_of(q, n) == 0 || delta.cols_of(p, n) == 0) continue;
      out += indent + "Delta(" + poset.name(q) + "," + poset.name(p) + ") rows C_" +
             std::to_string(n) + "(" + poset.name(q) + ") cols C_" + std::to_string(n - 1) + "(" +
             poset.name(p) + ")\n";
      out += matrix_to_text(delta.ring(), delta.block(q, p, n), indent + "  ");
    }
  return out;
}

template <class R>
std::string solutions_to_text(const Instance<R>& inst, const SolutionSet<R>& set, bool symmetric) {
  std::ostringstream os;
  os << "ring " << inst.ring().spec().name() << ", " << mode_name(inst.mode()) << " mode"
     << (symmetric ? ", symmetric" : "") << "\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    os << "solution " << i + 1 << "\n";
    os << block_map_to_text(set.solutions[i].delta);
  }
  os << set.size() << (set.size() == 1 ? " solution" : " solutions") << " (explored "
     << set.stats.explored << ", pruned " << set.stats.pruned << ")\n";
  return os.str();
}

/// Two-space indented JSON with arrays of scalars (matrix rows) kept on one
/// line.
inline std::string dump_json(const Json& j, int depth = 0) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  auto flat = [](const Json& a) {
    for (const auto& x : a)
      if (x.is_structured()) return false;
    return true;
  };
  if (j.is_array()) {
    if (j.empty() || flat(j)) return j.dump(-1, ' ', false);
    std::string out = "[\n";
    for (std::size_t i = 0; i < j.size(); ++i)
      out += pad + dump_json(j[i], depth + 1) + (i + 1 < j.size() ? ",\n" : "\n");
    return out + close + "]";
  }
  if (j.is_object()) {
    if (j.empty()) return "{}";
    std::string out = "{\n";
    std::size_t i = 0;
    for (const auto& [k, v] : j.items())
      out += pad + Json(k).dump() + ": " + dump_json(v, depth + 1) +
             (++i < j.size() ? ",\n" : "\n");
    return out + close + "}";
  }
  return j.dump();
}

inline std::string status_name(CheckResult::Status s) {
  switch (s) {
  case CheckResult::Status::pass:
    return "PASS";
  case CheckResult::Status::fail:
    return "FAIL";
  case CheckResult::Status::skipped:
    return "SKIP";
  }
  return "?";
}

inline std::string report_to_text(const VerifyReport& rep) {
  std::string out;
  for (const auto& c : rep.checks) {
    out += status_name(c.status) + " " + c.name;
    if (!c.detail.empty()) out += ": " + c.detail;
    out += "\n";
  }
  out += std::string("overall: ") + (rep.passed() ? "PASS" : "FAIL") + "\n";
  return out;
}

inline Json report_to_json(const VerifyReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"status", status_name(c.status)}, {"detail", c.detail}});
  return {{"passed", rep.passed()}, {"checks", std::move(checks)}};
}

} // namespace conley
