#include "haarlab/tree_io.hpp"

#include <fstream>
#include <sstream>

#include "haarlab/counterexample.hpp"

namespace haarlab {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::FileNotFound, "cannot write '" + path + "'");
  out << text;
}

template <Scalar S>
S scalar_from_json(const Json& j) {
  auto bad = [&] { return Error(ErrorKind::ParseError, "expected a number, got " + j.dump()); };
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw bad();
    return from_double<S>(v);
  }
  Rational r;
  if (j.is_string()) {
    r = parse_rational(j.get<std::string>());
  } else if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    const auto den = j[1].get<long long>();
    if (den == 0) throw bad();
    r = Rational(j[0].get<long long>(), den);
  } else {
    throw bad();
  }
  if constexpr (is_exact_v<S>) {
    return r;
  } else {
    return to_double(r);
  }
}

template <Scalar S>
Json scalar_to_json(const S& x) {
  if constexpr (is_exact_v<S>) {
    const auto num = boost::multiprecision::numerator(x);
    const auto den = boost::multiprecision::denominator(x);
    constexpr long long kMax = 1LL << 53;
    if (abs(num) < kMax && den < kMax) return Json::array({num.template convert_to<long long>(), den.template convert_to<long long>()});
    return Json(x.str());
  } else {
    return Json(x);
  }
}

template <Scalar S>
TreeSpec<S> tree_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
    throw Error(ErrorKind::ParseError, "tree description needs an \"atoms\" array");
  TreeSpec<S> spec;
  spec.leaf_measures_only = j.value("leaf_measures_only", false);
  for (const auto& a : j["atoms"]) {
    if (!a.is_object() || !a.contains("id") || !a["id"].is_string())
      throw Error(ErrorKind::ParseError, "every atom needs a string \"id\"");
    NodeSpec<S> node;
    node.id = a["id"].get<std::string>();
    if (a.contains("parent") && !a["parent"].is_null()) {
      if (!a["parent"].is_string()) throw Error(ErrorKind::ParseError, "parent of '" + node.id + "' is not a string");
      node.parent = a["parent"].get<std::string>();
    }
    if (a.contains("measure") && !a["measure"].is_null()) node.measure = scalar_from_json<S>(a["measure"]);
    spec.atoms.push_back(std::move(node));
  }
  return spec;
}

template <Scalar S>
Json tree_to_json(const BasicFiltration<S>& f) {
  Json atoms = Json::array();
  for (const auto& a : f.atoms()) {
    Json node;
    node["id"] = a.id;
    node["parent"] = a.parent ? Json(f.atom(*a.parent).id) : Json(nullptr);
    node["measure"] = scalar_to_json(a.measure);
    atoms.push_back(std::move(node));
  }
  return Json{{"atoms", atoms}, {"leaf_measures_only", false}};
}

template <Scalar S>
LeafFunction<S> leaf_function_from_json(const BasicFiltration<S>& f, const Json& j) {
  const Json* map = &j;
  for (const char* key : {"leaf_weights", "leaf_densities", "leaf_values"})
    if (j.is_object() && j.contains(key)) map = &j[key];
  if (!map->is_object()) throw Error(ErrorKind::ParseError, "expected an object of leaf values");
  LeafFunction<S> out(f.leaf_count());
  std::vector<char> seen(f.leaf_count(), 0);
  for (const auto& [id, value] : map->items()) {
    const AtomIndex i = f.index_of(id);
    if (!f.atom(i).is_leaf()) throw Error(ErrorKind::ParseError, "'" + id + "' is not a leaf");
    out[f.atom(i).leaf_begin] = scalar_from_json<S>(value);
    seen[f.atom(i).leaf_begin] = 1;
  }
  for (std::size_t l = 0; l < seen.size(); ++l)
    if (!seen[l]) throw Error(ErrorKind::ParseError, "no value for leaf '" + f.atom(f.leaves()[l]).id + "'");
  return out;
}

template <Scalar S>
TreeFunction<S> tree_function_from_json(const BasicFiltration<S>& f, const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "expected an object of atom values");
  TreeFunction<S> out(f.atom_count(), S(0));
  for (const auto& [id, value] : j.items()) out[f.index_of(id)] = scalar_from_json<S>(value);
  return out;
}

template <Scalar S>
Json leaf_function_to_json(const BasicFiltration<S>& f, const LeafFunction<S>& g) {
  Json out = Json::object();
  for (std::size_t l = 0; l < g.size(); ++l) out[f.atom(f.leaves()[l]).id] = scalar_to_json(g[l]);
  return out;
}

template <Scalar S>
Json tree_function_to_json(const BasicFiltration<S>& f, const TreeFunction<S>& g) {
  Json out = Json::object();
  for (AtomIndex i = 0; i < g.size(); ++i) out[f.atom(i).id] = scalar_to_json(g[i]);
  return out;
}

#define HAARLAB_INSTANTIATE(S)                                                                  \
  template S scalar_from_json<S>(const Json&);                                                 \
  template Json scalar_to_json(const S&);                                                      \
  template TreeSpec<S> tree_spec_from_json<S>(const Json&);                                    \
  template Json tree_to_json(const BasicFiltration<S>&);                                       \
  template LeafFunction<S> leaf_function_from_json(const BasicFiltration<S>&, const Json&);    \
  template TreeFunction<S> tree_function_from_json(const BasicFiltration<S>&, const Json&);    \
  template Json leaf_function_to_json(const BasicFiltration<S>&, const LeafFunction<S>&);      \
  template Json tree_function_to_json(const BasicFiltration<S>&, const TreeFunction<S>&);

HAARLAB_INSTANTIATE(double)
HAARLAB_INSTANTIATE(Rational)

}  // namespace haarlab
