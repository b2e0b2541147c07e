#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "haarlab/functions.hpp"

namespace haarlab {

using Json = nlohmann::json;

// Reads a JSON document; FileNotFound or ParseError on failure.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// A number, a decimal/fraction string, or a [numerator, denominator] pair.
template <Scalar S>
S scalar_from_json(const Json& j);

template <Scalar S>
Json scalar_to_json(const S& x);

// {"atoms": [{"id", "parent", "measure"}], "leaf_measures_only": bool}
template <Scalar S>
TreeSpec<S> tree_spec_from_json(const Json& j);

template <Scalar S>
Json tree_to_json(const BasicFiltration<S>& f);

// {"leaf_weights": {...}}, {"leaf_densities": {...}} or a bare {leaf_id: value} map,
// returned in leaf order. Every leaf must be listed.
template <Scalar S>
LeafFunction<S> leaf_function_from_json(const BasicFiltration<S>& f, const Json& j);

// {atom_id: value}; unlisted atoms get 0.
template <Scalar S>
TreeFunction<S> tree_function_from_json(const BasicFiltration<S>& f, const Json& j);

template <Scalar S>
Json leaf_function_to_json(const BasicFiltration<S>& f, const LeafFunction<S>& g);

template <Scalar S>
Json tree_function_to_json(const BasicFiltration<S>& f, const TreeFunction<S>& g);

}  // namespace haarlab
