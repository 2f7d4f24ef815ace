#pragma once

// JSON wire format. Matrices are row-major nested arrays of [re, im] pairs.
//   SpaceSpec  {"summands": [n1, ..., nk]}
//   Element    {"level": [l, m], "blocks": [matrix, ...]}
//   StarHom    {"source": [..], "target": [..], "mult": [[..], ..]}
//   K0Class    {"diff": [..]}
// Malformed input raises Error(ParseError); well-formed but invalid input
// raises the error of the constructor that rejects it.

#include "ool/capmaps.hpp"
#include "ool/ktheory.hpp"
#include "ool/space.hpp"
#include "ool/verdict.hpp"

#include <json.hpp>

namespace ool {

using Json = nlohmann::json;

Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const SpaceSpec& s);
SpaceSpec space_from_json(const Json& j);

Json to_json(const Element& e);
/// The space is read off the block shapes.
Element element_from_json(const Json& j);

Json to_json(const StarHom& h);
StarHom hom_from_json(const Json& j);

Json to_json(const K0Class& c);
K0Class k0_from_json(const Json& j);

Json to_json(const Payload& p);
Payload payload_from_json(const Json& j);

Json to_json(const Counterexample& c);
Counterexample counterexample_from_json(const Json& j);

Json to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);

/// Parses text; ParseError on syntax errors.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace ool
