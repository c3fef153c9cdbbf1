#pragma once

// JSON forms of the library's values and DOT export of trees.
// Rationals are written as "p/q" strings; infinite endpoints as "-inf" and "+inf".
// Readers throw SchemaError on malformed input.

#include <string>

#include "json.hpp"
#include "treetop/determinacy.hpp"
#include "treetop/set_family.hpp"
#include "treetop/tree.hpp"

namespace treetop {

using Json = nlohmann::json;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const ExtRational& q);
ExtRational ext_rational_from_json(const Json& j);

Json to_json(const Interval& iv);
Interval interval_from_json(const Json& j);

/// {"blocks":[{"fin":["1","3/2"]},{"omega":{"start":"2","limit":"3"}}]}
Json to_json(const WOSet& w);
WOSet woset_from_json(const Json& j);

Json to_json(const Payload& p);
Payload payload_from_json(const Json& j);

Json to_json(const LabelValue& v);
LabelValue label_value_from_json(const Json& j);

Json to_json(const OrderLabel& f);
OrderLabel label_from_json(const Json& j);

/// {"nodes":[{"id":0,"parent":null,"payload":{...},"frontier":false,"limit":false}],
///  "families":{"0":[...]},"labels":{"h":{...}}}. Node ids must be 0..n-1 in order.
Json to_json(const Tree& t);
Tree tree_from_json(const Json& j);

/// {"sets":[{"node":0,"base":{...},"constraint":null|{...},"cert":{"kind":"closed"}}]}
Json to_json(const SetFamily& f);
SetFamily set_family_from_json(const Tree& t, const Json& j);

/// {"arity":2,"sets":[{"members":[0,3,"inf"],"provenance":{...}}]}
Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

/// Parent-to-child digraph with payload captions; frontier nodes dashed.
std::string to_dot(const Tree& t);

/// Reads a JSON file; throws SchemaError when it cannot be read or parsed.
Json read_json_file(const std::string& path);

}  // namespace treetop
