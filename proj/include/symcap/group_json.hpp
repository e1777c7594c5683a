#pragma once

#include <json.hpp>

#include "symcap/symgroups.hpp"

namespace symcap {

/// Group descriptor schema, tagged by "kind":
///   {"kind":"full_unitary","n":3}            {"kind":"trivial","n":2}
///   {"kind":"conjugated_torus","w":<matrix>}  {"kind":"diagonal_torus","n":2}
///   {"kind":"permutations","n":3}            {"kind":"signflips","n":2}
///   {"kind":"signed_permutations","n":3}
///   {"kind":"finite","elements":[<matrix>...],"semantics":"group"|"multiset"}
///   {"kind":"tensor","g1":{...},"g2":{...}}  {"kind":"direct_sum","parts":[{...}...]}
///   {"kind":"conjugated","w":<matrix>,"inner":{...}}
SymmetryGroup group_from_json(const nlohmann::json& j);
nlohmann::json group_to_json(const SymmetryGroup& g);

nlohmann::json reduced_set_to_json(const ReducedSet& s);

}  // namespace symcap
