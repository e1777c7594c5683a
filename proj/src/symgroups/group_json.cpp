#include "symcap/group_json.hpp"

#include "symcap/matrix_json.hpp"

namespace symcap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int dim_field(const nlohmann::json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw Error("group descriptor '" + j.value("kind", std::string("?")) +
                "' needs an integer field n");
  }
  return j["n"].get<int>();
}

UnitaryMatrix unitary_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw Error(std::string("group descriptor needs a matrix field ") + key);
  return UnitaryMatrix(matrix_from_json(j[key]));
}

}  // namespace

SymmetryGroup group_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw Error("group descriptor must be an object with a string field 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "full_unitary") return SymmetryGroup::full_unitary(dim_field(j));
  if (kind == "trivial") return SymmetryGroup::trivial(dim_field(j));
  if (kind == "permutations") return SymmetryGroup::permutations(dim_field(j));
  if (kind == "signflips" || kind == "sign_flips") return SymmetryGroup::sign_flips(dim_field(j));
  if (kind == "signed_permutations") return SymmetryGroup::signed_permutations(dim_field(j));
  if (kind == "diagonal_torus") return SymmetryGroup::diagonal_torus(dim_field(j));
  if (kind == "conjugated_torus") return SymmetryGroup::conjugated_torus(unitary_field(j, "w"));
  if (kind == "finite") {
    if (!j.contains("elements") || !j["elements"].is_array()) {
      throw Error("finite group descriptor needs an 'elements' array");
    }
    std::vector<UnitaryMatrix> elements;
    for (const auto& e : j["elements"]) elements.emplace_back(matrix_from_json(e));
    const std::string semantics = j.value("semantics", std::string("multiset"));
    if (semantics != "group" && semantics != "multiset") {
      throw Error("finite group semantics must be 'group' or 'multiset'");
    }
    return SymmetryGroup::finite(std::move(elements), semantics == "group"
                                                          ? group::Semantics::kGroup
                                                          : group::Semantics::kMultiset);
  }
  if (kind == "tensor") {
    if (!j.contains("g1") || !j.contains("g2")) throw Error("tensor descriptor needs g1 and g2");
    return SymmetryGroup::tensor(group_from_json(j["g1"]), group_from_json(j["g2"]));
  }
  if (kind == "direct_sum") {
    if (!j.contains("parts") || !j["parts"].is_array()) {
      throw Error("direct_sum descriptor needs a 'parts' array");
    }
    std::vector<SymmetryGroup> parts;
    for (const auto& p : j["parts"]) parts.push_back(group_from_json(p));
    return SymmetryGroup::direct_sum(std::move(parts));
  }
  if (kind == "conjugated") {
    if (!j.contains("inner")) throw Error("conjugated descriptor needs 'inner'");
    return SymmetryGroup::conjugated(unitary_field(j, "w"), group_from_json(j["inner"]));
  }
  throw Error("unknown group kind '" + kind + "'");
}

nlohmann::json group_to_json(const SymmetryGroup& g) {
  using nlohmann::json;
  return std::visit(
      Overloaded{
          [](const group::FullUnitary& v) -> json { return {{"kind", "full_unitary"}, {"n", v.n}}; },
          [](const group::ConjugatedTorus& v) -> json {
            return {{"kind", "conjugated_torus"}, {"w", matrix_to_json(v.basis.matrix())}};
          },
          [](const group::Permutations& v) -> json { return {{"kind", "permutations"}, {"n", v.n}}; },
          [](const group::SignFlips& v) -> json { return {{"kind", "signflips"}, {"n", v.n}}; },
          [](const group::SignedPermutations& v) -> json {
            return {{"kind", "signed_permutations"}, {"n", v.n}};
          },
          [](const group::FiniteMultiset& v) -> json {
            json elements = json::array();
            for (const auto& e : v.elements) elements.push_back(matrix_to_json(e.matrix()));
            return {{"kind", "finite"},
                    {"elements", elements},
                    {"semantics", v.semantics == group::Semantics::kGroup ? "group" : "multiset"}};
          },
          [](const group::TensorProduct& v) -> json {
            return {{"kind", "tensor"}, {"g1", group_to_json(*v.first)}, {"g2", group_to_json(*v.second)}};
          },
          [](const group::DirectSum& v) -> json {
            json parts = json::array();
            for (const auto& p : v.parts) parts.push_back(group_to_json(p));
            return {{"kind", "direct_sum"}, {"parts", parts}};
          },
          [](const group::Conjugated& v) -> json {
            return {{"kind", "conjugated"},
                    {"w", matrix_to_json(v.basis.matrix())},
                    {"inner", group_to_json(*v.inner)}};
          },
          [](const group::Trivial& v) -> json { return {{"kind", "trivial"}, {"n", v.n}}; },
      },
      g.variant());
}

nlohmann::json reduced_set_to_json(const ReducedSet& s) {
  using nlohmann::json;
  json out = std::visit(
      Overloaded{
          [](const reduced::Singleton& v) -> json {
            return {{"kind", "singleton"}, {"q", matrix_to_json(v.point.matrix())}};
          },
          [](const reduced::ConjugatedSimplex& v) -> json {
            return {{"kind", "conjugated_simplex"}, {"w", matrix_to_json(v.basis.matrix())}};
          },
          [](const reduced::BlockKron& v) -> json {
            return {{"kind", "block_kron"},
                    {"inner", reduced_set_to_json(*v.inner)},
                    {"mixed_dim", v.mixed_dim},
                    {"mixed_first", v.mixed_first}};
          },
          [](const reduced::WeightedDirectSum& v) -> json {
            json blocks = json::array();
            for (const auto& b : v.blocks) blocks.push_back(reduced_set_to_json(b));
            return {{"kind", "weighted_direct_sum"}, {"blocks", blocks}};
          },
          [](const reduced::FullSet& v) -> json { return {{"kind", "full_set"}, {"n", v.n}}; },
          [](const reduced::Conjugated& v) -> json {
            return {{"kind", "conjugated"},
                    {"w", matrix_to_json(v.basis.matrix())},
                    {"inner", reduced_set_to_json(*v.inner)}};
          },
      },
      s.variant());
  out["description"] = s.describe();
  out["free_dimension"] = s.free_dimension();
  return out;
}

}  // namespace symcap
