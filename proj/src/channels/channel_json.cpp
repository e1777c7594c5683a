#include "symcap/channels.hpp"
#include "symcap/matrix_json.hpp"

namespace symcap {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

EntryLaw law_from_json(const json& j) {
  if (j.is_string()) return law_from_json(json{{"law", j}});
  const std::string name = j.at("law").get<std::string>();
  const double param = j.value("param", 1.0);
  if (name == "complex_gaussian") return EntryLaw::complex_gaussian(param);
  if (name == "symmetric_two_point") return EntryLaw::symmetric_two_point(param);
  if (name == "uniform_phase_radius") return EntryLaw::uniform_phase_radius(param);
  throw Error("unknown entry law '" + name + "'");
}

json law_to_json(const EntryLaw& law) {
  const char* name = law.kind == EntryLaw::Kind::kComplexGaussian     ? "complex_gaussian"
                     : law.kind == EntryLaw::Kind::kSymmetricTwoPoint ? "symmetric_two_point"
                                                                      : "uniform_phase_radius";
  return {{"law", name}, {"param", law.param}};
}

}  // namespace

ChannelModel channel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error("channel descriptor needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    return ChannelModel::gaussian(j.at("m").get<int>(), j.at("n").get<int>(), j.value("scale", 1.0));
  }
  if (kind == "ricean") {
    return ChannelModel::ricean(matrix_from_json(j.at("hbar")), j.value("scale", 1.0),
                                j.value("sv_tol", 1e-9));
  }
  if (kind == "sec5_alpha") return ChannelModel::section_five_alpha(j.at("alpha").get<double>());
  if (kind == "sec5_inf") return ChannelModel::section_five_inf();
  if (kind == "column_symmetric") {
    std::vector<EntryLaw> laws;
    for (const auto& l : j.at("column_laws")) laws.push_back(law_from_json(l));
    return ChannelModel::column_symmetric(UnitaryMatrix(matrix_from_json(j.at("w_m"))),
                                          UnitaryMatrix(matrix_from_json(j.at("w_n"))),
                                          std::move(laws));
  }
  if (kind == "rank_one") {
    return ChannelModel::rank_one_product(j.at("m").get<int>(), j.at("n").get<int>(),
                                          law_from_json(j.value("law_m", json("complex_gaussian"))),
                                          law_from_json(j.value("law_n", json("complex_gaussian"))));
  }
  if (kind == "block_invariant") {
    const int d = j.at("d").get<int>();
    const ComplexMatrix mixing =
        j.contains("mixing") ? matrix_from_json(j.at("mixing")) : ComplexMatrix::Identity(d, d);
    return ChannelModel::block_invariant(d, j.at("n").get<int>(), j.at("m").get<int>(), mixing);
  }
  if (kind == "custom") {
    return ChannelModel::named_custom(j.at("sampler").get<std::string>(), j.value("m", 2),
                                      j.value("n", 2));
  }
  throw Error("unknown channel kind '" + kind + "'");
}

json channel_to_json(const ChannelModel& model) {
  return std::visit(
      Overloaded{
          [](const channel::Gaussian& g) -> json {
            return {{"kind", "gaussian"}, {"m", g.m}, {"n", g.n}, {"scale", g.scale}};
          },
          [](const channel::ColumnSymmetric& c) -> json {
            json laws = json::array();
            for (const auto& l : c.column_laws) laws.push_back(law_to_json(l));
            return {{"kind", "column_symmetric"},
                    {"w_m", matrix_to_json(c.w_m.matrix())},
                    {"w_n", matrix_to_json(c.w_n.matrix())},
                    {"column_laws", laws}};
          },
          [](const channel::RankOneProduct& r) -> json {
            return {{"kind", "rank_one"}, {"m", r.m}, {"n", r.n},
                    {"law_m", law_to_json(r.law_m)}, {"law_n", law_to_json(r.law_n)}};
          },
          [](const channel::Ricean& r) -> json {
            return {{"kind", "ricean"}, {"hbar", matrix_to_json(r.hbar)}, {"scale", r.scale},
                    {"sv_tol", r.sv_tol}};
          },
          [](const channel::BlockInvariant& b) -> json {
            return {{"kind", "block_invariant"}, {"d", b.d}, {"n", b.n}, {"m", b.m},
                    {"mixing", matrix_to_json(b.mixing)}};
          },
          [](const channel::SectionFiveAlpha& a) -> json {
            return {{"kind", "sec5_alpha"}, {"alpha", a.alpha}};
          },
          [](const channel::SectionFiveInf&) -> json { return {{"kind", "sec5_inf"}}; },
          [](const channel::Custom& c) -> json {
            return {{"kind", "custom"}, {"sampler", c.name}, {"m", c.m}, {"n", c.n}};
          },
      },
      model.variant());
}

}  // namespace symcap
