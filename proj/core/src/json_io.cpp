#include "debranges/json_io.hpp"

#include "debranges/kernels.hpp"
#include "debranges/paley_wiener.hpp"

namespace debranges {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ConfigError(std::string("missing field '") + name + "'");
  return j.at(name);
}

double number(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number()) throw ConfigError(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::vector<Complex> complex_list(const json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of complex numbers");
  std::vector<Complex> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

std::vector<EntireModel> model_list(const json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of models");
  std::vector<EntireModel> out;
  for (const auto& e : j) out.push_back(model_from_json(e));
  return out;
}

AmbientPtr ambient_from_json(const json& j) {
  auto k = std::dynamic_pointer_cast<const DeBrangesKernel>(kernel_from_json(j));
  if (!k) throw ConfigError("ambient must be a de_branges kernel");
  return k;
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("complex numbers are [re, im] arrays");
  return {j[0].get<double>(), j[1].get<double>()};
}

json model_to_json(const EntireModel& m) {
  using V = EntireModel::Variant;
  switch (m.variant()) {
    case V::exponential:
      return {{"variant", "exponential"}, {"rate", m.as_exponential().rate}};
    case V::polynomial: {
      json c = json::array();
      for (Complex z : m.as_polynomial().coefficients) c.push_back(complex_to_json(z));
      return {{"variant", "polynomial"}, {"coefficients", std::move(c)}};
    }
    case V::kernel_section: {
      const auto& s = m.as_kernel_section();
      return {{"variant", "kernel_section"}, {"kernel", s.kernel->to_json()}, {"node", complex_to_json(s.node)}};
    }
    case V::linear_combination: {
      const auto& lc = m.as_linear_combination();
      json w = json::array();
      json t = json::array();
      for (Complex z : lc.weights) w.push_back(complex_to_json(z));
      for (const auto& term : lc.terms) t.push_back(model_to_json(term));
      return {{"variant", "linear_combination"}, {"weights", std::move(w)}, {"terms", std::move(t)}};
    }
    case V::product: {
      json f = json::array();
      for (const auto& factor : m.as_product().factors) f.push_back(model_to_json(factor));
      return {{"variant", "product"}, {"factors", std::move(f)}};
    }
    case V::zero_divided:
      return {{"variant", "zero_divided"},
              {"numerator", model_to_json(m.divided_numerator())},
              {"node", complex_to_json(m.divided_node())}};
  }
  throw UnsupportedRepresentation("unknown model variant");
}

EntireModel model_from_json(const json& j) {
  const json& tag = field(j, "variant");
  if (!tag.is_string()) throw ConfigError("'variant' must be a string");
  const auto name = tag.get<std::string>();
  if (name == "exponential") return EntireModel::exponential(number(j, "rate"));
  if (name == "polynomial") return EntireModel::polynomial(complex_list(field(j, "coefficients")));
  if (name == "kernel_section")
    return EntireModel::kernel_section(kernel_from_json(field(j, "kernel")), complex_from_json(field(j, "node")));
  if (name == "linear_combination")
    return EntireModel::linear_combination(complex_list(field(j, "weights")), model_list(field(j, "terms")));
  if (name == "product") return EntireModel::product(model_list(field(j, "factors")));
  if (name == "zero_divided")
    return EntireModel::zero_divided(model_from_json(field(j, "numerator")), complex_from_json(field(j, "node")));
  throw ConfigError("unknown model variant '" + name + "'");
}

json kernel_to_json(const Kernel& k) { return k.to_json(); }

KernelPtr kernel_from_json(const json& j) {
  const json& tag = field(j, "kind");
  if (!tag.is_string()) throw ConfigError("'kind' must be a string");
  const auto kind = tag.get<std::string>();
  if (kind == "de_branges") return std::make_shared<const DeBrangesKernel>(model_from_json(field(j, "E")));
  if (kind == "band") {
    AmbientPtr ambient = j.contains("ambient") ? ambient_from_json(j.at("ambient")) : nullptr;
    return std::make_shared<const BandKernel>(number(j, "c"), number(j, "d"), std::move(ambient));
  }
  if (kind == "shifted") {
    AmbientPtr ambient = j.contains("ambient") ? ambient_from_json(j.at("ambient")) : nullptr;
    return std::make_shared<const ShiftedKernel>(kernel_from_json(field(j, "base")), number(j, "shift"),
                                                 std::move(ambient));
  }
  if (kind == "pinned")
    return std::make_shared<const PinnedKernel>(kernel_from_json(field(j, "base")), complex_from_json(field(j, "node")));
  if (kind == "projected")
    return std::make_shared<const ProjectedKernel>(ambient_from_json(field(j, "ambient")),
                                                   model_list(field(j, "spans")), number(j, "rank_tolerance"));
  throw ConfigError("unknown kernel kind '" + kind + "'");
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

}  // namespace debranges
