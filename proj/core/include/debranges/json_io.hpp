#pragma once

// JSON forms of models and kernels. Complex numbers are [re, im] arrays.
//
// Models carry a "variant" discriminator:
//   {"variant": "exponential", "rate": a}                       z -> e^{i a z}
//   {"variant": "polynomial", "coefficients": [[re, im], ...]}  ascending powers
//   {"variant": "kernel_section", "kernel": K, "node": [re, im]}
//   {"variant": "linear_combination", "weights": [...], "terms": [...]}
//   {"variant": "product", "factors": [...]}
//   {"variant": "zero_divided", "numerator": M, "node": [re, im]}
//
// Kernels carry a "kind" discriminator:
//   {"kind": "de_branges", "E": M}
//   {"kind": "band", "c": c, "d": d, "ambient": K?}
//   {"kind": "shifted", "base": K, "shift": beta, "ambient": K?}
//   {"kind": "pinned", "base": K, "node": [re, im]}
//   {"kind": "projected", "ambient": K, "spans": [M, ...], "rank_tolerance": t}

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "debranges/entire_model.hpp"

namespace debranges {

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const EntireModel& m);
EntireModel model_from_json(const nlohmann::json& j);

nlohmann::json kernel_to_json(const Kernel& k);
KernelPtr kernel_from_json(const nlohmann::json& j);

/// Matrices and vectors as nested arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
nlohmann::json vector_to_json(const Eigen::VectorXcd& v);

}  // namespace debranges
