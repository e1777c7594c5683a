#pragma once

#include <json.hpp>

#include "symcap/matcore.hpp"

namespace symcap {

/// Parses the matrix literal format: an array of rows whose entries are either a real number
/// `x` (meaning x + 0i) or a two-element array `[re, im]`.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Inverse of `matrix_from_json`; purely real entries are written as plain numbers.
nlohmann::json matrix_to_json(const ComplexMatrix& m);

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

}  // namespace symcap
