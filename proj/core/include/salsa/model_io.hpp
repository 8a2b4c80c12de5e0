#pragma once

#include <string>

#include "salsa/salsa.hpp"

namespace salsa {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON model document. Reals are written as JSON numbers with
// round-trip-exact decimal text, so load(save(m)) reproduces every double
// bit for bit.
std::string model_to_json(const FittedSalsa& model);
FittedSalsa model_from_json(const std::string& text);

void save_model(const std::string& path, const FittedSalsa& model);
FittedSalsa load_model(const std::string& path);

}  // namespace salsa
