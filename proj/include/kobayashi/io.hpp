#pragma once

#include "kobayashi/config.hpp"
#include "kobayashi/domain.hpp"

#include <json.hpp>

#include <string>

namespace kobayashi {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

// "%.17g"; non-finite values become the strings "inf", "-inf", "nan".
std::string format_number(double x);

// Serialises with every double printed to 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);

Json complex_to_json(cd z);
Json vector_to_json(const CVector& z);
cd complex_from_json(const Json& j);
CVector vector_from_json(const Json& j, int dim);

// Points and directions on the command line. Either dim comma-separated
// components ("0.5", "1:-2" for 1 - 2i, "i", "3i"), or a sum of shorthand
// terms "coef*e<k>@r=x" such as "i*e1@r=2" (= i e^2 e_1) or "e1+0.5*e2".
CVector parse_vector(const std::string& text, int dim);

// Domain documents: {"dim": d, "variant": {"type": ..., ...}, "clip_radius": r}.
DomainPtr domain_from_json(const Json& j);
Json domain_to_json(const ConvexDomain& domain);
DomainPtr load_domain(const std::string& path);

Json affine_to_json(const AffineMap& map);

// Strict: unknown keys or wrong types are InvalidSpec errors.
void apply_tolerance_overrides(const Json& j, Tolerances& tol);
Json tolerances_to_json(const Tolerances& tol);

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

Json read_json_file(const std::string& path);

}  // namespace kobayashi
