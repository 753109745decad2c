#include "kobayashi/io.hpp"

#include "kobayashi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace kobayashi {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump_into(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump_into(it.value(), indent, depth + 1, out);
      }
      out += nl + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays stay on one line.
      bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += "[";
      if (!flat) out += nl;
      bool first = true;
      for (const auto& e : j) {
        if (!first) {
          out += flat ? ", " : ",";
          if (!flat) out += nl;
        }
        first = false;
        if (!flat) out += pad;
        dump_into(e, indent, depth + 1, out);
      }
      if (!flat) out += nl + close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      double x = j.get<double>();
      out += std::isfinite(x) ? format_number(x) : "\"" + format_number(x) + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::InvalidSpec, what); }

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) bad(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) bad("unknown key \"" + it.key() + "\" in " + where);
  }
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

Json complex_to_json(cd z) {
  Json a = Json::array();
  a.push_back(z.real());
  a.push_back(z.imag());
  return a;
}

Json vector_to_json(const CVector& z) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < z.size(); ++i) a.push_back(complex_to_json(z(i)));
  return a;
}

cd complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) bad("complex numbers are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

CVector vector_from_json(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) bad("vector must have " + std::to_string(dim) + " entries");
  CVector z(dim);
  for (int i = 0; i < dim; ++i) z(i) = complex_from_json(j[i]);
  return z;
}

namespace {

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    bad("cannot parse number \"" + s + "\"");
  }
  if (pos != s.size()) bad("cannot parse number \"" + s + "\"");
  return v;
}

// "1.5", "1:-2", "i", "-i", "3i", "2.5e-3i"
cd parse_scalar(const std::string& s) {
  if (s.empty()) bad("empty component");
  if (auto colon = s.find(':'); colon != std::string::npos)
    return {parse_real(s.substr(0, colon)), parse_real(s.substr(colon + 1))};
  if (s.back() == 'i') {
    std::string c = s.substr(0, s.size() - 1);
    if (c.empty() || c == "+") return {0.0, 1.0};
    if (c == "-") return {0.0, -1.0};
    return {0.0, parse_real(c)};
  }
  return {parse_real(s), 0.0};
}

std::vector<std::string> split_terms(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t k = 0; k < s.size(); ++k) {
    char ch = s[k];
    bool exponent_sign = k >= 2 && (s[k - 1] == 'e' || s[k - 1] == 'E') &&
                         (std::isdigit(static_cast<unsigned char>(s[k - 2])) || s[k - 2] == '.');
    if (ch == '+' && !exponent_sign && !cur.empty()) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

CVector parse_vector(const std::string& raw, int dim) {
  check_dim(dim);
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) bad("empty vector");

  static const std::regex term(R"(^(?:(.*)\*)?(-?)e([0-9]+)(?:@r=(.+))?$)");
  auto terms = split_terms(text);
  bool shorthand = text.find(',') == std::string::npos;
  for (const auto& t : terms) shorthand = shorthand && std::regex_match(t, term);
  if (shorthand) {
    CVector z = CVector::Zero(dim);
    for (const auto& t : terms) {
      std::smatch m;
      std::regex_match(t, m, term);
      cd coef = m[1].matched ? parse_scalar(m[1].str()) : cd(1.0, 0.0);
      if (m[2].length() > 0) coef = -coef;
      int k = std::stoi(m[3].str());
      if (k < 1 || k > dim) bad("basis index e" + m[3].str() + " out of range for C^" + std::to_string(dim));
      if (m[4].matched) coef *= std::exp(parse_real(m[4].str()));
      z(k - 1) += coef;
    }
    return z;
  }

  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (!text.empty() && text.back() == ',') parts.push_back("");
  if (static_cast<int>(parts.size()) != dim)
    bad("vector \"" + raw + "\" has " + std::to_string(parts.size()) + " components, expected " + std::to_string(dim));
  CVector z(dim);
  for (int i = 0; i < dim; ++i) z(i) = parse_scalar(parts[i]);
  return z;
}

DomainPtr domain_from_json(const Json& j) {
  check_keys(j, {"dim", "variant", "clip_radius"}, "domain");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) bad("domain needs an integer \"dim\"");
  const int d = j["dim"].get<int>();
  check_dim(d);
  if (!j.contains("variant")) bad("domain needs a \"variant\"");
  const Json& v = j["variant"];
  if (!v.is_object() || !v.contains("type") || !v["type"].is_string()) bad("variant needs a string \"type\"");
  const std::string type = v["type"].get<std::string>();
  double clip = j.contains("clip_radius") ? number(j["clip_radius"], "clip_radius") : 1e6;

  DomainPtr out;
  if (type == "ball") {
    check_keys(v, {"type", "radius", "center"}, "ball variant");
    double r = v.contains("radius") ? number(v["radius"], "radius") : 1.0;
    CVector c = v.contains("center") ? vector_from_json(v["center"], d) : zeros(d);
    out = std::make_shared<ConvexDomain>(d, Ball{r, c}, clip);
  } else if (type == "half_plane_product") {
    check_keys(v, {"type"}, "half_plane_product variant");
    out = std::make_shared<ConvexDomain>(d, HalfPlaneProduct{}, clip);
  } else if (type == "siegel") {
    check_keys(v, {"type"}, "siegel variant");
    out = std::make_shared<ConvexDomain>(d, Siegel{}, clip);
  } else if (type == "power_epigraph") {
    check_keys(v, {"type", "exponents"}, "power_epigraph variant");
    if (!v.contains("exponents") || !v["exponents"].is_array()) bad("power_epigraph needs \"exponents\"");
    std::vector<int> m;
    for (const auto& e : v["exponents"]) {
      if (!e.is_number_integer()) bad("exponents must be integers");
      m.push_back(e.get<int>());
    }
    out = std::make_shared<ConvexDomain>(d, PowerEpigraph{m}, clip);
  } else if (type == "polytope") {
    check_keys(v, {"type", "faces"}, "polytope variant");
    if (!v.contains("faces") || !v["faces"].is_array()) bad("polytope needs \"faces\"");
    std::vector<HalfSpace> faces;
    for (const auto& f : v["faces"]) {
      check_keys(f, {"normal", "offset"}, "polytope face");
      if (!f.contains("normal") || !f.contains("offset")) bad("faces need \"normal\" and \"offset\"");
      faces.push_back({vector_from_json(f["normal"], d), number(f["offset"], "offset")});
    }
    out = std::make_shared<ConvexDomain>(d, Polytope{faces}, clip);
  } else if (type == "unit_cube") {
    check_keys(v, {"type"}, "unit_cube variant");
    out = with_clip_radius(make_unit_cube(d), clip);
  } else if (type == "polydisk") {
    check_keys(v, {"type"}, "polydisk variant");
    out = with_clip_radius(make_polydisk(d), clip);
  } else if (type == "ellipsoid") {
    check_keys(v, {"type", "semi_axes"}, "ellipsoid variant");
    if (!v.contains("semi_axes") || !v["semi_axes"].is_array() || static_cast<int>(v["semi_axes"].size()) != d)
      bad("ellipsoid needs " + std::to_string(d) + " \"semi_axes\"");
    std::vector<double> axes;
    for (const auto& a : v["semi_axes"]) axes.push_back(number(a, "semi axis"));
    out = with_clip_radius(make_ellipsoid(axes), clip);
  } else if (type == "affine_image") {
    check_keys(v, {"type", "matrix", "translation", "source"}, "affine_image variant");
    if (!v.contains("matrix") || !v["matrix"].is_array() || static_cast<int>(v["matrix"].size()) != d * d)
      bad("affine_image needs a row-major \"matrix\" of " + std::to_string(d * d) + " [re, im] pairs");
    CMatrix L(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) L(r, c) = complex_from_json(v["matrix"][r * d + c]);
    CVector b = v.contains("translation") ? vector_from_json(v["translation"], d) : zeros(d);
    if (!v.contains("source")) bad("affine_image needs a \"source\" domain");
    DomainPtr src = domain_from_json(v["source"]);
    out = std::make_shared<ConvexDomain>(d, AffineImage{AffineMap(L, b), src}, clip);
  } else {
    bad("unknown variant type \"" + type + "\"");
  }
  if (out->dim() != d) bad("variant dimension does not match \"dim\"");
  return out;
}

Json domain_to_json(const ConvexDomain& domain) {
  Json v;
  std::visit(
      [&](const auto& var) {
        using T = std::decay_t<decltype(var)>;
        if constexpr (std::is_same_v<T, Ball>) {
          v["type"] = "ball";
          v["radius"] = var.radius;
          v["center"] = vector_to_json(var.center);
        } else if constexpr (std::is_same_v<T, HalfPlaneProduct>) {
          v["type"] = "half_plane_product";
        } else if constexpr (std::is_same_v<T, Siegel>) {
          v["type"] = "siegel";
        } else if constexpr (std::is_same_v<T, PowerEpigraph>) {
          v["type"] = "power_epigraph";
          v["exponents"] = var.exponents;
        } else if constexpr (std::is_same_v<T, Polytope>) {
          v["type"] = "polytope";
          v["faces"] = Json::array();
          for (const auto& f : var.faces) v["faces"].push_back(Json{{"normal", vector_to_json(f.normal)}, {"offset", f.offset}});
        } else if constexpr (std::is_same_v<T, ConvexSublevel>) {
          if (var.label == "Polydisk")
            v["type"] = "polydisk";
          else
            bad("domain \"" + var.label + "\" is defined by a callable and cannot be serialised");
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          v["type"] = "affine_image";
          Json m = Json::array();
          const CMatrix L = var.map.linear_part();
          for (Eigen::Index r = 0; r < L.rows(); ++r)
            for (Eigen::Index c = 0; c < L.cols(); ++c) m.push_back(complex_to_json(L(r, c)));
          v["matrix"] = m;
          v["translation"] = vector_to_json(var.map.translation_part());
          v["source"] = domain_to_json(*var.source);
        }
      },
      domain.variant());
  Json j;
  j["dim"] = domain.dim();
  j["variant"] = v;
  j["clip_radius"] = domain.clip_radius();
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad("malformed JSON in \"" + path + "\": " + e.what());
  }
}

DomainPtr load_domain(const std::string& path) { return domain_from_json(read_json_file(path)); }

Json affine_to_json(const AffineMap& map) {
  Json rows = Json::array();
  const CMatrix& L = map.linear_part();
  for (Eigen::Index r = 0; r < L.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < L.cols(); ++c) row.push_back(complex_to_json(L(r, c)));
    rows.push_back(row);
  }
  return Json{{"linear", rows}, {"translation", vector_to_json(map.translation_part())}};
}

namespace {

template <class F>
void for_each_tolerance(F&& f) {
  f("initial_step", &Tolerances::initial_step);
  f("max_bisection_steps", &Tolerances::max_bisection_steps);
  f("bisection_rel_width", &Tolerances::bisection_rel_width);
  f("clip_radius", &Tolerances::clip_radius);
  f("theta_grid", &Tolerances::theta_grid);
  f("golden_width", &Tolerances::golden_width);
  f("delta_directions", &Tolerances::delta_directions);
  f("descent_min_step", &Tolerances::descent_min_step);
  f("model_agreement", &Tolerances::model_agreement);
  f("boundary_tol", &Tolerances::boundary_tol);
  f("singular_rel", &Tolerances::singular_rel);
  f("tangential_tol", &Tolerances::tangential_tol);
  f("chain_max_links", &Tolerances::chain_max_links);
  f("chain_tangent_links", &Tolerances::chain_tangent_links);
  f("chain_improvement", &Tolerances::chain_improvement);
  f("disk_shrink", &Tolerances::disk_shrink);
  f("circumscribed_inflate", &Tolerances::circumscribed_inflate);
  f("lower_bound_samples", &Tolerances::lower_bound_samples);
  f("kd_margin_tol", &Tolerances::kd_margin_tol);
  f("kd_disk_samples", &Tolerances::kd_disk_samples);
  f("plane_search_tol", &Tolerances::plane_search_tol);
  f("hausdorff_samples", &Tolerances::hausdorff_samples);
  f("strict_unique_closest", &Tolerances::strict_unique_closest);
  f("closest_tie_tol", &Tolerances::closest_tie_tol);
  f("spc_band_sigmas", &Tolerances::spc_band_sigmas);
  f("spc_max_half_width", &Tolerances::spc_max_half_width);
  f("spc_exponent_floor", &Tolerances::spc_exponent_floor);
  f("squeezing_directions", &Tolerances::squeezing_directions);
  f("bergman_metric_step", &Tolerances::bergman_metric_step);
  f("bergman_curvature_step", &Tolerances::bergman_curvature_step);
}

}  // namespace

void apply_tolerance_overrides(const Json& j, Tolerances& tol) {
  if (!j.is_object()) bad("tolerances must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for_each_tolerance([&](const char* name, auto member) {
      if (it.key() != name) return;
      known = true;
      using T = std::remove_reference_t<decltype(tol.*member)>;
      const Json& v = it.value();
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) bad(std::string("tolerance \"") + name + "\" must be a boolean");
        tol.*member = v.get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
          bad(std::string("tolerance \"") + name + "\" must be a non-negative integer");
        tol.*member = static_cast<T>(v.get<long long>());
      } else {
        if (!v.is_number() || !(v.get<double>() > 0.0)) bad(std::string("tolerance \"") + name + "\" must be positive");
        tol.*member = v.get<double>();
      }
    });
    if (!known) bad("unknown tolerance \"" + it.key() + "\"");
  }
}

Json tolerances_to_json(const Tolerances& tol) {
  Json j;
  for_each_tolerance([&](const char* name, auto member) { j[name] = tol.*member; });
  return j;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kobayashi
