#include "kobayashi/cli.hpp"

#include "kobayashi/boundary.hpp"
#include "kobayashi/detectors.hpp"
#include "kobayashi/dynamics.hpp"
#include "kobayashi/errors.hpp"
#include "kobayashi/io.hpp"
#include "kobayashi/metrics.hpp"
#include "kobayashi/rescaling.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace kobayashi {

namespace {

struct Common {
  std::string config_path;
  std::string output_path;
  std::string format = "json";
};

struct RunConfig {
  Tolerances tol;
  std::string format;
  std::string output_path;
  long long seed = 0;
};

RunConfig load_config(const Common& c) {
  RunConfig rc;
  rc.format = c.format;
  rc.output_path = c.output_path;
  if (c.config_path.empty()) return rc;
  Json j = read_json_file(c.config_path);
  if (!j.is_object()) fail(ErrorCode::InvalidSpec, "config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "tolerances") {
      apply_tolerance_overrides(it.value(), rc.tol);
    } else if (k == "format") {
      if (!it.value().is_string()) fail(ErrorCode::InvalidSpec, "\"format\" must be a string");
      rc.format = it.value().get<std::string>();
    } else if (k == "output") {
      if (!it.value().is_string()) fail(ErrorCode::InvalidSpec, "\"output\" must be a string");
      if (rc.output_path.empty()) rc.output_path = it.value().get<std::string>();
    } else if (k == "seed") {
      if (!it.value().is_number_integer()) fail(ErrorCode::InvalidSpec, "\"seed\" must be an integer");
      rc.seed = it.value().get<long long>();
    } else {
      fail(ErrorCode::InvalidSpec, "unknown config key \"" + k + "\"");
    }
  }
  if (rc.format != "json" && rc.format != "csv") fail(ErrorCode::InvalidSpec, "format must be json or csv");
  return rc;
}

Json header(const std::string& command, const Json& args, const RunConfig& rc) {
  Json tol = tolerances_to_json(rc.tol);
  Json record{{"command", command}, {"args", args}, {"tolerances", tol}, {"seed", rc.seed}};
  return Json{{"tool", "kobayashi"},
              {"version", kVersion},
              {"command", command},
              {"config_hash", fnv1a_hex(dump_json(record, 0))},
              {"seed", rc.seed},
              {"tolerances", tol}};
}

std::string csv_header_lines(const Json& h) {
  std::string s = "# tool: kobayashi " + std::string(kVersion) + "\n";
  s += "# command: " + h["command"].get<std::string>() + "\n";
  s += "# config_hash: " + h["config_hash"].get<std::string>() + "\n";
  s += "# tolerances: " + dump_json(h["tolerances"], 0) + "\n";
  return s;
}

void emit(const std::string& text, const RunConfig& rc, std::ostream& out) {
  if (rc.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(rc.output_path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidSpec, "cannot write \"" + rc.output_path + "\"");
  f << text;
}

// Nested keys become dotted column names, array elements get their index.
void flatten(const Json& j, const std::string& prefix, std::vector<std::string>& keys,
             std::vector<std::string>& values) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), keys, values);
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "." + std::to_string(k), keys, values);
  } else {
    keys.push_back(prefix);
    values.push_back(j.is_string() ? j.get<std::string>() : j.is_number_float() ? format_number(j.get<double>())
                                                                                 : j.dump());
  }
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t k = 0; k < cells.size(); ++k) s += (k ? "," : "") + cells[k];
  return s + "\n";
}

// JSON document, or for csv one row per element of `rows` (the result itself
// when it is not an array).
void emit_result(const std::string& command, const Json& args, const Json& result, const RunConfig& rc,
                 std::ostream& out) {
  if (rc.format != "csv") {
    Json doc{{"header", header(command, args, rc)}, {"result", result}};
    emit(dump_json(doc) + "\n", rc, out);
    return;
  }
  std::string s = csv_header_lines(header(command, args, rc));
  Json rows = result.is_array() ? result : Json::array({result});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> keys, values;
    flatten(rows[r], "", keys, values);
    if (r == 0) s += csv_row(keys);
    s += csv_row(values);
  }
  emit(s, rc, out);
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(format_number(x)); }

Json kd_json(const KdReport& r) {
  Json disks = Json::array(), planes = Json::array();
  for (const auto& t : r.disk_inclusions) disks.push_back(Json{{"pass", t.pass}, {"margin", num(t.margin)}});
  for (const auto& t : r.plane_exclusions) planes.push_back(Json{{"pass", t.pass}, {"margin", num(t.margin)}});
  return Json{{"disk_inclusions", disks}, {"plane_exclusions", planes}, {"passes", r.passes}};
}

Json fit_json(const ExponentFit& f) {
  return Json{{"exponent", f.exponent},
              {"half_width", f.half_width},
              {"intercept", f.intercept},
              {"range", Json::array({f.range_lo, f.range_hi})},
              {"n_samples", f.n_samples}};
}

Json verdict_json(const SpcVerdict& v) {
  return Json{{"exponent", v.fit.exponent},
              {"half_width", v.fit.half_width},
              {"target", v.target},
              {"verdict", verdict_name(v.verdict)}};
}

std::pair<double, double> parse_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) fail(ErrorCode::InvalidSpec, "range must look like lo:hi");
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidSpec, "cannot parse range \"" + s + "\"");
  }
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "JSON run configuration");
  sub->add_option("--output", c.output_path, "write output to this file");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kobayashi geometry of convex domains"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common common;

  // delta
  std::string domain_path, point, dir;
  auto* delta_cmd = app.add_subcommand("delta", "boundary distance delta(z) or delta(z; v)");
  delta_cmd->add_option("--domain", domain_path, "domain JSON")->required();
  delta_cmd->add_option("--point", point, "point z")->required();
  delta_cmd->add_option("--dir", dir, "complex direction v");
  add_common(delta_cmd, common);

  // dist
  std::string z1s, z2s;
  bool infinitesimal = false;
  auto* dist_cmd = app.add_subcommand("dist", "two-sided bounds on the Kobayashi distance");
  dist_cmd->add_option("--domain", domain_path, "domain JSON")->required();
  dist_cmd->add_option("--z1", z1s, "first point")->required();
  dist_cmd->add_option("--z2", z2s, "second point (or direction with --infinitesimal)")->required();
  dist_cmd->add_flag("--infinitesimal", infinitesimal, "bound k(z1; z2) instead");
  add_common(dist_cmd, common);

  // lyapunov
  std::string model = "siegel", vs = "e2", trange = "2:8";
  int ldim = 2;
  std::size_t nsamples = 64;
  double alpha = 0.0, shift = 0.0;
  auto* lyap_cmd = app.add_subcommand("lyapunov", "exponent of K(gamma_1(t), gamma_2(t+T))");
  lyap_cmd->add_option("--model", model, "model domain")->check(CLI::IsMember({"siegel"}));
  lyap_cmd->add_option("--d", ldim, "dimension");
  lyap_cmd->add_option("--v", vs, "base point of the second ray in span{e2..ed}");
  lyap_cmd->add_option("--alpha", alpha, "real offset of the second ray");
  lyap_cmd->add_option("--trange", trange, "t_min:t_max");
  lyap_cmd->add_option("--n", nsamples, "number of samples");
  lyap_cmd->add_option("--shift", shift, "time shift T");
  add_common(lyap_cmd, common);

  // rescale
  std::string xis, basepoint;
  int steps = 8;
  auto* resc_cmd = app.add_subcommand("rescale", "blow-up sequence or normalisation into K_d");
  resc_cmd->add_option("--domain", domain_path, "domain JSON")->required();
  resc_cmd->add_option("--xi", xis, "boundary point for the blow-up");
  resc_cmd->add_option("--v", dir, "complex tangential direction at xi");
  resc_cmd->add_option("--steps", steps, "number of rescaling steps");
  resc_cmd->add_option("--normalize-at", basepoint, "normalise at this interior point instead");
  add_common(resc_cmd, common);

  // spc
  std::size_t spc_samples = 16;
  std::string center;
  std::vector<std::string> extra;
  auto* spc_cmd = app.add_subcommand("spc", "tangential boundary exponent scan");
  spc_cmd->add_option("--domain", domain_path, "domain JSON")->required();
  spc_cmd->add_option("--samples", spc_samples, "boundary samples");
  spc_cmd->add_option("--center", center, "interior point used to sample the boundary");
  spc_cmd->add_option("--point", extra, "extra boundary point to scan (repeatable)");
  add_common(spc_cmd, common);

  // hausdorff
  std::string a_path, b_path;
  double R = 1.0;
  std::size_t h_samples = 0;
  auto* haus_cmd = app.add_subcommand("hausdorff", "local Hausdorff distance");
  haus_cmd->add_option("--a", a_path, "first domain JSON")->required();
  haus_cmd->add_option("--b", b_path, "second domain JSON")->required();
  haus_cmd->add_option("--R", R, "clip radius")->required();
  haus_cmd->add_option("--samples", h_samples, "boundary samples per body");
  add_common(haus_cmd, common);

  // bergman
  int bdim = 2;
  std::string bz = "0", bv = "e1";
  auto* berg_cmd = app.add_subcommand("bergman", "holomorphic sectional curvature of the ball's Bergman metric");
  berg_cmd->add_option("--d", bdim, "dimension");
  berg_cmd->add_option("--z", bz, "point");
  berg_cmd->add_option("--v", bv, "direction");
  add_common(berg_cmd, common);

  // squeeze
  auto* sq_cmd = app.add_subcommand("squeeze", "affine lower bound on the squeezing function");
  sq_cmd->add_option("--domain", domain_path, "domain JSON")->required();
  sq_cmd->add_option("--point", point, "interior point")->required();
  add_common(sq_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << dump_json(Json{{"error", "UsageError"}, {"message", e.what()}}, 0) << "\n";
    return 2;
  }

  try {
    RunConfig rc = load_config(common);
    const Tolerances& tol = rc.tol;
    // Every argument given on the command line goes into the config hash.
    Json args = Json::object();
    for (int k = 1; k < argc; ++k) args[std::to_string(k)] = argv[k];

    if (*delta_cmd) {
      auto dom = load_domain(domain_path);
      CVector z = parse_vector(point, dom->dim());
      Json res;
      if (dir.empty()) {
        res["delta"] = delta(*dom, z, tol);
      } else {
        auto d = delta_dir_detail(*dom, z, parse_vector(dir, dom->dim()), tol);
        res["delta_dir"] = d ? Json(d->value) : Json("inf");
        if (d) res["theta"] = d->theta;
      }
      emit_result("delta", args, res, rc, out);
    } else if (*dist_cmd) {
      auto dom = load_domain(domain_path);
      CVector z1 = parse_vector(z1s, dom->dim()), z2 = parse_vector(z2s, dom->dim());
      DistanceBounds b = infinitesimal ? infinitesimal_estimate(*dom, z1, z2, tol) : dist_bounds(*dom, z1, z2, tol);
      Json res{{"lower", num(b.lower)},
               {"upper", num(b.upper)},
               {"witness", b.lower_witness + "; " + b.upper_witness},
               {"separated", b.separated}};
      emit_result(infinitesimal ? "dist --infinitesimal" : "dist", args, res, rc, out);
    } else if (*lyap_cmd) {
      auto [t0, t1] = parse_range(trange);
      CVector v = parse_vector(vs, ldim);
      auto g1 = GeodesicRay::siegel_vertical(zeros(ldim));
      auto g2 = GeodesicRay::siegel_vertical(v, alpha);
      if (rc.format == "csv") {
        auto curve = pair_distance_curve(g1, g2, linspace(t0, t1, nsamples), shift);
        std::string s = csv_header_lines(header("lyapunov", args, rc)) + "t,distance,path\n";
        for (const auto& c : curve) s += format_number(c.t) + "," + format_number(c.distance) + "," + c.path + "\n";
        emit(s, rc, out);
      } else {
        ExponentFit f = lyapunov_exponent(g1, g2, t0, t1, nsamples, shift);
        emit_result("lyapunov", args, fit_json(f), rc, out);
      }
    } else if (*resc_cmd) {
      auto dom = load_domain(domain_path);
      const int d = dom->dim();
      if (!basepoint.empty()) {
        Normalization nrm = frankel_normalize(*dom, parse_vector(basepoint, d), tol);
        Json xs = Json::array(), ds = Json::array();
        for (const auto& x : nrm.xis) xs.push_back(vector_to_json(x));
        for (double v : nrm.deltas) ds.push_back(v);
        emit_result("rescale",
                  args, Json{{"affine", affine_to_json(nrm.map)}, {"kd", kd_json(nrm.report)}, {"xi", xs}, {"delta", ds}},
                  rc, out);
      } else {
        if (xis.empty() || dir.empty()) fail(ErrorCode::InvalidSpec, "rescale needs --xi and --v (or --normalize-at)");
        auto seq = blowup_sequence(dom, parse_vector(xis, d), steps, parse_vector(dir, d), tol);
        Json arr = Json::array();
        for (const auto& st : seq) {
          Json dh = Json::object();
          for (std::size_t j = 0; j < kBlowupRadii.size(); ++j) {
            char key[16];
            std::snprintf(key, sizeof key, "%g", kBlowupRadii[j]);
            dh[key] = std::isnan(st.dH[j]) ? Json(nullptr) : Json(st.dH[j]);
          }
          arr.push_back(Json{{"n", st.n}, {"affine", affine_to_json(st.map)}, {"kd", kd_json(st.kd)}, {"dH", dh}});
        }
        emit_result("rescale", args, arr, rc, out);
      }
    } else if (*spc_cmd) {
      auto dom = load_domain(domain_path);
      ScanOptions opt;
      if (!center.empty()) opt.center = parse_vector(center, dom->dim());
      for (const auto& p : extra) opt.extra_points.push_back(parse_vector(p, dom->dim()));
      ScanResult r = spc_global_scan(*dom, spc_samples, opt, tol);
      if (rc.format == "csv") {
        std::string s = csv_header_lines(header("spc", args, rc)) + "xi_index,dir_index,exponent,half_width\n";
        for (const auto& row : r.rows)
          s += std::to_string(row.xi_index) + "," + std::to_string(row.dir_index) + "," + format_number(row.exponent) +
               "," + format_number(row.half_width) + "\n";
        emit(s, rc, out);
      } else {
        std::size_t consistent = 0;
        for (const auto& row : r.rows) {
          ExponentFit f;
          f.exponent = row.exponent;
          f.half_width = row.half_width;
          if (classify_exponent(f, 0.5, tol) == Verdict::ConsistentWithSPC) ++consistent;
        }
        Json res{{"worst", verdict_json(r.worst)},
                 {"witness", Json{{"xi", vector_to_json(r.witness_xi)}, {"v", vector_to_json(r.witness_v)}}},
                 {"n_fits", r.rows.size()},
                 {"n_consistent", consistent},
                 {"all_consistent", consistent == r.rows.size()},
                 {"skipped", r.skipped}};
        emit_result("spc", args, res, rc, out);
      }
    } else if (*haus_cmd) {
      auto A = load_domain(a_path), B = load_domain(b_path);
      double h = local_hausdorff(*A, *B, R, h_samples ? h_samples : tol.hausdorff_samples, tol);
      emit_result("hausdorff", args, Json{{"distance", h}, {"R", R}}, rc, out);
    } else if (*berg_cmd) {
      double H = ball_bergman_curvature(bdim, parse_vector(bz, bdim), parse_vector(bv, bdim), tol);
      emit_result("bergman", args, Json{{"curvature", H}, {"klembeck", -4.0 / (bdim + 1)}}, rc, out);
    } else if (*sq_cmd) {
      auto dom = load_domain(domain_path);
      double s = squeezing_lower_bound(*dom, parse_vector(point, dom->dim()), tol);
      emit_result("squeeze", args, Json{{"lower_bound", s}}, rc, out);
    }
    return 0;
  } catch (const Error& e) {
    err << dump_json(Json{{"error", std::string(error_name(e.code()))}, {"message", e.what()}}, 0) << "\n";
    return is_numeric_failure(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    err << dump_json(Json{{"error", "InternalError"}, {"message", e.what()}}, 0) << "\n";
    return 3;
  }
}

}  // namespace kobayashi
