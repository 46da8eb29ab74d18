#include "lipmod/cli.hpp"

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lipmod/estimate.hpp"
#include "lipmod/indexation.hpp"
#include "lipmod/json_io.hpp"
#include "lipmod/linearize.hpp"
#include "lipmod/parallel.hpp"
#include "lipmod/rng.hpp"

namespace lipmod::cli {

namespace {

constexpr const char* kVersion = "lipmod 0.1.0";

struct Common {
  std::string out_path;
  std::string config_path;
  ToleranceConfig tol;
  Json config_json = Json::object();
};

Json manifest(const std::string& command, int argc, const char* const* argv,
              const std::vector<std::pair<std::string, std::string>>& inputs,
              const Common& common, const Json& extra_config = Json::object()) {
  Json m;
  m["command"] = command;
  std::ostringstream argv_line;
  for (int i = 0; i < argc; ++i) argv_line << (i ? " " : "") << argv[i];
  m["argv"] = argv_line.str();
  Json in = Json::object();
  for (const auto& [k, v] : inputs)
    if (!v.empty()) in[k] = v;
  m["inputs"] = std::move(in);
  Json cfg = tolerances_to_json(common.tol);
  for (auto it = extra_config.begin(); it != extra_config.end(); ++it) cfg[it.key()] = *it;
  m["config"] = std::move(cfg);
  m["version"] = kVersion;
  return m;
}

void emit(const Json& report, const Common& common, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (common.out_path.empty())
    out << text;
  else
    write_text_file(common.out_path, text);
}

Vec parse_inline_vector(const std::string& text, const char* what) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error&) {
    throw InputError(std::string(what) + ": expected a JSON array like [1, 2]");
  }
  if (!j.is_array()) throw InputError(std::string(what) + ": expected a JSON array");
  Vec v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

std::vector<double> parse_delta_list(const std::string& text) {
  std::vector<double> deltas;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    deltas.push_back(std::stod(item));
  }
  if (deltas.empty()) throw InputError("--deltas: empty list");
  return deltas;
}

BoxRegion parse_box(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error&) {
    throw InputError("--box: expected JSON like [[lo, hi], ...]");
  }
  Vec center, hw;
  for (const auto& pair : j) {
    const double lo = pair.at(0).get<double>();
    const double hi = pair.at(1).get<double>();
    if (!(hi > lo)) throw InputError("--box: each [lo, hi] needs lo < hi");
    center.push_back(0.5 * (lo + hi));
    hw.push_back(0.5 * (hi - lo));
  }
  return BoxRegion(std::move(center), std::move(hw));
}

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--out", common.out_path, "write the JSON report to this file");
  sub->add_option("--config", common.config_path, "tolerance/sweep configuration file");
}

void load_config(Common& common) {
  if (common.config_path.empty()) return;
  common.config_json = load_json_file(common.config_path);
  common.tol = tolerances_from_json(common.config_json);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  apply_thread_cap_from_env();

  CLI::App app{"Lipschitz moduli of inequality systems under set perturbations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // modulus
  Common c_mod;
  std::string mod_system, mod_x0;
  double mod_box_radius = 1e6;
  auto* mod = app.add_subcommand("modulus", "modulus of the feasible-set mapping at (U, x0)");
  mod->add_option("--system", mod_system, "system JSON file")->required();
  mod->add_option("--x0", mod_x0, "nominal point, e.g. \"[1]\"")->required();
  mod->add_option("--box-radius", mod_box_radius, "box for the Slater margin LP");
  add_common(mod, c_mod);

  // hausdorff
  Common c_h;
  std::string h_a, h_b;
  auto* hd = app.add_subcommand("hausdorff", "Hausdorff distance between coefficient clouds");
  hd->add_option("--a", h_a, "first cloud JSON file")->required();
  hd->add_option("--b", h_b, "second cloud JSON file")->required();
  add_common(hd, c_h);

  // ssc
  Common c_ssc;
  std::string ssc_system;
  double ssc_box_radius = 1e6;
  auto* ssc = app.add_subcommand("ssc", "strong Slater margin of a system");
  ssc->add_option("--system", ssc_system, "system JSON file")->required();
  ssc->add_option("--box-radius", ssc_box_radius, "box for the margin LP");
  add_common(ssc, c_ssc);

  // indexation-check
  Common c_idx;
  std::string idx_u0, idx_u1, idx_u2;
  std::uint64_t idx_seed = 0;
  int idx_exterior = 20;
  auto* idx = app.add_subcommand("indexation-check",
                                 "distance identities of the pair indexation");
  idx->add_option("--system", idx_u0, "nominal cloud U0")->required();
  idx->add_option("--a", idx_u1, "cloud U1")->required();
  idx->add_option("--b", idx_u2, "cloud U2")->required();
  idx->add_option("--seed", idx_seed, "seed for exterior index samples");
  idx->add_option("--samples", idx_exterior, "number of exterior index samples");
  add_common(idx, c_idx);

  // linearize
  Common c_lin;
  std::string lin_instance;
  auto* lin = app.add_subcommand("linearize",
                                 "coefficient set of a convex inequality over its enlargement");
  lin->add_option("--instance", lin_instance, "instance JSON file")->required();
  add_common(lin, c_lin);

  // kappa0
  Common c_k0;
  std::string k0_instance;
  auto* k0 = app.add_subcommand("kappa0", "Lipschitz constant of the linearized instance");
  k0->add_option("--instance", k0_instance, "instance JSON file")->required();
  add_common(k0, c_k0);

  // safe-radius
  Common c_sr;
  std::string sr_instance;
  auto* sr = app.add_subcommand("safe-radius",
                                "largest certified perturbation radius of the linearization");
  sr->add_option("--instance", sr_instance, "instance JSON file")->required();
  add_common(sr, c_sr);

  // gap-check
  Common c_gap;
  std::string gap_a, gap_b, gap_box;
  int gap_grid = 41;
  auto* gap = app.add_subcommand("gap-check",
                                 "linearization gap bound for two convex functions");
  gap->add_option("--a", gap_a, "first function JSON file")->required();
  gap->add_option("--b", gap_b, "second function JSON file")->required();
  gap->add_option("--box", gap_box, "shared box, e.g. \"[[-1,1]]\"")->required();
  gap->add_option("--grid", gap_grid, "grid points per axis");
  add_common(gap, c_gap);

  // convex-check
  Common c_cvx;
  std::string cvx_instance, cvx_a, cvx_b, cvx_x1;
  double cvx_delta = 0.0, cvx_kappa = 0.0;
  bool cvx_gradient_only = false;
  auto* cvx = app.add_subcommand("convex-check",
                                 "Lipschitz estimate for perturbed convex inequalities");
  cvx->add_option("--instance", cvx_instance, "instance JSON file")->required();
  cvx->add_option("--a", cvx_a, "perturbed function f1")->required();
  cvx->add_option("--b", cvx_b, "perturbed function f2")->required();
  cvx->add_option("--x1", cvx_x1, "feasible point of f1")->required();
  cvx->add_option("--delta", cvx_delta, "perturbation size")->required();
  cvx->add_option("--kappa", cvx_kappa, "constant above kappa0")->required();
  cvx->add_flag("--differentiable", cvx_gradient_only,
                "drop the sqrt(delta) image enlargement (differentiable nominal)");
  add_common(cvx, c_cvx);

  // estimate
  Common c_est;
  std::string est_system, est_x0, est_deltas, est_csv;
  int est_samples = 1000;
  std::uint64_t est_seed = 0;
  bool est_calmness = false;
  auto* est = app.add_subcommand("estimate", "sampled lower estimate of the modulus");
  est->add_option("--system", est_system, "system JSON file")->required();
  est->add_option("--x0", est_x0, "nominal point")->required();
  est->add_option("--deltas", est_deltas, "comma-separated decreasing radii");
  est->add_option("--samples", est_samples, "samples per delta");
  est->add_option("--seed", est_seed, "random seed");
  est->add_option("--csv", est_csv, "write per-delta results to this CSV file");
  est->add_flag("--calmness", est_calmness, "pin the second cloud at the nominal one");
  add_common(est, c_est);

  // subdiff-check
  Common c_sd;
  std::string sd_a, sd_b, sd_x0;
  double sd_alpha = 1.0, sd_delta = 0.0;
  int sd_grid = 41;
  auto* sd = app.add_subcommand("subdiff-check",
                                "lower Hoelder inclusion of subdifferentials");
  sd->add_option("--a", sd_a, "function f1")->required();
  sd->add_option("--b", sd_b, "function f2")->required();
  sd->add_option("--x0", sd_x0, "base point")->required();
  sd->add_option("--alpha", sd_alpha, "neighbourhood radius");
  sd->add_option("--delta", sd_delta, "value proximity")->required();
  sd->add_option("--grid", sd_grid, "grid points per axis");
  add_common(sd, c_sd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*mod) {
      load_config(c_mod);
      const LinearSystem sys = system_from_json(load_json_file(mod_system));
      const Vec x0 = parse_inline_vector(mod_x0, "--x0");
      const ModulusReport rep = lipschitz_modulus(sys, x0, c_mod.tol, mod_box_radius);
      Json j = modulus_report_to_json(rep);
      j["theorem"] = "lip-formula";
      j["system"] = system_to_json(sys);
      j["manifest"] = manifest("modulus", argc, argv, {{"system", mod_system}}, c_mod);
      emit(j, c_mod, out);
      return 0;
    }

    if (*hd) {
      load_config(c_h);
      NormSpec spec_a{}, spec_b{};
      const PointCloud A = cloud_from_json(load_json_file(h_a), nullptr, &spec_a);
      const PointCloud B = cloud_from_json(load_json_file(h_b), nullptr, &spec_b);
      if (!(spec_a == spec_b)) throw InputError("hausdorff: clouds use different norms");
      const Metric m{spec_a, MetricSpace::coeff};
      Json j;
      j["theorem"] = "hausdorff-metric";
      j["d_h"] = hausdorff(A, B, m);
      j["excess_ab"] = excess(A, B, m);
      j["excess_ba"] = excess(B, A, m);
      j["norm"] = spec_a.name();
      j["manifest"] = manifest("hausdorff", argc, argv, {{"a", h_a}, {"b", h_b}}, c_h);
      emit(j, c_h, out);
      return 0;
    }

    if (*ssc) {
      load_config(c_ssc);
      const LinearSystem sys = system_from_json(load_json_file(ssc_system));
      const SscReport rep = ssc_margin(sys, ssc_box_radius, c_ssc.tol);
      Json j;
      j["theorem"] = "ssc-margin";
      j["margin"] = rep.margin;
      j["point"] = rep.point;
      j["box_radius"] = rep.box_radius;
      j["box_active"] = rep.box_active;
      j["satisfied"] = rep.margin > 0.0;
      j["manifest"] = manifest("ssc", argc, argv, {{"system", ssc_system}}, c_ssc);
      emit(j, c_ssc, out);
      return 0;
    }

    if (*idx) {
      load_config(c_idx);
      NormSpec spec{};
      const PointCloud U0 = cloud_from_json(load_json_file(idx_u0), nullptr, &spec);
      const PointCloud U1 = cloud_from_json(load_json_file(idx_u1));
      const PointCloud U2 = cloud_from_json(load_json_file(idx_u2));
      const Metric m{spec, MetricSpace::coeff};

      // Index sample: the clouds themselves plus seeded exterior points
      // drawn from a box twice the size of the data's bounding box.
      std::vector<Vec> sample_pts = U0.points;
      for (const auto& p : U1.points) sample_pts.push_back(p);
      for (const auto& p : U2.points) sample_pts.push_back(p);
      Vec lo = sample_pts.front(), hi = sample_pts.front();
      for (const auto& p : sample_pts)
        for (std::size_t k = 0; k < p.size(); ++k) {
          lo[k] = std::min(lo[k], p[k]);
          hi[k] = std::max(hi[k], p[k]);
        }
      SplitMix64 rng(substream(idx_seed, 0));
      for (int s = 0; s < idx_exterior; ++s) {
        Vec p(lo.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
          const double c = 0.5 * (lo[k] + hi[k]);
          const double w = std::max(hi[k] - lo[k], 1.0);
          p[k] = c + rng.uniform(-w, w);
        }
        sample_pts.push_back(std::move(p));
      }
      const PointCloud sample(U0.dim, std::move(sample_pts));

      const auto [s1, s2] = pair_indexation(U1, U2, U0, sample, spec);
      const IndexedFamily s0 = projection_family(U0, sample, spec);
      const double d_inf = sup_distance(s1, s2, spec);
      const double d_h = hausdorff(U1, U2, m);
      const double bound = 3.0 * std::max(hausdorff(U1, U0, m), hausdorff(U2, U0, m));
      const double d10 = sup_distance(s1, s0, spec);
      const double d20 = sup_distance(s2, s0, spec);
      const IndexedFamily i1 = calmness_indexation(U1, U0, sample, spec);
      const double calm = sup_distance(i1, s0, spec);
      const double calm_dh = hausdorff(U1, U0, m);

      const bool pair_ok = std::fabs(d_inf - d_h) <= 1e-12;
      const bool triple_ok = d10 <= bound + 1e-12 && d20 <= bound + 1e-12;
      const bool calm_ok = std::fabs(calm - calm_dh) <= 1e-12;

      Json j;
      j["theorem"] = "pair-indexation";
      j["d_inf"] = d_inf;
      j["d_h"] = d_h;
      j["pair_identity"] = pair_ok;
      j["triple_bound"] = bound;
      j["d_inf_1_0"] = d10;
      j["d_inf_2_0"] = d20;
      j["triple_bound_holds"] = triple_ok;
      j["calmness_d_inf"] = calm;
      j["calmness_d_h"] = calm_dh;
      j["calmness_identity"] = calm_ok;
      j["exterior_samples"] = idx_exterior;
      j["manifest"] = manifest("indexation-check", argc, argv,
                               {{"system", idx_u0}, {"a", idx_u1}, {"b", idx_u2}}, c_idx);
      emit(j, c_idx, out);
      return (pair_ok && triple_ok && calm_ok) ? 0 : 1;
    }

    if (*lin) {
      load_config(c_lin);
      const ConvexInstance inst = instance_from_json(load_json_file(lin_instance));
      validate_instance(inst, c_lin.tol);
      const BoxRegion region = enlargement_box(inst, 0.0, c_lin.tol);
      const PointCloud U = linearize_on_box(inst.f0, region, inst.grid_per_axis, c_lin.tol);
      Json j;
      j["theorem"] = "linearization";
      j["n"] = inst.f0.dim();
      j["norm"] = "l2";
      j["points"] = U.points;
      Json region_j = Json::array();
      for (int a = 0; a < region.dim(); ++a)
        region_j.push_back(Json::array({region.lo(a), region.hi(a)}));
      j["region"] = std::move(region_j);
      j["grid"] = inst.grid_per_axis;
      j["manifest"] = manifest("linearize", argc, argv, {{"instance", lin_instance}}, c_lin);
      emit(j, c_lin, out);
      return 0;
    }

    if (*k0) {
      load_config(c_k0);
      const ConvexInstance inst = instance_from_json(load_json_file(k0_instance));
      const Kappa0Result res = compute_kappa0(inst, c_k0.tol);
      const BoxRegion search = enlargement_box(inst, 0.0, c_k0.tol);
      const SlaterResult slater = slater_margin(inst.f0, search, inst.grid_per_axis);
      Json j;
      j["theorem"] = "kappa0";
      j["kappa0"] = ext_to_json(res.kappa0);
      j["report"] = modulus_report_to_json(res.report);
      j["rows"] = res.system.coeffs.points.size();
      j["system"] = system_to_json(res.system);
      j["slater_margin"] = slater.margin;
      j["slater_witness"] = slater.witness;
      j["slater_consistent"] = (slater.margin < 0.0) == !res.report.zero_in_c;
      j["manifest"] = manifest("kappa0", argc, argv, {{"instance", k0_instance}}, c_k0);
      emit(j, c_k0, out);
      return 0;
    }

    if (*sr) {
      load_config(c_sr);
      const ConvexInstance inst = instance_from_json(load_json_file(sr_instance));
      const double eta = safe_radius(inst, c_sr.tol);
      Json j;
      j["theorem"] = "safe-radius";
      j["eta"] = eta;
      j["boundary_offset"] = 0.5 * inst.alpha0;
      j["manifest"] = manifest("safe-radius", argc, argv, {{"instance", sr_instance}}, c_sr);
      emit(j, c_sr, out);
      return 0;
    }

    if (*gap) {
      load_config(c_gap);
      const ConvexFunction f1 = convex_from_json(load_json_file(gap_a));
      const ConvexFunction f2 = convex_from_json(load_json_file(gap_b));
      const BoxRegion K = parse_box(gap_box);
      const GapBoundResult res = gap_bound_check(f1, f2, K, K, gap_grid, c_gap.tol);
      Json j;
      j["theorem"] = "gap-bound";
      j["lhs"] = res.lhs;
      j["rhs"] = res.rhs;
      j["rho"] = res.rho;
      j["image_gap"] = res.image_gap;
      j["value_gap"] = res.value_gap;
      j["holds"] = res.holds;
      j["manifest"] = manifest("gap-check", argc, argv, {{"a", gap_a}, {"b", gap_b}}, c_gap);
      emit(j, c_gap, out);
      return res.holds ? 0 : 1;
    }

    if (*cvx) {
      load_config(c_cvx);
      const ConvexInstance inst = instance_from_json(load_json_file(cvx_instance));
      const ConvexFunction f1 = convex_from_json(load_json_file(cvx_a));
      const ConvexFunction f2 = convex_from_json(load_json_file(cvx_b));
      const Vec x1 = parse_inline_vector(cvx_x1, "--x1");
      const ConvexLipResult res = convex_lipschitz_check(inst, cvx_kappa, f1, f2, x1,
                                                         cvx_delta, c_cvx.tol,
                                                         cvx_gradient_only);
      Json j;
      j["theorem"] = "convex-lip-estimate";
      j["lhs"] = res.lhs;
      j["rhs"] = res.rhs;
      j["rho"] = res.rho;
      j["image_gap"] = res.image_gap;
      j["value_gap"] = res.value_gap;
      j["kappa"] = cvx_kappa;
      j["kappa0"] = res.kappa0_infinite ? Json("inf") : Json(res.kappa0_value);
      j["delta"] = cvx_delta;
      j["delta_cap"] = res.delta_cap;
      j["holds"] = res.holds;
      j["hypotheses_met"] = res.hypotheses_met;
      j["hypothesis_note"] = res.hypothesis_note;
      j["ball_approximation"] = "boxes outer-approximate the Euclidean balls";
      j["manifest"] = manifest("convex-check", argc, argv,
                               {{"instance", cvx_instance}, {"a", cvx_a}, {"b", cvx_b}}, c_cvx);
      emit(j, c_cvx, out);
      if (!res.hypotheses_met) return 0;  // hypothesis failures are reported, not violations
      return res.holds ? 0 : 1;
    }

    if (*est) {
      load_config(c_est);
      const LinearSystem sys = system_from_json(load_json_file(est_system));
      const Vec x0 = parse_inline_vector(est_x0, "--x0");
      SweepConfig cfg = sweep_from_json(c_est.config_json);
      if (!est_deltas.empty()) cfg.deltas = parse_delta_list(est_deltas);
      if (cfg.deltas.empty()) cfg.deltas = {1e-1, 1e-2, 1e-3};
      if (est->count("--samples")) cfg.samples_per_delta = est_samples;
      if (est->count("--seed")) cfg.seed = est_seed;
      const SweepMode mode = est_calmness ? SweepMode::calmness : SweepMode::lipschitz;
      const SweepResult res = empirical_modulus(sys, x0, cfg, c_est.tol, mode);
      if (!est_csv.empty()) write_text_file(est_csv, sweep_csv(res));
      Json j;
      j["theorem"] = est_calmness ? "calmness-estimate" : "lip-estimate";
      j["estimate"] = res.estimate;
      j["diverging"] = res.diverging;
      Json per = Json::array();
      for (const auto& d : res.per_delta) {
        Json row;
        row["delta"] = d.delta;
        row["max_ratio"] = d.max_ratio;
        row["samples_used"] = d.samples_used;
        row["discarded"] = d.discarded;
        per.push_back(std::move(row));
      }
      j["per_delta"] = std::move(per);
      j["system"] = system_to_json(sys);
      j["manifest"] = manifest("estimate", argc, argv, {{"system", est_system}}, c_est,
                               sweep_to_json(cfg));
      emit(j, c_est, out);
      return 0;
    }

    if (*sd) {
      load_config(c_sd);
      const ConvexFunction f1 = convex_from_json(load_json_file(sd_a));
      const ConvexFunction f2 = convex_from_json(load_json_file(sd_b));
      const Vec x0 = parse_inline_vector(sd_x0, "--x0");
      const StabilityResult res =
          holder_stability_check(f1, f2, x0, sd_alpha, sd_delta, c_sd.tol, sd_grid);
      Json j;
      j["theorem"] = "subdiff-stability";
      j["holds"] = res.holds;
      j["worst"] = res.worst;
      j["eps"] = res.eps;
      j["margin"] = res.worst - res.eps;
      j["ball_approximation"] = "boxes outer-approximate the Euclidean balls";
      j["manifest"] = manifest("subdiff-check", argc, argv, {{"a", sd_a}, {"b", sd_b}}, c_sd);
      emit(j, c_sd, out);
      return res.holds ? 0 : 1;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace lipmod::cli
