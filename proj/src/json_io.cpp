#include "lipmod/json_io.hpp"

#include <fstream>
#include <sstream>

namespace lipmod {

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

namespace {

Vec vec_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  Vec v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw InputError(std::string(what) + ": expected numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array of arrays");
  Matrix m;
  m.reserve(j.size());
  for (const auto& row : j) m.push_back(vec_from_json(row, what));
  return m;
}

const Json& unwrap_system(const Json& j) {
  if (j.is_object() && j.contains("system") && !j.contains("points")) return j.at("system");
  return j;
}

}  // namespace

LinearSystem system_from_json(const Json& raw) {
  const Json& j = unwrap_system(raw);
  if (!j.is_object() || !j.contains("n") || !j.contains("points"))
    throw InputError("system: expected {n, norm, points}");
  const int n = j.at("n").get<int>();
  const NormSpec spec =
      j.contains("norm") ? NormSpec::parse(j.at("norm").get<std::string>()) : NormSpec{};
  Matrix pts = matrix_from_json(j.at("points"), "system points");
  return LinearSystem(n, PointCloud(n + 1, std::move(pts)), spec);
}

Json system_to_json(const LinearSystem& sys) {
  Json j;
  j["n"] = sys.n;
  j["norm"] = sys.spec.name();
  j["points"] = sys.coeffs.points;
  return j;
}

PointCloud cloud_from_json(const Json& raw, int* n_out, NormSpec* spec_out) {
  const Json& j = unwrap_system(raw);
  if (!j.is_object() || !j.contains("points"))
    throw InputError("cloud: expected {n, norm, points}");
  Matrix pts = matrix_from_json(j.at("points"), "cloud points");
  if (pts.empty()) throw InputError("cloud: empty point list");
  const int dim = static_cast<int>(pts.front().size());
  const int n = j.contains("n") ? j.at("n").get<int>() : dim - 1;
  if (n_out) *n_out = n;
  if (spec_out && j.contains("norm"))
    *spec_out = NormSpec::parse(j.at("norm").get<std::string>());
  return PointCloud(dim, std::move(pts));
}

Json convex_to_json(const ConvexFunction& f) {
  Json j;
  if (f.is_max_affine()) {
    j["type"] = "max_affine";
    Json pieces = Json::array();
    const auto& ma = f.as_max_affine();
    for (std::size_t k = 0; k < ma.c.size(); ++k) {
      Json piece = ma.c[k];
      piece.push_back(ma.d[k]);
      pieces.push_back(std::move(piece));
    }
    j["pieces"] = std::move(pieces);
  } else if (f.is_quadratic()) {
    const auto& qd = f.as_quadratic();
    j["type"] = "quadratic";
    j["Q"] = qd.Q;
    j["q"] = qd.q;
    j["r"] = qd.r;
  } else {
    j["type"] = "sum";
    Json terms = Json::array();
    for (const auto& t : f.as_sum().terms) terms.push_back(convex_to_json(t));
    j["terms"] = std::move(terms);
  }
  return j;
}

ConvexFunction convex_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw InputError("convex function: expected {type, ...}");
  const std::string type = j.at("type").get<std::string>();
  if (type == "max_affine") {
    Matrix pieces = matrix_from_json(j.at("pieces"), "max_affine pieces");
    Matrix c;
    Vec d;
    for (auto& p : pieces) {
      if (p.size() < 2) throw InputError("max_affine piece needs [c..., d]");
      d.push_back(p.back());
      p.pop_back();
      c.push_back(std::move(p));
    }
    return ConvexFunction::max_affine(std::move(c), std::move(d));
  }
  if (type == "quadratic") {
    return ConvexFunction::quadratic(matrix_from_json(j.at("Q"), "quadratic Q"),
                                     vec_from_json(j.at("q"), "quadratic q"),
                                     j.at("r").get<double>());
  }
  if (type == "sum") {
    std::vector<ConvexFunction> terms;
    for (const auto& t : j.at("terms")) terms.push_back(convex_from_json(t));
    return ConvexFunction::sum(std::move(terms));
  }
  throw InputError("convex function: unknown type '" + type + "'");
}

ConvexInstance instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("f0") || !j.contains("x0"))
    throw InputError("instance: expected {f0, x0, alpha0, alpha, grid}");
  ConvexInstance inst{convex_from_json(j.at("f0")), vec_from_json(j.at("x0"), "x0"), 0.5, 1.0,
                      41};
  if (j.contains("alpha0")) inst.alpha0 = j.at("alpha0").get<double>();
  if (j.contains("alpha")) inst.alpha = j.at("alpha").get<double>();
  if (j.contains("grid")) inst.grid_per_axis = j.at("grid").get<int>();
  return inst;
}

Json instance_to_json(const ConvexInstance& inst) {
  Json j;
  j["f0"] = convex_to_json(inst.f0);
  j["x0"] = inst.x0;
  j["alpha0"] = inst.alpha0;
  j["alpha"] = inst.alpha;
  j["grid"] = inst.grid_per_axis;
  return j;
}

ToleranceConfig tolerances_from_json(const Json& j) {
  ToleranceConfig tol;
  if (!j.is_object()) return tol;
  if (j.contains("feas_tol")) tol.feas_tol = j.at("feas_tol").get<double>();
  if (j.contains("active_tol")) tol.active_tol = j.at("active_tol").get<double>();
  if (j.contains("solver_tol")) tol.solver_tol = j.at("solver_tol").get<double>();
  if (j.contains("max_iter")) tol.max_iter = j.at("max_iter").get<int>();
  if (tol.feas_tol <= 0 || tol.active_tol <= 0 || tol.solver_tol <= 0 || tol.max_iter <= 0)
    throw InputError("tolerances must be positive");
  return tol;
}

Json tolerances_to_json(const ToleranceConfig& tol) {
  Json j;
  j["feas_tol"] = tol.feas_tol;
  j["active_tol"] = tol.active_tol;
  j["solver_tol"] = tol.solver_tol;
  j["max_iter"] = tol.max_iter;
  return j;
}

namespace {

const char* kind_name(PerturbKind k) {
  switch (k) {
    case PerturbKind::jitter:
      return "jitter";
    case PerturbKind::add_point:
      return "add_point";
    default:
      return "drop_point";
  }
}

PerturbKind kind_parse(const std::string& s) {
  if (s == "jitter") return PerturbKind::jitter;
  if (s == "add_point") return PerturbKind::add_point;
  if (s == "drop_point") return PerturbKind::drop_point;
  throw InputError("unknown perturbation kind '" + s + "'");
}

}  // namespace

SweepConfig sweep_from_json(const Json& j) {
  SweepConfig cfg;
  if (!j.is_object()) return cfg;
  if (j.contains("deltas")) cfg.deltas = vec_from_json(j.at("deltas"), "deltas");
  if (j.contains("samples_per_delta"))
    cfg.samples_per_delta = j.at("samples_per_delta").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("perturbation_kinds")) {
    cfg.kinds.clear();
    for (const auto& k : j.at("perturbation_kinds"))
      cfg.kinds.push_back(kind_parse(k.get<std::string>()));
  }
  return cfg;
}

Json sweep_to_json(const SweepConfig& cfg) {
  Json j;
  j["deltas"] = cfg.deltas;
  j["samples_per_delta"] = cfg.samples_per_delta;
  j["seed"] = cfg.seed;
  Json kinds = Json::array();
  for (const auto& k : cfg.kinds) kinds.push_back(kind_name(k));
  j["perturbation_kinds"] = std::move(kinds);
  return j;
}

Json ext_to_json(const ExtReal& v) {
  if (v.infinite) return Json("inf");
  return Json(v.value);
}

Json modulus_report_to_json(const ModulusReport& rep) {
  Json j;
  j["modulus"] = ext_to_json(rep.modulus);
  j["c_distance"] = ext_to_json(rep.c_distance);
  j["c_empty"] = rep.c_empty;
  j["zero_in_c"] = rep.zero_in_c;
  j["active_indices"] = rep.active_indices;
  j["ssc_margin"] = rep.ssc_margin;
  j["ssc_point"] = rep.ssc.point;
  j["ssc_box_radius"] = rep.ssc.box_radius;
  j["ssc_box_active"] = rep.ssc.box_active;
  j["classification"] = to_string(rep.classification);
  j["x0_used"] = rep.x0_used;
  j["x0_projected"] = rep.x0_projected;
  j["witness"] = rep.witness;
  return j;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "delta,max_ratio,samples_used,discarded\n";
  for (const auto& d : result.per_delta) {
    out.precision(17);
    out << d.delta << ',' << d.max_ratio << ',' << d.samples_used << ',' << d.discarded
        << '\n';
  }
  return out.str();
}

}  // namespace lipmod
