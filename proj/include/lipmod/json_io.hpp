#pragma once

#include <string>

#include <json.hpp>

#include "lipmod/convexfn.hpp"
#include "lipmod/estimate.hpp"
#include "lipmod/linearize.hpp"
#include "lipmod/linsys.hpp"

namespace lipmod {

using Json = nlohmann::json;

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// System files: {"n": int, "norm": "l1|l2|linf", "points": [[a..., b], ...]}.
// A report carrying a "system" object is accepted as input unchanged.
LinearSystem system_from_json(const Json& j);
Json system_to_json(const LinearSystem& sys);

// Coefficient clouds reuse the system schema.
PointCloud cloud_from_json(const Json& j, int* n_out = nullptr, NormSpec* spec_out = nullptr);

Json convex_to_json(const ConvexFunction& f);
ConvexFunction convex_from_json(const Json& j);

// {"f0": <function>, "x0": [...], "alpha0": ..., "alpha": ..., "grid": ...}
ConvexInstance instance_from_json(const Json& j);
Json instance_to_json(const ConvexInstance& inst);

ToleranceConfig tolerances_from_json(const Json& j);
Json tolerances_to_json(const ToleranceConfig& tol);

SweepConfig sweep_from_json(const Json& j);
Json sweep_to_json(const SweepConfig& cfg);

// Infinity serializes as the string "inf".
Json ext_to_json(const ExtReal& v);

Json modulus_report_to_json(const ModulusReport& rep);

std::string sweep_csv(const SweepResult& result);

}  // namespace lipmod
