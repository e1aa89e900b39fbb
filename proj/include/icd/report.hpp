#pragma once

#include <string>

#include <json.hpp>

#include "icd/metrics.hpp"
#include "icd/noise.hpp"

namespace icd::report {

using json = nlohmann::ordered_json;

// Rounds to 6 significant digits (ties to even, via the C library's
// correctly rounded formatting). Non-finite values become null.
json number(double v);

json to_json(const MetricsReport& m);
json to_json(const AgreementReport& r);

// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

} // namespace icd::report
