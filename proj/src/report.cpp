#include "icd/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace icd::report {

json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return std::strtod(buf, nullptr);
}

json to_json(const MetricsReport& m) {
    json j;
    j["psnr_db"] = number(m.psnr_db);
    j["ssim"] = number(m.ssim);
    j["mse"] = number(m.mse);
    j["rel_mae"] = number(m.rel_mae);
    j["l_rgb"] = number(m.loss.l_rgb);
    j["l_I"] = number(m.loss.l_i);
    j["l_C"] = number(m.loss.l_c);
    j["l_total"] = number(m.loss.total);
    return j;
}

json to_json(const AgreementReport& r) {
    json j;
    j["trials"] = r.trials;
    j["pixels"] = r.pixels;
    j["sigma"] = number(r.sigma);
    j["mean_abs_exact"] = number(r.mean_abs_exact);
    j["mean_abs_predicted"] = number(r.mean_abs_predicted);
    j["mean_abs_difference"] = number(r.mean_abs_difference);
    j["relative_agreement_error"] = number(r.relative_agreement_error);
    j["excluded_fraction"] = number(r.excluded_fraction);
    j["low_signal_fraction"] = number(r.low_signal_fraction);
    j["low_signal"] = r.low_signal;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace icd::report
