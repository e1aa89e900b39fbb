#include "icd/mappings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "icd/metrics.hpp"

namespace icd {

std::span<const double> ScalarParam::values() const noexcept {
    if (map_) return map_->values();
    return {&scalar_, 1};
}

std::span<const double> VectorParam::values() const noexcept {
    if (map_) return map_->values();
    return scalar_;
}

std::string_view to_string(MappingVariant v) noexcept {
    switch (v) {
    case MappingVariant::Residual: return "residual";
    case MappingVariant::EndToEnd: return "end-to-end";
    case MappingVariant::IntensityDivision: return "intensity-division";
    case MappingVariant::IntensityFractional: return "intensity-fractional";
    case MappingVariant::IntensityQuadratic: return "intensity-quadratic";
    case MappingVariant::ChromaGamma: return "chroma-gamma";
    case MappingVariant::GatedChromaResidual: return "gated-chroma-residual";
    case MappingVariant::ChromaAffine: return "chroma-affine";
    }
    return "residual";
}

std::string variant_names() {
    std::string s;
    for (auto v : kAllVariants) {
        if (!s.empty()) s += ", ";
        s += to_string(v);
    }
    return s;
}

MappingVariant parse_variant(std::string_view name) {
    for (auto v : kAllVariants) {
        if (to_string(v) == name) return v;
    }
    throw ConfigError("unknown variant '" + std::string(name) + "'; valid variants: " +
                      variant_names());
}

namespace {

template <class Param>
void check_shape(const std::optional<Param>& p, const char* name, std::size_t w, std::size_t h) {
    if (p && p->map() && (p->map()->width() != w || p->map()->height() != h)) {
        throw DimensionError(std::string("parameter field '") + name + "' is " +
                             std::to_string(p->map()->width()) + "x" +
                             std::to_string(p->map()->height()) + ", image is " +
                             std::to_string(w) + "x" + std::to_string(h));
    }
}

template <class Param>
const Param& require(const std::optional<Param>& p, const char* name, MappingVariant v) {
    if (!p) {
        throw ConfigError(std::string("variant '") + std::string(to_string(v)) +
                          "' requires parameter '" + name + "'");
    }
    return *p;
}

template <class Param, class Pred>
void check_domain(const std::optional<Param>& p, const char* name, const char* rule, Pred ok) {
    if (!p) return;
    for (double v : p->values()) {
        if (!ok(v)) {
            throw DomainError(std::string("parameter '") + name + "' must satisfy " + rule +
                              ", got " + std::to_string(v));
        }
    }
}

} // namespace

void MappingSpec::check_required() const {
    switch (variant) {
    case MappingVariant::EndToEnd:
        require(delta_i, "delta_i", variant);
        require(delta_c, "delta_c", variant);
        break;
    case MappingVariant::IntensityDivision: require(L, "L", variant); break;
    case MappingVariant::IntensityFractional: require(u, "u", variant); break;
    case MappingVariant::IntensityQuadratic: require(a, "a", variant); break;
    case MappingVariant::ChromaGamma: require(gamma_c, "gamma_c", variant); break;
    case MappingVariant::GatedChromaResidual: require(w, "w", variant); break;
    case MappingVariant::ChromaAffine:
        require(alpha_c, "alpha_c", variant);
        require(beta_c, "beta_c", variant);
        break;
    case MappingVariant::Residual: break;
    }
}

void MappingSpec::check_values() const {
    check_required();
    check_domain(L, "L", "> 0", [](double v) { return v > 0.0; });
    check_domain(u, "u", "> 0", [](double v) { return v > 0.0; });
    check_domain(gamma_c, "gamma_c", "> 0", [](double v) { return v > 0.0; });
    check_domain(w, "w", "0 <= w <= 1", [](double v) { return v >= 0.0 && v <= 1.0; });
}

void MappingSpec::validate(std::size_t width, std::size_t height) const {
    check_values();

    check_shape(delta_i, "delta_i", width, height);
    check_shape(delta_c, "delta_c", width, height);
    check_shape(L, "L", width, height);
    check_shape(u, "u", width, height);
    check_shape(a, "a", width, height);
    check_shape(gamma_c, "gamma_c", width, height);
    check_shape(w, "w", width, height);
    check_shape(alpha_c, "alpha_c", width, height);
    check_shape(beta_c, "beta_c", width, height);
}

IntensityMap apply_intensity_mapping(const MappingSpec& spec, const IntensityMap& iin,
                                     Epsilon eps) {
    spec.validate(iin.width(), iin.height());
    const double e = eps.value();
    IntensityMap out(iin.width(), iin.height());
    for (std::size_t i = 0; i < iin.pixel_count(); ++i) {
        const double x = iin(i);
        double y = x;
        switch (spec.variant) {
        case MappingVariant::Residual:
        case MappingVariant::ChromaGamma:
        case MappingVariant::GatedChromaResidual:
        case MappingVariant::ChromaAffine:
            y = x + (spec.delta_i ? spec.delta_i->at(i) : 0.0);
            break;
        case MappingVariant::EndToEnd: y = spec.delta_i->at(i); break;
        case MappingVariant::IntensityDivision: y = x / spec.L->at(i); break;
        case MappingVariant::IntensityFractional: {
            const double ux = spec.u->at(i) * x;
            y = ux / (ux + (1.0 - x) + e);
            break;
        }
        case MappingVariant::IntensityQuadratic: y = x + spec.a->at(i) * x * (1.0 - x); break;
        }
        out(i) = y;
    }
    return constrain_intensity(out, eps);
}

ChromaticityMap apply_chroma_mapping(const MappingSpec& spec, const ChromaticityMap& cin) {
    spec.validate(cin.width(), cin.height());
    ChromaticityMap out(cin.width(), cin.height());
    for (std::size_t i = 0; i < cin.pixel_count(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            const double x = cin(i, c);
            const double dc = spec.delta_c ? spec.delta_c->at(i, c) : 0.0;
            double y = x + dc;
            switch (spec.variant) {
            case MappingVariant::EndToEnd: y = dc; break;
            case MappingVariant::ChromaGamma: y = spec.gamma_c->at(i, c) * x; break;
            case MappingVariant::GatedChromaResidual: y = x + spec.w->at(i, c) * dc; break;
            case MappingVariant::ChromaAffine:
                y = spec.alpha_c->at(i, c) * x + spec.beta_c->at(i, c);
                break;
            default: break;
            }
            out(i, c) = y;
        }
    }
    return constrain_chromaticity(out);
}

RgbImage enhance(const RgbImage& img, const MappingSpec& spec, const std::optional<GateParams>& gate,
                 Epsilon eps) {
    const DecoupledImage dec = decompose(img, eps, Baseline::Max);
    const ChromaticityMap cin = gate ? chroma_gate(dec.intensity, dec.chroma, *gate) : dec.chroma;
    const IntensityMap iout = apply_intensity_mapping(spec, dec.intensity, eps);
    const ChromaticityMap cout = apply_chroma_mapping(spec, cin);
    return reconstruct(iout, cout, eps);
}

bool is_fittable(MappingVariant v) noexcept {
    return v == MappingVariant::IntensityDivision || v == MappingVariant::IntensityFractional ||
           v == MappingVariant::IntensityQuadratic;
}

MappingSpec scalar_variant_spec(MappingVariant v, double param) {
    MappingSpec spec;
    spec.variant = v;
    switch (v) {
    case MappingVariant::IntensityDivision: spec.L = param; break;
    case MappingVariant::IntensityFractional: spec.u = param; break;
    case MappingVariant::IntensityQuadratic: spec.a = param; break;
    default:
        throw ConfigError("variant '" + std::string(to_string(v)) +
                          "' has no single scalar parameter to fit");
    }
    spec.delta_c = VectorParam(0.0);
    return spec;
}

FitResult fit_scalar_param(const RgbImage& dark, const RgbImage& ref, MappingVariant variant,
                           std::span<const double> grid, Epsilon eps, FitObjective objective) {
    if (grid.empty()) throw ConfigError("fit_scalar_param: empty parameter grid");
    if (!is_fittable(variant)) {
        throw ConfigError("variant '" + std::string(to_string(variant)) + "' is not fittable");
    }
    require_same_shape(dark, ref, "fit_scalar_param");

    const LossWeights weights;
    const DecoupledImage ref_dec = decompose(ref, eps);
    FitResult result;
    result.losses.reserve(grid.size());
    bool have_best = false;
    for (double p : grid) {
        const RgbImage out = enhance(dark, scalar_variant_spec(variant, p), std::nullopt, eps);
        double loss = 0.0;
        if (objective == FitObjective::TotalLoss) {
            loss = total_loss(out, ref, eps, weights).total;
        } else {
            const DecoupledImage out_dec = decompose(out, eps);
            loss = smooth_l1(out_dec.intensity.values(), ref_dec.intensity.values(),
                             weights.smooth_l1_beta);
        }
        result.losses.push_back(loss);
        if (!have_best || loss < result.best_loss ||
            (loss == result.best_loss && p < result.best_param)) {
            result.best_param = p;
            result.best_loss = loss;
            have_best = true;
        }
    }
    return result;
}

namespace {

double parse_number(std::string_view s, std::string_view whole) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty()) {
        throw ConfigError("malformed grid '" + std::string(whole) + "': bad number '" +
                          std::string(s) + "'");
    }
    return v;
}

} // namespace

std::vector<double> parse_grid(std::string_view text) {
    const auto p1 = text.find(':');
    const auto p2 = p1 == std::string_view::npos ? p1 : text.find(':', p1 + 1);
    if (p1 == std::string_view::npos || p2 == std::string_view::npos) {
        // A single value is a one-point grid.
        return {parse_number(text, text)};
    }
    const double start = parse_number(text.substr(0, p1), text);
    const double stop = parse_number(text.substr(p1 + 1, p2 - p1 - 1), text);
    const double step = parse_number(text.substr(p2 + 1), text);
    if (!(step > 0.0)) throw ConfigError("grid step must be > 0 in '" + std::string(text) + "'");
    if (stop < start) throw ConfigError("grid stop < start in '" + std::string(text) + "'");

    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double v = start + static_cast<double>(k) * step;
        if (v > stop + 1e-9 * step) break;
        grid.push_back(v);
    }
    return grid;
}

} // namespace icd
