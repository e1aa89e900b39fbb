#include "icd/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace icd {

void GateParams::validate(const GammaRange& range) const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("gate alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (!(range.min > 0.0 && range.min <= range.max)) {
        throw DomainError("gate gamma range must satisfy 0 < min <= max");
    }
    if (!(gamma >= range.min && gamma <= range.max)) {
        throw DomainError("gate gamma " + std::to_string(gamma) + " outside [" +
                          std::to_string(range.min) + ", " + std::to_string(range.max) + "]");
    }
}

std::string_view to_string(Baseline b) noexcept {
    switch (b) {
    case Baseline::Max: return "max";
    case Baseline::Min: return "min";
    case Baseline::Ave: return "ave";
    }
    return "max";
}

Baseline parse_baseline(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "max") return Baseline::Max;
    if (lower == "min") return Baseline::Min;
    if (lower == "ave" || lower == "avg" || lower == "mean") return Baseline::Ave;
    throw ConfigError("unknown baseline '" + std::string(name) + "' (expected max, min or ave)");
}

double baseline_value(const Pixel& p, Baseline b) noexcept {
    switch (b) {
    case Baseline::Max: return std::max({p[0], p[1], p[2]});
    case Baseline::Min: return std::min({p[0], p[1], p[2]});
    case Baseline::Ave: return (p[0] + p[1] + p[2]) / 3.0;
    }
    return p[0];
}

// The ratio form keeps the max-baseline results exact: (M+eps)/(M+eps) is
// exactly 1 and any ratio <= 1 has a non-positive log.
Pixel pixel_chromaticity(const Pixel& p, double base, double eps) noexcept {
    const double denom = base + eps;
    return {std::log((p[0] + eps) / denom), std::log((p[1] + eps) / denom),
            std::log((p[2] + eps) / denom)};
}

DecoupledImage decompose(const RgbImage& img, Epsilon eps, Baseline baseline) {
    if (img.empty()) throw EmptyInputError("decompose: image has zero pixels");

    DecoupledImage out{IntensityMap(img.width(), img.height()),
                       ChromaticityMap(img.width(), img.height()), baseline};
    const double e = eps.value();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const Pixel p = img.pixel(i);
        for (double v : p) {
            if (!std::isfinite(v)) {
                throw InvalidInputError("decompose: non-finite value at pixel " + std::to_string(i));
            }
            if (v < 0.0 || v > 1.0) {
                throw InvalidInputError("decompose: value " + std::to_string(v) +
                                        " outside [0, 1] at pixel " + std::to_string(i));
            }
        }
        const double base = baseline_value(p, baseline);
        out.intensity(i) = base;
        out.chroma.set_pixel(i, pixel_chromaticity(p, base, e));
    }
    return out;
}

RgbImage reconstruct_unclipped(const IntensityMap& intensity, const ChromaticityMap& chroma,
                               Epsilon eps) {
    require_same_shape(intensity, chroma, "reconstruct");
    const double e = eps.value();
    RgbImage out(intensity.width(), intensity.height());
    for (std::size_t i = 0; i < intensity.pixel_count(); ++i) {
        const double scale = intensity(i) + e;
        for (std::size_t c = 0; c < 3; ++c) out(i, c) = scale * std::exp(chroma(i, c)) - e;
    }
    return out;
}

RgbImage reconstruct(const IntensityMap& intensity, const ChromaticityMap& chroma, Epsilon eps) {
    RgbImage out = reconstruct_unclipped(intensity, chroma, eps);
    for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
    return out;
}

RgbImage reconstruct(const DecoupledImage& dec, Epsilon eps) {
    return reconstruct(dec.intensity, dec.chroma, eps);
}

IntensityMap constrain_intensity(const IntensityMap& raw, Epsilon eps) {
    IntensityMap out = raw;
    for (double& v : out.values()) v = std::max(v, eps.value());
    return out;
}

ChromaticityMap constrain_chromaticity(const ChromaticityMap& raw) {
    ChromaticityMap out = raw;
    for (double& v : out.values()) v = std::min(v, 0.0);
    return out;
}

double gate_response(double intensity, const GateParams& gate) noexcept {
    const double s = std::sin(std::numbers::pi / 2.0 * intensity);
    return gate.alpha + (1.0 - gate.alpha) * std::pow(s, gate.gamma);
}

ChromaticityMap chroma_gate(const IntensityMap& intensity, const ChromaticityMap& chroma,
                            const GateParams& gate) {
    require_same_shape(intensity, chroma, "chroma_gate");
    gate.validate();
    ChromaticityMap out = chroma;
    for (std::size_t i = 0; i < chroma.pixel_count(); ++i) {
        const double g = gate_response(std::clamp(intensity(i), 0.0, 1.0), gate);
        for (std::size_t c = 0; c < 3; ++c) out(i, c) *= g;
    }
    return out;
}

std::size_t anchor_channel(const Pixel& p) noexcept {
    std::size_t m = 0;
    for (std::size_t c = 1; c < 3; ++c) {
        if (p[c] > p[m]) m = c;
    }
    return m;
}

PropertyReport check_properties(const RgbImage& img, const DecoupledImage& dec, Epsilon eps,
                                double zero_tol, double floor) {
    require_same_shape(img, dec.intensity, "check_properties");
    require_same_shape(img, dec.chroma, "check_properties");
    const double e = eps.value();

    PropertyReport rep;
    rep.pixels = img.pixel_count();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const Pixel p = img.pixel(i);
        const Pixel c = dec.chroma.pixel(i);

        bool anchored = false;
        for (std::size_t k = 0; k < 3; ++k) {
            if (c[k] > 0.0) ++rep.nonpositive_violations;
            if (std::abs(c[k]) <= zero_tol) anchored = true;
        }
        if (!anchored) ++rep.zero_anchor_violations;

        const double lo = std::min({p[0], p[1], p[2]});
        if (lo < floor * e) continue;
        ++rep.ratio_checked;
        const double hi = std::max({p[0], p[1], p[2]});
        const double tol = e / lo;
        bool bad = false;
        for (std::size_t k = 0; k < 3; ++k) {
            const double dev = std::abs(c[k] - std::log(p[k] / hi));
            rep.max_ratio_deviation = std::max(rep.max_ratio_deviation, dev);
            if (dev > tol) bad = true;
        }
        if (bad) ++rep.ratio_violations;
    }
    return rep;
}

double illumination_bound(const Pixel& original, double scale, double eps) noexcept {
    const double lo = std::min({original[0], original[1], original[2]});
    return 2.0 * eps / (scale * lo);
}

IlluminationReport check_illumination_invariance(const RgbImage& img, const RgbImage& scaled,
                                                 double scale, Epsilon eps, double floor) {
    require_same_shape(img, scaled, "check_illumination_invariance");
    if (!(scale > 0.0)) throw DomainError("illumination scale must be > 0");
    const double e = eps.value();
    const DecoupledImage a = decompose(img, eps);
    const DecoupledImage b = decompose(scaled, eps);

    IlluminationReport rep;
    rep.scale = scale;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const Pixel p = img.pixel(i);
        const Pixel q = scaled.pixel(i);
        if (anchor_channel(p) != anchor_channel(q)) ++rep.anchor_changes;

        if (std::min({q[0], q[1], q[2]}) < floor * e) continue;
        ++rep.checked;
        const double bound = illumination_bound(p, scale, e);
        rep.max_bound = std::max(rep.max_bound, bound);
        for (std::size_t c = 0; c < 3; ++c) {
            const double d = std::abs(a.chroma(i, c) - b.chroma(i, c));
            rep.max_chroma_difference = std::max(rep.max_chroma_difference, d);
            if (d > bound) ++rep.bound_violations;
        }
    }
    return rep;
}

RgbImage scale_image(const RgbImage& img, double s) {
    RgbImage out = img;
    for (double& v : out.values()) v *= s;
    return out;
}

} // namespace icd
