#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "icd/image.hpp"

namespace icd {

// Stabilizer added inside every logarithm of the transform.
class Epsilon {
public:
    static constexpr double kDefault = 1e-4;

    constexpr Epsilon() = default;
    explicit Epsilon(double value) : value_(value) {
        if (!(value > 0.0)) throw DomainError("epsilon must be > 0, got " + std::to_string(value));
    }

    constexpr double value() const noexcept { return value_; }

private:
    double value_ = kDefault;
};

// Allowed range for the gate exponent.
struct GammaRange {
    double min = 0.5;
    double max = 4.0;
};

// Intensity-aware chromaticity gate G(I) = alpha + (1 - alpha) * sin(pi I / 2)^gamma.
struct GateParams {
    double alpha = 0.5;
    double gamma = 2.0;

    // Throws DomainError unless 0 < alpha <= 1 and gamma lies inside range.
    void validate(const GammaRange& range = {}) const;
};

enum class Baseline { Max, Min, Ave };

std::string_view to_string(Baseline b) noexcept;
// Accepts "max", "min", "ave" (case-insensitive). Throws ConfigError otherwise.
Baseline parse_baseline(std::string_view name);

// Output of the forward transform. For the Max baseline the chromaticity map is
// non-positive with a zero at every pixel; Min yields non-negative components
// and Ave sign-mixed ones.
struct DecoupledImage {
    IntensityMap intensity;
    ChromaticityMap chroma;
    Baseline baseline = Baseline::Max;
};

// Baseline channel value of a single pixel.
double baseline_value(const Pixel& p, Baseline b) noexcept;

// log((I_c + eps) / (I_base + eps)) for one pixel. No range checking, so it is
// usable on noisy or out-of-gamut values as long as every I_c + eps > 0.
Pixel pixel_chromaticity(const Pixel& p, double base, double eps) noexcept;

DecoupledImage decompose(const RgbImage& img, Epsilon eps = {}, Baseline baseline = Baseline::Max);

// Inverse transform (I_base + eps) * exp(C_c) - eps without the final clip.
RgbImage reconstruct_unclipped(const IntensityMap& intensity, const ChromaticityMap& chroma,
                               Epsilon eps = {});

// Inverse transform followed by clipping to [0, 1]. The baseline only matters
// for documentation purposes: the closed form is identical for all three.
RgbImage reconstruct(const DecoupledImage& dec, Epsilon eps = {});
RgbImage reconstruct(const IntensityMap& intensity, const ChromaticityMap& chroma,
                     Epsilon eps = {});

// max(raw, eps) elementwise.
IntensityMap constrain_intensity(const IntensityMap& raw, Epsilon eps = {});
// min(raw, 0) elementwise.
ChromaticityMap constrain_chromaticity(const ChromaticityMap& raw);

double gate_response(double intensity, const GateParams& gate) noexcept;

ChromaticityMap chroma_gate(const IntensityMap& intensity, const ChromaticityMap& chroma,
                            const GateParams& gate);

// Lowest index among the channels attaining the pixel maximum.
std::size_t anchor_channel(const Pixel& p) noexcept;

struct PropertyReport {
    std::size_t pixels = 0;
    std::size_t nonpositive_violations = 0;
    std::size_t zero_anchor_violations = 0;
    // Relative-ratio check covers pixels whose channels are all >= k * eps.
    std::size_t ratio_checked = 0;
    std::size_t ratio_violations = 0;
    double max_ratio_deviation = 0.0;

    bool nonpositive() const noexcept { return nonpositive_violations == 0; }
    bool zero_anchor() const noexcept { return zero_anchor_violations == 0; }
    bool relative_ratio() const noexcept { return ratio_violations == 0; }
};

// Default signal floor (in units of eps) for the approximate properties.
inline constexpr double kSignalFloor = 100.0;

// Checks non-positivity, zero-anchor (|C| <= zero_tol for some channel) and the
// relative-ratio approximation |C_c - log(I_c / I_max)| <= eps / min_c I_c on
// pixels whose channels all exceed floor * eps.
PropertyReport check_properties(const RgbImage& img, const DecoupledImage& dec, Epsilon eps = {},
                                double zero_tol = 1e-12, double floor = kSignalFloor);

struct IlluminationReport {
    double scale = 1.0;
    std::size_t checked = 0;
    std::size_t anchor_changes = 0;
    std::size_t bound_violations = 0;
    double max_chroma_difference = 0.0;
    // Largest per-pixel analytic bound among the checked pixels.
    double max_bound = 0.0;

    bool ok() const noexcept { return anchor_changes == 0 && bound_violations == 0; }
};

// Compares decompose(img) with decompose(scaled) where scaled = scale * img.
// The anchor channel must match at every pixel. On pixels whose scaled
// channels all exceed floor * eps, |dC_c| must stay below 2 eps / (scale * min_c I_c).
IlluminationReport check_illumination_invariance(const RgbImage& img, const RgbImage& scaled,
                                                 double scale, Epsilon eps = {},
                                                 double floor = kSignalFloor);

// Per-pixel analytic bound used by check_illumination_invariance.
double illumination_bound(const Pixel& original, double scale, double eps) noexcept;

RgbImage scale_image(const RgbImage& img, double s);

} // namespace icd
