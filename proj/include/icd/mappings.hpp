#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icd/core.hpp"

namespace icd {

enum class MappingVariant {
    Residual,
    EndToEnd,
    IntensityDivision,
    IntensityFractional,
    IntensityQuadratic,
    ChromaGamma,
    GatedChromaResidual,
    ChromaAffine,
};

inline constexpr std::array<MappingVariant, 8> kAllVariants = {
    MappingVariant::Residual,           MappingVariant::EndToEnd,
    MappingVariant::IntensityDivision,  MappingVariant::IntensityFractional,
    MappingVariant::IntensityQuadratic, MappingVariant::ChromaGamma,
    MappingVariant::GatedChromaResidual, MappingVariant::ChromaAffine,
};

// Kebab-case names used on the command line ("residual", "intensity-division", ...).
std::string_view to_string(MappingVariant v) noexcept;
// Throws ConfigError listing the valid names.
MappingVariant parse_variant(std::string_view name);
std::string variant_names();

// A parameter given either as one scalar for the whole image or per pixel.
class ScalarParam {
public:
    ScalarParam(double value) : scalar_(value) {}
    ScalarParam(ScalarMap map) : map_(std::move(map)) {}

    double at(std::size_t pixel) const noexcept { return map_ ? (*map_)(pixel) : scalar_; }
    const std::optional<ScalarMap>& map() const noexcept { return map_; }
    std::span<const double> values() const noexcept;

private:
    double scalar_ = 0.0;
    std::optional<ScalarMap> map_;
};

// Same for per-channel parameters: one triple for the image or a triple per pixel.
class VectorParam {
public:
    VectorParam(double value) : scalar_{value, value, value} {}
    VectorParam(const Pixel& value) : scalar_(value) {}
    VectorParam(VectorMap map) : map_(std::move(map)) {}

    double at(std::size_t pixel, std::size_t c) const noexcept {
        return map_ ? (*map_)(pixel, c) : scalar_[c];
    }
    const std::optional<VectorMap>& map() const noexcept { return map_; }
    std::span<const double> values() const noexcept;

private:
    Pixel scalar_{};
    std::optional<VectorMap> map_;
};

// Variant tag plus whichever parameters that variant reads. Residual fields
// (delta_i, delta_c) default to zero when absent except for EndToEnd, where
// they are the prediction itself and must be supplied.
struct MappingSpec {
    MappingVariant variant = MappingVariant::Residual;
    std::optional<ScalarParam> delta_i;
    std::optional<VectorParam> delta_c;
    std::optional<ScalarParam> L;
    std::optional<ScalarParam> u;
    std::optional<ScalarParam> a;
    std::optional<VectorParam> gamma_c;
    std::optional<VectorParam> w;
    std::optional<VectorParam> alpha_c;
    std::optional<VectorParam> beta_c;

    // Throws ConfigError when a field the variant reads is absent.
    void check_required() const;

    // check_required plus DomainError for L <= 0, u <= 0, gamma_c <= 0 or
    // w outside [0, 1].
    void check_values() const;

    // Checks required fields, domains (L > 0, u > 0, gamma_c > 0, w in [0,1])
    // and per-pixel field shapes against a width x height image.
    void validate(std::size_t width, std::size_t height) const;
};

IntensityMap apply_intensity_mapping(const MappingSpec& spec, const IntensityMap& iin,
                                     Epsilon eps = {});

ChromaticityMap apply_chroma_mapping(const MappingSpec& spec, const ChromaticityMap& cin);

RgbImage enhance(const RgbImage& img, const MappingSpec& spec,
                 const std::optional<GateParams>& gate = std::nullopt, Epsilon eps = {});

// Scalar-parameter variants that fit_scalar_param can search over.
bool is_fittable(MappingVariant v) noexcept;

// Builds the spec for a single-parameter variant with zero chroma residual.
MappingSpec scalar_variant_spec(MappingVariant v, double param);

enum class FitObjective {
    TotalLoss, // weighted RGB + intensity + chromaticity loss
    SmoothL1,  // Smooth-l1 on the intensity envelope
};

struct FitResult {
    double best_param = 0.0;
    double best_loss = 0.0;
    std::vector<double> losses; // one per grid entry, grid order
};

// Exhaustive search over grid; ties go to the smaller parameter value.
FitResult fit_scalar_param(const RgbImage& dark, const RgbImage& ref, MappingVariant variant,
                           std::span<const double> grid, Epsilon eps = {},
                           FitObjective objective = FitObjective::TotalLoss);

// Parses "start:stop:step" into start, start+step, ... up to stop inclusive.
// A bare number is a one-point grid.
std::vector<double> parse_grid(std::string_view text);

} // namespace icd
