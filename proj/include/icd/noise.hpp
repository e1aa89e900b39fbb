#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "icd/core.hpp"

namespace icd {

enum class NoiseKind { GaussianAdditive };

struct NoiseModel {
    double sigma = 0.0;
    NoiseKind kind = NoiseKind::GaussianAdditive;

    void validate() const;
};

// I_c(x) = L(x) R_c(x) with a shared positive illumination factor per pixel.
struct ScalingScene {
    RgbImage reflectance;
    ScalarMap illumination;
};

// Zero-mean Gaussian field with the model's sigma, one draw per channel.
VectorMap sample_noise(std::size_t width, std::size_t height, const NoiseModel& model,
                       std::uint64_t seed);

// Every channel drawn uniformly from [lo, hi]; deterministic given seed.
RgbImage uniform_image(std::size_t width, std::size_t height, double lo, double hi,
                       std::uint64_t seed);

// L * R + eta, clipped to [0, 1].
RgbImage synthesize_scene(const ScalingScene& scene, const NoiseModel& model, std::uint64_t seed);

struct ChromaPerturbation {
    VectorMap delta;
    // True where the noisy max channel differs from the clean anchor channel
    // (or a noisy value falls to -eps or below); delta is zero there.
    std::vector<bool> excluded;

    std::size_t excluded_count() const noexcept;
};

// First-order chromaticity change eta_c / (S_c + eps) - eta_m / (S_m + eps),
// m being the lowest-index max channel of the clean signal.
ChromaPerturbation linearized_chroma_perturbation(const RgbImage& clean, const VectorMap& noise,
                                                  Epsilon eps = {});

// Exact chromaticity change C(clean + eta) - C(clean), computed without
// clipping the noisy signal. Pixels are excluded under the same rule as above.
ChromaPerturbation exact_chroma_perturbation(const RgbImage& clean, const VectorMap& noise,
                                             Epsilon eps = {});

// Linearized RGB-domain noise g(x) * eta(x) after the diagonal enhancement
// f(I) = g(x) I.
VectorMap rgb_jacobian_amplification(const ScalarMap& gain, const VectorMap& noise);

struct AgreementReport {
    std::size_t trials = 0;
    std::size_t pixels = 0;
    double sigma = 0.0;
    double mean_abs_exact = 0.0;
    double mean_abs_predicted = 0.0;
    double mean_abs_difference = 0.0;
    // sum |exact - predicted| / sum |exact| over included samples; 0 when the
    // exact perturbation vanishes identically.
    double relative_agreement_error = 0.0;
    double excluded_fraction = 0.0;
    // Fraction of clean channel values below 10 sigma.
    double low_signal_fraction = 0.0;
    bool low_signal = false;
};

// Trial t draws its noise from seed + t, so the result is independent of how
// trials are scheduled. threads == 0 means one per hardware thread.
AgreementReport monte_carlo_chroma_agreement(const RgbImage& clean, const NoiseModel& model,
                                             std::size_t trials, Epsilon eps = {},
                                             std::uint64_t seed = 0, std::size_t threads = 1);

} // namespace icd
