#include "icd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "icd/parallel.hpp"

namespace icd {

void NoiseModel::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw DomainError("noise sigma must be a finite value >= 0, got " + std::to_string(sigma));
    }
}

VectorMap sample_noise(std::size_t width, std::size_t height, const NoiseModel& model,
                       std::uint64_t seed) {
    model.validate();
    VectorMap out(width, height);
    if (model.sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, model.sigma);
    for (double& v : out.values()) v = normal(rng);
    return out;
}

RgbImage uniform_image(std::size_t width, std::size_t height, double lo, double hi,
                       std::uint64_t seed) {
    if (!(lo <= hi)) throw DomainError("uniform_image: lo must be <= hi");
    RgbImage out(width, height);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& v : out.values()) v = dist(rng);
    return out;
}

RgbImage synthesize_scene(const ScalingScene& scene, const NoiseModel& model, std::uint64_t seed) {
    require_same_shape(scene.reflectance, scene.illumination, "synthesize_scene");
    for (double l : scene.illumination.values()) {
        if (!(l > 0.0)) throw DomainError("illumination must be > 0");
    }
    for (double r : scene.reflectance.values()) {
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidInputError("reflectance must lie in [0, 1]");
    }
    const VectorMap noise =
        sample_noise(scene.reflectance.width(), scene.reflectance.height(), model, seed);
    RgbImage out(scene.reflectance.width(), scene.reflectance.height());
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        const double l = scene.illumination(i);
        for (std::size_t c = 0; c < 3; ++c) {
            out(i, c) = std::clamp(l * scene.reflectance(i, c) + noise(i, c), 0.0, 1.0);
        }
    }
    return out;
}

std::size_t ChromaPerturbation::excluded_count() const noexcept {
    return static_cast<std::size_t>(std::count(excluded.begin(), excluded.end(), true));
}

namespace {

// Clean anchor m must still attain the noisy maximum, and every noisy value
// must stay above -eps so the logarithm is defined.
bool ordering_preserved(const Pixel& noisy, std::size_t m, double eps) {
    for (std::size_t c = 0; c < 3; ++c) {
        if (noisy[c] > noisy[m]) return false;
        if (!(noisy[c] + eps > 0.0)) return false;
    }
    return true;
}

Pixel add(const Pixel& a, const Pixel& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

} // namespace

ChromaPerturbation linearized_chroma_perturbation(const RgbImage& clean, const VectorMap& noise,
                                                  Epsilon eps) {
    require_same_shape(clean, noise, "linearized_chroma_perturbation");
    const double e = eps.value();
    ChromaPerturbation out{VectorMap(clean.width(), clean.height()),
                           std::vector<bool>(clean.pixel_count(), false)};
    for (std::size_t i = 0; i < clean.pixel_count(); ++i) {
        const Pixel s = clean.pixel(i);
        const Pixel eta = noise.pixel(i);
        const std::size_t m = anchor_channel(s);
        if (!ordering_preserved(add(s, eta), m, e)) {
            out.excluded[i] = true;
            continue;
        }
        const double ref = eta[m] / (s[m] + e);
        for (std::size_t c = 0; c < 3; ++c) out.delta(i, c) = eta[c] / (s[c] + e) - ref;
    }
    return out;
}

ChromaPerturbation exact_chroma_perturbation(const RgbImage& clean, const VectorMap& noise,
                                             Epsilon eps) {
    require_same_shape(clean, noise, "exact_chroma_perturbation");
    const double e = eps.value();
    ChromaPerturbation out{VectorMap(clean.width(), clean.height()),
                           std::vector<bool>(clean.pixel_count(), false)};
    for (std::size_t i = 0; i < clean.pixel_count(); ++i) {
        const Pixel s = clean.pixel(i);
        const Pixel noisy = add(s, noise.pixel(i));
        const std::size_t m = anchor_channel(s);
        if (!ordering_preserved(noisy, m, e)) {
            out.excluded[i] = true;
            continue;
        }
        const Pixel c0 = pixel_chromaticity(s, s[m], e);
        const Pixel c1 = pixel_chromaticity(noisy, noisy[m], e);
        for (std::size_t c = 0; c < 3; ++c) out.delta(i, c) = c1[c] - c0[c];
    }
    return out;
}

VectorMap rgb_jacobian_amplification(const ScalarMap& gain, const VectorMap& noise) {
    require_same_shape(gain, noise, "rgb_jacobian_amplification");
    VectorMap out = noise;
    for (std::size_t i = 0; i < noise.pixel_count(); ++i) {
        const double g = gain(i);
        if (!(g > 0.0)) throw DomainError("gain must be > 0 at pixel " + std::to_string(i));
        for (std::size_t c = 0; c < 3; ++c) out(i, c) *= g;
    }
    return out;
}

namespace {

struct TrialSums {
    double abs_exact = 0.0;
    double abs_predicted = 0.0;
    double abs_difference = 0.0;
    std::size_t included = 0;
};

} // namespace

AgreementReport monte_carlo_chroma_agreement(const RgbImage& clean, const NoiseModel& model,
                                             std::size_t trials, Epsilon eps,
                                             std::uint64_t seed, std::size_t threads) {
    if (trials == 0) throw ConfigError("monte_carlo_chroma_agreement: trials must be >= 1");
    if (clean.empty()) throw EmptyInputError("monte_carlo_chroma_agreement: empty image");
    model.validate();

    std::vector<TrialSums> sums(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const VectorMap eta = sample_noise(clean.width(), clean.height(), model, seed + t);
        const ChromaPerturbation exact = exact_chroma_perturbation(clean, eta, eps);
        const ChromaPerturbation pred = linearized_chroma_perturbation(clean, eta, eps);
        TrialSums& s = sums[t];
        for (std::size_t i = 0; i < clean.pixel_count(); ++i) {
            if (exact.excluded[i]) continue;
            ++s.included;
            for (std::size_t c = 0; c < 3; ++c) {
                s.abs_exact += std::abs(exact.delta(i, c));
                s.abs_predicted += std::abs(pred.delta(i, c));
                s.abs_difference += std::abs(exact.delta(i, c) - pred.delta(i, c));
            }
        }
    });

    TrialSums total;
    for (const TrialSums& s : sums) {
        total.abs_exact += s.abs_exact;
        total.abs_predicted += s.abs_predicted;
        total.abs_difference += s.abs_difference;
        total.included += s.included;
    }

    AgreementReport rep;
    rep.trials = trials;
    rep.pixels = clean.pixel_count();
    rep.sigma = model.sigma;
    const double samples = static_cast<double>(trials * clean.pixel_count());
    rep.excluded_fraction = 1.0 - static_cast<double>(total.included) / samples;
    if (total.included > 0) {
        const double n = static_cast<double>(total.included * 3);
        rep.mean_abs_exact = total.abs_exact / n;
        rep.mean_abs_predicted = total.abs_predicted / n;
        rep.mean_abs_difference = total.abs_difference / n;
    }
    rep.relative_agreement_error =
        total.abs_exact > 0.0 ? total.abs_difference / total.abs_exact : 0.0;

    std::size_t low = 0;
    for (double v : clean.values()) {
        if (v < 10.0 * model.sigma) ++low;
    }
    rep.low_signal_fraction = static_cast<double>(low) / static_cast<double>(clean.values().size());
    rep.low_signal = low > 0;
    return rep;
}

} // namespace icd
