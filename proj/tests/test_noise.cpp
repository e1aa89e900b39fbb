#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "icd/noise.hpp"

using namespace icd;

TEST_CASE("linearized perturbation: zero noise and gray cancellation") {
    const RgbImage clean = uniform_image(6, 6, 0.2, 1.0, 1);
    const auto zero = linearized_chroma_perturbation(clean, VectorMap(6, 6));
    for (double v : zero.delta.values()) CHECK(v == 0.0);
    CHECK(zero.excluded_count() == 0);

    const RgbImage gray(1, 1, 0.5);
    const VectorMap same(1, 1, 0.01);
    const auto g = linearized_chroma_perturbation(gray, same);
    CHECK(g.excluded_count() == 0);
    for (double v : g.delta.values()) CHECK(v == 0.0);
}

TEST_CASE("linearized perturbation: scalar example") {
    RgbImage clean(1, 1);
    clean.set_pixel(0, {0.8, 0.4, 0.2});
    VectorMap eta(1, 1);
    eta.set_pixel(0, {0.0, 0.01, 0.0});
    const auto p = linearized_chroma_perturbation(clean, eta, Epsilon(1e-4));
    // 0.01 / 0.4001, frozen.
    CHECK(p.delta(0, 1) == doctest::Approx(0.02499375156210947).epsilon(1e-14));
    CHECK(p.delta(0, 0) == 0.0);
    CHECK(p.delta(0, 2) == 0.0);
}

TEST_CASE("perturbation: ordering violations are excluded") {
    RgbImage clean(1, 1);
    clean.set_pixel(0, {0.5, 0.49, 0.1});
    VectorMap eta(1, 1);
    eta.set_pixel(0, {0.0, 0.05, 0.0});
    CHECK(linearized_chroma_perturbation(clean, eta).excluded[0]);
    CHECK(exact_chroma_perturbation(clean, eta).excluded[0]);
}

TEST_CASE("exact perturbation approaches the linear one for small noise") {
    RgbImage clean(1, 1);
    clean.set_pixel(0, {0.8, 0.4, 0.2});
    VectorMap eta(1, 1);
    eta.set_pixel(0, {1e-6, -2e-6, 3e-6});
    const auto ex = exact_chroma_perturbation(clean, eta);
    const auto li = linearized_chroma_perturbation(clean, eta);
    // The gap is the second-order term of log(1 + t), about t^2 / 2 per channel.
    const Pixel s = clean.pixel(0), n = eta.pixel(0);
    const double tm = n[0] / (s[0] + 1e-4);
    for (std::size_t c = 0; c < 3; ++c) {
        const double tc = n[c] / (s[c] + 1e-4);
        const double second = 0.5 * (tc * tc + tm * tm);
        CHECK(std::abs(ex.delta(0, c) - li.delta(0, c)) <= 1.01 * second + 1e-15);
    }
}

TEST_CASE("rgb jacobian amplification") {
    VectorMap eta(2, 1);
    eta.set_pixel(0, {0.01, 0.0, 0.0});
    eta.set_pixel(1, {0.01, 0.0, 0.0});
    const auto unit = rgb_jacobian_amplification(ScalarMap(2, 1, 1.0), eta);
    CHECK(unit == eta);
    const auto ten = rgb_jacobian_amplification(ScalarMap(2, 1, 10.0), eta);
    CHECK(ten(0, 0) == doctest::Approx(0.1));
    CHECK(ten(0, 1) == 0.0);

    // Gain 1 / I_max: a dark pixel is amplified more than a bright one.
    RgbImage clean(2, 1);
    clean.set_pixel(0, {0.05, 0.02, 0.01});
    clean.set_pixel(1, {0.9, 0.5, 0.4});
    ScalarMap gain(2, 1);
    for (std::size_t i = 0; i < 2; ++i) gain(i) = 1.0 / baseline_value(clean.pixel(i), Baseline::Max);
    const auto amp = rgb_jacobian_amplification(gain, eta);
    CHECK(std::abs(amp(0, 0)) > std::abs(amp(1, 0)));

    CHECK_THROWS_AS(rgb_jacobian_amplification(ScalarMap(2, 1, 0.0), eta), DomainError);
}

TEST_CASE("synthesize_scene") {
    const RgbImage refl = uniform_image(5, 4, 0.05, 1.0, 3);
    ScalingScene scene{refl, ScalarMap(5, 4, 1.0)};
    CHECK(synthesize_scene(scene, NoiseModel{0.0}, 1) == refl);

    scene.illumination = ScalarMap(5, 4, 0.25);
    const RgbImage dark = synthesize_scene(scene, NoiseModel{0.0}, 1);
    for (std::size_t k = 0; k < refl.values().size(); ++k) {
        CHECK(dark.values()[k] == 0.25 * refl.values()[k]);
    }

    const auto rep = check_illumination_invariance(refl, dark, 0.25);
    CHECK(rep.ok());
    CHECK(rep.max_chroma_difference <= rep.max_bound);

    const RgbImage n1 = synthesize_scene(scene, NoiseModel{0.05}, 9);
    const RgbImage n2 = synthesize_scene(scene, NoiseModel{0.05}, 9);
    CHECK(n1 == n2);
    for (double v : n1.values()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    scene.illumination(0) = 0.0;
    CHECK_THROWS_AS(synthesize_scene(scene, NoiseModel{0.0}, 1), DomainError);
}

TEST_CASE("monte carlo: zero sigma") {
    const RgbImage clean = uniform_image(4, 4, 0.2, 1.0, 5);
    const auto rep = monte_carlo_chroma_agreement(clean, NoiseModel{0.0}, 10, {}, 1);
    CHECK(rep.mean_abs_exact == 0.0);
    CHECK(rep.mean_abs_predicted == 0.0);
    CHECK(rep.relative_agreement_error == 0.0);
    CHECK(rep.excluded_fraction == 0.0);
}

TEST_CASE("monte carlo: gray clean image reports a valid exclusion fraction") {
    const RgbImage clean(4, 4, 0.5);
    const auto rep = monte_carlo_chroma_agreement(clean, NoiseModel{0.02}, 50, {}, 2);
    CHECK(rep.excluded_fraction >= 0.0);
    CHECK(rep.excluded_fraction <= 1.0);
    // Channel 0 wins a three-way tie only a third of the time.
    CHECK(rep.excluded_fraction > 0.5);
}

TEST_CASE("monte carlo: determinism and thread independence") {
    const RgbImage clean = uniform_image(6, 6, 0.2, 1.0, 6);
    const NoiseModel m{0.01};
    const auto a = monte_carlo_chroma_agreement(clean, m, 200, {}, 42, 1);
    const auto b = monte_carlo_chroma_agreement(clean, m, 200, {}, 42, 1);
    const auto c = monte_carlo_chroma_agreement(clean, m, 200, {}, 42, 4);
    CHECK(a.relative_agreement_error == b.relative_agreement_error);
    CHECK(a.mean_abs_exact == c.mean_abs_exact);
    CHECK(a.relative_agreement_error == c.relative_agreement_error);
    CHECK(a.excluded_fraction == c.excluded_fraction);
}

TEST_CASE("monte carlo: agreement tightens as sigma shrinks") {
    const RgbImage clean = uniform_image(8, 8, 0.2, 1.0, 7);
    double prev = 1.0;
    for (double sigma : {0.04, 0.02, 0.01}) {
        const auto rep = monte_carlo_chroma_agreement(clean, NoiseModel{sigma}, 500, {}, 8);
        CHECK(rep.relative_agreement_error <= prev * 1.05);
        prev = rep.relative_agreement_error;
    }
    CHECK(prev <= 0.10);
}

TEST_CASE("monte carlo: low-signal flag and errors") {
    const RgbImage dim(2, 2, 0.05);
    const auto rep = monte_carlo_chroma_agreement(dim, NoiseModel{0.01}, 5, {}, 0);
    CHECK(rep.low_signal);
    CHECK(rep.low_signal_fraction == 1.0);

    CHECK_THROWS_AS(monte_carlo_chroma_agreement(dim, NoiseModel{0.01}, 0), ConfigError);
    CHECK_THROWS_AS(monte_carlo_chroma_agreement(dim, NoiseModel{-1.0}, 5), DomainError);
}

TEST_CASE("property: constrained reconstruction bounds every channel under noise") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RgbImage clean = uniform_image(9, 7, 0.0, 1.0, seed);
        const VectorMap eta = sample_noise(9, 7, NoiseModel{0.2}, seed + 50);
        IntensityMap intensity(9, 7);
        ChromaticityMap chroma(9, 7);
        for (std::size_t p = 0; p < clean.pixel_count(); ++p) {
            Pixel noisy = clean.pixel(p);
            for (std::size_t c = 0; c < 3; ++c) noisy[c] = std::max(0.0, noisy[c] + eta(p, c));
            // Deliberately mismatched: noisy intensity, chroma relative to the clean envelope.
            intensity(p) = baseline_value(noisy, Baseline::Max) - 0.3;
            chroma.set_pixel(p, pixel_chromaticity(noisy, baseline_value(clean.pixel(p), Baseline::Max), 1e-4));
        }
        const auto ci = constrain_intensity(intensity);
        const RgbImage raw = reconstruct_unclipped(ci, constrain_chromaticity(chroma));
        for (std::size_t p = 0; p < raw.pixel_count(); ++p) {
            for (std::size_t c = 0; c < 3; ++c) CHECK(raw(p, c) <= ci(p) + 1e-12);
        }
    }
}
