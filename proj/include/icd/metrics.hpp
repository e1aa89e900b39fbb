#pragma once

#include <cstddef>
#include <span>

#include "icd/core.hpp"

namespace icd {

struct LossWeights {
    double lambda_i = 1500.0;
    double lambda_c = 2500.0;
    double smooth_l1_beta = 0.01;
};

struct SsimParams {
    std::size_t window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double data_range = 1.0;
};

inline constexpr double kPsnrCapDb = 100.0;

struct LossBreakdown {
    double l_rgb = 0.0;
    double l_i = 0.0;
    double l_c = 0.0;
    double total = 0.0;
};

struct MetricsReport {
    double psnr_db = 0.0;
    double ssim = 0.0;
    double mse = 0.0;
    double rel_mae = 0.0;
    LossBreakdown loss;
};

double mse(const RgbImage& a, const RgbImage& b);

// 10 log10(1 / MSE); identical images return cap_db.
double psnr(const RgbImage& a, const RgbImage& b, double cap_db = kPsnrCapDb);

// Gaussian-window SSIM over one plane, averaged over every position where the
// window fits entirely inside the image.
double ssim_plane(std::span<const double> a, std::span<const double> b, std::size_t width,
                  std::size_t height, const SsimParams& params = {});

// Per-channel SSIM averaged over R, G, B.
double ssim(const RgbImage& a, const RgbImage& b, const SsimParams& params = {});
double ssim(const IntensityMap& a, const IntensityMap& b, const SsimParams& params = {});

inline constexpr double kRelMaeDelta = 1e-2;

// Mean of |out - ref| / (ref + delta) over pixels and channels.
double rel_mae(const RgbImage& out, const RgbImage& ref, double delta = kRelMaeDelta);

double mean_abs_diff(std::span<const double> a, std::span<const double> b);

// Mean Smooth-l1: 0.5 d^2 / beta when |d| < beta, |d| - 0.5 beta otherwise.
double smooth_l1(std::span<const double> a, std::span<const double> b, double beta);

// l_rgb = L1 + (1 - SSIM) on RGB, l_I the same on the max envelopes, l_C the
// mean L1 between max-baseline chromaticities.
LossBreakdown total_loss(const RgbImage& out, const RgbImage& ref, Epsilon eps = {},
                         const LossWeights& w = {});

MetricsReport evaluate(const RgbImage& out, const RgbImage& ref, Epsilon eps = {},
                       const LossWeights& w = {});

} // namespace icd
