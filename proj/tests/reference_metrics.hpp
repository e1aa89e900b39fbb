#pragma once

// Test-only oracles. Everything here is written directly from the metric
// definitions with plain loops and shares no code with src/metrics.cpp.

#include <algorithm>
#include <cmath>
#include <vector>

#include "icd/image.hpp"

namespace icd_test {

// 0.5 + 0.45 sin(0.2 x + 0.3 y + c), the pair used for the frozen SSIM value.
inline icd::RgbImage sinus_gradient(std::size_t w, std::size_t h) {
    icd::RgbImage img(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t c = 0; c < 3; ++c) {
                img.at(x, y, c) = 0.5 + 0.45 * std::sin(0.2 * double(x) + 0.3 * double(y) + double(c));
            }
        }
    }
    return img;
}

// Banded pattern used for the frozen loss values.
inline icd::RgbImage loss_reference(std::size_t w, std::size_t h) {
    icd::RgbImage img(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t c = 0; c < 3; ++c) {
                img.at(x, y, c) = 0.1 + 0.85 * double((x * (c + 1) + 3 * y + 7 * c) % 17) / 16.0;
            }
        }
    }
    return img;
}

inline icd::RgbImage scaled(const icd::RgbImage& img, double s) {
    icd::RgbImage out = img;
    for (double& v : out.values()) v *= s;
    return out;
}

using Plane = std::vector<std::vector<double>>; // [y][x]

inline double brute_ssim_plane(const Plane& a, const Plane& b) {
    const int n = 11;
    const double sigma = 1.5;
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    std::vector<std::vector<double>> wgt(n, std::vector<double>(n));
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double di = i - 5, dj = j - 5;
            wgt[i][j] = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
            wsum += wgt[i][j];
        }
    }
    const int h = int(a.size()), w = int(a[0].size());
    double acc = 0.0;
    int count = 0;
    for (int y0 = 0; y0 + n <= h; ++y0) {
        for (int x0 = 0; x0 + n <= w; ++x0) {
            double mx = 0, my = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    mx += wgt[i][j] / wsum * a[y0 + i][x0 + j];
                    my += wgt[i][j] / wsum * b[y0 + i][x0 + j];
                }
            }
            double vx = 0, vy = 0, cxy = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double dx = a[y0 + i][x0 + j] - mx, dy = b[y0 + i][x0 + j] - my;
                    vx += wgt[i][j] / wsum * dx * dx;
                    vy += wgt[i][j] / wsum * dy * dy;
                    cxy += wgt[i][j] / wsum * dx * dy;
                }
            }
            acc += (2 * mx * my + c1) * (2 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return acc / count;
}

inline Plane channel(const icd::RgbImage& img, std::size_t c) {
    Plane p(img.height(), std::vector<double>(img.width()));
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) p[y][x] = img.at(x, y, c);
    }
    return p;
}

inline Plane max_plane(const icd::RgbImage& img) {
    Plane p(img.height(), std::vector<double>(img.width()));
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
            p[y][x] = std::max({img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2)});
        }
    }
    return p;
}

inline double brute_ssim(const icd::RgbImage& a, const icd::RgbImage& b) {
    double s = 0.0;
    for (std::size_t c = 0; c < 3; ++c) s += brute_ssim_plane(channel(a, c), channel(b, c));
    return s / 3.0;
}

struct BruteLoss {
    double l_rgb, l_i, l_c, total;
};

inline BruteLoss brute_total_loss(const icd::RgbImage& out, const icd::RgbImage& ref, double eps,
                                  double lambda_i, double lambda_c) {
    const std::size_t w = out.width(), h = out.height();
    double l1 = 0.0, li = 0.0, lc = 0.0;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double mo = std::max({out.at(x, y, 0), out.at(x, y, 1), out.at(x, y, 2)});
            const double mr = std::max({ref.at(x, y, 0), ref.at(x, y, 1), ref.at(x, y, 2)});
            li += std::abs(mo - mr);
            for (std::size_t c = 0; c < 3; ++c) {
                l1 += std::abs(out.at(x, y, c) - ref.at(x, y, c));
                const double co = std::log(out.at(x, y, c) + eps) - std::log(mo + eps);
                const double cr = std::log(ref.at(x, y, c) + eps) - std::log(mr + eps);
                lc += std::abs(co - cr);
            }
        }
    }
    const double npx = double(w * h);
    BruteLoss r{};
    r.l_rgb = l1 / (3 * npx) + (1.0 - brute_ssim(out, ref));
    r.l_i = li / npx + (1.0 - brute_ssim_plane(max_plane(out), max_plane(ref)));
    r.l_c = lc / (3 * npx);
    r.total = r.l_rgb + lambda_i * r.l_i + lambda_c * r.l_c;
    return r;
}

} // namespace icd_test
