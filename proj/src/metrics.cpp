#include "icd/metrics.hpp"

#include <cmath>
#include <vector>

namespace icd {
namespace {

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) {
        throw DimensionError(std::string(what) + ": length mismatch " + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()));
    }
}

std::vector<double> gaussian_kernel(std::size_t size, double sigma) {
    std::vector<double> k(size);
    const double centre = static_cast<double>(size - 1) / 2.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        const double d = static_cast<double>(i) - centre;
        k[i] = std::exp(-0.5 * d * d / (sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable 'valid' filtering: output is (w - n + 1) x (h - n + 1).
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t w, std::size_t h,
                                 const std::vector<double>& k) {
    const std::size_t n = k.size();
    const std::size_t ow = w - n + 1;
    const std::size_t oh = h - n + 1;
    std::vector<double> rows(ow * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += k[i] * src[y * w + x + i];
            rows[y * ow + x] = acc;
        }
    }
    std::vector<double> out(ow * oh);
    for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += k[i] * rows[(y + i) * ow + x];
            out[y * ow + x] = acc;
        }
    }
    return out;
}

std::vector<double> extract_channel(const RgbImage& img, std::size_t c) {
    std::vector<double> out(img.pixel_count());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) out[i] = img(i, c);
    return out;
}

} // namespace

double mse(const RgbImage& a, const RgbImage& b) {
    require_same_shape(a, b, "mse");
    if (a.empty()) throw EmptyInputError("mse: empty images");
    const auto va = a.values();
    const auto vb = b.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = va[i] - vb[i];
        acc += d * d;
    }
    return acc / static_cast<double>(va.size());
}

double psnr(const RgbImage& a, const RgbImage& b, double cap_db) {
    const double m = mse(a, b);
    if (m == 0.0) return cap_db;
    return 10.0 * std::log10(1.0 / m);
}

double ssim_plane(std::span<const double> a, std::span<const double> b, std::size_t width,
                  std::size_t height, const SsimParams& params) {
    require_same_length(a, b, "ssim");
    if (a.size() != width * height) throw DimensionError("ssim: plane size does not match shape");
    if (width < params.window || height < params.window) {
        throw DimensionError("ssim: image " + std::to_string(width) + "x" +
                             std::to_string(height) + " smaller than window " +
                             std::to_string(params.window));
    }

    const auto k = gaussian_kernel(params.window, params.sigma);
    const std::vector<double> x(a.begin(), a.end());
    const std::vector<double> y(b.begin(), b.end());
    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, width, height, k);
    const auto my = filter_valid(y, width, height, k);
    const auto mxx = filter_valid(xx, width, height, k);
    const auto myy = filter_valid(yy, width, height, k);
    const auto mxy = filter_valid(xy, width, height, k);

    const double c1 = (params.k1 * params.data_range) * (params.k1 * params.data_range);
    const double c2 = (params.k2 * params.data_range) * (params.k2 * params.data_range);
    double acc = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = mxx[i] - mx[i] * mx[i];
        const double vy = myy[i] - my[i] * my[i];
        const double cxy = mxy[i] - mx[i] * my[i];
        acc += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cxy + c2)) /
               ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    return acc / static_cast<double>(mx.size());
}

double ssim(const RgbImage& a, const RgbImage& b, const SsimParams& params) {
    require_same_shape(a, b, "ssim");
    double acc = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        acc += ssim_plane(extract_channel(a, c), extract_channel(b, c), a.width(), a.height(),
                          params);
    }
    return acc / 3.0;
}

double ssim(const IntensityMap& a, const IntensityMap& b, const SsimParams& params) {
    require_same_shape(a, b, "ssim");
    return ssim_plane(a.values(), b.values(), a.width(), a.height(), params);
}

double rel_mae(const RgbImage& out, const RgbImage& ref, double delta) {
    require_same_shape(out, ref, "rel_mae");
    if (out.empty()) throw EmptyInputError("rel_mae: empty images");
    const auto vo = out.values();
    const auto vr = ref.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < vo.size(); ++i) acc += std::abs(vo[i] - vr[i]) / (vr[i] + delta);
    return acc / static_cast<double>(vo.size());
}

double mean_abs_diff(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "mean_abs_diff");
    if (a.empty()) throw EmptyInputError("mean_abs_diff: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc / static_cast<double>(a.size());
}

double smooth_l1(std::span<const double> a, std::span<const double> b, double beta) {
    require_same_length(a, b, "smooth_l1");
    if (a.empty()) throw EmptyInputError("smooth_l1: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]);
        acc += d < beta ? 0.5 * d * d / beta : d - 0.5 * beta;
    }
    return acc / static_cast<double>(a.size());
}

LossBreakdown total_loss(const RgbImage& out, const RgbImage& ref, Epsilon eps,
                         const LossWeights& w) {
    require_same_shape(out, ref, "total_loss");
    const DecoupledImage d_out = decompose(out, eps);
    const DecoupledImage d_ref = decompose(ref, eps);

    LossBreakdown l;
    l.l_rgb = mean_abs_diff(out.values(), ref.values()) + (1.0 - ssim(out, ref));
    l.l_i = mean_abs_diff(d_out.intensity.values(), d_ref.intensity.values()) +
            (1.0 - ssim(d_out.intensity, d_ref.intensity));
    l.l_c = mean_abs_diff(d_out.chroma.values(), d_ref.chroma.values());
    l.total = l.l_rgb + w.lambda_i * l.l_i + w.lambda_c * l.l_c;
    return l;
}

MetricsReport evaluate(const RgbImage& out, const RgbImage& ref, Epsilon eps,
                       const LossWeights& w) {
    MetricsReport r;
    r.mse = mse(out, ref);
    r.psnr_db = psnr(out, ref);
    r.ssim = ssim(out, ref);
    r.rel_mae = rel_mae(out, ref);
    r.loss = total_loss(out, ref, eps, w);
    return r;
}

} // namespace icd
