#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icd/errors.hpp"

namespace icd {

// Row-major, channel-interleaved grid of doubles. The tag parameter keeps
// semantically different grids (an RGB observation, an intensity envelope,
// a log-chromaticity map, ...) from being mixed up at compile time.
template <std::size_t Channels, class Tag>
class Field {
public:
    static constexpr std::size_t channels = Channels;

    Field() = default;

    Field(std::size_t width, std::size_t height, double fill = 0.0)
        : width_(width), height_(height), data_(width * height * Channels, fill) {}

    Field(std::size_t width, std::size_t height, std::vector<double> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != width_ * height_ * Channels) {
            throw DimensionError("field data length " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(width_) + "x" +
                                 std::to_string(height_) + "x" + std::to_string(Channels));
        }
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }
    bool empty() const noexcept { return pixel_count() == 0; }

    double& operator()(std::size_t pixel, std::size_t c = 0) noexcept {
        return data_[pixel * Channels + c];
    }
    double operator()(std::size_t pixel, std::size_t c = 0) const noexcept {
        return data_[pixel * Channels + c];
    }

    double& at(std::size_t x, std::size_t y, std::size_t c = 0) noexcept {
        return data_[(y * width_ + x) * Channels + c];
    }
    double at(std::size_t x, std::size_t y, std::size_t c = 0) const noexcept {
        return data_[(y * width_ + x) * Channels + c];
    }

    std::array<double, Channels> pixel(std::size_t i) const noexcept {
        std::array<double, Channels> p{};
        for (std::size_t c = 0; c < Channels; ++c) p[c] = data_[i * Channels + c];
        return p;
    }

    void set_pixel(std::size_t i, const std::array<double, Channels>& p) noexcept {
        for (std::size_t c = 0; c < Channels; ++c) data_[i * Channels + c] = p[c];
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    template <std::size_t C2, class T2>
    bool same_shape(const Field<C2, T2>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

struct RgbTag;
struct IntensityTag;
struct ChromaTag;
struct ScalarMapTag;
struct VectorMapTag;

using Pixel = std::array<double, 3>;

// Observation with channel values in [0, 1].
using RgbImage = Field<3, RgbTag>;
// Per-pixel baseline intensity (the max/min/mean channel envelope).
using IntensityMap = Field<1, IntensityTag>;
// Per-pixel log-ratios of each channel to the baseline.
using ChromaticityMap = Field<3, ChromaTag>;
// Unconstrained per-pixel parameter fields (residuals, gains, weights).
using ScalarMap = Field<1, ScalarMapTag>;
using VectorMap = Field<3, VectorMapTag>;

template <std::size_t C1, class T1, std::size_t C2, class T2>
void require_same_shape(const Field<C1, T1>& a, const Field<C2, T2>& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.width()) +
                             "x" + std::to_string(a.height()) + " vs " +
                             std::to_string(b.width()) + "x" + std::to_string(b.height()));
    }
}

// Reinterpret a field's values under another tag with the same channel count.
template <class To, std::size_t C, class T>
To retag(const Field<C, T>& from) {
    static_assert(To::channels == C);
    return To(from.width(), from.height(),
              std::vector<double>(from.values().begin(), from.values().end()));
}

} // namespace icd
