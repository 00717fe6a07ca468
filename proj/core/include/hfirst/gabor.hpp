#pragma once

#include <cstdint>
#include <vector>

#include "hfirst/errors.hpp"

namespace hfirst {

/// Oriented Gabor filter parameters for the S1 edge-detection bank.
/// Orientation k of `orientations` is at k * (180/orientations) degrees.
struct GaborParams {
    double lambda = 5.0;  // carrier wavelength, pixels
    double sigma = 2.8;   // Gaussian envelope, pixels
    double gamma = 0.3;   // envelope aspect ratio
    int size = 7;         // kernel side, odd
    int orientations = 12;
    int weight_scale = 100; // mV corresponding to filter value 1.0

    void validate() const {
        if (size < 3 || size % 2 == 0) throw ConfigError("gabor size must be odd and >= 3");
        if (orientations < 1) throw ConfigError("gabor orientations must be >= 1");
        if (weight_scale < 1) throw ConfigError("gabor weight_scale must be >= 1");
        if (lambda <= 0 || sigma <= 0 || gamma < 0) throw ConfigError("gabor lambda/sigma/gamma out of range");
    }

    double theta_deg(int k) const { return k * (180.0 / orientations); }
};

/// Single integer filter tap in mV:
///   round(scale * exp(-(u0^2 + gamma^2 v0^2) / (2 sigma^2)) * cos(2 pi u0 / lambda))
/// with u0 = du cos(theta) + dv sin(theta), v0 = -du sin(theta) + dv cos(theta).
int gabor_weight(double theta_deg, int du, int dv, const GaborParams& params = {});

/// One orientation's quantized weight grid, du,dv in [-(size/2), size/2].
struct S1Kernel {
    int size = 7;
    std::vector<std::int16_t> w; // [dv+r][du+r], row-major

    std::int16_t at(int du, int dv) const {
        const int r = size / 2;
        return w[static_cast<std::size_t>(dv + r) * size + (du + r)];
    }
};

S1Kernel gabor_kernel(double theta_deg, const GaborParams& params = {});

/// All orientations, index k at k * (180/orientations) degrees.
std::vector<S1Kernel> gabor_bank(const GaborParams& params = {});

} // namespace hfirst
