#include "hfirst/gabor.hpp"

#include <cmath>
#include <numbers>

#include "hfirst/util.hpp"

namespace hfirst {

int gabor_weight(double theta_deg, int du, int dv, const GaborParams& p) {
    const double th = theta_deg * std::numbers::pi / 180.0;
    const double u0 = du * std::cos(th) + dv * std::sin(th);
    const double v0 = -du * std::sin(th) + dv * std::cos(th);
    const double envelope = std::exp(-(u0 * u0 + p.gamma * p.gamma * v0 * v0) / (2.0 * p.sigma * p.sigma));
    const double carrier = std::cos(2.0 * std::numbers::pi * u0 / p.lambda);
    return static_cast<int>(round_half_away(p.weight_scale * envelope * carrier));
}

S1Kernel gabor_kernel(double theta_deg, const GaborParams& p) {
    p.validate();
    S1Kernel k;
    k.size = p.size;
    k.w.resize(static_cast<std::size_t>(p.size) * p.size);
    const int r = p.size / 2;
    for (int dv = -r; dv <= r; ++dv)
        for (int du = -r; du <= r; ++du)
            k.w[static_cast<std::size_t>(dv + r) * p.size + (du + r)] =
                static_cast<std::int16_t>(gabor_weight(theta_deg, du, dv, p));
    return k;
}

std::vector<S1Kernel> gabor_bank(const GaborParams& p) {
    p.validate();
    std::vector<S1Kernel> bank;
    bank.reserve(p.orientations);
    for (int k = 0; k < p.orientations; ++k) bank.push_back(gabor_kernel(p.theta_deg(k), p));
    return bank;
}

} // namespace hfirst
