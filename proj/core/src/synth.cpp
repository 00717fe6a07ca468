#include "hfirst/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hfirst/util.hpp"

namespace hfirst {

namespace {

// Sprite intensity sampled with bilinear interpolation at sprite-local
// coordinates; everything outside the grid blends into the background.
double sample_intensity(const Sprite& s, double u, double v) {
    const double fu = std::floor(u), fv = std::floor(v);
    const int i0 = static_cast<int>(fu), j0 = static_cast<int>(fv);
    const double au = u - fu, av = v - fv;
    auto texel = [&](int i, int j) {
        if (i < 0 || j < 0 || i >= s.width || j >= s.height) return s.background;
        return s.at(i, j);
    };
    const double top = texel(i0, j0) * (1.0 - au) + texel(i0 + 1, j0) * au;
    const double bot = texel(i0, j0 + 1) * (1.0 - au) + texel(i0 + 1, j0 + 1) * au;
    return top * (1.0 - av) + bot * av;
}

// Time interval (ms) during which `coord - pos0 - v*t` stays within
// [-1, extent], i.e. the bilinear support of the sprite along one axis.
// Returns false when the axis never overlaps.
bool axis_window(double coord, double pos0, double v, int extent, double& lo, double& hi) {
    const double a = coord - pos0; // offset at t=0
    if (v == 0.0) {
        if (a < -1.0 || a > extent) return false;
        lo = -std::numeric_limits<double>::infinity();
        hi = std::numeric_limits<double>::infinity();
        return true;
    }
    // -1 <= a - v t <= extent
    double t1 = (a - extent) / v, t2 = (a + 1.0) / v;
    lo = std::min(t1, t2);
    hi = std::max(t1, t2);
    return true;
}

} // namespace

std::vector<Event> synth_translate(const Sprite& sprite, Vec2 vel, double duration_ms, const SynthParams& prm) {
    sprite.validate();
    const double speed = std::hypot(vel.x, vel.y);
    if (speed == 0.0) throw ValidationError("synth_translate requires a nonzero velocity");
    if (prm.contrast_threshold <= 0.0) throw ValidationError("contrast_threshold must be positive");
    if (duration_ms < 0.0) throw ValidationError("duration must be non-negative");
    if (sprite.width > prm.geometry.width || sprite.height > prm.geometry.height)
        throw ValidationError("sprite (" + std::to_string(sprite.width) + "x" + std::to_string(sprite.height) +
                              ") larger than sensor (" + std::to_string(prm.geometry.width) + "x" +
                              std::to_string(prm.geometry.height) + ")");

    const double floor_i = std::max(prm.intensity_floor, 1e-300);
    const double log_bg = std::log(std::max(sprite.background, floor_i));
    const double step_ms = std::max(prm.step_px, 1e-3) / speed;

    std::vector<Event> out;
    for (int py = 0; py < prm.geometry.height; ++py) {
        for (int px = 0; px < prm.geometry.width; ++px) {
            double lx, hx, ly, hy;
            if (!axis_window(px, prm.start.x, vel.x, sprite.width, lx, hx)) continue;
            if (!axis_window(py, prm.start.y, vel.y, sprite.height, ly, hy)) continue;
            double t0 = std::max({lx, ly, 0.0});
            double t1 = std::min({hx, hy, duration_ms});
            if (!(t0 < t1)) continue;

            double thresh = prm.contrast_threshold;
            if (prm.threshold_mismatch > 0.0) {
                std::mt19937_64 rng(mix64(prm.seed, static_cast<std::uint64_t>(py) * prm.geometry.width + px));
                std::normal_distribution<double> dev(0.0, prm.threshold_mismatch);
                thresh = std::max(0.05 * prm.contrast_threshold, thresh * (1.0 + dev(rng)));
            }
            // Stale reference levels: a real pixel's comparison level dates
            // from its last event, so at recording start each pixel sits a
            // random sub-threshold distance from its next crossing. Without
            // this every edge pixel fires in lockstep after the same
            // sub-pixel displacement.
            double ref_offset = 0.0;
            if (prm.initial_phase > 0.0) {
                std::mt19937_64 rng(mix64(mix64(prm.seed, 0x70686173ULL),
                                          static_cast<std::uint64_t>(py) * prm.geometry.width + px));
                std::uniform_real_distribution<double> uni(-1.0, 1.0);
                ref_offset = prm.initial_phase * thresh * uni(rng);
            }

            auto level = [&](double t_ms) {
                const double I =
                    sample_intensity(sprite, px - prm.start.x - vel.x * t_ms, py - prm.start.y - vel.y * t_ms);
                return std::log(std::max(I, floor_i));
            };

            // Reference starts at the level when the sprite first overlaps
            // (= background unless the recording starts mid-overlap).
            double ref = ((t0 > 0.0) ? log_bg : level(0.0)) + ref_offset;
            double prev_t = t0, prev_l = level(t0);
            std::int64_t last_emit = std::numeric_limits<std::int64_t>::min();
            std::size_t first_idx = out.size();
            bool done = false;
            while (!done) {
                double cur_t = prev_t + step_ms;
                if (cur_t >= t1) {
                    cur_t = t1;
                    done = true;
                }
                const double cur_l = level(cur_t);
                const double dl = cur_l - prev_l;
                // All threshold crossings inside this (linear) segment.
                while (true) {
                    double target;
                    std::uint8_t pol;
                    if (cur_l - ref > thresh) {
                        target = ref + thresh;
                        pol = 1;
                    } else if (cur_l - ref < -thresh) {
                        target = ref - thresh;
                        pol = 0;
                    } else {
                        break;
                    }
                    const double f = dl != 0.0 ? (target - prev_l) / dl : 0.0;
                    const double t_cross = prev_t + std::clamp(f, 0.0, 1.0) * (cur_t - prev_t);
                    const auto t_us = static_cast<std::int64_t>(t_cross * 1000.0); // floor: inputs non-negative
                    ref = target;
                    if (prm.pixel_refractory_us > 0 && last_emit != std::numeric_limits<std::int64_t>::min() &&
                        t_us - last_emit < static_cast<std::int64_t>(prm.pixel_refractory_us))
                        continue; // pixel still refractory: crossing tracked, event dropped
                    last_emit = t_us;
                    out.push_back(Event{static_cast<std::uint64_t>(t_us), static_cast<std::uint16_t>(px),
                                        static_cast<std::uint16_t>(py), pol});
                }
                prev_t = cur_t;
                prev_l = cur_l;
            }
            // Per-pixel events are monotone in construction order; enforce
            // non-decreasing stamps against floating rounding ties.
            for (std::size_t i = first_idx + 1; i < out.size(); ++i)
                if (out[i].t < out[i - 1].t) out[i].t = out[i - 1].t;
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    return out;
}

Sprite blur_sprite(const Sprite& sprite, double sigma_px) {
    sprite.validate();
    if (sigma_px <= 0.0) return sprite;

    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_px)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * (i / sigma_px) * (i / sigma_px));
        kernel[static_cast<std::size_t>(i + radius)] = w;
        ksum += w;
    }
    for (double& w : kernel) w /= ksum;

    Sprite padded = Sprite::filled(sprite.width + 2 * radius, sprite.height + 2 * radius, sprite.background,
                                   sprite.background);
    for (int y = 0; y < sprite.height; ++y)
        for (int x = 0; x < sprite.width; ++x) padded.at(x + radius, y + radius) = sprite.at(x, y);

    auto pass = [&](const Sprite& src, bool horizontal) {
        Sprite dst = src;
        for (int y = 0; y < src.height; ++y) {
            for (int x = 0; x < src.width; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    const int sx = horizontal ? x + i : x;
                    const int sy = horizontal ? y : y + i;
                    const double v = (sx < 0 || sy < 0 || sx >= src.width || sy >= src.height)
                                         ? src.background
                                         : src.at(sx, sy);
                    acc += v * kernel[static_cast<std::size_t>(i + radius)];
                }
                dst.at(x, y) = acc;
            }
        }
        return dst;
    };
    Sprite blurred = pass(pass(padded, true), false);
    blurred.validate();
    return blurred;
}

Sprite rotate_sprite(const Sprite& sprite, double degrees) {
    sprite.validate();
    if (degrees == 0.0) return sprite;

    const double rad = degrees * std::acos(-1.0) / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    const double w = sprite.width, h = sprite.height;
    const double new_w = std::abs(w * c) + std::abs(h * s);
    const double new_h = std::abs(w * s) + std::abs(h * c);
    Sprite out = Sprite::filled(static_cast<int>(std::ceil(new_w)), static_cast<int>(std::ceil(new_h)),
                                sprite.background, sprite.background);

    const double cx_src = w / 2.0, cy_src = h / 2.0;
    const double cx_dst = out.width / 2.0, cy_dst = out.height / 2.0;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            // Inverse mapping: rotate the destination pixel centre back into
            // source coordinates (bilinear sample centres sit at +0.5).
            const double dx = (x + 0.5) - cx_dst;
            const double dy = (y + 0.5) - cy_dst;
            const double su = c * dx + s * dy + cx_src - 0.5;
            const double sv = -s * dx + c * dy + cy_src - 0.5;
            out.at(x, y) = sample_intensity(sprite, su, sv);
        }
    }
    out.validate();
    return out;
}

} // namespace hfirst
