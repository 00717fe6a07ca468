#pragma once

#include <cstdint>
#include <vector>

#include "hfirst/errors.hpp"

namespace hfirst {

/// One address-event: microsecond timestamp, pixel address, polarity.
/// Polarity 1 = brightness increase (ON), 0 = decrease (OFF).
struct Event {
    std::uint64_t t = 0; // microseconds
    std::uint16_t x = 0; // column
    std::uint16_t y = 0; // row
    std::uint8_t p = 0;  // 0 or 1

    friend bool operator==(const Event&, const Event&) = default;
};

/// Sensor pixel array dimensions. Defaults to the 128x128 array the
/// recognition network is sized for.
struct SensorGeometry {
    std::uint16_t width = 128;
    std::uint16_t height = 128;

    friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;

    bool contains(std::uint16_t x, std::uint16_t y) const {
        return x < width && y < height;
    }
};

/// A rectangular patch of scene intensity used by the synthetic event
/// generator. Intensities are unitless and non-negative; `background` is
/// the intensity of the scene everywhere outside the patch.
struct Sprite {
    int width = 0;
    int height = 0;
    std::vector<double> intensity; // row-major, width*height values
    double background = 1.0;

    double at(int x, int y) const { return intensity[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return intensity[static_cast<std::size_t>(y) * width + x]; }

    static Sprite filled(int w, int h, double value, double background = 1.0) {
        Sprite s;
        s.width = w;
        s.height = h;
        s.intensity.assign(static_cast<std::size_t>(w) * h, value);
        s.background = background;
        return s;
    }

    /// Throws ValidationError if any intensity is negative or the patch is
    /// degenerate or uniform (a gradient-free sprite cannot emit events but
    /// is still considered valid; only negative values are rejected).
    void validate() const;
};

/// True when timestamps are non-decreasing.
bool is_sorted_by_time(const std::vector<Event>& events);

} // namespace hfirst
