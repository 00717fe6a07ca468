#pragma once

#include <cstdint>
#include <vector>

#include "hfirst/event.hpp"

namespace hfirst {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct SynthParams {
    double contrast_threshold = 0.3; // |delta log I| per event
    SensorGeometry geometry{};
    std::uint64_t seed = 0;          // only consumed when threshold_mismatch > 0
    Vec2 start{0.0, 0.0};            // sprite top-left position at t=0 (may be off-screen)
    double step_px = 0.125;          // temporal sampling granularity in pixels of motion
    std::uint64_t pixel_refractory_us = 0; // events inside this window are dropped (0 = ideal)
    double threshold_mismatch = 0.0; // per-pixel threshold stddev as a fraction of nominal
    double initial_phase = 0.0;      // random initial reference offset, fraction of threshold [0,1]
    double intensity_floor = 1e-6;   // applied before taking logs
};

/// Idealized event-camera model: the sprite translates at `velocity`
/// (pixels/ms) for `duration_ms`; each pixel accumulates the change in
/// log-intensity and emits an event whenever the accumulated change since
/// its last event exceeds the contrast threshold, with polarity by sign.
/// Event timestamps are the linearly interpolated crossing times rounded
/// down to microseconds; the output is time-sorted. Deterministic for fixed
/// parameters and seed.
///
/// Throws ValidationError when the sprite is larger than the sensor, the
/// velocity is zero, or the contrast threshold is not positive.
std::vector<Event> synth_translate(const Sprite& sprite, Vec2 velocity_px_per_ms, double duration_ms,
                                   const SynthParams& params);

/// Optical point-spread approximation: separable Gaussian blur of the
/// intensity grid (linear domain) with the stated sigma in pixels. The
/// canvas is padded by 3 sigma on every side so edges soften into the
/// background instead of clipping. A non-positive sigma returns the sprite
/// unchanged.
Sprite blur_sprite(const Sprite& sprite, double sigma_px);

/// Rotate the sprite about its centre by `degrees` (counter-clockwise,
/// bilinear resampling). The canvas grows to the rotated bounding box and
/// uncovered pixels take the background intensity. Zero degrees returns the
/// sprite unchanged.
Sprite rotate_sprite(const Sprite& sprite, double degrees);

} // namespace hfirst
