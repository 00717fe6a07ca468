#pragma once

#include <cstdint>
#include <vector>

#include "hfirst/event.hpp"

namespace hfirst {

/// Gaussian timing jitter: t' = max(0, t + round(N(0, sigma_ms) in us)),
/// re-sorted. sigma_ms = 0 returns the input unchanged. Deterministic for a
/// fixed seed.
std::vector<Event> add_jitter(const std::vector<Event>& events, double sigma_ms, std::uint64_t seed);

/// Background noise: events Poisson-injected at `rate_per_s` uniformly over
/// the stream's time span and pixel array, merged in sorted order.
/// rate 0 or an empty stream returns the input unchanged.
std::vector<Event> add_noise(const std::vector<Event>& events, double rate_per_s, const SensorGeometry& geometry,
                             std::uint64_t seed);

} // namespace hfirst
