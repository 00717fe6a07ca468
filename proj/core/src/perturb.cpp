#include "hfirst/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hfirst/errors.hpp"

namespace hfirst {

std::vector<Event> add_jitter(const std::vector<Event>& events, double sigma_ms, std::uint64_t seed) {
    if (sigma_ms < 0.0 || !std::isfinite(sigma_ms)) {
        throw ValidationError("jitter sigma must be finite and non-negative");
    }
    if (sigma_ms == 0.0 || events.empty()) return events;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma_ms * 1000.0); // us
    std::vector<Event> out = events;
    for (Event& e : out) {
        const long long delta = std::llround(noise(rng));
        long long t = static_cast<long long>(e.t) + delta;
        e.t = t < 0 ? 0u : static_cast<std::uint64_t>(t);
    }
    std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    return out;
}

std::vector<Event> add_noise(const std::vector<Event>& events, double rate_per_s, const SensorGeometry& geometry,
                             std::uint64_t seed) {
    if (rate_per_s < 0.0 || !std::isfinite(rate_per_s)) {
        throw ValidationError("noise rate must be finite and non-negative");
    }
    if (rate_per_s == 0.0 || events.empty()) return events;

    const std::uint64_t t_first = events.front().t;
    const std::uint64_t t_last = events.back().t;
    const double span_s = static_cast<double>(t_last - t_first) * 1e-6;

    std::mt19937_64 rng(seed);
    std::poisson_distribution<long long> count_dist(rate_per_s * span_s);
    const long long n = count_dist(rng);
    if (n <= 0) return events;

    std::uniform_int_distribution<std::uint64_t> t_dist(t_first, t_last);
    std::uniform_int_distribution<int> x_dist(0, geometry.width - 1);
    std::uniform_int_distribution<int> y_dist(0, geometry.height - 1);
    std::uniform_int_distribution<int> p_dist(0, 1);

    std::vector<Event> noise;
    noise.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        Event e;
        e.t = t_dist(rng);
        e.x = static_cast<std::uint16_t>(x_dist(rng));
        e.y = static_cast<std::uint16_t>(y_dist(rng));
        e.p = static_cast<std::uint8_t>(p_dist(rng));
        noise.push_back(e);
    }

    std::vector<Event> out;
    out.reserve(events.size() + noise.size());
    out.insert(out.end(), events.begin(), events.end());
    out.insert(out.end(), noise.begin(), noise.end());
    // Stable sort keeps original events ahead of same-timestamp noise.
    std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    return out;
}

} // namespace hfirst
