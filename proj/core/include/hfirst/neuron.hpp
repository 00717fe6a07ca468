#pragma once

#include <cstdint>
#include <limits>

#include "hfirst/errors.hpp"

namespace hfirst {

/// Integrate-and-Fire parameters. All three are 8-bit quantities
/// (1 LSB = 1 mV for v_thresh, 1 mV/ms for leak, 1 ms for t_refr).
struct NeuronParams {
    std::uint8_t v_thresh = 1; // mV, >= 1
    std::uint8_t leak = 0;     // mV/ms, linear decay rate toward zero
    std::uint8_t t_refr = 0;   // ms, refractory period

    friend bool operator==(const NeuronParams&, const NeuronParams&) = default;
};

/// Sentinel for "never spiked": far enough in the past that no refractory
/// window can cover t=0, yet safe against int64 overflow for any realistic
/// timestamp (t < 2^62 us).
inline constexpr std::int64_t kNeverSpiked = -(std::int64_t(1) << 62);

/// Per-neuron state. Times are in microseconds; the membrane potential is a
/// wide signed integer in mV (parameters are 8-bit, transient sums are not).
struct NeuronState {
    std::int64_t vm = 0;                    // membrane potential, mV
    std::int64_t t_last_update = 0;         // us
    std::int64_t t_last_spike = kNeverSpiked; // us

    friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

/// One weighted input at time t (microseconds).
struct SynapticInput {
    std::int64_t t = 0;
    std::int32_t weight = 0; // mV
};

/// Linear decay toward zero over `dt_ms` whole milliseconds, clamped so the
/// potential never crosses zero.
inline std::int64_t decay(std::int64_t vm, std::int64_t dt_ms, std::uint8_t leak) {
    const std::int64_t drop = static_cast<std::int64_t>(leak) * dt_ms;
    if (vm >= 0) {
        const std::int64_t r = vm - drop;
        return r > 0 ? r : 0;
    }
    const std::int64_t r = vm + drop;
    return r < 0 ? r : 0;
}

/// Deliver one synaptic input. Returns true when the neuron spiked.
///
/// Semantics, in order:
///  1. inputs must arrive in non-decreasing time order (time regression throws);
///  2. if fewer than t_refr whole ms elapsed since the last spike (or lateral
///     reset), the input is ignored entirely: vm and t_last_update keep their
///     values and no spike can occur;
///  3. otherwise vm decays over the whole milliseconds elapsed since the last
///     update, the weight is added, and t_last_update advances to t (the
///     sub-millisecond remainder is absorbed);
///  4. reaching v_thresh fires: vm resets to 0 and t_last_spike records t.
inline bool integrate(NeuronState& s, std::int64_t t, std::int32_t weight, const NeuronParams& p) {
    if (t < s.t_last_update)
        throw ValidationError("synaptic input time regression: inputs must be fed in sorted order");
    if ((t - s.t_last_spike) / 1000 < static_cast<std::int64_t>(p.t_refr)) return false;
    const std::int64_t dt_ms = (t - s.t_last_update) / 1000;
    s.vm = decay(s.vm, dt_ms, p.leak) + weight;
    s.t_last_update = t;
    if (s.vm >= static_cast<std::int64_t>(p.v_thresh)) {
        s.vm = 0;
        s.t_last_spike = t;
        return true;
    }
    return false;
}

inline bool integrate(NeuronState& s, const SynapticInput& in, const NeuronParams& p) {
    return integrate(s, in.t, in.weight, p);
}

/// Lateral (winner-take-all) reset: the receiving neuron enters refraction as
/// if it had spiked at t. The published update touches only t_last_spike; the
/// stricter reading that also clears the potential sits behind `clear_vm`.
inline void lateral_reset(NeuronState& s, std::int64_t t, bool clear_vm = false) {
    s.t_last_spike = t;
    if (clear_vm) s.vm = 0;
}

} // namespace hfirst
