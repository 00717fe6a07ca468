#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfirst/event.hpp"
#include "hfirst/gabor.hpp"
#include "hfirst/neuron.hpp"

namespace hfirst {

enum class Layer : std::uint8_t { s1 = 0, c1 = 1, s2 = 2, c2 = 3 };

const char* layer_name(Layer layer); // "S1", "C1", "S2", "C2"

/// One output spike. `x`/`y` are coordinates on the emitting layer's grid
/// (pixel grid for S1, pooled grid for C1/S2, (0,0) for C2); `channel` is the
/// orientation index for S1/C1 and the class index for S2/C2.
struct SpikeRecord {
    std::uint64_t t = 0;
    Layer layer = Layer::s1;
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::uint16_t channel = 0;

    bool operator==(const SpikeRecord&) const = default;
};

enum class PolarityPolicy : std::uint8_t { merge, on_only, off_only };

const char* polarity_name(PolarityPolicy p);
PolarityPolicy parse_polarity(const std::string& name); // throws ConfigError

/// Class template kernel: integer weights over window x window pooled
/// positions x channels. Weight layout is x-major, then y, then channel,
/// matching the model file: w[(xi*window + yi)*channels + c].
struct S2Kernel {
    std::string label;
    int window = 8;
    int channels = 12;
    std::vector<std::int16_t> w;

    std::int16_t at(int xi, int yi, int c) const {
        return w[static_cast<std::size_t>((xi * window + yi) * channels + c)];
    }
    /// Shape check; throws ValidationError on mismatch.
    void validate() const;
};

struct NetworkConfig {
    SensorGeometry geometry{};
    GaborParams gabor{};

    NeuronParams s1{200, 50, 5};
    NeuronParams c1{1, 0, 5};
    int s2_threshold = 200; // mV, nominal range [100, 200]
    std::uint8_t s2_leak = 10;
    std::uint8_t s2_t_refr = 10;
    NeuronParams c2{1, 0, 10};
    bool enable_c2 = false;

    bool disable_c1_reset = false;
    bool disable_s2_reset = false;
    bool bypass_s1 = false;
    bool bypass_s1_c1 = false;

    /// Lateral reset normally only starts a refractory window; set to also
    /// clear the membrane potential.
    bool reset_clears_vm = false;

    PolarityPolicy polarity = PolarityPolicy::merge;

    NeuronParams s2_params() const {
        return NeuronParams{static_cast<std::uint8_t>(s2_threshold), s2_leak, s2_t_refr};
    }
    /// Throws ConfigError on contradictory flags or out-of-range parameters;
    /// logs a warning for s2_threshold outside [100, 200].
    void validate() const;
};

/// Canonical key=value dump of a network configuration (stable field order),
/// and its 64-bit FNV-1a digest used to tag models and run directories.
std::string canonical_config_text(const NetworkConfig& cfg);
std::uint64_t config_digest(const NetworkConfig& cfg);

/// Exact tallies of engine operations. "Counted" reset tallies follow the
/// routing bookkeeping (every slot a spike fans out to, whether or not the
/// target actually changes); "applied" tallies are resets actually performed.
struct ActivationReport {
    std::uint64_t input_events = 0;

    std::uint64_t s1_activations = 0;    // S1 feedforward synapse updates
    std::uint64_t c1_ff_activations = 0; // C1 feedforward synapse updates
    std::uint64_t c1_reset_counted = 0;  // 11 per S1 spike when C1 resets are on
    std::uint64_t c1_reset_applied = 0;  // 11 per C1 spike actually reset
    std::uint64_t s2_ff_activations = 0; // S2 feedforward synapse updates
    std::uint64_t s2_reset_counted = 0;  // classes x window positions per S2 spike
    std::uint64_t s2_reset_applied = 0;  // resets actually performed (other classes)
    std::uint64_t c2_activations = 0;

    std::uint64_t s1_spikes = 0;
    std::uint64_t c1_spikes = 0;
    std::uint64_t s2_spikes = 0;
    std::uint64_t c2_spikes = 0;

    std::uint64_t c1_total() const { return c1_ff_activations + c1_reset_counted; }
    std::uint64_t s2_total() const { return s2_ff_activations + s2_reset_counted; }

    ActivationReport& operator+=(const ActivationReport& other);
};

/// Report as "key: value" lines (counted and applied tallies).
std::string format_report_text(const ActivationReport& r);
/// Report as CSV: first four columns are the synapse-activation totals
/// S1, C1, S2, S2_rst; applied-reset columns follow.
std::string report_csv_header();
std::string report_csv_row(const ActivationReport& r);

/// Spike stream CSV: "t_us,layer,x,y,channel,label". `class_labels` supplies
/// the label column for S2/C2 spikes (empty for S1/C1).
std::string format_spikes_csv(const std::vector<SpikeRecord>& spikes,
                              const std::vector<std::string>& class_labels);

/// The event-driven four-layer cascade. One instance is single-threaded;
/// distinct instances share nothing and may run on separate threads.
///
/// Events must be fed in non-decreasing time order. All spikes triggered by
/// one event (S1 -> C1 -> S2 -> C2, including lateral resets) are fully
/// propagated, depth-first and in fixed deterministic order, before the next
/// event is consumed.
class Network {
  public:
    /// `kernels` may be empty: the network then runs S1+C1 only.
    Network(const NetworkConfig& cfg, std::vector<S2Kernel> kernels);

    /// Process one event; spikes are appended to `*out` if non-null.
    void process(const Event& e, std::vector<SpikeRecord>* out);

    const NetworkConfig& config() const { return cfg_; }
    const ActivationReport& report() const { return report_; }
    std::size_t num_classes() const { return kernels_.size(); }
    std::vector<std::string> class_labels() const;

    int c1_width() const { return c1w_; }
    int c1_height() const { return c1h_; }
    int c1_channels() const { return c1ch_; }
    int s2_width() const { return s2w_; }
    int s2_height() const { return s2h_; }

    /// Clear all neuron state and tallies (fresh network, same wiring).
    void clear();

  private:
    void feed_s1(std::uint64_t t, int x, int y, std::vector<SpikeRecord>* out);
    void feed_c1(std::uint64_t t, int sx, int sy, int ch, std::vector<SpikeRecord>* out);
    void feed_s2(std::uint64_t t, int cx, int cy, int ch, std::vector<SpikeRecord>* out);
    void feed_c2(std::uint64_t t, int cls, std::vector<SpikeRecord>* out);

    NetworkConfig cfg_;
    std::vector<S2Kernel> kernels_;

    int c1w_ = 0, c1h_ = 0, c1ch_ = 0;
    int s2w_ = 0, s2h_ = 0, s2win_ = 0;

    std::vector<std::int16_t> s1_bank_; // [theta][dv+3][du+3]
    std::vector<NeuronState> s1_;       // [theta][y][x]
    std::vector<NeuronState> c1_;       // [cy][cx][theta]
    std::vector<NeuronState> s2_;       // [class][y][x]
    std::vector<NeuronState> c2_;       // [class]

    ActivationReport report_;
    std::uint64_t last_t_ = 0;
    bool saw_event_ = false;
};

struct NetworkResult {
    std::vector<SpikeRecord> spikes;
    ActivationReport report;
};

/// Convenience batch runner over a sorted event stream.
NetworkResult run_network(const std::vector<Event>& events, const NetworkConfig& cfg,
                          std::vector<S2Kernel> kernels);

} // namespace hfirst
