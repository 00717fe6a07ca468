#include "doctest.h"

#include <algorithm>
#include <utility>
#include <vector>

#include "hfirst/errors.hpp"
#include "hfirst/network.hpp"

using namespace hfirst;

namespace {

S2Kernel flat_kernel(std::string label, int window, int channels, std::int16_t fill) {
    S2Kernel k;
    k.label = std::move(label);
    k.window = window;
    k.channels = channels;
    k.w.assign(static_cast<std::size_t>(window) * window * channels, fill);
    return k;
}

} // namespace

TEST_CASE("config validation: contradictory flags and out-of-range thresholds") {
    NetworkConfig cfg;
    cfg.bypass_s1 = cfg.bypass_s1_c1 = true;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.s2_threshold = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.s2_threshold = 256;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.geometry = {0, 16};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config digests are stable and sensitive to every field change") {
    NetworkConfig a, b;
    CHECK(config_digest(a) == config_digest(b));
    b.s2_threshold = 150;
    CHECK(config_digest(a) != config_digest(b));
    b = {};
    b.disable_c1_reset = true;
    CHECK(config_digest(a) != config_digest(b));
    b = {};
    b.gabor.lambda = 6.0;
    CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("interior event drives 588 edge-layer synapses; double event isolates the centers") {
    NetworkConfig cfg;
    cfg.geometry = {16, 16};
    Network net(cfg, {});
    std::vector<SpikeRecord> spikes;

    net.process({0, 8, 8, 1}, &spikes);
    CHECK(net.report().s1_activations == 588); // 12 orientations x 49 taps
    CHECK(net.report().s1_spikes == 0);        // max tap is 100 < 200 threshold

    // A second event at the same pixel and time doubles every center tap to
    // exactly 200 mV. Only the center tap has weight 100 in every
    // orientation, so exactly one neuron per orientation fires.
    net.process({0, 8, 8, 1}, &spikes);
    CHECK(net.report().s1_activations == 1176);
    CHECK(net.report().s1_spikes == 12);

    // Pooling winner-take-all: the first orientation to fire claims the
    // pooled unit and laterally resets the other 11 channels, which are then
    // refractory at the same timestamp.
    CHECK(net.report().c1_ff_activations == 12);
    CHECK(net.report().c1_reset_counted == 11 * 12);
    CHECK(net.report().c1_spikes == 1);
    CHECK(net.report().c1_reset_applied == 11);
    CHECK(net.report().c1_total() == 12 * 12); // 12 per S1 spike

    // Depth-first order: S1 ch0, then its pooled spike, then S1 ch1..11.
    REQUIRE(spikes.size() == 13);
    CHECK(spikes[0] == SpikeRecord{0, Layer::s1, 8, 8, 0});
    CHECK(spikes[1] == SpikeRecord{0, Layer::c1, 2, 2, 0});
    for (int o = 1; o < 12; ++o)
        CHECK(spikes[static_cast<std::size_t>(o) + 1]
              == SpikeRecord{0, Layer::s1, 8, 8, static_cast<std::uint16_t>(o)});
}

TEST_CASE("border events reach only the truncated neuron window") {
    NetworkConfig cfg;
    cfg.geometry = {16, 16};
    Network net(cfg, {});
    net.process({0, 0, 0, 1}, nullptr);
    CHECK(net.report().s1_activations == 12 * 16); // 4x4 corner window
    net.process({0, 8, 0, 1}, nullptr);
    CHECK(net.report().s1_activations == 12 * 16 + 12 * 28); // 7x4 edge window
}

TEST_CASE("pooled units map 4x4 pixel blocks and hold a 5 ms refractory") {
    NetworkConfig cfg;
    cfg.bypass_s1 = true; // events feed the pooled layer directly
    Network net(cfg, {});
    std::vector<SpikeRecord> spikes;
    net.process({0, 0, 0, 1}, &spikes);
    net.process({0, 3, 3, 1}, &spikes); // same pooled unit, refractory
    net.process({0, 4, 0, 1}, &spikes); // next unit over
    net.process({4999, 2, 1, 1}, &spikes); // 4 whole ms: still blocked
    net.process({5000, 2, 1, 1}, &spikes); // window closes
    REQUIRE(spikes.size() == 3);
    CHECK(spikes[0] == SpikeRecord{0, Layer::c1, 0, 0, 0});
    CHECK(spikes[1] == SpikeRecord{0, Layer::c1, 1, 0, 0});
    CHECK(spikes[2] == SpikeRecord{5000, Layer::c1, 0, 0, 0});
    CHECK(net.report().c1_ff_activations == 5);
    CHECK(net.report().c1_reset_counted == 0); // single channel: no lateral slots
}

TEST_CASE("template layer window, weight indexing and reset tallies") {
    // Single-channel network (pooled bypass) with one class whose only
    // positive weight sits at kernel cell (xi=2, yi=3). A pooled spike at
    // (4,4) must therefore fire the template neuron at (4+4-2, 4+4-3)=(6,5).
    NetworkConfig cfg;
    cfg.bypass_s1 = true;
    S2Kernel k = flat_kernel("only", 8, 1, -1);
    k.w[(2 * 8 + 3) * 1] = 200;
    Network net(cfg, {k});
    REQUIRE(net.s2_width() == 32);
    REQUIRE(net.s2_height() == 32);

    std::vector<SpikeRecord> spikes;
    net.process({0, 16, 16, 1}, &spikes); // pooled spike at (4,4)
    REQUIRE(spikes.size() == 2);
    CHECK(spikes[0] == SpikeRecord{0, Layer::c1, 4, 4, 0});
    CHECK(spikes[1] == SpikeRecord{0, Layer::s2, 6, 5, 0});

    const auto& r = net.report();
    CHECK(r.s2_ff_activations == 64);  // full 8x8 window in-grid, 1 class
    CHECK(r.s2_spikes == 1);
    CHECK(r.s2_reset_counted == 64);   // bookkeeping includes the own class
    CHECK(r.s2_reset_applied == 0);    // ...but no other class exists
}

TEST_CASE("template window truncates at the pooled-grid border") {
    NetworkConfig cfg;
    cfg.bypass_s1 = true;
    Network net(cfg, {flat_kernel("z", 8, 1, -1)});
    net.process({0, 0, 0, 1}, nullptr); // pooled spike at (0,0)
    // Window would be X in [-3,4]: truncated to [0,4], so 5x5 positions.
    CHECK(net.report().s2_ff_activations == 25);
}

TEST_CASE("class winner-take-all: winner spared everywhere, rivals silenced") {
    NetworkConfig cfg;
    cfg.bypass_s1 = true;
    cfg.s2_threshold = 100;
    // Class A fires from cell (4,4) [neuron (cx,cy)] and from cell (0,0)
    // [neuron (cx+4,cy+4)]. Class B would fire from cell (4,4) too, but class
    // A is swept first and resets B's neurons across the window.
    S2Kernel a = flat_kernel("A", 8, 1, -1);
    a.w[(4 * 8 + 4) * 1] = 100;
    a.w[0] = 100;
    S2Kernel b = flat_kernel("B", 8, 1, -1);
    b.w[(4 * 8 + 4) * 1] = 100;
    Network net(cfg, {a, b});

    std::vector<SpikeRecord> spikes;
    net.process({0, 16, 16, 1}, &spikes); // pooled spike at (4,4)
    REQUIRE(spikes.size() == 3);
    CHECK(spikes[0] == SpikeRecord{0, Layer::c1, 4, 4, 0});
    CHECK(spikes[1] == SpikeRecord{0, Layer::s2, 4, 4, 0}); // class A at (cx,cy)
    CHECK(spikes[2] == SpikeRecord{0, Layer::s2, 8, 8, 0}); // class A spared by its own reset

    const auto& r = net.report();
    CHECK(r.s2_spikes == 2);
    CHECK(r.s2_ff_activations == 64 * 2);
    // Two spikes, each resetting a fully interior 8x8 window over 2 classes.
    CHECK(r.s2_reset_counted == 2 * 64 * 2);
    CHECK(r.s2_reset_applied == 2 * 64 * 1);
}

TEST_CASE("disabling the class reset lets the rival fire too") {
    NetworkConfig cfg;
    cfg.bypass_s1 = true;
    cfg.s2_threshold = 100;
    cfg.disable_s2_reset = true;
    S2Kernel a = flat_kernel("A", 8, 1, -1);
    a.w[(4 * 8 + 4) * 1] = 100;
    S2Kernel b = flat_kernel("B", 8, 1, -1);
    b.w[(4 * 8 + 4) * 1] = 100;
    Network net(cfg, {a, b});
    std::vector<SpikeRecord> spikes;
    net.process({0, 16, 16, 1}, &spikes);
    REQUIRE(spikes.size() == 3);
    CHECK(spikes[1] == SpikeRecord{0, Layer::s2, 4, 4, 0});
    CHECK(spikes[2] == SpikeRecord{0, Layer::s2, 4, 4, 1});
    CHECK(net.report().s2_reset_counted == 0);
    CHECK(net.report().s2_reset_applied == 0);
}

TEST_CASE("global class pooling counts one synapse per template spike") {
    NetworkConfig cfg;
    cfg.bypass_s1 = true;
    cfg.s2_threshold = 100;
    cfg.enable_c2 = true;
    S2Kernel a = flat_kernel("A", 8, 1, -1);
    a.w[(4 * 8 + 4) * 1] = 100;
    a.w[0] = 100;
    Network net(cfg, {a});
    std::vector<SpikeRecord> spikes;
    net.process({0, 16, 16, 1}, &spikes);
    // Two S2 spikes at the same time: the first fires C2, the second lands in
    // its 10 ms refractory window.
    CHECK(net.report().c2_activations == 2);
    CHECK(net.report().c2_spikes == 1);
    REQUIRE(spikes.size() == 4);
    CHECK(spikes[1] == SpikeRecord{0, Layer::s2, 4, 4, 0});
    CHECK(spikes[2] == SpikeRecord{0, Layer::c2, 0, 0, 0});
    CHECK(spikes[3] == SpikeRecord{0, Layer::s2, 8, 8, 0});
}

TEST_CASE("full bypass feeds raw pixels into a 32x32 template window") {
    NetworkConfig cfg;
    cfg.bypass_s1_c1 = true;
    S2Kernel k = flat_kernel("raw", 32, 1, -1);
    k.w[(16 * 32 + 16) * 1] = 200; // weight at the central cell
    Network net(cfg, {k});
    REQUIRE(net.s2_width() == 128);
    std::vector<SpikeRecord> spikes;
    net.process({0, 64, 64, 1}, &spikes);
    REQUIRE(spikes.size() == 1);
    CHECK(spikes[0] == SpikeRecord{0, Layer::s2, 64, 64, 0});
    const auto& r = net.report();
    CHECK(r.s1_activations == 0);
    CHECK(r.c1_ff_activations == 0);
    CHECK(r.s2_ff_activations == 32 * 32);
    CHECK(r.s2_reset_counted == 32 * 32);
}

TEST_CASE("kernel shape must match the network mode") {
    NetworkConfig cfg;
    cfg.bypass_s1 = true; // expects 8x8x1
    CHECK_THROWS_AS(Network(cfg, {flat_kernel("bad", 8, 12, 0)}), ConfigError);
    NetworkConfig full; // expects 8x8x12
    CHECK_THROWS_AS(Network(full, {flat_kernel("bad", 8, 1, 0)}), ConfigError);
    NetworkConfig raw;
    raw.bypass_s1_c1 = true; // expects 32x32x1
    CHECK_THROWS_AS(Network(raw, {flat_kernel("bad", 8, 1, 0)}), ConfigError);
    CHECK_NOTHROW(Network(raw, {flat_kernel("ok", 32, 1, 0)}));
}

TEST_CASE("polarity policies filter events after input accounting") {
    const std::vector<std::pair<PolarityPolicy, std::uint64_t>> table{
        {PolarityPolicy::merge, 588},
        {PolarityPolicy::on_only, 0},
        {PolarityPolicy::off_only, 588},
    };
    for (const auto& [policy, expect] : table) {
        NetworkConfig cfg;
        cfg.geometry = {16, 16};
        cfg.polarity = policy;
        Network net(cfg, {});
        net.process({0, 8, 8, 0}, nullptr); // an OFF event
        CHECK(net.report().input_events == 1);
        CHECK(net.report().s1_activations == expect);
    }
}

TEST_CASE("event stream validation: order, range and geometry") {
    NetworkConfig cfg;
    cfg.geometry = {16, 16};
    Network net(cfg, {});
    net.process({5, 1, 1, 1}, nullptr);
    CHECK_THROWS_AS(net.process({4, 1, 1, 1}, nullptr), ValidationError);
    Network net2(cfg, {});
    CHECK_THROWS_AS(net2.process({std::uint64_t(1) << 62, 1, 1, 1}, nullptr), ValidationError);
    CHECK_THROWS_AS(net2.process({0, 16, 1, 1}, nullptr), ValidationError);
}

TEST_CASE("clear() restores the freshly-constructed behaviour exactly") {
    NetworkConfig cfg;
    cfg.geometry = {32, 32};
    std::vector<Event> stream;
    for (int i = 0; i < 300; ++i)
        stream.push_back({static_cast<std::uint64_t>(i * 137), static_cast<std::uint16_t>((i * 7) % 32),
                          static_cast<std::uint16_t>((i * 13) % 32), static_cast<std::uint8_t>(i % 2)});
    std::sort(stream.begin(), stream.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

    Network net(cfg, {});
    std::vector<SpikeRecord> first, second;
    for (const Event& e : stream) net.process(e, &first);
    const ActivationReport r1 = net.report();
    net.clear();
    for (const Event& e : stream) net.process(e, &second);
    CHECK(first == second);
    CHECK(net.report().s1_activations == r1.s1_activations);
    CHECK(net.report().c1_spikes == r1.c1_spikes);

    // And a separate instance agrees (full determinism).
    const NetworkResult res = run_network(stream, cfg, {});
    CHECK(res.spikes == first);
}

TEST_CASE("spike CSV and report CSV use the documented columns") {
    std::vector<SpikeRecord> spikes{
        {10, Layer::s1, 5, 6, 3},
        {11, Layer::c1, 1, 1, 0},
        {12, Layer::s2, 2, 3, 1},
        {12, Layer::c2, 0, 0, 1},
    };
    const std::string csv = format_spikes_csv(spikes, {"A", "B"});
    CHECK(csv == "t_us,layer,x,y,channel,label\n"
                 "10,S1,5,6,3,\n"
                 "11,C1,1,1,0,\n"
                 "12,S2,2,3,1,B\n"
                 "12,C2,0,0,1,B\n");

    ActivationReport r;
    r.s1_activations = 588;
    r.c1_ff_activations = 2;
    r.c1_reset_counted = 22;
    r.c1_reset_applied = 11;
    r.s2_ff_activations = 64;
    r.s2_reset_counted = 64;
    r.s2_reset_applied = 32;
    CHECK(report_csv_header() == "S1,C1,S2,S2_rst,C1_rst_applied,S2_rst_applied\n");
    CHECK(report_csv_row(r) == "588,24,64,64,11,32\n");
    const std::string text = format_report_text(r);
    CHECK(text.find("s1_activations: 588\n") != std::string::npos);
    CHECK(text.find("c1_activations: 24\n") != std::string::npos);
    CHECK(text.find("s2_reset_counted: 64\n") != std::string::npos);
}

TEST_CASE("layer and polarity names round-trip") {
    CHECK(std::string(layer_name(Layer::s1)) == "S1");
    CHECK(std::string(layer_name(Layer::c2)) == "C2");
    for (auto p : {PolarityPolicy::merge, PolarityPolicy::on_only, PolarityPolicy::off_only})
        CHECK(parse_polarity(polarity_name(p)) == p);
    CHECK_THROWS_AS(parse_polarity("both"), ConfigError);
}
