#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hfirst/commands.hpp"
#include "hfirst/errors.hpp"
#include "hfirst/log.hpp"

namespace {

struct Cli {
    std::string config_path;
    std::vector<std::string> sets;

    std::uint64_t seed = 0;
    int jobs = 0;
    int trials = 0;
    int train_per_class = 0;
    int test_per_class = 0;
    int s2_threshold = 0;
    std::string out;
    std::string format;
    std::string dataset;
    std::string model;
    std::string input;
    std::string jitter_mode;
    std::vector<double> sigmas;
    bool disable_c1_reset = false;
    bool disable_s2_reset = false;
    bool bypass_s1 = false;
    bool bypass_s1_c1 = false;
    bool enable_c2 = false;
    bool ablate_bypass = false;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hfirst: event-driven hierarchical spiking recognition over AER streams"};
    app.set_version_flag("--version", "hfirst 1.0.0");
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "key=value configuration file applied over defaults");
    app.add_option("--set", cli.sets, "override one configuration key (key=value, repeatable)")
        ->take_all()
        ->allow_extra_args(false);
    app.add_option("--seed", cli.seed, "master random seed");
    app.add_option("--jobs", cli.jobs, "worker threads for trials/sweeps");
    app.add_option("--out", cli.out, "output root directory");
    app.add_option("--format", cli.format, "event file format (binary-v1 or csv)");
    app.add_option("--s2-threshold", cli.s2_threshold, "template-layer threshold, mV");
    app.add_option("--dataset", cli.dataset, "dataset manifest path");
    app.add_option("--model", cli.model, "model file path");
    app.add_option("--input", cli.input, "input event file path");
    app.add_option("--trials", cli.trials, "cross-validation trials");
    app.add_option("--train-per-class", cli.train_per_class, "training examples per class per trial");
    app.add_option("--test-per-class", cli.test_per_class, "test examples per class per trial");
    app.add_option("--sigmas", cli.sigmas, "jitter sweep standard deviations, ms")->take_all();
    app.add_option("--mode", cli.jitter_mode, "jitter target: train or test");
    app.add_flag("--disable-c1-reset", cli.disable_c1_reset, "turn off orientation winner-take-all resets");
    app.add_flag("--disable-s2-reset", cli.disable_s2_reset, "turn off class winner-take-all resets");
    app.add_flag("--bypass-s1", cli.bypass_s1, "feed events directly into the pooling layer");
    app.add_flag("--bypass-s1-c1", cli.bypass_s1_c1, "feed events directly into the template layer");
    app.add_flag("--enable-c2", cli.enable_c2, "enable the global class-pooling layer");
    app.add_flag("--ablate-bypass", cli.ablate_bypass, "include bypass variants in ablate");

    std::string pos_dataset, pos_input;
    CLI::App* synth = app.add_subcommand("synth", "generate the built-in glyph dataset");
    CLI::App* train = app.add_subcommand("train", "train class templates from a dataset");
    train->add_option("manifest", pos_dataset, "dataset manifest path");
    CLI::App* eval = app.add_subcommand("eval", "evaluate a model over a dataset");
    eval->add_option("manifest", pos_dataset, "dataset manifest path");
    CLI::App* xval = app.add_subcommand("xval", "cross-validate with random train/test splits");
    xval->add_option("manifest", pos_dataset, "dataset manifest path");
    CLI::App* jitter = app.add_subcommand("jitter", "accuracy vs timing-jitter sweep");
    jitter->add_option("manifest", pos_dataset, "dataset manifest path");
    CLI::App* stream = app.add_subcommand("stream", "emit detections over a continuous stream");
    stream->add_option("events", pos_input, "input event file");
    CLI::App* ablate = app.add_subcommand("ablate", "compare reset/bypass variants");
    ablate->add_option("manifest", pos_dataset, "dataset manifest path");
    CLI::App* bench = app.add_subcommand("bench", "measure cascade throughput");
    bench->add_option("manifest", pos_dataset, "dataset manifest path");
    for (CLI::App* sub : {synth, train, eval, xval, jitter, stream, ablate, bench}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        hfirst::RunConfig cfg;
        if (!cli.config_path.empty()) hfirst::apply_config_file(cfg, cli.config_path);
        for (const std::string& kv : cli.sets) hfirst::apply_kv_line(cfg, kv);

        // Dedicated flags win over --set and the config file.
        if (app.count("--seed") > 0) cfg.seed = cli.seed;
        if (app.count("--jobs") > 0) cfg.jobs = cli.jobs;
        if (app.count("--out") > 0) cfg.out = cli.out;
        if (app.count("--format") > 0) cfg.format = hfirst::parse_format(cli.format);
        if (app.count("--s2-threshold") > 0) cfg.net.s2_threshold = cli.s2_threshold;
        if (app.count("--dataset") > 0) cfg.dataset = cli.dataset;
        if (app.count("--model") > 0) cfg.model = cli.model;
        if (app.count("--input") > 0) cfg.input = cli.input;
        if (app.count("--trials") > 0) cfg.trials = cli.trials;
        if (app.count("--train-per-class") > 0) cfg.train_per_class = cli.train_per_class;
        if (app.count("--test-per-class") > 0) cfg.test_per_class = cli.test_per_class;
        if (app.count("--sigmas") > 0) cfg.jitter_sigmas = cli.sigmas;
        if (app.count("--mode") > 0) cfg.jitter_mode = cli.jitter_mode;
        if (cli.disable_c1_reset) cfg.net.disable_c1_reset = true;
        if (cli.disable_s2_reset) cfg.net.disable_s2_reset = true;
        if (cli.bypass_s1) cfg.net.bypass_s1 = true;
        if (cli.bypass_s1_c1) cfg.net.bypass_s1_c1 = true;
        if (cli.enable_c2) cfg.net.enable_c2 = true;
        if (cli.ablate_bypass) cfg.ablate_bypass = true;
        if (!pos_dataset.empty()) cfg.dataset = pos_dataset;
        if (!pos_input.empty()) cfg.input = pos_input;

        if (synth->parsed()) hfirst::cmd_synth(cfg);
        else if (train->parsed()) hfirst::cmd_train(cfg);
        else if (eval->parsed()) hfirst::cmd_eval(cfg);
        else if (xval->parsed()) hfirst::cmd_xval(cfg);
        else if (jitter->parsed()) hfirst::cmd_jitter(cfg);
        else if (stream->parsed()) hfirst::cmd_stream(cfg);
        else if (ablate->parsed()) hfirst::cmd_ablate(cfg);
        else if (bench->parsed()) hfirst::cmd_bench(cfg);
        return 0;
    } catch (const hfirst::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const hfirst::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
