#include "hfirst/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "hfirst/errors.hpp"
#include "hfirst/log.hpp"
#include "hfirst/perturb.hpp"
#include "hfirst/util.hpp"

namespace hfirst {

std::vector<double> soft_scores(const std::vector<std::uint64_t>& n) {
    std::vector<double> p(n.size(), 0.0);
    std::uint64_t total = 0;
    for (std::uint64_t v : n) total += v;
    if (total == 0) return p;
    for (std::size_t i = 0; i < n.size(); ++i) p[i] = static_cast<double>(n[i]) / static_cast<double>(total);
    return p;
}

int hard_decision(const std::vector<std::uint64_t>& n) {
    int best = -1;
    std::uint64_t best_n = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] > best_n) {
            best_n = n[i];
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<std::uint64_t> s2_counts(const std::vector<SpikeRecord>& spikes, std::size_t num_classes) {
    std::vector<std::uint64_t> n(num_classes, 0);
    for (const SpikeRecord& s : spikes) {
        if (s.layer == Layer::s2 && s.channel < num_classes) ++n[s.channel];
    }
    return n;
}

ClassScores classify_soft(const std::vector<SpikeRecord>& spikes, std::size_t num_classes) {
    ClassScores scores;
    scores.n = s2_counts(spikes, num_classes);
    scores.p = soft_scores(scores.n);
    return scores;
}

int classify_hard(const std::vector<SpikeRecord>& spikes, std::size_t num_classes) {
    return hard_decision(s2_counts(spikes, num_classes));
}

EvalResult evaluate(const TrainedModel& model, const std::vector<Example>& tests, const NetworkConfig& cfg) {
    const std::size_t ncls = model.kernels.size();
    for (const Example& ex : tests) {
        if (model.class_index(ex.label) < 0) {
            throw ValidationError("test label '" + ex.label + "' is not a class of the model");
        }
    }

    EvalResult result;
    result.examples.reserve(tests.size());

    Network net(cfg, model.kernels);
    std::vector<SpikeRecord> spikes;
    std::size_t correct = 0;
    std::uint64_t negative_correct = 0;

    for (const Example& ex : tests) {
        net.clear();
        spikes.clear();
        for (const Event& e : ex.events) net.process(e, &spikes);
        result.report += net.report();

        const std::vector<std::uint64_t> n = s2_counts(spikes, ncls);
        const int pred = hard_decision(n);
        const int truth = model.class_index(ex.label);

        ExampleResult er;
        er.id = ex.id;
        er.true_label = ex.label;
        er.pred_label = pred >= 0 ? model.kernels[static_cast<std::size_t>(pred)].label : "";
        er.correct = pred == truth;
        er.n_total = std::accumulate(n.begin(), n.end(), std::uint64_t{0});
        if (er.correct) ++correct;

        // Binary reading per class: argmax class is the sole positive.
        for (std::size_t c = 0; c < ncls; ++c) {
            const bool read_positive = static_cast<int>(c) == pred;
            const bool is_positive = static_cast<int>(c) == truth;
            if (read_positive == is_positive) ++negative_correct;
        }
        result.examples.push_back(std::move(er));
    }

    const std::size_t total = tests.size();
    result.accuracy = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    result.negative_response_accuracy =
        total == 0 || ncls == 0 ? 0.0 : static_cast<double>(negative_correct) / static_cast<double>(total * ncls);
    return result;
}

namespace {

struct Split {
    std::vector<ClassExamples> train;
    std::vector<Example> test;
};

Split make_split(const std::vector<ClassExamples>& groups, const std::vector<std::vector<std::string>>& ids,
                 int train_k, int test_k, std::mt19937_64& rng) {
    Split split;
    split.train.reserve(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const ClassExamples& cls = groups[g];
        std::vector<std::size_t> order(cls.recordings.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        deterministic_shuffle(order, rng);

        ClassExamples tr;
        tr.label = cls.label;
        for (int i = 0; i < train_k; ++i) tr.recordings.push_back(cls.recordings[order[static_cast<std::size_t>(i)]]);
        split.train.push_back(std::move(tr));
        for (int i = train_k; i < train_k + test_k; ++i) {
            const std::size_t idx = order[static_cast<std::size_t>(i)];
            split.test.push_back(Example{ids[g][idx], cls.label, cls.recordings[idx]});
        }
    }
    return split;
}

} // namespace

XvalResult cross_validate(const std::vector<Example>& dataset, const NetworkConfig& cfg, const XvalParams& params) {
    if (params.trials < 1) throw ValidationError("cross-validation needs at least one trial");
    if (params.train_per_class < 1 || params.test_per_class < 1) {
        throw ValidationError("train/test examples per class must be at least 1");
    }

    const std::vector<ClassExamples> groups = group_by_label(dataset);
    if (groups.empty()) throw ValidationError("dataset is empty");

    // Recording ids per group, in the same order as group recordings.
    std::vector<std::vector<std::string>> ids(groups.size());
    {
        std::size_t g = 0;
        for (const ClassExamples& cls : groups) {
            for (const Example& ex : dataset) {
                if (ex.label == cls.label) ids[g].push_back(ex.id);
            }
            ++g;
        }
    }

    const int need = params.train_per_class + params.test_per_class;
    for (const ClassExamples& cls : groups) {
        if (cls.recordings.size() < static_cast<std::size_t>(need)) {
            throw ValidationError("class '" + cls.label + "' has " + std::to_string(cls.recordings.size()) +
                                  " examples, need at least " + std::to_string(need) +
                                  " for a disjoint train/test split");
        }
    }

    XvalResult result;
    result.trials.resize(static_cast<std::size_t>(params.trials));

    parallel_for(params.trials, params.jobs, [&](int t) {
        const std::uint64_t trial_seed = mix64(params.seed, static_cast<std::uint64_t>(t));
        std::mt19937_64 rng(trial_seed);
        Split split = make_split(groups, ids, params.train_per_class, params.test_per_class, rng);

        TrainingParams tp = params.training;
        tp.jitter_seed = mix64(trial_seed, 0x747261696eULL); // independent stream per trial
        const TrainedModel model = train_classes(split.train, cfg, tp);

        if (params.test_jitter_sigma_ms > 0.0) {
            for (std::size_t j = 0; j < split.test.size(); ++j) {
                split.test[j].events =
                    add_jitter(split.test[j].events, params.test_jitter_sigma_ms, mix64(trial_seed, 0x74657374ULL + j));
            }
        }

        TrialResult& tr = result.trials[static_cast<std::size_t>(t)];
        tr.seed = trial_seed;
        tr.eval = evaluate(model, split.test, cfg);
        log::info("trial " + std::to_string(t) + ": accuracy " + std::to_string(tr.eval.accuracy));
    });

    double sum = 0.0;
    for (const TrialResult& tr : result.trials) sum += tr.eval.accuracy;
    result.mean_accuracy = sum / params.trials;
    if (params.trials > 1) {
        double ss = 0.0;
        for (const TrialResult& tr : result.trials) {
            const double d = tr.eval.accuracy - result.mean_accuracy;
            ss += d * d;
        }
        result.std_accuracy = std::sqrt(ss / (params.trials - 1));
    }
    return result;
}

std::string format_percent_summary(double mean, double stddev) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f%%±%.1f%%", mean * 100.0, stddev * 100.0);
    return std::string(buf);
}

std::string format_results_csv(const std::vector<TrialResult>& trials, double mean, double stddev) {
    std::ostringstream os;
    os << "trial,example_id,true_label,pred_label,n_total\n";
    for (std::size_t t = 0; t < trials.size(); ++t) {
        for (const ExampleResult& ex : trials[t].eval.examples) {
            os << t << ',' << ex.id << ',' << ex.true_label << ',' << ex.pred_label << ',' << ex.n_total << '\n';
        }
    }
    os << "mean,std\n" << fmt_double(mean) << ',' << fmt_double(stddev) << '\n';
    return os.str();
}

const char* jitter_mode_name(JitterMode mode) { return mode == JitterMode::train ? "train" : "test"; }

JitterMode parse_jitter_mode(const std::string& name) {
    if (name == "train") return JitterMode::train;
    if (name == "test") return JitterMode::test;
    throw ConfigError("unknown jitter mode '" + name + "' (expected train or test)");
}

std::vector<JitterPoint> jitter_sweep(const std::vector<Example>& dataset, const std::vector<double>& sigmas,
                                      JitterMode mode, const NetworkConfig& cfg, const XvalParams& params) {
    if (!std::is_sorted(sigmas.begin(), sigmas.end())) {
        throw ValidationError("jitter sigmas must be sorted ascending");
    }
    std::vector<JitterPoint> points;
    points.reserve(sigmas.size());
    for (double sigma : sigmas) {
        XvalParams p = params;
        if (mode == JitterMode::train) {
            p.training.jitter_sigma_ms = sigma;
        } else {
            p.test_jitter_sigma_ms = sigma;
        }
        const XvalResult r = cross_validate(dataset, cfg, p);
        points.push_back({sigma, r.mean_accuracy, r.std_accuracy});
        log::info("jitter sigma " + fmt_double(sigma) + " ms (" + jitter_mode_name(mode) + "): " +
                  format_percent_summary(r.mean_accuracy, r.std_accuracy));
    }
    return points;
}

std::string format_jitter_csv(const std::vector<JitterPoint>& points, JitterMode mode) {
    std::ostringstream os;
    os << "sigma_ms,mode,mean_acc,std_acc\n";
    for (const JitterPoint& p : points) {
        os << fmt_double(p.sigma_ms) << ',' << jitter_mode_name(mode) << ',' << fmt_double(p.mean_accuracy) << ','
           << fmt_double(p.std_accuracy) << '\n';
    }
    return os.str();
}

std::vector<Detection> stream_detections(const TrainedModel& model, const std::vector<Event>& events,
                                         const NetworkConfig& cfg) {
    const NetworkResult run = run_network(events, cfg, model.kernels);
    std::vector<Detection> out;
    for (const SpikeRecord& s : run.spikes) {
        if (s.layer != Layer::s2) continue;
        out.push_back({s.t, model.kernels[s.channel].label, s.x, s.y, s.channel});
    }
    return out;
}

std::string format_detections_csv(const std::vector<Detection>& detections) {
    std::string out = "t_us,layer,x,y,channel,label\n";
    char buf[96];
    for (const Detection& d : detections) {
        std::snprintf(buf, sizeof(buf), "%llu,S2,%u,%u,%u,", static_cast<unsigned long long>(d.t), unsigned(d.x),
                      unsigned(d.y), unsigned(d.channel));
        out += buf;
        out += d.label;
        out += '\n';
    }
    return out;
}

} // namespace hfirst
