#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmcts/sampling.hpp"
#include "tmcts/tree.hpp"

namespace tmcts {

struct Instance {
    GameTree tree;
    std::vector<double> means;
    double theta = 0.5;
};

// Complete arity-ary tree with labels alternating from a MAX root, i.i.d.
// leaf means, and the second-best depth-1 subtree shifted so its minimax
// value equals the threshold exactly. Resamples (up to a cap) when the
// instance fails the standing assumptions or leaves the mean domain.
Instance gen_instance(int depth, int arity, const RewardModel& model, double theta, uint64_t seed);

struct ExperimentConfig {
    int depth = 2;
    int arity = 3;
    Family family = Family::Bernoulli;
    double sigma2 = 1.0;
    double theta = 0.5;
    std::vector<double> deltas{1e-5};
    std::vector<std::string> samplers{"rd"};  // rd | d | c | rr | ugape | lucb | gai
    int trials = 100;
    uint64_t master_seed = 1;
    std::string engine = "fast";  // naive | fast (track-and-stop samplers only)
    int instances = 1;
    int threads = 0;  // 0 = hardware concurrency; TMCTS_THREADS caps it
    long long round_cap = 1'000'000'000LL;

    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
    uint64_t hash() const;
};

struct TrialRecord {
    uint64_t config_hash = 0;
    int instance_id = 0;
    int depth = 0;
    std::string sampler;
    double delta = 0.1;
    uint64_t seed = 0;
    long long tau = 0;
    Answer answer = Answer::Lose;
    bool correct = false;
    double d_root = 0.0;
    double t_star = 0.0;
    double ratio = 0.0;
};

std::string record_to_json(const TrialRecord& r);
TrialRecord record_from_json(const std::string& line);
void write_records(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> read_records(const std::string& path);

// Runs every (instance, sampler, delta, trial) cell with per-trial derived
// seeds on a bounded worker pool; the record set is deterministic regardless
// of the parallelism degree.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

// One trial, addressed the same way the experiment loop derives it.
TrialRecord run_trial(const ExperimentConfig& config, const Instance& instance, int instance_id,
                      const std::string& sampler, size_t delta_index, int trial_index);

struct SummaryRow {
    std::string sampler;
    double delta = 0.1;
    int depth = 0;
    double mean_tau = 0.0;
    double std_tau = 0.0;
    double mean_ratio = 0.0;
    double std_ratio = 0.0;
    long long errors = 0;
    long long trials = 0;
};

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);
std::string to_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(const std::string& text);
// Gnuplot-friendly series, one block per sampler: ln(1/delta), mean, std.
std::string to_plotdata(const std::vector<SummaryRow>& rows);
std::string gnuplot_script(const std::vector<SummaryRow>& rows, const std::string& data_path);

int effective_threads(int requested);

}  // namespace tmcts
