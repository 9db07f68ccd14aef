#include "tmcts/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tmcts/allocation.hpp"
#include "tmcts/baselines.hpp"
#include "tmcts/gai.hpp"

namespace tmcts {

using nlohmann::json;

namespace {

constexpr int kResampleCap = 1000;
constexpr double kArgmaxTieTol = 1e-6;

// Assumption-2 proxy: wherever the recursion resolves a node to one child,
// the winning margin must be clear.
bool has_argmax_tie(const GameTree& tree, const Allocation& alloc, Answer mode) {
    for (int id = 0; id < tree.num_nodes(); ++id) {
        const TreeNode& n = tree.node(id);
        if (n.children.empty() || alloc.d[static_cast<size_t>(id)] <= 0.0) continue;
        const bool picks_one = (mode == Answer::Win) == (*n.label == NodeLabel::Max);
        if (!picks_one) continue;
        double top1 = -1.0, top2 = -1.0;
        for (int c : n.children) {
            const double dc = alloc.d[static_cast<size_t>(c)];
            if (dc > top1) {
                top2 = top1;
                top1 = dc;
            } else if (dc > top2) {
                top2 = dc;
            }
        }
        if (top2 >= 0.0 && top1 - top2 < kArgmaxTieTol) return true;
    }
    return false;
}

}  // namespace

Instance gen_instance(int depth, int arity, const RewardModel& model, double theta, uint64_t seed) {
    if (depth < 1) throw Error("gen_instance needs depth >= 1");
    model.require_interior(theta);
    GameTree tree = GameTree::complete(depth, arity, NodeLabel::Max);
    Rng rng = Rng::stream(seed, 0x67656e69);

    for (int attempt = 0; attempt < kResampleCap; ++attempt) {
        std::vector<double> means(static_cast<size_t>(tree.num_leaves()));
        for (double& m : means) {
            if (model.family() == Family::Bernoulli)
                m = 0.05 + 0.9 * rng.uniform();
            else
                m = theta + rng.normal();
        }

        // Rank depth-1 children by subtree value and shift the runner-up's
        // leaves so its value lands exactly on the threshold.
        const TreeNode& root = tree.node(tree.root());
        std::vector<std::pair<double, int>> ranked;
        for (int c : root.children) ranked.emplace_back(node_value(tree, c, means), c);
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        const int second_best = ranked.size() >= 2 ? ranked[1].second : ranked[0].second;
        const TreeNode& sb = tree.node(second_best);
        const double shift = theta - node_value(tree, second_best, means);
        for (int k = 0; k < sb.leaf_count; ++k) means[static_cast<size_t>(sb.leaf_begin + k)] += shift;

        bool domain_ok = true;
        for (int k = 0; k < sb.leaf_count && domain_ok; ++k)
            domain_ok = model.mean_in_domain(means[static_cast<size_t>(sb.leaf_begin + k)]);
        if (!domain_ok) continue;

        const double v_root = node_value(tree, tree.root(), means);
        if (std::abs(v_root - theta) <= 1e-9) continue;
        const Allocation alloc =
            optimal_allocation(tree, means, theta, model, AssumptionCheck::Skip);
        if (alloc.d_root <= 0.0) continue;
        if (has_argmax_tie(tree, alloc, alloc.answer)) continue;

        return Instance{std::move(tree), std::move(means), theta};
    }
    throw Error("gen_instance exceeded the resample cap");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    ExperimentConfig c;
    c.depth = j.value("depth", c.depth);
    c.arity = j.value("arity", c.arity);
    const std::string fam = j.value("family", std::string("bernoulli"));
    if (fam == "bernoulli")
        c.family = Family::Bernoulli;
    else if (fam == "gaussian")
        c.family = Family::Gaussian;
    else
        throw ParseError("unknown family \"" + fam + "\"");
    c.sigma2 = j.value("sigma2", c.sigma2);
    c.theta = j.value("theta", c.theta);
    if (j.contains("deltas")) c.deltas = j.at("deltas").get<std::vector<double>>();
    if (j.contains("samplers")) c.samplers = j.at("samplers").get<std::vector<std::string>>();
    c.trials = j.value("trials", c.trials);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.engine = j.value("engine", c.engine);
    c.instances = j.value("instances", c.instances);
    c.threads = j.value("threads", c.threads);
    c.round_cap = j.value("round_cap", c.round_cap);
    if (c.trials < 1) throw ParseError("trials must be >= 1");
    for (double d : c.deltas)
        if (!(d > 0.0 && d < 1.0)) throw ParseError("every delta must lie in (0,1)");
    return c;
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["depth"] = depth;
    j["arity"] = arity;
    j["family"] = to_string(family);
    j["sigma2"] = sigma2;
    j["theta"] = theta;
    j["deltas"] = deltas;
    j["samplers"] = samplers;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    j["engine"] = engine;
    j["instances"] = instances;
    j["threads"] = threads;
    j["round_cap"] = round_cap;
    return j.dump();
}

uint64_t ExperimentConfig::hash() const {
    // FNV-1a over the canonical serialization; threads are execution detail
    // and excluded so parallelism cannot change record identity.
    ExperimentConfig canon = *this;
    canon.threads = 0;
    const std::string s = canon.to_json();
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string record_to_json(const TrialRecord& r) {
    json j;
    j["config_hash"] = r.config_hash;
    j["instance"] = r.instance_id;
    j["depth"] = r.depth;
    j["sampler"] = r.sampler;
    j["delta"] = r.delta;
    j["seed"] = r.seed;
    j["tau"] = r.tau;
    j["answer"] = to_string(r.answer);
    j["correct"] = r.correct;
    j["d_root"] = r.d_root;
    j["t_star"] = r.t_star;
    j["ratio"] = r.ratio;
    return j.dump();
}

TrialRecord record_from_json(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    TrialRecord r;
    r.config_hash = j.value("config_hash", 0ULL);
    r.instance_id = j.value("instance", 0);
    r.depth = j.value("depth", 0);
    r.sampler = j.value("sampler", std::string());
    r.delta = j.value("delta", 0.0);
    r.seed = j.value("seed", 0ULL);
    r.tau = j.value("tau", 0LL);
    r.answer = j.value("answer", std::string("lose")) == "win" ? Answer::Win : Answer::Lose;
    r.correct = j.value("correct", false);
    r.d_root = j.value("d_root", 0.0);
    r.t_star = j.value("t_star", 0.0);
    r.ratio = j.value("ratio", 0.0);
    return r;
}

void write_records(const std::vector<TrialRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (const TrialRecord& r : records) out << record_to_json(r) << '\n';
    if (!out) throw IoError("write failed on " + path);
}

std::vector<TrialRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<TrialRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(record_from_json(line));
    }
    return out;
}

int effective_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* cap = std::getenv("TMCTS_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1) n = std::min(n, c);
    }
    return n;
}

TrialRecord run_trial(const ExperimentConfig& config, const Instance& instance, int instance_id,
                      const std::string& sampler, size_t delta_index, int trial_index) {
    const RewardModel model = RewardModel::make(config.family, config.sigma2);
    RunConfig rc;
    rc.theta = config.theta;
    rc.delta = config.deltas.at(delta_index);
    rc.model = model;
    rc.round_cap = config.round_cap;

    // Stable per-trial stream: any cell can be replayed in isolation.
    uint64_t sampler_tag = 0;
    for (char ch : sampler) sampler_tag = sampler_tag * 131 + static_cast<unsigned char>(ch);
    const uint64_t seed = mix64(config.master_seed ^ mix64(static_cast<uint64_t>(instance_id) + 1) ^
                                mix64(sampler_tag) ^ mix64(static_cast<uint64_t>(delta_index) + 0x1000) ^
                                mix64(static_cast<uint64_t>(trial_index) + 0x2000));
    Rng rng(seed);

    RunResult res;
    if (sampler == "rd" || sampler == "d" || sampler == "c") {
        rc.sampler = sampler == "rd" ? SamplerKind::Rd : (sampler == "d" ? SamplerKind::D : SamplerKind::C);
        rc.engine = (config.engine == "fast" && sampler == "rd") ? EngineKind::Fast : EngineKind::Naive;
        res = run(instance.tree, instance.means, rc, rng);
    } else if (sampler == "rr") {
        rc.sampler = SamplerKind::RoundRobin;
        res = run_roundrobin(instance.tree, instance.means, rc, rng);
    } else if (sampler == "ugape") {
        res = run_ugape(instance.tree, instance.means, rc, rng);
    } else if (sampler == "lucb") {
        res = run_lucb_micro(instance.tree, instance.means, rc, rng);
    } else if (sampler == "gai") {
        res = run_gai(instance.tree, instance.means, rc, rng);
    } else {
        throw Error("unknown sampler \"" + sampler + "\"");
    }

    const Allocation alloc = optimal_allocation(instance.tree, instance.means, instance.theta, model);
    TrialRecord rec;
    rec.config_hash = config.hash();
    rec.instance_id = instance_id;
    rec.depth = config.depth;
    rec.sampler = sampler;
    rec.delta = rc.delta;
    rec.seed = seed;
    rec.tau = res.stopping_time;
    rec.answer = res.recommendation;
    rec.correct = res.correct;
    rec.d_root = alloc.d_root;
    rec.t_star = lower_bound_time(alloc.d_root, rc.delta);
    rec.ratio = static_cast<double>(res.stopping_time) / rec.t_star;
    return rec;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
    std::vector<Instance> instances;
    instances.reserve(static_cast<size_t>(config.instances));
    const RewardModel model = RewardModel::make(config.family, config.sigma2);
    for (int i = 0; i < config.instances; ++i)
        instances.push_back(gen_instance(config.depth, config.arity, model, config.theta,
                                         mix64(config.master_seed ^ mix64(static_cast<uint64_t>(i) + 0x496e7374))));

    struct Cell { int instance_id; size_t sampler_idx; size_t delta_idx; int trial; };
    std::vector<Cell> cells;
    for (int i = 0; i < config.instances; ++i)
        for (size_t s = 0; s < config.samplers.size(); ++s)
            for (size_t d = 0; d < config.deltas.size(); ++d)
                for (int k = 0; k < config.trials; ++k) cells.push_back({i, s, d, k});

    std::vector<TrialRecord> records(cells.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mu;

    auto worker = [&]() {
        for (;;) {
            const size_t k = next.fetch_add(1);
            if (k >= cells.size() || failed.load()) return;
            const Cell& c = cells[k];
            try {
                records[k] = run_trial(config, instances[static_cast<size_t>(c.instance_id)], c.instance_id,
                                       config.samplers[c.sampler_idx], c.delta_idx, c.trial);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mu);
                failure = e.what();
                failed.store(true);
                return;
            }
        }
    };

    const int threads = effective_threads(config.threads);
    if (threads <= 1 || cells.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (failed.load()) throw Error("experiment trial failed: " + failure);
    return records;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
    struct Key { std::string sampler; double delta; int depth; };
    std::vector<std::pair<Key, std::vector<const TrialRecord*>>> groups;
    for (const TrialRecord& r : records) {
        bool placed = false;
        for (auto& g : groups) {
            if (g.first.sampler == r.sampler && g.first.delta == r.delta && g.first.depth == r.depth) {
                g.second.push_back(&r);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({{r.sampler, r.delta, r.depth}, {&r}});
    }

    auto moments = [](const std::vector<double>& xs) {
        const double n = static_cast<double>(xs.size());
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= n;
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var = xs.size() > 1 ? var / (n - 1.0) : 0.0;
        return std::pair<double, double>(mean, std::sqrt(var));
    };

    std::vector<SummaryRow> rows;
    for (auto& g : groups) {
        SummaryRow row;
        row.sampler = g.first.sampler;
        row.delta = g.first.delta;
        row.depth = g.first.depth;
        row.trials = static_cast<long long>(g.second.size());
        std::vector<double> taus, ratios;
        for (const TrialRecord* r : g.second) {
            taus.push_back(static_cast<double>(r->tau));
            ratios.push_back(r->ratio);
            if (!r->correct) ++row.errors;
        }
        std::tie(row.mean_tau, row.std_tau) = moments(taus);
        std::tie(row.mean_ratio, row.std_ratio) = moments(ratios);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out.precision(17);
    out << "sampler,delta,depth,mean_tau,std_tau,mean_ratio,std_ratio,errors,trials\n";
    for (const SummaryRow& r : rows) {
        out << r.sampler << ',' << r.delta << ',' << r.depth << ',' << r.mean_tau << ',' << r.std_tau << ','
            << r.mean_ratio << ',' << r.std_ratio << ',' << r.errors << ',' << r.trials << '\n';
    }
    return out.str();
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV");
    if (line != "sampler,delta,depth,mean_tau,std_tau,mean_ratio,std_ratio,errors,trials")
        throw ParseError("unexpected CSV header: " + line);
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        SummaryRow r;
        std::string field;
        std::getline(ls, r.sampler, ',');
        std::getline(ls, field, ',');
        r.delta = std::stod(field);
        std::getline(ls, field, ',');
        r.depth = std::stoi(field);
        std::getline(ls, field, ',');
        r.mean_tau = std::stod(field);
        std::getline(ls, field, ',');
        r.std_tau = std::stod(field);
        std::getline(ls, field, ',');
        r.mean_ratio = std::stod(field);
        std::getline(ls, field, ',');
        r.std_ratio = std::stod(field);
        std::getline(ls, field, ',');
        r.errors = std::stoll(field);
        std::getline(ls, field, ',');
        r.trials = std::stoll(field);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string to_plotdata(const std::vector<SummaryRow>& rows) {
    std::vector<std::string> samplers;
    for (const SummaryRow& r : rows)
        if (std::find(samplers.begin(), samplers.end(), r.sampler) == samplers.end())
            samplers.push_back(r.sampler);

    std::ostringstream out;
    out.precision(17);
    for (size_t s = 0; s < samplers.size(); ++s) {
        out << "# sampler=" << samplers[s] << "  columns: ln(1/delta) mean_ratio std_ratio\n";
        std::vector<const SummaryRow*> series;
        for (const SummaryRow& r : rows)
            if (r.sampler == samplers[s]) series.push_back(&r);
        std::sort(series.begin(), series.end(),
                  [](const SummaryRow* a, const SummaryRow* b) { return a->delta > b->delta; });
        for (const SummaryRow* r : series)
            out << std::log(1.0 / r->delta) << ' ' << r->mean_ratio << ' ' << r->std_ratio << '\n';
        if (s + 1 < samplers.size()) out << "\n\n";
    }
    return out.str();
}

std::string gnuplot_script(const std::vector<SummaryRow>& rows, const std::string& data_path) {
    std::vector<std::string> samplers;
    for (const SummaryRow& r : rows)
        if (std::find(samplers.begin(), samplers.end(), r.sampler) == samplers.end())
            samplers.push_back(r.sampler);
    std::ostringstream out;
    out << "set xlabel 'ln(1/delta)'\n";
    out << "set ylabel 'stopping time / lower bound'\n";
    out << "set key top right\n";
    out << "plot ";
    for (size_t s = 0; s < samplers.size(); ++s) {
        if (s) out << ", \\\n     ";
        out << "'" << data_path << "' index " << s << " using 1:2:3 with yerrorlines title '" << samplers[s]
            << "'";
    }
    out << "\n";
    return out.str();
}

}  // namespace tmcts
