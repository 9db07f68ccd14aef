#include "tmcts.h"

#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tmcts/allocation.hpp"
#include "tmcts/baselines.hpp"
#include "tmcts/gai.hpp"
#include "tmcts/glr.hpp"
#include "tmcts/harness.hpp"
#include "tmcts/sampling.hpp"
#include "tmcts/tree.hpp"

using nlohmann::json;

struct tmcts_tree {
    tmcts::GameTree tree;
};

namespace {

thread_local std::string g_last_error = "ok";

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

tmcts_status fail(tmcts_status code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
tmcts_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const tmcts::ParseError& e) {
        return fail(TMCTS_ERR_PARSE, e.what());
    } catch (const tmcts::MalformedTree& e) {
        return fail(TMCTS_ERR_MALFORMED, e.what());
    } catch (const tmcts::DomainError& e) {
        return fail(TMCTS_ERR_DOMAIN, e.what());
    } catch (const tmcts::AssumptionViolated& e) {
        return fail(TMCTS_ERR_ASSUMPTION, e.what());
    } catch (const tmcts::IoError& e) {
        return fail(TMCTS_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(TMCTS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TMCTS_ERR_INTERNAL, "unknown error");
    }
}

struct CommonOptions {
    double theta = 0.5;
    double delta = 0.1;
    tmcts::RewardModel model = tmcts::RewardModel::bernoulli();
};

CommonOptions parse_common(const char* options_json) {
    if (!options_json) throw tmcts::ParseError("options must not be NULL");
    json j;
    try {
        j = json::parse(options_json);
    } catch (const json::parse_error& e) {
        throw tmcts::ParseError(e.what());
    }
    CommonOptions o;
    o.theta = j.value("theta", 0.5);
    o.delta = j.value("delta", 0.1);
    const std::string fam = j.value("family", std::string("bernoulli"));
    if (fam == "bernoulli")
        o.model = tmcts::RewardModel::bernoulli();
    else if (fam == "gaussian")
        o.model = tmcts::RewardModel::gaussian(j.value("sigma2", 1.0));
    else
        throw tmcts::ParseError("unknown family \"" + fam + "\"");
    return o;
}

json run_result_json(const tmcts::GameTree& tree, const tmcts::RunResult& r) {
    json j;
    j["tau"] = r.stopping_time;
    j["answer"] = tmcts::to_string(r.recommendation);
    j["correct"] = r.correct;
    j["wall_seconds"] = r.wall_seconds;
    json counts = json::object();
    for (int id : tree.leaves()) {
        const tmcts::TreeNode& n = tree.node(id);
        counts[n.name] = r.counts[static_cast<size_t>(n.leaf_index)];
    }
    j["counts"] = std::move(counts);
    return j;
}

}  // namespace

extern "C" {

const char* tmcts_version(void) { return "1.0.0"; }

const char* tmcts_last_error(void) { return g_last_error.c_str(); }

void tmcts_string_free(char* s) { delete[] s; }

tmcts_status tmcts_tree_parse(const char* json_text, tmcts_tree** out_tree) {
    return guarded([&]() {
        if (!json_text || !out_tree) return fail(TMCTS_ERR_INVALID, "NULL argument");
        auto* handle = new tmcts_tree{tmcts::GameTree::parse(json_text)};
        *out_tree = handle;
        return TMCTS_OK;
    });
}

void tmcts_tree_free(tmcts_tree* tree) { delete tree; }

tmcts_status tmcts_tree_serialize(const tmcts_tree* tree, char** out_json) {
    return guarded([&]() {
        if (!tree || !out_json) return fail(TMCTS_ERR_INVALID, "NULL argument");
        *out_json = dup_string(tree->tree.serialize());
        return TMCTS_OK;
    });
}

tmcts_status tmcts_tree_validate(const tmcts_tree* tree) {
    return guarded([&]() {
        if (!tree) return fail(TMCTS_ERR_INVALID, "NULL argument");
        tree->tree.validate();
        return TMCTS_OK;
    });
}

int tmcts_tree_num_nodes(const tmcts_tree* tree) { return tree ? tree->tree.num_nodes() : -1; }
int tmcts_tree_num_leaves(const tmcts_tree* tree) { return tree ? tree->tree.num_leaves() : -1; }
int tmcts_tree_depth(const tmcts_tree* tree) { return tree ? tree->tree.depth() : -1; }
int tmcts_tree_root(const tmcts_tree* tree) { return tree ? tree->tree.root() : -1; }

tmcts_status tmcts_tree_value(const tmcts_tree* tree, int node_id, const char* means_json, double* out_value) {
    return guarded([&]() {
        if (!tree || !means_json || !out_value) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const auto means = tmcts::parse_means(tree->tree, means_json);
        *out_value = tmcts::node_value(tree->tree, node_id, means);
        return TMCTS_OK;
    });
}

tmcts_status tmcts_tree_answer(const tmcts_tree* tree, int node_id, const char* means_json, double theta,
                               int* out_answer) {
    return guarded([&]() {
        if (!tree || !means_json || !out_answer) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const auto means = tmcts::parse_means(tree->tree, means_json);
        *out_answer = tmcts::node_answer(tree->tree, node_id, means, theta) == tmcts::Answer::Win ? 1 : 0;
        return TMCTS_OK;
    });
}

tmcts_status tmcts_good_children(const tmcts_tree* tree, int node_id, const char* means_json, double theta,
                                 char** out_json) {
    return guarded([&]() {
        if (!tree || !means_json || !out_json) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const auto means = tmcts::parse_means(tree->tree, means_json);
        const auto kids = tmcts::good_children(tree->tree, node_id, means, theta);
        *out_json = dup_string(json(kids).dump());
        return TMCTS_OK;
    });
}

tmcts_status tmcts_alloc_json(const tmcts_tree* tree, const char* means_json, const char* options_json,
                              char** out_json) {
    return guarded([&]() {
        if (!tree || !means_json || !out_json) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const CommonOptions o = parse_common(options_json);
        const auto means = tmcts::parse_means(tree->tree, means_json);
        const auto alloc = tmcts::optimal_allocation(tree->tree, means, o.theta, o.model);
        json j;
        j["answer"] = tmcts::to_string(alloc.answer);
        j["d_root"] = alloc.d_root;
        json d = json::object();
        for (int id = 0; id < tree->tree.num_nodes(); ++id)
            d[std::to_string(id)] = alloc.d[static_cast<size_t>(id)];
        j["d"] = std::move(d);
        json w = json::object();
        for (int id : tree->tree.leaves()) {
            const tmcts::TreeNode& n = tree->tree.node(id);
            w[n.name] = alloc.w[static_cast<size_t>(n.leaf_index)];
        }
        j["w"] = std::move(w);
        *out_json = dup_string(j.dump());
        return TMCTS_OK;
    });
}

tmcts_status tmcts_glr_json(const tmcts_tree* tree, const char* means_json, const char* counts_json,
                            const char* options_json, char** out_json) {
    return guarded([&]() {
        if (!tree || !means_json || !counts_json || !out_json)
            return fail(TMCTS_ERR_INVALID, "NULL argument");
        const CommonOptions o = parse_common(options_json);
        const auto means = tmcts::parse_means(tree->tree, means_json);
        const auto counts = tmcts::parse_counts(tree->tree, counts_json);
        tmcts::EmpiricalState state(tree->tree.num_leaves());
        for (int i = 0; i < tree->tree.num_leaves(); ++i) {
            if (counts[static_cast<size_t>(i)] < 1)
                throw tmcts::DomainError("every leaf needs at least one observation");
            state.set(i, counts[static_cast<size_t>(i)], means[static_cast<size_t>(i)]);
        }
        const tmcts::ThresholdParams params{o.delta, tree->tree.num_leaves()};
        const double z = tmcts::glr(tree->tree, state, o.theta, o.model);
        const double beta = tmcts::beta_threshold(state, params);
        json j;
        j["Z"] = z;
        j["beta"] = beta;
        j["stop"] = z >= beta;
        j["answer"] =
            tmcts::to_string(tmcts::node_answer(tree->tree, tree->tree.root(), state.means, o.theta));
        *out_json = dup_string(j.dump());
        return TMCTS_OK;
    });
}

tmcts_status tmcts_run_json(const tmcts_tree* tree, const char* means_json, const char* options_json,
                            char** out_json) {
    return guarded([&]() {
        if (!tree || !means_json || !out_json) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const CommonOptions o = parse_common(options_json);
        json j = json::parse(options_json);
        const auto means = tmcts::parse_means(tree->tree, means_json);

        tmcts::RunConfig rc;
        rc.theta = o.theta;
        rc.delta = o.delta;
        rc.model = o.model;
        rc.round_cap = j.value("round_cap", rc.round_cap);
        rc.refresh_interval = j.value("refresh_interval", rc.refresh_interval);
        rc.paranoid = j.value("paranoid", false);
        const std::string engine = j.value("engine", std::string("naive"));
        rc.engine = engine == "fast" ? tmcts::EngineKind::Fast : tmcts::EngineKind::Naive;
        tmcts::Rng rng(j.value("seed", 0ULL));

        const std::string sampler = j.value("sampler", std::string("rd"));
        tmcts::RunResult res;
        if (sampler == "rd" || sampler == "d" || sampler == "c") {
            rc.sampler = sampler == "rd" ? tmcts::SamplerKind::Rd
                                         : (sampler == "d" ? tmcts::SamplerKind::D : tmcts::SamplerKind::C);
            res = tmcts::run(tree->tree, means, rc, rng);
        } else if (sampler == "rr") {
            rc.sampler = tmcts::SamplerKind::RoundRobin;
            res = tmcts::run_roundrobin(tree->tree, means, rc, rng);
        } else if (sampler == "ugape") {
            res = tmcts::run_ugape(tree->tree, means, rc, rng);
        } else if (sampler == "lucb") {
            res = tmcts::run_lucb_micro(tree->tree, means, rc, rng);
        } else {
            throw tmcts::ParseError("unknown sampler \"" + sampler + "\"");
        }
        json out = run_result_json(tree->tree, res);
        out["sampler"] = sampler;
        out["delta"] = o.delta;
        out["seed"] = j.value("seed", 0ULL);
        *out_json = dup_string(out.dump());
        return TMCTS_OK;
    });
}

tmcts_status tmcts_gai_json(const tmcts_tree* tree, const char* means_json, const char* options_json,
                            char** out_json) {
    return guarded([&]() {
        if (!tree || !means_json || !out_json) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const CommonOptions o = parse_common(options_json);
        json j = json::parse(options_json);
        const auto means = tmcts::parse_means(tree->tree, means_json);
        tmcts::RunConfig rc;
        rc.theta = o.theta;
        rc.delta = o.delta;
        rc.model = o.model;
        rc.round_cap = j.value("round_cap", rc.round_cap);
        tmcts::Rng rng(j.value("seed", 0ULL));
        const tmcts::RunResult res = tmcts::run_gai(tree->tree, means, rc, rng);
        json out = run_result_json(tree->tree, res);
        out["gai_child"] = res.gai_child;
        out["delta"] = o.delta;
        *out_json = dup_string(out.dump());
        return TMCTS_OK;
    });
}

tmcts_status tmcts_gen_json(const char* options_json, char** out_json) {
    return guarded([&]() {
        if (!options_json || !out_json) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const CommonOptions o = parse_common(options_json);
        json j = json::parse(options_json);
        const int depth = j.value("depth", 2);
        const int arity = j.value("arity", 3);
        const uint64_t seed = j.value("seed", 1ULL);
        const tmcts::Instance inst = tmcts::gen_instance(depth, arity, o.model, o.theta, seed);
        json out;
        out["tree"] = json::parse(inst.tree.serialize());
        out["means"] = json::parse(tmcts::serialize_means(inst.tree, inst.means));
        out["theta"] = inst.theta;
        *out_json = dup_string(out.dump());
        return TMCTS_OK;
    });
}

tmcts_status tmcts_experiment(const char* config_json, const char* out_path) {
    return guarded([&]() {
        if (!config_json || !out_path) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const auto config = tmcts::ExperimentConfig::from_json(config_json);
        const auto records = tmcts::run_experiment(config);
        tmcts::write_records(records, out_path);
        return TMCTS_OK;
    });
}

tmcts_status tmcts_report(const char* records_path, const char* plotdata_path, const char* gnuplot_path,
                          char** out_csv) {
    return guarded([&]() {
        if (!records_path || !out_csv) return fail(TMCTS_ERR_INVALID, "NULL argument");
        const auto records = tmcts::read_records(records_path);
        const auto rows = tmcts::summarize(records);
        if (plotdata_path) {
            std::ofstream out(plotdata_path);
            if (!out) throw tmcts::IoError("cannot open " + std::string(plotdata_path));
            out << tmcts::to_plotdata(rows);
        }
        if (gnuplot_path) {
            std::ofstream out(gnuplot_path);
            if (!out) throw tmcts::IoError("cannot open " + std::string(gnuplot_path));
            out << tmcts::gnuplot_script(rows, plotdata_path ? plotdata_path : "plot.dat");
        }
        *out_csv = dup_string(tmcts::to_csv(rows));
        return TMCTS_OK;
    });
}

}  // extern "C"
