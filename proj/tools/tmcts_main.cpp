// Command-line front end. All functionality goes through the C API in
// tmcts.h; this file only shuffles flags, files, and JSON strings.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmcts.h"

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(2);
    }
    out << text;
}

[[noreturn]] void die(tmcts_status status) {
    std::cerr << "error (" << status << "): " << tmcts_last_error() << "\n";
    std::exit(1);
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { tmcts_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct OwnedTree {
    tmcts_tree* ptr = nullptr;
    ~OwnedTree() { tmcts_tree_free(ptr); }
};

OwnedTree load_tree(const std::string& path) {
    OwnedTree t;
    const std::string text = slurp(path);
    if (tmcts_status st = tmcts_tree_parse(text.c_str(), &t.ptr); st != TMCTS_OK) die(st);
    return t;
}

struct ModelFlags {
    std::string family = "bernoulli";
    double sigma2 = 1.0;
    double theta = 0.5;
    double delta = 0.1;

    void attach(CLI::App* cmd, bool with_delta) {
        cmd->add_option("--family", family, "reward family: bernoulli|gaussian")
            ->check(CLI::IsMember({"bernoulli", "gaussian"}));
        cmd->add_option("--sigma2", sigma2, "gaussian variance");
        cmd->add_option("--theta", theta, "decision threshold")->required();
        if (with_delta) cmd->add_option("--delta", delta, "confidence parameter")->required();
    }

    json to_json() const {
        return json{{"family", family}, {"sigma2", sigma2}, {"theta", theta}, {"delta", delta}};
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-confidence thresholding search on minimax trees"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random experiment instance");
    int gen_depth = 2, gen_arity = 3;
    uint64_t gen_seed = 1;
    std::string gen_tree_out, gen_means_out;
    ModelFlags gen_model;
    gen->add_option("--depth", gen_depth, "tree depth")->required();
    gen->add_option("--arity", gen_arity, "children per internal node");
    gen->add_option("--seed", gen_seed, "instance seed");
    gen->add_option("--tree-out", gen_tree_out, "tree document output path");
    gen->add_option("--means-out", gen_means_out, "means document output path");
    gen_model.attach(gen, false);

    // alloc
    auto* alloc = app.add_subcommand("alloc", "optimal sampling proportions for an instance");
    std::string alloc_tree, alloc_means;
    ModelFlags alloc_model;
    alloc->add_option("--tree", alloc_tree, "tree document")->required();
    alloc->add_option("--means", alloc_means, "means document")->required();
    alloc_model.attach(alloc, false);

    // glr
    auto* glr = app.add_subcommand("glr", "stopping statistic and threshold for a state");
    std::string glr_tree, glr_means, glr_counts;
    ModelFlags glr_model;
    glr->add_option("--tree", glr_tree, "tree document")->required();
    glr->add_option("--means", glr_means, "empirical means document")->required();
    glr->add_option("--counts", glr_counts, "counts document")->required();
    glr_model.attach(glr, true);

    // run
    auto* runc = app.add_subcommand("run", "one sequential trial");
    std::string run_tree, run_means, run_sampler = "rd", run_engine = "naive";
    uint64_t run_seed = 0;
    long long run_cap = 1'000'000'000LL, run_refresh = 1LL << 20;
    bool run_paranoid = false;
    ModelFlags run_model;
    runc->add_option("--tree", run_tree, "tree document")->required();
    runc->add_option("--means", run_means, "true means document")->required();
    runc->add_option("--sampler", run_sampler, "rd|d|c|rr|ugape|lucb")
        ->check(CLI::IsMember({"rd", "d", "c", "rr", "ugape", "lucb"}));
    runc->add_option("--engine", run_engine, "naive|fast")->check(CLI::IsMember({"naive", "fast"}));
    runc->add_option("--seed", run_seed, "rng seed");
    runc->add_option("--cap", run_cap, "abort after this many rounds");
    runc->add_option("--refresh-interval", run_refresh, "fast-engine full refresh period");
    runc->add_flag("--paranoid", run_paranoid, "cross-check the fast engine every round");
    run_model.attach(runc, true);

    // gai
    auto* gaic = app.add_subcommand("gai", "good-action identification run");
    std::string gai_tree, gai_means;
    uint64_t gai_seed = 0;
    long long gai_cap = 1'000'000'000LL;
    ModelFlags gai_model;
    gaic->add_option("--tree", gai_tree, "tree document")->required();
    gaic->add_option("--means", gai_means, "true means document")->required();
    gaic->add_option("--seed", gai_seed, "rng seed");
    gaic->add_option("--cap", gai_cap, "abort after this many rounds");
    gai_model.attach(gaic, true);

    // experiment
    auto* exp = app.add_subcommand("experiment", "batch Monte Carlo experiment from a config file");
    std::string exp_config, exp_out = "records.jsonl";
    exp->add_option("--config", exp_config, "experiment config (JSON)")->required();
    exp->add_option("--out", exp_out, "JSON-lines records output path");

    // report
    auto* rep = app.add_subcommand("report", "summarize records into CSV and plot data");
    std::string rep_records, rep_csv, rep_plot, rep_gnuplot;
    rep->add_option("--records", rep_records, "JSON-lines records")->required();
    rep->add_option("--csv", rep_csv, "CSV output path (stdout when omitted)");
    rep->add_option("--plotdata", rep_plot, "plot data output path");
    rep->add_option("--gnuplot", rep_gnuplot, "gnuplot script output path");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        json options = gen_model.to_json();
        options["depth"] = gen_depth;
        options["arity"] = gen_arity;
        options["seed"] = gen_seed;
        OwnedString out;
        if (tmcts_status st = tmcts_gen_json(options.dump().c_str(), &out.ptr); st != TMCTS_OK) die(st);
        const json result = json::parse(out.str());
        if (!gen_tree_out.empty()) write_file(gen_tree_out, result.at("tree").dump());
        if (!gen_means_out.empty()) write_file(gen_means_out, result.at("means").dump());
        std::cout << out.str() << "\n";
        return 0;
    }

    if (alloc->parsed()) {
        OwnedTree tree = load_tree(alloc_tree);
        OwnedString out;
        const std::string means = slurp(alloc_means);
        if (tmcts_status st =
                tmcts_alloc_json(tree.ptr, means.c_str(), alloc_model.to_json().dump().c_str(), &out.ptr);
            st != TMCTS_OK)
            die(st);
        std::cout << out.str() << "\n";
        return 0;
    }

    if (glr->parsed()) {
        OwnedTree tree = load_tree(glr_tree);
        OwnedString out;
        const std::string means = slurp(glr_means);
        const std::string counts = slurp(glr_counts);
        if (tmcts_status st = tmcts_glr_json(tree.ptr, means.c_str(), counts.c_str(),
                                             glr_model.to_json().dump().c_str(), &out.ptr);
            st != TMCTS_OK)
            die(st);
        std::cout << out.str() << "\n";
        return 0;
    }

    if (runc->parsed()) {
        OwnedTree tree = load_tree(run_tree);
        json options = run_model.to_json();
        options["sampler"] = run_sampler;
        options["engine"] = run_engine;
        options["seed"] = run_seed;
        options["round_cap"] = run_cap;
        options["refresh_interval"] = run_refresh;
        options["paranoid"] = run_paranoid;
        OwnedString out;
        const std::string means = slurp(run_means);
        if (tmcts_status st = tmcts_run_json(tree.ptr, means.c_str(), options.dump().c_str(), &out.ptr);
            st != TMCTS_OK)
            die(st);
        std::cout << out.str() << "\n";
        return 0;
    }

    if (gaic->parsed()) {
        OwnedTree tree = load_tree(gai_tree);
        json options = gai_model.to_json();
        options["seed"] = gai_seed;
        options["round_cap"] = gai_cap;
        OwnedString out;
        const std::string means = slurp(gai_means);
        if (tmcts_status st = tmcts_gai_json(tree.ptr, means.c_str(), options.dump().c_str(), &out.ptr);
            st != TMCTS_OK)
            die(st);
        std::cout << out.str() << "\n";
        return 0;
    }

    if (exp->parsed()) {
        const std::string config = slurp(exp_config);
        if (tmcts_status st = tmcts_experiment(config.c_str(), exp_out.c_str()); st != TMCTS_OK) die(st);
        std::cout << "records written to " << exp_out << "\n";
        return 0;
    }

    if (rep->parsed()) {
        OwnedString csv;
        if (tmcts_status st = tmcts_report(rep_records.c_str(), rep_plot.empty() ? nullptr : rep_plot.c_str(),
                                           rep_gnuplot.empty() ? nullptr : rep_gnuplot.c_str(), &csv.ptr);
            st != TMCTS_OK)
            die(st);
        if (rep_csv.empty())
            std::cout << csv.str();
        else
            write_file(rep_csv, csv.str());
        return 0;
    }

    return 0;
}
