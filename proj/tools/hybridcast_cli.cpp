// Experiment harness: graph generation, algorithm runs, oracle audits, and
// report emission. Single binary with subcommands; config via flags or one
// JSON file (flags override). Exit 0 iff zero assertion failures.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hybridcast/apps.hpp"
#include "hybridcast/dissemination.hpp"
#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"
#include "hybridcast/primitives.hpp"
#include "hybridcast/tk.hpp"

using namespace hybridcast;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string graph = "path:100";
    std::string mode = "hybrid0";
    std::string placement = "uniform";
    std::string fn = "sum";
    std::string method = "unweighted";
    std::string eps = "1/4";
    std::string k_list;           // bench: comma-separated
    std::string family = "path";  // bench
    long long k = 1;
    int n = 4096;  // bench
    int alpha = 1;
    int cuts = 50;
    std::uint64_t seed = 0;
    std::string seeds;  // "a..b" sweep, overrides --seed
    bool strict = false;
    bool distributed = false;
    long long round_limit = 0;
    std::string out;         // transcript JSON
    std::string csv;         // audit CSV
    std::string transcript;  // validate input
};

int g_failures = 0;

void fail(const std::string& module, const std::string& invariant, const std::string& instance) {
    ++g_failures;
    json rec = {{"failure", {{"module", module}, {"invariant", invariant}, {"instance", instance}}}};
    std::cout << rec.dump() << "\n";
}

void expect(bool ok, const std::string& module, const std::string& invariant,
            const std::string& instance) {
    if (!ok) fail(module, invariant, instance);
}

ModelConfig model_of(const RunConfig& rc) {
    ModelConfig mc;
    if (rc.mode == "hybrid")
        mc.mode = Mode::Hybrid;
    else if (rc.mode == "hybrid0")
        mc.mode = Mode::Hybrid0;
    else
        throw CLI::ValidationError("--mode must be hybrid or hybrid0");
    mc.strict = rc.strict;
    mc.round_limit = rc.round_limit;
    return mc;
}

std::vector<std::uint64_t> seed_sweep(const RunConfig& rc) {
    if (rc.seeds.empty()) return {rc.seed};
    auto pos = rc.seeds.find("..");
    if (pos == std::string::npos) throw CLI::ValidationError("--seeds wants the form a..b");
    std::uint64_t a = std::stoull(rc.seeds.substr(0, pos));
    std::uint64_t b = std::stoull(rc.seeds.substr(pos + 2));
    if (b < a) throw CLI::ValidationError("--seeds range is backwards");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

// Pre-scan for --config and use the JSON values as defaults; CLI11 then
// overrides anything given explicitly on the command line.
void apply_config_file(int argc, char** argv, RunConfig& rc) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) != "--config") continue;
        std::ifstream f(argv[i + 1]);
        if (!f) throw std::runtime_error(std::string("cannot read ") + argv[i + 1]);
        json j = json::parse(f);
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
        };
        get("graph", rc.graph);
        get("mode", rc.mode);
        get("placement", rc.placement);
        get("fn", rc.fn);
        get("method", rc.method);
        get("eps", rc.eps);
        get("k", rc.k);
        get("alpha", rc.alpha);
        get("cuts", rc.cuts);
        get("seed", rc.seed);
        get("seeds", rc.seeds);
        get("strict", rc.strict);
        get("round_limit", rc.round_limit);
        get("out", rc.out);
        get("csv", rc.csv);
        get("transcript", rc.transcript);
    }
}

void add_common(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--graph", rc.graph, "graph spec, e.g. path:100, grid:2:10, random:200:1/20:7");
    cmd->add_option("--mode", rc.mode, "hybrid | hybrid0");
    cmd->add_option("--seed", rc.seed, "run seed");
    cmd->add_option("--seeds", rc.seeds, "seed sweep a..b");
    cmd->add_flag("--strict", rc.strict, "violations abort instead of being recorded");
    cmd->add_option("--round-limit", rc.round_limit, "simulated round cap (0 = env/default)");
    static std::string config_path;  // consumed by the pre-scan
    cmd->add_option("--config", config_path, "JSON config file (flags override)");
    cmd->add_option("--out", rc.out, "transcript JSON path");
    cmd->add_option("--csv", rc.csv, "audit CSV path");
}

void emit_run_artifacts(const RunConfig& rc, const Engine& eng, const json& report) {
    std::cout << report.dump(2) << "\n";
    if (!rc.out.empty()) {
        json t = eng.transcript().to_json(true);
        t["report"] = report;
        write_text(rc.out, t.dump(2) + "\n");
    }
}

int cmd_generate(const RunConfig& rc) {
    Graph g = generate(GraphSpec::parse(rc.graph));
    std::ostringstream os;
    write_edge_list(g, os);
    if (rc.out.empty())
        std::cout << os.str();
    else
        write_text(rc.out, os.str());
    return 0;
}

int cmd_tk(const RunConfig& rc) {
    Graph g = generate(GraphSpec::parse(rc.graph));
    TkResult res;
    json rep;
    if (rc.distributed) {
        Engine eng(g, model_of(rc));
        Placement p = make_placement(g, rc.placement, rc.k, rc.seed);
        eng.begin_phase("tree");
        VirtualTree tree = build_spanning_tree(eng);
        eng.end_phase();
        res = tk_distributed(eng, p.counts(), tree);
        TkResult oracle = tk_oracle(g, rc.k);
        expect(res.tk_graph == oracle.tk_graph && res.histogram == oracle.histogram, "tk",
               "distributed-equals-oracle", rc.graph);
        rep["rounds"] = {{"oracle", eng.transcript().oracle_rounds()},
                         {"simulated", eng.transcript().simulated_rounds()}};
    } else {
        res = tk_oracle(g, rc.k);
    }
    rep["tk"] = res.tk_graph;
    rep["k"] = res.k;
    json hist = json::object();
    for (auto [t, c] : res.histogram) hist[std::to_string(t)] = c;
    rep["histogram"] = hist;
    std::cout << rep.dump(2) << "\n";
    return g_failures ? 1 : 0;
}

int cmd_disseminate(const RunConfig& rc) {
    Graph g = generate(GraphSpec::parse(rc.graph));
    std::ostringstream csv;
    csv << "seed,k,tk,simulated_rounds,oracle_rounds,max_load,complete\n";
    for (std::uint64_t s : seed_sweep(rc)) {
        Engine eng(g, model_of(rc));
        Placement p = make_placement(g, rc.placement, rc.k, s);
        auto res = k_disseminate(eng, p);
        expect(res.complete, "dissemination", "all-nodes-complete", rc.graph);
        expect(eng.transcript().violations.empty(), "dissemination", "zero-violations", rc.graph);
        TkResult oracle = tk_oracle(g, rc.k);
        expect(res.tk == oracle.tk_graph, "dissemination", "tk-matches-oracle", rc.graph);
        csv << s << "," << res.k << "," << res.tk << "," << eng.transcript().simulated_rounds()
            << "," << eng.transcript().oracle_rounds() << "," << res.max_load << ","
            << (res.complete ? 1 : 0) << "\n";
        json rep = {{"k", res.k},
                    {"tk", res.tk},
                    {"complete", res.complete},
                    {"max_load", res.max_load},
                    {"seed", s},
                    {"rounds",
                     {{"oracle", eng.transcript().oracle_rounds()},
                      {"simulated", eng.transcript().simulated_rounds()}}}};
        emit_run_artifacts(rc, eng, rep);
    }
    write_text(rc.csv, csv.str());
    return g_failures ? 1 : 0;
}

int cmd_aggregate(const RunConfig& rc) {
    Graph g = generate(GraphSpec::parse(rc.graph));
    AggFn fn;
    if (rc.fn == "sum")
        fn = AggFn::Sum;
    else if (rc.fn == "min")
        fn = AggFn::Min;
    else if (rc.fn == "max")
        fn = AggFn::Max;
    else
        throw CLI::ValidationError("--fn must be sum, min, or max");
    for (std::uint64_t s : seed_sweep(rc)) {
        Rng rng(s ^ 0xa66ULL);
        std::vector<std::vector<long long>> vectors(static_cast<std::size_t>(g.n()));
        for (auto& row : vectors) {
            row.resize(static_cast<std::size_t>(rc.k));
            for (auto& x : row) x = static_cast<long long>(rng.below(1000));
        }
        Engine eng(g, model_of(rc));
        auto got = k_aggregate(eng, vectors, fn);
        std::vector<long long> want(static_cast<std::size_t>(rc.k));
        for (long long i = 0; i < rc.k; ++i) {
            long long acc = vectors[0][static_cast<std::size_t>(i)];
            for (int v = 1; v < g.n(); ++v) {
                long long x = vectors[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
                acc = fn == AggFn::Sum ? acc + x : (fn == AggFn::Min ? std::min(acc, x) : std::max(acc, x));
            }
            want[static_cast<std::size_t>(i)] = acc;
        }
        expect(got == want, "dissemination", "aggregate-equals-central",
               rc.graph + " seed " + std::to_string(s));
        expect(eng.transcript().violations.empty(), "dissemination", "zero-violations", rc.graph);
        json rep = {{"k", rc.k},
                    {"fn", rc.fn},
                    {"seed", s},
                    {"results", got},
                    {"rounds",
                     {{"oracle", eng.transcript().oracle_rounds()},
                      {"simulated", eng.transcript().simulated_rounds()}}}};
        emit_run_artifacts(rc, eng, rep);
    }
    return g_failures ? 1 : 0;
}

int cmd_apsp(const RunConfig& rc) {
    GraphSpec spec = GraphSpec::parse(rc.graph);
    Rat eps = Rat::parse(rc.eps);
    for (std::uint64_t s : seed_sweep(rc)) {
        Graph g = generate(spec);
        Engine eng(g, model_of(rc));
        ApspReport rep;
        if (rc.method == "unweighted") {
            rep = apsp_unweighted(eng, eps);
            expect(rep.max_ratio <= Rat(1) + eps, "apps", "unweighted-stretch", rc.graph);
        } else if (rc.method == "spanner") {
            rep = apsp_spanner(eng, eps);
        } else if (rc.method == "skeleton") {
            rep = apsp_skeleton(eng, rc.alpha, s);
        } else if (rc.method == "sparse") {
            rep = apsp_sparse_exact(eng);
            expect(rep.max_ratio == Rat(1) && rep.min_ratio == Rat(1), "apps", "sparse-exact",
                   rc.graph);
        } else {
            throw CLI::ValidationError("--method must be unweighted, spanner, skeleton, or sparse");
        }
        expect(rep.underestimates == 0, "apps", "no-underestimates", rc.graph);
        expect(eng.transcript().violations.empty(), "apps", "zero-violations", rc.graph);
        json j = rep.audit_json();
        j["seed"] = s;
        emit_run_artifacts(rc, eng, j);
    }
    return g_failures ? 1 : 0;
}

int cmd_cuts(const RunConfig& rc) {
    GraphSpec spec = GraphSpec::parse(rc.graph);
    Rat eps = Rat::parse(rc.eps);
    for (std::uint64_t s : seed_sweep(rc)) {
        Graph g = generate(spec);
        Engine eng(g, model_of(rc));
        CutReport rep = cut_pipeline(eng, eps, s, rc.cuts);
        if (rep.exact_fallback) {
            expect(rep.max_rel_dev == Rat(0), "apps", "exact-fallback-cut-equality", rc.graph);
            expect(rep.min_cut_h == stoer_wagner_min_cut(g), "apps", "min-cut-matches-oracle",
                   rc.graph);
        }
        expect(eng.transcript().violations.empty(), "apps", "zero-violations", rc.graph);
        json j = rep.to_json();
        j["seed"] = s;
        emit_run_artifacts(rc, eng, j);
    }
    return g_failures ? 1 : 0;
}

int cmd_bench(const RunConfig& rc) {
    std::vector<long long> ks;
    std::stringstream ss(rc.k_list.empty() ? "16,64,256,1024" : rc.k_list);
    for (std::string item; std::getline(ss, item, ',');) ks.push_back(std::stoll(item));
    GraphSpec spec;
    if (rc.family == "path")
        spec = GraphSpec::parse("path:" + std::to_string(rc.n));
    else if (rc.family == "cycle")
        spec = GraphSpec::parse("cycle:" + std::to_string(rc.n));
    else
        spec = GraphSpec::parse(rc.family);
    Graph g = generate(spec);
    std::ostringstream csv;
    csv << "k,tk,simulated_rounds,oracle_rounds\n";
    for (long long k : ks) {
        Engine eng(g, model_of(rc));
        Placement p = make_placement(g, rc.placement, k, rc.seed);
        auto res = k_disseminate(eng, p);
        expect(res.complete, "dissemination", "all-nodes-complete", spec.describe());
        csv << k << "," << res.tk << "," << eng.transcript().simulated_rounds() << ","
            << eng.transcript().oracle_rounds() << "\n";
    }
    std::cout << csv.str();
    write_text(rc.csv, csv.str());
    return g_failures ? 1 : 0;
}

int cmd_validate(const RunConfig& rc) {
    Graph g = generate(GraphSpec::parse(rc.graph));
    std::ifstream f(rc.transcript);
    if (!f) throw std::runtime_error("cannot read " + rc.transcript);
    json t = json::parse(f);
    auto findings = validate_transcript(g, t);
    json out = json::array();
    for (const auto& v : findings)
        out.push_back({{"kind", v.kind}, {"node", v.node}, {"round", v.round}, {"detail", v.detail}});
    std::cout << json({{"findings", out}}).dump(2) << "\n";
    for (const auto& v : findings) fail("cli", "transcript-" + v.kind, rc.transcript);
    return g_failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybridcast: hybrid-network dissemination simulator"};
    app.require_subcommand(1);
    RunConfig rc;
    try {
        apply_config_file(argc, argv, rc);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    auto* gen = app.add_subcommand("generate", "emit a generated graph as an edge list");
    add_common(gen, rc);

    auto* tk = app.add_subcommand("tk", "broadcast quality T_k");
    add_common(tk, rc);
    tk->add_option("--k", rc.k, "token count");
    tk->add_option("--placement", rc.placement, "token placement (distributed runs)");
    tk->add_flag("--distributed", rc.distributed, "run the in-model protocol, not just the oracle");

    auto* dis = app.add_subcommand("disseminate", "run k-dissemination");
    add_common(dis, rc);
    dis->add_option("--k", rc.k, "token count");
    dis->add_option("--placement", rc.placement, "single:<id> | single:corner | uniform | custom:<file>");

    auto* agg = app.add_subcommand("aggregate", "run k-aggregation on random vectors");
    add_common(agg, rc);
    agg->add_option("--k", rc.k, "vector length");
    agg->add_option("--fn", rc.fn, "sum | min | max");

    auto* apsp = app.add_subcommand("apsp", "approximate all-pairs shortest paths");
    add_common(apsp, rc);
    apsp->add_option("--method", rc.method, "unweighted | spanner | skeleton | sparse");
    apsp->add_option("--eps", rc.eps, "approximation parameter, rational a/b");
    apsp->add_option("--alpha", rc.alpha, "skeleton stretch parameter");

    auto* cuts = app.add_subcommand("cuts", "cut sparsifier pipeline");
    add_common(cuts, rc);
    cuts->add_option("--eps", rc.eps, "cut approximation parameter");
    cuts->add_option("--cuts", rc.cuts, "number of random test cuts");

    auto* bench = app.add_subcommand("bench", "k-sweep on one family, CSV of (k, T_k, rounds)");
    add_common(bench, rc);
    bench->add_option("--family", rc.family, "path | cycle | full graph spec");
    bench->add_option("--n", rc.n, "node count");
    bench->add_option("--k", rc.k_list, "comma-separated token counts");
    bench->add_option("--placement", rc.placement, "token placement");

    auto* val = app.add_subcommand("validate", "replay a transcript, checking budgets and knowledge");
    add_common(val, rc);
    val->add_option("--transcript", rc.transcript, "transcript JSON from a previous run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(rc);
        if (tk->parsed()) return cmd_tk(rc);
        if (dis->parsed()) return cmd_disseminate(rc);
        if (agg->parsed()) return cmd_aggregate(rc);
        if (apsp->parsed()) return cmd_apsp(rc);
        if (cuts->parsed()) return cmd_cuts(rc);
        if (bench->parsed()) return cmd_bench(rc);
        if (val->parsed()) return cmd_validate(rc);
    } catch (const std::exception& e) {
        std::cerr << json({{"failure",
                            {{"module", "cli"}, {"invariant", "run-completes"}, {"instance", e.what()}}}})
                         .dump()
                  << "\n";
        return 1;
    }
    return 2;
}
