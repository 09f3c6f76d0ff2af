#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hybridcast/apps.hpp"
#include "hybridcast/dissemination.hpp"
#include "hybridcast/engine.hpp"
#include "hybridcast/graph.hpp"
#include "hybridcast/primitives.hpp"
#include "hybridcast/rational.hpp"
#include "hybridcast/tk.hpp"

namespace py = pybind11;
using namespace hybridcast;

namespace {

ModelConfig make_config(const std::string& mode, bool strict, long long round_limit) {
    ModelConfig cfg;
    if (mode == "hybrid")
        cfg.mode = Mode::Hybrid;
    else if (mode == "hybrid0")
        cfg.mode = Mode::Hybrid0;
    else
        throw std::invalid_argument("mode must be 'hybrid' or 'hybrid0'");
    cfg.strict = strict;
    cfg.round_limit = round_limit;
    return cfg;
}

py::dict transcript_dict(const Transcript& t) {
    py::dict out;
    out["rounds"] = t.rounds;
    out["simulated_rounds"] = t.simulated_rounds();
    out["oracle_rounds"] = t.oracle_rounds();
    out["local_messages"] = t.local_messages;
    out["global_messages"] = t.global_messages;
    out["violations"] = t.violations.size();
    out["json"] = t.to_json(false).dump();
    return out;
}

}  // namespace

PYBIND11_MODULE(_hybridcast, m) {
    m.doc() = "round-accurate hybrid-network simulator: dissemination, aggregation, APSP, cuts";

    py::class_<Graph>(m, "Graph")
        .def_static(
            "generate", [](const std::string& spec) { return generate(GraphSpec::parse(spec)); },
            py::arg("spec"))
        .def_static(
            "from_edges",
            [](const std::vector<NodeId>& ids,
               const std::vector<std::tuple<NodeId, NodeId, long long>>& edges, bool weighted) {
                return Graph::from_edges(ids, edges, weighted);
            },
            py::arg("ids"), py::arg("edges"), py::arg("weighted") = false)
        .def_property_readonly("n", &Graph::n)
        .def_property_readonly("ids", [](const Graph& g) { return g.ids; })
        .def("edge_count", &Graph::edge_count)
        .def("diameter", [](const Graph& g) { return diameter(g); })
        .def("edge_list", [](const Graph& g) {
            std::ostringstream os;
            write_edge_list(g, os);
            return os.str();
        });

    m.def(
        "tk",
        [](const Graph& g, long long k) {
            TkResult r = tk_oracle(g, k);
            py::dict out;
            out["k"] = r.k;
            out["tk"] = r.tk_graph;
            out["histogram"] = r.histogram;
            out["per_node"] = r.per_node;
            return out;
        },
        py::arg("graph"), py::arg("k"), "exact broadcast quality T_k via the BFS oracle");

    m.def(
        "disseminate",
        [](const Graph& g, long long k, const std::string& placement, std::uint64_t seed,
           const std::string& mode, bool strict, long long round_limit) {
            Engine eng(g, make_config(mode, strict, round_limit));
            auto res = k_disseminate(eng, make_placement(g, placement, k, seed));
            py::dict out;
            out["k"] = res.k;
            out["tk"] = res.tk;
            out["complete"] = res.complete;
            out["max_load"] = res.max_load;
            out["transcript"] = transcript_dict(eng.transcript());
            return out;
        },
        py::arg("graph"), py::arg("k"), py::arg("placement") = "uniform", py::arg("seed") = 0,
        py::arg("mode") = "hybrid0", py::arg("strict") = true, py::arg("round_limit") = 0,
        "run k-dissemination; every node ends with the full token set");

    m.def(
        "aggregate",
        [](const Graph& g, const std::vector<std::vector<long long>>& vectors,
           const std::string& fn, const std::string& mode, bool strict) {
            AggFn f;
            if (fn == "sum")
                f = AggFn::Sum;
            else if (fn == "min")
                f = AggFn::Min;
            else if (fn == "max")
                f = AggFn::Max;
            else
                throw std::invalid_argument("fn must be 'sum', 'min', or 'max'");
            Engine eng(g, make_config(mode, strict, 0));
            auto res = k_aggregate(eng, vectors, f);
            py::dict out;
            out["results"] = res;
            out["transcript"] = transcript_dict(eng.transcript());
            return out;
        },
        py::arg("graph"), py::arg("vectors"), py::arg("fn") = "sum", py::arg("mode") = "hybrid0",
        py::arg("strict") = true, "column-wise k-aggregation known to every node");

    m.def(
        "apsp",
        [](const Graph& g, const std::string& method, const std::string& eps, int alpha,
           std::uint64_t seed) {
            Engine eng(g, make_config("hybrid0", true, 0));
            ApspReport rep;
            if (method == "unweighted")
                rep = apsp_unweighted(eng, Rat::parse(eps));
            else if (method == "spanner")
                rep = apsp_spanner(eng, Rat::parse(eps));
            else if (method == "skeleton")
                rep = apsp_skeleton(eng, alpha, seed);
            else if (method == "sparse")
                rep = apsp_sparse_exact(eng);
            else
                throw std::invalid_argument(
                    "method must be 'unweighted', 'spanner', 'skeleton', or 'sparse'");
            py::dict out;
            out["method"] = rep.method;
            out["max_ratio"] = rep.max_ratio.str();
            out["min_ratio"] = rep.min_ratio.str();
            out["underestimates"] = rep.underestimates;
            out["delta"] = rep.delta;
            out["ids"] = rep.ids;
            out["transcript"] = transcript_dict(eng.transcript());
            return out;
        },
        py::arg("graph"), py::arg("method") = "unweighted", py::arg("eps") = "1/4",
        py::arg("alpha") = 1, py::arg("seed") = 0, "approximate APSP with an exact-oracle audit");

    m.def(
        "cuts",
        [](const Graph& g, const std::string& eps, std::uint64_t seed, int test_cuts) {
            Engine eng(g, make_config("hybrid0", true, 0));
            CutReport rep = cut_pipeline(eng, Rat::parse(eps), seed, test_cuts);
            py::dict out;
            out["exact_fallback"] = rep.exact_fallback;
            out["h_edges"] = rep.h_edges;
            out["max_rel_dev"] = rep.max_rel_dev.str();
            out["min_cut_h"] = rep.min_cut_h;
            out["transcript"] = transcript_dict(eng.transcript());
            return out;
        },
        py::arg("graph"), py::arg("eps") = "1/2", py::arg("seed") = 0, py::arg("test_cuts") = 50,
        "cut sparsifier pipeline with measured cut quality");
}
