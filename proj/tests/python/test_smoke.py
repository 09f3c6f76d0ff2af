import hybridcast


def test_generate_and_tk():
    g = hybridcast.Graph.generate("path:100")
    assert g.n == 100
    assert g.edge_count() == 99
    assert g.diameter() == 99
    res = hybridcast.tk(g, 25)
    assert res["tk"] == 5
    assert sum(res["histogram"].values()) == 100


def test_disseminate():
    g = hybridcast.Graph.generate("path:100")
    out = hybridcast.disseminate(g, 25, placement="single:corner", mode="hybrid0", strict=True)
    assert out["complete"]
    assert out["tk"] == 5
    assert out["transcript"]["violations"] == 0
    assert out["transcript"]["simulated_rounds"] > 0


def test_aggregate():
    g = hybridcast.Graph.generate("path:32")
    vectors = [[1, v] for v in range(32)]
    out = hybridcast.aggregate(g, vectors, fn="sum")
    assert out["results"] == [32, sum(range(32))]


def test_apsp_sparse_exact():
    g = hybridcast.Graph.generate("grid:2:6")
    out = hybridcast.apsp(g, method="sparse")
    assert out["max_ratio"] == "1" and out["min_ratio"] == "1"
    assert out["underestimates"] == 0


def test_cuts_exact_fallback():
    g = hybridcast.Graph.generate("random:40:1/8:3")
    out = hybridcast.cuts(g, eps="1/2", seed=0)
    assert out["exact_fallback"]
    assert out["max_rel_dev"] == "0"


def test_from_edges():
    g = hybridcast.Graph.from_edges([1, 2, 3], [(1, 2, 1), (2, 3, 1), (1, 3, 3)], True)
    assert g.n == 3
    assert g.edge_count() == 3
