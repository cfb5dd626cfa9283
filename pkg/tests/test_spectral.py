import numpy as np
import pytest

from conftest import complete_graph, cycle_graph, path_graph, star_graph
from rwmeet.errors import DomainError, NumericWarning
from rwmeet.generators import generate_ba
from rwmeet.graph import WeightedGraph, compute_stats
from rwmeet.spectral import (
    decompose,
    hitting_time,
    hitting_time_approx,
    hitting_time_bound,
    hitting_time_matrix,
    normalized_adjacency,
    occupancy_evolution,
    occupancy_probability,
    occupancy_vector,
    spectrum_csv,
    stationary_distribution,
)


def test_decomposition_invariants(small_corpus):
    for g in small_corpus[:20]:
        dec = decompose(g)
        lam, q = dec.eigenvalues, dec.eigenvectors
        assert abs(lam[0] - 1) <= 1e-9
        assert np.all(np.diff(lam) <= 1e-15)
        w = normalized_adjacency(g)
        assert np.linalg.norm(w @ q - q * lam) / np.linalg.norm(w) <= 1e-8
        assert np.allclose(q.T @ q, np.eye(g.n), atol=1e-9)
        assert lam[1] < 1 - 1e-12 and lam[-1] > -1 + 1e-12
        assert np.allclose(q[:, 0], np.sqrt(g.degrees / dec.s1), atol=1e-10)


def test_complete_graph_spectrum():
    dec = decompose(complete_graph(3))
    assert np.allclose(dec.eigenvalues, [1, -0.5, -0.5])


def test_bipartite_flagged():
    dec = decompose(path_graph(3))
    assert dec.bipartite
    assert dec.eigenvalues[-1] == pytest.approx(-1)


def test_disconnected_rejected():
    with pytest.raises(DomainError):
        decompose(WeightedGraph(4, [(0, 1), (2, 3)]))


def test_node_cap():
    with pytest.raises(DomainError):
        decompose(complete_graph(6), max_nodes=5)


def test_occupancy_examples():
    dec = decompose(complete_graph(3))
    assert occupancy_probability(dec, 0, 0, 0) == pytest.approx(1, abs=1e-14)
    assert occupancy_probability(dec, 0, 1, 0) == pytest.approx(0, abs=1e-15)
    assert occupancy_probability(dec, 0, 1, 1) == pytest.approx(0.5)
    g = generate_ba(40, 3, seed=1)
    dec = decompose(g)
    assert np.allclose(occupancy_vector(dec, 5, 200), g.degrees / dec.s1, atol=1e-8)


def test_occupancy_two_routes(small_corpus):
    for g in small_corpus[:15]:
        dec = decompose(g)
        for t in (0, 1, 2, 7, 25, 50):
            x = occupancy_evolution(g, 0, t)
            assert np.allclose(occupancy_vector(dec, 0, t), x, atol=1e-10)
            assert x.sum() == pytest.approx(1, abs=1e-12)


def test_star_from_leaf_hits_hub():
    x = occupancy_evolution(star_graph(3), 2, 1)
    assert np.array_equal(x, [1, 0, 0, 0])


def test_stationary():
    assert np.allclose(stationary_distribution(complete_graph(5)), 0.2)
    assert np.allclose(stationary_distribution(star_graph(3)), [0.5, 1 / 6, 1 / 6, 1 / 6])


def test_hitting_examples():
    assert hitting_time(decompose(complete_graph(3)), 0, 1) == pytest.approx(2)
    assert hitting_time(decompose(path_graph(3)), 0, 2) == pytest.approx(4)
    dec = decompose(complete_graph(7))
    assert hitting_time(dec, 2, 5) == pytest.approx(6)
    assert hitting_time(dec, 3, 3) == 0.0
    assert hitting_time_approx(dec, 0) == pytest.approx(7)


def test_hitting_matrix_matches_scalar(small_corpus):
    dec = decompose(small_corpus[3])
    h = hitting_time_matrix(dec)
    for a, i in [(0, 1), (4, 2), (3, 3), (7, 0)]:
        assert h[a, i] == pytest.approx(hitting_time(dec, a, i), rel=1e-12, abs=1e-12)
    assert np.all(h >= -1e-9)


def test_hitting_bound_holds():
    g = generate_ba(200, 3, seed=8)
    dec = decompose(g)
    stats = compute_stats(g)
    bound = hitting_time_bound(stats, dec.lambda2)
    rng = np.random.default_rng(0)
    for _ in range(100):
        a, i = rng.choice(g.n, 2, replace=False)
        assert abs(hitting_time(dec, a, i) / dec.s1 - 1 / g.degrees[i]) <= bound


def test_hitting_bound_monotone_and_warns():
    stats = compute_stats(complete_graph(5))
    vals = [hitting_time_bound(stats, lam) for lam in (-0.5, 0.0, 0.5, 0.9)]
    assert vals == sorted(vals)
    with pytest.warns(NumericWarning):
        assert hitting_time_bound(stats, 1 - 1e-13) > 1e12
    with pytest.warns(NumericWarning):
        assert hitting_time_bound(stats, 1.0) == float("inf")


def test_sign_flip_invariance(small_corpus):
    rng = np.random.default_rng(5)
    for g in small_corpus[:10]:
        dec = decompose(g)
        flipped = dec.with_signs(rng.choice([-1.0, 1.0], size=g.n))
        assert np.allclose(hitting_time_matrix(dec), hitting_time_matrix(flipped), atol=1e-10, rtol=1e-12)
        assert np.allclose(occupancy_vector(dec, 1, 3), occupancy_vector(flipped, 1, 3), atol=1e-12)


def test_signs_canonical_and_deterministic():
    g = cycle_graph(7)  # degenerate eigenvalues
    a, b = decompose(g), decompose(g)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)
    q = a.eigenvectors
    top = q[np.argmax(np.abs(q), axis=0), np.arange(g.n)]
    assert np.all(top > 0)


def test_spectrum_csv_shape():
    lines = spectrum_csv(decompose(complete_graph(4))).splitlines()
    assert len(lines) == 5
    assert lines[0].startswith("k,lambda,q0")
