import itertools
import json

import numpy as np
import pytest

from constrained_lfd.alignment import (
    MeanVarModel,
    align_set,
    build_model,
    dtw,
    reference_index,
)
from constrained_lfd.demogen import DemoGenConfig, generate
from constrained_lfd.errors import InvalidInputError
from constrained_lfd.trajectory import Frame, Trajectory, to_mandrel_frame
from oracles import brute_force_cost


def mandrel(poses, dt=0.1):
    poses = np.asarray(poses, dtype=float)
    return Trajectory(np.arange(len(poses)) * dt, poses, Frame.MANDREL)


def test_identical_sequences_diagonal():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(7, 6))
    p = dtw(a, a)
    assert p.cost == 0.0
    assert p.pairs == tuple((i, i) for i in range(7))


def test_constant_match():
    p = dtw([0.0], [0.0, 0.0, 0.0])
    assert p.cost == 0.0
    assert p.pairs == ((0, 0), (0, 1), (0, 2))


def test_small_example_against_enumeration():
    a, b = [0.0, 1.0, 2.0], [0.0, 2.0]
    p = dtw(a, b)
    assert p.cost == 1.0 == brute_force_cost(a, b)
    assert p.pairs[0] == (0, 0) and p.pairs[-1] == (2, 1)
    assert p.pairs[1] in ((1, 0), (1, 1))


def test_path_is_monotone_and_continuous():
    rng = np.random.default_rng(1)
    p = dtw(rng.normal(size=(9, 3)), rng.normal(size=(13, 3)))
    assert p.pairs[0] == (0, 0) and p.pairs[-1] == (8, 12)
    for (i0, j0), (i1, j1) in zip(p.pairs[:-1], p.pairs[1:]):
        assert (i1 - i0, j1 - j0) in ((1, 0), (0, 1), (1, 1))


def test_cost_is_path_sum():
    rng = np.random.default_rng(2)
    a, b = rng.normal(size=(6, 2)), rng.normal(size=(8, 2))
    p = dtw(a, b)
    assert p.cost == pytest.approx(sum(np.linalg.norm(a[i] - b[j]) for i, j in p.pairs), abs=1e-12)


def test_symmetry_and_diagonal_bound():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a, b = rng.normal(size=(10, 6)), rng.normal(size=(10, 6))
        assert dtw(a, b).cost == pytest.approx(dtw(b, a).cost, abs=1e-12)
        assert dtw(a, b).cost <= np.linalg.norm(a - b, axis=1).sum() + 1e-12


def test_exhaustive_small_cases():
    rng = np.random.default_rng(4)
    for n, m in itertools.product(range(1, 5), repeat=2):
        a, b = rng.normal(size=n), rng.normal(size=m)
        assert dtw(a, b).cost == brute_force_cost(a, b)


def test_empty_sequence_rejected():
    with pytest.raises(InvalidInputError):
        dtw([], [1.0])


# ---------------------------------------------------------------- align_set

def test_reference_is_median_length_lower_index():
    assert reference_index([5, 3, 7]) == 0
    assert reference_index([4, 6, 4, 6]) == 2
    assert reference_index([9]) == 0


def test_single_and_identical_unchanged():
    rng = np.random.default_rng(5)
    a = mandrel(rng.normal(size=(12, 6)))
    assert align_set([a])[0] is a
    out = align_set([a, mandrel(a.poses)])
    assert all(np.array_equal(o.poses, a.poses) for o in out)


def test_duplicated_demo_with_a_as_reference():
    rng = np.random.default_rng(7)
    a = mandrel(rng.normal(size=(10, 6)))
    b = mandrel(np.repeat(a.poses, 2, axis=0), dt=0.05)
    short = mandrel(a.poses[::2])
    out = align_set([short, a, b])  # lengths 5, 10, 20 -> reference a
    assert out[1] is a
    assert len(out[2]) == 10
    assert np.allclose(out[2].poses, a.poses, atol=1e-12)


def test_align_set_idempotent_and_common_length():
    cfg = DemoGenConfig(n_demos=4, base_samples=60, seed=3)
    rel = [to_mandrel_frame(d, m) for d, m in generate(cfg).demos]
    once = align_set(rel)
    assert len({len(t) for t in once}) == 1
    twice = align_set(once)
    for x, y in zip(once, twice):
        assert np.allclose(x.poses, y.poses, atol=1e-12)


def test_align_set_requires_mandrel_frame():
    t = Trajectory([0.0, 1.0], np.zeros((2, 6)))
    with pytest.raises(InvalidInputError):
        align_set([t])


# ---------------------------------------------------------------- model

def test_model_single_trajectory():
    rng = np.random.default_rng(8)
    a = mandrel(rng.normal(size=(5, 6)))
    m = build_model([a])
    assert np.array_equal(m.mean, a.poses)
    assert np.all(m.sigma == 0.0)
    assert m.count == 1


def test_model_two_constant_demos():
    a = mandrel(np.zeros((4, 6)))
    p = np.zeros((4, 6))
    p[:, 0] = 0.02
    m = build_model([a, mandrel(p)])
    assert np.allclose(m.mean[:, 0], 0.01)
    assert np.allclose(m.sigma[:, 0], 0.01)


def naive_model(trajs):
    n = len(trajs)
    T = len(trajs[0])
    mean = [[0.0] * 6 for _ in range(T)]
    sd = [[0.0] * 6 for _ in range(T)]
    for k in range(T):
        for c in range(6):
            vals = [float(t.poses[k, c]) for t in trajs]
            mu = sum(vals) / n
            mean[k][c] = mu
            sd[k][c] = (sum((v - mu) ** 2 for v in vals) / n) ** 0.5
    return np.array(mean), np.array(sd)


def test_model_matches_naive_recomputation():
    cfg = DemoGenConfig(seed=11, base_samples=80)
    rel = [to_mandrel_frame(d, m) for d, m in generate(cfg).demos]
    aligned = align_set(rel)
    m = build_model(aligned)
    mean, sd = naive_model(aligned)
    assert np.allclose(m.mean, mean, atol=1e-12)
    assert np.allclose(m.sigma, sd, atol=1e-12)


def test_population_std_bound():
    rng = np.random.default_rng(9)
    trajs = [mandrel(rng.normal(size=(6, 6))) for _ in range(7)]
    m = build_model(trajs)
    k = np.sqrt(len(trajs) - 1)
    for t in trajs:
        assert np.all(np.abs(t.poses - m.mean) <= k * m.sigma + 1e-12)


def test_model_unequal_lengths():
    with pytest.raises(InvalidInputError):
        build_model([mandrel(np.zeros((3, 6))), mandrel(np.zeros((4, 6)))])


def test_model_json_schema(tmp_path):
    rng = np.random.default_rng(10)
    m = build_model([mandrel(rng.normal(size=(5, 6))) for _ in range(3)])
    m.save(tmp_path / "model.json")
    doc = json.loads((tmp_path / "model.json").read_text())
    assert set(doc) == {"length", "mean", "sigma", "count"}
    assert doc["length"] == 5 and doc["count"] == 3
    assert len(doc["mean"][0]) == 6 and len(doc["sigma"]) == 5
    back = MeanVarModel.load(tmp_path / "model.json")
    assert np.array_equal(back.mean, m.mean) and np.array_equal(back.sigma, m.sigma)
