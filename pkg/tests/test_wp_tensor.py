import json
import math

import numpy as np
import pytest

import wpcurv.wp_tensor as wt
from wpcurv.wp_tensor import (
    TensorCache,
    TensorEntry,
    canonical_index,
    canonical_tuples,
    compute_block,
    compute_entry_direct,
    curvature_component,
    selection_rule,
    tensor_entry,
)

# values the finite-difference oracle produced on its own grid before this
# module existed; agreement is demanded to 1e-6, they land far closer
FD_REFERENCE = {
    (2, 2, 2, 2): 2.898893608914e-02,
    (1, 2, 2, 1): 2.197853976037e-02,
    (3, 3, 3, 3): 1.970489770433e-02,
    (1, 3, 3, 1): 1.023138919870e-02,
    (2, 3, 3, 2): 1.799966618298e-02,
}


def test_selection_rule():
    assert selection_rule(1, 1, 1, 1)
    assert selection_rule(2, 1, 1, 2)
    assert not selection_rule(2, 1, 1, 1)
    with pytest.raises(ValueError):
        selection_rule(0, 1, 1, 1)


def test_selection_zero_costs_no_solve():
    cache = TensorCache()
    assert tensor_entry(3, 1, 1, 1, cache) == 0.0
    assert len(cache) == 0


def test_canonical_index_is_orbit_invariant():
    orbit = [(2, 1, 3, 4), (3, 4, 2, 1), (1, 2, 4, 3), (4, 3, 1, 2)]
    images = {canonical_index(*t) for t in orbit}
    assert len(images) == 1


def test_exact_golden_values(cache4):
    np.testing.assert_allclose(cache4.get(1, 1, 1, 1), 11.0 / (60.0 * math.pi), rtol=1e-13)
    np.testing.assert_allclose(cache4.get(1, 1, 2, 2), 4.0 / (35.0 * math.pi), rtol=1e-13)


def test_oracle_golden_values(cache4):
    for index, want in FD_REFERENCE.items():
        np.testing.assert_allclose(cache4.get(*index), want, atol=1e-6)


def test_symmetries_from_independent_solves():
    """Pair swap and transpose are computed, not copied, and must agree."""
    rng = np.random.default_rng(17)
    checked = 0
    while checked < 6:
        i, j, k = (int(v) for v in rng.integers(1, 6, size=3))
        l = k + (i - j)
        if not 1 <= l <= 5:
            continue
        base = compute_entry_direct(i, j, k, l).value
        swap = compute_entry_direct(k, l, i, j).value
        transpose = compute_entry_direct(j, i, l, k).value
        np.testing.assert_allclose(base, swap, atol=1e-10)
        np.testing.assert_allclose(base, transpose, atol=1e-10)
        checked += 1


def test_diagonal_slice_is_positive(cache4):
    for i in range(1, 5):
        for k in range(1, 5):
            assert cache4.get(i, i, k, k) > 0


def test_diagonal_decreasing_to_rank_12():
    cache = TensorCache()
    diag = [tensor_entry(n, n, n, n, cache) for n in range(1, 13)]
    assert all(v > 0 for v in diag)
    assert all(a > b for a, b in zip(diag, diag[1:]))


def test_entry_dataclass_validation():
    with pytest.raises(ValueError):
        TensorEntry(0, 1, 1, 1, 0.5)
    with pytest.raises(TypeError):
        TensorEntry(1, 1, 1, 1, 0.5 + 1.0j)


def test_curvature_component(cache4):
    want = cache4.get(1, 2, 2, 1) + cache4.get(1, 1, 2, 2)
    np.testing.assert_allclose(curvature_component(1, 2, 2, 1, cache4), want, rtol=1e-15)


def test_missing_entry_names_the_tuple():
    cache = TensorCache()
    with pytest.raises(LookupError, match=r"T\[2,2,3,3\]"):
        cache.get(2, 2, 3, 3)


def test_block_n1_has_one_entry():
    cache, solved = compute_block(1)
    assert len(cache) == 1 and solved == 1
    assert (1, 1, 1, 1) in cache


def test_block_count_matches_brute_force(cache4):
    brute = set()
    for i in range(1, 5):
        for j in range(1, 5):
            for k in range(1, 5):
                for l in range(1, 5):
                    if (i - j) + (k - l) == 0:
                        brute.add(canonical_index(i, j, k, l))
    assert len(cache4) == len(brute)
    assert set(t for t, _ in cache4.items()) == brute


def test_warm_block_skips_all_solves(cache4):
    _, solved = compute_block(4, cache=cache4)
    assert solved == 0


def test_parallel_block_matches_serial():
    serial, _ = compute_block(3)
    threaded, _ = compute_block(3, jobs=4)
    assert serial.items() == threaded.items()


def test_cache_round_trip(tmp_path, cache4):
    path = tmp_path / "tensor-N4.jsonl"
    cache4.save(path)
    loaded = TensorCache.load(path)
    assert loaded.items() == cache4.items()
    assert loaded.content_hash() == cache4.content_hash()
    header = json.loads(path.read_text().splitlines()[0])
    assert header["kind"] == "wp-tensor-cache"
    assert header["count"] == len(cache4)


def test_load_rejects_foreign_files(tmp_path):
    path = tmp_path / "junk.jsonl"
    path.write_text('{"kind": "something-else"}\n')
    with pytest.raises(ValueError):
        TensorCache.load(path)


def test_failure_leaves_partial_cache_and_manifest(tmp_path, monkeypatch):
    target = tmp_path / "partial.jsonl"
    real = wt.compute_entry_direct
    boom = (1, 2, 2, 1)

    def sabotaged(i, j, k, l, rule=None):
        if (i, j, k, l) == boom:
            raise RuntimeError("injected failure")
        return real(i, j, k, l, rule=rule)

    monkeypatch.setattr(wt, "compute_entry_direct", sabotaged)
    with pytest.raises(RuntimeError, match="injected"):
        compute_block(2, out_path=target)
    assert target.exists()
    partial = TensorCache.load(target)
    assert len(partial) > 0
    manifest = json.loads((tmp_path / "partial.jsonl.missing.json").read_text())
    assert [list(boom)] <= manifest["missing"]


def test_canonical_tuples_all_satisfy_selection():
    for t in canonical_tuples(5):
        assert selection_rule(*t)
        assert canonical_index(*t) == t
