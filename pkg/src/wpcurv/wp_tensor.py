"""Curvature tensor entries and their disk cache.

T[i, j, k, l] = int_D D(mu_i conj(mu_j)) (mu_k conj(mu_l)) dA.  Angular
momentum forces (i - j) + (k - l) = 0 for a nonzero value, and the two index
symmetries T[i,j,k,l] = T[k,l,i,j] = T[j,i,l,k] cut each orbit to one stored
representative.  Entries are real; the imaginary part of the raw integral is
checked against a hard ceiling rather than silently discarded.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .hyperbolic_disk import (
    DEFAULT_RULE_ORDER,
    QuadratureRule,
    SeparableFunction,
    _cached_x_rule,
    default_grid,
    integrate_da_product,
)
from .resolvent import SOLVER_TOL, apply_D

CODE_VERSION = "1"
IMAG_CEILING = 1e-12


def _validate_indices(i: int, j: int, k: int, l: int) -> None:
    for name, v in (("i", i), ("j", j), ("k", k), ("l", l)):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise ValueError(f"tensor index {name} must be a positive integer, got {v!r}")


def selection_rule(i: int, j: int, k: int, l: int) -> bool:
    """True when angular momentum allows a nonzero entry."""
    _validate_indices(i, j, k, l)
    return (i - j) + (k - l) == 0


def canonical_index(i: int, j: int, k: int, l: int) -> tuple[int, int, int, int]:
    """Lexicographic minimum over the symmetry orbit of (i, j, k, l)."""
    _validate_indices(i, j, k, l)
    return min((i, j, k, l), (k, l, i, j), (j, i, l, k), (l, k, j, i))


@dataclass(frozen=True)
class TensorEntry:
    """One computed value with the context it was computed under."""

    i: int
    j: int
    k: int
    l: int
    value: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        _validate_indices(self.i, self.j, self.k, self.l)
        if isinstance(self.value, complex):
            raise TypeError("tensor entries are real; got a complex value")


def compute_entry_direct(
    i: int, j: int, k: int, l: int, rule: QuadratureRule | None = None
) -> TensorEntry:
    """Solve for one entry from scratch, with no cache and no canonicalization."""
    _validate_indices(i, j, k, l)
    if rule is None:
        rule = _cached_x_rule(DEFAULT_RULE_ORDER, 4)
    x = default_grid()
    f = SeparableFunction.from_basis_product(i, j, x)
    g = SeparableFunction.from_basis_product(k, l, x)
    raw = integrate_da_product(apply_D(f), g, rule)
    if abs(raw.imag) > IMAG_CEILING * max(1.0, abs(raw.real)):
        raise RuntimeError(
            f"entry T[{i},{j},{k},{l}] came out non-real: imag {raw.imag:.3e}"
        )
    meta = {
        "rule_order": rule.order,
        "solver_tol": SOLVER_TOL,
        "version": CODE_VERSION,
    }
    return TensorEntry(i, j, k, l, float(raw.real), meta)


class TensorCache:
    """Canonical-representative store for tensor entries, one JSONL file on disk."""

    def __init__(self, rank: int | None = None, rule_order: int = DEFAULT_RULE_ORDER):
        self.rank = rank
        self.rule_order = rule_order
        self._entries: dict[tuple[int, int, int, int], float] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, index: tuple[int, int, int, int]) -> bool:
        return canonical_index(*index) in self._entries

    def items(self):
        return sorted(self._entries.items())

    def set_entry(self, i: int, j: int, k: int, l: int, value: float) -> None:
        self._entries[canonical_index(i, j, k, l)] = float(value)

    def get(self, i: int, j: int, k: int, l: int) -> float:
        """Value of T[i,j,k,l], expanding symmetries; selection-rule zeros are free."""
        if not selection_rule(i, j, k, l):
            return 0.0
        key = canonical_index(i, j, k, l)
        try:
            return self._entries[key]
        except KeyError:
            raise LookupError(
                f"tensor entry T[{i},{j},{k},{l}] (canonical {key}) is not in the cache"
            ) from None

    def _serialize(self) -> str:
        header = {
            "kind": "wp-tensor-cache",
            "version": CODE_VERSION,
            "rank": self.rank,
            "rule_order": self.rule_order,
            "count": len(self._entries),
        }
        lines = [json.dumps(header, sort_keys=True)]
        for (i, j, k, l), value in self.items():
            lines.append(
                json.dumps(
                    {"i": i, "j": j, "k": k, "l": l, "value": "%.17e" % value},
                    sort_keys=True,
                )
            )
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        return hashlib.sha256(self._serialize().encode()).hexdigest()

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self._serialize())

    @classmethod
    def load(cls, path) -> "TensorCache":
        with open(path) as fh:
            lines = fh.read().splitlines()
        if not lines:
            raise ValueError(f"cache file {path} is empty")
        header = json.loads(lines[0])
        if header.get("kind") != "wp-tensor-cache":
            raise ValueError(f"{path} is not a tensor cache file")
        cache = cls(rank=header.get("rank"), rule_order=header.get("rule_order", DEFAULT_RULE_ORDER))
        for line in lines[1:]:
            if not line.strip():
                continue
            rec = json.loads(line)
            cache.set_entry(rec["i"], rec["j"], rec["k"], rec["l"], float(rec["value"]))
        return cache


def tensor_entry(
    i: int,
    j: int,
    k: int,
    l: int,
    cache: TensorCache | None = None,
    rule: QuadratureRule | None = None,
) -> float:
    """Memoized entry lookup; selection-rule failures return exact 0.0 with no solve."""
    if not selection_rule(i, j, k, l):
        return 0.0
    key = canonical_index(i, j, k, l)
    if cache is not None and key in cache:
        return cache.get(*key)
    value = compute_entry_direct(*key, rule=rule).value
    if cache is not None:
        cache.set_entry(*key, value)
    return value


def curvature_component(
    i: int, j: int, k: int, l: int, cache: TensorCache | None = None
) -> float:
    """Bi-sectional curvature component R[i,j,k,l] = T[i,j,k,l] + T[i,l,k,j]."""
    return tensor_entry(i, j, k, l, cache) + tensor_entry(i, l, k, j, cache)


def canonical_tuples(n: int) -> list[tuple[int, int, int, int]]:
    """All canonical index tuples with labels <= n that pass the selection rule."""
    if n < 1:
        raise ValueError(f"rank must be a positive integer, got {n}")
    seen = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                l = k + (i - j)
                if 1 <= l <= n:
                    seen.add(canonical_index(i, j, k, l))
    return sorted(seen)


def compute_block(
    n: int,
    cache: TensorCache | None = None,
    jobs: int = 1,
    out_path=None,
    rule: QuadratureRule | None = None,
) -> tuple[TensorCache, int]:
    """Fill a cache with every entry for labels <= n; returns (cache, solves done).

    Already-cached entries are never recomputed, so a warm cache costs zero
    solves.  If a solve fails and `out_path` is set, the partial cache is
    saved there and the not-yet-computed tuples are listed in a sidecar
    manifest before the error propagates.
    """
    if cache is None:
        cache = TensorCache(rank=n, rule_order=(rule.order if rule else DEFAULT_RULE_ORDER))
    if cache.rank is None or (n is not None and cache.rank < n):
        cache.rank = n
    todo = [t for t in canonical_tuples(n) if t not in cache]

    def solve(tpl):
        return tpl, compute_entry_direct(*tpl, rule=rule).value

    solved = 0
    try:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                for tpl, value in pool.map(solve, todo):
                    cache.set_entry(*tpl, value)
                    solved += 1
        else:
            for tpl in todo:
                _, value = solve(tpl)
                cache.set_entry(*tpl, value)
                solved += 1
    except Exception:
        if out_path is not None:
            cache.save(out_path)
            missing = [list(t) for t in todo if t not in cache]
            with open(str(out_path) + ".missing.json", "w") as fh:
                json.dump({"rank": n, "missing": missing}, fh, indent=2)
        raise
    return cache, solved
