"""Restricted isometry constants: exact by support enumeration, or sampled lower bounds."""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .sampling import PartialOperator, make_rng

DEFAULT_BUDGET = 10**6
_BATCH = 4096


class BudgetExceeded(ValueError):
    """Raised when exhaustive enumeration would exceed the support budget."""


@dataclass
class RipEstimate:
    k: int
    value: float
    mode: str  # "exhaustive" or "random-supports"
    witness: tuple[int, ...]
    trials: int | None = None
    seed: int | None = None
    supports_checked: int = 0
    elapsed_s: float = field(default=0.0, compare=False)

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "k": self.k,
            "value": self.value,
            "mode": self.mode,
            "witness": list(self.witness),
            "trials": self.trials,
            "seed": self.seed,
            "supports_checked": self.supports_checked,
        }
        if timing:
            d["elapsed_s"] = self.elapsed_s
        return d


def colex_supports(n: int, k: int) -> np.ndarray:
    """All k-subsets of ``[0, n)`` as rows, sorted colexicographically."""
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(n), k)),
                       dtype=np.int64, count=math.comb(n, k) * k)
    s = flat.reshape(-1, k)
    # lexsort keys: last key is primary, so pass columns in ascending order
    return s[np.lexsort(s.T)]


def support_deviations(gram: np.ndarray, supports: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Spectral norm of ``G_S - I`` for each row ``S`` of ``supports``.

    Returns the norms and, per support, the index of the extreme eigenvalue.
    """
    k = supports.shape[1]
    sub = gram[supports[:, :, None], supports[:, None, :]] - np.eye(k)
    if k == 1:
        return np.abs(sub[:, 0, 0].real), np.zeros(len(supports), dtype=np.int64)
    ev = np.linalg.eigvalsh(sub)
    pos = np.argmax(np.abs(ev), axis=1)
    return np.abs(ev[np.arange(len(ev)), pos]), pos


def _max_over(gram, supports, threads: int) -> tuple[float, int]:
    """Max deviation over ``supports`` and the first index attaining it."""
    chunks = [(lo, min(lo + _BATCH, len(supports))) for lo in range(0, len(supports), _BATCH)]

    def work(c):
        vals, _ = support_deviations(gram, supports[c[0]:c[1]])
        i = int(np.argmax(vals))
        return float(vals[i]), c[0] + i

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    # associative max; strict ">" keeps the earliest support on ties
    best_val, best_idx = -1.0, -1
    for v, i in parts:
        if v > best_val:
            best_val, best_idx = v, i
    return best_val, best_idx


def rip_constant_exact(a: PartialOperator, k: int, budget: int = DEFAULT_BUDGET,
                       threads: int = 1) -> RipEstimate:
    """Exact order-``k`` restricted isometry constant of ``a``.

    Enumerates every support of size ``k`` in colex order and takes the
    largest ``||A_S* A_S - I||``. The witness is the first maximizing support.
    """
    n = a.base.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={n}")
    total = math.comb(n, k)
    if total > budget:
        raise BudgetExceeded(
            f"C({n},{k}) = {total} supports exceeds the budget of {budget}; "
            "use rip_lower_bound instead")
    t0 = time.perf_counter()
    gram = a.gram()
    supports = colex_supports(n, k)
    val, idx = _max_over(gram, supports, threads)
    return RipEstimate(k, val, "exhaustive", tuple(int(s) for s in supports[idx]),
                       supports_checked=total, elapsed_s=time.perf_counter() - t0)


def random_supports(n: int, k: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """``trials`` uniform k-subsets (sorted rows); a prefix of the stream is stable in ``trials``."""
    out = np.empty((trials, k), dtype=np.int64)
    for lo in range(0, trials, _BATCH):
        hi = min(lo + _BATCH, trials)
        keys = rng.random((hi - lo, n))
        out[lo:hi] = np.sort(np.argpartition(keys, k - 1, axis=1)[:, :k], axis=1)
    return out


def rip_lower_bound(a: PartialOperator, k: int, trials: int, seed: int) -> RipEstimate:
    """Lower bound on the order-``k`` constant from ``trials`` random supports."""
    n = a.base.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={n}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    t0 = time.perf_counter()
    supports = random_supports(n, k, trials, make_rng(seed))
    val, idx = _max_over(a.gram(), supports, 1)
    return RipEstimate(k, val, "random-supports", tuple(int(s) for s in supports[idx]),
                       trials=trials, seed=seed, supports_checked=trials,
                       elapsed_s=time.perf_counter() - t0)


def extreme_vector(a: PartialOperator, support) -> tuple[float, np.ndarray]:
    """Signed extreme eigenvalue of ``A_S* A_S - I`` and its unit eigenvector embedded in C^N."""
    support = np.asarray(support, dtype=np.int64)
    cols = a.columns(support)
    dev = cols.conj().T @ cols - np.eye(len(support))
    ev, vec = np.linalg.eigh(dev)
    i = int(np.argmax(np.abs(ev)))
    x = np.zeros(a.base.n, dtype=complex)
    x[support] = vec[:, i]
    return float(ev[i]), x


def check_rip_for_vector(a: PartialOperator, x, eps: float) -> bool:
    """True iff ``(1-eps)||x||^2 <= ||Ax||^2 <= (1+eps)||x||^2``."""
    x = np.asarray(x, dtype=complex)
    nx = float(np.vdot(x, x).real)
    if nx == 0:
        raise ValueError("x must be nonzero")
    ax = a.apply(x)
    na = float(np.vdot(ax, ax).real)
    return (1 - eps) * nx <= na <= (1 + eps) * nx
