"""Sparse recovery from subsampled-unitary measurements: IHT and OMP."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sampling import PartialOperator


@dataclass
class RecoveryResult:
    estimate: np.ndarray = field(repr=False)
    iterations: int
    residual: float
    support: tuple[int, ...]
    converged: bool
    degenerate: bool = False
    residual_history: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "estimate": {"re": self.estimate.real.tolist(), "im": self.estimate.imag.tolist()},
            "iterations": self.iterations,
            "residual": self.residual,
            "support": list(self.support),
            "converged": self.converged,
            "degenerate": self.degenerate,
        }


def hard_threshold(v: np.ndarray, k: int) -> np.ndarray:
    """Keep the ``k`` largest-magnitude entries; ties go to the lowest index."""
    keep = np.argsort(-np.abs(v), kind="stable")[:k]
    out = np.zeros_like(v)
    out[keep] = v[keep]
    return out


def _support(x) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(x))


def iht(a: PartialOperator, y, k: int, max_iters: int = 500, tol: float = 1e-10) -> RecoveryResult:
    """Iterative hard thresholding with unit step, ``x <- H_k(x + A*(y - Ax))``.

    Stops once ``||Ax - y|| <= tol * ||y||``, after ``max_iters`` iterations, or
    when the iteration diverges to a non-finite residual.
    """
    y = np.asarray(y, dtype=complex)
    if y.shape != (a.sample.q,):
        raise ValueError(f"dimension mismatch: expected ({a.sample.q},), got {y.shape}")
    if k < 1:
        raise ValueError("k must be >= 1")
    target = tol * np.linalg.norm(y)
    x = np.zeros(a.base.n, dtype=complex)
    res = float(np.linalg.norm(y))
    history = [res]
    it = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while res > target and it < max_iters:
            x = hard_threshold(x + a.adjoint(y - a.apply(x)), k)
            res = float(np.linalg.norm(a.apply(x) - y))
            history.append(res)
            it += 1
            if not np.isfinite(res):
                break
    return RecoveryResult(x, it, res, _support(x), res <= target, residual_history=history)


def omp(a: PartialOperator, y, k: int, tol: float = 1e-10) -> RecoveryResult:
    """Orthogonal matching pursuit: ``k`` greedy picks of the column most
    correlated with the residual, each followed by least squares on the support.

    Stops early when ``||r|| <= tol * ||y||``. A rank-deficient support is
    flagged as ``degenerate`` and ends the run.
    """
    y = np.asarray(y, dtype=complex)
    if y.shape != (a.sample.q,):
        raise ValueError(f"dimension mismatch: expected ({a.sample.q},), got {y.shape}")
    target = tol * np.linalg.norm(y)
    x = np.zeros(a.base.n, dtype=complex)
    r = y.copy()
    res = float(np.linalg.norm(r))
    history = [res]
    support: list[int] = []
    degenerate = False
    while len(support) < k and res > target:
        corr = np.abs(a.adjoint(r))
        corr[support] = -1.0
        support.append(int(np.argmax(corr)))
        cols = a.columns(support)
        coef, _, rank, _ = np.linalg.lstsq(cols, y, rcond=None)
        if rank < len(support):
            degenerate = True
            support.pop()
            break
        x = np.zeros(a.base.n, dtype=complex)
        x[support] = coef
        r = y - cols @ coef
        res = float(np.linalg.norm(r))
        history.append(res)
    return RecoveryResult(x, len(history) - 1, res, tuple(sorted(support)), res <= target,
                          degenerate, history)
