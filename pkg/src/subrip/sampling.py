"""Random row multisets and the scaled partial operator they define."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import Unitary

RNG_ALGORITHM = "numpy.PCG64/SeedSequence(seed, spawn_key)"


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent PCG64 stream for ``(seed, *key)``.

    Streams with distinct keys are statistically independent, so per-trial
    generators can be derived as ``make_rng(master, stream, trial)``.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True, eq=False)
class RowSample:
    """A multiset of ``q`` row indices in ``[0, N)``; duplicates are kept."""

    n: int
    indices: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1 or idx.size < 1:
            raise ValueError("a row sample needs at least one index")
        if idx.min() < 0 or idx.max() >= self.n:
            raise ValueError(f"row indices must lie in [0, {self.n})")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def q(self) -> int:
        return int(self.indices.size)

    @property
    def scale(self) -> float:
        return float(np.sqrt(self.n / self.q))

    def counts(self) -> np.ndarray:
        """Multiplicity of each row in ``[0, N)``."""
        return np.bincount(self.indices, minlength=self.n)

    def to_dict(self) -> dict:
        return {"N": self.n, "q": self.q, "indices": self.indices.tolist(), "seed": self.seed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "RowSample":
        rs = cls(int(d["N"]), np.asarray(d["indices"], dtype=np.int64), d.get("seed"))
        if "q" in d and int(d["q"]) != rs.q:
            raise ValueError(f"q={d['q']} disagrees with {rs.q} indices")
        return rs

    @classmethod
    def from_json(cls, text: str) -> "RowSample":
        return cls.from_dict(json.loads(text))


def sample_rows(n: int, q: int, seed: int) -> RowSample:
    """Draw ``q`` iid uniform rows of ``[0, n)`` (with replacement)."""
    if n < 1 or q < 1:
        raise ValueError(f"need N >= 1 and q >= 1, got N={n}, q={q}")
    rng = make_rng(seed)
    return RowSample(n, rng.integers(0, n, size=q), seed)


def full_sample(n: int) -> RowSample:
    """Every row exactly once (``q = N``, scale 1)."""
    return RowSample(n, np.arange(n))


@dataclass(frozen=True, eq=False)
class PartialOperator:
    """``A = sqrt(N/q) * M[Q, :]`` for a unitary ``M`` and row multiset ``Q``."""

    base: Unitary
    sample: RowSample

    def __post_init__(self):
        if self.base.n != self.sample.n:
            raise ValueError(f"sample is over [{self.sample.n}] but operator has N={self.base.n}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.sample.q, self.base.n

    def apply(self, x) -> np.ndarray:
        return self.sample.scale * self.base.apply(x)[..., self.sample.indices]

    def adjoint(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=complex)
        if y.shape != (self.sample.q,):
            raise ValueError(f"dimension mismatch: expected ({self.sample.q},), got {y.shape}")
        # scatter-add so duplicated rows accumulate
        idx, n = self.sample.indices, self.base.n
        z = np.bincount(idx, y.real, n) + 1j * np.bincount(idx, y.imag, n)
        return self.sample.scale * self.base.adjoint(z)

    def dense(self) -> np.ndarray:
        return self.sample.scale * self.base.rows(self.sample.indices)

    def columns(self, support) -> np.ndarray:
        """Dense ``q x |S|`` submatrix of the columns in ``support``."""
        support = np.asarray(support, dtype=np.int64)
        return self.sample.scale * self.base.entry(self.sample.indices[:, None], support[None, :])

    def gram(self) -> np.ndarray:
        """``A* A``, computed as ``(N/q) M* diag(counts) M``."""
        rows = np.flatnonzero(self.sample.counts())
        w = self.sample.counts()[rows]
        r = self.base.rows(rows)
        return (self.base.n / self.sample.q) * (r.conj().T * w) @ r


def apply_partial(a: PartialOperator, x) -> np.ndarray:
    return a.apply(x)


def sampled_mean(a: PartialOperator, x) -> float:
    """``(1/q) * sum_{j in Q} |(Mx)_j|^2``, duplicates counted."""
    mx = a.base.apply(x)
    return float(np.mean(np.abs(mx[a.sample.indices]) ** 2))


def full_mean(m: Unitary, x) -> float:
    """``(1/N) * sum_j |(Mx)_j|^2``."""
    return float(np.mean(np.abs(m.apply(x)) ** 2))
