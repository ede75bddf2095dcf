"""Unitary operators with fast matvec, plus the two-sided approximation predicate.

Three kinds of ``N x N`` unitary are supported:

* ``"dft"`` -- entry ``(j, l)`` is ``exp(+2 pi i j l / N) / sqrt(N)``, applied by FFT.
* ``"hadamard"`` -- entry ``(j, l)`` is ``(-1)**popcount(j & l) / sqrt(N)`` (Sylvester
  order), applied by the fast Walsh-Hadamard transform. ``N`` must be a power of 2.
* ``"dense"`` -- an explicit matrix, validated unitary on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

KINDS = ("dft", "hadamard", "dense")
DENSE_UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class ApproxSpec:
    """Relative slack ``eps`` and additive slack ``alpha`` of ``x ~ y``."""

    eps: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("eps", "alpha"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {v!r}")


def approx_within(x, y, spec: ApproxSpec):
    """True iff ``(1 - eps) * y - alpha <= x <= (1 + eps) * y + alpha``.

    The relation is not symmetric: ``y`` is the reference value. Works
    elementwise on arrays, returning a boolean array.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = ((1.0 - spec.eps) * y - spec.alpha <= x) & (x <= (1.0 + spec.eps) * y + spec.alpha)
    return bool(out) if out.ndim == 0 else out


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def fwht(x: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis."""
    a = np.array(x, dtype=complex, copy=True)
    n = a.shape[-1]
    if not is_power_of_two(n):
        raise ValueError(f"length must be a power of 2, got {n}")
    lead = a.shape[:-1]
    h = 1
    while h < n:
        a = a.reshape(*lead, n // (2 * h), 2, h)
        u = a[..., 0, :].copy()
        v = a[..., 1, :]
        a[..., 0, :] += v
        a[..., 1, :] = u - v
        h *= 2
    return a.reshape(*lead, n)


@dataclass(frozen=True, eq=False)
class Unitary:
    """An ``N x N`` unitary available through entries and fast matvec.

    Build instances with :func:`make_unitary` or :func:`load_dense`.
    """

    kind: str
    n: int
    matrix: np.ndarray | None = field(default=None, repr=False)

    @property
    def flatness(self) -> float:
        """Largest absolute entry, ``||M||_inf``."""
        if self.kind == "dense":
            return float(np.abs(self.matrix).max())
        return 1.0 / np.sqrt(self.n)

    def entry(self, j, l):
        j = np.asarray(j)
        l = np.asarray(l)
        if self.kind == "dft":
            # reduce jl mod N in integers so the phase is exact for large indices
            ph = (j.astype(np.int64) * l.astype(np.int64)) % self.n
            return np.exp(2j * np.pi * ph / self.n) / np.sqrt(self.n)
        if self.kind == "hadamard":
            bits = np.bitwise_and(j, l)
            parity = np.zeros(np.broadcast(j, l).shape, dtype=np.int64)
            while np.any(bits):
                parity ^= bits & 1
                bits = bits >> 1
            return (1.0 - 2.0 * parity) / np.sqrt(self.n) + 0j
        return self.matrix[j, l]

    def rows(self, idx) -> np.ndarray:
        """Dense rows ``M[idx, :]``."""
        idx = np.asarray(idx, dtype=np.int64)
        return self.entry(idx[:, None], np.arange(self.n)[None, :])

    def dense(self) -> np.ndarray:
        return self.rows(np.arange(self.n))

    def column(self, l: int) -> np.ndarray:
        return self.entry(np.arange(self.n), l)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape[-1] != self.n:
            raise ValueError(f"dimension mismatch: operator is {self.n}, vector is {x.shape[-1]}")
        return x

    def apply(self, x) -> np.ndarray:
        """``M x`` along the last axis, via FFT / FWHT where available."""
        x = self._check(x)
        if self.kind == "dft":
            return np.fft.ifft(x, norm="ortho")
        if self.kind == "hadamard":
            return fwht(x) / np.sqrt(self.n)
        return x @ self.matrix.T

    def adjoint(self, y) -> np.ndarray:
        """``M* y`` along the last axis."""
        y = self._check(y)
        if self.kind == "dft":
            return np.fft.fft(y, norm="ortho")
        if self.kind == "hadamard":
            return fwht(y) / np.sqrt(self.n)
        return y @ self.matrix.conj()

    def apply_naive(self, x) -> np.ndarray:
        """``M x`` by explicit O(N^2) summation; reference path for tests."""
        x = self._check(x)
        return x @ self.dense().T


def make_unitary(kind: str, n: int | None = None, matrix=None) -> Unitary:
    """Build a unitary of the given kind.

    ``matrix`` is required for ``kind="dense"`` and rejected if
    ``M* M`` deviates from the identity by more than 1e-8 in any entry.
    """
    kind = kind.lower()
    if kind not in KINDS:
        raise ValueError(f"unknown unitary kind {kind!r}; expected one of {KINDS}")
    if kind == "dense":
        if matrix is None:
            raise ValueError("dense unitary needs an explicit matrix")
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"dense unitary must be square and nonempty, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("dense unitary has non-finite entries")
        dev = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        if dev > DENSE_UNITARY_TOL:
            raise ValueError(f"matrix is not unitary: max |M*M - I| = {dev:.3e}")
        m.setflags(write=False)
        return Unitary("dense", m.shape[0], m)
    if n is None or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    if kind == "hadamard" and not is_power_of_two(n):
        raise ValueError(f"Hadamard needs N a power of 2, got {n}")
    return Unitary(kind, int(n))


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real!r}{z.imag:+.17g}j"


def save_dense(path, matrix) -> None:
    """Write a matrix in the text format read by :func:`load_dense`."""
    m = np.asarray(matrix, dtype=complex)
    lines = [",".join(format_complex(z) for z in row) for row in m]
    Path(path).write_text("\n".join(lines) + "\n")


def load_dense(path) -> Unitary:
    """Read an explicit unitary: one row per line, comma-separated ``re+imj`` entries.

    Blank lines and lines starting with ``#`` are skipped.
    """
    rows = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([complex(tok.strip().replace(" ", "")) for tok in line.split(",")])
    if len({len(r) for r in rows}) > 1:
        raise ValueError(f"{path}: rows have unequal lengths")
    return make_unitary("dense", matrix=np.array(rows, dtype=complex))
