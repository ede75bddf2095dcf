"""Maurey sampling of ``Mx`` and the multi-scale vector families built from it.

Everything here works with the *normalized* matrix ``M / ||M||_inf``, whose
largest entry is 1, and with ``x`` scaled to ``||x||_1 = 1``. The level
thresholds ``2 * 2**(-i/2)`` and caps ``9 * 2**-i`` only make sense on that
scale. For a flat unitary (DFT, Hadamard) normalizing multiplies by ``sqrt(N)``.

Two families are built from sampled vectors ``g^(i)``:

* the simple family: level sets ``B_i`` and clipped squares ``h^(i)``;
* the improved family: level sets ``C_i``, vectors ``h^(i,m)`` and
  thresholded telescoping differences ``Delta^(i,m)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import ApproxSpec, Unitary, approx_within
from .sampling import RowSample

# i**s for s = 0, 1, 2, 3
PHASES = np.array([1, 1j, -1, -1j])

# h^(i,m) is rounded onto this dyadic grid so telescoping sums are exact in float64
_GRID_BITS = 50


class NoGoodSample(RuntimeError):
    """No sampled ``g`` met the bad-coordinate budget within ``max_attempts``."""

    def __init__(self, level, attempts, bad_n, bad_q):
        super().__init__(
            f"level {level}: no good g after {attempts} attempts "
            f"(last attempt: {bad_n} bad of [N], {bad_q} bad of Q)")
        self.level = level
        self.attempts = attempts


@dataclass(frozen=True)
class NetParams:
    """Accuracy parameters and derived level counts.

    ``t = ceil(log2(1/eta))``, ``r = ceil(log2(1/eps**2))``. The bad-coordinate
    budget ``gamma`` is ``eta/(2t)`` for the simple variant and
    ``eta/(60(t+r))`` for the improved one.
    """

    eps: float
    eta: float
    variant: str = "simple"
    c_f: float = 8.0

    def __post_init__(self):
        if not (0 < self.eps <= 0.5 and 0 < self.eta <= 0.5):
            raise ValueError(f"eps and eta must lie in (0, 1/2], got {self.eps}, {self.eta}")
        if self.variant not in ("simple", "improved"):
            raise ValueError(f"variant must be 'simple' or 'improved', got {self.variant!r}")
        if self.variant == "improved" and self.eps < self.eta:
            raise ValueError("the improved variant requires eps >= eta")
        if self.c_f <= 0:
            raise ValueError("c_f must be positive")

    @property
    def t(self) -> int:
        return max(1, math.ceil(math.log2(1 / self.eta) - 1e-12))

    @property
    def r(self) -> int:
        return max(1, math.ceil(math.log2(1 / self.eps**2) - 1e-12))

    @property
    def gamma(self) -> float:
        if self.variant == "simple":
            return self.eta / (2 * self.t)
        return self.eta / (60 * (self.t + self.r))

    @property
    def levels(self) -> range:
        """Levels ``i`` whose ``g^(i)`` the variant consumes."""
        if self.variant == "simple":
            return range(1 + self.r, self.t + self.r + 1)
        return range(1, self.t + self.r + 1)

    def sample_size(self, level: int) -> int:
        """``|F| = ceil(c_F * 2**i * log2(1/gamma))``."""
        return math.ceil(self.c_f * 2**level * math.log2(1 / self.gamma))

    def default_slack(self) -> ApproxSpec:
        """Slack for the decomposition checks, read off the proofs' explicit constants."""
        t, r, g = self.t, self.r, self.gamma
        if self.variant == "simple":
            return ApproxSpec(3 * self.eps, 9 * self.eta + 2 * t * g)
        return ApproxSpec(10 * self.eps, 9 * self.eta + 60 * (t + r) * g)

    def to_dict(self) -> dict:
        return {"eps": self.eps, "eta": self.eta, "variant": self.variant, "c_f": self.c_f,
                "t": self.t, "r": self.r, "gamma": self.gamma}


@dataclass(frozen=True, eq=False)
class PhaseDistribution:
    """Weights ``p[l, s] >= 0`` with ``sum_s p[l,s] = |x_l|`` and
    ``sqrt(2) * sum_s p[l,s] * i**s = x_l``."""

    weights: np.ndarray  # shape (N, 4)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def probabilities(self) -> np.ndarray:
        """Flattened ``p`` over pairs ``(l, s)``, index ``4*l + s``; renormalized against rounding."""
        p = self.weights.ravel()
        return p / p.sum()

    def signed_sum(self) -> np.ndarray:
        return np.sqrt(2) * self.weights @ PHASES

    def total_mass(self) -> float:
        return float(self.weights.sum())


def phase_decompose(x, tol: float = 1e-10) -> PhaseDistribution:
    """Write ``x`` (with ``||x||_1 = 1``) as a distribution over signed columns.

    With ``x_l = a + bi`` the positive/negative parts of ``a`` go to
    ``s = 0, 2`` and those of ``b`` to ``s = 1, 3``, each divided by sqrt(2).
    The leftover ``|x_l| - (|a|+|b|)/sqrt(2) >= 0`` is split evenly between
    ``s = 0`` and ``s = 2``, where it cancels in the signed sum.
    """
    x = np.asarray(x, dtype=complex)
    l1 = float(np.abs(x).sum())
    if abs(l1 - 1.0) > tol:
        raise ValueError(f"x must have unit l1 norm, got {l1!r}")
    a, b = x.real, x.imag
    s2 = np.sqrt(2)
    w = np.stack([np.maximum(a, 0), np.maximum(b, 0), np.maximum(-a, 0), np.maximum(-b, 0)],
                 axis=1) / s2
    slack = np.maximum(np.abs(x) - (np.abs(a) + np.abs(b)) / s2, 0.0) / 2
    w[:, 0] += slack
    w[:, 2] += slack
    return PhaseDistribution(w)


def normalized_apply(m: Unitary, x) -> np.ndarray:
    """``(M / ||M||_inf) x``."""
    return m.apply(x) / m.flatness


def sample_g(m: Unitary, dist: PhaseDistribution, level: int, params: NetParams,
             rng: np.random.Generator) -> np.ndarray:
    """Empirical mean of ``sqrt(2) * i**s * M^(l)`` over ``|F|`` iid pairs from ``dist``.

    Columns are taken from the normalized matrix. ``E[g]`` equals the
    normalized ``Mx``.
    """
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    size = params.sample_size(level)
    counts = rng.multinomial(size, dist.probabilities()).reshape(-1, 4)
    w = np.sqrt(2) / size * (counts @ PHASES)
    return normalized_apply(m, w)


@dataclass
class GoodSample:
    level: int
    g: np.ndarray
    attempts: int
    bad: np.ndarray = field(repr=False)  # bool mask over [N]
    bad_n: int = 0
    bad_q: int = 0


def coordinate_band_failures(mx_norm: np.ndarray, g: np.ndarray, level: int) -> np.ndarray:
    """Mask of ``j`` where ``|Mx_j| ~_{0, 2**(-i/2)} |g_j|`` fails."""
    return ~approx_within(np.abs(mx_norm), np.abs(g), ApproxSpec(0.0, 2.0 ** (-level / 2)))


def find_good_g(m: Unitary, x, sample: RowSample, level: int, params: NetParams,
                rng: np.random.Generator, max_attempts: int = 64,
                dist: PhaseDistribution | None = None,
                mx_norm: np.ndarray | None = None) -> GoodSample:
    """Resample ``g`` at ``level`` until at most a ``gamma`` fraction of ``[N]`` and of
    ``Q`` (with multiplicity) violate the per-coordinate band.

    Each attempt draws a fresh multiset. Raises :class:`NoGoodSample` after
    ``max_attempts`` failures.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    dist = phase_decompose(x) if dist is None else dist
    mx_norm = normalized_apply(m, x) if mx_norm is None else mx_norm
    budget_n = params.gamma * m.n
    budget_q = params.gamma * sample.q
    bad_n = bad_q = 0
    for attempt in range(1, max_attempts + 1):
        g = sample_g(m, dist, level, params, rng)
        bad = coordinate_band_failures(mx_norm, g, level)
        bad_n = int(bad.sum())
        bad_q = int(bad[sample.indices].sum())
        if bad_n <= budget_n and bad_q <= budget_q:
            return GoodSample(level, g, attempt, bad, bad_n, bad_q)
    raise NoGoodSample(level, max_attempts, bad_n, bad_q)


@dataclass(eq=False)
class NetFamily:
    """Realized level sets and vectors for one ``x``.

    ``level_of[j]`` is the ``i`` with ``j`` in ``B_i`` (or ``C_i``), 0 if none.
    Simple: ``h[i-1]`` is ``h^(i)``. Improved: ``h[i-1, m-i]`` is ``h^(i,m)`` and
    ``delta[i-1, m-i]`` is ``Delta^(i,m)`` for ``m`` in ``[i, i+r]``; both vanish
    for other ``m`` and are not stored.
    """

    variant: str
    params: NetParams
    g_levels: dict[int, np.ndarray] = field(repr=False)
    level_of: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)
    delta: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.level_of.size

    def level_set(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.level_of == i)

    def approximation(self) -> np.ndarray:
        """Per-coordinate approximation of ``|Mx|**2``: ``sum_i h^(i)`` or ``sum_{i,m} Delta^(i,m)``."""
        if self.variant == "simple":
            return self.h.sum(axis=0)
        return self.delta.sum(axis=(0, 1))

    def to_dict(self) -> dict:
        d = {
            "variant": self.variant,
            "params": self.params.to_dict(),
            "g_levels": {str(i): {"re": g.real.tolist(), "im": g.imag.tolist()}
                         for i, g in self.g_levels.items()},
            "level_sets": {str(i): self.level_set(i).tolist()
                           for i in range(1, self.params.t + 1)},
            "h": self.h.tolist(),
        }
        if self.delta is not None:
            d["delta"] = self.delta.tolist()
        return d


def _first_level(mags: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """For each column, the first row ``i`` (1-based, per ``levels``) with
    ``mags[i] >= 2 * 2**(-level/2)``; 0 if none."""
    thresh = 2.0 * 2.0 ** (-levels / 2.0)
    hit = mags >= thresh[:, None]
    first = np.argmax(hit, axis=0) + 1
    first[~hit.any(axis=0)] = 0
    return first


def build_simple_family(g_levels, params: NetParams) -> NetFamily:
    """Sets ``B_i`` and vectors ``h^(i)`` from ``(g^(1+r), ..., g^(t+r))``."""
    t, r = params.t, params.r
    g = [np.asarray(v, dtype=complex) for v in g_levels]
    if len(g) != t:
        raise ValueError(f"expected {t} g-levels (levels {r + 1}..{t + r}), got {len(g)}")
    mags = np.abs(np.stack(g))
    i_idx = np.arange(1, t + 1)
    level_of = _first_level(mags, i_idx.astype(float))
    member = level_of[None, :] == i_idx[:, None]
    caps = 9.0 * 2.0 ** (-i_idx.astype(float))
    h = np.minimum(mags**2 * member, caps[:, None])
    return NetFamily("simple", params, {r + i: g[i - 1] for i in i_idx}, level_of, h)


def _snap(v: np.ndarray) -> np.ndarray:
    return np.ldexp(np.round(np.ldexp(v, _GRID_BITS)), -_GRID_BITS)


def build_improved_family(g_levels, params: NetParams) -> NetFamily:
    """Sets ``C_i``, vectors ``h^(i,m)`` and differences ``Delta^(i,m)`` from
    ``(g^(1), ..., g^(t+r))``.

    A difference ``h^(i,m) - h^(i,m-1)`` is kept when its magnitude is at most
    ``30 * 2**(-(i+m)/2)`` and zeroed otherwise, with ``h^(i,i-1) = 0``.
    """
    t, r = params.t, params.r
    g = [np.asarray(v, dtype=complex) for v in g_levels]
    if len(g) != t + r:
        raise ValueError(f"expected {t + r} g-levels (levels 1..{t + r}), got {len(g)}")
    mags = np.abs(np.stack(g))
    n = mags.shape[1]
    level_of = _first_level(mags[:t], np.arange(1, t + 1, dtype=float))
    h = np.zeros((t, r + 1, n))
    delta = np.zeros((t, r + 1, n))
    for i in range(1, t + 1):
        member = level_of == i
        rows = _snap(mags[i - 1:i + r] ** 2) * member
        h[i - 1] = rows
        diff = np.diff(rows, axis=0, prepend=0.0)
        m = np.arange(i, i + r + 1, dtype=float)
        bound = 30.0 * 2.0 ** (-(i + m) / 2.0)
        delta[i - 1] = np.where(np.abs(diff) <= bound[:, None], diff, 0.0)
        # grid-valued entries bounded by 2 make every partial sum exact
        assert np.array_equal(diff.sum(axis=0), rows[-1])
    return NetFamily("improved", params, {i: g[i - 1] for i in range(1, t + r + 1)},
                     level_of, h, delta)


def _item(lhs: float, rhs: float, slack: ApproxSpec) -> dict:
    gap = abs(lhs - rhs)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "abs_gap": gap,
        "rel_gap": gap / rhs if rhs > 0 else (0.0 if gap == 0 else math.inf),
        "excess_additive": max(0.0, gap - slack.eps * rhs),
        "eps": slack.eps,
        "alpha": slack.alpha,
        "pass": approx_within(lhs, rhs, slack),
    }


def verify_decomposition(m: Unitary, x, sample: RowSample, family: NetFamily,
                         slack: ApproxSpec | None = None) -> dict:
    """Compare ``|Mx|**2`` with the family's approximation, on ``Q`` and on ``[N]``.

    Quantities are in normalized units (``||M||_inf = 1``, ``||x||_1 = 1``).
    For the improved variant the report also carries the lower bound
    ``E_[N] |Mx|**2 >= sum_i 2**-i |C_i| / N - eta``.
    """
    params = family.params
    slack = params.default_slack() if slack is None else slack
    v = np.abs(normalized_apply(m, x)) ** 2
    approx = family.approximation()
    q = sample.indices
    report = {
        "variant": family.variant,
        "params": params.to_dict(),
        "level_set_sizes": [int((family.level_of == i).sum()) for i in range(1, params.t + 1)],
        "sample_average": _item(float(v[q].mean()), float(approx[q].mean()), slack),
        "full_average": _item(float(v.mean()), float(approx.mean()), slack),
    }
    if family.variant == "improved":
        lhs = float(v.mean())
        sizes = np.array(report["level_set_sizes"], dtype=float)
        bound = float((2.0 ** -np.arange(1, params.t + 1) * sizes).sum() / m.n) - params.eta
        report["mass_lower_bound"] = {"lhs": lhs, "bound": bound, "pass": lhs >= bound}
    # how well Q averages the approximation itself (what the union bound controls)
    report["net_transfer"] = _item(float(approx[q].mean()), float(approx.mean()),
                                   ApproxSpec(params.eps, params.eta))
    keys = ["sample_average", "full_average"] + (
        ["mass_lower_bound"] if family.variant == "improved" else [])
    report["pass"] = all(report[k]["pass"] for k in keys)
    return report


def final_comparison(m: Unitary, x, sample: RowSample, eps: float, eta: float) -> dict:
    """``E_Q |Mx|^2 ~_{eps, eta ||x||_1^2 ||M||_inf^2} E_[N] |Mx|^2`` in original units."""
    x = np.asarray(x, dtype=complex)
    v = np.abs(m.apply(x)) ** 2
    alpha = eta * float(np.abs(x).sum()) ** 2 * m.flatness**2
    return _item(float(v[sample.indices].mean()), float(v.mean()), ApproxSpec(eps, alpha))


def build_family_for(m: Unitary, x, sample: RowSample, params: NetParams,
                     rng: np.random.Generator, max_attempts: int = 64):
    """Find a good ``g`` at every level the variant needs and build its family.

    Returns the family and the list of :class:`GoodSample` (one per level).
    """
    dist = phase_decompose(x)
    mx_norm = normalized_apply(m, x)
    found = [find_good_g(m, x, sample, i, params, rng, max_attempts, dist, mx_norm)
             for i in params.levels]
    gl = [s.g for s in found]
    if params.variant == "simple":
        return build_simple_family(gl, params), found
    return build_improved_family(gl, params), found


def g_histograms(family: NetFamily, bins: int = 20) -> list[dict]:
    """Per-level histogram rows of ``|g^(i)|`` on a common range ``[0, sqrt(2)]``."""
    edges = np.linspace(0.0, np.sqrt(2) * (1 + 1e-12), bins + 1)
    rows = []
    for level, g in sorted(family.g_levels.items()):
        counts, _ = np.histogram(np.abs(g), bins=edges)
        rows.extend({"level": level, "bin_lo": float(edges[b]), "bin_hi": float(edges[b + 1]),
                     "count": int(counts[b])} for b in range(bins))
    return rows
