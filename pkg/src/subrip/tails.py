"""Monte-Carlo probes of the Chernoff-Hoeffding style tail bounds.

A probe draws ``trials`` independent sample means of ``n_vars`` iid bounded
variables and reports how often the bound's approximation event fails.
Each bound has a name:

=============  ==============================================  ===================
name           event checked                                   variables
=============  ==============================================  ===================
``chernoff``   ``mean ~_{eps,0} mu``                           in ``[0, a]``
``combined``   ``mean ~_{eps,alpha} mu``                       in ``[0, a]``
``signed``     ``mean ~_{0, eps*E|X| + alpha} mu``             in ``[-a, a]``
``additive``   ``mean ~_{0,b} mu``                             in ``[-a, a]``
``complex``    ``|mean| ~_{0,b} |mu|``                         ``|X| <= a``
=============  ==============================================  ===================
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ApproxSpec, approx_within

BOUNDS = ("chernoff", "combined", "signed", "additive", "complex")
_CHUNK_ELEMS = 2_000_000


@dataclass(frozen=True)
class Distribution:
    """A bounded distribution given by name and parameters.

    Supported names: ``constant`` (value), ``bernoulli`` (p, a: values in
    ``{0, a}``), ``uniform`` (low, high), ``rademacher`` (a: ``+-a``),
    ``phase`` (a: ``a * exp(i theta)``, theta uniform).
    """

    name: str
    params: tuple = ()

    @classmethod
    def from_dict(cls, d: dict) -> "Distribution":
        d = dict(d)
        name = d.pop("name")
        dist = cls(name, tuple(sorted(d.items())))
        dist.support()  # validates
        return dist

    def to_dict(self) -> dict:
        return {"name": self.name, **dict(self.params)}

    def _p(self, key, default=None):
        v = dict(self.params).get(key, default)
        if v is None:
            raise ValueError(f"distribution {self.name!r} needs parameter {key!r}")
        return float(v)

    def support(self) -> tuple[float, float, bool]:
        """``(low, high, is_complex)``; for complex kinds ``high`` bounds ``|X|``."""
        if self.name == "constant":
            v = self._p("value")
            return v, v, False
        if self.name == "bernoulli":
            p, a = self._p("p"), self._p("a", 1.0)
            if not 0 <= p <= 1:
                raise ValueError("bernoulli p must lie in [0, 1]")
            return min(0.0, a), max(0.0, a), False
        if self.name == "uniform":
            lo, hi = self._p("low"), self._p("high")
            if hi < lo:
                raise ValueError("uniform needs low <= high")
            return lo, hi, False
        if self.name == "rademacher":
            a = abs(self._p("a", 1.0))
            return -a, a, False
        if self.name == "phase":
            a = abs(self._p("a", 1.0))
            return 0.0, a, True
        raise ValueError(f"unsupported or unbounded distribution {self.name!r}")

    def mean(self) -> complex:
        if self.name == "constant":
            return self._p("value")
        if self.name == "bernoulli":
            return self._p("p") * self._p("a", 1.0)
        if self.name == "uniform":
            return (self._p("low") + self._p("high")) / 2
        return 0.0

    def mean_abs(self) -> float:
        if self.name == "constant":
            return abs(self._p("value"))
        if self.name == "bernoulli":
            return self._p("p") * abs(self._p("a", 1.0))
        if self.name == "uniform":
            lo, hi = self._p("low"), self._p("high")
            if hi == lo:
                return abs(lo)
            if lo >= 0 or hi <= 0:
                return abs(lo + hi) / 2
            return (lo * lo + hi * hi) / (2 * (hi - lo))
        return abs(self._p("a", 1.0))

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.name == "constant":
            return np.full(shape, self._p("value"))
        if self.name == "bernoulli":
            return self._p("a", 1.0) * (rng.random(shape) < self._p("p"))
        if self.name == "uniform":
            return rng.uniform(self._p("low"), self._p("high"), shape)
        if self.name == "rademacher":
            return self._p("a", 1.0) * (2.0 * rng.integers(0, 2, shape) - 1.0)
        return self._p("a", 1.0) * np.exp(2j * np.pi * rng.random(shape))


def _check_bound_fits(bound: str, dist: Distribution) -> None:
    lo, hi, cplx = dist.support()
    if bound in ("chernoff", "combined") and (cplx or lo < 0):
        raise ValueError(f"{bound!r} needs variables in [0, a]; {dist.name!r} does not fit")
    if bound in ("signed", "additive") and cplx:
        raise ValueError(f"{bound!r} needs real variables; {dist.name!r} is complex")


def _event_spec(bound: str, dist: Distribution, eps: float, alpha: float, b: float):
    if bound == "chernoff":
        return ApproxSpec(eps, 0.0)
    if bound == "combined":
        return ApproxSpec(eps, alpha)
    if bound == "signed":
        return ApproxSpec(0.0, eps * dist.mean_abs() + alpha)
    return ApproxSpec(0.0, b)


def tail_probe(bound: str, dist: Distribution | dict, n_vars: int, trials: int,
               rng: np.random.Generator, eps: float = 0.0, alpha: float = 0.0,
               b: float = 0.0) -> float:
    """Fraction of ``trials`` sample means of ``n_vars`` variables that violate
    the approximation event of ``bound`` (see module docstring)."""
    if bound not in BOUNDS:
        raise ValueError(f"unknown bound {bound!r}; expected one of {BOUNDS}")
    if isinstance(dist, dict):
        dist = Distribution.from_dict(dist)
    _check_bound_fits(bound, dist)
    if n_vars < 1 or trials < 1:
        raise ValueError("n_vars and trials must be >= 1")
    spec = _event_spec(bound, dist, eps, alpha, b)
    mu = dist.mean()
    rows = max(1, _CHUNK_ELEMS // n_vars)
    failures = 0
    for lo in range(0, trials, rows):
        m = dist.draw(rng, (min(rows, trials - lo), n_vars)).mean(axis=1)
        if bound == "complex":
            ok = approx_within(np.abs(m), abs(mu), spec)
        else:
            ok = approx_within(m.real, float(np.real(mu)), spec)
        failures += int(np.size(ok) - np.count_nonzero(ok))
    return failures / trials
