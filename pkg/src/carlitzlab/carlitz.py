"""Carlitz-module primitives and the operator calculus on F_q-linear series.

An F_q-linear series is a function of the shape u(t) = sum_k c_k t^(q^k); it
is additive and F_q-homogeneous, and the coefficients c_k live in the series
field.  QLinearSeries stores the finite truncation c_0..c_N.

The building blocks:

* bracket(n)            [n] = x^(q^n) - x, with [0] = 0; valuation 1 for n >= 1
* carlitz_factorial(n)  D_0 = 1, D_n = [n] * D_{n-1}^q; valuation (q^n-1)/(q-1)
* carlitz_exp(N, prec)  the truncated exponential with coefficients 1/D_k

and the operators, all acting coefficientwise on the truncation:

* tau(u)      u^q as a function: shifts coefficients up one slot and raises
              them to the q-th power
* delta(u)    u(x t) - x u(t): multiplies the k-th coefficient by [k]
* carlitz_d(u)  q-th root of delta(u): the order drops by one

Identities among these are verified, not assumed; see the analysis module.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .errors import ConfigMismatchError, DivergenceSuspectedError
from .ff import FieldConfig
from .series import GenSeries, from_terms, one, zero

_MAX_FACTORIAL_INDEX = 24  # D_n has 2^n terms; beyond this is never desk scale


class QLinearSeries:
    """Finite truncation of an F_q-linear series, coefficients c_0..c_N."""

    __slots__ = ("cfg", "coeffs")

    def __init__(self, cfg: FieldConfig, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a QLinearSeries needs at least the c_0 coefficient")
        for c in coeffs:
            if not isinstance(c, GenSeries) or c.cfg != cfg:
                raise ConfigMismatchError(
                    "all coefficients must be GenSeries over the same config")
        self.cfg = cfg
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> GenSeries:
        return self.coeffs[k]

    def truncate_order(self, n: int) -> "QLinearSeries":
        if n >= self.order:
            return self
        return QLinearSeries(self.cfg, self.coeffs[: n + 1])

    def __eq__(self, other):
        if not isinstance(other, QLinearSeries):
            return NotImplemented
        return self.cfg == other.cfg and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        inner = ", ".join(f"t^(q^{k}): {c}" for k, c in enumerate(self.coeffs))
        return f"QLinearSeries({inner})"


class BracketCache:
    """Memoized brackets [n] and factorials D_n for one configuration.

    All cached values are exact (uncapped) sparse polynomials; callers
    truncate as needed.  Thread-safe; values are immutable once stored.
    """

    def __init__(self, cfg: FieldConfig):
        self.cfg = cfg
        self._brackets: dict[int, GenSeries] = {}
        self._factorials: dict[int, GenSeries] = {0: one(cfg)}
        self._lock = threading.RLock()  # factorial() calls bracket() while held

    def bracket(self, n: int) -> GenSeries:
        if n < 0:
            raise ValueError("bracket index must be >= 0")
        cached = self._brackets.get(n)
        if cached is not None:
            return cached
        if n == 0:
            value = zero(self.cfg)
        else:
            value = from_terms(self.cfg, {self.cfg.q ** n: 1, 1: -1})
        with self._lock:
            self._brackets[n] = value
        return value

    def factorial(self, n: int) -> GenSeries:
        if n < 0:
            raise ValueError("factorial index must be >= 0")
        if n > _MAX_FACTORIAL_INDEX:
            raise ValueError(
                f"D_{n} would have 2^{n} terms; refusing beyond "
                f"n = {_MAX_FACTORIAL_INDEX}")
        cached = self._factorials.get(n)
        if cached is not None:
            return cached
        with self._lock:
            top = max(self._factorials)
            value = self._factorials[top]
            for k in range(top + 1, n + 1):
                value = self.bracket(k) * value.q_power()
                self._factorials[k] = value
        return self._factorials[n]


_caches: dict[FieldConfig, BracketCache] = {}
_caches_lock = threading.Lock()


def bracket_cache(cfg: FieldConfig) -> BracketCache:
    cache = _caches.get(cfg)
    if cache is None:
        with _caches_lock:
            cache = _caches.setdefault(cfg, BracketCache(cfg))
    return cache


def bracket(cfg: FieldConfig, n: int, prec=None) -> GenSeries:
    """[n] = x^(q^n) - x for n >= 1; [0] is the zero series."""
    b = bracket_cache(cfg).bracket(n)
    return b if prec is None else b.truncate(prec)


def carlitz_factorial(cfg: FieldConfig, n: int, prec=None) -> GenSeries:
    """D_n = [n] * D_{n-1}^q, an exact sparse polynomial with 2^n terms."""
    d = bracket_cache(cfg).factorial(n)
    return d if prec is None else d.truncate(prec)


def identity_series(cfg: FieldConfig) -> QLinearSeries:
    """The function t itself: c_0 = 1."""
    return QLinearSeries(cfg, [one(cfg)])


def zero_series(cfg: FieldConfig, order: int = 0) -> QLinearSeries:
    return QLinearSeries(cfg, [zero(cfg)] * (order + 1))


def carlitz_exp(cfg: FieldConfig, order: int, prec) -> QLinearSeries:
    """Truncated Carlitz exponential: c_k = 1/D_k, each capped at ``prec``.

    The coefficient valuations are -(q^k - 1)/(q - 1), so the series
    converges exactly on |t| < q^(-1/(q-1)).
    """
    prec = Fraction(prec)
    coeffs = [carlitz_factorial(cfg, k).inv_to(prec) for k in range(order + 1)]
    return QLinearSeries(cfg, coeffs)


# ---------------------------------------------------------------------------
# operators


def tau(u: QLinearSeries) -> QLinearSeries:
    """Frobenius on functions: (tau u)(t) = u(t)^q."""
    coeffs = [zero(u.cfg)]
    coeffs.extend(c.q_power() for c in u.coeffs)
    return QLinearSeries(u.cfg, coeffs)


def delta(u: QLinearSeries) -> QLinearSeries:
    """Difference operator u(x t) - x u(t): multiplies c_k by [k]."""
    coeffs = [c * bracket(u.cfg, k) for k, c in enumerate(u.coeffs)]
    return QLinearSeries(u.cfg, coeffs)


def carlitz_d(u: QLinearSeries) -> QLinearSeries:
    """q-th root of delta: (d u)_k = (c_{k+1} [k+1])^(1/q); order drops by 1."""
    if u.order == 0:
        return zero_series(u.cfg)
    coeffs = [(u.coeffs[k + 1] * bracket(u.cfg, k + 1)).q_root()
              for k in range(u.order)]
    return QLinearSeries(u.cfg, coeffs)


def _qpower_chain(s: GenSeries, count: int) -> list[GenSeries]:
    """[s, s^q, s^(q^2), ..., s^(q^count)] via iterated Frobenius."""
    chain = [s]
    for _ in range(count):
        chain.append(chain[-1].q_power())
    return chain


def compose_linear(u: QLinearSeries, a: GenSeries, b: GenSeries) -> QLinearSeries:
    """Substitute t <- a*t + b*t^q.

    Since raising to the q-th power is additive, the result coefficient at
    t^(q^n) is c_n * a^(q^n) + c_{n-1} * b^(q^{n-1}); the order grows by one
    (the last slot keeps only the b-contribution of c_N).
    """
    n = u.order
    qa = _qpower_chain(a, n)
    qb = _qpower_chain(b, n)
    coeffs = []
    for k in range(n + 2):
        parts = []
        if k <= n:
            parts.append(u.coeffs[k] * qa[k])
        if k >= 1:
            parts.append(u.coeffs[k - 1] * qb[k - 1])
        acc = parts[0]
        for extra in parts[1:]:
            acc = acc + extra
        coeffs.append(acc)
    return QLinearSeries(u.cfg, coeffs)


def scale_argument(u: QLinearSeries, lam: GenSeries) -> QLinearSeries:
    """Substitute t <- lam * t: coefficient k becomes c_k * lam^(q^k)."""
    chain = _qpower_chain(lam, u.order)
    return QLinearSeries(u.cfg, [c * chain[k] for k, c in enumerate(u.coeffs)])


def evaluate(u: QLinearSeries, t0: GenSeries, tail_window: int = 3) -> GenSeries:
    """Sum the truncated series at t0: sum_k c_k * t0^(q^k).

    The truncation is only meaningful if the term valuations keep growing, so
    the final ``tail_window`` steps of v(c_k) + q^k v(t0) must be strictly
    increasing (coefficients that are exactly zero are skipped); otherwise
    DivergenceSuspectedError is raised.  The precision of the result is the
    minimum precision across the summands.
    """
    if t0.cfg != u.cfg:
        raise ConfigMismatchError("argument over a different configuration")
    n = u.order
    powers = _qpower_chain(t0, n)
    t0_floor = t0.val_floor()
    floors = []
    for k, c in enumerate(u.coeffs):
        cf = c.val_floor()
        if cf is None or t0_floor is None:
            floors.append(None)
        else:
            floors.append(cf + (u.cfg.q ** k) * t0_floor)
    window = [f for f in floors[max(0, n + 1 - (tail_window + 1)):]
              if f is not None]
    for lo, hi in zip(window, window[1:]):
        if lo >= hi:
            raise DivergenceSuspectedError(
                f"term valuations not increasing over the tail: {lo} -> {hi}")
    acc = zero(u.cfg)
    for k, c in enumerate(u.coeffs):
        acc = acc + c * powers[k]
    return acc
