"""Special functions built on the Carlitz exponential.

* dwork_carlitz: E(t) = e_C(sigma (t - t^q)), the additive analog of the
  Dwork exponential.  Its coefficients collapse to the two-term closed form
  sigma^(q^n)/D_n - sigma^(q^(n-1))/D_{n-1}, which converges on a disk
  strictly larger than the exponential's own.
* dwork_special_value: the partial sums S_N of E(1), telescoping to
  sigma^(q^N)/D_N; every S_N is a unit multiple of sigma.
* polylog / overconvergent_polylog: l_n(t) = sum_j t^(q^j)/[j]^n and the
  difference L_n(t) = l_n(t) - l_n(t^q), which overconverges to |t| < q^(1/q).
* pochhammer / t1_shift / hypergeom: the twisted Pochhammer products
  <a>_n, the parameter shift T1(a) = (a - [1])^(1/q), and the hypergeometric
  coefficients <a>_n <b>_n / (<c>_n D_n).

Every function takes explicit truncation data; the kernel tracks the exact
precision of each result, so callers can always tell how far an answer is
certified.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .carlitz import (
    QLinearSeries,
    bracket,
    carlitz_exp,
    carlitz_factorial,
    compose_linear,
)
from .errors import InadmissibleParameterError, ZeroToPrecisionError
from .ff import FieldConfig
from .series import GenSeries, ValBound, compare_to_precision, one, sigma, x, zero


# ---------------------------------------------------------------------------
# Dwork-Carlitz exponential


def dwork_carlitz(cfg: FieldConfig, order: int, prec) -> QLinearSeries:
    """E = e_C composed with t <- sigma*(t - t^q), truncated at ``order``.

    c_0 = sigma, and c_n = sigma^(q^n)/D_n - sigma^(q^(n-1))/D_{n-1} for
    n >= 1.  Built through the generic substitution machinery; the closed
    form is available separately as an independent cross-check.
    """
    e = carlitz_exp(cfg, order, prec)
    s = sigma(cfg)
    return compose_linear(e, s, -s).truncate_order(order)


def dwork_gap_bound(q: int, n: int) -> Fraction:
    """Valuation lower bound for the n-th coefficient of E (n >= 1)."""
    if n < 1:
        raise ValueError("bound defined for n >= 1")
    if n == 1:
        return Fraction(1, q - 1) + (q - 1)
    return Fraction(q ** (n - 2) * (q - 1) ** 2 + 1, q - 1)


def dwork_coefficient(cfg: FieldConfig, n: int, cap) -> GenSeries:
    """The n-th coefficient of E from the closed form, to absolute cap ``cap``.

    Independent of the substitution path used by dwork_carlitz: inverses are
    taken at per-term adaptive precision and the sigma powers are exact
    monomials.
    """
    cap = Fraction(cap)
    s = sigma(cfg)
    if n == 0:
        return s
    q = cfg.q

    def term(k):
        mono = s ** (q ** k)  # exact monomial, valuation q^k/(q-1)
        inv = carlitz_factorial(cfg, k).inv_to(cap - mono.valuation())
        return mono * inv

    return term(n) - term(n - 1)


@dataclass(frozen=True)
class SpecialValueEntry:
    """One row of the E(1) partial-sum trace."""

    index: int
    sum_valuation: Fraction          # v(S_N); always 1/(q-1)
    gap: ValBound                    # v(S_N - sigma)
    unit_gap: ValBound               # v(S_N^(q-1) + x)
    dual_path_agrees: bool           # telescoped form vs coefficient sum
    dual_path_window: Fraction | None


@dataclass(frozen=True)
class SpecialValueTrace:
    p: int
    m: int
    q: int
    entries: tuple[SpecialValueEntry, ...]


def dwork_special_value(cfg: FieldConfig, n_max: int,
                        direct_prec=None) -> SpecialValueTrace:
    """Trace the partial sums S_N of E(1) for N = 0..n_max.

    S_N is computed two ways: the telescoped closed form sigma^(q^N)/D_N at
    an adaptive cap wide enough to expose v(S_N - sigma), and the direct sum
    of the substitution-path coefficients of E at a uniform cap.  The two
    must agree on their common window; the recorded measurements come from
    the telescoped form.

    The gap and unit-equation valuations of the N = 0 entry are +infinity
    (S_0 is sigma itself); monotonicity statements start at N = 1.
    """
    q = cfg.q
    s = sigma(cfg)
    if direct_prec is None:
        direct_prec = dwork_gap_bound(q, min(n_max, 4) + 1) + 4
    direct_prec = max(Fraction(direct_prec), Fraction(40))

    ec = carlitz_exp(cfg, n_max, direct_prec)
    e_coeffs = compose_linear(ec, s, -s).coeffs[: n_max + 1]

    entries = []
    direct_sum = zero(cfg)
    for n in range(n_max + 1):
        direct_sum = direct_sum + e_coeffs[n]
        cap = dwork_gap_bound(q, n + 1) + 4
        mono = s ** (q ** n)
        tele = mono * carlitz_factorial(cfg, n).inv_to(cap - mono.valuation())
        agrees, window = compare_to_precision(tele, direct_sum)
        sum_val = tele.valuation()
        assert sum_val == Fraction(1, q - 1), "S_N must be a unit multiple of sigma"
        gap = (tele - s).val_bound()
        unit_gap = (tele ** (q - 1) + x(cfg)).val_bound()
        entries.append(SpecialValueEntry(
            index=n,
            sum_valuation=sum_val,
            gap=gap,
            unit_gap=unit_gap,
            dual_path_agrees=agrees,
            dual_path_window=window,
        ))
    return SpecialValueTrace(p=cfg.p, m=cfg.m, q=q, entries=tuple(entries))


# ---------------------------------------------------------------------------
# polylogarithms


def polylog(cfg: FieldConfig, n: int, order: int, prec) -> QLinearSeries:
    """l_n(t) = sum_{j>=1} t^(q^j) / [j]^n, truncated at ``order``.

    c_0 = 0 and every other coefficient has valuation exactly -n, so the
    series converges precisely on the open unit disk.
    """
    if n < 1:
        raise ValueError("polylog index must be >= 1")
    prec = Fraction(prec)
    coeffs = [zero(cfg)]
    for j in range(1, order + 1):
        coeffs.append((bracket(cfg, j) ** n).inv_to(prec))
    return QLinearSeries(cfg, coeffs)


def overconvergent_polylog(cfg: FieldConfig, n: int, order: int,
                           prec) -> QLinearSeries:
    """L_n(t) = l_n(t) - l_n(t^q) as an explicit coefficient series.

    c_1 = 1/[1]^n and c_j = 1/[j]^n - 1/[j-1]^n for j >= 2; agrees
    coefficientwise with substituting t^q into polylog (the verification
    layer checks exactly that).
    """
    if n < 1:
        raise ValueError("polylog index must be >= 1")
    prec = Fraction(prec)
    inv = {j: (bracket(cfg, j) ** n).inv_to(prec) for j in range(1, order + 1)}
    coeffs = [zero(cfg)]
    for j in range(1, order + 1):
        coeffs.append(inv[j] if j == 1 else inv[j] - inv[j - 1])
    return QLinearSeries(cfg, coeffs)


# ---------------------------------------------------------------------------
# Pochhammer symbols, parameter shift, hypergeometric series


def pochhammer_sequence(cfg: FieldConfig, a: GenSeries, n_max: int,
                        prec=None) -> list[GenSeries]:
    """[<a>_0, ..., <a>_{n_max}] via <a>_n = ((<a>_{n-1}) * ([n-1] - a))^q.

    <a>_n is the product of ([k] - a)^(q^(n-k)) over k = 0..n-1.  With
    ``prec`` set, the running product is re-truncated each step, which is
    sound (and keeps unit-parameter sizes bounded by the cap).
    """
    prec = None if prec is None else Fraction(prec)
    seq = [one(cfg)]
    for n in range(1, n_max + 1):
        value = (seq[-1] * (bracket(cfg, n - 1) - a)).q_power()
        if prec is not None:
            value = value.truncate(prec)
        seq.append(value)
    return seq


def pochhammer(cfg: FieldConfig, a: GenSeries, n: int, prec=None) -> GenSeries:
    """The twisted Pochhammer symbol <a>_n (<a>_0 = 1)."""
    return pochhammer_sequence(cfg, a, n, prec=prec)[n]


def t1_shift(cfg: FieldConfig, a: GenSeries) -> GenSeries:
    """T1(a) = (a - [1])^(1/q), the bracket analog of the unit shift.

    Sends [k] to [k-1]; preserves |a| = 1; generally raises the exponent
    lattice index by one.
    """
    return (a - bracket(cfg, 1)).q_root()


@dataclass(frozen=True)
class HypergeomParams:
    """Parameter triple (a, b; c) with the denominator admissibility rule.

    c may not collide with any bracket value: c - [k] must be nonzero to
    precision for every k up to the working order, and c may not equal the
    bracket limit -x.
    """

    a: GenSeries
    b: GenSeries
    c: GenSeries

    def validate(self, order: int) -> None:
        cfg = self.c.cfg
        for k in range(order + 1):
            if not (self.c - bracket(cfg, k)).has_terms():
                raise InadmissibleParameterError(
                    f"denominator parameter equals [{k}] to precision")
        if not (self.c + x(cfg)).has_terms():
            raise InadmissibleParameterError(
                "denominator parameter equals the bracket limit -x")

    def shifted(self) -> "HypergeomParams":
        cfg = self.a.cfg
        return HypergeomParams(
            a=t1_shift(cfg, self.a),
            b=t1_shift(cfg, self.b),
            c=t1_shift(cfg, self.c),
        )


def hypergeom(cfg: FieldConfig, params: HypergeomParams, order: int,
              prec) -> QLinearSeries:
    """F(a, b; c; t): coefficient n is <a>_n <b>_n / (<c>_n D_n), c_0 = 1.

    Coefficients are produced at absolute precision ``prec`` (for parameters
    of valuation >= 0).  Raises InadmissibleParameterError when <c>_n is zero
    to precision.
    """
    prec = Fraction(prec)
    params.validate(order)
    q = cfg.q
    v_top = Fraction(q ** order - 1, q - 1)
    work = prec + v_top
    pa = pochhammer_sequence(cfg, params.a, order, prec=work)
    pb = pochhammer_sequence(cfg, params.b, order, prec=work)
    pc = pochhammer_sequence(cfg, params.c, order, prec=work)
    coeffs = [one(cfg, prec=prec)]
    for n in range(1, order + 1):
        num = pa[n] * pb[n]
        if num.is_exact_zero():
            coeffs.append(num)
            continue
        v_n = Fraction(q ** n - 1, q - 1)
        try:
            inv_c = pc[n].inv_to(prec + v_n)
        except ZeroToPrecisionError as exc:
            raise InadmissibleParameterError(
                f"<c>_{n} is zero to precision") from exc
        inv_d = carlitz_factorial(cfg, n).inv_to(prec + v_n)
        coeffs.append((num * inv_c * inv_d).truncate(prec))
    return QLinearSeries(cfg, coeffs)


def hypergeom_valuations(cfg: FieldConfig, params: HypergeomParams,
                         order: int) -> list[Fraction]:
    """Exact coefficient valuations of F(a, b; c; t) for n = 0..order.

    Uses the multiplicativity of the valuation on leading terms, so only
    shallow truncations of the Pochhammer products are needed.  Assumes no
    numerator degeneration (valid for unit parameters).
    """
    params.validate(order)
    q = cfg.q
    # leading terms multiply without cancellation, so a shallow cap suffices
    pa = pochhammer_sequence(cfg, params.a, order, prec=3)
    pb = pochhammer_sequence(cfg, params.b, order, prec=3)
    pc = pochhammer_sequence(cfg, params.c, order, prec=3)
    out = [Fraction(0)]
    for n in range(1, order + 1):
        v = (pa[n].valuation() + pb[n].valuation() - pc[n].valuation()
             - Fraction(q ** n - 1, q - 1))
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# deterministic sampling of unit parameters


def random_unit(cfg: FieldConfig, rng: random.Random, degree: int) -> GenSeries:
    """A unit polynomial z_0 + z_1 x + ... + z_degree x^degree, z_i in F_q.

    The constant term is nonzero, so the valuation is exactly 0.  Drawing is
    deterministic for a given seeded ``rng``.
    """
    fq = cfg.fq_elements()
    terms = {0: fq[rng.randrange(1, len(fq))]}
    for i in range(1, degree + 1):
        c = fq[rng.randrange(len(fq))]
        if not c.is_zero():
            terms[i] = c
    from .series import from_terms
    return from_terms(cfg, terms)


def precision_budget(cfg: FieldConfig, target, nestings: int) -> Fraction:
    """Base precision needed so ``nestings`` q-th roots still end >= target."""
    return Fraction(target) * cfg.q ** nestings
