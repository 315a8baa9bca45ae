"""Truncated generalized Laurent series over F_{q^2} with rational exponents.

A GenSeries models one element of F_{q^2}((x^(1/((q-1)q^s)))): a finite sorted
collection of terms (rational exponent, nonzero coefficient) together with an
absolute precision cap ``prec``.  The series is known modulo terms of exponent
>= prec; ``prec = None`` means the series is exact (a generalized polynomial).

The valuation convention is v(x) = 1 and |z| = q^(-v(z)); all bounds in the
verification layer are statements about these exact rational valuations.
Nothing in this module uses floating point.

Precision propagation is part of each operation's contract:

* ``a + b``      prec = min(prec_a, prec_b)
* ``a * b``      prec = min(vfloor(a) + prec_b, vfloor(b) + prec_a), where a
                 series with no stored terms contributes its own prec as
                 vfloor (never +infinity unless it is exactly zero)
* ``a.inv()``    prec = prec_a - 2 v(a)
* ``a.q_power()`` multiplies every exponent and the cap by q (Frobenius is
                 exact in characteristic p); ``a.q_root()`` divides by q

Internally exponents are stored as integers scaled by a per-series common
denominator, so term arithmetic stays in plain integer arithmetic; public
accessors expose ``fractions.Fraction`` exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import (
    ConfigMismatchError,
    InvalidExponentError,
    ZeroToPrecisionError,
)
from .ff import FieldConfig, FieldElement

_MAX_NEWTON_ROUNDS = 512


def _emin(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    """min with None acting as +infinity."""
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


def _eadd(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    """Sum with None acting as +infinity."""
    if a is None or b is None:
        return None
    return a + b


def _as_prec(prec) -> Fraction | None:
    if prec is None:
        return None
    return Fraction(prec)


def format_exponent(r: Fraction) -> str:
    """Exact rational rendering, "num" or "num/den"."""
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True)
class ValBound:
    """A valuation measurement: exact value, or a lower bound at a cap.

    ``value is None`` encodes +infinity (the measured series is exactly
    zero); ``exact`` distinguishes v == value from v >= value.
    """

    value: Fraction | None
    exact: bool

    def at_least(self, bound: Fraction) -> bool:
        return self.value is None or self.value >= bound

    def __str__(self):
        if self.value is None:
            return "inf"
        prefix = "" if self.exact else ">="
        return prefix + format_exponent(self.value)


class GenSeries:
    """Immutable sparse series; see the module docstring for semantics."""

    __slots__ = ("cfg", "_den", "_tmap", "_prec")

    def __init__(self, *args, **kwargs):
        raise TypeError(
            "use from_terms / from_x_power / zero / one to build a GenSeries")

    # -- construction ----------------------------------------------------------

    @classmethod
    def _make(cls, cfg: FieldConfig, den: int, tmap: dict, prec) -> "GenSeries":
        self = object.__new__(cls)
        if prec is not None:
            cap = math.ceil(prec * den)
            tmap = {k: v for k, v in tmap.items() if v and k < cap}
        else:
            tmap = {k: v for k, v in tmap.items() if v}
        if tmap:
            g = den
            for k in tmap:
                g = gcd(g, k)
                if g == 1:
                    break
            if g > 1:
                den //= g
                tmap = {k // g: v for k, v in tmap.items()}
        else:
            den = 1
        self.cfg = cfg
        self._den = den
        self._tmap = tmap
        self._prec = prec
        return self

    # -- basic accessors -------------------------------------------------------

    @property
    def prec(self) -> Fraction | None:
        return self._prec

    @property
    def ram(self) -> int:
        """Minimal s >= 0 with every exponent denominator dividing (q-1)q^s."""
        q = self.cfg.q
        d = self._den // gcd(self._den, q - 1)
        s = 0
        while d > 1:
            g = gcd(d, q)
            if g == 1:
                raise InvalidExponentError(
                    f"denominator {self._den} not of the form "
                    f"(divisor of {q - 1}) * {q}^s")
            d //= g
            s += 1
        return s

    def terms(self) -> list[tuple[Fraction, FieldElement]]:
        """Sorted (exponent, coefficient) pairs, ascending exponent."""
        den = self._den
        return [(Fraction(k, den), FieldElement(self.cfg, self._tmap[k]))
                for k in sorted(self._tmap)]

    def num_terms(self) -> int:
        return len(self._tmap)

    def has_terms(self) -> bool:
        return bool(self._tmap)

    def is_exact_zero(self) -> bool:
        return not self._tmap and self._prec is None

    def valuation(self) -> Fraction:
        if not self._tmap:
            raise ZeroToPrecisionError(
                "valuation of a series with no stored terms is undefined")
        return Fraction(min(self._tmap), self._den)

    def val_floor(self) -> Fraction | None:
        """Valuation if any term is stored, else the cap (None = +infinity)."""
        if self._tmap:
            return Fraction(min(self._tmap), self._den)
        return self._prec

    def val_bound(self) -> ValBound:
        if self._tmap:
            return ValBound(self.valuation(), True)
        return ValBound(self._prec, self._prec is None)

    def leading_term(self) -> tuple[Fraction, FieldElement]:
        if not self._tmap:
            raise ZeroToPrecisionError("series has no stored terms")
        k = min(self._tmap)
        return Fraction(k, self._den), FieldElement(self.cfg, self._tmap[k])

    def coefficient(self, r) -> FieldElement:
        """Coefficient of x^r (zero if absent; r must lie below the cap)."""
        r = Fraction(r)
        if self._prec is not None and r >= self._prec:
            raise ZeroToPrecisionError(f"x^{r} is at or beyond the cap")
        num = r.numerator * (self._den // r.denominator) \
            if self._den % r.denominator == 0 else None
        if num is None:
            return self.cfg.zero()
        return FieldElement(self.cfg, self._tmap.get(num, 0))

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, GenSeries):
            raise TypeError(f"expected GenSeries, got {type(other).__name__}")
        if other.cfg != self.cfg:
            raise ConfigMismatchError(
                f"cannot combine series over {self.cfg!r} and {other.cfg!r}")

    def __add__(self, other):
        self._check(other)
        prec = _emin(self._prec, other._prec)
        den = lcm(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        out = {k * fa: v for k, v in self._tmap.items()}
        add_val = self.cfg.add_val
        for k, v in other._tmap.items():
            key = k * fb
            cur = out.get(key)
            out[key] = v if cur is None else add_val(cur, v)
        return GenSeries._make(self.cfg, den, out, prec)

    def __neg__(self):
        neg_val = self.cfg.neg_val
        return GenSeries._make(
            self.cfg, self._den,
            {k: neg_val(v) for k, v in self._tmap.items()}, self._prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: FieldElement) -> "GenSeries":
        """Multiply by a field element (exact; a zero scalar gives exact zero)."""
        if not isinstance(c, FieldElement):
            raise TypeError("scale expects a FieldElement")
        if c.cfg != self.cfg:
            raise ConfigMismatchError("scalar from a different configuration")
        if c.val == 0:
            return GenSeries._make(self.cfg, 1, {}, None)
        mul_val = self.cfg.mul_val
        return GenSeries._make(
            self.cfg, self._den,
            {k: mul_val(v, c.val) for k, v in self._tmap.items()}, self._prec)

    def shift(self, r) -> "GenSeries":
        """Multiply by the exact monomial x^r."""
        r = Fraction(r)
        den = lcm(self._den, r.denominator)
        f = den // self._den
        off = r.numerator * (den // r.denominator)
        prec = None if self._prec is None else self._prec + r
        return GenSeries._make(
            self.cfg, den,
            {k * f + off: v for k, v in self._tmap.items()}, prec)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        if isinstance(other, int):
            return self.scale(self.cfg.from_int(other))
        self._check(other)
        prec = _emin(_eadd(self.val_floor(), other._prec),
                     _eadd(other.val_floor(), self._prec))
        den = lcm(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        ta = sorted((k * fa, v) for k, v in self._tmap.items())
        tb = sorted((k * fb, v) for k, v in other._tmap.items())
        if len(ta) > len(tb):
            ta, tb = tb, ta
        cap = None if prec is None else math.ceil(prec * den)
        out = {}
        mul_val = self.cfg.mul_val
        add_val = self.cfg.add_val
        b_lo = tb[0][0] if tb else 0
        for ea, ca in ta:
            if cap is not None and ea + b_lo >= cap:
                break
            for eb, cb in tb:
                e = ea + eb
                if cap is not None and e >= cap:
                    break
                cur = out.get(e)
                prod = mul_val(ca, cb)
                out[e] = prod if cur is None else add_val(cur, prod)
        return GenSeries._make(self.cfg, den, out, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other.inv())
        if isinstance(other, int):
            return self.scale(self.cfg.from_int(other).inv())
        self._check(other)
        return self * other.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("series powers must be integers")
        if e < 0:
            return self.inv() ** (-e)
        if e == 0:
            return one(self.cfg)
        if len(self._tmap) == 1:
            ((k, v),) = self._tmap.items()
            r = Fraction(k, self._den)
            prec = None if self._prec is None else (e - 1) * r + self._prec
            mono = GenSeries._make(
                self.cfg, self._den * 1, {k * e: self.cfg.pow_val(v, e)}, None)
            return mono.truncate(prec) if prec is not None else mono
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inv(self) -> "GenSeries":
        """Multiplicative inverse: prec drops to prec - 2 v(a).

        A series that is zero to its precision cannot be inverted.  An exact
        multi-term series has an infinite inverse expansion, so it must be
        truncated to a finite cap first; exact monomials invert exactly.
        """
        if not self._tmap:
            raise ZeroToPrecisionError("inverse of a series with no stored terms")
        v, lead = self.leading_term()
        if self._prec is None:
            if len(self._tmap) == 1:
                return GenSeries._make(
                    self.cfg, self._den,
                    {-min(self._tmap): self.cfg.inv_val(lead.val)}, None)
            raise ZeroToPrecisionError(
                "inverse of an exact multi-term series is infinite; "
                "truncate() to a finite precision first")
        rel = self._prec - v
        u = self.shift(-v).scale(lead.inv())  # 1 + higher terms, prec = rel
        s = one(self.cfg, prec=rel)
        unit = one(self.cfg)
        for _ in range(_MAX_NEWTON_ROUNDS):
            err = unit - u * s
            if not err._tmap:
                break
            s = (s + s * err).truncate(rel)
        else:  # pragma: no cover
            raise AssertionError("series inversion failed to converge")
        return s.shift(-v).scale(lead.inv())

    def inv_to(self, prec) -> "GenSeries":
        """Inverse computed to the absolute precision ``prec``."""
        prec = Fraction(prec)
        v = self.valuation()
        return self.truncate(prec + 2 * v).inv()

    def q_power(self) -> "GenSeries":
        """Frobenius: exponents and cap scale by q, coefficients by a -> a^q."""
        qpow = self.cfg.qpow_val
        q = self.cfg.q
        prec = None if self._prec is None else self._prec * q
        return GenSeries._make(
            self.cfg, self._den,
            {k * q: qpow(v) for k, v in self._tmap.items()}, prec)

    def q_root(self) -> "GenSeries":
        """Inverse Frobenius: exponents and cap divide by q."""
        qroot = self.cfg.qroot_val
        q = self.cfg.q
        prec = None if self._prec is None else self._prec / q
        return GenSeries._make(
            self.cfg, self._den * q,
            {k: qroot(v) for k, v in self._tmap.items()}, prec)

    def truncate(self, new_prec) -> "GenSeries":
        prec = _emin(self._prec, _as_prec(new_prec))
        return GenSeries._make(self.cfg, self._den, dict(self._tmap), prec)

    # -- comparison ------------------------------------------------------------

    def equal_to_precision(self, other) -> bool:
        equal, _ = compare_to_precision(self, other)
        return equal

    def __eq__(self, other):
        """Structural equality: same terms and the same precision cap."""
        if not isinstance(other, GenSeries):
            return NotImplemented
        return (self.cfg == other.cfg and self._den == other._den
                and self._tmap == other._tmap and self._prec == other._prec)

    __hash__ = None

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        """Bit-exact serializable form (see from_dict)."""
        den = self._den
        return {
            "p": self.cfg.p,
            "m": self.cfg.m,
            "terms": [[format_exponent(Fraction(k, den)), self._tmap[k]]
                      for k in sorted(self._tmap)],
            "prec": None if self._prec is None else format_exponent(self._prec),
            "ram": self.ram,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GenSeries":
        from .ff import field_config
        cfg = field_config(data["p"], data["m"])
        prec = None if data["prec"] is None else Fraction(data["prec"])
        mapping = {Fraction(e): cfg.element(c) for e, c in data["terms"]}
        return from_terms(cfg, mapping, prec=prec)

    # -- display ---------------------------------------------------------------

    def __str__(self):
        if not self._tmap:
            body = "0"
        else:
            parts = []
            one_val = 1
            minus_one = self.cfg.neg_val(1)
            for k in sorted(self._tmap, reverse=True):
                c = self._tmap[k]
                r = Fraction(k, self._den)
                if r == 0:
                    term = self.cfg.coeff_str(c)
                else:
                    e = format_exponent(r)
                    if r == 1:
                        xs = "x"
                    else:
                        xs = f"x^{e}" if "/" not in e and "-" not in e else f"x^({e})"
                    if c == one_val:
                        term = xs
                    elif c == minus_one and self.cfg.p != 2:
                        term = xs
                        parts.append(("-", term))
                        continue
                    else:
                        term = f"{self.cfg.coeff_str(c)}*{xs}"
                parts.append(("+", term))
            sign, first = parts[0]
            body = ("-" if sign == "-" else "") + first
            for sign, term in parts[1:]:
                body += f" {sign} {term}"
        if self._prec is not None:
            e = format_exponent(self._prec)
            xs = f"x^{e}" if "/" not in e and "-" not in e else f"x^({e})"
            body += f" + O({xs})"
        return body

    def __repr__(self):
        return f"GenSeries({self})"


# ---------------------------------------------------------------------------
# constructors

def from_terms(cfg: FieldConfig, mapping: dict, prec=None) -> GenSeries:
    """Build a series from {exponent: coefficient}.

    Exponents may be ints or Fractions; coefficients may be FieldElements or
    ints (ints are embedded into F_p).  Exponent denominators must fit the
    (q-1)q^s lattice.
    """
    prec = _as_prec(prec)
    den = 1
    items = []
    for e, c in mapping.items():
        e = Fraction(e)
        if isinstance(c, int):
            c = cfg.from_int(c)
        elif not isinstance(c, FieldElement) or c.cfg != cfg:
            raise ConfigMismatchError("coefficient from a different configuration")
        den = lcm(den, e.denominator)
        items.append((e, c.val))
    tmap = {}
    for e, v in items:
        key = e.numerator * (den // e.denominator)
        if key in tmap:
            v = cfg.add_val(tmap[key], v)
        tmap[key] = v
    s = GenSeries._make(cfg, den, tmap, prec)
    s.ram  # validates the exponent lattice
    return s


def zero(cfg: FieldConfig, prec=None) -> GenSeries:
    return GenSeries._make(cfg, 1, {}, _as_prec(prec))


def one(cfg: FieldConfig, prec=None) -> GenSeries:
    return GenSeries._make(cfg, 1, {0: 1}, _as_prec(prec))


def constant(cfg: FieldConfig, c: FieldElement, prec=None) -> GenSeries:
    return from_terms(cfg, {0: c}, prec=prec)


def from_x_power(cfg: FieldConfig, r, prec=None) -> GenSeries:
    """The monomial x^r."""
    return from_terms(cfg, {Fraction(r): cfg.one()}, prec=prec)


def x(cfg: FieldConfig, prec=None) -> GenSeries:
    return from_x_power(cfg, 1, prec=prec)


def sigma(cfg: FieldConfig, prec=None) -> GenSeries:
    """The canonical root of z^(q-1) = -x: sigma = c * x^(1/(q-1)).

    Its valuation is 1/(q-1); for p = 2 the unit constant is 1.
    """
    s = from_terms(cfg, {Fraction(1, cfg.q - 1): cfg.sigma_unit()}, prec=prec)
    if cfg.q > 2:
        check = s ** (cfg.q - 1)
        assert check.equal_to_precision(-x(cfg)), "sigma unit is wrong"
    return s


# ---------------------------------------------------------------------------
# comparison helpers

def compare_to_precision(a: GenSeries, b: GenSeries):
    """(equal, window): whether a == b modulo x^window (window None = exact)."""
    a._check(b)
    window = _emin(a._prec, b._prec)
    den = lcm(a._den, b._den)
    fa, fb = den // a._den, den // b._den
    cap = None if window is None else math.ceil(window * den)
    ta = {k * fa: v for k, v in a._tmap.items()
          if cap is None or k * fa < cap}
    tb = {k * fb: v for k, v in b._tmap.items()
          if cap is None or k * fb < cap}
    return ta == tb, window


def diff_measure(a: GenSeries, b: GenSeries) -> ValBound:
    """Valuation of a - b as a ValBound (exact, capped, or +infinity)."""
    return (a - b).val_bound()
