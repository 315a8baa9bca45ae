"""Exact arithmetic in the quadratic tower F_p < F_q < F_{q^2}, q = p^m.

Every series coefficient in this package lives in F_{q^2}.  The quadratic
extension (rather than F_q itself) is hard-wired because the unit constant c
with c^(q-1) = -1 need not exist in F_q, while 2(q-1) always divides q^2 - 1,
so F_{q^2} suffices for every q.

Elements are encoded as integers in [0, q^2): the residue-class polynomial
sum(d_i * y^i) with digits d_i in F_p is encoded as sum(d_i * p^i), where y is
a root of the canonical modulus.  The modulus is the irreducible monic
polynomial of degree 2m over F_p with the smallest integer encoding, and the
canonical generator g is the primitive element with the smallest encoding.
Both rules are fixed so that reports are reproducible across runs and
machines.

Multiplication, inversion and powering go through discrete-log (Zech) tables;
addition uses the Zech table as well, so every field operation is a handful
of exact integer table lookups.
"""

from __future__ import annotations

import functools
from math import gcd

from .errors import ConfigMismatchError, UnsupportedFieldError

_MAX_ORDER = 1 << 16  # largest supported q^2; plenty for desk-scale q


# ---------------------------------------------------------------------------
# dense polynomials over F_p, little-endian coefficient lists (table building
# only; never used on the hot path)

def _pnorm(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _pnorm(out)


def _pmod(f, mod, p):
    f = list(f)
    dm = len(mod) - 1
    lead_inv = pow(mod[-1], p - 2, p)
    while len(f) - 1 >= dm and f:
        shift = len(f) - 1 - dm
        factor = (f[-1] * lead_inv) % p
        for i, c in enumerate(mod):
            f[shift + i] = (f[shift + i] - factor * c) % p
        _pnorm(f)
    return f


def _pmulmod(f, g, mod, p):
    return _pmod(_pmul(f, g, p), mod, p)


def _ppowmod(f, e, mod, p):
    result = [1]
    base = _pmod(f, mod, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _psub(f, g, p):
    n = max(len(f), len(g))
    f = f + [0] * (n - len(f))
    g = g + [0] * (n - len(g))
    return _pnorm([(a - b) % p for a, b in zip(f, g)])


def _pgcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _is_irreducible(f, p):
    """Monic f over F_p: x^(p^d) == x mod f and gcd(x^(p^(d/r)) - x, f) = 1."""
    d = len(f) - 1
    if d < 1:
        return False
    checkpoints = {d // r for r in _prime_factors(d)}
    x = [0, 1]
    t = x
    for k in range(1, d + 1):
        t = _ppowmod(t, p, f, p)
        if k in checkpoints:
            g = _pgcd(f, _psub(t, x, p), p)
            if len(g) - 1 > 0:
                return False
    return t == x


# ---------------------------------------------------------------------------

class FieldConfig:
    """Immutable description of one tower F_p < F_q < F_{q^2} plus its tables.

    Use :func:`field_config` to obtain instances; it caches per (p, m) so the
    (cheap, deterministic) table build happens once per process.
    """

    def __init__(self, p: int, m: int):
        if not _is_prime(p):
            raise UnsupportedFieldError(f"p = {p} is not prime")
        if m < 1:
            raise UnsupportedFieldError(f"m = {m} must be >= 1")
        q = p ** m
        qq = q * q
        if qq > _MAX_ORDER:
            raise UnsupportedFieldError(
                f"q^2 = {qq} exceeds the table limit {_MAX_ORDER}")
        self.p = p
        self.m = m
        self.q = q
        self.order = qq
        self.modulus = self._find_modulus()
        self._build_tables()
        self._fq_vals = tuple(v for v in range(qq)
                              if self.qpow_val(v) == v)
        assert len(self._fq_vals) == q

    # -- construction helpers ------------------------------------------------

    def _find_modulus(self):
        p, d = self.p, 2 * self.m
        for enc in range(p ** d):
            f = self._decode_poly(enc, d) + [1]
            if _is_irreducible(f, p):
                return tuple(f)
        raise UnsupportedFieldError("no irreducible modulus found")  # unreachable

    def _decode_poly(self, enc, length):
        digits = []
        for _ in range(length):
            enc, r = divmod(enc, self.p)
            digits.append(r)
        return digits

    def _encode_poly(self, f):
        enc = 0
        for c in reversed(f):
            enc = enc * self.p + c
        return enc

    def _build_tables(self):
        p, qq = self.p, self.order
        mod = list(self.modulus)
        deg = len(mod) - 1

        def val_mul(a, b):
            fa = self._decode_poly(a, deg)
            fb = self._decode_poly(b, deg)
            return self._encode_poly(_pmulmod(fa, fb, mod, p))

        def val_order(a):
            n, acc = 1, a
            while acc != 1:
                acc = val_mul(acc, a)
                n += 1
            return n

        gen = None
        for cand in range(2, qq):
            if val_order(cand) == qq - 1:
                gen = cand
                break
        assert gen is not None
        self.generator_val = gen

        exp = [0] * (qq - 1)
        exp[0] = 1
        for k in range(1, qq - 1):
            exp[k] = val_mul(exp[k - 1], gen)
        log = [-1] * qq
        for k, v in enumerate(exp):
            log[v] = k
        # zech[k] = log(1 + g^k); -1 marks 1 + g^k = 0
        one_digits = self._decode_poly(1, deg)
        zech = [-1] * (qq - 1)
        for k in range(qq - 1):
            s = [(a + b) % p for a, b in
                 zip(one_digits, self._decode_poly(exp[k], deg))]
            v = self._encode_poly(s)
            zech[k] = log[v] if v else -1
        self._exp = exp
        self._log = log
        self._zech = zech
        if p == 2:
            self._neg = list(range(qq))
        else:
            minus_one = p - 1  # the scalar p-1, encoded as itself
            self._neg = [self.mul_val(v, minus_one) for v in range(qq)]

    # -- raw integer-encoded operations (hot path) ----------------------------

    def add_val(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % (self.order - 1)]
        if z < 0:
            return 0
        return self._exp[(la + z) % (self.order - 1)]

    def neg_val(self, a: int) -> int:
        return self._neg[a]

    def sub_val(self, a: int, b: int) -> int:
        return self.add_val(a, self._neg[b])

    def mul_val(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv_val(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return self._exp[-self._log[a] % (self.order - 1)]

    def pow_val(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero field element")
            return 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def qpow_val(self, a: int) -> int:
        return self.pow_val(a, self.q)

    # a^(q^2) = a, so the q-power map is an involution and its own inverse.
    qroot_val = qpow_val

    # -- element construction --------------------------------------------------

    def element(self, val: int) -> "FieldElement":
        if not 0 <= val < self.order:
            raise ValueError(f"encoding {val} out of range [0, {self.order})")
        return FieldElement(self, val)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def from_int(self, k: int) -> "FieldElement":
        """Embed an integer as an element of the prime field F_p."""
        return FieldElement(self, k % self.p)

    def gen(self) -> "FieldElement":
        return FieldElement(self, self.generator_val)

    def sigma_unit(self) -> "FieldElement":
        """The canonical unit c with c^(q-1) = -1.

        For p = 2 this is 1; otherwise c = g^((q+1)/2), whose (q-1)-th power
        is g^((q^2-1)/2), the unique element of order 2.
        """
        if self.p == 2:
            return self.one()
        return self.gen() ** ((self.q + 1) // 2)

    def fq_elements(self) -> tuple["FieldElement", ...]:
        """All elements of the subfield F_q, sorted by encoding."""
        return tuple(FieldElement(self, v) for v in self._fq_vals)

    def elements(self):
        return (FieldElement(self, v) for v in range(self.order))

    def coeff_str(self, val: int) -> str:
        """Short display form: prime-field values as digits, others as g^k."""
        if val < self.p:
            return str(val)
        return f"g^{self._log[val]}"

    # -- identity --------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldConfig)
                and self.p == other.p and self.m == other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def __repr__(self):
        return f"FieldConfig(p={self.p}, m={self.m}, q={self.q})"


@functools.lru_cache(maxsize=None)
def field_config(p: int, m: int = 1) -> FieldConfig:
    """Cached constructor; the canonical way to obtain a FieldConfig."""
    return FieldConfig(p, m)


class FieldElement:
    """One element of F_{q^2}, identified by its integer encoding.

    Values are immutable; arithmetic returns new elements.  Mixing elements
    from different configurations raises ConfigMismatchError.
    """

    __slots__ = ("cfg", "val")

    def __init__(self, cfg: FieldConfig, val: int):
        self.cfg = cfg
        self.val = val

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.cfg != self.cfg:
            raise ConfigMismatchError(
                f"cannot combine {self.cfg!r} with {other.cfg!r}")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.cfg, self.cfg.add_val(self.val, other.val))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.cfg, self.cfg.sub_val(self.val, other.val))

    def __neg__(self):
        return FieldElement(self.cfg, self.cfg.neg_val(self.val))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.cfg, self.cfg.mul_val(self.val, other.val))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.cfg,
                            self.cfg.mul_val(self.val, self.cfg.inv_val(other.val)))

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(self.cfg,
                                self.cfg.pow_val(self.cfg.inv_val(self.val), -e))
        return FieldElement(self.cfg, self.cfg.pow_val(self.val, e))

    def inv(self) -> "FieldElement":
        return FieldElement(self.cfg, self.cfg.inv_val(self.val))

    def q_power(self) -> "FieldElement":
        """The q-power Frobenius, the nontrivial automorphism of F_{q^2}/F_q."""
        return FieldElement(self.cfg, self.cfg.qpow_val(self.val))

    def q_root(self) -> "FieldElement":
        """The unique b with b^q = a; coincides with q_power on F_{q^2}."""
        return FieldElement(self.cfg, self.cfg.qroot_val(self.val))

    def is_zero(self) -> bool:
        return self.val == 0

    def in_base_field(self) -> bool:
        """Whether the element lies in F_q (fixed by the q-power map)."""
        return self.cfg.qpow_val(self.val) == self.val

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and self.cfg == other.cfg and self.val == other.val)

    def __hash__(self):
        return hash((self.cfg.p, self.cfg.m, self.val))

    def __repr__(self):
        return f"GF({self.cfg.order}):{self.cfg.coeff_str(self.val)}"
