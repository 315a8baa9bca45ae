"""Tests for the truncated generalized Laurent series kernel."""

import json
import random
from fractions import Fraction

import pytest

from carlitzlab.errors import (
    ConfigMismatchError,
    InvalidExponentError,
    ZeroToPrecisionError,
)
from carlitzlab.ff import field_config
from carlitzlab.series import (
    GenSeries,
    ValBound,
    compare_to_precision,
    constant,
    diff_measure,
    from_terms,
    from_x_power,
    one,
    sigma,
    x,
    zero,
)

from oracles import dict_of, naive_mul, naive_pow, naive_qpow

F9 = field_config(3)
F4 = field_config(2)

CONFIGS = [field_config(2), field_config(3), field_config(2, 2), field_config(5)]


def random_series(cfg, rng, *, nterms=(0, 5), span=(-6, 18), den=1, prec=None):
    terms = {}
    for _ in range(rng.randint(*nterms)):
        e = Fraction(rng.randint(*span), den)
        terms[e] = cfg.element(rng.randrange(1, cfg.order))
    return from_terms(cfg, terms, prec=prec)


# -- constructors ------------------------------------------------------------


def test_monomial_and_identities():
    s = from_x_power(F9, 1)
    assert s.valuation() == 1
    assert s.terms() == [(Fraction(1), F9.one())]
    z = zero(F9)
    assert not z.has_terms()
    with pytest.raises(ZeroToPrecisionError):
        z.valuation()
    u = one(F9)
    assert u.valuation() == 0
    assert u.terms() == [(Fraction(0), F9.one())]


def test_lattice_validation():
    with pytest.raises(InvalidExponentError):
        from_x_power(F9, Fraction(1, 5))
    # q = 3: denominators divide 2 * 3^s
    from_x_power(F9, Fraction(1, 18))
    from_x_power(F4, Fraction(3, 8))  # q = 2: powers of two


# -- add ----------------------------------------------------------------------


def test_add_cancellation():
    s = x(F9) + (-x(F9))
    assert not s.has_terms()
    assert s.prec is None


def test_add_bracket_identity_q3():
    # (x^3 - x) + x has valuation q = 3
    d1 = from_terms(F9, {3: 1, 1: -1})
    s = d1 + x(F9)
    assert s.terms() == [(Fraction(3), F9.one())]
    assert s.valuation() == 3


def test_add_prec_contract():
    a = from_x_power(F9, 2, prec=10)
    b = from_x_power(F9, 3, prec=7)
    assert (a + b).prec == 7
    assert (a + b.truncate(5)).prec == 5


# -- mul ----------------------------------------------------------------------


def test_mul_sparse_example_q3():
    b2 = from_terms(F9, {9: 1, 1: -1})          # x^9 - x
    b1_cubed = from_terms(F9, {9: 1, 3: -1})    # x^9 - x^3
    prod = b2 * b1_cubed
    expect = from_terms(F9, {18: 1, 12: -1, 10: -1, 4: 1})
    assert prod == expect
    assert dict_of(prod) == naive_mul(F9, dict_of(b2), dict_of(b1_cubed))


def test_mul_identity_and_valuations():
    rng = random.Random("series-mul")
    for cfg in CONFIGS:
        for _ in range(200):
            a = random_series(cfg, rng, nterms=(1, 5))
            b = random_series(cfg, rng, nterms=(1, 5))
            assert (a * one(cfg)) == a
            p = a * b
            assert p.valuation() == a.valuation() + b.valuation()
            assert dict_of(p) == naive_mul(cfg, dict_of(a), dict_of(b))


def test_mul_prec_rule():
    a = from_terms(F9, {2: 1}, prec=9)   # v = 2
    b = from_terms(F9, {-1: 1}, prec=5)  # v = -1
    p = a * b
    assert p.prec == min(2 + 5, -1 + 9)
    # a zero-to-precision operand contributes its cap as the valuation floor
    zp = zero(F9, prec=4)
    p2 = zp * b
    assert not p2.has_terms()
    assert p2.prec == min(4 + 5, -1 + 4)
    # exact zero absorbs everything exactly
    p3 = zero(F9) * b
    assert p3.is_exact_zero()


# -- inv ----------------------------------------------------------------------


def test_inv_monomial():
    s = x(F9).inv()
    assert s.terms() == [(Fraction(-1), F9.one())]
    assert s.prec is None


def test_inv_carlitz_factorial_valuation():
    d2 = from_terms(F9, {18: 1, 12: -1, 10: -1, 4: 1})
    iv = d2.inv_to(20)
    assert iv.valuation() == -4
    assert iv.prec == 20
    assert (d2 * iv).equal_to_precision(one(F9))


def test_inv_round_trip_random():
    rng = random.Random("series-inv")
    for cfg in CONFIGS:
        for _ in range(100):
            a = random_series(cfg, rng, nterms=(1, 6), prec=30)
            iv = a.inv()
            assert iv.prec == 30 - 2 * a.valuation()
            prod = a * iv
            eq, window = compare_to_precision(prod, one(cfg))
            assert eq and window > 0


def test_inv_errors():
    with pytest.raises(ZeroToPrecisionError):
        zero(F9, prec=5).inv()
    with pytest.raises(ZeroToPrecisionError):
        zero(F9).inv()
    with pytest.raises(ZeroToPrecisionError):
        (x(F9) + one(F9)).inv()  # exact multi-term needs a cap


# -- Frobenius ----------------------------------------------------------------


def test_q_power_example_q3():
    d1 = from_terms(F9, {3: 1, 1: -1})
    qp = d1.q_power()
    assert qp == from_terms(F9, {9: 1, 3: -1})
    # agreement with cubing by repeated multiplication
    assert dict_of(qp) == naive_pow(F9, dict_of(d1), 3)


def test_q_power_is_ring_homomorphism():
    rng = random.Random("series-frob")
    for cfg in CONFIGS:
        for _ in range(200):
            a = random_series(cfg, rng, nterms=(0, 4))
            b = random_series(cfg, rng, nterms=(0, 4))
            assert (a * b).q_power() == a.q_power() * b.q_power()
            assert (a + b).q_power() == a.q_power() + b.q_power()
            assert dict_of(a.q_power()) == naive_qpow(cfg, dict_of(a))


def test_q_root_examples():
    assert from_x_power(F9, 3).q_root() == x(F9)
    s = from_terms(F9, {1: 1, 9: -1})  # x - x^9
    r = s.q_root()
    assert r == from_terms(F9, {Fraction(1, 3): 1, 3: -1})
    assert r ** 3 == s
    assert r.ram == 1
    assert zero(F9).q_root().is_exact_zero()


def test_q_root_q_power_inverse_random():
    rng = random.Random("series-qroot")
    for cfg in CONFIGS:
        for _ in range(200):
            a = random_series(cfg, rng, nterms=(0, 5), den=cfg.q - 1 if cfg.q > 2 else 1)
            assert a.q_power().q_root() == a
            assert a.q_root().q_power() == a


def test_prec_scaling_under_frobenius():
    a = from_terms(F9, {1: 1}, prec=10)
    assert a.q_power().prec == 30
    assert a.q_root().prec == Fraction(10, 3)


# -- sigma ----------------------------------------------------------------------


@pytest.mark.parametrize("cfg", CONFIGS)
def test_sigma(cfg):
    s = sigma(cfg)
    assert s.valuation() == Fraction(1, cfg.q - 1)
    assert (s ** (cfg.q - 1)) == -x(cfg)
    if cfg.p == 2:
        assert s == from_x_power(cfg, Fraction(1, cfg.q - 1))


# -- valuation / equality / truncate -------------------------------------------


def test_valuation_examples():
    assert from_terms(F9, {3: 1, 1: -1}).valuation() == 1
    for cfg in CONFIGS:
        for n in range(1, 9):
            bracket = from_terms(cfg, {cfg.q ** n: 1, 1: -1})
            assert bracket.valuation() == 1


def test_truncate_and_equality():
    a = from_terms(F9, {1: 1, 4: 2, 7: 1})
    t = a.truncate(5)
    assert t.prec == 5
    assert a.equal_to_precision(t)
    assert t == from_terms(F9, {1: 1, 4: 2}, prec=5)
    # truncation cannot raise precision
    assert t.truncate(100).prec == 5


def test_val_bound():
    assert from_terms(F9, {2: 1}).val_bound() == ValBound(Fraction(2), True)
    assert zero(F9, prec=7).val_bound() == ValBound(Fraction(7), False)
    assert zero(F9).val_bound() == ValBound(None, True)
    assert diff_measure(x(F9), x(F9)) == ValBound(None, True)


# -- ultrametric properties ------------------------------------------------------


def test_ultrametric_random():
    rng = random.Random("series-ultrametric")
    checked_equal_case = 0
    for cfg in CONFIGS:
        for _ in range(2500):
            a = random_series(cfg, rng, nterms=(1, 5))
            b = random_series(cfg, rng, nterms=(1, 5))
            s = a + b
            va, vb = a.valuation(), b.valuation()
            if s.has_terms():
                assert s.valuation() >= min(va, vb)
            if va != vb:
                checked_equal_case += 1
                assert s.valuation() == min(va, vb)
    assert checked_equal_case > 1000


def test_inv_negates_valuation_random():
    rng = random.Random("series-inv-val")
    for cfg in CONFIGS:
        for _ in range(100):
            a = random_series(cfg, rng, nterms=(1, 5), prec=25)
            assert a.inv().valuation() == -a.valuation()


# -- precision-contract perturbation ----------------------------------------------


def test_ops_ignore_terms_beyond_cap():
    """Perturbing an operand above its cap must not change any result."""
    rng = random.Random("series-perturb")
    for cfg in CONFIGS:
        for _ in range(2500):
            base = random_series(cfg, rng, nterms=(1, 5), span=(-4, 12))
            other = random_series(cfg, rng, nterms=(1, 5), span=(-4, 12))
            cap = rng.randint(5, 14)
            junk = from_terms(
                cfg, {cap + rng.randint(0, 3): cfg.element(rng.randrange(1, cfg.order))})
            a = base.truncate(cap)
            a_pert = (base + junk).truncate(cap)
            assert a == a_pert
            for op in ("add", "mul", "neg", "qpow"):
                if op == "add":
                    assert a + other == a_pert + other
                elif op == "mul":
                    assert a * other == a_pert * other
                elif op == "neg":
                    assert -a == -a_pert
                else:
                    assert a.q_power() == a_pert.q_power()
            if a.has_terms():
                assert a.inv() == a_pert.inv()


# -- serialization -----------------------------------------------------------------


def test_serialization_round_trip():
    cases = [
        from_terms(F9, {18: 1, 12: -1, 10: -1, 4: 1}),
        sigma(F9).truncate(Fraction(7, 2)),
        from_terms(F9, {Fraction(-1, 6): 2, Fraction(5, 3): 1}, prec=Fraction(11, 3)),
        zero(F9, prec=4),
        zero(F4),
        from_terms(F4, {Fraction(3, 4): field_config(2).gen()}),
    ]
    for s in cases:
        blob = json.dumps(s.to_dict(), sort_keys=True)
        back = GenSeries.from_dict(json.loads(blob))
        assert back == s
        assert json.dumps(back.to_dict(), sort_keys=True) == blob


def test_config_mismatch():
    with pytest.raises(ConfigMismatchError):
        x(F9) + x(F4)
    with pytest.raises(ConfigMismatchError):
        x(F9) * x(F4)


def test_str_rendering():
    d2 = from_terms(F9, {18: 1, 12: -1, 10: -1, 4: 1})
    assert str(d2) == "x^18 - x^12 - x^10 + x^4"
    assert str(from_terms(F9, {3: 1, 1: -1})) == "x^3 - x"
    assert str(zero(F9, prec=5)) == "0 + O(x^5)"
    assert str(sigma(F9)).endswith("x^(1/2)")
