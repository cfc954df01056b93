from fractions import Fraction

import pytest

from krawpv.jets import Jet2, JetDivisionError


def F(a, b=1):
    return Fraction(a, b)


def test_variable_jet():
    t = Jet2.variable(F(3))
    assert (t.v, t.d1, t.d2) == (F(3), F(1), F(0))


def test_product_rule():
    # (t^2)' = 2t, (t^2)'' = 2 at t = 5
    t = Jet2.variable(F(5))
    sq = t * t
    assert (sq.v, sq.d1, sq.d2) == (F(25), F(10), F(2))


def test_quotient_rule():
    # (1/t)' = -1/t^2, (1/t)'' = 2/t^3 at t = 2
    t = Jet2.variable(F(2))
    inv = 1 / t
    assert (inv.v, inv.d1, inv.d2) == (F(1, 2), F(-1, 4), F(1, 4))


def test_division_by_zero_value_slot():
    z = Jet2(F(0), F(1), F(0))
    with pytest.raises(JetDivisionError):
        _ = 1 / z


def test_power_matches_repeated_product():
    j = Jet2(F(2), F(3), F(-1))
    assert j**3 == j * j * j
    assert j**0 == Jet2(F(1), F(0), F(0))


def test_scalar_mixing():
    j = Jet2(F(1), F(2), F(3))
    assert 2 * j == Jet2(F(2), F(4), F(6))
    assert j - 1 == Jet2(F(0), F(2), F(3))
    assert 1 - j == Jet2(F(0), F(-2), F(-3))


def test_composition_chain_rule():
    # f(t) = (t + 1)^2 / t at t = 1: f = 4, f' = 2*2/1 - 4 = 0, check exactly
    t = Jet2.variable(F(1))
    f = (t + 1) ** 2 / t
    assert f.v == F(4)
    assert f.d1 == F(0)
    # f'' = d/dt [2(t+1)/t - (t+1)^2/t^2] = 2/t - 2(t+1)/t^2 - ... = 2 at t=1
    assert f.d2 == F(2)
