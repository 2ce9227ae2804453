import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from octodegree import DomainError, Octonion, associator, conjugate, inverse, multiply, octonion_norm
from octodegree.octonion import REFERENCE_TABLE, assoc, basis, conj, inner, mul, norm, table_entries, verify_table

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
octs = arrays(np.float64, 8, elements=finite)


def test_reference_table_is_reproduced():
    verify_table()
    got = {(i, j): s for i, j, s in table_entries()}
    for i, row in enumerate(REFERENCE_TABLE, start=1):
        for j, token in enumerate(row, start=1):
            assert got[(i, j)] == token


def test_units_square_to_minus_one():
    for i in range(1, 8):
        assert np.array_equal(mul(basis(i), basis(i)), -basis(0))


def test_basis_rejects_bad_index():
    with pytest.raises(ValueError):
        basis(8)


@settings(max_examples=200, deadline=None)
@given(octs, octs)
def test_norm_is_multiplicative(a, b):
    scale = max(1.0, norm(a) * norm(b))
    assert abs(norm(mul(a, b)) - norm(a) * norm(b)) <= 1e-12 * scale


@settings(max_examples=200, deadline=None)
@given(octs, octs)
def test_alternative_laws(a, b):
    scale = max(1.0, norm(a) ** 2 * norm(b))
    assert np.allclose(assoc(a, a, b), 0, atol=1e-12 * scale)
    assert np.allclose(assoc(a, b, b), 0, atol=1e-12 * max(1.0, norm(a) * norm(b) ** 2))
    assert np.allclose(assoc(a, b, a), 0, atol=1e-12 * scale)


@settings(max_examples=100, deadline=None)
@given(octs, octs)
def test_conjugation_reverses_products(a, b):
    assert np.allclose(conj(mul(a, b)), mul(conj(b), conj(a)), atol=1e-12 * max(1.0, norm(a) * norm(b)))


def test_associativity_fails_somewhere():
    worst = max(
        associator(Octonion.unit(i), Octonion.unit(j), Octonion.unit(k)).norm()
        for i in range(1, 8)
        for j in range(1, 8)
        for k in range(1, 8)
    )
    assert worst == pytest.approx(2.0)


def test_inner_and_conjugate(rng):
    a, b = rng.normal(size=(2, 8))
    assert inner(a, b) == pytest.approx(mul(a, conj(b))[0])
    assert np.array_equal(conjugate(a), conj(a))


def test_octonion_class_roundtrip(rng):
    a, b = (Octonion(v) for v in rng.normal(size=(2, 8)))
    assert isinstance(a * b, Octonion)
    assert (a * b).isclose(Octonion(mul(a.components, b.components)))
    assert (a * a.inverse()).isclose(Octonion(1.0), atol=1e-12)
    assert (a / 2).isclose(0.5 * a)
    assert (2 * a - a).isclose(a)
    assert a.real == a.components[0]
    assert octonion_norm(a) == pytest.approx(a.norm())


def test_multiply_broadcasts(rng):
    a = rng.normal(size=(5, 8))
    b = rng.normal(size=8)
    out = multiply(a, b)
    assert out.shape == (5, 8)
    assert np.allclose(out[2], mul(a[2], b))


def test_inverse_of_zero_is_rejected():
    with pytest.raises(DomainError):
        inverse(np.zeros(8))


def test_inverse_is_two_sided(rng):
    a = rng.normal(size=8)
    ai = inverse(a)
    assert np.allclose(mul(a, ai), basis(0))
    assert np.allclose(mul(ai, a), basis(0))


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        Octonion(np.ones(7))
