import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octodegree import (
    HEMPFLING_ZERO,
    DomainError,
    OctonionField,
    adjugate,
    catalog_get,
    cr_residual,
    fueter_V,
    fueter_Z,
    jacobian,
    parse_field,
)
from octodegree.fields import CATALOG, determinant, sphere_variety_axis_zeros, tau
from octodegree.octonion import basis, mul

REGULAR_SAMPLES = ["sum_squares(7)", "sum_squares(3)", "hempfling", "circle_variety", "sphere_variety(3,0.7)", "Z(5)", "V(1,1,0,0,0,0,0)"]


@pytest.mark.parametrize("text", REGULAR_SAMPLES)
def test_declared_regular_fields_are_regular(text, rng):
    f = parse_field(text)
    z = 0.8 * rng.normal(size=(20, 8))
    for side in ("left", "right"):
        assert np.abs(cr_residual(f, z, side)).max() < 1e-6


def test_left_module_counterexample():
    z = np.random.default_rng(1).normal(size=8)
    base = catalog_get("module_base")
    assert np.abs(cr_residual(base, z, "left").components).max() < 1e-8
    r = cr_residual(catalog_get("module_counterexample"), z, "left")
    assert np.allclose(r.components, 2 * basis(5), atol=1e-6)


def test_identity_is_not_regular():
    r = cr_residual(catalog_get("identity"), np.zeros(8))
    assert r.components[0] == pytest.approx(-6.0)


@pytest.mark.parametrize("name", sorted(set(CATALOG) - {"sum_squares", "sphere_variety", "constant", "Z", "V"}))
def test_analytic_jacobians_match_differences(name, rng):
    f = catalog_get(name)
    z = rng.normal(size=(4, 8))
    assert np.allclose(jacobian(f, z), jacobian(f, z, analytic=False), atol=1e-6)


@pytest.mark.parametrize("text", ["sum_squares(4)", "sphere_variety(2,1)", "V(2,0,1,0,0,0,0)", "Z(1)*e3 + 2", "constant(1,2,3,4,5,6,7,8)"])
def test_parsed_jacobians_match_differences(text, rng):
    f = parse_field(text)
    z = rng.normal(size=(3, 8))
    assert np.allclose(jacobian(f, z), jacobian(f, z, analytic=False), atol=1e-6)


def test_hempfling_vanishes_at_all_ones():
    f = catalog_get("hempfling")
    assert np.allclose(f(HEMPFLING_ZERO), 0.0)


def test_hempfling_jacobian_at_its_zero():
    j = jacobian(catalog_get("hempfling"), HEMPFLING_ZERO)
    expected = np.diag([1.0, -1, -1, -1, -1, -1, -1, -1]) @ (np.ones((8, 8)) - np.eye(8))
    assert np.array_equal(j, expected)
    assert determinant(j) == pytest.approx(7.0)


def test_fueter_basics(rng):
    z = rng.normal(size=8)
    assert np.allclose(fueter_V(tau(3), z).components, fueter_Z(3, z).components)
    assert np.allclose(fueter_V((0,) * 7, z).components, basis(0))
    z1, z2 = fueter_Z(1, z).components, fueter_Z(2, z).components
    v = fueter_V((1, 1, 0, 0, 0, 0, 0), z).components
    assert np.allclose(v, 0.5 * (mul(z1, z2) + mul(z2, z1)))
    assert np.allclose(fueter_V((2, 0, 0, 0, 0, 0, 0), z).components, mul(z1, z1))


def test_fueter_rejects_bad_index():
    with pytest.raises(DomainError):
        fueter_Z(0, np.zeros(8))
    with pytest.raises(DomainError):
        fueter_V((1, 2), np.zeros(8))


def test_sum_squares_matches_fueter_sum(rng):
    z = rng.normal(size=8)
    f = catalog_get("sum_squares", (7,))
    expected = sum(mul(fueter_Z(i, z).components, fueter_Z(i, z).components) for i in range(1, 8))
    assert np.allclose(f(z), expected)


def test_sphere_variety_zero_set(rng):
    f = catalog_get("sphere_variety", (2, 1.0))
    theta = rng.uniform(0, 2 * np.pi, size=16)
    pts = np.zeros((16, 8))
    pts[:, 1], pts[:, 2] = np.cos(theta), np.sin(theta)
    assert np.allclose(f.evaluate(pts), 0.0, atol=1e-14)
    for x0 in sphere_variety_axis_zeros(2, 1.0):
        assert np.linalg.norm(f(x0 * basis(0))) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_adjugate_identity(seed, rank):
    g = np.random.default_rng(seed)
    m = g.normal(size=(8, rank)) @ g.normal(size=(rank, 8)) if rank < 8 else g.normal(size=(8, 8))
    adj = adjugate(m)
    assert np.allclose(adj @ m, np.linalg.det(m) * np.eye(8), atol=1e-9 * max(1.0, np.abs(m).max() ** 8))


def test_adjugate_of_rank_seven_matches_cofactors(rng):
    m = rng.normal(size=(8, 8))
    m[:, 7] = m[:, :7] @ rng.normal(size=7)
    adj = adjugate(m)
    cof = np.array([[(-1) ** (i + j) * np.linalg.det(np.delete(np.delete(m, i, 0), j, 1)) for j in range(8)] for i in range(8)])
    assert np.allclose(adj, cof.T, atol=1e-10)
    assert np.abs(adj).max() > 1e-3


def test_adjugate_batched_and_validated(rng):
    m = rng.normal(size=(2, 3, 8, 8))
    adj = adjugate(m)
    assert adj.shape == m.shape
    assert np.allclose(adj[1, 2] @ m[1, 2], np.linalg.det(m[1, 2]) * np.eye(8), atol=1e-9)
    with pytest.raises(DomainError):
        adjugate(np.ones((3, 4)))


def test_field_arithmetic(rng):
    z = rng.normal(size=8)
    f, g = catalog_get("Z", (1,)), catalog_get("Z", (2,))
    h = 2.0 * f - g + 1.0
    assert np.allclose(h(z), 2 * fueter_Z(1, z).components - fueter_Z(2, z).components + basis(0))
    assert h.regularity == "both"
    assert f.times(basis(3)).regularity == "none"


@pytest.mark.parametrize(
    "text",
    ["hempfling", "hempfling()", "identity", "sum_squares(7) + 0.01*Z(1)", "(Z(1) - Z(2)*e4)*e3", "-Z(3) + 0.5*e_2", "sphere_variety(2, 1.0)"],
)
def test_parse_field_accepts(text):
    assert isinstance(parse_field(text), OctonionField)


def test_parse_module_counterexample_on_imaginary_points(rng):
    # Z_i and x_i agree when x0 = 0
    z = rng.normal(size=(5, 8))
    z[:, 0] = 0
    parsed = parse_field("(Z(1) - Z(2)*e4)*e3").evaluate(z)
    assert np.allclose(parsed, catalog_get("module_counterexample").evaluate(z))


@pytest.mark.parametrize("text", ["bogus(1)", "sum_squares(9)", "sum_squares(", "Z(1) +", "sphere_variety(2,-1)", "constant(1,2)", "3 $ 4"])
def test_parse_field_rejects(text):
    with pytest.raises(DomainError):
        parse_field(text)


def test_unknown_name_lists_catalog():
    with pytest.raises(DomainError, match="hempfling"):
        catalog_get("nope")
