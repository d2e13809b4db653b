"""Pushforward rules and the three basis-example models."""

from __future__ import annotations

from fractions import Fraction
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gysin.algebra import (
    BUNDLE,
    CLASSES,
    E,
    LAMBDA,
    SIGMA,
    X,
    Y,
    ZETA,
    DomainError,
    Universe,
    UniverseError,
    kappa,
    m,
)
from gysin.bundles import (
    DeclaredModel,
    FourManifoldModel,
    ModelError,
    ModelWarning,
    TrivialFamilyModel,
    TruncationError,
    example_models,
    formal_pushforward,
)

import oracles


# ---------------------------------------------------------------------------
# formal pushforward


def test_pushforward_defining_cases():
    ey = BUNDLE.el(E) * BUNDLE.el(Y)
    assert formal_pushforward(ey) == CLASSES.el(m(0, 1))
    assert formal_pushforward(BUNDLE.el(E, 2)) == CLASSES.el(kappa(1))
    assert formal_pushforward(BUNDLE.el(Y, 2)) == CLASSES.el(m(-1, 2))


def test_pushforward_drops_low_degrees():
    assert formal_pushforward(BUNDLE.one()).is_zero
    assert formal_pushforward(BUNDLE.el(E)).is_zero
    assert formal_pushforward(BUNDLE.el(Y)).is_zero


def test_pushforward_higher_cases():
    assert formal_pushforward(BUNDLE.el(E, 3)) == CLASSES.el(kappa(2))
    e2y3 = BUNDLE.el(E, 2) * BUNDLE.el(Y, 3)
    assert formal_pushforward(e2y3) == CLASSES.el(m(1, 3))


def test_pushforward_rejects_foreign_symbols():
    wide = Universe.of("wide", E, Y, X)
    bad = wide.el(X) * wide.el(E, 2)
    with pytest.raises(DomainError):
        formal_pushforward(bad)


_coeffs = st.fractions(
    min_value=Fraction(-5), max_value=Fraction(5), max_denominator=4
)
_ey_monomial = st.tuples(st.integers(0, 4), st.integers(0, 4))
_ey_poly = st.lists(st.tuples(_ey_monomial, _coeffs), max_size=4).map(
    lambda specs: sum(
        (
            coeff * BUNDLE.el(E, a) * BUNDLE.el(Y, b)
            for (a, b), coeff in specs
        ),
        BUNDLE.zero(),
    )
)


@settings(deadline=None)
@given(_ey_poly, _ey_poly)
def test_pushforward_linear(p, q):
    left = formal_pushforward(p + q)
    assert left == formal_pushforward(p) + formal_pushforward(q)
    assert formal_pushforward(3 * p) == 3 * formal_pushforward(p)


@settings(deadline=None)
@given(st.integers(0, 5), st.integers(0, 5))
def test_pushforward_degree_drop(a, b):
    mono = BUNDLE.el(E, a) * BUNDLE.el(Y, b)
    out = formal_pushforward(mono)
    if a + b <= 1:
        assert out.is_zero
    else:
        assert out.degrees() == [2 * (a + b) - 2]


# ---------------------------------------------------------------------------
# trivial family model


def test_structure_classes():
    fam = TrivialFamilyModel(2, 3)
    assert fam.euler_class == -2 * fam.universe.el(SIGMA)
    assert fam.line_class == 3 * fam.universe.el(SIGMA) + fam.universe.el(X)


def test_kappa1_restricts_to_zero():
    fam = TrivialFamilyModel(4, 1)
    assert fam.evaluate(CLASSES.el(kappa(1))).is_zero


def test_degree2_restrictions():
    fam = TrivialFamilyModel(3, 5)
    x = fam.universe.el(X)
    assert fam.evaluate(CLASSES.el(m(0, 1))) == (2 - 2 * 3) * x
    assert fam.evaluate(CLASSES.el(m(-1, 2))) == 2 * 5 * x
    assert fam.evaluate(CLASSES.el(LAMBDA)).is_zero
    assert fam.evaluate(CLASSES.el(ZETA)) == (1 - 3 - 5) * x


def test_derived_higher_restrictions():
    fam = TrivialFamilyModel(3, 2)
    x = fam.universe.el(X)
    assert fam.evaluate(CLASSES.el(m(0, 2))) == -4 * (x**2)
    assert fam.evaluate(CLASSES.el(m(-1, 3))) == 6 * (x**2)
    assert fam.evaluate(CLASSES.el(m(1, 1))).is_zero


@pytest.mark.parametrize("g", [2, 3, 7])
@pytest.mark.parametrize("k", [-3, 0, 1, 4])
def test_restrictions_match_binomial_oracle(g, k):
    fam = TrivialFamilyModel(g, k)
    for i in range(-1, 4):
        for j in range(1, 6):
            got = fam.evaluate(CLASSES.el(m(i, j)))
            want = oracles.binomial_restriction(g, k, i, j)
            got_dict = {}
            for mono, coeff in got.terms():
                exps = dict(mono)
                got_dict[exps.get(X, 0)] = coeff
            assert got_dict == want, (g, k, i, j)


def test_evaluate_multiplicative():
    fam = TrivialFamilyModel(3, 5)
    x = fam.universe.el(X)
    prod = CLASSES.el(m(0, 1)) * CLASSES.el(m(-1, 2))
    assert fam.evaluate(prod) == -40 * (x**2)


def test_evaluate_rejects_eta():
    from gysin.algebra import ETA

    fam = TrivialFamilyModel(2, 0)
    with pytest.raises(DomainError):
        fam.evaluate(CLASSES.el(ETA))


def test_truncation_overflow():
    fam = TrivialFamilyModel(2, 1, truncation=3)
    with pytest.raises(TruncationError):
        fam.evaluate(CLASSES.el(m(0, 5)))


def test_projection_formula_concrete():
    fam = TrivialFamilyModel(3, 2)
    x = fam.universe.el(X)
    sigma = fam.universe.el(SIGMA)
    w = 5 * sigma * x + 2 * x**2 + sigma
    base = 3 * x**2 - Fraction(1, 2) * x
    assert fam.pushforward(base * w) == base * fam.pushforward(w)


_MODEL = TrivialFamilyModel(3, 2, truncation=40)
_fiber_terms = st.tuples(st.integers(0, 6), st.integers(0, 1))
_fiber_poly = st.lists(st.tuples(_fiber_terms, _coeffs), max_size=4).map(
    lambda specs: sum(
        (
            coeff * _MODEL.universe.el(X, a) * _MODEL.universe.el(SIGMA, b)
            for (a, b), coeff in specs
        ),
        _MODEL.universe.zero(),
    )
)
_base_poly = st.lists(
    st.tuples(st.integers(0, 6), _coeffs), max_size=3
).map(
    lambda specs: sum(
        (coeff * _MODEL.universe.el(X, a) for a, coeff in specs),
        _MODEL.universe.zero(),
    )
)


@settings(deadline=None)
@given(_base_poly, _fiber_poly)
def test_projection_formula(base, w):
    assert _MODEL.pushforward(base * w) == base * _MODEL.pushforward(w)


@settings(deadline=None)
@given(_fiber_poly, _fiber_poly)
def test_model_pushforward_linear(v, w):
    assert _MODEL.pushforward(v + w) == _MODEL.pushforward(v) + _MODEL.pushforward(w)


def test_basis_vector_genus_two():
    fam = TrivialFamilyModel(2, 0)
    assert fam.basis_vector() == (0, 2, 1)


def test_basis_vector_sign_normalization():
    # Raw evaluations are (0, -2, -1); the sign rule flips them together.
    fam = TrivialFamilyModel(2, 0)
    x = fam.universe.el(X)
    assert fam.evaluate(CLASSES.el(m(0, 1))) == -2 * x
    assert fam.evaluate(CLASSES.el(ZETA)) == -1 * x
    assert fam.basis_vector() == (0, 2, 1)


def test_trivial_family_json_round_trip():
    fam = TrivialFamilyModel(5, -2, truncation=12)
    back = TrivialFamilyModel.from_json_dict(fam.to_json_dict())
    assert (back.g, back.k, back.truncation) == (5, -2, 12)


# ---------------------------------------------------------------------------
# 4-manifold model


def test_hirzebruch_values():
    h = FourManifoldModel.hirzebruch()
    assert h.kappa1() == 0
    assert h.m01() == -1
    assert h.m_12() == -1
    assert h.evaluate(CLASSES.el(m(0, 1))) == -1
    assert h.evaluate(CLASSES.el(m(-1, 2))) == -1
    assert h.evaluate(CLASSES.el(kappa(1))) == 0


def test_hirzebruch_basis_vector():
    assert FourManifoldModel.hirzebruch().basis_vector() == (0, -1, 0)


def test_hirzebruch_matrix_is_forced():
    """Derivation of the shipped intersection matrix.

    With euler = (2,1), line = (1,0), fiber = (0,1) fixed, search all
    symmetric integer 2x2 matrices with small entries for the constraints

        <fiber, fiber> = 0,  <euler, fiber> = 2,
        kappa_1 = 0,  m(0,1) = -1,  m(-1,2) = -1.

    Exactly one matrix survives, and it is the shipped one.  (By hand:
    symmetry gives G = [[p, q], [q, r]]; the fiber constraints force
    r = 0 and q = 1; m(-1,2) = p = -1; the remaining two values are then
    automatic.)
    """
    solutions = []
    for p, q, r in itertools.product(range(-3, 4), repeat=3):
        G = ((p, q), (q, r))
        try:
            model = FourManifoldModel(
                basis=("x", "y"),
                intersection=G,
                euler=(2, 1),
                line=(1, 0),
                fiber=(0, 1),
            )
        except ModelError:
            continue
        if (model.kappa1(), model.m01(), model.m_12()) == (0, -1, -1):
            solutions.append(G)
    assert solutions == [((-1, 1), (1, 0))]
    assert FourManifoldModel.hirzebruch().intersection == ((-1, 1), (1, 0))


def test_zero_line_vector():
    model = FourManifoldModel(
        basis=("x", "y"),
        intersection=((-1, 1), (1, 0)),
        euler=(2, 1),
        line=(0, 0),
    )
    assert model.m01() == 0
    assert model.m_12() == 0


def test_symmetry_of_pairing():
    model = FourManifoldModel.hirzebruch()
    assert model.pair(model.euler, model.line) == model.pair(model.line, model.euler)


@settings(deadline=None)
@given(
    st.integers(-5, 5),
    st.integers(-5, 5),
    st.integers(-5, 5),
    st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
    st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
)
def test_pairing_symmetry_random(p, q, r, e_vec, l_vec):
    model = FourManifoldModel(
        basis=("a", "b"),
        intersection=((p, q), (q, r)),
        euler=e_vec,
        line=l_vec,
    )
    assert model.pair(e_vec, l_vec) == model.pair(l_vec, e_vec)


def test_fiber_constraints_enforced():
    with pytest.raises(ModelError):
        FourManifoldModel(
            basis=("x", "y"),
            intersection=((-1, 1), (1, 1)),  # fiber self-intersection 1
            euler=(2, 1),
            line=(1, 0),
            fiber=(0, 1),
        )
    with pytest.raises(ModelError):
        FourManifoldModel(
            basis=("x", "y"),
            intersection=((-1, 1), (1, 0)),
            euler=(0, 0),  # pairs to 0 with the fiber, not 2
            line=(1, 0),
            fiber=(0, 1),
        )


def test_asymmetric_matrix_rejected():
    with pytest.raises(ModelError):
        FourManifoldModel(
            basis=("x", "y"),
            intersection=((0, 1), (2, 0)),
            euler=(1, 0),
            line=(0, 1),
        )


def test_zeta_parity_obstruction():
    model = FourManifoldModel(
        basis=("x",),
        intersection=((1,),),
        euler=(0,),
        line=(1,),
    )
    with pytest.raises(ModelError) as err:
        model.basis_vector()
    assert "even" in str(err.value)


def test_non_integral_hodge_is_flagged():
    model = FourManifoldModel(
        basis=("x",),
        intersection=((1,),),
        euler=(1,),
        line=(3,),
    )
    with pytest.warns(ModelWarning):
        value = model.evaluate(CLASSES.el(LAMBDA))
    assert value == Fraction(1, 12)


def test_wrong_degree_rejected():
    h = FourManifoldModel.hirzebruch()
    with pytest.raises(DomainError):
        h.evaluate(CLASSES.el(kappa(2)))
    with pytest.raises(DomainError):
        h.evaluate(CLASSES.el(m(0, 1)) ** 2)
    with pytest.raises(DomainError):
        h.evaluate(CLASSES.one() + CLASSES.el(m(0, 1)))


def test_fourmanifold_json_round_trip():
    h = FourManifoldModel.hirzebruch()
    data = h.to_json_dict()
    assert data["intersection"] == [[-1, 1], [1, 0]]
    assert FourManifoldModel.from_json_dict(data) == h


# ---------------------------------------------------------------------------
# the example trio


def test_example_models_vectors():
    stub, family, ruled = example_models()
    assert isinstance(stub, DeclaredModel)
    assert stub.basis_vector() == (1, 0, 0)
    assert family.basis_vector() == (0, 2, 1)
    assert ruled.basis_vector() == (0, -1, 0)
