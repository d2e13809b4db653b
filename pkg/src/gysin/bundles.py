"""Surface-bundle models and the fiber-integration (pushforward) map.

``formal_pushforward`` turns polynomials in the vertical Euler class ``e``
and the line-bundle class ``y`` into ``kappa``/``m`` classes by the formal
rule ``e^a y^b -> m(a-1, b)`` (degree drop 2, non-positive targets drop).

Three concrete models evaluate those classes:

* :class:`TrivialFamilyModel` -- a genus-``g`` product family carrying a
  fibrewise-degree-``k`` line bundle, computed in the exterior ring
  Q[x] (x) Q[sigma]/(sigma^2); restriction along it realizes the edge
  homomorphism of the universal fibration.
* :class:`FourManifoldModel` -- a closed 4-manifold given by its
  intersection matrix plus coordinate vectors for ``e`` and ``y``.
* :class:`DeclaredModel` -- a model whose basis evaluations are declared
  rather than computed (used for the universal family itself, whose
  values come from geometry outside this engine's scope).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import warnings

from .algebra import (
    BUNDLE,
    CLASSES,
    E,
    LAMBDA,
    SIGMA,
    X,
    Y,
    ZETA,
    DomainError,
    Element,
    GysinError,
    Universe,
    UniverseError,
    kappa,
    m,
)


class TruncationError(GysinError):
    """A result exceeded the model's truncation budget."""


class ModelError(GysinError):
    """Model data is inconsistent with the constraints it must satisfy."""


class ModelWarning(UserWarning):
    """Suspicious but not fatal model arithmetic (e.g. non-integral
    Hodge evaluation on a model whose kappa_1 is not divisible by 12)."""


# ---------------------------------------------------------------------------
# formal pushforward


def formal_pushforward(p):
    """Fiber integration of a polynomial in ``e`` and ``y``.

    Linear over the coefficients; ``e^a y^b`` maps to ``m(a-1, b)`` when
    the target degree ``2(a-1+b)`` is positive (with ``m(i,0)`` written as
    ``kappa(i)``), and to 0 when ``a + b <= 1``.  Monomials containing any
    other symbol raise :class:`~gysin.algebra.DomainError`.
    """
    out = CLASSES.zero()
    for mono, coeff in p.terms():
        exps = {gen: exp for gen, exp in mono}
        a = exps.pop(E, 0)
        b = exps.pop(Y, 0)
        if exps:
            names = ", ".join(g.name for g in exps)
            raise DomainError(
                f"pushforward is defined on polynomials in e, y only; got {names}"
            )
        if a + b <= 1:
            continue
        target = CLASSES.el(kappa(a - 1)) if b == 0 else CLASSES.el(m(a - 1, b))
        out = out + coeff * target
    return out


# ---------------------------------------------------------------------------
# trivial family over the classifying space of line bundles


class TrivialFamilyModel:
    """Product family of a genus-``g`` surface with a fibrewise-degree-``k``
    line bundle, over the classifying space of line bundles.

    The ambient ring is Q[x]/(x^(N+1)) tensor Q[sigma]/(sigma^2) where
    ``sigma`` is the degree-2 dual of the fiber fundamental class and ``x``
    generates the base.  The structure classes are::

        e = (2 - 2g) * sigma          y = k*sigma + x

    and fiber integration extracts the sigma-coefficient (degree drop 2).
    """

    def __init__(self, g, k, truncation=24):
        if g < 2:
            raise DomainError(f"genus must be >= 2, got {g}")
        if truncation < 1:
            raise DomainError("truncation must be >= 1")
        self.g = int(g)
        self.k = int(k)
        self.truncation = int(truncation)
        self.chi = 2 - 2 * self.g
        self.universe = Universe.of(f"family(g={g},k={k})", X, SIGMA)
        self.euler_class = self.chi * self.universe.el(SIGMA)
        self.line_class = self.k * self.universe.el(SIGMA) + self.universe.el(X)

    def pushforward(self, w):
        """Extract the sigma-coefficient of ``w`` (fiber integration)."""
        if w.universe != self.universe:
            raise UniverseError("pushforward needs an element of the model ring")
        out = {}
        for mono, coeff in w.terms():
            exps = {gen: exp for gen, exp in mono}
            if exps.pop(SIGMA, 0) != 1:
                continue
            xexp = exps.pop(X, 0)
            out[((X, xexp),) if xexp else ()] = coeff
        return Element(self.universe, out)

    def _check_truncation(self, el):
        for mono, _ in el.terms():
            for gen, exp in mono:
                if gen == X and exp > self.truncation:
                    raise TruncationError(
                        f"x^{exp} exceeds the model truncation x^{self.truncation}"
                    )
        return el

    def class_value(self, i, j):
        """Fiber integral of ``e^(i+1) * y^j`` computed in the model ring."""
        integrand = self.euler_class ** (i + 1) * self.line_class**j
        return self._check_truncation(self.pushforward(integrand))

    def evaluate(self, cls):
        """Restrict a polynomial in kappa/m/lambda/zeta along the family.

        ``lambda`` is rewritten as ``kappa_1 / 12`` and ``zeta`` as
        ``(m(0,1) - m(-1,2)) / 2`` before evaluation; the result is a
        polynomial in ``x``.
        """
        if cls.universe != CLASSES:
            raise UniverseError("evaluate expects an element of the classes universe")
        assignment = {}
        for gen in cls.generators():
            if gen.family == "kappa":
                img = self.class_value(gen.index[0], 0)
            elif gen.family == "m":
                img = self.class_value(*gen.index)
            elif gen == LAMBDA:
                img = Fraction(1, 12) * self.class_value(1, 0)
            elif gen == ZETA:
                img = Fraction(1, 2) * (
                    self.class_value(0, 1) - self.class_value(-1, 2)
                )
            else:
                raise DomainError(
                    f"{gen.name} has no evaluation on the trivial family"
                )
            assignment[gen] = img
        out = cls.substitute(assignment, universe=self.universe)
        return self._check_truncation(out)

    def basis_vector(self):
        """Evaluations of (lambda, m(0,1), zeta), sign-normalized.

        The base generator is only pinned up to sign, so the triple is
        normalized to make its first nonzero entry among the m(0,1) and
        zeta coordinates positive.
        """
        coords = []
        for cls in (LAMBDA, m(0, 1), ZETA):
            value = self.evaluate(CLASSES.el(cls))
            coords.append(_linear_x_coefficient(value, self.universe))
        coords = _check_zeta_integrality(tuple(coords))
        for c in coords[1:]:
            if c:
                if c < 0:
                    coords = tuple(-v for v in coords)
                break
        return coords

    def to_json_dict(self):
        from .algebra import SCHEMA_VERSION

        return {
            "schema_version": SCHEMA_VERSION,
            "g": self.g,
            "k": self.k,
            "truncation": self.truncation,
        }

    @classmethod
    def from_json_dict(cls, data):
        return cls(data["g"], data["k"], data.get("truncation", 24))

    def __repr__(self):
        return f"TrivialFamilyModel(g={self.g}, k={self.k})"


def _linear_x_coefficient(el, universe):
    linear = el.coefficient(X)
    if el != linear * universe.el(X):
        raise ModelError(f"expected a multiple of x, got {el}")
    return Fraction(linear)


def _check_zeta_integrality(coords):
    zeta_value = coords[2]
    if zeta_value.denominator != 1:
        raise ModelError(
            "zeta evaluates to the non-integer "
            f"{zeta_value}: m(0,1) - m(-1,2) must be even on any integral "
            "model (parity obstruction)"
        )
    return coords


# ---------------------------------------------------------------------------
# closed 4-manifold models


@dataclass(frozen=True)
class FourManifoldModel:
    """A closed oriented 4-manifold fibered in surfaces over the sphere,
    described by its degree-2 intersection lattice.

    ``intersection`` is the symmetric pairing matrix on the chosen basis
    of H^2; ``euler`` and ``line`` are the coordinates of the vertical
    Euler class and the line-bundle class.  When ``fiber`` is given, the
    constraints <fiber, fiber> = 0 and <euler, fiber> = chi(fiber) are
    checked at construction.
    """

    basis: tuple
    intersection: tuple
    euler: tuple
    line: tuple
    fiber: tuple | None = None
    fiber_chi: int = 2

    def __post_init__(self):
        n = len(self.basis)
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(
            self, "intersection", tuple(tuple(int(v) for v in row) for row in self.intersection)
        )
        object.__setattr__(self, "euler", tuple(int(v) for v in self.euler))
        object.__setattr__(self, "line", tuple(int(v) for v in self.line))
        if self.fiber is not None:
            object.__setattr__(self, "fiber", tuple(int(v) for v in self.fiber))
        G = self.intersection
        if len(G) != n or any(len(row) != n for row in G):
            raise ModelError(f"intersection matrix must be {n}x{n}")
        if any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
            raise ModelError("intersection matrix must be symmetric")
        for vec, label in ((self.euler, "euler"), (self.line, "line")):
            if len(vec) != n:
                raise ModelError(f"{label} vector must have length {n}")
        if self.fiber is not None:
            if len(self.fiber) != n:
                raise ModelError(f"fiber vector must have length {n}")
            if self.pair(self.fiber, self.fiber) != 0:
                raise ModelError("fiber class must have self-intersection 0")
            if self.pair(self.euler, self.fiber) != self.fiber_chi:
                raise ModelError(
                    "euler class must pair with the fiber class to "
                    f"{self.fiber_chi}, got {self.pair(self.euler, self.fiber)}"
                )

    def pair(self, a, b):
        G = self.intersection
        return sum(
            a[i] * G[i][j] * b[j]
            for i in range(len(a))
            for j in range(len(b))
        )

    def kappa1(self):
        return self.pair(self.euler, self.euler)

    def m01(self):
        return self.pair(self.euler, self.line)

    def m_12(self):
        return self.pair(self.line, self.line)

    def _generator_value(self, gen):
        if gen == kappa(1):
            return Fraction(self.kappa1())
        if gen == m(0, 1):
            return Fraction(self.m01())
        if gen == m(-1, 2):
            return Fraction(self.m_12())
        if gen == LAMBDA:
            k1 = self.kappa1()
            if k1 % 12:
                warnings.warn(
                    f"kappa_1 = {k1} is not divisible by 12; the Hodge "
                    "evaluation is not integral on this model",
                    ModelWarning,
                    stacklevel=3,
                )
            return Fraction(k1, 12)
        if gen == ZETA:
            return Fraction(self.m01() - self.m_12(), 2)
        raise DomainError(
            f"{gen.name} does not evaluate on a 4-manifold model "
            "(only the degree-2 classes kappa_1, m_{0,1}, m_{-1,2}, "
            "lambda, zeta pair with the fundamental class)"
        )

    def evaluate(self, cls):
        """Pair a linear combination of the degree-2 classes with the
        fundamental class; anything of another degree is an error."""
        if cls.universe != CLASSES:
            raise UniverseError("evaluate expects an element of the classes universe")
        total = Fraction(0)
        for mono, coeff in cls.terms():
            if len(mono) != 1 or mono[0][1] != 1:
                raise DomainError(
                    "4-manifold evaluation needs a linear combination of "
                    "degree-2 classes; got the monomial "
                    + "*".join(f"{g.name}^{e}" for g, e in mono)
                )
            total += coeff * self._generator_value(mono[0][0])
        return total

    def basis_vector(self):
        """Evaluations of (lambda, m(0,1), zeta) as exact rationals."""
        lam = self._generator_value(LAMBDA)
        m01 = Fraction(self.m01())
        zeta = Fraction(self.m01() - self.m_12(), 2)
        return _check_zeta_integrality((lam, m01, zeta))

    def to_json_dict(self):
        from .algebra import SCHEMA_VERSION

        out = {
            "schema_version": SCHEMA_VERSION,
            "basis": list(self.basis),
            "intersection": [list(row) for row in self.intersection],
            "euler": list(self.euler),
            "line": list(self.line),
        }
        if self.fiber is not None:
            out["fiber"] = list(self.fiber)
            out["fiber_chi"] = self.fiber_chi
        return out

    @classmethod
    def from_json_dict(cls, data):
        return cls(
            basis=tuple(data["basis"]),
            intersection=tuple(tuple(row) for row in data["intersection"]),
            euler=tuple(data["euler"]),
            line=tuple(data["line"]),
            fiber=tuple(data["fiber"]) if data.get("fiber") is not None else None,
            fiber_chi=data.get("fiber_chi", 2),
        )

    @classmethod
    def hirzebruch(cls):
        """The first Hirzebruch surface (projective plane blown up at a
        point), a twisted sphere bundle over the sphere.

        Basis classes (x, y) with x^2 = -1, x.y = 1, y^2 = 0; the
        vertical Euler class is e = 2x + y, the line class is x, and y is
        the fiber class (self-intersection 0, <e, y> = chi(S^2) = 2).
        The matrix is pinned uniquely by those constraints together with
        kappa_1 = 0; see the derivation test in tests/test_bundles.py.
        """
        return cls(
            basis=("x", "y"),
            intersection=((-1, 1), (1, 0)),
            euler=(2, 1),
            line=(1, 0),
            fiber=(0, 1),
            fiber_chi=2,
        )

    def __repr__(self):
        return (
            f"FourManifoldModel(basis={self.basis}, euler={self.euler}, "
            f"line={self.line})"
        )


@dataclass(frozen=True)
class DeclaredModel:
    """A model whose (lambda, m(0,1), zeta) evaluations are declared.

    Used for the universal family itself: its Hodge evaluation (1, 0, 0)
    comes from geometry this engine does not model.
    """

    values: tuple = (Fraction(1), Fraction(0), Fraction(0))
    label: str = "universal-family"

    def basis_vector(self):
        return tuple(Fraction(v) for v in self.values)


def example_models():
    """The three models whose basis vectors certify the free basis:
    declared universal family, genus-2 trivial family, ruled surface."""
    return (
        DeclaredModel(),
        TrivialFamilyModel(2, 0),
        FourManifoldModel.hirzebruch(),
    )
