"""Degree-2 Riemann-Roch expansion of the index character.

The index of the twisted fiberwise d-bar operator on the universal family
pushes forward as ``ch(ind) = pi_!(Td(e) * exp(r*e) * exp(s*y))``.  This
module builds the truncated series on the total space, pushes it down with
:func:`gysin.bundles.formal_pushforward`, and extracts the degree-2 piece
in the ordered basis ``(lambda, zeta, m_{0,1})``:

    (6r^2 + 6r + 1) * lambda  -  s^2 * zeta  +  (rs + (s + s^2)/2) * m_{0,1}

The parameters ``r`` and ``s`` may be integers, rationals, or the symbolic
polynomials from :func:`gysin.algebra.param_r` / ``param_s``; arithmetic is
exact in every case.  Three consequences are packaged as certificates:

* the coefficients above are integers for integer ``(r, s)`` (the
  ``s + s^2`` numerator is always even), via :func:`integrality_witness`;
* the expansions at ``(r, s) = (0,0), (0,1), (1,1)`` span the rank-3
  lattice on ``(lambda, zeta, m_{0,1})``, via :func:`corollary_realizations`;
* every expansion is recomputed from the series product and compared with
  the closed form, so a drift in either path raises ``ConsistencyError``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebra import (
    BUNDLE,
    CLASSES,
    DEFAULT_DEGREE_CAP,
    E,
    LAMBDA,
    SCHEMA_VERSION,
    Y,
    ZETA,
    DomainError,
    Element,
    GysinError,
    ParamPoly,
    as_coefficient,
    kappa,
    m,
)
from .bundles import TruncationError, formal_pushforward
from .lattices import BasisCertificate, verify_free_basis

__all__ = [
    "ConsistencyError",
    "IndexExpansion",
    "IntegralityError",
    "PowerSeries2",
    "REALIZATION_POINTS",
    "RealizationReport",
    "closed_form_degree2",
    "corollary_realizations",
    "exp_series",
    "index_chern_character",
    "integrality_witness",
    "todd_coefficients",
    "todd_series",
]


class IntegralityError(GysinError):
    """A coordinate that is provably an integer failed to evaluate as one."""


class ConsistencyError(GysinError):
    """The recomputed series expansion disagrees with the closed form."""


# ---------------------------------------------------------------------------
# truncated bivariate series on the total space


@dataclass(frozen=True)
class PowerSeries2:
    """Bivariate formal series in the fiber classes ``e`` and ``y``.

    Wraps an :class:`~gysin.algebra.Element` of the total-space universe and
    records the truncation ``order``: monomials ``e^a y^b`` are kept only
    for ``a + b <= order``, and products re-truncate at the smaller of the
    two orders so a coefficient is either exact or absent, never partial.
    """

    element: Element
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise DomainError("series truncation order must be non-negative")
        if self.element.max_degree() > 2 * self.order:
            raise TruncationError(
                "series element carries terms beyond its declared order"
            )

    @classmethod
    def one(cls, order):
        return cls(BUNDLE.one(), order)

    @classmethod
    def zero(cls, order):
        return cls(BUNDLE.zero(), order)

    def coefficient(self, a, b):
        """Exact coefficient of ``e^a y^b`` (zero when absent)."""
        target = {}
        if a:
            target[E] = a
        if b:
            target[Y] = b
        for mono, coeff in self.element.terms():
            if dict(mono) == target:
                return coeff
        return Fraction(0)

    def __add__(self, other):
        if not isinstance(other, PowerSeries2):
            return NotImplemented
        order = min(self.order, other.order)
        element = (self.element + other.element).mul(
            BUNDLE.one(), max_degree=2 * order
        )
        return PowerSeries2(element, order)

    def __mul__(self, other):
        if isinstance(other, PowerSeries2):
            order = min(self.order, other.order)
            element = self.element.mul(other.element, max_degree=2 * order)
            return PowerSeries2(element, order)
        return PowerSeries2(self.element * as_coefficient(other), self.order)

    def __rmul__(self, other):
        return self.__mul__(other)


def todd_coefficients(order):
    """Coefficients ``td_0 .. td_order`` of the Todd series x/(1 - e^(-x)).

    The reciprocal series (1 - e^(-x))/x has coefficients
    ``(-1)^j / (j+1)!``; the Todd coefficients follow by division:
    ``td_0 = 1`` and ``td_n = -sum_{k<n} td_k * c_{n-k}``.
    """
    if order < 0:
        raise DomainError("series truncation order must be non-negative")
    reciprocal = [
        Fraction((-1) ** j, factorial(j + 1)) for j in range(order + 1)
    ]
    coeffs = [Fraction(1)]
    for n in range(1, order + 1):
        coeffs.append(
            -sum(
                (coeffs[k] * reciprocal[n - k] for k in range(n)),
                Fraction(0),
            )
        )
    return coeffs


def todd_series(order):
    """The Todd series evaluated at ``e``, truncated at ``order``."""
    total = BUNDLE.zero()
    power = BUNDLE.one()
    for n, coeff in enumerate(todd_coefficients(order)):
        total = total + power * coeff
        if n < order:
            power = power.mul(BUNDLE.el(E), max_degree=2 * order)
    return PowerSeries2(total, order)


def exp_series(coeff_e, coeff_y, order):
    """The series ``exp(coeff_e * e + coeff_y * y)`` truncated at ``order``.

    The linear coefficients may be exact rationals or symbolic parameter
    polynomials; they propagate into the series coefficients unchanged.
    """
    if order < 0:
        raise DomainError("series truncation order must be non-negative")
    linear = BUNDLE.el(E) * as_coefficient(coeff_e) + BUNDLE.el(Y) * (
        as_coefficient(coeff_y)
    )
    total = BUNDLE.one()
    term = BUNDLE.one()
    for n in range(1, order + 1):
        term = term.mul(linear, max_degree=2 * order) * Fraction(1, n)
        total = total + term
    return PowerSeries2(total, order)


# ---------------------------------------------------------------------------
# the pushed-forward index character


@dataclass(frozen=True)
class IndexExpansion:
    """Graded pushforward of ``Td(e) * exp(r*e + s*y)`` up to ``maxdeg``.

    ``element`` lives in the classes universe with ``kappa_1`` already
    rewritten as ``12*lambda``; every graded piece has even degree.
    """

    element: Element
    r: object
    s: object
    maxdeg: int

    def __post_init__(self):
        if any(d % 2 for d in self.element.degrees()):
            raise DomainError("index expansion acquired an odd-degree piece")

    def degree_piece(self, degree):
        return self.element.homogeneous_part(degree)

    def degree2(self):
        return self.degree_piece(2)

    def degree2_canonical(self):
        """Degree-2 piece rewritten into the basis (lambda, zeta, m_{0,1}).

        The raw pushforward presents the piece through ``m_{-1,2}``;
        canonicalization substitutes ``m_{-1,2} = m_{0,1} - 2*zeta``.
        """
        return self.degree2().substitute(
            {m(-1, 2): CLASSES.el(m(0, 1)) - CLASSES.el(ZETA) * 2}
        )

    def degree2_coordinates(self):
        """Degree-2 coordinates in the ordered basis (lambda, zeta, m_{0,1})."""
        rewritten = self.degree2_canonical()
        return (
            rewritten.coefficient(LAMBDA),
            rewritten.coefficient(ZETA),
            rewritten.coefficient(m(0, 1)),
        )

    def integral_verdict(self):
        """True/False for numeric parameters; None when symbolic."""
        coords = self.degree2_coordinates()
        if any(isinstance(c, ParamPoly) for c in coords):
            return None
        return all(Fraction(c).denominator == 1 for c in coords)

    def to_json_dict(self):
        lam, zeta, m01 = self.degree2_coordinates()
        return {
            "schema_version": SCHEMA_VERSION,
            "r": str(self.r),
            "s": str(self.s),
            "maxdeg": self.maxdeg,
            "degree2": {
                "lambda": str(lam),
                "zeta": str(zeta),
                "m01": str(m01),
            },
            "integral": self.integral_verdict(),
        }


def index_chern_character(r, s, maxdeg=2, budget=DEFAULT_DEGREE_CAP):
    """Pushforward of the truncated product ``Td(e) * exp(r*e) * exp(s*y)``.

    Terms of total-space degree ``<= 2`` integrate to scalars and are
    dropped, so the result starts in degree 0 at zero; the first nontrivial
    piece is the degree-2 expansion.  ``maxdeg`` bounds the degree of the
    pushed-forward result and must stay within the truncation ``budget``.
    """
    if maxdeg < 0:
        raise DomainError("maxdeg must be non-negative")
    if maxdeg > budget:
        raise TruncationError(
            f"maxdeg {maxdeg} exceeds the truncation budget {budget}"
        )
    order = maxdeg // 2 + 1
    product = todd_series(order) * exp_series(r, s, order)
    pushed = formal_pushforward(product.element)
    rewritten = pushed.substitute({kappa(1): CLASSES.el(LAMBDA) * 12})
    return IndexExpansion(
        element=rewritten,
        r=as_coefficient(r),
        s=as_coefficient(s),
        maxdeg=maxdeg,
    )


def closed_form_degree2(r, s):
    """Closed form of the degree-2 index piece, as an element.

    Equals ``(6r^2+6r+1)*lambda - s^2*zeta + (rs + (s+s^2)/2)*m_{0,1}``;
    :func:`index_chern_character` reproduces it for every ``(r, s)``.
    """
    r = as_coefficient(r)
    s = as_coefficient(s)
    lam_coeff = 6 * r * r + 6 * r + 1
    zeta_coeff = -(s * s)
    m01_coeff = r * s + Fraction(1, 2) * (s + s * s)
    return (
        CLASSES.el(LAMBDA) * lam_coeff
        + CLASSES.el(ZETA) * zeta_coeff
        + CLASSES.el(m(0, 1)) * m01_coeff
    )


def integrality_witness(r, s):
    """Integer coordinates of the degree-2 piece in (lambda, zeta, m_{0,1}).

    For integer ``(r, s)`` all three coordinates are integers —
    ``6r^2+6r+1`` and ``s^2`` trivially, and ``rs + (s+s^2)/2`` because
    ``s + s^2 = s(s+1)`` is a product of consecutive integers.  A
    non-integer coordinate would contradict that argument, so it raises
    :class:`IntegralityError` instead of rounding.
    """
    if not isinstance(r, int) or not isinstance(s, int):
        raise DomainError("integrality witness requires integer r, s")
    coords = index_chern_character(r, s, maxdeg=2).degree2_coordinates()
    names = ("lambda", "zeta", "m01")
    result = []
    for name, value in zip(names, coords):
        value = Fraction(value)
        if value.denominator != 1:
            raise IntegralityError(
                f"{name}-coordinate {value} of the degree-2 piece at "
                f"(r, s) = ({r}, {s}) is not an integer"
            )
        result.append(int(value))
    return tuple(result)


# ---------------------------------------------------------------------------
# spanning realizations

REALIZATION_POINTS = ((0, 0), (0, 1), (1, 1))


@dataclass
class RealizationReport:
    """Degree-2 realizations at the sample points plus a spanning certificate.

    ``entries`` lists ``(r, s, element)`` triples; ``vectors`` are their
    integer coordinate rows in ``(lambda, zeta, m_{0,1})``; ``certificate``
    records that the rows form a basis of the rank-3 lattice.
    """

    entries: list
    vectors: tuple
    certificate: BasisCertificate

    @property
    def passed(self):
        return self.certificate.passed

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def to_json_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "points": [[r, s] for r, s, _ in self.entries],
            "vectors": [list(v) for v in self.vectors],
            "determinant": self.certificate.det,
            "passed": self.passed,
        }


def corollary_realizations(points=REALIZATION_POINTS):
    """Recompute the degree-2 expansions at ``points`` and certify spanning.

    Each expansion is computed twice — from the truncated series product
    and from the closed form — and any disagreement raises
    :class:`ConsistencyError`.  The integer coordinate rows are then fed to
    :func:`gysin.lattices.verify_free_basis`.
    """
    entries = []
    vectors = []
    for r, s in points:
        piece = index_chern_character(r, s, maxdeg=2).degree2_canonical()
        closed = closed_form_degree2(r, s)
        if piece != closed:
            raise ConsistencyError(
                f"degree-2 expansion at (r, s) = ({r}, {s}) disagrees "
                f"with the closed form"
            )
        entries.append((r, s, piece))
        vectors.append(integrality_witness(r, s))
    certificate = verify_free_basis(vectors)
    return RealizationReport(
        entries=entries, vectors=tuple(vectors), certificate=certificate
    )
