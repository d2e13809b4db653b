"""Descriptors of the stable cohomology rings and their Hilbert series.

Each ring in play is free graded-commutative on an explicit generator set:

* ``hol()`` — the holomorphic variant: polynomial on ``kappa_i`` (degree
  ``2i``) and ``m_{i,j}`` for ``i + j > 0``, ``j > 0``, ``i >= -1``
  (degree ``2(i+j)``).
* ``pic(g, k)`` — the degree-``k`` Picard variant: ``kappa_i``, the single
  degree-2 combination ``k*m_{0,1} + (g-1)*m_{-1,2}``, and all ``m_{i,j}``
  with ``i + j > 1``.
* ``boundary()`` — same generator set as ``hol()`` with the classes named
  ``mtilde``; ``closed()`` — the closed-surface variant, which omits the
  index ``(0, 1)``.
* ``bigraded(variant)`` — the associated-graded description: ``x_{i,j}``
  of bidegree ``(2i+j, j)`` and ``kappa_i`` of bidegree ``(2i, 0)``.

Generator families are infinite, so specs carry index predicates and the
enumeration is lazy in the degree cutoff.  Hilbert series are computed by
the standard coin-counting recurrence for products of ``1/(1 - t^d)``,
with exact integer coefficients; `collapse_consistency` checks, degree by
degree, that dividing the Picard/closed series by ``(1 - t^2)`` recovers
the holomorphic series, and that the bigraded series specialize correctly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    CLASSES,
    DomainError,
    GysinError,
    ParityError,
    SCHEMA_VERSION,
    element_to_text,
    kappa,
    m,
)

__all__ = [
    "BOUNDARY",
    "CLOSED",
    "BigradedSeries",
    "CollapseReport",
    "CollapseRow",
    "HilbertSeries",
    "RingSpec",
    "bigraded",
    "bigraded_hilbert",
    "boundary",
    "boundary_alias_table",
    "closed",
    "collapse_consistency",
    "enumerate_generators",
    "hilbert_series",
    "hol",
    "integral_shift_table",
    "pic",
    "stable_range",
]

BOUNDARY = "boundary"
CLOSED = "closed"

_FAMILIES = ("hol", "pic", "boundary", "closed", "bigraded")


# ---------------------------------------------------------------------------
# ring descriptors


@dataclass(frozen=True)
class RingSpec:
    """A free graded-commutative ring presented by an index predicate.

    ``family`` picks the generator rule; ``g``/``k`` parametrize the
    Picard variant and ``variant`` the bigraded one.  Instances are
    immutable and safe to share across sweeps.
    """

    family: str
    g: int | None = None
    k: int | None = None
    variant: str | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(
                f"unknown ring family {self.family!r}; "
                f"expected one of {', '.join(_FAMILIES)}"
            )
        if self.family == "pic":
            if self.g is None or self.k is None:
                raise DomainError("the pic ring needs integer g and k")
            if self.g < 2:
                raise DomainError("the pic ring needs g >= 2")
        if self.family == "bigraded" and self.variant not in (BOUNDARY, CLOSED):
            raise DomainError(
                "the bigraded ring needs variant 'boundary' or 'closed'"
            )

    @property
    def is_bigraded(self):
        return self.family == "bigraded"

    def label(self):
        if self.family == "pic":
            return f"pic(g={self.g},k={self.k})"
        if self.family == "bigraded":
            return f"bigraded({self.variant})"
        return self.family


def hol():
    """Polynomial ring on kappa_i and all m_{i,j} with i+j > 0."""
    return RingSpec("hol")


def pic(g, k):
    """Picard variant: kappa_i, one degree-2 combination, m_{i,j} i+j > 1."""
    return RingSpec("pic", g=g, k=k)


def boundary():
    """One-boundary variant; same index set as hol, classes named mtilde."""
    return RingSpec("boundary")


def closed():
    """Closed-surface variant; omits the index (0, 1)."""
    return RingSpec("closed")


def bigraded(variant):
    """Associated-graded descriptor with x_{i,j} of bidegree (2i+j, j)."""
    return RingSpec("bigraded", variant=variant)


def _pic_combination(g, k):
    """The degree-2 Picard generator ``k*m_{0,1} + (g-1)*m_{-1,2}``."""
    return CLASSES.el(m(0, 1)) * k + CLASSES.el(m(-1, 2)) * (g - 1)


def _m_indices(maxdeg, omit=(), min_weight=1):
    """Index pairs (i, j) with i >= -1, j > 0, i+j >= min_weight, sorted.

    Within a fixed total weight i+j the pairs are listed by increasing j
    (decreasing i), matching the enumeration order of the generator
    tables.
    """
    pairs = []
    for weight in range(min_weight, maxdeg // 2 + 1):
        for j in range(1, weight + 2):
            i = weight - j
            if i < -1:
                continue
            if (i, j) in omit:
                continue
            pairs.append((i, j))
    return pairs


def enumerate_generators(spec, maxdeg):
    """All generators of degree <= maxdeg, sorted by degree then index.

    Returns ``(name, degree)`` tuples — ``(name, degree, (p, q))`` for the
    bigraded family.  The infinite families are cut off at ``maxdeg``;
    nothing above the cutoff can contribute to a series truncated there.
    """
    if maxdeg < 0:
        raise DomainError("maxdeg must be non-negative")
    if spec.is_bigraded:
        omit = {(0, 1)} if spec.variant == CLOSED else set()
        rows = []
        for i in range(1, maxdeg // 2 + 1):
            rows.append((kappa(i).name, 2 * i, (2 * i, 0)))
        for i, j in _m_indices(maxdeg, omit=omit):
            rows.append((f"x_{{{i},{j}}}", 2 * (i + j), (2 * i + j, j)))
        rows.sort(key=lambda row: (row[1], row[0].startswith("x"), row[2][1]))
        return rows

    rows = []
    for i in range(1, maxdeg // 2 + 1):
        rows.append((kappa(i).name, 2 * i))
    if spec.family == "pic":
        if maxdeg >= 2:
            rows.append((element_to_text(_pic_combination(spec.g, spec.k)), 2))
        m_pairs = _m_indices(maxdeg, min_weight=2)
    elif spec.family == "closed":
        m_pairs = _m_indices(maxdeg, omit={(0, 1)})
    else:
        m_pairs = _m_indices(maxdeg)
    prefix = "mtilde" if spec.family in ("boundary", "closed") else "m"
    for i, j in m_pairs:
        rows.append((f"{prefix}_{{{i},{j}}}", 2 * (i + j)))
    rows.sort(key=_generator_sort_key)
    return rows


def _generator_sort_key(row):
    name, degree = row[0], row[1]
    if name.startswith("kappa"):
        return (degree, 0, 0)
    if "_{" in name and not name.startswith(("m", "x")):
        # the pic combination and other composite names sort with the
        # m-block of their degree, ahead of higher indices
        return (degree, 1, -1)
    j = int(name.rsplit(",", 1)[-1].rstrip("}")) if "," in name else 0
    return (degree, 1, j)


# ---------------------------------------------------------------------------
# Hilbert series


@dataclass(frozen=True)
class HilbertSeries:
    """Truncated power series in t with non-negative integer coefficients."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients or self.coefficients[0] != 1:
            raise DomainError("a Hilbert series starts with coefficient 1")
        if any(c < 0 or not isinstance(c, int) for c in self.coefficients):
            raise DomainError("Hilbert coefficients must be non-negative ints")

    @property
    def truncation(self):
        return len(self.coefficients) - 1

    def coefficient(self, degree):
        if degree < 0:
            return 0
        if degree > self.truncation:
            raise DomainError(
                f"degree {degree} beyond truncation {self.truncation}"
            )
        return self.coefficients[degree]

    def times_geometric(self, period=2):
        """Multiply by 1/(1 - t^period), i.e. cumulate every ``period``."""
        out = list(self.coefficients)
        for d in range(period, len(out)):
            out[d] += out[d - period]
        return HilbertSeries(tuple(out))

    def to_json_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "variable": "t",
            "coefficients": list(self.coefficients),
        }


def hilbert_series(spec, maxdeg):
    """Dimension counts of the free ring on the given ring's generators.

    The series is the product of 1/(1 - t^d) over all generators of
    degree d <= maxdeg, truncated at maxdeg.
    """
    if spec.is_bigraded:
        raise DomainError(
            "bigraded specs use bigraded_hilbert; specialize to compare"
        )
    coeffs = [1] + [0] * maxdeg
    for name, degree in enumerate_generators(spec, maxdeg):
        if degree % 2:
            raise ParityError(
                f"generator {name} has odd degree {degree}; the series "
                f"product formula needs a polynomial (even) generator"
            )
        for d in range(degree, maxdeg + 1):
            coeffs[d] += coeffs[d - degree]
    return HilbertSeries(tuple(coeffs))


@dataclass(frozen=True)
class BigradedSeries:
    """Truncated bivariate series; t tracks p and s tracks q."""

    coefficients: tuple  # tuple of ((p, q), count), sorted
    truncation: int
    _table: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_table", dict(self.coefficients))
        if self._table.get((0, 0)) != 1:
            raise DomainError("a Hilbert series starts with coefficient 1")
        if any(c < 0 for c in self._table.values()):
            raise DomainError("Hilbert coefficients must be non-negative")

    def coefficient(self, p, q):
        if p + q > self.truncation:
            raise DomainError(
                f"bidegree ({p}, {q}) beyond truncation {self.truncation}"
            )
        return self._table.get((p, q), 0)

    def specialize(self):
        """Set s = t: collapse to the single-graded series in p + q."""
        coeffs = [0] * (self.truncation + 1)
        for (p, q), count in self._table.items():
            coeffs[p + q] += count
        return HilbertSeries(tuple(coeffs))

    def to_json_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "variables": ["t", "s"],
            "coefficients": [
                {"p": p, "q": q, "count": c}
                for (p, q), c in sorted(self._table.items())
            ],
        }


def bigraded_hilbert(variant, maxdeg):
    """Bivariate series of the associated-graded ring for the variant."""
    spec = bigraded(variant)
    table = {(0, 0): 1}
    gens = enumerate_generators(spec, maxdeg)
    # process lattice points in order of total degree so each generator's
    # geometric series is fully absorbed before it is consumed again
    for _, _, (a, b) in gens:
        for total in range(a + b, maxdeg + 1):
            for p in range(total + 1):
                q = total - p
                if p < a or q < b:
                    continue
                prev = table.get((p - a, q - b), 0)
                if prev:
                    table[(p, q)] = table.get((p, q), 0) + prev
    coeffs = tuple(sorted(table.items()))
    return BigradedSeries(coefficients=coeffs, truncation=maxdeg)


def stable_range(g):
    """Largest degree where the stable descriptions apply: floor(2g/3) - 1."""
    if g < 2:
        raise DomainError("stable range needs genus g >= 2")
    return (2 * g) // 3 - 1


# ---------------------------------------------------------------------------
# collapse consistency


@dataclass(frozen=True)
class CollapseRow:
    degree: int
    check: str
    left: int
    right: int

    @property
    def ok(self):
        return self.left == self.right

    def to_json_dict(self):
        return {
            "degree": self.degree,
            "check": self.check,
            "left": self.left,
            "right": self.right,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class CollapseReport:
    """Degreewise comparison of the graded dimension identities.

    Checks, coefficientwise up to ``maxdeg``:

    * ``pic-collapse``   — hilbert(hol) against hilbert(pic)/(1 - t^2);
    * ``closed-collapse`` — hilbert(hol) against hilbert(closed)/(1 - t^2);
    * ``boundary-bigraded`` / ``closed-bigraded`` — the specialized
      bivariate series against their single-graded counterparts.

    The division by ``(1 - t^2)`` is realized as multiplication by the
    geometric series, which is exact on truncated coefficients.
    """

    g: int
    k: int
    maxdeg: int
    rows: tuple

    @property
    def passed(self):
        return all(row.ok for row in self.rows)

    def failures(self):
        return [row for row in self.rows if not row.ok]

    def to_json_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "g": self.g,
            "k": self.k,
            "maxdeg": self.maxdeg,
            "passed": self.passed,
            "rows": [row.to_json_dict() for row in self.rows],
        }


def collapse_consistency(g, k, maxdeg):
    """Verify the dimension identities linking the ring descriptions."""
    if maxdeg < 0:
        raise DomainError("maxdeg must be non-negative")
    hol_series = hilbert_series(hol(), maxdeg)
    pic_cumulated = hilbert_series(pic(g, k), maxdeg).times_geometric(2)
    closed_cumulated = hilbert_series(closed(), maxdeg).times_geometric(2)
    boundary_special = bigraded_hilbert(BOUNDARY, maxdeg).specialize()
    closed_special = bigraded_hilbert(CLOSED, maxdeg).specialize()
    closed_series = hilbert_series(closed(), maxdeg)

    rows = []
    for d in range(maxdeg + 1):
        rows.append(
            CollapseRow(
                d,
                "pic-collapse",
                hol_series.coefficient(d),
                pic_cumulated.coefficient(d),
            )
        )
        rows.append(
            CollapseRow(
                d,
                "closed-collapse",
                hol_series.coefficient(d),
                closed_cumulated.coefficient(d),
            )
        )
        rows.append(
            CollapseRow(
                d,
                "boundary-bigraded",
                hol_series.coefficient(d),
                boundary_special.coefficient(d),
            )
        )
        rows.append(
            CollapseRow(
                d,
                "closed-bigraded",
                closed_series.coefficient(d),
                closed_special.coefficient(d),
            )
        )
    return CollapseReport(g=g, k=k, maxdeg=maxdeg, rows=tuple(rows))


# ---------------------------------------------------------------------------
# name translation tables


def boundary_alias_table(maxdeg):
    """Renaming between the m-classes and their boundary-variant aliases.

    Purely notational: ``mtilde_{i,j}`` denotes the same generator as
    ``m_{i,j}`` in the one-boundary and closed-surface descriptions.
    """
    return {
        f"mtilde_{{{i},{j}}}": f"m_{{{i},{j}}}"
        for i, j in _m_indices(maxdeg)
    }


def integral_shift_table(maxdeg):
    """First-index shift matching the integral one-boundary classes.

    In the integral one-boundary ring the class written ``mtilde_{i+1,j}``
    equals our ``m_{i,j}``; the table maps shifted names to unshifted
    ones.  Again purely notational — no new classes are introduced.
    """
    return {
        f"mtilde_{{{i + 1},{j}}}": f"m_{{{i},{j}}}"
        for i, j in _m_indices(maxdeg)
    }
