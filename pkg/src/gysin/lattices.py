"""Exact integer linear algebra for the degree-2 lattice computations.

Smith normal form with unimodular transforms, kernel bases, cokernel
orders, unimodular basis certificates, and the edge-homomorphism kernel
(lambda, eta) with its gcd cokernel order.

Coordinate chart: the rank-3 degree-2 lattice is written in the ordered
basis (lambda, zeta, m(0,1)); m(-1,2) is the derived coordinate
m(0,1) - 2*zeta.  (The model-facing ``basis_vector`` triples in
:mod:`gysin.bundles` use the order (lambda, m(0,1), zeta) instead; the
basis certificate is invariant under any reordering.)
"""

from __future__ import annotations

from dataclasses import dataclass
import math

from .algebra import DomainError, GysinError


class ShapeError(GysinError):
    """Matrix dimensions do not fit the operation."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable arbitrary-precision integer matrix."""

    entries: tuple

    def __post_init__(self):
        clean = []
        for row in self.entries:
            out = []
            for v in row:
                iv = int(v)
                if iv != v:
                    raise DomainError(
                        f"matrix entries must be integers; got {v!r}"
                    )
                out.append(iv)
            clean.append(tuple(out))
        rows = tuple(clean)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("matrix rows must all have the same length")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def nrows(self):
        return len(self.entries)

    @property
    def ncols(self):
        return len(self.entries[0]) if self.entries else 0

    def transpose(self):
        return IntMatrix(tuple(zip(*self.entries))) if self.entries else self

    def mul(self, other):
        if self.ncols != other.nrows:
            raise ShapeError(
                f"cannot multiply {self.nrows}x{self.ncols} by "
                f"{other.nrows}x{other.ncols}"
            )
        b_cols = list(zip(*other.entries))
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in b_cols)
                for row in self.entries
            )
        )

    def det(self):
        """Exact determinant by fraction-free Bareiss elimination."""
        if self.nrows != self.ncols:
            raise ShapeError("determinant needs a square matrix")
        n = self.nrows
        if n == 0:
            return 1
        a = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for t in range(n - 1):
            if a[t][t] == 0:
                for i in range(t + 1, n):
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
                a[i][t] = 0
            prev = a[t][t]
        return sign * a[n - 1][n - 1]

    def __repr__(self):
        return f"IntMatrix({self.entries!r})"


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithNormalForm:
    """U * A * V = D with U, V unimodular and d_1 | d_2 | ... , d_i >= 0."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self):
        return tuple(
            self.D.entries[i][i] for i in range(min(self.D.nrows, self.D.ncols))
        )


def _pivot(a, t, m, n):
    best = None
    for i in range(t, m):
        for j in range(t, n):
            v = abs(a[i][j])
            if v and (best is None or v < best[0]):
                best = (v, i, j)
    return best


def _diagonalize(a, U, V, m, n):
    t = 0
    while t < min(m, n):
        found = _pivot(a, t, m, n)
        if found is None:
            break
        _, pi, pj = found
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            for row in V:
                row[t], row[pj] = row[pj], row[t]
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                if q:
                    for j in range(n):
                        a[i][j] -= q * a[t][j]
                    for j in range(m):
                        U[i][j] -= q * U[t][j]
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                if q:
                    for i in range(m):
                        a[i][j] -= q * a[i][t]
                    for i in range(n):
                        V[i][j] -= q * V[i][t]
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        t += 1


def smith_normal_form(A):
    """Compute U, D, V with U*A*V = D diagonal, unimodular transforms,
    non-negative diagonal and a full divisibility chain."""
    m, n = A.nrows, A.ncols
    a = [list(row) for row in A.entries]
    U = [list(row) for row in IntMatrix.identity(m).entries]
    V = [list(row) for row in IntMatrix.identity(n).entries]
    while True:
        _diagonalize(a, U, V, m, n)
        for t in range(min(m, n)):
            if a[t][t] < 0:
                for j in range(n):
                    a[t][j] = -a[t][j]
                for j in range(m):
                    U[t][j] = -U[t][j]
        # enforce the divisibility chain d_i | d_{i+1}
        fixed = True
        for t in range(min(m, n) - 1):
            d1, d2 = a[t][t], a[t + 1][t + 1]
            if d1 and d2 and d2 % d1:
                # fold the next column in and re-reduce
                for i in range(m):
                    a[i][t] += a[i][t + 1]
                for i in range(n):
                    V[i][t] += V[i][t + 1]
                fixed = False
                break
        if fixed:
            break
    return SmithNormalForm(
        IntMatrix.from_rows(U), IntMatrix.from_rows(a), IntMatrix.from_rows(V)
    )


def kernel_basis(A):
    """Basis of the integer kernel: columns of V whose diagonal entry
    vanishes (or lies beyond the diagonal)."""
    snf = smith_normal_form(A)
    diag = snf.diagonal()
    cols = []
    for j in range(A.ncols):
        if j >= len(diag) or diag[j] == 0:
            cols.append(tuple(snf.V.entries[i][j] for i in range(A.ncols)))
    return cols


def cokernel_invariants(A):
    """(torsion orders > 1, free rank) of Z^rows / column-span of A."""
    diag = smith_normal_form(A).diagonal()
    torsion = [d for d in diag if d > 1]
    rank = sum(1 for d in diag if d)
    return torsion, A.nrows - rank


def cokernel_order(A):
    """Order of the torsion part of the cokernel (product of the
    nontrivial diagonal entries)."""
    out = 1
    for d in smith_normal_form(A).diagonal():
        if d:
            out *= d
    return out


# ---------------------------------------------------------------------------
# basis certificates


@dataclass(frozen=True)
class BasisCertificate:
    matrix: IntMatrix
    det: int
    passed: bool


def verify_free_basis(vectors):
    """Certify that the given integer vectors form a basis of Z^n.

    Exact determinant; PASS iff |det| = 1.  Invariant under row
    permutations and sign flips.
    """
    vectors = [tuple(int(v) for v in vec) for vec in vectors]
    n = len(vectors)
    if any(len(vec) != n for vec in vectors):
        raise ShapeError(
            f"need {n} vectors of length {n}, got lengths "
            f"{[len(v) for v in vectors]}"
        )
    mat = IntMatrix.from_rows(vectors)
    det = mat.det()
    return BasisCertificate(mat, det, abs(det) == 1)


# ---------------------------------------------------------------------------
# the edge homomorphism lattice
#
# In the chart (lambda, zeta, m(0,1)) the restriction to the fiber of the
# universal fibration is the 1x3 map (0, 1-g-k, 2-2g).


def edge_map_coefficients(g, k):
    if g < 2:
        raise DomainError(f"genus must be >= 2, got {g}")
    return (0, 1 - g - k, 2 - 2 * g)


@dataclass(frozen=True)
class EdgeKernel:
    g: int
    k: int
    coefficients: tuple
    kernel: tuple  # ((1,0,0), eta)
    eta: tuple
    preimage: tuple  # maps to the positive image generator
    cokernel_order: int


def _egcd(a, b):
    """Extended gcd: returns (d, u, v) with u*a + v*b = d = gcd(|a|, |b|) >= 0."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def edge_kernel(g, k):
    """Kernel basis ((1,0,0), eta) and cokernel order of the edge map.

    eta is the primitive kernel vector (0, -2(g-1), g+k-1)/d with
    d = gcd(2g-2, g+k-1), normalized to positive m(0,1)-coordinate
    (positive zeta-coordinate when the m(0,1)-coordinate vanishes).
    The cokernel order is computed by Smith normal form of the 1x3
    coefficient matrix and equals gcd(|1-g-k|, |2-2g|).
    """
    coeffs = edge_map_coefficients(g, k)
    d = math.gcd(2 * g - 2, g + k - 1)
    eta = (0, (2 - 2 * g) // d, (g + k - 1) // d)
    if eta[2] < 0 or (eta[2] == 0 and eta[1] < 0):
        eta = tuple(-v for v in eta)
    order = cokernel_order(IntMatrix.from_rows([coeffs]))
    dd, u, v = _egcd(coeffs[1], coeffs[2])
    if dd != d:
        raise AssertionError("extended gcd disagrees with direct gcd")
    preimage = (0, u, v)
    lam = (1, 0, 0)
    assert sum(c * x for c, x in zip(coeffs, eta)) == 0
    assert sum(c * x for c, x in zip(coeffs, preimage)) == d
    return EdgeKernel(
        g=g,
        k=k,
        coefficients=coeffs,
        kernel=(lam, eta),
        eta=eta,
        preimage=preimage,
        cokernel_order=order,
    )


# ---------------------------------------------------------------------------
# torsion orders


@dataclass(frozen=True)
class TorsionReport:
    """The integral orders attached to a (genus, fibrewise degree) pair.

    * ``h3_pic_order``: order of the degree-3 torsion of the universal
      fibration's total space, |gcd(2-2g, 1-g-k)|; equal to the order of
      the obstruction gerbe's class (``dd_class_order``).
    * ``h1_mg_pic0_order``: 2g-2, the order of the fibrewise-degree-1
      component in the relative Picard group modulo sections.
    * ``h3_gamma_tilde_order``: |2-2g|, the degree-3 torsion order for
      the extended mapping class group.
    * ``eta_vector``: the second kernel generator in (lambda, zeta, m(0,1)).
    * ``section_exists``: whether fibrewise degree k admits a section,
      i.e. (2g-2) | k.
    """

    g: int
    k: int
    h3_pic_order: int
    h1_mg_pic0_order: int
    h3_gamma_tilde_order: int
    eta_vector: tuple
    dd_class_order: int
    section_exists: bool

    def to_json_dict(self):
        from .algebra import SCHEMA_VERSION

        return {
            "schema_version": SCHEMA_VERSION,
            "g": self.g,
            "k": self.k,
            "h3_pic_order": self.h3_pic_order,
            "h1_mg_pic0_order": self.h1_mg_pic0_order,
            "h3_gamma_tilde_order": self.h3_gamma_tilde_order,
            "eta_vector": list(self.eta_vector),
            "dd_class_order": self.dd_class_order,
            "section_exists": self.section_exists,
        }

    CSV_HEADER = (
        "g",
        "k",
        "h3_pic",
        "h1",
        "h3_gamma",
        "eta_lambda",
        "eta_zeta",
        "eta_m01",
        "section",
    )

    def csv_row(self):
        return (
            self.g,
            self.k,
            self.h3_pic_order,
            self.h1_mg_pic0_order,
            self.h3_gamma_tilde_order,
            *self.eta_vector,
            int(self.section_exists),
        )


def torsion_orders(g, k):
    """Assemble the torsion-order report for one (g, k)."""
    if g < 2:
        raise DomainError(f"genus must be >= 2, got {g}")
    edge = edge_kernel(g, k)
    h3 = math.gcd(2 - 2 * g, 1 - g - k)
    return TorsionReport(
        g=g,
        k=k,
        h3_pic_order=h3,
        h1_mg_pic0_order=2 * g - 2,
        h3_gamma_tilde_order=abs(2 - 2 * g),
        eta_vector=edge.eta,
        dd_class_order=h3,
        section_exists=k % (2 * g - 2) == 0,
    )


def torsion_sweep(g_min, g_max, k_min, k_max):
    """Reports over the grid, ordered by (g, k)."""
    if g_min > g_max or k_min > k_max:
        raise DomainError("sweep ranges must be non-empty")
    return [
        torsion_orders(g, k)
        for g in range(g_min, g_max + 1)
        for k in range(k_min, k_max + 1)
    ]
