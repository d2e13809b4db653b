"""Exact graded-commutative algebra over Q.

The engine works in free graded-commutative Q-algebras on explicit
generator sets.  Elements are stored sparsely as a dict from canonical
monomials (sorted tuples of ``(Generator, exponent)`` pairs) to exact
coefficients.  Coefficients are either ``fractions.Fraction`` or, for
computations carrying formal parameters, sparse polynomials in Q[r, s]
(:class:`ParamPoly`); the two coerce freely.

Built-in generators:

* ``kappa(i)`` for ``i >= 1`` -- degree ``2i``,
* ``m(i, j)`` for ``i >= -1``, ``j >= 1`` -- degree ``2(i+j)``;
  ``m(i, 0)`` is identified with ``kappa(i)`` at construction,
* the degree-2 scalars ``lambda``, ``zeta``, ``eta``,
* degree-2 geometric symbols ``e``, ``y``, ``x``, ``u``, ``sigma``
  (``sigma`` squares to zero),
* user-defined generators of any non-negative degree and either parity.

Each element belongs to a :class:`Universe` (an allowed generator set);
mixing universes in arithmetic raises :class:`UniverseError`.  Products
follow the Koszul sign rule and odd generators square to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
import json
import re

SCHEMA_VERSION = "1"

#: Safety cap for truncated power-series work (see riemann_roch).  Plain
#: Element arithmetic is always exact; series helpers truncate here by
#: default so a runaway exponential cannot blow up silently.
DEFAULT_DEGREE_CAP = 64

EVEN = "even"
ODD = "odd"


class GysinError(Exception):
    """Base class for all errors raised by this package."""


class UniverseError(GysinError):
    """Operands or generators belong to different universes."""


class ParityError(GysinError):
    """A graded-parity constraint was violated."""


class DomainError(GysinError):
    """An input is outside the mathematical domain of the operation."""


class ParseError(GysinError):
    """Textual input did not match the element grammar."""


GRAMMAR_HINT = (
    "expected a sum of terms like '3/2*kappa_1*m_{0,1} - m_{-1,2}^2'; "
    "term := [rational '*'] generator ['^' exponent] ('*' generator ['^' exponent])*; "
    "generators: kappa_<i>, m_{<i>,<j>}, lambda, zeta, eta, e, y, x, u, sigma"
)


# ---------------------------------------------------------------------------
# coefficients: Q and Q[r, s]


def as_coefficient(value):
    """Coerce ``value`` to an exact coefficient (Fraction or ParamPoly)."""
    if isinstance(value, ParamPoly):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as an exact coefficient")


class ParamPoly:
    """Sparse polynomial in the formal parameters ``r`` and ``s`` over Q.

    Used as a coefficient ring so that whole computations can be carried
    symbolically in the two parameters and specialized afterwards.
    Supports mixed arithmetic with ``int`` and ``Fraction``.
    """

    __slots__ = ("_terms",)
    PARAMS = ("r", "s")

    def __init__(self, terms=None):
        clean = {}
        for exps, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[(int(exps[0]), int(exps[1]))] = c
        self._terms = clean

    @classmethod
    def const(cls, value):
        return cls({(0, 0): Fraction(value)})

    @classmethod
    def var(cls, name):
        if name not in cls.PARAMS:
            raise DomainError(f"unknown parameter {name!r}; have {cls.PARAMS}")
        exps = tuple(1 if p == name else 0 for p in cls.PARAMS)
        return cls({exps: Fraction(1)})

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self._terms == other._terms
        if isinstance(other, Rational):
            other = Fraction(other)
            if not other:
                return not self._terms
            return self._terms == {(0, 0): other}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if isinstance(other, Rational):
            other = ParamPoly.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = ParamPoly.const(other) if isinstance(other, Rational) else other
        if not isinstance(o, ParamPoly):
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            other = Fraction(other)
            return ParamPoly({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, ParamPoly):
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return ParamPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("ParamPoly powers must be non-negative integers")
        result = ParamPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def subs(self, r, s):
        """Evaluate at exact rational values of the parameters."""
        r = Fraction(r)
        s = Fraction(s)
        total = Fraction(0)
        for (er, es), c in self._terms.items():
            total += c * r**er * s**es
        return total

    @property
    def is_constant(self):
        return all(e == (0, 0) for e in self._terms)

    def constant_value(self):
        if not self.is_constant:
            raise DomainError(f"{self} is not a constant polynomial")
        return self._terms.get((0, 0), Fraction(0))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps in sorted(self._terms, key=lambda e: (sum(e), e)):
            c = self._terms[exps]
            mono = "*".join(
                p if k == 1 else f"{p}^{k}"
                for p, k in zip(self.PARAMS, exps)
                if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"ParamPoly({self})"


def param_r():
    return ParamPoly.var("r")


def param_s():
    return ParamPoly.var("s")


# ---------------------------------------------------------------------------
# generators


_FAMILY_RANK = {"kappa": 0, "m": 1}
_NAMED_SCALARS = ("eta", "lambda", "zeta")
_GEOMETRIC = ("e", "sigma", "u", "x", "y")


@dataclass(frozen=True)
class Generator:
    """A single multiplicative generator with a degree and a parity.

    ``family`` plus ``index`` identifies the generator: ``("kappa", (i,))``,
    ``("m", (i, j))``, a named scalar such as ``("lambda", ())``, a
    geometric symbol such as ``("e", ())``, or a user-chosen family name.
    ``max_power`` caps the exponent (``sigma`` has ``max_power=1``); odd
    generators square to zero regardless.
    """

    family: str
    index: tuple
    degree: int
    parity: str = EVEN
    max_power: int | None = None

    def __post_init__(self):
        if self.degree < 0:
            raise DomainError(f"generator degree must be >= 0, got {self.degree}")
        if self.parity not in (EVEN, ODD):
            raise DomainError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.parity == ODD and self.degree % 2 == 0:
            raise ParityError(f"odd generator {self.family} must have odd degree")
        if self.max_power is not None and self.max_power < 1:
            raise DomainError("max_power must be >= 1 when given")

    def sort_key(self):
        if self.family in _FAMILY_RANK:
            rank = _FAMILY_RANK[self.family]
        elif self.family in _NAMED_SCALARS:
            rank = 2
        elif self.family in _GEOMETRIC:
            rank = 3
        else:
            rank = 4
        return (rank, self.family, self.index)

    @property
    def name(self):
        """Canonical display name, e.g. ``kappa_2`` or ``m_{-1,2}``."""
        if self.family == "kappa":
            return f"kappa_{self.index[0]}"
        if self.family == "m":
            return f"m_{{{self.index[0]},{self.index[1]}}}"
        if self.index:
            return f"{self.family}_{{{','.join(map(str, self.index))}}}"
        return self.family

    def __repr__(self):
        return f"<gen {self.name}>"


def kappa(i):
    """The degree-``2i`` fiber-integration class of the ``i+1`` power of
    the vertical Euler class, ``i >= 1``."""
    if i < 1:
        raise DomainError(f"kappa index must be >= 1, got {i}")
    return Generator("kappa", (int(i),), 2 * int(i))


def m(i, j):
    """The degree-``2(i+j)`` two-index fiber-integration class.

    ``j = 0`` is identified with ``kappa(i)``.  Indices: ``i >= -1``,
    ``j >= 0``, total ``i + j >= 1``.
    """
    i, j = int(i), int(j)
    if i < -1 or j < 0:
        raise DomainError(f"m indices need i >= -1 and j >= 0, got ({i},{j})")
    if i + j < 0:
        raise DomainError(f"m({i},{j}) would have negative degree {2*(i+j)}")
    if j == 0:
        return kappa(i)
    return Generator("m", (i, j), 2 * (i + j))


def _named(family):
    return Generator(family, (), 2)


LAMBDA = _named("lambda")
ZETA = _named("zeta")
ETA = _named("eta")
E = _named("e")
Y = _named("y")
X = _named("x")
U = _named("u")
SIGMA = Generator("sigma", (), 2, EVEN, max_power=1)

_BUILTIN_SINGLETONS = {
    g.family: g for g in (LAMBDA, ZETA, ETA, E, Y, X, U, SIGMA)
}


def user_generator(name, degree, parity=EVEN, max_power=None):
    """A custom generator; ``name`` must not collide with the built-ins."""
    if name in _BUILTIN_SINGLETONS or name in _FAMILY_RANK:
        raise DomainError(f"{name!r} is reserved for a built-in generator")
    if parity == ODD:
        max_power = 1
    return Generator(name, (), int(degree), parity, max_power)


# ---------------------------------------------------------------------------
# universes


@dataclass(frozen=True)
class Universe:
    """An allowed generator set: indexed families plus fixed singletons."""

    name: str
    families: frozenset
    singletons: frozenset

    @classmethod
    def of(cls, name, *gens, families=()):
        return cls(name, frozenset(families), frozenset(gens))

    def __contains__(self, gen):
        return gen.family in self.families or gen in self.singletons

    def check(self, gen):
        if gen not in self:
            raise UniverseError(
                f"generator {gen.name} does not live in universe {self.name!r}"
            )

    def zero(self):
        return Element(self, {})

    def one(self):
        return self.scalar(1)

    def scalar(self, value):
        c = as_coefficient(value)
        return Element(self, {(): c} if c else {})

    def el(self, gen, exp=1):
        """The element given by a single generator power."""
        self.check(gen)
        if exp < 0:
            raise DomainError("generator exponents must be >= 0")
        if exp == 0:
            return self.one()
        limit = 1 if gen.parity == ODD else gen.max_power
        if limit is not None and exp > limit:
            return self.zero()
        return Element(self, {((gen, int(exp)),): Fraction(1)})

    def __repr__(self):
        return f"<universe {self.name}>"


#: Fiber-integration classes and the degree-2 scalars.
CLASSES = Universe.of(
    "classes", LAMBDA, ZETA, ETA, families=("kappa", "m")
)

#: Total-space classes upstairs: vertical Euler class ``e`` and the
#: first Chern class ``y`` of the fibrewise line bundle.
BUNDLE = Universe.of("bundle", E, Y)


# ---------------------------------------------------------------------------
# monomial helpers


def monomial_degree(mono):
    return sum(g.degree * e for g, e in mono)


def _merge_monomials(m1, m2):
    """Product of two canonical monomials.

    Returns ``(monomial, sign)`` or ``None`` when the product vanishes
    (odd square or an exponent past ``max_power``).  The sign is the
    Koszul sign from commuting odd generators into canonical order.
    """
    odd_after = [0] * (len(m1) + 1)
    for i in range(len(m1) - 1, -1, -1):
        odd_after[i] = odd_after[i + 1] + (1 if m1[i][0].parity == ODD else 0)
    out = []
    sign = 1
    i = j = 0
    while i < len(m1) and j < len(m2):
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        k1, k2 = g1.sort_key(), g2.sort_key()
        if k1 < k2:
            out.append((g1, e1))
            i += 1
        elif k1 > k2:
            if g2.parity == ODD and odd_after[i] % 2:
                sign = -sign
            out.append((g2, e2))
            j += 1
        else:
            if g1.parity == ODD:
                return None  # odd generators square to zero
            e = e1 + e2
            if g1.max_power is not None and e > g1.max_power:
                return None
            out.append((g1, e))
            i += 1
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out), sign


# ---------------------------------------------------------------------------
# elements


class Element:
    """An exact element of a free graded-commutative algebra.

    Immutable.  Supports ``+``, ``-``, ``*`` (with scalars and elements),
    integer powers, exact equality, homogeneous decomposition and ring-map
    substitution.  All arithmetic stays within one universe.
    """

    __slots__ = ("universe", "_terms", "_hash")

    def __init__(self, universe, terms):
        clean = {}
        for mono, coeff in terms.items():
            coeff = as_coefficient(coeff)
            if coeff:
                clean[mono] = coeff
        self.universe = universe
        self._terms = clean
        self._hash = None

    # -- introspection ----------------------------------------------------

    def terms(self):
        """Iterate ``(monomial, coefficient)`` pairs in canonical order."""
        return iter(sorted(self._terms.items(), key=_term_sort_key))

    @property
    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degrees(self):
        return sorted({monomial_degree(mo) for mo in self._terms})

    def max_degree(self):
        return max((monomial_degree(mo) for mo in self._terms), default=0)

    def homogeneous_part(self, degree):
        return Element(
            self.universe,
            {mo: c for mo, c in self._terms.items() if monomial_degree(mo) == degree},
        )

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def coefficient(self, gen, exp=1):
        """Coefficient of the single-generator monomial ``gen^exp``."""
        return self._terms.get(((gen, exp),), Fraction(0))

    def constant_term(self):
        return self._terms.get((), Fraction(0))

    def generators(self):
        """Sorted list of generators appearing with nonzero coefficient."""
        seen = {g for mo in self._terms for g, _ in mo}
        return sorted(seen, key=Generator.sort_key)

    # -- arithmetic -------------------------------------------------------

    def _check_same_universe(self, other):
        if self.universe != other.universe:
            raise UniverseError(
                f"cannot combine elements of universes "
                f"{self.universe.name!r} and {other.universe.name!r}"
            )

    def __add__(self, other):
        if isinstance(other, (Rational, ParamPoly)):
            other = self.universe.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check_same_universe(other)
        out = dict(self._terms)
        for mo, c in other._terms.items():
            s = out.get(mo, Fraction(0)) + c
            if s:
                out[mo] = s
            else:
                out.pop(mo, None)
        return Element(self.universe, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.universe, {mo: -c for mo, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (Rational, ParamPoly)):
            other = self.universe.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Rational, ParamPoly)):
            c = as_coefficient(other)
            return Element(self.universe, {mo: v * c for mo, v in self._terms.items()})
        if not isinstance(other, Element):
            return NotImplemented
        return self.mul(other)

    def __rmul__(self, other):
        if isinstance(other, (Rational, ParamPoly)):
            return self.__mul__(other)
        return NotImplemented

    def mul(self, other, max_degree=None):
        """Product, optionally discarding terms above ``max_degree``."""
        self._check_same_universe(other)
        out = {}
        for mo1, c1 in self._terms.items():
            d1 = monomial_degree(mo1)
            for mo2, c2 in other._terms.items():
                if max_degree is not None and d1 + monomial_degree(mo2) > max_degree:
                    continue
                merged = _merge_monomials(mo1, mo2)
                if merged is None:
                    continue
                mono, sign = merged
                c = c1 * c2 if sign > 0 else -(c1 * c2)
                s = out.get(mono, Fraction(0)) + c
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Element(self.universe, out)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("element powers must be non-negative integers")
        result = self.universe.one()
        base = self
        while n:
            if n & 1:
                result = result.mul(base)
            base = base.mul(base) if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (Rational, ParamPoly)):
            other = self.universe.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.universe == other.universe and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.universe.name, frozenset(self._terms.items()))
            )
        return self._hash

    # -- substitution -----------------------------------------------------

    def substitute(self, assignment, universe=None):
        """Apply the ring map sending each generator to its assigned image.

        ``assignment`` maps generators to elements, all in one target
        universe; unassigned generators must exist in the target and map
        to themselves.  Every image must be homogeneous-parity-compatible
        with its generator (even generators get even images, odd get odd).
        """
        targets = {img.universe for img in assignment.values()}
        if len(targets) > 1:
            names = sorted(u.name for u in targets)
            raise UniverseError(f"assignment images span several universes: {names}")
        target = next(iter(targets)) if targets else (universe or self.universe)
        if universe is not None and targets and target != universe:
            raise UniverseError(
                f"assignment images live in {target.name!r}, not {universe.name!r}"
            )
        for gen, img in assignment.items():
            want = 0 if gen.parity == EVEN else 1
            if any(monomial_degree(mo) % 2 != want for mo in img._terms):
                raise ParityError(
                    f"image of {gen.name} must be purely {gen.parity}"
                )
        out = target.zero()
        for mono, coeff in self._terms.items():
            term = target.scalar(coeff)
            for gen, exp in mono:
                img = assignment.get(gen)
                if img is None:
                    img = target.el(gen)  # raises UniverseError if absent
                term = term.mul(img**exp)
            out = out + term
        return out

    # -- rendering --------------------------------------------------------

    def __str__(self):
        return element_to_text(self)

    def __repr__(self):
        return f"Element[{self.universe.name}]({element_to_text(self)})"


def _term_sort_key(item):
    mono, _ = item
    return (
        monomial_degree(mono),
        tuple((g.sort_key(), e) for g, e in mono),
    )


# ---------------------------------------------------------------------------
# text form


def _format_coeff(coeff):
    """Render a coefficient; ParamPoly coefficients are parenthesized."""
    if isinstance(coeff, ParamPoly):
        if coeff.is_constant:
            return _format_coeff(coeff.constant_value())
        return f"({coeff})"
    return str(coeff)


def element_to_text(el):
    """Canonical textual form, e.g. ``3/2*kappa_1*m_{0,1} - m_{-1,2}^2``."""
    if el.is_zero:
        return "0"
    pieces = []
    for mono, coeff in el.terms():
        factors = [
            g.name if e == 1 else f"{g.name}^{e}" for g, e in mono
        ]
        body = "*".join(factors)
        if isinstance(coeff, ParamPoly) and not coeff.is_constant:
            text = f"({coeff})" + (f"*{body}" if body else "")
            sign = "+"
        else:
            q = coeff if isinstance(coeff, Fraction) else coeff.constant_value()
            sign = "-" if q < 0 else "+"
            q = abs(q)
            if not body:
                text = str(q)
            elif q == 1:
                text = body
            else:
                text = f"{q}*{body}"
        pieces.append((sign, text))
    first_sign, first_text = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_text
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


# ---------------------------------------------------------------------------
# parser


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<m>m_\{\s*(?P<mi>-?\d+)\s*,\s*(?P<mj>-?\d+)\s*\})
      | (?P<kappa>kappa_(?P<ki>-?\d+))
      | (?P<name>[A-Za-z][A-Za-z0-9]*)
      | (?P<int>\d+)
      | (?P<op>[*/^+\-])
      | (?P<lbrace>\{)
      | (?P<rbrace>\})
    )""",
    re.VERBOSE,
)


def _tokenize(text):
    text = text.strip()
    pos = 0
    tokens = []
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == match.start():
            raise ParseError(
                f"unexpected character {text[pos]!r} at position {pos}; {GRAMMAR_HINT}"
            )
        if match.group("m"):
            tokens.append(("gen", m(int(match.group("mi")), int(match.group("mj")))))
        elif match.group("kappa"):
            tokens.append(("gen", kappa(int(match.group("ki")))))
        elif match.group("name"):
            name = match.group("name")
            gen = _BUILTIN_SINGLETONS.get(name)
            if gen is None:
                raise ParseError(f"unknown generator {name!r}; {GRAMMAR_HINT}")
            tokens.append(("gen", gen))
        elif match.group("int"):
            tokens.append(("int", int(match.group("int"))))
        elif match.group("op"):
            tokens.append(("op", match.group("op")))
        else:
            tokens.append(("brace", match.group(0).strip()))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, universe, tokens):
        self.universe = universe
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, what):
        raise ParseError(f"{what}; {GRAMMAR_HINT}")

    def parse(self):
        total = self.universe.zero()
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        while True:
            total = total + sign * self.parse_term()
            kind, val = self.peek()
            if kind is None:
                return total
            if kind == "op" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
            else:
                self.fail(f"expected '+' or '-' between terms, got {val!r}")

    def parse_term(self):
        factors = [self.parse_factor()]
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                factors.append(self.parse_factor())
            else:
                break
        term = self.universe.one()
        for f in factors:
            term = term * f
        return term

    def parse_factor(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            num = val
            kind, nxt = self.peek()
            if kind == "op" and nxt == "/":
                self.take()
                kind, den = self.take()
                if kind != "int" or den == 0:
                    self.fail("expected a nonzero integer denominator after '/'")
                return self.universe.scalar(Fraction(num, den))
            return self.universe.scalar(num)
        if kind == "gen":
            self.take()
            gen = val
            self.universe.check(gen)
            exp = 1
            kind, nxt = self.peek()
            if kind == "op" and nxt == "^":
                self.take()
                exp = self.parse_exponent()
            return self.universe.el(gen, exp)
        self.fail(f"expected a rational or a generator, got {val!r}")

    def parse_exponent(self):
        kind, val = self.peek()
        braced = False
        if kind == "brace" and val == "{":
            self.take()
            braced = True
            kind, val = self.peek()
        if kind != "int":
            self.fail("expected an integer exponent after '^'")
        self.take()
        if braced:
            kind, closing = self.take()
            if kind != "brace" or closing != "}":
                self.fail("expected '}' closing the exponent")
        return val


def parse_element(universe, text):
    """Parse the canonical textual form back into an :class:`Element`."""
    if not text.strip():
        raise ParseError(f"empty input; {GRAMMAR_HINT}")
    if text.strip() == "0":
        return universe.zero()
    return _Parser(universe, _tokenize(text)).parse()


# ---------------------------------------------------------------------------
# JSON form


def element_to_json_dict(el):
    """JSON-ready dict: generator list plus (exponent vector, num, den) rows."""
    gens = el.generators()
    rows = []
    for mono, coeff in el.terms():
        if isinstance(coeff, ParamPoly):
            raise DomainError(
                "JSON serialization is defined for rational coefficients only"
            )
        exps = dict(mono)
        vector = [exps.get(g, 0) for g in gens]
        rows.append([vector, coeff.numerator, coeff.denominator])
    return {
        "schema_version": SCHEMA_VERSION,
        "universe": el.universe.name,
        "generators": [g.name for g in gens],
        "terms": rows,
    }


def element_to_json(el):
    return json.dumps(element_to_json_dict(el), sort_keys=True, separators=(",", ":"))


def element_from_json_dict(universe, data):
    if data.get("schema_version") != SCHEMA_VERSION:
        raise DomainError(
            f"unsupported schema_version {data.get('schema_version')!r}"
        )
    if "universe" in data and data["universe"] != universe.name:
        raise UniverseError(
            f"serialized element belongs to universe {data['universe']!r}, "
            f"not {universe.name!r}"
        )
    gens = []
    for name in data["generators"]:
        tokens = _tokenize(name)
        if len(tokens) != 1 or tokens[0][0] != "gen":
            raise ParseError(f"bad generator name {name!r}; {GRAMMAR_HINT}")
        gen = tokens[0][1]
        universe.check(gen)
        gens.append(gen)
    total = universe.zero()
    for vector, num, den in data["terms"]:
        if len(vector) != len(gens):
            raise DomainError("exponent vector length does not match generators")
        term = universe.scalar(Fraction(int(num), int(den)))
        for gen, exp in zip(gens, vector):
            if exp:
                term = term * universe.el(gen, exp)
        total = total + term
    return total


def element_from_json(universe, text):
    return element_from_json_dict(universe, json.loads(text))
