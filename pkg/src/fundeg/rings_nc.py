"""Finite rings Z_n and M_k(Z_n), and word polynomials over them.

A word polynomial is an integer combination of nonempty words whose letters
are ring constants or variables ``x_i``.  Its degree counts the variable
letters of the longest word with a nonzero coefficient.  Expressions can be
built without a ring (constants then stay raw integers or integer matrices,
which is enough for degree computations over rings such as M_2(Z)); binding a
ring reduces constants and coefficients and enables evaluation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import CapExceeded, GroupMismatchError, ParseError
from .functions import GroupFunction
from .groups import FiniteAbelianGroup, GroupElement

__all__ = [
    "FiniteRing",
    "ring_make_zn",
    "ring_make_mat",
    "ring_parse",
    "Var",
    "Const",
    "NcPolyExpression",
    "nc_parse",
    "nc_degree",
    "nc_evaluate",
    "nc_induced_function",
]

MAX_RING_ORDER = 2**16
MAX_POINTS = 2**24


@dataclass(frozen=True)
class FiniteRing:
    """``Z_n`` (``k == 0``) or the matrix ring ``M_k(Z_n)``.

    Elements are elements of the additive group; matrices are stored
    row-major in the coordinates.
    """

    n: int
    k: int = 0

    is_field = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("ring modulus must be >= 2")
        if self.k < 0:
            raise ValueError("matrix size must be >= 1")
        if self.order > MAX_RING_ORDER:
            raise CapExceeded(f"ring of order {self.order} exceeds {MAX_RING_ORDER}")

    @property
    def kind(self) -> str:
        return "Mat" if self.k else "Zn"

    @property
    def dim(self) -> int:
        return self.k * self.k if self.k else 1

    @property
    def order(self) -> int:
        return self.n**self.dim

    def __str__(self) -> str:
        return f"M{self.k}(Z{self.n})" if self.k else f"Z{self.n}"

    @cached_property
    def additive_group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup((self.n,) * self.dim)

    # -- elements ------------------------------------------------------------

    def element(self, value) -> GroupElement:
        """Convert an int, a nested list (matrices) or a group element."""
        G = self.additive_group
        if isinstance(value, GroupElement):
            G._check(value)
            return value
        if isinstance(value, (int, np.integer)):
            if not self.k:
                return G((int(value),))
            return G([int(value) if i == j else 0 for i in range(self.k) for j in range(self.k)])
        if self.k:
            rows = [list(r) for r in value]
            if len(rows) != self.k or any(len(r) != self.k for r in rows):
                raise GroupMismatchError(f"{value!r} is not a {self.k}x{self.k} matrix")
            return G([int(x) for r in rows for x in r])
        raise GroupMismatchError(f"{value!r} is not an element of {self}")

    def zero(self) -> GroupElement:
        return self.additive_group.zero()

    def one(self) -> GroupElement:
        return self.element(1)

    def elements(self) -> list[GroupElement]:
        return list(self.additive_group)

    def mul_coords(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Products of (m, dim) coordinate arrays."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if not self.k:
            return (x * y) % self.n
        k = self.k
        prod = np.matmul(x.reshape(-1, k, k), y.reshape(-1, k, k)) % self.n
        return prod.reshape(-1, k * k)

    def mul(self, a: GroupElement, b: GroupElement) -> GroupElement:
        a, b = self.element(a), self.element(b)
        out = self.mul_coords(np.array([a.coords]), np.array([b.coords]))[0]
        return self.additive_group(tuple(int(c) for c in out))

    def format(self, a: GroupElement) -> str:
        if not self.k:
            return str(a.coords[0])
        rows = [a.coords[i * self.k:(i + 1) * self.k] for i in range(self.k)]
        return "[" + ",".join("[" + ",".join(str(c) for c in r) + "]" for r in rows) + "]"

    def check_axioms(self, chunk: int = 1 << 16) -> bool:
        """Exhaustive check of associativity, both distributive laws and the unit."""
        el = self.additive_group.elements_array
        m = len(el)
        n = self.n
        one = np.array([self.one().coords])
        if not (np.array_equal(self.mul_coords(el, np.repeat(one, m, 0)), el)
                and np.array_equal(self.mul_coords(np.repeat(one, m, 0), el), el)):
            return False
        # all pairs (b, c), then loop over a
        bi, ci = np.divmod(np.arange(m * m), m)
        b, c = el[bi], el[ci]
        bc = self.mul_coords(b, c)
        bplusc = (b + c) % n
        step = max(1, chunk // m)
        for start in range(0, m, step):
            for a in el[start:start + step]:
                A = np.broadcast_to(a, b.shape)
                ab = self.mul_coords(A, b)
                if not np.array_equal(self.mul_coords(ab, c), self.mul_coords(A, bc)):
                    return False
                ac = self.mul_coords(A, c)
                if not np.array_equal(self.mul_coords(A, bplusc), (ab + ac) % n):
                    return False
                if not np.array_equal(self.mul_coords(bplusc, A), (self.mul_coords(b, A) + self.mul_coords(c, A)) % n):
                    return False
        return True

    def is_commutative(self) -> bool:
        el = self.additive_group.elements_array
        m = len(el)
        ai, bi = np.divmod(np.arange(m * m), m)
        return bool(np.array_equal(self.mul_coords(el[ai], el[bi]), self.mul_coords(el[bi], el[ai])))


def ring_make_zn(n: int) -> FiniteRing:
    return FiniteRing(n)


def ring_make_mat(k: int, n: int) -> FiniteRing:
    if k < 1:
        raise ValueError("matrix size must be >= 1")
    return FiniteRing(n, k)


_RING = re.compile(r"^(?:z(\d+)|m(\d+)\(z(\d+)\))$")


def ring_parse(spec: str) -> FiniteRing:
    """``"Z9"`` or ``"M2(Z2)"``."""
    m = _RING.match(spec.strip().lower().replace(" ", ""))
    if not m:
        raise ParseError(f"bad ring spec {spec!r}; expected Zn or Mk(Zn)")
    try:
        if m.group(1):
            return ring_make_zn(int(m.group(1)))
        return ring_make_mat(int(m.group(2)), int(m.group(3)))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- word polynomials -------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int  # 1-based

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True)
class Const:
    """A ring constant: an int, or a row-major tuple of tuples for a matrix."""

    value: Union[int, tuple]

    def __str__(self) -> str:
        if isinstance(self.value, int):
            return str(self.value)
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in self.value) + "]"


Letter = Union[Var, Const]
Word = tuple


def _bind_const(c: Const, ring: FiniteRing) -> Const:
    """Reduce a constant into the ring; raise if it has the wrong shape."""
    el = ring.element(c.value)
    if ring.k:
        k = ring.k
        return Const(tuple(tuple(el.coords[i * k:(i + 1) * k]) for i in range(k)))
    return Const(el.coords[0])


class NcPolyExpression:
    """``sum z_m m`` over nonempty words ``m``; zero coefficients are dropped."""

    __slots__ = ("nvars", "terms", "ring")

    def __init__(self, nvars: int, terms: Mapping[Word, int] = (), ring: FiniteRing | None = None):
        self.nvars = nvars
        self.ring = ring
        modulus = ring.additive_group.exponent if ring is not None else 0
        clean: dict[Word, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for word, z in items:
            word = tuple(word)
            if not word:
                raise ValueError("words must be nonempty")
            for letter in word:
                if isinstance(letter, Var):
                    if not 1 <= letter.index <= nvars:
                        raise ValueError(f"{letter} out of range 1..{nvars}")
                elif not isinstance(letter, Const):
                    raise TypeError(f"bad letter {letter!r}")
            if ring is not None:
                word = tuple(_bind_const(l, ring) if isinstance(l, Const) else l for l in word)
            clean[word] = clean.get(word, 0) + int(z)
        if modulus:
            clean = {w: z % modulus for w, z in clean.items()}
        self.terms = {w: z for w, z in clean.items() if z}

    def bind(self, ring: FiniteRing) -> NcPolyExpression:
        return NcPolyExpression(self.nvars, self.terms, ring)

    def __add__(self, other: NcPolyExpression) -> NcPolyExpression:
        if not isinstance(other, NcPolyExpression) or other.nvars != self.nvars or other.ring != self.ring:
            raise GroupMismatchError("expressions over different rings or arities")
        terms = dict(self.terms)
        for w, z in other.terms.items():
            terms[w] = terms.get(w, 0) + z
        return NcPolyExpression(self.nvars, terms, self.ring)

    def __neg__(self) -> NcPolyExpression:
        return NcPolyExpression(self.nvars, {w: -z for w, z in self.terms.items()}, self.ring)

    def __mul__(self, other) -> NcPolyExpression:
        """Integer scaling or word concatenation."""
        if isinstance(other, (int, np.integer)):
            return NcPolyExpression(self.nvars, {w: z * int(other) for w, z in self.terms.items()}, self.ring)
        if not isinstance(other, NcPolyExpression) or other.nvars != self.nvars or other.ring != self.ring:
            raise GroupMismatchError("expressions over different rings or arities")
        terms: dict[Word, int] = {}
        for w1, z1 in self.terms.items():
            for w2, z2 in other.terms.items():
                terms[w1 + w2] = terms.get(w1 + w2, 0) + z1 * z2
        return NcPolyExpression(self.nvars, terms, self.ring)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPolyExpression):
            return NotImplemented
        return (self.nvars, self.ring, self.terms) == (other.nvars, other.ring, other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, self.ring, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(isinstance(l, Var) for l in w) for w in self.terms), default=0)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, z in self.terms.items():
            word = "*".join(str(l) for l in w)
            parts.append(word if z == 1 else f"{z}*{word}")
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = render

    def __repr__(self) -> str:
        ring = f", ring={self.ring}" if self.ring else ""
        return f"NcPolyExpression({self.nvars}, {self.render()!r}{ring})"


def nc_degree(f: NcPolyExpression) -> int:
    return f.degree()


# -- parsing --------------------------------------------------------------------

_NC_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\[)|(\])|(,)|(\*)|(\+)|(-))")
_NC_KINDS = ("int", "var", "[", "]", ",", "*", "+", "-")


def _nc_tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _NC_TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        for kind, val in zip(_NC_KINDS, m.groups()):
            if val is not None:
                out.append((kind, val))
                break
        pos = m.end()
    return out


class _NcParser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.n = nvars
        self.toks = _nc_tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0):
        j = self.i + ahead
        return self.toks[j][0] if j < len(self.toks) else None

    def take(self, kind=None):
        if self.i >= len(self.toks):
            raise ParseError(f"unexpected end of input in {self.text!r}")
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> list[tuple[Word, int]]:
        if not self.toks:
            raise ParseError("empty expression")
        terms = []
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        terms.append(self.term(sign))
        while self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            terms.append(self.term(sign))
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.toks[self.i][1]!r} in {self.text!r}")
        return terms

    def _starts_factor(self, ahead: int = 0) -> bool:
        return self.peek(ahead) in ("int", "var", "[")

    def term(self, sign: int) -> tuple[Word, int]:
        coef = 1
        # a leading integer followed by another factor is the coefficient
        if self.peek() == "int" and (
            self._starts_factor(1) or (self.peek(1) == "*" and self._starts_factor(2))
        ):
            coef = int(self.take()[1])
            if self.peek() == "*":
                self.take()
        word = [self.factor()]
        while True:
            if self.peek() == "*":
                self.take()
                word.append(self.factor())
            elif self._starts_factor():
                word.append(self.factor())
            else:
                return tuple(word), sign * coef

    def factor(self) -> Letter:
        kind, val = self.take()
        if kind == "int":
            return Const(int(val))
        if kind == "var":
            i = int(val)
            if not 1 <= i <= self.n:
                raise ParseError(f"variable x{i} out of range 1..{self.n}")
            return Var(i)
        if kind == "[":
            rows = []
            while True:
                self.take("[")
                row = [self.signed_int()]
                while self.peek() == ",":
                    self.take()
                    row.append(self.signed_int())
                self.take("]")
                rows.append(tuple(row))
                if self.peek() == ",":
                    self.take()
                    continue
                self.take("]")
                break
            if any(len(r) != len(rows) for r in rows):
                raise ParseError(f"matrix constant must be square in {self.text!r}")
            return Const(tuple(rows))
        raise ParseError(f"unexpected {val!r} in {self.text!r}")

    def signed_int(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        return sign * int(self.take("int")[1])


def nc_parse(text: str, nvars: int | None = None, ring: FiniteRing | None = None) -> NcPolyExpression:
    """Parse ``"5 x1 [[1,-2],[3,5]] x1 x2 + 2*x1"`` style expressions.

    ``nvars`` defaults to the largest variable index that occurs.
    """
    if nvars is None:
        found = [int(v) for v in re.findall(r"x(\d+)", text)]
        nvars = max(found, default=0)
    terms = _NcParser(text, nvars).parse()
    try:
        return NcPolyExpression(nvars, terms, ring)
    except (GroupMismatchError, ValueError) as exc:
        raise ParseError(str(exc)) from None


# -- evaluation -----------------------------------------------------------------


def _ring_for(f: NcPolyExpression, R: FiniteRing) -> NcPolyExpression:
    if f.ring is not None and f.ring != R:
        raise GroupMismatchError(f"expression is over {f.ring}, not {R}")
    return f if f.ring is not None else f.bind(R)


def _eval_rows(f: NcPolyExpression, R: FiniteRing, xs: list[np.ndarray], m: int) -> np.ndarray:
    """Values at ``m`` points given per-variable coordinate arrays of shape (m, dim)."""
    acc = np.zeros((m, R.dim), dtype=np.int64)
    for word, z in f.terms.items():
        val = None
        for letter in word:
            if isinstance(letter, Var):
                cur = xs[letter.index - 1]
            else:
                cur = np.broadcast_to(np.array(R.element(letter.value).coords), (m, R.dim))
            val = cur if val is None else R.mul_coords(val, cur)
        acc = (acc + z * val) % R.n
    return acc


def nc_evaluate(f: NcPolyExpression, R: FiniteRing, point: Sequence) -> GroupElement:
    f = _ring_for(f, R)
    if len(point) != f.nvars:
        raise ValueError(f"expected {f.nvars} values, got {len(point)}")
    xs = [np.array([R.element(v).coords], dtype=np.int64) for v in point]
    out = _eval_rows(f, R, xs, 1)[0]
    return R.additive_group(tuple(int(c) for c in out))


def nc_induced_function(f: NcPolyExpression, R: FiniteRing) -> GroupFunction:
    """The induced map ``R^N -> R`` on additive groups."""
    f = _ring_for(f, R)
    domain = R.additive_group ** f.nvars
    if domain.order > MAX_POINTS:
        raise CapExceeded(f"{domain.order} points exceed {MAX_POINTS}")
    pts = domain.elements_array
    d = R.dim
    xs = [pts[:, i * d:(i + 1) * d] for i in range(f.nvars)]
    return GroupFunction(domain, R.additive_group, _eval_rows(f, R, xs, domain.order))
