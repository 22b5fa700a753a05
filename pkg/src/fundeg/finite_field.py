"""GF(p^alpha) arithmetic and multivariate polynomials over it.

Field elements are coefficient vectors ``(c_0, ..., c_{alpha-1})`` in the
power basis ``1, t, ..., t^(alpha-1)`` of a root ``t`` of the modulus.  This
vector *is* the coordinate tuple of the element in the additive group
``(Z_p)^alpha``, so the integer index of an element is its mixed-radix rank
there (``c_0`` most significant).  Dense evaluations work on index arrays and
use log/antilog tables.

The default modulus is the smallest monic irreducible polynomial of degree
alpha when read as the integer ``sum c_i p^i``; for GF(8) this gives
``t^3 + t + 1``.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, GroupMismatchError, ParseError
from .functions import GroupFunction
from .groups import FiniteAbelianGroup, GroupElement, factorize, is_prime

__all__ = [
    "FiniteField",
    "FqElement",
    "MultivariatePolynomial",
    "field_make",
    "poly_parse",
    "digit_sum",
    "total_degree",
    "pweight_degree",
    "reduce_mod_field",
    "evaluate",
    "induced_function",
]

MAX_FIELD_ORDER = 2**16
MAX_EXPONENT = 2**63


# -- dense Z_p[t] helpers (coefficient lists, low degree first) ---------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return q, a


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    deg = len(mod) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            _, r = _poly_divmod(mod, list(low) + [1], p)
            if not r:
                return False
    return True


def _smallest_irreducible(p: int, alpha: int) -> tuple[int, ...]:
    for n in range(p**alpha):
        low = []
        for _ in range(alpha):
            n, c = divmod(n, p)
            low.append(c)
        cand = low + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FiniteField:
    """GF(p^alpha) with a fixed monic irreducible modulus (low degree first)."""

    p: int
    alpha: int
    modulus: tuple[int, ...]

    is_field = True

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteField)
            and (self.p, self.alpha, self.modulus) == (other.p, other.alpha, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.alpha, self.modulus))

    @property
    def q(self) -> int:
        return self.p**self.alpha

    @property
    def order(self) -> int:
        return self.q

    def __repr__(self) -> str:
        if self.alpha == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.alpha}, modulus={_render_tpoly(self.modulus, self.p)})"

    @cached_property
    def additive_group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup((self.p,) * self.alpha)

    # -- elements ------------------------------------------------------------

    def __call__(self, value) -> FqElement:
        """An element from an int (prime subfield), a coefficient vector, or a group element."""
        if isinstance(value, FqElement):
            if value.field != self:
                raise GroupMismatchError(f"{value!r} is not in {self}")
            return value
        if isinstance(value, GroupElement):
            self.additive_group._check(value)
            return FqElement(self, value.coords)
        if isinstance(value, (int, np.integer)):
            return FqElement(self, (int(value) % self.p,) + (0,) * (self.alpha - 1))
        coeffs = [int(c) for c in value]
        if len(coeffs) > self.alpha:
            _, coeffs = _poly_divmod(coeffs, self.modulus, self.p)
        coeffs = [c % self.p for c in coeffs] + [0] * (self.alpha - len(coeffs))
        return FqElement(self, tuple(coeffs))

    def zero(self) -> FqElement:
        return self(0)

    def one(self) -> FqElement:
        return self(1)

    def gen(self) -> FqElement:
        """The root ``t`` of the modulus."""
        return self([0, 1])

    def elements(self) -> list[FqElement]:
        return [self.from_index(i) for i in range(self.q)]

    def __iter__(self):
        return iter(self.elements())

    def index(self, x: FqElement) -> int:
        r = 0
        for c in x.coeffs:
            r = r * self.p + c
        return r

    def from_index(self, i: int) -> FqElement:
        return FqElement(self, tuple(int(c) for c in self.additive_group.elements_array[i]))

    def _mul_slow(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        _, r = _poly_divmod(prod, self.modulus, self.p)
        return tuple(r + [0] * (self.alpha - len(r)))

    # -- log tables ------------------------------------------------------------

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        one = (1,) + (0,) * (self.alpha - 1)
        if q == 2:
            return np.array([1], dtype=np.int64), np.array([0, 0], dtype=np.int64)
        cofactors = [(q - 1) // r for r in factorize(q - 1)]

        def power(x, e):
            result, base = one, x
            while e:
                if e & 1:
                    result = self._mul_slow(result, base)
                base = self._mul_slow(base, base)
                e >>= 1
            return result

        for i in range(2, q):
            g = self.from_index(i).coeffs
            if all(power(g, c) != one for c in cofactors):
                break
        else:  # pragma: no cover
            raise AssertionError("no primitive element")
        exp = np.empty(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = one
        for k in range(q - 1):
            idx = self.index(FqElement(self, x))
            exp[k] = idx
            log[idx] = k
            x = self._mul_slow(x, g)
        return exp, log

    def mul_index(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        exp, log = self._tables
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def add_index(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        G = self.additive_group
        el = G.elements_array
        return G.rank_array((el[a] + el[b]) % self.p)

    def pow_index(self, a: np.ndarray, e: int) -> np.ndarray:
        exp, log = self._tables
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = exp[(log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def mul_coords(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Pointwise product of (m, alpha) coordinate arrays."""
        G = self.additive_group
        prod = self.mul_index(G.rank_array(x), G.rank_array(y))
        return G.elements_array[prod]


@lru_cache(maxsize=64)
def field_make(p: int, alpha: int = 1, modulus: tuple[int, ...] | None = None) -> FiniteField:
    """GF(p^alpha); the modulus defaults to the smallest monic irreducible."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if alpha < 1:
        raise ValueError("extension degree must be >= 1")
    if p**alpha > MAX_FIELD_ORDER:
        raise ValueError(f"field order {p}^{alpha} exceeds {MAX_FIELD_ORDER}")
    if modulus is None:
        modulus = _smallest_irreducible(p, alpha)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != alpha + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree alpha")
        if not _is_irreducible(modulus, p):
            raise ValueError(f"modulus {_render_tpoly(modulus, p)} is reducible")
    return FiniteField(p, alpha, modulus)


@dataclass(frozen=True)
class FqElement:
    field: FiniteField
    coeffs: tuple[int, ...]

    def _other(self, other) -> FqElement:
        if isinstance(other, (int, np.integer)):
            return self.field(int(other))
        if not isinstance(other, FqElement) or other.field != self.field:
            raise GroupMismatchError("field elements from different fields")
        return other

    def __add__(self, other) -> FqElement:
        other = self._other(other)
        p = self.field.p
        return FqElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> FqElement:
        p = self.field.p
        return FqElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other) -> FqElement:
        return self + (-self._other(other))

    def __rsub__(self, other) -> FqElement:
        return self._other(other) - self

    def __mul__(self, other) -> FqElement:
        other = self._other(other)
        return FqElement(self.field, self.field._mul_slow(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FqElement:
        if e < 0:
            return self.inv() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> FqElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.q - 2)

    def __truediv__(self, other) -> FqElement:
        return self * self._other(other).inv()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def index(self) -> int:
        return self.field.index(self)

    def to_group(self) -> GroupElement:
        return self.field.additive_group(self.coeffs)

    def __repr__(self) -> str:
        return _render_coef(self)


def fq_add(a: FqElement, b: FqElement) -> FqElement:
    return a + b


def fq_mul(a: FqElement, b: FqElement) -> FqElement:
    return a * b


def fq_neg(a: FqElement) -> FqElement:
    return -a


def fq_inv(a: FqElement) -> FqElement:
    return a.inv()


def _render_tpoly(coeffs: Sequence[int], p: int) -> str:
    parts = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d] % p
        if not c:
            continue
        if d == 0:
            parts.append(str(c))
        else:
            mono = "t" if d == 1 else f"t^{d}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"


def _render_coef(c: FqElement) -> str:
    if c.field.alpha == 1:
        return str(c.coeffs[0])
    s = _render_tpoly(c.coeffs, c.field.p)
    return f"({s})" if "+" in s else s


# -- multivariate polynomials -------------------------------------------------


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of n."""
    if n < 0:
        raise ValueError("digit_sum of a negative number")
    s = 0
    while n:
        n, d = divmod(n, p)
        s += d
    return s


class MultivariatePolynomial:
    """Sparse polynomial ``sum c_e x_1^e_1 ... x_n^e_n`` over a finite field."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FiniteField, nvars: int, terms: Mapping[tuple[int, ...], object] = ()):
        self.field = field
        self.nvars = nvars
        clean: dict[tuple[int, ...], FqElement] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has wrong length for {nvars} variables")
            if any(e < 0 or e >= MAX_EXPONENT for e in exps):
                raise ValueError(f"exponent out of range in {exps}")
            c = field(c)
            if exps in clean:
                c = clean[exps] + c
            clean[exps] = c
        self.terms = {e: c for e, c in clean.items() if not c.is_zero()}

    @classmethod
    def constant(cls, field, nvars, c) -> MultivariatePolynomial:
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field, nvars, i: int) -> MultivariatePolynomial:
        """The variable ``x_i`` (1-based)."""
        exps = [0] * nvars
        exps[i - 1] = 1
        return cls(field, nvars, {tuple(exps): 1})

    def _other(self, other) -> MultivariatePolynomial:
        if isinstance(other, MultivariatePolynomial):
            if other.field != self.field or other.nvars != self.nvars:
                raise GroupMismatchError("polynomials over different rings")
            return other
        return MultivariatePolynomial.constant(self.field, self.nvars, other)

    def __add__(self, other) -> MultivariatePolynomial:
        other = self._other(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return MultivariatePolynomial(self.field, self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> MultivariatePolynomial:
        return MultivariatePolynomial(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> MultivariatePolynomial:
        return self + (-self._other(other))

    def __rsub__(self, other) -> MultivariatePolynomial:
        return self._other(other) - self

    def __mul__(self, other) -> MultivariatePolynomial:
        other = self._other(other)
        terms: dict[tuple[int, ...], FqElement] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                terms[e] = terms[e] + c if e in terms else c
        return MultivariatePolynomial(self.field, self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultivariatePolynomial:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return MultivariatePolynomial(self.field, self.nvars, {tuple(x * n for x in e): c**n})
        result = MultivariatePolynomial.constant(self.field, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultivariatePolynomial):
            return NotImplemented
        return (self.field, self.nvars, self.terms) == (other.field, other.nvars, other.terms)

    def __hash__(self) -> int:
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def pweight_degree(self) -> int:
        p = self.field.p
        return max((sum(digit_sum(x, p) for x in e) for e in self.terms), default=0)

    def reduce_mod_field(self) -> MultivariatePolynomial:
        """Remainder modulo all ``x_i^q - x_i``; the induced function is unchanged."""
        q = self.field.q

        def red(e):
            return 0 if e == 0 else (e - 1) % (q - 1) + 1

        return MultivariatePolynomial(
            self.field, self.nvars, [(tuple(red(x) for x in e), c) for e, c in self.terms.items()]
        )

    def is_reduced(self) -> bool:
        q = self.field.q
        return all(x < q for e in self.terms for x in e)

    def evaluate(self, point: Sequence) -> FqElement:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        xs = [self.field(v) for v in point]
        acc = self.field.zero()
        for e, c in self.terms.items():
            term = c
            for x, k in zip(xs, e):
                if k:
                    term = term * x**k
            acc = acc + term
        return acc

    def value_indices(self) -> np.ndarray:
        """Field indices of the values at every point of F^N, in domain rank order."""
        F = self.field
        q = F.q
        npts = q**self.nvars
        if npts > 2**24:
            raise CapExceeded(f"{npts} points exceed the dense evaluation limit")
        r = np.arange(npts, dtype=np.int64)
        vars_ = [(r // q ** (self.nvars - 1 - i)) % q for i in range(self.nvars)]
        acc = np.zeros(npts, dtype=np.int64)
        for e, c in self.terms.items():
            term = np.full(npts, c.index, dtype=np.int64)
            for v, k in zip(vars_, e):
                if k:
                    term = F.mul_index(term, F.pow_index(v, k))
            acc = F.add_index(acc, term)
        return acc

    def domain(self) -> FiniteAbelianGroup:
        return self.field.additive_group ** self.nvars

    def induced_function(self) -> GroupFunction:
        """The map ``F^N -> F`` on additive groups ``(Z_p)^(alpha N) -> (Z_p)^alpha``."""
        F = self.field
        vals = F.additive_group.elements_array[self.value_indices()]
        return GroupFunction(self.domain(), F.additive_group, vals)

    # -- text and JSON -----------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            coef = _render_coef(c)
            if not mono:
                parts.append(coef)
            elif c == self.field.one():
                parts.append(mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"MultivariatePolynomial({self.field!r}, {self.nvars}, {self.render()!r})"

    def to_json(self) -> dict:
        F = self.field
        return {
            "p": F.p,
            "alpha": F.alpha,
            "modulus": list(F.modulus),
            "nvars": self.nvars,
            "terms": [
                {"exps": list(e), "coef": list(self.terms[e].coeffs)}
                for e in sorted(self.terms, reverse=True)
            ],
        }

    @classmethod
    def from_json(cls, obj) -> MultivariatePolynomial:
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            F = field_make(int(obj["p"]), int(obj["alpha"]), tuple(obj["modulus"]))
            return cls(F, int(obj["nvars"]), [(t["exps"], t["coef"]) for t in obj["terms"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad polynomial JSON: {exc}") from None


def total_degree(f: MultivariatePolynomial) -> int:
    return f.total_degree()


def pweight_degree(f: MultivariatePolynomial) -> int:
    return f.pweight_degree()


def reduce_mod_field(f: MultivariatePolynomial) -> MultivariatePolynomial:
    return f.reduce_mod_field()


def evaluate(f: MultivariatePolynomial, point: Sequence) -> FqElement:
    return f.evaluate(point)


def induced_function(f: MultivariatePolynomial) -> GroupFunction:
    return f.induced_function()


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(t)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        kinds = ("int", "var", "t", "^", "*", "+", "-", "(", ")")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                out.append((kind, val))
                break
        pos = m.end()
    return out


class _PolyParser:
    def __init__(self, field: FiniteField, nvars: int, text: str):
        self.F = field
        self.n = nvars
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        if self.i >= len(self.toks):
            raise ParseError(f"unexpected end of input in {self.text!r}")
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> MultivariatePolynomial:
        if not self.toks:
            raise ParseError("empty polynomial")
        f = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.toks[self.i][1]!r} in {self.text!r}")
        return f

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term() if sign > 0 else -self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while True:
            if self.peek() == "*":
                self.take()
                acc = acc * self.power()
            elif self.peek() in ("int", "var", "t", "("):
                acc = acc * self.power()
            else:
                return acc

    def power(self):
        base = self.primary()
        if self.peek() == "^":
            self.take()
            e = int(self.take("int")[1])
            if e >= MAX_EXPONENT:
                raise ParseError(f"exponent {e} too large")
            base = base**e
        return base

    def primary(self):
        kind, val = self.take()
        if kind == "int":
            return MultivariatePolynomial.constant(self.F, self.n, int(val))
        if kind == "var":
            i = int(val)
            if not 1 <= i <= self.n:
                raise ParseError(f"variable x{i} out of range 1..{self.n}")
            return MultivariatePolynomial.variable(self.F, self.n, i)
        if kind == "t":
            if self.F.alpha == 1:
                raise ParseError("'t' is only available in extension fields")
            return MultivariatePolynomial.constant(self.F, self.n, self.F.gen())
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


def poly_parse(field: FiniteField, nvars: int, text: str) -> MultivariatePolynomial:
    """Parse sums of products of integers, ``t``, ``x<i>`` and parenthesised sums.

    ``*`` may be omitted between factors and ``^`` binds to one factor.
    """
    return _PolyParser(field, nvars, text).parse()


def parse_field_spec(spec: str) -> FiniteField:
    """``"p,alpha"`` or ``"p"`` to a field."""
    try:
        parts = [int(x) for x in spec.split(",")]
    except ValueError:
        raise ParseError(f"bad field spec {spec!r}; expected p,alpha") from None
    if len(parts) not in (1, 2):
        raise ParseError(f"bad field spec {spec!r}; expected p,alpha")
    try:
        return field_make(*parts)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
