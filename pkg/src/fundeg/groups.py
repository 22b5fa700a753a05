"""Finite abelian groups presented as products of cyclic groups.

A group is given by its cyclic orders ``(n_1, ..., n_k)``; an element is a
tuple of residues ``0 <= e_i < n_i``.  Elements are ranked in mixed radix with
the *last* coordinate varying fastest, and every dense function table in the
package uses that order.

The user's presentation is never normalised.  :func:`primary_decompose` is the
explicit canonicaliser: it splits each ``Z_n`` by the Chinese remainder theorem
and groups the prime-power factors by prime.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GroupMismatchError, ParseError

__all__ = [
    "FiniteAbelianGroup",
    "GroupElement",
    "PrimaryDecomposition",
    "Subgroup",
    "factorize",
    "is_prime",
    "group_parse",
    "primary_decompose",
    "subgroup",
]


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """The group Z_{n_1} x ... x Z_{n_k}."""

    cyclic_orders: tuple[int, ...]

    def __init__(self, cyclic_orders: Iterable[int]):
        orders = tuple(int(n) for n in cyclic_orders)
        for n in orders:
            if n < 1:
                raise ValueError(f"cyclic order must be >= 1, got {n}")
        object.__setattr__(self, "cyclic_orders", orders)

    # -- basic shape -----------------------------------------------------

    @property
    def rank_count(self) -> int:
        """Number of cyclic factors k."""
        return len(self.cyclic_orders)

    @cached_property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    def __len__(self) -> int:
        return self.order

    def __str__(self) -> str:
        if not self.cyclic_orders:
            return "trivial"
        return "x".join(f"Z{n}" for n in self.cyclic_orders)

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({str(self)!r})"

    def __mul__(self, other: FiniteAbelianGroup) -> FiniteAbelianGroup:
        """Direct product; coordinates are concatenated."""
        if not isinstance(other, FiniteAbelianGroup):
            return NotImplemented
        return FiniteAbelianGroup(self.cyclic_orders + other.cyclic_orders)

    def __pow__(self, n: int) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.cyclic_orders * n)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.cyclic_orders, 1)

    @cached_property
    def primes(self) -> tuple[int, ...]:
        ps: set[int] = set()
        for n in self.cyclic_orders:
            ps.update(factorize(n))
        return tuple(sorted(ps))

    def is_p_group(self, p: int | None = None) -> bool:
        """True iff the order is a power of ``p`` (of some prime when p is None).

        The trivial group counts as a p-group for every p.
        """
        if p is None:
            return len(self.primes) <= 1
        return set(self.primes) <= {p}

    # -- elements ----------------------------------------------------------

    def __call__(self, *coords) -> GroupElement:
        """``G(1, 0)`` or ``G((1, 0))`` builds an element, reducing residues."""
        if len(coords) == 1 and isinstance(coords[0], (tuple, list, np.ndarray)):
            coords = tuple(coords[0])
        if len(coords) != self.rank_count:
            raise ValueError(f"{self} expects {self.rank_count} coordinates, got {len(coords)}")
        return GroupElement(self, tuple(int(c) % n for c, n in zip(coords, self.cyclic_orders)))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank_count)

    def __iter__(self) -> Iterator[GroupElement]:
        return self.enumerate()

    def enumerate(self) -> Iterator[GroupElement]:
        for row in self.elements_array:
            yield GroupElement(self, tuple(int(c) for c in row))

    def __contains__(self, a) -> bool:
        return isinstance(a, GroupElement) and a.group == self

    def rank(self, a: GroupElement) -> int:
        self._check(a)
        r = 0
        for c, n in zip(a.coords, self.cyclic_orders):
            r = r * n + c
        return r

    def unrank(self, r: int) -> GroupElement:
        if not 0 <= r < self.order:
            raise IndexError(f"rank {r} out of range for {self} of order {self.order}")
        coords = []
        for n in reversed(self.cyclic_orders):
            r, c = divmod(r, n)
            coords.append(c)
        return GroupElement(self, tuple(reversed(coords)))

    def standard_generators(self) -> list[GroupElement]:
        """Unit vectors, one per nontrivial cyclic factor."""
        gens = []
        for i, n in enumerate(self.cyclic_orders):
            if n == 1:
                continue
            coords = [0] * self.rank_count
            coords[i] = 1
            gens.append(self(coords))
        return gens

    def max_order_element(self) -> GroupElement:
        """An element whose order is the exponent of the group.

        Built prime by prime: for each prime, the factor carrying the largest
        power contributes the matching CRT idempotent-scaled generator.
        """
        coords = [0] * self.rank_count
        for p in self.primes:
            best, best_e = None, 0
            for i, n in enumerate(self.cyclic_orders):
                e = factorize(n).get(p, 0)
                if e > best_e:
                    best, best_e = i, e
            n = self.cyclic_orders[best]
            # n // p^e generates the p-part of Z_n
            coords[best] += n // p**best_e
        return self(coords)

    def _check(self, a: GroupElement) -> None:
        if not isinstance(a, GroupElement) or a.group != self:
            raise GroupMismatchError(f"element {a!r} does not belong to {self}")

    # -- dense numpy views ---------------------------------------------------

    @cached_property
    def strides(self) -> np.ndarray:
        st = np.ones(self.rank_count, dtype=np.int64)
        for i in range(self.rank_count - 2, -1, -1):
            st[i] = st[i + 1] * self.cyclic_orders[i + 1]
        return st

    @cached_property
    def orders_array(self) -> np.ndarray:
        return np.array(self.cyclic_orders, dtype=np.int64)

    @cached_property
    def elements_array(self) -> np.ndarray:
        """All elements as a read-only (order, k) int array in rank order."""
        if self.rank_count == 0:
            arr = np.zeros((1, 0), dtype=np.int64)
        else:
            grids = np.indices(self.cyclic_orders, dtype=np.int64)
            arr = grids.reshape(self.rank_count, -1).T.copy()
        arr.setflags(write=False)
        return arr

    def rank_array(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised rank of an (m, k) array of reduced coordinates."""
        coords = np.asarray(coords, dtype=np.int64)
        if self.rank_count == 0:
            return np.zeros(coords.shape[0], dtype=np.int64)
        return coords @ self.strides

    def shift_permutation(self, a: GroupElement) -> np.ndarray:
        """Index array ``perm`` with ``perm[rank(x)] = rank(x + a)``."""
        return _shift_permutation(self, self.rank(a))

    def add_ranks(self, r: np.ndarray, s: np.ndarray) -> np.ndarray:
        el = self.elements_array
        return self.rank_array((el[r] + el[s]) % self.orders_array)


@lru_cache(maxsize=4096)
def _shift_permutation(group: FiniteAbelianGroup, a_rank: int) -> np.ndarray:
    el = group.elements_array
    perm = group.rank_array((el + el[a_rank]) % group.orders_array)
    perm.setflags(write=False)
    return perm


@dataclass(frozen=True)
class GroupElement:
    group: FiniteAbelianGroup = field(repr=False)
    coords: tuple[int, ...]

    def _same(self, other: GroupElement) -> None:
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise GroupMismatchError(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return self.group(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return self.group(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> GroupElement:
        return self.group(tuple(-a for a in self.coords))

    def __mul__(self, z: int) -> GroupElement:
        if not isinstance(z, (int, np.integer)):
            return NotImplemented
        return self.group(tuple(int(z) * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def rank(self) -> int:
        return self.group.rank(self)

    @property
    def order(self) -> int:
        """Least m >= 1 with m * a = 0."""
        return reduce(
            math.lcm,
            (n // math.gcd(c, n) for c, n in zip(self.coords, self.group.cyclic_orders)),
            1,
        )

    def to_json(self) -> list[int]:
        return list(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


# mirrors of the element API as free functions

def add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def neg(a: GroupElement) -> GroupElement:
    return -a


def zero(group: FiniteAbelianGroup) -> GroupElement:
    return group.zero()


def element_order(a: GroupElement) -> int:
    return a.order


def exponent(group: FiniteAbelianGroup) -> int:
    return group.exponent


_FACTOR = re.compile(r"z(\d+)")


def group_parse(spec: str) -> FiniteAbelianGroup:
    """Parse ``Z<int>(xZ<int>)*``, case-insensitive, ignoring whitespace."""
    if not isinstance(spec, str):
        raise ParseError(f"group spec must be text, got {type(spec).__name__}")
    text = re.sub(r"\s+", "", spec).lower()
    if not text:
        raise ParseError("empty group spec")
    orders = []
    for part in text.split("x"):
        m = _FACTOR.fullmatch(part)
        if m is None:
            raise ParseError(f"bad group factor {part!r} in {spec!r}")
        n = int(m.group(1))
        if n < 1:
            raise ParseError(f"cyclic order must be >= 1 in {spec!r}")
        orders.append(n)
    return FiniteAbelianGroup(orders)


# -- primary decomposition ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class PrimaryDecomposition:
    """CRT splitting ``G = prod_p G_p`` with explicit coordinate maps.

    ``layout[p]`` lists, for every prime-power factor of ``components[i]``, the
    index of the cyclic factor of ``group`` it came from.
    """

    group: FiniteAbelianGroup
    primes: tuple[int, ...]
    components: tuple[FiniteAbelianGroup, ...]
    layout: tuple[tuple[int, ...], ...]

    def component(self, p: int) -> FiniteAbelianGroup:
        return self.components[self.primes.index(p)]

    def iso_to(self, a: GroupElement) -> tuple[GroupElement, ...]:
        self.group._check(a)
        parts = []
        for comp, lay in zip(self.components, self.layout):
            parts.append(comp(tuple(a.coords[i] for i in lay)))
        return tuple(parts)

    def iso_from(self, parts: Sequence[GroupElement]) -> GroupElement:
        if len(parts) != len(self.components):
            raise GroupMismatchError("wrong number of components")
        residues: list[list[tuple[int, int]]] = [[] for _ in self.group.cyclic_orders]
        for comp, lay, part in zip(self.components, self.layout, parts):
            comp._check(part)
            for c, n, i in zip(part.coords, comp.cyclic_orders, lay):
                residues[i].append((c, n))
        return self.group(tuple(_crt(r) for r in residues))

    # dense forms used by the degree engine

    @cached_property
    def component_ranks(self) -> tuple[np.ndarray, ...]:
        """For each prime, the array ``rank(G) -> rank(G_p)`` of the projection."""
        el = self.group.elements_array
        out = []
        for comp, lay in zip(self.components, self.layout):
            coords = el[:, list(lay)] % comp.orders_array if lay else el[:, :0]
            out.append(comp.rank_array(coords))
        return tuple(out)

    @cached_property
    def embed_ranks(self) -> tuple[np.ndarray, ...]:
        """For each prime, ``rank(G_p) -> rank(G)`` of the inclusion of ``G_p``."""
        out = []
        for j, comp in enumerate(self.components):
            ranks = np.empty(comp.order, dtype=np.int64)
            zeros = [c.zero() for c in self.components]
            for r, x in enumerate(comp):
                parts = list(zeros)
                parts[j] = x
                ranks[r] = self.iso_from(parts).rank
            out.append(ranks)
        return tuple(out)

    def project_codomain(self, coords: np.ndarray, p: int) -> np.ndarray:
        """Project an (m, k) coordinate array of ``group`` to the p-component."""
        j = self.primes.index(p)
        comp, lay = self.components[j], self.layout[j]
        return np.asarray(coords)[:, list(lay)] % comp.orders_array


def _crt(residues: list[tuple[int, int]]) -> int:
    x, m = 0, 1
    for r, n in residues:
        # solve x' = x (mod m), x' = r (mod n), gcd(m, n) = 1
        t = ((r - x) * pow(m, -1, n)) % n if n > 1 else 0
        x, m = x + m * t, m * n
    return x


@lru_cache(maxsize=1024)
def primary_decompose(group: FiniteAbelianGroup) -> PrimaryDecomposition:
    per_prime: dict[int, list[tuple[int, int]]] = {}
    for i, n in enumerate(group.cyclic_orders):
        for p, e in factorize(n).items():
            per_prime.setdefault(p, []).append((i, p**e))
    primes = tuple(sorted(per_prime))
    components = tuple(FiniteAbelianGroup([q for _, q in per_prime[p]]) for p in primes)
    layout = tuple(tuple(i for i, _ in per_prime[p]) for p in primes)
    return PrimaryDecomposition(group, primes, components, layout)


# -- subgroups ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup ``H <= ambient`` materialised as its own cyclic product.

    ``embedding[r]`` is the ambient rank of the image of ``group.unrank(r)``;
    ``basis`` holds the ambient elements the cyclic factors map to.
    """

    ambient: FiniteAbelianGroup
    group: FiniteAbelianGroup
    embedding: np.ndarray
    basis: tuple[GroupElement, ...]

    @property
    def order(self) -> int:
        return self.group.order

    def embed(self, x: GroupElement) -> GroupElement:
        return self.ambient.unrank(int(self.embedding[self.group.rank(x)]))

    def __contains__(self, a: GroupElement) -> bool:
        return a in self.ambient and a.rank in self.rank_set

    @cached_property
    def rank_set(self) -> frozenset[int]:
        return frozenset(int(r) for r in self.embedding)


def _closure(group: FiniteAbelianGroup, gen_ranks: list[int]) -> np.ndarray:
    members = np.zeros(group.order, dtype=bool)
    members[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        new = []
        for g in gen_ranks:
            nxt = group.add_ranks(frontier, np.full_like(frontier, g))
            nxt = nxt[~members[nxt]]
            members[nxt] = True
            new.append(nxt)
        frontier = np.unique(np.concatenate(new)) if new else np.array([], dtype=np.int64)
    return np.flatnonzero(members)


def subgroup(group: FiniteAbelianGroup, generators: Sequence[GroupElement]) -> Subgroup:
    """Materialise the subgroup generated by ``generators``.

    Exhaustive closure, then per prime a greedy basis: repeatedly take the
    coset of largest order in ``H_p / S`` and lift it to an element of the same
    order, which is then independent of ``S``.  The result is a product of
    prime-power cyclic groups (elementary-divisor form).
    """
    for g in generators:
        group._check(g)
    members = _closure(group, [g.rank for g in generators])
    el = group.elements_array
    orders = np.array([group.unrank(int(r)).order for r in members])

    basis: list[tuple[int, int]] = []
    for p in group.primes:
        hp = [int(r) for r, o in zip(members, orders) if o > 1 and set(factorize(int(o))) == {p}]
        span = {0}
        while len(span) < len(hp) + 1:
            best, best_k = None, 0
            for h in hp:
                k, acc = 1, h
                while acc not in span:
                    acc = _add1(group, el, acc, h)
                    k += 1
                if k > best_k:
                    best, best_k = h, k
            lift = None
            for s in sorted(span):
                y = _add1(group, el, best, s)
                if group.unrank(y).order == best_k:
                    lift = y
                    break
            if lift is None:  # pragma: no cover - excluded by the basis theorem
                raise AssertionError("no order-preserving lift found")
            basis.append((lift, best_k))
            cyc = [0]
            for _ in range(best_k - 1):
                cyc.append(_add1(group, el, cyc[-1], lift))
            span = {_add1(group, el, s, c) for s in span for c in cyc}

    sub = FiniteAbelianGroup([k for _, k in basis])
    emb = np.zeros(sub.order, dtype=np.int64)
    if basis:
        vecs = el[[b for b, _ in basis]]
        images = (sub.elements_array @ vecs) % group.orders_array
        emb = group.rank_array(images)
    if len(set(emb.tolist())) != len(members) or sub.order != len(members):
        raise AssertionError("subgroup basis does not span")  # pragma: no cover
    return Subgroup(group, sub, emb, tuple(group.unrank(b) for b, _ in basis))


def _add1(group, el, r: int, s: int) -> int:
    return int(((el[r] + el[s]) % group.orders_array) @ group.strides) if group.rank_count else 0
