"""Functional degree of maps between finite abelian groups.

``fundeg(f)`` is the least ``n`` with ``I^(n+1) * f = 0``, where ``I`` is the
augmentation ideal of Z[A] acting by shifts, or ``math.inf`` when no such
``n`` exists.

The engine works prime by prime.  A map of finite degree must split along the
primary decompositions of domain and codomain; if it does not, the degree is
infinite and no search is run.  Each p-part is then handled by a breadth-first
search over iterated difference operators along the standard generators of the
domain's p-component, with whole-table deduplication.  Difference operators
commute, so only nondecreasing generator sequences are expanded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CapExceeded, GroupMismatchError, InternalInvariantError
from .functions import GroupFunction
from .group_ring import tau
from .groups import (
    FiniteAbelianGroup,
    GroupElement,
    Subgroup,
    factorize,
    is_prime,
    primary_decompose,
    subgroup,
)

INF = math.inf
EXCEEDS_CAP = "exceeds-cap"

__all__ = [
    "INF",
    "EXCEEDS_CAP",
    "GroupFunction",
    "DegreeReport",
    "constant_fn",
    "identity_fn",
    "hom_fn",
    "char_fn",
    "fundeg",
    "analyze",
    "fundeg_oracle",
    "split_by_primes",
    "join_prime_parts",
    "partdeg",
    "delta",
    "tensor",
    "multiply",
    "compose",
    "combine",
    "restrict",
    "degree_to_json",
    "degree_from_json",
]


def degree_to_json(d) -> int | str:
    return "inf" if d == INF else int(d)


def degree_from_json(obj) -> int | float:
    return INF if obj == "inf" else int(obj)


# -- basic function constructors --------------------------------------------


def constant_fn(A: FiniteAbelianGroup, B: FiniteAbelianGroup, b: GroupElement) -> GroupFunction:
    B._check(b)
    return GroupFunction(A, B, np.tile(np.array(b.coords, dtype=np.int64), (A.order, 1)))


def identity_fn(A: FiniteAbelianGroup) -> GroupFunction:
    return GroupFunction(A, A, A.elements_array)


def hom_fn(
    A: FiniteAbelianGroup, B: FiniteAbelianGroup, images: Sequence[GroupElement]
) -> GroupFunction:
    """The homomorphism sending the i-th standard generator of A to ``images[i]``."""
    gens = A.standard_generators()
    if len(images) != len(gens):
        raise ValueError(f"{A} has {len(gens)} standard generators, got {len(images)} images")
    idx = [i for i, n in enumerate(A.cyclic_orders) if n > 1]
    for i, img in zip(idx, images):
        B._check(img)
        if A.cyclic_orders[i] % img.order:
            raise ValueError(
                f"image {img} has order {img.order}, not dividing {A.cyclic_orders[i]}"
            )
    if not images:
        return GroupFunction.zero(A, B)
    el = A.elements_array[:, idx]
    mat = np.array([img.coords for img in images], dtype=np.int64)
    return GroupFunction(A, B, el @ mat)


def char_fn(
    A: FiniteAbelianGroup, a: GroupElement, B: FiniteAbelianGroup, b: GroupElement
) -> GroupFunction:
    """``chi_a^{A,b}``: sends ``a`` to ``b`` and everything else to 0."""
    A._check(a)
    B._check(b)
    t = np.zeros((A.order, B.rank_count), dtype=np.int64)
    t[A.rank(a)] = b.coords
    return GroupFunction(A, B, t)


# -- the engine ---------------------------------------------------------------


@dataclass
class PrimeDegree:
    prime: int
    degree: int
    bound: int
    witness: list[GroupElement] = field(default_factory=list)


@dataclass
class DegreeReport:
    """Outcome of :func:`analyze`.

    ``witness`` lists domain elements ``g_1..g_m`` (``m = degree``) with
    ``prod (tau_{g_i} - 1) * f != 0``; it is empty for infinite degree.
    """

    degree: int | float
    per_prime: list[PrimeDegree]
    witness: list[GroupElement]
    split: bool

    def to_json(self) -> dict:
        return {
            "fundeg": degree_to_json(self.degree),
            "finite": self.degree != INF,
            "per_prime": [
                {
                    "p": pd.prime,
                    "fundeg": pd.degree,
                    "bound": pd.bound,
                    "witness": [list(g.coords) for g in pd.witness],
                }
                for pd in self.per_prime
            ],
            "witness": [list(g.coords) for g in self.witness],
        }


def split_by_primes(f: GroupFunction) -> dict[int, GroupFunction] | None:
    """Split ``f`` as ``(g_p(a_p))_p`` along primary decompositions, or None.

    The result maps each prime of the codomain to ``g_p : A_p -> B_p``; when
    ``p`` does not divide ``|A|`` the domain of ``g_p`` is the trivial group.
    None means some p-component of ``f(a)`` depends on a q-component of ``a``
    with ``q != p``, which forces infinite degree.
    """
    dA = primary_decompose(f.domain)
    dB = primary_decompose(f.codomain)
    parts: dict[int, GroupFunction] = {}
    for j, q in enumerate(dB.primes):
        Bq = dB.components[j]
        vals = dB.project_codomain(f.table, q)
        if q in dA.primes:
            i = dA.primes.index(q)
            g = vals[dA.embed_ranks[i]]
            if not np.array_equal(g[dA.component_ranks[i]], vals):
                return None
            parts[q] = GroupFunction(dA.components[i], Bq, g)
        else:
            if not (vals == vals[0]).all():
                return None
            parts[q] = GroupFunction(FiniteAbelianGroup(()), Bq, vals[:1])
    return parts


def join_prime_parts(
    domain: FiniteAbelianGroup, codomain: FiniteAbelianGroup, parts: dict[int, GroupFunction]
) -> GroupFunction:
    """Rebuild ``f(a) = (g_p(a_p))_p`` from the output of :func:`split_by_primes`."""
    dA = primary_decompose(domain)
    dB = primary_decompose(codomain)
    out = []
    for a in domain:
        a_parts = dA.iso_to(a)
        b_parts = []
        for q in dB.primes:
            g = parts[q]
            if q in dA.primes:
                b_parts.append(g(a_parts[dA.primes.index(q)]))
            else:
                b_parts.append(g(g.domain.zero()))
        out.append(dB.iso_from(b_parts).coords)
    return GroupFunction(domain, codomain, np.array(out, dtype=np.int64).reshape(domain.order, -1))


def _p_bound(p: int, A: FiniteAbelianGroup, B: FiniteAbelianGroup) -> int:
    """beta * sum(p^alpha_i - 1) for a p-group A and exp(B) = p^beta."""
    beta = factorize(B.exponent).get(p, 0)
    return beta * sum(n - 1 for n in A.cyclic_orders)


def _bfs(group: FiniteAbelianGroup, table: np.ndarray, orders: np.ndarray, bound: int,
         max_cells: int | None = None):
    """Largest m with a nonzero m-fold generator difference, plus its path.

    ``max_cells`` bounds the number of table entries held in one level.
    """
    gens = group.standard_generators()
    perms = [group.shift_permutation(g) for g in gens]
    if not table.any():
        return 0, []
    # entries: key -> (table, index of last generator applied, path)
    level = {table.tobytes(): (table, 0, ())}
    m = 0
    while True:
        nxt: dict[bytes, tuple] = {}
        for t, last, path in level.values():
            for j in range(last, len(perms)):
                d = t[perms[j]] - t
                np.remainder(d, orders, out=d)
                if not d.any():
                    continue
                key = d.tobytes()
                prev = nxt.get(key)
                if prev is None or prev[1] > j:
                    nxt[key] = (d, j, path + (j,))
        if not nxt:
            witness = next(iter(level.values()))[2]
            return m, [gens[j] for j in witness]
        m += 1
        if max_cells is not None and len(nxt) * table.size > max_cells:
            raise CapExceeded(f"difference level {m} holds {len(nxt)} tables, over the memory cap")
        if m > bound:
            raise InternalInvariantError(
                f"difference level {m} nonzero beyond the bound {bound} for {group}"
            )
        level = nxt


def analyze(f: GroupFunction, max_cells: int | None = None) -> DegreeReport:
    parts = split_by_primes(f)
    if parts is None:
        return DegreeReport(INF, [], [], split=False)
    dA = primary_decompose(f.domain)
    per_prime = []
    best, witness = 0, []
    for q, g in parts.items():
        if g.domain.order == 1:
            per_prime.append(PrimeDegree(q, 0, 0))
            continue
        bound = _p_bound(q, g.domain, g.codomain)
        d, path = _bfs(g.domain, g.table, g.codomain.orders_array, bound, max_cells)
        emb = dA.embed_ranks[dA.primes.index(q)]
        lifted = [f.domain.unrank(int(emb[g.domain.rank(x)])) for x in path]
        per_prime.append(PrimeDegree(q, d, bound, lifted))
        if d > best:
            best, witness = d, lifted
    return DegreeReport(best, per_prime, witness, split=True)


def fundeg(f: GroupFunction) -> int | float:
    """Exact functional degree: a nonnegative int, or ``math.inf``."""
    return analyze(f).degree


def fundeg_oracle(f: GroupFunction, cap: int):
    """Slow independent degree computation straight from the definition.

    Applies ``tau_a - 1`` for every nonzero ``a`` in the domain (not only
    generators), expanded through its group ring coefficients, level by
    level, with no splitting and no commutativity shortcut.  Returns the
    degree when it is at most ``cap`` and :data:`EXCEEDS_CAP` otherwise.
    """
    if f.domain.order > 16:
        raise ValueError("fundeg_oracle is limited to domains of order <= 16")
    if not 0 <= cap <= 8:
        raise ValueError("fundeg_oracle cap must lie in [0, 8]")
    A = f.domain
    orders = f.codomain.orders_array
    # each operator as a list of (shift permutation, coefficient)
    ops = [
        [(A.shift_permutation(b), z) for b, z in (tau(a) - 1).coeffs.items()]
        for a in A if not a.is_zero()
    ]
    level = f.table[None, :, :]
    m = 0
    while True:
        images = []
        for op in ops:
            acc = np.zeros_like(level)
            for perm, z in op:
                acc += z * level[:, perm, :]
            images.append(np.remainder(acc, orders))
        nxt = np.concatenate(images)
        nxt = nxt[nxt.reshape(len(nxt), -1).any(axis=1)]
        if not len(nxt):
            return m
        if m == cap:
            return EXCEEDS_CAP
        m += 1
        level = np.unique(nxt, axis=0)


# -- partial degree -----------------------------------------------------------


def _check_presentation(f: GroupFunction, factors: Sequence[FiniteAbelianGroup]) -> None:
    orders: tuple[int, ...] = ()
    for A in factors:
        orders += A.cyclic_orders
    if orders != f.domain.cyclic_orders:
        raise GroupMismatchError(
            f"factors {[str(A) for A in factors]} do not present the domain {f.domain}"
        )


def sections(f: GroupFunction, factors: Sequence[FiniteAbelianGroup], i: int) -> list[GroupFunction]:
    """Distinct one-argument sections ``x -> f(a_1, .., x, .., a_k)`` (1-based ``i``)."""
    _check_presentation(f, factors)
    if not 1 <= i <= len(factors):
        raise IndexError(f"argument index {i} out of range 1..{len(factors)}")
    sizes = [A.order for A in factors]
    t = f.table.reshape(sizes + [f.codomain.rank_count])
    t = np.moveaxis(t, i - 1, 0).reshape(sizes[i - 1], -1, f.codomain.rank_count)
    seen: dict[bytes, GroupFunction] = {}
    for r in range(t.shape[1]):
        sec = np.ascontiguousarray(t[:, r, :])
        key = sec.tobytes()
        if key not in seen:
            seen[key] = GroupFunction(factors[i - 1], f.codomain, sec)
    return list(seen.values())


def partdeg(f: GroupFunction, factors: Sequence[FiniteAbelianGroup], i: int) -> int | float:
    """Partial degree of ``f`` in its ``i``-th argument (1-based).

    ``factors`` is the product presentation of the domain: their concatenated
    cyclic orders must equal ``f.domain.cyclic_orders``.
    """
    return max((fundeg(s) for s in sections(f, factors, i)), default=0)


# -- extremal degree ------------------------------------------------------------


@lru_cache(maxsize=256)
def delta(A: FiniteAbelianGroup, B: FiniteAbelianGroup) -> int | float:
    """Largest functional degree of any map ``A -> B``.

    Attained by the characteristic function of 0 with value of maximal order;
    infinite exactly when A and B have elements of coprime prime orders.
    """
    if A.order == 1 or B.order == 1:
        return 0
    if any(p != q for p in A.primes for q in B.primes):
        return INF
    return fundeg(char_fn(A, A.zero(), B, B.max_order_element()))


# -- combinators --------------------------------------------------------------


def _multiplier(ring, codomain: FiniteAbelianGroup):
    if ring is None:
        if codomain.rank_count == 1 and is_prime(codomain.cyclic_orders[0]):
            from .finite_field import field_make

            return field_make(codomain.cyclic_orders[0], 1)
        raise GroupMismatchError(f"codomain {codomain} carries no default field structure")
    if ring.additive_group != codomain:
        raise GroupMismatchError(f"{ring} does not live on {codomain}")
    return ring


def tensor(f: GroupFunction, g: GroupFunction, field=None) -> GroupFunction:
    """``(f (x) g)(a, b) = f(a) * g(b)`` on ``A x B`` for maps into a field.

    ``field`` is a :class:`~fundeg.finite_field.FiniteField` on the common
    codomain; it defaults to the prime field when the codomain is ``Z_p``.
    """
    if f.codomain != g.codomain:
        raise GroupMismatchError("tensor factors need a common codomain")
    field = _multiplier(field, f.codomain)
    if not getattr(field, "is_field", False):
        raise GroupMismatchError(f"{field} is not a field")
    left = np.repeat(f.table, g.domain.order, axis=0)
    right = np.tile(g.table, (f.domain.order, 1))
    return GroupFunction(f.domain * g.domain, f.codomain, field.mul_coords(left, right))


def multiply(f: GroupFunction, g: GroupFunction, ring=None) -> GroupFunction:
    """Pointwise product ``x -> f(x) * g(x)`` in a finite ring or field."""
    f._same_shape(g)
    ring = _multiplier(ring, f.codomain)
    return GroupFunction(f.domain, f.codomain, ring.mul_coords(f.table, g.table))


def compose(g: GroupFunction, f: GroupFunction) -> GroupFunction:
    """``g o f``."""
    if f.codomain != g.domain:
        raise GroupMismatchError(f"cannot compose: {f.codomain} != {g.domain}")
    return GroupFunction(f.domain, g.codomain, g.table[f.value_ranks])


def combine(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """``a -> (f(a), g(a))`` into ``B x C``."""
    if f.domain != g.domain:
        raise GroupMismatchError("combined functions need a common domain")
    return GroupFunction(f.domain, f.codomain * g.codomain, np.hstack([f.table, g.table]))


def restrict(f: GroupFunction, generators: Sequence[GroupElement] | Subgroup) -> GroupFunction:
    """Restriction of ``f`` to a subgroup, materialised as its own group."""
    sub = generators if isinstance(generators, Subgroup) else subgroup(f.domain, generators)
    if sub.ambient != f.domain:
        raise GroupMismatchError("subgroup is not inside the domain")
    return GroupFunction(sub.group, f.codomain, f.table[sub.embedding])
