"""Seeded generators of random systems, and the randomized verifier suite.

Every generator takes a ``numpy.random.Generator`` so a fixed seed
reproduces the same instances.  Families are built so that their hypothesis
usually holds (degree budgets), and ``sample_family`` rejects the rest.
"""

from __future__ import annotations

import hashlib
import json
from typing import Callable

import numpy as np

from .chevalley import SystemInstance, VerifierReport, verify
from .degree import hom_fn
from .finite_field import FiniteField, MultivariatePolynomial, digit_sum, field_make
from .functions import GroupFunction
from .groups import FiniteAbelianGroup, factorize, subgroup
from .rings_nc import Const, FiniteRing, NcPolyExpression, Var, nc_induced_function, ring_make_mat, ring_make_zn

__all__ = [
    "random_table",
    "random_poly",
    "random_nc",
    "random_hom",
    "FAMILIES",
    "sample_family",
    "run_suite",
    "suite_json",
]


def _int(rng, lo, hi) -> int:
    """Uniform integer in [lo, hi]."""
    return int(rng.integers(lo, hi + 1))


def random_table(rng: np.random.Generator, A: FiniteAbelianGroup, B: FiniteAbelianGroup) -> GroupFunction:
    t = rng.integers(0, np.iinfo(np.int64).max, size=(A.order, B.rank_count)) % B.orders_array
    return GroupFunction(A, B, t)


def random_hom(rng, A: FiniteAbelianGroup, B: FiniteAbelianGroup) -> GroupFunction:
    """A uniformly chosen homomorphism ``A -> B`` (images of standard generators)."""
    images = []
    for g in A.standard_generators():
        n = g.order
        allowed = [b for b in B if (b * n).is_zero()]
        images.append(allowed[_int(rng, 0, len(allowed) - 1)])
    return hom_fn(A, B, images)


def random_poly(
    rng, F: FiniteField, N: int, *, max_terms: int = 3, pdeg_budget: int | None = None,
    reduced: bool = True, max_exp: int | None = None, zero_constant: bool = False,
) -> MultivariatePolynomial:
    """Random sparse polynomial; each monomial has p-weight at most ``pdeg_budget``."""
    top = F.q - 1 if reduced else (max_exp if max_exp is not None else 2 * F.q)
    terms = []
    for _ in range(_int(rng, 0, max_terms)):
        left = pdeg_budget if pdeg_budget is not None else 10**9
        exps = []
        for _ in range(N):
            choices = [e for e in range(top + 1) if digit_sum(e, F.p) <= left]
            e = choices[_int(rng, 0, len(choices) - 1)]
            left -= digit_sum(e, F.p)
            exps.append(e)
        perm = rng.permutation(N)
        exps = [exps[i] for i in perm]
        if zero_constant and not any(exps):
            continue
        terms.append((tuple(exps), F.from_index(_int(rng, 1, F.q - 1))))
    return MultivariatePolynomial(F, N, terms)


def random_nc(rng, R: FiniteRing, N: int, max_deg: int, *, max_terms: int = 3) -> NcPolyExpression:
    """Random word polynomial with every word of degree at most ``max_deg``."""
    elements = R.elements()
    terms = []
    for _ in range(_int(rng, 1, max_terms)):
        nv = _int(rng, 0, max_deg) if N else 0
        nc = _int(rng, 0 if nv else 1, 2)
        letters = [Var(_int(rng, 1, N)) for _ in range(nv)]
        for _ in range(nc):
            c = elements[_int(rng, 0, len(elements) - 1)]
            letters.insert(_int(rng, 0, len(letters)), Const(_const_value(R, c)))
        terms.append((tuple(letters), _int(rng, 1, R.additive_group.exponent - 1)))
    return NcPolyExpression(N, terms, R)


def _const_value(R: FiniteRing, c):
    if not R.k:
        return c.coords[0]
    k = R.k
    return tuple(tuple(c.coords[i * k:(i + 1) * k]) for i in range(k))


def random_low_degree_function(rng, n: int, N: int, budget: int) -> GroupFunction:
    """``Z_n^N -> Z_n`` with fundeg <= budget: shifted word polynomials over the ring Z_n, summed."""
    R = ring_make_zn(n)
    dom = R.additive_group**N
    acc = np.zeros((dom.order, 1), dtype=np.int64)
    for _ in range(_int(rng, 1, 2)):
        f = nc_induced_function(random_nc(rng, R, N, budget, max_terms=2), R)
        shift = dom.unrank(_int(rng, 0, dom.order - 1))
        acc = acc + _int(rng, 1, n - 1) * f.table[dom.shift_permutation(shift)]
    return GroupFunction(dom, R.additive_group, acc)


def _split_budget(rng, total: int, r: int) -> list[int]:
    cuts = sorted(_int(rng, 0, total) for _ in range(r - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [total])]


# -- families -------------------------------------------------------------------


def _warning1_cyclic(n: int):
    def gen(rng):
        N = _int(rng, 1, 3)
        r = _int(rng, 1, 2)
        budgets = _split_budget(rng, N - 1, r)
        fs = [random_low_degree_function(rng, n, N, b) for b in budgets]
        return "warning1-group", SystemInstance(FiniteAbelianGroup((n,)), N, fs)
    return gen


def _pweight(p: int, alpha: int, n_max: int):
    F = field_make(p, alpha)

    def gen(rng):
        N = _int(rng, 1, n_max)
        r = _int(rng, 1, 2)
        budgets = _split_budget(rng, N - 1, r)
        polys = [random_poly(rng, F, N, pdeg_budget=b) for b in budgets]
        return "warning1-pweight", SystemInstance.from_polys(polys, F, N)
    return gen


def _ring_m2z2(rng):
    R = ring_make_mat(2, 2)
    N = _int(rng, 1, 3)
    r = _int(rng, 1, 2)
    budgets = _split_budget(rng, N - 1, r)
    exprs = [random_nc(rng, R, N, b) for b in budgets]
    return "warning1-ring", SystemInstance.from_nc(exprs, R, N)


def _chevalley_z4_z2(rng):
    # N * 3 > (sum fundeg) * 1
    A, B = FiniteAbelianGroup((4,)), FiniteAbelianGroup((2,))
    N = _int(rng, 1, 2)
    dom = A**N
    fs = []
    for _ in range(_int(rng, 1, 2)):
        h = random_hom(rng, dom, B)
        g = random_hom(rng, dom, B)
        prod = (h.table * g.table + _int(rng, 0, 1)) % 2
        fs.append(GroupFunction(dom, B, prod))
    return "chevalley-group", SystemInstance(A, N, fs)


_SMALL_FIELDS = [(2, 1, 3), (3, 1, 3), (2, 2, 3), (2, 3, 2), (3, 2, 3)]  # (p, alpha, N_max), q^N <= 729


def _pick_field(rng):
    p, alpha, n_max = _SMALL_FIELDS[_int(rng, 0, len(_SMALL_FIELDS) - 1)]
    return field_make(p, alpha), n_max


def _restricted_subgroup(rng):
    F, n_max = _pick_field(rng)
    N = _int(rng, 1, n_max)
    dom = F.additive_group**N
    gens = [dom.unrank(_int(rng, 0, dom.order - 1)) for _ in range(_int(rng, 1, 3))]
    M = factorize(subgroup(dom, gens).order).get(F.p, 0)
    budget = max(0, (M - 1) // F.alpha)
    polys = [random_poly(rng, F, N, pdeg_budget=_int(rng, 0, budget)) for _ in range(_int(rng, 1, 2))]
    return "restricted-subgroup", SystemInstance.from_polys(polys, F, N, restriction=gens)


def _restricted_range(rng):
    choices = [((2, 2, 2), 2, 2), ((4, 2), 2, 1), ((3, 3), 3, 1), ((9,), 3, 1), ((2, 2, 2), 2, 1)]
    orders, p, k = choices[_int(rng, 0, len(choices) - 1)]
    A = FiniteAbelianGroup(orders)
    B = FiniteAbelianGroup((p,) * k)
    Zp = FiniteAbelianGroup((p,))
    fs = []
    for _ in range(_int(rng, 1, 2)):
        cols = []
        for _ in range(k):
            h1, h2 = random_hom(rng, A, Zp), random_hom(rng, A, Zp)
            c = _int(rng, 0, p - 1)
            col = (h1.table * h2.table * _int(rng, 0, 1) + h1.table * _int(rng, 0, 1) + c) % p
            cols.append(col)
        fs.append(GroupFunction(A, B, np.hstack(cols)))
    return "restricted-range", SystemInstance(A, 1, fs)


def _restricted_range_field(rng):
    F, n_max = _pick_field(rng)
    N = _int(rng, 1, n_max)
    polys = [random_poly(rng, F, N, pdeg_budget=_int(rng, 0, 2), max_terms=2) for _ in range(_int(rng, 1, 2))]
    return "restricted-range-field", SystemInstance.from_polys(polys, F, N)


def _warning2(rng):
    F, n_max = _pick_field(rng)
    N = _int(rng, 1, n_max)
    polys = [random_poly(rng, F, N, pdeg_budget=_int(rng, 0, N), zero_constant=True) for _ in range(_int(rng, 1, 2))]
    return "warning2", SystemInstance.from_polys(polys, F, N)


FAMILIES: dict[str, Callable] = {
    "warning1-group-Z8": _warning1_cyclic(8),
    "warning1-group-Z9": _warning1_cyclic(9),
    "warning1-pweight-GF2": _pweight(2, 1, 5),
    "warning1-pweight-GF4": _pweight(2, 2, 3),
    "warning1-ring-M2Z2": _ring_m2z2,
    "chevalley-group-Z4-Z2": _chevalley_z4_z2,
    "restricted-subgroup": _restricted_subgroup,
    "restricted-range": _restricted_range,
    "restricted-range-field": _restricted_range_field,
    "warning2": _warning2,
}

DEFAULT_COUNTS = {name: (25 if name.startswith(("restricted", "warning2")) else 50) for name in FAMILIES}


def sample_family(
    name: str, rng, count: int, *, max_attempts: int | None = None
) -> list[tuple[SystemInstance, VerifierReport]]:
    """``count`` instances of a family whose hypothesis holds, with their reports."""
    gen = FAMILIES[name]
    out = []
    attempts = 0
    limit = max_attempts if max_attempts is not None else 50 * count
    while len(out) < count:
        if attempts >= limit:
            raise RuntimeError(f"{name}: only {len(out)} of {count} hypothesis-satisfying instances after {attempts} tries")
        attempts += 1
        theorem, sys = gen(rng)
        rep = verify(sys, theorem)
        if rep.hypothesis_holds:
            out.append((sys, rep))
    return out


def _describe(sys: SystemInstance) -> str:
    if sys.polys is not None:
        body = "; ".join(p.render() for p in sys.polys)
        return f"{sys.field} N={sys.N}: {body}"
    if sys.exprs is not None:
        body = "; ".join(e.render() for e in sys.exprs)
        return f"{sys.ring} N={sys.N}: {body}"
    h = hashlib.sha256(b"".join(f.table.tobytes() for f in sys.functions)).hexdigest()[:16]
    return f"{sys.base}^{sys.N} tables sha256:{h}"


def run_suite(seed: int, counts: dict[str, int] | None = None) -> dict:
    """Run every family; the result is a plain dict suitable for JSON."""
    counts = DEFAULT_COUNTS if counts is None else counts
    rng = np.random.default_rng(seed)
    families = {}
    failures = 0
    for name in FAMILIES:
        n = counts.get(name, 0)
        if not n:
            continue
        rows = []
        for sys, rep in sample_family(name, rng, n):
            rows.append({
                "instance": _describe(sys),
                "theorem": rep.theorem_id,
                "hypothesis": rep.hypothesis,
                "zero_count": rep.zero_count,
                "conclusion_holds": rep.conclusion_holds,
            })
            failures += not rep.ok
        families[name] = {
            "count": len(rows),
            "passed": sum(bool(r["conclusion_holds"]) for r in rows),
            "instances": rows,
        }
    return {"seed": seed, "failures": failures, "families": families}


def suite_json(seed: int, counts: dict[str, int] | None = None) -> str:
    return json.dumps(run_suite(seed, counts), indent=2, sort_keys=True) + "\n"
