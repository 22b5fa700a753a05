"""Zero counting and brute-force verifiers for Chevalley/Warning type theorems.

Every verifier recomputes the degrees it needs, evaluates the theorem's
hypothesis, counts the common zeros exactly, and reports.  When the hypothesis
fails the report is vacuous: ``conclusion_holds`` is None and nothing is
claimed.  A report with ``hypothesis_holds`` true and ``conclusion_holds``
false would contradict the theorem and is treated as a bug by the test suite
and the CLI.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .degree import compose, degree_to_json, fundeg
from .errors import CapExceeded, GroupMismatchError, InternalInvariantError, ParseError
from .finite_field import FiniteField, MultivariatePolynomial, parse_field_spec, poly_parse
from .functions import GroupFunction
from .groups import FiniteAbelianGroup, GroupElement, factorize, group_parse, is_prime, subgroup
from .rings_nc import FiniteRing, NcPolyExpression, nc_induced_function, nc_parse, ring_parse

__all__ = [
    "SystemInstance",
    "VerifierReport",
    "count_zeros",
    "zero_mask",
    "verify_chevalley_group",
    "verify_warning1_group",
    "verify_warning1_field_pweight",
    "verify_restricted_subgroup",
    "c0_function",
    "verify_restricted_range",
    "verify_restricted_range_field",
    "verify_warning2",
    "verify",
    "THEOREMS",
    "instance_from_json",
]

DEFAULT_CAP = 2**24


@dataclass
class SystemInstance:
    """Functions ``f_1..f_r : A^N -> B_i`` on a common domain.

    ``kind`` is "group" (raw tables), "field" (``polys`` over ``field``) or
    "ring" (``exprs`` over ``ring``).  ``restriction`` holds subgroup
    generators inside the domain; None or an empty list means no restriction.
    ``declared`` optionally records claimed degrees, which verifiers compare
    against their own computation.
    """

    base: FiniteAbelianGroup
    N: int
    functions: list[GroupFunction]
    kind: str = "group"
    field: FiniteField | None = None
    polys: list[MultivariatePolynomial] | None = None
    ring: FiniteRing | None = None
    exprs: list[NcPolyExpression] | None = None
    restriction: list[GroupElement] | None = None
    declared: list[int | None] | None = None

    def __post_init__(self):
        dom = self.domain
        for f in self.functions:
            if f.domain != dom:
                raise GroupMismatchError(f"function on {f.domain}, expected {dom}")
        for g in self.restriction or ():
            dom._check(g)
        if self.declared is not None and len(self.declared) != len(self.functions):
            raise ValueError("one declared degree per function")

    @property
    def domain(self) -> FiniteAbelianGroup:
        return self.base**self.N

    @classmethod
    def from_tables(cls, functions, base=None, N=1, restriction=None, declared=None) -> SystemInstance:
        functions = list(functions)
        if base is None:
            if not functions:
                raise ValueError("base group required for an empty system")
            base, N = functions[0].domain, 1
        return cls(base, N, functions, restriction=restriction, declared=declared)

    @classmethod
    def from_polys(cls, polys, field=None, N=None, restriction=None, declared=None) -> SystemInstance:
        polys = list(polys)
        if polys:
            field, N = polys[0].field, polys[0].nvars
            if any(p.field != field or p.nvars != N for p in polys):
                raise GroupMismatchError("polynomials over different fields or arities")
        if field is None or N is None:
            raise ValueError("field and N are required for an empty system")
        return cls(
            field.additive_group, N, [p.induced_function() for p in polys], "field",
            field=field, polys=polys, restriction=restriction, declared=declared,
        )

    @classmethod
    def from_nc(cls, exprs, ring: FiniteRing, N=None, restriction=None, declared=None) -> SystemInstance:
        exprs = list(exprs)
        if N is None:
            N = max((e.nvars for e in exprs), default=0)
        exprs = [NcPolyExpression(N, e.terms, ring) for e in exprs]
        return cls(
            ring.additive_group, N, [nc_induced_function(e, ring) for e in exprs], "ring",
            ring=ring, exprs=exprs, restriction=restriction, declared=declared,
        )


@dataclass
class VerifierReport:
    theorem_id: str
    hypothesis_holds: bool
    hypothesis: str
    zero_count: int
    conclusion_holds: bool | None
    conclusion: str
    witness: list[int] | None = None
    degrees: list = field(default_factory=list)
    degree_kind: str = "fundeg"
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return not self.hypothesis_holds

    @property
    def ok(self) -> bool:
        """False only when the hypothesis holds and the conclusion fails."""
        return not self.hypothesis_holds or bool(self.conclusion_holds)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "hypothesis_holds": self.hypothesis_holds,
            "hypothesis": self.hypothesis,
            "zero_count": self.zero_count,
            "conclusion_holds": self.conclusion_holds,
            "conclusion": self.conclusion,
            "witness": self.witness,
            "degree_kind": self.degree_kind,
            "degrees": [degree_to_json(d) for d in self.degrees],
            "warnings": self.warnings,
            "notes": self.notes,
            "extra": self.extra,
        }


# -- counting -----------------------------------------------------------------


def zero_mask(sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1) -> np.ndarray:
    """Boolean mask over domain ranks of the common zero set."""
    n = sys.domain.order
    if n > cap:
        raise CapExceeded(f"domain has {n} points, cap is {cap}")
    if not sys.functions:
        return np.ones(n, dtype=bool)

    def chunk(bounds):
        lo, hi = bounds
        m = np.ones(hi - lo, dtype=bool)
        for f in sys.functions:
            m &= ~f.table[lo:hi].any(axis=1)
        return m

    step = max(1, -(-n // max(1, threads)))
    pieces = [(lo, min(n, lo + step)) for lo in range(0, n, step)]
    if threads > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(chunk, pieces))  # map keeps chunk order
    else:
        parts = [chunk(b) for b in pieces]
    return np.concatenate(parts)


def _restriction_ranks(sys: SystemInstance) -> np.ndarray | None:
    if not sys.restriction:
        return None
    return subgroup(sys.domain, sys.restriction).embedding


def count_zeros(sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1) -> int:
    """``|V(f_1..f_r)|``, inside the restriction subgroup when one is set."""
    mask = zero_mask(sys, cap, threads)
    ranks = _restriction_ranks(sys)
    if ranks is not None:
        mask = mask[ranks]
    return int(mask.sum())


# -- helpers ------------------------------------------------------------------


def _single_prime(G: FiniteAbelianGroup) -> int | None:
    primes = G.primes
    return primes[0] if len(primes) == 1 else None


def _prime_exponent(G: FiniteAbelianGroup) -> int | None:
    """``p`` when every cyclic factor of ``G`` has the same prime order ``p``."""
    orders = set(G.cyclic_orders)
    if len(orders) == 1 and is_prime(next(iter(orders))):
        return orders.pop()
    return None


def _char_sum(G: FiniteAbelianGroup) -> int:
    """``sum (p^a_i - 1)`` over the prime-power cyclic factors of a p-group."""
    total = 0
    for n in G.cyclic_orders:
        for p, e in factorize(n).items():
            total += p**e - 1
    return total


def _fmt(x) -> str:
    return "inf" if x == math.inf else str(x)


def _compare_declared(sys: SystemInstance, computed: list, kind: str) -> list[str]:
    out = []
    for i, (d, c) in enumerate(zip(sys.declared or [], computed), 1):
        if d is not None and d != c:
            out.append(f"f{i}: declared {kind} {_fmt(d)}, computed {_fmt(c)}; using computed")
    return out


def _first_point(mask: np.ndarray, sys: SystemInstance) -> list[int] | None:
    idx = np.flatnonzero(mask)
    if not idx.size:
        return None
    return list(sys.domain.unrank(int(idx[0])).coords)


def _require_field(sys: SystemInstance, what: str) -> None:
    if sys.kind != "field" or sys.field is None:
        raise GroupMismatchError(f"{what} needs a polynomial system over a finite field")


def _weighted_pgroup_inequality(sys: SystemInstance, degrees: list):
    """Evaluate ``N sum(p^a_i - 1) > (sum deg) sum(p^b_j - 1)``.

    Returns (holds, text, p, note).  All codomains must be a common B.
    """
    A = sys.base
    codomains = {f.codomain for f in sys.functions}
    B = codomains.pop() if len(codomains) == 1 else (A if not codomains else None)
    if B is None:
        return False, "functions have different codomains", None, "not in theorem scope"
    p, q = _single_prime(A), _single_prime(B)
    if p is None or (q is not None and q != p):
        return False, f"{A} and {B} are not p-groups for one prime", p, "not in theorem scope"
    lhs = sys.N * _char_sum(A)
    total = sum(degrees)
    cb = _char_sum(B)
    rhs = 0 if total == 0 or cb == 0 else total * cb
    if A == B:
        text = f"N = {sys.N} > sum fundeg = {_fmt(total)}"
    else:
        text = f"N*sum(p^a-1) = {lhs} > (sum fundeg)*sum(p^b-1) = {_fmt(total)}*{cb} = {_fmt(rhs)}"
    return lhs > rhs, text, p, ""


# -- verifiers ------------------------------------------------------------------


def verify_chevalley_group(sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1) -> VerifierReport:
    """Under the weighted degree inequality, ``V`` is not a singleton."""
    degs = [fundeg(f) for f in sys.functions]
    holds, text, _, note = _weighted_pgroup_inequality(sys, degs)
    mask = zero_mask(sys, cap, threads)
    count = int(mask.sum())
    rep = VerifierReport(
        "chevalley-group", holds, text, count, (count != 1) if holds else None,
        f"|V| = {count} != 1", degrees=degs, warnings=_compare_declared(sys, degs, "fundeg"),
    )
    if count == 1:
        rep.witness = _first_point(mask, sys)
    if note:
        rep.notes.append(note)
    return rep


def _indicator_of_zeros(sys: SystemInstance, p: int, mask: np.ndarray) -> GroupFunction:
    return GroupFunction(sys.domain, FiniteAbelianGroup((p,)), mask.astype(np.int64))


def verify_warning1_group(
    sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1, zero_sum_check: bool = False
) -> VerifierReport:
    """``p`` divides ``|V|``.

    For ring systems the hypothesis is ``N > sum deg`` with the syntactic
    word degree; otherwise it is the weighted inequality on computed fundeg.
    The count is also obtained as the sum of the zero-set indicator in Z_p,
    which is the zero-sum lemma route.  With ``zero_sum_check`` the indicator's
    degree is computed and compared with ``delta(domain, Z_p)``.
    """
    mask = zero_mask(sys, cap, threads)
    count = int(mask.sum())
    fdegs = [fundeg(f) for f in sys.functions]
    if sys.kind == "ring":
        R = sys.ring
        p = _single_prime(R.additive_group)
        degs = [e.degree() for e in sys.exprs]
        total = sum(degs)
        if p is None:
            holds, text = False, f"|R| = {R.order} is not a prime power"
        else:
            holds, text = sys.N > total, f"N = {sys.N} > sum deg = {total}"
        rep = VerifierReport(
            "warning1-ring", holds, text, count, None, "", degrees=degs, degree_kind="nc-deg",
            warnings=_compare_declared(sys, degs, "nc-deg"),
        )
        rep.extra["fundeg"] = [degree_to_json(d) for d in fdegs]
        for i, (fd, d) in enumerate(zip(fdegs, degs), 1):
            if fd > d:
                raise InternalInvariantError(f"f{i}: fundeg {fd} exceeds word degree {d}")
    else:
        holds, text, p, note = _weighted_pgroup_inequality(sys, fdegs)
        rep = VerifierReport(
            "warning1-group", holds, text, count, None, "", degrees=fdegs,
            warnings=_compare_declared(sys, fdegs, "fundeg"),
        )
        if note:
            rep.notes.append(note)
    if p is not None:
        ind = _indicator_of_zeros(sys, p, mask)
        s = int(ind.table.sum()) % p
        if s != count % p:
            raise InternalInvariantError("indicator sum disagrees with the zero count")
        rep.extra["indicator_sum_mod_p"] = s
        if zero_sum_check:
            M = sys.N * _char_sum(sys.base)
            d = fundeg(ind)
            rep.extra["indicator_fundeg"] = degree_to_json(d)
            rep.extra["delta_domain_zp"] = M
            if holds and d >= M:
                raise InternalInvariantError(f"indicator degree {d} not below {M}")
    rep.conclusion = f"{p} | |V| = {count}" if p else f"|V| = {count}"
    if holds:
        rep.conclusion_holds = count % p == 0
    return rep


def verify_warning1_field_pweight(sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1) -> VerifierReport:
    """``N > sum pdeg(f_j)`` implies ``p`` divides ``|V|``."""
    _require_field(sys, "the p-weight verifier")
    F = sys.field
    pdegs = [f.pweight_degree() for f in sys.polys]
    fdegs = [fundeg(f) for f in sys.functions]
    total = sum(pdegs)
    holds = sys.N > total
    count = count_zeros(SystemInstance(sys.base, sys.N, sys.functions), cap, threads)
    rep = VerifierReport(
        "warning1-pweight", holds, f"N = {sys.N} > sum pdeg = {total}", count,
        (count % F.p == 0) if holds else None, f"{F.p} | |V| = {count}",
        degrees=pdegs, degree_kind="pdeg", warnings=_compare_declared(sys, pdegs, "pdeg"),
    )
    rep.extra["fundeg"] = [degree_to_json(d) for d in fdegs]
    rep.extra["total_degree"] = [f.total_degree() for f in sys.polys]
    for i, (fd, pd) in enumerate(zip(fdegs, pdegs), 1):
        if fd > pd:
            raise InternalInvariantError(f"f{i}: fundeg {fd} exceeds pdeg {pd}")
    return rep


def verify_restricted_subgroup(sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1) -> VerifierReport:
    """For a subgroup ``A <= F^N`` of order ``p^M``, ``M > alpha sum pdeg`` implies ``p | |V cap A|``."""
    _require_field(sys, "the restricted-subgroup verifier")
    F = sys.field
    gens = sys.restriction if sys.restriction else list(sys.domain.standard_generators())
    sub = subgroup(sys.domain, gens)
    fac = factorize(sub.order)
    if sub.order > 1 and set(fac) != {F.p}:
        raise InternalInvariantError(f"subgroup order {sub.order} is not a power of {F.p}")
    M = fac.get(F.p, 0)
    pdegs = [f.pweight_degree() for f in sys.polys]
    total = sum(pdegs)
    holds = M > F.alpha * total
    mask = zero_mask(sys, cap, threads)[sub.embedding]
    count = int(mask.sum())
    rep = VerifierReport(
        "restricted-subgroup", holds, f"M = {M} > alpha*sum pdeg = {F.alpha}*{total} = {F.alpha * total}",
        count, (count % F.p == 0) if holds else None, f"{F.p} | |V cap A| = {count}",
        degrees=pdegs, degree_kind="pdeg", warnings=_compare_declared(sys, pdegs, "pdeg"),
    )
    rep.extra["subgroup_order"] = sub.order
    return rep


def c0_function(B: FiniteAbelianGroup, S: Sequence[GroupElement]) -> GroupFunction:
    """A map ``B -> Z_p`` equal to 1 at 0, vanishing on ``S \\ {0}``, of degree <= |S| - 1.

    Built as ``prod_s (1 - h_s(x))`` where ``h_s`` is a coordinate functional
    scaled so that ``h_s(s) = 1``.  ``B`` must have exponent ``p``.
    """
    p = _prime_exponent(B)
    if p is None:
        raise GroupMismatchError(f"{B} does not have prime exponent")
    for s in S:
        B._check(s)
    pts = set(S)
    if B.zero() not in pts:
        raise ValueError("S must contain 0")
    el = B.elements_array
    out = np.ones(B.order, dtype=np.int64)
    others = sorted((s for s in pts if not s.is_zero()), key=lambda s: s.rank)
    for s in others:
        j = next(i for i, c in enumerate(s.coords) if c)
        h = el[:, j] * pow(s.coords[j], -1, p) % p
        out = out * (1 - h) % p
    c = GroupFunction(B, FiniteAbelianGroup((p,)), out)
    if out[0] != 1 or any(out[s.rank] for s in others):
        raise InternalInvariantError("c0 does not separate 0 from S")
    d = fundeg(c)
    if d > len(pts) - 1:
        raise InternalInvariantError(f"c0 has degree {d} > |S| - 1 = {len(pts) - 1}")
    return c


def verify_restricted_range(sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1) -> VerifierReport:
    """``delta(A, Z_p) > sum (|range f_i| - 1) fundeg(f_i)`` implies ``p | |V|``; ``exp(B) = p``."""
    A = sys.domain
    fs = sys.functions
    ps = {f.codomain.exponent for f in fs}
    for f in fs:
        if _prime_exponent(f.codomain) is None:
            raise GroupMismatchError(f"codomain {f.codomain} does not have prime exponent")
    if len(ps) > 1:
        raise GroupMismatchError("codomains have different exponents")
    mask = zero_mask(sys, cap, threads)
    count = int(mask.sum())
    p = ps.pop() if ps else _single_prime(A)
    degs = [fundeg(f) for f in fs]
    ranges = [f.range_size() for f in fs]
    weights = [(r - 1) * d if r > 1 else 0 for r, d in zip(ranges, degs)]
    total = sum(weights)
    rep = VerifierReport(
        "restricted-range", False, "", count, None, f"{p} | |V| = {count}",
        degrees=degs, warnings=_compare_declared(sys, degs, "fundeg"),
    )
    rep.extra["range_sizes"] = ranges
    if p is None or _single_prime(A) != p:
        rep.hypothesis = f"domain {A} is not a {p}-group"
        rep.notes.append("not in theorem scope")
        return rep
    dA = _char_sum(A)
    rep.hypothesis = f"delta(A, Z_p) = {dA} > sum (|range|-1)*fundeg = {_fmt(total)}"
    rep.hypothesis_holds = dA > total
    empty = [i for i, f in enumerate(fs, 1) if not (~f.table.any(axis=1)).any()]
    if empty:
        rep.notes.append("empty by range")
    elif fs:
        prod = np.ones(A.order, dtype=np.int64)
        for f in fs:
            B = f.codomain
            c0 = c0_function(B, f.range())
            prod = prod * compose(c0, f).table[:, 0] % p
        if not np.array_equal(prod.astype(bool), mask):
            raise InternalInvariantError("product of c0 compositions is not the zero-set indicator")
    if rep.hypothesis_holds:
        rep.conclusion_holds = count % p == 0
    return rep


def verify_restricted_range_field(sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1) -> VerifierReport:
    """``N alpha (p-1) > sum (|range f_i| - 1) pdeg(f_i)`` implies ``p | |V|``."""
    _require_field(sys, "the field range verifier")
    F = sys.field
    pdegs = [f.pweight_degree() for f in sys.polys]
    ranges = [f.range_size() for f in sys.functions]
    total = sum((r - 1) * d for r, d in zip(ranges, pdegs))
    lhs = sys.N * F.alpha * (F.p - 1)
    holds = lhs > total
    count = count_zeros(SystemInstance(sys.base, sys.N, sys.functions), cap, threads)
    rep = VerifierReport(
        "restricted-range-field", holds, f"N*alpha*(p-1) = {lhs} > sum (|range|-1)*pdeg = {total}",
        count, (count % F.p == 0) if holds else None, f"{F.p} | |V| = {count}",
        degrees=pdegs, degree_kind="pdeg", warnings=_compare_declared(sys, pdegs, "pdeg"),
    )
    rep.extra["range_sizes"] = ranges
    if any(0 not in {int(v) for v in f.value_ranks} for f in sys.functions):
        rep.notes.append("empty by range")
    return rep


def verify_warning2(sys: SystemInstance, cap: int = DEFAULT_CAP, threads: int = 1) -> VerifierReport:
    """If ``0 in V`` then ``|V| >= q^(N - sum pdeg)`` (bound at least 1)."""
    _require_field(sys, "the second Warning verifier")
    F = sys.field
    pdegs = [f.pweight_degree() for f in sys.polys]
    e = sys.N - sum(pdegs)
    bound = F.q ** max(0, e)
    mask = zero_mask(sys, cap, threads)
    count = int(mask.sum())
    holds = bool(mask[0])
    rep = VerifierReport(
        "warning2", holds, f"0 in V: {holds}", count, (count >= bound) if holds else None,
        f"|V| = {count} >= q^(N - sum pdeg) = {F.q}^{e} -> {bound}",
        degrees=pdegs, degree_kind="pdeg", warnings=_compare_declared(sys, pdegs, "pdeg"),
    )
    rep.extra["bound"] = bound
    return rep


THEOREMS = {
    "chevalley-group": verify_chevalley_group,
    "warning1-group": verify_warning1_group,
    "warning1-ring": verify_warning1_group,
    "warning1-pweight": verify_warning1_field_pweight,
    "restricted-subgroup": verify_restricted_subgroup,
    "restricted-range": verify_restricted_range,
    "restricted-range-field": verify_restricted_range_field,
    "warning2": verify_warning2,
}


def verify(sys: SystemInstance, theorem: str, cap: int = DEFAULT_CAP, threads: int = 1) -> VerifierReport:
    try:
        fn = THEOREMS[theorem]
    except KeyError:
        raise ParseError(f"unknown theorem {theorem!r}; choose from {sorted(THEOREMS)}") from None
    rep = fn(sys, cap=cap, threads=threads)
    if sys.restriction and theorem != "restricted-subgroup":
        rep.notes.append("restriction ignored by this theorem")
    return rep


# -- instance JSON --------------------------------------------------------------


def instance_from_json(obj) -> tuple[str | None, SystemInstance]:
    """Parse ``{theorem, field|group|ring, N, functions, restriction?, declared?}``.

    ``functions`` entries are polynomial strings (with ``field``), word
    expressions (with ``ring``) or tables (with ``group``; the optional
    ``codomain`` defaults to the group).  Restriction generators are flat
    coordinate lists in the domain ``A^N``.
    """
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad instance JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("instance JSON must be an object")
    specs = [k for k in ("field", "group", "ring") if k in obj]
    if len(specs) != 1:
        raise ParseError("instance needs exactly one of field, group, ring")
    try:
        N = int(obj["N"])
        raw = list(obj.get("functions", []))
    except (KeyError, TypeError, ValueError):
        raise ParseError("instance needs an integer N and a functions list") from None
    if N < 0:
        raise ParseError("N must be >= 0")
    declared = obj.get("declared")
    kind = specs[0]
    try:
        if kind == "field":
            F = parse_field_spec(str(obj["field"]))
            polys = [poly_parse(F, N, s) for s in raw]
            base = F.additive_group
        elif kind == "ring":
            R = ring_parse(str(obj["ring"]))
            exprs = [nc_parse(s, N, R) for s in raw]
            base = R.additive_group
        else:
            base = group_parse(str(obj["group"]))
            cod = group_parse(str(obj.get("codomain", obj["group"])))
            dom = base**N
            funcs = [GroupFunction.from_rows(dom, cod, t) for t in raw]
        dom = base**N
        restriction = [dom(list(g)) for g in obj.get("restriction") or []]
        if kind == "field":
            sys = SystemInstance.from_polys(polys, F, N, restriction, declared)
        elif kind == "ring":
            sys = SystemInstance.from_nc(exprs, R, N, restriction, declared)
        else:
            sys = SystemInstance(base, N, funcs, restriction=restriction, declared=declared)
    except (TypeError, ValueError, GroupMismatchError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad instance: {exc}") from None
    return obj.get("theorem"), sys
