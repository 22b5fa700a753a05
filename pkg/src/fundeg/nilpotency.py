"""Nilpotency degree of the augmentation ideal of Z_n[A], computed two ways.

``nu_via_delta`` uses ``nu(Z_n[A]) = delta(A, Z_n) + 1``.  For cyclic
``A = Z_{p^alpha}`` and ``n = p^beta`` the ideal is generated by ``x - 1`` in
``Z_{p^beta}[x] / (x^{p^alpha} - 1)``, so ``nu_cyclic_oracle`` just multiplies
by ``x - 1`` until the coefficient vector dies.  ``conjecture_sweep`` compares
both against the conjectured closed form ``beta p^alpha - (beta-1) p^(alpha-1)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .degree import degree_to_json, delta
from .errors import CapExceeded
from .groups import FiniteAbelianGroup, is_prime

__all__ = [
    "NuResult",
    "SweepRow",
    "nu_via_delta",
    "nu_cyclic_oracle",
    "hypothesis_value",
    "conjecture_sweep",
    "sweep_to_csv",
    "sweep_to_json",
]

SWEEP_COLUMNS = ("p", "alpha", "beta", "group", "method", "nu_oracle", "nu_delta", "hypothesis", "match", "note")
MAX_CYCLIC_ORDER = 2**14
DELTA_LIMIT = 256


@dataclass(frozen=True)
class NuResult:
    group: FiniteAbelianGroup
    modulus: int
    nu: int | float
    method: str
    hypothesis_value: int | None = None
    matches_hypothesis: bool | None = None

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "modulus": self.modulus,
            "nu": degree_to_json(self.nu),
            "method": self.method,
            "hypothesis_value": self.hypothesis_value,
            "matches_hypothesis": self.matches_hypothesis,
        }


def hypothesis_value(p: int, alpha: int, beta: int) -> int:
    """Conjectured nu for cyclic A = Z_{p^alpha}, n = p^beta.  Not a theorem."""
    return beta * p**alpha - (beta - 1) * p ** (alpha - 1)


def _attach_hypothesis(res: NuResult, p: int, alpha: int, beta: int) -> NuResult:
    h = hypothesis_value(p, alpha, beta)
    return NuResult(res.group, res.modulus, res.nu, res.method, h, res.nu == h)


def nu_via_delta(A: FiniteAbelianGroup, n: int) -> NuResult:
    if n < 2:
        raise ValueError("modulus must be >= 2")
    d = delta(A, FiniteAbelianGroup((n,)))
    return NuResult(A, n, d + 1, "delta-link")


def nu_cyclic_oracle(p: int, alpha: int, beta: int) -> NuResult:
    """Least nu with (x-1)^nu = 0 in Z_{p^beta}[x] / (x^{p^alpha} - 1)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if alpha < 1 or beta < 1:
        raise ValueError("alpha and beta must be >= 1")
    L = p**alpha
    if L > MAX_CYCLIC_ORDER:
        raise CapExceeded(f"p^alpha = {L} exceeds {MAX_CYCLIC_ORDER}")
    mod = p**beta
    v = np.zeros(L, dtype=np.int64)
    v[0] = 1
    nu = 0
    # (x-1)^(p^alpha) is divisible by p, so beta * p^alpha steps always suffice
    while v.any():
        if nu > beta * L:
            raise AssertionError("cyclic oracle did not terminate")  # pragma: no cover
        v = (np.roll(v, 1) - v) % mod
        nu += 1
    res = NuResult(FiniteAbelianGroup((L,)), mod, nu, "cyclic-poly-oracle")
    return _attach_hypothesis(res, p, alpha, beta)


@dataclass(frozen=True)
class SweepRow:
    p: int
    alpha: int
    beta: int
    group: str
    method: str
    nu_oracle: int | None
    nu_delta: int | float | None
    hypothesis: int | None
    match: bool | None
    note: str = ""

    def to_json(self) -> dict:
        d = asdict(self)
        if self.nu_delta is not None:
            d["nu_delta"] = degree_to_json(self.nu_delta)
        return d


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


def _two_factor_types(alpha: int) -> list[tuple[int, int]]:
    return [(a, alpha - a) for a in range(alpha - 1, 0, -1) if a >= alpha - a]


def conjecture_sweep(
    p_max: int, alpha_max: int, beta_max: int, *, noncyclic: bool = False
) -> list[SweepRow]:
    """One row per (p, alpha, beta) with p prime <= p_max.

    ``nu_delta`` is filled in when ``p^alpha <= 256``.  With ``noncyclic``,
    rows for ``Z_{p^a} x Z_{p^b}`` (a + b = alpha) are appended; for beta >= 2
    they have no cyclic oracle and are marked "delta-only".  Their
    ``hypothesis`` column holds the known beta = 1 value ``1 + sum (p^a_i - 1)``
    and is empty otherwise.
    """
    rows: list[SweepRow] = []
    for p in _primes_upto(p_max):
        for alpha in range(1, alpha_max + 1):
            L = p**alpha
            for beta in range(1, beta_max + 1):
                h = hypothesis_value(p, alpha, beta)
                note = ""
                nu_o = nu_d = None
                if L > MAX_CYCLIC_ORDER:
                    note = f"skipped: p^alpha = {L} exceeds {MAX_CYCLIC_ORDER}"
                else:
                    nu_o = nu_cyclic_oracle(p, alpha, beta).nu
                    if L <= DELTA_LIMIT:
                        nu_d = nu_via_delta(FiniteAbelianGroup((L,)), p**beta).nu
                        if nu_d != nu_o:
                            note = "methods disagree"
                method = "both" if nu_d is not None else "cyclic-poly-oracle"
                rows.append(SweepRow(
                    p, alpha, beta, f"Z{L}", method, nu_o, nu_d, h,
                    None if nu_o is None else nu_o == h, note,
                ))
            if not noncyclic:
                continue
            for a, b in _two_factor_types(alpha):
                A = FiniteAbelianGroup((p**a, p**b))
                for beta in range(1, beta_max + 1):
                    nu_d = nu_via_delta(A, p**beta).nu if A.order <= DELTA_LIMIT else None
                    known = 1 + (p**a - 1) + (p**b - 1) if beta == 1 else None
                    match = None if known is None or nu_d is None else nu_d == known
                    rows.append(SweepRow(
                        p, alpha, beta, str(A), "delta-only", None, nu_d, known, match,
                        "" if nu_d is not None else f"skipped: |A| = {A.order} too large",
                    ))
    return rows


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return str(v)


def sweep_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_csv_cell(getattr(r, c)) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def sweep_to_json(rows: Iterable[SweepRow]) -> str:
    return json.dumps([r.to_json() for r in rows], indent=2)
