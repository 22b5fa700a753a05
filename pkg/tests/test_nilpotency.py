import csv
import io
import json
import math

import pytest

from fundeg.errors import CapExceeded
from fundeg.groups import FiniteAbelianGroup
from fundeg.nilpotency import (
    SWEEP_COLUMNS,
    conjecture_sweep,
    hypothesis_value,
    nu_cyclic_oracle,
    nu_via_delta,
    sweep_to_csv,
    sweep_to_json,
)

G = FiniteAbelianGroup


@pytest.mark.parametrize("A,n,nu", [(G((2,)), 2, 2), (G((4,)), 2, 4), (G((2,)), 3, math.inf), (G((1,)), 5, 1)])
def test_nu_via_delta_examples(A, n, nu):
    res = nu_via_delta(A, n)
    assert res.nu == nu and res.method == "delta-link"


def test_nu_via_delta_rejects_small_modulus():
    with pytest.raises(ValueError):
        nu_via_delta(G((2,)), 1)


def _naive_nu(p, alpha, beta):
    """Multiply (x - 1) powers as plain integer polynomials, reduce at the end."""
    L, mod = p**alpha, p**beta
    poly = [1]
    nu = 0
    while True:
        folded = [0] * L
        for i, c in enumerate(poly):
            folded[i % L] += c
        if all(c % mod == 0 for c in folded):
            return nu
        poly = [a - b for a, b in zip([0] + poly, poly + [0])]
        nu += 1


@pytest.mark.parametrize("p,alpha,beta", [(2, 1, 2), (2, 1, 1), (2, 2, 3), (3, 1, 2), (3, 2, 2), (5, 1, 3), (2, 3, 2)])
def test_cyclic_oracle_matches_naive(p, alpha, beta):
    assert nu_cyclic_oracle(p, alpha, beta).nu == _naive_nu(p, alpha, beta)


def test_cyclic_oracle_examples():
    assert nu_cyclic_oracle(2, 1, 2).nu == 3
    assert nu_cyclic_oracle(2, 1, 1).nu == 2
    for p, alpha in [(2, 3), (3, 2), (5, 1), (7, 1)]:
        assert nu_cyclic_oracle(p, alpha, 1).nu == p**alpha


def test_cyclic_oracle_errors():
    with pytest.raises(ValueError):
        nu_cyclic_oracle(4, 1, 1)
    with pytest.raises(ValueError):
        nu_cyclic_oracle(2, 0, 1)
    with pytest.raises(CapExceeded):
        nu_cyclic_oracle(2, 15, 1)


@pytest.mark.parametrize("args,value", [((2, 1, 2), 3), ((2, 2, 1), 4), ((3, 1, 2), 5)])
def test_hypothesis_value(args, value):
    assert hypothesis_value(*args) == value


@pytest.mark.parametrize("p,alpha,beta", [(p, a, b) for p in (2, 3) for a in (1, 2) for b in (1, 2, 3) if p**a <= 8])
def test_methods_agree(p, alpha, beta):
    assert nu_via_delta(G((p**alpha,)), p**beta).nu == nu_cyclic_oracle(p, alpha, beta).nu


def test_sweep_small_grid():
    rows = conjecture_sweep(3, 2, 2)
    assert len(rows) == 8
    for r in rows:
        assert r.nu_oracle == r.nu_delta
        assert r.method == "both" and r.note == ""
        if r.beta == 1:
            assert r.nu_oracle == 1 + (r.p**r.alpha - 1)
    row = next(r for r in rows if (r.p, r.alpha, r.beta) == (2, 1, 2))
    assert row.nu_oracle == 3 == row.hypothesis and row.match


def test_sweep_monotone_in_beta():
    rows = conjecture_sweep(5, 2, 4)
    by_key = {}
    for r in rows:
        by_key.setdefault((r.p, r.alpha), []).append((r.beta, r.nu_oracle))
    for series in by_key.values():
        vals = [nu for _, nu in sorted(series)]
        assert vals == sorted(vals)


@pytest.mark.parametrize("orders", [(2, 2), (4, 2), (3, 3), (2, 2, 2), (4, 4), (9, 3), (8, 2)])
def test_beta_one_formula_noncyclic(orders):
    p = {2: 2, 4: 2, 8: 2, 3: 3, 9: 3}[orders[0]]
    assert nu_via_delta(G(orders), p).nu == 1 + sum(n - 1 for n in orders)


def test_noncyclic_rows():
    rows = conjecture_sweep(2, 2, 2, noncyclic=True)
    extra = [r for r in rows if r.method == "delta-only"]
    assert [(r.group, r.beta) for r in extra] == [("Z2xZ2", 1), ("Z2xZ2", 2)]
    assert extra[0].match is True and extra[1].hypothesis is None
    assert extra[1].nu_delta >= extra[0].nu_delta


def test_sweep_serialisation():
    rows = conjecture_sweep(2, 2, 2)
    text = sweep_to_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert tuple(parsed[0]) == SWEEP_COLUMNS
    assert len(parsed) == len(rows)
    assert parsed[0]["match"] == "true"
    data = json.loads(sweep_to_json(rows))
    assert [d["nu_oracle"] for d in data] == [r.nu_oracle for r in rows]


def test_sweep_skips_large_orders():
    rows = conjecture_sweep(2, 15, 1)
    last = rows[-1]
    assert last.nu_oracle is None and last.note.startswith("skipped")
    assert rows[-2].nu_delta is None and rows[-2].nu_oracle == 2**14
