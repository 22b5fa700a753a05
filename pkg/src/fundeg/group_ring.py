"""The integral group ring Z[A] (and Z_n[A]) acting on function tables by shifts.

An element ``r = sum z_a tau_a`` acts on ``f : A -> B`` by
``(r * f)(x) = sum z_a f(x + a)``.  The functional degree is defined through
the powers of the augmentation ideal under this action.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import GroupMismatchError, ParseError
from .functions import GroupFunction
from .groups import FiniteAbelianGroup, GroupElement

__all__ = [
    "GroupRingElement",
    "tau",
    "augmentation",
    "act",
    "difference_op",
]


@dataclass(frozen=True, eq=False)
class GroupRingElement:
    """A finitely supported formal sum ``sum z_a tau_a``.

    ``modulus == 0`` means Z[A]; ``modulus == n > 0`` means Z_n[A] with
    coefficients kept in ``[0, n)``.  Zero coefficients are never stored.
    """

    group: FiniteAbelianGroup
    coeffs: Mapping[GroupElement, int] = field(default_factory=dict)
    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError("modulus must be >= 0")
        clean: dict[GroupElement, int] = {}
        for a, z in self.coeffs.items():
            self.group._check(a)
            z = int(z)
            if self.modulus:
                z %= self.modulus
            if z:
                clean[a] = clean.get(a, 0) + z
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls, group: FiniteAbelianGroup, modulus: int = 0) -> GroupRingElement:
        return cls(group, {group.zero(): 1}, modulus)

    @classmethod
    def zero(cls, group: FiniteAbelianGroup, modulus: int = 0) -> GroupRingElement:
        return cls(group, {}, modulus)

    def _compatible(self, other: GroupRingElement) -> None:
        if not isinstance(other, GroupRingElement):
            raise TypeError(f"expected a group ring element, got {type(other).__name__}")
        if other.group != self.group or other.modulus != self.modulus:
            raise GroupMismatchError("group ring elements over different groups or moduli")

    def _lift(self, other) -> GroupRingElement:
        if isinstance(other, (int, np.integer)):
            return GroupRingElement(self.group, {self.group.zero(): int(other)}, self.modulus)
        self._compatible(other)
        return other

    def __add__(self, other) -> GroupRingElement:
        other = self._lift(other)
        out = dict(self.coeffs)
        for a, z in other.coeffs.items():
            out[a] = out.get(a, 0) + z
        return GroupRingElement(self.group, out, self.modulus)

    __radd__ = __add__

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement(self.group, {a: -z for a, z in self.coeffs.items()}, self.modulus)

    def __sub__(self, other) -> GroupRingElement:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> GroupRingElement:
        return self._lift(other) - self

    def __mul__(self, other) -> GroupRingElement:
        if isinstance(other, (int, np.integer)):
            return scalar_mul(int(other), self)
        self._compatible(other)
        out: dict[GroupElement, int] = {}
        for a, z in self.coeffs.items():
            for b, w in other.coeffs.items():
                c = a + b
                out[c] = out.get(c, 0) + z * w
        return GroupRingElement(self.group, out, self.modulus)

    def __rmul__(self, other) -> GroupRingElement:
        if isinstance(other, (int, np.integer)):
            return scalar_mul(int(other), self)
        return NotImplemented

    def __pow__(self, n: int) -> GroupRingElement:
        if n < 0:
            raise ValueError("negative power")
        result = GroupRingElement.one(self.group, self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = self._lift(other)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return (
            self.group == other.group
            and self.modulus == other.modulus
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.group, self.modulus, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def reduce(self, n: int) -> GroupRingElement:
        """Image in Z_n[A]."""
        return GroupRingElement(self.group, self.coeffs, n)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"{z}*tau{a}" for a, z in sorted(self.coeffs.items(), key=lambda t: t[0].coords)]
        suffix = f" (mod {self.modulus})" if self.modulus else ""
        return " + ".join(parts) + suffix

    def to_json(self) -> list[dict]:
        return [
            {"element": list(a.coords), "coeff": str(z)}
            for a, z in sorted(self.coeffs.items(), key=lambda t: t[0].coords)
        ]

    @classmethod
    def from_json(cls, group: FiniteAbelianGroup, obj, modulus: int = 0) -> GroupRingElement:
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            coeffs: dict[GroupElement, int] = {}
            for item in obj:
                a = group(item["element"])
                coeffs[a] = coeffs.get(a, 0) + int(item["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad group ring JSON: {exc}") from None
        return cls(group, coeffs, modulus)


def tau(a: GroupElement, modulus: int = 0) -> GroupRingElement:
    return GroupRingElement(a.group, {a: 1}, modulus)


def ring_add(r: GroupRingElement, s: GroupRingElement) -> GroupRingElement:
    return r + s


def ring_mul(r: GroupRingElement, s: GroupRingElement) -> GroupRingElement:
    return r * s


def ring_neg(r: GroupRingElement) -> GroupRingElement:
    return -r


def scalar_mul(z: int, r: GroupRingElement) -> GroupRingElement:
    return GroupRingElement(r.group, {a: z * w for a, w in r.coeffs.items()}, r.modulus)


def augmentation(r: GroupRingElement) -> int:
    """Coefficient sum; reduced mod the modulus when there is one."""
    s = sum(r.coeffs.values())
    return s % r.modulus if r.modulus else s


def act(r: GroupRingElement, f: GroupFunction) -> GroupFunction:
    """``(r * f)(x) = sum_a z_a f(x + a)``.

    Coefficients are first reduced mod exp(codomain), which is sound because
    ``exp(B) * b = 0`` for every ``b``.
    """
    if r.group != f.domain:
        raise GroupMismatchError(f"ring over {r.group} cannot act on functions on {f.domain}")
    e = f.codomain.exponent
    if r.modulus and r.modulus % e:
        raise GroupMismatchError(
            f"Z_{r.modulus}[A] does not act on functions into {f.codomain} (exponent {e})"
        )
    acc = np.zeros_like(f.table)
    orders = f.codomain.orders_array
    for a, z in r.coeffs.items():
        z %= e
        if z:
            acc = (acc + z * f.table[f.domain.shift_permutation(a)]) % orders
    return GroupFunction(f.domain, f.codomain, acc)


def difference_op(g: GroupElement, f: GroupFunction) -> GroupFunction:
    """``(tau_g - 1) * f``, i.e. ``x -> f(x + g) - f(x)``."""
    if g.group != f.domain:
        raise GroupMismatchError(f"shift {g!r} is not in {f.domain}")
    perm = f.domain.shift_permutation(g)
    return GroupFunction(f.domain, f.codomain, f.table[perm] - f.table)
