"""Dense function tables ``f : A -> B`` between finite abelian groups."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .errors import GroupMismatchError, ParseError
from .groups import FiniteAbelianGroup, GroupElement, group_parse

__all__ = ["GroupFunction"]


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """A total table for ``f : domain -> codomain``.

    ``table[r]`` holds the codomain coordinates of ``f(domain.unrank(r))``,
    so the array has shape ``(|domain|, codomain.rank_count)``.
    """

    domain: FiniteAbelianGroup
    codomain: FiniteAbelianGroup
    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int64, copy=True)
        if t.ndim == 1 and self.codomain.rank_count == 1:
            t = t[:, None]
        if t.shape != (self.domain.order, self.codomain.rank_count):
            raise ValueError(
                f"table shape {t.shape} does not match {self.domain} -> {self.codomain}"
            )
        np.remainder(t, self.codomain.orders_array, out=t)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_callable(
        cls,
        domain: FiniteAbelianGroup,
        codomain: FiniteAbelianGroup,
        fn: Callable[[GroupElement], GroupElement | Iterable[int] | int],
    ) -> GroupFunction:
        rows = []
        for x in domain:
            y = fn(x)
            if isinstance(y, GroupElement):
                codomain._check(y)
                y = y.coords
            elif isinstance(y, (int, np.integer)):
                y = (int(y),)
            rows.append(tuple(y))
        return cls(domain, codomain, np.array(rows, dtype=np.int64).reshape(domain.order, -1))

    @classmethod
    def zero(cls, domain: FiniteAbelianGroup, codomain: FiniteAbelianGroup) -> GroupFunction:
        return cls(domain, codomain, np.zeros((domain.order, codomain.rank_count), dtype=np.int64))

    @classmethod
    def from_json(cls, obj) -> GroupFunction:
        """Accept ``{"domain": "Z4", "codomain": "Z2", "table": [[1],[0],...]}``."""
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad function JSON: {exc}") from None
        try:
            domain = group_parse(obj["domain"])
            codomain = group_parse(obj["codomain"])
            table = obj["table"]
        except (KeyError, TypeError):
            raise ParseError("function JSON needs domain, codomain and table") from None
        return cls.from_rows(domain, codomain, table)

    @classmethod
    def from_rows(cls, domain, codomain, rows) -> GroupFunction:
        """Build from a JSON-style list of rows (ints allowed for 1-factor codomains)."""
        try:
            arr = np.array(
                [[r] if isinstance(r, (int, np.integer)) else list(r) for r in rows],
                dtype=np.int64,
            )
        except (TypeError, ValueError):
            raise ParseError("table rows must be integer lists") from None
        if arr.size == 0:
            arr = arr.reshape(len(rows), codomain.rank_count)
        if arr.shape != (domain.order, codomain.rank_count):
            raise ParseError(
                f"table has shape {arr.shape}, expected {(domain.order, codomain.rank_count)}"
            )
        if (arr < 0).any() or (arr >= codomain.orders_array).any():
            raise ParseError("table entry is not a reduced codomain element")
        return cls(domain, codomain, arr)

    def to_json(self) -> dict:
        return {
            "domain": str(self.domain),
            "codomain": str(self.codomain),
            "table": self.table.tolist(),
        }

    # -- access --------------------------------------------------------------

    def __call__(self, x: GroupElement) -> GroupElement:
        r = self.domain.rank(x)
        return GroupElement(self.codomain, tuple(int(c) for c in self.table[r]))

    @cached_property
    def key(self) -> bytes:
        """Hashable fingerprint of the table (used for level deduplication)."""
        return self.table.tobytes()

    @cached_property
    def value_ranks(self) -> np.ndarray:
        return self.codomain.rank_array(self.table)

    def is_zero(self) -> bool:
        return not self.table.any()

    def is_constant(self) -> bool:
        return bool((self.table == self.table[0]).all())

    def range(self) -> list[GroupElement]:
        return [self.codomain.unrank(int(r)) for r in np.unique(self.value_ranks)]

    def range_size(self) -> int:
        return int(np.unique(self.value_ranks).size)

    # -- pointwise group structure ----------------------------------------

    def _same_shape(self, other: GroupFunction) -> None:
        if (
            not isinstance(other, GroupFunction)
            or other.domain != self.domain
            or other.codomain != self.codomain
        ):
            raise GroupMismatchError("functions have different domain or codomain")

    def __add__(self, other: GroupFunction) -> GroupFunction:
        self._same_shape(other)
        return GroupFunction(self.domain, self.codomain, self.table + other.table)

    def __sub__(self, other: GroupFunction) -> GroupFunction:
        self._same_shape(other)
        return GroupFunction(self.domain, self.codomain, self.table - other.table)

    def __neg__(self) -> GroupFunction:
        return GroupFunction(self.domain, self.codomain, -self.table)

    def __mul__(self, z: int) -> GroupFunction:
        if not isinstance(z, (int, np.integer)):
            return NotImplemented
        z = int(z) % self.codomain.exponent
        return GroupFunction(self.domain, self.codomain, self.table * z)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.key))

    def __repr__(self) -> str:
        vals = self.table.tolist()
        if len(vals) > 8:
            vals = vals[:8] + ["..."]
        return f"GroupFunction({self.domain} -> {self.codomain}, {vals})"
