"""Functional degree of maps between finite abelian groups, and the
Chevalley/Warning style theorems built on it."""

__version__ = "0.1.0"

from .errors import CapExceeded, FundegError, GroupMismatchError, InternalInvariantError, ParseError
from .groups import (
    FiniteAbelianGroup,
    GroupElement,
    PrimaryDecomposition,
    Subgroup,
    group_parse,
    primary_decompose,
    subgroup,
)
from .functions import GroupFunction
from .group_ring import GroupRingElement, act, augmentation, difference_op, tau
from .degree import (
    EXCEEDS_CAP,
    INF,
    analyze,
    char_fn,
    combine,
    compose,
    constant_fn,
    delta,
    fundeg,
    fundeg_oracle,
    hom_fn,
    identity_fn,
    join_prime_parts,
    multiply,
    partdeg,
    restrict,
    sections,
    split_by_primes,
    tensor,
)
from .finite_field import (
    FiniteField,
    FqElement,
    MultivariatePolynomial,
    digit_sum,
    field_make,
    poly_parse,
)
from .rings_nc import FiniteRing, NcPolyExpression, nc_degree, nc_evaluate, nc_induced_function, nc_parse, ring_make_mat, ring_make_zn
from .nilpotency import conjecture_sweep, hypothesis_value, nu_cyclic_oracle, nu_via_delta
from .chevalley import SystemInstance, VerifierReport, c0_function, count_zeros, verify
