"""Closed forms: extra primaries needed at a blocked vertex, allocation sizes,
family values, and the tree brush number."""

from __future__ import annotations

from ..colours import mutate_masks
from ..graphs import BaseGraph, FamilySpec, GraphError, odd_degree_count

ORACLE_CAP = 20


class ArgumentError(ValueError):
    pass


def min_additional_primaries(ell: int, kappa: int, omega: int) -> int:
    """Fewest new primaries for a vertex with ``ell`` residual out-arcs,
    ``kappa`` colour-brushes after blending and ``omega`` resident primaries.

    Uses ``ceil(log2((ell - kappa)/(omega + 1) + 1))``, which assumes each new
    primary pairs with the old ones one at a time (``(2^x - 1)(omega + 1)``
    new brushes). For ``omega >= 2`` the full power set grows faster; see
    :func:`blend_count_oracle`.
    """
    if ell < 0 or kappa < 0 or omega < 0:
        raise ArgumentError("ell, kappa and omega must be non-negative")
    need = ell - kappa
    if need <= 0:
        return 0
    # exact integer form of the ceiling: smallest x with (2^x - 1)(omega + 1) >= need
    x = 0
    while ((1 << x) - 1) * (omega + 1) < need:
        x += 1
    return x


def blend_count_oracle(x: int, omega: int, semantics: str = "powerset") -> int:
    """New colour-brushes gained by adding ``x`` primaries to ``omega`` existing ones.

    ``"lemma"`` returns ``(2^x - 1)(omega + 1)``. ``"powerset"`` builds both
    power sets explicitly and counts the difference, ``2^(omega+x) - 2^omega``.
    """
    if x < 0 or omega < 0:
        raise ArgumentError("x and omega must be non-negative")
    if semantics == "lemma":
        return ((1 << x) - 1) * (omega + 1)
    if semantics != "powerset":
        raise ArgumentError(f"unknown semantics {semantics!r}")
    if x + omega > ORACLE_CAP:
        raise ArgumentError(f"x + omega = {x + omega} exceeds the enumeration cap {ORACLE_CAP}")
    before = mutate_masks(1 << i for i in range(omega))
    after = mutate_masks(1 << i for i in range(omega + x))
    return len(after - before)


def oracle_min_additional(need: int, omega: int, semantics: str = "powerset") -> int:
    """Smallest ``x`` whose :func:`blend_count_oracle` reaches ``need``."""
    x = 0
    while blend_count_oracle(x, omega, semantics) < need:
        x += 1
    return x


def allocation_size_for(k: int) -> int:
    """Primaries whose tattoo power set covers ``k`` unit brushes: smallest ``s``
    with ``2^s - 1 >= k``."""
    if k < 0:
        raise ArgumentError("k must be non-negative")
    s = 0
    while (1 << s) - 1 < k:
        s += 1
    return s


def _bracket(value: int) -> int:
    """The ``i`` with ``2^i <= value <= 2^(i+1) - 1``."""
    return value.bit_length() - 1


def closed_form_tau(spec: FamilySpec | str) -> int:
    """Closed-form tattoo numbers of paths, cycles, friendship and Joost graphs."""
    if isinstance(spec, str):
        spec = FamilySpec.parse(spec)
    kind, p = spec.kind, spec.params
    if kind == "path":
        if p[0] < 2:
            raise GraphError("path needs n >= 2")
        return 1
    if kind == "cycle":
        if p[0] < 3:
            raise GraphError("cycle needs n >= 3")
        return 2
    if kind == "friendship":
        n = p[0]
        if n < 1:
            raise GraphError("friendship graph needs n >= 1")
        if n <= 2:
            return 2
        if n == 3:
            return 3
        return _bracket(n) + 2
    if kind == "joost":
        n, k = p
        if n < 3 or k < 1:
            raise GraphError("Joost graph needs n >= 3 and k >= 1")
        if k == 1:
            return 1
        return _bracket(k) + 1
    raise GraphError(f"no closed form for family {kind!r}")


def tree_brush_number(g: BaseGraph) -> int:
    if not g.is_tree or g.n < 2:
        raise GraphError(f"{g.name or 'graph'} is not a non-trivial tree")
    return odd_degree_count(g) // 2
