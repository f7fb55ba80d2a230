"""Primary colours, blends and the tattoo power set.

A colour is the sorted tuple of primary subscripts it is made from:
``(3,)`` is the primary ``c_3`` and ``(1, 2)`` is the blend ``c_{1,2}``.
Blends are atomic; they never combine with anything else.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

MAX_PRIMARIES = 20

ColourSet = frozenset  # frozenset[Colour]


class ColourError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Colour:
    subscripts: tuple[int, ...]

    def __post_init__(self):
        s = self.subscripts
        if not s:
            raise ColourError("a colour needs at least one subscript")
        if any(not isinstance(i, int) or i < 1 for i in s):
            raise ColourError(f"subscripts must be positive integers: {s!r}")
        if any(a >= b for a, b in zip(s, s[1:])):
            raise ColourError(f"subscripts must be strictly ascending: {s!r}")

    @classmethod
    def of(cls, *subscripts: int) -> Colour:
        return cls(tuple(sorted(set(subscripts))))

    @classmethod
    def from_mask(cls, mask: int) -> Colour:
        return cls(tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1))

    @classmethod
    def parse(cls, text: str) -> Colour:
        """Inverse of ``str``: ``"(1,2)"`` -> ``Colour((1, 2))``."""
        body = text.strip().removeprefix("(").removesuffix(")")
        try:
            return cls.of(*(int(tok) for tok in body.split(",") if tok.strip()))
        except ValueError as exc:
            raise ColourError(f"bad colour literal {text!r}") from exc

    @property
    def is_primary(self) -> bool:
        return len(self.subscripts) == 1

    @property
    def is_blend(self) -> bool:
        return len(self.subscripts) >= 2

    @property
    def mask(self) -> int:
        m = 0
        for i in self.subscripts:
            m |= 1 << (i - 1)
        return m

    @property
    def label_sum(self) -> int:
        return sum(self.subscripts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.subscripts)) + ")"


def primaries(colours: Iterable[Colour]) -> frozenset[Colour]:
    return frozenset(c for c in colours if c.is_primary)


def blends(colours: Iterable[Colour]) -> frozenset[Colour]:
    return frozenset(c for c in colours if c.is_blend)


def dedup_arrivals(arrivals: Iterable[Colour]) -> frozenset[Colour]:
    """Collapse a multiset of arriving colour-brushes to a set."""
    return frozenset(arrivals)


def mutate(resident: Iterable[Colour], limit: int = MAX_PRIMARIES) -> frozenset[Colour]:
    """Tattoo power set of a resident set.

    Every non-empty subset of the resident primaries becomes available;
    resident blends pass through unchanged. A blend that coincides with a
    subset of the primaries is the same colour and counts once.
    """
    resident = frozenset(resident)
    prim = sorted(c.subscripts[0] for c in resident if c.is_primary)
    if len(prim) > limit:
        raise ColourError(f"{len(prim)} primaries at one vertex exceeds the limit of {limit}")
    out = set(c for c in resident if c.is_blend)
    for sub in range(1, 1 << len(prim)):
        out.add(Colour(tuple(p for j, p in enumerate(prim) if sub >> j & 1)))
    return frozenset(out)


def mutated_size(resident: Iterable[Colour]) -> int:
    """``len(mutate(resident))`` without building the power set."""
    resident = frozenset(resident)
    pmask = 0
    for c in resident:
        if c.is_primary:
            pmask |= c.mask
    p = pmask.bit_count()
    extra = sum(1 for c in resident if c.is_blend and c.mask & ~pmask)
    return (1 << p) - 1 + extra


def fresh_primaries(
    resident: Iterable[Colour], count: int, exclude: Iterable[int] = ()
) -> frozenset[Colour]:
    """``count`` primaries with the smallest subscripts not already primary in ``resident``.

    Subscripts in ``exclude`` are skipped as well; the solvers pass every
    subscript in use anywhere on the graph so injected colours are globally new.
    """
    if count < 0:
        raise ColourError("count must be non-negative")
    taken = {c.subscripts[0] for c in resident if c.is_primary} | set(exclude)
    out = []
    i = 1
    while len(out) < count:
        if i not in taken:
            out.append(Colour((i,)))
        i += 1
    return frozenset(out)


def format_colour_set(colours: Iterable[Colour]) -> str:
    return "{" + ", ".join(str(c) for c in sorted(colours)) + "}"


# -- bitmask helpers used on the solver hot path ---------------------------

def popcount(x: int) -> int:
    return x.bit_count()


def mutate_masks(masks: Iterable[int]) -> frozenset[int]:
    """Mask-level twin of :func:`mutate` (bit ``i`` stands for ``c_{i+1}``)."""
    pmask = 0
    out = set()
    for m in masks:
        if m & (m - 1):
            out.add(m)
        else:
            pmask |= m
    sub = pmask
    while sub:
        out.add(sub)
        sub = (sub - 1) & pmask
    return frozenset(out)


def mutated_size_masks(masks: Iterable[int]) -> int:
    pmask = 0
    bl = []
    for m in masks:
        if m & (m - 1):
            bl.append(m)
        else:
            pmask |= m
    return (1 << popcount(pmask)) - 1 + sum(1 for m in bl if m & ~pmask)
