"""
Group Catalog
-------------
Named example groups, each with its expected order and tags. Builders check the
order of what they produce, so a wrong generator set is caught at build time.

Tags: solvable, nilpotent, nonsolvable, pi_solvable_demo.
Name patterns Sn, An, Cn, Dn (n the degree, Dn of order n) are built on demand.
"""
import itertools
import logging
import math
import random
import re
from dataclasses import dataclass, field
from typing import Callable

from sympy import primitive_root
from sympy.combinatorics import Permutation

from maxnorm.errors import CatalogError
from maxnorm.perm_core import (
    FactoredInteger,
    GeneratedGroup,
    element_order_histogram,
    elements,
    identity,
)

logger = logging.getLogger(__name__)

_PATTERN = re.compile(r"^([SACD])(\d+)$")


# --- Builders ---

def _perm(images: list[int]) -> Permutation:
    return Permutation(images)


def _cycle(points: list[int], degree: int) -> Permutation:
    images = list(range(degree))
    for i, p in enumerate(points):
        images[p] = points[(i + 1) % len(points)]
    return Permutation(images)


def cyclic(n: int) -> tuple[list[Permutation], int]:
    return [_cycle(list(range(n)), n)] if n > 1 else [identity(1)], n


def dihedral(order: int) -> tuple[list[Permutation], int]:
    """Dihedral group of the given order (2n), acting on the n vertices of a polygon."""
    n = order // 2
    if order % 2 or n < 3:
        raise CatalogError(f"dihedral groups here have even order >= 6, got {order}")
    rotation = _perm([(x + 1) % n for x in range(n)])
    reflection = _perm([(-x) % n for x in range(n)])
    return [rotation, reflection], n


def symmetric(n: int) -> tuple[list[Permutation], int]:
    if n == 1:
        return [identity(1)], 1
    return [_cycle([0, 1], n), _cycle(list(range(n)), n)], n


def alternating(n: int) -> tuple[list[Permutation], int]:
    if n < 3:
        return [identity(n)], n
    return [_cycle([0, 1, k], n) for k in range(2, n)], n


def elementary_abelian(p: int, rank: int) -> tuple[list[Permutation], int]:
    degree = p * rank
    return [_cycle(list(range(i * p, (i + 1) * p)), degree) for i in range(rank)], degree


def direct_product(*factors: tuple[list[Permutation], int]) -> tuple[list[Permutation], int]:
    """Disjoint-union action of the factors."""
    degree = sum(d for _, d in factors)
    gens = []
    offset = 0
    for factor_gens, d in factors:
        for g in factor_gens:
            images = list(range(degree))
            for x, y in enumerate(g.array_form):
                images[offset + x] = offset + y
            gens.append(_perm(images))
        offset += d
    return gens, degree


def affine_line(p: int) -> tuple[list[Permutation], int]:
    """AGL(1,p): x ↦ x+1 and x ↦ a·x for a primitive root a."""
    a = primitive_root(p)
    return [_perm([(x + 1) % p for x in range(p)]), _perm([(a * x) % p for x in range(p)])], p


def psl2(q: int) -> tuple[list[Permutation], int]:
    """
    PSL(2,q), q prime, on the projective line: points 0..q-1 then ∞ = q.
    Generators x ↦ x+1, x ↦ t²x and x ↦ -1/x. (x ↦ t·x alone would give PGL.)
    """
    t = primitive_root(q)
    infinity = q
    shift = [(x + 1) % q for x in range(q)] + [infinity]
    scale = [(t * t * x) % q for x in range(q)] + [infinity]
    invert = [infinity] + [(-pow(x, -1, q)) % q for x in range(1, q)] + [0]
    return [_perm(shift), _perm(scale), _perm(invert)], q + 1


def sl2_3() -> tuple[list[Permutation], int]:
    """SL(2,3) on the 8 nonzero vectors of F_3^2, listed lexicographically."""
    vectors = [v for v in itertools.product(range(3), repeat=2) if v != (0, 0)]
    index = {v: i for i, v in enumerate(vectors)}

    def act(m):
        return _perm([index[((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3)]
                      for a, b in vectors])

    return [act(((1, 1), (0, 1))), act(((1, 0), (1, 1)))], 8


def aff_a5_f7() -> tuple[list[Permutation], int]:
    """
    The sum-zero module of F_7^5 extended by A5 permuting coordinates (order 7^4·60).
    Points are the 2401 sum-zero vectors in lexicographic order of their first four
    coordinates; the zero vector is point 0.
    """
    vectors = [v + ((-sum(v)) % 7,) for v in itertools.product(range(7), repeat=4)]
    index = {v: i for i, v in enumerate(vectors)}

    def coordinate_permutation(sigma: list[int]):
        images = []
        for v in vectors:
            w = [0] * 5
            for i, x in enumerate(v):
                w[sigma[i]] = x
            images.append(index[tuple(w)])
        return _perm(images)

    translation = _perm([index[tuple((x + d) % 7 for x, d in zip(v, (1, 6, 0, 0, 0)))] for v in vectors])
    three_cycle = coordinate_permutation([1, 2, 0, 3, 4])
    five_cycle = coordinate_permutation([1, 2, 3, 4, 0])
    return [three_cycle, five_cycle, translation], len(vectors)


def aff_a5_point_stabilizer(G: GeneratedGroup) -> GeneratedGroup:
    """A5 fixing the zero vector, a core-free maximal subgroup of AffA5_F7."""
    return GeneratedGroup(list(G.generators[:2]), G.degree)


def s4_inside_psl217(G: GeneratedGroup | None = None, seed: int = 0) -> GeneratedGroup:
    """
    An S4 inside PSL(2,17): an involution a and an element b of order 3 with
    ab of order 4 generate it. Verified by order 24 and its element-order histogram.
    """
    G = G or build("PSL2_17")
    pool = list(elements(G))
    involutions = [g for g in pool if g.order() == 2]
    threes = [g for g in pool if g.order() == 3]
    rng = random.Random(seed)
    rng.shuffle(involutions)
    rng.shuffle(threes)
    for b in threes:
        for a in involutions:
            if (a * b).order() != 4:
                continue
            S = GeneratedGroup([a, b], G.degree, "S4")
            if S.order.value == 24 and element_order_histogram(S) == S4_HISTOGRAM:
                return S
    raise CatalogError("no S4 found inside PSL2_17")


S4_HISTOGRAM = {1: 1, 2: 9, 3: 8, 4: 6}


# --- Entries ---

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    order: int
    tags: frozenset[str]
    builder: Callable[[], tuple[list[Permutation], int]] = field(repr=False)
    known_maximals: Callable[[GeneratedGroup], list[GeneratedGroup]] | None = field(default=None, repr=False)

    @property
    def expected_order(self) -> FactoredInteger:
        return FactoredInteger.of(self.order)


def _entry(name, order, tags, builder, known_maximals=None) -> CatalogEntry:
    return CatalogEntry(name, order, frozenset(tags.split()), builder, known_maximals)


def _product(*parts: str) -> Callable[[], tuple[list[Permutation], int]]:
    return lambda: direct_product(*(_ENTRIES[n].builder() for n in parts))


_SOLVABLE = "solvable"
_NILPOTENT = "solvable nilpotent"
_NONSOLVABLE = "nonsolvable"

_ENTRIES: dict[str, CatalogEntry] = {}
for _n in (2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 30):
    _ENTRIES[f"C{_n}"] = _entry(f"C{_n}", _n, _NILPOTENT, lambda n=_n: cyclic(n))
for _name, _p, _k in (("E4", 2, 2), ("E8", 2, 3), ("E9", 3, 2), ("E16", 2, 4)):
    _ENTRIES[_name] = _entry(_name, _p ** _k, _NILPOTENT, lambda p=_p, k=_k: elementary_abelian(p, k))
for _n in (6, 8, 10, 12, 14, 16, 18):
    _tags = _NILPOTENT if _n in (8, 16) else _SOLVABLE
    _ENTRIES[f"D{_n}"] = _entry(f"D{_n}", _n, _tags, lambda n=_n: dihedral(n))
for _p in (5, 7, 11, 13):
    _ENTRIES[f"AGL1_{_p}"] = _entry(f"AGL1_{_p}", _p * (_p - 1), _SOLVABLE, lambda p=_p: affine_line(p))
_ENTRIES.update({
    "S3": _entry("S3", 6, _SOLVABLE, lambda: symmetric(3)),
    "S4": _entry("S4", 24, _SOLVABLE, lambda: symmetric(4)),
    "A4": _entry("A4", 12, _SOLVABLE, lambda: alternating(4)),
    "SL2_3": _entry("SL2_3", 24, _SOLVABLE, sl2_3),
    "A5": _entry("A5", 60, _NONSOLVABLE, lambda: alternating(5)),
    "S5": _entry("S5", 120, _NONSOLVABLE, lambda: symmetric(5)),
    "PSL2_5": _entry("PSL2_5", 60, _NONSOLVABLE, lambda: psl2(5)),
    "PSL2_7": _entry("PSL2_7", 168, _NONSOLVABLE, lambda: psl2(7)),
    "PSL2_11": _entry("PSL2_11", 660, _NONSOLVABLE, lambda: psl2(11)),
    "PSL2_13": _entry("PSL2_13", 1092, _NONSOLVABLE, lambda: psl2(13)),
    "PSL2_17": _entry("PSL2_17", 2448, _NONSOLVABLE, lambda: psl2(17),
                      lambda G: [s4_inside_psl217(G)]),
    "AffA5_F7": _entry("AffA5_F7", 7 ** 4 * 60, "nonsolvable pi_solvable_demo", aff_a5_f7,
                       lambda G: [aff_a5_point_stabilizer(G)]),
})
_ENTRIES.update({
    "S3xC3": _entry("S3xC3", 18, _SOLVABLE, _product("S3", "C3")),
    "S3xS3": _entry("S3xS3", 36, _SOLVABLE, _product("S3", "S3")),
    "S3xC5": _entry("S3xC5", 30, _SOLVABLE, _product("S3", "C5")),
    "S4xC2": _entry("S4xC2", 48, _SOLVABLE, _product("S4", "C2")),
    "A4xC3": _entry("A4xC3", 36, _SOLVABLE, _product("A4", "C3")),
    "D8xC3": _entry("D8xC3", 24, _NILPOTENT, _product("D8", "C3")),
    "AGL1_5xC3": _entry("AGL1_5xC3", 60, _SOLVABLE, _product("AGL1_5", "C3")),
})


def names(tag: str | None = None) -> list[str]:
    """Catalog names, optionally only those carrying `tag`, sorted by order then name."""
    chosen = [e for e in _ENTRIES.values() if tag is None or tag in e.tags]
    return [e.name for e in sorted(chosen, key=lambda e: (e.order, e.name))]


def entry(name: str) -> CatalogEntry:
    found = _ENTRIES.get(name) or _pattern_entry(name)
    if found is None:
        raise CatalogError(f"unknown catalog group '{name}'")
    return found


def _pattern_entry(name: str) -> CatalogEntry | None:
    match = _PATTERN.match(name)
    if not match:
        return None
    kind, n = match.group(1), int(match.group(2))
    if n < 1:
        return None
    if kind in "SA":
        abelian = n <= (2 if kind == "S" else 3)
        tags = _NILPOTENT if abelian else _SOLVABLE if n <= 4 else _NONSOLVABLE
        if kind == "S":
            return _entry(name, math.factorial(n), tags, lambda: symmetric(n))
        return _entry(name, max(math.factorial(n) // 2, 1), tags, lambda: alternating(n))
    if kind == "C":
        return _entry(name, n, _NILPOTENT, lambda: cyclic(n))
    if n % 2 or n < 6:
        return None
    nilpotent = n & (n - 1) == 0
    return _entry(name, n, _NILPOTENT if nilpotent else _SOLVABLE, lambda: dihedral(n))


def build(name: str) -> GeneratedGroup:
    found = entry(name)
    gens, degree = found.builder()
    G = GeneratedGroup(gens, degree, found.name)
    if G.order.value != found.order:
        raise CatalogError(f"builder for {name} produced order {G.order.value}, expected {found.order}")
    logger.debug(f"built {name}: order {G.order}, degree {degree}")
    return G


def known_maximals(G: GeneratedGroup) -> list[GeneratedGroup] | None:
    """Stored maximal subgroups for catalog groups above the enumeration cap."""
    if G.name is None:
        return None
    found = _ENTRIES.get(G.name)
    if found is None or found.known_maximals is None:
        return None
    return found.known_maximals(G)
