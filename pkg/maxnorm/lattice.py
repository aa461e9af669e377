"""
Subgroup Lattice
----------------
Enumerates the subgroups of a small group up to conjugacy, on top of an indexed
element table. Every subgroup is a frozenset of element indices, so equality and
containment are set operations.

Completeness: any subgroup K = ⟨k_1..k_r⟩ with prime-power-order k_i is reached
by extending a class representative conjugate to ⟨k_1..k_j⟩ by one cyclic
subgroup of prime-power order at a time.
"""
import logging
import threading
import weakref
from collections import deque
from dataclasses import dataclass, field

from sympy import primefactors
from sympy.combinatorics import Permutation
from sympy.combinatorics.permutations import _af_invert, _af_rmul

from maxnorm.config import DEFAULT_CAPS, Caps
from maxnorm.errors import CapExceededError, PreconditionError
from maxnorm.perm_core import GeneratedGroup, elements, is_subgroup

logger = logging.getLogger(__name__)

SubgroupKey = frozenset[int]


class ElementTable:
    """Elements of G by index, with lazily built right-multiplication and conjugation columns."""

    def __init__(self, G: GeneratedGroup, cap: int):
        self.group = G
        self.arrays: list[list[int]] = [list(g.array_form) for g in elements(G, cap)]
        self.index: dict[tuple[int, ...], int] = {tuple(a): i for i, a in enumerate(self.arrays)}
        self.identity = self.index[tuple(range(G.degree))]
        self._right: dict[int, list[int]] = {}
        self._conj: dict[int, list[int]] = {}
        self._orders: list[int] | None = None

    def __len__(self) -> int:
        return len(self.arrays)

    def lookup(self, g: Permutation) -> int:
        return self.index[tuple(g.array_form)]

    def permutation(self, i: int) -> Permutation:
        return Permutation(self.arrays[i])

    def multiply(self, i: int, j: int) -> int:
        """Index of element i followed by element j."""
        return self.index[tuple(_af_rmul(self.arrays[j], self.arrays[i]))]

    def right_column(self, j: int) -> list[int]:
        """x -> x·g_j for every x."""
        column = self._right.get(j)
        if column is None:
            column = [self.multiply(i, j) for i in range(len(self.arrays))]
            self._right[j] = column
        return column

    def conjugation_column(self, j: int) -> list[int]:
        """x -> x^(g_j) for every x."""
        column = self._conj.get(j)
        if column is None:
            g = self.arrays[j]
            g_inv = _af_invert(g)
            column = [self.index[tuple(_af_rmul(g, _af_rmul(a, g_inv)))] for a in self.arrays]
            self._conj[j] = column
        return column

    @property
    def orders(self) -> list[int]:
        if self._orders is None:
            self._orders = [int(Permutation(a).order()) for a in self.arrays]
        return self._orders

    def closure(self, gens: list[int], limit: int | None = None) -> SubgroupKey | None:
        """Elements of ⟨gens⟩, or None once the set grows past `limit`."""
        columns = [self.right_column(g) for g in gens]
        found = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for column in columns:
                y = column[x]
                if y not in found:
                    found.add(y)
                    if limit is not None and len(found) > limit:
                        return None
                    frontier.append(y)
        return frozenset(found)


@dataclass
class SubgroupClass:
    """One conjugacy class of subgroups: members[0] is the representative."""
    order: int
    members: list[SubgroupKey]
    member_gens: list[list[int]]
    is_maximal: bool = False

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_normal(self) -> bool:
        return len(self.members) == 1


@dataclass
class SubgroupLattice:
    group: GeneratedGroup
    table: ElementTable
    classes: list[SubgroupClass] = field(default_factory=list)
    class_of: dict[SubgroupKey, int] = field(default_factory=dict)

    @property
    def subgroup_count(self) -> int:
        return len(self.class_of)

    def as_group(self, gens: list[int]) -> GeneratedGroup:
        return GeneratedGroup([self.table.permutation(i) for i in gens], self.group.degree)

    def representative(self, cls: SubgroupClass) -> GeneratedGroup:
        return self.as_group(cls.member_gens[0])

    def maximal_classes(self) -> list[SubgroupClass]:
        return [c for c in self.classes if c.is_maximal]

    def all_subgroups(self):
        """(key, generator indices) for every subgroup, class by class."""
        for cls in self.classes:
            yield from zip(cls.members, cls.member_gens)


def _cyclic_generators(table: ElementTable) -> list[int]:
    """One generator for each cyclic subgroup of prime-power order."""
    seen: set[SubgroupKey] = set()
    chosen = []
    for i, o in enumerate(table.orders):
        if o == 1 or len(primefactors(o)) != 1:
            continue
        key = table.closure([i])
        if key not in seen:
            seen.add(key)
            chosen.append(i)
    return chosen


def build_lattice(G: GeneratedGroup, caps: Caps | None = None) -> SubgroupLattice:
    caps = caps or DEFAULT_CAPS
    if G.order.value > caps.order:
        raise CapExceededError("subgroup enumeration", G.order.value, caps.order)
    table = ElementTable(G, caps.order)
    lattice = SubgroupLattice(G, table)
    generator_columns = [table.lookup(g) for g in G.generators]
    candidates = _cyclic_generators(table)
    n = len(table)

    def register(key: SubgroupKey, gens: list[int]) -> SubgroupClass:
        members, member_gens = [key], [gens]
        lattice.class_of[key] = len(lattice.classes)
        frontier = [0]
        while frontier:
            m = frontier.pop()
            for g in generator_columns:
                column = table.conjugation_column(g)
                image = frozenset(column[x] for x in members[m])
                if image in lattice.class_of:
                    continue
                lattice.class_of[image] = len(lattice.classes)
                members.append(image)
                member_gens.append([column[x] for x in member_gens[m]])
                frontier.append(len(members) - 1)
        if len(lattice.class_of) > caps.subgroups:
            raise CapExceededError("subgroup count", len(lattice.class_of), caps.subgroups)
        cls = SubgroupClass(len(key), members, member_gens)
        lattice.classes.append(cls)
        return cls

    queue = deque([register(frozenset([table.identity]), [])])
    while queue:
        cls = queue.popleft()
        key, gens = cls.members[0], cls.member_gens[0]
        every_extension_full = len(key) < n
        for c in candidates:
            if c in key:
                continue
            extended = table.closure(gens + [c])
            if len(extended) < n:
                every_extension_full = False
            if extended not in lattice.class_of:
                queue.append(register(extended, gens + [c]))
        cls.is_maximal = every_extension_full
    lattice.classes.sort(key=lambda c: (c.order, c.size))
    lattice.class_of = {key: i for i, c in enumerate(lattice.classes) for key in c.members}
    logger.info(f"lattice of a group of order {n}: {len(lattice.classes)} classes, {lattice.subgroup_count} subgroups")
    return lattice


_CACHE: "weakref.WeakKeyDictionary[GeneratedGroup, SubgroupLattice]" = weakref.WeakKeyDictionary()
_CACHE_LOCK = threading.Lock()


def lattice_of(G: GeneratedGroup, caps: Caps | None = None) -> SubgroupLattice:
    """Lattice of G, built once per group object and shared afterwards."""
    with _CACHE_LOCK:
        cached = _CACHE.get(G)
    if cached is not None:
        return cached
    built = build_lattice(G, caps)
    with _CACHE_LOCK:
        return _CACHE.setdefault(G, built)


def interval(H: GeneratedGroup, Q: GeneratedGroup, caps: Caps | None = None) -> list[GeneratedGroup]:
    """
    Every subgroup X with Q ≤ X ≤ H, smallest first. Works inside H, so it is
    available whenever |H:Q| is within caps.interval and |H| within the element cap.
    """
    caps = caps or DEFAULT_CAPS
    if not is_subgroup(Q, H):
        raise PreconditionError("Q is not a subgroup of H")
    index = H.order.value // Q.order.value
    if index > caps.interval:
        raise CapExceededError("interval index", index, caps.interval)
    table = ElementTable(H, caps.brute_force)
    q_gens = [table.lookup(g) for g in Q.generators]
    bottom = table.closure(q_gens)
    candidates = _cyclic_generators(table)
    found = {bottom: q_gens}
    queue = deque([bottom])
    while queue:
        key = queue.popleft()
        gens = found[key]
        for c in candidates:
            if c in key:
                continue
            extended = table.closure(gens + [c])
            if extended not in found:
                found[extended] = gens + [c]
                queue.append(extended)
    ordered = sorted(found.items(), key=lambda item: (len(item[0]), sorted(item[1])))
    return [GeneratedGroup([table.permutation(i) for i in gens], H.degree) for _, gens in ordered]
