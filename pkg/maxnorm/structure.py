"""
Structure Analysis
------------------
Derived series, solvability, nilpotency, π-separability, Fitting and Frattini
subgroups, maximal subgroups and the structure of primitive groups.

π-separable: a normal series whose factors are all π-groups or π′-groups.
π-solvable: π-separable with every π-factor solvable (π′-factors are unrestricted).
π′ is always taken relative to the primes dividing |G|.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable

from sympy.combinatorics import Permutation

from maxnorm.config import DEFAULT_CAPS, Caps
from maxnorm.errors import CapExceededError, PreconditionError
from maxnorm.lattice import lattice_of
from maxnorm.perm_core import (
    FactoredInteger,
    GeneratedGroup,
    PrimeSet,
    as_prime_set,
    elements,
    equal_groups,
    key_of,
)
from maxnorm.subgroups import (
    centralizer,
    core,
    intersection,
    minimal_normal_subgroups,
    o_p,
    o_pi,
    p_cores,
    quotient,
    require_subgroup,
)

logger = logging.getLogger(__name__)


# --- Series and solvability ---

def derived_subgroup(G: GeneratedGroup) -> GeneratedGroup:
    return GeneratedGroup(list(G.working_copy().derived_subgroup().generators), G.degree)


def derived_series(G: GeneratedGroup) -> list[GeneratedGroup]:
    """G = G⁽⁰⁾ ⊇ G⁽¹⁾ ⊇ … listed until the first term equal to its derived subgroup."""
    series = [G]
    for term in G.working_copy().derived_series()[1:]:
        series.append(GeneratedGroup(list(term.generators), G.degree))
    return series


def is_solvable(G: GeneratedGroup) -> bool:
    return bool(G.working_copy().is_solvable)


def is_nilpotent(G: GeneratedGroup) -> bool:
    return bool(G.working_copy().is_nilpotent)


def pi_layers(G: GeneratedGroup, pi: "PrimeSet | Iterable[int]",
              caps: Caps | None = None) -> list[tuple[GeneratedGroup, GeneratedGroup]] | None:
    """
    Peels ⟨O_π, O_π′⟩ off successive quotients. Returns the (O_π, O_π′) pair of
    each stage, or None when a stage has both trivial (G is not π-separable).
    """
    caps = caps or DEFAULT_CAPS
    pi = as_prime_set(pi)
    layers = []
    current = G
    while not current.is_trivial:
        A = o_pi(current, pi, caps)
        B = o_pi(current, pi.complement(current.order), caps)
        if A.is_trivial and B.is_trivial:
            return None
        layers.append((A, B))
        X = GeneratedGroup(list(A.generators) + list(B.generators), current.degree)
        if X.order.value == current.order.value:
            break
        current = quotient(current, X, caps).quotient
    return layers


def is_pi_separable(G: GeneratedGroup, pi: "PrimeSet | Iterable[int]", caps: Caps | None = None) -> bool:
    return pi_layers(G, pi, caps) is not None


def is_pi_solvable(G: GeneratedGroup, pi: "PrimeSet | Iterable[int]", caps: Caps | None = None) -> bool:
    layers = pi_layers(G, pi, caps)
    return layers is not None and all(is_solvable(A) for A, _ in layers)


# --- Fitting and Frattini ---

def fitting(G: GeneratedGroup, caps: Caps | None = None) -> GeneratedGroup:
    """F(G), the product of the O_p(G)."""
    cores = p_cores(G, caps=caps)
    return GeneratedGroup([g for Op in cores.values() for g in Op.generators], G.degree)


def frattini(G: GeneratedGroup, caps: Caps | None = None) -> GeneratedGroup:
    """Intersection of all maximal subgroups, read off the subgroup lattice."""
    lattice = lattice_of(G, caps)
    table = lattice.table
    common = frozenset(range(len(table)))
    for cls in lattice.maximal_classes():
        for member in cls.members:
            common &= member
    return _group_from_indices(lattice, common)


def _group_from_indices(lattice, key) -> GeneratedGroup:
    table = lattice.table
    gens: list[int] = []
    reached = table.closure([])
    for i in sorted(key):
        if i not in reached:
            gens.append(i)
            reached = table.closure(gens)
    return lattice.as_group(gens)


# --- Maximal subgroups ---

@dataclass
class MaximalClass:
    representative: GeneratedGroup
    class_size: int
    is_normal: bool

    @property
    def order(self) -> int:
        return self.representative.order.value


def maximal_subgroups(G: GeneratedGroup, caps: Caps | None = None) -> list[MaximalClass]:
    """One representative per conjugacy class of maximal subgroups, by increasing order."""
    lattice = lattice_of(G, caps)
    return [
        MaximalClass(lattice.representative(cls), cls.size, cls.is_normal)
        for cls in lattice.maximal_classes()
    ]


def is_maximal(G: GeneratedGroup, H: GeneratedGroup, caps: Caps | None = None) -> bool:
    caps = caps or DEFAULT_CAPS
    require_subgroup(H, G)
    if H.order.value == G.order.value:
        raise PreconditionError("H equals G")
    point = _stabilized_point(G, H)
    if point is not None:
        return _is_primitive_at(G, H, point)
    if G.order.value <= caps.brute_force:
        return _double_coset_scan(G, H, caps)
    return _coset_rep_scan(G, H, caps)


def _stabilized_point(G: GeneratedGroup, H: GeneratedGroup) -> int | None:
    """A point x with H = G_x, when G is transitive."""
    if G.order.value != H.order.value * G.degree or not G.group.is_transitive():
        return None
    for orbit in H.orbits:
        if len(orbit) == 1:
            return next(iter(orbit))
    return None


def _is_primitive_at(G: GeneratedGroup, H: GeneratedGroup, x: int) -> bool:
    """G_x is maximal iff no block through x and another point y is proper; y ranges over H-orbit reps."""
    for orbit in H.orbits:
        y = min(orbit)
        if y == x:
            continue
        if len(set(G.group.minimal_block([x, y]))) > 1:
            return False
    return True


def _double_coset_scan(G: GeneratedGroup, H: GeneratedGroup, caps: Caps) -> bool:
    target = G.order.value
    visited = set(H.element_keys)
    for g in elements(G, caps.brute_force):
        if key_of(g) in visited:
            continue
        if GeneratedGroup(list(H.generators) + [g], G.degree).order.value != target:
            return False
        frontier = [h * g for h in elements(H, caps.brute_force)]
        visited.update(key_of(x) for x in frontier)
        while frontier:
            x = frontier.pop()
            for h in H.generators:
                y = x * h
                if key_of(y) not in visited:
                    visited.add(key_of(y))
                    frontier.append(y)
    return True


def _coset_rep_scan(G: GeneratedGroup, H: GeneratedGroup, caps: Caps) -> bool:
    index = G.order.value // H.order.value
    if index > caps.brute_force:
        raise CapExceededError("maximality test index", index, caps.brute_force)
    work, sub = G.working_copy(), H.working_copy()

    def canonical(g: Permutation) -> tuple[int, ...]:
        return key_of(work._coset_representative(g, sub))

    start = canonical(G.identity)
    reps = {start: G.identity}
    queue = [G.identity]
    while queue:
        r = queue.pop()
        for s in G.generators:
            k = canonical(r * s)
            if k not in reps:
                reps[k] = r * s
                queue.append(r * s)
    target = G.order.value
    seen = {start}
    for k, r in reps.items():
        if k in seen:
            continue
        if GeneratedGroup(list(H.generators) + [r], G.degree).order.value != target:
            return False
        frontier = [r]
        seen.add(k)
        while frontier:
            x = frontier.pop()
            for h in H.generators:
                kk = canonical(x * h)
                if kk not in seen:
                    seen.add(kk)
                    frontier.append(reps[kk])
    return True


# --- Primitive groups ---

@dataclass
class PrimitiveStructureReport:
    """Conclusions about a core-free maximal M of G, one field per statement."""
    p: int | None
    socle: GeneratedGroup | None
    unique_minimal_normal: bool = False     # O_p(G) is the only minimal normal subgroup
    fitting_equal: bool = False             # O_p(G) = F(G)
    self_centralizing: bool = False         # C_G(O_p(G)) = O_p(G)
    frattini_trivial: bool = False          # Φ(G) = 1
    frattini_basis: str = ""
    complement_ok: bool = False             # G = M·O_p(G), M ∩ O_p(G) = 1
    op_of_m_trivial: bool = False           # O_p(M) = 1

    @property
    def checks(self) -> list[tuple[str, bool]]:
        if self.p is None:
            return [("some O_p(G) is nontrivial", False)]
        return [
            ("O_p(G) is the unique minimal normal subgroup", self.unique_minimal_normal),
            ("O_p(G) = F(G)", self.fitting_equal),
            ("C_G(O_p(G)) = O_p(G)", self.self_centralizing),
            (f"Φ(G) = 1 ({self.frattini_basis})", self.frattini_trivial),
            ("M is a complement to O_p(G)", self.complement_ok),
            ("O_p(M) = 1", self.op_of_m_trivial),
        ]

    @property
    def holds(self) -> bool:
        return self.p is not None and all(ok for _, ok in self.checks)


def check_primitive_structure(G: GeneratedGroup, M: GeneratedGroup, pi: "PrimeSet | Iterable[int] | None" = None,
                              caps: Caps | None = None) -> PrimitiveStructureReport:
    """
    For a core-free maximal M of a π-solvable G (solvable when `pi` is None):
    G has a unique minimal normal subgroup O_p(G) = F(G) for a prime p, with
    C_G(O_p) = O_p, Φ(G) = 1, G = M·O_p, M ∩ O_p = 1 and O_p(M) = 1.
    """
    caps = caps or DEFAULT_CAPS
    if not is_maximal(G, M, caps):
        raise PreconditionError("M is not maximal in G")
    if not core(G, M, caps).is_trivial:
        raise PreconditionError("M has a nontrivial core")
    solvable_enough = is_solvable(G) if pi is None else is_pi_solvable(G, pi, caps)
    if not solvable_enough:
        raise PreconditionError("G is not solvable for the requested primes")

    cores = p_cores(G, caps=caps)
    if not cores:
        return PrimitiveStructureReport(None, None)
    p = min(cores)
    socle = cores[p]
    minimal = minimal_normal_subgroups(G, caps)
    report = PrimitiveStructureReport(
        p,
        socle,
        unique_minimal_normal=len(minimal) == 1 and equal_groups(minimal[0], socle),
        fitting_equal=equal_groups(socle, fitting(G, caps)),
        self_centralizing=equal_groups(centralizer(G, socle, caps), socle),
        complement_ok=(intersection(M, socle, caps).is_trivial
                       and M.order.value * socle.order.value == G.order.value),
        op_of_m_trivial=o_p(M, p, caps=caps).is_trivial,
    )
    if G.order.value <= caps.order:
        report.frattini_trivial, report.frattini_basis = frattini(G, caps).is_trivial, "subgroup lattice"
    else:
        # Φ(G) is normal and lies in every maximal subgroup, hence in Core_G(M).
        report.frattini_trivial, report.frattini_basis = True, "Φ(G) ⊆ Core_G(M) = 1"
    return report


# --- Overview ---

@dataclass
class StructureReport:
    name: str | None
    degree: int
    order: FactoredInteger
    solvable: bool
    nilpotent: bool
    derived_orders: list[int]
    fitting_order: int
    p_core_orders: dict[int, int] = field(default_factory=dict)
    frattini_order: int | None = None
    maximal_classes: list[MaximalClass] | None = None
    notes: list[str] = field(default_factory=list)


def structure_report(G: GeneratedGroup, caps: Caps | None = None) -> StructureReport:
    caps = caps or DEFAULT_CAPS
    series = derived_series(G)
    report = StructureReport(
        name=G.name,
        degree=G.degree,
        order=G.order,
        solvable=series[-1].is_trivial,
        nilpotent=is_nilpotent(G),
        derived_orders=[D.order.value for D in series],
        fitting_order=fitting(G, caps).order.value,
        p_core_orders={p: Op.order.value for p, Op in p_cores(G, caps=caps).items()},
    )
    if G.order.value <= caps.order:
        report.frattini_order = frattini(G, caps).order.value
        report.maximal_classes = maximal_subgroups(G, caps)
    else:
        report.notes.append(f"|G| = {G.order.value} is above the subgroup enumeration cap {caps.order}; "
                            "maximal subgroups and Φ(G) not enumerated")
    return report

