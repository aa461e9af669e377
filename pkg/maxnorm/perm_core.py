"""
Permutation Core
----------------
Permutations of {0..n-1}, factored orders, prime sets and the GeneratedGroup
wrapper around a sympy stabilizer chain.

Composition is left-to-right: compose(a, b) applies a first, then b. That is
sympy's own `a * b`, so products below are written with `*` directly.
Conjugation is a^g = g⁻¹·a·g (sympy's `a ^ g`).
"""
import logging
import random
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from sympy import factorint, isprime
from sympy.combinatorics import Permutation, PermutationGroup

from maxnorm.config import BRUTE_FORCE_CAP, ELEMENT_SET_POINTS
from maxnorm.errors import CapExceededError, DegreeMismatchError, PreconditionError

logger = logging.getLogger(__name__)

_CYCLE = re.compile(r"\(([^()]*)\)")


# --- Orders and prime sets ---

@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, n: int) -> "FactoredInteger":
        if n < 1:
            raise ValueError(f"group orders are positive, got {n}")
        return cls(n, tuple(sorted(factorint(n).items())))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        return dict(self.factors).get(p, 0)

    def p_part(self, p: int) -> int:
        return p ** self.exponent(p)

    def pi_part(self, pi: Iterable[int]) -> int:
        wanted = set(pi)
        part = 1
        for p, e in self.factors:
            if p in wanted:
                part *= p ** e
        return part

    def is_pi_number(self, pi: Iterable[int]) -> bool:
        return self.pi_part(pi) == self.value

    def index(self, sub: "FactoredInteger") -> "FactoredInteger":
        if self.value % sub.value:
            raise PreconditionError(f"{sub.value} does not divide {self.value}")
        return FactoredInteger.of(self.value // sub.value)

    def __str__(self) -> str:
        if self.value == 1:
            return "1"
        body = " · ".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors)
        return f"{self.value} = {body}"


@dataclass(frozen=True)
class PrimeSet:
    primes: frozenset[int]

    def __post_init__(self):
        for p in self.primes:
            if not isprime(p):
                raise PreconditionError(f"{p} is not a prime")

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        return cls(frozenset(int(p) for p in primes))

    @classmethod
    def parse(cls, text: str) -> "PrimeSet":
        """Reads '2,3' or '{2, 3}'."""
        body = text.strip().strip("{}")
        if not body:
            return cls(frozenset())
        try:
            return cls.of(int(tok) for tok in re.split(r"[,\s]+", body) if tok)
        except ValueError as e:
            raise PreconditionError(f"bad prime set '{text}': {e}") from e

    def complement(self, order: FactoredInteger) -> "PrimeSet":
        """π′ relative to the primes dividing `order`."""
        return PrimeSet(frozenset(p for p in order.primes if p not in self.primes))

    def restricted(self, order: FactoredInteger) -> "PrimeSet":
        return PrimeSet(frozenset(p for p in order.primes if p in self.primes))

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.primes))

    def __len__(self) -> int:
        return len(self.primes)

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self) + "}"


def as_prime_set(pi: "PrimeSet | Iterable[int] | int") -> PrimeSet:
    if isinstance(pi, PrimeSet):
        return pi
    if isinstance(pi, int):
        return PrimeSet.of([pi])
    return PrimeSet.of(pi)


# --- Permutations ---

def identity(degree: int) -> Permutation:
    return Permutation(list(range(degree)))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """a then b."""
    _same_degree(a.size, b.size)
    return a * b


def inverse(a: Permutation) -> Permutation:
    return ~a


def conjugate(a: Permutation, g: Permutation) -> Permutation:
    """a^g = g⁻¹·a·g, so i^(a^g) = ((i^(g⁻¹))^a)^g."""
    _same_degree(a.size, g.size)
    return a ^ g


def commutator(a: Permutation, b: Permutation) -> Permutation:
    return ~a * ~b * a * b


def key_of(a: Permutation) -> tuple[int, ...]:
    return tuple(a.array_form)


def parse_cycles(text: str, degree: int) -> Permutation:
    """
    Reads 1-based cycle notation such as '(1 2 3)(4 5)' or '()' for the identity.
    Non-disjoint cycles compose left to right.
    """
    stripped = _CYCLE.sub("", text)
    if stripped.strip():
        raise PreconditionError(f"unexpected text outside cycles: '{stripped.strip()}'")
    result = identity(degree)
    for body in _CYCLE.findall(text):
        tokens = [tok for tok in re.split(r"[,\s]+", body.strip()) if tok]
        if not tokens:
            continue
        try:
            points = [int(tok) - 1 for tok in tokens]
        except ValueError as e:
            raise PreconditionError(f"non-integer point in cycle '({body})'") from e
        if any(p < 0 or p >= degree for p in points):
            raise DegreeMismatchError(f"cycle '({body})' leaves the points 1..{degree}")
        if len(set(points)) != len(points):
            raise PreconditionError(f"cycle '({body})' repeats a point")
        image = list(range(degree))
        for i, p in enumerate(points):
            image[p] = points[(i + 1) % len(points)]
        result = result * Permutation(image)
    return result


def format_cycles(a: Permutation) -> str:
    """Canonical 1-based disjoint cycles, each starting at its smallest point."""
    form = a.array_form
    seen = [False] * len(form)
    cycles = []
    for start in range(len(form)):
        if seen[start] or form[start] == start:
            seen[start] = True
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(str(x + 1))
            x = form[x]
        cycles.append("(" + " ".join(cycle) + ")")
    return "".join(cycles) or "()"


def _same_degree(n: int, m: int):
    if n != m:
        raise DegreeMismatchError(f"degree {n} does not match degree {m}")


# --- Groups ---

class GeneratedGroup:
    """
    A permutation group given by generators, with its stabilizer chain computed
    once on construction. Generators are kept in the order supplied (duplicates
    and redundant identities removed) so that printed output is reproducible.
    """

    def __init__(self, generators: Sequence[Permutation], degree: int, name: str | None = None):
        if degree < 1:
            raise DegreeMismatchError(f"degree must be at least 1, got {degree}")
        kept: list[Permutation] = []
        seen: set[tuple[int, ...]] = set()
        for g in generators:
            _same_degree(g.size, degree)
            k = key_of(g)
            if k in seen or g.is_Identity:
                continue
            seen.add(k)
            kept.append(g)
        self.degree = degree
        self.name = name
        self.generators: tuple[Permutation, ...] = tuple(kept) or (identity(degree),)
        self.group = PermutationGroup(list(self.generators))
        self.group.schreier_sims()
        self.base: tuple[int, ...] = tuple(self.group.base)
        self.strong_gens: tuple[Permutation, ...] = tuple(self.group.strong_gens)
        self.order = FactoredInteger.of(int(self.group.order()))

    def __repr__(self) -> str:
        label = f"{self.name}, " if self.name else ""
        return f"GeneratedGroup({label}order={self.order.value}, degree={self.degree})"

    @property
    def is_trivial(self) -> bool:
        return self.order.value == 1

    @property
    def identity(self) -> Permutation:
        return identity(self.degree)

    def working_copy(self) -> PermutationGroup:
        """A fresh sympy group on the same generators. sympy rebases groups it is handed; `self.group` must stay put."""
        return PermutationGroup(list(self.generators))

    @cached_property
    def basic_orbit_sizes(self) -> tuple[int, ...]:
        return tuple(len(orbit) for orbit in self.group.basic_orbits)

    def stabilizer_at(self, level: int) -> "GeneratedGroup":
        """The chain member fixing base[0..level-1] pointwise."""
        if level == 0:
            return self
        if level >= len(self.base):
            return GeneratedGroup([], self.degree)
        return GeneratedGroup(list(self.group.basic_stabilizers[level].generators), self.degree)

    @cached_property
    def element_keys(self) -> frozenset[tuple[int, ...]]:
        return frozenset(key_of(g) for g in self.group.generate_schreier_sims())

    def has(self, g: Permutation) -> bool:
        """Membership; small groups use a hashed element set, larger ones sift through the chain."""
        if g.size != self.degree:
            raise DegreeMismatchError(f"permutation of degree {g.size} tested against a group of degree {self.degree}")
        if self.order.value * self.degree <= ELEMENT_SET_POINTS:
            return key_of(g) in self.element_keys
        return bool(self.group.contains(g))

    def orbit(self, point: int) -> frozenset[int]:
        return frozenset(self.group.orbit(point))

    @cached_property
    def orbits(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(o) for o in sorted(self.group.orbits(), key=min))


def generated(generators: Sequence[Permutation], degree: int | None = None, name: str | None = None) -> GeneratedGroup:
    """The group generated by `generators`. `degree` is needed only when the list is empty."""
    if degree is None:
        if not generators:
            raise PreconditionError("degree is required for an empty generator list")
        degree = generators[0].size
    return GeneratedGroup(list(generators), degree, name)


def order(G: GeneratedGroup) -> FactoredInteger:
    return G.order


def contains(G: GeneratedGroup, a: Permutation) -> bool:
    return G.has(a)


def is_subgroup(H: GeneratedGroup, G: GeneratedGroup) -> bool:
    _same_degree(H.degree, G.degree)
    if G.order.value % H.order.value:
        return False
    return all(G.has(h) for h in H.generators)


def equal_groups(A: GeneratedGroup, B: GeneratedGroup) -> bool:
    _same_degree(A.degree, B.degree)
    return A.order.value == B.order.value and is_subgroup(A, B)


def orbit(G: GeneratedGroup, point: int) -> frozenset[int]:
    if not 0 <= point < G.degree:
        raise DegreeMismatchError(f"point {point + 1} outside 1..{G.degree}")
    return G.orbit(point)


def elements(G: GeneratedGroup, cap: int = BRUTE_FORCE_CAP) -> Iterator[Permutation]:
    """
    Every element exactly once, in the deterministic order of the stabilizer chain.
    Refuses (before yielding anything) when |G| exceeds `cap`.
    """
    if G.order.value > cap:
        raise CapExceededError("element enumeration", G.order.value, cap)
    return iter(G.group.generate_schreier_sims())


def random_elements(G: GeneratedGroup, rng: random.Random) -> Iterator[Permutation]:
    """Uniform draws u_k·…·u_0 from the chain transversals, driven by `rng`."""
    levels = [[t[x] for x in sorted(t)] for t in G.group.basic_transversals]
    while True:
        g = G.identity
        for transversal in reversed(levels):
            g = g * rng.choice(transversal)
        yield g


def random_element(G: GeneratedGroup, seed: int = 0) -> Permutation:
    return next(random_elements(G, random.Random(seed)))


def conjugate_subgroup(H: GeneratedGroup, g: Permutation) -> GeneratedGroup:
    return GeneratedGroup([h ^ g for h in H.generators], H.degree)


def element_order_histogram(G: GeneratedGroup, cap: int = BRUTE_FORCE_CAP) -> dict[int, int]:
    histogram: dict[int, int] = {}
    for g in elements(G, cap):
        o = int(g.order())
        histogram[o] = histogram.get(o, 0) + 1
    return dict(sorted(histogram.items()))


def generator_strings(G: GeneratedGroup) -> list[str]:
    return [format_cycles(g) for g in G.generators]
