"""
Subgroup Algorithms
-------------------
Centralizers, normalizers, intersections, closures, cores, Sylow and Hall
subgroups, minimal normal subgroups, O_p / O_π and quotient presentations.

Two regimes, chosen by the caller's caps:
  - |G| <= caps.brute_force: element scans over the stabilizer-chain enumeration.
  - above it: sympy backtrack searches pruned by orbit structure.

All randomness flows from an explicit seed, so every result is reproducible.
"""
import logging
import random
import weakref
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from sympy import divisors, isprime, multiplicity
from sympy.combinatorics import Permutation

from maxnorm.config import DEFAULT_CAPS, Caps
from maxnorm.errors import BudgetExhaustedError, CapExceededError, DegreeMismatchError, PreconditionError
from maxnorm.perm_core import (
    GeneratedGroup,
    PrimeSet,
    as_prime_set,
    conjugate_subgroup,
    elements,
    is_subgroup,
    key_of,
    random_elements,
)

logger = logging.getLogger(__name__)

# Random draws tried before a large-group search falls back to an exact normalizer.
QUICK_DRAWS = 256
# Random lift tuples tried once the exhaustive complement search runs out of budget.
RANDOM_LIFTS = 4096


# --- Shared helpers ---

def trivial(G: GeneratedGroup) -> GeneratedGroup:
    return GeneratedGroup([], G.degree)


def require_subgroup(H: GeneratedGroup, G: GeneratedGroup, what: str = "H"):
    if H.degree != G.degree:
        raise DegreeMismatchError(f"{what} has degree {H.degree}, G has degree {G.degree}")
    if not is_subgroup(H, G):
        raise PreconditionError(f"{what} is not a subgroup of G")


def normalizes(g: Permutation, H: GeneratedGroup) -> bool:
    return all(H.has(h ^ g) for h in H.generators)


def is_normal(G: GeneratedGroup, H: GeneratedGroup) -> bool:
    require_subgroup(H, G)
    return all(normalizes(g, H) for g in G.generators)


def _is_small(G: GeneratedGroup, caps: Caps) -> bool:
    return G.order.value <= caps.brute_force


def _closure_of_filter(G: GeneratedGroup, predicate: Callable[[Permutation], bool],
                       start: GeneratedGroup | None, caps: Caps) -> GeneratedGroup:
    """The subgroup of G made of the elements satisfying `predicate` (which must define a subgroup)."""
    found = start or trivial(G)
    for g in elements(G, caps.brute_force):
        if found.has(g) or not predicate(g):
            continue
        found = GeneratedGroup(list(found.generators) + [g], G.degree)
        if found.order.value == G.order.value:
            break
    return found


def _orbit_labels(H: GeneratedGroup) -> tuple[list[int], list[int]]:
    """Per point: the index of its H-orbit and that orbit's size."""
    label = [0] * H.degree
    size = [0] * H.degree
    for i, orb in enumerate(H.orbits):
        for x in orb:
            label[x] = i
            size[x] = len(orb)
    return label, size


# --- Centralizer, normalizer, intersection, closure, core ---

def centralizer(G: GeneratedGroup, H: GeneratedGroup, caps: Caps | None = None) -> GeneratedGroup:
    caps = caps or DEFAULT_CAPS
    require_subgroup(H, G)
    if H.is_trivial:
        return G
    if _is_small(G, caps):
        gens = [h.array_form for h in H.generators]

        def commutes(g: Permutation) -> bool:
            a = g.array_form
            return all(a[h[i]] == h[a[i]] for h in gens for i in range(G.degree))

        return _closure_of_filter(G, commutes, None, caps)
    found = G.working_copy().centralizer(H.working_copy())
    return GeneratedGroup(list(found.generators), G.degree)


def normalizer(G: GeneratedGroup, H: GeneratedGroup, caps: Caps | None = None) -> GeneratedGroup:
    caps = caps or DEFAULT_CAPS
    require_subgroup(H, G)
    if H.is_trivial or H.order.value == G.order.value:
        return G
    if all(normalizes(g, H) for g in G.generators):
        return G
    if _is_small(G, caps):
        return _closure_of_filter(G, lambda g: normalizes(g, H), H, caps)
    return _normalizer_search(G, H)


def _normalizer_search(G: GeneratedGroup, H: GeneratedGroup) -> GeneratedGroup:
    """
    Backtrack over G's chain. An element normalizing H permutes the H-orbits and
    keeps their sizes, which prunes a partial base image as soon as it breaks that.
    """
    base = list(G.base)
    label, size = _orbit_labels(H)

    def level_test(level: int):
        b = base[level]

        def test(words) -> bool:
            image = words[level].array_form
            if size[image[b]] != size[b]:
                return False
            for j in range(level):
                same_before = label[base[j]] == label[b]
                same_after = label[image[base[j]]] == label[image[b]]
                if same_before != same_after:
                    return False
            return True
        return test

    logger.debug(f"normalizer search: |G|={G.order.value}, |H|={H.order.value}, degree={G.degree}")
    found = G.working_copy().subgroup_search(
        lambda g: normalizes(g, H),
        base=base,
        strong_gens=list(G.strong_gens),
        tests=[level_test(i) for i in range(len(base))],
        init_subgroup=H.working_copy(),
    )
    return GeneratedGroup(list(found.generators), G.degree)


def intersection(A: GeneratedGroup, B: GeneratedGroup, caps: Caps | None = None) -> GeneratedGroup:
    caps = caps or DEFAULT_CAPS
    if A.degree != B.degree:
        raise DegreeMismatchError(f"degree {A.degree} does not match degree {B.degree}")
    if A.order.value > B.order.value:
        A, B = B, A
    if is_subgroup(A, B):
        return A
    if _is_small(A, caps):
        return _closure_of_filter(A, B.has, None, caps)
    base = list(A.base)
    orbits_b = [B.orbit(b) for b in base]

    def level_test(level: int):
        def test(words) -> bool:
            return words[level].array_form[base[level]] in orbits_b[level]
        return test

    found = A.working_copy().subgroup_search(
        B.has,
        base=base,
        strong_gens=list(A.strong_gens),
        tests=[level_test(i) for i in range(len(base))],
    )
    return GeneratedGroup(list(found.generators), A.degree)


def normal_closure(G: GeneratedGroup, S: GeneratedGroup | Sequence[Permutation]) -> GeneratedGroup:
    """Smallest normal subgroup of G containing S; conjugates by G's generators are added until stable."""
    gens = list(S.generators) if isinstance(S, GeneratedGroup) else list(S)
    for s in gens:
        if s.size != G.degree:
            raise DegreeMismatchError(f"generator of degree {s.size} in a group of degree {G.degree}")
        if not G.has(s):
            raise PreconditionError("normal closure of elements outside G")
    closure = GeneratedGroup(gens, G.degree)
    changed = True
    while changed:
        changed = False
        for n in list(closure.generators):
            for g in G.generators:
                c = n ^ g
                if not closure.has(c):
                    closure = GeneratedGroup(list(closure.generators) + [c], G.degree)
                    changed = True
    return closure


def core(G: GeneratedGroup, H: GeneratedGroup, caps: Caps | None = None) -> GeneratedGroup:
    """Largest normal subgroup of G inside H: H ∩ H^g over G's generators until a full pass is stable."""
    require_subgroup(H, G)
    current = H
    changed = True
    while changed and not current.is_trivial:
        changed = False
        for g in G.generators:
            image = conjugate_subgroup(current, g)
            if is_subgroup(image, current):
                continue
            current = intersection(current, image, caps)
            changed = True
    return current


def conjugates(G: GeneratedGroup, H: GeneratedGroup, budget: int | None = None,
               caps: Caps | None = None) -> list[GeneratedGroup]:
    """Every G-conjugate of H, in discovery order. Raises BudgetExhaustedError past `budget`."""
    caps = caps or DEFAULT_CAPS
    budget = budget if budget is not None else caps.conjugates
    require_subgroup(H, G)
    if H.order.value > caps.brute_force:
        raise CapExceededError("conjugate enumeration", H.order.value, caps.brute_force)
    found = {H.element_keys: H}
    queue = [H]
    while queue:
        X = queue.pop(0)
        for g in G.generators:
            Y = conjugate_subgroup(X, g)
            if Y.element_keys in found:
                continue
            if len(found) >= budget:
                raise BudgetExhaustedError(f"more than {budget} conjugates of a subgroup of order {H.order.value}")
            found[Y.element_keys] = Y
            queue.append(Y)
    return list(found.values())


# --- Sylow ---

def _chain_descent(G: GeneratedGroup, pi: Iterable[int]) -> GeneratedGroup:
    """Deepest chain member whose index in G is coprime to every prime in `pi`."""
    primes = list(pi)
    level = 0
    for size in G.basic_orbit_sizes:
        if any(size % p == 0 for p in primes):
            break
        level += 1
    return G.stabilizer_at(level)


def _order_modulo(x: Permutation, P: GeneratedGroup) -> int:
    for d in divisors(int(x.order())):
        if P.has(x ** d):
            return d
    raise AssertionError("x^|x| is the identity")


def _p_step(x: Permutation, P: GeneratedGroup, p: int) -> Permutation | None:
    """For x normalizing P: a power of x outside P whose p-th power lies in P, if there is one."""
    m = _order_modulo(x, P)
    e = multiplicity(p, m)
    if e == 0:
        return None
    return x ** ((m // p ** e) * p ** (e - 1))


def _grow_p_subgroup(host: GeneratedGroup, P: GeneratedGroup, p: int, rng: random.Random,
                     caps: Caps) -> Permutation:
    if not _is_small(host, caps):
        draws = random_elements(host, rng)
        for _ in range(QUICK_DRAWS):
            x = next(draws)
            if normalizes(x, P):
                y = _p_step(x, P, p)
                if y is not None:
                    return y
    N = normalizer(host, P, caps)
    draws = random_elements(N, rng)
    for _ in range(QUICK_DRAWS):
        y = _p_step(next(draws), P, p)
        if y is not None:
            return y
    if _is_small(N, caps):
        for x in elements(N, caps.brute_force):
            y = _p_step(x, P, p)
            if y is not None:
                return y
    raise BudgetExhaustedError(f"no {p}-element found in the normalizer of a {p}-subgroup of order {P.order.value}")


def sylow(G: GeneratedGroup, p: int, seed: int = 0, caps: Caps | None = None) -> GeneratedGroup:
    """
    A Sylow p-subgroup. The chain is descended while the index stays prime to p,
    then a p-subgroup is grown one factor p at a time inside its normalizer.
    """
    caps = caps or DEFAULT_CAPS
    if not isprime(p):
        raise PreconditionError(f"{p} is not a prime")
    target = G.order.p_part(p)
    if target == 1:
        return trivial(G)
    host = _chain_descent(G, [p])
    if host.order.value == target:
        return host
    rng = random.Random(seed)
    P = trivial(G)
    while P.order.value < target:
        y = _grow_p_subgroup(host, P, p, rng, caps)
        P = GeneratedGroup(list(P.generators) + [y], G.degree)
    logger.debug(f"sylow {p}: order {P.order.value} found inside a host of order {host.order.value}")
    return P


# --- Quotients ---

@dataclass
class QuotientPresentation:
    """
    G/N acting on the right cosets of N. Coset i has representative representatives[i];
    coset 0 is N itself. project(g) sends coset i to the coset of representatives[i]·g.
    """
    group: GeneratedGroup
    kernel: GeneratedGroup
    representatives: list[Permutation]
    coset_of: Callable[[Permutation], int] = field(repr=False)

    @cached_property
    def quotient(self) -> GeneratedGroup:
        return GeneratedGroup([self.project(g) for g in self.group.generators], len(self.representatives))

    def project(self, g: Permutation) -> Permutation:
        return Permutation([self.coset_of(r * g) for r in self.representatives])

    def section(self, xbar: Permutation) -> Permutation:
        return self.representatives[xbar.array_form[0]]

    def image(self, H: GeneratedGroup) -> GeneratedGroup:
        return GeneratedGroup([self.project(h) for h in H.generators], len(self.representatives))


def quotient(G: GeneratedGroup, N: GeneratedGroup, caps: Caps | None = None) -> QuotientPresentation:
    caps = caps or DEFAULT_CAPS
    if not is_normal(G, N):
        raise PreconditionError("N is not normal in G")
    index = G.order.value // N.order.value
    if index > caps.brute_force:
        raise CapExceededError("quotient degree", index, caps.brute_force)
    if _is_small(G, caps):
        lookup: dict[tuple[int, ...], int] = {}
        reps: list[Permutation] = []
        kernel = list(elements(N, caps.brute_force))
        for g in elements(G, caps.brute_force):
            if key_of(g) in lookup:
                continue
            for n in kernel:
                lookup[key_of(n * g)] = len(reps)
            reps.append(g)
        return QuotientPresentation(G, N, reps, lambda x: lookup[key_of(x)])
    return _quotient_by_canonical_reps(G, N)


def _quotient_by_canonical_reps(G: GeneratedGroup, N: GeneratedGroup) -> QuotientPresentation:
    work, kernel = G.working_copy(), N.working_copy()
    index: dict[tuple[int, ...], int] = {}

    def canonical(g: Permutation) -> Permutation:
        return work._coset_representative(g, kernel)

    reps = [canonical(G.identity)]
    index[key_of(reps[0])] = 0
    i = 0
    while i < len(reps):
        for s in G.generators:
            c = canonical(reps[i] * s)
            if key_of(c) not in index:
                index[key_of(c)] = len(reps)
                reps.append(c)
        i += 1
    logger.debug(f"quotient by canonical coset reps: {len(reps)} cosets")
    return QuotientPresentation(G, N, reps, lambda x: index[key_of(canonical(x))])


def preimage(qp: QuotientPresentation, Hbar: GeneratedGroup) -> GeneratedGroup:
    require_subgroup(Hbar, qp.quotient, "H̄")
    gens = list(qp.kernel.generators) + [qp.section(x) for x in Hbar.generators]
    return GeneratedGroup(gens, qp.group.degree)


# --- Minimal normal subgroups, O_p, O_π ---

def class_representatives(G: GeneratedGroup, pool: Iterable[Permutation]) -> list[Permutation]:
    """One element per G-conjugacy class among `pool` (which must be closed under G-conjugation)."""
    seen: set[tuple[int, ...]] = set()
    reps = []
    for x in pool:
        if key_of(x) in seen:
            continue
        reps.append(x)
        seen.add(key_of(x))
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in G.generators:
                z = y ^ g
                if key_of(z) not in seen:
                    seen.add(key_of(z))
                    frontier.append(z)
    return reps


def _inclusion_minimal(candidates: list[GeneratedGroup]) -> list[GeneratedGroup]:
    kept: list[GeneratedGroup] = []
    for C in sorted(candidates, key=lambda X: X.order.value):
        if C.is_trivial:
            continue
        if any(is_subgroup(K, C) for K in kept):
            continue
        kept.append(C)
    return kept


def p_cores(G: GeneratedGroup, seed: int = 0, caps: Caps | None = None) -> dict[int, GeneratedGroup]:
    """O_p(G) for every prime p dividing |G| where it is nontrivial."""
    result = {}
    for p in G.order.primes:
        Op = o_p(G, p, seed, caps)
        if not Op.is_trivial:
            result[p] = Op
    return result


_MINIMAL_NORMAL: "weakref.WeakKeyDictionary[GeneratedGroup, list[GeneratedGroup]]" = weakref.WeakKeyDictionary()


def minimal_normal_subgroups(G: GeneratedGroup, caps: Caps | None = None) -> list[GeneratedGroup]:
    """Inclusion-minimal nontrivial normal subgroups, smallest first. Cached per group object."""
    cached = _MINIMAL_NORMAL.get(G)
    if cached is None:
        cached = _MINIMAL_NORMAL.setdefault(G, _minimal_normal_subgroups(G, caps or DEFAULT_CAPS))
    return list(cached)


def _minimal_normal_subgroups(G: GeneratedGroup, caps: Caps) -> list[GeneratedGroup]:
    if G.is_trivial:
        return []
    if _is_small(G, caps):
        reps = [x for x in class_representatives(G, elements(G, caps.brute_force)) if not x.is_Identity]
        return _inclusion_minimal([normal_closure(G, [x]) for x in reps])

    # Abelian ones lie in Z(O_p(G)); nonabelian ones lie in C_G(F(G)).
    candidates = []
    cores = p_cores(G, caps=caps)
    for p, Op in cores.items():
        Z = centralizer(Op, Op, caps)
        if Z.order.value > caps.brute_force:
            raise CapExceededError("center of a p-core", Z.order.value, caps.brute_force)
        pool = [z for z in elements(Z, caps.brute_force) if int(z.order()) == p]
        candidates += [normal_closure(G, [x]) for x in class_representatives(G, pool)]
    fitting_gens = [g for Op in cores.values() for g in Op.generators]
    F = GeneratedGroup(fitting_gens, G.degree)
    C = centralizer(G, F, caps)
    if not is_subgroup(C, F):
        if C.order.value > caps.brute_force:
            raise CapExceededError("centralizer of the Fitting subgroup", C.order.value, caps.brute_force)
        pool = [x for x in elements(C, caps.brute_force) if not x.is_Identity]
        candidates += [normal_closure(G, [x]) for x in class_representatives(G, pool)]
    return _inclusion_minimal(candidates)


def o_p(G: GeneratedGroup, p: int, seed: int = 0, caps: Caps | None = None) -> GeneratedGroup:
    if not isprime(p):
        raise PreconditionError(f"{p} is not a prime")
    if G.order.p_part(p) == 1:
        return trivial(G)
    return core(G, sylow(G, p, seed, caps), caps)


def o_pi(G: GeneratedGroup, pi: "PrimeSet | Iterable[int]", caps: Caps | None = None) -> GeneratedGroup:
    """
    Largest normal π-subgroup. Minimal normal π-subgroups of G/N are pulled back
    into N until G/N has none left.
    """
    caps = caps or DEFAULT_CAPS
    pi = as_prime_set(pi)
    if G.order.pi_part(pi) == 1:
        return trivial(G)
    if G.order.is_pi_number(pi):
        return G
    layer = [M for M in minimal_normal_subgroups(G, caps) if M.order.is_pi_number(pi)]
    if not layer:
        return trivial(G)
    N = GeneratedGroup([g for M in layer for g in M.generators], G.degree)
    while True:
        qp = quotient(G, N, caps)
        layer = [M for M in minimal_normal_subgroups(qp.quotient, caps) if M.order.is_pi_number(pi)]
        if not layer:
            return N
        extra = [g for M in layer for g in preimage(qp, M).generators]
        N = GeneratedGroup(list(N.generators) + extra, G.degree)


# --- Hall ---

@dataclass(frozen=True)
class HallWitness:
    pi: PrimeSet
    subgroup: GeneratedGroup
    group: GeneratedGroup = field(repr=False)

    @cached_property
    def normalizer(self) -> GeneratedGroup:
        return normalizer(self.group, self.subgroup)


def hall(G: GeneratedGroup, pi: "PrimeSet | Iterable[int]", seed: int = 0,
         caps: Caps | None = None) -> HallWitness:
    """
    A Hall π-subgroup of a π-separable G. The chain is descended while the index
    stays a π′-number; the rest recurses through a minimal normal subgroup M,
    complementing M when it is a π′-group.
    """
    from maxnorm.structure import is_pi_separable

    caps = caps or DEFAULT_CAPS
    pi = as_prime_set(pi).restricted(G.order)
    target = G.order.pi_part(pi)
    if target == 1:
        return HallWitness(pi, trivial(G), G)
    if target == G.order.value:
        return HallWitness(pi, G, G)
    if len(pi) == 1:
        return HallWitness(pi, sylow(G, next(iter(pi)), seed, caps), G)
    if not is_pi_separable(G, pi, caps):
        raise PreconditionError(f"G is not {pi}-separable")
    host = _chain_descent(G, pi)
    if host.order.value == target:
        return HallWitness(pi, host, G)
    return HallWitness(pi, _hall_descent(host, pi, random.Random(seed), caps), G)


def _hall_descent(K: GeneratedGroup, pi: PrimeSet, rng: random.Random, caps: Caps) -> GeneratedGroup:
    target = K.order.pi_part(pi)
    if target == K.order.value:
        return K
    if target == 1:
        return trivial(K)
    minimal = minimal_normal_subgroups(K, caps)
    minimal.sort(key=lambda M: not M.order.is_pi_number(pi))
    M = minimal[0]
    qp = quotient(K, M, caps)
    Hbar = _hall_descent(qp.quotient, pi, rng, caps)
    if M.order.is_pi_number(pi):
        return preimage(qp, Hbar)
    return _complement(qp, M, Hbar, rng, caps)


class _SearchExhausted(Exception):
    pass


def _complement(qp: QuotientPresentation, M: GeneratedGroup, Hbar: GeneratedGroup,
                rng: random.Random, caps: Caps) -> GeneratedGroup:
    """
    A complement to the π′-group M over H̄: each generator x̄_i is lifted to s_i·m_i.
    A partial choice survives only while ⟨c_1..c_j⟩ has the order of ⟨x̄_1..x̄_j⟩.
    """
    degree = qp.group.degree
    xs = [x for x in Hbar.generators if not x.is_Identity]
    if not xs:
        return GeneratedGroup([], degree)
    lifts = [qp.section(x) for x in xs]
    prefix_orders = [GeneratedGroup(xs[:j + 1], Hbar.degree).order.value for j in range(len(xs))]
    kernel = list(elements(M, caps.brute_force))
    tried = 0
    chosen: list[Permutation] = []

    def extend(j: int) -> bool:
        nonlocal tried
        if j == len(xs):
            return True
        want = int(xs[j].order())
        for m in kernel:
            tried += 1
            if tried > caps.complement:
                raise _SearchExhausted
            c = lifts[j] * m
            if int(c.order()) != want:
                continue
            if GeneratedGroup(chosen + [c], degree).order.value != prefix_orders[j]:
                continue
            chosen.append(c)
            if extend(j + 1):
                return True
            chosen.pop()
        return False

    try:
        if extend(0):
            return GeneratedGroup(chosen, degree)
    except _SearchExhausted:
        logger.warning(f"complement search hit its budget of {caps.complement}; trying random lifts")
    for _ in range(min(caps.complement, RANDOM_LIFTS)):
        cs = [s * rng.choice(kernel) for s in lifts]
        if GeneratedGroup(cs, degree).order.value == Hbar.order.value:
            return GeneratedGroup(cs, degree)
    raise BudgetExhaustedError(f"no complement found to a normal subgroup of order {M.order.value}")
