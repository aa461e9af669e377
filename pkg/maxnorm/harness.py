"""
Theorem Harness
---------------
Executable forms of the normalizer theorems on maximal subgroups. Each verifier
is a LangGraph workflow:

    hypotheses -> (verdict, when enforced hypotheses fail)
               -> maximals -> witnesses -> verdict

The witness search is exact. If some Sylow q-subgroup Q' of G has N_G(Q') ⊆ H,
then Q' is a Sylow subgroup of H, and all of those are H-conjugate; so testing
one Sylow q-subgroup of H (when its order is the q-part of |G|) decides the
question. The same holds for Hall subgroups of π-separable groups. A scan over
G-conjugates is kept as an independent cross-check for small groups.
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, TypedDict

from langgraph.graph import END, StateGraph
from sympy import isprime

from maxnorm.config import DEFAULT_CAPS, DEFAULT_SEED, Caps
from maxnorm.errors import BudgetExhaustedError, CapExceededError, PreconditionError
from maxnorm.lattice import interval
from maxnorm.perm_core import (
    GeneratedGroup,
    PrimeSet,
    as_prime_set,
    equal_groups,
    is_subgroup,
)
from maxnorm.structure import (
    fitting,
    is_maximal,
    is_nilpotent,
    is_pi_separable,
    is_pi_solvable,
    is_solvable,
    maximal_subgroups,
)
from maxnorm.subgroups import (
    conjugates,
    core,
    hall,
    intersection,
    is_normal,
    normalizer,
    o_pi,
    quotient,
    require_subgroup,
    sylow,
)

logger = logging.getLogger(__name__)

CONVENTION = (
    "π-solvable = π-separable with solvable π-factors; π′ is taken relative to |G|; "
    "for the Hall version ω ranges over every nonempty subset of π(F(H/Core_G H))"
)


class TheoremId(str, Enum):
    A = "A"
    T1 = "1"
    C11 = "1.1"
    C12 = "1.2"
    T2 = "2"
    T3 = "3"

    @property
    def label(self) -> str:
        return f"Corollary {self.value}" if "." in self.value else f"Theorem {self.value}"

    @classmethod
    def parse(cls, text: str) -> "TheoremId":
        for member in cls:
            if text in (member.value, member.name):
                return member
        raise PreconditionError(f"unknown theorem '{text}' (expected one of A, 1, 1.1, 1.2, 2, 3)")


class Verdict(str, Enum):
    VERIFIED = "verified"
    FAILED = "failed"
    HYPOTHESES_NOT_MET = "hypotheses_not_met"
    INCONCLUSIVE = "inconclusive"


@dataclass
class TheoremWitness:
    theorem: TheoremId
    group_name: str
    maximal: GeneratedGroup
    core: GeneratedGroup
    q: int | None = None
    pi: PrimeSet | None = None
    witness_subgroup: GeneratedGroup | None = None
    witness_normalizer: GeneratedGroup | None = None
    contained: bool = False
    status: str = "found"  # found | no_witness | inconclusive | skipped
    case: str | None = None
    class_size: int | None = None
    checks: list[tuple[str, bool]] = field(default_factory=list)
    note: str | None = None


@dataclass
class VerificationReport:
    group_name: str
    theorem: TheoremId
    hypotheses_checked: list[tuple[str, bool]]
    instances: list[TheoremWitness]
    verdict: Verdict
    counterexample_details: str | None = None
    p: int | None = None
    pi: PrimeSet | None = None
    checks: list[tuple[str, bool]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    convention: str = CONVENTION


@dataclass
class MaximalCandidate:
    subgroup: GeneratedGroup
    class_size: int | None


class HarnessState(TypedDict, total=False):
    theorem: TheoremId
    group: GeneratedGroup
    name: str
    p: int | None
    pi: PrimeSet | None
    supplied: list[GeneratedGroup] | None
    caps: Caps
    seed: int
    hypotheses: list[tuple[str, bool]]
    maximals: list[MaximalCandidate]
    instances: list[TheoremWitness]
    checks: list[tuple[str, bool]]
    notes: list[str]
    skipped: list[str]
    details: str | None
    verdict: Verdict


# --- Witness searches ---

@dataclass
class WitnessSearch:
    subgroup: GeneratedGroup
    normalizer: GeneratedGroup
    contained: bool
    status: str
    note: str | None = None
    checks: list[tuple[str, bool]] = field(default_factory=list)


def sylow_witness_search(G: GeneratedGroup, H: GeneratedGroup, q: int, caps: Caps | None = None,
                         seed: int = DEFAULT_SEED, cross_check: bool = True) -> WitnessSearch:
    """Looks for a Sylow q-subgroup Q of G with N_G(Q) ⊆ H."""
    caps = caps or DEFAULT_CAPS
    want = G.order.p_part(q)
    Q = sylow(H, q, seed, caps)
    if Q.order.value == want:
        N = normalizer(G, Q, caps)
        contained = is_subgroup(N, H)
        note = None if contained else f"N_G(Q) has order {N.order.value} and leaves H; every Sylow {q}-subgroup of G inside H is H-conjugate to Q"
        search = WitnessSearch(Q, N, contained, "found" if contained else "no_witness", note)
    else:
        P = sylow(G, q, seed, caps)
        N = normalizer(G, P, caps)
        note = f"|G|_{q} = {want} but |H|_{q} = {Q.order.value}: no Sylow {q}-subgroup of G lies in H"
        search = WitnessSearch(P, N, False, "no_witness", note)
    if cross_check and G.order.value <= caps.order:
        _cross_check_by_conjugates(G, H, search, caps, lambda: sylow(G, q, seed, caps))
    return search


def hall_witness_search(G: GeneratedGroup, H: GeneratedGroup, omega: PrimeSet, caps: Caps | None = None,
                        seed: int = DEFAULT_SEED, cross_check: bool = True) -> WitnessSearch:
    """Looks for a Hall ω-subgroup K of G with N_G(K) ⊆ H."""
    caps = caps or DEFAULT_CAPS
    want = G.order.pi_part(omega)
    K = hall(H, omega, seed, caps).subgroup
    if K.order.value == want:
        N = normalizer(G, K, caps)
        contained = is_subgroup(N, H)
        note = None if contained else f"N_G(K) has order {N.order.value} and leaves H; Hall {omega}-subgroups of H are H-conjugate"
        search = WitnessSearch(K, N, contained, "found" if contained else "no_witness", note)
    else:
        R = hall(G, omega, seed, caps).subgroup
        N = normalizer(G, R, caps)
        note = f"|G|_ω = {want} but |H|_ω = {K.order.value}: no Hall {omega}-subgroup of G lies in H"
        search = WitnessSearch(R, N, False, "no_witness", note)
    if cross_check and G.order.value <= caps.order:
        _cross_check_by_conjugates(G, H, search, caps, lambda: hall(G, omega, seed, caps).subgroup)
    return search


def _cross_check_by_conjugates(G: GeneratedGroup, H: GeneratedGroup, search: WitnessSearch, caps: Caps,
                               representative: Callable[[], GeneratedGroup]):
    """Independent scan over every G-conjugate; must agree with the exact answer."""
    try:
        pool = conjugates(G, representative(), caps.conjugates, caps)
    except BudgetExhaustedError:
        search.note = (search.note or "") + f" (conjugate scan exceeded {caps.conjugates} subgroups)"
        logger.warning(f"conjugate scan truncated at {caps.conjugates}")
        return
    hits = [X for X in pool if is_subgroup(X, H) and is_subgroup(normalizer(G, X, caps), H)]
    search.checks.append((f"conjugate scan over {len(pool)} subgroups agrees", bool(hits) == search.contained))


def recheck_witness(G: GeneratedGroup, witness: TheoremWitness, caps: Caps | None = None) -> list[tuple[str, bool]]:
    """Re-evaluates a witness from scratch; every entry should be true."""
    caps = caps or DEFAULT_CAPS
    H = witness.maximal
    checks = [("maximal is a subgroup of G", is_subgroup(H, G))]
    C = core(G, H, caps)
    checks.append(("core recomputes equal", equal_groups(C, witness.core)))
    W = witness.witness_subgroup
    if W is None:
        return checks
    N = normalizer(G, W, caps)
    checks.append(("normalizer recomputes equal", equal_groups(N, witness.witness_normalizer)))
    checks.append(("contained iff normalizer lies in the maximal subgroup", witness.contained == is_subgroup(N, H)))
    if witness.q is not None:
        checks.append(("witness order is the q-part of |G|", W.order.value == G.order.p_part(witness.q)))
        if witness.theorem not in (TheoremId.A,):
            checks.append(("q divides |F(H/Core_G H)|", witness.q in _fitting_primes(H, C, caps)))
    if witness.pi is not None:
        checks.append(("witness order is the ω-part of |G|", W.order.value == G.order.pi_part(witness.pi)))
    return checks


def _fitting_primes(H: GeneratedGroup, C: GeneratedGroup, caps: Caps) -> tuple[int, ...]:
    """π(F(H/C)) for C normal in H."""
    Hbar = H if C.is_trivial else quotient(H, C, caps).quotient
    return fitting(Hbar, caps).order.primes


# --- Workflow nodes shared by every theorem ---

def _context(state: HarnessState) -> tuple[GeneratedGroup, Caps, int]:
    return state["group"], state.get("caps") or DEFAULT_CAPS, state.get("seed", DEFAULT_SEED)


def _collect_maximals(state: HarnessState) -> list[MaximalCandidate]:
    G, caps, _ = _context(state)
    supplied = state.get("supplied")
    if supplied is not None:
        found = []
        for H in supplied:
            require_subgroup(H, G, "supplied maximal")
            if not is_maximal(G, H, caps):
                raise PreconditionError("a supplied subgroup is not maximal")
            if not is_normal(G, H):
                found.append(MaximalCandidate(H, None))
        return found
    return [MaximalCandidate(c.representative, c.class_size) for c in maximal_subgroups(G, caps) if not c.is_normal]


def _instance(state: HarnessState, cand: MaximalCandidate, C: GeneratedGroup, search: WitnessSearch,
              q: int | None = None, pi: PrimeSet | None = None, case: str | None = None) -> TheoremWitness:
    return TheoremWitness(
        theorem=state["theorem"],
        group_name=state["name"],
        maximal=cand.subgroup,
        core=C,
        q=q,
        pi=pi,
        witness_subgroup=search.subgroup,
        witness_normalizer=search.normalizer,
        contained=search.contained,
        status=search.status,
        case=case,
        class_size=cand.class_size,
        checks=list(search.checks),
        note=search.note,
    )


def _verdict(state: HarnessState, enforced: bool) -> Verdict:
    holds = all(ok for _, ok in state.get("hypotheses", []))
    if enforced and not holds:
        return Verdict.HYPOTHESES_NOT_MET
    instances = state.get("instances", [])
    checks = [ok for inst in instances for _, ok in inst.checks] + [ok for _, ok in state.get("checks", [])]
    if any(inst.status == "no_witness" for inst in instances) or not all(checks):
        return Verdict.FAILED
    if any(inst.status == "inconclusive" for inst in instances):
        return Verdict.INCONCLUSIVE
    return Verdict.VERIFIED if holds else Verdict.HYPOTHESES_NOT_MET


@dataclass(frozen=True)
class TheoremPlan:
    hypotheses: Callable[[HarnessState], list[tuple[str, bool]]]
    keep: Callable[[HarnessState, GeneratedGroup], bool]
    witnesses: Callable[[HarnessState], dict]
    enforced: bool = True


def build_workflow(plan: TheoremPlan):
    def hypotheses_node(state: HarnessState):
        found = plan.hypotheses(state)
        logger.info(f"{state['theorem'].label} on {state['name']}: hypotheses {found}")
        return {"hypotheses": found}

    def maximals_node(state: HarnessState):
        G = state["group"]
        kept = [m for m in _collect_maximals(state) if plan.keep(state, m.subgroup)]
        logger.info(f"{state['name']}: {len(kept)} non-normal maximal classes under test (|G| = {G.order.value})")
        return {"maximals": kept}

    def verdict_node(state: HarnessState):
        return {"verdict": _verdict(state, plan.enforced)}

    def route(state: HarnessState) -> str:
        if plan.enforced and not all(ok for _, ok in state["hypotheses"]):
            return "verdict"
        return "maximals"

    workflow = StateGraph(HarnessState)
    workflow.add_node("hypotheses", hypotheses_node)
    workflow.add_node("maximals", maximals_node)
    workflow.add_node("witnesses", plan.witnesses)
    workflow.add_node("verdict", verdict_node)
    workflow.set_entry_point("hypotheses")
    workflow.add_conditional_edges("hypotheses", route, {"maximals": "maximals", "verdict": "verdict"})
    workflow.add_edge("maximals", "witnesses")
    workflow.add_edge("witnesses", "verdict")
    workflow.add_edge("verdict", END)
    return workflow.compile()


# --- Theorem A ---

def _solvable_hypothesis(state: HarnessState) -> list[tuple[str, bool]]:
    return [("G is solvable", is_solvable(state["group"]))]


def _guarded(state: HarnessState, cand: MaximalCandidate, C: GeneratedGroup, search: Callable[[], WitnessSearch],
             q: int | None = None, pi: PrimeSet | None = None, case: str | None = None) -> TheoremWitness:
    """Runs one witness search; a budget overrun becomes an inconclusive instance."""
    try:
        return _instance(state, cand, C, search(), q=q, pi=pi, case=case)
    except BudgetExhaustedError as e:
        logger.warning(f"{state['name']}: witness search ran out of budget ({e})")
        return TheoremWitness(state["theorem"], state["name"], cand.subgroup, C, q=q, pi=pi, status="inconclusive",
                              case=case, class_size=cand.class_size, note=str(e))


def _theorem_a_witnesses(state: HarnessState) -> dict:
    G, caps, seed = _context(state)
    instances, details = [], []
    for cand in state["maximals"]:
        H = cand.subgroup
        C = core(G, H, caps)
        misses = []
        for p in G.order.primes:
            found = _guarded(state, cand, C, lambda: sylow_witness_search(G, H, p, caps, seed), q=p)
            if found.contained:
                instances.append(found)
                break
            misses.append(found)
        else:
            instances += misses
            lines = [f"  p = {m.q}: {m.note or 'no witness'}" for m in misses]
            details.append(f"maximal subgroup of order {H.order} has no Sylow normalizer inside it:\n" + "\n".join(lines))
    return {"instances": instances, "details": "\n".join(details) or None}


# --- Theorem 1 and its corollaries ---

def _sylow_by_fitting(state: HarnessState):
    """Per maximal M: (candidate, core, π(F(M/Core_G M)))."""
    G, caps, _ = _context(state)
    for cand in state["maximals"]:
        C = core(G, cand.subgroup, caps)
        yield cand, C, _fitting_primes(cand.subgroup, C, caps)


def _theorem_1_witnesses(state: HarnessState) -> dict:
    G, caps, seed = _context(state)
    instances = []
    for cand, C, primes in _sylow_by_fitting(state):
        for q in primes:
            instances.append(_guarded(state, cand, C, lambda: sylow_witness_search(G, cand.subgroup, q, caps, seed), q=q))
    return {"instances": instances}


def _interval_search(G: GeneratedGroup, H: GeneratedGroup, Q: GeneratedGroup, between: list[GeneratedGroup],
                     caps: Caps) -> WitnessSearch:
    """Every H1 in [Q, H] must have N_G(H1) ⊆ H; also checks N_G(H1) = N_T(Q)·H1 with T = N_G(H1)."""
    escaping = []
    factorised = True
    for H1 in between:
        T = normalizer(G, H1, caps)
        if not is_subgroup(T, H):
            escaping.append(H1.order.value)
        NTQ = normalizer(T, Q, caps)
        product_order = NTQ.order.value * H1.order.value // intersection(NTQ, H1, caps).order.value
        factorised &= product_order == T.order.value
    contained = not escaping
    note = None if contained else f"normalizers of intermediate subgroups of orders {escaping} leave H"
    search = WitnessSearch(Q, normalizer(G, Q, caps), contained, "found" if contained else "no_witness", note)
    search.checks.append((f"N_G(H1) = N_T(Q)·H1 across {len(between)} intermediate subgroups", factorised))
    return search


def _corollary_1_1_witnesses(state: HarnessState) -> dict:
    G, caps, seed = _context(state)
    instances, skipped = [], []
    for cand, C, primes in _sylow_by_fitting(state):
        H = cand.subgroup
        for q in primes:
            first = _guarded(state, cand, C, lambda: sylow_witness_search(G, H, q, caps, seed, cross_check=False), q=q)
            if not first.contained:
                instances.append(first)
                continue
            Q = first.witness_subgroup
            try:
                between = interval(H, Q, caps)
            except CapExceededError as e:
                skipped.append(f"maximal of order {H.order.value}, q = {q}: {e}")
                first.status, first.note = "skipped", str(e)
                instances.append(first)
                continue
            instances.append(_instance(state, cand, C, _interval_search(G, H, Q, between, caps), q=q))
    return {"instances": instances, "skipped": skipped}


def _nonempty_subsets(primes: tuple[int, ...]):
    for size in range(1, len(primes) + 1):
        for combo in itertools.combinations(primes, size):
            yield PrimeSet.of(combo)


def _corollary_1_2_witnesses(state: HarnessState) -> dict:
    G, caps, seed = _context(state)
    instances = []
    for cand, C, primes in _sylow_by_fitting(state):
        for omega in _nonempty_subsets(primes):
            instances.append(_guarded(state, cand, C, lambda: hall_witness_search(G, cand.subgroup, omega, caps, seed),
                                      pi=omega))
    return {"instances": instances}


# --- Theorems 2 and 3 ---

def _prime_power_index(state: HarnessState, M: GeneratedGroup) -> bool:
    G = state["group"]
    return G.order.index(M.order).is_pi_number(_pi_of(state))


def _pi_of(state: HarnessState) -> PrimeSet:
    if state.get("pi") is not None:
        return state["pi"]
    return PrimeSet.of([state["p"]])


def _two_case_witnesses(state: HarnessState) -> dict:
    """Case F(M/Core_G M) ≠ 1: a Sylow witness per prime of F. Case F = 1: a Hall π′ witness."""
    G, caps, seed = _context(state)
    pi = _pi_of(state)
    complement = pi.complement(G.order)
    instances = []
    for cand, C, primes in _sylow_by_fitting(state):
        M = cand.subgroup
        if primes:
            for q in primes:
                search = sylow_witness_search(G, M, q, caps, seed)
                if state["theorem"] == TheoremId.T3 and not C.is_trivial and search.contained:
                    search.checks.append(_reduction_check(G, C, search, caps))
                instances.append(_instance(state, cand, C, search, q=q, case="F(M/Core) ≠ 1"))
        else:
            search = hall_witness_search(G, M, complement, caps, seed)
            instances.append(_instance(state, cand, C, search, pi=complement, case="F(M/Core) = 1"))
    return {"instances": instances}


def _reduction_check(G: GeneratedGroup, C: GeneratedGroup, search: WitnessSearch, caps: Caps) -> tuple[str, bool]:
    """N_G(Q) maps onto the normalizer of Q's image in G/Core_G M."""
    qp = quotient(G, C, caps)
    lhs = qp.image(search.normalizer)
    rhs = normalizer(qp.quotient, qp.image(search.subgroup), caps)
    return ("normalizer maps onto the normalizer in G/Core_G M", equal_groups(lhs, rhs))


def _p_solvable_hypothesis(state: HarnessState) -> list[tuple[str, bool]]:
    p = state["p"]
    return [(f"G is {p}-solvable", is_pi_solvable(state["group"], [p], state.get("caps")))]


def _theorem_3_hypotheses(state: HarnessState) -> list[tuple[str, bool]]:
    G, caps, seed = _context(state)
    pi = state["pi"]
    solvable = is_pi_solvable(G, pi, caps)
    nilpotent_hall = solvable and is_nilpotent(hall(G, pi, seed, caps).subgroup)
    return [(f"G is {pi}-solvable", solvable), (f"a Hall {pi}-subgroup of G is nilpotent", nilpotent_hall)]


# --- Compiled workflows ---

APPS = {
    TheoremId.A: build_workflow(TheoremPlan(_solvable_hypothesis, lambda s, M: True, _theorem_a_witnesses, enforced=False)),
    TheoremId.T1: build_workflow(TheoremPlan(_solvable_hypothesis, lambda s, M: True, _theorem_1_witnesses)),
    TheoremId.C11: build_workflow(TheoremPlan(_solvable_hypothesis, lambda s, M: True, _corollary_1_1_witnesses)),
    TheoremId.C12: build_workflow(TheoremPlan(_solvable_hypothesis, lambda s, M: True, _corollary_1_2_witnesses)),
    TheoremId.T2: build_workflow(TheoremPlan(_p_solvable_hypothesis, _prime_power_index, _two_case_witnesses)),
    TheoremId.T3: build_workflow(TheoremPlan(_theorem_3_hypotheses, _prime_power_index, _two_case_witnesses)),
}


def _run(theorem: TheoremId, G: GeneratedGroup, name: str | None, maximals: list[GeneratedGroup] | None,
         caps: Caps | None, seed: int, p: int | None = None, pi: PrimeSet | None = None) -> VerificationReport:
    name = name or G.name or "G"
    result = APPS[theorem].invoke({
        "theorem": theorem,
        "group": G,
        "name": name,
        "p": p,
        "pi": pi,
        "supplied": maximals,
        "caps": caps or DEFAULT_CAPS,
        "seed": seed,
    })
    report = VerificationReport(
        group_name=name,
        theorem=theorem,
        hypotheses_checked=result.get("hypotheses", []),
        instances=result.get("instances", []),
        verdict=result["verdict"],
        counterexample_details=result.get("details"),
        p=p,
        pi=pi,
        checks=result.get("checks", []),
        notes=result.get("notes", []),
        skipped=result.get("skipped", []),
    )
    if report.verdict == Verdict.INCONCLUSIVE:
        logger.warning(f"{theorem.label} on {name}: inconclusive instances present")
    logger.info(f"{theorem.label} on {name}: {report.verdict.value}")
    return report


def verify_theorem_A(G: GeneratedGroup, *, maximals: list[GeneratedGroup] | None = None, name: str | None = None,
                     caps: Caps | None = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    return _run(TheoremId.A, G, name, maximals, caps, seed)


def verify_theorem_1(G: GeneratedGroup, *, maximals: list[GeneratedGroup] | None = None, name: str | None = None,
                     caps: Caps | None = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    return _run(TheoremId.T1, G, name, maximals, caps, seed)


def verify_corollary_1_1(G: GeneratedGroup, *, maximals: list[GeneratedGroup] | None = None, name: str | None = None,
                         caps: Caps | None = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    return _run(TheoremId.C11, G, name, maximals, caps, seed)


def verify_corollary_1_2(G: GeneratedGroup, *, maximals: list[GeneratedGroup] | None = None, name: str | None = None,
                         caps: Caps | None = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    return _run(TheoremId.C12, G, name, maximals, caps, seed)


def verify_theorem_2(G: GeneratedGroup, p: int, *, maximals: list[GeneratedGroup] | None = None,
                     name: str | None = None, caps: Caps | None = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    if not isprime(p):
        raise PreconditionError(f"{p} is not a prime")
    return _run(TheoremId.T2, G, name, maximals, caps, seed, p=p)


def verify_theorem_3(G: GeneratedGroup, pi: "PrimeSet | list[int]", *, maximals: list[GeneratedGroup] | None = None,
                     name: str | None = None, caps: Caps | None = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    """Also cross-checks against the Theorem 2 verifier (π = {p}) or Theorem 1 (π = π(G), G solvable)."""
    pi = as_prime_set(pi)
    report = _run(TheoremId.T3, G, name, maximals, caps, seed, pi=pi)
    if report.verdict == Verdict.HYPOTHESES_NOT_MET:
        return report
    relevant = pi.restricted(G.order)
    if len(relevant) == 1:
        p = next(iter(relevant))
        other = verify_theorem_2(G, p, maximals=maximals, name=name, caps=caps, seed=seed)
        report.checks.append((f"agrees with the Theorem 2 verifier at p = {p}", _same_instances(report, other)))
    elif len(relevant) == len(G.order.primes) and is_solvable(G):
        other = verify_theorem_1(G, maximals=maximals, name=name, caps=caps, seed=seed)
        report.checks.append(("agrees with the Theorem 1 verifier at π = π(G)", other.verdict == report.verdict))
    if not all(ok for _, ok in report.checks):
        report.verdict = Verdict.FAILED
    return report


def _same_instances(a: VerificationReport, b: VerificationReport) -> bool:
    def shape(r: VerificationReport):
        return [(i.maximal.order.value, i.q, i.case, i.contained) for i in r.instances]
    return a.verdict == b.verdict and shape(a) == shape(b)


# --- Lemmas ---

def _require_pi_separable(G: GeneratedGroup, pi: PrimeSet, caps: Caps):
    if not is_pi_separable(G, pi, caps):
        raise PreconditionError(f"G is not {pi}-separable")


def check_lemma_1(G: GeneratedGroup, H: GeneratedGroup, pi, caps: Caps | None = None) -> bool:
    """|G:H| a π-number implies O_π(H) ⊆ O_π(G)."""
    caps = caps or DEFAULT_CAPS
    pi = as_prime_set(pi)
    require_subgroup(H, G)
    _require_pi_separable(G, pi, caps)
    if not G.order.index(H.order).is_pi_number(pi):
        raise PreconditionError(f"|G:H| is not a {pi}-number")
    return is_subgroup(o_pi(H, pi, caps), o_pi(G, pi, caps))


def check_lemma_2(G: GeneratedGroup, N: GeneratedGroup, pi, caps: Caps | None = None, seed: int = DEFAULT_SEED) -> bool:
    """N_G(R)N/N = N_{G/N}(RN/N) for a Hall π-subgroup R, as an exact group equality."""
    caps = caps or DEFAULT_CAPS
    pi = as_prime_set(pi)
    _require_pi_separable(G, pi, caps)
    if not is_normal(G, N):
        raise PreconditionError("N is not normal in G")
    R = hall(G, pi, seed, caps).subgroup
    qp = quotient(G, N, caps)
    lhs = qp.image(normalizer(G, R, caps))
    rhs = normalizer(qp.quotient, qp.image(R), caps)
    return equal_groups(lhs, rhs)


def check_lemma_3(G: GeneratedGroup, H: GeneratedGroup, pi, caps: Caps | None = None, seed: int = DEFAULT_SEED) -> bool:
    """With a nilpotent Hall π-subgroup and H maximal of π-number index, O_π(H) is normal in G."""
    caps = caps or DEFAULT_CAPS
    pi = as_prime_set(pi)
    require_subgroup(H, G)
    if not is_pi_solvable(G, pi, caps):
        raise PreconditionError(f"G is not {pi}-solvable")
    if not is_nilpotent(hall(G, pi, seed, caps).subgroup):
        raise PreconditionError(f"Hall {pi}-subgroups of G are not nilpotent")
    if H.order.value == G.order.value or not is_maximal(G, H, caps):
        raise PreconditionError("H is not maximal in G")
    if not G.order.index(H.order).is_pi_number(pi):
        raise PreconditionError(f"|G:H| is not a {pi}-number")
    return is_normal(G, o_pi(H, pi, caps))


@dataclass
class LemmaResult:
    lemma: int
    pi: PrimeSet
    subject_order: int
    holds: bool


@dataclass
class LemmaSweepReport:
    group_name: str
    results: list[LemmaResult] = field(default_factory=list)
    excluded: dict[int, int] = field(default_factory=lambda: {1: 0, 2: 0, 3: 0})

    @property
    def verdict(self) -> Verdict:
        return Verdict.VERIFIED if all(r.holds for r in self.results) else Verdict.FAILED


def sweep_lemmas(G: GeneratedGroup, pi=None, name: str | None = None, caps: Caps | None = None,
                 seed: int = DEFAULT_SEED) -> LemmaSweepReport:
    """
    Runs the three lemmas over every conforming instance: subgroup class
    representatives for Lemma 1, normal subgroups for Lemma 2, maximal class
    representatives for Lemma 3. Non-conforming instances are counted as excluded.
    """
    from maxnorm.lattice import lattice_of

    caps = caps or DEFAULT_CAPS
    report = LemmaSweepReport(name or G.name or "G")
    prime_sets = [as_prime_set(pi)] if pi is not None else list(_nonempty_subsets(G.order.primes))
    lattice = lattice_of(G, caps)
    classes = [(lattice.representative(c), c) for c in lattice.classes]
    checks: list[tuple[int, Callable[[GeneratedGroup, PrimeSet], bool], list[GeneratedGroup]]] = [
        (1, lambda X, s: check_lemma_1(G, X, s, caps), [X for X, _ in classes]),
        (2, lambda X, s: check_lemma_2(G, X, s, caps, seed), [X for X, c in classes if c.is_normal]),
        (3, lambda X, s: check_lemma_3(G, X, s, caps, seed), [X for X, c in classes if c.is_maximal]),
    ]
    for s in prime_sets:
        for lemma, check, subjects in checks:
            for X in subjects:
                try:
                    holds = check(X, s)
                except PreconditionError:
                    report.excluded[lemma] += 1
                    continue
                report.results.append(LemmaResult(lemma, s, X.order.value, holds))
    logger.info(f"lemma sweep on {report.group_name}: {len(report.results)} instances, excluded {report.excluded}")
    return report


# --- PSL(2,17) ---

def psl217_counterexample_demo(caps: Caps | None = None, seed: int = DEFAULT_SEED) -> VerificationReport:
    """
    PSL(2,17) with its maximal S4: Theorem A's conclusion fails without solvability.
    The S4 holds no Sylow subgroup of G at all, so no Sylow normalizer can lie in it.
    """
    from maxnorm.catalog import S4_HISTOGRAM, build, s4_inside_psl217
    from maxnorm.perm_core import element_order_histogram

    caps = caps or DEFAULT_CAPS
    G = build("PSL2_17")
    S = s4_inside_psl217(G, seed)
    report = verify_theorem_A(G, maximals=[S], name="PSL2_17", caps=caps, seed=seed)
    setup = [
        ("|G| = 2448", G.order.value == 2448),
        ("|G| = 2^4 · 3^2 · 17", dict(G.order.factors) == {2: 4, 3: 2, 17: 1}),
        ("17 ∈ π(G)", 17 in G.order.primes),
        ("|S4| = 24 = 2^3 · 3", dict(S.order.factors) == {2: 3, 3: 1}),
        ("S4 has the element orders of the symmetric group", element_order_histogram(S) == S4_HISTOGRAM),
        ("S4 is maximal in G", is_maximal(G, S, caps)),
    ]
    lines = []
    for p in G.order.primes:
        P = sylow(G, p, seed, caps)
        N = normalizer(G, P, caps)
        if S.order.p_part(p) == 1:
            absent = G.order.p_part(p) > 1
            how = f"Sylow subgroups have order {P.order.value} > {S.order.p_part(p)} = |S4|_{p}"
        else:
            pool = conjugates(G, P, caps.conjugates, caps)
            absent = not any(is_subgroup(X, S) for X in pool)
            how = f"scanned all {len(pool)} Sylow subgroups of order {P.order.value}"
        setup.append((f"no Sylow {p}-subgroup of G lies in S4", absent))
        lines.append(f"p = {p}: {how}; N_G(P) has order {N.order.value}")
    report.checks += setup
    report.counterexample_details = "\n".join([report.counterexample_details or ""] + lines).strip()
    broken = [name for name, ok in setup if not ok]
    if broken:
        # the failure only counts once every setup fact is confirmed
        report.verdict = Verdict.INCONCLUSIVE
        report.notes.append(f"setup checks failed: {'; '.join(broken)}")
        logger.warning(f"PSL(2,17) demo: setup checks failed: {broken}")
    return report
