"""
Open question scan: does Theorem A extend to p-solvable groups with a maximal
subgroup M of p-power index?

For every p-solvable catalog group and every non-normal maximal M with |G:M| a
power of p, the instance is classified by whether F(M/Core_G M) is trivial. The
nontrivial case is settled by the Sylow version; for the trivial case only the
Hall p′ version is known, so the scan reports, as data and nothing more, which
Sylow normalizers happen to land in M.
"""
import logging
from dataclasses import dataclass, field
from typing import Sequence

from maxnorm import catalog
from maxnorm.config import DEFAULT_CAPS, DEFAULT_SEED, Caps
from maxnorm.errors import CapExceededError, PreconditionError
from maxnorm.harness import _fitting_primes, hall_witness_search, sylow_witness_search
from maxnorm.perm_core import GeneratedGroup, PrimeSet
from maxnorm.structure import is_pi_solvable, is_solvable, maximal_subgroups
from maxnorm.subgroups import core, is_normal

logger = logging.getLogger(__name__)


@dataclass
class ScanInstance:
    group_name: str
    p: int
    maximal: GeneratedGroup
    index: int
    core_order: int
    fitting_primes: tuple[int, ...]
    sylow_witness_primes: list[int] = field(default_factory=list)
    hall_witness_found: bool | None = None

    @property
    def fitting_trivial(self) -> bool:
        return not self.fitting_primes

    @property
    def classification(self) -> str:
        return "open case: F(M/Core) = 1" if self.fitting_trivial else "settled case: F(M/Core) ≠ 1"


@dataclass
class QuestionScanReport:
    groups: list[str] = field(default_factory=list)
    instances: list[ScanInstance] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def open_cases(self) -> list[ScanInstance]:
        return [i for i in self.instances if i.fitting_trivial]


def _selected_names(catalog_filter: str | Sequence[str] | None) -> list[str]:
    if catalog_filter is None:
        return catalog.names()
    if isinstance(catalog_filter, str):
        return catalog.names(catalog_filter)
    return list(catalog_filter)


def _maximals(G: GeneratedGroup, caps: Caps) -> list[GeneratedGroup]:
    if G.order.value <= caps.order:
        return [c.representative for c in maximal_subgroups(G, caps) if not c.is_normal]
    known = catalog.known_maximals(G)
    if known is None:
        raise CapExceededError("subgroup enumeration", G.order.value, caps.order)
    return [M for M in known if not is_normal(G, M)]


def question_scan(catalog_filter: str | Sequence[str] | None = None, caps: Caps | None = None,
                  seed: int = DEFAULT_SEED) -> QuestionScanReport:
    """
    `catalog_filter` is a tag, an explicit list of names, or None for the whole
    catalog. An empty list gives an empty report.
    """
    caps = caps or DEFAULT_CAPS
    report = QuestionScanReport()
    for name in _selected_names(catalog_filter):
        G = catalog.build(name)
        report.groups.append(name)
        try:
            _scan_group(G, name, report, caps, seed)
        except (CapExceededError, PreconditionError) as e:
            report.skipped.append(f"{name}: {e}")
            logger.warning(f"question scan skipped {name}: {e}")
    logger.info(f"question scan: {len(report.instances)} instances, {len(report.open_cases)} open cases")
    return report


def _scan_group(G: GeneratedGroup, name: str, report: QuestionScanReport, caps: Caps, seed: int):
    solvable = is_solvable(G)
    maximals = None
    for p in G.order.primes:
        if not solvable and not is_pi_solvable(G, [p], caps):
            continue
        if maximals is None:
            maximals = _maximals(G, caps)
        for M in maximals:
            index = G.order.index(M.order)
            if not index.is_pi_number([p]):
                continue
            C = core(G, M, caps)
            instance = ScanInstance(name, p, M, index.value, C.order.value, _fitting_primes(M, C, caps))
            if instance.fitting_trivial:
                for q in G.order.primes:
                    if sylow_witness_search(G, M, q, caps, seed, cross_check=False).contained:
                        instance.sylow_witness_primes.append(q)
                complement = PrimeSet.of([p]).complement(G.order)
                instance.hall_witness_found = hall_witness_search(G, M, complement, caps, seed, cross_check=False).contained
            report.instances.append(instance)
