"""
Command line entry point: `python -m maxnorm.main <subcommand> ...`.

Reports go to stdout, diagnostics to stderr. Exit codes: 0 verified or complete,
1 a theorem conclusion failed, 2 hypotheses not met, 3 a resource cap or budget
stopped the run, 64 usage error.
"""
import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from maxnorm import catalog
from maxnorm.config import DEFAULT_JOBS, DEFAULT_SEED, LOG_LEVEL, Caps
from maxnorm.errors import BudgetExhaustedError, CapExceededError, CatalogError, GroupFileError, PreconditionError
from maxnorm.groupfile import read_group_file
from maxnorm.harness import (
    TheoremId,
    Verdict,
    psl217_counterexample_demo,
    sweep_lemmas,
    verify_corollary_1_1,
    verify_corollary_1_2,
    verify_theorem_1,
    verify_theorem_2,
    verify_theorem_3,
    verify_theorem_A,
)
from maxnorm.perm_core import GeneratedGroup, PrimeSet
from maxnorm.question import question_scan
from maxnorm.report import report_to_dict, write_report
from maxnorm.structure import structure_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_HYPOTHESES = 2
EXIT_RESOURCE = 3
EXIT_USAGE = 64

_VERDICT_EXIT = {
    Verdict.VERIFIED.value: EXIT_OK,
    Verdict.FAILED.value: EXIT_FAILED,
    Verdict.HYPOTHESES_NOT_MET.value: EXIT_HYPOTHESES,
    Verdict.INCONCLUSIVE.value: EXIT_RESOURCE,
}

# Higher wins when several reports are merged.
_SEVERITY = {EXIT_OK: 0, EXIT_HYPOTHESES: 1, EXIT_RESOURCE: 2, EXIT_FAILED: 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors map to exit code 64."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="worker processes for catalog sweeps")
    common.add_argument("--cap-order", type=int, help="subgroup enumeration cap")
    common.add_argument("--cap-interval", type=int, help="largest |H:Q| for interval enumeration")
    common.add_argument("--cap-conjugates", type=int, help="conjugates scanned per witness search")
    common.add_argument("--log-level", default=LOG_LEVEL)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(prog="maxnorm", description="Normalizers of Sylow and Hall subgroups in maximal subgroups.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    inspect = sub.add_parser("inspect", parents=[common], help="structure report of one group")
    inspect.add_argument("group", help="catalog name or group file path")

    verify = sub.add_parser("verify", parents=[common], help="run one theorem verifier")
    verify.add_argument("theorem", help="A, 1, 1.1, 1.2, 2 or 3")
    verify.add_argument("group", nargs="?", help="catalog name or group file path")
    verify.add_argument("--all-catalog", action="store_true", help="every catalog group carrying --filter")
    verify.add_argument("--filter", default="solvable", help="catalog tag for --all-catalog")
    verify.add_argument("--p", type=int, help="prime for theorem 2")
    verify.add_argument("--pi", help="prime set for theorem 3, e.g. 2,3")

    counter = sub.add_parser("counterexample", parents=[common], help="the PSL(2,17) demonstration")
    counter.add_argument("which", choices=("psl217",))

    scan = sub.add_parser("scan-question", parents=[common], help="p-power index maximals with F(M/Core) = 1")
    scan.add_argument("--filter", help="catalog tag (default: whole catalog)")

    lemmas = sub.add_parser("check-lemmas", parents=[common], help="sweep the three lemmas over one group")
    lemmas.add_argument("group", help="catalog name or group file path")
    lemmas.add_argument("--pi", help="prime set, e.g. 2,3 (default: every nonempty subset)")
    return parser


def resolve_group(source: str) -> GeneratedGroup:
    """A catalog name, or else a path to a group file."""
    try:
        return catalog.build(source)
    except CatalogError:
        if Path(source).is_file():
            return read_group_file(source)
        raise


def _supplied_maximals(G: GeneratedGroup, caps: Caps) -> list[GeneratedGroup] | None:
    if G.order.value <= caps.order:
        return None
    return catalog.known_maximals(G)


def _verify(theorem: TheoremId, G: GeneratedGroup, p: int | None, pi: PrimeSet | None, caps: Caps, seed: int):
    kwargs = dict(maximals=_supplied_maximals(G, caps), name=G.name, caps=caps, seed=seed)
    if theorem is TheoremId.T2:
        return verify_theorem_2(G, p, **kwargs)
    if theorem is TheoremId.T3:
        return verify_theorem_3(G, pi, **kwargs)
    verifier = {
        TheoremId.A: verify_theorem_A,
        TheoremId.T1: verify_theorem_1,
        TheoremId.C11: verify_corollary_1_1,
        TheoremId.C12: verify_corollary_1_2,
    }[theorem]
    return verifier(G, **kwargs)


def verify_job(theorem: str, source: str, p: int | None, pi: PrimeSet | None, caps: Caps, seed: int) -> dict:
    """One (group, theorem) verification, reduced to a dict so it can cross a process boundary."""
    G = resolve_group(source)
    try:
        return report_to_dict(_verify(TheoremId(theorem), G, p, pi, caps, seed))
    except (CapExceededError, BudgetExhaustedError) as e:
        return {"kind": "resource", "group": G.name or source, "theorem": theorem, "error": str(e)}


def _run_jobs(jobs: list[tuple], workers: int) -> list[dict]:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(verify_job, *zip(*jobs)))
    else:
        results = [verify_job(*job) for job in jobs]
    return sorted(results, key=lambda d: (d["group"], d["theorem"]))


def _exit_code(codes: list[int]) -> int:
    return max(codes, key=_SEVERITY.__getitem__, default=EXIT_OK)


def _caps(args) -> Caps:
    return Caps.from_env().with_overrides(order=args.cap_order, interval=args.cap_interval,
                                          conjugates=args.cap_conjugates)


def _cmd_inspect(args, caps: Caps) -> tuple[list, int]:
    return [structure_report(resolve_group(args.group), caps)], EXIT_OK


def _cmd_verify(args, caps: Caps) -> tuple[list, int]:
    theorem = TheoremId.parse(args.theorem)
    if theorem is TheoremId.T2 and args.p is None:
        raise UsageError("theorem 2 needs --p")
    if theorem is TheoremId.T3 and args.pi is None:
        raise UsageError("theorem 3 needs --pi")
    pi = PrimeSet.parse(args.pi) if args.pi else None
    if args.all_catalog == (args.group is not None):
        raise UsageError("give exactly one of a group or --all-catalog")
    sources = catalog.names(args.filter) if args.all_catalog else [args.group]
    if not args.all_catalog:
        resolve_group(args.group)
    jobs = [(theorem.value, s, args.p, pi, caps, args.seed) for s in sources]
    results = _run_jobs(jobs, args.jobs)

    shown, codes = [], []
    for d in results:
        if d["kind"] == "resource":
            logger.error(f"{d['group']}: theorem {d['theorem']} stopped: {d['error']}")
            codes.append(EXIT_RESOURCE)
            continue
        shown.append(d)
        code = _VERDICT_EXIT[d["verdict"]]
        # across the catalog, groups outside the hypotheses are simply excluded
        if args.all_catalog and code == EXIT_HYPOTHESES:
            code = EXIT_OK
        codes.append(code)
    return shown, _exit_code(codes)


def _cmd_counterexample(args, caps: Caps) -> tuple[list, int]:
    report = psl217_counterexample_demo(caps, args.seed)
    return [report], _VERDICT_EXIT[report.verdict.value]


def _cmd_scan(args, caps: Caps) -> tuple[list, int]:
    report = question_scan(args.filter, caps, args.seed)
    return [report], EXIT_RESOURCE if report.skipped else EXIT_OK


def _cmd_lemmas(args, caps: Caps) -> tuple[list, int]:
    pi = PrimeSet.parse(args.pi) if args.pi else None
    report = sweep_lemmas(resolve_group(args.group), pi, caps=caps, seed=args.seed)
    return [report], _VERDICT_EXIT[report.verdict.value]


_COMMANDS = {
    "inspect": _cmd_inspect,
    "verify": _cmd_verify,
    "counterexample": _cmd_counterexample,
    "scan-question": _cmd_scan,
    "check-lemmas": _cmd_lemmas,
}


def run(argv: list[str] | None = None) -> int:
    """Parses `argv`, runs the subcommand, writes the report to stdout and returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=args.log_level.upper(),
            format="%(asctime)s - %(levelname)s - %(message)s",
            stream=sys.stderr,
        )
        caps = _caps(args)
        reports, code = _COMMANDS[args.command](args, caps)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (CatalogError, GroupFileError, PreconditionError, ValueError) as e:
        print(f"maxnorm: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceededError, BudgetExhaustedError) as e:
        logger.error(f"stopped by a resource limit: {e}")
        return EXIT_RESOURCE

    payload = reports if len(reports) != 1 or args.command == "verify" and args.all_catalog else reports[0]
    sys.stdout.write(write_report(payload, args.format).decode("utf-8"))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
