"""
Group files: a plain-text format for permutation groups.

    # comment
    name PSL2_7
    degree 8
    expect-order 168
    gen (1 2 3 4 5 6 7)
    gen (2 3 5)(4 7 6)

Points are 1-based. `name` and `expect-order` are optional; a mismatching
expect-order is an error. Printing emits the canonical form of the same layout.
"""
import logging
from pathlib import Path

from maxnorm.errors import GroupFileError, MaxnormError
from maxnorm.perm_core import GeneratedGroup, format_cycles, parse_cycles

logger = logging.getLogger(__name__)

_DIRECTIVES = ("name", "degree", "expect-order", "gen")


def parse_group_file(text: str) -> GeneratedGroup:
    name = None
    degree = None
    expected = None
    gen_lines: list[tuple[int, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, _, rest = line.partition(" ")
        rest = rest.strip()
        if directive not in _DIRECTIVES:
            raise GroupFileError(f"unknown directive '{directive}'", number)
        if directive == "gen":
            gen_lines.append((number, rest))
            continue
        if not rest:
            raise GroupFileError(f"'{directive}' needs a value", number)
        if directive == "name":
            name = rest
        elif directive == "degree":
            degree = _positive_int(rest, number)
        else:
            expected = _positive_int(rest, number)
    if degree is None:
        raise GroupFileError("missing 'degree' line")

    gens = []
    for number, body in gen_lines:
        try:
            gens.append(parse_cycles(body, degree))
        except MaxnormError as e:
            raise GroupFileError(str(e), number) from e
    G = GeneratedGroup(gens, degree, name)
    if expected is not None and G.order.value != expected:
        raise GroupFileError(f"expect-order {expected} but the generators give order {G.order.value}")
    return G


def _positive_int(text: str, number: int) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise GroupFileError(f"'{text}' is not an integer", number) from e
    if value < 1:
        raise GroupFileError(f"{value} must be positive", number)
    return value


def print_group_file(G: GeneratedGroup) -> str:
    lines = []
    if G.name:
        lines.append(f"name {G.name}")
    lines.append(f"degree {G.degree}")
    lines.append(f"expect-order {G.order.value}")
    lines += [f"gen {format_cycles(g)}" for g in G.generators]
    return "\n".join(lines) + "\n"


def read_group_file(path: str | Path) -> GeneratedGroup:
    text = Path(path).read_text(encoding="utf-8")
    logger.info(f"reading group file {path}")
    return parse_group_file(text)
