"""Text and JSON rendering of command results."""
import io
import json
import math
from typing import Any, Dict, List, Sequence

from pydantic import BaseModel, ConfigDict, Field
from rich.console import Console
from rich.table import Table

from src.config import JSON_SCHEMA_VERSION
from src.complexes import BettiTable
from src.decomposition import IrreducibleComponent, PrimePowerIntersection
from src.monomials import MonomialIdeal, VariableSet
from src.qborel import PrimeFactorization

TEXT = "text"
JSON = "json"


class CommandResult(BaseModel):
    """Outcome of one session command."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=JSON_SCHEMA_VERSION, alias="schema")
    index: int
    command: str
    args: List[str] = Field(default_factory=list)
    text: str
    data: Dict[str, Any] = Field(default_factory=dict)


def format_primary(D: PrimePowerIntersection, variables: VariableSet) -> str:
    if not D.components:
        return "(1)"
    return " ∩ ".join(
        variables.format_prime(p) + (f"^{a}" if a > 1 else "")
        for p, a in D.components
    )


def format_factorization(F: PrimeFactorization,
                         variables: VariableSet) -> str:
    if not F.factors:
        return "(1)"
    return " * ".join(
        variables.format_prime(p) + (f"^{e}" if e > 1 else "")
        for p, e in F.factors
    )


def exponent_data(exponents: Sequence[float]) -> List[Any]:
    """Exponent vector with the literal "inf" for absent variables."""
    return ["inf" if e == math.inf else int(e) for e in exponents]


def format_components(components: Sequence[IrreducibleComponent],
                      variables: VariableSet) -> str:
    if not components:
        return "(1)"
    return " ∩ ".join(variables.format_ideal(c.ideal()) for c in components)


def ideal_data(I: MonomialIdeal, variables: VariableSet) -> List[str]:
    return [variables.format_monomial(g) for g in I.generators]


def betti_grid(table: BettiTable) -> str:
    """Macaulay-style grid: columns are homological degrees, rows j - i."""
    graded = table.graded()
    if not graded:
        return "(empty Betti table)"
    top = max(i for i, _ in graded)
    shifts = sorted({j - i for i, j in graded})
    grid = Table(box=None, show_header=True, pad_edge=False,
                 show_edge=False)
    grid.add_column("", justify="right")
    for i in range(top + 1):
        grid.add_column(str(i), justify="right")
    grid.add_row("total:", *(str(v) for v in table.totals()))
    for r in range(shifts[0], shifts[-1] + 1):
        grid.add_row(
            f"{r}:",
            *(str(graded[(i, i + r)]) if (i, i + r) in graded else "."
              for i in range(top + 1))
        )
    buffer = io.StringIO()
    console = Console(file=buffer, width=200, color_system=None,
                      force_terminal=False)
    console.print(grid)
    return "\n".join(line.rstrip() for line in
                     buffer.getvalue().rstrip().splitlines())


def render(results: Sequence[CommandResult], fmt: str = TEXT) -> str:
    """Serialize results; identical inputs give identical output.

    JSON output is a list of result objects each carrying "schema".
    """
    if fmt == JSON:
        return json.dumps(
            [r.model_dump(by_alias=True) for r in results],
            indent=2, ensure_ascii=False,
        )
    if fmt != TEXT:
        raise ValueError(f"unknown output format {fmt!r}")
    blocks = []
    for r in results:
        header = " ".join([f"[{r.index}]", r.command] + list(r.args))
        blocks.append(f"{header}\n{r.text}")
    return "\n\n".join(blocks)
