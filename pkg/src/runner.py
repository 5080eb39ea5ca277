"""Command dispatch for parsed sessions."""
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src import config
from src.complexes import FreeComplex, koszul_betti, verify_complex
from src.debug import debug_trace
from src.decomposition import (
    PrimePowerIntersection, associated_primes, borel_irreducible_split,
    colon_representation, irredundant, irreducible_decomposition,
    principal_primary_decomposition, product_to_primary,
    q_irreducible_decomposition
)
from src.errors import PreconditionError, QBorelError, UndeclaredNameError
from src.invariants import codim_principal, is_cohen_macaulay, pdim_principal
from src.monomials import Monomial
from src.poset import Poset, antichain_poset, sum_closure, PrimeFamily
from src.qborel import (
    from_ideal, is_q_borel, max_stabilizing_poset, min_q_generators,
    principal_factorization, q_closure, truncate_q_generators, witness_ideal
)
from src.render import (
    CommandResult, betti_grid, exponent_data, format_components,
    format_factorization, format_primary, ideal_data
)
from src.resolutions import (
    ek_resolution, lq_resolution, taylor_resolution, truncated_resolution,
    y_resolution
)
from src.session import Command, IdealValue, Session, format_poset
from src.utils_helpers import log_with_context

logger = logging.getLogger(__name__)

Payload = Tuple[str, Dict[str, Any]]


class Runner:
    """Executes session commands in order, remembering the last complex."""

    def __init__(self, session: Session, degree_bound: Optional[int] = None):
        self.session = session
        self.variables = session.variables
        self.degree_bound = config.DEGREE_BOUND if degree_bound is None \
            else degree_bound
        self.last_complex: Optional[FreeComplex] = None
        self.handlers: Dict[str, Callable[[Command], Payload]] = {
            "close": self.close,
            "truncate": self.truncate,
            "isqborel": self.isqborel,
            "maxposet": self.maxposet,
            "qgens": self.qgens,
            "factor": self.factor,
            "primary": self.primary,
            "assprimes": self.assprimes,
            "irreducible": self.irreducible,
            "qirreducible": self.qirreducible,
            "colon": self.colon,
            "pdim": self.pdim,
            "codim": self.codim,
            "cm": self.cm,
            "resolve": self.resolve,
            "betti": self.betti,
            "verify": self.verify,
            "split": self.split,
            "witness": self.witness,
        }

    # lookups

    def ideal(self, command: Command, position: int = 0) -> IdealValue:
        if len(command.args) <= position:
            raise PreconditionError(f"{command.name} needs an ideal name")
        name = command.args[position]
        if name not in self.session.ideals:
            raise UndeclaredNameError(f"undeclared ideal {name!r}",
                                      command.line)
        return self.session.ideals[name]

    def poset_arg(self, command: Command, position: int,
                  value: IdealValue) -> Poset:
        if len(command.args) > position:
            name = command.args[position]
            if name not in self.session.posets:
                raise UndeclaredNameError(f"undeclared poset {name!r}",
                                          command.line)
            return self.session.posets[name]
        if value.poset is None:
            raise PreconditionError(f"{command.name} needs a poset")
        return value.poset

    def principal_of(self, value: IdealValue) -> Tuple[Poset, Monomial]:
        if not value.is_principal_q_borel():
            raise PreconditionError("ideal is not a principal Q-Borel ideal")
        return value.poset, value.q_generators[0]

    def fmt(self, m: Monomial) -> str:
        return self.variables.format_monomial(m)

    def primes_data(self, D: PrimePowerIntersection) -> List[Dict[str, Any]]:
        return [{"prime": self.variables.prime_names(p), "exponent": a}
                for p, a in D.components]

    # commands

    def close(self, command: Command) -> Payload:
        value = self.ideal(command)
        Q = value.poset or antichain_poset(self.session.nvars)
        closure = q_closure(Q, value.ideal.generators)
        return self.variables.format_ideal(closure.expansion), {
            "generators": ideal_data(closure.expansion, self.variables),
            "q_generators": [self.fmt(g) for g in closure.q_generators],
        }

    def truncate(self, command: Command) -> Payload:
        value = self.ideal(command)
        d = int(_options(command.args[1:]).get("d", self.degree_bound))
        _, I = self.q_borel(value)
        low = truncate_q_generators(I, d)
        return self.variables.format_ideal(low.expansion), {
            "generators": ideal_data(low.expansion, self.variables),
            "q_generators": [self.fmt(g) for g in low.q_generators],
        }

    def isqborel(self, command: Command) -> Payload:
        value = self.ideal(command)
        result = is_q_borel(self.poset_arg(command, 1, value), value.ideal)
        return str(result).lower(), {"q_borel": result}

    def maxposet(self, command: Command) -> Payload:
        Q = max_stabilizing_poset(self.ideal(command).ideal)
        covers = [[self.variables.names[i], self.variables.names[j]]
                  for i, j in sorted(Q.covers)]
        text = format_poset(Q, self.variables) or "(antichain)"
        return text, {"covers": covers}

    def qgens(self, command: Command) -> Payload:
        value = self.ideal(command)
        gens = min_q_generators(self.poset_arg(command, 1, value),
                                value.ideal)
        return ", ".join(self.fmt(g) for g in gens), {
            "q_generators": [self.fmt(g) for g in gens]
        }

    def factor(self, command: Command) -> Payload:
        value = self.ideal(command)
        F = value.factorization
        if F is None:
            F = principal_factorization(*self.principal_of(value))
        return format_factorization(F, self.variables), {
            "factors": [{"prime": self.variables.prime_names(p),
                         "exponent": e} for p, e in F.factors]
        }

    def primary_of(self, value: IdealValue) -> PrimePowerIntersection:
        if value.factorization is not None:
            return product_to_primary(value.factorization)
        if value.is_principal_q_borel():
            return principal_primary_decomposition(*self.principal_of(value))
        if value.intersection is not None:
            return irredundant(PrimePowerIntersection.of(
                value.intersection, value.ideal.nvars
            ))
        raise PreconditionError(
            "primary decomposition needs a prime product, a prime power "
            "intersection or a principal Q-Borel ideal"
        )

    def primary(self, command: Command) -> Payload:
        D = self.primary_of(self.ideal(command))
        return format_primary(D, self.variables), {
            "components": self.primes_data(D)
        }

    def assprimes(self, command: Command) -> Payload:
        value = self.ideal(command)
        if value.is_principal_q_borel():
            primes = list(associated_primes(*self.principal_of(value)))
        else:
            primes = self.primary_of(value).primes()
        return ", ".join(self.variables.format_prime(p) for p in primes), {
            "primes": [self.variables.prime_names(p) for p in primes]
        }

    def q_borel(self, value: IdealValue):
        Q = value.poset or antichain_poset(self.session.nvars)
        return Q, from_ideal(Q, value.ideal)

    def irreducible(self, command: Command) -> Payload:
        components = irreducible_decomposition(
            *self.q_borel(self.ideal(command))
        )
        return format_components(components, self.variables), {
            "components": [exponent_data(c.exponents) for c in components]
        }

    def qirreducible(self, command: Command) -> Payload:
        pieces = q_irreducible_decomposition(
            *self.q_borel(self.ideal(command))
        )
        lines = []
        data = []
        for piece in pieces:
            powers = [
                self.fmt(Monomial.variable(piece.poset.n, k, int(e)))
                for k, e in enumerate(piece.exponents)
                if e != float("inf")
            ]
            shape = format_poset(piece.poset, self.variables) or "antichain"
            lines.append(f"Q{{{shape}}}({', '.join(powers)})")
            data.append({"exponents": exponent_data(piece.exponents),
                         "covers": [[self.variables.names[i],
                                     self.variables.names[j]]
                                    for i, j in sorted(piece.poset.covers)]})
        return " ∩ ".join(lines) if lines else "(1)", {"pieces": data}

    def colon(self, command: Command) -> Payload:
        D = self.primary_of(self.ideal(command))
        family = sum_closure(PrimeFamily.of(D.primes()))
        J, K = colon_representation(D, family)
        text = (f"{format_factorization(J, self.variables)} : "
                f"{format_factorization(K, self.variables)}")
        return text, {
            "numerator": [{"prime": self.variables.prime_names(p),
                           "exponent": e} for p, e in J.factors],
            "denominator": [{"prime": self.variables.prime_names(p),
                             "exponent": e} for p, e in K.factors],
        }

    def pdim(self, command: Command) -> Payload:
        value = pdim_principal(*self.principal_of(self.ideal(command)))
        return str(value), {"pdim": value}

    def codim(self, command: Command) -> Payload:
        value = codim_principal(*self.principal_of(self.ideal(command)))
        return str(value), {"codim": value}

    def cm(self, command: Command) -> Payload:
        result = is_cohen_macaulay(*self.principal_of(self.ideal(command)))
        return f"{str(result.is_cm).lower()} ({result.case})", {
            "cohen_macaulay": result.is_cm, "case": result.case
        }

    def resolve(self, command: Command) -> Payload:
        if not command.args:
            raise PreconditionError("resolve needs a kind and an ideal")
        kind = command.args[0]
        value = self.ideal(command, 1)
        options = _options(command.args[2:])
        if kind == "ek":
            F = ek_resolution(value.ideal)
        elif kind == "y":
            F = y_resolution(self.session.nvars - 2, value.ideal)
        elif kind == "taylor":
            F = taylor_resolution(value.ideal)
        elif kind == "lq":
            F = lq_resolution(value.ideal, options.get("order", "descending"))
        elif kind == "truncated":
            Q, I = self.q_borel(value)
            d = int(options.get("d", self.degree_bound))
            F = truncated_resolution(Q, I, d, cancel="cancel" in options)
        else:
            raise PreconditionError(f"unknown resolution kind {kind!r}")
        self.last_complex = F
        table = F.betti_table()
        return betti_grid(table), {
            "ranks": F.ranks(),
            "betti": table.to_dict(),
            "complex": F.to_dict(self.variables),
        }

    def betti(self, command: Command) -> Payload:
        if command.args and command.args[0] == "last":
            table = self.require_last().betti_table()
        else:
            I = self.ideal(command).ideal
            table = koszul_betti(I, max(self.degree_bound, I.max_degree()))
        return betti_grid(table), {"betti": table.to_dict()}

    def require_last(self) -> FreeComplex:
        if self.last_complex is None:
            raise PreconditionError("no complex has been computed yet")
        return self.last_complex

    def verify(self, command: Command) -> Payload:
        args = list(command.args)
        if args and args[0] == "last":
            args = args[1:]
        F = self.require_last()
        mode = args[0] if args else "d2"
        bound = int(args[1]) if len(args) > 1 else self.degree_bound
        certificate = verify_complex(F, mode, bound)
        if certificate.ok:
            text = f"OK ({certificate.message})"
        else:
            i, b, dim = certificate.failure
            text = (f"FAILED at level {i}, multidegree {self.fmt(b)}: "
                    f"{certificate.message}")
        data: Dict[str, Any] = {"ok": certificate.ok, "mode": mode,
                                "message": certificate.message}
        if certificate.failure is not None:
            i, b, dim = certificate.failure
            data["failure"] = {"level": i, "multidegree": self.fmt(b),
                               "dimension": dim}
        return text, data

    def split(self, command: Command) -> Payload:
        first, second = borel_irreducible_split(self.ideal(command).ideal)
        text = (f"{self.variables.format_ideal(first)} ∩ "
                f"{self.variables.format_ideal(second)}")
        return text, {"parts": [ideal_data(first, self.variables),
                                ideal_data(second, self.variables)]}

    def witness(self, command: Command) -> Payload:
        if not command.args or command.args[0] not in self.session.posets:
            raise UndeclaredNameError("witness needs a declared poset",
                                      command.line)
        W = witness_ideal(self.session.posets[command.args[0]])
        return self.variables.format_ideal(W), {
            "generators": ideal_data(W, self.variables)
        }

    @debug_trace
    def dispatch(self, index: int, command: Command) -> CommandResult:
        handler = self.handlers.get(command.name)
        if handler is None:
            raise UndeclaredNameError(f"unknown command {command.name!r}",
                                      command.line)
        text, data = handler(command)
        return CommandResult(index=index, command=command.name,
                             args=list(command.args), text=text, data=data)


def _options(args: Sequence[str]) -> Dict[str, str]:
    options = {}
    for arg in args:
        key, _, value = arg.partition("=")
        options[key] = value
    return options


def execute(session: Session, degree_bound: Optional[int] = None
            ) -> List[CommandResult]:
    """Run every command in order.

    Raises:
        QBorelError: The first failing command's error, tagged with
            ``command_index`` and carrying the results computed before it
            as ``partial_results``
    """
    runner = Runner(session, degree_bound)
    results: List[CommandResult] = []
    for index, command in enumerate(session.commands, start=1):
        try:
            results.append(runner.dispatch(index, command))
        except QBorelError as e:
            logger.error(
                f"Command {index} ({command.name}) failed: {e}",
                **log_with_context(command_index=index, line=command.line)
            )
            e.command_index = index
            e.partial_results = results
            raise
    return results
