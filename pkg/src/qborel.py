"""Q-Borel closures, membership, Q-generators and principal factorizations."""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

from src import config
from src.debug import measure_time
from src.errors import (
    LimitExceededError, NotQBorelError, PreconditionError, ensure
)
from src.matching import BipartiteGraph, has_left_perfect_matching
from src.monomials import (
    Monomial, MonomialIdeal, MonomialPrime, contains, ideal_sum, intersect,
    minimalize, power, product, unit_ideal
)
from src.poset import Poset, build_poset, down_set, order_ideals
from src.utils_helpers import log_with_context

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QBorelIdeal:
    """Q-Borel ideal with its minimal Q-generators and monomial expansion."""

    poset: Poset
    q_generators: Tuple[Monomial, ...]
    expansion: MonomialIdeal

    @property
    def nvars(self) -> int:
        return self.poset.n

    def is_principal(self) -> bool:
        return len(self.q_generators) == 1


@dataclass(frozen=True)
class PrimeFactorization:
    """Product of monomial primes with positive exponents.

    The empty product is the unit ideal.
    """

    factors: Tuple[Tuple[MonomialPrime, int], ...]
    nvars: int

    @classmethod
    def of(cls, factors: Dict[MonomialPrime, int], nvars: int
           ) -> "PrimeFactorization":
        for p, e in factors.items():
            if e < 1:
                raise PreconditionError(f"factor exponent {e} is not positive")
        ordered = sorted(factors.items(), key=lambda item: item[0].sort_key())
        return cls(tuple(ordered), nvars)

    def as_dict(self) -> Dict[MonomialPrime, int]:
        return dict(self.factors)

    def primes(self) -> List[MonomialPrime]:
        return [p for p, _ in self.factors]

    def expand(self) -> MonomialIdeal:
        result = unit_ideal(self.nvars)
        for p, e in self.factors:
            result = product(result, power(p.ideal(), e))
        return result


def _moves(Q: Poset, m: Monomial) -> Iterable[Monomial]:
    for j in m.support:
        for i in Q.below(j):
            yield m.move(j, i)


@measure_time
def q_closure(Q: Poset, X: Iterable[Monomial],
              limit: Optional[int] = None) -> QBorelIdeal:
    """Smallest Q-Borel ideal containing X.

    Args:
        Q: Poset on the variables
        X: Generating monomials
        limit: Node budget for the move search (config LIMIT_NODES)

    Returns:
        QBorelIdeal with minimal Q-generators and expansion

    Raises:
        LimitExceededError: If more than ``limit`` monomials are visited
    """
    limit = config.LIMIT_NODES if limit is None else limit
    seeds = minimalize(X, Q.n).generators
    visited: Set[Monomial] = set(seeds)
    queue = deque(seeds)
    while queue:
        m = queue.popleft()
        for moved in _moves(Q, m):
            if moved not in visited:
                visited.add(moved)
                if len(visited) > limit:
                    logger.error(
                        "Closure node limit exceeded",
                        **log_with_context(limit=limit, seeds=len(seeds))
                    )
                    raise LimitExceededError(
                        f"closure visited more than {limit} monomials"
                    )
                queue.append(moved)
    expansion = minimalize(visited, Q.n)
    logger.debug(
        f"Closure of {len(seeds)} monomials has "
        f"{len(expansion.generators)} generators",
        **log_with_context(visited=len(visited))
    )
    return QBorelIdeal(Q, _q_generators_of(Q, expansion), expansion)


def principal(Q: Poset, m: Monomial) -> QBorelIdeal:
    """The principal Q-Borel ideal Q(m)."""
    return q_closure(Q, [m])


def principal_membership(Q: Poset, m: Monomial, mu: Monomial) -> bool:
    """Decide mu in Q(m) by a matching from the factors of m into mu's.

    A factor x_i of m may be matched to a factor x_j of mu iff x_j <= x_i.
    """
    left = m.factors()
    right = mu.factors()
    adjacency = [
        [k for k, j in enumerate(right) if Q.leq[j, i]] for i in left
    ]
    return has_left_perfect_matching(
        BipartiteGraph(len(left), len(right), adjacency)
    )


def q_contains(I: QBorelIdeal, mu: Monomial) -> bool:
    return any(principal_membership(I.poset, g, mu) for g in I.q_generators)


def _q_generators_of(Q: Poset, I: MonomialIdeal) -> Tuple[Monomial, ...]:
    # m is redundant iff it lies in Q(s) for another generator s
    return tuple(
        m for m in I.generators
        if not any(
            s != m and s.degree <= m.degree and principal_membership(Q, s, m)
            for s in I.generators
        )
    )


def is_q_borel(Q: Poset, I: MonomialIdeal) -> bool:
    """True iff every Q-Borel move of a minimal generator stays in I."""
    if Q.n != I.nvars:
        raise PreconditionError("poset and ideal have different sizes")
    return all(contains(I, moved)
               for g in I.generators for moved in _moves(Q, g))


def min_q_generators(Q: Poset, I: MonomialIdeal) -> Tuple[Monomial, ...]:
    """The unique minimal Q-generating set of a Q-Borel ideal.

    Raises:
        NotQBorelError: If I is not Q-Borel
    """
    if not is_q_borel(Q, I):
        raise NotQBorelError("ideal is not Q-Borel for this poset")
    return _q_generators_of(Q, I)


def from_ideal(Q: Poset, I: MonomialIdeal) -> QBorelIdeal:
    """Wrap a monomial ideal known to be Q-Borel."""
    return QBorelIdeal(Q, min_q_generators(Q, I), I)


def max_stabilizing_poset(I: MonomialIdeal) -> Poset:
    """The largest naturally labeled poset for which I is Q-Borel."""
    if I.is_zero():
        raise PreconditionError("the zero ideal has no stabilizing poset")
    n = I.nvars
    pairs = [
        (i, j) for i in range(n) for j in range(i + 1, n)
        if all(contains(I, g.move(j, i))
               for g in I.generators if g.exponents[j])
    ]
    Q = build_poset(n, pairs)
    ensure(lambda: len(Q.relations) == len(pairs) and is_q_borel(Q, I),
           "stabilizing pairs are not transitively closed")
    return Q


def principal_factorization(Q: Poset, m: Monomial) -> PrimeFactorization:
    """Factor Q(m) as a product of principal down-set primes."""
    if m.is_unit():
        raise PreconditionError("the unit monomial has no prime factorization")
    factors: Dict[MonomialPrime, int] = {}
    for i in m.support:
        p = down_set(Q, [i])
        factors[p] = factors.get(p, 0) + m.exponents[i]
    result = PrimeFactorization.of(factors, Q.n)
    ensure(lambda: result.expand() == principal(Q, m).expansion,
           "prime factorization does not expand to the closure")
    return result


@measure_time
def witness_ideal(Q: Poset, max_variables: Optional[int] = None
                  ) -> MonomialIdeal:
    """Product of all nonempty order ideals of Q.

    Raises:
        LimitExceededError: If Q has more elements than the configured bound
    """
    bound = config.WITNESS_MAX_VARIABLES if max_variables is None \
        else max_variables
    if Q.n > bound:
        raise LimitExceededError(
            f"witness ideal on {Q.n} variables exceeds bound {bound}"
        )
    result = unit_ideal(Q.n)
    for A in order_ideals(Q):
        result = product(result, MonomialPrime(A, Q.n).ideal())
    return result


def is_polymatroidal(I: MonomialIdeal) -> bool:
    """Exchange condition on the generators of an equigenerated ideal."""
    gens = I.generators
    if len({g.degree for g in gens}) > 1:
        return False
    members = set(gens)
    for u in gens:
        for v in gens:
            for i in range(I.nvars):
                if u.exponents[i] <= v.exponents[i]:
                    continue
                if not any(
                    v.exponents[j] > u.exponents[j]
                    and u.move(i, j) in members
                    for j in range(I.nvars)
                ):
                    return False
    return True


def q_sum(I: QBorelIdeal, J: QBorelIdeal) -> QBorelIdeal:
    """I + J, re-minimalized as Q-generators."""
    if I.poset != J.poset:
        raise PreconditionError("Q-Borel ideals over different posets")
    expansion = ideal_sum(I.expansion, J.expansion)
    return QBorelIdeal(I.poset, _q_generators_of(I.poset, expansion),
                       expansion)


def principal_intersection_generators(Q: Poset, t1: Monomial, t2: Monomial
                                      ) -> Tuple[Monomial, ...]:
    """Q-generators of Q(t1) intersected with Q(t2)."""
    meet = intersect(principal(Q, t1).expansion, principal(Q, t2).expansion)
    return _q_generators_of(Q, meet)


def q_intersection(I: QBorelIdeal, J: QBorelIdeal) -> QBorelIdeal:
    """Intersection assembled from pairwise principal intersections."""
    if I.poset != J.poset:
        raise PreconditionError("Q-Borel ideals over different posets")
    Q = I.poset
    gens: List[Monomial] = []
    for t1 in I.q_generators:
        for t2 in J.q_generators:
            gens.extend(principal_intersection_generators(Q, t1, t2))
    result = q_closure(Q, gens)
    ensure(lambda: result.expansion == intersect(I.expansion, J.expansion),
           "pairwise principal intersections disagree with the intersection")
    return result


def truncate_q_generators(I: QBorelIdeal, d: int) -> QBorelIdeal:
    """Drop the Q-generators of degree greater than d."""
    return q_closure(I.poset, [g for g in I.q_generators if g.degree <= d])
