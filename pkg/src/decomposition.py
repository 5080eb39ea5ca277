"""Primary, colon, Q-irreducible and irreducible decompositions."""
import logging
import math
from dataclasses import dataclass
from itertools import combinations, product as cartesian
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from src import config
from src.debug import measure_time
from src.errors import (
    LimitExceededError, MixedDegreeError, NotQBorelError, PreconditionError,
    ensure
)
from src.monomials import (
    Monomial, MonomialIdeal, MonomialPrime, contains, ideal_sum,
    intersect_all, is_subideal, minimalize, power, quotient, saturate,
    zero_ideal
)
from src.poset import (
    Poset, PrimeFamily, antichain_poset, chain_poset, down_set,
    is_connected_order_ideal, mobius, sum_closure
)
from src.qborel import (
    PrimeFactorization, QBorelIdeal, _q_generators_of, is_q_borel,
    principal, q_closure
)
from src.utils_helpers import log_with_context

logger = logging.getLogger(__name__)

INF = math.inf
Exponent = Union[int, float]


@dataclass(frozen=True)
class PrimePowerIntersection:
    """Intersection of prime powers p^a; a = 0 components are dropped."""

    components: Tuple[Tuple[MonomialPrime, int], ...]
    nvars: int

    @classmethod
    def of(cls, components: Dict[MonomialPrime, int], nvars: int
           ) -> "PrimePowerIntersection":
        for p, a in components.items():
            if a < 0:
                raise PreconditionError(f"negative primary exponent {a}")
        kept = sorted(
            ((p, a) for p, a in components.items() if a > 0),
            key=lambda item: item[0].sort_key()
        )
        return cls(tuple(kept), nvars)

    def as_dict(self) -> Dict[MonomialPrime, int]:
        return dict(self.components)

    def primes(self) -> List[MonomialPrime]:
        return [p for p, _ in self.components]

    def ideal(self) -> MonomialIdeal:
        return intersect_all(
            [power(p.ideal(), a) for p, a in self.components], self.nvars
        )

    def without(self, p: MonomialPrime) -> "PrimePowerIntersection":
        return PrimePowerIntersection(
            tuple(c for c in self.components if c[0] != p), self.nvars
        )


@dataclass(frozen=True)
class SignedPrimeExponents:
    """Integer exponents e_p, possibly negative, on monomial primes."""

    exponents: Tuple[Tuple[MonomialPrime, int], ...]
    nvars: int

    def as_dict(self) -> Dict[MonomialPrime, int]:
        return dict(self.exponents)

    def get(self, p: MonomialPrime) -> int:
        return self.as_dict().get(p, 0)


@dataclass(frozen=True)
class IrreducibleComponent:
    """The ideal (x_i^f_i : f_i finite); INF marks an absent variable."""

    exponents: Tuple[Exponent, ...]

    def ideal(self) -> MonomialIdeal:
        n = len(self.exponents)
        return minimalize(
            [Monomial.variable(n, i, int(f))
             for i, f in enumerate(self.exponents) if f != INF],
            n,
        )

    def contains_component(self, other: "IrreducibleComponent") -> bool:
        """True iff this ideal contains ``other``."""
        return all(
            f <= g for f, g in zip(self.exponents, other.exponents)
            if g != INF
        )

    def sort_key(self) -> Tuple[float, ...]:
        return tuple(float(f) for f in self.exponents)


@dataclass(frozen=True)
class QIrreducibleIdeal:
    """Q-Borel ideal Q-generated by the pure powers x_k^e_k, e_k finite."""

    poset: Poset
    exponents: Tuple[Exponent, ...]

    def ideal(self) -> MonomialIdeal:
        n = self.poset.n
        powers = [Monomial.variable(n, k, int(e))
                  for k, e in enumerate(self.exponents) if e != INF]
        return q_closure(self.poset, powers).expansion

    def sort_key(self) -> Tuple[Tuple[float, ...], int]:
        return (tuple(float(e) for e in self.exponents),
                len(self.poset.relations))


def _support_family(primes: Sequence[MonomialPrime]) -> PrimeFamily:
    return sum_closure(PrimeFamily.of(primes))


def is_redundant(D: PrimePowerIntersection, p: MonomialPrime) -> bool:
    """True iff dropping the p-component leaves the intersection unchanged."""
    a = D.as_dict()[p]
    rest = D.without(p).ideal()
    return all(p.power_contains(g, a) for g in rest.generators)


def irredundant(D: PrimePowerIntersection) -> PrimePowerIntersection:
    """Drop redundant components, largest primes first."""
    current = D
    for p in sorted(D.primes(), key=MonomialPrime.sort_key, reverse=True):
        if len(current.components) > 1 and is_redundant(current, p):
            current = current.without(p)
    return current


def is_irredundant(D: PrimePowerIntersection) -> bool:
    return all(not is_redundant(D, p) for p in D.primes())


@measure_time
def product_to_primary(F: PrimeFactorization, irredundant_only: bool = True
                       ) -> PrimePowerIntersection:
    """Primary decomposition of a product of primes.

    Components run over the sum-closure of the factor primes with
    a_p = sum of e_q over factors q inside p.

    Args:
        F: Prime factorization with positive exponents
        irredundant_only: Prune redundant components

    Returns:
        PrimePowerIntersection equal to the product ideal
    """
    family = _support_family(F.primes())
    factors = F.as_dict()
    components = {
        p: sum(e for q, e in factors.items() if q.issubset(p))
        for p in family
    }
    D = PrimePowerIntersection.of(components, F.nvars)
    if irredundant_only:
        D = irredundant(D)
    ensure(lambda: D.ideal() == F.expand(),
           "primary decomposition differs from the prime product")
    return D


def primary_to_product(D: PrimePowerIntersection, L: PrimeFamily
                       ) -> SignedPrimeExponents:
    """Recover e_p = sum over q <= p in L of mu(q, p) a_q.

    Primes of L absent from D contribute a_q = 0.
    """
    a = D.as_dict()
    missing = [p for p in a if p not in L]
    if missing:
        raise PreconditionError("prime family does not contain the support")
    exponents = {}
    for p in L:
        e = sum(mobius(L, q, p) * a.get(q, 0) for q in L.below(p))
        if e:
            exponents[p] = e
    ordered = sorted(exponents.items(), key=lambda item: item[0].sort_key())
    return SignedPrimeExponents(tuple(ordered), D.nvars)


def lambda_expand(D: PrimePowerIntersection, L: PrimeFamily,
                  larger: PrimeFamily) -> PrimePowerIntersection:
    """Recompute the primary exponents over a larger prime family.

    The exponents e recovered over L give b_p = sum of e_q over q inside p
    for every p in ``larger``; the intersection ideal does not change.
    """
    if not all(p in larger for p in L):
        raise PreconditionError("family to expand into must contain L")
    e = primary_to_product(D, L).as_dict()
    b = {p: sum(v for q, v in e.items() if q.issubset(p)) for p in larger}
    if any(v < 0 for v in b.values()):
        raise PreconditionError("expansion produced a negative exponent")
    result = PrimePowerIntersection.of(b, D.nvars)
    ensure(lambda: result.ideal() == D.ideal(),
           "expanded decomposition changed the ideal")
    return result


def associated_primes(Q: Poset, m: Monomial) -> Tuple[MonomialPrime, ...]:
    """Connected down-sets A(m') for m' dividing m."""
    if m.is_unit():
        raise PreconditionError("the unit monomial has no associated primes")
    support = m.support
    found: Set[MonomialPrime] = set()
    for size in range(1, len(support) + 1):
        for T in combinations(support, size):
            A = down_set(Q, T)
            if is_connected_order_ideal(Q, A.support):
                found.add(A)
    return tuple(sorted(found, key=MonomialPrime.sort_key))


@measure_time
def principal_primary_decomposition(Q: Poset, m: Monomial
                                    ) -> PrimePowerIntersection:
    """Irredundant primary decomposition of Q(m) read off its order ideals."""
    primes = associated_primes(Q, m)
    principal_sets = {i: down_set(Q, [i]) for i in m.support}
    D = PrimePowerIntersection.of(
        {
            p: sum(m.exponents[i] for i, A in principal_sets.items()
                   if A.issubset(p))
            for p in primes
        },
        Q.n,
    )
    ensure(lambda: D.ideal() == principal(Q, m).expansion,
           "primary decomposition differs from the principal ideal")
    ensure(lambda: is_irredundant(D), "primary decomposition is redundant")
    logger.debug(
        f"Primary decomposition with {len(D.components)} components",
        **log_with_context(monomial=m.exponents)
    )
    return D


def colon_representation(D: PrimePowerIntersection, L: PrimeFamily
                         ) -> Tuple[PrimeFactorization, PrimeFactorization]:
    """Write the intersection as (J : K) for prime products J and K.

    Raises:
        PreconditionError: If L is not sum-closed or misses a prime of D
    """
    if not L.is_sum_closed():
        raise PreconditionError("Lambda not sum-closed")
    e = primary_to_product(D, L).as_dict()
    J = PrimeFactorization.of({p: v for p, v in e.items() if v > 0}, D.nvars)
    K = PrimeFactorization.of({p: -v for p, v in e.items() if v < 0},
                              D.nvars)
    ensure(lambda: quotient(J.expand(), K.expand()) == D.ideal(),
           "colon representation does not reproduce the intersection")
    return J, K


def q_irreducible_expand(Q: Poset, e: Sequence[Exponent]
                         ) -> Tuple[IrreducibleComponent, ...]:
    """Irreducible decomposition of the Q-irreducible ideal with exponents e.

    The components are the componentwise-maximal f with f_i finite
    below every finite e_k and sum over x_i <= x_k of (f_i - 1) at most
    e_k - 1.
    """
    n = Q.n
    if len(e) != n:
        raise PreconditionError("exponent vector has the wrong length")
    finite = [k for k in range(n) if e[k] != INF]
    if not finite:
        return (IrreducibleComponent((INF,) * n),)
    if any(e[k] == 0 for k in finite):
        return ()
    upper: Dict[int, int] = {}
    for i in range(n):
        caps = [int(e[k]) for k in finite if Q.leq[i, k]]
        if caps:
            upper[i] = min(caps)
    constrained = sorted(upper)

    def feasible(f: Dict[int, int]) -> bool:
        return all(
            sum(f[i] - 1 for i in constrained if Q.leq[i, k]) <= e[k] - 1
            for k in finite
        )

    components = []
    for values in cartesian(*(range(1, upper[i] + 1) for i in constrained)):
        f = dict(zip(constrained, values))
        if not feasible(f):
            continue
        maximal = True
        for i in constrained:
            if f[i] < upper[i]:
                f[i] += 1
                grows = feasible(f)
                f[i] -= 1
                if grows:
                    maximal = False
                    break
        if maximal:
            components.append(IrreducibleComponent(
                tuple(f.get(i, INF) for i in range(n))
            ))
    result = tuple(sorted(components, key=IrreducibleComponent.sort_key))
    ensure(
        lambda: intersect_all([c.ideal() for c in result], n)
        == QIrreducibleIdeal(Q, tuple(e)).ideal(),
        "irreducible components differ from the Q-irreducible ideal"
    )
    return result


def _split_parts(Q: Poset, m: Monomial, z: int
                 ) -> Tuple[Monomial, Monomial, int]:
    """Return (mu, nu, d) for m = z^e * mu * nu around the variable z."""
    n = Q.n
    mu_exps = [0] * n
    nu_exps = [0] * n
    for i in m.support:
        if i == z:
            continue
        if Q.less(i, z):
            mu_exps[i] = m.exponents[i]
        else:
            nu_exps[i] = m.exponents[i]
    mu = Monomial(tuple(mu_exps))
    return mu, Monomial(tuple(nu_exps)), mu.degree


def _split_candidates(Q: Poset, m: Monomial) -> List[int]:
    """Q-maximal variables of supp(m) with a nonempty strict lower part."""
    support = m.support
    return [
        z for z in support
        if not any(Q.less(z, j) for j in support)
        and any(Q.less(i, z) for i in support)
    ]


def principal_split(Q: Poset, m: Monomial, z: Optional[int] = None
                    ) -> Tuple[Monomial, Monomial]:
    """Split Q(m) as Q(z^(e_z+d) nu) intersected with Q(mu nu).

    By default z is the lowest-indexed usable Q-maximal variable.

    Raises:
        PreconditionError: If no strict lower part exists below z
    """
    candidates = _split_candidates(Q, m)
    if z is None:
        if not candidates:
            raise PreconditionError("no strict lower part")
        z = candidates[0]
    elif z not in candidates:
        raise PreconditionError("no strict lower part")
    mu, nu, d = _split_parts(Q, m, z)
    first = Monomial.variable(Q.n, z, m.exponents[z] + d) * nu
    second = mu * nu
    ensure(
        lambda: principal(Q, m).expansion == minimalize(
            [g.lcm(h) for g in principal(Q, first).expansion
             for h in principal(Q, second).expansion], Q.n),
        "principal split does not reproduce Q(m)"
    )
    return first, second


def _choose_split(Q: Poset, nonpure: Sequence[Monomial]
                        ) -> Optional[Tuple[Monomial, int]]:
    """Pick (m1, z) for a Q-Borel-preserving split, or None."""
    variables = sorted({i for g in nonpure for i in g.support})
    maximal = [z for z in variables
               if not any(Q.less(z, j) for j in variables)]
    for z in sorted(maximal, reverse=True):
        for g in nonpure:
            if g.exponents[z] and z in _split_candidates(Q, g):
                return g, z
    for g in nonpure:
        candidates = _split_candidates(Q, g)
        if candidates:
            return g, max(candidates)
    return None


def _leaf_exponents(gens: Sequence[Monomial], n: int
                    ) -> Tuple[Exponent, ...]:
    e: List[Exponent] = [INF] * n
    for g in gens:
        (k,) = g.support
        e[k] = min(e[k], g.exponents[k])
    return tuple(e)


@measure_time
def q_irreducible_decomposition(Q: Poset, I: QBorelIdeal,
                                budget: Optional[int] = None
                                ) -> Tuple[QIrreducibleIdeal, ...]:
    """Split a Q-Borel ideal into Q-irreducible pieces.

    Each step picks a non-pure-power Q-generator m1 = z^e mu nu and
    replaces I by I + Q(z^(e+d) nu) and I + Q(mu nu). When no generator
    has a strict lower part under a Q-maximal variable, the step splits
    off z^e as plain monomial ideals and continues over the antichain, so
    such leaves carry the antichain poset.

    Raises:
        LimitExceededError: If the recursion exceeds the node budget
    """
    budget = config.RECURSION_LIMIT if budget is None else budget
    n = Q.n
    leaves: Set[QIrreducibleIdeal] = set()
    stack: List[Tuple[Poset, MonomialIdeal]] = [(Q, I.expansion)]
    antichain = antichain_poset(n)
    visited = 0
    while stack:
        visited += 1
        if visited > budget:
            raise LimitExceededError(
                f"irreducible decomposition exceeded {budget} nodes"
            )
        P, ideal = stack.pop()
        if ideal.is_unit():
            continue
        if ideal.is_zero():
            leaves.add(QIrreducibleIdeal(P, (INF,) * n))
            continue
        gens = _q_generators_of(P, ideal)
        nonpure = [g for g in gens if len(g.support) > 1]
        if not nonpure:
            leaves.add(QIrreducibleIdeal(P, _leaf_exponents(gens, n)))
            continue
        choice = _choose_split(P, nonpure)
        if choice is not None:
            m1, z = choice
            mu, nu, d = _split_parts(P, m1, z)
            first = Monomial.variable(n, z, m1.exponents[z] + d) * nu
            second = mu * nu
            stack.append((P, q_closure(P, gens + (second,)).expansion))
            stack.append((P, q_closure(P, gens + (first,)).expansion))
        else:
            m1 = nonpure[0]
            z = m1.max_index()
            head = Monomial.variable(n, z, m1.exponents[z])
            tail = m1 / head
            stack.append((antichain, ideal_sum(
                ideal, minimalize([tail], n))))
            stack.append((antichain, ideal_sum(
                ideal, minimalize([head], n))))
    result = tuple(sorted(leaves, key=QIrreducibleIdeal.sort_key))
    ensure(
        lambda: intersect_all([leaf.ideal() for leaf in result], n)
        == I.expansion,
        "Q-irreducible pieces do not intersect to the ideal"
    )
    logger.debug(
        f"Q-irreducible decomposition with {len(result)} pieces",
        **log_with_context(nodes=visited)
    )
    return result


def prune_irreducible(components: Sequence[IrreducibleComponent]
                      ) -> Tuple[IrreducibleComponent, ...]:
    """Drop components containing another component."""
    unique = sorted(set(components), key=IrreducibleComponent.sort_key)
    kept = [
        c for c in unique
        if not any(o != c and c.contains_component(o) for o in unique)
    ]
    return tuple(kept)


def irreducible_decomposition(Q: Poset, I: QBorelIdeal
                              ) -> Tuple[IrreducibleComponent, ...]:
    """Irredundant irreducible decomposition of a Q-Borel ideal."""
    pieces = q_irreducible_decomposition(Q, I)
    components: List[IrreducibleComponent] = []
    for piece in pieces:
        components.extend(q_irreducible_expand(piece.poset, piece.exponents))
    result = prune_irreducible(components)
    ensure(
        lambda: intersect_all([c.ideal() for c in result], Q.n)
        == I.expansion,
        "irreducible components do not intersect to the ideal"
    )
    return result


def borel_irreducible_split(I: MonomialIdeal
                            ) -> Tuple[MonomialIdeal, MonomialIdeal]:
    """Split a Borel ideal along its last variable.

    Returns (Borel(x_n^d) + M, M + (N : x_n^infinity)) where N is spanned by
    the Borel generators divisible by x_n and M by the others.

    Raises:
        NotQBorelError: If I is not Borel
        PreconditionError: If x_n divides no generator or a power of x_n
            lies in I
        MixedDegreeError: If the generators divisible by x_n have mixed
            degrees that leave them unsaturated in the least one
    """
    n = I.nvars
    chain = chain_poset(n)
    if not is_q_borel(chain, I):
        raise NotQBorelError("ideal is not Borel")
    last = n - 1
    if not any(g.exponents[last] for g in I.generators):
        raise PreconditionError(f"x{n} divides no generator")
    if any(g.support in ((), (last,)) for g in I.generators):
        raise PreconditionError(f"the ideal contains a power of x{n}")
    borel_gens = _q_generators_of(chain, I)
    n_gens = [g for g in borel_gens if g.exponents[last]]
    m_gens = [g for g in borel_gens if not g.exponents[last]]
    N = q_closure(chain, n_gens).expansion
    M = q_closure(chain, m_gens).expansion if m_gens else zero_ideal(n)
    degrees = tuple(sorted({g.degree for g in n_gens}))
    d = degrees[0]
    maximal = MonomialPrime(frozenset(range(n)), n).ideal()
    saturated = saturate(N, last)
    # N must agree with its saturation from degree d on
    if not is_subideal(intersect_all([power(maximal, d), saturated], n), N):
        raise MixedDegreeError(
            degrees,
            f"generators divisible by x{n} have degrees {list(degrees)} and "
            f"differ from their saturation in degree {d}"
        )
    first = ideal_sum(power(maximal, d), M)
    second = ideal_sum(M, saturated)
    ensure(lambda: is_subideal(I, first) and is_subideal(I, second)
           and intersect_all([first, second], n) == I,
           "Borel split does not reproduce the ideal")
    return first, second


def decomposition_contains(components: Sequence[IrreducibleComponent],
                           m: Monomial) -> bool:
    """Membership of m in the intersection of the components."""
    return all(contains(c.ideal(), m) for c in components)


__all__ = [
    "INF", "PrimePowerIntersection", "SignedPrimeExponents",
    "IrreducibleComponent", "QIrreducibleIdeal", "product_to_primary",
    "primary_to_product", "lambda_expand", "associated_primes",
    "principal_primary_decomposition", "colon_representation",
    "q_irreducible_expand", "principal_split", "q_irreducible_decomposition",
    "irreducible_decomposition", "borel_irreducible_split", "irredundant",
    "is_irredundant", "is_redundant", "prune_irreducible",
    "decomposition_contains",
]
