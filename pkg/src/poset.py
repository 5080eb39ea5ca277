"""Naturally labeled posets on the variables and families of primes."""
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

import numpy as np

from src.errors import NotOrderIdealError, PosetError, UndefinedPairError
from src.monomials import MonomialPrime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Poset:
    """Finite partial order on variable indices 0..n-1.

    ``relations`` holds every strict pair (i, j) with x_i < x_j; it is
    transitively closed and naturally labeled (i < j). Build instances
    with :func:`build_poset`.
    """

    n: int
    relations: FrozenSet[Tuple[int, int]]

    @cached_property
    def leq(self) -> np.ndarray:
        """Read-only reflexive reachability; leq[i, j] iff x_i <= x_j."""
        leq = np.eye(self.n, dtype=bool)
        for i, j in self.relations:
            leq[i, j] = True
        leq.flags.writeable = False
        return leq

    @cached_property
    def covers(self) -> FrozenSet[Tuple[int, int]]:
        """Transitive reduction of the strict order."""
        return frozenset(
            (i, j) for i, j in self.relations
            if not any((i, k) in self.relations and (k, j) in self.relations
                       for k in range(i + 1, j))
        )

    def less(self, i: int, j: int) -> bool:
        return (i, j) in self.relations

    def below(self, j: int) -> Tuple[int, ...]:
        """Indices strictly below x_j."""
        return tuple(i for i in range(j) if (i, j) in self.relations)

    def comparable(self, i: int, j: int) -> bool:
        return i == j or (min(i, j), max(i, j)) in self.relations

    def maximal_elements(self) -> Tuple[int, ...]:
        return tuple(
            i for i in range(self.n)
            if not any((i, j) in self.relations for j in range(i + 1, self.n))
        )

    def is_chain(self) -> bool:
        return len(self.relations) == self.n * (self.n - 1) // 2

    def is_antichain(self) -> bool:
        return not self.relations

    def refines(self, other: "Poset") -> bool:
        """True iff every relation of ``other`` also holds here."""
        return self.n == other.n and other.relations <= self.relations


def build_poset(n: int, relations: Iterable[Tuple[int, int]]) -> Poset:
    """Close a relation set transitively and check the natural labeling.

    Args:
        n: Number of elements
        relations: Pairs (i, j) meaning x_i < x_j, 0-based

    Returns:
        The poset generated by the relations

    Raises:
        PosetError: If a pair violates natural labeling or forms a cycle
    """
    leq = np.eye(n, dtype=bool)
    for i, j in relations:
        if not (0 <= i < n and 0 <= j < n):
            raise PosetError(f"relation ({i}, {j}) out of range for n={n}")
        if i >= j:
            raise PosetError(
                f"relation x{i + 1} < x{j + 1} violates natural labeling"
            )
        leq[i, j] = True
    # Warshall closure, one pivot at a time
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
        raise PosetError("relations contain a cycle")
    strict = frozenset(
        (int(i), int(j)) for i, j in zip(*np.nonzero(leq)) if i != j
    )
    if any(i >= j for i, j in strict):
        raise PosetError("transitive closure violates natural labeling")
    return Poset(n, strict)


def chain_poset(n: int) -> Poset:
    return build_poset(n, [(i, i + 1) for i in range(n - 1)])


def antichain_poset(n: int) -> Poset:
    return Poset(n, frozenset())


def y_poset(t: int) -> Poset:
    """x_1 < ... < x_t < y and x_t < z on indices 0..t+1."""
    if t < 1:
        raise PosetError("the Y poset needs t >= 1")
    rels = [(i, i + 1) for i in range(t)]
    rels.append((t - 1, t + 1))
    return build_poset(t + 2, rels)


def down_set(Q: Poset, T: Iterable[int]) -> MonomialPrime:
    """Union of the principal down-sets of the elements of T."""
    members: Set[int] = set()
    for j in T:
        if not 0 <= j < Q.n:
            raise PosetError(f"element {j} outside the poset")
        members.update(int(i) for i in np.nonzero(Q.leq[:, j])[0])
    return MonomialPrime(frozenset(members), Q.n)


def is_order_ideal(Q: Poset, A: Iterable[int]) -> bool:
    members = set(A)
    return all(i in members for j in members for i in Q.below(j))


def _components_within(Q: Poset, members: Iterable[int]
                       ) -> List[FrozenSet[int]]:
    """Connected components of the Hasse diagram restricted to members."""
    parent: Dict[int, int] = {i: i for i in members}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in Q.covers:
        if i in parent and j in parent:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: Dict[int, Set[int]] = {}
    for i in parent:
        groups.setdefault(find(i), set()).add(i)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def is_connected_order_ideal(Q: Poset, A: Iterable[int]) -> bool:
    """True iff the order ideal A is nonempty and Hasse-connected.

    Raises:
        NotOrderIdealError: If A is not closed downward
    """
    members = set(A)
    if not is_order_ideal(Q, members):
        raise NotOrderIdealError(f"{sorted(members)} is not an order ideal")
    if not members:
        return False
    return len(_components_within(Q, members)) == 1


def connected_components(Q: Poset) -> List[FrozenSet[int]]:
    return _components_within(Q, range(Q.n))


def order_ideals(Q: Poset, include_empty: bool = False
                 ) -> List[FrozenSet[int]]:
    """Every order ideal of Q, ordered by size then elements."""
    found = []
    for mask in range(0 if include_empty else 1, 1 << Q.n):
        members = frozenset(i for i in range(Q.n) if mask >> i & 1)
        if is_order_ideal(Q, members):
            found.append(members)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def all_naturally_labeled_posets(n: int) -> List[Poset]:
    """Every naturally labeled poset on n elements."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    posets = []
    for mask in range(1 << len(pairs)):
        rels = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        closed = all(
            (i, l) in rels
            for (i, j) in rels for (k, l) in rels if j == k
        )
        if closed:
            posets.append(Poset(n, frozenset(rels)))
    logger.debug(f"Enumerated {len(posets)} posets on {n} elements")
    return posets


@dataclass(frozen=True)
class PrimeFamily:
    """Finite set of monomial primes ordered by inclusion."""

    primes: Tuple[MonomialPrime, ...]

    @classmethod
    def of(cls, primes: Iterable[MonomialPrime]) -> "PrimeFamily":
        return cls(tuple(sorted(set(primes), key=MonomialPrime.sort_key)))

    def __contains__(self, p: MonomialPrime) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def below(self, p: MonomialPrime) -> List[MonomialPrime]:
        """Members of the family contained in p, p included."""
        return [q for q in self.primes if q.issubset(p)]

    def is_sum_closed(self) -> bool:
        return sum_closure(self) == self


@lru_cache(maxsize=256)
def mobius_table(L: PrimeFamily) -> Dict[Tuple[MonomialPrime, MonomialPrime],
                                         int]:
    """Moebius function of the inclusion order on L, for all pairs q <= p."""
    table: Dict[Tuple[MonomialPrime, MonomialPrime], int] = {}
    # primes are sorted by size, so every strict predecessor comes first
    for q in L.primes:
        for p in L.primes:
            if not q.issubset(p):
                continue
            if q == p:
                table[(q, p)] = 1
                continue
            table[(q, p)] = -sum(
                table[(q, r)] for r in L.primes
                if q.issubset(r) and r.issubset(p) and r != p
                and (q, r) in table
            )
    return table


def mobius(L: PrimeFamily, q: MonomialPrime, p: MonomialPrime) -> int:
    """Moebius value mu(q, p) in the family L.

    Raises:
        UndefinedPairError: If q or p is absent from L or q is not inside p
    """
    if q not in L or p not in L or not q.issubset(p):
        raise UndefinedPairError("mobius is undefined for this pair")
    return mobius_table(L)[(q, p)]


def sum_closure(L: PrimeFamily) -> PrimeFamily:
    """Smallest superfamily closed under unions of supports."""
    current = set(L.primes)
    while True:
        added = {p.union(q) for p, q in combinations(current, 2)} - current
        if not added:
            return PrimeFamily.of(current)
        current |= added
