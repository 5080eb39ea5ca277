"""Exact monomial and monomial ideal arithmetic."""
import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import (
    Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple
)

from src.config import MAX_EXPONENT
from src.errors import PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Monomial:
    """A monomial stored as its exponent vector.

    Variable indices are 0-based internally; the session layer maps names
    onto them.
    """

    exponents: Tuple[int, ...]

    def __post_init__(self) -> None:
        for e in self.exponents:
            if e < 0:
                raise PreconditionError(
                    f"negative exponent in {self.exponents}"
                )
            if e > MAX_EXPONENT:
                raise OverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")

    @classmethod
    def unit(cls, n: int) -> "Monomial":
        return cls((0,) * n)

    @classmethod
    def variable(cls, n: int, index: int, power: int = 1) -> "Monomial":
        exps = [0] * n
        exps[index] = power
        return cls(tuple(exps))

    @classmethod
    def from_support(cls, n: int, indices: Iterable[int]) -> "Monomial":
        """Squarefree monomial on the given indices."""
        exps = [0] * n
        for i in indices:
            exps[i] = 1
        return cls(tuple(exps))

    @property
    def nvars(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def is_unit(self) -> bool:
        return not any(self.exponents)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.exponents) if e)

    def max_index(self) -> int:
        """Largest variable index dividing the monomial, -1 for the unit."""
        for i in range(len(self.exponents) - 1, -1, -1):
            if self.exponents[i]:
                return i
        return -1

    def min_index(self) -> int:
        """Smallest variable index dividing the monomial, n for the unit."""
        for i, e in enumerate(self.exponents):
            if e:
                return i
        return len(self.exponents)

    def factors(self) -> List[int]:
        """Variable indices with multiplicity, in increasing order."""
        out: List[int] = []
        for i, e in enumerate(self.exponents):
            out.extend([i] * e)
        return out

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        _check_same_ring(self, other)
        return Monomial(
            tuple(a + b for a, b in zip(self.exponents, other.exponents))
        )

    def __truediv__(self, other: "Monomial") -> "Monomial":
        _check_same_ring(self, other)
        if not other.divides(self):
            raise PreconditionError("inexact monomial division")
        return Monomial(
            tuple(a - b for a, b in zip(self.exponents, other.exponents))
        )

    def __pow__(self, k: int) -> "Monomial":
        return Monomial(tuple(e * k for e in self.exponents))

    def lcm(self, other: "Monomial") -> "Monomial":
        _check_same_ring(self, other)
        return Monomial(
            tuple(max(a, b) for a, b in zip(self.exponents, other.exponents))
        )

    def gcd(self, other: "Monomial") -> "Monomial":
        _check_same_ring(self, other)
        return Monomial(
            tuple(min(a, b) for a, b in zip(self.exponents, other.exponents))
        )

    def move(self, source: int, target: int) -> "Monomial":
        """Replace one factor x_source by x_target."""
        exps = list(self.exponents)
        if not exps[source]:
            raise PreconditionError(f"x{source + 1} does not divide monomial")
        exps[source] -= 1
        exps[target] += 1
        return Monomial(tuple(exps))

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Degree first, then lex with x_1 largest."""
        return (self.degree, tuple(-e for e in self.exponents))

    def __lt__(self, other: "Monomial") -> bool:
        return self.sort_key() < other.sort_key()


def _check_same_ring(a: Monomial, b: Monomial) -> None:
    if len(a.exponents) != len(b.exponents):
        raise PreconditionError(
            f"monomials live in different rings ({len(a.exponents)} vs "
            f"{len(b.exponents)} variables)"
        )


@dataclass(frozen=True)
class MonomialPrime:
    """Prime ideal generated by the variables in ``support``."""

    support: FrozenSet[int]
    nvars: int

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "MonomialPrime":
        return cls(frozenset(indices), n)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self.support), tuple(sorted(self.support)))

    def __lt__(self, other: "MonomialPrime") -> bool:
        return self.sort_key() < other.sort_key()

    def __le__(self, other: "MonomialPrime") -> bool:
        return self.sort_key() <= other.sort_key()

    def issubset(self, other: "MonomialPrime") -> bool:
        return self.support <= other.support

    def union(self, other: "MonomialPrime") -> "MonomialPrime":
        return MonomialPrime(self.support | other.support, self.nvars)

    def ideal(self) -> "MonomialIdeal":
        return minimalize(
            [Monomial.variable(self.nvars, i) for i in self.support],
            self.nvars,
        )

    def power(self, k: int) -> "MonomialIdeal":
        return power(self.ideal(), k)

    def power_contains(self, m: Monomial, k: int) -> bool:
        """Membership of m in the k-th power of this prime."""
        return sum(m.exponents[i] for i in self.support) >= k


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal held by its canonical minimal generating set.

    An empty generator tuple is the zero ideal; the generator 1 is the
    unit ideal.
    """

    generators: Tuple[Monomial, ...]
    nvars: int

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.is_unit() for g in self.generators)

    def __contains__(self, m: Monomial) -> bool:
        return contains(self, m)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.generators)

    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    def min_degree(self) -> int:
        return min((g.degree for g in self.generators), default=0)


def minimalize(gens: Iterable[Monomial], nvars: Optional[int] = None
               ) -> MonomialIdeal:
    """Return the divisibility-minimal subset of ``gens`` in canonical order.

    Args:
        gens: Monomials generating the ideal
        nvars: Number of variables, required when ``gens`` is empty

    Returns:
        MonomialIdeal with canonical generators
    """
    ordered = sorted(set(gens), key=Monomial.sort_key)
    if nvars is None:
        if not ordered:
            raise PreconditionError("the zero ideal needs an explicit nvars")
        nvars = ordered[0].nvars
    kept: List[Monomial] = []
    for g in ordered:
        if g.nvars != nvars:
            raise PreconditionError("generators live in different rings")
        if not any(h.divides(g) for h in kept):
            kept.append(g)
    return MonomialIdeal(tuple(kept), nvars)


def zero_ideal(n: int) -> MonomialIdeal:
    return MonomialIdeal((), n)


def unit_ideal(n: int) -> MonomialIdeal:
    return MonomialIdeal((Monomial.unit(n),), n)


def _check_ideals(I: MonomialIdeal, J: MonomialIdeal) -> None:
    if I.nvars != J.nvars:
        raise PreconditionError(
            f"ideals live in different rings ({I.nvars} vs {J.nvars})"
        )


def product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_ideals(I, J)
    return minimalize((g * h for g in I.generators for h in J.generators),
                      I.nvars)


def power(I: MonomialIdeal, k: int) -> MonomialIdeal:
    if k < 0:
        raise PreconditionError("negative ideal power")
    result = unit_ideal(I.nvars)
    for _ in range(k):
        result = product(result, I)
    return result


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_ideals(I, J)
    return minimalize(I.generators + J.generators, I.nvars)


def intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_ideals(I, J)
    return minimalize((g.lcm(h) for g in I.generators for h in J.generators),
                      I.nvars)


def intersect_all(ideals: Sequence[MonomialIdeal], nvars: int
                  ) -> MonomialIdeal:
    """Intersection of a family; the empty family gives the unit ideal."""
    result = unit_ideal(nvars)
    for I in ideals:
        result = intersect(result, I)
    return result


def quotient(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """The colon ideal (I : J)."""
    _check_ideals(I, J)
    result = unit_ideal(I.nvars)
    for h in J.generators:
        part = minimalize((g / g.gcd(h) for g in I.generators), I.nvars)
        result = intersect(result, part)
    return result


def saturate(I: MonomialIdeal, index: int) -> MonomialIdeal:
    """The colon (I : x_index^infinity)."""
    stripped = []
    for g in I.generators:
        exps = list(g.exponents)
        exps[index] = 0
        stripped.append(Monomial(tuple(exps)))
    return minimalize(stripped, I.nvars)


def contains(I: MonomialIdeal, m: Monomial) -> bool:
    return any(g.divides(m) for g in I.generators)


def is_subideal(I: MonomialIdeal, J: MonomialIdeal) -> bool:
    """True iff I is contained in J."""
    return all(contains(J, g) for g in I.generators)


def monomials_of_degree(n: int, d: int) -> Iterator[Monomial]:
    """All monomials of total degree exactly d in n variables."""
    if d < 0:
        raise PreconditionError("negative degree")
    for combo in combinations_with_replacement(range(n), d):
        exps = [0] * n
        for i in combo:
            exps[i] += 1
        yield Monomial(tuple(exps))


def monomials_up_to(n: int, d: int) -> Iterator[Monomial]:
    for k in range(d + 1):
        yield from monomials_of_degree(n, k)


def graded_count(I: MonomialIdeal, d: int) -> int:
    """Number of degree-d monomials lying in I."""
    return sum(1 for m in monomials_of_degree(I.nvars, d) if contains(I, m))


def first_disagreement(I: MonomialIdeal, J: MonomialIdeal, bound: int
                       ) -> Optional[Monomial]:
    """Smallest monomial of degree <= bound in exactly one of I and J."""
    _check_ideals(I, J)
    for m in monomials_up_to(I.nvars, bound):
        if contains(I, m) != contains(J, m):
            return m
    return None


def agree_up_to(I: MonomialIdeal, J: MonomialIdeal, bound: int) -> bool:
    """Degree-bounded membership oracle for ideal equality."""
    return first_disagreement(I, J, bound) is None


class VariableSet:
    """Ordered, uniquely named variables of the polynomial ring."""

    def __init__(self, names: Sequence[str]):
        if len(set(names)) != len(names):
            raise PreconditionError(f"duplicate variable names in {names}")
        self.names: Tuple[str, ...] = tuple(names)
        self._index: Dict[str, int] = {
            name: i for i, name in enumerate(self.names)
        }

    @classmethod
    def default(cls, n: int) -> "VariableSet":
        if n <= 26:
            return cls([chr(ord("a") + i) for i in range(n)])
        return cls([f"x{i + 1}" for i in range(n)])

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        return self._index[name]

    def monomial(self, powers: Dict[str, int]) -> Monomial:
        exps = [0] * len(self.names)
        for name, e in powers.items():
            exps[self._index[name]] += e
        return Monomial(tuple(exps))

    def format_monomial(self, m: Monomial) -> str:
        if m.is_unit():
            return "1"
        parts = []
        for i, e in enumerate(m.exponents):
            if e == 1:
                parts.append(self.names[i])
            elif e > 1:
                parts.append(f"{self.names[i]}^{e}")
        return "*".join(parts)

    def format_ideal(self, I: MonomialIdeal) -> str:
        if I.is_zero():
            return "(0)"
        return "(" + ", ".join(
            self.format_monomial(g) for g in I.generators
        ) + ")"

    def format_prime(self, p: MonomialPrime) -> str:
        return "(" + ",".join(
            self.names[i] for i in sorted(p.support)
        ) + ")"

    def prime_names(self, p: MonomialPrime) -> List[str]:
        return [self.names[i] for i in sorted(p.support)]
