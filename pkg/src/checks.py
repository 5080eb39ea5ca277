"""Seeded randomized property checks behind ``--self-check``."""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from src.complexes import koszul_betti, verify_complex
from src.decomposition import (
    PrimePowerIntersection, colon_representation, irreducible_decomposition,
    primary_to_product, product_to_primary
)
from src.errors import QBorelError
from src.monomials import (
    Monomial, MonomialPrime, agree_up_to, intersect_all, quotient
)
from src.poset import (
    PrimeFamily, Poset, all_naturally_labeled_posets, sum_closure, y_poset
)
from src.qborel import (
    PrimeFactorization, max_stabilizing_poset, q_closure, witness_ideal
)
from src.resolutions import y_resolution
from src.utils_helpers import log_with_context

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""


def random_monomial(rng: np.random.Generator, n: int, max_degree: int
                    ) -> Monomial:
    degree = int(rng.integers(1, max_degree + 1))
    exps = [0] * n
    for i in rng.integers(0, n, size=degree):
        exps[int(i)] += 1
    return Monomial(tuple(exps))


def random_prime(rng: np.random.Generator, n: int) -> MonomialPrime:
    size = int(rng.integers(1, n + 1))
    members = rng.choice(n, size=size, replace=False)
    return MonomialPrime(frozenset(int(i) for i in members), n)


def random_poset(rng: np.random.Generator, n: int) -> Poset:
    posets = all_naturally_labeled_posets(n)
    return posets[int(rng.integers(0, len(posets)))]


def check_prime_products(rng: np.random.Generator) -> Optional[str]:
    n = int(rng.integers(2, 6))
    factors = {}
    for _ in range(int(rng.integers(1, 5))):
        factors[random_prime(rng, n)] = int(rng.integers(1, 4))
    F = PrimeFactorization.of(factors, n)
    D = product_to_primary(F, irredundant_only=False)
    bound = sum(e for _, e in F.factors) + 1
    if not agree_up_to(D.ideal(), F.expand(), bound):
        return "primary decomposition differs from the product"
    family = sum_closure(PrimeFamily.of(F.primes()))
    if primary_to_product(D, family).as_dict() != F.as_dict():
        return "exponents were not recovered"
    return None


def check_colon(rng: np.random.Generator) -> Optional[str]:
    n = int(rng.integers(2, 5))
    family = sum_closure(PrimeFamily.of(
        random_prime(rng, n) for _ in range(int(rng.integers(1, 4)))
    ))
    a = {p: int(rng.integers(0, 3)) for p in family}
    D = PrimePowerIntersection.of(a, n)
    J, K = colon_representation(D, family)
    bound = sum(a.values()) + 1
    if not agree_up_to(quotient(J.expand(), K.expand()), D.ideal(), bound):
        return "colon ideal differs from the intersection"
    return None


def check_y_resolution(rng: np.random.Generator) -> Optional[str]:
    t = int(rng.integers(1, 3))
    Y = y_poset(t)
    seeds = [random_monomial(rng, Y.n, 4)
             for _ in range(int(rng.integers(1, 4)))]
    I = q_closure(Y, seeds).expansion
    F = y_resolution(t, I)
    if not verify_complex(F, "d2").ok:
        return "Y-resolution is not a complex"
    bound = I.max_degree() + 3
    if not verify_complex(F, "exactness", bound).ok:
        return "Y-resolution is not exact"
    if F.has_unit_entries():
        return "Y-resolution is not minimal"
    top = I.generators[0]
    for g in I.generators[1:]:
        top = top.lcm(g)
    if F.betti_table() != koszul_betti(I, max(top.degree, I.max_degree())):
        return "Y-resolution Betti numbers disagree with the Koszul oracle"
    return None


def check_irreducible(rng: np.random.Generator) -> Optional[str]:
    n = int(rng.integers(2, 5))
    Q = random_poset(rng, n)
    seeds = [random_monomial(rng, n, 3)
             for _ in range(int(rng.integers(1, 3)))]
    I = q_closure(Q, seeds)
    components = irreducible_decomposition(Q, I)
    meet = intersect_all([c.ideal() for c in components], n)
    if not agree_up_to(meet, I.expansion, I.expansion.max_degree() + 2):
        return "irreducible components do not intersect to the ideal"
    return None


def check_witness(rng: np.random.Generator) -> Optional[str]:
    Q = random_poset(rng, int(rng.integers(1, 4)))
    if max_stabilizing_poset(witness_ideal(Q)) != Q:
        return "witness ideal does not recover its poset"
    return None


CHECKS: List[Callable[[np.random.Generator], Optional[str]]] = [
    check_prime_products, check_colon, check_y_resolution,
    check_irreducible, check_witness,
]


def run_self_check(seed: int, rounds: int = 10) -> List[CheckOutcome]:
    """Run every property ``rounds`` times from one seeded generator."""
    rng = np.random.default_rng(seed)
    outcomes = []
    for check in CHECKS:
        name = check.__name__.replace("check_", "")
        problem = None
        for _ in range(rounds):
            try:
                problem = check(rng)
            except QBorelError as e:
                problem = f"{type(e).__name__}: {e}"
            if problem:
                break
        outcomes.append(CheckOutcome(name, problem is None, problem or ""))
        status = "pass" if problem is None else problem
        logger.info(f"Self-check {name}: {status}",
                    **log_with_context(seed=seed, rounds=rounds))
    return outcomes
