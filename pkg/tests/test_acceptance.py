"""End-to-end sweeps checking results against the brute-force oracles."""
import dataclasses
import os
import sys
import unittest
from itertools import combinations
from math import comb

import numpy as np
import pytest

# Add the parent directory to the path so we can import the src module
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.checks import (
    check_colon,
    check_irreducible,
    check_prime_products,
    check_y_resolution,
    random_monomial,
)
from src.complexes import koszul_betti, verify_complex
from src.decomposition import (
    associated_primes,
    borel_irreducible_split,
    principal_primary_decomposition,
)
from src.errors import PreconditionError
from src.invariants import (
    check_pdim_hypotheses,
    codim_principal,
    is_cohen_macaulay,
    pdim_principal,
)
from src.monomials import Monomial, MonomialPrime, intersect_all
from src.poset import (
    all_naturally_labeled_posets,
    antichain_poset,
    build_poset,
    chain_poset,
)
from src.qborel import (
    max_stabilizing_poset, principal, q_closure, witness_ideal
)
from src.resolutions import (
    ek_resolution, taylor_resolution, truncated_resolution
)


def m(*exps):
    return Monomial(tuple(exps))


def squarefree_monomials(n):
    for size in range(1, n + 1):
        for support in combinations(range(n), size):
            yield Monomial.from_support(n, support)


def lcm_degree(I):
    top = I.generators[0]
    for g in I.generators[1:]:
        top = top.lcm(g)
    return top.degree


def assert_invariants(case, n):
    """Compare pd, codim and the CM classification with the oracles."""
    checked = 0
    for Q in all_naturally_labeled_posets(n):
        for mu in squarefree_monomials(n):
            try:
                check_pdim_hypotheses(Q, mu)
            except PreconditionError:
                continue
            I = principal(Q, mu).expansion
            table = koszul_betti(I, lcm_degree(I))
            pd = pdim_principal(Q, mu)
            case.assertEqual(pd, table.projective_dimension(), (Q, mu))
            codim = codim_principal(Q, mu)
            case.assertEqual(
                codim,
                min(len(p.support) for p in associated_primes(Q, mu))
            )
            result = is_cohen_macaulay(Q, mu)
            case.assertEqual(result.is_cm, pd == codim)
            if result.is_cm:
                case.assertIn(Q, (chain_poset(n), antichain_poset(n)))
            checked += 1
    case.assertGreater(checked, 0)


class TestWorkedExamples(unittest.TestCase):
    """Test cases reproducing the small hand-computed examples."""

    def test_six_variable_decomposition(self):
        Q = build_poset(6, [(0, 3), (3, 5), (2, 5), (1, 4), (2, 4)])
        mu = m(0, 0, 0, 1, 1, 1)
        self.assertEqual(set(associated_primes(Q, mu)), {
            MonomialPrime.of(6, [0, 3]),
            MonomialPrime.of(6, [1, 2, 4]),
            MonomialPrime.of(6, [0, 2, 3, 5]),
            MonomialPrime.of(6, range(6)),
        })
        D = principal_primary_decomposition(Q, mu)
        self.assertEqual([a for _, a in D.components], [1, 1, 2, 3])

    def test_truncated_specializations(self):
        chain = chain_poset(2)
        F = truncated_resolution(chain, principal(chain, m(0, 2)), 2,
                                 cancel=True)
        self.assertEqual(F.ranks(), [3, 2])
        self.assertEqual(F.betti_table(),
                         ek_resolution(F.ideal).betti_table())

        anti = antichain_poset(2)
        G = truncated_resolution(anti, q_closure(anti, [m(1, 0), m(0, 1)]),
                                 1)
        self.assertEqual(G.ranks(), [2, 1])


class TestInvariantSweep(unittest.TestCase):
    """Test cases for pd, codim and Cohen-Macaulayness over all posets."""

    def test_three_variables(self):
        assert_invariants(self, 3)

    @pytest.mark.slow
    def test_four_variables(self):
        assert_invariants(self, 4)

    @pytest.mark.slow
    def test_five_variables(self):
        assert_invariants(self, 5)


class TestRandomizedProperties(unittest.TestCase):
    """Test cases running the seeded property checks many times."""

    def repeat(self, check, rounds, seed=2024):
        rng = np.random.default_rng(seed)
        for _ in range(rounds):
            problem = check(rng)
            self.assertIsNone(problem, problem)

    def test_prime_products(self):
        self.repeat(check_prime_products, 20)

    @pytest.mark.slow
    def test_prime_products_long(self):
        self.repeat(check_prime_products, 200)

    @pytest.mark.slow
    def test_colon(self):
        self.repeat(check_colon, 50)

    @pytest.mark.slow
    def test_y_resolution(self):
        self.repeat(check_y_resolution, 30)

    @pytest.mark.slow
    def test_irreducible(self):
        self.repeat(check_irreducible, 50)

    @pytest.mark.slow
    def test_borel_split(self):
        rng = np.random.default_rng(11)
        chain = chain_poset(3)
        tried = 0
        for _ in range(500):
            seeds = [random_monomial(rng, 3, 3) for _ in range(2)]
            I = q_closure(chain, seeds).expansion
            try:
                first, second = borel_irreducible_split(I)
            except PreconditionError:
                continue
            self.assertEqual(intersect_all([first, second], 3), I)
            tried += 1
            if tried == 20:
                break
        self.assertEqual(tried, 20)


class TestTruncatedSpecializations(unittest.TestCase):
    """Test cases for truncated resolutions over the extreme posets."""

    def random_ideals(self, Q, seed, count=20):
        rng = np.random.default_rng(seed)
        ideals = []
        for _ in range(count):
            seeds = [random_monomial(rng, Q.n, 3)
                     for _ in range(int(rng.integers(1, 5)))]
            ideals.append(q_closure(Q, seeds))
        return ideals

    @pytest.mark.slow
    def test_antichain_gives_taylor(self):
        Q = antichain_poset(3)
        for I in self.random_ideals(Q, 5):
            g = len(I.q_generators)
            F = truncated_resolution(Q, I, I.expansion.max_degree(),
                                     internal_bound=lcm_degree(I.expansion))
            self.assertEqual(F.ranks(),
                             [comb(g, i + 1) for i in range(g)])
            self.assertEqual(F.ranks(),
                             taylor_resolution(I.expansion).ranks())
            self.assertTrue(verify_complex(F, "d2").ok)

    @pytest.mark.slow
    def test_chain_gives_eliahou_kervaire(self):
        Q = chain_poset(3)
        for I in self.random_ideals(Q, 6):
            d = max(g.degree for g in I.q_generators)
            F = truncated_resolution(Q, I, d, cancel=True)
            self.assertFalse(F.has_unit_entries())
            self.assertEqual(F.betti_table(),
                             ek_resolution(I.expansion).betti_table())


class TestWitness(unittest.TestCase):
    """Test cases for recovering posets from their witness ideals."""

    def test_up_to_three_variables(self):
        for n in range(1, 4):
            for Q in all_naturally_labeled_posets(n):
                self.assertEqual(max_stabilizing_poset(witness_ideal(Q)), Q)

    @pytest.mark.slow
    def test_four_variables(self):
        for Q in all_naturally_labeled_posets(4):
            self.assertEqual(max_stabilizing_poset(witness_ideal(Q)), Q)


class TestNegativeControls(unittest.TestCase):
    """Test cases showing the oracles reject wrong answers."""

    def test_sign_corrupted_differential(self):
        F = ek_resolution(principal(chain_poset(3), m(0, 1, 1)).expansion)
        self.assertTrue(verify_complex(F, "d2").ok)
        differentials = [dict(d) for d in F.differentials]
        key = sorted(differentials[2])[0]
        differentials[2][key] = -differentials[2][key]
        broken = dataclasses.replace(F, differentials=differentials)
        self.assertFalse(verify_complex(broken, "d2").ok)

    def test_dropped_component(self):
        Q = build_poset(6, [(0, 3), (3, 5), (2, 5), (1, 4), (2, 4)])
        target = m(0, 0, 0, 1, 1, 1)
        D = principal_primary_decomposition(Q, target)
        expansion = principal(Q, target).expansion
        self.assertEqual(D.ideal(), expansion)
        for p in D.primes():
            self.assertNotEqual(D.without(p).ideal(), expansion)


if __name__ == '__main__':
    unittest.main()
