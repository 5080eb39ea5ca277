"""Unit tests for primary and irreducible decompositions."""
import os
import sys
import unittest

from hypothesis import given, settings, strategies as st

# Add the parent directory to the path so we can import the src module
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.decomposition import (
    INF,
    IrreducibleComponent,
    PrimePowerIntersection,
    associated_primes,
    borel_irreducible_split,
    colon_representation,
    decomposition_contains,
    irreducible_decomposition,
    irredundant,
    is_irredundant,
    lambda_expand,
    primary_to_product,
    principal_primary_decomposition,
    principal_split,
    product_to_primary,
    prune_irreducible,
    q_irreducible_decomposition,
    q_irreducible_expand,
)
from src.errors import MixedDegreeError, NotQBorelError, PreconditionError
from src.monomials import Monomial, MonomialPrime, minimalize
from src.poset import (
    PrimeFamily, antichain_poset, build_poset, chain_poset, sum_closure,
    y_poset
)
from src.qborel import PrimeFactorization, principal, q_closure


def m(*exps):
    return Monomial(tuple(exps))


def prime(n, *indices):
    return MonomialPrime.of(n, indices)


# a < d, d < f, c < f, b < e, c < e on a..f
SIX_POSET = build_poset(6, [(0, 3), (3, 5), (2, 5), (1, 4), (2, 4)])

primes_in_three = st.frozensets(st.integers(0, 2), min_size=1).map(
    lambda s: MonomialPrime(s, 3)
)


class TestPrimeProducts(unittest.TestCase):
    """Test cases for products of primes and their inverses."""

    def test_product_to_primary(self):
        a, ab = prime(2, 0), prime(2, 0, 1)
        F = PrimeFactorization.of({a: 1, ab: 1}, 2)
        D = product_to_primary(F)
        self.assertEqual(D.as_dict(), {a: 1, ab: 2})
        self.assertEqual(D.ideal().generators, (m(2, 0), m(1, 1)))

    def test_redundant_component_pruned(self):
        a, b, ab = prime(2, 0), prime(2, 1), prime(2, 0, 1)
        F = PrimeFactorization.of({a: 1, b: 1}, 2)
        self.assertEqual(product_to_primary(F).as_dict(), {a: 1, b: 1})
        full = product_to_primary(F, irredundant_only=False)
        self.assertEqual(full.as_dict(), {a: 1, b: 1, ab: 2})
        self.assertFalse(is_irredundant(full))
        self.assertEqual(irredundant(full).as_dict(), {a: 1, b: 1})

    def test_single_prime(self):
        p = prime(3, 0, 2)
        F = PrimeFactorization.of({p: 3}, 3)
        self.assertEqual(product_to_primary(F).as_dict(), {p: 3})

    def test_primary_to_product(self):
        a, b, ab = prime(2, 0), prime(2, 1), prime(2, 0, 1)
        D = PrimePowerIntersection.of({a: 1, ab: 2}, 2)
        e = primary_to_product(D, PrimeFamily.of([a, ab]))
        self.assertEqual(e.as_dict(), {a: 1, ab: 1})

        D = PrimePowerIntersection.of({a: 1, b: 1, ab: 1}, 2)
        e = primary_to_product(D, PrimeFamily.of([a, b, ab]))
        self.assertEqual(e.as_dict(), {a: 1, b: 1, ab: -1})
        self.assertEqual(e.get(prime(2, 0)), 1)

    def test_family_must_cover_support(self):
        D = PrimePowerIntersection.of({prime(2, 0): 1}, 2)
        with self.assertRaises(PreconditionError):
            primary_to_product(D, PrimeFamily.of([prime(2, 1)]))

    def test_negative_primary_exponent_rejected(self):
        with self.assertRaises(PreconditionError):
            PrimePowerIntersection.of({prime(2, 0): -1}, 2)

    def test_lambda_expand_keeps_ideal(self):
        a, b, ab = prime(2, 0), prime(2, 1), prime(2, 0, 1)
        D = PrimePowerIntersection.of({a: 1, ab: 2}, 2)
        wider = lambda_expand(D, PrimeFamily.of([a, ab]),
                              PrimeFamily.of([a, b, ab]))
        self.assertEqual(wider.ideal(), D.ideal())

    @settings(max_examples=25, deadline=None)
    @given(st.dictionaries(primes_in_three, st.integers(1, 2),
                           min_size=1, max_size=3))
    def test_exponents_recovered(self, factors):
        F = PrimeFactorization.of(factors, 3)
        D = product_to_primary(F, irredundant_only=False)
        family = sum_closure(PrimeFamily.of(F.primes()))
        self.assertEqual(primary_to_product(D, family).as_dict(), factors)


class TestColonRepresentation(unittest.TestCase):
    """Test cases for writing intersections as colon ideals."""

    def test_signed_exponents_split(self):
        a, b, ab = prime(2, 0), prime(2, 1), prime(2, 0, 1)
        D = PrimePowerIntersection.of({a: 1, b: 1, ab: 1}, 2)
        J, K = colon_representation(D, PrimeFamily.of([a, b, ab]))
        self.assertEqual(J.as_dict(), {a: 1, b: 1})
        self.assertEqual(K.as_dict(), {ab: 1})
        self.assertEqual(D.ideal().generators, (m(1, 1),))

    def test_nonnegative_exponents_give_unit_denominator(self):
        p = prime(2, 0, 1)
        D = PrimePowerIntersection.of({p: 2}, 2)
        J, K = colon_representation(D, PrimeFamily.of([p]))
        self.assertEqual(J.as_dict(), {p: 2})
        self.assertTrue(K.expand().is_unit())

    def test_family_not_sum_closed(self):
        a, b = prime(2, 0), prime(2, 1)
        D = PrimePowerIntersection.of({a: 1, b: 1}, 2)
        with self.assertRaisesRegex(PreconditionError, "not sum-closed"):
            colon_representation(D, PrimeFamily.of([a, b]))


class TestPrincipalDecomposition(unittest.TestCase):
    """Test cases for associated primes of principal Q-Borel ideals."""

    def test_six_variable_example(self):
        expected = {
            prime(6, 0, 3): 1,
            prime(6, 1, 2, 4): 1,
            prime(6, 0, 2, 3, 5): 2,
            prime(6, 0, 1, 2, 3, 4, 5): 3,
        }
        target = m(0, 0, 0, 1, 1, 1)
        self.assertEqual(associated_primes(SIX_POSET, target),
                         tuple(sorted(expected)))
        D = principal_primary_decomposition(SIX_POSET, target)
        self.assertEqual(D.as_dict(), expected)

    def test_chain_primes_are_initial_segments(self):
        primes = associated_primes(chain_poset(4), m(0, 2, 0, 1))
        self.assertEqual(primes, (prime(4, 0, 1), prime(4, 0, 1, 2, 3)))

    def test_antichain(self):
        self.assertEqual(associated_primes(antichain_poset(2), m(2, 1)),
                         (prime(2, 0), prime(2, 1)))

    def test_chain_power(self):
        D = principal_primary_decomposition(chain_poset(3), m(0, 0, 2))
        self.assertEqual(D.as_dict(), {prime(3, 0, 1, 2): 2})

    def test_y_poset(self):
        D = principal_primary_decomposition(y_poset(1), m(0, 1, 1))
        self.assertEqual(D.as_dict(), {
            prime(3, 0, 1): 1, prime(3, 0, 2): 1, prime(3, 0, 1, 2): 2
        })
        self.assertEqual(D.ideal().generators, (
            m(2, 0, 0), m(1, 1, 0), m(1, 0, 1), m(0, 1, 1)
        ))

    def test_unit_has_no_primes(self):
        with self.assertRaises(PreconditionError):
            associated_primes(chain_poset(2), Monomial.unit(2))


class TestIrreducible(unittest.TestCase):
    """Test cases for Q-irreducible and irreducible decompositions."""

    def setUp(self):
        self.vee = build_poset(3, [(0, 1), (0, 2)])

    def test_expand_on_a_chain(self):
        parts = q_irreducible_expand(chain_poset(2), (INF, 2))
        self.assertEqual({c.exponents for c in parts}, {(2, 1), (1, 2)})

    def test_expand_on_an_antichain(self):
        parts = q_irreducible_expand(antichain_poset(2), (2, 3))
        self.assertEqual([c.exponents for c in parts], [(2, 3)])

    def test_expand_single_variable(self):
        parts = q_irreducible_expand(chain_poset(2), (1, INF))
        self.assertEqual([c.exponents for c in parts], [(1, INF)])

    def test_expand_degenerate_vectors(self):
        self.assertEqual(q_irreducible_expand(chain_poset(2), (0, 2)), ())
        self.assertEqual(
            [c.exponents for c in
             q_irreducible_expand(chain_poset(2), (INF, INF))],
            [(INF, INF)]
        )

    def test_principal_split(self):
        self.assertEqual(principal_split(self.vee, m(1, 1, 0)),
                         (m(0, 2, 0), m(1, 0, 0)))
        self.assertEqual(principal_split(self.vee, m(1, 1, 1)),
                         (m(0, 2, 1), m(1, 0, 1)))
        self.assertEqual(principal_split(chain_poset(2), m(1, 1)),
                         (m(0, 2), m(1, 0)))

    def test_principal_split_needs_lower_part(self):
        with self.assertRaisesRegex(PreconditionError, "no strict lower"):
            principal_split(antichain_poset(2), m(1, 1))

    def test_q_irreducible_decomposition(self):
        I = principal(chain_poset(2), m(1, 1))
        pieces = q_irreducible_decomposition(chain_poset(2), I)
        self.assertEqual({p.exponents for p in pieces},
                         {(1, INF), (INF, 2)})

    def test_already_q_irreducible(self):
        I = principal(chain_poset(2), m(0, 2))
        pieces = q_irreducible_decomposition(chain_poset(2), I)
        self.assertEqual([p.exponents for p in pieces], [(INF, 2)])

    def test_irreducible_decomposition(self):
        I = principal(chain_poset(2), m(1, 1))
        parts = irreducible_decomposition(chain_poset(2), I)
        self.assertEqual([c.exponents for c in parts], [(1, INF), (2, 1)])
        self.assertTrue(decomposition_contains(parts, m(2, 0)))
        self.assertFalse(decomposition_contains(parts, m(1, 0)))

    def test_antichain_principal(self):
        I = q_closure(antichain_poset(2), [m(1, 1)])
        parts = irreducible_decomposition(antichain_poset(2), I)
        self.assertEqual({c.exponents for c in parts}, {(1, INF), (INF, 1)})

    def test_vee_ideal_round_trip(self):
        I = q_closure(self.vee, [m(1, 1, 0), m(1, 0, 1)])
        parts = irreducible_decomposition(self.vee, I)
        for mu in [m(2, 0, 0), m(1, 1, 0), m(1, 0, 1), m(0, 1, 1)]:
            self.assertEqual(decomposition_contains(parts, mu),
                             mu in I.expansion)

    def test_prune(self):
        small = IrreducibleComponent((1, INF))
        large = IrreducibleComponent((1, 2))
        self.assertEqual(prune_irreducible([large, small, small]), (small,))


class TestBorelSplit(unittest.TestCase):
    """Test cases for the last-variable split of Borel ideals."""

    def test_split_of_principal(self):
        I = principal(chain_poset(2), m(1, 1)).expansion
        first, second = borel_irreducible_split(I)
        self.assertEqual(first.generators, (m(2, 0), m(1, 1), m(0, 2)))
        self.assertEqual(second.generators, (m(1, 0),))

    def test_split_with_generators_free_of_last_variable(self):
        I = minimalize([m(2, 0), m(1, 2)])
        first, second = borel_irreducible_split(I)
        self.assertEqual(first.generators, (m(2, 0), m(1, 2), m(0, 3)))
        self.assertEqual(second.generators, (m(1, 0),))

    def test_mixed_degree_split_rejected(self):
        S = q_closure(chain_poset(3), [m(1, 0, 1), m(0, 2, 1)]).expansion
        self.assertEqual(S.generators, (
            m(2, 0, 0), m(1, 1, 0), m(1, 0, 1), m(0, 3, 0), m(0, 2, 1)
        ))
        with self.assertRaises(MixedDegreeError) as ctx:
            borel_irreducible_split(S)
        self.assertEqual(ctx.exception.degrees, (2, 3))

    def test_pure_power_of_last_variable_rejected(self):
        with self.assertRaises(PreconditionError):
            borel_irreducible_split(minimalize([m(1, 0), m(0, 3)]))

    def test_preconditions(self):
        with self.assertRaises(NotQBorelError):
            borel_irreducible_split(minimalize([m(0, 1)]))
        with self.assertRaises(PreconditionError):
            borel_irreducible_split(minimalize([m(1, 0)]))
        with self.assertRaises(PreconditionError):
            borel_irreducible_split(minimalize([m(1, 0), m(0, 1)]))


if __name__ == '__main__':
    unittest.main()
