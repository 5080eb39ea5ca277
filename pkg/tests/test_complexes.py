"""Unit tests for free complexes, verification and the Koszul oracle."""
import os
import sys
import unittest
from fractions import Fraction

# Add the parent directory to the path so we can import the src module
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.complexes import (
    BasisSymbol,
    BettiTable,
    ComplexBuilder,
    cut_complex,
    koszul_betti,
    lcm_closure,
    minimize_complex,
    upper_koszul_faces,
    verify_complex,
)
from src.errors import ComplexConstructionError, PreconditionError
from src.monomials import Monomial, minimalize
from src.utils.linalg import rank, solve


def m(*exps):
    return Monomial(tuple(exps))


def koszul_on_two(ideal=True):
    """Resolution 0 <- (a, b) <- S(-ab) of the ideal (a, b)."""
    builder = ComplexBuilder(2)
    a = builder.add_symbol(BasisSymbol(("a",), 0, m(1, 0)))
    b = builder.add_symbol(BasisSymbol(("b",), 0, m(0, 1)))
    ab = builder.add_symbol(BasisSymbol(("ab",), 1, m(1, 1)))
    builder.add_entry(1, a, ab, Fraction(1))
    builder.add_entry(1, b, ab, Fraction(-1))
    I = minimalize([m(1, 0), m(0, 1)]) if ideal else None
    return builder.build(I)


class TestLinearAlgebra(unittest.TestCase):
    """Test cases for the exact rational helpers."""

    def test_rank(self):
        rows = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
        self.assertEqual(rank(rows, 2), 1)
        self.assertEqual(rank([], 3), 0)

    def test_solve(self):
        rows = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(2)]]
        self.assertEqual(solve(rows, 2, [Fraction(3), Fraction(1)]),
                         [Fraction(5, 2), Fraction(1, 2)])

    def test_inconsistent_system(self):
        rows = [[Fraction(1)], [Fraction(1)]]
        self.assertIsNone(solve(rows, 1, [Fraction(1), Fraction(2)]))
        self.assertIsNone(solve([[Fraction(0)]], 0, [Fraction(1)]))


class TestFreeComplex(unittest.TestCase):
    """Test cases for complex construction and inspection."""

    def test_ranks_and_betti(self):
        F = koszul_on_two()
        self.assertEqual(F.ranks(), [2, 1])
        table = F.betti_table()
        self.assertEqual(table.get(1, m(1, 1)), 1)
        self.assertEqual(table.totals(), [2, 1])
        self.assertEqual(table.to_dict(), {"0": {"1": 2}, "1": {"2": 1}})
        self.assertEqual(table.projective_dimension(), 2)
        self.assertTrue(table.is_linear())

    def test_entry_monomial(self):
        F = koszul_on_two()
        self.assertEqual(F.entry_monomial(1, 0, 0), m(0, 1))
        self.assertEqual(F.column(1, 0),
                         {0: Fraction(1), 1: Fraction(-1)})

    def test_inhomogeneous_entry_rejected(self):
        builder = ComplexBuilder(2)
        row = builder.add_symbol(BasisSymbol(("a",), 0, m(1, 0)))
        col = builder.add_symbol(BasisSymbol(("b",), 1, m(0, 1)))
        with self.assertRaises(ComplexConstructionError):
            builder.add_entry(1, row, col, Fraction(1))

    def test_to_dict(self):
        data = koszul_on_two().to_dict()
        self.assertEqual(data["levels"][1][0]["multidegree"], "a*b")
        self.assertEqual(data["differentials"],
                         [[1, 0, 0, "1"], [1, 1, 0, "-1"]])

    def test_cut(self):
        F = cut_complex(koszul_on_two(), 1)
        self.assertEqual(F.ranks(), [2])
        self.assertEqual(F.degree_cap, 1)

    def test_betti_tables_ignore_zero_entries(self):
        self.assertEqual(BettiTable({(0, m(1, 0)): 1, (1, m(1, 1)): 0}),
                         BettiTable({(0, m(1, 0)): 1}))


class TestVerification(unittest.TestCase):
    """Test cases for d2 and exactness certificates."""

    def test_exact_complex(self):
        F = koszul_on_two()
        self.assertTrue(verify_complex(F, "d2").ok)
        certificate = verify_complex(F, "exactness", 4)
        self.assertTrue(certificate.ok)
        self.assertGreater(certificate.checked, 0)

    def test_missing_syzygy_detected(self):
        builder = ComplexBuilder(2)
        builder.add_symbol(BasisSymbol(("a",), 0, m(1, 0)))
        builder.add_symbol(BasisSymbol(("b",), 0, m(0, 1)))
        F = builder.build(minimalize([m(1, 0), m(0, 1)]))
        certificate = verify_complex(F, "exactness", 3)
        self.assertFalse(certificate.ok)
        self.assertEqual(certificate.failure, (0, m(1, 1), 2))

    def test_nonzero_square_detected(self):
        builder = ComplexBuilder(1)
        x = builder.add_symbol(BasisSymbol(("x",), 0, m(1)))
        y = builder.add_symbol(BasisSymbol(("y",), 1, m(2)))
        z = builder.add_symbol(BasisSymbol(("z",), 2, m(3)))
        builder.add_entry(1, x, y, Fraction(1))
        builder.add_entry(2, y, z, Fraction(1))
        self.assertFalse(verify_complex(builder.build(), "d2").ok)

    def test_column_outside_the_kernel_detected(self):
        # b * e_a alone maps to ab, not zero
        builder = ComplexBuilder(2)
        a = builder.add_symbol(BasisSymbol(("a",), 0, m(1, 0)))
        builder.add_symbol(BasisSymbol(("b",), 0, m(0, 1)))
        ab = builder.add_symbol(BasisSymbol(("ab",), 1, m(1, 1)))
        builder.add_entry(1, a, ab, Fraction(1))
        F = builder.build(minimalize([m(1, 0), m(0, 1)]))
        certificate = verify_complex(F, "d2")
        self.assertFalse(certificate.ok)
        self.assertEqual(certificate.failure, (1, m(1, 1), 1))
        self.assertFalse(verify_complex(F, "exactness", 3).ok)

    def test_exactness_needs_ideal(self):
        with self.assertRaises(PreconditionError):
            verify_complex(koszul_on_two(ideal=False), "exactness", 3)

    def test_unknown_mode(self):
        with self.assertRaises(PreconditionError):
            verify_complex(koszul_on_two(), "homotopy")


class TestKoszulOracle(unittest.TestCase):
    """Test cases for Betti numbers from upper Koszul complexes."""

    def test_two_variables(self):
        table = koszul_betti(minimalize([m(1, 0), m(0, 1)]))
        self.assertEqual(table, koszul_on_two().betti_table())

    def test_y_closure_corner(self):
        I = minimalize([m(2, 0, 0), m(1, 1, 0), m(1, 0, 1), m(0, 1, 1)])
        self.assertEqual(upper_koszul_faces(I, m(1, 1, 1)),
                         [(), (0,), (1,), (2,)])
        self.assertEqual(koszul_betti(I).get(1, m(1, 1, 1)), 2)

    def test_lcm_closure(self):
        I = minimalize([m(1, 0), m(0, 1)])
        self.assertEqual(lcm_closure(I, 2), [m(1, 0), m(0, 1), m(1, 1)])
        self.assertEqual(lcm_closure(I, 1), [m(1, 0), m(0, 1)])

    def test_bound_below_generators(self):
        with self.assertRaises(PreconditionError):
            koszul_betti(minimalize([m(3, 0)]), 2)


class TestMinimize(unittest.TestCase):
    """Test cases for cancelling unit entries."""

    def test_cancels_trivial_pair(self):
        builder = ComplexBuilder(2)
        a = builder.add_symbol(BasisSymbol(("a",), 0, m(1, 0)))
        b = builder.add_symbol(BasisSymbol(("b",), 0, m(0, 1)))
        ab = builder.add_symbol(BasisSymbol(("ab",), 0, m(1, 1)))
        syz = builder.add_symbol(BasisSymbol(("s",), 1, m(1, 1)))
        extra = builder.add_symbol(BasisSymbol(("t",), 1, m(1, 1)))
        builder.add_entry(1, a, syz, Fraction(1))
        builder.add_entry(1, b, syz, Fraction(-1))
        builder.add_entry(1, ab, extra, Fraction(1))
        builder.add_entry(1, a, extra, Fraction(-1))
        F = builder.build(minimalize([m(1, 0), m(0, 1)]))
        self.assertTrue(F.has_unit_entries())
        self.assertTrue(verify_complex(F, "exactness", 3).ok)
        G = minimize_complex(F)
        self.assertFalse(G.has_unit_entries())
        self.assertEqual(G.ranks(), [2, 1])
        self.assertTrue(verify_complex(G, "exactness", 3).ok)


if __name__ == '__main__':
    unittest.main()
