"""Unit tests for session parsing and evaluation."""
import os
import sys
import unittest

# Add the parent directory to the path so we can import the src module
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.errors import SessionParseError, UndeclaredNameError
from src.monomials import Monomial, MonomialPrime
from src.poset import build_poset, chain_poset
from src.session import format_session, parse_session, tokenize

DATASETS = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "datasets"
)


def m(*exps):
    return Monomial(tuple(exps))


def read_dataset(name):
    with open(os.path.join(DATASETS, name), "r", encoding="utf-8") as f:
        return f.read()


class TestTokenizer(unittest.TestCase):
    """Test cases for the session tokenizer."""

    def test_positions(self):
        tokens = tokenize("vars a b;\n# comment\nideal I = (a);")
        ideal = next(t for t in tokens if t.text == "ideal")
        self.assertEqual((ideal.line, ideal.column), (3, 1))
        self.assertEqual(tokens[-1].kind, "eof")

    def test_bad_character(self):
        with self.assertRaises(SessionParseError) as ctx:
            tokenize("vars a b;\n@")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 1))


class TestParser(unittest.TestCase):
    """Test cases for declarations and ideal expressions."""

    def test_six_variable_session(self):
        session = parse_session(read_dataset("section4.qbs"))
        self.assertEqual(session.nvars, 6)
        P = session.posets["P"]
        self.assertEqual(
            P, build_poset(6, [(0, 3), (3, 5), (2, 5), (1, 4), (2, 4)])
        )
        value = session.ideals["I"]
        self.assertEqual(value.q_generators, (m(0, 0, 0, 1, 1, 1),))
        self.assertTrue(value.is_principal_q_borel())
        self.assertEqual([c.name for c in session.commands],
                         ["assprimes", "primary", "factor", "codim", "cm"])

    def test_chain_shorthand_and_monomial_forms(self):
        session = parse_session(
            "vars a b c;\nposet C = chain;\n"
            "ideal A = Q[C](b*c);\nideal B = Q(bc);\nideal D = (a2b, 1*c);\n"
        )
        self.assertEqual(session.posets["C"], chain_poset(3))
        self.assertEqual(session.ideals["A"].ideal, session.ideals["B"].ideal)
        self.assertEqual(session.ideals["D"].ideal.generators,
                         (m(0, 0, 1), m(2, 1, 0)))

    def test_prime_products_keep_their_factorization(self):
        session = parse_session(read_dataset("primes.qbs"))
        F = session.ideals["F"].factorization
        self.assertEqual(F.as_dict(), {
            MonomialPrime.of(4, [0, 1]): 2,
            MonomialPrime.of(4, [1, 2]): 1,
            MonomialPrime.of(4, [2, 3]): 1,
        })
        D = session.ideals["D"].intersection
        self.assertEqual(D, {
            MonomialPrime.of(4, [0, 1]): 1,
            MonomialPrime.of(4, [1, 2]): 2,
            MonomialPrime.of(4, [0, 1, 2, 3]): 3,
        })
        self.assertIsNone(session.ideals["T"].factorization)

    def test_intersection_over_a_poset(self):
        session = parse_session(read_dataset("vee.qbs"))
        J = session.ideals["J"]
        self.assertEqual(set(J.q_generators), {m(1, 1, 1), m(2, 0, 0)})

    def test_command_options(self):
        session = parse_session(read_dataset("borel.qbs"))
        truncated = session.commands[3]
        self.assertEqual(truncated.args, ("truncated", "S", "d=3", "cancel"))
        self.assertEqual(truncated.line, 8)

    def test_undeclared_variable(self):
        with self.assertRaises(UndeclaredNameError) as ctx:
            parse_session("vars a b;\nideal I = (a, z);\n")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 15))

    def test_undeclared_ideal(self):
        with self.assertRaises(UndeclaredNameError):
            parse_session("vars a b;\nideal I = J + (a);\n")

    def test_poset_violating_labels(self):
        with self.assertRaisesRegex(SessionParseError, "b < a"):
            parse_session("vars a b;\nposet P { b < a }\n")

    def test_duplicate_names(self):
        with self.assertRaisesRegex(SessionParseError, "already declared"):
            parse_session("vars a b;\nideal I = (a);\nideal I = (b);\n")
        with self.assertRaisesRegex(SessionParseError, "reserved"):
            parse_session("vars a Q;\n")

    def test_zero_ideal_exponent_has_a_position(self):
        with self.assertRaisesRegex(SessionParseError, "positive") as ctx:
            parse_session("vars a b;\nideal I = (a)^0;\n")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 15))

    def test_missing_semicolon(self):
        with self.assertRaises(SessionParseError):
            parse_session("vars a b;\nideal I = (a)\ncmd close I;\n")


class TestFormatting(unittest.TestCase):
    """Test cases for writing sessions back out."""

    def test_round_trip(self):
        for name in ("section4.qbs", "vee.qbs", "borel.qbs", "primes.qbs"):
            session = parse_session(read_dataset(name))
            again = parse_session(format_session(session))
            self.assertEqual(again.posets, session.posets)
            self.assertEqual(
                {k: v.ideal for k, v in again.ideals.items()},
                {k: v.ideal for k, v in session.ideals.items()},
            )
            self.assertEqual(
                [(c.name, c.args) for c in again.commands],
                [(c.name, c.args) for c in session.commands],
            )


if __name__ == '__main__':
    unittest.main()
