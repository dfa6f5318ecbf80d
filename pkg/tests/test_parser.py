"""Constraint-string grammar: precedence, round-trips, error offsets."""

import numpy as np
import pytest

from manpower import (
    And,
    Atom,
    ConfigurationError,
    Not,
    Or,
    ParseError,
    atom,
    format_expr,
    parse_constraint_string,
)

K1, K2, K3 = atom("k1"), atom("k2"), atom("k3")


class TestPrecedence:
    def test_and_binds_tighter_than_or(self):
        assert parse_constraint_string("k1|k2&k3") == Or(K1, And(K2, K3))
        assert parse_constraint_string("k1&k2|k3") == Or(And(K1, K2), K3)

    def test_not_binds_tightest(self):
        assert parse_constraint_string("!k1&k2") == And(Not(K1), K2)
        assert parse_constraint_string("!k1|k2") == Or(Not(K1), K2)

    def test_parentheses_override(self):
        assert parse_constraint_string("k1&(k2|k3)") == And(K1, Or(K2, K3))
        assert parse_constraint_string("!(k1&k2)") == Not(And(K1, K2))

    def test_left_associativity(self):
        assert parse_constraint_string("k1&k2&k3") == And(And(K1, K2), K3)
        assert parse_constraint_string("k1|k2|k3") == Or(Or(K1, K2), K3)

    def test_double_negation(self):
        assert parse_constraint_string("!!k1") == Not(Not(K1))

    def test_mixed_operator_tree_shape(self):
        k5 = atom("k5")
        assert parse_constraint_string("k1&k2&!k5|k3") == Or(
            And(And(K1, K2), Not(k5)), K3
        )

    def test_whitespace_ignored(self):
        assert parse_constraint_string(" k1 &  ( k2 | ! k3 ) ") == And(K1, Or(K2, Not(K3)))

    def test_all_atom_codes(self):
        for code in ("k1", "k2", "k3", "k4", "k5", "k6", "y1", "y2", "o1", "o2"):
            assert parse_constraint_string(code) == atom(code)


class TestErrors:
    def test_offset_of_stray_operator(self):
        with pytest.raises(ParseError) as err:
            parse_constraint_string("k1&&k2")
        assert err.value.offset == 3
        assert "(offset 3)" in str(err.value)

    def test_unknown_atom_offset(self):
        with pytest.raises(ParseError) as err:
            parse_constraint_string("k1&k9")
        assert err.value.offset == 3

    def test_missing_close_paren(self):
        with pytest.raises(ParseError) as err:
            parse_constraint_string("(k1|k2")
        assert err.value.offset == 6

    def test_trailing_garbage(self):
        with pytest.raises(ParseError) as err:
            parse_constraint_string("k1 k2")
        assert err.value.offset == 3

    def test_empty_input(self):
        with pytest.raises(ParseError) as err:
            parse_constraint_string("")
        assert err.value.offset == 0

    def test_dangling_not(self):
        with pytest.raises(ParseError):
            parse_constraint_string("k1&!")


class TestFormatting:
    def test_compact_canonical_output(self):
        assert format_expr(Or(And(K1, K2), K3)) == "k1&k2|k3"
        assert format_expr(And(K1, Or(K2, K3))) == "k1&(k2|k3)"
        assert format_expr(Not(And(K1, K2))) == "!(k1&k2)"
        assert format_expr(Not(Not(K1))) == "!!k1"
        # right-nested same-precedence trees keep their shape
        assert format_expr(And(K1, And(K2, K3))) == "k1&(k2&k3)"
        assert format_expr(Or(K1, Or(K2, K3))) == "k1|(k2|k3)"

    def test_round_trip_random_trees(self):
        rng = np.random.Generator(np.random.PCG64(99))
        codes = ("k1", "k2", "k3", "k4", "k5", "k6", "y1", "y2", "o1", "o2")

        def random_tree(depth):
            if depth == 0 or rng.random() < 0.3:
                return atom(codes[int(rng.integers(len(codes)))])
            pick = rng.random()
            if pick < 0.4:
                return And(random_tree(depth - 1), random_tree(depth - 1))
            if pick < 0.8:
                return Or(random_tree(depth - 1), random_tree(depth - 1))
            return Not(random_tree(depth - 1))

        for _ in range(500):
            tree = random_tree(int(rng.integers(1, 5)))
            assert parse_constraint_string(format_expr(tree)) == tree

    def test_parse_format_fixpoint(self):
        for text in ("k1&k2|!k5", "!(k1|k2)&k3", "k1&(k2|k3)&!k4"):
            once = format_expr(parse_constraint_string(text))
            assert format_expr(parse_constraint_string(once)) == once

    def test_parameterized_atoms_have_no_string_form(self):
        with pytest.raises(ConfigurationError):
            format_expr(atom("k2", jobs=("a",)))
