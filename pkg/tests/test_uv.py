from __future__ import annotations

from fractions import Fraction

import pytest

from uvinfo.errors import EmptyConditionError, InputError, UnknownVariableError
from uvinfo.uv import (
    build_ensemble,
    conditional_family,
    conditional_range,
    ensemble_from_json,
    ensemble_to_json,
    is_markov_chain,
    is_unrelated,
    joint_range,
    marginal_range,
    normalize_value,
    product_ensemble,
    sorted_values,
)


def staircase():
    return build_ensemble([{"X": 0, "Y": 0}, {"X": 0, "Y": 1}, {"X": 1, "Y": 1}])


class TestValues:
    def test_rational_strings_become_fractions(self):
        assert normalize_value("3/4") == Fraction(3, 4)
        assert normalize_value("4/2") == 2
        assert isinstance(normalize_value("4/2"), int)

    def test_lists_become_tuples(self):
        assert normalize_value([1, ["a", "1/2"]]) == (1, ("a", Fraction(1, 2)))

    @pytest.mark.parametrize("bad", [0.5, True, None, {"a": 1}])
    def test_rejects_inexact(self, bad):
        with pytest.raises(InputError):
            normalize_value(bad)

    def test_mixed_order(self):
        assert sorted_values(["b", (0,), 2, Fraction(1, 2), "a"]) == [Fraction(1, 2), 2, "a", "b", (0,)]


class TestRanges:
    def test_marginal_and_joint(self):
        E = staircase()
        assert marginal_range(E, "X") == {0, 1}
        assert joint_range(E, ["X", "Y"]) == {(0, 0), (0, 1), (1, 1)}

    def test_conditional(self):
        E = staircase()
        assert conditional_range(E, "X", {"Y": 1}) == {0, 1}
        assert conditional_range(E, "X", {"Y": 0}) == {0}

    def test_unrealized_condition(self):
        with pytest.raises(EmptyConditionError):
            conditional_range(staircase(), "X", {"Y": 7})

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            marginal_range(staircase(), "Q")

    def test_conditional_family_labels(self):
        F = conditional_family(staircase(), "Y", "X")
        assert F.labels == [0, 1]
        assert F.sets == [frozenset({0, 1}), frozenset({1})]

    def test_tuple_variable(self):
        E = product_ensemble({"A": [0, 1], "B": ["u", "v"]})
        assert marginal_range(E, ["A", "B"]) == {(0, "u"), (0, "v"), (1, "u"), (1, "v")}


class TestPredicates:
    def test_staircase_is_related(self):
        assert not is_unrelated(staircase(), ["X", "Y"])

    def test_product_is_unrelated(self):
        assert is_unrelated(product_ensemble({"A": [0, 1, 2], "B": [5, 6]}), ["A", "B"])

    def test_conditional_unrelatedness(self):
        rows = [{"Y": y, "X": x, "Z": z} for y in (0, 1) for x in (y, y + 1) for z in (0, 1)]
        E = build_ensemble(rows)
        assert is_unrelated(E, ["X", "Z"], given="Y")
        assert is_markov_chain(E, "X", "Y", "Z")

    def test_markov_fails_when_z_reveals_x(self):
        E = build_ensemble([{"X": x, "Y": 0, "Z": x} for x in (0, 1)])
        assert not is_markov_chain(E, "X", "Y", "Z")

    def test_needs_two_variables(self):
        with pytest.raises(InputError):
            is_unrelated(staircase(), ["X"])


class TestJson:
    def test_round_trip_is_bit_exact(self):
        text = '{"variables":["X","Y"],"samples":[[0,"1/3"],["a",[1,"2/5"]]]}'
        E = ensemble_from_json(text)
        assert ensemble_to_json(E) == text
        assert ensemble_from_json(ensemble_to_json(E)) == E

    def test_rejects_floats(self):
        with pytest.raises(InputError):
            ensemble_from_json('{"variables":["X"],"samples":[[0.5]]}')

    @pytest.mark.parametrize(
        "text",
        ["not json", '{"variables":["X"]}', '{"variables":["X","Y"],"samples":[[1]]}', '{"variables":["X"],"samples":[]}'],
    )
    def test_malformed(self, text):
        with pytest.raises(InputError):
            ensemble_from_json(text)

    def test_duplicate_names(self):
        with pytest.raises(InputError):
            ensemble_from_json('{"variables":["X","X"],"samples":[[1,2]]}')
