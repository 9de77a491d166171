from fractions import Fraction

import pytest

import slowent


def test_param_round_trip():
    golden = slowent.Param.parse("[0;(1)]", 10)
    assert golden.proxy == Fraction(55, 89)
    assert golden.error_bound > 0
    assert abs(float(golden.proxy) - 0.6180339887) < golden.error_bound
    assert slowent.Param.exact("2/5").proxy == Fraction(2, 5)
    assert slowent.Param.exact(Fraction(3, 7)).is_exact


def test_convergents_are_fibonacci():
    assert slowent.convergents("[0;(1)]", 6) == [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8), (8, 13)]


def test_gap_structure_matches_sorted_gaps():
    theta = slowent.Param.for_horizon("[0;(1)]", 1000)
    for n in (1, 4, 17, 250):
        g = slowent.gap_structure(theta, n)
        parts = [g["small"], g["middle"], g["large"]]
        assert sum(c for _, c in parts) == n + 1
        assert sum(length * c for length, c in parts) == 1
        expected = {}
        for length, count in parts:
            if count:
                expected[length] = expected.get(length, 0) + count
        assert dict(slowent.sorted_gaps(theta, n)) == expected


def test_sturmian_complexity():
    theta = slowent.Param.for_horizon("[0;(2)]", 5000)
    assert [slowent.complexity_exact(theta, n) for n in range(1, 30)] == list(range(2, 31))
    word = slowent.sturmian_word(theta, Fraction(0), 3000)
    assert slowent.complexity_windowed(word, 2, 20) == 21


def test_interval_exchange():
    g = slowent.IntervalExchange.symmetric([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])
    assert g(Fraction(0)) == Fraction(1, 2)
    assert g.inverse()(g(Fraction(1, 7))) == Fraction(1, 7)
    t = slowent.IntervalExchange.from_alpha_xi(slowent.Param.for_horizon("[0;(1)]", 10**6),
                                               slowent.Param.exact("2/5"))
    atoms = t.refine(50)
    assert len(atoms) == 2 * 50 + 1
    assert sum(atoms) == 1
    assert t.idoc(50)["holds"]
    with pytest.raises(ValueError):
        slowent.IntervalExchange([Fraction(1, 2)], [1], [2])


def test_skew_covering_runs():
    grid = slowent.geometric_grid(8, 400, 1.2)
    out = slowent.skew_covering(Fraction(2, 5), grid, 200, 3)
    assert len(out["counts"]) == len(grid)
    assert out == slowent.skew_covering(Fraction(2, 5), grid, 200, 3)
    assert "exponent" in out


def test_precision_error_surfaces():
    shallow = slowent.Param.parse("[0;(1)]", 3)
    with pytest.raises(slowent.PrecisionError):
        slowent.gap_structure(shallow, 500)
