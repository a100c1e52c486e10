import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from moranslice.carpet import OMEGA_0, OMEGA_1, MoranSequence, Rect, cell_rect, iter_words
from moranslice.errors import BudgetExceeded, InvalidDigit, OutOfRange, ParseError
from moranslice.slicing import (GreedyExpansion, Slope, clip_line, count_oracle, count_oracle_sequence,
                                count_via_interval_maps, expansion_value, gamma_lattice, greedy_expand,
                                interval_map_forward, interval_map_inverse, line_cell_intersects, parse_rational,
                                truncation_bound, words_meeting_line)

from conftest import seq, slope

F = Fraction
SLOPES = ["0/1", "1/1", "1/2", "2/3", "3/2"]
SIGMAS = ["(0)", "(1)", "(01)", "11(0)"]


def brute_force_count(a, sigma, sl, n):
    """Every word of length n, no pruning."""
    return sum(line_cell_intersects(cell_rect(w, sigma), sl, a) for w in iter_words(sigma, n))


@st.composite
def slopes(draw):
    N = draw(st.integers(1, 6))
    M = draw(st.integers(0, 6))
    assume(math.gcd(M, N) == 1)
    return Slope(M, N)


@st.composite
def intercepts(draw, sl):
    q = draw(st.integers(1, 300))
    lo, hi = sl.interval
    p = draw(st.integers(math.ceil(lo * q), math.floor(hi * q)))
    return F(p, q)


def test_parse_rational():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational("-1/2") == F(-1, 2)
    assert parse_rational("2") == 2
    for bad in ["1/0", "x", "1.5", "1/-2"]:
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_slope_guards():
    assert Slope.parse("1").N == 1
    with pytest.raises(ParseError, match="lowest terms"):
        Slope.parse("2/4")
    with pytest.raises(ParseError):
        Slope.parse("-1/2")
    with pytest.raises(ParseError):
        Slope(1, 0)


@pytest.mark.parametrize("tag,d,x,sl,expected", [
    (0, (0, 0), F(1, 2), "1/1", F(3, 2)),
    (0, (2, 0), F(-1, 2), "1/1", F(1, 2)),
    (1, (3, 3), F(0), "1/1", F(0)),
])
def test_interval_map_forward(tag, d, x, sl, expected):
    assert interval_map_forward(tag, d, x, slope(sl)) == expected


@pytest.mark.parametrize("tag,d,x,expected", [
    (0, (0, 0), F(3, 2), F(1, 2)),
    (0, (1, 0), F(1), F(0)),
    (1, (0, 3), F(-1), F(1, 2)),
])
def test_interval_map_inverse(tag, d, x, expected):
    assert interval_map_inverse(tag, d, x, Slope(1, 1)) == expected


def test_interval_map_rejects_digit():
    with pytest.raises(InvalidDigit):
        interval_map_forward(0, (1, 1), 0, Slope(1, 1))
    with pytest.raises(InvalidDigit):
        interval_map_inverse(0, (3, 0), 0, Slope(1, 1))


@given(slopes(), st.fractions(), st.sampled_from([(0, d) for d in OMEGA_0] + [(1, d) for d in OMEGA_1]))
def test_inverse_law(sl, x, td):
    t, d = td
    assert interval_map_inverse(t, d, interval_map_forward(t, d, x, sl), sl) == x
    assert interval_map_forward(t, d, interval_map_inverse(t, d, x, sl), sl) == x


@pytest.mark.parametrize("sl", ["0/1", "1/1", "1/2", "2/3", "3/2", "5/1"])
@pytest.mark.parametrize("tag", [0, 1])
def test_preimages_cover_interval(sl, tag):
    sl = slope(sl)
    lo, hi = sl.interval
    pieces = sorted((interval_map_inverse(tag, d, lo, sl), interval_map_inverse(tag, d, hi, sl))
                    for d in (OMEGA_0 if tag == 0 else OMEGA_1))
    assert all(lo <= p <= q <= hi for p, q in pieces)
    reach = lo
    for p, q in pieces:
        assert p <= reach
        reach = max(reach, q)
    assert reach == hi


def test_greedy_examples():
    sl = Slope(1, 1)
    e = greedy_expand(-1, seq("(01)"), sl, 5)
    assert (e.k, e.digits, e.boundary_flag) == (1, (0, 0, 0, 0, 0), True)
    e = greedy_expand(F(1, 2), seq("(0)"), sl, 4)
    assert (e.k, e.digits, e.boundary_flag) == (2, (1, 1, 1, 1), False)
    e = greedy_expand(F(1, 4), seq("(10)"), sl, 2)
    assert (e.k, e.digits, e.boundary_flag) == (2, (1, 0), True)


def test_greedy_right_endpoint():
    e = greedy_expand(1, seq("(01)"), Slope(2, 3), 4)
    assert e.k == 5 and e.digits == (2, 3, 2, 3) and e.boundary_flag
    assert expansion_value(e, seq("(01)"), Slope(2, 3)) <= 1


def test_greedy_out_of_range():
    with pytest.raises(OutOfRange):
        greedy_expand(F(3, 2), seq("(0)"), Slope(1, 1), 3)
    with pytest.raises(OutOfRange):
        greedy_expand(F(-3, 2), seq("(0)"), Slope(1, 1), 3)


def test_expansion_value_examples():
    sl = Slope(1, 1)
    assert expansion_value(GreedyExpansion(1, (0, 0, 0), False), seq("(0)"), sl) == -1
    assert expansion_value(GreedyExpansion(2, (1, 1), False), seq("(0)"), sl) == F(4, 9)
    assert expansion_value(GreedyExpansion(2, (1, 0), True), seq("(10)"), sl) == F(1, 4)
    with pytest.raises(InvalidDigit):
        expansion_value(GreedyExpansion(2, (3,), False), seq("(0)"), sl)


@settings(max_examples=200)
@given(st.data(), slopes(), st.sampled_from(SIGMAS + ["(10)", "0(1)"]), st.integers(0, 12))
def test_greedy_round_trip(data, sl, sig, n):
    s = seq(sig)
    a = data.draw(intercepts(sl))
    e = greedy_expand(a, s, sl, n)
    v = expansion_value(e, s, sl)
    assert v <= a
    assert a - v <= truncation_bound(s, sl, n)
    for t, xi in zip(s.tags(n), e.digits):
        assert 0 <= xi < (3 if t == 0 else 4)
    n0, n1 = s.counts(n)
    assert e.boundary_flag == ((sl.N * a * 3**n0 * 4**n1).denominator == 1)


@pytest.mark.parametrize("a,sl,points,i0", [
    (F(1, 2), "1/1", (F(-1, 2), F(1, 2)), 2),
    (F(-1, 4), "1/1", (F(-1, 4), F(3, 4)), 1),
    (F(1, 4), "1/2", (F(-1, 4), F(1, 4), F(3, 4)), 2),
])
def test_gamma_lattice_examples(a, sl, points, i0):
    g = gamma_lattice(a, slope(sl))
    assert g.points == points and g.i0 == i0


@given(st.data(), slopes())
def test_gamma_lattice_properties(data, sl):
    a = data.draw(intercepts(sl))
    g = gamma_lattice(a, sl)
    assert len(g.points) == sl.order
    assert g.points[g.i0 - 1] == a
    assert g.i0 == greedy_expand(a, seq("(0)"), sl, 1).k
    for i, p in enumerate(g.points, start=1):
        lo, hi = sl.lattice_interval(i)
        assert lo <= p <= hi and sl.contains(p)
        assert (p - a) * sl.N == i - g.i0
    # intercepts congruent mod 1/N share the lattice
    shifted = a + F(1, sl.N)
    if sl.contains(shifted) and shifted != 1:
        assert gamma_lattice(shifted, sl).points == g.points


def test_line_cell_intersects_examples():
    unit = Rect(F(0), F(1), F(0), F(1))
    assert line_cell_intersects(unit, Slope(1, 1), 0)
    assert line_cell_intersects(unit, Slope(1, 1), 1)
    assert not line_cell_intersects(Rect(F(0), F(1, 3), F(0), F(1, 3)), Slope(1, 1), F(1, 2))


def test_count_oracle_examples():
    s, sl = seq("(0)"), Slope(1, 1)
    assert count_oracle(F(1, 3), s, sl, 0) == 1
    assert count_oracle(F(1, 2), s, sl, 1) == 3
    assert {w[0] for w in words_meeting_line(F(1, 2), s, sl, 1)} == {(0, 1), (0, 2), (1, 2)}
    assert count_oracle(F(1, 2), s, sl, 2) == 9
    assert brute_force_count(F(1, 2), s, sl, 2) == 9


def test_count_oracle_out_of_range():
    with pytest.raises(OutOfRange):
        count_oracle(F(2), seq("(0)"), Slope(1, 1), 2)


def test_count_oracle_budget():
    s, sl = seq("(1)"), Slope(1, 1)
    counts = count_oracle_sequence(F(1, 3), s, sl, 6, cell_budget=100)
    assert len(counts) < 7
    assert counts == count_oracle_sequence(F(1, 3), s, sl, 6)[:len(counts)]
    with pytest.raises(BudgetExceeded):
        count_oracle(F(1, 3), s, sl, 6, cell_budget=100)


@pytest.mark.parametrize("sl", SLOPES)
@pytest.mark.parametrize("sig", SIGMAS)
def test_oracle_matches_brute_force(sl, sig, backend):
    sl, s = slope(sl), seq(sig)
    rng = random.Random(7)
    lo, hi = sl.interval
    samples = [lo, hi, F(0), F(1, 2)] + [F(rng.randint(math.ceil(lo * 36), math.floor(hi * 36)), 36)
                                         for _ in range(4)]
    for a in samples:
        seq_counts = count_oracle_sequence(a, s, sl, 3, backend=backend)
        assert seq_counts == [brute_force_count(a, s, sl, n) for n in range(4)]


@settings(max_examples=150, deadline=None)
@given(st.data(), slopes(), st.sampled_from(SIGMAS + ["(10)"]))
def test_oracle_matches_interval_maps(data, sl, sig):
    """The closed-interval reduction holds for every intercept, boundary ones included."""
    s = seq(sig)
    a = data.draw(intercepts(sl))
    counts = count_oracle_sequence(a, s, sl, 5)
    assert counts == [count_via_interval_maps(a, s, sl, n) for n in range(6)]


@settings(max_examples=100, deadline=None)
@given(st.data(), slopes(), st.sampled_from(SIGMAS))
def test_oracle_growth(data, sl, sig):
    s = seq(sig)
    a = data.draw(intercepts(sl))
    c = count_oracle_sequence(a, s, sl, 5)
    assert all(c[n + 1] <= 12 * c[n] for n in range(5))
    assert all(x >= 1 for x in c)


def test_clip_line():
    assert clip_line(Slope(1, 1), F(1, 2)) == ((0, F(1, 2)), (F(1, 2), 1))
    assert clip_line(Slope(0, 1), F(1, 3)) == ((0, F(1, 3)), (1, F(1, 3)))
    assert clip_line(Slope(1, 1), -1) == ((1, 0), (1, 0))
    assert clip_line(Slope(1, 1), 2) is None
