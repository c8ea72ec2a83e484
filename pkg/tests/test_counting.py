import pytest

from basscensus import counting as ct
from basscensus.errors import UnsupportedError, UsageError


def test_fixture_rows_sum_to_totals():
    for p in ct.PRIMES:
        s = 2 + sum(ct.WEIGHTS[c] * v for c, v in ct.FIXTURES[p].items())
        assert s == ct.FIXTURE_TOTALS[p]


@pytest.mark.parametrize("case,p,value", [((3,), 2, 3), ((5,), 2, 2), ((5,), 3, 2),
                                          ((4,), 3, 3), ((3,), 5, 3), ((4,), 5, 1),
                                          ((2, 3), 2, 2), ((2, 3), 5, 2), ((3, 6), 5, 8)])
def test_extended_engine_matches_table(case, p, value):
    res = ct.count(case, p, "extended")
    assert res.value == value == ct.FIXTURES[p][case]


def test_out_of_scope_reads_fixture():
    with pytest.raises(UsageError):
        ct.count((3,), 2, "computed")
    res = ct.count((3,), 2)
    assert res.source == ct.FIXTURE_TAG and res.value == 3
    assert "row p=2" in res.trace[0]


def test_extended_engine_limits():
    with pytest.raises(UnsupportedError):
        ct.count((8,), 3, "extended")


@pytest.mark.parametrize("case,p", ct.computed_cases())
def test_scope_agrees_with_fixtures(case, p):
    res = ct.count(case, p)
    assert res.source == "computed"
    assert res.value == ct.FIXTURES[p][case]
    if all(g.h == 1 for g in res.genera):
        assert res.value == len(res.classes)


def test_aliases():
    res = ct.count(6, 3)
    assert res.value == ct.count(3, 3).value
    assert "o(6,) = o(3,)" in res.trace[0]
    assert ct.count(10, 5).value == ct.count(5, 5).value


def test_missing_fixture_named():
    from basscensus.errors import InternalConsistencyError
    with pytest.raises(InternalConsistencyError, match=r"\(7,\)"):
        ct.fixture_result(7, 2)


def test_o1_o2_are_computed():
    for p in ct.PRIMES:
        assert ct.count(1, p).value == ct.count(2, p).value == 1
    with pytest.raises(UsageError):
        ct.fixture_result(1, 2)


def test_totals_and_sources():
    row = ct.ssp2_total(3)
    assert row.total == 45
    assert row.row == ct._ROWS[3][0]
    assert {r.source for r in row.results.values()} <= {"computed", ct.FIXTURE_TAG}


def test_fixture_only_totals():
    assert ct.ssp2_total(5, source="fixture").total == 47


def test_trace_records_steps():
    res = ct.count((2, 6), 3)
    assert res.classes == ["Delta (ambient)", "Gamma (a = c)"]
    assert [g.h for g in res.genera] == [1, 2]
    assert any("census" in t for t in res.trace)


def test_bad_prime():
    with pytest.raises(UsageError):
        ct.count(3, 7)
