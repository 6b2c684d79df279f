import importlib
import math

import pytest
from hypothesis import given, strategies as st

from fibsic.fibonacci import (
    check_closed_forms,
    check_dimension_properties,
    check_identities,
    dimension,
    dimensions,
    fibonacci,
    fibonacci_table,
    lucas,
    lucas_table,
)

fib_mod = importlib.import_module("fibsic.fibonacci")


@pytest.mark.parametrize("n, expected", [(0, 0), (1, 1), (2, 1), (10, 55), (60, 1548008755920)])
def test_fibonacci_values(n, expected):
    assert fibonacci(n) == expected


@pytest.mark.parametrize("n, expected", [(0, 2), (1, 1), (2, 3), (8, 47)])
def test_lucas_values(n, expected):
    assert lucas(n) == expected


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        fibonacci(-1)
    with pytest.raises(ValueError):
        lucas(-3)


def test_tables_match_scalars():
    assert fibonacci_table(30) == [fibonacci(n) for n in range(31)]
    assert lucas_table(30) == [lucas(n) for n in range(31)]


def test_big_values_are_exact():
    # F_300 has 63 digits; a float would lose it
    assert fibonacci(300) == 222232244629420445529739893461909967206666939096499764990979600
    assert len(str(lucas(500))) == 105


@pytest.mark.parametrize("k, d", [(1, 4), (2, 8), (3, 19), (4, 48), (5, 124), (6, 323), (7, 844),
                                  (8, 2208), (9, 5779), (10, 15128)])
def test_dimension_sequence(k, d):
    e = dimension(k)
    assert e.d == d
    assert e.d_mod3 == d % 3
    assert (e.d + 1) * (e.d - 3) == 5 * e.squarefree_witness**2
    assert e.symmetry_order == 6 * k


def test_dimension_examples():
    assert dimension(4).d % 9 == 3
    e = dimension(2)
    assert (e.d + 1) * (e.d - 3) == 45 == 5 * 3**2
    assert e.squarefree_witness == fibonacci(4) == 3
    with pytest.raises(ValueError):
        dimension(0)
    assert [e.d for e in dimensions(3)] == [4, 8, 19]


def test_dimension_properties_to_20():
    report = check_dimension_properties(20)
    assert report.passed, report.lines()
    assert report.checks["recurrence"] == 20
    assert report.checks["d_4l_mod9"] == 5


def test_dimension_properties_precondition():
    with pytest.raises(ValueError):
        check_dimension_properties(3)


def test_identities_to_60():
    report = check_identities(60)
    assert report.passed, report.lines()
    assert report.checks["F_n divides F_kn"] == 360


def test_identity_small_cases():
    assert lucas(1) == fibonacci(0) + fibonacci(2) == 1
    assert lucas(4) ** 2 == 49 == 5 * fibonacci(4) ** 2 + 4


def test_identities_report_violations(monkeypatch):
    table = fibonacci_table

    def corrupted(n):
        out = table(n)
        out[12] += 1
        return out

    monkeypatch.setattr(fib_mod, "fibonacci_table", corrupted)
    report = check_identities(10)
    assert not report.passed
    failing = {check for check, _ in report.failures}
    assert "F_6n = F_2n (L_4n + 1)" in failing
    assert any("FAIL" in line for line in report.lines())


def test_closed_forms():
    report = check_closed_forms(40)
    assert report.passed, report.lines()


@given(st.integers(min_value=1, max_value=400))
def test_cassini(n):
    assert fibonacci(n - 1) * fibonacci(n + 1) - fibonacci(n) ** 2 == (-1) ** n


@given(st.integers(min_value=1, max_value=300), st.integers(min_value=1, max_value=300))
def test_gcd_property(m, n):
    assert math.gcd(fibonacci(m), fibonacci(n)) == fibonacci(math.gcd(m, n))


@given(st.integers(min_value=1, max_value=200))
def test_lucas_fibonacci_relations(n):
    assert lucas(n) == fibonacci(n - 1) + fibonacci(n + 1)
    assert fibonacci(2 * n) == fibonacci(n) * lucas(n)
    assert lucas(2 * n) ** 2 == 5 * fibonacci(2 * n) ** 2 + 4


@given(st.integers(min_value=1, max_value=120))
def test_dimension_invariants(k):
    e = dimension(k)
    assert e.d == lucas(2 * k) + 1
    assert e.d_mod3 == (1, 2, 1, 0)[(k - 1) % 4]
    assert (e.d + 1) * (e.d - 3) == 5 * e.squarefree_witness**2
    assert dimension(k + 1).d > e.d
