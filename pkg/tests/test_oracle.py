import pytest

from stackdist.errors import CapExceededError, InvalidParameterError
from stackdist.oracle import (
    Diagram,
    StructureFilter,
    arc_counts_exhaustive,
    core_counts_exhaustive,
    count_beta_free_exhaustive,
    count_cores_exhaustive,
    involutions,
    max_mutually_crossing,
    stack_counts_exhaustive,
    stack_decomposition,
)


def test_diagram_validation():
    Diagram(5, ((1, 5), (2, 4)))
    with pytest.raises(InvalidParameterError):
        Diagram(5, ((1, 6),))
    with pytest.raises(InvalidParameterError):
        Diagram(5, ((1, 3), (3, 5)))
    with pytest.raises(InvalidParameterError):
        Diagram(5, ((3, 3),))


def test_max_mutually_crossing():
    assert max_mutually_crossing(Diagram(4, ((1, 3), (2, 4)))) == 2
    assert max_mutually_crossing(Diagram(4, ((1, 4), (2, 3)))) == 1
    assert max_mutually_crossing(Diagram(6, ((1, 4), (2, 5), (3, 6)))) == 3
    assert max_mutually_crossing(Diagram(3, ())) == 0


def test_stack_decomposition():
    runs = stack_decomposition(Diagram(9, ((1, 9), (2, 8), (3, 7))))
    assert runs == [[(1, 9), (2, 8), (3, 7)]]
    assert stack_decomposition(Diagram(4, ())) == []
    runs = stack_decomposition(Diagram(12, ((1, 9), (2, 8), (4, 12), (5, 11))))
    assert [len(r) for r in runs] == [2, 2]


def test_structure_counts_examples():
    filt = StructureFilter(k=2, tau=3, lambda_min=4)
    assert stack_counts_exhaustive(9, filt) == {0: 1, 1: 1}
    assert stack_counts_exhaustive(8, filt) == {0: 1}
    for n in range(1, 9):
        assert stack_counts_exhaustive(n, filt).get(0) == 1


def test_beta_free_examples():
    assert count_beta_free_exhaustive(4, 2, 1) == 0
    assert count_beta_free_exhaustive(5, 2, 1) == 1
    assert count_beta_free_exhaustive(5, 2, 0) == 1


def test_core_examples():
    assert count_cores_exhaustive(5, 2, 1) == 1
    assert count_cores_exhaustive(4, 2, 1) == 0
    for n in range(0, 8):
        assert count_cores_exhaustive(n, 3, 0) == 1


def test_totals_match_involutions():
    free = StructureFilter(k=99, tau=1, lambda_min=1)
    for n in range(0, 10):
        assert sum(stack_counts_exhaustive(n, free).values()) == involutions(n)
    assert [involutions(n) for n in range(8)] == [1, 1, 2, 4, 10, 26, 76, 232]


def test_filter_monotonicity():
    for n in range(4, 10):
        base = sum(stack_counts_exhaustive(n, StructureFilter(k=3, tau=2, lambda_min=2)).values())
        tighter_tau = sum(
            stack_counts_exhaustive(n, StructureFilter(k=3, tau=3, lambda_min=2)).values()
        )
        tighter_lam = sum(
            stack_counts_exhaustive(n, StructureFilter(k=3, tau=2, lambda_min=3)).values()
        )
        smaller_k = sum(
            stack_counts_exhaustive(n, StructureFilter(k=2, tau=2, lambda_min=2)).values()
        )
        assert tighter_tau <= base
        assert tighter_lam <= base
        assert smaller_k <= base


def test_arc_counts_respect_one_arc_ban():
    filt = StructureFilter(k=3, forbid_one_arcs=True, forbid_beta=True)
    profile = arc_counts_exhaustive(6, filt)
    assert profile[0] == 1
    # (1,3) style arcs only count when their midpoint is matched elsewhere
    assert all(h <= 3 for h in profile)


def test_cap_enforced():
    filt = StructureFilter(k=2, tau=1, lambda_min=1)
    with pytest.raises(CapExceededError):
        stack_counts_exhaustive(15, filt)
    with pytest.raises(CapExceededError):
        core_counts_exhaustive(20, 2, cap=10)
    # explicit cap raise allows larger runs
    assert stack_counts_exhaustive(9, filt, cap=9)[0] == 1


def test_invalid_filter():
    with pytest.raises(InvalidParameterError):
        StructureFilter(k=1)
    with pytest.raises(InvalidParameterError):
        StructureFilter(k=2, tau=0)
    with pytest.raises(InvalidParameterError):
        StructureFilter(k=2, lambda_min=0)


def test_arc_length_calibration(count_table):
    """The counting chain realizes the j-i >= 4 reading of the length bound."""
    from stackdist.verify import calibrate_arc_length

    outcome = calibrate_arc_length(
        k_values=(2, 3), tau_values=(3,), n_range=range(9, 12), table=count_table
    )
    assert outcome[4] is True
    assert outcome[5] is False
    assert outcome["realized"] == 4
