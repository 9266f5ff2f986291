import time

import numpy as np
import pytest

from quditgame.engine import Move
from quditgame.gates import Card
from quditgame.qudit import StateVector, basis_state, equal_up_to_global_phase, probabilities
from quditgame.riddles import (
    DisallowedCardError,
    OutcomePredicateGoal,
    Riddle,
    SolutionTooLongError,
    TargetStateGoal,
    apply_moves,
    builtin_riddles,
    check_goal,
    check_solution,
    hint,
    riddle_summary,
    solve,
)


def by_id(riddle_id: int) -> Riddle:
    return next(r for r in builtin_riddles() if r.id == riddle_id)


def moves(*specs) -> list[Move]:
    return [Move(Card(card), targets) for card, targets in specs]


# --- the built-in set -----------------------------------------------------------


def test_six_riddles_with_graded_difficulty():
    riddles = builtin_riddles()
    assert [r.id for r in riddles] == [1, 2, 3, 4, 5, 6]
    assert [r.difficulty for r in riddles] == ["easy", "easy", "medium", "medium", "hard", "hard"]
    assert all(r.explanation for r in riddles)
    assert all(r.max_cards >= 1 for r in riddles)


def test_reference_solutions_check_true():
    cases = {
        1: moves(("H1", (1,))),
        2: moves(("H1", (1,)), ("Z", (1,)), ("H1", (1,))),
        3: moves(("H1", (1,)), ("CX", (1, 2))),
        4: moves(("H1", (1,)), ("CX", (1, 2)), ("X1", (2,))),
        5: moves(("H1", (1,)), ("CX", (1, 2)), ("CX", (1, 3))),
        6: moves(("X1", (1,)), ("X1", (1,))),
    }
    for riddle_id, solution in cases.items():
        ok, _ = check_solution(by_id(riddle_id), solution)
        assert ok, f"riddle {riddle_id}"


def test_riddle2_double_hadamard_fails_back_to_zero():
    ok, final = check_solution(by_id(2), moves(("H1", (1,)), ("H1", (1,))))
    assert not ok
    assert equal_up_to_global_phase(final, basis_state(2, [0]))


def test_riddle2_phase_first_still_fails():
    ok, final = check_solution(by_id(2), moves(("Z", (1,)), ("H1", (1,)), ("H1", (1,))))
    assert not ok
    assert equal_up_to_global_phase(final, basis_state(2, [0]))


def test_riddle3_bell_solution_matches_perfectly():
    ok, final = check_solution(by_id(3), moves(("H1", (1,)), ("CX", (1, 2))))
    assert ok
    probs = probabilities(final)
    assert set(probs) == {(0, 0), (1, 1)}


def test_riddle6_double_shift():
    ok, final = check_solution(by_id(6), moves(("X1", (1,)), ("X1", (1,))))
    assert ok
    np.testing.assert_allclose(final.amps, basis_state(3, [2]).amps, atol=1e-12)


def test_riddle6_hadamards_alone_cannot_work():
    riddle = by_id(6)
    only_h = Riddle(
        id=99,
        dim=3,
        num_qudits=1,
        initial=(0,),
        cards={Card.H1: 4},
        goal=riddle.goal,
        max_cards=4,
        difficulty="hard",
        explanation="",
    )
    assert solve(only_h) is None


# --- solution validation -----------------------------------------------------------


def test_disallowed_card_is_distinct_from_wrong_answer():
    with pytest.raises(DisallowedCardError):
        check_solution(by_id(2), moves(("X1", (1,))))
    with pytest.raises(DisallowedCardError):
        check_solution(by_id(2), moves(("Z", (1,)), ("Z", (1,))))  # only one Z allowed


def test_too_many_cards_rejected():
    with pytest.raises(SolutionTooLongError):
        check_solution(by_id(1), moves(("H1", (1,)), ("H1", (1,)), ("X1", (1,))))


def test_bad_targets_rejected():
    from quditgame.riddles import RiddleError

    with pytest.raises(RiddleError):
        check_solution(by_id(3), moves(("CX", (1, 1))))
    with pytest.raises(RiddleError):
        check_solution(by_id(3), moves(("H1", (3,))))


# --- predicates ----------------------------------------------------------------------


def test_all_equal_predicate_needs_randomness():
    goal = OutcomePredicateGoal("all_equal")
    assert not check_goal(goal, basis_state(3, [0, 0, 0]))  # certain, not random
    ghz = apply_moves(by_id(5), moves(("H1", (1,)), ("CX", (1, 2)), ("CX", (1, 3))))
    assert check_goal(goal, ghz)


def test_differ_by_predicate():
    goal = OutcomePredicateGoal("differ_by", (1,))
    anti = apply_moves(by_id(4), moves(("H1", (1,)), ("CX", (1, 2)), ("X1", (2,))))
    assert check_goal(goal, anti)
    bell = apply_moves(by_id(3), moves(("H1", (1,)), ("CX", (1, 2))))
    assert not check_goal(goal, bell)
    assert not check_goal(goal, basis_state(2, [0, 1]))  # correlated but certain


def test_qudit_is_predicate():
    goal = OutcomePredicateGoal("qudit_is", (1, 2))
    assert check_goal(goal, basis_state(3, [2, 0]))
    assert not check_goal(goal, basis_state(3, [1, 2]))


def test_predicate_correlation_is_exact_not_statistical():
    ghz = apply_moves(by_id(5), moves(("H1", (1,)), ("CX", (1, 2)), ("CX", (1, 3))))
    matching = sum(p for o, p in probabilities(ghz).items() if len(set(o)) == 1)
    assert abs(matching - 1.0) <= 1e-10


def test_unknown_predicate_rejected():
    from quditgame.riddles import RiddleError

    with pytest.raises(RiddleError):
        OutcomePredicateGoal("sometimes_equal")


# --- solver ---------------------------------------------------------------------------


def test_solver_solves_all_builtins_within_budget():
    t0 = time.monotonic()
    for riddle in builtin_riddles():
        solution = solve(riddle)
        assert solution is not None, f"riddle {riddle.id}"
        assert len(solution) <= riddle.max_cards
        ok, _ = check_solution(riddle, solution)
        assert ok, f"riddle {riddle.id} solver output fails its own check"
    assert time.monotonic() - t0 < 5.0


def test_solver_minimality_riddle2():
    assert solve(by_id(2), max_depth=2) is None
    solution = solve(by_id(2))
    assert len(solution) == 3
    assert solution == moves(("H1", (1,)), ("Z", (1,)), ("H1", (1,)))


def test_solver_minimality_riddle3():
    assert solve(by_id(3), max_depth=1) is None
    solution = solve(by_id(3))
    assert solution == moves(("H1", (1,)), ("CX", (1, 2)))


def test_solver_returns_empty_for_already_solved():
    riddle = Riddle(
        id=50,
        dim=2,
        num_qudits=1,
        initial=(0,),
        cards={Card.X1: 1},
        goal=TargetStateGoal(basis_state(2, [0])),
        max_cards=1,
        difficulty="easy",
        explanation="",
    )
    assert solve(riddle) == []


def test_solver_is_deterministic():
    for riddle in builtin_riddles():
        assert solve(riddle) == solve(riddle)


def test_solver_depth_cap_enforced():
    from quditgame.riddles import RiddleError

    with pytest.raises(RiddleError):
        solve(by_id(1), max_depth=9)


def test_solver_none_when_unreachable():
    riddle = Riddle(
        id=51,
        dim=2,
        num_qudits=1,
        initial=(0,),
        cards={Card.Z: 2},
        goal=TargetStateGoal(basis_state(2, [1])),
        max_cards=2,
        difficulty="easy",
        explanation="",
    )
    assert solve(riddle) is None


# --- hints -----------------------------------------------------------------------------


def test_hint_walks_a_shortest_solution():
    riddle = by_id(3)
    first = hint(riddle)
    assert first == Move(Card.H1, (1,))
    second = hint(riddle, [first])
    assert second == Move(Card.CX, (1, 2))


def test_hint_dead_end_returns_none():
    riddle = by_id(3)
    assert hint(riddle, moves(("CX", (1, 2)))) is None


def test_hint_on_solved_prefix_returns_none():
    riddle = by_id(3)
    assert hint(riddle, moves(("H1", (1,)), ("CX", (1, 2)))) is None


# --- summaries ---------------------------------------------------------------------------


def test_riddle_summary_has_no_spoilers():
    summary = riddle_summary(by_id(2))
    assert summary["id"] == 2
    assert summary["cards"] == {"H1": 2, "Z": 1}
    assert "explanation" not in summary
    assert "solution" not in str(summary)
