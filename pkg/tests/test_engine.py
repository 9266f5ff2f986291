from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quditgame.circuit_io import serialize_game
from quditgame.engine import (
    CardNotHeldError,
    ConfigError,
    GameConfig,
    GameState,
    IllegalMoveError,
    Move,
    PlayerState,
    WrongPhaseError,
    WrongTurnError,
    end_round,
    legal_moves,
    new_game,
    play_card,
    replay_events,
    round_state,
    score,
)
from quditgame.gates import Card
from quditgame.qudit import make_rng, probabilities


def small_config(**overrides) -> GameConfig:
    base = dict(version="3d", num_players=3, num_rounds=2, hand_size=2, seed=7)
    base.update(overrides)
    return GameConfig(**base)


def between_rounds_state(carries, dim=3, circuit=(), seed=0) -> GameState:
    """Directly build an evaluation-ready state with a scripted round circuit."""
    version = "3d" if dim == 3 else "2d"
    config = GameConfig(
        version=version, num_players=len(carries), num_rounds=1, hand_size=1, seed=seed
    )
    return GameState(
        config=config,
        players=[
            PlayerState(id=i + 1, hand=[], carry_value=c) for i, c in enumerate(carries)
        ],
        deck=[],
        discards=[],
        round_circuit=[(p, m) for p, m in circuit],
        steal_log=[],
        phase="between-rounds",
        turn=0,
        round_number=1,
        rng=make_rng(seed),
    )


def full_multiset(state: GameState) -> Counter:
    cards = Counter(state.deck) + Counter(state.discards)
    for p in state.players:
        cards += Counter(p.hand)
    cards += Counter(m.card for _, m in state.round_circuit)
    return cards


def autoplay_round(state: GameState, pick=0) -> None:
    while state.phase == "in-round":
        moves = legal_moves(state, state.turn)
        play_card(state, state.turn, moves[pick % len(moves)])


# --- setup --------------------------------------------------------------------


def test_new_game_deals_hands_and_zero_carries():
    g = new_game(GameConfig(version="3d", num_players=4, seed=11))
    assert [len(p.hand) for p in g.players] == [5, 5, 5, 5]
    assert g.carries() == [0, 0, 0, 0]
    assert g.turn == 1 and g.phase == "in-round" and g.round_number == 1


def test_new_game_is_seed_deterministic():
    a = new_game(GameConfig(version="2d", num_players=3, seed=123))
    b = new_game(GameConfig(version="2d", num_players=3, seed=123))
    assert [p.hand for p in a.players] == [p.hand for p in b.players]
    assert a.deck == b.deck


def test_easy_version_deals_no_phase_cards():
    g = new_game(GameConfig(version="easy", num_players=2, num_rounds=2, hand_size=4, seed=5))
    seen = set(g.deck) | {c for p in g.players for c in p.hand}
    assert Card.Z not in seen and Card.Y not in seen


def test_new_game_rejects_bad_configs():
    with pytest.raises(ConfigError):
        new_game(GameConfig(version="3d", num_players=1))
    with pytest.raises(ConfigError):
        new_game(GameConfig(version="3d", num_players=6))
    with pytest.raises(ConfigError):
        new_game(GameConfig(version="nope"))
    with pytest.raises(ConfigError):
        new_game(GameConfig(version="3d", style="chaotic"))
    # 2 players x 5 cards x 3 rounds needs 30, but the easy deck holds 26.
    with pytest.raises(ConfigError) as e:
        new_game(GameConfig(version="easy", num_players=2))
    assert e.value.code == "invalid-config"


def test_unseeded_games_get_a_recorded_seed():
    g = new_game(GameConfig(version="3d", num_players=2, num_rounds=1, hand_size=2))
    assert g.config.seed is not None


def test_deck_override_changes_multiset():
    g = new_game(
        small_config(deck={Card.STEAL: 0, Card.Y: 0, Card.Z: 0, Card.H2: 0, Card.X2: 0})
    )
    assert set(full_multiset(g)) == {Card.X1, Card.H1, Card.CX}


# --- legal moves ----------------------------------------------------------------


def test_legal_moves_single_qudit_card_enumeration():
    g = new_game(GameConfig(version="3d", num_players=4, num_rounds=1, hand_size=1, seed=0))
    g.players[0].hand = [Card.H1]
    moves = legal_moves(g, 1)
    assert moves == [Move(Card.H1, (q,)) for q in (1, 2, 3, 4)]


def test_legal_moves_cx_ordered_pairs():
    g = new_game(small_config())
    g.players[0].hand = [Card.CX]
    moves = legal_moves(g, 1)
    # Oracle: n*(n-1) ordered pairs.
    assert len(moves) == 3 * 2
    assert set(m.targets for m in moves) == {
        (c, t) for c in (1, 2, 3) for t in (1, 2, 3) if c != t
    }


def test_legal_moves_steal_targets_everyone_else():
    g = new_game(small_config())
    g.players[0].hand = [Card.STEAL]
    assert legal_moves(g, 1) == [Move(Card.STEAL, (2,)), Move(Card.STEAL, (3,))]


def test_legal_moves_duplicates_do_not_multiply():
    g = new_game(small_config())
    g.players[0].hand = [Card.H1, Card.H1]
    assert len(legal_moves(g, 1)) == 3


def test_legal_moves_empty_hand_empty_list():
    g = new_game(small_config())
    g.players[0].hand = []
    assert legal_moves(g, 1) == []


def test_legal_moves_out_of_turn_is_distinct_error():
    g = new_game(small_config())
    with pytest.raises(WrongTurnError):
        legal_moves(g, 2)


def test_legal_moves_sorted_deterministically():
    g = new_game(small_config())
    moves = legal_moves(g, 1)
    assert moves == sorted(moves, key=lambda m: (m.card.value, m.targets))


# --- playing cards ---------------------------------------------------------------


def test_play_gate_card_queues_on_circuit():
    g = new_game(small_config())
    g.players[0].hand = [Card.H1, Card.X1]
    play_card(g, 1, Move(Card.H1, (1,)))
    assert g.round_circuit == [(1, Move(Card.H1, (1,)))]
    assert g.players[0].hand == [Card.X1]
    assert g.turn == 2
    probs = probabilities(round_state(g))
    assert set(probs) == {(0, 0, 0), (1, 0, 0), (2, 0, 0)}


def test_play_errors_are_distinct():
    g = new_game(small_config())
    hand = g.players[0].hand
    with pytest.raises(WrongTurnError):
        play_card(g, 2, Move(Card.H1, (1,)))
    missing = next(c for c in Card if c not in hand and c is not Card.STEAL)
    with pytest.raises(CardNotHeldError):
        play_card(g, 1, Move(missing, (1,) if missing is not Card.CX else (1, 2)))
    g.players[0].hand = [Card.CX, Card.STEAL]
    with pytest.raises(IllegalMoveError):
        play_card(g, 1, Move(Card.CX, (1, 1)))
    with pytest.raises(IllegalMoveError):
        play_card(g, 1, Move(Card.CX, (0, 1)))
    with pytest.raises(IllegalMoveError):
        play_card(g, 1, Move(Card.STEAL, (1,)))


def test_steal_from_single_card_hand_is_forced():
    g = new_game(small_config())
    g.players[0].hand = [Card.STEAL]
    g.players[1].hand = [Card.Y]
    play_card(g, 1, Move(Card.STEAL, (2,)))
    assert g.players[0].hand == [Card.Y]
    assert g.players[1].hand == []
    record = g.steal_log[-1]
    assert (record.player, record.victim, record.card) == (1, 2, Card.Y)


def test_steal_from_empty_hand_is_a_noop_transfer():
    g = new_game(small_config())
    g.players[0].hand = [Card.STEAL]
    g.players[1].hand = []
    play_card(g, 1, Move(Card.STEAL, (2,)))
    assert g.players[0].hand == []
    assert g.steal_log[-1].card is None


def test_turn_skips_empty_hands():
    g = new_game(small_config())
    g.players[1].hand = []
    play_card(g, 1, legal_moves(g, 1)[0])
    assert g.turn == 3


def test_round_ends_when_all_hands_empty():
    g = new_game(GameConfig(version="3d", num_players=2, num_rounds=1, hand_size=1, seed=3))
    play_card(g, 1, legal_moves(g, 1)[0])
    play_card(g, 2, legal_moves(g, 2)[0])
    assert g.phase == "between-rounds"
    assert g.turn == 0
    with pytest.raises(WrongPhaseError):
        legal_moves(g, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_card_conservation_through_random_playout(seed, players):
    g = new_game(
        GameConfig(version="3d", num_players=players, num_rounds=2, hand_size=3, seed=seed)
    )
    initial = full_multiset(g)
    rng = np.random.default_rng(seed)
    while g.phase != "finished":
        if g.phase == "in-round":
            moves = legal_moves(g, g.turn)
            play_card(g, g.turn, moves[int(rng.integers(len(moves)))])
        else:
            end_round(g)
        assert full_multiset(g) == initial


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_turn_order_is_cyclic_next_nonempty(seed):
    g = new_game(GameConfig(version="2d", num_players=3, num_rounds=1, hand_size=3, seed=seed))
    rng = np.random.default_rng(seed)
    while g.phase == "in-round":
        actor = g.turn
        moves = legal_moves(g, actor)
        play_card(g, actor, moves[int(rng.integers(len(moves)))])
        if g.phase != "in-round":
            break
        # Oracle: next actor is the cyclically-next player holding cards.
        n = g.config.num_players
        expected = next(
            (actor - 1 + step) % n + 1
            for step in range(1, n + 1)
            if g.players[(actor - 1 + step) % n].hand
        )
        assert g.turn == expected


# --- round evaluation --------------------------------------------------------------


def test_end_round_entangled_pair_matches():
    circuit = [(1, Move(Card.H1, (1,))), (1, Move(Card.CX, (1, 2)))]
    for seed in range(12):
        g = between_rounds_state([0, 0], dim=2, circuit=circuit, seed=seed)
        pre, outcome, _ = end_round(g)
        probs = probabilities(pre)
        assert set(probs) == {(0, 0), (1, 1)}
        assert outcome in {(0, 0), (1, 1)}
        assert g.carries() == list(outcome)


def test_end_round_identity_circuit_keeps_carries():
    g = between_rounds_state([2, 1, 0], dim=3)
    pre, outcome, _ = end_round(g)
    assert outcome == (2, 1, 0)
    assert g.carries() == [2, 1, 0]
    assert probabilities(pre) == {(2, 1, 0): 1.0}


def test_end_round_mid_round_is_error():
    g = new_game(small_config())
    with pytest.raises(WrongPhaseError):
        end_round(g)


def test_end_round_deals_next_hands_then_finishes():
    g = new_game(GameConfig(version="3d", num_players=2, num_rounds=2, hand_size=1, seed=2))
    autoplay_round(g)
    end_round(g)
    assert g.phase == "in-round" and g.round_number == 2
    assert all(len(p.hand) == 1 for p in g.players)
    autoplay_round(g)
    end_round(g)
    assert g.phase == "finished"
    with pytest.raises(WrongPhaseError):
        end_round(g)


def test_all_steal_round_is_identity():
    config = GameConfig(
        version="3d",
        num_players=2,
        num_rounds=1,
        hand_size=1,
        seed=4,
        deck={c: 0 for c in Card if c is not Card.STEAL} | {Card.STEAL: 1},
    )
    g = new_game(config)
    for p in g.players:
        p.carry_value = p.id  # pretend mid-game carries
    autoplay_round(g)
    assert g.round_circuit == []
    _, outcome, _ = end_round(g)
    assert outcome == (1, 2)


# --- scoring -----------------------------------------------------------------------


def finished_state(carries, style, dim=3):
    g = between_rounds_state(carries, dim=dim)
    g.config = GameConfig(
        version=g.config.version,
        style=style,
        num_players=len(carries),
        num_rounds=1,
        hand_size=1,
        seed=0,
    )
    g.phase = "finished"
    return g


def test_score_competitive_single_winner():
    result = score(finished_state([2, 1, 1, 1], "competitive"))
    assert result.winners == (1,)
    assert result.carries == {1: 2, 2: 1, 3: 1, 4: 1}


def test_score_cooperative_maximum():
    result = score(finished_state([2, 2, 2], "cooperative"))
    assert result.total == 6 and result.max_total == 6


def test_score_competitive_tie_is_shared():
    result = score(finished_state([1, 1], "competitive", dim=2))
    assert result.winners == (1, 2)


def test_score_before_finish_is_error():
    with pytest.raises(WrongPhaseError):
        score(new_game(small_config()))


# --- determinism and replay ----------------------------------------------------------


def scripted_game(seed=21):
    config = GameConfig(version="3d", num_players=3, num_rounds=2, hand_size=2, seed=seed)
    g = new_game(config)
    events = []
    while g.phase != "finished":
        if g.phase == "in-round":
            move = legal_moves(g, g.turn)[0]
            events.append(
                {"type": "play", "player": g.turn, "card": move.card.value,
                 "targets": list(move.targets)}
            )
            play_card(g, g.turn, move)
        else:
            _, outcome, _ = end_round(g)
            events.append({"type": "evaluate", "outcome": list(outcome)})
    return config, events, g


def test_identical_script_gives_byte_identical_state():
    _, _, a = scripted_game()
    _, _, b = scripted_game()
    assert serialize_game(a) == serialize_game(b)


def test_replay_events_reproduces_game():
    config, events, original = scripted_game()
    replayed = replay_events(config, events)
    assert serialize_game(replayed) == serialize_game(original)
    assert score(replayed) == score(original)


def test_replay_detects_divergence():
    from quditgame.engine import ReplayDivergenceError

    config, events, _ = scripted_game()
    bad = [dict(e) for e in events]
    last_eval = max(i for i, e in enumerate(bad) if e["type"] == "evaluate")
    bad[last_eval]["outcome"] = [(v + 1) % 3 for v in bad[last_eval]["outcome"]]
    with pytest.raises(ReplayDivergenceError):
        replay_events(config, bad)
