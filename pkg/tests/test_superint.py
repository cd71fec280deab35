import pytest
from hypothesis import given, settings, strategies as st

from helpers import mixed_model
from ipc1.formula import parse, random_formula
from ipc1.kripke import (REFLEXIVE_TRANSITIVE, KripkeModel, canonical, check_brute, check_fast,
                         is_directed, random_model)
from ipc1.rnindex import BOT, TOP, phi, psi
from ipc1.superint import (CLASSICAL, IPC, KC, AxiomIsBot, InadmissibleModel, Logic,
                           admissible, allowed_indices, check_in, classes, classes_table,
                           describe_allowed, is_valid_in, parse_logic)


def test_allowed_indices():
    assert allowed_indices(KC) == {1, 2, 3}
    assert allowed_indices(Logic(psi(2))) == {1, 2}
    assert allowed_indices(IPC) is None
    assert allowed_indices(Logic(phi(3))) == {1, 2, 4}
    assert describe_allowed(IPC) == "all" and describe_allowed(KC) == "{1,2,3}"
    with pytest.raises(AxiomIsBot):
        Logic(BOT)


def test_parse_logic():
    assert parse_logic("kc") == KC and parse_logic("IPC") == IPC
    assert allowed_indices(parse_logic("psi:2")) == allowed_indices(CLASSICAL)
    assert allowed_indices(parse_logic("phi:5")) == {1, 2, 3, 4, 6}
    for bad in ("psi:0", "chi:2", "psi", ""):
        with pytest.raises(ValueError):
            parse_logic(bad)


def test_admissible_examples():
    assert admissible(KC, canonical(3))
    assert not admissible(KC, canonical(4))
    for seed in range(20):
        assert admissible(IPC, mixed_model(seed))


@pytest.mark.parametrize("logic,text,expected", [
    (KC, "~a | ~~a", True), (Logic(psi(2)), "a | ~a", True), (KC, "a | ~a", False),
    (IPC, "a | ~a", False), (IPC, "a -> a", True), (CLASSICAL, "~~a -> a", True),
    (KC, "~~a -> a", False),
])
def test_is_valid_in_examples(logic, text, expected):
    assert is_valid_in(logic, parse(text)) is expected


def test_check_in_examples():
    c3 = canonical(3)
    assert check_in(KC, c3, "3", parse("~a | ~~a"))
    assert not check_in(KC, c3, "3", parse("a | ~a"))
    with pytest.raises(InadmissibleModel):
        check_in(KC, canonical(4), "4", parse("a"))


def test_kc_classes():
    cs = classes(KC)
    # phi3 and psi2 share a pattern over {1,2,3}, so there are six
    assert len(cs) == 6
    by_rep = {c.representative: c for c in cs}
    assert set(by_rep) == {BOT, TOP, psi(1), phi(1), psi(2), phi(2)}
    assert by_rep[psi(2)].bits() == "110"
    assert phi(3) in by_rep[psi(2)].members
    assert by_rep[TOP].bits() == "111" and by_rep[BOT].bits() == "000"


def test_psi1_classes():
    cs = classes(Logic(psi(1)))
    assert len(cs) == 2
    top_like = next(c for c in cs if c.pattern == (True,))
    bot_like = next(c for c in cs if c.pattern == (False,))
    assert TOP in top_like.members and BOT in bot_like.members
    assert all(psi(k) in top_like.members for k in range(1, 4))


def test_classical_has_four_classes():
    assert len(classes(CLASSICAL)) == 4


def test_class_count_nondecreasing():
    counts = [len(classes(Logic(psi(k)))) for k in range(1, 12)]
    assert counts == sorted(counts)
    assert counts == [2 * k for k in range(1, 12)]


def test_class_patterns_monotone_along_ladder():
    for k in range(1, 10):
        for logic in (Logic(psi(k)), Logic(phi(k))):
            pts = sorted(allowed_indices(logic))
            for c in classes(logic):
                truth = dict(zip(pts, c.pattern))
                for n in pts:
                    for n2 in pts:
                        # state n of H_N sees n2 when n >= n2 + 2
                        if truth[n] and n >= n2 + 2:
                            assert truth[n2]


def test_classes_table_text():
    text = classes_table(KC)
    lines = text.splitlines()
    assert lines[0].startswith("#") and lines[1].split("\t") == ["pattern", "representative", "members"]
    assert len(lines) == 2 + 6
    with pytest.raises(ValueError):
        classes(IPC)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.sampled_from(["psi", "phi"]), st.integers(1, 50), st.integers(0, 10**6))
def test_validity_matches_brute_force(k, kind, size, seed):
    logic = Logic(psi(k) if kind == "psi" else phi(k))
    f = random_formula(size, seed)
    brute = all(check_brute(canonical(n), str(n), f) for n in allowed_indices(logic))
    assert is_valid_in(logic, f) == brute


def test_kc_directed_implies_admissible():
    directed = admitted = 0
    for seed in range(600):
        m = random_model(1 + seed % 10, seed, 0.3, 0.2, 0)
        ok = admissible(KC, m)
        if is_directed(m):
            directed += 1
            assert ok
        admitted += ok
    assert 0 < directed < admitted < 600


def test_kc_admissible_without_directedness():
    fork = KripkeModel.build(["r", "x", "y"], [("r", "x"), ("r", "y")],
                             closure=REFLEXIVE_TRANSITIVE)
    assert admissible(KC, fork) and not is_directed(fork)
    assert check_brute(fork, "r", parse("~a | ~~a"))
    lifted = KripkeModel.build(["r", "x", "y"], [("r", "x"), ("r", "y")], ["x"],
                               closure=REFLEXIVE_TRANSITIVE)
    assert not admissible(KC, lifted) and not check_brute(lifted, "r", parse("~a | ~~a"))


def test_kc_admissible_iff_axiom_holds_everywhere():
    ax = parse("~a | ~~a")
    for seed in range(400):
        m = mixed_model(seed, 10)
        assert admissible(KC, m) == all(check_brute(m, s, ax) for s in m.states)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 40), st.integers(0, 10**6))
def test_check_in_is_plain_satisfaction(mseed, size, fseed):
    m = mixed_model(mseed)
    f = random_formula(size, fseed)
    for logic in (KC, CLASSICAL, IPC):
        if admissible(logic, m):
            s = m.states[0]
            assert check_in(logic, m, s, f) == check_brute(m, s, f) == check_fast(m, s, f)
