"""Bundled automata used as fixtures and regression anchors."""

from __future__ import annotations

from itertools import product

from .automaton import MealyAutomaton


def grigorchuk() -> MealyAutomaton:
    """The 5-state, 2-letter machine generating the Grigorchuk group.

    a flips the first letter; b, c, d cycle and delegate to a; e is the
    identity state.  Bounded activity, not reversible.
    """
    states = ("a", "b", "c", "d", "e")
    a, b, c, d, e = range(5)
    delta = (
        (e, a, a, e, e),  # on letter 0
        (e, c, d, b, e),  # on letter 1
    )
    rho = (
        (1, 0),  # a swaps
        (0, 1),
        (0, 1),
        (0, 1),
        (0, 1),
    )
    return MealyAutomaton(delta, rho, states, ("0", "1"), id_state=e)


def adding_machine() -> MealyAutomaton:
    """Binary odometer: p adds 1 to a least-significant-bit-first word."""
    states = ("p", "e")
    p, e = 0, 1
    delta = (
        (e, e),  # on 0: p carries out, done
        (p, e),  # on 1: keep carrying
    )
    rho = (
        (1, 0),  # p: 0|1, 1|0
        (0, 1),
    )
    return MealyAutomaton(delta, rho, states, ("0", "1"), id_state=e)


def reversible_non_bireversible() -> MealyAutomaton:
    """A 6-state, 3-letter invertible reversible non-bireversible machine.

    Strongly connected; the incoming-output set of state b misses letter 2,
    so the generated semigroup is torsion-free.
    """
    states = ("a", "b", "c", "d", "e", "f")
    a, b, c, d, e, f = range(6)
    # delta[x][q] for x in 1,2,3 (indices 0,1,2)
    delta = (
        (b, f, a, e, c, d),  # on letter 1
        (d, f, e, a, c, b),  # on letter 2
        (f, d, b, c, a, e),  # on letter 3
    )
    swap13 = (2, 1, 0)  # 1|3, 2|2, 3|1
    rho = (
        swap13,  # a
        swap13,  # b
        swap13,  # c
        swap13,  # d
        swap13,  # e
        (2, 0, 1),  # f: 1|3, 2|1, 3|2
    )
    return MealyAutomaton(delta, rho, states, ("1", "2", "3"))


def grigorchuk_grouped3() -> MealyAutomaton:
    """The Grigorchuk machine read over grouped letter triples.

    Computed as ``grigorchuk().wop(3)``; all cycles collapse to self-loops
    (b, c, d on 111, e on everything) and a falls straight to e.
    """
    return grigorchuk().wop(3)


def reset_nonpermutation_k2() -> MealyAutomaton:
    """Unfolded reset machine over {0,1} whose state map q -> rho_q^{-1}(q)
    is not a permutation (both letters map to 0): every state has infinite
    order."""
    delta = ((0, 0), (1, 1))
    rho = ((0, 1), (1, 0))  # rho_0 = id, rho_1 = swap
    return MealyAutomaton(delta, rho, ("0", "1"), ("0", "1"))


def reset_permutation_k2() -> MealyAutomaton:
    """Unfolded reset machine over {0,1} whose state map is a permutation
    (the order certificate stays inconclusive)."""
    delta = ((0, 0), (1, 1))
    rho = ((1, 0), (1, 0))  # both states swap
    return MealyAutomaton(delta, rho, ("0", "1"), ("0", "1"))


def activity_degree1_witness() -> MealyAutomaton:
    """Two chained self-loops: activity of the head state grows linearly."""
    states = ("u", "v", "e")
    u, v, e = range(3)
    delta = (
        (u, v, e),  # on 0: u and v loop
        (v, e, e),  # on 1: u -> v -> e
    )
    rho = ((0, 1), (0, 1), (0, 1))
    return MealyAutomaton(delta, rho, states, ("0", "1"), id_state=e)


def exponential_activity_witness() -> MealyAutomaton:
    """A state with both letters self-looping and a swapping output:
    activity 2^l, so not polynomial."""
    states = ("t", "e")
    t, e = 0, 1
    delta = ((t, e), (t, e))
    rho = ((1, 0), (0, 1))
    return MealyAutomaton(delta, rho, states, ("0", "1"), id_state=e)


def identity_machine(k: int = 2) -> MealyAutomaton:
    """Single identity state over k letters."""
    delta = tuple((0,) for _ in range(k))
    rho = (tuple(range(k)),)
    return MealyAutomaton(delta, rho, ("e",), tuple(str(x) for x in range(k)), id_state=0)


FIXTURE_BUILDERS = {
    "grigorchuk": grigorchuk,
    "adding_machine": adding_machine,
    "fig2": reversible_non_bireversible,
    "grigorchuk_nf3": grigorchuk_grouped3,
    "reset_nonperm_k2": reset_nonpermutation_k2,
    "reset_perm_k2": reset_permutation_k2,
}


def all_words(k: int, max_len: int, min_len: int = 1):
    """Every letter word with min_len <= length <= max_len, shortest first."""
    for length in range(min_len, max_len + 1):
        yield from product(range(k), repeat=length)
