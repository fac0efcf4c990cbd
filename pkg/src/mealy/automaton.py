"""Mealy automata and their transducer algebra.

A Mealy automaton is a letter-to-letter transducer (Q, S, delta, rho):
``delta[x][q]`` is the state entered from ``q`` on input letter ``x`` and
``rho[q][x]`` the letter produced.  States and letters are dense indices;
names live in side tables and only matter at the I/O boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .errors import (
    CapabilityError,
    InputDomainError,
    InvariantError,
    ParseError,
    SizeBudgetError,
)

#: cap on the number of states/letters a power or letter-grouping may create
DEFAULT_SIZE_CAP = 10**6


def _default_names(prefix: str, count: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(count))


def _join_names(names: tuple[str, ...]) -> str:
    # single-character components concatenate unambiguously ("000", "pp");
    # fall back to a separator otherwise
    if all(len(n) == 1 for n in names):
        return "".join(names)
    return "|".join(names)


@dataclass(frozen=True)
class MealyAutomaton:
    """Immutable transducer with dense transition/production tables."""

    delta: tuple[tuple[int, ...], ...]  # delta[letter][state] -> state
    rho: tuple[tuple[int, ...], ...]  # rho[state][letter] -> letter
    state_names: tuple[str, ...] = ()
    letter_names: tuple[str, ...] = ()
    id_state: int | None = None

    def __post_init__(self):
        n = len(self.rho)
        k = len(self.delta)
        if n < 1 or k < 1:
            raise InvariantError("automaton needs at least one state and one letter")
        if not self.state_names:
            object.__setattr__(self, "state_names", _default_names("q", n))
        if not self.letter_names:
            object.__setattr__(self, "letter_names", _default_names("", k))
        if len(self.state_names) != n or len(set(self.state_names)) != n:
            raise InvariantError("state names must be unique and match the state count")
        if len(self.letter_names) != k or len(set(self.letter_names)) != k:
            raise InvariantError("letter names must be unique and match the letter count")
        for x, col in enumerate(self.delta):
            if len(col) != n:
                raise InvariantError(f"delta column {x} has {len(col)} entries, expected {n}")
            for q, target in enumerate(col):
                if not 0 <= target < n:
                    raise InvariantError(f"delta[{x}][{q}] = {target} is not a state")
        for q, row in enumerate(self.rho):
            if len(row) != k:
                raise InvariantError(f"rho row {q} has {len(row)} entries, expected {k}")
            for x, out in enumerate(row):
                if not 0 <= out < k:
                    raise InvariantError(f"rho[{q}][{x}] = {out} is not a letter")
        if self.id_state is not None:
            e = self.id_state
            if not 0 <= e < n:
                raise InvariantError(f"id_state {e} is not a state")
            for x in range(k):
                if self.rho[e][x] != x or self.delta[x][e] != e:
                    raise InvariantError(
                        f"declared id_state {self.state_names[e]!r} does not act as the identity"
                    )

    # -- basic views ---------------------------------------------------------

    @property
    def n_states(self) -> int:
        return len(self.rho)

    @property
    def n_letters(self) -> int:
        return len(self.delta)

    def state_index(self, name: str) -> int:
        try:
            return self.state_names.index(name)
        except ValueError:
            raise InputDomainError(f"unknown state {name!r}") from None

    def letter_index(self, name: str) -> int:
        try:
            return self.letter_names.index(name)
        except ValueError:
            raise InputDomainError(f"unknown letter {name!r}") from None

    def letters_to_indices(self, names) -> tuple[int, ...]:
        return tuple(self.letter_index(n) for n in names)

    def step(self, q: int, x: int) -> tuple[int, int]:
        """Cross-transition: (next state, produced letter) for state q reading x."""
        if not 0 <= q < self.n_states:
            raise InputDomainError(f"state index {q} out of range")
        if not 0 <= x < self.n_letters:
            raise InputDomainError(f"letter index {x} out of range")
        return self.delta[x][q], self.rho[q][x]

    # -- class tests used everywhere ----------------------------------------

    @cached_property
    def is_invertible(self) -> bool:
        """True iff every production row is a permutation of the alphabet."""
        k = self.n_letters
        return all(len(set(row)) == k for row in self.rho)

    @cached_property
    def is_reversible(self) -> bool:
        """True iff every transition column is a permutation of the stateset."""
        n = self.n_states
        return all(len(set(col)) == n for col in self.delta)

    @cached_property
    def rho_inverse(self) -> tuple[tuple[int, ...], ...]:
        """Per-state inverse production permutations (needs invertibility)."""
        if not self.is_invertible:
            raise CapabilityError("production functions are not permutations")
        inv = []
        for row in self.rho:
            r = [0] * len(row)
            for x, y in enumerate(row):
                r[y] = x
            inv.append(tuple(r))
        return tuple(inv)

    # -- transducer algebra --------------------------------------------------

    def dual(self) -> MealyAutomaton:
        """Exchange the roles of stateset and alphabet."""
        n, k = self.n_states, self.n_letters
        # dual transition on dual-state x by dual-letter q is rho[q][x];
        # dual production of dual-state x on q is delta[x][q]
        d_delta = tuple(tuple(self.rho[q][x] for x in range(k)) for q in range(n))
        d_rho = tuple(tuple(self.delta[x][q] for q in range(n)) for x in range(k))
        return MealyAutomaton(d_delta, d_rho, self.letter_names, self.state_names)

    def inverse(self) -> MealyAutomaton:
        """Swap input/output labels on every transition (invertible only)."""
        rinv = self.rho_inverse
        n, k = self.n_states, self.n_letters
        # q' reading y outputs x = rho_q^{-1}(y) and moves to delta_x(q)'
        i_delta = tuple(
            tuple(self.delta[rinv[q][y]][q] for q in range(n)) for y in range(k)
        )
        return MealyAutomaton(i_delta, rinv, self.state_names, self.letter_names, self.id_state)

    def power(self, ell: int, size_cap: int = DEFAULT_SIZE_CAP) -> MealyAutomaton:
        """Automaton on state words of length ell (leftmost state acts first)."""
        if ell < 1:
            raise InputDomainError("power exponent must be >= 1")
        n, k = self.n_states, self.n_letters
        if n**ell > size_cap:
            raise SizeBudgetError(f"power would create {n**ell} states (cap {size_cap})")
        words = list(product(range(n), repeat=ell))
        index = {w: i for i, w in enumerate(words)}
        delta = [[0] * len(words) for _ in range(k)]
        rho = [[0] * k for _ in range(len(words))]
        for i, w in enumerate(words):
            for x in range(k):
                y = x
                nxt = []
                for q in w:
                    nxt.append(self.delta[y][q])
                    y = self.rho[q][y]
                delta[x][i] = index[tuple(nxt)]
                rho[i][x] = y
        names = tuple(_join_names(tuple(self.state_names[q] for q in w)) for w in words)
        id_state = None
        if self.id_state is not None:
            id_state = index[(self.id_state,) * ell]
        return MealyAutomaton(
            tuple(tuple(col) for col in delta),
            tuple(tuple(row) for row in rho),
            names,
            self.letter_names,
            id_state,
        )

    def wop(self, ell: int, size_cap: int = DEFAULT_SIZE_CAP) -> MealyAutomaton:
        """Same machine read over grouped letters Sigma^ell.

        Generates the same semigroup; equals dual(power(dual, ell)) up to the
        identity-state annotation, which grouping preserves.
        """
        if ell < 1:
            raise InputDomainError("letter-grouping exponent must be >= 1")
        n, k = self.n_states, self.n_letters
        if k**ell > size_cap:
            raise SizeBudgetError(f"grouping would create {k**ell} letters (cap {size_cap})")
        groups = list(product(range(k), repeat=ell))
        index = {g: i for i, g in enumerate(groups)}
        delta = [[0] * n for _ in range(len(groups))]
        rho = [[0] * len(groups) for _ in range(n)]
        for q in range(n):
            for gi, g in enumerate(groups):
                cur = q
                out = []
                for x in g:
                    out.append(self.rho[cur][x])
                    cur = self.delta[x][cur]
                delta[gi][q] = cur
                rho[q][gi] = index[tuple(out)]
        names = tuple(_join_names(tuple(self.letter_names[x] for x in g)) for g in groups)
        return MealyAutomaton(
            tuple(tuple(col) for col in delta),
            tuple(tuple(row) for row in rho),
            self.state_names,
            names,
            self.id_state,
        )

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        doc = {
            "states": list(self.state_names),
            "alphabet": list(self.letter_names),
            "delta": {
                self.letter_names[x]: [self.state_names[t] for t in self.delta[x]]
                for x in range(self.n_letters)
            },
            "rho": {
                self.state_names[q]: [self.letter_names[y] for y in self.rho[q]]
                for q in range(self.n_states)
            },
        }
        if self.id_state is not None:
            doc["id_state"] = self.state_names[self.id_state]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    def to_dot(self) -> str:
        """DOT digraph: one node per state, one edge per (state, letter)."""
        lines = ["digraph mealy {", "  rankdir=LR;"]
        for name in self.state_names:
            lines.append(f'  "{name}" [shape=circle];')
        for q in range(self.n_states):
            for x in range(self.n_letters):
                target = self.state_names[self.delta[x][q]]
                label = f"{self.letter_names[x]}|{self.letter_names[self.rho[q][x]]}"
                lines.append(f'  "{self.state_names[q]}" -> "{target}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def same_tables(a: MealyAutomaton, b: MealyAutomaton) -> bool:
    """Exact table equality, ignoring the optional identity-state annotation."""
    return (
        a.state_names == b.state_names
        and a.letter_names == b.letter_names
        and a.delta == b.delta
        and a.rho == b.rho
    )


def from_json_dict(doc: dict) -> MealyAutomaton:
    if not isinstance(doc, dict):
        raise ParseError("automaton document must be a JSON object")
    for key in ("states", "alphabet", "delta", "rho"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    states = doc["states"]
    alphabet = doc["alphabet"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ParseError("'states' must be an array of names")
    if not isinstance(alphabet, list) or not all(isinstance(s, str) for s in alphabet):
        raise ParseError("'alphabet' must be an array of names")
    sidx = {s: i for i, s in enumerate(states)}
    lidx = {x: i for i, x in enumerate(alphabet)}
    if len(sidx) != len(states):
        raise ParseError("duplicate state names")
    if len(lidx) != len(alphabet):
        raise ParseError("duplicate letter names")

    delta_doc, rho_doc = doc["delta"], doc["rho"]
    if not isinstance(delta_doc, dict) or set(delta_doc) != set(alphabet):
        raise ParseError("'delta' must map every letter to a row of states")
    if not isinstance(rho_doc, dict) or set(rho_doc) != set(states):
        raise ParseError("'rho' must map every state to a row of letters")

    delta = []
    for x in alphabet:
        col = delta_doc[x]
        if not isinstance(col, list) or len(col) != len(states):
            raise ParseError(f"delta[{x!r}] must list one target per state")
        try:
            delta.append(tuple(sidx[t] for t in col))
        except KeyError as e:
            raise ParseError(f"delta[{x!r}] refers to unknown state {e.args[0]!r}") from None
    rho = []
    for q in states:
        row = rho_doc[q]
        if not isinstance(row, list) or len(row) != len(alphabet):
            raise ParseError(f"rho[{q!r}] must list one output per letter")
        try:
            rho.append(tuple(lidx[y] for y in row))
        except KeyError as e:
            raise ParseError(f"rho[{q!r}] refers to unknown letter {e.args[0]!r}") from None

    id_state = None
    if "id_state" in doc and doc["id_state"] is not None:
        if doc["id_state"] not in sidx:
            raise ParseError(f"id_state {doc['id_state']!r} is not a declared state")
        id_state = sidx[doc["id_state"]]
    return MealyAutomaton(tuple(delta), tuple(rho), tuple(states), tuple(alphabet), id_state)


def loads(text: str) -> MealyAutomaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return from_json_dict(doc)


def load(path) -> MealyAutomaton:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump(automaton: MealyAutomaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(automaton.dumps())
