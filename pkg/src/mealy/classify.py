"""Class membership tests: bireversible, reset, polynomial activity, and
the letter-grouping normal form for polynomial-activity machines."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .automaton import DEFAULT_SIZE_CAP, MealyAutomaton
from .elements import Element, is_identity
from .errors import CapabilityError, InvariantError, SizeBudgetError

DEFAULT_ACTIVITY_WORDS_CAP = 4096


# ---------------------------------------------------------------------------
# output sets and bireversibility


def output_sets(a: MealyAutomaton) -> tuple[frozenset[int], ...]:
    """Per state r, the output letters carried by edges entering r."""
    sets = [set() for _ in range(a.n_states)]
    for q in range(a.n_states):
        for x in range(a.n_letters):
            sets[a.delta[x][q]].add(a.rho[q][x])
    return tuple(frozenset(s) for s in sets)


def is_bireversible(a: MealyAutomaton) -> bool:
    """Invertible, reversible, and the inverse automaton reversible.

    Computed twice: through the inverse automaton and through the
    incoming-output-set criterion.  A disagreement would be a bug, not a
    property of the input, so it raises.
    """
    if not (a.is_invertible and a.is_reversible):
        return False
    by_inverse = a.inverse().is_reversible
    full = frozenset(range(a.n_letters))
    by_output_sets = all(s == full for s in output_sets(a))
    if by_inverse != by_output_sets:
        raise AssertionError(
            "bireversibility criteria disagree "
            f"(inverse-reversible={by_inverse}, output-sets={by_output_sets})"
        )
    return by_inverse


# ---------------------------------------------------------------------------
# reset automata


def is_reset(a: MealyAutomaton) -> bool:
    """True iff each transition column is constant (delta_x(q) = phi(x))."""
    return all(len(set(col)) == 1 for col in a.delta)


def is_unfolded_reset(a: MealyAutomaton) -> bool:
    """Reset with Q = Sigma (by name) and phi the identity."""
    return (
        a.n_states == a.n_letters
        and a.state_names == a.letter_names
        and all(a.delta[x][0] == x for x in range(a.n_letters))
        and is_reset(a)
    )


def unfold_reset(a: MealyAutomaton) -> MealyAutomaton:
    """Rename the states of a reset automaton so that Q = Sigma and phi = id.

    Only the rows of the states phi(x) survive; old states outside the image
    of phi have no ingoing edges and are pruned (repeating the pruning adds
    nothing, since every surviving state keeps ingoing edges from everyone).
    The renaming is by construction: the new state named after letter x is
    the old state phi(x) = delta_x(anything).
    """
    if not is_reset(a):
        raise CapabilityError("cannot unfold: not a reset automaton")
    phi = [a.delta[x][0] for x in range(a.n_letters)]
    rho = tuple(a.rho[phi[x]] for x in range(a.n_letters))
    delta = tuple(tuple(x for _ in range(a.n_letters)) for x in range(a.n_letters))
    return MealyAutomaton(delta, rho, a.letter_names, a.letter_names)


# ---------------------------------------------------------------------------
# cycle structure and activity


@dataclass(frozen=True)
class CycleStructure:
    """Cycle data of the transition multigraph restricted to non-id states.

    Parallel letters count as distinct edges: a state with two self-loop
    letters already has exponentially many walks through it.
    """

    components: tuple[tuple[int, ...], ...]  # SCCs, reverse topological order
    is_cycle: tuple[bool, ...]  # component is a single simple cycle
    is_entangled: tuple[bool, ...]  # component has an edge but is not a cycle
    max_cycles_on_path: int  # cycle components on the heaviest condensation path


def _non_id_edges(a: MealyAutomaton):
    skip = a.id_state
    for q in range(a.n_states):
        if q == skip:
            continue
        for x in range(a.n_letters):
            t = a.delta[x][q]
            if t != skip:
                yield q, x, t


def _tarjan_scc(vertices, succ):
    """Iterative Tarjan; components come out in reverse topological order."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    components = []
    counter = [0]
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(tuple(comp))
    return components


def cycle_structure(a: MealyAutomaton) -> CycleStructure:
    if a.id_state is None:
        raise CapabilityError("cycle structure needs a designated identity state")
    vertices = [q for q in range(a.n_states) if q != a.id_state]
    succ = {q: [] for q in vertices}
    out_edges = {q: [] for q in vertices}  # with letter multiplicity
    for q, x, t in _non_id_edges(a):
        succ[q].append(t)
        out_edges[q].append(t)
    components = _tarjan_scc(vertices, succ)
    comp_of = {}
    for i, comp in enumerate(components):
        for q in comp:
            comp_of[q] = i

    is_cycle, is_entangled = [], []
    for comp in components:
        members = set(comp)
        internal_degrees = [sum(1 for t in out_edges[q] if t in members) for q in comp]
        has_edge = any(d > 0 for d in internal_degrees)
        cycle = has_edge and all(d == 1 for d in internal_degrees)
        is_cycle.append(cycle)
        is_entangled.append(has_edge and not cycle)

    # longest condensation path counting cycle components; components are
    # already in reverse topological order, so successors are computed first
    best = [0] * len(components)
    for i, comp in enumerate(components):
        succ_best = 0
        for q in comp:
            for t in out_edges[q]:
                j = comp_of[t]
                if j != i:
                    succ_best = max(succ_best, best[j])
        best[i] = succ_best + (1 if is_cycle[i] else 0)
    max_cycles = max(best, default=0)
    return CycleStructure(
        tuple(components), tuple(is_cycle), tuple(is_entangled), max_cycles
    )


@dataclass(frozen=True)
class Activity:
    """Activity verdict: not-polynomial, finitary, or polynomial(degree)."""

    kind: str  # "not-polynomial" | "finitary" | "polynomial"
    degree: int | None = None

    @property
    def is_polynomial(self) -> bool:
        return self.kind in ("finitary", "polynomial")

    def in_pol(self, d: int) -> bool:
        """Membership in the class of activity bounded by degree d (d >= -1)."""
        if self.kind == "finitary":
            return True
        if self.kind == "polynomial":
            return self.degree <= d
        return False

    def render(self) -> str:
        if self.kind == "polynomial":
            return f"polynomial({self.degree})"
        return self.kind


def activity_class(a: MealyAutomaton) -> Activity:
    """Classify the growth of the per-state activity functions.

    Polynomial iff no strongly connected part of the non-id transition
    multigraph holds two distinct simple cycles; the degree is the maximal
    number of cycle components met along one directed path, minus one.
    """
    cs = cycle_structure(a)
    if any(cs.is_entangled):
        return Activity("not-polynomial")
    if cs.max_cycles_on_path == 0:
        return Activity("finitary")
    return Activity("polynomial", cs.max_cycles_on_path - 1)


def activity_count(
    a: MealyAutomaton, t, length: int, words_cap: int = DEFAULT_ACTIVITY_WORDS_CAP
) -> int:
    """Number of words of the given length whose section at t is not id.

    Plain enumeration over Sigma^length; the section of a single state is
    a single state, so the check is syntactic.
    """
    if a.id_state is None:
        raise CapabilityError("activity needs a designated identity state")
    q0 = a.state_index(t) if isinstance(t, str) else t
    if a.n_letters**length > words_cap:
        raise SizeBudgetError(
            f"{a.n_letters}^{length} words exceed the cap {words_cap}"
        )
    count = 0
    for w in product(range(a.n_letters), repeat=length):
        q = q0
        for x in w:
            q = a.delta[x][q]
        if q != a.id_state:
            count += 1
    return count


# ---------------------------------------------------------------------------
# normal form


@dataclass(frozen=True)
class NormalForm:
    automaton: MealyAutomaton
    cycle_lcm: int  # lcm of simple cycle sizes (id self-loop included)
    selfloop_depth: int  # max distance to a self-loop state after grouping

    @property
    def grouping(self) -> int:
        return self.cycle_lcm * self.selfloop_depth


def _selfloop_states(a: MealyAutomaton) -> set[int]:
    return {
        q
        for q in range(a.n_states)
        if any(a.delta[x][q] == q for x in range(a.n_letters))
    }


def _max_distance_to_selfloop(a: MealyAutomaton) -> int:
    """Max over states of the shortest distance to a state with a self-loop."""
    targets = _selfloop_states(a)
    dist = {q: 0 for q in targets}
    frontier = list(targets)
    preds = {q: set() for q in range(a.n_states)}
    for q in range(a.n_states):
        for x in range(a.n_letters):
            preds[a.delta[x][q]].add(q)
    d = 0
    while frontier:
        d += 1
        nxt = []
        for q in frontier:
            for p in preds[q]:
                if p not in dist:
                    dist[p] = d
                    nxt.append(p)
        frontier = nxt
    if len(dist) != a.n_states:
        raise InvariantError("some state cannot reach a self-loop")
    return max(dist.values())


def normal_form(a: MealyAutomaton, size_cap: int = DEFAULT_SIZE_CAP) -> NormalForm:
    """Group letters until all cycles are self-loops one step away.

    With ell the lcm of the simple-cycle sizes, grouping by ell turns every
    cycle into a self-loop; with d the largest distance to a self-loop state
    after that, grouping by d*ell leaves a DAG plus self-loops where every
    state has, or points at, a self-loop, and the sink is the id state.
    """
    act = activity_class(a)
    if not act.is_polynomial:
        raise CapabilityError("normal form needs polynomial activity")
    cs = cycle_structure(a)
    ell = 1  # the id self-loop counts as a trivial cycle of length 1
    for comp, cyc in zip(cs.components, cs.is_cycle):
        if cyc:
            ell = math.lcm(ell, len(comp))
    grouped = a.wop(ell, size_cap) if ell > 1 else a
    d = max(1, _max_distance_to_selfloop(grouped))
    return NormalForm(a.wop(d * ell, size_cap), ell, d)


# ---------------------------------------------------------------------------
# the combined report


@dataclass(frozen=True)
class ClassReport:
    invertible: bool
    reversible: bool
    bireversible: bool
    reset: bool
    activity: Activity | None  # None when there is no id state to anchor it
    connected: bool

    def to_json_dict(self) -> dict:
        return {
            "invertible": self.invertible,
            "reversible": self.reversible,
            "bireversible": self.bireversible,
            "reset": self.reset,
            "activity": self.activity.render() if self.activity else None,
            "connected": self.connected,
        }


def is_strongly_connected(a: MealyAutomaton) -> bool:
    succ = {
        q: [a.delta[x][q] for x in range(a.n_letters)] for q in range(a.n_states)
    }
    return len(_tarjan_scc(range(a.n_states), succ)) == 1


def classify(a: MealyAutomaton, strict: bool = False) -> ClassReport:
    """All membership tests in one pass.

    Identity detection is syntactic (the declared id state); strict mode
    additionally rejects automata where some undeclared state acts as the
    identity, so that the activity classification cannot silently lie.
    """
    if strict:
        for q in range(a.n_states):
            if q == a.id_state:
                continue
            res = is_identity(Element.generator(a, q))
            if res.verdict is True:
                raise InvariantError(
                    f"state {a.state_names[q]!r} acts as the identity but is not declared"
                )
    activity = activity_class(a) if a.id_state is not None else None
    return ClassReport(
        invertible=a.is_invertible,
        reversible=a.is_reversible,
        bireversible=is_bireversible(a),
        reset=is_reset(a),
        activity=activity,
        connected=is_strongly_connected(a),
    )
