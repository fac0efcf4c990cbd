"""Order detection: orbits, orbit signalizers, and infinite-order
certificates for the reset, reversible, and polynomial-activity classes."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from itertools import product

from .automaton import MealyAutomaton
from .classify import (
    _tarjan_scc,
    activity_class,
    is_bireversible,
    is_strongly_connected,
    is_unfolded_reset,
    normal_form,
)
from .elements import Element, _step_word, elements_equal, is_identity
from .errors import CapabilityError, InputDomainError, SizeBudgetError


@dataclass(frozen=True)
class Budgets:
    signalizer_vertices: int = 10_000
    power_cap: int = 64  # brute-force order search bound
    word_len_cap: int = 12  # orbit computations on words
    section_budget: int = 100_000  # identity/equality exploration
    comparison_depth: int = 8  # equality fallback over non-invertible automata
    element_len_cap: int = 512  # signalizer vertices longer than this truncate
    signalizer_ops: int = 2_000_000  # table-step meter; exceeding truncates

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value < 1:
                raise InputDomainError(f"budget {name} must be positive")


DEFAULT_BUDGETS = Budgets()


# ---------------------------------------------------------------------------
# orbits


def orbit(t: Element, letters, word_len_cap: int = DEFAULT_BUDGETS.word_len_cap) -> int:
    """Least alpha > 0 with t^alpha fixing the letter word."""
    letters = tuple(letters)
    if len(letters) > word_len_cap:
        raise SizeBudgetError(f"orbit word longer than cap {word_len_cap}")
    start = letters
    current = t.apply(letters)
    alpha = 1
    limit = t.automaton.n_letters ** len(letters) if letters else 1
    while current != start:
        current = t.apply(current)
        alpha += 1
        if alpha > limit:
            raise CapabilityError("word does not return to itself (element not invertible?)")
    return alpha


# ---------------------------------------------------------------------------
# orbit signalizer


@dataclass(frozen=True)
class OrbitSignalizer:
    root: Element
    vertices: tuple[Element, ...]
    edges: tuple[tuple[int, int, int, int], ...]  # (from, letter, orbit label, to)
    complete: bool
    parents: tuple[tuple[int, int] | None, ...]  # BFS parent (vertex, letter)

    def path_to(self, vid: int) -> tuple[int, ...]:
        letters = []
        while self.parents[vid] is not None:
            vid, x = self.parents[vid]
            letters.append(x)
        return tuple(reversed(letters))


def orbit_signalizer(t: Element, budgets: Budgets = DEFAULT_BUDGETS) -> OrbitSignalizer:
    """Breadth-first closure of the section-representative graph of t.

    Vertices are the sections t^{Orb(x)}|_x, deduplicated by tree-map
    equality; an edge per letter carries the one-letter orbit size of its
    source.  Equality calls that stay inconclusive keep vertices apart,
    which can only unroll cycles (and then the budget truncates), never
    merge distinct elements, so a completed graph is trustworthy.
    """
    aut = t.automaton
    if not aut.is_invertible:
        raise CapabilityError("orbit signalizer needs an invertible automaton")
    k = aut.n_letters
    probe_words = [w for d in (1, 2, 3) for w in product(range(k), repeat=d)]
    # vertex dedup only needs cheap definite-True equalities; anything the
    # small budget cannot settle is kept as a separate vertex, which is sound
    eq_budget = min(budgets.section_budget, 1024)

    def signature(el: Element):
        return tuple(el.apply(w) for w in probe_words)

    vertices: list[Element] = [t]
    parents: list[tuple[int, int] | None] = [None]
    buckets: dict = {signature(t): [0]}
    eq_memo: dict = {}
    edges: list[tuple[int, int, int, int]] = []
    queue = deque([0])
    complete = True
    ops = 0  # rough table-step meter so hopeless walks stop in bounded time

    def find_or_add(el: Element, parent: tuple[int, int]):
        sig = signature(el)
        bucket = buckets.setdefault(sig, [])
        for vid in bucket:
            key = (el.word, vertices[vid].word)
            if key not in eq_memo:
                eq_memo[key] = elements_equal(el, vertices[vid], eq_budget).verdict
            if eq_memo[key] is True:
                return vid, False
        vertices.append(el)
        parents.append(parent)
        bucket.append(len(vertices) - 1)
        return len(vertices) - 1, True

    while queue:
        vid = queue.popleft()
        el = vertices[vid]
        root_action = el.root_action()
        ops += len(el.word) * k
        if ops > budgets.signalizer_ops:
            complete = False
            break
        for y in range(k):
            # orbit of the single letter y is its cycle length at the root
            m = 1
            cur = root_action[y]
            while cur != y:
                cur = root_action[cur]
                m += 1
            # child = (el^m)|_y, assembled section by section around the cycle
            parts = []
            cur = y
            word = el.word
            for _ in range(m):
                out, nxt = _step_word(aut, word, cur)
                parts.extend(nxt)
                cur = out
            if len(parts) > budgets.element_len_cap:
                # vertex words grow with the orbit products; beyond the cap
                # the walk is cut short and the result marked truncated
                complete = False
                continue
            child = Element(aut, tuple(parts))
            if len(vertices) >= budgets.signalizer_vertices:
                # only adding could overflow; look for an existing vertex
                sig = signature(child)
                existing = None
                for cand in buckets.get(sig, []):
                    if elements_equal(child, vertices[cand], eq_budget).verdict is True:
                        existing = cand
                        break
                if existing is None:
                    complete = False
                    continue
                cid, fresh = existing, False
            else:
                cid, fresh = find_or_add(child, (vid, y))
            edges.append((vid, y, m, cid))
            if fresh:
                queue.append(cid)
        if not complete:
            break
    return OrbitSignalizer(t, tuple(vertices), tuple(edges), complete, tuple(parents))


def _signalizer_order(sig: OrbitSignalizer):
    """('infinite', witness) or ('finite', lcm of path label products, info).

    Only valid on a complete signalizer.  The label lcm diverges exactly
    when a label > 1 sits on a reachable cycle; otherwise each label > 1 is
    crossed at most once per path and the product set is finite.
    """
    n = len(sig.vertices)
    succ = {i: [] for i in range(n)}
    for u, _, _, w in sig.edges:
        succ[u].append(w)
    comps = _tarjan_scc(range(n), succ)
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    for u, y, m, w in sig.edges:
        if m > 1 and comp_of[u] == comp_of[w]:
            witness = {
                "path_to_cycle": list(sig.path_to(u)),
                "cycle_letter": y,
                "cycle_label": m,
            }
            return "infinite", None, witness
    # lcm of label products along all paths from the root
    seen = {(0, 1)}
    queue = deque([(0, 1)])
    out_edges = {i: [] for i in range(n)}
    for u, _, m, w in sig.edges:
        out_edges[u].append((m, w))
    result = 1
    while queue:
        v, p = queue.popleft()
        result = math.lcm(result, p)
        for m, w in out_edges[v]:
            pair = (w, p * m)
            if pair not in seen:
                if len(seen) > 1_000_000:
                    raise AssertionError("path product closure exploded on an all-1-cycle graph")
                seen.add(pair)
                queue.append(pair)
    return "finite", result, {"vertices": n, "path_products_lcm": result}


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class OrderCertificate:
    verdict: str  # "infinite" | "finite" | "inconclusive"
    rule: str | None = None  # reset-pi | bounded-selfloop |
    # reversible-nonbireversible | orbit-signalizer | brute-force
    order: int | None = None
    witness: dict = field(default_factory=dict)
    element: str | None = None
    scope: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "rule": self.rule,
            "order": self.order,
            "witness": self.witness,
            "element": self.element,
            "scope": self.scope,
        }


def _pi_map(a: MealyAutomaton) -> list[int]:
    return [a.rho_inverse[q][q] for q in range(a.n_states)]


def cert_reset(a: MealyAutomaton) -> OrderCertificate:
    """Infinite-order certificate for unfolded reset automata.

    With pi(q) = rho_q^{-1}(q): if pi is not a permutation, pick x0 off
    every pi-cycle with x1 = pi(x0) on a cycle (x1 ... xl); acting any state
    on x0 (x1...xl)^alpha shifts the pattern one slot per application, so
    every state has infinite order.
    """
    if not a.is_invertible:
        raise CapabilityError("reset certificate needs an invertible automaton")
    if not is_unfolded_reset(a):
        raise CapabilityError("reset certificate needs an unfolded reset automaton")
    pi = _pi_map(a)
    if len(set(pi)) == a.n_states:
        return OrderCertificate(
            "inconclusive",
            rule="reset-pi",
            witness={"pi": [a.state_names[v] for v in pi], "pi_is_permutation": True},
        )
    on_cycle = set()
    for q in range(a.n_states):
        seen = {}
        cur = q
        while cur not in seen:
            seen[cur] = True
            cur = pi[cur]
        # cur is the first repeated point: walk its cycle
        cyc = [cur]
        nxt = pi[cur]
        while nxt != cur:
            cyc.append(nxt)
            nxt = pi[nxt]
        on_cycle.update(cyc)
    x0 = min(q for q in range(a.n_states) if q not in on_cycle and pi[q] in on_cycle)
    cycle = [pi[x0]]
    nxt = pi[cycle[0]]
    while nxt != cycle[0]:
        cycle.append(nxt)
        nxt = pi[nxt]
    return OrderCertificate(
        "infinite",
        rule="reset-pi",
        witness={
            "pi": [a.state_names[v] for v in pi],
            "pi_is_permutation": False,
            "x0": a.state_names[x0],
            "cycle": [a.state_names[v] for v in cycle],
            "word_family": "x0 (x1...xl)^alpha",
        },
        scope="every state",
    )


def reset_witness_word(a: MealyAutomaton, cert: OrderCertificate, alpha: int) -> tuple[int, ...]:
    """The letter word x0 (x1...xl)^alpha from a firing reset certificate."""
    x0 = a.letter_index(cert.witness["x0"])
    cycle = [a.letter_index(v) for v in cert.witness["cycle"]]
    return (x0, *cycle * alpha)


def _bounded_selfloop_hits(a: MealyAutomaton) -> tuple[dict, "object"]:
    """States certified infinite by a moved self-loop letter in the normal form.

    Only states of bounded activity qualify (no further non-id self-loop
    reachable in the normal form): the strictly-growing-orbit argument needs
    the section set along the loop letter to stay finite.
    """
    nf = normal_form(a)
    b = nf.automaton
    non_id_selfloops = {
        q
        for q in range(b.n_states)
        if q != b.id_state and any(b.delta[x][q] == q for x in range(b.n_letters))
    }
    succ = {q: {b.delta[x][q] for x in range(b.n_letters)} for q in range(b.n_states)}

    def reaches_other_selfloop(t):
        seen = {t}
        stack = [t]
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w in non_id_selfloops and w != t:
                    return True
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    hits = {}
    for t in sorted(non_id_selfloops):
        if reaches_other_selfloop(t):
            continue
        for x in range(b.n_letters):
            if b.delta[x][t] == t and b.rho[t][x] != x:
                hits[t] = x
                break
    return hits, nf


def cert_bounded(a: MealyAutomaton) -> OrderCertificate:
    """Infinite-order certificate through the normal form self-loop scan."""
    if a.id_state is None or not activity_class(a).is_polynomial:
        raise CapabilityError("self-loop certificate needs polynomial activity")
    hits, nf = _bounded_selfloop_hits(a)
    if not hits:
        return OrderCertificate(
            "inconclusive",
            rule="bounded-selfloop",
            witness={"grouping": nf.grouping, "moved_selfloops": {}},
        )
    t, x = next(iter(sorted(hits.items())))
    b = nf.automaton
    return OrderCertificate(
        "infinite",
        rule="bounded-selfloop",
        witness={
            "state": b.state_names[t],
            "selfloop_letter": b.letter_names[x],
            "produced_letter": b.letter_names[b.rho[t][x]],
            "grouping": nf.grouping,
            "all_hits": {b.state_names[q]: b.letter_names[i] for q, i in sorted(hits.items())},
        },
        element=b.state_names[t],
        scope="the named state",
    )


def _weak_components(a: MealyAutomaton) -> list[list[int]]:
    adj = {q: set() for q in range(a.n_states)}
    for q in range(a.n_states):
        for x in range(a.n_letters):
            t = a.delta[x][q]
            adj[q].add(t)
            adj[t].add(q)
    seen = set()
    comps = []
    for q in range(a.n_states):
        if q in seen:
            continue
        comp = []
        stack = [q]
        seen.add(q)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _subautomaton(a: MealyAutomaton, states: list[int]) -> MealyAutomaton:
    pos = {q: i for i, q in enumerate(states)}
    delta = tuple(tuple(pos[a.delta[x][q]] for q in states) for x in range(a.n_letters))
    rho = tuple(a.rho[q] for q in states)
    names = tuple(a.state_names[q] for q in states)
    id_state = pos.get(a.id_state) if a.id_state is not None else None
    return MealyAutomaton(delta, rho, names, a.letter_names, id_state)


def cert_reversible(a: MealyAutomaton) -> OrderCertificate:
    """Torsion-freeness certificate for invertible reversible automata.

    Each weakly connected component of a reversible automaton is strongly
    connected; if no component is bireversible as a standalone automaton,
    every nonempty positive state word has infinite order.
    """
    if not (a.is_invertible and a.is_reversible):
        raise CapabilityError("certificate needs an invertible reversible automaton")
    components = _weak_components(a)
    details = []
    any_bireversible = False
    for comp in components:
        sub = _subautomaton(a, comp)
        if not is_strongly_connected(sub):
            raise AssertionError("a weak component of a reversible automaton must be strongly connected")
        bire = is_bireversible(sub)
        any_bireversible = any_bireversible or bire
        details.append(
            {"states": [a.state_names[q] for q in comp], "bireversible": bire}
        )
    if any_bireversible:
        return OrderCertificate(
            "inconclusive",
            rule="reversible-nonbireversible",
            witness={"components": details},
        )
    return OrderCertificate(
        "infinite",
        rule="reversible-nonbireversible",
        witness={
            "components": details,
            "component_meaning": "connected component of the automaton, taken standalone",
        },
        scope="every nonempty positive state word",
    )


# ---------------------------------------------------------------------------
# order computation and dispatch


def _is_positive(t: Element) -> bool:
    return all(s == 1 for _, s in t.word)


def _single_positive_state(t: Element) -> int | None:
    if len(t.word) == 1 and t.word[0][1] == 1:
        return t.word[0][0]
    return None


def _cert_from_signalizer(t: Element, budgets: Budgets) -> OrderCertificate | None:
    sig = orbit_signalizer(t, budgets)
    if not sig.complete:
        return None
    verdict, m, info = _signalizer_order(sig)
    if verdict == "infinite":
        return OrderCertificate(
            "infinite", rule="orbit-signalizer", witness=info, element=t.describe()
        )
    check = is_identity(t**m, budgets.section_budget) if m <= budgets.power_cap else None
    if check is not None and check.verdict is False:
        raise AssertionError(f"signalizer order {m} contradicts the identity check")
    return OrderCertificate(
        "finite", rule="orbit-signalizer", order=m, witness=info, element=t.describe()
    )


def _class_certificates(a: MealyAutomaton):
    """The cheap class certificates, computed once per automaton."""
    reset_cert = None
    if a.is_invertible and is_unfolded_reset(a):
        reset_cert = cert_reset(a)
    reversible_cert = None
    if a.is_invertible and a.is_reversible:
        reversible_cert = cert_reversible(a)
    bounded_hits, nf = {}, None
    if a.id_state is not None and activity_class(a).is_polynomial:
        bounded_hits, nf = _bounded_selfloop_hits(a)
    return reset_cert, reversible_cert, bounded_hits, nf


def _pipeline(
    t: Element,
    budgets: Budgets,
    certs=None,
    class_first: bool = True,
) -> OrderCertificate:
    a = t.automaton
    if certs is None:
        certs = _class_certificates(a)
    reset_cert, reversible_cert, bounded_hits, nf = certs

    def try_class() -> OrderCertificate | None:
        q = _single_positive_state(t)
        if reset_cert is not None and reset_cert.verdict == "infinite" and q is not None:
            return replace(reset_cert, element=t.describe())
        if (
            reversible_cert is not None
            and reversible_cert.verdict == "infinite"
            and _is_positive(t)
            and len(t.word) > 0
        ):
            return replace(reversible_cert, element=t.describe())
        if q is not None and q in bounded_hits:
            b = nf.automaton
            x = bounded_hits[q]
            return OrderCertificate(
                "infinite",
                rule="bounded-selfloop",
                witness={
                    "state": b.state_names[q],
                    "selfloop_letter": b.letter_names[x],
                    "produced_letter": b.letter_names[b.rho[q][x]],
                    "grouping": nf.grouping,
                },
                element=t.describe(),
                scope="the named state",
            )
        return None

    if class_first:
        got = try_class()
        if got is not None:
            return got
    if a.is_invertible:
        got = _cert_from_signalizer(t, budgets)
        if got is not None:
            return got
    if not class_first:
        got = try_class()
        if got is not None:
            return got
    # bounded brute force: ascending powers, so the first hit is the order
    for m in range(1, budgets.power_cap + 1):
        res = is_identity(t**m, budgets.section_budget)
        if res.verdict is True:
            return OrderCertificate(
                "finite",
                rule="brute-force",
                order=m,
                witness={"checked_powers": m},
                element=t.describe(),
            )
        if res.verdict is None:
            return OrderCertificate(
                "inconclusive",
                rule="brute-force",
                witness={"stopped_at_power": m, "reason": "identity check budget"},
                element=t.describe(),
            )
    return OrderCertificate(
        "inconclusive",
        rule="brute-force",
        witness={"checked_powers": budgets.power_cap},
        element=t.describe(),
    )


def order_of(t: Element, budgets: Budgets = DEFAULT_BUDGETS) -> OrderCertificate:
    """Order of an element: signalizer first, class certificates as fallback."""
    return _pipeline(t, budgets, class_first=False)


def analyze(a: MealyAutomaton, budgets: Budgets = DEFAULT_BUDGETS) -> dict[str, OrderCertificate]:
    """Strongest per-generator verdict, cheap class certificates first."""
    certs = _class_certificates(a)
    out = {}
    for q in range(a.n_states):
        t = Element.generator(a, q)
        out[a.state_names[q]] = _pipeline(t, budgets, certs, class_first=True)
    return out
