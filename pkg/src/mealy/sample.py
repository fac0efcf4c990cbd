"""Seed-reproducible uniform samplers for the automaton classes under study.

All randomness flows through numpy's PCG64; per-trial streams are derived
with ``SeedSequence([seed, trial_index])`` so that trials are independent
of execution order and of each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import MealyAutomaton
from .classify import activity_class
from .errors import CapabilityError, InputDomainError, SamplingExhaustedError

RNG_IDENTITY = "numpy PCG64, per-trial stream SeedSequence([seed, trial_index])"

DEFAULT_MAX_REJECTS = 100_000

FAMILIES = (
    "invertible-reversible",
    "reset-unfolded",
    "reset-minimal",
    "pol",
    "pol0-conditional",
)


@dataclass(frozen=True)
class SamplerSpec:
    """Everything that determines a sampled automaton."""

    family: str
    n: int
    k: int
    seed: int
    trial_index: int = 0
    degree: int | None = None  # for the pol family

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputDomainError(f"unknown sampler family {self.family!r}")

    def to_json_dict(self) -> dict:
        doc = {
            "class": self.family,
            "n": self.n,
            "k": self.k,
            "seed": self.seed,
            "trial_index": self.trial_index,
        }
        if self.degree is not None:
            doc["degree"] = self.degree
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SamplerSpec":
        return cls(
            family=doc["class"],
            n=doc["n"],
            k=doc["k"],
            seed=doc["seed"],
            trial_index=doc.get("trial_index", 0),
            degree=doc.get("degree"),
        )


def make_rng(seed: int, trial_index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial_index])))


def random_permutation(rng: np.random.Generator, size: int) -> tuple[int, ...]:
    """Uniform permutation via numpy's Fisher-Yates (no modulo bias)."""
    return tuple(int(v) for v in rng.permutation(size))


def sample_invertible_reversible(n: int, k: int, rng: np.random.Generator) -> MealyAutomaton:
    """k independent uniform state permutations, n uniform letter permutations."""
    if n < 1 or k < 1:
        raise InputDomainError("need n >= 1 and k >= 1")
    delta = tuple(random_permutation(rng, n) for _ in range(k))
    rho = tuple(random_permutation(rng, k) for _ in range(n))
    return MealyAutomaton(delta, rho)


def sample_reset(k: int, rng: np.random.Generator) -> MealyAutomaton:
    """Unfolded invertible reset automaton: Q = Sigma, uniform production rows."""
    if k < 1:
        raise InputDomainError("need k >= 1")
    names = tuple(str(x) for x in range(k))
    delta = tuple(tuple(x for _ in range(k)) for x in range(k))
    rho = tuple(random_permutation(rng, k) for _ in range(k))
    return MealyAutomaton(delta, rho, names, names)


def sample_reset_minimal(
    k: int, rng: np.random.Generator, max_rejects: int = DEFAULT_MAX_REJECTS
) -> MealyAutomaton:
    """Reset sampling conditioned on pairwise distinct production rows."""
    if k < 2:
        raise CapabilityError("minimal reset sampling needs k >= 2")
    for _ in range(max_rejects):
        a = sample_reset(k, rng)
        if len(set(a.rho)) == k:
            return a
    raise SamplingExhaustedError(f"no minimal reset automaton after {max_rejects} draws")


def _pol_skeleton(n: int, k: int, rng: np.random.Generator) -> MealyAutomaton:
    """Random transition table with a pinned identity state and identity rows."""
    id_state = n - 1
    delta = []
    for _ in range(k):
        col = [int(v) for v in rng.integers(0, n, size=n - 1)]
        col.append(id_state)
        delta.append(tuple(col))
    rho = tuple(tuple(range(k)) for _ in range(n))
    names = tuple([f"q{i}" for i in range(n - 1)] + ["e"])
    return MealyAutomaton(tuple(delta), rho, names, id_state=id_state)


def attach_uniform_productions(a: MealyAutomaton, rng: np.random.Generator) -> MealyAutomaton:
    """Fresh uniform production permutations everywhere but the identity row."""
    rho = tuple(
        tuple(range(a.n_letters)) if q == a.id_state else random_permutation(rng, a.n_letters)
        for q in range(a.n_states)
    )
    return MealyAutomaton(a.delta, rho, a.state_names, a.letter_names, a.id_state)


def sample_pol(
    d: int,
    n: int,
    k: int,
    rng: np.random.Generator,
    max_rejects: int = DEFAULT_MAX_REJECTS,
    inclusive: bool = False,
) -> MealyAutomaton:
    """Rejection sampler for polynomial-activity automata.

    Transition tables are uniform over all id-respecting tables and kept
    when the activity has degree exactly d (d = -1 asks for finitary); with
    ``inclusive`` the whole class of activity bounded by degree d is kept
    instead.  Production rows are then uniform invertible, identity row
    pinned.  Rejection preserves uniformity on the accepted set.
    """
    if n < 1 or k < 1:
        raise InputDomainError("need n >= 1 and k >= 1")
    if d < -1:
        raise InputDomainError("degree must be >= -1")
    for _ in range(max_rejects):
        skeleton = _pol_skeleton(n, k, rng)
        act = activity_class(skeleton)
        if inclusive:
            ok = act.in_pol(d)
        elif d == -1:
            ok = act.kind == "finitary"
        else:
            ok = act.kind == "polynomial" and act.degree == d
        if ok:
            return attach_uniform_productions(skeleton, rng)
    raise SamplingExhaustedError(
        f"no degree-{d} automaton with n={n}, k={k} after {max_rejects} draws"
    )


def sample_pol_conditional(skeleton: MealyAutomaton, rng: np.random.Generator) -> MealyAutomaton:
    """Resample the production rows of a polynomial non-finitary skeleton.

    Keeps the transition functions and the identity row: the conditional
    class of automata sharing the skeleton.  The activity classification is
    untouched because it only reads the transitions.
    """
    if skeleton.id_state is None:
        raise CapabilityError("conditional sampling needs a designated identity state")
    act = activity_class(skeleton)
    if not act.is_polynomial or act.kind == "finitary":
        raise CapabilityError("conditional sampling needs polynomial non-finitary activity")
    return attach_uniform_productions(skeleton, rng)


def sample_from_spec(spec: SamplerSpec, skeleton: MealyAutomaton | None = None) -> MealyAutomaton:
    """Materialize a SamplerSpec; (seed, trial_index) fixes the output."""
    rng = make_rng(spec.seed, spec.trial_index)
    if spec.family == "invertible-reversible":
        return sample_invertible_reversible(spec.n, spec.k, rng)
    if spec.family == "reset-unfolded":
        return sample_reset(spec.k, rng)
    if spec.family == "reset-minimal":
        return sample_reset_minimal(spec.k, rng)
    if spec.family == "pol":
        degree = 0 if spec.degree is None else spec.degree
        return sample_pol(degree, spec.n, spec.k, rng)
    if spec.family == "pol0-conditional":
        if skeleton is None:
            skeleton = conditional_skeleton(spec.n, spec.k)
        return sample_pol_conditional(skeleton, rng)
    raise InputDomainError(f"unknown sampler family {spec.family!r}")


def conditional_skeleton(n: int, k: int) -> MealyAutomaton:
    """Canonical bounded non-finitary skeleton: q0 loops on letter 0, all
    other transitions fall to the identity state."""
    if n < 2 or k < 2:
        raise InputDomainError("need n >= 2 and k >= 2")
    id_state = n - 1
    delta = []
    for x in range(k):
        col = [0 if (x == 0 and q == 0) else id_state for q in range(n - 1)]
        col.append(id_state)
        delta.append(tuple(col))
    rho = tuple(tuple(range(k)) for _ in range(n))
    names = tuple([f"q{i}" for i in range(n - 1)] + ["e"])
    return MealyAutomaton(tuple(delta), rho, names, id_state=id_state)
