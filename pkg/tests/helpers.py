"""Shared test utilities: exhaustive reference computations kept independent
of the solver paths they check."""

from __future__ import annotations

import itertools

import numpy as np

from afqubo.framework import ArgumentationFramework, Semantics
from afqubo import oracle
from afqubo.qubo import VAR


def random_framework(rng, n, density=0.3, self_attacks=False):
    attacks = [(i, j) for i in range(n) for j in range(n)
               if (i != j or self_attacks) and rng.random() < density]
    return ArgumentationFramework([f"a{i}" for i in range(n)], attacks)


def dense_matrix(problem):
    """Dense symmetric-split coefficient matrix plus linear/offset views."""
    n = problem.num_variables
    lin = np.zeros(n, dtype=np.int64)
    for i, c in problem.linear.items():
        lin[i] = c
    quad = np.zeros((n, n), dtype=np.int64)
    for (i, j), c in problem.quadratic.items():
        quad[i, j] = c
    return lin, quad, problem.offset


def bit_matrix(width, count=None):
    """All binary words of the width, one row per assignment."""
    count = (1 << width) if count is None else count
    codes = np.arange(count, dtype=np.int64)
    return ((codes[:, None] >> np.arange(width)) & 1).astype(np.int8)


def energies_of(problem, rows):
    """Exact energies of many assignments at once (int64 throughout)."""
    lin, quad, offset = dense_matrix(problem)
    rows = rows.astype(np.int64)
    return offset + rows @ lin + np.einsum("ri,ij,rj->r", rows, quad, rows)


def brute_force_min(problem):
    """Global minimum by full enumeration; only for small variable counts."""
    if problem.num_variables > 22:
        raise ValueError("problem too large for full enumeration")
    if problem.num_variables == 0:
        return problem.offset
    return int(energies_of(problem, bit_matrix(problem.num_variables)).min())


def completion_matrix(task, x_rows):
    """Chain-consistent full assignments for many decision rows at once."""
    count = x_rows.shape[0]
    full = np.zeros((count, task.problem.num_variables), dtype=np.int8)
    columns = {arg: x_rows[:, pos] for pos, arg in
               enumerate(sorted(task.decode.values()))}
    for v, arg in task.decode.items():
        full[:, v] = columns[arg]

    def value(operand):
        tag, val = operand
        if tag == VAR:
            return full[:, val]
        return np.full(count, val, dtype=np.int8)

    for chain in task.chains:
        vals = [value(op) for op in chain.inputs]
        if chain.op == "or_true":
            acc = vals[-1]
            for m in range(len(chain.aux) - 1, -1, -1):
                acc = np.maximum(vals[m + 1], acc)
                full[:, chain.aux[m]] = acc
            continue
        combine = np.maximum if chain.op == "or" else np.minimum
        acc = vals[0]
        for m, v in enumerate(vals[1:-1]):
            acc = combine(acc, v)
            full[:, chain.aux[m]] = acc
        if len(vals) > 1:
            acc = combine(acc, vals[-1])
        full[:, chain.out] = acc
    return full


def subset_energies(task):
    """Energy of every decision subset under its chain-consistent completion.

    Returns (masks over all framework arguments, energies); the fixed bits of
    the task are folded into the reported masks.
    """
    args = sorted(task.decode.values())
    width = len(args)
    x_rows = bit_matrix(width)
    full = completion_matrix(task, x_rows)
    energies = energies_of(task.problem, full)
    base = 0
    for arg, bit in task.fixed.items():
        if bit:
            base |= 1 << arg
    masks = np.full(x_rows.shape[0], base, dtype=np.int64)
    for pos, arg in enumerate(args):
        masks |= x_rows[:, pos].astype(np.int64) << arg
    return masks, energies


def zero_projections(task):
    """Argument masks whose completed assignments reach energy zero."""
    masks, energies = subset_energies(task)
    return sorted(int(m) for m in masks[energies == 0])


def fast_extension_scan(af):
    """Vectorized full-subset semantics scan, independent of the package oracle.

    Returns {"admissible": [...masks], "complete": [...], "stable": [...],
    "attacked": per-mask attacked bitsets} using subset-doubling over numpy
    arrays, so n up to ~22 stays fast.
    """
    n = af.num_arguments
    size = 1 << n
    codes = np.arange(size, dtype=np.int64)
    attacked = np.zeros(size, dtype=np.int64)
    attackers_of = np.zeros(size, dtype=np.int64)
    for i in range(n):
        half = 1 << i
        attacked[half:2 * half] = attacked[:half] | af.target_masks[i]
        attackers_of[half:2 * half] = attackers_of[:half] | af.attacker_masks[i]
    conflict_free = (attacked & codes) == 0
    admissible = conflict_free & ((attackers_of & ~attacked) == 0)
    complete_violation = np.zeros(size, dtype=bool)
    for i in range(n):
        defended_i = (af.attacker_masks[i] & ~attacked) == 0
        member_i = (codes >> i & 1) == 1
        complete_violation |= defended_i != member_i
    complete = conflict_free & ~complete_violation
    full = (1 << n) - 1
    stable = conflict_free & ((codes | attacked) == full)
    return {
        "admissible": codes[admissible].tolist(),
        "complete": codes[complete].tolist(),
        "stable": codes[stable].tolist(),
        "attacked": attacked,
    }


def enforcement_min_distance(af, target):
    """Exact minimal edit count for strict complete enforcement.

    Enumerates which outsiders end up attacked by the target; given that
    pattern every column's cheapest edit set is forced, so the scan over
    2^(n-k) patterns is exact.  Verified against plain breadth-first edit
    search in the tests that use it.
    """
    n = af.num_arguments
    members = set(target.indices())
    out = [i for i in range(n) if i not in members]
    atts = af.attacks
    forced = sum(1 for (a, b) in atts if a in members and b in members)
    best = None
    for pattern in itertools.product((0, 1), repeat=len(out)):
        t = dict(zip(out, pattern))
        cost = forced
        for j in out:
            hit_by_target = sum(1 for i in members if (i, j) in atts)
            if t[j]:
                cost += 0 if hit_by_target else 1
            else:
                cost += hit_by_target
        cost += sum(1 for (a, b) in atts
                    if b in members and a in out and not t[a])
        for j in out:
            if t[j]:
                continue
            if not any((l, j) in atts and l in out and not t[l] for l in range(n)):
                cost += 1
        if best is None or cost < best:
            best = cost
    return best


def bfs_min_distance(af, target, cap):
    """Breadth-first search over growing edit sets; None beyond the cap."""
    n = af.num_arguments
    members = set(target.indices())
    free = [(i, j) for i in range(n) for j in range(n)
            if not (i in members and j in members)]
    base = frozenset(af.attacks)
    forced_removed = {p for p in base if p[0] in members and p[1] in members}
    start = base - forced_removed
    for depth in range(cap + 1):
        for combo in itertools.combinations(free, depth):
            attacks = set(start)
            attacks.symmetric_difference_update(combo)
            candidate = ArgumentationFramework(af.arguments, attacks)
            if oracle.verify(candidate, target, Semantics.COMPLETE):
                return depth + len(forced_removed)
    return None
