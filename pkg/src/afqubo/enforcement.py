"""Strict enforcement of a target set as a complete extension.

The attack relation itself becomes binary: r_ij says whether argument i
attacks argument j in the edited framework.  Arguments are permuted so the
target T occupies the first k internal positions; intra-target attacks are
fixed to zero, t_i tracks "attacked by T", s_ji tracks "j attacks i and T
does not counter j", and every non-member must keep at least one such
undefended attacker.  The objective is the edit count (Hamming distance
between attack relations) plus lambda times the completeness penalty, with
lambda above the largest achievable distance so that any constraint
violation costs more than any amount of editing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .framework import ArgumentSet, ArgumentationFramework, Semantics
from . import oracle
from .anneal import AnnealParams, sample
from .qubo import CONST, VAR, QuboProblem, VariableRegistry, or_true_chain, _chain


@dataclass
class EnforcementTask:
    """Built edit-minimization problem for one framework and target."""

    af: ArgumentationFramework
    target: ArgumentSet
    lam: int
    problem: QuboProblem
    registry: VariableRegistry
    order: tuple[int, ...]              # internal position -> original index
    k: int
    r_vars: dict[tuple[int, int], int]  # original (i, j) -> variable
    fixed_zero: frozenset               # original intra-target pairs
    internal_r: dict[tuple[int, int], int] = field(default_factory=dict)
    t_vars: dict[int, int] = field(default_factory=dict)      # internal i -> var
    s_vars: dict[tuple[int, int], int] = field(default_factory=dict)
    nd_chains: list[tuple[int, tuple]] = field(default_factory=list)

    @property
    def num_decision_variables(self) -> int:
        return len(self.r_vars)

    @property
    def paper_estimate(self) -> int:
        n = self.af.num_arguments
        return 3 * n * n + n * (self.k - 3)

    def encode_assignment(self, attacks) -> np.ndarray:
        """Assignment whose r bits carry ``attacks`` and whose helpers are
        logically consistent with them."""
        attacks = set(attacks)
        bad = attacks & set(self.fixed_zero)
        if bad:
            raise ValueError(f"attacks {sorted(bad)} are fixed to zero inside the target")
        bits = np.zeros(self.problem.num_variables, dtype=np.int8)
        for pair, v in self.r_vars.items():
            bits[v] = 1 if pair in attacks else 0
        n = self.af.num_arguments
        k = self.k

        def r_bit(i: int, j: int) -> int:
            if i < k and j < k:
                return 0
            return bits[self.internal_r[(i, j)]]

        t_val = {}
        for i in range(n):
            t_val[i] = 0 if i < k else int(any(r_bit(j, i) for j in range(k)))
            if i in self.t_vars:
                bits[self.t_vars[i]] = t_val[i]
        for (j, i), v in self.s_vars.items():
            bits[v] = r_bit(j, i) & (1 - t_val[j])
        for i, aux in self.nd_chains:
            values = [r_bit(j, i) if j < k else bits[self.s_vars[(j, i)]]
                      for j in range(n)]
            acc = values[-1]
            for m in range(len(aux) - 1, -1, -1):
                acc = 1 if (values[m + 1] or acc) else 0
                bits[aux[m]] = acc
        return bits


@dataclass
class EnforcementResult:
    """Decoded attack relation with its distance and oracle verdict."""

    attacks: frozenset
    distance: int
    verified: bool
    energy: int
    constraint_penalty: int
    framework: ArgumentationFramework
    restarts: int = 0
    wall_time: float = 0.0


def hamming(attacks_a, attacks_b) -> int:
    """Symmetric-difference size between two attack relations."""
    return len(set(attacks_a) ^ set(attacks_b))


def default_lambda(n: int) -> int:
    # the value used at scale in practice, raised to the provably safe bound
    return max(100, n * n + 1)


def build_strict_complete(af: ArgumentationFramework, target,
                          lam: int | None = None) -> EnforcementTask:
    """Encode: make ``target`` exactly a complete extension, minimally."""
    if not isinstance(target, ArgumentSet):
        target = ArgumentSet.from_names(af, target)
    if target.size != af.num_arguments:
        raise ValueError("target does not match framework size")
    if len(target) == 0:
        raise ValueError("target set must be nonempty")
    n = af.num_arguments
    if lam is None:
        lam = default_lambda(n)
    if lam < n * n + 1:
        raise ValueError(
            f"lambda {lam} too small: must exceed the maximum distance {n * n}")

    members = list(target.indices())
    others = [i for i in range(n) if i not in target]
    order = tuple(members + others)
    k = len(members)
    names = [af.arguments[o] for o in order]

    q = QuboProblem()
    reg = VariableRegistry()
    r_vars: dict[tuple[int, int], int] = {}
    internal_r: dict[tuple[int, int], int] = {}
    fixed_zero = set()
    for i in range(n):
        for j in range(n):
            role = f"r:{names[i]}:{names[j]}"
            if i < k and j < k:
                reg.add(role, (VariableRegistry.CONST, 0))
                fixed_zero.add((order[i], order[j]))
            else:
                v = q.new_variable()
                reg.add(role, (VariableRegistry.VAR, v))
                r_vars[(order[i], order[j])] = v
                internal_r[(i, j)] = v

    # t_i = OR of attacks from the target onto i
    t_vars: dict[int, int] = {}
    t_aux_nominal = max(k - 2, 0)
    chain_plans = []
    for i in range(n):
        role = f"t:{names[i]}"
        if i < k:
            reg.add(role, (VariableRegistry.CONST, 0))
            for m in range(t_aux_nominal):
                reg.add(f"t_aux:{names[i]}:{m}", (VariableRegistry.PRUNED, None))
            continue
        inputs = [internal_r[(j, i)] for j in range(k)]
        if len(inputs) == 1:
            reg.add(role, (VariableRegistry.ALIAS, f"r:{names[0]}:{names[i]}"))
            continue
        v = q.new_variable()
        reg.add(role, (VariableRegistry.VAR, v))
        t_vars[i] = v
        chain_plans.append((role, v, inputs))
    for role, v, inputs in chain_plans:
        name = role[2:]
        aux = _chain(q, "or", v, [(VAR, w) for w in inputs], lam)
        for m, a in enumerate(aux):
            reg.add(f"t_aux:{name}:{m}", (VariableRegistry.VAR, a))
        for m in range(len(aux), t_aux_nominal):
            reg.add(f"t_aux:{name}:{m}", (VariableRegistry.PRUNED, None))

    def t_operand(i: int):
        if i < k:
            return (CONST, 0)
        if i in t_vars:
            return (VAR, t_vars[i])
        return (VAR, internal_r[(0, i)])  # k == 1 alias

    # s_ji = r_ji AND NOT t_j, as a quadratic penalty scaled by lambda
    s_vars: dict[tuple[int, int], int] = {}
    for j in range(n):
        for i in range(n):
            role = f"s:{names[j]}:{names[i]}"
            if j < k:
                if i < k:
                    reg.add(role, (VariableRegistry.CONST, 0))
                else:
                    reg.add(role, (VariableRegistry.ALIAS, f"r:{names[j]}:{names[i]}"))
                continue
            v = q.new_variable()
            reg.add(role, (VariableRegistry.VAR, v))
            s_vars[(j, i)] = v
            s_op, r_op, t_op = (VAR, v), (VAR, internal_r[(j, i)]), t_operand(j)
            q.add_term((s_op,), lam)
            q.add_term((r_op,), lam)
            q.add_term((r_op, t_op), -lam)
            q.add_term((s_op, r_op), -2 * lam)
            q.add_term((s_op, t_op), 2 * lam)

    # admissibility: no undefended attacker may hit the target
    for i in range(k):
        for j in range(k, n):
            q.add_linear(s_vars[(j, i)], lam)

    # completeness: every outsider keeps at least one undefended attacker
    nd_chains: list[tuple[int, tuple]] = []
    nd_aux_nominal = max(n - 2, 0)
    for i in range(k, n):
        operands = []
        for j in range(n):
            if j < k:
                operands.append((VAR, internal_r[(j, i)]))
            else:
                operands.append((VAR, s_vars[(j, i)]))
        aux = or_true_chain(q, operands, lam)
        nd_chains.append((i, tuple(aux)))
        for m, a in enumerate(aux):
            reg.add(f"nd_aux:{names[i]}:{m}", (VariableRegistry.VAR, a))
        for m in range(len(aux), nd_aux_nominal):
            reg.add(f"nd_aux:{names[i]}:{m}", (VariableRegistry.PRUNED, None))

    # edit distance to the original attack relation
    for i in range(n):
        for j in range(n):
            present = (order[i], order[j]) in af.attacks
            if i < k and j < k:
                if present:
                    q.add_offset(1)  # forced removal of an intra-target attack
                continue
            v = internal_r[(i, j)]
            if present:
                q.add_offset(1)
                q.add_linear(v, -1)
            else:
                q.add_linear(v, 1)

    return EnforcementTask(af=af, target=target, lam=lam, problem=q, registry=reg,
                           order=order, k=k, r_vars=r_vars,
                           fixed_zero=frozenset(fixed_zero), internal_r=internal_r,
                           t_vars=t_vars, s_vars=s_vars, nd_chains=nd_chains)


def decode_attacks(task: EnforcementTask, assignment) -> EnforcementResult:
    """Read the r bits back into an attack relation and verify it."""
    if len(assignment) != task.problem.num_variables:
        raise ValueError("assignment length does not match the problem")
    attacks = frozenset(pair for pair, v in task.r_vars.items() if assignment[v])
    distance = hamming(task.af.attacks, attacks)
    energy = task.problem.energy(assignment)
    slack = energy - distance
    if slack % task.lam:
        raise AssertionError("constraint energy is not a lambda multiple")
    framework = ArgumentationFramework(task.af.arguments, attacks)
    verified = oracle.verify(framework, task.target, Semantics.COMPLETE)
    return EnforcementResult(attacks, distance, verified, energy,
                             slack // task.lam, framework)


def enforce(af: ArgumentationFramework, target, params: AnnealParams | None = None,
            lam: int | None = None) -> EnforcementResult:
    """Anneal the edit problem, restarting until a verified solution appears.

    An unverified result after the restart/timeout budget is returned as-is
    with ``verified=False``; the caller decides how to report it.
    """
    task = build_strict_complete(af, target, lam)
    params = params or AnnealParams()
    if params.max_restart_iterations < 1:
        raise ValueError("need at least one restart iteration")
    started = time.monotonic()
    deadline = started + params.timeout_seconds
    best: EnforcementResult | None = None
    restarts = 0
    for iteration in range(params.max_restart_iterations):
        if time.monotonic() >= deadline and best is not None:
            break
        restarts = iteration + 1
        ss = sample(task.problem, params.with_seed(params.base_seed + iteration),
                    decision_count=task.num_decision_variables, deadline=deadline)
        result = decode_attacks(task, ss.best_assignment)
        if best is None or result.energy < best.energy:
            best = result
        if result.verified:
            best = result
            break
        if ss.truncated:
            break
    best.restarts = restarts
    best.wall_time = time.monotonic() - started
    return best
