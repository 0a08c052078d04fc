"""Penalty encodings of the argumentation decision tasks.

Every semantics gets a quadratic penalty over decision bits x_i (argument i
in the candidate set), helper bits t_i (argument i is attacked by the set)
and d_i (argument i is defended by the set), with OR/AND chains tying the
helpers to the decision bits:

  conflict-free   one product per conflicting pair (self-attacks go linear)
  admissible      conflict-free + chains + sum x_i*(1-d_i)
  complete        admissible + sum (1-x_i)*d_i
  stable          complete + sum (1-x_i)*(1-t_i)
  larger complete sum (1-x_i) + (n+1)*complete      (maximum cardinality)
  most attacking  sum (1-t_i) + (n+1)*complete      (maximum attacked count)

The builder propagates structural constants (no attackers: t_i = 0, d_i = 1),
aliases single-input chains instead of spending a gadget, and materializes a
chain only when its output is referenced, so the emitted polynomial matches
the hand-simplified form with dangling helper gadgets already dropped.
Zero-energy assignments of the admissible/complete/stable penalties project
exactly onto the corresponding extensions; credulous acceptance fixes the
argument's bit to 1, the negative skeptical check fixes it to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .framework import ArgumentSet, ArgumentationFramework, Semantics
from . import oracle
from .qubo import CONST, VAR, QuboProblem, VariableRegistry, or_true_chain, _chain

_GADGET_SEMANTICS = (Semantics.ADMISSIBLE, Semantics.COMPLETE, Semantics.PREFERRED,
                     Semantics.SEMI_STABLE, Semantics.STABLE)
_ZERO_CERTIFICATE = (Semantics.CONFLICT_FREE, Semantics.ADMISSIBLE,
                     Semantics.COMPLETE, Semantics.STABLE)


@dataclass
class ChainSpec:
    """Materialized chain, kept for completing partial assignments."""

    op: str                   # "or" | "and" | "or_true"
    out: int | None           # variable index; None for the forced-true chain
    inputs: tuple             # operands ("v", idx) or ("c", val)
    aux: tuple                # variable indices, fold order


@dataclass
class EncodedTask:
    """A built penalty function plus everything needed to decode answers."""

    af: ArgumentationFramework
    semantics: Semantics
    problem: QuboProblem
    registry: VariableRegistry
    decode: dict[int, int]            # problem variable -> argument index
    fixed: dict[int, int]             # argument index -> forced bit
    nonempty: bool
    expected_zero: bool
    chains: list[ChainSpec] = field(default_factory=list)
    label: str = ""

    @property
    def num_decision_variables(self) -> int:
        return len(self.decode)

    def project(self, assignment) -> ArgumentSet:
        """Decision bits of an assignment, merged with the fixed arguments."""
        mask = 0
        for v, arg in self.decode.items():
            if assignment[v]:
                mask |= 1 << arg
        for arg, bit in self.fixed.items():
            if bit:
                mask |= 1 << arg
        return ArgumentSet(mask, self.af.num_arguments)

    def complete_assignment(self, e: ArgumentSet) -> np.ndarray:
        """Chain-consistent helper completion of a decision-bit assignment."""
        if e.size != self.af.num_arguments:
            raise ValueError("argument set does not match framework size")
        for arg, bit in self.fixed.items():
            if bool(e.mask >> arg & 1) != bool(bit):
                raise ValueError(f"set conflicts with fixed argument "
                                 f"{self.af.arguments[arg]!r}")
        bits = np.zeros(self.problem.num_variables, dtype=np.int8)
        for v, arg in self.decode.items():
            bits[v] = e.mask >> arg & 1
        for chain in self.chains:
            values = [bits[val] if tag == VAR else val for tag, val in chain.inputs]
            if chain.op == "or_true":
                acc = values[-1]
                for m in range(len(chain.aux) - 1, -1, -1):
                    acc = 1 if (values[m + 1] or acc) else 0
                    bits[chain.aux[m]] = acc
                continue
            combine = (lambda a, b: a | b) if chain.op == "or" else (lambda a, b: a & b)
            acc = values[0]
            for m, val in enumerate(values[1:-1]):
                acc = combine(acc, val)
                bits[chain.aux[m]] = acc
            if len(values) > 1:
                acc = combine(acc, values[-1])
            bits[chain.out] = acc
        return bits

    def witness_ok(self, e: ArgumentSet) -> bool:
        """Polynomial check that a zero-energy projection answers the task."""
        if self.semantics not in _ZERO_CERTIFICATE:
            raise ValueError(f"no zero-certificate semantics for {self.semantics}")
        if self.nonempty and len(e) == 0:
            return False
        for arg, bit in self.fixed.items():
            if bool(e.mask >> arg & 1) != bool(bit):
                return False
        return oracle.verify(self.af, e, self.semantics)

    def variable_roles(self) -> dict[int, str]:
        return self.registry.variable_roles()


def variable_count(af: ArgumentationFramework, nonempty: bool = False) -> int:
    """Closed-form pre-elimination variable count of the helper encoding."""
    n = af.num_arguments
    total = 3 * n + 2 * sum(max(h - 2, 0) for h in af.attacker_counts())
    if nonempty:
        total += max(n - 2, 0)
    return total


class _Builder:
    """Single-pass construction of one penalty function."""

    def __init__(self, af: ArgumentationFramework, semantics: Semantics,
                 fixed: dict[int, int], nonempty: bool):
        self.af = af
        self.semantics = semantics
        self.fixed = fixed
        self.nonempty = nonempty
        self.q = QuboProblem()
        self.reg = VariableRegistry()
        self.chains: list[ChainSpec] = []
        self.decode: dict[int, int] = {}
        self.x_role = [f"x:{name}" for name in af.arguments]
        self.t_role = [f"t:{name}" for name in af.arguments]
        self.d_role = [f"d:{name}" for name in af.arguments]

    def build(self) -> EncodedTask:
        af, q, reg = self.af, self.q, self.reg
        n = af.num_arguments
        sem = self.semantics
        needs_helpers = sem in _GADGET_SEMANTICS
        factor = (n + 1) if sem in (Semantics.PREFERRED, Semantics.SEMI_STABLE) else 1

        for i in range(n):
            if i in self.fixed:
                reg.add(self.x_role[i], (VariableRegistry.CONST, self.fixed[i]))
            else:
                v = q.new_variable()
                reg.add(self.x_role[i], (VariableRegistry.VAR, v))
                self.decode[v] = i

        if needs_helpers:
            t_live = [self._resolve_helper(self.t_role[i], "or",
                                           [self.x_role[j] for j in af.attackers[i]])
                      for i in range(n)]
            d_live = [self._resolve_helper(self.d_role[i], "and",
                                           [self.t_role[j] for j in af.attackers[i]])
                      for i in range(n)]
            used_t, used_d = self._usage(d_live)
            for i in range(n):
                self._materialize(self.t_role[i], "or", t_live[i], i in used_t, factor)
            for i in range(n):
                self._materialize(self.d_role[i], "and", d_live[i], i in used_d, factor)

        # conflict-free core; a mutual attack collapses to one product term
        conflicts = {(a, b) if a <= b else (b, a) for a, b in af.attacks}
        for a, b in sorted(conflicts):
            q.add_term((self._val(self.x_role[a]), self._val(self.x_role[b])), factor)

        if needs_helpers:
            for i in range(n):
                x = self._val(self.x_role[i])
                if x != (CONST, 0):  # members must be defended: x_i (1 - d_i)
                    d = self._val(self.d_role[i])
                    q.add_term((x,), factor)
                    q.add_term((x, d), -factor)
                if sem is not Semantics.ADMISSIBLE and x != (CONST, 1):
                    d = self._val(self.d_role[i])  # closure: (1 - x_i) d_i
                    q.add_term((d,), factor)
                    q.add_term((x, d), -factor)
                if sem is Semantics.STABLE and x != (CONST, 1):
                    t = self._val(self.t_role[i])  # coverage: (1 - x_i)(1 - t_i)
                    q.add_offset(factor)
                    q.add_term((x,), -factor)
                    q.add_term((t,), -factor)
                    q.add_term((x, t), factor)
                if sem is Semantics.PREFERRED:
                    q.add_offset(1)
                    q.add_term((x,), -1)
                if sem is Semantics.SEMI_STABLE:
                    q.add_offset(1)
                    q.add_term((self._val(self.t_role[i]),), -1)

        if self.nonempty:
            self._add_nonempty()

        return EncodedTask(af=af, semantics=sem, problem=q, registry=reg,
                           decode=self.decode, fixed=dict(self.fixed),
                           nonempty=self.nonempty,
                           expected_zero=sem in _ZERO_CERTIFICATE,
                           chains=self.chains, label=self._label())

    # -- helper resolution ---------------------------------------------------

    def _resolve_helper(self, role: str, op: str, input_roles: list[str]) -> list[str]:
        """Fold constants out of a helper's inputs; register const/alias forms.

        Returns the live input roles (deduplicated).  Multi-input helpers stay
        unregistered here; materialization decides variable vs pruned later.
        """
        absorbing = 1 if op == "or" else 0
        live: list[str] = []
        seen = set()
        for r in input_roles:
            if r in self.reg:
                kind, value = self.reg.resolve(r)
                if kind == VariableRegistry.CONST:
                    if value == absorbing:
                        self.reg.add(role, (VariableRegistry.CONST, absorbing))
                        return []
                    continue  # identity element drops out
                key = (kind, value)
            else:
                key = ("pending", r)  # helper variable not yet materialized
            if key not in seen:
                seen.add(key)
                live.append(r)
        if not live:
            self.reg.add(role, (VariableRegistry.CONST, 1 - absorbing))
        elif len(live) == 1:
            self.reg.add(role, (VariableRegistry.ALIAS, live[0]))
        return live

    def _usage(self, d_live) -> tuple[set[int], set[int]]:
        """Which helper outputs the semantic terms actually reference."""
        sem = self.semantics
        n = self.af.num_arguments
        used_t: set[int] = set()
        used_d: set[int] = set()
        for i in range(n):
            x = self.reg.resolve(self.x_role[i])
            if x != (VariableRegistry.CONST, 0):
                used_d.add(i)  # x_i (1 - d_i)
            if sem is not Semantics.ADMISSIBLE and x != (VariableRegistry.CONST, 1):
                used_d.add(i)  # (1 - x_i) d_i
            if sem is Semantics.STABLE and x != (VariableRegistry.CONST, 1):
                used_t.add(i)
            if sem is Semantics.SEMI_STABLE:
                used_t.add(i)
        for i in list(used_d):
            role = self.d_role[i]
            if role in self.reg:
                entry = self.reg.entry(role)
                if entry[0] == VariableRegistry.ALIAS:
                    self._mark_t(entry[1], used_t)
            else:
                for input_role in d_live[i]:
                    self._mark_t(input_role, used_t)
        return used_t, used_d

    def _mark_t(self, role: str, used_t: set[int]):
        if role.startswith("t:"):
            used_t.add(self.af.index_of(role[2:]))

    def _materialize(self, role: str, op: str, live_roles: list[str],
                     used: bool, factor: int):
        """Allocate and chain a multi-input helper; prune it when unused."""
        name = role[2:]
        raw_h = len(self.af.attackers[self.af.index_of(name)])
        if role in self.reg:  # const or alias: no gadget needed
            self._nominal_aux(role, raw_h, materialized=0)
            return
        if not used:
            self.reg.add(role, (VariableRegistry.PRUNED, None))
            self._nominal_aux(role, raw_h, materialized=0)
            return
        v = self.q.new_variable()
        self.reg.add(role, (VariableRegistry.VAR, v))
        operands = [self._val(r) for r in live_roles]
        aux = _chain(self.q, op, v, operands, factor)
        self.chains.append(ChainSpec(op, v, tuple(operands), tuple(aux)))
        for m, a in enumerate(aux):
            self.reg.add(f"{role[0]}_aux:{name}:{m}", (VariableRegistry.VAR, a))
        self._nominal_aux(role, raw_h, materialized=len(aux))

    def _nominal_aux(self, role: str, raw_h: int, materialized: int):
        # pre-elimination bookkeeping: max(h-2, 0) chain entries per helper
        name = role[2:]
        for m in range(materialized, max(raw_h - 2, 0)):
            self.reg.add(f"{role[0]}_aux:{name}:{m}", (VariableRegistry.PRUNED, None))

    def _add_nonempty(self):
        n = self.af.num_arguments
        if n == 0:
            raise ValueError("non-emptiness needs at least one argument")
        nominal = max(n - 2, 0)
        operands = []
        satisfied = False
        for i in range(n):
            kind, value = self.reg.resolve(self.x_role[i])
            if kind == VariableRegistry.CONST:
                satisfied = satisfied or value == 1
                continue
            operands.append((VAR, value))
        if satisfied:
            self._nominal_ne(0, nominal)
            return
        if not operands:
            self.q.add_offset(1)  # only the empty set remains
            self._nominal_ne(0, nominal)
            return
        if len(operands) == 1:
            self.q.add_offset(1)
            self.q.add_term((operands[0],), -1)
            self._nominal_ne(0, nominal)
            return
        aux = or_true_chain(self.q, operands)
        self.chains.append(ChainSpec("or_true", None, tuple(operands), tuple(aux)))
        for m, a in enumerate(aux):
            self.reg.add(f"ne_aux:{m}", (VariableRegistry.VAR, a))
        self._nominal_ne(len(aux), nominal)

    def _nominal_ne(self, materialized: int, nominal: int):
        for m in range(materialized, nominal):
            self.reg.add(f"ne_aux:{m}", (VariableRegistry.PRUNED, None))

    def _val(self, role: str):
        kind, value = self.reg.resolve(role)
        return (VAR, value) if kind == VariableRegistry.VAR else (CONST, value)

    def _label(self) -> str:
        tags = [self.semantics.value]
        if self.nonempty:
            tags.append("nonempty")
        for arg, bit in sorted(self.fixed.items()):
            tags.append(f"{self.af.arguments[arg]}={bit}")
        return " ".join(tags)


def _build(af: ArgumentationFramework, semantics: Semantics,
           fixed: dict[int, int] | None = None, nonempty: bool = False) -> EncodedTask:
    return _Builder(af, semantics, dict(fixed or {}), nonempty).build()


def build_cf(af: ArgumentationFramework) -> EncodedTask:
    """Count of conflicting member pairs; zero exactly on conflict-free sets."""
    return _build(af, Semantics.CONFLICT_FREE)


def build_adm(af: ArgumentationFramework) -> EncodedTask:
    """Zero exactly when the decision bits form an admissible set."""
    return _build(af, Semantics.ADMISSIBLE)


def build_co(af: ArgumentationFramework) -> EncodedTask:
    """Zero exactly when the decision bits form a complete extension."""
    return _build(af, Semantics.COMPLETE)


def build_st(af: ArgumentationFramework) -> EncodedTask:
    """Zero exactly on stable extensions; minimum > 0 iff none exists."""
    return _build(af, Semantics.STABLE)


def build_pr(af: ArgumentationFramework) -> EncodedTask:
    """Minimizers are the maximum-cardinality complete extensions.

    The minimum value is n minus that cardinality; any value above n means
    the projected set is not complete.  Smaller preferred extensions are out
    of reach of this objective by design.
    """
    return _build(af, Semantics.PREFERRED)


def build_sst(af: ArgumentationFramework) -> EncodedTask:
    """Minimizers are complete extensions maximizing the attacked count."""
    return _build(af, Semantics.SEMI_STABLE)


def add_nonempty(task: EncodedTask) -> EncodedTask:
    """Add the non-emptiness constraint (n-2 extra chain variables)."""
    if task.af.num_arguments < 1:
        raise ValueError("non-emptiness needs at least one argument")
    return _build(task.af, task.semantics, task.fixed, nonempty=True)


def _argument_index(af: ArgumentationFramework, arg) -> int:
    return arg if isinstance(arg, int) else af.index_of(arg)


def fix_credulous(task: EncodedTask, arg) -> EncodedTask:
    """Force the argument in: minimum 0 iff it is credulously accepted."""
    if task.semantics not in (Semantics.ADMISSIBLE, Semantics.COMPLETE, Semantics.STABLE):
        raise ValueError("credulous fixing applies to the zero-certificate encodings")
    i = _argument_index(task.af, arg)
    fixed = dict(task.fixed)
    fixed[i] = 1
    return _build(task.af, task.semantics, fixed, task.nonempty)


def fix_skeptical_negative(task: EncodedTask, arg) -> EncodedTask:
    """Force the argument out: minimum 0 iff it is NOT skeptically accepted.

    Only offered for complete semantics, where at least one extension always
    exists, so the caller may soundly negate the answer.
    """
    if task.semantics is not Semantics.COMPLETE:
        raise ValueError("negative skeptical fixing is only sound for complete semantics")
    i = _argument_index(task.af, arg)
    fixed = dict(task.fixed)
    fixed[i] = 0
    return _build(task.af, task.semantics, fixed, task.nonempty)
