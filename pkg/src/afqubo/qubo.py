"""Integer-coefficient QUBO model plus the logic gadgets built on it.

Every encoding in this package produces exact integer coefficients, so
energies are exact integers as well; no floating-point tolerances exist
anywhere in the pipeline.  Quadratic keys are unordered pairs (i < j); a
product x_i*x_i folds into the linear term because binary variables are
idempotent.

The quadratic penalties for z = x OR y and z = x AND y follow the classic
degree-2 reductions: both are nonnegative on every assignment and reach 0
exactly when z carries the logical value.  Chains fold an n-ary OR/AND into
pairwise gadgets with max(n-2, 0) auxiliary variables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VAR = "v"      # operand tag: live variable index
CONST = "c"    # operand tag: folded constant


class VariableRegistry:
    """Role-tagged variable bookkeeping for an encoding.

    Every variable the construction names gets an entry, even when
    simplification later removes it: entries resolve to a live problem
    variable, a constant forced by the structure, an alias of another role,
    or nothing at all (pruned with its gadget).  The nominal count therefore
    reflects the raw construction, while real_count is what a solver sees.
    """

    VAR = "var"
    CONST = "const"
    ALIAS = "alias"
    PRUNED = "pruned"

    def __init__(self):
        self._entries: dict[str, tuple] = {}
        self._order: list[str] = []
        self._by_index: dict[int, str] = {}

    def add(self, role: str, resolution: tuple):
        if role in self._entries:
            raise ValueError(f"role {role!r} already registered")
        self._entries[role] = resolution
        self._order.append(role)
        if resolution[0] == self.VAR:
            index = resolution[1]
            if index in self._by_index:
                raise ValueError(f"variable {index} already has a role")
            self._by_index[index] = role

    def resolve(self, role: str) -> tuple:
        """Follow aliases down to ("var", i) or ("const", v)."""
        seen = set()
        while True:
            if role in seen:
                raise ValueError(f"alias cycle at {role!r}")
            seen.add(role)
            kind, value = self._entries[role]
            if kind == self.ALIAS:
                role = value
                continue
            if kind == self.PRUNED:
                raise ValueError(f"role {role!r} was pruned from the problem")
            return kind, value

    def entry(self, role: str) -> tuple:
        return self._entries[role]

    def roles(self) -> list[str]:
        return list(self._order)

    def role_of(self, index: int) -> str:
        return self._by_index[index]

    def variable_roles(self) -> dict[int, str]:
        return dict(self._by_index)

    @property
    def nominal_count(self) -> int:
        return len(self._order)

    @property
    def real_count(self) -> int:
        return len(self._by_index)

    def __contains__(self, role: str) -> bool:
        return role in self._entries


@dataclass
class GadgetRecord:
    """One logic gadget (or a whole chain) and the variables it owns."""

    kind: str                 # "or" | "and" | "eq" | "or_chain" | "and_chain"
    out: tuple                # operand: ("v", i) or ("c", value)
    inputs: tuple             # operands
    aux: tuple = ()           # variable indices private to the chain
    factor: int = 1           # penalty amplification applied at build time

    def operands(self):
        ops = [self.out, *self.inputs]
        ops += [(VAR, a) for a in self.aux]
        return ops

    def variables(self) -> set[int]:
        return {i for tag, i in self.operands() if tag == VAR}


class QuboProblem:
    """Quadratic polynomial over binary variables, minimized by the solvers."""

    def __init__(self, num_variables: int = 0):
        self.num_variables = int(num_variables)
        self.offset = 0
        self.linear: dict[int, int] = {}
        self.quadratic: dict[tuple[int, int], int] = {}
        self.gadgets: list[GadgetRecord] = []
        self._version = 0
        self._cache_version = -1
        self._arrays = None

    # -- construction ------------------------------------------------------

    def new_variable(self) -> int:
        self.num_variables += 1
        self._version += 1
        return self.num_variables - 1

    def add_offset(self, c: int):
        self.offset += int(c)
        self._version += 1

    def add_linear(self, i: int, c: int):
        self._check_index(i)
        c = int(c)
        if not c:
            return
        new = self.linear.get(i, 0) + c
        if new:
            self.linear[i] = new
        else:
            self.linear.pop(i, None)
        self._version += 1

    def add_quadratic(self, i: int, j: int, c: int):
        self._check_index(i)
        self._check_index(j)
        if i == j:
            self.add_linear(i, c)  # x*x == x on binaries
            return
        c = int(c)
        if not c:
            return
        key = (i, j) if i < j else (j, i)
        new = self.quadratic.get(key, 0) + c
        if new:
            self.quadratic[key] = new
        else:
            self.quadratic.pop(key, None)
        self._version += 1

    def add_term(self, operands, c: int):
        """Add c * product(operands); constants fold, variables multiply."""
        c = int(c)
        vs = []
        for tag, val in operands:
            if tag == CONST:
                c *= val
            else:
                vs.append(val)
        if not c:
            return
        if not vs:
            self.add_offset(c)
        elif len(vs) == 1:
            self.add_linear(vs[0], c)
        elif len(vs) == 2:
            self.add_quadratic(vs[0], vs[1], c)
        else:
            raise ValueError("QUBO terms are at most quadratic")

    def add_problem(self, other: "QuboProblem", factor: int = 1):
        """Merge another problem over the same variable space, scaled."""
        if other.num_variables > self.num_variables:
            raise ValueError("operand problem has more variables")
        self.add_offset(other.offset * factor)
        for i, c in other.linear.items():
            self.add_linear(i, c * factor)
        for (i, j), c in other.quadratic.items():
            self.add_quadratic(i, j, c * factor)

    def copy(self) -> "QuboProblem":
        q = QuboProblem(self.num_variables)
        q.offset = self.offset
        q.linear = dict(self.linear)
        q.quadratic = dict(self.quadratic)
        q.gadgets = [GadgetRecord(g.kind, g.out, g.inputs, g.aux) for g in self.gadgets]
        return q

    def _check_index(self, i: int):
        if not 0 <= i < self.num_variables:
            raise IndexError(f"variable {i} out of range (N={self.num_variables})")

    # -- evaluation --------------------------------------------------------

    def energy(self, bits) -> int:
        """Exact objective value of one assignment."""
        if len(bits) != self.num_variables:
            raise ValueError(f"assignment length {len(bits)} != {self.num_variables}")
        e = self.offset
        for i, c in self.linear.items():
            if bits[i]:
                e += c
        for (i, j), c in self.quadratic.items():
            if bits[i] and bits[j]:
                e += c
        return int(e)

    def delta_energy(self, bits, i: int) -> int:
        """Energy change from flipping bit i, from local terms only."""
        self._check_index(i)
        acc = self.linear.get(i, 0)
        for j, c in self.neighbors(i):
            if bits[j]:
                acc += c
        return int(acc) if not bits[i] else -int(acc)

    def neighbors(self, i: int):
        self._refresh_cache()
        row = self._arrays
        lo, hi = row[1][i], row[1][i + 1]
        return zip(row[2][lo:hi].tolist(), row[3][lo:hi].tolist())

    def arrays(self):
        """(linear, row_ptr, col_idx, values) in CSR form for the sampler."""
        self._refresh_cache()
        return self._arrays

    def _refresh_cache(self):
        if self._cache_version == self._version:
            return
        n = self.num_variables
        linear = np.zeros(n, dtype=np.int64)
        for i, c in self.linear.items():
            linear[i] = c
        counts = np.zeros(n + 1, dtype=np.int64)
        for i, j in self.quadratic:
            counts[i + 1] += 1
            counts[j + 1] += 1
        row_ptr = np.cumsum(counts)
        col_idx = np.zeros(row_ptr[-1], dtype=np.int64)
        vals = np.zeros(row_ptr[-1], dtype=np.int64)
        cursor = row_ptr[:-1].copy()
        for (i, j), c in self.quadratic.items():
            col_idx[cursor[i]] = j
            vals[cursor[i]] = c
            cursor[i] += 1
            col_idx[cursor[j]] = i
            vals[cursor[j]] = c
            cursor[j] += 1
        self._arrays = (linear, row_ptr, col_idx, vals)
        self._cache_version = self._version

    def coefficients(self) -> dict:
        """Canonical {(): offset, (i,): c, (i, j): c} view for comparisons."""
        out = {}
        if self.offset:
            out[()] = self.offset
        for i, c in self.linear.items():
            out[(i,)] = c
        for key, c in self.quadratic.items():
            out[key] = c
        return out

    # -- export ------------------------------------------------------------

    def to_triangular_text(self) -> str:
        """Upper-triangular text: one ``i j coeff`` per line, linear as i==j."""
        lines = []
        if self.offset:
            lines.append(f"# offset {self.offset}")
        for i in sorted(self.linear):
            lines.append(f"{i} {i} {self.linear[i]}")
        for i, j in sorted(self.quadratic):
            lines.append(f"{i} {j} {self.quadratic[i, j]}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self, roles: dict[int, str] | None = None) -> dict:
        doc = {
            "num_variables": self.num_variables,
            "offset": self.offset,
            "linear": {str(i): c for i, c in sorted(self.linear.items())},
            "quadratic": {f"{i} {j}": c for (i, j), c in sorted(self.quadratic.items())},
        }
        if roles is not None:
            doc["roles"] = {str(i): roles[i] for i in sorted(roles)}
        return doc

    def __repr__(self):
        return (f"QuboProblem(N={self.num_variables}, "
                f"{len(self.linear)} linear, {len(self.quadratic)} quadratic, "
                f"offset={self.offset})")


# -- gadgets ----------------------------------------------------------------

def _gadget_terms(kind: str, out, x, y=None):
    if kind == "or":
        return [(1, (out,)), (1, (x,)), (1, (y,)), (1, (x, y)),
                (-2, (out, x)), (-2, (out, y))]
    if kind == "and":
        return [(3, (out,)), (1, (x, y)), (-2, (out, x)), (-2, (out, y))]
    if kind == "eq":
        return [(1, (out,)), (1, (x,)), (-2, (out, x))]
    raise ValueError(kind)


def _add_gadget(q: QuboProblem, kind: str, out, x, y=None, record=True, factor=1):
    for c, ops in _gadget_terms(kind, out, x, y):
        q.add_term(ops, c * factor)
    if record:
        inputs = (x,) if y is None else (x, y)
        q.gadgets.append(GadgetRecord(kind, out, inputs, factor=factor))


def _as_operands(*indices):
    seen = set()
    for i in indices:
        if isinstance(i, tuple):
            yield i
            continue
        if i in seen:
            raise ValueError(f"duplicate variable {i} in gadget")
        seen.add(i)
        yield (VAR, int(i))


def or_gadget(q: QuboProblem, z: int, x: int, y: int):
    """Penalty 0 iff z == x OR y; at least 1 otherwise."""
    z, x, y = _as_operands(z, x, y)
    _add_gadget(q, "or", z, x, y)


def and_gadget(q: QuboProblem, z: int, x: int, y: int):
    """Penalty 0 iff z == x AND y; at least 1 otherwise."""
    z, x, y = _as_operands(z, x, y)
    _add_gadget(q, "and", z, x, y)


def equality_gadget(q: QuboProblem, z: int, x: int):
    """Penalty 0 iff z == x (the one-input degenerate chain case)."""
    z, x = _as_operands(z, x)
    _add_gadget(q, "eq", z, x)


def _chain(q: QuboProblem, kind: str, out: int, inputs, factor=1) -> list[int]:
    inputs = list(inputs)
    if not inputs:
        raise ValueError("chain needs at least one input")
    ops = list(_as_operands(out, *inputs))
    out_op, in_ops = ops[0], ops[1:]
    aux: list[int] = []
    if len(in_ops) == 1:
        _add_gadget(q, "eq", out_op, in_ops[0], record=False, factor=factor)
    elif len(in_ops) == 2:
        _add_gadget(q, kind, out_op, in_ops[0], in_ops[1], record=False, factor=factor)
    else:
        # left fold: u1 = in1*in2, u_m = u_{m-1}*in_{m+1}, out closes the chain
        prev = in_ops[0]
        for middle in in_ops[1:-1]:
            u = q.new_variable()
            aux.append(u)
            _add_gadget(q, kind, (VAR, u), prev, middle, record=False, factor=factor)
            prev = (VAR, u)
        _add_gadget(q, kind, out_op, prev, in_ops[-1], record=False, factor=factor)
    q.gadgets.append(GadgetRecord(kind + "_chain", out_op, tuple(in_ops), tuple(aux),
                                  factor=factor))
    return aux


def or_chain(q: QuboProblem, out: int, inputs, factor=1) -> list[int]:
    """out == OR of inputs, via max(len(inputs)-2, 0) auxiliaries."""
    return _chain(q, "or", out, inputs, factor)


def and_chain(q: QuboProblem, out: int, inputs, factor=1) -> list[int]:
    """out == AND of inputs, via max(len(inputs)-2, 0) auxiliaries."""
    return _chain(q, "and", out, inputs, factor)


def or_true_chain(q: QuboProblem, inputs, factor=1) -> list[int]:
    """Force OR of inputs to be true, without an output variable.

    Tail-first fold: aux_m = in_{m+1} OR aux_{m+1}, closed at the top by the
    pair penalty (1-in_1)(1-aux_1); len(inputs)-2 auxiliaries for 3+ inputs.
    """
    in_ops = list(_as_operands(*inputs))
    if not in_ops:
        raise ValueError("chain needs at least one input")
    if len(in_ops) == 1:
        q.add_offset(factor)
        q.add_term((in_ops[0],), -factor)
        return []
    if len(in_ops) == 2:
        a, b = in_ops
        q.add_offset(factor)
        q.add_term((a,), -factor)
        q.add_term((b,), -factor)
        q.add_term((a, b), factor)
        return []
    aux = [q.new_variable() for _ in range(len(in_ops) - 2)]
    _add_gadget(q, "or", (VAR, aux[-1]), in_ops[-2], in_ops[-1], record=False, factor=factor)
    for m in range(len(aux) - 2, -1, -1):
        _add_gadget(q, "or", (VAR, aux[m]), in_ops[m + 1], (VAR, aux[m + 1]),
                    record=False, factor=factor)
    top = in_ops[0]
    q.add_offset(factor)
    q.add_term((top,), -factor)
    q.add_linear(aux[0], -factor)
    q.add_term((top, (VAR, aux[0])), factor)
    q.gadgets.append(GadgetRecord("or_chain", (CONST, 1), tuple(in_ops), tuple(aux),
                                  factor=factor))
    return aux


# -- transformations ---------------------------------------------------------

def _remap_operand(op, mapping, fixed_values):
    tag, val = op
    if tag == CONST:
        return op
    if val in fixed_values:
        return (CONST, fixed_values[val])
    return (VAR, mapping[val])


def _rebuild(q: QuboProblem, keep: list[int], fixed_values: dict[int, int]):
    """New problem over ``keep`` (old indices, in order) with the rest fixed."""
    mapping = {old: new for new, old in enumerate(keep)}
    out = QuboProblem(len(keep))
    out.offset = q.offset
    for i, c in q.linear.items():
        if i in fixed_values:
            out.offset += c * fixed_values[i]
        else:
            out.add_linear(mapping[i], c)
    for (i, j), c in q.quadratic.items():
        fi, fj = i in fixed_values, j in fixed_values
        if fi and fj:
            out.offset += c * fixed_values[i] * fixed_values[j]
        elif fi:
            if fixed_values[i]:
                out.add_linear(mapping[j], c)
        elif fj:
            if fixed_values[j]:
                out.add_linear(mapping[i], c)
        else:
            out.add_quadratic(mapping[i], mapping[j], c)
    for g in q.gadgets:
        out.gadgets.append(GadgetRecord(
            g.kind,
            _remap_operand(g.out, mapping, fixed_values),
            tuple(_remap_operand(op, mapping, fixed_values) for op in g.inputs),
            tuple(mapping[a] for a in g.aux if a not in fixed_values),
        ))
    return out, mapping


def fix_variable(q: QuboProblem, i: int, value: int):
    """Substitute variable i by 0 or 1 and drop it.

    Returns (problem, mapping) where mapping sends surviving old indices to
    their new positions.
    """
    q._check_index(i)
    if value not in (0, 1):
        raise ValueError("binary variables take values 0 or 1")
    keep = [j for j in range(q.num_variables) if j != i]
    return _rebuild(q, keep, {i: value})


def _chain_contribution(g: GadgetRecord) -> QuboProblem | None:
    """Re-derive the polynomial a gadget record added, for exact removal."""
    probe = QuboProblem(0)
    probe.num_variables = 1 << 30  # index checks bypassed; operands are trusted
    kind, f = g.kind, g.factor
    if kind in ("or", "and", "eq"):
        y = g.inputs[1] if len(g.inputs) > 1 else None
        _add_gadget(probe, kind, g.out, g.inputs[0], y, record=False, factor=f)
        return probe
    if kind in ("or_chain", "and_chain"):
        base = kind[:-6]
        ins = list(g.inputs)
        if g.out == (CONST, 1) and base == "or":
            # or_true_chain shape
            if len(ins) == 1:
                probe.add_offset(f)
                probe.add_term((ins[0],), -f)
            elif len(ins) == 2:
                probe.add_offset(f)
                probe.add_term((ins[0],), -f)
                probe.add_term((ins[1],), -f)
                probe.add_term((ins[0], ins[1]), f)
            else:
                aux = [(VAR, a) for a in g.aux]
                _add_gadget(probe, "or", aux[-1], ins[-2], ins[-1], record=False, factor=f)
                for m in range(len(aux) - 2, -1, -1):
                    _add_gadget(probe, "or", aux[m], ins[m + 1], aux[m + 1],
                                record=False, factor=f)
                probe.add_offset(f)
                probe.add_term((ins[0],), -f)
                probe.add_term((aux[0],), -f)
                probe.add_term((ins[0], aux[0]), f)
            return probe
        if len(ins) == 1:
            _add_gadget(probe, "eq", g.out, ins[0], record=False, factor=f)
        elif len(ins) == 2:
            _add_gadget(probe, base, g.out, ins[0], ins[1], record=False, factor=f)
        else:
            aux = [(VAR, a) for a in g.aux]
            prev = ins[0]
            for middle, u in zip(ins[1:-1], aux):
                _add_gadget(probe, base, u, prev, middle, record=False, factor=f)
                prev = u
            _add_gadget(probe, base, g.out, prev, ins[-1], record=False, factor=f)
        return probe
    return None


def _find_dangling(work: QuboProblem) -> int | None:
    """Index of a gadget whose output variable occurs nowhere else."""
    residual = dict(work.coefficients())
    for g in work.gadgets:
        contrib = _chain_contribution(g)
        if contrib is None:
            continue
        for key, c in contrib.coefficients().items():
            if not key:
                continue
            residual[key] = residual.get(key, 0) - c
            if not residual[key]:
                del residual[key]
    used_elsewhere: set[int] = set()
    for key in residual:
        used_elsewhere.update(key)
    gadget_vars = [g.variables() for g in work.gadgets]
    for idx, g in enumerate(work.gadgets):
        if g.out[0] != VAR or g.out[1] in used_elsewhere:
            continue
        if any(g.out[1] in vs for k, vs in enumerate(gadget_vars) if k != idx):
            continue
        return idx
    return None


def eliminate_dangling_aux(q: QuboProblem):
    """Drop gadget groups whose output occurs nowhere outside the group.

    Sound because every gadget admits a zero-penalty completion of its output
    for any input values, so removing an unused group changes neither the
    minimum nor the minimizers projected onto the surviving variables.
    Returns (problem, mapping old index -> new index).
    """
    index_names = list(range(q.num_variables))
    work = q.copy()
    while True:
        pick = _find_dangling(work)
        if pick is None:
            break
        g = work.gadgets.pop(pick)
        contrib = _chain_contribution(g)
        for key, c in contrib.coefficients().items():
            if not key:
                work.add_offset(-c)
            elif len(key) == 1:
                work.add_linear(key[0], -c)
            else:
                work.add_quadratic(key[0], key[1], -c)
        dead = {g.out[1], *g.aux}
        for v in dead:
            if v in work.linear or any(v in key for key in work.quadratic):
                raise AssertionError("gadget removal left live coefficients")
        keep = [j for j in range(work.num_variables) if j not in dead]
        index_names = [index_names[j] for j in keep]
        work, _ = _rebuild(work, keep, {v: 0 for v in dead})
    return work, {orig: new for new, orig in enumerate(index_names)}
