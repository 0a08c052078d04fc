"""Simulated-annealing QUBO sampler and the zero-energy decision loop.

Each read is an independent restart: a fresh uniform assignment seeded by
(base_seed, read_index), then geometric cooling from beta_hot to beta_cold
with one proposed flip per variable per sweep, in a freshly shuffled order.
Flip deltas come from the variable's incident coefficients only, so a sweep
is O(nonzeros).  All randomness is drawn from numpy PCG64 streams outside
the hot loop, which keeps results bitwise reproducible whether the sweep
kernel runs under numba or pure Python.

Decisions follow the restart protocol: resample with an incremented seed
until a zero-energy, oracle-verified witness appears, or the restart budget
or wall-clock timeout runs out.  A NO is never certified.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .framework import ArgumentSet
from .qubo import QuboProblem

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

_USE_NUMBA = _HAVE_NUMBA

ANSWER_YES = "YES"
ANSWER_NO = "NO"
ANSWER_TIMEOUT = "TIMEOUT-NO"


class EncodingConsistencyError(RuntimeError):
    """A zero-energy sample failed the polynomial witness check."""


def _sweep_python(bits, order, logu, beta, linear, row_ptr, col_idx, vals,
                  energy, best_energy, best_bits):
    for t in range(order.shape[0]):
        i = order[t]
        acc = linear[i]
        for p in range(row_ptr[i], row_ptr[i + 1]):
            acc += vals[p] * bits[col_idx[p]]
        delta = acc if bits[i] == 0 else -acc
        if delta <= 0 or logu[t] < -beta * delta:
            bits[i] ^= 1
            energy += delta
            if energy < best_energy:
                best_energy = energy
                best_bits[:] = bits
    return energy, best_energy


if _HAVE_NUMBA:
    _sweep_numba = njit(cache=True)(_sweep_python)


def _run_sweep(*args):
    if _USE_NUMBA:
        return _sweep_numba(*args)
    return _sweep_python(*args)


def beta_range(q: QuboProblem) -> tuple[float, float]:
    """Inverse-temperature span derived from the coefficient structure.

    The hottest temperature accepts the largest possible uphill flip with
    probability 1/2, bounding flip deltas by each variable's sum of absolute
    incident coefficients; the coldest accepts the smallest nonzero delta,
    approximated by the smallest nonzero coefficient magnitude, with
    probability 1/100.
    """
    linear, row_ptr, col_idx, vals = q.arrays()
    bounds = np.abs(linear).astype(np.float64)
    if vals.size:
        rows = np.repeat(np.arange(q.num_variables), np.diff(row_ptr))
        np.add.at(bounds, rows, np.abs(vals).astype(np.float64))
    largest = float(bounds.max()) if bounds.size else 0.0
    magnitudes = [abs(c) for c in q.linear.values() if c]
    magnitudes += [abs(c) for c in q.quadratic.values() if c]
    if largest <= 0 or not magnitudes:
        return (1.0, 10.0)
    return (math.log(2) / largest, math.log(100) / min(magnitudes))


@dataclass
class AnnealParams:
    """Sampler knobs; unset reads/sweeps derive from the decision-bit count."""

    num_reads: int | None = None         # default 2 * decision variables
    num_sweeps: int | None = None        # default min(50 * decision vars, 1000)
    beta_hot: float | None = None
    beta_cold: float | None = None
    schedule: str = "geometric"
    base_seed: int = 0
    max_restart_iterations: int = 100
    timeout_seconds: float = 60.0

    def resolved(self, q: QuboProblem, decision_count: int | None):
        count = decision_count if decision_count is not None else q.num_variables
        reads = self.num_reads if self.num_reads is not None else max(1, 2 * count)
        sweeps = (self.num_sweeps if self.num_sweeps is not None
                  else max(1, min(50 * count, 1000)))
        if reads < 1 or sweeps < 1:
            raise ValueError("num_reads and num_sweeps must be at least 1")
        hot, cold = self.beta_hot, self.beta_cold
        if hot is None or cold is None:
            auto_hot, auto_cold = beta_range(q)
            hot = auto_hot if hot is None else hot
            cold = auto_cold if cold is None else cold
        if not 0 < hot < cold:
            raise ValueError("need 0 < beta_hot < beta_cold")
        if self.schedule != "geometric":
            raise ValueError(f"unknown schedule {self.schedule!r}")
        return reads, sweeps, hot, cold

    def with_seed(self, seed: int) -> "AnnealParams":
        return AnnealParams(self.num_reads, self.num_sweeps, self.beta_hot,
                            self.beta_cold, self.schedule, seed,
                            self.max_restart_iterations, self.timeout_seconds)


@dataclass
class Sample:
    assignment: np.ndarray
    energy: int
    read_index: int
    sweeps_run: int


@dataclass
class SampleSet:
    """All reads of one sampler invocation, plus aggregate statistics."""

    samples: list[Sample]
    wall_time: float
    num_reads_requested: int
    num_sweeps: int
    base_seed: int
    truncated: bool = False        # deadline cut reads short

    @property
    def best_energy(self) -> int:
        return min(s.energy for s in self.samples)

    @property
    def best_assignment(self) -> np.ndarray:
        return min(self.samples, key=lambda s: (s.energy, s.read_index)).assignment

    def energies(self) -> list[int]:
        return [s.energy for s in self.samples]


def _initial_energy(q, bits, rows) -> int:
    linear, _, col_idx, vals = q.arrays()
    b = bits.astype(np.int64)
    e = int(q.offset) + int(linear @ b)
    if vals.size:
        e += int((vals * b[col_idx] * b[rows]).sum()) // 2
    return e


def sample(q: QuboProblem, params: AnnealParams | None = None,
           decision_count: int | None = None, stop_at: int | None = None,
           deadline: float | None = None) -> SampleSet:
    """Run independent annealing reads; optionally stop at a target energy."""
    params = params or AnnealParams()
    reads, sweeps, hot, cold = params.resolved(q, decision_count)
    betas = np.geomspace(hot, cold, sweeps)
    linear, row_ptr, col_idx, vals = q.arrays()
    n = q.num_variables
    rows = (np.repeat(np.arange(n), np.diff(row_ptr)) if vals.size
            else np.zeros(0, dtype=np.int64))
    started = time.monotonic()
    samples: list[Sample] = []
    truncated = False
    for read_index in range(reads):
        if deadline is not None and time.monotonic() >= deadline and samples:
            truncated = True
            break
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence((params.base_seed, read_index))))
        bits = (rng.random(n) < 0.5).astype(np.int8)
        energy = _initial_energy(q, bits, rows)
        best_bits = bits.copy()
        best_energy = energy
        sweeps_run = 0
        for s in range(sweeps):
            order = rng.permutation(n).astype(np.int64)
            logu = np.log(rng.random(n))
            energy, best_energy = _run_sweep(
                bits, order, logu, float(betas[s]), linear, row_ptr, col_idx,
                vals, energy, best_energy, best_bits)
            sweeps_run = s + 1
            if stop_at is not None and best_energy <= stop_at:
                break
            if deadline is not None and time.monotonic() >= deadline:
                truncated = True
                break
        samples.append(Sample(best_bits, int(best_energy), read_index, sweeps_run))
        if stop_at is not None and best_energy <= stop_at:
            break
    return SampleSet(samples, time.monotonic() - started, reads, sweeps,
                     params.base_seed, truncated)


@dataclass
class DecisionReport:
    """Outcome of the restart loop for one encoded decision task."""

    answer: str                        # YES | NO | TIMEOUT-NO
    witness: ArgumentSet | None
    energy: int | None                 # best energy seen across restarts
    certified: bool
    restarts: int
    reads_executed: int
    wall_time: float
    label: str = ""


def decide(task, params: AnnealParams | None = None) -> DecisionReport:
    """Sample until a verified zero-energy witness appears or budget runs out.

    YES answers always carry a witness that passed the polynomial check; a
    failed check at energy zero is an encoding bug and raises.  NO answers
    are explicitly uncertified.
    """
    if not task.expected_zero:
        raise ValueError(f"task {task.label!r} has no zero-energy decision form")
    params = params or AnnealParams()
    if params.max_restart_iterations < 1:
        raise ValueError("need at least one restart iteration")
    started = time.monotonic()
    deadline = started + params.timeout_seconds
    best = None
    reads_executed = 0
    restarts = 0
    timed_out = False
    for iteration in range(params.max_restart_iterations):
        if time.monotonic() >= deadline:
            timed_out = True
            break
        restarts = iteration + 1
        ss = sample(task.problem, params.with_seed(params.base_seed + iteration),
                    decision_count=task.num_decision_variables,
                    stop_at=0, deadline=deadline)
        reads_executed += len(ss.samples)
        if best is None or ss.best_energy < best:
            best = ss.best_energy
        if ss.best_energy <= 0:
            witness = task.project(ss.best_assignment)
            if not task.witness_ok(witness):
                raise EncodingConsistencyError(
                    f"zero-energy sample of {task.label!r} failed verification")
            return DecisionReport(ANSWER_YES, witness, 0, True, restarts,
                                  reads_executed, time.monotonic() - started,
                                  task.label)
        if ss.truncated:
            timed_out = True
            break
    answer = ANSWER_TIMEOUT if timed_out else ANSWER_NO
    return DecisionReport(answer, None, best, False, restarts, reads_executed,
                          time.monotonic() - started, task.label)
