import math

import numpy as np
import pytest

from afqubo import oracle
from afqubo.anneal import AnnealParams, sample
from afqubo.enforcement import (build_strict_complete,
                                decode_attacks, default_lambda, enforce, hamming)
from afqubo.framework import ArgumentSet, Semantics
from helpers import bfs_min_distance, enforcement_min_distance, random_framework


def test_hamming_examples(fig1):
    assert hamming({(0, 1)}, {(0, 1)}) == 0
    assert hamming({(0, 1), (1, 2)}, {(2, 0), (3, 1), (4, 4)}) == 5
    optimal = set(fig1.attacks) - {(3, 4)}
    assert hamming(fig1.attacks, optimal) == 1


def test_build_validation(fig1):
    with pytest.raises(ValueError, match="nonempty"):
        build_strict_complete(fig1, [])
    with pytest.raises(ValueError, match="too small"):
        build_strict_complete(fig1, ["a", "e"], lam=25)
    task = build_strict_complete(fig1, ["a", "e"], lam=26)
    assert task.lam == 26


def test_default_lambda():
    assert default_lambda(5) == 100
    assert default_lambda(80) == 6401


def test_fig1_optimal_edit_energy(fig1):
    task = build_strict_complete(fig1, ["a", "e"])
    optimal = set(fig1.attacks) - {(3, 4)}
    bits = task.encode_assignment(optimal)
    assert task.problem.energy(bits) == 1
    result = decode_attacks(task, bits)
    assert result.distance == 1
    assert result.verified
    assert result.constraint_penalty == 0


def test_identity_assignment_decodes_to_distance_zero(fig1):
    task = build_strict_complete(fig1, ["a", "e"])
    bits = task.encode_assignment(set(fig1.attacks))
    result = decode_attacks(task, bits)
    assert result.distance == 0
    assert not result.verified
    assert result.constraint_penalty >= 1
    assert result.energy == result.constraint_penalty * task.lam


def test_intra_target_pairs_fixed_to_zero(fig1):
    task = build_strict_complete(fig1, ["c", "d"])
    assert (fig1.index_of("c"), fig1.index_of("d")) in task.fixed_zero
    with pytest.raises(ValueError, match="fixed to zero"):
        task.encode_assignment(fig1.attacks)  # c->d is an original attack
    rng = np.random.default_rng(0)
    for _ in range(20):
        bits = rng.integers(0, 2, size=task.problem.num_variables).astype(np.int8)
        decoded = decode_attacks(task, bits)
        members = set(task.target.indices())
        assert not any(a in members and b in members for a, b in decoded.attacks)


def test_decoded_distance_is_symmetric_difference():
    rng = np.random.default_rng(3)
    af = random_framework(rng, 8, density=0.3)
    target = ArgumentSet.from_indices(8, [1, 4])
    task = build_strict_complete(af, target)
    for _ in range(50):
        bits = rng.integers(0, 2, size=task.problem.num_variables).astype(np.int8)
        decoded = decode_attacks(task, bits)
        assert decoded.distance == hamming(af.attacks, decoded.attacks)


def test_lambda_dominates_constraint_violations(fig1):
    task = build_strict_complete(fig1, ["a", "e"], lam=26)
    feasible = task.encode_assignment(set(fig1.attacks) - {(3, 4)})
    assert task.problem.energy(feasible) <= 25
    rng = np.random.default_rng(5)
    worst_feasible = 5 * 5  # any edit set costs at most n^2
    for _ in range(60):
        bits = rng.integers(0, 2, size=task.problem.num_variables).astype(np.int8)
        result = decode_attacks(task, bits)
        if result.constraint_penalty > 0:
            assert result.energy > worst_feasible


def test_zero_penalty_assignments_decode_to_complete_targets():
    rng = np.random.default_rng(7)
    for trial in range(8):
        n = int(rng.integers(3, 7))
        af = random_framework(rng, n, density=0.35)
        k = int(rng.integers(1, n + 1))
        target = ArgumentSet.from_indices(
            n, sorted(rng.choice(n, size=k, replace=False).tolist()))
        task = build_strict_complete(af, target)
        ss = sample(task.problem, AnnealParams(num_reads=32, num_sweeps=400,
                                               base_seed=trial),
                    decision_count=task.num_decision_variables)
        for s in ss.samples:
            decoded = decode_attacks(task, s.assignment)
            if decoded.constraint_penalty == 0:
                assert decoded.verified


def test_enforce_fig1(fig1):
    result = enforce(fig1, ["a", "e"],
                     AnnealParams(num_reads=48, num_sweeps=1000, base_seed=3))
    assert result.verified
    assert oracle.verify(result.framework,
                         ArgumentSet.from_names(fig1, ["a", "e"]),
                         Semantics.COMPLETE)
    assert result.distance >= 1  # 1 is optimal: remove d->e


def test_enforce_already_complete_target(fig1):
    result = enforce(fig1, ["a", "d"],
                     AnnealParams(num_reads=256, num_sweeps=1000, base_seed=1))
    assert result.verified
    assert result.distance >= 0
    ad = ArgumentSet.from_names(fig1, ["a", "d"])
    assert oracle.verify(fig1, ad, Semantics.COMPLETE)
    assert enforcement_min_distance(fig1, ad) == 0


def test_variable_count_report(fig1):
    task = build_strict_complete(fig1, ["a", "e"])
    n, k = 5, 2
    tally = (n * n                      # r entries, fixed ones included
             + n * n                    # s entries
             + n                        # t entries
             + n * max(k - 2, 0)        # t chain entries
             + (n - k) * max(n - 2, 0)  # undefended-disjunction chains
             )
    assert task.registry.nominal_count == tally
    assert task.paper_estimate == 3 * n * n + n * (k - 3)
    assert task.registry.real_count == task.problem.num_variables


def test_exact_oracle_matches_bfs_micro():
    rng = np.random.default_rng(19)
    checked = 0
    while checked < 25:
        n = int(rng.integers(2, 5))
        af = random_framework(rng, n, density=0.35, self_attacks=True)
        k = int(rng.integers(1, n + 1))
        target = ArgumentSet.from_indices(
            n, sorted(rng.choice(n, size=k, replace=False).tolist()))
        exact = enforcement_min_distance(af, target)
        if exact > 4:
            continue
        assert bfs_min_distance(af, target, cap=exact) == exact
        checked += 1


def test_sa_reaches_exact_minimum_micro():
    rng = np.random.default_rng(29)
    hits = 0
    for trial in range(10):
        n = int(rng.integers(3, 6))
        af = random_framework(rng, n, density=0.35)
        k = int(rng.integers(1, n + 1))
        target = ArgumentSet.from_indices(
            n, sorted(rng.choice(n, size=k, replace=False).tolist()))
        exact = enforcement_min_distance(af, target)
        lam = n * n + 1
        task = build_strict_complete(af, target, lam)
        ss = sample(task.problem,
                    AnnealParams(num_reads=384, num_sweeps=1000, base_seed=trial,
                                 beta_hot=math.log(2) / lam,
                                 beta_cold=math.log(100)),
                    decision_count=task.num_decision_variables)
        decoded = decode_attacks(task, ss.best_assignment)
        assert not (decoded.verified and decoded.distance < exact)
        hits += decoded.verified and decoded.distance == exact
    assert hits >= 8
