"""Exact brute-force oracle over argument subsets.

Membership checks for conflict-free/admissible/complete/stable/grounded are
polynomial and work at any size.  Enumeration and the maximality-based
semantics (preferred, semi-stable) scan all 2^n subsets and are capped by an
oracle limit (default 20 arguments) to keep runtimes in the seconds.
"""

from __future__ import annotations

from .framework import ArgumentSet, ArgumentationFramework, Semantics

DEFAULT_ORACLE_LIMIT = 20


class OracleLimitError(ValueError):
    """Framework too large for exhaustive subset enumeration."""


def attacked_mask(af: ArgumentationFramework, mask: int) -> int:
    """Bitset of arguments attacked by the member set ``mask``."""
    out = 0
    while mask:
        low = mask & -mask
        out |= af.target_masks[low.bit_length() - 1]
        mask ^= low
    return out


def defended_mask(af: ArgumentationFramework, attacked: int) -> int:
    """Arguments whose every attacker lies inside ``attacked``."""
    out = 0
    for i, am in enumerate(af.attacker_masks):
        if am & ~attacked == 0:
            out |= 1 << i
    return out


def is_conflict_free(af: ArgumentationFramework, mask: int) -> bool:
    m = mask
    while m:
        low = m & -m
        if af.attacker_masks[low.bit_length() - 1] & mask:
            return False
        m ^= low
    return True


def is_admissible(af: ArgumentationFramework, mask: int) -> bool:
    if not is_conflict_free(af, mask):
        return False
    attacked = attacked_mask(af, mask)
    m = mask
    while m:
        low = m & -m
        if af.attacker_masks[low.bit_length() - 1] & ~attacked:
            return False
        m ^= low
    return True


def is_complete(af: ArgumentationFramework, mask: int) -> bool:
    if not is_conflict_free(af, mask):
        return False
    return _complete_with(af, mask, attacked_mask(af, mask))


def _complete_with(af: ArgumentationFramework, mask: int, attacked: int) -> bool:
    # conflict-free set equal to the set it defends: admissible + closed
    return defended_mask(af, attacked) == mask


def is_stable(af: ArgumentationFramework, mask: int) -> bool:
    # conflict-free with full range; such a set is automatically complete
    if not is_conflict_free(af, mask):
        return False
    full = (1 << af.num_arguments) - 1
    return mask | attacked_mask(af, mask) == full


def grounded_mask(af: ArgumentationFramework) -> int:
    """Least fixpoint of the defense operator."""
    current = 0
    while True:
        nxt = defended_mask(af, attacked_mask(af, current))
        if nxt == current:
            return current
        current = nxt


def _check(af: ArgumentationFramework, mask: int, sigma: Semantics) -> bool:
    if sigma is Semantics.CONFLICT_FREE:
        return is_conflict_free(af, mask)
    if sigma is Semantics.ADMISSIBLE:
        return is_admissible(af, mask)
    if sigma is Semantics.COMPLETE:
        return is_complete(af, mask)
    if sigma is Semantics.STABLE:
        return is_stable(af, mask)
    if sigma is Semantics.GROUNDED:
        return mask == grounded_mask(af)
    raise ValueError(f"no polynomial check for {sigma}")


_POLYNOMIAL = (
    Semantics.CONFLICT_FREE, Semantics.ADMISSIBLE, Semantics.COMPLETE,
    Semantics.STABLE, Semantics.GROUNDED,
)


def verify(af: ArgumentationFramework, e: ArgumentSet, sigma: Semantics,
           limit: int = DEFAULT_ORACLE_LIMIT) -> bool:
    """Is E a sigma-extension?  Preferred/semi-stable require enumeration."""
    if e.size != af.num_arguments:
        raise ValueError("argument set does not match framework size")
    if sigma in _POLYNOMIAL:
        return _check(af, e.mask, sigma)
    if af.num_arguments > limit:
        raise OracleLimitError(
            f"{sigma.value} verification needs enumeration; "
            f"{af.num_arguments} arguments exceed the oracle limit {limit}")
    return e.mask in {s.mask for s in enumerate_extensions(af, sigma, limit)}


def _complete_masks(af: ArgumentationFramework) -> list[int]:
    n = af.num_arguments
    out = []
    attacker_masks = af.attacker_masks
    for mask in range(1 << n):
        m = mask
        ok = True
        while m:
            low = m & -m
            if attacker_masks[low.bit_length() - 1] & mask:
                ok = False
                break
            m ^= low
        if ok and _complete_with(af, mask, attacked_mask(af, mask)):
            out.append(mask)
    return out


def enumerate_extensions(af: ArgumentationFramework, sigma: Semantics,
                         limit: int = DEFAULT_ORACLE_LIMIT) -> list[ArgumentSet]:
    """All sigma-extensions, ordered by cardinality then member indices."""
    n = af.num_arguments
    if n > limit:
        raise OracleLimitError(f"{n} arguments exceed the oracle limit {limit}")
    if sigma is Semantics.GROUNDED:
        masks = [grounded_mask(af)]
    elif sigma is Semantics.PREFERRED:
        complete = _complete_masks(af)
        masks = [m for m in complete
                 if not any(o != m and o & m == m for o in complete)]
    elif sigma is Semantics.SEMI_STABLE:
        complete = _complete_masks(af)
        ranges = {m: m | attacked_mask(af, m) for m in complete}
        masks = [m for m in complete
                 if not any(ranges[o] != ranges[m] and ranges[o] & ranges[m] == ranges[m]
                            for o in complete)]
    elif sigma is Semantics.COMPLETE:
        masks = _complete_masks(af)
    else:
        masks = [m for m in range(1 << n) if _check(af, m, sigma)]
    sets = [ArgumentSet(m, n) for m in masks]
    sets.sort(key=lambda s: (len(s), s.indices()))
    return sets


def decide_oracle(af: ArgumentationFramework, arg: int, sigma: Semantics,
                  mode: str = "credulous", limit: int = DEFAULT_ORACLE_LIMIT) -> bool:
    """Credulous: member of some extension.  Skeptical: member of all
    (vacuously true when sigma admits no extension)."""
    if not 0 <= arg < af.num_arguments:
        raise ValueError(f"argument index {arg} out of range")
    extensions = enumerate_extensions(af, sigma, limit)
    if mode == "credulous":
        return any(arg in e for e in extensions)
    if mode == "skeptical":
        return all(arg in e for e in extensions)
    raise ValueError(f"unknown mode {mode!r}")
