"""Argumentation-framework data model and file formats.

An abstract argumentation framework is a directed graph: arguments attack
other arguments.  Sets of arguments are judged acceptable under a semantics
(conflict-free, admissible, complete, ...).  This module holds the immutable
framework/set types plus the two common text formats (APX facts and the
numeric ICCMA format).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class ParseError(ValueError):
    """Malformed framework file; message carries the 1-based line number."""


class Semantics(str, Enum):
    CONFLICT_FREE = "conflict-free"
    ADMISSIBLE = "admissible"
    COMPLETE = "complete"
    PREFERRED = "preferred"
    SEMI_STABLE = "semi-stable"
    STABLE = "stable"
    GROUNDED = "grounded"

    @classmethod
    def parse(cls, token: str) -> "Semantics":
        aliases = {
            "cf": cls.CONFLICT_FREE,
            "ad": cls.ADMISSIBLE,
            "adm": cls.ADMISSIBLE,
            "co": cls.COMPLETE,
            "com": cls.COMPLETE,
            "pr": cls.PREFERRED,
            "prf": cls.PREFERRED,
            "sst": cls.SEMI_STABLE,
            "st": cls.STABLE,
            "stb": cls.STABLE,
            "gr": cls.GROUNDED,
        }
        key = token.strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown semantics {token!r}") from None


class ArgumentationFramework:
    """Arguments plus a directed attack relation.

    Argument order is the order of first appearance in the input; that order
    fixes variable numbering everywhere downstream, so it must be stable.
    Attacks are stored as deduplicated (attacker, target) index pairs.
    Self-attacks are legal.  Instances are immutable after construction and
    safe to share across threads.
    """

    __slots__ = (
        "arguments", "attacks", "_index", "attackers", "targets",
        "attacker_masks", "target_masks",
    )

    def __init__(self, arguments, attacks):
        self.arguments = tuple(str(a) for a in arguments)
        n = len(self.arguments)
        if len(set(self.arguments)) != n:
            raise ValueError("argument names are not unique")
        attack_set = set()
        for a, b in attacks:
            a, b = int(a), int(b)
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"attack ({a},{b}) out of range for {n} arguments")
            attack_set.add((a, b))
        self.attacks = frozenset(attack_set)
        self._index = {name: i for i, name in enumerate(self.arguments)}
        attackers = [[] for _ in range(n)]
        targets = [[] for _ in range(n)]
        for a, b in sorted(attack_set):
            attackers[b].append(a)
            targets[a].append(b)
        self.attackers = tuple(tuple(v) for v in attackers)
        self.targets = tuple(tuple(v) for v in targets)
        self.attacker_masks = tuple(_mask(v) for v in attackers)
        self.target_masks = tuple(_mask(v) for v in targets)

    @property
    def num_arguments(self) -> int:
        return len(self.arguments)

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown argument {name!r}") from None

    def attacker_counts(self) -> tuple[int, ...]:
        """Number of attackers h_i per argument (self-attacks included)."""
        return tuple(len(v) for v in self.attackers)

    def __eq__(self, other):
        return (isinstance(other, ArgumentationFramework)
                and self.arguments == other.arguments
                and self.attacks == other.attacks)

    def __hash__(self):
        return hash((self.arguments, self.attacks))

    def __repr__(self):
        return (f"ArgumentationFramework({self.num_arguments} arguments, "
                f"{len(self.attacks)} attacks)")


def _mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class ArgumentSet:
    """Subset of the arguments of one framework, stored as a bitset."""

    mask: int
    size: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.size:
            raise ValueError("membership bits outside [0, n)")

    @classmethod
    def from_indices(cls, size: int, indices) -> "ArgumentSet":
        return cls(_mask(indices), size)

    @classmethod
    def from_names(cls, af: ArgumentationFramework, names) -> "ArgumentSet":
        return cls(_mask(af.index_of(x) for x in names), af.num_arguments)

    @classmethod
    def empty(cls, size: int) -> "ArgumentSet":
        return cls(0, size)

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.size) if self.mask >> i & 1)

    def names(self, af: ArgumentationFramework) -> tuple[str, ...]:
        return tuple(af.arguments[i] for i in self.indices())

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.size and bool(self.mask >> index & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self):
        return iter(self.indices())


def attack_range(af: ArgumentationFramework, e: ArgumentSet) -> ArgumentSet:
    """E plus every argument attacked by a member of E."""
    if e.size != af.num_arguments:
        raise ValueError("argument set does not match framework size")
    m = e.mask
    out = m
    while m:
        low = m & -m
        out |= af.target_masks[low.bit_length() - 1]
        m ^= low
    return ArgumentSet(out, e.size)


_APX_ARG = re.compile(r"arg\(\s*([^(),\s]+)\s*\)\.")
_APX_ATT = re.compile(r"att\(\s*([^(),\s]+)\s*,\s*([^(),\s]+)\s*\)\.")


def parse_apx(text: str) -> ArgumentationFramework:
    """APX facts: lines ``arg(<name>).`` and ``att(<a>,<b>).``"""
    arguments: list[str] = []
    seen = set()
    attacks = []
    pending = []  # attacks may appear before both endpoints are declared
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for stmt in _split_facts(line, lineno):
            m = _APX_ARG.fullmatch(stmt)
            if m:
                name = m.group(1)
                if name in seen:
                    raise ParseError(f"line {lineno}: duplicate argument {name!r}")
                seen.add(name)
                arguments.append(name)
                continue
            m = _APX_ATT.fullmatch(stmt)
            if m:
                pending.append((lineno, m.group(1), m.group(2)))
                continue
            raise ParseError(f"line {lineno}: cannot parse {stmt!r}")
    index = {name: i for i, name in enumerate(arguments)}
    for lineno, a, b in pending:
        if a not in index:
            raise ParseError(f"line {lineno}: attack references undeclared argument {a!r}")
        if b not in index:
            raise ParseError(f"line {lineno}: attack references undeclared argument {b!r}")
        attacks.append((index[a], index[b]))
    return ArgumentationFramework(arguments, attacks)


def _split_facts(line: str, lineno: int):
    # several facts may share a line; every fact ends with ')' '.'
    parts = [p.strip() for p in line.split(".")]
    if parts[-1]:
        raise ParseError(f"line {lineno}: missing '.' terminator")
    return [p + "." for p in parts[:-1] if p]


def parse_iccma(text: str) -> ArgumentationFramework:
    """ICCMA numeric format: header ``p af <n>``, then 1-based ``<i> <j>`` lines."""
    n = None
    attacks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 3 or fields[0] != "p" or fields[1] != "af":
                raise ParseError(f"line {lineno}: expected header 'p af <n>'")
            try:
                n = int(fields[2])
            except ValueError:
                raise ParseError(f"line {lineno}: bad argument count {fields[2]!r}") from None
            if n < 0:
                raise ParseError(f"line {lineno}: negative argument count")
            continue
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected '<attacker> <target>'")
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric attack {line!r}") from None
        if not (1 <= a <= n and 1 <= b <= n):
            raise ParseError(f"line {lineno}: attack ({a},{b}) outside 1..{n}")
        attacks.append((a - 1, b - 1))
    if n is None:
        raise ParseError("line 1: missing 'p af <n>' header")
    return ArgumentationFramework([str(i + 1) for i in range(n)], attacks)


def parse(text: str, fmt: str = "auto") -> ArgumentationFramework:
    """Parse ``apx`` or ``iccma`` text; ``auto`` sniffs the header."""
    if fmt == "auto":
        fmt = detect_format(text)
    if fmt == "apx":
        return parse_apx(text)
    if fmt == "iccma":
        return parse_iccma(text)
    raise ValueError(f"unknown format {fmt!r}")


def detect_format(text: str) -> str:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        return "iccma" if line.startswith("p af") else "apx"
    return "apx"


def format_apx(af: ArgumentationFramework) -> str:
    lines = [f"arg({name})." for name in af.arguments]
    lines += [f"att({af.arguments[a]},{af.arguments[b]})." for a, b in sorted(af.attacks)]
    return "\n".join(lines) + "\n"


def format_iccma(af: ArgumentationFramework) -> str:
    lines = [f"p af {af.num_arguments}"]
    lines += [f"{a + 1} {b + 1}" for a, b in sorted(af.attacks)]
    return "\n".join(lines) + "\n"
