"""Universes, element sets, explicit quorum systems, and reproducible randomness.

A universe is the integer range 0..n-1 (n servers).  ElementSet is an immutable
subset of a universe backed by an integer bitmap; ExplicitQuorumSystem is the
oracle-friendly representation of a quorum system as an explicit quorum list.
Rng provides counter-based randomness so that Monte Carlo trial t is a pure
function of (seed, t) no matter how trials are chunked or parallelised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from ._bitops import iter_bits
from .errors import ParameterError

__all__ = [
    "ElementSet",
    "ExplicitQuorumSystem",
    "ValidationReport",
    "AccessStrategy",
    "SystemParams",
    "Rng",
    "validate_explicit",
    "sample_crash_set",
]


@dataclass(frozen=True)
class ElementSet:
    """An immutable subset of the universe {0, ..., n-1}, stored as a bitmap."""

    n: int
    mask: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"universe size must be >= 1, got {self.n}")
        if not 0 <= self.mask < (1 << self.n):
            raise ParameterError("bitmap has members outside the universe")

    @classmethod
    def empty(cls, n: int) -> "ElementSet":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "ElementSet":
        return cls(n, (1 << n) - 1)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "ElementSet":
        mask = 0
        for i in indices:
            if not 0 <= i < n:
                raise ParameterError(f"element {i} outside universe of size {n}")
            mask |= 1 << i
        return cls(n, mask)

    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.n and (self.mask >> i) & 1 == 1

    def _check_universe(self, other: "ElementSet") -> None:
        if self.n != other.n:
            raise ParameterError(f"universe mismatch: {self.n} != {other.n}")

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._check_universe(other)
        return ElementSet(self.n, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._check_universe(other)
        return ElementSet(self.n, self.mask & other.mask)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        self._check_universe(other)
        return ElementSet(self.n, self.mask & ~other.mask)

    def complement(self) -> "ElementSet":
        return ElementSet(self.n, ((1 << self.n) - 1) & ~self.mask)

    def issubset(self, other: "ElementSet") -> bool:
        self._check_universe(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "ElementSet") -> bool:
        self._check_universe(other)
        return self.mask & other.mask == 0

    def as_bool(self) -> np.ndarray:
        """Membership as a boolean vector of length n."""
        return np.array([(self.mask >> i) & 1 for i in range(self.n)], dtype=bool)

    def __repr__(self) -> str:
        return f"ElementSet(n={self.n}, {{{', '.join(map(str, self.members()))}}})"


@dataclass(frozen=True)
class ExplicitQuorumSystem:
    """A quorum system given by an explicit, ordered list of quorums.

    Construction rejects empty quorums, universe mismatches, and duplicate
    quorums.  Pairwise intersection is *not* enforced here so that
    validate_explicit can report violations on arbitrary inputs.
    """

    n: int
    quorums: tuple[ElementSet, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"universe size must be >= 1, got {self.n}")
        object.__setattr__(self, "quorums", tuple(self.quorums))
        seen: set[int] = set()
        for idx, q in enumerate(self.quorums):
            if not isinstance(q, ElementSet):
                raise ParameterError(f"quorum {idx} is not an ElementSet")
            if q.n != self.n:
                raise ParameterError(f"quorum {idx} lives in a different universe")
            if q.mask == 0:
                raise ParameterError(f"quorum {idx} is empty")
            if q.mask in seen:
                raise ParameterError(f"duplicate quorum at index {idx}")
            seen.add(q.mask)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "ExplicitQuorumSystem":
        return cls(n, tuple(ElementSet(n, m) for m in masks))

    @property
    def m(self) -> int:
        return len(self.quorums)

    def quorum_masks(self) -> list[int]:
        return [q.mask for q in self.quorums]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_explicit(sys: ExplicitQuorumSystem) -> ValidationReport:
    """Check the quorum-system invariants: distinct quorums, each pair intersecting.

    Returns a report rather than raising; violations name the offending quorum
    indices.  Stable under reordering of the quorum list.
    """
    violations: list[str] = []
    masks = sys.quorum_masks()
    seen: dict[int, int] = {}
    for i, m in enumerate(masks):
        if m in seen:
            violations.append(f"quorums {seen[m]} and {i} are identical")
        else:
            seen[m] = i
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if masks[i] & masks[j] == 0:
                violations.append(f"quorums {i} and {j} are disjoint")
    return ValidationReport(ok=not violations, violations=tuple(violations))


class AccessStrategy:
    """A probability distribution over the quorums of an explicit system."""

    def __init__(self, weights: Iterable[float]):
        w = np.asarray(list(weights) if not isinstance(weights, np.ndarray) else weights,
                       dtype=float).ravel()
        if w.size == 0:
            raise ParameterError("strategy needs at least one weight")
        if (w < -1e-12).any():
            raise ParameterError("strategy weights must be non-negative")
        w = np.maximum(w, 0.0)
        if abs(w.sum() - 1.0) > 1e-12:
            raise ParameterError(f"strategy weights sum to {w.sum()!r}, not 1")
        self.weights = w
        self.weights.setflags(write=False)

    @classmethod
    def uniform(cls, m: int) -> "AccessStrategy":
        return cls(np.full(m, 1.0 / m))

    @classmethod
    def point_mass(cls, m: int, index: int) -> "AccessStrategy":
        w = np.zeros(m)
        w[index] = 1.0
        return cls(w)

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class SystemParams:
    """Combinatorial measures of a quorum system.

    c is the smallest quorum size, i_min the smallest pairwise quorum
    intersection, a_min the smallest transversal.  The masking level b and
    resilience f are always derived as b = min(a_min - 1, (i_min - 1) // 2)
    and f = a_min - 1.
    """

    n: int
    c: int
    i_min: int
    a_min: int
    b: int
    f: int
    load: float

    @classmethod
    def derive(cls, n: int, c: int, i_min: int, a_min: int, load: float) -> "SystemParams":
        b = min(a_min - 1, (i_min - 1) // 2)
        return cls(n=n, c=c, i_min=i_min, a_min=a_min, b=b, f=a_min - 1, load=load)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "c": self.c, "i_min": self.i_min, "a_min": self.a_min,
            "b": self.b, "f": self.f, "load": self.load,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        return cls(n=d["n"], c=d["c"], i_min=d["i_min"], a_min=d["a_min"],
                   b=d["b"], f=d["f"], load=d["load"])


_MASK64 = (1 << 64) - 1

# Raw-draw layout: crash-set sampling for trial t consumes the Philox(key=seed)
# uint64 draws [t*n, (t+1)*n).  numpy's Philox counter advances in blocks of
# four uint64 outputs, so arbitrary draw offsets are reached by setting the
# counter to start//4 and discarding start%4 leading draws.
_DRAWS_PER_BLOCK = 4
# generator() streams live above any block the raw layout can touch.
_STREAM_BASE_BLOCK = 1 << 96


@dataclass(frozen=True)
class Rng:
    """Counter-based randomness: every draw is a pure function of (seed, position).

    ``at(t)`` selects the per-trial stream t; ``uniform_draws`` exposes the
    flat raw layout used by vectorised Monte Carlo so that evaluation order
    and chunking cannot change any result.
    """

    seed: int
    stream: int = 0

    def at(self, trial: int) -> "Rng":
        if trial < 0:
            raise ParameterError("trial index must be non-negative")
        return Rng(self.seed, trial)

    def uniform_draws(self, start: int, count: int) -> np.ndarray:
        """Uniform [0,1) doubles for raw draws [start, start+count)."""
        if start < 0 or count < 0:
            raise ParameterError("draw range must be non-negative")
        if count == 0:
            return np.empty(0)
        block, offset = divmod(start, _DRAWS_PER_BLOCK)
        bg = np.random.Philox(key=self.seed & _MASK64, counter=block)
        raw = bg.random_raw(offset + count)[offset:]
        return (raw >> 11) * (2.0 ** -53)

    def generator(self) -> np.random.Generator:
        """A numpy Generator on this stream's private counter region."""
        counter = _STREAM_BASE_BLOCK * (self.stream + 1)
        return np.random.Generator(np.random.Philox(key=self.seed & _MASK64, counter=counter))


def sample_crash_set(n: int, p: float, rng: Rng) -> ElementSet:
    """Crash each of n servers independently with probability p.

    The draw is a pure function of (rng.seed, rng.stream): stream t uses raw
    draws [t*n, (t+1)*n), the same layout as crash_prob_mc trial t.
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"crash probability must be in [0,1], got {p}")
    u = rng.uniform_draws(rng.stream * n, n)
    mask = 0
    for i in np.nonzero(u < p)[0]:
        mask |= 1 << int(i)
    return ElementSet(n, mask)
