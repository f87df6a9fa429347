"""Quorum-system composition: replace each outer element by an inner copy.

All five combinatorial measures multiply under composition, the crash
probability composes functionally (F(p) of the whole = outer-F applied to
inner-F(p)), and the load multiplies.  compose_explicit is the enumeration
oracle; compose_params is the parameter algebra.
"""

from __future__ import annotations

from itertools import product

from .core import ExplicitQuorumSystem, SystemParams
from .errors import SizeError

__all__ = ["compose_explicit", "compose_params", "compose_handles"]

DEFAULT_COMPOSE_CAP = 10 ** 6


def compose_explicit(outer: ExplicitQuorumSystem, inner: ExplicitQuorumSystem,
                     cap: int = DEFAULT_COMPOSE_CAP) -> ExplicitQuorumSystem:
    """Enumerate the composition of ``outer`` over disjoint copies of ``inner``.

    The composed universe has outer.n * inner.n elements, with copy i of the
    inner universe occupying indices [i*inner.n, (i+1)*inner.n).  Quorums are
    every union of one inner quorum per element of an outer quorum; duplicate
    unions (possible only when outer quorums nest) are removed.
    """
    count = sum(inner.m ** len(q) for q in outer.quorums)
    if count > cap:
        raise SizeError(f"composition enumerates {count} quorums, exceeding the cap of {cap}")
    n_r = inner.n
    inner_masks = inner.quorum_masks()
    composed: dict[int, None] = {}
    for q in outer.quorums:
        members = q.members()
        for choice in product(inner_masks, repeat=len(members)):
            mask = 0
            for i, inner_mask in zip(members, choice):
                mask |= inner_mask << (i * n_r)
            composed[mask] = None
    return ExplicitQuorumSystem.from_masks(outer.n * inner.n, composed)


def compose_params(outer: SystemParams, inner: SystemParams) -> SystemParams:
    """Parameter algebra of composition: n, c, i_min, a_min, and load multiply.

    The masking level b and resilience f are re-derived from the composed
    intersection and transversal sizes.
    """
    return SystemParams.derive(
        n=outer.n * inner.n,
        c=outer.c * inner.c,
        i_min=outer.i_min * inner.i_min,
        a_min=outer.a_min * inner.a_min,
        load=outer.load * inner.load,
    )


def compose_handles(outer, inner):
    """Compose two construction handles; liveness evaluates recursively."""
    from .constructions import ComposedHandle

    return ComposedHandle(outer, inner)
