"""Immutable directed-graph snapshot with partial weight assignments.

A network is a set of origins O, a set of terminals T, and directed edges
(o, t).  The same token may appear in both O and T; the two occurrences are
distinct elements (all queries are role-specific, so no merging ever
happens).  Weights are known only on a training subset of one element kind:
a subset of origins, a subset of terminals, or a subset of edges.

Neighbor relations (all relative to the training subset):

* an origin's neighbors are the training origins that share at least one
  terminal with it;
* a terminal's neighbors are the training terminals that share at least one
  origin with it;
* an edge's neighbors are the training edges that share its origin or its
  terminal.

Under the literal definitions a training element with at least one incident
edge is always its own neighbor; pass ``exclude_self=True`` to drop that
self-pairing for sensitivity checks.

Every collection in this module iterates in a deterministic order derived
from edge insertion order, so downstream floating-point reductions are
reproducible across processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Hashable, Iterable, Mapping

import math

from .errors import DomainError

Token = Hashable
Edge = tuple


class WeightKind(str, Enum):
    """Which element kind a partial weighting assigns weights to."""

    ORIGIN = "origin"
    TERMINAL = "terminal"
    EDGE = "edge"


@dataclass(frozen=True)
class DirectedGraph:
    """Deduplicated directed graph with origin- and terminal-side indexes.

    Construct via :func:`build_graph`; instances are immutable and safe to
    share across threads.
    """

    origins: tuple
    terminals: tuple
    edges: tuple
    origin_index: Mapping  # origin token -> tuple of its edges
    terminal_index: Mapping  # terminal token -> tuple of its edges

    @cached_property
    def _origin_set(self):
        return frozenset(self.origins)

    @cached_property
    def _terminal_set(self):
        return frozenset(self.terminals)

    @cached_property
    def _edge_set(self):
        return frozenset(self.edges)

    def has_origin(self, token) -> bool:
        return token in self._origin_set

    def has_terminal(self, token) -> bool:
        return token in self._terminal_set

    def has_edge(self, edge) -> bool:
        return edge in self._edge_set

    def out_edges(self, origin) -> tuple:
        """Edges leaving ``origin``, in insertion order."""
        if origin not in self._origin_set:
            raise DomainError(f"origin {origin!r} is not in the graph")
        return self.origin_index[origin]

    def in_edges(self, terminal) -> tuple:
        """Edges entering ``terminal``, in insertion order."""
        if terminal not in self._terminal_set:
            raise DomainError(f"terminal {terminal!r} is not in the graph")
        return self.terminal_index[terminal]

    def rebuild_indexes(self):
        """Recompute both adjacency indexes from the edge tuple.

        Exists so tests can check the stored indexes are exactly the edge
        set viewed two ways.
        """
        return _index_edges(self.edges)

    def __repr__(self):
        return (
            f"DirectedGraph(origins={len(self.origins)}, "
            f"terminals={len(self.terminals)}, edges={len(self.edges)})"
        )


def _index_edges(edges):
    by_origin: dict = {}
    by_terminal: dict = {}
    for e in edges:
        by_origin.setdefault(e[0], []).append(e)
        by_terminal.setdefault(e[1], []).append(e)
    return (
        {k: tuple(v) for k, v in by_origin.items()},
        {k: tuple(v) for k, v in by_terminal.items()},
    )


def build_graph(edge_list: Iterable) -> DirectedGraph:
    """Build a graph from (origin, terminal) pairs.

    Duplicate pairs collapse to one edge (first occurrence kept).  Origins
    and terminals are exactly the tokens appearing in first/second position,
    in order of first appearance.
    """
    edges = []
    seen = set()
    origins = []
    seen_o = set()
    terminals = []
    seen_t = set()
    for pair in edge_list:
        o, t = pair[0], pair[1]
        e = (o, t)
        if e in seen:
            continue
        seen.add(e)
        edges.append(e)
        if o not in seen_o:
            seen_o.add(o)
            origins.append(o)
        if t not in seen_t:
            seen_t.add(t)
            terminals.append(t)
    if not edges:
        raise DomainError("cannot build a graph from an empty edge list")
    origin_index, terminal_index = _index_edges(edges)
    return DirectedGraph(
        origins=tuple(origins),
        terminals=tuple(terminals),
        edges=tuple(edges),
        origin_index=origin_index,
        terminal_index=terminal_index,
    )


@dataclass(frozen=True)
class Weighting:
    """Known weights on a training subset of origins, terminals, or edges.

    ``weights`` maps each training element to a value inside ``[lo, hi]``.
    The mapping's insertion order is preserved and treated as the canonical
    enumeration order of the training domain.
    """

    kind: WeightKind
    weights: Mapping
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"weight range [{self.lo}, {self.hi}] is empty")
        object.__setattr__(self, "weights", dict(self.weights))
        for elem, w in self.weights.items():
            if not math.isfinite(w):
                raise ValueError(f"weight for {elem!r} is not finite: {w!r}")
            if not self.lo <= w <= self.hi:
                raise ValueError(
                    f"weight {w!r} for {elem!r} outside [{self.lo}, {self.hi}]"
                )

    @cached_property
    def domain(self):
        return frozenset(self.weights)

    @property
    def value_range(self):
        return (self.lo, self.hi)

    def __len__(self):
        return len(self.weights)

    def check_domain(self, graph: DirectedGraph) -> None:
        """Raise unless every weighted element exists in ``graph``."""
        if self.kind is WeightKind.ORIGIN:
            missing = [x for x in self.weights if not graph.has_origin(x)]
        elif self.kind is WeightKind.TERMINAL:
            missing = [x for x in self.weights if not graph.has_terminal(x)]
        else:
            missing = [x for x in self.weights if not graph.has_edge(x)]
        if missing:
            raise DomainError(
                f"{len(missing)} weighted element(s) not in the graph, "
                f"first: {missing[0]!r}"
            )


def _require_kind(weighting: Weighting, kind: WeightKind) -> None:
    if weighting.kind is not kind:
        raise DomainError(
            f"expected a {kind.value}-weighted network, got {weighting.kind.value}"
        )


def neighbors_of_origin(
    graph: DirectedGraph, weighting: Weighting, origin, *, exclude_self=False
) -> tuple:
    """Training origins sharing at least one terminal with ``origin``.

    Returns a deduplicated tuple in deterministic order; treat it as a set.
    """
    _require_kind(weighting, WeightKind.ORIGIN)
    out = []
    seen = set()
    domain = weighting.domain
    for _, t in graph.out_edges(origin):
        for alpha, _ in graph.terminal_index[t]:
            if alpha in seen or alpha not in domain:
                continue
            if exclude_self and alpha == origin:
                continue
            seen.add(alpha)
            out.append(alpha)
    return tuple(out)


def neighbors_of_terminal(
    graph: DirectedGraph, weighting: Weighting, terminal, *, exclude_self=False
) -> tuple:
    """Training terminals sharing at least one origin with ``terminal``."""
    _require_kind(weighting, WeightKind.TERMINAL)
    out = []
    seen = set()
    domain = weighting.domain
    for o, _ in graph.in_edges(terminal):
        for _, beta in graph.origin_index[o]:
            if beta in seen or beta not in domain:
                continue
            if exclude_self and beta == terminal:
                continue
            seen.add(beta)
            out.append(beta)
    return tuple(out)


def neighbors_of_edge(
    graph: DirectedGraph, weighting: Weighting, edge, *, exclude_self=False
) -> tuple:
    """Training edges sharing the origin or the terminal of ``edge``."""
    _require_kind(weighting, WeightKind.EDGE)
    if not graph.has_edge(edge):
        raise DomainError(f"edge {edge!r} is not in the graph")
    out = []
    seen = set()
    domain = weighting.domain
    for cand in graph.origin_index[edge[0]]:
        if cand in domain and cand not in seen:
            if exclude_self and cand == edge:
                continue
            seen.add(cand)
            out.append(cand)
    for cand in graph.terminal_index[edge[1]]:
        if cand in domain and cand not in seen:
            if exclude_self and cand == edge:
                continue
            seen.add(cand)
            out.append(cand)
    return tuple(out)


def neighbors(graph, weighting, element, *, exclude_self=False) -> tuple:
    """Dispatch to the neighbor relation matching ``weighting.kind``."""
    if weighting.kind is WeightKind.ORIGIN:
        return neighbors_of_origin(graph, weighting, element, exclude_self=exclude_self)
    if weighting.kind is WeightKind.TERMINAL:
        return neighbors_of_terminal(graph, weighting, element, exclude_self=exclude_self)
    return neighbors_of_edge(graph, weighting, element, exclude_self=exclude_self)
