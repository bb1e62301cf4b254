"""Neighbor-average profiles, bandwidth counts, and the count distance.

For a query element x with neighbor set N(x) inside the training domain,
the profile records

* ``avg_weight``: the arithmetic mean of the training weights over N(x)
  (undefined when N(x) is empty),
* ``band_count``: the number of neighbors whose training weight lies within
  the bandwidth ``h`` of ``avg_weight`` (zero when the average is
  undefined).

The distance between two elements of the same kind is the absolute
difference of their band counts.  It is a metric modulo the equivalence
"equal band count": nonnegative, symmetric, triangle inequality, and zero
exactly on equivalent pairs.  Elements with empty neighborhoods all sit in
the count-zero class.

All sums run over a canonically sorted value order so results do not depend
on enumeration order (see :func:`stable_mean`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DomainError
from .graph import DirectedGraph, Weighting, neighbors


def stable_mean(values: Sequence[float]) -> float:
    """Mean with the summation order fixed by sorting the values.

    Makes the result invariant under any permutation of the input, so
    predictions and profiles are bit-identical no matter how the caller
    enumerated the underlying sets.
    """
    vals = sorted(values)
    if not vals:
        raise ValueError("stable_mean of an empty sequence")
    return sum(vals) / len(vals)


def avg_neighbor_weight(neighbor_elems, weighting: Weighting) -> Optional[float]:
    """Mean training weight over a neighbor collection; None when empty."""
    ws = []
    for n in neighbor_elems:
        try:
            ws.append(weighting.weights[n])
        except KeyError:
            raise DomainError(
                f"neighbor {n!r} has no training weight; neighbor sets must "
                "be computed against the same weighting"
            ) from None
    if not ws:
        return None
    return stable_mean(ws)


def band_count(neighbor_elems, weighting: Weighting, avg: Optional[float], h: float) -> int:
    """Number of neighbors whose weight lies within ``h`` of ``avg``."""
    if not h > 0:
        raise ValueError(f"bandwidth h must be positive, got {h!r}")
    if avg is None:
        return 0
    count = 0
    for n in neighbor_elems:
        if abs(weighting.weights[n] - avg) <= h:
            count += 1
    return count


@dataclass(frozen=True)
class CountProfile:
    """Cached neighborhood summary of one element."""

    element: object
    neighbors: tuple
    avg_weight: Optional[float]
    band_count: int
    h: float

    @property
    def neighbor_count(self) -> int:
        return len(self.neighbors)


class CountMetric:
    """Count distance for one (graph, weighting, h) triple.

    Profiles are computed lazily and cached; the inputs are immutable, so
    the cache never invalidates.  One instance serves every element of the
    kind matching ``weighting.kind`` (all origins, all terminals, or all
    edges of the graph).
    """

    def __init__(
        self,
        graph: DirectedGraph,
        weighting: Weighting,
        h: float,
        *,
        exclude_self: bool = False,
    ):
        if not h > 0:
            raise ValueError(f"bandwidth h must be positive, got {h!r}")
        weighting.check_domain(graph)
        self.graph = graph
        self.weighting = weighting
        self.h = float(h)
        self.exclude_self = exclude_self
        self._profiles: dict = {}

    def profile(self, element) -> CountProfile:
        try:
            return self._profiles[element]
        except KeyError:
            pass
        except TypeError:
            raise DomainError(f"unhashable element {element!r}") from None
        nbs = neighbors(
            self.graph, self.weighting, element, exclude_self=self.exclude_self
        )
        avg = avg_neighbor_weight(nbs, self.weighting)
        prof = CountProfile(
            element=element,
            neighbors=nbs,
            avg_weight=avg,
            band_count=band_count(nbs, self.weighting, avg, self.h),
            h=self.h,
        )
        self._profiles[element] = prof
        return prof

    def avg_weight(self, element) -> Optional[float]:
        return self.profile(element).avg_weight

    def band_count(self, element) -> int:
        return self.profile(element).band_count

    def distance(self, x, y) -> int:
        """Absolute band-count difference; zero iff x and y are equivalent."""
        return abs(self.profile(x).band_count - self.profile(y).band_count)

    def equivalent(self, x, y) -> bool:
        return self.profile(x).band_count == self.profile(y).band_count

    def transfer(self, element) -> float:
        """Real-number embedding of an element: its band count as a float."""
        return float(self.profile(element).band_count)
