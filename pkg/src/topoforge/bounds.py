"""Moore-tree lower bounds on mean path length and diameter of (n, k) regular graphs.

At most k(k-1)^(i-1) vertices can sit at distance i from any vertex. Filling
those shells greedily gives the smallest possible distance sum seen from one
vertex, hence a bound on MPL that holds for every vertex simultaneously.
All arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParams
from .graph import GraphMetrics, RegularGraph, compute_metrics


def _check(n: int, k: int) -> None:
    if n < 2 or k < 2 or (n * k) % 2:
        raise BadParams(f"no (n={n}, k={k}) regular graph bound: need n >= 2, k >= 2, n*k even")


def shell_capacity(k: int, i: int) -> int:
    return k * (k - 1) ** (i - 1)


@dataclass(frozen=True)
class ShellProfile:
    n: int
    k: int
    shell_sizes: tuple[int, ...]  # entry i-1 holds shell i


def shell_profile(n: int, k: int) -> ShellProfile:
    _check(n, k)
    sizes = []
    left = n - 1
    i = 1
    while left > 0:
        take = min(left, shell_capacity(k, i))
        sizes.append(take)
        left -= take
        i += 1
    return ShellProfile(n, k, tuple(sizes))


def mpl_lower_bound(n: int, k: int) -> Fraction:
    prof = shell_profile(n, k)
    return Fraction(sum(i * s for i, s in enumerate(prof.shell_sizes, start=1)), n - 1)


def diameter_lower_bound(n: int, k: int) -> int:
    _check(n, k)
    reach, d = 1, 0
    while reach < n:
        d += 1
        reach += shell_capacity(k, d)
    return d


@dataclass(frozen=True)
class BoundReport:
    mpl_lower: Fraction
    diameter_lower: int
    mpl_achieved: Fraction
    diameter_achieved: int

    @property
    def mpl_gap(self) -> Fraction:
        return self.mpl_achieved - self.mpl_lower

    @property
    def diameter_gap(self) -> int:
        return self.diameter_achieved - self.diameter_lower


def gap_report(g: RegularGraph, metrics: GraphMetrics | None = None) -> BoundReport:
    m = metrics if metrics is not None else compute_metrics(g)
    return BoundReport(
        mpl_lower=mpl_lower_bound(g.n, g.k),
        diameter_lower=diameter_lower_bound(g.n, g.k),
        mpl_achieved=m.mpl_exact,
        diameter_achieved=m.diameter,
    )
