"""Ground-truth enumeration of walks on the wedge-indexed covering grid.

A point of the covering space is a triple ``(k, a, b)``: wedge index ``k``
plus quarter-plane coordinates ``(a, b)`` inside that wedge, encoded by the
monomial ``s^k x^a y^b``.  Walks start at ``(0, 0, 0)``.  Transitions are read
off the defining functional equations term by term:

cell-centred variant, from ``(k, a, b)``:
    (a,b) -> (a+1,b+1); (a-1,b) if a>=1; (a,b-1) if b>=1;
    (k,0,b) -> (k+1,b,0);  (k,a,0) -> (k-1,0,a+1)

vertex-centred variant (walks may not pass through the origin):
    same interior steps; (k,0,b) -> (k+1,b-1,0) only for b>=1;
    (k,a,0) -> (k-1,0,a+2)

The dynamic program is exact (Python integers) and serves as the independent
oracle for every closed form in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple

from .series import TSeries, WindingPoly

Variant = str  # "cell" | "vertex"


class WindowOverflow(RuntimeError):
    """A reachable state escaped the bounds implied by the walk length."""


class WedgeState(NamedTuple):
    k: int
    a: int
    b: int


def transitions_cell(state: WedgeState) -> list[WedgeState]:
    k, a, b = state
    out = [WedgeState(k, a + 1, b + 1)]
    if a >= 1:
        out.append(WedgeState(k, a - 1, b))
    if b >= 1:
        out.append(WedgeState(k, a, b - 1))
    if a == 0:
        out.append(WedgeState(k + 1, b, 0))
    if b == 0:
        out.append(WedgeState(k - 1, 0, a + 1))
    return out


def transitions_vertex(state: WedgeState) -> list[WedgeState]:
    k, a, b = state
    out = [WedgeState(k, a + 1, b + 1)]
    if a >= 1:
        out.append(WedgeState(k, a - 1, b))
    if b >= 1:
        out.append(WedgeState(k, a, b - 1))
    if a == 0 and b >= 1:
        out.append(WedgeState(k + 1, b - 1, 0))
    if b == 0:
        out.append(WedgeState(k - 1, 0, a + 2))
    return out


def transition_function(variant: Variant) -> Callable[[WedgeState], list[WedgeState]]:
    if variant == "cell":
        return transitions_cell
    if variant == "vertex":
        return transitions_vertex
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class CountTable:
    """Exact path counts ``p[n][state]`` for all lengths up to ``n_max``."""

    variant: Variant
    n_max: int
    k_window: int
    layers: tuple[dict[WedgeState, int], ...]

    def count(self, n: int, state: tuple[int, int, int]) -> int:
        return self.layers[n].get(WedgeState(*state), 0)

    def corner_distribution(self, n: int) -> dict[int, int]:
        """Winding distribution over walks of length ``n`` ending at a corner."""
        out: dict[int, int] = {}
        for (k, a, b), c in self.layers[n].items():
            if a == 0 and b == 0:
                out[k] = out.get(k, 0) + c
        return dict(sorted(out.items()))

    def total(self, n: int) -> int:
        return sum(self.layers[n].values())


def enumerate_walks(
    variant: Variant,
    n_max: int,
    transitions: Callable[[WedgeState], Iterable[WedgeState]] | None = None,
    allowed: Callable[[WedgeState], bool] | None = None,
) -> CountTable:
    """Forward DP over the covering grid.

    ``transitions`` overrides the step generator (used for fault-injection
    tests); ``allowed`` filters target states (used for winding corridors).
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    trans = transitions if transitions is not None else transition_function(variant)
    k_window = n_max
    cur: dict[WedgeState, int] = {WedgeState(0, 0, 0): 1}
    layers = [cur]
    for n in range(1, n_max + 1):
        nxt: dict[WedgeState, int] = {}
        get = nxt.get
        for st, c in cur.items():
            for t2 in trans(st):
                if allowed is not None and not allowed(t2):
                    continue
                nxt[t2] = get(t2, 0) + c
        for (k, a, b) in nxt:
            if abs(k) > k_window or a > n_max + 2 or b > n_max + 2:
                raise WindowOverflow(f"state ({k},{a},{b}) out of bounds at length {n}")
        layers.append(nxt)
        cur = nxt
    return CountTable(variant, n_max, k_window, tuple(layers))


@lru_cache(maxsize=8)
def _cached_table(variant: Variant, n_max: int) -> CountTable:
    return enumerate_walks(variant, n_max)


def excursion_series(variant: Variant, n_max: int) -> TSeries:
    """Collapse the count table at the corner states into a series in t, s."""
    table = _cached_table(variant, n_max)
    coeffs = [
        WindingPoly.from_dict(table.corner_distribution(n)) for n in range(n_max + 1)
    ]
    return TSeries(coeffs, n_max)


# ---------------------------------------------------------------------------
# winding corridors (geometric oracle)
# ---------------------------------------------------------------------------
#
# Vertex-centred walks live on the triangular embedding P(x, y) =
# x*(1,0) + y*(-1/2, sqrt(3)/2) with steps {(1,1), (-1,0), (0,-1)}, starting
# at w0 = (1,0) (angle 0) and never visiting the origin.  Along a straight
# edge the angle of the moving point is monotone (the cross product of
# position with a fixed step vector is constant), so a winding corridor
# constrains exactly the lifted angles of the visited vertices.  Points are
# carried as integer pairs (A, B) = (2x - y, y), i.e. P = (A/2, B*sqrt(3)/2),
# which makes every comparison against the corridor walls (multiples of
# pi/3) an exact integer sign test.

_STEPS_XY = ((1, 1), (-1, 0), (0, -1))
_WALL_DIRS = ((2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1))  # angles m*pi/3
_ADJACENT = {(1, 0): 0, (0, 1): 2, (-1, -1): 4}  # vertex -> principal sector u


def _cross(a: tuple[int, int], b: tuple[int, int]) -> int:
    return a[0] * b[1] - b[0] * a[1]


def _sector(ab: tuple[int, int]) -> tuple[int, bool]:
    """Principal sector index u in 0..5 with angle in [u*pi/3, (u+1)*pi/3); the
    flag marks points lying exactly on the sector wall u*pi/3."""
    for m, d in enumerate(_WALL_DIRS):
        c = _cross(d, ab)
        if c == 0 and d[0] * ab[0] + 3 * d[1] * ab[1] > 0:
            return m, True
    for m, d in enumerate(_WALL_DIRS):
        if _cross(d, ab) > 0 and _cross(_WALL_DIRS[(m + 1) % 6], ab) < 0:
            return m, False
    raise ValueError(f"origin has no direction: {ab}")


def _lift_step(p: tuple[int, int], q: tuple[int, int], j: int) -> int:
    """Lifted sector index after stepping from p to q (both in (A,B) coords).

    j is the current lifted index (angle in [j*pi/3, (j+1)*pi/3)); a single
    lattice step sweeps less than pi, so the lift is determined by the turn
    direction and the principal sectors alone.
    """
    cr = _cross(p, q)
    if cr == 0:
        return j
    up, _ = _sector(p)
    uq, _ = _sector(q)
    if cr > 0:
        return j + (uq - up) % 6
    return j - (up - uq) % 6


def corridor_series(k: int, k1: int, k2: int, n_max: int) -> list[int]:
    """Corridor-confined vertex-model excursion counts, from the geometry.

    Counts walks of each length from w0 to a vertex adjacent to the origin
    with final winding angle exactly 2*pi*k/3, the winding angle staying
    strictly inside (k1*pi/3, k2*pi/3) at every vertex along the way.
    Independent of the wedge encoding: positions and lifted angles are
    tracked on the actual lattice with exact integer tests.
    """
    if not (k1 < 0 < k2 and k1 < 2 * k < k2):
        raise ValueError("need k1 < 0 < k2 and k1 < 2k < k2")
    start = ((2, 0), 0)  # w0 = (1,0) at lifted angle 0
    cur: dict[tuple[tuple[int, int], int], int] = {start: 1}
    targets = {
        ((2 * x - y, y), 2 * k): None for (x, y), u in _ADJACENT.items() if (u - 2 * k) % 6 == 0
    }
    out = [sum(c for st, c in cur.items() if st in targets)]
    for _ in range(n_max):
        nxt: dict[tuple[tuple[int, int], int], int] = {}
        for ((pa, pb), j), c in cur.items():
            x = (pa + pb) // 2
            y = pb
            for dx, dy in _STEPS_XY:
                x2, y2 = x + dx, y + dy
                if x2 == 0 and y2 == 0:
                    continue
                q = (2 * x2 - y2, y2)
                j2 = _lift_step((pa, pb), q, j)
                if j2 >= k2:
                    continue
                if j2 < k1:
                    continue
                if j2 == k1 and _sector(q)[1]:
                    continue  # exactly on the lower wall
                key = (q, j2)
                nxt[key] = nxt.get(key, 0) + c
        cur = nxt
        out.append(sum(c for st, c in cur.items() if st in targets))
    return out


def geometric_winding_distribution(n_max: int) -> list[dict[int, int]]:
    """Winding distributions of vertex-centred excursions from the embedding.

    Independent rendering of the corner distributions of the vertex count
    table; used to cross-check the wedge encoding itself.
    """
    start = ((2, 0), 0)
    cur: dict[tuple[tuple[int, int], int], int] = {start: 1}
    adj = {(2 * x - y, y): u for (x, y), u in _ADJACENT.items()}
    out = []
    for n in range(n_max + 1):
        if n:
            nxt: dict[tuple[tuple[int, int], int], int] = {}
            for ((pa, pb), j), c in cur.items():
                x = (pa + pb) // 2
                y = pb
                for dx, dy in _STEPS_XY:
                    x2, y2 = x + dx, y + dy
                    if x2 == 0 and y2 == 0:
                        continue
                    q = (2 * x2 - y2, y2)
                    key = (q, _lift_step((pa, pb), q, j))
                    nxt[key] = nxt.get(key, 0) + c
            cur = nxt
        dist: dict[int, int] = {}
        for ((ab), j), c in cur.items():
            u = adj.get(ab)
            if u is not None and j % 2 == 0 and (u - j) % 6 == 0:
                dist[j // 2] = dist.get(j // 2, 0) + c
        out.append(dict(sorted(dist.items())))
    return out


# ---------------------------------------------------------------------------
# functional-equation verifier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    n_checked: int
    first_mismatch: tuple[int, int, int, int, int, int] | None = None
    # (n, k, a, b, lhs, rhs)

    def __str__(self) -> str:
        if self.ok:
            return f"functional equation holds through t^{self.n_checked}"
        n, k, a, b, lhs, rhs = self.first_mismatch
        return (
            f"mismatch at t^{n} s^{k} x^{a} y^{b}: table has {lhs}, equation gives {rhs}"
        )


Poly4 = dict  # {(k, a, b): int} -- one t-layer of a polynomial in s, x, y


def _slice_a0(p: Poly4) -> Poly4:
    """Set x = 0: keep monomials with a == 0."""
    return {st: c for st, c in p.items() if st[1] == 0}


def _slice_b0(p: Poly4) -> Poly4:
    """Set y = 0: keep monomials with b == 0."""
    return {st: c for st, c in p.items() if st[2] == 0}


def _div_x(p: Poly4) -> Poly4:
    for (k, a, b) in p:
        if a < 1:
            raise ValueError("division by x is not exact")
    return {(k, a - 1, b): c for (k, a, b), c in p.items()}


def _div_y(p: Poly4) -> Poly4:
    for (k, a, b) in p:
        if b < 1:
            raise ValueError("division by y is not exact")
    return {(k, a, b - 1): c for (k, a, b), c in p.items()}


def _mul_xy(p: Poly4) -> Poly4:
    return {(k, a + 1, b + 1): c for (k, a, b), c in p.items()}


def _mul_y(p: Poly4, power: int = 1) -> Poly4:
    return {(k, a, b + power): c for (k, a, b), c in p.items()}


def _mul_s(p: Poly4, power: int = 1) -> Poly4:
    return {(k + power, a, b): c for (k, a, b), c in p.items()}


def _wall_y_to_x(p: Poly4) -> Poly4:
    """G(0, x): substitute x = 0 then rename the remaining variable y -> x."""
    return {(k, b, 0): c for (k, a, b), c in p.items() if a == 0}


def _wall_x_to_y(p: Poly4) -> Poly4:
    """G(y, 0): substitute y = 0 then rename the remaining variable x -> y."""
    return {(k, 0, a): c for (k, a, b), c in p.items() if b == 0}


def _sub(p: Poly4, q: Poly4) -> Poly4:
    out = dict(p)
    for st, c in q.items():
        out[st] = out.get(st, 0) - c
        if out[st] == 0:
            del out[st]
    return out


def _acc(total: Poly4, p: Poly4) -> None:
    for st, c in p.items():
        total[st] = total.get(st, 0) + c
        if total[st] == 0:
            del total[st]


def _rhs_layer(variant: Variant, prev: Poly4) -> Poly4:
    """One t-layer of the right-hand side of the functional equation."""
    rhs: Poly4 = {}
    _acc(rhs, _mul_xy(prev))                                   # t x y G(x,y)
    _acc(rhs, _div_x(_sub(prev, _slice_a0(prev))))             # (t/x)(G - G(0,y))
    _acc(rhs, _div_y(_sub(prev, _slice_b0(prev))))             # (t/y)(G - G(x,0))
    if variant == "cell":
        _acc(rhs, _mul_s(_wall_y_to_x(prev)))                  # t s G(0,x)
        _acc(rhs, _mul_s(_mul_y(_wall_x_to_y(prev)), -1))      # t s^-1 y G(y,0)
    else:
        wall = _wall_y_to_x(prev)
        wall = _sub(wall, _slice_b0(_slice_a0(wall)))          # G(0,x) - G(0,0)
        _acc(rhs, _mul_s({(k, a - 1, b): c for (k, a, b), c in wall.items()}))
        _acc(rhs, _mul_s(_mul_y(_wall_x_to_y(prev), 2), -1))   # t s^-1 y^2 G(y,0)
    return rhs


def verify_functional_equation(
    variant: Variant, n_max: int, table: CountTable | None = None
) -> VerifyReport:
    """Compare the count table against the functional equation, exactly.

    Both sides are formed as polynomials in (s, x, y) per power of t; the
    first differing monomial is reported.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if table is None:
        table = _cached_table(variant, n_max)
    layers = table.layers
    for n in range(n_max + 1):
        lhs = {tuple(st): c for st, c in layers[n].items()}
        rhs = {(0, 0, 0): 1} if n == 0 else _rhs_layer(variant, layers[n - 1])
        if lhs != rhs:
            keys = sorted(set(lhs) | set(rhs))
            for key in keys:
                if lhs.get(key, 0) != rhs.get(key, 0):
                    k, a, b = key
                    return VerifyReport(
                        False, n, (n, k, a, b, lhs.get(key, 0), rhs.get(key, 0))
                    )
    return VerifyReport(True, n_max)


# ---------------------------------------------------------------------------
# plain-plane brute-force oracles
# ---------------------------------------------------------------------------


def plane_oracle(
    steps: Iterable[tuple[int, int]],
    region: str,
    start: tuple[int, int],
    end: tuple[int, int],
    n_max: int,
) -> list[int]:
    """Exact counts of walks from start to end staying inside a plane region.

    ``region`` is ``"quarter"`` (x >= 0 and y >= 0) or ``"three-quarter"``
    (complement of the open negative quadrant).
    """
    steps = [tuple(st) for st in steps]
    if region == "quarter":
        inside = lambda x, y: x >= 0 and y >= 0
    elif region == "three-quarter":
        inside = lambda x, y: not (x < 0 and y < 0)
    else:
        raise ValueError(f"unknown region {region!r}")
    if not inside(*start) or not inside(*end):
        raise ValueError("start and end must lie inside the region")
    end = tuple(end)
    cur = {tuple(start): 1}
    out = [cur.get(end, 0)]
    for _ in range(n_max):
        nxt: dict[tuple[int, int], int] = {}
        for (x, y), c in cur.items():
            for dx, dy in steps:
                p = (x + dx, y + dy)
                if inside(*p):
                    nxt[p] = nxt.get(p, 0) + c
        cur = nxt
        out.append(cur.get(end, 0))
    return out


# ---------------------------------------------------------------------------
# boundary series for the numeric kernel checks
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4)
def boundary_series(variant: Variant, n_max: int) -> tuple[tuple[dict[int, dict[int, int]], ...], tuple[dict[int, dict[int, int]], ...]]:
    """Wall collapses of the count table, for numeric evaluation.

    Returns ``(g0x, gx0)`` where ``g0x[n][k][b]`` counts length-n walks ending
    at ``(k, 0, b)`` and ``gx0[n][k][a]`` those ending at ``(k, a, 0)``.
    """
    table = _cached_table(variant, n_max)
    g0x = []
    gx0 = []
    for layer in table.layers:
        d0: dict[int, dict[int, int]] = {}
        dx: dict[int, dict[int, int]] = {}
        for (k, a, b), c in layer.items():
            if a == 0:
                d0.setdefault(k, {})[b] = c
            if b == 0:
                dx.setdefault(k, {})[a] = c
        g0x.append(d0)
        gx0.append(dx)
    return tuple(g0x), tuple(gx0)
