"""Exact straight-line trajectories on origamis.

Coordinates inside a square are integers on a grid of size ``scale``; the true
point is ``(X / scale, Y / scale)``.  For a direction (p, q) and a start offset
with denominator D the grid ``D*|p|*|q|`` keeps every crossing point exact.

Sign convention: a crossing of curve A by curve B counts
``sign(det[tangent A, tangent B])``.  In particular a trajectory in direction
(p, q) meets a rightward horizontal side with sign ``-sign(q)`` and an upward
vertical side with sign ``sign(p)``.

Edges of an origami with n squares are numbered ``0..n-1`` for bottom sides
(``b_x``) and ``n..2n-1`` for left sides (``l_x``).
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .origami import Origami, horizontal_cylinders, act, perm_inverse, reduction_word


class VertexHit(RuntimeError):
    pass


class TangencyDetected(RuntimeError):
    pass


class IncompleteFamily(RuntimeError):
    pass


class UnequalLengths(RuntimeError):
    pass


class DuplicateCore(RuntimeError):
    pass


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Direction:
    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0) or gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not a primitive direction")

    def det(self, other: "Direction") -> int:
        return self.p * other.q - self.q * other.p


class Crossing(NamedTuple):
    kind: str  # "h": a bottom side b_edge, "v": a left side l_edge
    edge: int  # square owning the side
    pos: int  # position along the side, in grid units
    sign: int
    entered: int  # square entered after the crossing


class Segment(NamedTuple):
    square: int
    entry: tuple[int, int]
    exit: tuple[int, int]


@dataclass(frozen=True)
class Trajectory:
    direction: Direction
    scale: int
    start: tuple[int, int, int]  # (square, X, Y)
    segments: tuple[Segment, ...]
    crossings: tuple[Crossing, ...]

    @property
    def holonomy_multiple(self) -> int:
        p, q = self.direction.p, self.direction.q
        if q:
            return sum(c.kind == "h" for c in self.crossings) // abs(q)
        return sum(c.kind == "v" for c in self.crossings) // abs(p)

    def fraction_segments(self) -> list[tuple[int, tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]:
        L = self.scale
        return [
            (s.square, (Fraction(s.entry[0], L), Fraction(s.entry[1], L)), (Fraction(s.exit[0], L), Fraction(s.exit[1], L)))
            for s in self.segments
        ]

    def crossing_points(self) -> frozenset[tuple[str, int, Fraction]]:
        return frozenset((c.kind, c.edge, Fraction(c.pos, self.scale)) for c in self.crossings)

    def relabel(self, sigma: Sequence[int]) -> "Trajectory":
        """The image of the trajectory under an automorphism sigma of the origami."""
        return Trajectory(
            self.direction,
            self.scale,
            (sigma[self.start[0]], self.start[1], self.start[2]),
            tuple(Segment(sigma[s.square], s.entry, s.exit) for s in self.segments),
            tuple(Crossing(c.kind, sigma[c.edge], c.pos, c.sign, sigma[c.entered]) for c in self.crossings),
        )


def trace(o: Origami, direction: Direction, start: tuple[int, str, Fraction]) -> Trajectory:
    """Follow the straight line from a point on the bottom ("B") or left ("L") side of a square."""
    square, side, offset = start
    offset = Fraction(offset)
    if not 0 < offset < 1:
        raise ValueError("start offset must lie strictly inside the side")
    p, q = direction.p, direction.q
    ap, aq = abs(p) or 1, abs(q) or 1
    L = offset.denominator * ap * aq
    pos = offset.numerator * ap * aq
    if side == "B":
        if q == 0:
            raise ValueError("a horizontal line cannot start on a horizontal side")
        X, Y = pos, 0
        if q < 0:
            square, Y = perm_inverse(o.v)[square], L
    elif side == "L":
        if p == 0:
            raise ValueError("a vertical line cannot start on a vertical side")
        X, Y = 0, pos
        if p < 0:
            square, X = perm_inverse(o.h)[square], L
    else:
        raise ValueError(f"unknown side {side!r}")

    h, v = o.h, o.v
    hinv, vinv = perm_inverse(h), perm_inverse(v)
    sq, sh = -_sign(q), _sign(p)
    first = (square, X, Y)
    x = square
    segs: list[Segment] = []
    cross: list[Crossing] = []
    limit = 4 * o.n * (L // ap + L // aq) + 8
    while True:
        ty = (L - Y if q > 0 else Y) if q else None
        tx = (L - X if p > 0 else X) if p else None
        if tx is None:
            horizontal = True
        elif ty is None:
            horizontal = False
        else:
            a, b = tx * aq, ty * ap
            if a == b:
                raise VertexHit(f"trajectory reaches a corner of square {x}")
            horizontal = b < a
        if horizontal:
            nX = X + p * ty // aq
            if q > 0:
                segs.append(Segment(x, (X, Y), (nX, L)))
                y = v[x]
                cross.append(Crossing("h", y, nX, sq, y))
                X, Y = nX, 0
            else:
                segs.append(Segment(x, (X, Y), (nX, 0)))
                y = vinv[x]
                cross.append(Crossing("h", x, nX, sq, y))
                X, Y = nX, L
        else:
            nY = Y + q * tx // ap
            if p > 0:
                segs.append(Segment(x, (X, Y), (L, nY)))
                y = h[x]
                cross.append(Crossing("v", y, nY, sh, y))
                X, Y = 0, nY
            else:
                segs.append(Segment(x, (X, Y), (0, nY)))
                y = hinv[x]
                cross.append(Crossing("v", x, nY, sh, y))
                X, Y = L, nY
        x = y
        if (x, X, Y) == first:
            break
        if len(segs) > limit:
            raise RuntimeError("trajectory failed to close")
    return Trajectory(direction, L, first, tuple(segs), tuple(cross))


def dyadic_offsets() -> Iterator[Fraction]:
    """1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, 1/16, ..."""
    den = 2
    while True:
        for num in range(1, den, 2):
            yield Fraction(num, den)
        den *= 2


def trace_with_schedule(
    o: Origami, direction: Direction, square: int, offsets: Iterable[Fraction] | None = None, attempts: int = 64
) -> Trajectory:
    """Trace from the bottom of ``square``, moving along the offset schedule past vertex hits."""
    it = iter(offsets if offsets is not None else dyadic_offsets())
    for _ in range(attempts):
        try:
            off = next(it)
        except StopIteration:
            break
        try:
            return trace(o, direction, (square, "B", off))
        except VertexHit:
            continue
    raise VertexHit(f"no admissible basepoint on square {square} after {attempts} attempts")


@dataclass(frozen=True)
class CylinderFamily:
    direction: Direction
    starts: tuple[int, ...]
    cores: tuple[Trajectory, ...]
    horizontal_totals: tuple[int, ...]  # crossings of each bottom side by all cores
    vertical_totals: tuple[int, ...]
    cylinder_count: int  # from the horizontal decomposition after straightening

    @property
    def holonomy_multiple(self) -> int:
        return self.cores[0].holonomy_multiple


def _bands(t: Trajectory) -> set[tuple[str, int, int]]:
    """Elementary intervals (between consecutive possible separatrix hits) crossed by t."""
    p, q = t.direction.p, t.direction.q
    out = set()
    for c in t.crossings:
        if c.kind == "h" and q:
            out.add(("h", c.edge, c.pos * abs(q) // t.scale))
        elif c.kind == "v" and not q:
            out.add(("v", c.edge, c.pos * abs(p) // t.scale))
    return out


def cylinder_family(
    o: Origami,
    direction: Direction,
    starts: Sequence[int],
    offsets: Sequence[Fraction] | None = None,
    count_check: bool = True,
) -> CylinderFamily:
    """Trace one core per start square and certify that they are all the cylinders.

    Completeness: every bottom side is crossed |q| times and every left side
    |p| times by the union of the cores.  Cores are distinct when no two cross
    the same elementary interval of a side.
    """
    cores = tuple(trace_with_schedule(o, direction, s, offsets) for s in starts)
    ms = {t.holonomy_multiple for t in cores}
    if len(ms) != 1:
        raise UnequalLengths(f"holonomy multiples differ: {sorted(ms)}")
    seen: dict[tuple, int] = {}
    for i, t in enumerate(cores):
        for band in _bands(t):
            if band in seen:
                raise DuplicateCore(f"cores {seen[band]} and {i} lie in the same cylinder")
            seen[band] = i
    hor = [0] * o.n
    ver = [0] * o.n
    for t in cores:
        for c in t.crossings:
            (hor if c.kind == "h" else ver)[c.edge] += 1
    p, q = abs(direction.p), abs(direction.q)
    if any(x != q for x in hor) or any(x != p for x in ver):
        raise IncompleteFamily("side crossing totals do not match the direction")
    count = len(cores)
    if count_check:
        count = len(horizontal_cylinders(act(o, reduction_word(direction.p, direction.q))))
        if count != len(cores):
            raise IncompleteFamily(f"{len(cores)} cores but {count} cylinders after straightening")
    return CylinderFamily(direction, tuple(starts), cores, tuple(hor), tuple(ver), count)


def crossings_with_labels(t: Trajectory, model) -> Counter:
    """Signed crossing counts of t with the labeled sides of a row model."""
    out: Counter = Counter()
    for c in t.crossings:
        if c.kind == "h":
            out[model.bottom_label(c.edge)] += c.sign
        else:
            lab = model.left_label(c.edge)
            if lab is not None:
                out[lab] += c.sign
    return out


def copy_sequence(t: Trajectory, model) -> list[int]:
    """Rows visited: the starting row, then the row after each labeled crossing."""
    d = model.d
    rows = [t.start[0] // d]
    for c in t.crossings:
        if c.kind == "h" or model.left_label(c.edge) is not None:
            rows.append(c.entered // d)
    return rows


def crossing_cocycle(t: Trajectory, n: int) -> np.ndarray:
    """phi(e) = signed intersection of t with each edge e (a cocycle on the 1-skeleton)."""
    phi = np.zeros(2 * n, dtype=np.int64)
    for c in t.crossings:
        phi[c.edge + (n if c.kind == "v" else 0)] += c.sign
    return phi


def _side(pt: tuple[int, int], L: int) -> str:
    X, Y = pt
    if Y == 0:
        return "B"
    if Y == L:
        return "T"
    if X == 0:
        return "L"
    return "R"


def edge_chain(t: Trajectory, n: int) -> np.ndarray:
    """A 1-cycle on the edges homologous to t.

    Each crossing point is slid along its side to a corner: points on the
    bottom or left side of square x go to its lower-left corner, points on the
    top go up l_x, points on the right go along b_x.  A passage through x then
    contributes f(exit) - f(entry).
    """
    z = np.zeros(2 * n, dtype=np.int64)
    L = t.scale
    for s in t.segments:
        for pt, sgn in ((s.exit, 1), (s.entry, -1)):
            side = _side(pt, L)
            if side == "T":
                z[n + s.square] += sgn
            elif side == "R":
                z[s.square] += sgn
    return z


def _perimeter(pt: tuple[int, int], L: int) -> int:
    X, Y = pt
    if Y == 0:
        return X
    if X == L:
        return L + Y
    if Y == L:
        return 3 * L - X
    return 4 * L - Y


def trajectory_intersection(t1: Trajectory, t2: Trajectory) -> int:
    """Algebraic intersection of two closed trajectories traced on the same origami.

    Two chords of a square cross iff their endpoints interleave along its
    boundary; a shared endpoint means the curves touch and is refused.
    """
    s = t1.direction.det(t2.direction)
    if s == 0:
        return 0
    sign = _sign(s)
    L = t1.scale * t2.scale // gcd(t1.scale, t2.scale)
    f1, f2 = L // t1.scale, L // t2.scale
    chords: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for seg in t2.segments:
        a = _perimeter((seg.entry[0] * f2, seg.entry[1] * f2), L)
        b = _perimeter((seg.exit[0] * f2, seg.exit[1] * f2), L)
        chords[seg.square].append((min(a, b), max(a, b)))
    count = 0
    for seg in t1.segments:
        others = chords.get(seg.square)
        if not others:
            continue
        a = _perimeter((seg.entry[0] * f1, seg.entry[1] * f1), L)
        b = _perimeter((seg.exit[0] * f1, seg.exit[1] * f1), L)
        a, b = min(a, b), max(a, b)
        for c, d in others:
            if len({a, b, c, d}) < 4:
                raise TangencyDetected(f"trajectories share a point in square {seg.square}")
            if (a < c < b) != (a < d < b):
                count += 1
    return sign * count


def trajectory_tsv(t: Trajectory) -> str:
    lines = ["square\tx0\ty0\tx1\ty1"]
    for sq, (x0, y0), (x1, y1) in t.fraction_segments():
        lines.append(f"{sq}\t{x0}\t{y0}\t{x1}\t{y1}")
    return "\n".join(lines) + "\n"


def trajectory_svg(t: Trajectory, columns: int, unit: int = 40) -> str:
    """Draw the segments with square x placed at column x % columns, row x // columns."""
    used = sorted({s.square for s in t.segments})
    rows = max(used) // columns + 1
    W, H = columns * unit, rows * unit
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">']
    for x in used:
        cx, cy = (x % columns) * unit, H - (x // columns + 1) * unit
        out.append(f'<rect x="{cx}" y="{cy}" width="{unit}" height="{unit}" fill="none" stroke="#999"/>')
    for sq, (x0, y0), (x1, y1) in t.fraction_segments():
        cx, cy = (sq % columns) * unit, H - (sq // columns) * unit
        out.append(
            f'<line x1="{cx + float(x0) * unit:.3f}" y1="{cy - float(y0) * unit:.3f}" '
            f'x2="{cx + float(x1) * unit:.3f}" y2="{cy - float(y1) * unit:.3f}" stroke="#c00"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
