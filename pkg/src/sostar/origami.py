"""Square-tiled surfaces (origamis) as pairs of permutations.

Squares are numbered 0..n-1.  ``h[x]`` is the square to the right of ``x`` and
``v[x]`` the square above it.  Cycle notation in text form is 1-based.

Conventions used throughout the package:

* The corner map is ``u = v . h . v^-1 . h^-1`` (``h^-1`` applied first).  The
  cycle of ``u`` through ``x`` is the set of squares whose lower-left corner is
  the same point of the surface as the lower-left corner of ``x``.
* ``T = [[1,1],[0,1]]`` acts by ``(h, v) -> (h, v . h^-1)`` and
  ``S = [[1,0],[1,1]]`` by ``(h, v) -> (h . v^-1, v)``.  Both keep the square
  labels attached to the horizontal (for T) or vertical (for S) sides, so a
  straight line in direction ``w`` on ``o`` becomes direction ``M w`` on
  ``act(o, M)``.
"""
from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

Perm = tuple[int, ...]


class EvenD(ValueError):
    pass


class DTooSmall(ValueError):
    pass


class NotConnected(ValueError):
    pass


def perm_inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_compose(f: Sequence[int], g: Sequence[int]) -> Perm:
    """f . g, i.e. apply g first."""
    return tuple(f[x] for x in g)


def perm_power(p: Sequence[int], k: int) -> Perm:
    n = len(p)
    if k < 0:
        p, k = perm_inverse(p), -k
    out = tuple(range(n))
    base = tuple(p)
    while k:
        if k & 1:
            out = perm_compose(base, out)
        base = perm_compose(base, base)
        k >>= 1
    return out


def perm_cycles(p: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(cyc)
    return out


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def cycles_to_text(p: Sequence[int]) -> str:
    return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in perm_cycles(p))


def text_to_perm(text: str, n: int | None = None) -> Perm:
    cycles = [[int(t) - 1 for t in c.split(",") if t.strip()] for c in re.findall(r"\(([^)]*)\)", text)]
    size = n if n is not None else max((x + 1 for c in cycles for x in c), default=0)
    out = list(range(size))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            out[a] = b
    if not is_permutation(out):
        raise ValueError(f"not a permutation: {text!r}")
    return tuple(out)


@dataclass(frozen=True)
class Stratum:
    """Zero orders (sorted, descending) and genus of a translation surface."""

    zeros: tuple[int, ...]
    genus: int

    def __post_init__(self):
        if sum(self.zeros) != 2 * self.genus - 2 and not (self.genus == 1 and not self.zeros):
            raise ValueError(f"inconsistent stratum {self.zeros} genus {self.genus}")

    def __str__(self) -> str:
        parts = [f"{k}^{m}" if m > 1 else str(k) for k, m in sorted(Counter(self.zeros).items(), reverse=True)]
        return f"H_{self.genus}({', '.join(parts)})"


@dataclass(frozen=True)
class Origami:
    h: Perm
    v: Perm
    _check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(int(x) for x in self.h))
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        if not self._check:
            return
        if len(self.h) != len(self.v) or not self.h:
            raise ValueError("h and v must be non-empty and of equal size")
        if not (is_permutation(self.h) and is_permutation(self.v)):
            raise ValueError("h and v must be permutations")
        if not self.is_connected():
            raise NotConnected("the group generated by h and v is not transitive")

    @property
    def n(self) -> int:
        return len(self.h)

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in (self.h[x], self.v[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.h)

    def relabel(self, sigma: Sequence[int]) -> "Origami":
        """Move square x to sigma[x]."""
        si = perm_inverse(sigma)
        h = perm_compose(sigma, perm_compose(self.h, si))
        v = perm_compose(sigma, perm_compose(self.v, si))
        return Origami(h, v)

    def to_text(self) -> str:
        return f"h={cycles_to_text(self.h)} v={cycles_to_text(self.v)}"

    @classmethod
    def from_text(cls, text: str) -> "Origami":
        m = re.fullmatch(r"\s*h=(\S*)\s+v=(\S*)\s*", text)
        if not m:
            raise ValueError(f"cannot parse origami: {text!r}")
        hs, vs = m.groups()
        n = max(len(text_to_perm(hs)), len(text_to_perm(vs)))
        return cls(text_to_perm(hs, n), text_to_perm(vs, n))


def one_square_torus() -> Origami:
    return Origami((0,), (0,))


def make_staircase(d: int) -> Origami:
    """The d-square staircase: h = (1 2)(3 4)...(d), v = (1)(2 3)(4 5)..."""
    if d % 2 == 0:
        raise EvenD(f"d must be odd, got {d}")
    if d < 3:
        raise DTooSmall(f"d must be at least 3, got {d}")
    h = list(range(d))
    v = list(range(d))
    for a in range(0, d - 1, 2):
        h[a], h[a + 1] = a + 1, a
    for a in range(1, d - 1, 2):
        v[a], v[a + 1] = a + 1, a
    return Origami(h, v)


def staircase_interior_gluings(d: int) -> tuple[frozenset[int], frozenset[int]]:
    """Squares whose right (resp. top) side is interior to the staircase polygon.

    The polygon has square 2 to the left of square 1, square 3 on top of square
    2, square 4 to the left of square 3, and so on (1-based), so that the
    interior gluings read h(2k) = 2k-1 and v(2k) = 2k+1.
    """
    ih = frozenset(range(1, d - 1, 2))
    iv = frozenset(range(1, d - 1, 2))
    return ih, iv


def corner_permutation(o: Origami) -> Perm:
    hi = perm_inverse(o.h)
    vi = perm_inverse(o.v)
    return perm_compose(o.v, perm_compose(o.h, perm_compose(vi, hi)))


def vertex_cycles(o: Origami) -> list[list[int]]:
    return perm_cycles(corner_permutation(o))


def vertex_structure(o: Origami) -> Stratum:
    cyc = vertex_cycles(o)
    zeros = tuple(sorted((len(c) - 1 for c in cyc if len(c) > 1), reverse=True))
    chi = len(cyc) - o.n
    return Stratum(zeros, (2 - chi) // 2)


_LETTERS = {
    "T": ((1, 1), (0, 1)),
    "t": ((1, -1), (0, 1)),
    "S": ((1, 0), (1, 1)),
    "s": ((1, 0), (-1, 1)),
}


def _matmul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


@dataclass(frozen=True)
class GL2Word:
    """A word in T, T^-1 (written t), S, S^-1 (written s), read as a matrix product.

    ``GL2Word("SST")`` is the matrix S*S*T; acting on an origami applies the
    rightmost letter first.
    """

    letters: str = ""

    def __post_init__(self):
        bad = set(self.letters) - set(_LETTERS)
        if bad:
            raise ValueError(f"unknown letters {sorted(bad)}")

    def __mul__(self, other: "GL2Word") -> "GL2Word":
        return GL2Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "GL2Word":
        if k < 0:
            return self.inverse() ** (-k)
        return GL2Word(self.letters * k)

    def inverse(self) -> "GL2Word":
        return GL2Word(self.letters[::-1].swapcase())

    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        m = ((1, 0), (0, 1))
        for c in self.letters:
            m = _matmul(m, _LETTERS[c])
        return m

    def apply_to(self, vec: tuple[int, int]) -> tuple[int, int]:
        m = self.matrix()
        return (m[0][0] * vec[0] + m[0][1] * vec[1], m[1][0] * vec[0] + m[1][1] * vec[1])

    def __str__(self) -> str:
        return self.letters or "id"


def _act_letter(h: Perm, v: Perm, c: str) -> tuple[Perm, Perm]:
    if c == "T":
        return h, perm_compose(v, perm_inverse(h))
    if c == "t":
        return h, perm_compose(v, h)
    if c == "S":
        return perm_compose(h, perm_inverse(v)), v
    return perm_compose(h, v), v


def act(o: Origami, w: GL2Word | str) -> Origami:
    if isinstance(w, str):
        w = GL2Word(w)
    h, v = o.h, o.v
    for c in reversed(w.letters):
        h, v = _act_letter(h, v, c)
    return Origami(h, v, _check=False)


def shear_power(o: Origami, k: int) -> Origami:
    """act(o, T^k) computed in one step: v_k = v . h^-k."""
    return Origami(o.h, perm_compose(o.v, perm_power(o.h, -k)), _check=False)


def reduction_word(p: int, q: int) -> GL2Word:
    """A word w with w * (p, q) = (±1, 0), found by a Euclidean descent."""
    if gcd(p, q) != 1:
        raise ValueError(f"direction ({p}, {q}) is not primitive")
    applied: list[str] = []  # letters in the order they are applied
    while q != 0:
        if p == 0:
            applied.append("T")
            p = p + q
        elif abs(q) >= abs(p):
            k = -(q // p)
            applied.extend(("S" if k > 0 else "s") * abs(k))
            q = q + k * p
        else:
            k = -(p // q)
            applied.extend(("T" if k > 0 else "t") * abs(k))
            p = p + k * q
    return GL2Word("".join(reversed(applied)))


def _anchored_labeling(o: Origami, start: int) -> tuple[int, ...]:
    lab = {start: 0}
    order = [start]
    k = 0
    while k < len(order):
        x = order[k]
        k += 1
        for y in (o.h[x], o.v[x]):
            if y not in lab:
                lab[y] = len(order)
                order.append(y)
    return tuple(lab[o.h[x]] for x in order) + tuple(lab[o.v[x]] for x in order)


def canonical_form(o: Origami) -> Origami:
    """Lexicographically smallest (h, v) over the n anchored breadth-first relabelings."""
    best = min(_anchored_labeling(o, s) for s in range(o.n))
    return Origami(best[: o.n], best[o.n :], _check=False)


def _spanning_tree(o: Origami) -> tuple[list[int], list[int], list[int]]:
    """Breadth-first order from square 0 with (parent, generator) for each square."""
    order = [0]
    parent = [-1] * o.n
    gen = [-1] * o.n
    seen = [False] * o.n
    seen[0] = True
    k = 0
    while k < len(order):
        x = order[k]
        k += 1
        for gi, y in enumerate((o.h[x], o.v[x])):
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                gen[y] = gi
                order.append(y)
    return order, parent, gen


def find_isomorphism(a: Origami, b: Origami) -> Perm | None:
    """A relabeling sigma with sigma h_a sigma^-1 = h_b and likewise for v, or None.

    All n choices for the image of square 0 are propagated at once along a
    spanning tree of ``a`` (one numpy row per candidate), then checked.
    """
    n = a.n
    if n != b.n:
        return None
    if sorted(map(len, perm_cycles(a.h))) != sorted(map(len, perm_cycles(b.h))):
        return None
    if sorted(map(len, perm_cycles(a.v))) != sorted(map(len, perm_cycles(b.v))):
        return None
    order, parent, gen = _spanning_tree(a)
    bh = np.asarray(b.h, dtype=np.int64)
    bv = np.asarray(b.v, dtype=np.int64)
    sig = np.empty((n, n), dtype=np.int64)  # sig[:, x] = image of x for every candidate
    sig[:, 0] = np.arange(n)
    for x in order[1:]:
        src = sig[:, parent[x]]
        sig[:, x] = bh[src] if gen[x] == 0 else bv[src]
    ah = np.asarray(a.h, dtype=np.int64)
    av = np.asarray(a.v, dtype=np.int64)
    ok = np.all(sig[:, ah] == bh[sig], axis=1) & np.all(sig[:, av] == bv[sig], axis=1)
    for t in np.nonzero(ok)[0]:
        row = sig[t]
        if len(np.unique(row)) == n:
            return tuple(int(x) for x in row)
    return None


def is_isomorphic(a: Origami, b: Origami) -> bool:
    return find_isomorphism(a, b) is not None


def automorphisms(o: Origami) -> list[Perm]:
    """All permutations commuting with h and v, one candidate per image of square 0."""
    n = o.n
    order, parent, gen = _spanning_tree(o)
    out = []
    for t in range(n):
        sig = [-1] * n
        sig[0] = t
        for x in order[1:]:
            p = sig[parent[x]]
            sig[x] = o.h[p] if gen[x] == 0 else o.v[p]
        if len(set(sig)) != n:
            continue
        if all(sig[o.h[x]] == o.h[sig[x]] and sig[o.v[x]] == o.v[sig[x]] for x in range(n)):
            out.append(tuple(sig))
    return out


@dataclass(frozen=True)
class OrbitGraph:
    vertices: tuple[Origami, ...]
    edges: tuple[tuple[int, str, int], ...]  # (source, letter, target)

    def __len__(self) -> int:
        return len(self.vertices)


def orbit(o: Origami, letters: str = "TS") -> OrbitGraph:
    """Breadth-first closure of the canonical form of ``o`` under the given letters."""
    start = canonical_form(o)
    index = {start: 0}
    verts = [start]
    edges = []
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for c in letters:
            y = canonical_form(act(x, c))
            if y not in index:
                index[y] = len(verts)
                verts.append(y)
                queue.append(y)
            edges.append((index[x], c, index[y]))
    return OrbitGraph(tuple(verts), tuple(edges))


@dataclass(frozen=True)
class HorizontalCylinder:
    rows: tuple[tuple[int, ...], ...]  # bottom row first, each row in h-order

    @property
    def circumference(self) -> int:
        return len(self.rows[0])

    @property
    def height(self) -> int:
        return len(self.rows)


def horizontal_cylinders(o: Origami) -> list[HorizontalCylinder]:
    """Rows (h-cycles) merged across every row interface free of singular corners."""
    rows = perm_cycles(o.h)
    row_of = [0] * o.n
    for i, r in enumerate(rows):
        for x in r:
            row_of[x] = i
    corner_len = [0] * o.n
    for c in vertex_cycles(o):
        for x in c:
            corner_len[x] = len(c)
    above: dict[int, int] = {}
    for i, r in enumerate(rows):
        # the upper-left corner of x is the lower-left corner of v(x)
        if all(corner_len[o.v[x]] == 1 for x in r):
            targets = {row_of[o.v[x]] for x in r}
            if len(targets) != 1:
                raise AssertionError("regular interface glued to several rows")
            above[i] = targets.pop()
    below = {j: i for i, j in above.items()}
    out = []
    done: set[int] = set()
    for i in range(len(rows)):
        if i in done:
            continue
        # walk down to the bottom row of this cylinder (a fully regular cylinder has none)
        b = i
        seen = {b}
        while b in below and below[b] not in seen:
            b = below[b]
            seen.add(b)
        if b in below:  # closed loop of rows: the whole surface is one flat torus cylinder
            b = min(seen)
        stack = [b]
        x = b
        while x in above and above[x] != b:
            x = above[x]
            stack.append(x)
        done.update(stack)
        first = rows[stack[0]]
        ordered = []
        anchor = first[0]
        for ri in stack:
            r = rows[ri]
            k = r.index(anchor) if anchor in r else 0
            ordered.append(tuple(r[k:] + r[:k]))
            anchor = o.v[ordered[-1][0]]
        out.append(HorizontalCylinder(tuple(ordered)))
    return out
