"""Quaternionic covers of origamis and the labeled one-cylinder row model.

A cover square is ``(s, g)`` with base square ``s`` and sheet ``g`` in Q and is
stored at index ``g*n + s``.  Crossing a side of the base surface multiplies
the sheet on the right by the monodromy of that side; the deck group acts on
the left, so the two commute.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .origami import (
    GL2Word,
    Origami,
    Perm,
    act,
    find_isomorphism,
    make_staircase,
    perm_compose,
    perm_power,
    shear_power,
    staircase_interior_gluings,
    vertex_structure,
)
from .quaternion import ALL, MUL_TABLE, QElem, Q_PLUS, generated_subgroup, qmul, qneg


class DisconnectedCover(ValueError):
    pass


class BadCongruenceClass(ValueError):
    pass


class ModelMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class CoverOrigami:
    base: Origami
    origami: Origami
    a: QElem
    b: QElem

    @property
    def n(self) -> int:
        return self.origami.n

    def index(self, s: int, g: int) -> int:
        return g * self.base.n + s

    def deck(self, g: int) -> Perm:
        """phi_g: (s, x) -> (s, g*x)."""
        nb = self.base.n
        return tuple(MUL_TABLE[g][x // nb] * nb + x % nb for x in range(self.n))


def quaternionic_cover(
    base: Origami,
    a: QElem = QElem.I,
    b: QElem = QElem.J,
    interior: tuple[Iterable[int], Iterable[int]] | None = None,
) -> CoverOrigami:
    """Cover with horizontal monodromy ``a`` and vertical monodromy ``b``.

    ``interior`` lists the base squares whose right side (first set) or top
    side (second set) is interior to a chosen fundamental polygon; those
    gluings stay on the same sheet.  Without it every gluing carries monodromy.
    """
    if generated_subgroup((a, b)) != frozenset(ALL):
        raise DisconnectedCover(f"<{a}, {b}> is a proper subgroup of Q")
    ih, iv = (frozenset(interior[0]), frozenset(interior[1])) if interior else (frozenset(), frozenset())
    nb = base.n
    H = [0] * (8 * nb)
    V = [0] * (8 * nb)
    for g in range(8):
        ga, gb = MUL_TABLE[g][a], MUL_TABLE[g][b]
        for s in range(nb):
            H[g * nb + s] = (g if s in ih else ga) * nb + base.h[s]
            V[g * nb + s] = (g if s in iv else gb) * nb + base.v[s]
    try:
        o = Origami(H, V)
    except ValueError as exc:
        raise DisconnectedCover(str(exc)) from exc
    return CoverOrigami(base, o, QElem(a), QElem(b))


def staircase_cover(d: int, a: QElem = QElem.I, b: QElem = QElem.J) -> CoverOrigami:
    """The quaternionic cover of the d-square staircase, glued along its polygon boundary."""
    return quaternionic_cover(make_staircase(d), a, b, staircase_interior_gluings(d))


# Coset representatives of Q / {±1}, in the order used for quotient squares.
COSET_REPS = Q_PLUS


def central_quotient(c: CoverOrigami) -> Origami:
    """The quotient by phi_{-1}: square (s, ±g) lands at index basis(g)*n + s."""
    nb = c.base.n
    H = [0] * (4 * nb)
    V = [0] * (4 * nb)
    for rep in COSET_REPS:
        for s in range(nb):
            x = c.index(s, rep)
            H[rep * nb + s] = (c.origami.h[x] // nb & 3) * nb + c.origami.h[x] % nb
            V[rep * nb + s] = (c.origami.v[x] // nb & 3) * nb + c.origami.v[x] % nb
    return Origami(H, V)


def homology_dimensions(d: int) -> tuple[int, int, int]:
    """(dim H_1, dim H_1^+, dim H_1^-) of the staircase cover, from genera alone."""
    c = staircase_cover(d)
    g_cover = vertex_structure(c.origami).genus
    g_quot = vertex_structure(central_quotient(c)).genus
    return 2 * g_cover, 2 * g_quot, 2 * g_cover - 2 * g_quot


@dataclass(frozen=True, order=True)
class SideLabel:
    """eta_g^r (a horizontal side, oriented rightwards) or zeta_g (a vertical side, upwards)."""

    kind: str
    g: QElem
    r: int | None = None

    def __post_init__(self):
        if self.kind not in ("eta", "zeta"):
            raise ValueError(self.kind)
        if (self.kind == "eta") != (self.r is not None):
            raise ValueError("eta labels carry r, zeta labels do not")
        object.__setattr__(self, "g", QElem(self.g))

    def translate(self, h: int) -> "SideLabel":
        return SideLabel(self.kind, qmul(h, self.g), self.r)

    def __str__(self) -> str:
        if self.kind == "eta":
            return f"eta[{self.g}]^{self.r}"
        return f"zeta[{self.g}]"


Eta = tuple[int, int]  # (g, superscript)


@dataclass(frozen=True)
class LabeledRowModel:
    """Eight rows of d squares, row g holding squares g*d .. g*d+d-1 from left to right.

    ``bottom[x]`` and ``top[x]`` are (g, r) pairs naming eta_g^r.  The left end
    of row g carries zeta_g and its right end continues into row -g.
    """

    d: int
    shear: int
    bottom: tuple[Eta, ...]
    top: tuple[Eta, ...]
    origami: Origami = field(compare=False, repr=False)

    def square(self, g: int, p: int) -> int:
        """Index of the square at 1-based position p of row g."""
        return g * self.d + p - 1

    def position(self, x: int) -> tuple[QElem, int]:
        return QElem(x // self.d), x % self.d + 1

    def bottom_label(self, x: int) -> SideLabel:
        g, r = self.bottom[x]
        return SideLabel("eta", g, r)

    def top_label(self, x: int) -> SideLabel:
        g, r = self.top[x]
        return SideLabel("eta", g, r)

    def left_label(self, x: int) -> SideLabel | None:
        g, p = self.position(x)
        return SideLabel("zeta", g) if p == 1 else None

    def reference_square(self, x: int) -> int:
        """The square of the unsheared model carrying the same bottom label."""
        g, r = self.bottom[x]
        return g * self.d + r - 1

    def deck(self, h: int) -> Perm:
        d = self.d
        return tuple(MUL_TABLE[h][x // d] * d + x % d for x in range(8 * d))

    def dump(self) -> str:
        lines = []
        for g in ALL:
            xs = range(g * self.d, (g + 1) * self.d)
            bot = ", ".join(str(self.bottom_label(x)) for x in xs)
            top = ", ".join(str(self.top_label(x)) for x in xs)
            lines.append(
                f"row {g}: bottom=[{bot}] top=[{top}] left={SideLabel('zeta', g)} right={SideLabel('zeta', qneg(g))}"
            )
        return "\n".join(lines)


def _model_from_labels(d: int, shear: int, bottom: Sequence[Eta], top: Sequence[Eta]) -> LabeledRowModel:
    n = 8 * d
    where = {lab: x for x, lab in enumerate(bottom)}
    if len(where) != n or set(top) != set(where):
        raise ModelMismatch("every eta label must occur once as a bottom and once as a top")
    h = [0] * n
    for g in range(8):
        for p in range(d):
            h[g * d + p] = g * d + p + 1 if p < d - 1 else (g ^ 4) * d
    v = [where[lab] for lab in top]
    return LabeledRowModel(d, shear, tuple(bottom), tuple(top), Origami(h, v))


_LEFT_PATTERN = ((True, QElem.I), (False, QElem.J), (False, QElem.I), (True, QElem.J))
_RIGHT_PATTERN = ((False, QElem.K), (True, QElem.ONE), (True, QElem.K), (False, QElem.ONE))


def _unsheared_top(d: int, g: int, p: int) -> Eta:
    m = (d + 1) // 2
    flip, c = _LEFT_PATTERN[(p - 1) % 4] if p <= m else _RIGHT_PATTERN[(p - m - 1) % 4]
    e = MUL_TABLE[g][c]
    return (e ^ 4 if flip else e), d + 1 - p


def build_Y_model(d: int, validate: bool = True) -> LabeledRowModel:
    """The labeled one-cylinder model of S applied to the staircase cover.

    Row g has bottoms eta_g^1 .. eta_g^d.  Its tops read, from the left,
    eta_{-gi}^d, eta_{gj}^{d-1}, eta_{gi}^{d-2}, eta_{-gj}^{d-3}, ... down to
    eta_{gj}^m at position m = (d+1)/2, then eta_{gk}^{m-1}, eta_{-g}^{m-2},
    eta_{-gk}^{m-3}, eta_g^{m-4}, ... down to superscript 1.
    """
    if d % 8 != 3:
        raise BadCongruenceClass(f"the labeled model is only defined for d = 3 mod 8, got {d}")
    bottom = [(g, p) for g in range(8) for p in range(1, d + 1)]
    top = [_unsheared_top(d, g, p) for g in range(8) for p in range(1, d + 1)]
    model = _model_from_labels(d, 0, bottom, top)
    if validate:
        target = act(staircase_cover(d).origami, "S")
        if find_isomorphism(model.origami, target) is None:
            raise ModelMismatch(f"labeled model is not isomorphic to S applied to the cover (d={d})")
    return model


def shear_Y_model(model: LabeledRowModel, r: int) -> LabeledRowModel:
    """Labels of T^{2r} applied to the model.

    Within each row the bottom labels move r places to the left and the top
    labels r places to the right (cyclically), then every label with
    superscript at most r changes the sign of its group element.
    """
    if model.shear != 0:
        raise ValueError("shear_Y_model expects the unsheared model")
    d = model.d
    if not 0 <= r < d:
        raise ValueError(f"shear index must lie in [0, {d}), got {r}")
    if r == 0:
        return model
    bottom = []
    top = []
    for g in range(8):
        row_b = model.bottom[g * d : (g + 1) * d]
        row_t = model.top[g * d : (g + 1) * d]
        rb = r % d
        bottom += list(row_b[rb:] + row_b[:rb])
        top += list(row_t[d - rb :] + row_t[: d - rb]) if rb else list(row_t)
    flip = lambda lab: (lab[0] ^ 4, lab[1]) if lab[1] <= r else lab  # noqa: E731
    return _model_from_labels(d, r, [flip(b) for b in bottom], [flip(t) for t in top])


def check_shear_labels(model0: LabeledRowModel, sheared: LabeledRowModel) -> None:
    """Exact agreement of the labeled shear with the generic action of T^{2r}.

    The generic action keeps every bottom side with its square, so the square
    of the sheared model carrying bottom label eta must correspond to the
    square of ``act(model0, T^{2r})`` with the same bottom label.
    """
    sigma = [sheared.reference_square(x) for x in range(8 * model0.d)]
    generic = shear_power(model0.origami, 2 * sheared.shear)
    relabeled = sheared.origami.relabel(sigma)
    if relabeled.h != generic.h or relabeled.v != generic.v:
        raise ModelMismatch(f"sheared labels disagree with T^{2 * sheared.shear}")
