"""The quaternion group Q = {±1, ±i, ±j, ±k} as exact, table-driven data.

Elements are small integers ``4*signbit + basis`` with basis 0, 1, 2, 3 standing
for 1, i, j, k.  Every hatted coordinate vector in the package is indexed by
``Q_PLUS = (1, i, j, k)`` and obeys the rule ``x_{-g} = -x_g``.
"""
from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from typing import Sequence

import numpy as np


class QElem(IntEnum):
    ONE = 0
    I = 1
    J = 2
    K = 3
    NEG_ONE = 4
    NEG_I = 5
    NEG_J = 6
    NEG_K = 7

    @property
    def sign(self) -> int:
        return -1 if self >= 4 else 1

    @property
    def basis(self) -> int:
        return self & 3

    def __neg__(self) -> "QElem":
        return QElem(self ^ 4)

    def __mul__(self, other):  # type: ignore[override]
        if isinstance(other, QElem):
            return qmul(self, other)
        return NotImplemented

    def inverse(self) -> "QElem":
        return qinv(self)

    def __str__(self) -> str:
        return _NAMES[self]


_NAMES = ("1", "i", "j", "k", "-1", "-i", "-j", "-k")
Q_PLUS = (QElem.ONE, QElem.I, QElem.J, QElem.K)
ALL = tuple(QElem)

# Products of basis units: (sign, basis) for basis[a] * basis[b].
_UNIT = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (-1, 0), (1, 3), (-1, 2)),
    ((1, 2), (-1, 3), (-1, 0), (1, 1)),
    ((1, 3), (1, 2), (-1, 1), (-1, 0)),
)


def _build_table() -> tuple[tuple[int, ...], ...]:
    rows = []
    for a in range(8):
        row = []
        for b in range(8):
            s, c = _UNIT[a & 3][b & 3]
            neg = (a >> 2) ^ (b >> 2) ^ (s < 0)
            row.append(4 * neg + c)
        rows.append(tuple(row))
    return tuple(rows)


MUL_TABLE = _build_table()
NEG_TABLE = tuple(g ^ 4 for g in range(8))
INV_TABLE = tuple(g if g in (0, 4) else g ^ 4 for g in range(8))


def qmul(a: int, b: int) -> QElem:
    return QElem(MUL_TABLE[a][b])


def qneg(a: int) -> QElem:
    return QElem(a ^ 4)


def qinv(a: int) -> QElem:
    return QElem(INV_TABLE[a])


def parse_qelem(text: str) -> QElem:
    try:
        return QElem(_NAMES.index(text.strip()))
    except ValueError:
        raise ValueError(f"not a quaternion unit: {text!r}") from None


def generated_subgroup(gens: Sequence[int]) -> frozenset[QElem]:
    group = {QElem.ONE}
    frontier = [QElem.ONE]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = qmul(x, g)
            if y not in group:
                group.add(y)
                frontier.append(y)
    return frozenset(group)


def hat_coordinate(g: int) -> tuple[int, int]:
    """Return (sign, index into Q_PLUS) so that x_g = sign * x[index]."""
    return (-1 if g >= 4 else 1), g & 3


def left_mult_matrix(g: int) -> np.ndarray:
    """Matrix of v -> g*v on hatted coordinates (column-vector convention)."""
    m = np.zeros((4, 4), dtype=np.int64)
    for col, h in enumerate(Q_PLUS):
        sign, row = hat_coordinate(MUL_TABLE[g][h])
        m[row, col] = sign
    return m


def stacked_images(v: Sequence) -> list[list]:
    """Rows are the coefficient vectors of g*v for g in Q_PLUS (generic entries allowed)."""
    rows = []
    for g in Q_PLUS:
        row = [0] * 4
        for col, h in enumerate(Q_PLUS):
            sign, idx = hat_coordinate(MUL_TABLE[g][h])
            row[idx] = row[idx] + sign * v[col]
        rows.append(row)
    return rows


def quaternion_norm_form(v: Sequence) -> Fraction:
    return sum((Fraction(x) ** 2 for x in v), Fraction(0))


# Characters over the classes {1}, {-1}, {±i}, {±j}, {±k}.
CLASS_SIZES = (1, 1, 2, 2, 2)
CHAR_TABLE = np.array(
    [
        [1, 1, 1, 1, 1],
        [1, 1, 1, -1, -1],
        [1, 1, -1, 1, -1],
        [1, 1, -1, -1, 1],
        [2, -2, 0, 0, 0],
    ],
    dtype=np.int64,
)
CHAR_NAMES = ("chi_1", "chi_i", "chi_j", "chi_k", "chi_2")


def class_of(g: int) -> int:
    if g == QElem.ONE:
        return 0
    if g == QElem.NEG_ONE:
        return 1
    return 1 + (g & 3)
