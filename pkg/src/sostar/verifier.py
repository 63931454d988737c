"""Per-d certification of the five twist conditions and membership in the set D.

Notation used below:

* ``c_g^r`` is the core of the cylinder starting on the first square of row g
  of the r-times-sheared row model, in direction (-1, 2).  ``c~_g = c_g - c_{-g}``
  and ``eta^_g = eta_g - eta_{-g}`` for g in Q_PLUS.
* ``N`` is the 4d x 4d matrix of <c~_a^r, eta^_b^s>, rows ordered (r, a) and
  columns (s, b) with r-major and s-major order.
* ``P[r, s]`` is the 4 x 4 block of <c~_a^r, c~_b^s>.
* For the twist along family r (scalars set to 1), (T_r - Id) sends the row
  vector x of C_s coordinates to x @ P[s, r] in C_r coordinates, so the
  composite (T_0 - Id)(T_r - Id)(T_1 - Id) on C_0 is W_r = P[0,1] P[1,r] P[r,0].
"""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable

import numpy as np
import sympy

from . import __version__
from .cover import LabeledRowModel, build_Y_model, check_shear_labels, shear_Y_model
from .exact import Certificate, bareiss_det, certify_blocks, certify_nonsingular
from .geodesics import (
    CylinderFamily,
    Direction,
    TangencyDetected,
    Trajectory,
    crossing_cocycle,
    cylinder_family,
    edge_chain,
    trace_with_schedule,
    trajectory_intersection,
)
from .origami import GL2Word, perm_cycles
from .quaternion import ALL, MUL_TABLE, Q_PLUS, QElem, left_mult_matrix

CONVENTIONS = (
    "corner=v.h.v^-1.h^-1",
    "T:(h,v)->(h,v.h^-1)",
    "S:(h,v)->(h.v^-1,v)",
    "sign=det[first,second]",
    "cover=staircase-polygon,a=i,b=j",
    "core-start=row-first-square,offsets=1/2,1/4",
)
CONVENTION_FINGERPRINT = hashlib.sha256("|".join(CONVENTIONS).encode()).hexdigest()[:16]

SCOPES = ("proof-min", "exhaustive")
METHODS = ("chain", "geometric")


class OutOfFamily(ValueError):
    pass


class EquivarianceViolation(AssertionError):
    pass


class QuaternionicLinearityFailed(AssertionError):
    pass


# ---------------------------------------------------------------------------
# The set D, its density, and the dimension comparison


@dataclass(frozen=True)
class DMembership:
    d: int
    in_D: bool
    witness: tuple[int, int] | None  # (p, r) with 2d = C(p+1, r), 1 < r < p
    all_witnesses: tuple[tuple[int, int], ...] = ()


def binomial_witnesses(value: int) -> list[tuple[int, int]]:
    """All (p, r) with C(p+1, r) = value, 1 < r < p."""
    out = []
    p = 3
    while comb(p + 1, 2) <= value:
        for r in range(2, (p + 1) // 2 + 1):
            c = comb(p + 1, r)
            if c > value:
                break
            if c == value:
                out.append((p, r))
                if p + 1 - r != r and 1 < p + 1 - r < p:
                    out.append((p, p + 1 - r))
        p += 1
    return sorted(set(out))


def check_in_D(d: int) -> DMembership:
    if d < 1:
        raise ValueError("d must be positive")
    ws = binomial_witnesses(2 * d)
    return DMembership(d, not ws, ws[0] if ws else None, tuple(ws))


def middle_binomials(limit: int) -> set[int]:
    """B intersected with {1..limit}: all C(p+1, r) <= limit with p >= 3 and 1 < r < p."""
    out = set()
    p = 3
    while comb(p + 1, 2) <= limit:
        for r in range(2, p):
            c = comb(p + 1, r)
            if r <= (p + 1) // 2 and c > limit:
                break
            if c <= limit:
                out.add(c)
        p += 1
    return out


@dataclass(frozen=True)
class DensityProfile:
    n: int
    b_count: int
    p2: int
    p4: int
    bound: int
    admissible_count: int
    admissible_density: float


def density_profile(n: int) -> DensityProfile:
    if n < 8:
        raise ValueError("n must be at least 8")
    b_count = len(middle_binomials(n))
    p2 = 3
    while comb(p2 + 1, 2) <= n:
        p2 += 1
    p4 = 5
    while comb(p4 + 1, 4) <= n:
        p4 += 1
    excluded = {b // 2 for b in middle_binomials(2 * n) if b % 2 == 0}
    admissible = sum(1 for d in range(3, n + 1, 8) if d not in excluded)
    return DensityProfile(n, b_count, p2, p4, p4 * (p4 - 1) + 2 * (p2 - 1), admissible, admissible / n)


@dataclass(frozen=True)
class DimensionRow:
    p: int
    r: int
    exterior_dim: int  # p(p+2)
    so_star_dim: int  # d(2d-1)
    reversal: bool  # p(p+2) <= d(2d-1)


@dataclass(frozen=True)
class DimensionReport:
    d: int
    so_star_dim: int
    su_dim: int
    witnesses: tuple[DimensionRow, ...]

    @property
    def strict(self) -> bool:
        return self.so_star_dim < self.su_dim


def dimension_report(d: int) -> DimensionReport:
    if d < 3:
        raise ValueError("d must be at least 3")
    so = d * (2 * d - 1)
    rows = tuple(DimensionRow(p, r, p * (p + 2), so, p * (p + 2) <= so) for p, r in binomial_witnesses(2 * d))
    return DimensionReport(d, so, (2 * d) ** 2 - 1, rows)


# ---------------------------------------------------------------------------
# Directions


@dataclass(frozen=True)
class DirectionInfo:
    r: int
    direction: tuple[int, int]
    word: GL2Word
    matrix: tuple[tuple[int, int], tuple[int, int]]
    reduced: tuple[int, int]
    after_S: tuple[int, int]


def direction_of(r: int) -> DirectionInfo:
    if r < 0:
        raise ValueError("r must be non-negative")
    pq = (-(4 * r + 1), 4 * r + 3)
    word = GL2Word("SS" + "T" * (2 * r) + "S")
    mat = word.matrix()
    if mat != ((2 * r + 1, 2 * r), (4 * r + 3, 4 * r + 1)):
        raise AssertionError(f"reduction matrix mismatch at r={r}: {mat}")
    reduced = word.apply_to(pq)
    after_s = GL2Word("S").apply_to(pq)
    if reduced != (-1, 0) or after_s != (-(4 * r + 1), 2):
        raise AssertionError(f"direction bookkeeping failed at r={r}")
    return DirectionInfo(r, pq, word, mat, reduced, after_s)


# ---------------------------------------------------------------------------
# Condition data

CORE_DIRECTION = Direction(-1, 2)
CORE_OFFSETS = (Fraction(1, 2), Fraction(1, 4))
# Band (0, 1/2) of a first-square bottom side, away from the points 1/4, 3/4 used by the cores.
TRANSPORTED_OFFSETS = (Fraction(1, 8), Fraction(3, 8), Fraction(1, 16), Fraction(3, 16), Fraction(5, 16), Fraction(7, 16))


def proof_min_pairs(d: int) -> list[tuple[int, int]]:
    pairs = [(r, 0) for r in range(1, d)] + [(0, 1)] + [(1, r) for r in (2, 3, 4)]
    return list(dict.fromkeys(pairs))


def scope_pairs(d: int, scope: str) -> list[tuple[int, int]]:
    if scope == "proof-min":
        return proof_min_pairs(d)
    if scope == "exhaustive":
        return [(r, s) for r in range(d) for s in range(d) if r != s]
    raise ValueError(f"unknown scope {scope!r}")


@dataclass
class FamilyEvidence:
    r: int
    holonomy_multiple: int
    cylinder_count: int
    cores: int
    equivariant: bool


@dataclass
class ConditionData:
    d: int
    scope: str
    method: str
    N: np.ndarray
    blocks: dict[tuple[int, int], np.ndarray]
    families: list[FamilyEvidence]
    family_errors: list[str] = field(default_factory=list)
    kept_models: dict[int, tuple[LabeledRowModel, CylinderFamily]] = field(default_factory=dict)


def hatted(rows: np.ndarray) -> np.ndarray:
    """From 8 rows indexed by Q to the 4 rows c_g - c_{-g}, g in Q_PLUS."""
    return np.stack([rows[g] - rows[g ^ 4] for g in Q_PLUS])


def _window_sums(values: np.ndarray, cycles: list[np.ndarray], start: int, length: int) -> np.ndarray:
    """out[y] = sum of values[h^(start+i) y] for i in 0..length-1, along the h-cycles."""
    out = np.zeros_like(values)
    for cyc in cycles:
        C = len(cyc)
        vals = values[cyc]
        wraps, rem = divmod(length, C)
        ext = np.concatenate([vals, vals, vals])
        pref = np.concatenate([[0], np.cumsum(ext)])
        idx = np.arange(C) + start % C
        out[cyc] = wraps * vals.sum() + pref[idx + rem] - pref[idx]
    return out


def transport_cocycle(phi: np.ndarray, k: int, hk: np.ndarray, cycles: list[np.ndarray]) -> np.ndarray:
    """Pull a cocycle on the edges of act(Y, T^k) back to the edges of Y.

    Bottom sides are shared; the left side of square y of Y equals
    l^(k)_{h^k y} + sum_{i<k} b_{h^i y}.
    """
    n = len(hk)
    out = np.empty_like(phi)
    out[:n] = phi[:n]
    out[n:] = phi[n:][hk] + _window_sums(phi[:n], cycles, 0, k)
    return out


def transport_chain(z: np.ndarray, k: int, hk: np.ndarray, cycles: list[np.ndarray]) -> np.ndarray:
    """Push an edge cycle of act(Y, T^k) forward to Y, using l^(k)_x = l_{h^-k x} - sum_{i=1..k} b_{h^-i x}."""
    n = len(hk)
    out = np.empty_like(z)
    out[n:] = z[n:][hk]
    out[:n] = z[:n] - _window_sums(z[n:], cycles, 1, k)
    return out


def _reindex(vec: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    n = len(sigma)
    out = np.empty_like(vec)
    out[sigma] = vec[:n]
    out[n + sigma] = vec[n:]
    return out


def block_invariant(block: np.ndarray) -> bool:
    """L(g)^T B L(g) == B for every g: the deck group preserves the pairing."""
    for g in ALL:
        L = left_mult_matrix(g)
        if not np.array_equal(L.T @ block @ L, block):
            return False
    return True


def check_equivariance(N: np.ndarray, blocks: dict[tuple[int, int], np.ndarray]) -> list[str]:
    bad = []
    d = N.shape[0] // 4
    Nb = N.reshape(d, 4, d, 4)
    for g in ALL:
        L = left_mult_matrix(g)
        t = np.einsum("ia,rasb,bj->risj", L.T, Nb, L)
        if not np.array_equal(t, Nb):
            bad.append(f"N not invariant under {QElem(g)}")
    for key, B in blocks.items():
        if not block_invariant(B):
            bad.append(f"P{key} not invariant")
    return bad


def _core_points(t: Trajectory) -> frozenset[tuple[str, int, int]]:
    return frozenset((c.kind, c.edge, c.pos) for c in t.crossings)


def _deck_permutes_cores(model: LabeledRowModel, fam: CylinderFamily) -> bool:
    """(phi_h) c_g = c_{hg} for the generators h = i, j and every g."""
    pts = [_core_points(t) for t in fam.cores]
    scale = fam.cores[0].scale
    if any(t.scale != scale for t in fam.cores):
        return False
    for h in (QElem.I, QElem.J):
        sigma = model.deck(h)
        for g in ALL:
            moved = frozenset((k, sigma[e], p) for k, e, p in pts[g])
            if moved != pts[MUL_TABLE[h][g]]:
                return False
    return True


def _float_exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    bound = float(np.abs(a).max(initial=0)) * float(np.abs(b).max(initial=0)) * a.shape[1]
    if bound < 2.0**52:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    return (a.astype(object) @ b.astype(object)).astype(np.int64)


def build_condition_data(
    d: int,
    scope: str = "proof-min",
    method: str = "chain",
    keep_models: Iterable[int] = (),
    progress: Callable[[str], None] | None = None,
) -> ConditionData:
    if d % 8 != 3 or d < 11:
        raise OutOfFamily(f"d = {d} is outside the family d = 3 mod 8, d >= 11")
    if scope not in SCOPES or method not in METHODS:
        raise ValueError(f"bad scope/method {scope}/{method}")
    keep = set(keep_models)
    model0 = build_Y_model(d)
    n = 8 * d
    h = np.asarray(model0.origami.h, dtype=np.int64)
    cycles = [np.asarray(c, dtype=np.int64) for c in perm_cycles(model0.origami.h)]
    pos = np.empty(n, dtype=np.int64)
    cyc_id = np.empty(n, dtype=np.int64)
    for ci, c in enumerate(cycles):
        pos[c] = np.arange(len(c))
        cyc_id[c] = ci

    def h_power(k: int) -> np.ndarray:
        out = np.empty(n, dtype=np.int64)
        for c in cycles:
            out[c] = c[(np.arange(len(c)) + k) % len(c)]
        return out

    starts = [model0.square(g, 1) for g in ALL]
    N = np.zeros((4 * d, 4 * d), dtype=np.int64)
    psi = np.zeros((4 * d, 2 * n), dtype=np.int64)
    zed = np.zeros((4 * d, 2 * n), dtype=np.int64)
    families: list[FamilyEvidence] = []
    errors: list[str] = []
    models: dict[int, LabeledRowModel] = {}
    fams: dict[int, CylinderFamily] = {}
    col_pos = np.array([g * d + s for s in range(d) for g in Q_PLUS], dtype=np.int64)
    col_neg = np.array([(g ^ 4) * d + s for s in range(d) for g in Q_PLUS], dtype=np.int64)
    pairs = scope_pairs(d, scope)
    need_geo = {r for pair in pairs for r in pair} if method == "geometric" else set()

    for r in range(d):
        model = shear_Y_model(model0, r)
        check_shear_labels(model0, model)
        fam = cylinder_family(model.origami, CORE_DIRECTION, starts, CORE_OFFSETS)
        equi = _deck_permutes_cores(model, fam)
        families.append(FamilyEvidence(r, fam.holonomy_multiple, fam.cylinder_count, len(fam.cores), equi))
        if not equi:
            errors.append(f"deck action does not permute the cores of family {r}")
        sigma = np.array([model.reference_square(x) for x in range(n)], dtype=np.int64)
        phis = np.stack([_reindex(crossing_cocycle(t, n), sigma) for t in fam.cores])
        # rows of N: bottoms only, already in the labels of the unsheared model
        ph = hatted(phis)
        N[4 * r : 4 * r + 4] = ph[:, col_pos] - ph[:, col_neg]
        if method == "chain":
            zs = np.stack([_reindex(edge_chain(t, n), sigma) for t in fam.cores])
            k = 2 * r
            hk = h_power(k)
            psi[4 * r : 4 * r + 4] = hatted(np.stack([transport_cocycle(p, k, hk, cycles) for p in phis]))
            zed[4 * r : 4 * r + 4] = hatted(np.stack([transport_chain(z, k, hk, cycles) for z in zs]))
        if r in keep or r in need_geo:
            models[r] = model
            fams[r] = fam
        if progress:
            progress(f"d={d} family r={r} traced")

    blocks: dict[tuple[int, int], np.ndarray] = {}
    if method == "chain":
        rows = sorted({r for r, _ in pairs})
        cols = sorted({s for _, s in pairs})
        A = np.concatenate([psi[4 * r : 4 * r + 4] for r in rows])
        B = np.concatenate([zed[4 * s : 4 * s + 4] for s in cols])
        full = _float_exact_matmul(A, B.T)
        ri = {r: i for i, r in enumerate(rows)}
        ci = {s: i for i, s in enumerate(cols)}
        for r, s in pairs:
            blocks[(r, s)] = full[4 * ri[r] : 4 * ri[r] + 4, 4 * ci[s] : 4 * ci[s] + 4].copy()
    else:
        for r, s in pairs:
            blocks[(r, s)] = geometric_block(models[r], fams[r], r, s)

    bad = check_equivariance(N, blocks)
    if bad:
        raise EquivarianceViolation("; ".join(bad))
    kept = {r: (models[r], fams[r]) for r in keep if r in models}
    return ConditionData(d, scope, method, N, blocks, families, errors, kept)


def geometric_block(model: LabeledRowModel, fam: CylinderFamily, r: int, s: int) -> np.ndarray:
    """<c~^r_a, c~^s_b> by intersecting curves traced on the r-sheared model.

    Family s is pulled back to this model: the sheared models share their
    bottom sides, so its cores start on the square whose bottom is labelled
    eta_g^{s+1} and run in direction (4(r-s)-1, 2).
    """
    d = model.d
    if r == s:
        return np.zeros((4, 4), dtype=np.int64)
    where = {lab: x for x, lab in enumerate(model.bottom)}
    direction = Direction(4 * (r - s) - 1, 2)
    raw = np.zeros((8, 8), dtype=np.int64)
    others = []
    for g in ALL:
        start = where[(g, s + 1)]
        for off in TRANSPORTED_OFFSETS:
            t2 = trace_with_schedule(model.origami, direction, start, (off,))
            try:
                row = [trajectory_intersection(t1, t2) for t1 in fam.cores]
            except TangencyDetected:
                continue
            raw[:, g] = row
            break
        else:
            raise TangencyDetected(f"no transversal representative for c_{QElem(g)}^{s} on model {r}")
    return hatted(hatted(raw).T).T


# ---------------------------------------------------------------------------
# Conditions and verdicts


@dataclass
class ConditionResult:
    status: str  # "pass", "fail", "skipped", "error"
    evidence_hash: str = ""
    millis: int = 0
    detail: str = ""


def _hash(*arrays) -> str:
    m = hashlib.sha256()
    for a in arrays:
        m.update(np.ascontiguousarray(np.asarray(a, dtype=np.int64)).tobytes())
    return m.hexdigest()[:16]


def twist_composites(blocks: dict[tuple[int, int], np.ndarray]) -> dict[int, np.ndarray]:
    obj = {k: v.astype(object) for k, v in blocks.items()}
    return {r: obj[(0, 1)].dot(obj[(1, r)]).dot(obj[(r, 0)]) for r in (2, 3, 4)}


def quaternionic_linear(W: np.ndarray) -> bool:
    for g in (QElem.I, QElem.J):
        L = left_mult_matrix(g).astype(object)
        if not np.array_equal(W.dot(L), L.dot(W)):
            return False
    return True


def delta_at(x, W: dict[int, np.ndarray]) -> int:
    x = np.asarray(x, dtype=object)
    return bareiss_det([list(x)] + [list(x.dot(W[r])) for r in (2, 3, 4)])


def quartic_identity(W: dict[int, np.ndarray]) -> tuple[bool, int, int]:
    """Check Delta(x) == Delta(e_1) * (sum x_g^2)^2 coefficient by coefficient.

    Returns (holds, Delta(e_1), number of monomials compared).
    """
    xs = sympy.symbols("x1 xi xj xk")
    xv = sympy.Matrix([list(xs)])
    rows = [xv] + [xv * sympy.Matrix(W[r].tolist()) for r in (2, 3, 4)]
    delta = sympy.Poly(sympy.Matrix.vstack(*rows).det(method="berkowitz"), *xs)
    d1 = delta_at([1, 0, 0, 0], W)
    target = sympy.Poly(d1 * sum(x**2 for x in xs) ** 2, *xs)
    monomials = [m for m in sympy.itermonomials(xs, 4) if sympy.Poly(m, *xs).total_degree() == 4]
    holds = all(delta.coeff_monomial(m) == target.coeff_monomial(m) for m in monomials)
    holds = holds and (delta - target).is_zero
    return holds, d1, len(monomials)


def check_conditions(d: int, data: ConditionData, prime_seed: int = 0) -> dict[str, ConditionResult]:
    out: dict[str, ConditionResult] = {}

    t0 = time.perf_counter()
    fam_ok = all(f.cores == 8 and f.cylinder_count == 8 for f in data.families) and len(data.families) == d
    ms = {f.holonomy_multiple for f in data.families}
    detail = f"{len(data.families)} directions, 8 cores each, holonomy multiples {sorted(ms)}"
    fam_arr = [[f.r, f.holonomy_multiple, f.cylinder_count, f.cores] for f in data.families]
    out["c1"] = ConditionResult("pass" if fam_ok else "fail", _hash(fam_arr), 0, detail)
    out["c1"].millis = int((time.perf_counter() - t0) * 1000)

    t0 = time.perf_counter()
    c2 = all(f.equivariant for f in data.families)
    out["c2"] = ConditionResult(
        "pass" if c2 else "fail",
        _hash([[f.r, int(f.equivariant)] for f in data.families]),
        int((time.perf_counter() - t0) * 1000),
        "deck action permutes cores as c_g -> c_hg" if c2 else "; ".join(data.family_errors),
    )

    t0 = time.perf_counter()
    cert = certify_nonsingular(data.N, seed=prime_seed)
    out["c3"] = ConditionResult(
        "pass" if cert.nonsingular else "fail",
        _hash(data.N),
        int((time.perf_counter() - t0) * 1000),
        f"det N != 0 ({cert.method}{'' if cert.prime is None else f', p={cert.prime}'})" if cert.nonsingular else "det N = 0",
    )

    t0 = time.perf_counter()
    keys = [k for k in data.blocks if k[0] != k[1]]
    certs = certify_blocks(np.stack([data.blocks[k] for k in keys]), seed=prime_seed)
    failed = [k for k, c in zip(keys, certs) if not c.nonsingular]
    out["c4"] = ConditionResult(
        "pass" if not failed else "fail",
        _hash(*[data.blocks[k] for k in keys]),
        int((time.perf_counter() - t0) * 1000),
        f"{len(keys)} blocks ({data.scope}) nonsingular" if not failed else f"singular blocks: {failed[:10]}",
    )

    t0 = time.perf_counter()
    needed = [(0, 1)] + [(1, r) for r in (2, 3, 4)] + [(r, 0) for r in (2, 3, 4)]
    if any(k not in data.blocks for k in needed):
        out["c5"] = ConditionResult("skipped", "", 0, "required blocks not computed")
    else:
        W = twist_composites(data.blocks)
        if not all(quaternionic_linear(W[r]) for r in W):
            raise QuaternionicLinearityFailed("a twist composite does not commute with left multiplication")
        holds, d1, count = quartic_identity(W)
        ok = holds and d1 != 0
        out["c5"] = ConditionResult(
            "pass" if ok else "fail",
            _hash(*[W[r].astype(np.int64) for r in (2, 3, 4)]) if all(np.abs(W[r]).max() < 2**62 for r in W) else "",
            int((time.perf_counter() - t0) * 1000),
            f"Delta(e1) = {d1}; quartic identity over {count} monomials {'holds' if holds else 'FAILS'}",
        )
    return out


CONCLUSIONS = ("CERTIFIED", "EXCLUDED_NOT_IN_D", "CONDITION_FAILED", "ERROR")


def conclude(in_D: bool, statuses: Iterable[str]) -> str:
    statuses = list(statuses)
    if "error" in statuses:
        return "ERROR"
    if not in_D:
        return "EXCLUDED_NOT_IN_D"
    if any(s != "pass" for s in statuses):
        return "CONDITION_FAILED"
    return "CERTIFIED"


@dataclass
class Verdict:
    d: int
    in_D: bool
    witness: list[int] | None
    c1: ConditionResult
    c2: ConditionResult
    c3: ConditionResult
    c4: ConditionResult
    c5: ConditionResult
    scope: str
    method: str
    conclusion: str
    tool_version: str = __version__
    conventions: str = CONVENTION_FINGERPRINT
    error: str = ""

    def conditions(self) -> dict[str, ConditionResult]:
        return {k: getattr(self, k) for k in ("c1", "c2", "c3", "c4", "c5")}

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Verdict":
        data = dict(data)
        for k in ("c1", "c2", "c3", "c4", "c5"):
            data[k] = ConditionResult(**data[k])
        return cls(**data)

    CSV_HEADER = "d,in_D,witness,c1,c2,c3,c4,c5,scope,method,conclusion"

    def csv_row(self) -> str:
        w = "" if self.witness is None else f"C({self.witness[0] + 1};{self.witness[1]})"
        cs = ",".join(c.status for c in self.conditions().values())
        return f"{self.d},{int(self.in_D)},{w},{cs},{self.scope},{self.method},{self.conclusion}"


def verify(
    d: int,
    scope: str = "proof-min",
    method: str = "chain",
    prime_seed: int = 0,
    keep_models: Iterable[int] = (),
) -> tuple[Verdict, ConditionData | None]:
    """Certify the conditions for one d; raises OutOfFamily outside d = 3 mod 8, d >= 11."""
    if d % 8 != 3 or d < 11:
        raise OutOfFamily(f"d = {d} is outside the family d = 3 mod 8, d >= 11")
    mem = check_in_D(d)
    witness = list(mem.witness) if mem.witness else None
    try:
        data = build_condition_data(d, scope, method, keep_models)
        conds = check_conditions(d, data, prime_seed)
    except Exception as exc:  # reported as an ERROR verdict, never as a pass
        err = ConditionResult("error", detail=f"{type(exc).__name__}: {exc}")
        conds = {k: err for k in ("c1", "c2", "c3", "c4", "c5")}
        v = Verdict(d, mem.in_D, witness, **conds, scope=scope, method=method, conclusion="ERROR", error=str(exc))
        return v, None
    conclusion = conclude(mem.in_D, (c.status for c in conds.values()))
    return Verdict(d, mem.in_D, witness, **conds, scope=scope, method=method, conclusion=conclusion), data


def admissible(lo: int, hi: int) -> list[int]:
    return [d for d in range(max(lo, 11), hi + 1) if d % 8 == 3]


def scan(lo: int, hi: int, scope: str = "proof-min", method: str = "chain", prime_seed: int = 0) -> list[Verdict]:
    return [verify(d, scope, method, prime_seed)[0] for d in admissible(lo, hi)]
