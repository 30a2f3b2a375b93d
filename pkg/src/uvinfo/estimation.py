"""LTI plants, intrinsic growth rates, feasibility verdicts, necessity packings.

Matrices are tuples of tuples of :class:`~fractions.Fraction`; eigenvalue
moduli are compared through their exact squares, so boundary cases such as
``H == C0`` are decided without rounding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .channel import CapacityProfile
from .errors import InputError
from .intervals import to_fraction
from .measures import log2_exact

Matrix = tuple


# ------------------------------------------------------- exact linear algebra


def as_matrix(rows, name: str = "matrix") -> Matrix:
    if isinstance(rows, np.ndarray):
        rows = rows.tolist()
    try:
        M = tuple(tuple(to_fraction(v) for v in row) for row in rows)
    except TypeError:
        raise InputError(f"{name} must be a list of rows") from None
    if not M or len({len(r) for r in M}) != 1 or not M[0]:
        raise InputError(f"{name} must be a nonempty rectangular matrix")
    return M


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B))
    return tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt) for row in A)


def matvec(A: Matrix, x: Sequence) -> tuple:
    return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in A)


def matpow(A: Matrix, k: int) -> Matrix:
    out = identity(len(A))
    for _ in range(k):
        out = matmul(out, A)
    return out


def scale(A: Matrix, s) -> Matrix:
    return tuple(tuple(a * s for a in row) for row in A)


def absm(A: Matrix) -> Matrix:
    return tuple(tuple(abs(a) for a in row) for row in A)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    n = len(A)
    M = [list(row) + list(e) for row, e in zip(A, identity(n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise InputError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def rank(A: Matrix) -> int:
    M = [list(r) for r in A]
    rk, rows, cols = 0, len(M), len(M[0])
    for col in range(cols):
        piv = next((r for r in range(rk, rows) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        for r in range(rows):
            if r != rk and M[r][col] != 0:
                f = M[r][col] / M[rk][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[rk])]
        rk += 1
    return rk


def observability_matrix(A: Matrix, G: Matrix) -> Matrix:
    rows = []
    P = identity(len(A))
    for _ in range(len(A)):
        rows.extend(matmul(G, P))
        P = matmul(P, A)
    return tuple(rows)


def max_norm(x: Sequence):
    return max(abs(v) for v in x)


# ------------------------------------------------------------- eigenvalues


def eig_parts(lam) -> tuple:
    """``(re, im)`` of an eigenvalue as exact rationals."""
    if isinstance(lam, (list, tuple)):
        re, im = lam
        return to_fraction(re), to_fraction(im)
    if isinstance(lam, complex):
        return to_fraction(lam.real), to_fraction(lam.imag)
    if isinstance(lam, np.generic):
        lam = lam.item()
        return eig_parts(lam)
    return to_fraction(lam), Fraction(0)


def normalize_eig(lam):
    re, im = eig_parts(lam)
    return re if im == 0 else complex(float(re), float(im))


def mod2(lam) -> Fraction:
    """Squared modulus, exact."""
    re, im = eig_parts(lam)
    return re * re + im * im


def _is_upper_triangular(A: Matrix) -> bool:
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(i))


def _is_lower_triangular(A: Matrix) -> bool:
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(i + 1, len(A)))


def eigenvalues_of(A: Matrix) -> tuple:
    """Exact diagonal for triangular A, otherwise a dense numerical solve."""
    if _is_upper_triangular(A) or _is_lower_triangular(A):
        return tuple(A[i][i] for i in range(len(A)))
    vals = np.linalg.eigvals(np.array(A, dtype=float))
    return tuple(normalize_eig(complex(v)) for v in vals)


def _charpoly_residual_ok(A: Matrix, lam) -> bool:
    n = len(A)
    Af = np.array(A, dtype=float)
    re, im = eig_parts(lam)
    z = complex(float(re), float(im))
    det = abs(np.linalg.det(z * np.eye(n) - Af))
    scale_ = (1.0 + np.abs(Af).sum(axis=1).max() + abs(z)) ** n
    return det <= 1e-9 * scale_


# ------------------------------------------------------------------- plant


@dataclass(frozen=True)
class PlantModel:
    A: Matrix
    G: Matrix
    eigenvalues: tuple
    l: Fraction
    c: Fraction = Fraction(0)
    blocks: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def spectral_radius2(self) -> Fraction:
        return max(mod2(lam) for lam in self.eigenvalues)


def make_plant(A, G=None, eigenvalues=None, l=1, c=0, blocks=None) -> PlantModel:
    A = as_matrix(A, "A")
    n = len(A)
    if any(len(row) != n for row in A):
        raise InputError("A must be square")
    G = identity(n) if G is None else as_matrix(G, "G")
    if len(G[0]) != n:
        raise InputError(f"G has {len(G[0])} columns; expected {n}")
    l, c = to_fraction(l), to_fraction(c)
    if l <= 0:
        raise InputError("initial-state radius l must be positive")
    if c < 0:
        raise InputError("disturbance bound c must be nonnegative")
    if eigenvalues is None:
        eigs = eigenvalues_of(A)
    else:
        eigs = tuple(normalize_eig(lam) for lam in eigenvalues)
        if len(eigs) != n:
            raise InputError(f"{len(eigs)} eigenvalues supplied for a {n}x{n} matrix")
        bad = [lam for lam in eigs if not _charpoly_residual_ok(A, lam)]
        if bad:
            raise InputError(f"supplied eigenvalues {bad} are inconsistent with A")
    if rank(observability_matrix(A, G)) != n:
        raise InputError("(G, A) is not observable")
    if blocks is not None:
        blocks = tuple(int(b) for b in blocks)
        if sum(blocks) != n or any(b < 1 for b in blocks):
            raise InputError(f"block sizes {blocks} do not partition dimension {n}")
    return PlantModel(A, G, eigs, l, c, blocks)


def change_coordinates(plant: PlantModel, T) -> PlantModel:
    """Plant in coordinates ``x = T z``: ``A' = T^-1 A T``, ``G' = G T``.

    Use this to hand the coder a plant already in real Jordan form.
    """
    T = as_matrix(T, "T")
    Ti = inverse(T)
    return PlantModel(
        matmul(matmul(Ti, plant.A), T),
        matmul(plant.G, T),
        plant.eigenvalues,
        plant.l,
        plant.c,
        plant.blocks,
    )


def plant_from_json(text: str) -> PlantModel:
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InputError(f"plant file is not valid JSON: {exc}") from None
    if "A" not in doc:
        raise InputError('plant JSON needs "A"')
    return make_plant(
        doc["A"],
        doc.get("G"),
        doc.get("eigenvalues"),
        doc.get("l", 1),
        doc.get("c", 0),
        doc.get("blocks"),
    )


def load_plant(path) -> PlantModel:
    with open(path) as fh:
        return plant_from_json(fh.read())


# ------------------------------------------------------------ growth rates


def _check_rho(rho) -> Fraction:
    rho = to_fraction(rho)
    if rho <= 0:
        raise InputError(f"convergence parameter rho must be positive, got {rho}")
    return rho


def growth2(eigenvalues: Sequence, rho) -> Fraction:
    """Squared product of ``|lambda/rho|`` over eigenvalues with ``|lambda| >= rho``."""
    rho = _check_rho(rho)
    out = Fraction(1)
    for lam in eigenvalues:
        m = mod2(lam)
        if m >= rho * rho:
            out *= m / (rho * rho)
    return out


def unstable_exponent(eigenvalues: Sequence, rho) -> float:
    """Sum of ``log2 |lambda/rho|`` over eigenvalues of modulus at least ``rho``."""
    return log2_exact(growth2(eigenvalues, rho)) / 2


ACHIEVABLE = "ACHIEVABLE"
NECESSARY_VIOLATED = "NECESSARY-VIOLATED"
BOUNDARY = "BOUNDARY"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Verdict:
    verdict: str
    H_rho_bits: float
    c0_lower_bits: float
    tau: int | None = None
    codebook_size: int | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "H_rho_bits": self.H_rho_bits,
            "c0_lower_bits": self.c0_lower_bits,
            "tau": self.tau,
            "codebook_size": self.codebook_size,
        }


def _cmp_rate(g2: Fraction, alpha: int, tau: int) -> int:
    """Sign of ``tau * H - log2 alpha`` decided exactly: compare ``g2^tau`` with ``alpha^2``."""
    lhs, rhs = g2 ** tau, Fraction(alpha) ** 2
    return (lhs > rhs) - (lhs < rhs)


def _cmp_bits(H: float, bits: float, tol: float = 1e-12) -> int:
    if abs(H - bits) <= tol:
        return 0
    return 1 if H > bits else -1


def feasibility_check(plant_or_eigs, rho, c0_lower, c0_known: float | None = None) -> Verdict:
    """Compare the plant's intrinsic rate with a capacity lower bound (and optionally the known capacity).

    ``c0_lower`` is either a :class:`CapacityProfile` (compared exactly, and
    used to report the smallest sufficient block length) or a float in bits.
    """
    eigs = plant_or_eigs.eigenvalues if isinstance(plant_or_eigs, PlantModel) else tuple(plant_or_eigs)
    rho = _check_rho(rho)
    if max(mod2(lam) for lam in eigs) <= rho * rho:
        raise InputError("rho must be strictly below the spectral radius")
    g2 = growth2(eigs, rho)
    H = log2_exact(g2) / 2
    tau = size = None
    if isinstance(c0_lower, CapacityProfile):
        best = c0_lower.best
        lower_bits = best.rate_bits
        below = _cmp_rate(g2, best.alpha, best.tau)
        for r in c0_lower.records:
            if _cmp_rate(g2, r.alpha, r.tau) < 0:
                tau, size = r.tau, r.alpha
                break
    else:
        lower_bits = float(c0_lower)
        below = _cmp_bits(H, lower_bits)

    if c0_known is not None and _cmp_bits(H, c0_known) > 0:
        verdict = NECESSARY_VIOLATED
    elif below < 0:
        verdict = ACHIEVABLE
    elif below == 0 or (c0_known is not None and _cmp_bits(H, c0_known) == 0):
        verdict = BOUNDARY
    else:
        verdict = UNKNOWN
    if verdict != ACHIEVABLE:
        tau = size = None
    return Verdict(verdict, H, lower_bits, tau, size)


# -------------------------------------------------------- necessity packing


@dataclass(frozen=True)
class WitnessPacking:
    eps: Fraction
    tau: int
    k: tuple
    count: int
    bound_bits: float


def _floor_pow_sqrt(q: Fraction, tau: int) -> int:
    """``floor(sqrt(q)^tau)`` exactly, for rational ``q >= 0``."""
    return math.isqrt(math.floor(q ** tau))


def eps_upper(eigenvalues: Sequence, rho) -> float:
    """Right end of the admissible ``eps`` interval, ``1 - max rho/|lambda|`` over unstable modes."""
    rho = _check_rho(rho)
    unstable = [mod2(lam) for lam in eigenvalues if mod2(lam) > rho * rho]
    if not unstable:
        raise InputError("no eigenvalue exceeds rho in modulus; the packing is empty")
    return 1.0 - float(rho) / math.sqrt(min(unstable))


def necessity_witness(eigenvalues: Sequence, rho, eps, tau: int, l=1) -> WitnessPacking:
    """Per-axis counts of the hypercuboid packing of the initial ball."""
    rho, eps, l = _check_rho(rho), to_fraction(eps), to_fraction(l)
    if tau < 1:
        raise InputError("tau must be >= 1")
    if l <= 0:
        raise InputError("l must be positive")
    unstable = [mod2(lam) for lam in eigenvalues if mod2(lam) > rho * rho]
    if not unstable:
        raise InputError("no eigenvalue exceeds rho in modulus; the packing is empty")
    # eps < 1 - rho/|lambda|  <=>  (1-eps)^2 |lambda|^2 > rho^2, for the smallest unstable modulus
    if not (eps > 0 and eps < 1 and (1 - eps) ** 2 * min(unstable) > rho * rho):
        raise InputError(
            f"eps={eps} outside the admissible interval (0, {eps_upper(eigenvalues, rho):.6g})"
        )
    k = tuple(_floor_pow_sqrt((1 - eps) ** 2 * m / (rho * rho), tau) for m in unstable)
    count = math.prod(k)
    return WitnessPacking(eps, tau, k, count, log2_exact(count))


def closed_form_bound_bits(eigenvalues: Sequence, rho, eps, tau: int) -> float:
    """log2 of ``(1-eps)^(d tau) |prod lambda|^tau / (2^d rho^(d tau))`` over the ``d`` unstable modes."""
    rho, eps = _check_rho(rho), to_fraction(eps)
    unstable = [mod2(lam) for lam in eigenvalues if mod2(lam) > rho * rho]
    d = len(unstable)
    g2 = math.prod(unstable) / rho ** (2 * d)
    return d * tau * log2_exact(1 - eps) + tau * log2_exact(g2) / 2 - d


def witness_intervals(packing: WitnessPacking, l=1) -> list:
    """Per unstable axis, the shortened intervals ``(lo, hi)`` centred in each of the ``k`` equal cells of ``[-l, l]``."""
    l = to_fraction(l)
    out = []
    for k in packing.k:
        width = 2 * l / k
        axis = []
        for s in range(k):
            mid = -l + (s + Fraction(1, 2)) * width
            axis.append((mid - width / 4, mid + width / 4))
        out.append(axis)
    return out
