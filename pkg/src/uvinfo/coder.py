"""Constructive coder-estimator over a zero-error block code.

Time is split into epochs of ``tau`` plant steps. At the start of epoch
``k`` encoder and decoder share an uncertainty box for the scaled state
``rho^-k*tau X(k*tau)``; the encoder splits the box into ``prod(cells)``
cells, sends the index of the cell holding the state as one codeword of
the zero-error codebook (one channel symbol per plant step), and the
decoder recovers it exactly at the end of the epoch. Both sides then push
the cell forward through ``(A/rho)^tau`` to get the next box; the estimate
inside an epoch is the box centre propagated by ``A``.

Everything is carried out in exact rational arithmetic. The states of an
unstable plant grow like ``|lambda|^t`` while the errors shrink, so double
precision would lose the error entirely after a few dozen steps.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .channel import Channel, confusability_graph, max_output, reverse_map
from .errors import (
    InfeasibleError,
    InputError,
    InsufficientMarginError,
    InvariantError,
    UnsupportedStructureError,
)
from .estimation import (
    PlantModel,
    absm,
    eig_parts,
    growth2,
    identity,
    inverse,
    matmul,
    matpow,
    matvec,
    max_norm,
    mod2,
    observability_matrix,
    scale,
    transpose,
)
from .graphs import max_independent_set, strong_power
from .intervals import to_fraction
from .measures import log2_exact
from .uv import sorted_values, value_key

# ---------------------------------------------------------------- structure


def _blocks(plant: PlantModel) -> list:
    """Index ranges of the diagonal blocks the coder treats as independent."""
    n, A = plant.n, plant.A
    sizes = plant.blocks or (1,) * n
    out, start = [], 0
    for size in sizes:
        out.append(range(start, start + size))
        start += size
    owner = {i: b for b, rng in enumerate(out) for i in rng}
    for i in range(n):
        for j in range(n):
            if owner[i] != owner[j] and A[i][j] != 0:
                if plant.blocks is None:
                    raise UnsupportedStructureError(
                        "A is not diagonal; declare its real-Jordan block sizes or change coordinates first"
                    )
                raise UnsupportedStructureError(f"A has a nonzero entry ({i}, {j}) outside the declared blocks")
    return out


def _block_mod2(A, rng) -> Fraction:
    """Squared eigenvalue modulus shared by a real-Jordan block."""
    sub = tuple(tuple(A[i][j] for j in rng) for i in rng)
    m = len(sub)
    if all(sub[i][j] == 0 for i in range(m) for j in range(i)):
        diag = {abs(sub[i][i]) for i in range(m)}
        if len(diag) != 1:
            raise UnsupportedStructureError("a triangular block must carry one repeated eigenvalue")
        return sub[0][0] ** 2
    if m == 2:
        return sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
    vals = np.linalg.eigvals(np.array(sub, dtype=float))
    mods = np.abs(vals)
    if np.ptp(mods) > 1e-9 * max(1.0, mods.max()):
        raise UnsupportedStructureError("eigenvalues of a real-Jordan block must share one modulus")
    return to_fraction(float(mods.max()) ** 2)


def axis_growth2(plant: PlantModel, rho, tau: int) -> tuple:
    """Per state axis, ``|lambda/rho|^(2 tau)`` for the eigenvalue governing that axis."""
    rho = to_fraction(rho)
    out = [Fraction(0)] * plant.n
    for rng in _blocks(plant):
        g = (_block_mod2(plant.A, rng) / (rho * rho)) ** tau
        for i in rng:
            out[i] = g
    return tuple(out)


def _spectral_radius(M) -> float:
    return float(max(abs(np.linalg.eigvals(np.array(M, dtype=float)))))


def contraction_factor(M_abs, cells: Sequence[int]) -> float:
    """Spectral radius of ``diag(1/k) |M|``: the per-epoch shrink factor of the box half-widths."""
    D = tuple(tuple(M_abs[i][j] / cells[i] for j in range(len(cells))) for i in range(len(cells)))
    return _spectral_radius(D)


# ------------------------------------------------------------------- coder


@dataclass(frozen=True)
class CoderEstimator:
    plant: PlantModel
    channel: Channel
    rho: Fraction
    tau: int
    codebook: tuple
    cells: tuple
    M: tuple = field(repr=False)
    contraction: float = 1.0

    @property
    def rate_bits(self) -> float:
        return log2_exact(len(self.codebook))

    @property
    def n_cells(self) -> int:
        return math.prod(self.cells)


def _confusable(C: Channel, f, g) -> bool:
    return all(C(a) & C(b) for a, b in zip(f, g))


def make_coder(
    plant: PlantModel,
    channel: Channel,
    rho,
    tau: int,
    codebook: Sequence,
    cells: Sequence[int],
    check: bool = True,
) -> CoderEstimator:
    """Assemble a coder from an explicit codebook and cell allocation.

    With ``check=False`` the rate and contraction conditions are skipped, which
    is how deliberately undersized coders are built for falsification runs.
    Codebook validity (zero-error decodability) is always enforced.
    """
    rho = to_fraction(rho)
    F = tuple(sorted_values({tuple(f) for f in codebook}))
    if any(len(f) != tau for f in F):
        raise InputError(f"every codeword must have length tau={tau}")
    for i, f in enumerate(F):
        for g in F[i + 1:]:
            if _confusable(channel, f, g):
                raise InputError(f"codewords {f} and {g} can produce the same output block")
    cells = tuple(int(k) for k in cells)
    if len(cells) != plant.n or any(k < 1 for k in cells):
        raise InputError(f"need one positive cell count per state axis ({plant.n})")
    if math.prod(cells) > len(F):
        raise InputError(f"{math.prod(cells)} cells but only {len(F)} codewords")
    M = matpow(scale(plant.A, 1 / rho), tau)
    rate = contraction_factor(absm(M), cells)
    if check:
        g2 = growth2(plant.eigenvalues, rho)
        if not Fraction(len(F)) ** 2 > g2 ** tau:
            raise InfeasibleError(f"log2|F| = {log2_exact(len(F)):.6g} does not exceed tau * H_rho")
        for k, a2 in zip(cells, axis_growth2(plant, rho, tau)):
            if a2 >= 1 and not k * k > a2:
                raise InfeasibleError(f"cell count {k} does not exceed the axis growth {math.sqrt(a2):.6g}")
        if rate >= 1:
            raise InfeasibleError(f"box contraction factor {rate:.6g} is not below 1")
    return CoderEstimator(plant, channel, rho, tau, F, cells, M, rate)


def allocate_cells(plant: PlantModel, rho, tau: int, budget: int) -> tuple | None:
    """Cells per axis with product at most ``budget``, or ``None`` if the box cannot contract."""
    rho = to_fraction(rho)
    a2 = axis_growth2(plant, rho, tau)
    # smallest k with k^2 > a^2 on unstable axes
    cells = [math.isqrt(math.floor(g)) + 1 if g >= 1 else 1 for g in a2]
    if math.prod(cells) > budget:
        return None
    M_abs = absm(matpow(scale(plant.A, 1 / rho), tau))
    rowsum = [float(sum(r)) for r in M_abs]

    def room(i):
        return math.prod(cells) // cells[i] * (cells[i] + 1) <= budget

    while contraction_factor(M_abs, cells) >= 1:
        cand = [i for i in range(plant.n) if room(i)]
        if not cand:
            return None
        i = max(cand, key=lambda i: (rowsum[i] / cells[i], -i))
        cells[i] += 1
    # spend what is left on unstable axes, largest growth-per-cell first
    while True:
        cand = [i for i in range(plant.n) if a2[i] >= 1 and room(i)]
        if not cand:
            break
        i = max(cand, key=lambda i: (math.sqrt(a2[i]) / cells[i], -i))
        cells[i] += 1
    return tuple(cells)


def build_coder_estimator(
    plant: PlantModel,
    channel: Channel,
    rho,
    tau_max: int,
    time_budget: float | None = None,
) -> CoderEstimator:
    """Smallest block length whose maximum codebook beats the plant's growth, with a contracting allocation."""
    rho = to_fraction(rho)
    if rho <= 0:
        raise InputError("rho must be positive")
    if plant.spectral_radius2 == rho * rho:
        raise InputError("rho equal to the spectral radius is not supported")
    _blocks(plant)
    g2 = growth2(plant.eigenvalues, rho)
    G = confusability_graph(channel)
    best = None
    for tau in range(1, tau_max + 1):
        alpha, F = max_independent_set(strong_power(G, tau), time_budget)
        best = (tau, alpha)
        if not Fraction(alpha) ** 2 > g2 ** tau:
            continue
        cells = allocate_cells(plant, rho, tau, alpha)
        if cells is None:
            continue
        return make_coder(plant, channel, rho, tau, F, cells)
    raise InfeasibleError(
        f"no block length up to {tau_max} gives a codebook beating H_rho = {log2_exact(g2) / 2:.6g} bits/step"
        f" (last tried tau={best[0]}, alpha={best[1]})"
    )


# ------------------------------------------------------------ reconstruction


def _reconstructor(plant: PlantModel) -> tuple:
    """Matrix mapping the last ``n`` outputs to the current state, and its noise gain bound per axis.

    Returns ``(K, e_per_c)`` where ``X(s) = K [Y(s-n+1); ...; Y(s)]`` when
    noise is absent and ``|error| <= c * e_per_c`` componentwise otherwise.
    """
    A, G, n = plant.A, plant.G, plant.n
    O = observability_matrix(A, G)
    Ot = transpose(O)
    pinv = matmul(inverse(matmul(Ot, O)), Ot)
    K = matmul(matpow(A, n - 1), pinv)
    p = len(G)
    absG = absm(G)
    ones = (Fraction(1),) * n
    eta = []
    for j in range(n):
        acc = [Fraction(0)] * n
        for i in range(j):
            acc = [a + b for a, b in zip(acc, matvec(absm(matpow(A, j - 1 - i)), ones))]
        row = matvec(absG, acc)
        eta.extend(v + 1 for v in row[:p])
    e = list(matvec(absm(K), eta))
    for i in range(n - 1):
        e = [a + b for a, b in zip(e, matvec(absm(matpow(A, n - 2 - i)), ones))]
    return K, tuple(e)


def noise_accumulation(plant: PlantModel, steps: int) -> tuple:
    """Componentwise bound, per unit ``c``, on ``sum_i A^(steps-1-i) V(i)``."""
    ones = (Fraction(1),) * plant.n
    acc = [Fraction(0)] * plant.n
    for i in range(steps):
        acc = [a + b for a, b in zip(acc, matvec(absm(matpow(plant.A, steps - 1 - i)), ones))]
    return tuple(acc)


# -------------------------------------------------------------- box bounds


def _unit_rho(coder: CoderEstimator, c: Fraction) -> None:
    if c and coder.rho != 1:
        raise InputError("analytic disturbance bounds are for rho = 1")


def box_step(coder: CoderEstimator, h: Sequence, c, informative: bool = True) -> tuple:
    """Next epoch's box half-widths from the current ones (scaled coordinates)."""
    c = to_fraction(c)
    _unit_rho(coder, c)
    M_abs = absm(coder.M)
    e = tuple(c * v for v in _reconstructor(coder.plant)[1]) if c else (Fraction(0),) * coder.plant.n
    v = tuple(c * x for x in noise_accumulation(coder.plant, coder.tau)) if c else (Fraction(0),) * coder.plant.n
    if informative:
        inner = tuple((hi + ei) / k + ei for hi, ei, k in zip(h, e, coder.cells))
    else:
        inner = tuple(h)
    return tuple(a + b for a, b in zip(matvec(M_abs, inner), v))


def box_fixed_point(coder: CoderEstimator, c) -> tuple:
    """Half-widths ``h`` with ``box_step(h) == h``; exists when the contraction factor is below 1."""
    c = to_fraction(c)
    _unit_rho(coder, c)
    n = coder.plant.n
    M_abs = absm(coder.M)
    e = tuple(c * v for v in _reconstructor(coder.plant)[1])
    v = tuple(c * x for x in noise_accumulation(coder.plant, coder.tau))
    lhs = tuple(
        tuple(int(i == j) - M_abs[i][j] / coder.cells[j] for j in range(n)) for i in range(n)
    )
    rhs = tuple(a + b for a, b in zip(matvec(M_abs, tuple(ei / k + ei for ei, k in zip(e, coder.cells))), v))
    return matvec(inverse(lhs), rhs)


def epoch_error_bound(coder: CoderEstimator, h: Sequence, c) -> Fraction:
    """Max-norm bound on the (scaled) error anywhere inside an epoch that starts with box ``h``."""
    c = to_fraction(c)
    _unit_rho(coder, c)
    A_r = identity(coder.plant.n)
    A_s = scale(coder.plant.A, 1 / coder.rho)
    worst = Fraction(0)
    for r in range(coder.tau):
        noise = tuple(c * x for x in noise_accumulation(coder.plant, r)) if c else (0,) * coder.plant.n
        bound = tuple(a + b for a, b in zip(matvec(absm(A_r), h), noise))
        worst = max(worst, max(bound))
        A_r = matmul(A_s, A_r)
    return worst


def error_envelope(coder: CoderEstimator, c, epochs: int) -> list:
    """Analytic per-epoch error bounds starting from the initial ball, following the coder's own schedule."""
    c = to_fraction(c)
    n = coder.plant.n
    h = (coder.plant.l,) * n
    out = []
    for k in range(epochs):
        out.append(epoch_error_bound(coder, h, c))
        h = box_step(coder, h, c, informative=k * coder.tau >= n - 1)
    return out


def fixed_point_error_bound(coder: CoderEstimator, c) -> Fraction:
    """Steady-state sup error: the epoch bound evaluated at the box fixed point."""
    return epoch_error_bound(coder, box_fixed_point(coder, c), c)


def critical_disturbance(coder: CoderEstimator, error_budget) -> Fraction:
    """Largest ``c`` whose steady-state error bound stays within ``error_budget`` (the bound is linear in ``c``)."""
    if coder.contraction >= 1:
        return Fraction(0)
    per_unit = fixed_point_error_bound(coder, 1)
    return to_fraction(error_budget) / per_unit


# ------------------------------------------------------------------- trace


@dataclass(frozen=True)
class TraceRow:
    t: int
    state: tuple
    estimate: tuple
    error: float
    scaled_error: float


@dataclass
class Trace:
    rho: Fraction
    tau: int
    rows: list = field(default_factory=list)
    boxes: list = field(default_factory=list)
    exact_errors: list = field(default_factory=list, repr=False)

    def epoch_scaled_errors(self) -> list:
        return [r.scaled_error for r in self.rows if r.t % self.tau == 0]

    def exact_scaled_errors(self) -> list:
        return [e / self.rho ** t for t, e in enumerate(self.exact_errors)]

    def to_csv(self) -> str:
        n = len(self.rows[0].state)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(
            ["t"] + [f"state_{i + 1}" for i in range(n)] + [f"estimate_{i + 1}" for i in range(n)] + ["err", "scaled_err"]
        )
        for r in self.rows:
            w.writerow([r.t, *map(repr, r.state), *map(repr, r.estimate), repr(r.error), repr(r.scaled_error)])
        return buf.getvalue()


# -------------------------------------------------------------- simulation

NOISE_POLICIES = ("zero", "adversarial", "uniform")


def _channel_stepper(C: Channel, policy: str, seed: int, adversary: Callable | None):
    if policy not in ("first", "adversarial", "uniform"):
        raise InputError(f"unknown channel policy {policy!r}")
    rng = random.Random(seed)
    pick = adversary or max_output

    def step(t, x):
        ys = C(x)
        if policy == "first":
            return min(ys, key=value_key)
        if policy == "adversarial":
            y = pick(t, x, ys)
            if y not in ys:
                raise InputError(f"adversary returned {y!r}, not in T({x!r})")
            return y
        return rng.choice(sorted_values(ys))

    return step


def _noise_source(policy, c: Fraction, n: int, p: int, seed: int):
    if callable(policy):
        return policy
    if policy not in NOISE_POLICIES:
        raise InputError(f"unknown noise policy {policy!r}; choose from {NOISE_POLICIES}")
    rng = random.Random(seed)
    grid = 1000

    def draw(t):
        if policy == "zero" or c == 0:
            return (Fraction(0),) * n, (Fraction(0),) * p
        if policy == "adversarial":
            return (c,) * n, (c,) * p
        v = tuple(c * Fraction(rng.randint(-grid, grid), grid) for _ in range(n))
        w = tuple(c * Fraction(rng.randint(-grid, grid), grid) for _ in range(p))
        return v, w

    return draw


def _decode(F: tuple, R: dict, y_block: tuple) -> int:
    hits = [i for i, f in enumerate(F) if all(x in R[y] for x, y in zip(f, y_block))]
    if len(hits) != 1:
        raise InvariantError(f"output block {y_block} matches {len(hits)} codewords")
    return hits[0]


def _quantize(z, lo, width, k) -> int:
    return min(max(math.floor((z - lo) / width), 0), k - 1)


def _simulate(
    coder: CoderEstimator,
    x0,
    T_end: int,
    policy: str,
    seed: int,
    adversary: Callable | None,
    c: Fraction,
    noise_policy,
) -> Trace:
    plant, tau, rho, F = coder.plant, coder.tau, coder.rho, coder.codebook
    n, p = plant.n, len(plant.G)
    x = tuple(to_fraction(v) for v in (x0 if isinstance(x0, (list, tuple)) else [x0]))
    if len(x) != n:
        raise InputError(f"x0 has {len(x)} components; the plant has {n}")
    if max_norm(x) > plant.l:
        raise InputError(f"initial state {[float(v) for v in x]} lies outside the ball of radius {plant.l}")

    K, e_unit = _reconstructor(plant)
    e = tuple(c * v for v in e_unit)
    step_channel = _channel_stepper(coder.channel, policy, seed, adversary)
    noise = _noise_source(noise_policy, c, n, p, seed + 1)
    R = reverse_map(coder.channel)
    cell_tuples = list(product(*(range(k) for k in coder.cells)))

    center = (Fraction(0),) * n
    half = (plant.l,) * n
    trace = Trace(rho, tau)
    outputs: list = []
    sent = None
    cell = None
    y_block: list = []
    A_r = identity(n)

    for t in range(T_end + 1):
        k, r = divmod(t, tau)
        if r == 0:
            A_r = identity(n)
            trace.boxes.append(tuple(float(h) for h in half))
        estimate = matvec(A_r, tuple(rho ** (k * tau) * v for v in center))
        err = max_norm(a - b for a, b in zip(x, estimate))
        trace.exact_errors.append(err)
        trace.rows.append(
            TraceRow(t, tuple(map(float, x)), tuple(map(float, estimate)), float(err), float(err / rho ** t))
        )
        if t == T_end:
            break

        v, w = noise(t)
        outputs.append(tuple(a + b for a, b in zip(matvec(plant.G, x), w)))

        if r == 0:
            informative = t >= n - 1
            if informative:
                stack = tuple(val for y in outputs[-n:] for val in y)
                z = tuple(val / rho ** t for val in matvec(K, stack))
                scaled_e = tuple(ei / rho ** t for ei in e)
                lo = tuple(ci - hi - ei for ci, hi, ei in zip(center, half, scaled_e))
                width = tuple(2 * (hi + ei) / kk for hi, ei, kk in zip(half, scaled_e, coder.cells))
                if any(not li <= zi <= li + kk * wi for zi, li, wi, kk in zip(z, lo, width, coder.cells)):
                    raise InvariantError(f"state left the shared uncertainty box at t={t}")
                cell = tuple(_quantize(zi, li, wi, kk) for zi, li, wi, kk in zip(z, lo, width, coder.cells))
                sent = cell_tuples.index(cell)
            else:
                cell, sent = None, 0
            y_block = []

        y_block.append(step_channel(t, F[sent][r]))
        x = tuple(a + b for a, b in zip(matvec(plant.A, x), v))
        A_r = matmul(plant.A, A_r)

        if r == tau - 1:
            got = _decode(F, R, tuple(y_block))
            if got != sent:
                raise InvariantError(f"decoded codeword {got} but {sent} was sent")
            if cell is not None:
                mid = tuple(li + (ci + Fraction(1, 2)) * wi for li, ci, wi in zip(lo, cell, width))
                inner = tuple(wi / 2 + ei for wi, ei in zip(width, scaled_e))
            else:
                mid, inner = center, half
            center = matvec(coder.M, mid)
            acc = noise_accumulation(plant, tau)
            # process noise enters the scaled coordinates of the next epoch start
            half = tuple(a + c * b / rho ** (t + 1) for a, b in zip(matvec(absm(coder.M), inner), acc))
    return trace


def simulate_noiseless(
    coder: CoderEstimator,
    x0,
    T_end: int,
    policy: str = "adversarial",
    seed: int = 0,
    adversary: Callable | None = None,
) -> Trace:
    """Closed-loop run with no disturbances; decoding is exact under every channel policy."""
    return _simulate(coder, x0, T_end, policy, seed, adversary, Fraction(0), "zero")


def simulate_disturbed(
    coder: CoderEstimator,
    x0,
    T_end: int,
    c=None,
    noise_policy="adversarial",
    policy: str = "adversarial",
    seed: int = 0,
    adversary: Callable | None = None,
    error_budget=None,
) -> Trace:
    """Run with bounded process and measurement noise; boxes are inflated so the state never leaves them.

    ``c`` defaults to the plant's bound. If ``error_budget`` is given and the
    steady-state error bound exceeds it, :class:`InsufficientMarginError`
    reports the largest admissible ``c``.
    """
    c = coder.plant.c if c is None else to_fraction(c)
    if c < 0:
        raise InputError("noise bound must be nonnegative")
    if c > 0 and coder.contraction >= 1:
        raise InsufficientMarginError("box does not contract; any disturbance grows without bound", Fraction(0))
    if error_budget is not None and c > 0:
        crit = critical_disturbance(coder, error_budget)
        if c > crit:
            raise InsufficientMarginError(
                f"steady-state error bound exceeds {error_budget} for c={c}; largest admissible c is {float(crit):.6g}",
                crit,
            )
    return _simulate(coder, x0, T_end, policy, seed, adversary, c, noise_policy)
