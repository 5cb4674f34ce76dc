"""Quantitative studies: reference-table reproduction, parameter sweeps,
validity rasterization, tube cross-sections, and time-series export.

Every operation is deterministic given its inputs; grid experiments fan
out over a bounded worker pool (capped by TUBE_RUPTURE_THREADS) and gather
into deterministically ordered outputs.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np
from contourpy import LineType, contour_generator

from .errors import EmptySection, NoRealExtremum
from .integrator import IntegratorConfig, Trajectory, TerminationKind, integrate
from .invariant import k_constant
from .model import SystemParams
from .rupture import n_crit_closed, predict, tau_rupt_closed, validity_check

#: Default forcing strengths of the reference comparison table.
TABLE1_EPS = (0.025, 0.05, 0.10, 0.15, 0.20)

#: Level-set residual bound after gradient refinement.
SECTION_TOL = 1e-8

_T = TypeVar("_T")
_R = TypeVar("_R")


def pool_map(fn: Callable[[_T], _R], items: Iterable[_T]) -> list[_R]:
    """Map fn over items with a bounded worker pool, preserving order.

    TUBE_RUPTURE_THREADS caps the pool; 1 (or an unset/invalid value on a
    single-core host) degrades to a plain sequential map.
    """
    items = list(items)
    try:
        workers = int(os.environ.get("TUBE_RUPTURE_THREADS", ""))
    except ValueError:
        workers = 0
    if workers <= 0:
        workers = min(4, os.cpu_count() or 1)
    workers = min(workers, max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class SweepSpec:
    """Rectangular (eps, z0) sweep at fixed y0.

    Ranges are (lo, hi, count) with count >= 2; tau_cap bounds each
    integration when with_numeric is set.
    """

    y0: float
    eps_range: tuple[float, float, int]
    z0_range: tuple[float, float, int]
    with_numeric: bool = False
    tau_cap: float = 0.0

    def __post_init__(self):
        for lo, hi, count in (self.eps_range, self.z0_range):
            if count < 2:
                raise ValueError("range counts must be >= 2")
            if not lo < hi:
                raise ValueError(f"range must be ordered, got ({lo}, {hi})")
        if self.with_numeric and not self.tau_cap > 0:
            raise ValueError("tau_cap must be positive when with_numeric is set")


@dataclass(frozen=True)
class Table1Row:
    eps: float
    tau_analytic: float
    tau_numeric: Optional[float]
    rel_deviation: Optional[float]
    censored: bool


@dataclass(frozen=True)
class SurfaceCell:
    eps: float
    z0: float
    n_crit: Optional[float]
    valid: bool


@dataclass(frozen=True)
class SectionCurve:
    """Level set I_s(z, p, n) = K traced in a (z, p) window.

    polylines[i] is an (m, 2) array of (z, p) vertices; closed[i] marks a
    loop (first vertex repeated last); every vertex satisfies
    |I_s - K| <= SECTION_TOL.
    """

    n: int
    k_ref: float
    polylines: list[np.ndarray] = field(repr=False)
    closed: list[bool]


def table1(
    y0: float = 1.0,
    z0: float = 0.2,
    eps_list: Sequence[float] = TABLE1_EPS,
    config: IntegratorConfig = IntegratorConfig(),
) -> list[Table1Row]:
    """Analytic vs numeric rupture times across forcing strengths.

    Each run is capped at 1.5x the analytic time; a run that reaches the
    cap without blowing up is reported censored, not failed.
    """

    def one(eps: float) -> Table1Row:
        params = SystemParams(y0=y0, eps=eps, z0=z0)
        tau_an = tau_rupt_closed(params)
        traj = integrate(params, config, tau_end=1.5 * tau_an)
        tau_num = traj.tau_num
        if tau_num is None:
            return Table1Row(eps, tau_an, None, None, True)
        return Table1Row(eps, tau_an, tau_num, (tau_num - tau_an) / tau_an, False)

    return pool_map(one, eps_list)


def rupture_surface(spec: SweepSpec) -> list[SurfaceCell]:
    """Closed-form critical index on the (eps, z0) grid, row-major in eps.

    Out-of-validity cells fail soft: n_crit is None and valid is False.
    """
    eps_vals = np.linspace(*spec.eps_range)
    z0_vals = np.linspace(*spec.z0_range)

    def one(cell: tuple[float, float]) -> SurfaceCell:
        eps, z0 = cell
        valid, _ = validity_check(spec.y0, z0)
        if valid:
            try:
                params = SystemParams(y0=spec.y0, eps=eps, z0=z0)
                return SurfaceCell(eps, z0, n_crit_closed(params), True)
            except NoRealExtremum:
                # margin < 1 but C^(1/3) >= y0: the extremum leaves the
                # real axis before the band condition fails
                pass
        return SurfaceCell(eps, z0, None, False)

    cells = [(float(e), float(z)) for e in eps_vals for z in z0_vals]
    return pool_map(one, cells)


def validity_raster(
    y0_range: tuple[float, float, int],
    z0_range: tuple[float, float, int],
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[np.ndarray]]:
    """Rasterize the validity condition y0 (y0 - C^(1/3)) < 1.

    Returns (y0_vals, z0_vals, inside, boundary) where inside[i, j] is the
    flag at (y0_vals[i], z0_vals[j]) and boundary is a list of polylines
    tracing the margin = 1 contour in the (y0, z0) plane.
    """
    for lo, hi, count in (y0_range, z0_range):
        if not (lo > 0 and lo < hi and count >= 2):
            raise ValueError("ranges must be positive, ordered, with count >= 2")
    y0_vals = np.linspace(*y0_range)
    z0_vals = np.linspace(*z0_range)
    margin = np.empty((len(y0_vals), len(z0_vals)))
    for i, y0 in enumerate(y0_vals):
        for j, z0 in enumerate(z0_vals):
            _, margin[i, j] = validity_check(float(y0), float(z0))
    inside = margin < 1.0
    # contourpy indexes z as z[y_index, x_index]; x = y0, y = z0.
    gen = contour_generator(
        x=y0_vals, y=z0_vals, z=margin.T, line_type=LineType.Separate
    )
    boundary = [np.asarray(line) for line in gen.lines(1.0)]
    return y0_vals, z0_vals, inside, boundary


def _refine_onto_level(
    pts: np.ndarray, n: float, params: SystemParams, k_ref: float
) -> np.ndarray:
    """Newton steps along the gradient of I_s until |I_s - K| <= SECTION_TOL."""
    y0, eps = params.y0, params.eps
    shear = 5.0 * eps * eps * n * math.pi / (48.0 * y0**6)
    z = pts[:, 0].copy()
    p = pts[:, 1].copy()
    for _ in range(25):
        f = y0 * p * p + y0 * z * z + 2.0 * z**3 / (3.0 * y0**1.5) - shear * p * z - k_ref
        if np.max(np.abs(f)) <= SECTION_TOL:
            break
        fz = 2.0 * y0 * z + 2.0 * z * z / y0**1.5 - shear * p
        fp = 2.0 * y0 * p - shear * z
        g2 = fz * fz + fp * fp
        g2 = np.where(g2 > 0.0, g2, 1.0)
        step = f / g2
        z -= step * fz
        p -= step * fp
    return np.column_stack([z, p])


def tube_sections(
    params: SystemParams,
    n_list: Sequence[int],
    window: Optional[float] = None,
    grid: int = 800,
) -> list[SectionCurve]:
    """Trace the level set I_s(z, p, n) = K for each requested index.

    The square window defaults to 3 * max(r*, |z0|) around the origin; the
    contouring pass on a grid x grid mesh is followed by per-vertex
    gradient refinement onto the level set.
    """
    k_ref = k_constant(params)
    if window is None:
        window = 3.0 * max(abs(predict(params).r_star), abs(params.z0))
    zs = np.linspace(-window, window, grid)
    ps = np.linspace(-window, window, grid)
    zg, pg = np.meshgrid(zs, ps)
    y0, eps = params.y0, params.eps

    out = []
    for n in n_list:
        shear = 5.0 * eps * eps * n * math.pi / (48.0 * y0**6)
        field_vals = (
            y0 * pg * pg + y0 * zg * zg + 2.0 * zg**3 / (3.0 * y0**1.5)
            - shear * pg * zg
        )
        gen = contour_generator(
            x=zs, y=ps, z=field_vals, line_type=LineType.Separate
        )
        lines = gen.lines(k_ref)
        if not lines:
            raise EmptySection(f"no level-set points in window +-{window} at n = {n}")
        polylines = []
        closed = []
        for line in lines:
            line = np.asarray(line)
            is_closed = bool(np.all(line[0] == line[-1]))
            refined = _refine_onto_level(line, n, params, k_ref)
            if is_closed:
                refined[-1] = refined[0]  # keep the loop exactly closed
            polylines.append(refined)
            closed.append(is_closed)
        out.append(SectionCurve(n=int(n), k_ref=k_ref, polylines=polylines, closed=closed))
    return out


def _encloses(polyline: np.ndarray, z: float, p: float) -> bool:
    """Even-odd crossing test for a closed polyline around (z, p)."""
    x, y = polyline[:, 0], polyline[:, 1]
    x0, x1 = x[:-1], x[1:]
    y0, y1 = y[:-1], y[1:]
    straddle = (y0 > p) != (y1 > p)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = x0 + (p - y0) / (y1 - y0) * (x1 - x0)
    return bool(np.sum(straddle & (x_cross > z)) % 2)


def section_is_confining(curve: SectionCurve, params: SystemParams) -> bool:
    """Whether some closed component of the section encloses the origin.

    The initial point (z0, p0) lies ON the level set, so the origin (where
    I_s = 0 < K) is the interior probe: the confining oval passes through
    the initial point and wraps around the equilibrium.  The level set
    always carries an unbounded far branch (the cubic runs to -infinity in
    z), so "any open component exists" cannot signal rupture; loss of the
    closed component around the equilibrium can.
    """
    for line, is_closed in zip(curve.polylines, curve.closed):
        if is_closed and _encloses(line, 0.0, 0.0):
            return True
    return False


def section_transition(
    params: SystemParams,
    n_lo: Optional[int] = None,
    n_hi: Optional[int] = None,
    window: Optional[float] = None,
    grid: int = 800,
) -> int:
    """Smallest sampled n at which the section stops confining the origin.

    Bisects between a confining n_lo and a non-confining n_hi (defaults
    bracket the closed-form critical index).
    """
    n_star = n_crit_closed(params)
    if n_lo is None:
        n_lo = max(0, int(0.9 * n_star))
    if n_hi is None:
        n_hi = int(1.1 * n_star) + 2

    def confining(n: int) -> bool:
        curve = tube_sections(params, [n], window=window, grid=grid)[0]
        return section_is_confining(curve, params)

    if not confining(n_lo):
        raise ValueError(f"n_lo = {n_lo} is already past the transition")
    if confining(n_hi):
        raise ValueError(f"n_hi = {n_hi} still confines; widen the bracket")
    while n_hi - n_lo > 1:
        mid = (n_lo + n_hi) // 2
        if confining(mid):
            n_lo = mid
        else:
            n_hi = mid
    return n_hi


def timeseries_export(
    params: SystemParams,
    tau_cap: float,
    stride: int = 1,
    config: IntegratorConfig = IntegratorConfig(),
) -> tuple[np.ndarray, Trajectory]:
    """Decimated (tau, z) records up to tau_cap (or blow-up), plus the run.

    stride decimates over accepted steps; the divergence tail is included
    because the final recorded step precedes termination directly.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    traj = integrate(params, config, tau_end=tau_cap, dense_stride=stride)
    records = traj.dense[:, [0, 4]] if traj.dense.size else np.empty((0, 2))
    return records, traj
