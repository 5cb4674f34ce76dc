import math
import os

import numpy as np
import pytest

from tuberupture.errors import EmptySection
from tuberupture.experiments import (
    SweepSpec,
    pool_map,
    rupture_surface,
    section_is_confining,
    section_transition,
    table1,
    timeseries_export,
    tube_sections,
    validity_raster,
)
from tuberupture.invariant import eval_sampled
from tuberupture.model import SystemParams
from tuberupture.rupture import n_crit_closed
from tuberupture.integrator import TerminationKind

P = SystemParams(y0=1.0, eps=0.05, z0=0.2)


def test_pool_map_preserves_order():
    assert pool_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]


def test_pool_map_respects_thread_env(monkeypatch):
    monkeypatch.setenv("TUBE_RUPTURE_THREADS", "1")
    assert pool_map(str, [3, 1, 2]) == ["3", "1", "2"]
    monkeypatch.setenv("TUBE_RUPTURE_THREADS", "garbage")
    assert pool_map(str, [3, 1, 2]) == ["3", "1", "2"]


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(1.0, (0.1, 0.05, 5), (0.1, 0.4, 5))  # unordered
    with pytest.raises(ValueError):
        SweepSpec(1.0, (0.05, 0.1, 1), (0.1, 0.4, 5))  # count < 2
    with pytest.raises(ValueError):
        SweepSpec(1.0, (0.05, 0.1, 5), (0.1, 0.4, 5), with_numeric=True)


def test_table1_fast_rows():
    rows = table1(eps_list=(0.10, 0.20))
    for row, (tau_an, tau_num) in zip(rows, ((1338.2, 1471.2), (334.5, 376.8))):
        assert row.tau_analytic == pytest.approx(tau_an, rel=1e-3)
        assert not row.censored
        assert row.tau_numeric == pytest.approx(tau_num, rel=0.10)
        assert 0.05 < row.rel_deviation < 0.20


def test_rupture_surface_contracts():
    spec = SweepSpec(1.0, (0.025, 0.10, 5), (0.1, 0.4, 5))
    cells = rupture_surface(spec)
    assert len(cells) == 25
    # grid/scalar consistency, bit for bit
    corner = cells[0]
    assert corner.eps == 0.025 and corner.z0 == 0.1
    assert corner.n_crit == n_crit_closed(SystemParams(1.0, 0.025, 0.1))
    # eps^{-2} scaling along a z0 column
    by_z0 = {}
    for c in cells:
        by_z0.setdefault(c.z0, []).append(c)
    for group in by_z0.values():
        consts = [c.n_crit * c.eps**2 for c in group]
        assert max(consts) - min(consts) < 1e-12 * max(consts)
    # monotone decreasing in z0 at fixed eps
    for eps in sorted({c.eps for c in cells}):
        row = [c.n_crit for c in cells if c.eps == eps]
        assert all(a > b for a, b in zip(row, row[1:]))


def test_rupture_surface_fails_soft_outside_validity():
    spec = SweepSpec(1.0, (0.05, 0.1, 2), (0.5, 0.7, 3))
    cells = rupture_surface(spec)
    invalid = [c for c in cells if not c.valid]
    assert invalid and all(c.n_crit is None for c in invalid)


def test_validity_raster():
    y0v, z0v, inside, boundary = validity_raster((0.5, 2.0, 40), (0.01, 0.5, 40))
    assert inside.shape == (40, 40)
    i = int(np.argmin(np.abs(y0v - 1.0)))
    assert inside[i, int(np.argmin(np.abs(z0v - 0.25)))]
    assert inside[i, int(np.argmin(np.abs(z0v - 0.2)))]
    # y0 = 2 with tiny z0 is outside (y0^2 = 4 > 1)
    j2 = int(np.argmin(np.abs(y0v - 2.0)))
    assert not inside[j2, 0]
    assert boundary and all(line.shape[1] == 2 for line in boundary)


def test_validity_raster_rejects_bad_ranges():
    with pytest.raises(ValueError):
        validity_raster((-1.0, 2.0, 10), (0.01, 0.5, 10))


def test_sections_n0_closed_oval():
    curve = tube_sections(P, [0])[0]
    # one closed oval around the origin plus the unbounded far branch
    closed_lines = [l for l, c in zip(curve.polylines, curve.closed) if c]
    assert len(closed_lines) == 1
    assert section_is_confining(curve, P)
    oval = closed_lines[0]
    # the oval passes through the initial condition (z0, 0)
    d = np.min(np.hypot(oval[:, 0] - P.z0, oval[:, 1]))
    assert d < 1e-2
    # even in p at n = 0: reflected vertices lie on the curve too
    for z, p in oval[::25]:
        assert abs(
            eval_sampled(z, -p, 0, P.y0, P.eps) - curve.k_ref
        ) <= 1.1e-8


def test_sections_residual_contract():
    for curve in tube_sections(P, [0, 1000, 1800]):
        for line in curve.polylines:
            vals = np.array(
                [eval_sampled(z, p, curve.n, P.y0, P.eps) for z, p in line]
            )
            assert np.max(np.abs(vals - curve.k_ref)) <= 1.1e-8


def test_sections_open_past_rupture():
    n_star = n_crit_closed(P)
    below = tube_sections(P, [int(n_star) - 20])[0]
    above = tube_sections(P, [int(n_star) + 20])[0]
    assert section_is_confining(below, P)
    assert not section_is_confining(above, P)
    # past rupture the opening is on the z < 0 side: every open component
    # reaches the negative-z half plane
    opens = [l for l, c in zip(above.polylines, above.closed) if not c]
    assert opens and all(l[:, 0].min() < 0 for l in opens)


def test_section_transition_brackets_n_crit():
    n_t = section_transition(P)
    assert abs(n_t - n_crit_closed(P)) <= 2.0


def test_sections_empty_window():
    with pytest.raises(EmptySection):
        tube_sections(P, [0], window=1e-4)


def test_timeseries_export():
    records, traj = timeseries_export(P, tau_cap=100.0, stride=4)
    assert traj.termination.kind is TerminationKind.REACHED_END
    assert records.shape == (math.ceil(traj.accepted_steps / 4), 2)
    assert np.all(np.diff(records[:, 0]) > 0)
    with pytest.raises(ValueError):
        timeseries_export(P, tau_cap=10.0, stride=0)


def test_timeseries_unforced_bounded():
    params = SystemParams(y0=1.0, eps=0.0, z0=0.2)
    records, traj = timeseries_export(params, tau_cap=500.0, stride=2)
    assert traj.termination.kind is TerminationKind.REACHED_END
    assert np.max(np.abs(records[:, 1])) < 0.35


def test_timeseries_divergence_tail():
    records, traj = timeseries_export(
        SystemParams(1.0, 0.2, 0.2), tau_cap=600.0, stride=1
    )
    assert traj.termination.kind is TerminationKind.BLOW_UP
    assert np.abs(records[-1, 1]) > 1e3  # the tail reaches the divergence
