"""Smoke tests for the Python bindings.

These exercise one happy path through every exposed layer; the C++ test
suite carries the detailed property and oracle checks.
"""

import math

import pytest

import latgas


@pytest.fixture(scope="module")
def ts():
    return latgas.load_tileset("ammann16")


@pytest.fixture(scope="module")
def rule(ts):
    return latgas.CaRule(ts)


def test_tileset_gates(ts):
    assert len(ts) == 16
    assert ts.name == "ammann16"
    assert latgas.check_deterministic(ts, latgas.Direction.NW).deterministic
    assert latgas.check_deterministic(ts, latgas.Direction.SE).deterministic
    for p in range(1, 4):
        for q in range(1, 4):
            result = latgas.find_torus_tiling(ts, p, q)
            assert result.status == latgas.SearchStatus.ProvenAbsent


def test_tileset_from_text_and_errors():
    copy = latgas.tileset_from_text(latgas.ammann16_text(), "copy")
    assert len(copy) == 16
    assert copy.tile(0) == latgas.Tile(0, 1, 2, 2, 1)
    with pytest.raises(latgas.TilesetError):
        latgas.tileset_from_text("0 1 2\n")


def test_patch_search_and_trajectory(ts, rule):
    result = latgas.find_patch(ts, 12, 7)
    assert result.status == latgas.SearchStatus.Found
    patch = result.patch
    assert latgas.patch_is_valid(ts, patch)

    ref = latgas.reference_run_from_patch(patch, 6, 4)
    init = latgas.Config1D(
        ref.trajectory.rows[0], latgas.Boundary1D.feed_stream(ref.stream)
    )
    rerun = latgas.run1d(rule, init, 4)
    assert rerun.rows == ref.trajectory.rows

    blank = rule.alphabet.blank
    dirty = latgas.Config1D(list(ref.trajectory.rows[0]), init.boundary)
    dirty.cells = [blank if i == 3 else s for i, s in enumerate(dirty.cells)]
    out = latgas.run1d(rule, dirty, 2)
    assert out.at(2, 3) == blank and out.at(2, 1) == blank
    assert out.at(2, 4) == ref.trajectory.at(2, 4)


def test_stacking_commutes(rule, ts):
    result = latgas.find_patch(ts, 12, 7)
    ref = latgas.reference_run_from_patch(result.patch, 6, 4)
    x = latgas.Config1D(
        ref.trajectory.rows[0], latgas.Boundary1D.feed_stream(ref.stream)
    )
    left = latgas.stacked_step(rule, latgas.clone_config(x, 3, 4))
    right = latgas.clone_config(latgas.step1d(rule, x), 3, 4)
    assert left.cells_equal(right)

    flips = [latgas.Flip(1, 2, 3, (x.cells[3] + 1) % 17)]
    probe = latgas.erosion_probe(rule, x, 4, 4, flips, 4, margin=1)
    assert probe.recovered and probe.time == 1


def test_sampling_is_deterministic(rule):
    init = latgas.Config3D.filled(3, 3, 5, 0, latgas.BoundaryI.periodic())
    noise = latgas.NoiseParams(0.1, 17)
    a = latgas.sample_trajectory(rule, init, noise, 7, 6)
    b = latgas.sample_trajectory(rule, init, noise, 7, 6)
    c = latgas.sample_trajectory(rule, init, noise, 8, 6)
    assert a.cells == b.cells
    assert a.cells != c.cells

    errors = latgas.error_set(rule, a)
    assert errors.checked == 3 * 3 * 5 * 6
    assert 0 < len(errors.cells) < errors.checked

    clean = latgas.sample_trajectory(rule, init, latgas.NoiseParams(0.0, 17), 7, 6)
    assert len(latgas.error_set(rule, clean).cells) == 0

    array = a.numpy()
    assert array.shape == (7, 3, 3, 5)
    assert array[0].tolist() == clean.numpy()[0].tolist()


def test_gibbs_layer(rule):
    anchor = latgas.beta_to_epsilon(0.5, 2.0, 17)
    assert math.isclose(anchor.epsilon, 1.0 / 17.0, rel_tol=0, abs_tol=1e-12)
    assert math.isclose(
        2.0 * latgas.phi_match(0.5),
        anchor.alpha + latgas.phi_match(anchor.epsilon),
        abs_tol=1e-12,
    )

    init = latgas.Config3D.filled(2, 2, 2, 6, latgas.BoundaryI.periodic())
    window = latgas.sample_trajectory(rule, init, latgas.NoiseParams(0.2, 17), 5, 2)
    cond = latgas.gibbs_conditional(rule, window, latgas.Cell4(0, 0, 0, 1), 0.2)
    assert len(cond) == 17
    assert math.isclose(sum(cond), 1.0, abs_tol=1e-12)
    assert all(p >= 0 for p in cond)

    region = latgas.full_support_region(window)
    assert len(region) == 2 * 2 * 2 * 2
    energy = latgas.window_energy(rule, window, 0.2, 0.0, region)
    assert energy > 0

    with pytest.raises(latgas.TruncatedSupport):
        latgas.gibbs_conditional(rule, window, latgas.Cell4(0, 0, 0, 0), 0.2)


def test_analysis_layer(rule, ts):
    result = latgas.find_patch(ts, 20, 9)
    ref = latgas.reference_run_from_patch(result.patch, 8, 10)
    x = latgas.Config1D(
        ref.trajectory.rows[0], latgas.Boundary1D.feed_stream(ref.stream)
    )
    init = latgas.clone_config(x, 4, 4)
    clean = latgas.sample_trajectory(rule, init, latgas.NoiseParams(0.0, 17), 0, 10)
    noisy = latgas.sample_trajectory(rule, init, latgas.NoiseParams(0.01, 17), 3, 10)

    diff = latgas.disagreements(noisy, clean)
    assert 0 < diff.rate() < 0.5
    report = latgas.clusters(diff, 1, latgas.Metric.L1)
    assert report.total_cells == len(diff.cells)
    assert report.max_size >= 1

    verdict = latgas.sea_island_check(noisy, clean, 2, 10**9)
    assert verdict.report.total_cells == len(diff.cells)

    periods = latgas.periodicity_scan(clean, 2)
    by_shift = {tuple(e.p): e.status for e in periods.entries}
    assert by_shift[(1, 0, 0, 0)] == latgas.PeriodEntry.Status.Period
    assert by_shift[(0, 1, 0, 0)] == latgas.PeriodEntry.Status.Period
    assert by_shift[(0, 0, 1, 0)] == latgas.PeriodEntry.Status.Broken

    field = latgas.empirical_majority_field([clean, clean, noisy])
    assert field.modal == clean.cells
    assert min(field.frequency) >= 2.0 / 3.0 - 1e-12
