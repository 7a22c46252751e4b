import math

import pytest

from assistlab.assist import (
    AssistConfig,
    AssistMode,
    apply_assist,
    gravity_map_influence,
    interpolation_prediction,
)
from assistlab.geometry import TargetRect, Vec2
from assistlab.rng import PortableRng

TOL = 1e-9
PROP_TOL = 1e-6


def assert_vec_close(got: Vec2, want: Vec2, tol: float = TOL) -> None:
    assert abs(got.x - want.x) <= tol and abs(got.y - want.y) <= tol, f"{got} != {want}"


def _rotate90(v: Vec2) -> Vec2:
    return Vec2(-v.y, v.x)


def _rotate90_rect(rect: TargetRect) -> TargetRect:
    a = _rotate90(Vec2(rect.x, rect.y))
    b = _rotate90(Vec2(rect.right, rect.bottom))
    return TargetRect(
        min(a.x, b.x), min(a.y, b.y), abs(b.x - a.x), abs(b.y - a.y), id=rect.id
    )


def _random_rect(rng: PortableRng, span: float = 300.0) -> TargetRect:
    return TargetRect(
        rng.uniform(-span, span),
        rng.uniform(-span, span),
        rng.uniform(1.0, 80.0),
        rng.uniform(1.0, 80.0),
    )


# -- config validation --------------------------------------------------------


def test_config_rejects_bad_values() -> None:
    with pytest.raises(ValueError):
        AssistConfig(influence=1.0)
    with pytest.raises(ValueError):
        AssistConfig(influence=-0.1)
    with pytest.raises(ValueError):
        AssistConfig(prediction_steps=0)
    with pytest.raises(ValueError):
        AssistConfig(influence_distance=0.0)
    with pytest.raises(ValueError):
        AssistConfig(assist_gain=-1.0)


# -- gravity map: worked examples --------------------------------------------


def test_gravity_worked_example() -> None:
    # d=5, ratio 0.5, direction (1,0), falloff 1-0.25
    result = gravity_map_influence([TargetRect(10.0, 0.0, 2.0, 2.0)], Vec2(5.0, 1.0), 10.0)
    assert_vec_close(result, Vec2(0.75, 0.0))


def test_gravity_inside_target_returns_zero() -> None:
    result = gravity_map_influence([TargetRect(10.0, 0.0, 2.0, 2.0)], Vec2(11.0, 1.0), 10.0)
    assert result == Vec2(0.0, 0.0)


def test_gravity_no_targets() -> None:
    assert gravity_map_influence([], Vec2(123.0, -4.0), 10.0) == Vec2(0.0, 0.0)


def test_gravity_all_targets_beyond_distance() -> None:
    targets = [TargetRect(100.0, 0.0, 2.0, 2.0), TargetRect(-102.0, 0.0, 2.0, 2.0)]
    result = gravity_map_influence(targets, Vec2(0.0, 1.0), 10.0)
    assert result == Vec2(0.0, 0.0)


def test_gravity_boundary_point_contributes_nothing_but_scan_continues() -> None:
    # p sits on the first rect's edge (d=0, not interior); the second rect
    # still pulls.
    touching = TargetRect(0.0, -1.0, 2.0, 2.0)
    pulling = TargetRect(7.0, -1.0, 2.0, 2.0)
    result = gravity_map_influence([touching, pulling], Vec2(0.0, 0.0), 10.0)
    expected = Vec2(1.0, 0.0) * (1.0 - (7.0 / 10.0) ** 2)
    assert_vec_close(result, expected)


# -- gravity map: properties --------------------------------------------------


def test_gravity_inside_any_target_always_zero() -> None:
    rng = PortableRng(2001)
    for _ in range(1000):
        rects = [_random_rect(rng) for _ in range(3)]
        inside = rects[int(rng.uniform(0.0, 3.0))]
        p = Vec2(
            rng.uniform(inside.x + 1e-6, inside.right - 1e-6),
            rng.uniform(inside.y + 1e-6, inside.bottom - 1e-6),
        )
        assert gravity_map_influence(rects, p, 50.0) == Vec2(0.0, 0.0)


def test_gravity_falloff_zero_at_boundary_distance() -> None:
    rng = PortableRng(2002)
    for _ in range(1000):
        rect = _random_rect(rng)
        distance = rng.uniform(10.0, 400.0)
        p = Vec2(rect.x - distance, rng.uniform(rect.y, rect.bottom))
        result = gravity_map_influence([rect], p, distance)
        assert result.length() <= PROP_TOL


def test_gravity_magnitude_strictly_decreases_with_distance() -> None:
    rng = PortableRng(2003)
    for _ in range(1000):
        rect = _random_rect(rng)
        influence_distance = rng.uniform(50.0, 300.0)
        d1 = rng.uniform(0.5, influence_distance - 1.0)
        d2 = rng.uniform(d1 + 0.5, influence_distance)
        y = rng.uniform(rect.y, rect.bottom)
        m1 = gravity_map_influence([rect], Vec2(rect.x - d1, y), influence_distance).length()
        m2 = gravity_map_influence([rect], Vec2(rect.x - d2, y), influence_distance).length()
        assert 0.0 < m1 < 1.0
        assert m2 < m1 + PROP_TOL


def test_gravity_bounded_by_count_within_range() -> None:
    rng = PortableRng(2004)
    for _ in range(1000):
        rects = [_random_rect(rng) for _ in range(4)]
        p = Vec2(rng.uniform(-400.0, 400.0), rng.uniform(-400.0, 400.0))
        influence_distance = rng.uniform(20.0, 200.0)
        result = gravity_map_influence(rects, p, influence_distance)
        in_range = sum(
            1
            for r in rects
            if p.distance_to(Vec2(min(max(p.x, r.x), r.right), min(max(p.y, r.y), r.bottom)))
            <= influence_distance
        )
        assert result.length() <= in_range + PROP_TOL


def test_gravity_translation_invariance() -> None:
    rng = PortableRng(2005)
    for _ in range(1000):
        rects = [_random_rect(rng) for _ in range(2)]
        p = Vec2(rng.uniform(-400.0, 400.0), rng.uniform(-400.0, 400.0))
        shift = Vec2(rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0))
        moved = [
            TargetRect(r.x + shift.x, r.y + shift.y, r.width, r.height, id=r.id) for r in rects
        ]
        base = gravity_map_influence(rects, p, 120.0)
        shifted = gravity_map_influence(moved, p + shift, 120.0)
        assert_vec_close(shifted, base, PROP_TOL)


def test_gravity_rotation_equivariance_quarter_turns() -> None:
    rng = PortableRng(2006)
    for _ in range(1000):
        rects = [_random_rect(rng) for _ in range(2)]
        p = Vec2(rng.uniform(-400.0, 400.0), rng.uniform(-400.0, 400.0))
        base = gravity_map_influence(rects, p, 150.0)
        rotated = gravity_map_influence([_rotate90_rect(r) for r in rects], _rotate90(p), 150.0)
        assert_vec_close(rotated, _rotate90(base), PROP_TOL)


# -- interpolation: worked examples -------------------------------------------


def test_interpolation_aligned_moves_straight_at_target() -> None:
    points = interpolation_prediction(Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(5.0, 0.0), 0.8, 1)
    assert len(points) == 2
    assert_vec_close(points[0], Vec2(1.0, 0.0))
    assert_vec_close(points[1], Vec2(1.0, 0.0))


def test_interpolation_orthogonal_keeps_free_control() -> None:
    points = interpolation_prediction(Vec2(0.0, 0.0), Vec2(0.0, 1.0), Vec2(5.0, 0.0), 0.8, 1)
    assert_vec_close(points[0], Vec2(0.0, 1.0))
    assert_vec_close(points[1], Vec2(0.0, 1.0))


def test_interpolation_zero_move_vec_appends_base() -> None:
    points = interpolation_prediction(Vec2(3.0, 4.0), Vec2(0.0, 0.0), Vec2(5.0, 0.0), 0.8, 1)
    assert points == [Vec2(3.0, 4.0), Vec2(3.0, 4.0)]


def test_interpolation_zero_target_vec_appends_base() -> None:
    points = interpolation_prediction(Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 0.0), 0.8, 1)
    assert points == [Vec2(1.0, 0.0), Vec2(0.0, 0.0)]


# -- interpolation: properties ------------------------------------------------


def _random_nonzero(rng: PortableRng, span: float) -> Vec2:
    while True:
        v = Vec2(rng.uniform(-span, span), rng.uniform(-span, span))
        if v.length() > 1e-6:
            return v


def test_interpolation_length_is_number_plus_one() -> None:
    rng = PortableRng(3001)
    for _ in range(1000):
        number = 1 + int(rng.uniform(0.0, 8.0))
        points = interpolation_prediction(
            _random_nonzero(rng, 200.0),
            _random_nonzero(rng, 30.0),
            _random_nonzero(rng, 200.0),
            rng.uniform(0.0, 0.99),
            number,
        )
        assert len(points) == number + 1


def test_interpolation_dead_zone_is_exact() -> None:
    # Alignment at or below the threshold: heading must stay the raw
    # movement direction, step capped by both magnitudes.
    rng = PortableRng(3002)
    checked = 0
    while checked < 1000:
        start = Vec2(rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0))
        move = _random_nonzero(rng, 40.0)
        target = start + _random_nonzero(rng, 300.0)
        influence = rng.uniform(0.3, 0.95)
        to_target = target - start
        alignment = to_target.normalized().dot(move.normalized())
        if alignment > influence:
            continue
        checked += 1
        points = interpolation_prediction(start, move, target, influence, 1)
        step = min(to_target.length(), move.length())
        expected = start + move.normalized() * step
        assert_vec_close(points[1], expected, PROP_TOL)


def test_interpolation_full_alignment_heads_at_target() -> None:
    rng = PortableRng(3003)
    for _ in range(1000):
        start = Vec2(rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0))
        direction = _random_nonzero(rng, 1.0).normalized()
        distance = rng.uniform(5.0, 400.0)
        target = start + direction * distance
        speed = rng.uniform(0.5, 30.0)
        points = interpolation_prediction(start, direction * speed, target, 0.8, 1)
        expected = start + direction * min(distance, speed)
        assert_vec_close(points[1], expected, PROP_TOL)


def test_interpolation_translation_equivariance() -> None:
    rng = PortableRng(3004)
    for _ in range(1000):
        start = Vec2(rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0))
        move = _random_nonzero(rng, 25.0)
        target = Vec2(rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0))
        shift = Vec2(rng.uniform(-300.0, 300.0), rng.uniform(-300.0, 300.0))
        influence = rng.uniform(0.0, 0.95)
        number = 1 + int(rng.uniform(0.0, 4.0))
        base = interpolation_prediction(start, move, target, influence, number)
        moved = interpolation_prediction(start + shift, move, target + shift, influence, number)
        for a, b in zip(base, moved):
            assert_vec_close(b, a + shift, PROP_TOL)


def test_interpolation_rotation_equivariance_quarter_turns() -> None:
    rng = PortableRng(3005)
    for _ in range(1000):
        start = Vec2(rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0))
        move = _random_nonzero(rng, 25.0)
        target = Vec2(rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0))
        influence = rng.uniform(0.0, 0.95)
        base = interpolation_prediction(start, move, target, influence, 1)
        rotated = interpolation_prediction(
            _rotate90(start), _rotate90(move), _rotate90(target), influence, 1
        )
        for a, b in zip(base, rotated):
            assert_vec_close(b, _rotate90(a), PROP_TOL)


def test_interpolation_second_step_bases_off_seed_point() -> None:
    # The base index walks two elements back, so step 2 starts from
    # start+move_vec, not from the first prediction.
    start = Vec2(0.0, 0.0)
    move = Vec2(2.0, 0.0)
    target = Vec2(10.0, 0.0)
    points = interpolation_prediction(start, move, target, 0.8, 2)
    assert len(points) == 3
    assert_vec_close(points[0], Vec2(2.0, 0.0))
    assert_vec_close(points[1], Vec2(2.0, 0.0))  # first prediction, base (0,0)
    assert_vec_close(points[2], Vec2(4.0, 0.0))  # second prediction, base (2,0)


# -- apply_assist -------------------------------------------------------------


def test_apply_assist_none_is_identity() -> None:
    config = AssistConfig(mode=AssistMode.NONE)
    delta = Vec2(2.0, 3.0)
    targets = [TargetRect(0.0, 0.0, 10.0, 10.0)]
    assert apply_assist(config, Vec2(5.0, 5.0), delta, targets) == delta


def test_apply_assist_gravity_worked_example() -> None:
    config = AssistConfig(mode=AssistMode.GRAVITY_MAP, influence_distance=10.0, assist_gain=1.0)
    result = apply_assist(
        config, Vec2(5.0, 1.0), Vec2(1.0, 0.0), [TargetRect(10.0, 0.0, 2.0, 2.0)]
    )
    assert_vec_close(result, Vec2(1.75, 0.0))


def test_apply_assist_gravity_idle_input_stays_idle() -> None:
    config = AssistConfig(mode=AssistMode.GRAVITY_MAP, influence_distance=100.0)
    result = apply_assist(
        config, Vec2(5.0, 1.0), Vec2(0.0, 0.0), [TargetRect(10.0, 0.0, 2.0, 2.0)]
    )
    assert result == Vec2(0.0, 0.0)


def test_apply_assist_interpolation_worked_example() -> None:
    config = AssistConfig(mode=AssistMode.INTERPOLATION, influence=0.8)
    result = apply_assist(
        config, Vec2(0.0, 0.0), Vec2(1.0, 0.0), [TargetRect(4.0, -1.0, 2.0, 2.0)]
    )
    assert_vec_close(result, Vec2(1.0, 0.0))


def test_apply_assist_interpolation_without_targets_passes_through() -> None:
    config = AssistConfig(mode=AssistMode.INTERPOLATION)
    assert apply_assist(config, Vec2(1.0, 2.0), Vec2(3.0, -4.0), []) == Vec2(3.0, -4.0)


def test_apply_assist_interpolation_picks_nearest_target_lowest_id_tie() -> None:
    config = AssistConfig(mode=AssistMode.INTERPOLATION, influence=0.8)
    near = TargetRect(9.0, -1.0, 2.0, 2.0, id="b")
    tied = TargetRect(-11.0, -1.0, 2.0, 2.0, id="a")
    far = TargetRect(50.0, -1.0, 2.0, 2.0, id="c")
    # near and tied are both 10 away; "a" wins the tie, so the aligned
    # direction is -x.
    result = apply_assist(config, Vec2(0.0, 0.0), Vec2(-1.0, 0.0), [near, tied, far])
    assert_vec_close(result, Vec2(-1.0, 0.0))
    # moving toward "b" while "a" is the chosen target: orthogonal-ish case
    # keeps free control, still moves +x by the raw delta
    result = apply_assist(config, Vec2(0.0, 0.0), Vec2(1.0, 0.0), [near, tied, far])
    assert_vec_close(result, Vec2(1.0, 0.0))


def test_apply_assist_random_none_identity_property() -> None:
    rng = PortableRng(4001)
    config = AssistConfig(mode=AssistMode.NONE)
    for _ in range(1000):
        cursor = Vec2(rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0))
        delta = Vec2(rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0))
        targets = [_random_rect(rng)]
        assert apply_assist(config, cursor, delta, targets) == delta


def test_apply_assist_random_gravity_zero_in_zero_out_property() -> None:
    rng = PortableRng(4002)
    config = AssistConfig(mode=AssistMode.GRAVITY_MAP, influence_distance=200.0)
    zero = Vec2(0.0, 0.0)
    for _ in range(1000):
        cursor = Vec2(rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0))
        targets = [_random_rect(rng) for _ in range(3)]
        assert apply_assist(config, cursor, zero, targets) == zero
