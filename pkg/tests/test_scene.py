import math

import pytest

from starkit.fixtures import HTRI, LSHAPE, USHAPE
from starkit.models import ModelId, Point
from starkit.regions import validate
from starkit.render import LAYERS, RenderSpec, build_overlays, render_svg
from starkit.scene import (
    KLEIN_RADIUS_CAP, Scene, SceneParseError, SceneValidationError, load_scene, random_simple,
    random_starshaped, save_scene,
)
from starkit.starshape import is_starshaped

E, K = ModelId.EUCLIDEAN, ModelId.KLEIN

LSHAPE_DOC = """# an L
model: euclidean
polygon: [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]

probes: {a: [1.8, 0.5], b: [0.5, 1.8]}
seed: 7
"""


def test_load_lshape_document():
    sc = load_scene(LSHAPE_DOC)
    assert sc.model is E and len(sc.polygon) == 6
    assert sc.polygon.coords == LSHAPE.coords
    assert sc.probes["a"].uv == (1.8, 0.5)
    assert sc.seed == 7


def test_round_trip_preserves_coordinates_exactly():
    sc = Scene(K, HTRI, {"p": Point(K, 0.1 / 3, -math.pi / 10)}, 11)
    back = load_scene(save_scene(sc))
    assert back.polygon.coords == HTRI.coords
    assert back.probes["p"].uv == sc.probes["p"].uv
    assert back.seed == 11
    assert save_scene(back) == save_scene(sc)


@pytest.mark.parametrize("seed", range(20))
def test_round_trip_of_generated_polygons(seed):
    A = random_simple(K, 9, seed)
    assert load_scene(save_scene(Scene(K, A))).polygon.coords == A.coords


def test_klein_domain_error():
    with pytest.raises(SceneValidationError, match="outside"):
        load_scene("model: hyperbolic-klein\npolygon: [[0, 0], [1, 0], [0, 0.5]]\n")


def test_invalid_polygon_lists_violations():
    with pytest.raises(SceneValidationError) as err:
        load_scene("model: euclidean\npolygon: [[0, 0], [1, 1], [1, 0], [0, 1]]\n")
    assert any("intersect" in v for v in err.value.violations)


@pytest.mark.parametrize("doc,line,col", [
    ("model: euclidean\npolygon: [[0, 0], [1, 0], [0, 1]\n", 2, None),
    ("polygon: [[0, 0], [1, 0], [0, 1]]\nmodel: euclidean\n", 1, 1),
    ("model: spherical\npolygon: [[0, 0], [1, 0], [0, 1]]\n", 1, 8),
    ("model: euclidean\npolygon: [[0, 0], [1, 0], [0, 1]]\nseed: x\n", 3, None),
    ("model: euclidean\npolygon: [[0, 0], [1, 0], [0, 1]]\ncolour: red\n", 3, 1),
    ("model: euclidean\n  oops\n", 2, 1),
])
def test_parse_errors_carry_positions(doc, line, col):
    with pytest.raises(SceneParseError) as err:
        load_scene(doc)
    assert err.value.line == line
    if col is not None:
        assert err.value.col == col


def test_json_error_column_points_into_line():
    with pytest.raises(SceneParseError) as err:
        load_scene("model: euclidean\npolygon: [[0, 0], [1, 0] [0, 1]]\n")
    assert err.value.col > len("polygon: ")


# -- generators ---------------------------------------------------------------

@pytest.mark.parametrize("model", [E, K])
def test_generators_are_deterministic(model):
    assert random_starshaped(model, 9, 5).coords == random_starshaped(model, 9, 5).coords
    assert random_simple(model, 9, 5).coords == random_simple(model, 9, 5).coords
    assert random_simple(model, 9, 5).coords != random_simple(model, 9, 6).coords


@pytest.mark.parametrize("model", [E, K])
def test_generated_polygons_are_valid_and_in_domain(model):
    for seed in range(40):
        for A in (random_starshaped(model, 3 + seed % 20, seed), random_simple(model, 3 + seed % 20, seed)):
            assert validate(A) == []
            if model is K:
                assert max(math.hypot(u, v) for u, v in A.coords) <= KLEIN_RADIUS_CAP + 1e-12


def test_triangles_from_radial_generator():
    for seed in range(20):
        A = random_starshaped(E, 3, seed)
        assert len(A) == 3 and is_starshaped(A)[0]


def test_random_simple_gives_both_kinds_over_many_seeds():
    verdicts = {is_starshaped(random_simple(E, 14, seed))[0] for seed in range(200)}
    assert verdicts == {True, False}


# -- rendering ----------------------------------------------------------------

def test_render_lshape_kernel_layer():
    sc = load_scene(LSHAPE_DOC)
    svg = render_svg(sc, spec=RenderSpec(layers=("polygon", "kernel")))
    assert svg.count("<path ") == 2
    assert 'id="layer-polygon"' in svg and 'id="layer-kernel"' in svg
    assert 'data-empty' not in svg
    assert 'version="1.1"' in svg


def test_render_empty_kernel_is_marked():
    sc = Scene(E, USHAPE)
    svg = render_svg(sc, spec=RenderSpec(layers=("polygon", "kernel")))
    assert 'id="layer-kernel" d="" data-empty="true"' in svg


def test_render_all_layers_in_fixed_order_and_deterministic():
    sc = load_scene(LSHAPE_DOC)
    a, b = render_svg(sc), render_svg(sc)
    assert a == b
    positions = [a.index(f'id="layer-{name}"') for name in LAYERS]
    assert positions == sorted(positions)
    ov = build_overlays(sc)
    assert len(ov.extremes) == 5 and len(ov.gaps) == 1


def test_render_klein_draws_disk():
    svg = render_svg(Scene(K, HTRI))
    assert '<circle id="disk"' in svg
