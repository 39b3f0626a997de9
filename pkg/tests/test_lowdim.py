import math

import numpy as np
import pytest

from pyvol_constwidth import lowdim
from pyvol_constwidth.body import SQRT2, TWO_MINUS_SQRT2, BodySpec, contains, disk_segment_contains, radial_extent
from pyvol_constwidth.exceptions import InvalidParameterError
from pyvol_constwidth.volume import exact_volume

from .conftest import random_directions


def test_boundary_polyline_perimeter():
    poly = lowdim.boundary_polyline_2d(10_000)
    assert poly.perimeter() == pytest.approx(2.0 * math.pi, abs=1e-6)
    assert poly.is_ccw()
    assert poly.is_simple()


def test_boundary_polyline_layout():
    poly = lowdim.boundary_polyline_2d(5)
    assert poly.vertices.shape == (20, 2)
    assert len(poly.arc_tags) == 20
    assert poly.arc_tags[0] == "outer"
    assert poly.arc_tags[-1] == "mixed_center_e2"
    corners = [tuple(poly.vertices[i]) for i in (0, 5, 10, 15)]
    assert corners == [(SQRT2, 0.0), (0.0, SQRT2), (SQRT2 - 2.0, 0.0), (0.0, SQRT2 - 2.0)]


def test_boundary_polyline_vertices_on_boundary():
    poly = lowdim.boundary_polyline_2d(500)
    spec = BodySpec(2)
    assert np.all(contains(spec, poly.vertices, tol=1e-12))
    norms = np.linalg.norm(poly.vertices, axis=1)
    rho = radial_extent(spec, poly.vertices / norms[:, None])
    assert np.max(np.abs(rho - norms)) <= 1e-12


def test_boundary_polyline_rejects_few_points():
    with pytest.raises(InvalidParameterError):
        lowdim.boundary_polyline_2d(1)


@pytest.mark.parametrize("level", range(1, 8))
def test_mesh_is_watertight(level):
    mesh = lowdim.mesh_3d(level)
    f = 2 ** (level - 1)
    assert len(mesh.vertices) == 4 * f * f + 2
    assert len(mesh.faces) == 8 * f * f
    assert mesh.is_watertight()
    assert mesh.signed_volume() > 0.0


def test_mesh_vertices_on_boundary():
    mesh = lowdim.mesh_3d(4)
    norms = np.linalg.norm(mesh.vertices, axis=1)
    rho = radial_extent(BodySpec(3), mesh.vertices / norms[:, None])
    np.testing.assert_allclose(norms, rho, atol=1e-12)


def test_mesh_volume_converges():
    exact = exact_volume(3).volume
    errors = [abs(lowdim.mesh_3d(level).signed_volume() - exact) for level in range(4, 8)]
    assert all(b <= 0.5 * a for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 0.01 * exact


def test_mesh_width(rng):
    mesh = lowdim.mesh_3d(5)
    slack = 2.0 * mesh.max_edge_length()
    for theta in random_directions(rng, 1000, 3):
        assert abs(mesh.width(theta) - 2.0) <= slack


def test_mesh_rejects_level_zero():
    with pytest.raises(InvalidParameterError):
        lowdim.mesh_3d(0)


def test_obj_round_trip():
    mesh = lowdim.mesh_3d(3)
    data = lowdim.export_obj(mesh)
    assert isinstance(data, bytes)
    assert b"\r" not in data
    back = lowdim.parse_obj(data)
    assert back.vertices.shape == mesh.vertices.shape
    assert back.faces.shape == mesh.faces.shape
    np.testing.assert_array_equal(back.vertices, mesh.vertices)
    np.testing.assert_array_equal(back.faces, mesh.faces)
    assert back.is_watertight()


def test_obj_octant_groups():
    mesh = lowdim.mesh_3d(3)
    data = lowdim.export_obj(mesh, colorize_by_octant=True)
    text = data.decode("utf-8")
    assert text.count("\nusemtl ") == 8
    back = lowdim.parse_obj(data)
    assert len(back.groups) == 8
    assert sorted(back.groups) == sorted("octant_" + o for o in set(mesh.face_octants()))
    assert sum(len(v) for v in back.groups.values()) == len(mesh.faces)
    assert back.is_watertight()
    assert back.signed_volume() == pytest.approx(mesh.signed_volume())


def test_parse_obj_face_formats():
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1/1 2/2/2 3/3/3\n"
    mesh = lowdim.parse_obj(text)
    np.testing.assert_array_equal(mesh.faces, [[0, 1, 2]])
    assert mesh.groups is None
    with pytest.raises(InvalidParameterError):
        lowdim.parse_obj(text + "v 1 1 0\nf 1 2 3 4\n")


def test_write_obj(tmp_path):
    path = tmp_path / "m.obj"
    mesh = lowdim.mesh_3d(2)
    lowdim.write_obj(mesh, path)
    assert path.read_bytes() == lowdim.export_obj(mesh)


def test_disk_segment_plot_data():
    pts = lowdim.disk_segment_plot_data(50)
    assert len(pts) == 52
    assert pts[0] == (0.0, TWO_MINUS_SQRT2)
    assert pts[-1] == pts[0]
    assert pts[49] == (SQRT2, 0.0)
    for a, b in pts:
        assert disk_segment_contains(a, b)


def test_triangle_plot_data():
    assert lowdim.triangle_plot_data(1.5, 1.0) == [(0.0, 0.0), (1.5, 0.0), (0.0, 1.0), (0.0, 0.0)]
    with pytest.raises(InvalidParameterError):
        lowdim.triangle_plot_data(-1.0, 1.0)
