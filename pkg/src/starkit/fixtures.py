"""Reference polygons used by the tests, the CLI examples and the docs."""
from .models import ModelId
from .regions import GeodesicPolygon

SQUARE = GeodesicPolygon.from_coords(ModelId.EUCLIDEAN, [(0, 0), (1, 0), (1, 1), (0, 1)])

# reflex vertex at (1, 1); kernel is the unit square
LSHAPE = GeodesicPolygon.from_coords(
    ModelId.EUCLIDEAN, [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])

# notch [1, 2] x [1, 2]; the inner sides of the notch walls are disjoint
USHAPE = GeodesicPolygon.from_coords(
    ModelId.EUCLIDEAN, [(0, 0), (3, 0), (3, 2), (2, 2), (2, 1), (1, 1), (1, 2), (0, 2)])

HTRI = GeodesicPolygon.from_coords(ModelId.KLEIN, [(-0.6, -0.4), (0.7, -0.3), (0.0, 0.75)])

ALL = {"square": SQUARE, "lshape": LSHAPE, "ushape": USHAPE, "htri": HTRI}
