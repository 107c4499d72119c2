import math

import numpy as np
from hypothesis import settings, strategies as st

from starkit.models import ModelId, Point

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

MODELS = list(ModelId)


@st.composite
def points(draw, model: ModelId, radius: float = 0.9):
    if model is ModelId.KLEIN:
        r = radius * math.sqrt(draw(st.floats(0.0, 1.0)))
        t = draw(st.floats(0.0, 2 * math.pi))
        return Point(model, r * math.cos(t), r * math.sin(t))
    u = draw(st.floats(-10.0, 10.0, allow_nan=False))
    v = draw(st.floats(-10.0, 10.0, allow_nan=False))
    return Point(model, u, v)


def random_points(model: ModelId, rng: np.random.Generator, k: int, radius: float = 0.9):
    """k points; Klein ones uniform in the chart disk of the given radius."""
    if model is ModelId.KLEIN:
        r = radius * np.sqrt(rng.uniform(size=k))
        t = rng.uniform(0, 2 * math.pi, k)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=1)
    return rng.uniform(-10.0, 10.0, (k, 2))
