"""Numerical tolerances shared by every module.

All values are absolute chart-coordinate tolerances; scenes are expected to be
normalized to O(1) extent.  ``STARKIT_EPS`` overrides the on-geodesic band.
"""
import os

EPS_PT = 1e-12
EPS_ON = float(os.environ.get("STARKIT_EPS", "1e-9"))
EPS_BOUNDARY = 1e-9
EPS_ANGLE = 1e-7
# polygons with chart area below this are treated as empty regions
EPS_AREA = 1e-14
