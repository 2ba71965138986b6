"""Log-odds occupancy grid built from range scans.

Cells along each ray up to the hit are lowered by L_FREE, the hit cell (when
the ray actually hit something) is raised by L_OCC, and everything clamps to
+-L_CLAMP. Updates are additive, so the rays of one scan can be applied in
any order with the same result.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .geometry import Pose2D
from .world import LaserScan

L_FREE = -0.4
L_OCC = 0.85
L_CLAMP = 10.0
P_OCCUPIED = 0.65
P_FREE = 0.35

# additive traversal samples per cell; 3 keeps corner cells from being skipped
_SAMPLES_PER_CELL = 3.0


class OccupancyGrid:
    def __init__(self, width_m: float, height_m: float, resolution: float = 0.1):
        self.resolution = resolution
        self.nx = int(round(width_m / resolution))
        self.ny = int(round(height_m / resolution))
        self.logodds = np.zeros((self.ny, self.nx))
        self.updates = 0

    # ---- coordinates ----
    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        return (int(math.floor(x / self.resolution)),
                int(math.floor(y / self.resolution)))

    def center_of(self, ix: int, iy: int) -> tuple[float, float]:
        return ((ix + 0.5) * self.resolution, (iy + 0.5) * self.resolution)

    def in_grid(self, ix, iy):
        return (ix >= 0) & (ix < self.nx) & (iy >= 0) & (iy < self.ny)

    # ---- update ----
    def update(self, pose: Pose2D, scan: LaserScan) -> None:
        res = self.resolution
        step = res / _SAMPLES_PER_CELL
        ranges = scan.ranges
        n = ranges.shape[0]
        ang = pose.theta + scan.bearings()
        cos = np.cos(ang)
        sin = np.sin(ang)

        # free-space samples stop half a cell short of the hit point
        free_len = np.maximum(ranges - 0.5 * res, 0.0)
        m = int(math.ceil(scan.range_max / step)) + 1
        ts = np.arange(m) * step
        px = pose.x + cos[:, None] * ts[None, :]
        py = pose.y + sin[:, None] * ts[None, :]
        live = ts[None, :] < free_len[:, None]
        ix = np.floor(px / res).astype(np.int64)
        iy = np.floor(py / res).astype(np.int64)
        live &= self.in_grid(ix, iy)
        lin = iy * self.nx + ix
        # drop consecutive repeats so one ray touches each cell once
        first = np.ones_like(lin, dtype=bool)
        first[:, 1:] = lin[:, 1:] != lin[:, :-1]
        sel = live & first
        flat = self.logodds.ravel()
        np.add.at(flat, lin[sel], L_FREE)

        hit = ranges < scan.range_max - 1e-9
        if np.any(hit):
            hx = pose.x + cos[hit] * ranges[hit]
            hy = pose.y + sin[hit] * ranges[hit]
            hix = np.floor(hx / res).astype(np.int64)
            hiy = np.floor(hy / res).astype(np.int64)
            ok = self.in_grid(hix, hiy)
            np.add.at(flat, hiy[ok] * self.nx + hix[ok], L_OCC)

        np.clip(flat, -L_CLAMP, L_CLAMP, out=flat)
        self.logodds = flat.reshape(self.ny, self.nx)
        self.updates += 1

    # ---- views ----
    def probabilities(self) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-self.logodds))

    def occupied_mask(self) -> np.ndarray:
        return self.logodds >= math.log(P_OCCUPIED / (1.0 - P_OCCUPIED))

    def free_mask(self) -> np.ndarray:
        return self.logodds <= math.log(P_FREE / (1.0 - P_FREE))

    def unknown_mask(self) -> np.ndarray:
        return ~(self.occupied_mask() | self.free_mask())

    def inflated_occupied(self, radius: float) -> np.ndarray:
        """Occupied mask dilated by a disc of `radius` meters."""
        occ = self.occupied_mask()
        rc = int(math.ceil(radius / self.resolution))
        if rc <= 0:
            return occ
        out = occ.copy()
        r2 = (radius / self.resolution) ** 2
        for dy in range(-rc, rc + 1):
            for dx in range(-rc, rc + 1):
                if dx == 0 and dy == 0:
                    continue
                if dx * dx + dy * dy > r2:
                    continue
                src = occ[max(0, -dy):self.ny - max(0, dy),
                          max(0, -dx):self.nx - max(0, dx)]
                out[max(0, dy):self.ny - max(0, -dy),
                    max(0, dx):self.nx - max(0, -dx)] |= src
        return out

    # ---- export ----
    def save_pgm(self, path: str | Path) -> None:
        """Write the grid as binary PGM plus a JSON sidecar with the geometry.

        Occupied pixels are black, free pixels near-white, unknown mid-gray;
        row 0 of the image is the top of the map.
        """
        path = Path(path)
        p = self.probabilities()
        img = np.full((self.ny, self.nx), 205, dtype=np.uint8)
        img[p >= P_OCCUPIED] = 0
        img[p <= P_FREE] = 254
        img = img[::-1, :]
        with open(path, "wb") as f:
            f.write(f"P5\n{self.nx} {self.ny}\n255\n".encode("ascii"))
            f.write(img.tobytes())
        sidecar = {
            "image": path.name,
            "resolution": self.resolution,
            "origin": [0.0, 0.0, 0.0],
            "width": self.nx,
            "height": self.ny,
            "occupied_thresh": P_OCCUPIED,
            "free_thresh": P_FREE,
        }
        with open(path.with_suffix(".json"), "w") as f:
            json.dump(sidecar, f, indent=2)
            f.write("\n")
