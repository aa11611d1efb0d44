"""Square drawing surface with analytic (SDF-based) antialiased primitives.

Coordinates are in "canvas units": the square spans [-1, 1] in both axes,
y pointing up, origin at the center.  One inch of physical output maps to
the full side, so a resolution of ``n`` renders an n-by-n pixel image.
Pixel centers sit on the symmetric grid ``(2k + 1 - n) / n`` which makes
quarter- and half-turn rotations of centered geometry exact at the pixel
level, not merely close.
"""

from __future__ import annotations

import io
from contextlib import contextmanager
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray
from PIL import Image, ImageColor

# Fraction of the side used as the rounded-corner radius of the card.
CORNER_RADIUS_FRACTION = 0.10
# Canvas side length in drawing units ([-1, 1] spans the square).
SIDE_UNITS = 2.0
# Edge softness in pixels: coverage ramps linearly over one pixel.
_AA_HALF = 0.5

ColorLike = "str | tuple[float, ...]"
SizeLike = "float | str"


def parse_color(spec) -> tuple[float, float, float, float]:
    """Normalize a color spec to float RGBA in [0, 1].

    Accepts CSS-style strings (names, ``#rrggbb``, ``#rrggbbaa``) or tuples
    of 3 or 4 floats already in [0, 1].
    """
    if isinstance(spec, str):
        rgba = ImageColor.getcolor(spec, "RGBA")
        return tuple(v / 255.0 for v in rgba)
    values = tuple(float(v) for v in spec)
    if len(values) == 3:
        values = values + (1.0,)
    if len(values) != 4:
        raise ValueError(f"color tuple must have 3 or 4 components, got {len(values)}")
    if any(v < 0.0 or v > 1.0 for v in values):
        raise ValueError(f"color components must lie in [0, 1], got {values}")
    return values


def parse_size(value) -> float:
    """Convert a stroke width or radius spec to canvas units.

    Floats pass through unchanged.  Strings of the form ``"30p"`` are read
    as thousandths of the canvas side, so ``"30p"`` is 3% of the side.
    """
    if isinstance(value, str):
        if not value.endswith("p"):
            raise ValueError(f"size string must end with 'p', got {value!r}")
        permille = float(value[:-1])
        return permille / 1000.0 * SIDE_UNITS
    size = float(value)
    if size < 0.0:
        raise ValueError(f"size must be non-negative, got {size}")
    return size


def pixel_centers(resolution: int) -> NDArray[np.float64]:
    """Pixel-center coordinates along one axis, ascending, symmetric about 0."""
    n = resolution
    return (2.0 * np.arange(n) + 1.0 - n) / n


@lru_cache(maxsize=8)
def rounded_square_mask(resolution: int) -> NDArray[np.float64]:
    """Alpha mask of the rounded-corner card, cached per resolution.

    Pixel centers outside the ideal rounded square get exactly 0 so the
    transparent margin is clean; the one-pixel ramp lives on the inside of
    the boundary.
    """
    n = resolution
    xs = pixel_centers(n)
    ax = np.abs(xs)
    rho = CORNER_RADIUS_FRACTION * SIDE_UNITS
    # Signed distance to a rounded square of half-extent 1 (units).
    qx = ax[np.newaxis, :] - (1.0 - rho)
    qy = ax[::-1][:, np.newaxis] - (1.0 - rho)
    outside = np.hypot(np.maximum(qx, 0.0), np.maximum(qy, 0.0))
    inside = np.minimum(np.maximum(qx, qy), 0.0)
    sdf_px = (outside + inside - rho) * (n / 2.0)
    mask = np.clip(-sdf_px, 0.0, 1.0)
    mask.setflags(write=False)
    return mask


def _rotation_matrix(degrees: float) -> NDArray[np.float64]:
    theta = np.deg2rad(degrees)
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


class Canvas:
    """Accumulates antialiased primitives into a premultiplied RGBA buffer."""

    def __init__(self, resolution: int, color="black"):
        if resolution < 4:
            raise ValueError(f"resolution must be at least 4, got {resolution}")
        self.resolution = int(resolution)
        self._rgb = np.zeros((resolution, resolution, 3))
        self._alpha = np.zeros((resolution, resolution))
        self._color = parse_color(color)
        self._rotation = np.eye(2)
        self._offset = np.zeros(2)
        self._xs = pixel_centers(resolution)
        self._ys = self._xs[::-1].copy()
        # Bounding box of everything painted so far (row0, row1, col0, col1);
        # pixels outside it are untouched and stay fully transparent, which
        # lets mask application and quantization skip most of the frame.
        self._dirty: tuple[int, int, int, int] | None = None

    # -- state ---------------------------------------------------------

    def set_color(self, color) -> None:
        self._color = parse_color(color)

    @contextmanager
    def translated(self, dx: float, dy: float):
        """Shift subsequent drawing by (dx, dy) in the current frame."""
        saved = self._offset.copy()
        self._offset = self._offset + self._rotation @ np.array([dx, dy])
        try:
            yield self
        finally:
            self._offset = saved

    @contextmanager
    def rotated(self, degrees: float):
        """Rotate subsequent drawing counterclockwise about the current origin."""
        saved = self._rotation.copy()
        self._rotation = self._rotation @ _rotation_matrix(degrees)
        try:
            yield self
        finally:
            self._rotation = saved

    def _transform(self, point) -> NDArray[np.float64]:
        return self._rotation @ np.asarray(point, dtype=float) + self._offset

    # -- rasterization helpers ----------------------------------------

    def _window(self, x0: float, x1: float, y0: float, y1: float):
        """Index ranges of pixels whose coverage could be nonzero."""
        n = self.resolution
        pad = (_AA_HALF + 1.0) * (2.0 / n)
        c0 = max(0, int(np.floor((x0 - pad + 1.0) * n / 2.0)))
        c1 = min(n, int(np.ceil((x1 + pad + 1.0) * n / 2.0)) + 1)
        r0 = max(0, int(np.floor((1.0 - (y1 + pad)) * n / 2.0)))
        r1 = min(n, int(np.ceil((1.0 - (y0 - pad)) * n / 2.0)) + 1)
        if c0 >= c1 or r0 >= r1:
            return None
        return slice(r0, r1), slice(c0, c1)

    def _paint(self, rows: slice, cols: slice, coverage: NDArray, color) -> None:
        rgba = self._color if color is None else parse_color(color)
        src_a = coverage * rgba[3]
        keep = 1.0 - src_a
        region_rgb = self._rgb[rows, cols]
        for ch in range(3):
            region_rgb[..., ch] = rgba[ch] * src_a + region_rgb[..., ch] * keep
        self._alpha[rows, cols] = src_a + self._alpha[rows, cols] * keep
        if self._dirty is None:
            self._dirty = (rows.start, rows.stop, cols.start, cols.stop)
        else:
            r0, r1, c0, c1 = self._dirty
            self._dirty = (
                min(r0, rows.start),
                max(r1, rows.stop),
                min(c0, cols.start),
                max(c1, cols.stop),
            )

    def _grid(self, rows: slice, cols: slice):
        return (
            self._xs[np.newaxis, cols],
            self._ys[rows, np.newaxis],
        )

    # -- primitives ----------------------------------------------------

    def line(self, p0, p1, width="30p", color=None) -> None:
        """Stroke a segment with round caps.

        The distance field is evaluated in midpoint form, so a segment whose
        transformed midpoint is the canvas center rasterizes exactly
        half-turn symmetric.
        """
        a = self._transform(p0)
        b = self._transform(p1)
        r = parse_size(width) / 2.0
        m = (a + b) / 2.0
        v = (b - a) / 2.0
        lo = np.minimum(a, b) - r
        hi = np.maximum(a, b) + r
        win = self._window(lo[0], hi[0], lo[1], hi[1])
        if win is None:
            return
        rows, cols = win
        gx, gy = self._grid(rows, cols)
        qx = gx - m[0]
        qy = gy - m[1]
        vv = float(v @ v)
        if vv == 0.0:
            dist = np.hypot(qx, qy) - r
        else:
            t = np.clip((qx * v[0] + qy * v[1]) / vv, -1.0, 1.0)
            dist = np.hypot(qx - t * v[0], qy - t * v[1]) - r
        cov = np.clip(_AA_HALF - dist * (self.resolution / 2.0), 0.0, 1.0)
        self._paint(rows, cols, cov, color)

    def disc(self, center, radius, color=None) -> None:
        """Fill a circle."""
        c = self._transform(center)
        r = float(radius)
        if r < 0.0:
            raise ValueError(f"radius must be non-negative, got {r}")
        win = self._window(c[0] - r, c[0] + r, c[1] - r, c[1] + r)
        if win is None:
            return
        rows, cols = win
        gx, gy = self._grid(rows, cols)
        dist = np.hypot(gx - c[0], gy - c[1]) - r
        cov = np.clip(_AA_HALF - dist * (self.resolution / 2.0), 0.0, 1.0)
        self._paint(rows, cols, cov, color)

    def circle(self, center, radius, width="15p", color=None) -> None:
        """Stroke a circle outline."""
        c = self._transform(center)
        r = float(radius)
        half_w = parse_size(width) / 2.0
        reach = r + half_w
        win = self._window(c[0] - reach, c[0] + reach, c[1] - reach, c[1] + reach)
        if win is None:
            return
        rows, cols = win
        gx, gy = self._grid(rows, cols)
        dist = np.abs(np.hypot(gx - c[0], gy - c[1]) - r) - half_w
        cov = np.clip(_AA_HALF - dist * (self.resolution / 2.0), 0.0, 1.0)
        self._paint(rows, cols, cov, color)

    def polygon(self, points, color=None) -> None:
        """Fill a simple polygon (even-odd rule, exact edge distances)."""
        pts = [self._transform(p) for p in points]
        if len(pts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        arr = np.array(pts)
        win = self._window(
            arr[:, 0].min(), arr[:, 0].max(), arr[:, 1].min(), arr[:, 1].max()
        )
        if win is None:
            return
        rows, cols = win
        gx, gy = self._grid(rows, cols)
        d2 = np.full((gy.shape[0], gx.shape[1]), np.inf)
        inside = np.zeros((gy.shape[0], gx.shape[1]), dtype=bool)
        m = len(pts)
        for i in range(m):
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % m]
            ex, ey = bx - ax, by - ay
            px = gx - ax
            py = gy - ay
            ee = ex * ex + ey * ey
            if ee > 0.0:
                h = np.clip((px * ex + py * ey) / ee, 0.0, 1.0)
                ddx = px - h * ex
                ddy = py - h * ey
            else:
                ddx, ddy = px, py
            d2 = np.minimum(d2, ddx * ddx + ddy * ddy)
            if ey != 0.0:
                straddle = (ay > gy) != (by > gy)
                xi = ax + (gy - ay) * ex / ey
                inside ^= straddle & (gx < xi)
        dist = np.where(inside, -np.sqrt(d2), np.sqrt(d2))
        cov = np.clip(_AA_HALF - dist * (self.resolution / 2.0), 0.0, 1.0)
        self._paint(rows, cols, cov, color)

    # -- output --------------------------------------------------------

    def apply_card_mask(self) -> None:
        """Clip everything drawn so far to the rounded-corner card shape."""
        if self._dirty is None:
            return
        mask = rounded_square_mask(self.resolution)
        r0, r1, c0, c1 = self._dirty
        rows, cols = slice(r0, r1), slice(c0, c1)
        self._alpha[rows, cols] *= mask[rows, cols]
        self._rgb[rows, cols] *= mask[rows, cols, np.newaxis]

    def to_rgba(self) -> NDArray[np.uint8]:
        """Quantize to straight-alpha 8-bit RGBA (round half away from zero)."""
        out = np.zeros((self.resolution, self.resolution, 4), dtype=np.uint8)
        if self._dirty is None:
            return out
        r0, r1, c0, c1 = self._dirty
        rows, cols = slice(r0, r1), slice(c0, c1)
        alpha = self._alpha[rows, cols]
        # Premultiplied rgb never exceeds alpha, so values stay in [0, 255.5)
        # after scaling and the uint8 cast cannot wrap.
        factor = np.zeros_like(alpha)
        np.divide(255.0, alpha, out=factor, where=alpha > 0.0)
        rgb = self._rgb[rows, cols] * factor[..., np.newaxis]
        rgb += 0.5
        out[rows, cols, :3] = rgb
        a = alpha * 255.0
        a += 0.5
        out[rows, cols, 3] = a
        return out


def encode_png(rgba: NDArray[np.uint8]) -> bytes:
    """Serialize an RGBA array to PNG bytes (fixed encoder settings)."""
    if rgba.ndim != 3 or rgba.shape[2] != 4 or rgba.dtype != np.uint8:
        raise ValueError("expected a uint8 array of shape (h, w, 4)")
    image = Image.fromarray(rgba, mode="RGBA")
    buf = io.BytesIO()
    # Level 2 keeps encoding fast with nearly the same size as the zlib
    # default on these flat-color images; fixed so archives are stable.
    image.save(buf, format="PNG", compress_level=2)
    return buf.getvalue()


def decode_png(data: bytes) -> NDArray[np.uint8]:
    """Read PNG bytes back into a uint8 RGBA array."""
    with Image.open(io.BytesIO(data)) as image:
        return np.asarray(image.convert("RGBA"), dtype=np.uint8)


def png_dimensions(data: bytes) -> tuple[int, int]:
    """Width and height of a PNG without decoding the pixel data."""
    with Image.open(io.BytesIO(data)) as image:
        return image.size
