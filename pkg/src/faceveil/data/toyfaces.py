"""Procedural face renderer for the desk-scale identity set.

Faces are parametric cartoons drawn at a supersampled resolution and
downsampled for anti-aliasing. Geometry is anchored to the five-point
alignment template, so rendered crops are aligned by construction and the
renderer can emit exact landmarks and per-region ground-truth masks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, ImageDraw

# Canonical five-point layout in unit coordinates (fractions of crop size),
# matching the alignment template used by the pipeline.
EYE_Y = 0.460
EYE_DX = 0.157
NOSE_Y = 0.640
MOUTH_Y = 0.824
MOUTH_DX = 0.130

REGION_NAMES = ("eyebrows", "eyes", "nose", "mouth", "skin")

_SKIN_BASES = np.array(
    [
        [0.96, 0.84, 0.72],
        [0.88, 0.72, 0.56],
        [0.76, 0.58, 0.44],
        [0.62, 0.46, 0.34],
        [0.46, 0.33, 0.25],
    ]
)
_IRIS_COLORS = np.array(
    [
        [0.35, 0.22, 0.12],
        [0.20, 0.35, 0.55],
        [0.22, 0.42, 0.28],
        [0.40, 0.40, 0.42],
    ]
)
_HAIR_COLORS = np.array(
    [
        [0.08, 0.07, 0.06],
        [0.30, 0.20, 0.12],
        [0.55, 0.42, 0.22],
        [0.78, 0.65, 0.38],
        [0.45, 0.18, 0.10],
        [0.65, 0.65, 0.66],
    ]
)


@dataclass
class FaceIdentity:
    """Per-identity appearance parameters; stable across images of one person."""

    skin: np.ndarray
    face_w: float
    face_h: float
    face_cy: float
    eye_y: float
    eye_dx: float
    eye_r: float
    eye_aspect: float
    iris: np.ndarray
    iris_scale: float
    brow_dy: float
    brow_len: float
    brow_th: float
    brow_tilt: float
    brow_color: np.ndarray
    nose_y: float
    nose_w: float
    nose_top: float
    mouth_y: float
    mouth_dx: float
    mouth_th: float
    lip_color: np.ndarray
    hair_style: str
    hair_color: np.ndarray
    hairline: float
    glasses: bool
    glasses_color: np.ndarray


@dataclass
class FaceVariation:
    """Per-image nuisance parameters: pose jitter, expression, lighting, scene."""

    rot: float = 0.0
    scale: float = 1.0
    shift: tuple[float, float] = (0.0, 0.0)
    smile: float = 0.0
    eye_open: float = 1.0
    brow_raise: float = 0.0
    brightness: float = 1.0
    light_strength: float = 0.0
    light_angle: float = 0.0
    bg_top: np.ndarray = field(default_factory=lambda: np.array([0.55, 0.60, 0.70]))
    bg_bottom: np.ndarray = field(default_factory=lambda: np.array([0.45, 0.50, 0.58]))
    noise_sigma: float = 0.0
    noise_seed: int = 0


@dataclass
class RenderedFace:
    """A rendered crop plus its exact annotation."""

    image: np.ndarray  # (S, S, 3) float32 in [0, 1]
    landmarks: np.ndarray  # (5, 2) float32, pixel coords: eyes, nose tip, mouth corners
    region_masks: np.ndarray  # (5, S, S) uint8 in {0, 1}, REGION_NAMES order
    silhouette: np.ndarray  # (S, S) uint8, face+hair support for compositing


def sample_identity(rng: np.random.Generator) -> FaceIdentity:
    skin = _SKIN_BASES[rng.integers(len(_SKIN_BASES))] + rng.uniform(-0.04, 0.04, 3)
    hair_color = _HAIR_COLORS[rng.integers(len(_HAIR_COLORS))] + rng.uniform(-0.03, 0.03, 3)
    brow_color = hair_color * rng.uniform(0.55, 0.85)
    lip_base = np.array([0.70, 0.30, 0.32])
    lip_color = lip_base * rng.uniform(0.75, 1.1) + (skin - lip_base) * rng.uniform(0.0, 0.35)
    return FaceIdentity(
        skin=np.clip(skin, 0.05, 0.99),
        face_w=rng.uniform(0.26, 0.345),
        face_h=rng.uniform(0.38, 0.44),
        face_cy=rng.uniform(0.53, 0.57),
        eye_y=EYE_Y + rng.uniform(-0.018, 0.018),
        eye_dx=rng.uniform(0.138, 0.172),
        eye_r=rng.uniform(0.052, 0.080),
        eye_aspect=rng.uniform(0.50, 0.72),
        iris=np.clip(_IRIS_COLORS[rng.integers(len(_IRIS_COLORS))] + rng.uniform(-0.05, 0.05, 3), 0, 1),
        iris_scale=rng.uniform(0.42, 0.58),
        brow_dy=rng.uniform(0.055, 0.092),
        brow_len=rng.uniform(0.065, 0.105),
        brow_th=rng.uniform(0.013, 0.030),
        brow_tilt=rng.uniform(-0.22, 0.22),
        brow_color=np.clip(brow_color, 0.02, 0.9),
        nose_y=NOSE_Y + rng.uniform(-0.025, 0.030),
        nose_w=rng.uniform(0.034, 0.062),
        nose_top=rng.uniform(0.50, 0.54),
        mouth_y=MOUTH_Y + rng.uniform(-0.022, 0.022),
        mouth_dx=rng.uniform(0.095, 0.150),
        mouth_th=rng.uniform(0.020, 0.042),
        lip_color=np.clip(lip_color, 0.05, 0.95),
        hair_style=str(rng.choice(["bald", "cap", "side", "long"], p=[0.12, 0.38, 0.25, 0.25])),
        hair_color=np.clip(hair_color, 0.02, 0.95),
        hairline=rng.uniform(0.20, 0.30),
        glasses=bool(rng.random() < 0.22),
        glasses_color=np.array([0.12, 0.10, 0.10]) + rng.uniform(0, 0.15),
    )


def sample_variation(rng: np.random.Generator, strength: float = 1.0) -> FaceVariation:
    """Nuisance sample; `strength` scales geometric jitter (aligned sets keep it ~1)."""
    palette = rng.uniform(0.25, 0.8, 3)
    return FaceVariation(
        rot=rng.uniform(-5.0, 5.0) * strength,
        scale=1.0 + rng.uniform(-0.05, 0.06) * strength,
        shift=(rng.uniform(-0.02, 0.02) * strength, rng.uniform(-0.02, 0.02) * strength),
        smile=rng.uniform(-0.25, 0.65),
        eye_open=rng.uniform(0.72, 1.08),
        brow_raise=rng.uniform(-0.012, 0.012),
        brightness=rng.uniform(0.90, 1.10),
        light_strength=rng.uniform(0.0, 0.14),
        light_angle=rng.uniform(0, 2 * math.pi),
        bg_top=palette,
        bg_bottom=np.clip(palette + rng.uniform(-0.25, 0.25, 3), 0.05, 0.95),
        noise_sigma=rng.uniform(0.0, 0.010),
        noise_seed=int(rng.integers(0, 2**31 - 1)),
    )


def _ellipse_pts(cx, cy, rx, ry, rot=0.0, n=72):
    t = np.linspace(0, 2 * math.pi, n, endpoint=False)
    x = rx * np.cos(t)
    y = ry * np.sin(t)
    c, s = math.cos(rot), math.sin(rot)
    return np.stack([cx + c * x - s * y, cy + s * x + c * y], axis=1)


def _bezier(p0, p1, p2, n=24):
    t = np.linspace(0, 1, n)[:, None]
    return (1 - t) ** 2 * p0 + 2 * (1 - t) * t * p1 + t**2 * p2


class _Canvas:
    """Supersampled drawing surface that applies one affine to all geometry."""

    def __init__(self, size: int, supersample: int, affine: np.ndarray):
        self.size = size
        self.ss = supersample
        self.affine = affine  # 2x3, unit coords -> unit coords
        self.img = Image.new("RGB", (size * supersample, size * supersample))
        self.draw = ImageDraw.Draw(self.img)

    def _map(self, pts: np.ndarray) -> list[tuple[float, float]]:
        p = np.asarray(pts, dtype=np.float64)
        q = p @ self.affine[:, :2].T + self.affine[:, 2]
        q = q * (self.size * self.ss)
        return [tuple(v) for v in q]

    def map_point(self, x: float, y: float) -> tuple[float, float]:
        q = self.affine[:, :2] @ np.array([x, y]) + self.affine[:, 2]
        return float(q[0] * self.size), float(q[1] * self.size)

    def polygon(self, pts, color):
        rgb = tuple(int(round(c * 255)) for c in np.clip(color, 0, 1))
        self.draw.polygon(self._map(pts), fill=rgb)

    def lines(self, pts, color, width_frac):
        rgb = tuple(int(round(c * 255)) for c in np.clip(color, 0, 1))
        w = max(1, int(round(width_frac * self.size * self.ss)))
        self.draw.line(self._map(pts), fill=rgb, width=w, joint="curve")

    def to_array(self) -> np.ndarray:
        small = self.img.resize((self.size, self.size), Image.LANCZOS)
        return np.asarray(small, dtype=np.float32) / 255.0


class _MaskCanvas:
    def __init__(self, size: int, supersample: int, affine: np.ndarray):
        self._c = _Canvas.__new__(_Canvas)
        self._c.size, self._c.ss, self._c.affine = size, supersample, affine
        self._c.img = Image.new("L", (size * supersample, size * supersample))
        self._c.draw = ImageDraw.Draw(self._c.img)

    def polygon(self, pts):
        self._c.draw.polygon(self._c._map(pts), fill=255)

    def to_array(self) -> np.ndarray:
        small = self._c.img.resize((self._c.size, self._c.size), Image.LANCZOS)
        return (np.asarray(small, dtype=np.float32) / 255.0 > 0.5).astype(np.uint8)


def _variation_affine(var: FaceVariation) -> np.ndarray:
    """Similarity transform in unit coords about the crop center."""
    th = math.radians(var.rot)
    c, s = math.cos(th) * var.scale, math.sin(th) * var.scale
    cx = cy = 0.5
    a = np.array([[c, -s, 0.0], [s, c, 0.0]])
    center = np.array([cx, cy])
    a[:, 2] = center - a[:, :2] @ center + np.array(var.shift)
    return a


def _mouth_polys(ident: FaceIdentity, var: FaceVariation):
    cx, cy = 0.5, ident.mouth_y
    w, th = ident.mouth_dx, ident.mouth_th
    corner_dy = -var.smile * th * 0.9
    left = np.array([cx - w, cy + corner_dy])
    right = np.array([cx + w, cy + corner_dy])
    top_ctrl = np.array([cx, cy - th])
    bot_ctrl = np.array([cx, cy + th * 1.6])
    upper = _bezier(left, top_ctrl, right)
    lower = _bezier(right, bot_ctrl, left)
    return np.concatenate([upper, lower]), left, right


def render_face(
    ident: FaceIdentity,
    var: FaceVariation | None = None,
    size: int = 64,
    supersample: int = 4,
) -> RenderedFace:
    if var is None:
        var = FaceVariation()
    aff = _variation_affine(var)
    canvas = _Canvas(size, supersample, aff)

    # Background: vertical gradient drawn as horizontal strips in photo coords
    # (unaffected by the face affine, so paint directly).
    bg = np.linspace(0, 1, size * supersample)[:, None] * (var.bg_bottom - var.bg_top) + var.bg_top
    bg_img = np.repeat(bg[:, None, :], size * supersample, axis=1)
    canvas.img.paste(Image.fromarray((np.clip(bg_img, 0, 1) * 255).astype(np.uint8)))

    cx, fcy = 0.5, ident.face_cy
    fw, fh = ident.face_w, ident.face_h
    sil = _MaskCanvas(size, supersample, aff)

    # Hair drawn behind the face for the "long" style.
    if ident.hair_style == "long":
        back = _ellipse_pts(cx, fcy - 0.02, fw * 1.22, fh * 1.18)
        canvas.polygon(back, ident.hair_color)
        sil.polygon(back)

    face = _ellipse_pts(cx, fcy, fw, fh)
    canvas.polygon(face, ident.skin)
    sil.polygon(face)

    # Front hair: clipped cap above the hairline.
    hair_bottom = fcy - fh + ident.hairline * fh * 2.0
    if ident.hair_style != "bald":
        ring = _ellipse_pts(cx, fcy, fw * 1.06, fh * 1.04, n=144)
        cap = ring[ring[:, 1] <= hair_bottom]  # top arc, contiguous in angular order
        if len(cap) > 2:
            poly = np.vstack([cap, [cap[-1][0], hair_bottom], [cap[0][0], hair_bottom]])
            canvas.polygon(poly, ident.hair_color)
            sil.polygon(poly)
    if ident.hair_style == "side":
        side = _ellipse_pts(cx - fw * 0.85, fcy - fh * 0.25, fw * 0.28, fh * 0.42)
        canvas.polygon(side, ident.hair_color)
        sil.polygon(side)

    ml_eyes = []
    eye_masks = _MaskCanvas(size, supersample, aff)
    brow_masks = _MaskCanvas(size, supersample, aff)
    nose_masks = _MaskCanvas(size, supersample, aff)
    mouth_masks = _MaskCanvas(size, supersample, aff)
    skin_masks = _MaskCanvas(size, supersample, aff)
    skin_masks.polygon(_ellipse_pts(cx, fcy, fw * 0.97, fh * 0.97))

    ey = ident.eye_y
    er, ea = ident.eye_r, ident.eye_aspect * var.eye_open
    for sx in (-1, 1):
        ex = cx + sx * ident.eye_dx
        ml_eyes.append((ex, ey))
        sclera = _ellipse_pts(ex, ey, er, er * ea)
        canvas.polygon(sclera, (0.97, 0.97, 0.96))
        eye_masks.polygon(sclera)
        iris_r = er * ident.iris_scale
        canvas.polygon(_ellipse_pts(ex, ey, iris_r, min(iris_r, er * ea * 0.95)), ident.iris)
        pup = iris_r * 0.45
        canvas.polygon(_ellipse_pts(ex, ey, pup, min(pup, er * ea * 0.9)), (0.05, 0.05, 0.06))

        by = ey - ident.brow_dy - var.brow_raise
        tilt = ident.brow_tilt * sx
        bl, bt = ident.brow_len, ident.brow_th
        brow = _ellipse_pts(ex, by, bl, bt, rot=tilt, n=36)
        canvas.polygon(brow, ident.brow_color)
        brow_masks.polygon(brow)

    # Nose: narrow bridge widening to the tip, slightly darker than skin.
    nx, ny = cx, ident.nose_y
    ntop = ident.nose_top
    nw = ident.nose_w
    nose_poly = np.array(
        [
            [nx - nw * 0.35, ntop],
            [nx + nw * 0.35, ntop],
            [nx + nw, ny],
            [nx + nw * 0.55, ny + nw * 0.55],
            [nx - nw * 0.55, ny + nw * 0.55],
            [nx - nw, ny],
        ]
    )
    canvas.polygon(nose_poly, ident.skin * 0.86)
    nose_masks.polygon(nose_poly)
    for sx in (-1, 1):
        canvas.polygon(
            _ellipse_pts(nx + sx * nw * 0.55, ny + nw * 0.18, nw * 0.16, nw * 0.12, n=24),
            ident.skin * 0.55,
        )

    mouth_poly, mleft, mright = _mouth_polys(ident, var)
    canvas.polygon(mouth_poly, ident.lip_color)
    mouth_masks.polygon(mouth_poly)
    lip_line = _bezier(mleft, np.array([cx, ident.mouth_y + var.smile * -0.2 * ident.mouth_th]), mright)
    canvas.lines(lip_line, ident.lip_color * 0.55, ident.mouth_th * 0.18)

    if ident.glasses:
        gr = er * 1.55
        for sx in (-1, 1):
            ring = _ellipse_pts(cx + sx * ident.eye_dx, ey, gr, gr * 0.82)
            canvas.lines(np.vstack([ring, ring[:1]]), ident.glasses_color, 0.010)
        canvas.lines(
            np.array([[cx - ident.eye_dx + gr, ey], [cx + ident.eye_dx - gr, ey]]),
            ident.glasses_color,
            0.010,
        )

    img = canvas.to_array()

    # Directional lighting + brightness, then sensor-ish noise.
    if var.light_strength > 0:
        yy, xx = np.mgrid[0:size, 0:size] / (size - 1)
        ramp = (xx - 0.5) * math.cos(var.light_angle) + (yy - 0.5) * math.sin(var.light_angle)
        img = img * (1.0 + var.light_strength * ramp * 2.0)[..., None]
    img = img * var.brightness
    if var.noise_sigma > 0:
        nrng = np.random.default_rng(var.noise_seed)
        img = img + nrng.normal(0.0, var.noise_sigma, img.shape)
    img = np.clip(img, 0.0, 1.0).astype(np.float32)

    lms_unit = np.array(
        [
            ml_eyes[0],
            ml_eyes[1],
            [nx, ny],
            [mleft[0], mleft[1]],
            [mright[0], mright[1]],
        ]
    )
    lms = np.array([canvas.map_point(x, y) for x, y in lms_unit], dtype=np.float32)

    brows_m = brow_masks.to_array()
    eyes_m = eye_masks.to_array()
    nose_m = nose_masks.to_array() & ~eyes_m
    mouth_m = mouth_masks.to_array() & ~nose_m
    skin_m = skin_masks.to_array() & ~(brows_m | eyes_m | nose_m | mouth_m)
    eyes_m = eyes_m & ~brows_m
    masks = np.stack([brows_m, eyes_m, nose_m, mouth_m, skin_m]).astype(np.uint8)

    return RenderedFace(image=img, landmarks=lms, region_masks=masks, silhouette=sil.to_array())
