"""
Dot-matrix text engraving into voxel solids.
"""

import logging

import numpy as np
from scipy.spatial import cKDTree

from core.conf import or_setting

logger = logging.getLogger(__name__)

GLYPH_WIDTH = 5
GLYPH_HEIGHT = 7
MIN_VOXELS_PER_DOT = 3

FONT = {
    'A': ('.###.', '#...#', '#...#', '#####', '#...#', '#...#', '#...#'),
    'B': ('####.', '#...#', '#...#', '####.', '#...#', '#...#', '####.'),
    'C': ('.###.', '#...#', '#....', '#....', '#....', '#...#', '.###.'),
    'D': ('###..', '#..#.', '#...#', '#...#', '#...#', '#..#.', '###..'),
    'E': ('#####', '#....', '#....', '####.', '#....', '#....', '#####'),
    'F': ('#####', '#....', '#....', '####.', '#....', '#....', '#....'),
    'G': ('.###.', '#...#', '#....', '#.###', '#...#', '#...#', '.####'),
    'H': ('#...#', '#...#', '#...#', '#####', '#...#', '#...#', '#...#'),
    'I': ('.###.', '..#..', '..#..', '..#..', '..#..', '..#..', '.###.'),
    'J': ('..###', '...#.', '...#.', '...#.', '...#.', '#..#.', '.##..'),
    'K': ('#...#', '#..#.', '#.#..', '##...', '#.#..', '#..#.', '#...#'),
    'L': ('#....', '#....', '#....', '#....', '#....', '#....', '#####'),
    'M': ('#...#', '##.##', '#.#.#', '#.#.#', '#...#', '#...#', '#...#'),
    'N': ('#...#', '#...#', '##..#', '#.#.#', '#..##', '#...#', '#...#'),
    'O': ('.###.', '#...#', '#...#', '#...#', '#...#', '#...#', '.###.'),
    'P': ('####.', '#...#', '#...#', '####.', '#....', '#....', '#....'),
    'Q': ('.###.', '#...#', '#...#', '#...#', '#.#.#', '#..#.', '.##.#'),
    'R': ('####.', '#...#', '#...#', '####.', '#.#..', '#..#.', '#...#'),
    'S': ('.####', '#....', '#....', '.###.', '....#', '....#', '####.'),
    'T': ('#####', '..#..', '..#..', '..#..', '..#..', '..#..', '..#..'),
    'U': ('#...#', '#...#', '#...#', '#...#', '#...#', '#...#', '.###.'),
    'V': ('#...#', '#...#', '#...#', '#...#', '#...#', '.#.#.', '..#..'),
    'W': ('#...#', '#...#', '#...#', '#.#.#', '#.#.#', '#.#.#', '.#.#.'),
    'X': ('#...#', '#...#', '.#.#.', '..#..', '.#.#.', '#...#', '#...#'),
    'Y': ('#...#', '#...#', '.#.#.', '..#..', '..#..', '..#..', '..#..'),
    'Z': ('#####', '....#', '...#.', '..#..', '.#...', '#....', '#####'),
    '0': ('.###.', '#...#', '#..##', '#.#.#', '##..#', '#...#', '.###.'),
    '1': ('..#..', '.##..', '..#..', '..#..', '..#..', '..#..', '.###.'),
    '2': ('.###.', '#...#', '....#', '...#.', '..#..', '.#...', '#####'),
    '3': ('#####', '...#.', '..#..', '...#.', '....#', '#...#', '.###.'),
    '4': ('...#.', '..##.', '.#.#.', '#..#.', '#####', '...#.', '...#.'),
    '5': ('#####', '#....', '####.', '....#', '....#', '#...#', '.###.'),
    '6': ('..##.', '.#...', '#....', '####.', '#...#', '#...#', '.###.'),
    '7': ('#####', '....#', '...#.', '..#..', '.#...', '.#...', '.#...'),
    '8': ('.###.', '#...#', '#...#', '.###.', '#...#', '#...#', '.###.'),
    '9': ('.###.', '#...#', '#...#', '.####', '....#', '...#.', '.##..'),
    ' ': ('.....',) * 7,
    '.': ('.....',) * 5 + ('.##..', '.##..'),
    '-': ('.....',) * 3 + ('#####',) + ('.....',) * 3,
}


def render_text(text):
    """
    Rasterise text into a bool bitmap, row 0 on top.

    Glyphs are 5x7 with one blank column between them.
    """
    if not text:
        raise ValueError('Label text must not be empty')
    unsupported = sorted({c for c in text if c not in FONT})
    if unsupported:
        raise ValueError(f'Unsupported label characters: {unsupported!r}; '
                         'use A-Z, 0-9, space, "." and "-"')
    columns = []
    for index, char in enumerate(text):
        if index:
            columns.append(np.zeros((GLYPH_HEIGHT, 1), dtype=bool))
        columns.append(np.array([[dot == '#' for dot in row]
                                 for row in FONT[char]]))
    return np.hstack(columns)


def _patch_frame(solid, patch):
    """Centroid, outward normal, up and right directions of a patch."""
    centres = solid.centres()[patch]
    centroid = centres.mean(axis=0)
    padded = np.pad(solid.occupied, 1)
    index = np.argwhere(patch) + 1
    normal = np.zeros(3)
    for step in np.eye(3, dtype=int):
        for sign in (1, -1):
            neighbour = index + sign * step
            empty = ~padded[tuple(neighbour.T)]
            normal += sign * step * np.count_nonzero(empty)
    length = np.linalg.norm(normal)
    if length == 0:
        raise ValueError('Label region has no outward direction')
    normal /= length
    # "Up" is +Z on the tangent plane, or +Y when the patch faces along Z.
    up = np.array([0.0, 0.0, 1.0])
    if abs(normal[2]) > 0.9:
        up = np.array([0.0, 1.0, 0.0])
    up = up - np.dot(up, normal) * normal
    up /= np.linalg.norm(up)
    right = np.cross(up, normal)
    return centroid, normal, up, right


def engrave_label(solid, text, region, depth=None):
    """
    Cut text into the surface patch of solid inside region=(low, high).

    The text is laid on the patch's tangent plane, scaled to the largest
    dot pitch that fits the patch, and carved depth mm deep. Returns the
    engraved VoxelSolid.
    """
    depth = or_setting(depth, 'SUPPORT_LABEL_DEPTH_MM')
    h = solid.voxel_size
    if depth < h:
        raise ValueError(
            f'Label depth {depth} mm is under one voxel ({h} mm)')
    bitmap = render_text(text)
    low, high = (np.asarray(b, dtype=np.float64) for b in region)
    centres = solid.centres()
    in_region = np.all((centres >= low) & (centres <= high), axis=-1)
    patch = solid.surface() & in_region
    if not patch.any():
        raise ValueError('Label region does not meet the solid surface')

    centroid, normal, up, right = _patch_frame(solid, patch)
    offsets = centres[patch] - centroid
    s, t = offsets @ right, offsets @ up
    rows, cols = bitmap.shape
    pitch = min((s.max() - s.min()) / cols, (t.max() - t.min()) / rows)
    if pitch < MIN_VOXELS_PER_DOT * h:
        raise ValueError(
            f'Label region too small: {pitch:.3f} mm per dot, need at '
            f'least {MIN_VOXELS_PER_DOT * h:.3f} mm '
            f'({MIN_VOXELS_PER_DOT} voxels)')
    offsets = centres - centroid
    col = np.floor((offsets @ right + cols * pitch / 2) / pitch)
    row = np.floor((rows * pitch / 2 - offsets @ up) / pitch)
    inside = (col >= 0) & (col < cols) & (row >= 0) & (row < rows)
    lit = np.zeros(solid.dims, dtype=bool)
    lit[inside] = bitmap[row[inside].astype(int), col[inside].astype(int)]
    # Surface voxel centres sit half a voxel under the surface.
    candidates = solid.occupied & lit
    distance, _ = cKDTree(centres[patch]).query(
        centres[candidates], distance_upper_bound=depth)
    carve = np.zeros(solid.dims, dtype=bool)
    carve[candidates] = distance <= depth - h / 2 + 1e-9
    logger.info('Engraved %r: %d dots at %.3f mm pitch, %d voxels removed',
                text, int(bitmap.sum()), pitch, int(carve.sum()))
    return solid.with_occupancy(solid.occupied & ~carve)
