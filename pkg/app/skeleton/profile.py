"""
Coaxial circle stacks: axis estimation, skeleton assembly and CSV export.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from skeleton.circles import canonical_sign

logger = logging.getLogger(__name__)

HEIGHT_MERGE_MM = 1e-6


@dataclass(frozen=True)
class AxisEstimate:
    point: tuple
    direction: tuple
    coaxiality_rms: float

    def __post_init__(self):
        object.__setattr__(self, 'point', tuple(map(float, self.point)))
        object.__setattr__(self, 'direction',
                           tuple(map(float, self.direction)))
        object.__setattr__(self, 'coaxiality_rms',
                           float(self.coaxiality_rms))


@dataclass(frozen=True)
class ProfileSkeleton:
    """
    Ordered (height, radius) rings along an axis.

    Heights are measured from axis_point along axis_direction. The
    bottom_closed flag records whether the lowest ring closes an observed
    base; the revolved solid is closed either way.
    """
    axis_point: tuple
    axis_direction: tuple
    rings: tuple
    coaxiality_rms: float = 0.0
    bottom_closed: bool = True

    def __post_init__(self):
        direction = np.asarray(self.axis_direction, dtype=np.float64)
        length = np.linalg.norm(direction)
        if direction.shape != (3,) or length == 0:
            raise ValueError("Axis direction must be a non-zero 3D vector")
        rings = tuple((float(h), float(r)) for h, r in self.rings)
        if len(rings) < 2:
            raise ValueError("A skeleton needs at least 2 rings")
        heights = np.array([h for h, _ in rings])
        if np.any(np.diff(heights) <= 0):
            raise ValueError("Ring heights must be strictly increasing")
        if any(r <= 0 for _, r in rings):
            raise ValueError("Ring radii must be positive")
        object.__setattr__(self, 'axis_point',
                           tuple(map(float, self.axis_point)))
        object.__setattr__(self, 'axis_direction',
                           tuple(map(float, direction / length)))
        object.__setattr__(self, 'rings', rings)
        object.__setattr__(self, 'coaxiality_rms', float(self.coaxiality_rms))

    @classmethod
    def from_rings(cls, rings, axis_point=(0.0, 0.0, 0.0),
                   axis_direction=(0.0, 0.0, 1.0), bottom_closed=True):
        return cls(axis_point, axis_direction, tuple(rings), 0.0,
                   bottom_closed)

    @property
    def heights(self):
        return np.array([h for h, _ in self.rings])

    @property
    def radii(self):
        return np.array([r for _, r in self.rings])

    @property
    def height(self):
        return self.rings[-1][0] - self.rings[0][0]

    def as_dict(self):
        return {
            'axis_point': list(self.axis_point),
            'axis_direction': list(self.axis_direction),
            'rings': [list(ring) for ring in self.rings],
            'coaxiality_rms': self.coaxiality_rms,
            'bottom_closed': self.bottom_closed,
        }


def estimate_axis(circles):
    """
    Fit the vessel axis through the circle centres.

    The direction is the principal component of the centres, signed to
    agree with the mean circle normal. Coincident centres fall back on the
    mean normal, which must not cancel out.
    """
    if len(circles) < 2:
        raise ValueError("Axis estimation needs at least 2 circles")
    centers = np.array([c.center for c in circles])
    normals = np.array([c.normal for c in circles])
    mean_normal = normals.mean(axis=0)
    point = centers.mean(axis=0)
    offsets = centers - point
    scale = max(float(np.abs(centers).max()), 1.0)

    if np.linalg.norm(offsets, axis=1).max() <= 1e-9 * scale:
        length = np.linalg.norm(mean_normal)
        if length < 0.5:
            raise ValueError("Circle centres coincide and normals conflict; "
                             "the axis direction is undefined")
        direction = mean_normal / length
    else:
        _, _, axes = np.linalg.svd(offsets, full_matrices=False)
        direction = axes[0]
        alignment = direction @ mean_normal
        if abs(alignment) > 1e-9:
            direction = direction if alignment > 0 else -direction
        else:
            direction = canonical_sign(direction)

    along = offsets @ direction
    radial = offsets - np.outer(along, direction)
    rms = float(np.sqrt(np.mean(np.sum(radial ** 2, axis=1))))
    logger.debug('Axis through %s along %s, coaxiality rms %.4g mm',
                 point, direction, rms)
    return AxisEstimate(tuple(point), tuple(direction), rms)


def build_skeleton(circles, bottom_closed=True):
    """
    Reduce circles to (height, radius) rings along the estimated axis.

    Heights start at zero on the lowest circle; circles closer than
    HEIGHT_MERGE_MM in height merge into one ring of averaged radius.
    """
    axis = estimate_axis(circles)
    point = np.asarray(axis.point)
    direction = np.asarray(axis.direction)
    heights = np.array([(np.asarray(c.center) - point) @ direction
                        for c in circles])
    radii = np.array([c.radius for c in circles])
    base = heights.min()
    heights = heights - base

    order = np.lexsort((radii, heights))
    heights, radii = heights[order], radii[order]
    rings, group = [], [0]
    for index in range(1, len(heights)):
        if heights[index] - heights[group[0]] <= HEIGHT_MERGE_MM:
            group.append(index)
        else:
            rings.append((heights[group].mean(), radii[group].mean()))
            group = [index]
    rings.append((heights[group].mean(), radii[group].mean()))
    if len(rings) < 2:
        raise ValueError("Skeleton needs at least 2 distinct ring heights")
    rings[0] = (0.0, rings[0][1])

    skeleton = ProfileSkeleton(
        tuple(point + base * direction), tuple(direction), tuple(rings),
        axis.coaxiality_rms, bottom_closed,
    )
    logger.info('Skeleton with %d rings over %.3f mm (coaxiality rms '
                '%.4g mm)', len(rings), skeleton.height, axis.coaxiality_rms)
    return skeleton


def write_skeleton_csv(skeleton, path):
    """Write height_mm,radius_mm rows with the axis in comment lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as handle:
        handle.write('# axis_point=%s\n' % ' '.join(
            '%.17g' % x for x in skeleton.axis_point))
        handle.write('# axis_direction=%s\n' % ' '.join(
            '%.17g' % x for x in skeleton.axis_direction))
        handle.write('# coaxiality_rms=%.17g\n' % skeleton.coaxiality_rms)
        handle.write('# bottom_closed=%s\n' %
                     str(skeleton.bottom_closed).lower())
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['height_mm', 'radius_mm'])
        for height, radius in skeleton.rings:
            writer.writerow(['%.17g' % height, '%.17g' % radius])


def read_skeleton_csv(path):
    """Read a skeleton written by write_skeleton_csv or drawn by hand."""
    meta, rows = {}, []
    with Path(path).open(newline='') as handle:
        for line in handle:
            if line.startswith('#'):
                key, _, value = line[1:].strip().partition('=')
                meta[key.strip()] = value.strip()
            elif line.strip():
                rows.append(line)
    reader = csv.DictReader(rows)
    try:
        rings = [(float(row['height_mm']), float(row['radius_mm']))
                 for row in reader]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed skeleton CSV ({exc})") from exc

    def vector(key, default):
        if key not in meta:
            return default
        return tuple(float(x) for x in meta[key].split())

    return ProfileSkeleton(
        vector('axis_point', (0.0, 0.0, 0.0)),
        vector('axis_direction', (0.0, 0.0, 1.0)),
        tuple(rings),
        float(meta.get('coaxiality_rms', 0.0)),
        meta.get('bottom_closed', 'true') == 'true',
    )
