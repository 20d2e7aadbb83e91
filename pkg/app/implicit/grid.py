"""
Regular scalar grids shared by the Poisson solve and the voxel booleans.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage


@dataclass(frozen=True, eq=False)
class ScalarGrid:
    """
    Scalars on the nodes of an axis-aligned cubic lattice.

    Node (i, j, k) sits at origin + spacing * (i, j, k); values are indexed
    in that order.
    """
    origin: np.ndarray
    spacing: float
    values: np.ndarray

    def __post_init__(self):
        origin = np.array(self.origin, dtype=np.float64)
        values = np.array(self.values, copy=True)
        if origin.shape != (3,):
            raise ValueError('origin must be a 3D point')
        if not self.spacing > 0:
            raise ValueError('spacing must be positive')
        if values.ndim != 3 or min(values.shape) < 1:
            raise ValueError('values must be a non-empty 3D array')
        origin.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, 'origin', origin)
        object.__setattr__(self, 'spacing', float(self.spacing))
        object.__setattr__(self, 'values', values)

    def __repr__(self):
        return (f'ScalarGrid(dims={self.dims}, spacing={self.spacing:.4g}, '
                f'origin={self.origin.tolist()})')

    @property
    def dims(self):
        return tuple(int(n) for n in self.values.shape)

    @property
    def upper(self):
        """Position of the last node."""
        return self.origin + self.spacing * (np.array(self.dims) - 1)

    def with_values(self, values):
        return ScalarGrid(self.origin, self.spacing, values)

    def to_index(self, points):
        """Fractional node coordinates of world points."""
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return (points - self.origin) / self.spacing

    def centres(self):
        """World positions of every node, shape dims + (3,)."""
        axes = [self.origin[a] + self.spacing * np.arange(n)
                for a, n in enumerate(self.dims)]
        return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)

    def sample(self, points):
        """Trilinear interpolation at world points, clamped at the edges."""
        index = self.to_index(points)
        return ndimage.map_coordinates(
            np.asarray(self.values, dtype=np.float64), index.T,
            order=1, mode='nearest')

    def boundary_values(self):
        """Values on the six outer faces of the lattice."""
        v = self.values
        return np.concatenate([
            v[0].ravel(), v[-1].ravel(),
            v[:, 0].ravel(), v[:, -1].ravel(),
            v[:, :, 0].ravel(), v[:, :, -1].ravel(),
        ])

    def header(self):
        return '\n'.join([
            'origin %.17g %.17g %.17g' % tuple(self.origin),
            'spacing %.17g' % self.spacing,
            'dims %d %d %d' % self.dims,
            'dtype float32 little-endian',
            'order x-major (x slowest, z fastest)',
        ]) + '\n'

    def dump(self, stem):
        """
        Write stem.raw (little-endian float32) and stem.txt (header).

        Returns the two paths.
        """
        stem = Path(stem)
        stem.parent.mkdir(parents=True, exist_ok=True)
        raw = stem.with_suffix('.raw')
        text = stem.with_suffix('.txt')
        raw.write_bytes(np.asarray(self.values, dtype='<f4').tobytes('C'))
        text.write_text(self.header())
        return raw, text

    @classmethod
    def load(cls, stem):
        """Read a grid written by dump()."""
        stem = Path(stem)
        fields = {}
        for line in stem.with_suffix('.txt').read_text().splitlines():
            key, _, rest = line.partition(' ')
            fields[key] = rest.split()
        dims = tuple(int(n) for n in fields['dims'])
        values = np.fromfile(stem.with_suffix('.raw'), dtype='<f4')
        if values.size != int(np.prod(dims)):
            raise ValueError(f'{stem}.raw holds {values.size} values, '
                             f'header declares {dims}')
        return cls([float(x) for x in fields['origin']],
                   float(fields['spacing'][0]),
                   values.reshape(dims).astype(np.float64))


def splat(coords, weights, shape):
    """
    Accumulate weights onto a lattice by trilinear weights.

    coords are fractional lattice coordinates; points outside the lattice
    are clamped onto its border cells.
    """
    shape = tuple(shape)
    upper = np.maximum(np.array(shape) - 2, 0)
    base = np.clip(np.floor(coords).astype(np.int64), 0, upper)
    frac = np.clip(coords - base, 0.0, 1.0)
    size = int(np.prod(shape))
    out = np.zeros(size)
    for corner in np.ndindex(2, 2, 2):
        corner = np.array(corner)
        w = np.prod(np.where(corner, frac, 1.0 - frac), axis=1)
        nodes = np.minimum(base + corner, np.array(shape) - 1)
        flat = np.ravel_multi_index(nodes.T, shape)
        out += np.bincount(flat, weights=weights * w, minlength=size)
    return out.reshape(shape)
