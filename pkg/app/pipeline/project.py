"""
Project files: one JSON document naming the fragments and the tasks.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from calibrate.scaling import (
    UNIT_TO_MM, ScaleCalibration, normalize_units, reorient_up, up_rotation,
)
from core.io import load_mesh
from pipeline.serializers import ProjectSerializer
from register.transforms import RigidTransform

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FragmentSpec:
    id: str
    path: Path
    calibration: dict = None
    seed_pose: dict = None
    rims: list = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class Project:
    """A validated project. Paths are resolved against the project file."""
    name: str
    units: str
    up_axis: str
    output_dir: Path
    fragments: list
    tasks: list
    metadata: dict = field(default_factory=dict)

    def to_project_frame(self, points):
        """Map points from the declared units and axes to mm with Z up."""
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return UNIT_TO_MM[self.units] * points @ up_rotation(self.up_axis).T

    def load_fragment(self, spec):
        """
        Load one fragment in millimetres with Z up.

        Returns the mesh, its calibration (or None), its seed pose (or None)
        and its rim selections as point arrays.
        """
        mesh = reorient_up(normalize_units(load_mesh(spec.path), self.units),
                           self.up_axis)
        calibration = None
        if spec.calibration:
            a, b = self.to_project_frame([spec.calibration['point_a'],
                                          spec.calibration['point_b']])
            calibration = ScaleCalibration(
                a, b, spec.calibration['real_distance_mm'])
        pose = (RigidTransform.from_dict(spec.seed_pose)
                if spec.seed_pose else None)
        rims = []
        for rim in spec.rims:
            if 'indices' in rim:
                indices = np.asarray(rim['indices'])
                if indices.max() >= mesh.vertex_count:
                    raise ValueError(f'Rim vertex index out of range for '
                                     f'fragment {spec.id}')
                rims.append(mesh.vertices[indices])
            else:
                rims.append(self.to_project_frame(rim['points']))
        logger.info('Loaded fragment %s: %d vertices, %d triangles',
                    spec.id, mesh.vertex_count, mesh.triangle_count)
        return mesh, calibration, pose, rims


def parse_project(data, base_dir):
    """Validate a project document; raises ValidationError before any IO."""
    base_dir = Path(base_dir)
    serializer = ProjectSerializer(data=data, context={'base_dir': base_dir})
    serializer.is_valid(raise_exception=True)
    validated = serializer.validated_data
    fragments = [
        FragmentSpec(
            id=item['id'],
            path=base_dir / item['mesh'],
            calibration=item.get('calibration'),
            seed_pose=item.get('seed_pose'),
            rims=list(item.get('rims') or []),
        )
        for item in validated['fragments']
    ]
    metadata = {key: validated[key]
                for key in ('photo_count', 'point_count', 'calculation_time')}
    return Project(
        name=validated['name'],
        units=validated['units'],
        up_axis=validated['up_axis'],
        output_dir=base_dir / validated['output'],
        fragments=fragments,
        tasks=validated['pipeline'],
        metadata=metadata,
    )


def load_project(path):
    """Read and validate the project file at path."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f'{path} is not valid JSON: {exc}') from exc
    project = parse_project(data, path.resolve().parent)
    logger.info('Project %s: %d fragments, %d tasks', project.name,
                len(project.fragments), len(project.tasks))
    return project
