"""
Scenario files: a vessel profile and a fracture plan, written out as
meshes plus a ground-truth manifest.
"""

import json
import logging
from pathlib import Path

from core.io import save_mesh
from synth.fracture import FracturePlan, fracture, keep_coverage
from synth.serializers import ScenarioSerializer
from synth.vessel import VesselProfile, generate_vessel

logger = logging.getLogger(__name__)

MANIFEST = 'manifest.json'


def read_scenario(path):
    """Load and validate a scenario document."""
    serializer = ScenarioSerializer(data=json.loads(Path(path).read_text()))
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


def run_scenario(scenario, out_dir, seed=None):
    """
    Generate the scenario into out_dir and return the manifest.

    seed, when given, replaces the fracture plan's rng_seed.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = '.' + scenario['format']
    profile = VesselProfile(**scenario['profile'])
    vessel = generate_vessel(profile)
    save_mesh(vessel.mesh, out_dir / f'vessel{suffix}')
    save_mesh(vessel.cavity_mesh, out_dir / f'cavity{suffix}')

    manifest = {
        'name': scenario['name'],
        'vessel': f'vessel{suffix}',
        'cavity': f'cavity{suffix}',
        **vessel.as_dict(),
        'sherds': [],
    }
    options = dict(scenario.get('fracture') or {})
    if options:
        coverage = options.pop('coverage', 1.0)
        if seed is not None:
            options['rng_seed'] = seed
        plan = FracturePlan(**options)
        sherds = keep_coverage(fracture(vessel.mesh, plan), coverage,
                               plan.rng_seed)
        total = float(vessel.mesh.face_areas.sum())
        manifest['fracture'] = {**plan.as_dict(), 'coverage': coverage}
        manifest['coverage'] = sum(s.area for s in sherds) / total
        for sherd in sherds:
            name = f'{sherd.id}{suffix}'
            save_mesh(sherd.mesh, out_dir / name)
            manifest['sherds'].append({
                'id': sherd.id,
                'path': name,
                'triangle_count': sherd.mesh.triangle_count,
                'area_mm2': sherd.area,
                'true_pose': sherd.true_pose.as_dict(),
                'restore_pose': sherd.true_pose.inverse().as_dict(),
            })
    (out_dir / MANIFEST).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + '\n')
    logger.info('Scenario %s: %d sherds written to %s', scenario['name'],
                len(manifest['sherds']), out_dir)
    return manifest
