"""
Sequential execution of a project's task list.
"""

import csv
import io
import json
import logging
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from calibrate.scaling import apply_scale, check_consistent
from core.exceptions import FragmentProtrusionError, TaskError, VesselError
from core.io import save_mesh
from core.measure import diagnose, enclosed_volume, orient_fix
from core.smoothing import laplacian_smooth
from implicit.reconstruct import reconstruct_vessel
from pipeline.edits import crop_fragment
from pipeline.report import MetricsRow, render_csv, render_table
from register.alignment import align_z
from register.icp import icp_rigid
from register.shells import merge_shells
from register.transforms import RigidTransform
from skeleton.circles import fit_circle
from skeleton.profile import build_skeleton, write_skeleton_csv
from skeleton.revolution import compare_volumes, revolve, skeleton_hull_volume
from support.engrave import engrave_label
from support.split import split_for_build
from support.support import SupportSpec, make_support

logger = logging.getLogger(__name__)

ERROR_FILE = 'error.json'


def dump_json(data, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + '\n')


class PipelineRunner:
    """
    Run the tasks of a project in order, writing artifacts under out_dir.

    Every task is a task_<name> method called with its validated
    parameters; results flow to later tasks through the runner's state.
    A failing task writes error.json and raises TaskError.
    """

    def __init__(self, project, out_dir=None, grid=None, segments=None):
        self.project = project
        self.out_dir = Path(out_dir or project.output_dir)
        self.grid = grid
        self.segments = segments
        self.meshes = {}
        self.calibrations = {}
        self.seed_poses = {}
        self.rims = {}
        self.scaled = set()
        self.circles = []
        self.skeleton = None
        self.vessel = None
        self.alignment = None
        self.aligned_pair = None
        self.poses = {}
        self.solid = None
        self.printable = None
        self.parts = []
        self.metrics = {}
        self.timings = []
        self.fragment = None

    def run(self):
        """Load the fragments, execute every task and write the report."""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / ERROR_FILE).unlink(missing_ok=True)
        with self._task('load', None):
            for spec in self.project.fragments:
                self.fragment = spec.id
                mesh, calibration, pose, rims = \
                    self.project.load_fragment(spec)
                self.meshes[spec.id] = mesh
                self.rims[spec.id] = rims
                if calibration is not None:
                    self.calibrations[spec.id] = calibration
                if pose is not None:
                    self.seed_poses[spec.id] = pose
        for index, (name, params) in enumerate(self.project.tasks):
            with self._task(name, index):
                logger.info('Task %d: %s', index, name)
                getattr(self, f'task_{name}')(**params)
        rows = self.metrics_rows()
        self.write_report(rows)
        return rows

    @contextmanager
    def _task(self, name, index):
        self.fragment = None
        started = time.perf_counter()
        try:
            yield
        except (VesselError, ValueError, OSError) as exc:
            error = TaskError(name, index, self.fragment, exc)
            dump_json(error.as_dict(), self.out_dir / ERROR_FILE)
            logger.error('%s', error)
            raise error from exc
        self.timings.append((index, name, time.perf_counter() - started))

    def _path(self, *parts):
        return self.out_dir.joinpath(*parts)

    def _save(self, mesh, *parts):
        save_mesh(mesh, self._path(*parts))

    def _select(self, ids):
        if ids is None:
            return list(self.meshes)
        unknown = [i for i in ids if i not in self.meshes]
        if unknown:
            raise ValueError(f'Unknown fragments: {unknown}')
        return list(ids)

    def _mesh(self, fragment_id):
        self.fragment = fragment_id
        try:
            return self.meshes[fragment_id]
        except KeyError:
            raise ValueError(f'Unknown fragment {fragment_id!r}') from None

    def _move(self, fragment_id, transform):
        self.meshes[fragment_id] = transform.apply_mesh(
            self.meshes[fragment_id])
        self.rims[fragment_id] = [transform.apply(points)
                                  for points in self.rims[fragment_id]]

    def _vessel(self):
        if self.vessel is not None:
            return self.vessel
        if len(self.meshes) == 1:
            return next(iter(self.meshes.values()))
        raise ValueError('No vessel mesh yet; run revolve or poisson first')

    def _need_skeleton(self):
        if self.skeleton is None:
            raise ValueError('This task needs a skeleton task first')
        return self.skeleton

    def _segments(self, segments):
        return self.segments if segments is None else segments

    def task_scale(self, fragments=None, recenter=False):
        ids = self._select(fragments)
        if fragments is None:
            ids = [i for i in ids if i in self.calibrations]
        if not ids:
            raise ValueError('No calibrated fragments to scale')
        audit = {}
        for fragment_id in ids:
            mesh = self._mesh(fragment_id)
            calibration = self.calibrations.get(fragment_id)
            if calibration is None:
                raise ValueError(f'Fragment {fragment_id} has no calibration')
            if fragment_id in self.scaled:
                raise ValueError(f'Fragment {fragment_id} is already scaled')
            offset = np.zeros(3)
            if recenter:
                offset = -calibration.factor * mesh.vertices.mean(axis=0)
            self.meshes[fragment_id] = apply_scale(mesh, calibration,
                                                   recenter)
            transform = RigidTransform(np.eye(3), offset, calibration.factor)
            self.rims[fragment_id] = [transform.apply(points)
                                      for points in self.rims[fragment_id]]
            self.scaled.add(fragment_id)
            audit[fragment_id] = calibration.as_dict()
            self._save(self.meshes[fragment_id], 'scaled',
                       f'{fragment_id}.ply')
        dump_json(audit, self._path('scaled', 'calibration.json'))

    def task_crop(self, fragment, box, keep='inside'):
        mesh = crop_fragment(self._mesh(fragment), box, keep)
        self.meshes[fragment] = mesh
        self._save(mesh, 'cropped', f'{fragment}.ply')

    def task_smooth(self, fragments=None, iterations=1, lam=0.5):
        for fragment_id in self._select(fragments):
            mesh = laplacian_smooth(self._mesh(fragment_id), iterations, lam)
            self.meshes[fragment_id] = mesh
            self._save(mesh, 'smoothed', f'{fragment_id}.ply')

    def task_fit_rims(self, fragments=None, refine=True):
        ids = self._select(fragments)
        records, circles = [], []
        for fragment_id in ids:
            self.fragment = fragment_id
            rims = self.rims.get(fragment_id, [])
            if fragments is not None and not rims:
                raise ValueError(f'Fragment {fragment_id} has no rims')
            for index, points in enumerate(rims):
                fit = fit_circle(points, refine=refine)
                if fit.refinement_failed:
                    logger.warning('Rim %d of %s: refinement diverged, '
                                   'keeping the algebraic circle', index,
                                   fragment_id)
                circles.append(fit.circle)
                records.append({'fragment': fragment_id, 'rim': index,
                                **fit.as_dict()})
        if not circles:
            raise ValueError('No rim selections to fit')
        self.circles = circles
        dump_json(records, self._path('rims.json'))

    def task_skeleton(self, open_bottom=False):
        self.skeleton = build_skeleton(self.circles,
                                       bottom_closed=not open_bottom)
        write_skeleton_csv(self.skeleton, self._path('skeleton.csv'))

    def task_revolve(self, segments=None):
        self.vessel = revolve(self._need_skeleton(),
                              self._segments(segments))
        self._save(self.vessel, 'revolve.ply')

    def task_hull_volume(self, segments=None):
        skeleton = self._need_skeleton()
        segments = self._segments(segments)
        hull, _ = skeleton_hull_volume(skeleton, segments)
        comparison = compare_volumes(skeleton, segments)
        self._save(hull, 'hull.ply')
        dump_json({**comparison.as_dict(),
                   'bottom_closed': skeleton.bottom_closed},
                  self._path('volumes.json'))
        self.metrics.update(
            hull_volume_cm3=comparison.hull_cm3,
            hull_overestimate_pct=comparison.hull_overestimate_pct)

    def task_align_z(self, moving, fixed, theta_steps=None, dz_range=None,
                     dz_steps=None, objective='mean'):
        fixed_mesh = self._mesh(fixed)
        moving_mesh = self._mesh(moving)
        self.alignment = align_z(
            moving_mesh, fixed_mesh, theta_steps,
            None if dz_range is None else tuple(dz_range), dz_steps,
            objective,
        )
        self.aligned_pair = (moving, fixed)
        dump_json({'moving': moving, 'fixed': fixed,
                   **self.alignment.as_dict()},
                  self._path('alignment.json'))

    def task_merge(self, inner, outer, id='merged'):
        if self.alignment is None:
            raise ValueError('merge needs an align_z task first')
        if self.aligned_pair != (inner, outer):
            raise ValueError(f'align_z ran on {self.aligned_pair}, not '
                             f'({inner!r}, {outer!r})')
        for fragment_id in (inner, outer):
            if fragment_id not in self.calibrations:
                self.fragment = fragment_id
                raise ValueError(f'merge needs calibrated shells; '
                                 f'{fragment_id} has no calibration')
        check_consistent(self.calibrations[inner], self.calibrations[outer])
        if id in self.meshes and id not in (inner, outer):
            raise ValueError(f'Fragment id {id!r} is already taken')
        merged = merge_shells(self._mesh(inner), self._mesh(outer),
                              self.alignment)
        moved = [self.alignment.transform.apply(points)
                 for points in self.rims.pop(inner)]
        rims = moved + self.rims.pop(outer)
        calibration = self.calibrations[outer]
        for fragment_id in (inner, outer):
            del self.meshes[fragment_id]
            self.calibrations.pop(fragment_id)
        self.meshes[id] = merged
        self.rims[id] = rims
        self.calibrations[id] = calibration
        self._save(merged, 'merged.ply')

    def task_icp(self, moving, fixed, max_iterations=None):
        fixed_mesh = self._mesh(fixed)
        moving_mesh = self._mesh(moving)
        result = icp_rigid(moving_mesh, fixed_mesh,
                           self.seed_poses.get(moving), max_iterations)
        if not result.converged:
            logger.warning('ICP of %s onto %s stopped after %d iterations '
                           'without converging', moving, fixed,
                           result.iterations)
        self._move(moving, result.transform)
        self.poses[moving] = result
        dump_json([{'fragment': fragment_id,
                    **self.poses[fragment_id].transform.as_dict()}
                   for fragment_id in sorted(self.poses)],
                  self._path('poses.json'))
        dump_json({fragment_id: fit.as_dict()
                   for fragment_id, fit in sorted(self.poses.items())},
                  self._path('icp.json'))

    def task_poisson(self, fragments=None, grid=None, padding=None, k=None,
                     sheet='all'):
        ids = self._select(fragments)
        reconstruction = reconstruct_vessel(
            [self.meshes[i] for i in ids],
            self.grid if grid is None else grid, padding, k, sheet,
        )
        self.vessel = reconstruction.mesh
        self._save(self.vessel, 'poisson.ply')
        dump_json({**reconstruction.as_dict(), 'fragments': ids,
                   'sheet': sheet}, self._path('poisson.json'))

    def task_volume(self, fix_orientation=False):
        mesh = self._vessel()
        if fix_orientation:
            mesh = orient_fix(mesh)
            self.vessel = mesh
        diagnostics = diagnose(mesh)
        volume = enclosed_volume(mesh)
        self.metrics.update(volume_cm3=volume,
                            surface_count=mesh.triangle_count,
                            vertex_count=mesh.vertex_count)
        dump_json({**diagnostics.as_dict(), 'volume_cm3': volume},
                  self._path('volume.json'))

    def task_support(self, fragments=None, shell=None, clearance=None,
                     voxel=None, label='', label_region=None,
                     label_depth=None):
        vessel = self._vessel()
        ids = self._select(fragments)
        spec = SupportSpec(shell_thickness=shell, clearance=clearance,
                           voxel_size=voxel, label_text=label,
                           label_depth=label_depth,
                           label_region=label_region)
        try:
            result = make_support(vessel, [self.meshes[i] for i in ids],
                                  spec, ids)
        except FragmentProtrusionError as exc:
            self.fragment = next(fragment_id
                                 for fragment_id, value in exc.report
                                 if value > spec.clearance)
            raise
        self.solid = result.solid
        self.printable = result.mesh
        self._save(result.mesh, 'support.stl')
        self._path('protrusion.csv').write_text(result.protrusion_csv())
        dump_json({'spec': spec.as_dict(), **result.as_dict()},
                  self._path('support.json'))

    def task_engrave(self, text, region, depth=None):
        if self.solid is None:
            raise ValueError('engrave needs a support task first')
        engraved = engrave_label(self.solid, text, region, depth)
        removed = self.solid.count - engraved.count
        self.solid = engraved
        self.printable = engraved.to_mesh()
        self._save(self.printable, 'support-engraved.stl')
        dump_json({'text': text, 'removed_voxels': removed,
                   'volume_cm3': enclosed_volume(self.printable)},
                  self._path('engrave.json'))

    def task_split(self, build=None, margin=None, seam_axis='auto'):
        if self.printable is not None:
            mesh, stem = self.printable, 'support'
        else:
            mesh, stem = self._vessel(), 'vessel'
        self.parts = split_for_build(mesh, build, seam_axis, margin)
        summary = []
        for number, part in enumerate(self.parts, start=1):
            name = f'{stem}-part-{number:02d}.stl'
            self._save(part, 'parts', name)
            low, high = part.bounds
            summary.append({'path': f'parts/{name}',
                            'volume_cm3': enclosed_volume(part),
                            'extents_mm': [float(x) for x in high - low]})
        dump_json(summary, self._path('parts.json'))

    def metrics_rows(self):
        """One row for the project's vessel once its volume is known."""
        if 'volume_cm3' not in self.metrics:
            logger.warning('No volume task ran; the report has no rows')
            return []
        return [MetricsRow(name=self.project.name,
                           **self.project.metadata, **self.metrics)]

    def write_report(self, rows):
        dump_json([row.as_dict() for row in rows],
                  self._path('metrics.json'))
        self._path('report.csv').write_text(render_csv(rows))
        self._path('report.txt').write_text(render_table(rows))

    def timings_csv(self):
        """Per-task wall clock of this run; varies between runs."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['index', 'task', 'pipeline wall-clock (s)'])
        for index, name, seconds in self.timings:
            writer.writerow(['' if index is None else index, name,
                             f'{seconds:.3f}'])
        return buffer.getvalue()
