"""
Errors raised by the geometry toolkit.
"""


class VesselError(Exception):
    """Base class for toolkit errors."""


class MeshFormatError(VesselError, ValueError):
    """A mesh file does not parse under its declared format."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ''
        if path is not None:
            where = f'{path}'
        if line is not None:
            where = f'{where}:{line}' if where else f'line {line}'
        super().__init__(f'{where}: {message}' if where else message)


class MeshIOError(VesselError, OSError):
    """A mesh file cannot be read or written."""


class DegenerateGeometryError(VesselError, ValueError):
    """Input points span fewer dimensions than the operation needs."""

    NAMES = {0: 'coincident', 1: 'collinear', 2: 'coplanar'}

    def __init__(self, dimension, message=None):
        self.dimension = dimension
        label = self.NAMES.get(dimension, f'{dimension}-dimensional')
        super().__init__(
            message or f'Degenerate input: points are {label} '
                       f'(dimension {dimension})'
        )


class NotWatertightError(VesselError, ValueError):
    """The operation needs a closed surface."""

    def __init__(self, diagnostics, message=None):
        self.diagnostics = diagnostics
        super().__init__(
            message or 'Mesh is not watertight: '
                       f'{diagnostics.boundary_edge_count} boundary edges, '
                       f'{diagnostics.non_manifold_edge_count} non-manifold '
                       'edges'
        )


class OrientationError(VesselError, ValueError):
    """Triangle windings disagree across shared edges."""

    def __init__(self, diagnostics=None, message=None):
        self.diagnostics = diagnostics
        super().__init__(
            message or 'Mesh is not consistently oriented; '
                       'run orient_fix first'
        )


class NoCorrespondenceError(VesselError, ValueError):
    """Registration found no point pairs inside the rejection radius."""


class InfeasibleSplitError(VesselError, ValueError):
    """A mesh cross-section does not fit the printer build volume."""

    def __init__(self, axes, extents, limits):
        self.axes = tuple(axes)
        details = ', '.join(
            f'{axis}: {extent:.2f} mm > {limit:.2f} mm'
            for axis, extent, limit in zip(axes, extents, limits)
        )
        super().__init__(f'Cross-section exceeds the build volume ({details})')


class SplitVolumeError(VesselError, ValueError):
    """Split parts do not add up to the volume of the whole mesh."""

    def __init__(self, original, total, tolerance):
        self.original = original
        self.total = total
        super().__init__(
            f'Parts hold {total:.3f} cm3 but the mesh holds '
            f'{original:.3f} cm3 (tolerance {100 * tolerance:g}%)'
        )


class FragmentProtrusionError(VesselError, ValueError):
    """Fragments stick out of the vessel further than the clearance."""

    def __init__(self, report, clearance):
        self.report = report
        offenders = [
            f'{fragment_id} ({value:.3f} mm)'
            for fragment_id, value in report if value > clearance
        ]
        super().__init__(
            f'Fragments protrude beyond {clearance} mm clearance: '
            + ', '.join(offenders)
        )


class EmptyResultError(VesselError, ValueError):
    """An edit removed every triangle."""


class TaskError(VesselError):
    """A pipeline task failed; names the task and the fragment."""

    def __init__(self, task, index, fragment, cause):
        self.task = task
        self.index = index
        self.fragment = fragment
        self.cause = cause
        where = f' on fragment {fragment}' if fragment else ''
        super().__init__(f'Task {index} ({task}) failed{where}: '
                         f'{type(cause).__name__}: {cause}')

    def as_dict(self):
        return {
            'task': self.task,
            'index': self.index,
            'fragment': self.fragment,
            'error': type(self.cause).__name__,
            'message': str(self.cause),
        }
