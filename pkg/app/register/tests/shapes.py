"""Asymmetric test solids for registration."""

from synth.primitives import icosphere


def bumped_ellipsoid():
    """Ellipsoid with a bulge on +x so no rotation maps it to itself."""
    sphere = icosphere(1.0, 3)
    vertices = sphere.vertices * (30.0, 20.0, 15.0)
    bump = sphere.vertices[:, 0] > 0.8
    vertices[bump] *= 1.3
    lobe = sphere.vertices[:, 1] > 0.85
    vertices[lobe] *= 1.15
    return sphere.with_vertices(vertices)
