"""Merge of separately digitised inner and outer shells."""

import logging

from core.mesh import TriangleMesh

logger = logging.getLogger(__name__)


def merge_shells(inner, outer, alignment):
    """
    Move inner by the alignment and concatenate it with outer.

    Nothing is welded or remeshed; the implicit reconstruction closes the
    gap between the sheets.
    """
    if inner.is_empty or outer.is_empty:
        raise ValueError("merge_shells needs two non-empty meshes")
    moved = alignment.transform.apply_mesh(inner)
    merged = TriangleMesh.concatenate([moved, outer])
    logger.info('Merged shells: %d + %d vertices', inner.vertex_count,
                outer.vertex_count)
    return merged
