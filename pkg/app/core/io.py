"""
OBJ, PLY and STL readers and writers.
"""

import logging
import struct
from pathlib import Path

import numpy as np

from core.exceptions import MeshFormatError, MeshIOError
from core.mesh import TriangleMesh

logger = logging.getLogger(__name__)

FORMATS = ('obj', 'ply', 'stl')

STL_FACET = np.dtype([
    ('normal', '<f4', (3,)),
    ('corners', '<f4', (3, 3)),
    ('attribute', '<u2'),
])

PLY_TYPES = {
    'char': 'i1', 'int8': 'i1',
    'uchar': 'u1', 'uint8': 'u1',
    'short': 'i2', 'int16': 'i2',
    'ushort': 'u2', 'uint16': 'u2',
    'int': 'i4', 'int32': 'i4',
    'uint': 'u4', 'uint32': 'u4',
    'float': 'f4', 'float32': 'f4',
    'double': 'f8', 'float64': 'f8',
}


def detect_format(path):
    """Guess the format from the file suffix."""
    suffix = Path(path).suffix.lower().lstrip('.')
    if suffix not in FORMATS:
        raise MeshFormatError(f'Cannot infer mesh format from {suffix!r}',
                              path=path)
    return suffix


def load_mesh(path, format='auto'):
    """
    Read a mesh file into a TriangleMesh.

    STL stores bare facets, so shared vertices are rebuilt from identical
    corner coordinates and numbered by first appearance. An STL round trip
    keeps the triangles only up to that vertex renumbering.
    """
    path = Path(path)
    fmt = detect_format(path) if format == 'auto' else format
    if fmt not in FORMATS:
        raise ValueError(f'Unsupported mesh format {fmt!r}')
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise MeshIOError(f'Cannot read {path}: {exc}') from exc

    reader = {'obj': _read_obj, 'ply': _read_ply, 'stl': _read_stl}[fmt]
    mesh = reader(data, path)
    if mesh.triangle_count == 0:
        raise MeshFormatError('Mesh has no triangles', path=path)
    logger.debug('Loaded %s: %d vertices, %d triangles', path,
                 mesh.vertex_count, mesh.triangle_count)
    return mesh


def save_mesh(mesh, path, format='auto', binary=True):
    """
    Write a mesh; PLY and STL are binary unless binary is False.

    OBJ, PLY and ASCII STL keep coordinates to full double precision.
    Binary STL stores float32 corners, about 1e-7 relative, which misses
    a 1e-6 mm round trip once coordinates pass roughly 10 mm. Write
    ASCII STL where that bound matters.
    """
    path = Path(path)
    fmt = detect_format(path) if format == 'auto' else format
    if fmt not in FORMATS:
        raise ValueError(f'Unsupported mesh format {fmt!r}')
    writer = {'obj': _obj_bytes, 'ply': _ply_bytes, 'stl': _stl_bytes}[fmt]
    payload = writer(mesh, binary)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as exc:
        raise MeshIOError(f'Cannot write {path}: {exc}') from exc
    logger.debug('Saved %s (%s, %d triangles)', path, fmt,
                 mesh.triangle_count)


def _build(vertices, faces, path, normals=None):
    """Validate indices and fan-triangulate polygon faces."""
    vertices = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    triangles = []
    for line, face in faces:
        if len(face) < 3:
            raise MeshFormatError('Face needs at least 3 vertices',
                                  line=line, path=path)
        for index in face:
            if index < 0 or index >= len(vertices):
                raise MeshFormatError(f'Vertex index {index} out of range',
                                      line=line, path=path)
        for k in range(1, len(face) - 1):
            triangle = (face[0], face[k], face[k + 1])
            if len(set(triangle)) == 3:
                triangles.append(triangle)
    if not np.all(np.isfinite(vertices)):
        raise MeshFormatError('Non-finite vertex coordinate', path=path)
    return TriangleMesh(vertices, np.array(triangles, dtype=np.int64)
                        .reshape(-1, 3), normals)


# OBJ

def _read_obj(data, path):
    vertices, faces = [], []
    text = data.decode('utf-8', errors='replace')
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split('#', 1)[0].split()
        if not tokens:
            continue
        if tokens[0] == 'v':
            if len(tokens) < 4:
                raise MeshFormatError('Vertex needs 3 coordinates',
                                      line=number, path=path)
            try:
                vertices.append([float(x) for x in tokens[1:4]])
            except ValueError:
                raise MeshFormatError('Malformed vertex coordinate',
                                      line=number, path=path) from None
        elif tokens[0] == 'f':
            face = []
            for token in tokens[1:]:
                head = token.split('/', 1)[0]
                try:
                    index = int(head)
                except ValueError:
                    raise MeshFormatError(f'Malformed face index {token!r}',
                                          line=number, path=path) from None
                if index == 0:
                    raise MeshFormatError('Face index 0 is invalid in OBJ',
                                          line=number, path=path)
                # Negative indices count back from the latest vertex.
                face.append(index - 1 if index > 0
                            else len(vertices) + index)
            faces.append((number, face))
    return _build(vertices, faces, path)


def _obj_bytes(mesh, binary):
    lines = ['# vessel toolkit OBJ, units mm']
    lines.extend('v %.17g %.17g %.17g' % tuple(v) for v in mesh.vertices)
    lines.extend('f %d %d %d' % tuple(t + 1) for t in mesh.triangles)
    return ('\n'.join(lines) + '\n').encode('ascii')


# PLY

def _read_ply(data, path):
    end = data.find(b'end_header')
    if not data.startswith(b'ply') or end < 0:
        raise MeshFormatError('Missing PLY header', line=1, path=path)
    newline = data.find(b'\n', end)
    body_start = newline + 1 if newline >= 0 else len(data)
    header = data[:end].decode('ascii', errors='replace').splitlines()

    fmt = None
    elements = []
    for number, line in enumerate(header, start=1):
        tokens = line.split()
        if not tokens or tokens[0] in ('ply', 'comment', 'obj_info'):
            continue
        if tokens[0] == 'format':
            fmt = tokens[1] if len(tokens) > 1 else None
        elif tokens[0] == 'element':
            if len(tokens) != 3:
                raise MeshFormatError('Malformed element line',
                                      line=number, path=path)
            elements.append({'name': tokens[1], 'count': int(tokens[2]),
                             'properties': []})
        elif tokens[0] == 'property':
            if not elements:
                raise MeshFormatError('Property before element',
                                      line=number, path=path)
            if tokens[1] == 'list':
                if len(tokens) != 5:
                    raise MeshFormatError('Malformed list property',
                                          line=number, path=path)
                prop = ('list', tokens[4], tokens[2], tokens[3])
            else:
                prop = ('scalar', tokens[2], tokens[1], None)
            for type_name in prop[2:]:
                if type_name is not None and type_name not in PLY_TYPES:
                    raise MeshFormatError(f'Unknown PLY type {type_name}',
                                          line=number, path=path)
            elements[-1]['properties'].append(prop)
        else:
            raise MeshFormatError(f'Unexpected header keyword {tokens[0]}',
                                  line=number, path=path)

    if fmt == 'ascii':
        tables = _read_ply_ascii(data[body_start:], elements, path,
                                 len(header) + 2)
    elif fmt in ('binary_little_endian', 'binary_big_endian'):
        endian = '<' if fmt == 'binary_little_endian' else '>'
        tables = _read_ply_binary(data[body_start:], elements, endian, path)
    else:
        raise MeshFormatError(f'Unsupported PLY format {fmt}', path=path)

    vertex = tables.get('vertex')
    if vertex is None:
        raise MeshFormatError('PLY has no vertex element', path=path)
    try:
        vertices = np.column_stack([vertex['x'], vertex['y'], vertex['z']])
    except KeyError:
        raise MeshFormatError('PLY vertex lacks x, y or z',
                              path=path) from None
    normals = None
    if all(key in vertex for key in ('nx', 'ny', 'nz')):
        normals = np.column_stack([vertex['nx'], vertex['ny'], vertex['nz']])
    face = tables.get('face', {})
    lists = face.get('vertex_indices', face.get('vertex_index', []))
    if isinstance(lists, np.ndarray):
        if len(lists) and (lists.min() < 0 or lists.max() >= len(vertices)):
            raise MeshFormatError('Vertex index out of range', path=path)
        keep = ((lists[:, 0] != lists[:, 1]) & (lists[:, 1] != lists[:, 2])
                & (lists[:, 0] != lists[:, 2]))
        return TriangleMesh(vertices, lists[keep], normals)
    return _build(vertices, [(None, list(map(int, f))) for f in lists],
                  path, normals)


def _read_ply_ascii(body, elements, path, first_line):
    lines = body.decode('ascii', errors='replace').splitlines()
    cursor = 0
    tables = {}
    for element in elements:
        columns = {prop[1]: [] for prop in element['properties']}
        for _ in range(element['count']):
            while cursor < len(lines) and not lines[cursor].strip():
                cursor += 1
            if cursor >= len(lines):
                raise MeshFormatError(
                    f'Unexpected end of data in element {element["name"]}',
                    line=first_line + cursor, path=path)
            tokens = lines[cursor].split()
            position = 0
            try:
                for kind, name, type_name, index_type in \
                        element['properties']:
                    if kind == 'list':
                        count = int(tokens[position])
                        values = tokens[position + 1:position + 1 + count]
                        if len(values) != count:
                            raise IndexError
                        columns[name].append([int(v) for v in values])
                        position += 1 + count
                    else:
                        columns[name].append(float(tokens[position]))
                        position += 1
            except (ValueError, IndexError):
                raise MeshFormatError('Malformed element data',
                                      line=first_line + cursor,
                                      path=path) from None
            cursor += 1
        tables[element['name']] = columns
    return tables


def _read_ply_binary(body, elements, endian, path):
    offset = 0
    tables = {}
    for element in elements:
        props = element['properties']
        count = element['count']
        if all(kind == 'scalar' for kind, *_ in props):
            dtype = np.dtype([(name, endian + PLY_TYPES[type_name])
                              for _, name, type_name, _ in props])
            size = dtype.itemsize * count
            if offset + size > len(body):
                raise MeshFormatError(
                    f'Truncated binary element {element["name"]}', path=path)
            array = np.frombuffer(body, dtype=dtype, count=count,
                                  offset=offset)
            offset += size
            tables[element['name']] = {name: array[name].astype(np.float64)
                                       for name in dtype.names}
            continue

        fast = _read_triangle_lists(body, offset, props, count, endian)
        if fast is not None:
            columns, offset = fast
            tables[element['name']] = columns
            continue

        columns = {prop[1]: [] for prop in props}
        try:
            for _ in range(count):
                for kind, name, type_name, index_type in props:
                    if kind == 'list':
                        count_fmt = endian + PLY_TYPES[type_name]
                        (length,) = struct.unpack_from(count_fmt, body,
                                                       offset)
                        offset += struct.calcsize(count_fmt)
                        item_fmt = endian + PLY_TYPES[index_type] * length
                        columns[name].append(
                            list(struct.unpack_from(item_fmt, body, offset)))
                        offset += struct.calcsize(item_fmt)
                    else:
                        item_fmt = endian + PLY_TYPES[type_name]
                        (value,) = struct.unpack_from(item_fmt, body, offset)
                        columns[name].append(value)
                        offset += struct.calcsize(item_fmt)
        except struct.error:
            raise MeshFormatError(
                f'Truncated binary element {element["name"]}',
                path=path) from None
        tables[element['name']] = columns
    return tables


def _read_triangle_lists(body, offset, props, count, endian):
    """Vectorised read of an element holding only 3-item lists."""
    if len(props) != 1 or props[0][0] != 'list' or count == 0:
        return None
    _, name, count_type, index_type = props[0]
    dtype = np.dtype([('n', endian + PLY_TYPES[count_type]),
                      ('i', endian + PLY_TYPES[index_type], (3,))])
    size = dtype.itemsize * count
    if offset + size > len(body):
        return None
    array = np.frombuffer(body, dtype=dtype, count=count, offset=offset)
    if not np.all(array['n'] == 3):
        return None
    return {name: array['i'].astype(np.int64)}, offset + size


def _ply_bytes(mesh, binary):
    has_normals = mesh.normals is not None
    header = [
        'ply',
        'format %s 1.0' % ('binary_little_endian' if binary else 'ascii'),
        'comment vessel toolkit, units mm',
        f'element vertex {mesh.vertex_count}',
        'property double x', 'property double y', 'property double z',
    ]
    if has_normals:
        header += ['property double nx', 'property double ny',
                   'property double nz']
    header += [
        f'element face {mesh.triangle_count}',
        'property list uchar int vertex_indices',
        'end_header',
    ]
    head = ('\n'.join(header) + '\n').encode('ascii')
    columns = mesh.vertices
    if has_normals:
        columns = np.hstack([mesh.vertices, mesh.normals])

    if binary:
        faces = np.zeros(mesh.triangle_count,
                         dtype=[('n', 'u1'), ('i', '<i4', (3,))])
        faces['n'] = 3
        faces['i'] = mesh.triangles
        return (head + columns.astype('<f8').tobytes()
                + faces.tobytes())

    lines = [' '.join('%.17g' % x for x in row) for row in columns]
    lines += ['3 %d %d %d' % tuple(t) for t in mesh.triangles]
    return head + ('\n'.join(lines) + '\n').encode('ascii')


# STL

def _read_stl(data, path):
    if len(data) >= 84:
        (count,) = struct.unpack_from('<I', data, 80)
        if 84 + count * STL_FACET.itemsize == len(data):
            facets = np.frombuffer(data, dtype=STL_FACET, count=count,
                                   offset=84)
            corners = facets['corners'].astype(np.float64)
            return _from_corners(corners, path)
    if data.lstrip().lower().startswith(b'solid'):
        return _read_stl_ascii(data, path)
    raise MeshFormatError('Not a binary or ASCII STL file', path=path)


def _read_stl_ascii(data, path):
    corners = []
    facet = []
    for number, raw in enumerate(data.decode('ascii', 'replace')
                                 .splitlines(), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == 'vertex':
            try:
                facet.append([float(x) for x in tokens[1:4]])
            except ValueError:
                raise MeshFormatError('Malformed vertex', line=number,
                                      path=path) from None
            if len(tokens) != 4:
                raise MeshFormatError('Vertex needs 3 coordinates',
                                      line=number, path=path)
        elif tokens[0] == 'endfacet':
            if len(facet) != 3:
                raise MeshFormatError('Facet needs 3 vertices', line=number,
                                      path=path)
            corners.append(facet)
            facet = []
    return _from_corners(np.array(corners, dtype=np.float64)
                         .reshape(-1, 3, 3), path)


def _from_corners(corners, path):
    """Share identical corner coordinates; facets carry no indices."""
    flat = corners.reshape(-1, 3)
    if len(flat) == 0:
        return TriangleMesh.empty()
    _, first, inverse = np.unique(flat, axis=0, return_index=True,
                                  return_inverse=True)
    inverse = inverse.reshape(-1)
    # Number shared vertices by first appearance in the facet list.
    order = np.argsort(first, kind='stable')
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    vertices = flat[np.sort(first)]
    triangles = rank[inverse].reshape(-1, 3)
    keep = ((triangles[:, 0] != triangles[:, 1])
            & (triangles[:, 1] != triangles[:, 2])
            & (triangles[:, 0] != triangles[:, 2]))
    if not np.all(keep):
        logger.warning('%s: dropped %d degenerate facets', path,
                       int((~keep).sum()))
    return TriangleMesh(vertices, triangles[keep])


def _stl_bytes(mesh, binary):
    corners = mesh.corners
    normals = mesh.face_normals
    if binary:
        facets = np.zeros(mesh.triangle_count, dtype=STL_FACET)
        facets['normal'] = normals
        facets['corners'] = corners
        header = b'vessel toolkit binary STL, units mm'.ljust(80, b' ')
        return (header + struct.pack('<I', mesh.triangle_count)
                + facets.tobytes())

    lines = ['solid vessel']
    for normal, facet in zip(normals, corners):
        lines.append('  facet normal %.9g %.9g %.9g' % tuple(normal))
        lines.append('    outer loop')
        lines.extend('      vertex %.17g %.17g %.17g' % tuple(v)
                     for v in facet)
        lines.append('    endloop')
        lines.append('  endfacet')
    lines.append('endsolid vessel')
    return ('\n'.join(lines) + '\n').encode('ascii')
