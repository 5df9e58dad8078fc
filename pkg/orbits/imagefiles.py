"""
Reading and writing n-pointed images.

CSV: one point per line, comma separated, optional single header row.
JSON: {"points": [[...], ...], "labels": [...]}; labels are carried
through untouched. Numbers are written with 17 significant digits so a
CSV ↔ JSON round trip is bit exact.
"""

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import OrbitError, ParseError
from .geometry import LabeledImage
from .records import format_float

logger = logging.getLogger('orbit_shapes')

FORMATS = ('csv', 'json')


@dataclass(frozen=True)
class ImageFile:
    path: Path
    format: str

    @classmethod
    def for_path(cls, path, fmt: Optional[str] = None) -> 'ImageFile':
        path = Path(path)
        if fmt is None:
            fmt = 'csv' if path.suffix.lower() == '.csv' else 'json'
        if fmt not in FORMATS:
            raise ParseError(f"Unknown image format {fmt!r}", path=str(path))
        return cls(path=path, format=fmt)


def _parse_number(text: str, path: str, line: int, field: int) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(f"not a number: {text.strip()!r}", path=path, line=line, field=field) from None
    if not np.isfinite(value):
        raise ParseError(f"non-finite value {text.strip()!r}", path=path, line=line, field=field)
    return value


def parse_csv(text: str, path: str = '<csv>', header: bool = False) -> LabeledImage:
    rows: List[List[float]] = []
    width = None
    for line_no, record in enumerate(csv.reader(text.splitlines()), start=1):
        if header and line_no == 1:
            continue
        if not record or all(not cell.strip() for cell in record):
            continue
        values = [_parse_number(cell, path, line_no, field) for field, cell in enumerate(record, start=1)]
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise ParseError(f"expected {width} fields, found {len(values)}", path=path, line=line_no)
        rows.append(values)
    if not rows:
        raise ParseError("no points found", path=path)
    return LabeledImage(np.array(rows, dtype=float))


def parse_json(text: str, path: str = '<json>') -> Tuple[LabeledImage, Optional[List[str]]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=path, line=e.lineno, field=e.colno) from None
    if not isinstance(payload, dict) or 'points' not in payload:
        raise ParseError('expected an object with a "points" array', path=path)
    image = points_to_image(payload['points'], path=path)
    labels = payload.get('labels')
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != image.n or not all(isinstance(x, str) for x in labels):
            raise ParseError(f'"labels" must be a list of {image.n} strings', path=path)
    return image, labels


def points_to_image(points, path: str = '<points>') -> LabeledImage:
    """Validate a nested list of numbers as an n×k image; used by files and HTTP bodies."""
    if not isinstance(points, list) or not points:
        raise ParseError('"points" must be a non-empty array of arrays', path=path)
    width = None
    rows = []
    for index, row in enumerate(points, start=1):
        if not isinstance(row, list) or not row:
            raise ParseError(f"point {index} is not a non-empty array", path=path, line=index)
        coordinates = []
        for field, value in enumerate(row, start=1):
            numeric = isinstance(value, (int, float)) and not isinstance(value, bool)
            try:
                number = float(value) if numeric else np.nan
            except OverflowError:
                number = np.inf
            if not np.isfinite(number):
                raise ParseError(f"not a finite number: {value!r}", path=path, line=index, field=field)
            coordinates.append(number)
        if width is None:
            width = len(coordinates)
        elif len(coordinates) != width:
            raise ParseError(f"expected {width} coordinates, found {len(coordinates)}", path=path, line=index)
        rows.append(coordinates)
    return LabeledImage(np.array(rows, dtype=float))


def read_image(path, fmt: Optional[str] = None, header: bool = False) -> Tuple[LabeledImage, Optional[List[str]]]:
    """Load an image and its optional labels."""
    image_file = ImageFile.for_path(path, fmt)
    try:
        text = image_file.path.read_text(encoding='utf-8')
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", path=str(image_file.path)) from None
    if image_file.format == 'csv':
        image, labels = parse_csv(text, str(image_file.path), header=header), None
    else:
        image, labels = parse_json(text, str(image_file.path))
    logger.debug(f"Read {image_file.path} as {image_file.format}: n={image.n}, k={image.k}")
    return image, labels


def render_csv(image: LabeledImage) -> str:
    return ''.join(','.join(format_float(v) for v in row) + '\n' for row in image.points)


def render_json(image: LabeledImage, labels: Optional[List[str]] = None) -> str:
    rows = ',\n'.join('    [' + ', '.join(format_float(v) for v in row) + ']' for row in image.points)
    body = '{\n  "points": [\n' + rows + '\n  ]'
    if labels is not None:
        body += ',\n  "labels": ' + json.dumps(list(labels))
    return body + '\n}\n'


def write_image(image: LabeledImage, path, fmt: Optional[str] = None,
                labels: Optional[List[str]] = None) -> Path:
    image_file = ImageFile.for_path(path, fmt)
    text = render_csv(image) if image_file.format == 'csv' else render_json(image, labels)
    image_file.path.write_text(text, encoding='utf-8')
    return image_file.path


def read_manifest(path) -> List[Path]:
    """{"images": ["path", ...]}; relative paths resolve against the manifest's directory."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
    except OSError as e:
        raise ParseError(f"cannot read manifest: {e.strerror}", path=str(path)) from None
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=str(path), line=e.lineno, field=e.colno) from None
    images = payload.get('images') if isinstance(payload, dict) else None
    if not isinstance(images, list) or not images or not all(isinstance(p, str) for p in images):
        raise ParseError('expected an object with a non-empty "images" array of paths', path=str(path))
    return [(path.parent / entry) if not Path(entry).is_absolute() else Path(entry) for entry in images]


def read_images(paths, header: bool = False) -> List[LabeledImage]:
    """Read every file or fail, naming the index of the first bad one."""
    images = []
    for index, entry in enumerate(paths):
        try:
            image, _ = read_image(entry, header=header)
        except OrbitError as e:
            logger.error(f"Image {index} ({entry}) failed: {e}")
            raise ParseError(f"image {index}: {e}") from e
        images.append(image)
    return images
