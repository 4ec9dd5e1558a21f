"""
Table renderers for the management commands.

Output is deterministic: keys keep their serializer order and every float
is written with 17 significant digits, so identical runs are byte-identical.
"""
import csv
import io
import json
import math

from rest_framework.renderers import BaseRenderer


def format_float(value):
    if math.isnan(value):
        return 'NaN'
    if math.isinf(value):
        return 'Infinity' if value > 0 else '-Infinity'
    return format(value, '.17g')


def _encode(value):
    if value is None:
        return 'null'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        return '{' + ', '.join(f'{json.dumps(str(k))}: {_encode(v)}' for k, v in value.items()) + '}'
    if isinstance(value, (list, tuple)):
        return '[' + ', '.join(_encode(v) for v in value) + ']'
    raise TypeError(f'Cannot render {type(value).__name__}')


class TableJSONRenderer(BaseRenderer):
    """{"meta": {...}, "rows": [...]}, one row per line."""
    media_type = 'application/json'
    format = 'json'
    charset = 'utf-8'

    def render(self, data, accepted_media_type=None, renderer_context=None):
        rows = ',\n    '.join(_encode(row) for row in data['rows'])
        body = f'{{"meta": {_encode(data["meta"])},\n  "rows": [\n    {rows}\n  ]}}\n' if rows else \
            f'{{"meta": {_encode(data["meta"])},\n  "rows": []}}\n'
        return body


class TableCSVRenderer(BaseRenderer):
    """Header line from the first row's keys; meta is not written."""
    media_type = 'text/csv'
    format = 'csv'
    charset = 'utf-8'

    def render(self, data, accepted_media_type=None, renderer_context=None):
        rows = data['rows']
        buffer = io.StringIO()
        if not rows:
            return ''
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(list(rows[0].keys()))
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, float) else v for v in row.values()])
        return buffer.getvalue()


RENDERERS = {
    'json': TableJSONRenderer(),
    'csv': TableCSVRenderer(),
}
