"""Byte-stable JSON export of a tiling.

Schema:
    {"spec": [4, 3, 6],
     "depth": D,
     "cells": [{"placement": [16 row-major doubles],
                "depth": d,
                "color": 0..7,
                "facet": {"axis": 1..4, "sign": +-1}}, ...],
     "adjacency": [[index-or-null x 6], ...]}   # face order +X,-X,+Y,-Y,+Z,-Z

Doubles are written with up to 17 significant digits (%.17g), which
round-trips exactly; the writer is hand-rolled so two exports of the same
tiling are byte-identical.
"""

from io import StringIO

SCHEMA_DOC = __doc__


def _fmt(x):
    return "%.17g" % (float(x) + 0.0)


def tiling_json_bytes(tiling):
    out = StringIO()
    out.write('{"spec":[4,3,6],"depth":%d,"cells":[' % tiling.max_depth)
    for i, cell in enumerate(tiling.cells):
        if i:
            out.write(",")
        placement = ",".join(_fmt(v) for v in cell.placement.ravel())
        out.write('{"placement":[%s],"depth":%d,"color":%d,'
                  '"facet":{"axis":%d,"sign":%d}}'
                  % (placement, cell.depth, cell.color_index,
                     cell.color_state.facet_axis, cell.color_state.facet_sign))
    out.write('],"adjacency":[')
    for i, row in enumerate(tiling.adjacency):
        if i:
            out.write(",")
        out.write("[%s]" % ",".join("null" if n is None else str(n) for n in row))
    out.write("]}\n")
    return out.getvalue().encode("ascii")
