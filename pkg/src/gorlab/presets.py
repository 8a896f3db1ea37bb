"""Built-in presentations, addressable from the command line as ``@name``."""
from __future__ import annotations

from .parser import parse_algebra

ALGEBRAS = {
    "sphere3": """\
name sphere3
gen e : 3
d e = 0
""",
    "sphere2": """\
name sphere2
gen a : 2
gen b : 3
d a = 0
d b = a^2
""",
    "cp2": """\
name cp2
gen a : 2
gen b : 5
d a = 0
d b = a^3
""",
    "circle": """\
name circle
gen u : 1
d u = 0
""",
    "example": """\
# (S^1 x S^5) # (S^3 x S^3), formal
name example
gen u : 1
gen z : 5
gen x : 3
gen y : 3
d u = 0
d z = 0
d x = 0
d y = 0
rel u*z - x*y
rel u*x
rel u*y
rel z*x
rel z*y
""",
    "wedge": """\
# S^3 v S^3, formal
name wedge
gen x : 3
gen y : 3
d x = 0
d y = 0
rel x*y
""",
    "truncated-poly": """\
name truncated-poly
gen x : 2
d x = 0
rel x^3
""",
}

EXTENSIONS = {
    "product-s3-s3": """\
name product-s3-s3
gen e : 3 block base
gen f : 3 block fiber
d e = 0
d f = 0
""",
    "circle-sphere": """\
name circle-sphere
gen u : 1 block base
gen e : 3 block fiber
d u = 0
d e = 0
""",
    "twisted-cp2": """\
# fiber generator killing the square of the base class
name twisted-cp2
gen a : 2 block base
gen b : 5 block base
gen z : 3 block fiber
d a = 0
d b = a^3
d z = a^2
""",
    "sphere-wedge": """\
# fiber: minimal model of S^3 v S^3 through degree 9
name sphere-wedge
gen e : 3 block base
gen w3_1 : 3 block fiber
gen w3_2 : 3 block fiber
gen w5_1 : 5 block fiber
gen w7_1 : 7 block fiber
gen w7_2 : 7 block fiber
gen w9_1 : 9 block fiber
gen w9_2 : 9 block fiber
gen w9_3 : 9 block fiber
d e = 0
d w3_1 = 0
d w3_2 = 0
d w5_1 = w3_1*w3_2
d w7_1 = w3_1*w5_1
d w7_2 = w3_2*w5_1
d w9_1 = w3_1*w7_1
d w9_2 = w3_2*w7_1 + w3_1*w7_2
d w9_3 = w3_2*w7_2
""",
}

PRESETS = {**ALGEBRAS, **EXTENSIONS}


def preset_text(name: str) -> str:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None


def preset(name: str, **kw):
    return parse_algebra(preset_text(name), **kw)


def example_algebra(**kw):
    return preset("example", **kw)
