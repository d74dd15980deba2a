"""Exact computations on generalized Bratteli diagrams.

Diagram specs are plain dicts such as ``{"family": "binfty"}`` or
``{"family": "odometer-io", "params": {"rule": "pow2"}}``. Exact values come
back as :class:`fractions.Fraction`; statistics stay floats.
"""

import json
import re
from fractions import Fraction

from . import _core
from ._core import TruncationIncomplete

__all__ = [
    "TruncationIncomplete",
    "heights",
    "stochastic_matrix",
    "binfty_limit_vector",
    "pascal_limit_vector",
    "cylinder_mass",
    "tower_mass",
    "verify_invariance",
    "verify_probability",
    "sample_paths",
    "closed_form_extension",
    "odometer_extension",
    "nu_a_extension",
    "nu_p_extension",
    "bk_decay",
    "vershik_step",
    "bijection_check",
    "odometer_check",
]

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def _exact(obj):
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return Fraction(obj)
    if isinstance(obj, list):
        return [_exact(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _exact(v) for k, v in obj.items()}
    return obj


def _load(text):
    return _exact(json.loads(text))


def _spec(spec):
    if isinstance(spec, str):
        spec = {"family": spec}
    return json.dumps(spec)


def _measure(measure):
    m = dict(measure)
    for key in ("a", "p"):
        if key in m:
            m[key] = str(m[key])
    if "d" in m:
        m["d"] = {str(c): str(w) for c, w in dict(m["d"]).items()}
    return json.dumps(m)


def _vertex(v):
    if isinstance(v, dict):
        return json.dumps({str(c): m for c, m in v.items()})
    return json.dumps(v)


def heights(spec, level, window):
    return _load(_core.heights(_spec(spec), level, window))


def stochastic_matrix(spec, level, window):
    return _load(_core.stochastic_matrix(_spec(spec), level, window))


def binfty_limit_vector(a, n, max_rank=30):
    return _load(_core.binfty_limit_vector(str(a), n, max_rank))


def pascal_limit_vector(d, n):
    return _load(_core.pascal_limit_vector([(int(c), str(w)) for c, w in dict(d).items()], n))


def cylinder_mass(measure, n, vertex):
    return Fraction(_core.cylinder_mass(_measure(measure), n, _vertex(vertex)))


def tower_mass(measure, n, vertex):
    return Fraction(_core.tower_mass(_measure(measure), n, _vertex(vertex)))


def verify_invariance(measure, n_max, window):
    return _load(_core.verify_invariance(_measure(measure), n_max, window))


def verify_probability(measure, n, window):
    return _load(_core.verify_probability(_measure(measure), n, window))


def sample_paths(d, depth, count, seed):
    return json.loads(_core.sample_paths([(int(c), float(w)) for c, w in dict(d).items()], depth, count, seed))


def closed_form_extension(case, a, k):
    return Fraction(_core.closed_form_extension(case, str(a), k))


def odometer_extension(rule, i=1, N=60):
    return _load(_core.odometer_extension(rule, i, N))


def nu_a_extension(a, k, N=60):
    return _load(_core.nu_a_extension(str(a), k, N))


def nu_p_extension(p, k, N=60):
    return _load(_core.nu_p_extension(str(p), k, N))


def bk_decay(k, m_max):
    return _load(_core.bk_decay(k, m_max))


def vershik_step(spec, order, path, inverse=False):
    return json.loads(_core.vershik_step(_spec(spec), order, json.dumps(path), inverse))


def bijection_check(spec, order, depth, window):
    return json.loads(_core.bijection_check(_spec(spec), order, depth, window))


def odometer_check(depth):
    return json.loads(_core.odometer_check(depth))
