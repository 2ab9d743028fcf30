"""JSON formats: group specs, function files, Fourier tables, reports.

Rationals travel as "p/q" strings, complexes as [re, im] pairs, matrices
as row-major nested lists.  Serialization is canonical (sorted keys) so
equal inputs and seeds give byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .errors import EucisoError, IncompatibleShapes
from .groups import GroupSpec, NormalForm, QuotientGroup
from .isometry import Isometry
from .fourier import FourierTable, PeriodicFunction


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))


def matrix_to_lists(m: np.ndarray) -> list:
    return [[float(x) for x in row] for row in np.atleast_2d(m)]


def complex_matrix_to_lists(m: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.atleast_2d(m)]


def complex_matrix_from_lists(rows) -> np.ndarray:
    return np.array([[complex(a, b) for a, b in row] for row in rows])


# -- group specs ---------------------------------------------------------------

def spec_to_dict(spec: GroupSpec) -> dict:
    return {
        "name": spec.name,
        "d1": spec.d1,
        "d2": spec.d2,
        "tol": spec.tol,
        "f_elements": [matrix_to_lists(f) for f in spec.f_elements],
        "t_lifts": [{"q": matrix_to_lists(g.q)} for g in spec.t_lifts],
        "p_reps": [{
            "q": matrix_to_lists(g.q),
            "p": [list(row) for row in g.p],
            "tau": [format_fraction(t) for t in g.tau],
        } for g in spec.p_reps],
    }


def spec_from_dict(data: dict) -> GroupSpec:
    try:
        d1, d2 = int(data["d1"]), int(data["d2"])
        tol = float(data.get("tol", 1e-9))
        f_elements = [np.array(f, dtype=float).reshape(d1, d1)
                      for f in data["f_elements"]]
        ident_p = tuple(tuple(int(i == j) for j in range(d2)) for i in range(d2))
        t_lifts = []
        for i, entry in enumerate(data["t_lifts"]):
            tau = tuple(Fraction(int(i == j)) for j in range(d2))
            t_lifts.append(Isometry(np.array(entry["q"], dtype=float).reshape(d1, d1),
                                    ident_p, tau))
        p_reps = []
        for entry in data["p_reps"]:
            p_reps.append(Isometry(
                np.array(entry["q"], dtype=float).reshape(d1, d1),
                entry["p"],
                [parse_fraction(t) for t in entry["tau"]]))
        return GroupSpec(str(data["name"]), d1, d2, f_elements, t_lifts, p_reps,
                         tol=tol)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise EucisoError(f"malformed group spec: {exc}") from exc


def load_spec(path: str) -> GroupSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def save_spec(spec: GroupSpec, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(canonical_json(spec_to_dict(spec)))


# -- periodic functions ---------------------------------------------------------

def function_to_dict(u: PeriodicFunction) -> dict:
    entries = []
    for i in sorted(u.values):
        nf = u.q.nf(i)
        entries.append({"n": list(nf.n), "f": nf.f, "p": nf.p,
                        "value": complex_matrix_to_lists(u.values[i])})
    return {"group": u.q.spec.name, "N": u.q.N,
            "shape": [u.shape[0], u.shape[1]], "entries": entries}


def function_from_dict(data: dict, q: QuotientGroup) -> PeriodicFunction:
    if data.get("group") not in (None, q.spec.name):
        raise IncompatibleShapes(
            f"function file is for group {data.get('group')!r}, not {q.spec.name!r}")
    if int(data["N"]) != q.N:
        raise IncompatibleShapes(f"function period {data['N']} != quotient N {q.N}")
    u = PeriodicFunction(q, tuple(data["shape"]))
    for entry in data["entries"]:
        nf = NormalForm(tuple(int(x) % q.N for x in entry["n"]),
                        int(entry["f"]), int(entry["p"]))
        u[q.index[nf]] = complex_matrix_from_lists(entry["value"])
    return u


def table_to_dict(t: FourierTable) -> dict:
    reps = t.irreps()
    return {
        "group": t.q.spec.name,
        "N": t.q.N,
        "shape": [t.shape[0], t.shape[1]],
        "seed": t.seed,
        "entries": [{"irrep": i, "dim": reps[i].dim,
                     "value": complex_matrix_to_lists(t.entries[i])}
                    for i in sorted(t.entries)],
    }


def table_from_dict(data: dict, q: QuotientGroup) -> FourierTable:
    if data.get("group") not in (None, q.spec.name):
        raise IncompatibleShapes(
            f"table file is for group {data.get('group')!r}, not {q.spec.name!r}")
    if int(data["N"]) != q.N:
        raise IncompatibleShapes(f"table period {data['N']} != quotient N {q.N}")
    t = FourierTable(q, tuple(data["shape"]), int(data.get("seed", 0)))
    for entry in data["entries"]:
        t.entries[int(entry["irrep"])] = complex_matrix_from_lists(entry["value"])
    return t


def representation_to_dict(rep, q: QuotientGroup) -> dict:
    from .reps import _quotient_generators
    gens = _quotient_generators(q)
    return {
        "dim": rep.dim,
        "seed": rep.seed,
        "label": rep.label,
        "generator_images": [{"element": list(q.nf(g).n) + [q.nf(g).f, q.nf(g).p],
                              "matrix": complex_matrix_to_lists(rep.matrix(g))}
                             for g in gens],
        "character": [[i, [float(c.real), float(c.imag)]]
                      for i, c in sorted(rep.char.items())],
    }


def _coerce(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": "),
                      default=_coerce) + "\n"
