"""Scenario files: the strict JSON schema tying the CLI to the model.

Parsing is a whitelist walk: every object's keys are checked against the
schema and an unknown or ill-typed field fails with the exact JSON path
(e.g. "$.potential.params.entries[3].site").  Serialization inverts
parsing losslessly, and `dumps_canonical` fixes the byte-level format
(sorted keys, two-space indent, shortest round-trip floats) so identical
inputs yield byte-identical reports.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

from .config import DEFAULT_N_ANGLES
from .criteria import CriteriaParams
from .exceptions import SchemaError
from .model import (Alternating1DPotential, ConstantPotential,
                    GeometricDecayPotential, LatticeBox, PotentialSpec,
                    PowerDecayPotential, SeededRandomPotential, SumPotential,
                    TablePotential)

ANALYSES = ("spectrum", "numrange", "classify", "criteria")
TOLERANCE_KEYS = ("eig", "hull", "boundary_rel", "cert_rel", "support_rel",
                  "match", "boundary_abs", "cert_abs")


# ---------------------------------------------------------------------------
# low-level checked readers


def _fail(path: str, msg: str) -> SchemaError:
    return SchemaError(f"{msg} at {path}", path=path, where="scenario.parse")


def _object(data, path: str, required: tuple[str, ...],
            optional: tuple[str, ...] = ()) -> dict:
    if not isinstance(data, dict):
        raise _fail(path, f"expected an object, got {type(data).__name__}")
    for key in data:
        if key not in required and key not in optional:
            raise _fail(f"{path}.{key}", "unknown field")
    for key in required:
        if key not in data:
            raise _fail(path, f"missing required field {key!r}")
    return data


def _array(data, path: str, min_len: int = 0):
    if not isinstance(data, list):
        raise _fail(path, f"expected an array, got {type(data).__name__}")
    if len(data) < min_len:
        raise _fail(path, f"expected at least {min_len} elements")
    return data


def _int(data, path: str) -> int:
    if isinstance(data, bool) or not isinstance(data, int):
        raise _fail(path, f"expected an integer, got {type(data).__name__}")
    return data


def _real(data, path: str) -> float:
    if isinstance(data, bool) or not isinstance(data, (int, float)):
        raise _fail(path, f"expected a number, got {type(data).__name__}")
    return float(data)


def _string(data, path: str) -> str:
    if not isinstance(data, str):
        raise _fail(path, f"expected a string, got {type(data).__name__}")
    return data


def _complex(data, path: str) -> complex:
    arr = _array(data, path)
    if len(arr) != 2:
        raise _fail(path, "expected [re, im]")
    return complex(_real(arr[0], f"{path}[0]"), _real(arr[1], f"{path}[1]"))


def _encode_complex(z: complex) -> list[float]:
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# box


def parse_box(data, path: str = "$.box") -> LatticeBox:
    obj = _object(data, path, required=("nu", "ranges"))
    nu = _int(obj["nu"], f"{path}.nu")
    if nu < 1:
        raise _fail(f"{path}.nu", "nu must be >= 1")
    ranges = []
    arr = _array(obj["ranges"], f"{path}.ranges")
    if len(arr) != nu:
        raise _fail(f"{path}.ranges", f"expected {nu} intervals, got {len(arr)}")
    for j, pair in enumerate(arr):
        p = _array(pair, f"{path}.ranges[{j}]")
        if len(p) != 2:
            raise _fail(f"{path}.ranges[{j}]", "expected [lo, hi]")
        lo = _int(p[0], f"{path}.ranges[{j}][0]")
        hi = _int(p[1], f"{path}.ranges[{j}][1]")
        if lo > hi:
            raise _fail(f"{path}.ranges[{j}]", f"lo = {lo} exceeds hi = {hi}")
        ranges.append((lo, hi))
    return LatticeBox(nu=nu, ranges=tuple(ranges))


def encode_box(box: LatticeBox) -> dict:
    return {"nu": box.nu, "ranges": [[lo, hi] for lo, hi in box.ranges]}


# ---------------------------------------------------------------------------
# decay declaration (optional, validated against the kind)


@dataclass(frozen=True)
class DecayDeclaration:
    """User-declared tail metadata, checked for consistency with the kind.

    style "vanishes": d == 0 outside ||k||_1 <= radius.
    style "monotone": |d(k) - 0| bounded by the (form, amplitude, rate)
    envelope.  The derived certificate from the kind is always at least as
    sharp, so this declaration is validated and recorded, not consumed.
    """

    style: str
    radius: int | None = None
    form: str | None = None
    amplitude: float | None = None
    rate: float | None = None


def parse_decay(data, path: str) -> DecayDeclaration:
    obj = _object(data, path, required=(),
                  optional=("vanishes_outside_radius", "monotone_bound"))
    if ("vanishes_outside_radius" in obj) == ("monotone_bound" in obj):
        raise _fail(path, "expected exactly one of 'vanishes_outside_radius' "
                          "or 'monotone_bound'")
    if "vanishes_outside_radius" in obj:
        r = _int(obj["vanishes_outside_radius"],
                 f"{path}.vanishes_outside_radius")
        if r < 0:
            raise _fail(f"{path}.vanishes_outside_radius", "radius must be >= 0")
        return DecayDeclaration(style="vanishes", radius=r)
    mb_path = f"{path}.monotone_bound"
    mb = _object(obj["monotone_bound"], mb_path,
                 required=("form", "amplitude", "rate"))
    form = _string(mb["form"], f"{mb_path}.form")
    if form not in ("power", "geometric"):
        raise _fail(f"{mb_path}.form", "form must be 'power' or 'geometric'")
    return DecayDeclaration(
        style="monotone", form=form,
        amplitude=_real(mb["amplitude"], f"{mb_path}.amplitude"),
        rate=_real(mb["rate"], f"{mb_path}.rate"))


def encode_decay(decl: DecayDeclaration) -> dict:
    if decl.style == "vanishes":
        return {"vanishes_outside_radius": decl.radius}
    return {"monotone_bound": {"form": decl.form, "amplitude": decl.amplitude,
                               "rate": decl.rate}}


def validate_decay(decl: DecayDeclaration, potential: PotentialSpec,
                   path: str) -> None:
    tail = potential.tail_info()
    if decl.style == "vanishes":
        if tail is None or not tail.exact or tail.base != 0:
            raise _fail(path, f"kind {potential.kind!r} does not vanish "
                              "outside a finite radius")
        if decl.radius < tail.radius:
            raise _fail(f"{path}.vanishes_outside_radius",
                        f"declared radius {decl.radius} is smaller than the "
                        f"kind's support radius {tail.radius}")
        return
    if potential.kind not in ("decay_power", "decay_geometric"):
        raise _fail(path, f"monotone_bound declarations apply to decaying "
                          f"kinds, not {potential.kind!r}")
    natural = "power" if potential.kind == "decay_power" else "geometric"
    if decl.form != natural:
        raise _fail(f"{path}.monotone_bound.form",
                    f"kind {potential.kind!r} has a {natural!r} envelope")
    amp = potential.sup_abs()
    if decl.amplitude < amp:
        raise _fail(f"{path}.monotone_bound.amplitude",
                    f"declared amplitude {decl.amplitude} does not dominate "
                    f"the kind's amplitude {amp}")
    kind_rate = (potential.exponent if natural == "power"
                 else abs(potential.ratio))
    ok = (decl.rate <= kind_rate) if natural == "power" else (decl.rate >= kind_rate)
    if not ok:
        raise _fail(f"{path}.monotone_bound.rate",
                    "declared envelope decays faster than the kind certifies")


# ---------------------------------------------------------------------------
# potentials


def parse_potential(data, path: str = "$.potential") -> PotentialSpec:
    obj = _object(data, path, required=("kind",), optional=("params", "decay"))
    kind = _string(obj["kind"], f"{path}.kind")
    params = obj.get("params", {})
    ppath = f"{path}.params"
    if not isinstance(params, dict):
        raise _fail(ppath, f"expected an object, got {type(params).__name__}")

    if kind == "table":
        p = _object(params, ppath, required=("entries",))
        entries = []
        for i, e in enumerate(_array(p["entries"], f"{ppath}.entries")):
            epath = f"{ppath}.entries[{i}]"
            eo = _object(e, epath, required=("site", "value"))
            site = tuple(_int(c, f"{epath}.site[{j}]")
                         for j, c in enumerate(_array(eo["site"], f"{epath}.site", 1)))
            entries.append((site, _complex(eo["value"], f"{epath}.value")))
        try:
            spec: PotentialSpec = TablePotential(tuple(entries))
        except ValueError as exc:
            raise _fail(f"{ppath}.entries", str(exc))
    elif kind == "constant":
        p = _object(params, ppath, required=("c",))
        spec = ConstantPotential(_complex(p["c"], f"{ppath}.c"))
    elif kind in ("decay_power", "decay_geometric"):
        rate_key = "exponent" if kind == "decay_power" else "ratio"
        p = _object(params, ppath, required=("amplitude", rate_key),
                    optional=("parity",))
        parity = None
        if "parity" in p and p["parity"] is not None:
            parity = _string(p["parity"], f"{ppath}.parity")
        try:
            if kind == "decay_power":
                spec = PowerDecayPotential(
                    _complex(p["amplitude"], f"{ppath}.amplitude"),
                    _real(p["exponent"], f"{ppath}.exponent"), parity)
            else:
                spec = GeometricDecayPotential(
                    _complex(p["amplitude"], f"{ppath}.amplitude"),
                    _real(p["ratio"], f"{ppath}.ratio"), parity)
        except ValueError as exc:
            raise _fail(ppath, str(exc))
    elif kind == "alternating_1d":
        p = _object(params, ppath, required=("b_even", "b_odd"))
        spec = Alternating1DPotential(_real(p["b_even"], f"{ppath}.b_even"),
                                      _real(p["b_odd"], f"{ppath}.b_odd"))
    elif kind == "seeded_random":
        p = _object(params, ppath,
                    required=("seed", "box", "re_range", "im_range"))
        rr = _array(p["re_range"], f"{ppath}.re_range")
        ir = _array(p["im_range"], f"{ppath}.im_range")
        if len(rr) != 2 or len(ir) != 2:
            raise _fail(ppath, "re_range and im_range must be [lo, hi]")
        try:
            spec = SeededRandomPotential(
                _int(p["seed"], f"{ppath}.seed"),
                parse_box(p["box"], f"{ppath}.box"),
                (_real(rr[0], f"{ppath}.re_range[0]"),
                 _real(rr[1], f"{ppath}.re_range[1]")),
                (_real(ir[0], f"{ppath}.im_range[0]"),
                 _real(ir[1], f"{ppath}.im_range[1]")))
        except ValueError as exc:
            raise _fail(ppath, str(exc))
    elif kind == "sum":
        p = _object(params, ppath, required=("terms",))
        terms = [parse_potential(t, f"{ppath}.terms[{i}]")
                 for i, t in enumerate(_array(p["terms"], f"{ppath}.terms", 1))]
        spec = SumPotential(tuple(terms))
    else:
        raise _fail(f"{path}.kind", f"unknown potential kind {kind!r}")

    if "decay" in obj:
        decl = parse_decay(obj["decay"], f"{path}.decay")
        validate_decay(decl, spec, f"{path}.decay")
    return spec


def encode_potential(spec: PotentialSpec) -> dict:
    if isinstance(spec, TablePotential):
        params: dict = {"entries": [
            {"site": list(site), "value": _encode_complex(v)}
            for site, v in spec.entries]}
    elif isinstance(spec, ConstantPotential):
        params = {"c": _encode_complex(spec.c)}
    elif isinstance(spec, PowerDecayPotential):
        params = {"amplitude": _encode_complex(spec.amplitude),
                  "exponent": spec.exponent}
        if spec.parity is not None:
            params["parity"] = spec.parity
    elif isinstance(spec, GeometricDecayPotential):
        params = {"amplitude": _encode_complex(spec.amplitude),
                  "ratio": spec.ratio}
        if spec.parity is not None:
            params["parity"] = spec.parity
    elif isinstance(spec, Alternating1DPotential):
        params = {"b_even": spec.b_even, "b_odd": spec.b_odd}
    elif isinstance(spec, SeededRandomPotential):
        params = {"seed": spec.seed, "box": encode_box(spec.box),
                  "re_range": list(spec.re_range),
                  "im_range": list(spec.im_range)}
    elif isinstance(spec, SumPotential):
        params = {"terms": [encode_potential(t) for t in spec.terms]}
    else:
        raise TypeError(f"cannot encode potential of type {type(spec).__name__}")
    return {"kind": spec.kind, "params": params}


# ---------------------------------------------------------------------------
# scenario


@dataclass(frozen=True)
class Scenario:
    name: str
    box: LatticeBox
    potential: PotentialSpec
    analysis: tuple[str, ...]
    n_angles: int = DEFAULT_N_ANGLES
    tolerance_overrides: tuple[tuple[str, float], ...] = ()
    criteria: CriteriaParams = field(default_factory=CriteriaParams)
    seed: int | None = None

    def tolerance_dict(self) -> dict[str, float]:
        return dict(self.tolerance_overrides)


def parse_scenario(data) -> Scenario:
    obj = _object(data, "$", required=("name", "box", "potential", "analysis"),
                  optional=("params",))
    name = _string(obj["name"], "$.name")
    if not name:
        raise _fail("$.name", "name must be nonempty")
    box = parse_box(obj["box"])
    potential = parse_potential(obj["potential"])
    analysis = []
    for i, a in enumerate(_array(obj["analysis"], "$.analysis", 1)):
        s = _string(a, f"$.analysis[{i}]")
        if s not in ANALYSES:
            raise _fail(f"$.analysis[{i}]",
                        f"unknown analysis {s!r}; expected one of {ANALYSES}")
        if s in analysis:
            raise _fail(f"$.analysis[{i}]", f"duplicate analysis {s!r}")
        analysis.append(s)

    n_angles = DEFAULT_N_ANGLES
    overrides: list[tuple[str, float]] = []
    crit = CriteriaParams()
    seed = None
    if "params" in obj:
        p = _object(obj["params"], "$.params", required=(),
                    optional=("n_angles", "tolerances", "criteria", "seed"))
        if "n_angles" in p:
            n_angles = _int(p["n_angles"], "$.params.n_angles")
            if n_angles < 3:
                raise _fail("$.params.n_angles", "n_angles must be >= 3")
        if "tolerances" in p:
            t = _object(p["tolerances"], "$.params.tolerances", required=(),
                        optional=TOLERANCE_KEYS)
            for key in TOLERANCE_KEYS:
                if key in t:
                    overrides.append(
                        (key, _real(t[key], f"$.params.tolerances.{key}")))
        if "criteria" in p:
            cpath = "$.params.criteria"
            c = _object(p["criteria"], cpath, required=(),
                        optional=("b_values", "a_values", "axes",
                                  "scan_radius"))
            bs = tuple(_real(v, f"{cpath}.b_values[{i}]") for i, v in
                       enumerate(_array(c.get("b_values", []),
                                        f"{cpath}.b_values")))
            as_ = tuple(_real(v, f"{cpath}.a_values[{i}]") for i, v in
                        enumerate(_array(c.get("a_values", []),
                                         f"{cpath}.a_values")))
            axes = None
            if c.get("axes") is not None:
                axes = tuple(_int(v, f"{cpath}.axes[{i}]") for i, v in
                             enumerate(_array(c["axes"], f"{cpath}.axes")))
                for i, j in enumerate(axes):
                    if not 0 <= j < box.nu:
                        raise _fail(f"{cpath}.axes[{i}]",
                                    f"axis {j} out of range for nu = {box.nu}")
            radius = None
            if c.get("scan_radius") is not None:
                radius = _int(c["scan_radius"], f"{cpath}.scan_radius")
                if radius < 1:
                    raise _fail(f"{cpath}.scan_radius", "must be >= 1")
            crit = CriteriaParams(b_values=bs, a_values=as_, axes=axes,
                                  scan_radius=radius)
        if "seed" in p and p["seed"] is not None:
            seed = _int(p["seed"], "$.params.seed")

    return Scenario(name=name, box=box, potential=potential,
                    analysis=tuple(analysis), n_angles=n_angles,
                    tolerance_overrides=tuple(overrides), criteria=crit,
                    seed=seed)


def encode_scenario(sc: Scenario) -> dict:
    out: dict = {
        "name": sc.name,
        "box": encode_box(sc.box),
        "potential": encode_potential(sc.potential),
        "analysis": list(sc.analysis),
    }
    params: dict = {}
    if sc.n_angles != DEFAULT_N_ANGLES:
        params["n_angles"] = sc.n_angles
    if sc.tolerance_overrides:
        params["tolerances"] = dict(sc.tolerance_overrides)
    c = sc.criteria
    if c != CriteriaParams():
        crit: dict = {}
        if c.b_values:
            crit["b_values"] = list(c.b_values)
        if c.a_values:
            crit["a_values"] = list(c.a_values)
        if c.axes is not None:
            crit["axes"] = list(c.axes)
        if c.scan_radius is not None:
            crit["scan_radius"] = c.scan_radius
        params["criteria"] = crit
    if sc.seed is not None:
        params["seed"] = sc.seed
    if params:
        out["params"] = params
    return out


def loads_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", path="$",
                          where="scenario.loads_scenario")
    return parse_scenario(data)


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_scenario(fh.read())


# ---------------------------------------------------------------------------
# canonical output


def dumps_canonical(obj) -> str:
    """Deterministic JSON text: sorted keys, 2-space indent, LF, trailing
    newline, shortest round-trip float repr, no NaN/inf."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False,
                      allow_nan=False) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
