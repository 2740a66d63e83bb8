"""
Black-box delay models.

The built-in kinds are smooth analytic stand-ins for circuit simulation,
loosely shaped after alpha-power-law sensitivities:

    d = d0 * (L/L0)**1.3 * (Tox/Tox0)**0.8 * (W0/W)**0.5

Units: L and W in um, Tox in nm, delays and arrival times in ps. The
``external`` kind shells out to any simulator that prints one number.
"""

from __future__ import annotations

import math
import re
import shlex
import string
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BindingError, DomainError, ExternalModelError

BETA_L = 1.3
BETA_TOX = 0.8
BETA_W = 0.5

NOMINAL = {"L0": 0.18, "Tox0": 4.0, "W0": 0.54}

# per-kind default parameters; d0 is the nominal delay in ps
DEFAULTS = {
    "inverter": {"d0": 65.1},
    "inverter_chain": {"d0": 80.6, "stages": 2},
    "nand2": {"d0": 72.1},
    "full_adder": {"d0": 163.5},
    "nand_mis": {"d0": 102.3},
    "external": {"command": None, "timeout_ms": 10_000, "max_workers": 4},
}

FA_STAGE_WEIGHTS = (1.0, 0.9, 0.6)

_PHYSICAL_ARGS = ("L", "Tox", "W")
_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _placeholders(template):
    return {f for _, f, _, _ in string.Formatter().parse(template) if f}


def _allowed_args(kind, params):
    if kind == "inverter":
        return {"L", "Tox", "W"}
    if kind == "inverter_chain":
        return {"L", "Tox", "W"} | {f"L{i + 1}" for i in range(int(params["stages"]))}
    if kind in ("nand2", "full_adder"):
        return {"L", "Tox"}
    if kind == "nand_mis":
        return {"arrA", "arrB", "L"}
    return _placeholders(params["command"])


@dataclass
class GateModel:
    """A scalar delay model of named physical inputs.

    ``binding`` maps input names (as in ``InputSpec.name``) to the model's own
    argument names, e.g. ``{"Leff": "L"}``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    binding: dict = field(default_factory=dict)

    def __post_init__(self):
        self.kind = self.kind.lower()
        if self.kind not in DEFAULTS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        unknown = set(self.params) - set(DEFAULTS[self.kind]) - set(NOMINAL)
        if unknown:
            raise ValueError(f"{self.kind}: unknown parameters {sorted(unknown)}")
        self.params = {**NOMINAL, **DEFAULTS[self.kind], **self.params}
        if self.kind == "external":
            if not self.params["command"]:
                raise ValueError("external model needs a command template")
        elif self.params["d0"] <= 0:
            raise ValueError("d0 must be > 0")
        if self.kind == "inverter_chain" and int(self.params["stages"]) < 1:
            raise ValueError("stage count must be >= 1")

        args = list(self.binding.values())
        if len(set(args)) != len(args):
            raise BindingError(f"{self.kind}: an argument is bound twice")
        allowed = _allowed_args(self.kind, self.params)
        stray = set(args) - allowed
        if stray:
            raise BindingError(f"{self.kind}: cannot consume arguments {sorted(stray)}")
        required = {"nand_mis": {"arrA", "arrB"}, "external": allowed}.get(self.kind, set())
        missing = required - set(args)
        if missing:
            raise BindingError(f"{self.kind}: arguments {sorted(missing)} are not bound")

    @property
    def input_names(self):
        return list(self.binding)

    def _args(self, physical):
        out = {}
        for name, arg in self.binding.items():
            if name not in physical:
                raise BindingError(f"no value for bound input {name!r}")
            out[arg] = np.asarray(physical[name], dtype=float)
        for arg in _PHYSICAL_ARGS:
            if arg in out and np.any(out[arg] <= 0):
                raise DomainError(f"{self.kind}: {arg} must be positive")
        return out

    def _inverter_form(self, d0, L=None, Tox=None, W=None):
        p = self.params
        d = d0
        if L is not None:
            d = d * (L / p["L0"]) ** BETA_L
        if Tox is not None:
            d = d * (Tox / p["Tox0"]) ** BETA_TOX
        if W is not None:
            d = d * (p["W0"] / W) ** BETA_W
        return d

    def evaluate(self, physical):
        """Delay for a dict of physical values (scalars or equal-length arrays)."""
        a = self._args(physical)
        p = self.params
        k = self.kind
        if k == "external":
            return self._evaluate_external(a)
        if k == "inverter":
            d = self._inverter_form(p["d0"], a.get("L"), a.get("Tox"), a.get("W"))
        elif k == "inverter_chain":
            s = int(p["stages"])
            d = 0.0
            for i in range(s):
                L = a.get(f"L{i + 1}", a.get("L"))
                d = d + self._inverter_form(p["d0"] / s, L, a.get("Tox"), a.get("W"))
        elif k == "nand2":
            d = self._inverter_form(p["d0"], a.get("L"), a.get("Tox"))
        elif k == "full_adder":
            unit = p["d0"] / sum(FA_STAGE_WEIGHTS)
            d = sum(w * self._inverter_form(unit, a.get("L"), a.get("Tox"))
                    for w in FA_STAGE_WEIGHTS)
        else:
            d = np.maximum(a["arrA"], a["arrB"]) + self._inverter_form(p["d0"], a.get("L"))
        d = np.asarray(d, dtype=float)
        return float(d) if d.ndim == 0 else d

    __call__ = evaluate

    def _evaluate_external(self, a):
        p = self.params
        arrays = {k: np.atleast_1d(v) for k, v in a.items()}
        scalar = all(np.ndim(v) == 0 for v in a.values())
        count = len(next(iter(arrays.values())))
        timeout = p["timeout_ms"] / 1000.0

        def run(i):
            vals = {k: float(v[i]) for k, v in arrays.items()}
            try:
                return external_eval(p["command"], vals, timeout)
            except ExternalModelError as exc:
                exc.sample_index = i
                raise

        with ThreadPoolExecutor(max_workers=max(1, int(p["max_workers"]))) as pool:
            out = np.array(list(pool.map(run, range(count))), dtype=float)
        return float(out[0]) if scalar else out

    def to_dict(self):
        params = {k: v for k, v in self.params.items()
                  if k in NOMINAL or k in DEFAULTS[self.kind]}
        return {"kind": self.kind, "params": params, "binding": dict(self.binding)}

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], dict(d.get("params", {})), dict(d.get("binding", {})))


def eval_gate(model, physical):
    return model.evaluate(physical)


def external_eval(template, physical, timeout):
    """Run an external command and return the single number on its last line.

    ``template`` uses ``str.format`` placeholders named after the inputs, e.g.
    ``"spice_wrap.sh --leff {L} --tox {Tox}"``. It is split with shell quoting
    rules but never run through a shell. ``timeout`` is in seconds.
    """
    try:
        argv = [tok.format(**{k: repr(float(v)) for k, v in physical.items()})
                for tok in shlex.split(template)]
    except KeyError as exc:
        raise BindingError(f"template placeholder {exc} has no value") from None
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired as exc:
        out = exc.stdout or ""
        if isinstance(out, bytes):
            out = out.decode(errors="replace")
        raise ExternalModelError(f"{argv[0]} timed out after {timeout:g} s", out) from None
    except OSError as exc:
        raise ExternalModelError(f"cannot run {argv[0]}: {exc}") from None
    output = proc.stdout + proc.stderr
    if proc.returncode != 0:
        raise ExternalModelError(f"{argv[0]} exited with status {proc.returncode}", output)
    lines = [ln.strip() for ln in proc.stdout.splitlines() if ln.strip()]
    last = lines[-1] if lines else ""
    if not _NUMBER.match(last):
        raise ExternalModelError(f"{argv[0]}: last output line {last!r} is not a single number", output)
    value = float(last)
    if not math.isfinite(value):
        raise ExternalModelError(f"{argv[0]}: non-finite result", output)
    return value
