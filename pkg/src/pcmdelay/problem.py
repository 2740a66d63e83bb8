"""
Problem-spec documents and the fit / compare pipeline behind the CLI.

A problem spec is a JSON object::

    {
      "schema_version": 1,
      "name": "ex1_inverter",
      "inputs": [{"name": "Leff", "family": "normal",
                  "params": {"mean": 0.18, "std": 0.036}, "truncation": 3}],
      "model": {"kind": "inverter", "params": {"d0": 65.1},
                "binding": {"Leff": "L"}},
      "degree": 3,
      "seed": 2004,
      "pcm_samples": 1000000,
      "mc": {"sample_count": 1000000, "seed": 2005, "truncation": 3},
      "outputs": ["plan", "pce", "stats", "pdf", "comparison"]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import jsonschema

from .distributions import FAMILIES, InputSpec
from .errors import ParameterError, SpecError
from .gates import GateModel
from .montecarlo import McConfig, align_pdfs, compare, input_truncations, mc_run
from .pce import fit_pce

SCHEMA_VERSION = 1
OUTPUT_KINDS = ("plan", "pce", "stats", "pdf", "comparison")

SCHEMA = {
    "type": "object",
    "required": ["schema_version", "inputs", "model", "degree"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "inputs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "family", "params"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "family": {"type": "string", "enum": list(FAMILIES)},
                    "params": {"type": "object",
                               "additionalProperties": {"type": "number"}},
                    "truncation": {"type": ["number", "null"], "exclusiveMinimum": 0},
                },
            },
        },
        "model": {
            "type": "object",
            "required": ["kind", "binding"],
            "additionalProperties": False,
            "properties": {
                "kind": {"type": "string"},
                "params": {"type": "object"},
                "binding": {"type": "object", "additionalProperties": {"type": "string"}},
            },
        },
        "degree": {"type": "integer", "minimum": 1, "maximum": 11},
        "seed": {"type": "integer", "minimum": 0},
        "pcm_samples": {"type": "integer", "minimum": 100},
        "mc": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "sample_count": {"type": "integer", "minimum": 100},
                "seed": {"type": "integer", "minimum": 0},
                "truncation": {"type": ["number", "null"], "exclusiveMinimum": 0},
            },
        },
        "outputs": {"type": "array", "items": {"enum": list(OUTPUT_KINDS)}},
    },
}


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    inputs: tuple
    model: GateModel
    degree: int
    seed: int = 0
    mc: McConfig = field(default_factory=McConfig)
    pcm_samples: int | None = None
    outputs: tuple = OUTPUT_KINDS

    @property
    def pcm_count(self):
        return self.pcm_samples if self.pcm_samples is not None else self.mc.sample_count

    def override(self, degree=None, seed=None, mc_samples=None, timeout_ms=None):
        """Copy with command-line overrides applied (``None`` keeps the spec value)."""
        spec = self
        if degree is not None:
            spec = replace(spec, degree=degree)
        if seed is not None:
            spec = replace(spec, seed=seed, mc=replace(spec.mc, seed=seed + 1))
        if mc_samples is not None:
            spec = replace(spec, mc=replace(spec.mc, sample_count=mc_samples),
                           pcm_samples=mc_samples)
        if timeout_ms is not None and spec.model.kind == "external":
            model = GateModel(spec.model.kind,
                              {**spec.model.to_dict()["params"], "timeout_ms": timeout_ms},
                              dict(spec.model.binding))
            spec = replace(spec, model=model)
        return spec


def parse_spec(doc, default_name="problem"):
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SpecError(f"{where}: {exc.message}") from None
    try:
        inputs = tuple(InputSpec.from_dict(d) for d in doc["inputs"])
        model = GateModel.from_dict(doc["model"])
    except (ParameterError, ValueError, KeyError) as exc:
        raise SpecError(str(exc)) from None
    names = [s.name for s in inputs]
    if len(set(names)) != len(names):
        raise SpecError("input names must be unique")
    unbound = sorted(set(model.binding) - set(names))
    if unbound:
        raise SpecError(f"model binding refers to undefined inputs: {', '.join(unbound)}")
    unused = sorted(set(names) - set(model.binding))
    if unused:
        raise SpecError(f"inputs not bound to any model argument: {', '.join(unused)}")
    seed = doc.get("seed", 0)
    mc_doc = doc.get("mc", {})
    mc = McConfig(
        sample_count=mc_doc.get("sample_count", 100_000),
        seed=mc_doc.get("seed", seed + 1),
        truncation=mc_doc.get("truncation", 3.0),
    )
    return ProblemSpec(
        name=doc.get("name", default_name),
        inputs=inputs,
        model=model,
        degree=doc["degree"],
        seed=seed,
        mc=mc,
        pcm_samples=doc.get("pcm_samples"),
        outputs=tuple(doc.get("outputs", OUTPUT_KINDS)),
    )


def load_spec(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"{path}: {exc}") from None
    return parse_spec(doc, default_name=path.stem)


def spec_to_dict(spec):
    return {
        "schema_version": SCHEMA_VERSION,
        "name": spec.name,
        "inputs": [s.to_dict() for s in spec.inputs],
        "model": spec.model.to_dict(),
        "degree": spec.degree,
        "seed": spec.seed,
        "pcm_samples": spec.pcm_count,
        "mc": {"sample_count": spec.mc.sample_count, "seed": spec.mc.seed,
               "truncation": spec.mc.truncation},
        "outputs": list(spec.outputs),
    }


def bundled_dir():
    return resources.files("pcmdelay") / "examples"


def bundled_specs():
    """The six shipped example specs, sorted by file name."""
    return [load_spec(p) for p in sorted(Path(str(bundled_dir())).glob("*.json"))]


def run_fit(spec):
    return fit_pce(spec.model, spec.inputs, spec.degree, spec.seed)


@dataclass
class Comparison:
    pce: object
    pcm: object
    mc: object
    row: object


def run_compare(spec, pce=None):
    """Fit (unless ``pce`` is given), sample the expansion, run the oracle, compare.

    The expansion is sampled from the same truncated input population the
    oracle draws from.
    """
    if pce is None:
        pce = run_fit(spec)
    trunc = input_truncations(spec.inputs, spec.mc.truncation)
    pcm = pce.stats(spec.pcm_count, spec.seed, trunc)
    mc = mc_run(spec.model, spec.inputs, spec.mc)
    pcm, mc = align_pdfs(pcm, mc)
    return Comparison(pce, pcm, mc, compare(pcm, mc, spec.name))
