"""Scenario files: a small YAML schema describing one simulation run.

Example::

    name: fig1
    source:
      center_wavelength: 1560e-9
      diagonal_bandwidth: 180e-9
      antidiagonal_fwhm: 16e-9
      grid_size: 256
    object:                       # shallowest interface first
      - {thickness: 200e-6, reflectivity: 0.5}
      - {thickness: 140e-6, reflectivity: 0.5, group_index: 1.0, beta2: 0.0}
    algorithm:
      k: 101
      kaiser_beta: 6
      oscillations: 5
      pad: 2
      fill: zero
    noise:
      snr_db: null               # omit or null for a noiseless spectrum
      seed: 0
    output: out/fig1
    sweep:                       # optional
      param: thickness           # thickness | k | beta2
      from: 60e-6
      to: 200e-6
      steps: 15
      layer: 2                   # 1-based interface whose preceding segment varies

``thickness`` is the geometric length of the segment in front of each
interface. Numbers may be written as ``1560e-9``; YAML would otherwise
read that as a string. Errors carry ``file:line:column`` of the offending
node.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .model import C_LIGHT, Interface, LayerSegment, ObjectSpec, SourceSpec

SWEEP_PARAMS = ("thickness", "k", "beta2")


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario; message starts with its location."""


@dataclass(frozen=True)
class AlgorithmSpec:
    k: int = 101
    kaiser_beta: float = 6.0
    oscillations: float = 5.0
    pad: int = 2
    fill: str = "zero"


@dataclass(frozen=True)
class NoiseSpec:
    snr_db: float | None = None
    seed: int = 0


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    steps: int
    layer: int = 1

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * step for i in range(self.steps)]


@dataclass(frozen=True)
class Scenario:
    name: str
    source: SourceSpec = field(default_factory=SourceSpec)
    object: ObjectSpec = field(default_factory=ObjectSpec)
    algorithm: AlgorithmSpec = field(default_factory=AlgorithmSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    output: Path = Path("out")
    sweep: SweepSpec | None = None

    def with_object(self, obj: ObjectSpec) -> "Scenario":
        return replace(self, object=obj)


class _Reader:
    """Walks the composed YAML node tree, keeping marks for messages."""

    def __init__(self, origin: str):
        self.origin = origin

    def fail(self, node: yaml.Node, msg: str) -> ScenarioError:
        m = node.start_mark
        return ScenarioError(f"{self.origin}:{m.line + 1}:{m.column + 1}: {msg}")

    def mapping(self, node: yaml.Node, what: str, allowed: tuple[str, ...]) -> dict[str, yaml.Node]:
        if not isinstance(node, yaml.MappingNode):
            raise self.fail(node, f"{what} must be a mapping")
        out: dict[str, yaml.Node] = {}
        for k, v in node.value:
            key = k.value
            if key not in allowed:
                raise self.fail(k, f"unknown key {key!r} in {what} (expected one of {', '.join(allowed)})")
            if key in out:
                raise self.fail(k, f"duplicate key {key!r} in {what}")
            out[key] = v
        return out

    def is_null(self, node: yaml.Node) -> bool:
        return isinstance(node, yaml.ScalarNode) and node.tag.endswith(":null")

    def number(self, node: yaml.Node, what: str) -> float:
        if not isinstance(node, yaml.ScalarNode):
            raise self.fail(node, f"{what} must be a number")
        try:
            return float(node.value)
        except ValueError:
            raise self.fail(node, f"{what} must be a number, got {node.value!r}") from None

    def integer(self, node: yaml.Node, what: str) -> int:
        x = self.number(node, what)
        if x != int(x):
            raise self.fail(node, f"{what} must be an integer, got {node.value!r}")
        return int(x)

    def text(self, node: yaml.Node, what: str) -> str:
        if not isinstance(node, yaml.ScalarNode):
            raise self.fail(node, f"{what} must be a string")
        return str(node.value)


def _source(r: _Reader, node: yaml.Node) -> SourceSpec:
    keys = ("center_wavelength", "diagonal_bandwidth", "antidiagonal_fwhm", "grid_size")
    m = r.mapping(node, "source", keys)
    kwargs = {}
    for k, v in m.items():
        kwargs[k] = r.integer(v, k) if k == "grid_size" else r.number(v, k)
    try:
        return SourceSpec(**kwargs)
    except ValueError as exc:
        raise r.fail(node, str(exc)) from None


def _object(r: _Reader, node: yaml.Node) -> ObjectSpec:
    if r.is_null(node):
        return ObjectSpec()
    if not isinstance(node, yaml.SequenceNode):
        raise r.fail(node, "object must be a list of interfaces")
    keys = ("thickness", "reflectivity", "group_index", "beta2", "beta3")
    interfaces = []
    for item in node.value:
        m = r.mapping(item, "interface", keys)
        for req in ("thickness", "reflectivity"):
            if req not in m:
                raise r.fail(item, f"interface needs {req!r}")
        vals = {k: r.number(v, k) for k, v in m.items()}
        try:
            seg = LayerSegment(
                vals["thickness"],
                vals.get("group_index", 1.0) / C_LIGHT,
                vals.get("beta2", 0.0),
                vals.get("beta3", 0.0),
            )
            interfaces.append(Interface(vals["reflectivity"], seg))
        except ValueError as exc:
            raise r.fail(item, str(exc)) from None
    return ObjectSpec(tuple(interfaces))


def _algorithm(r: _Reader, node: yaml.Node) -> AlgorithmSpec:
    m = r.mapping(node, "algorithm", ("k", "kaiser_beta", "oscillations", "pad", "fill"))
    spec = AlgorithmSpec()
    if "k" in m:
        k = r.integer(m["k"], "k")
        if k < 1 or k % 2 == 0:
            raise r.fail(m["k"], f"k must be odd and >= 1, got {k}")
        spec = replace(spec, k=k)
    if "kaiser_beta" in m:
        spec = replace(spec, kaiser_beta=r.number(m["kaiser_beta"], "kaiser_beta"))
    if "oscillations" in m:
        s = r.number(m["oscillations"], "oscillations")
        if s < 0:
            raise r.fail(m["oscillations"], "oscillations must be >= 0")
        spec = replace(spec, oscillations=s)
    if "pad" in m:
        pad = r.integer(m["pad"], "pad")
        if pad < 1:
            raise r.fail(m["pad"], "pad must be >= 1")
        spec = replace(spec, pad=pad)
    if "fill" in m:
        fill = r.text(m["fill"], "fill")
        if fill not in ("zero", "crop"):
            raise r.fail(m["fill"], f"fill must be 'zero' or 'crop', got {fill!r}")
        spec = replace(spec, fill=fill)
    return spec


def _noise(r: _Reader, node: yaml.Node) -> NoiseSpec:
    m = r.mapping(node, "noise", ("snr_db", "seed"))
    snr = None
    if "snr_db" in m and not r.is_null(m["snr_db"]):
        snr = r.number(m["snr_db"], "snr_db")
    seed = r.integer(m["seed"], "seed") if "seed" in m else 0
    return NoiseSpec(snr, seed)


def _sweep(r: _Reader, node: yaml.Node) -> SweepSpec:
    m = r.mapping(node, "sweep", ("param", "from", "to", "steps", "layer"))
    for req in ("param", "from", "to", "steps"):
        if req not in m:
            raise r.fail(node, f"sweep needs {req!r}")
    param = r.text(m["param"], "param")
    if param not in SWEEP_PARAMS:
        raise r.fail(m["param"], f"param must be one of {', '.join(SWEEP_PARAMS)}")
    steps = r.integer(m["steps"], "steps")
    if steps < 1:
        raise r.fail(m["steps"], "steps must be >= 1")
    layer = r.integer(m["layer"], "layer") if "layer" in m else 1
    return SweepSpec(param, r.number(m["from"], "from"), r.number(m["to"], "to"), steps, layer)


def parse_scenario(text: str, origin: str = "<scenario>", base_dir: Path | None = None) -> Scenario:
    try:
        root = yaml.compose(text)
    except yaml.MarkedYAMLError as exc:
        m = exc.problem_mark
        where = f"{origin}:{m.line + 1}:{m.column + 1}" if m else origin
        raise ScenarioError(f"{where}: {exc.problem}") from None
    r = _Reader(origin)
    if root is None:
        raise ScenarioError(f"{origin}: scenario is empty")
    keys = ("name", "source", "object", "algorithm", "noise", "output", "sweep")
    m = r.mapping(root, "scenario", keys)
    name = r.text(m["name"], "name") if "name" in m else Path(origin).stem
    output = Path(r.text(m["output"], "output")) if "output" in m else Path("out") / name
    if base_dir is not None and not output.is_absolute():
        output = base_dir / output
    return Scenario(
        name=name,
        source=_source(r, m["source"]) if "source" in m else SourceSpec(),
        object=_object(r, m["object"]) if "object" in m else ObjectSpec(),
        algorithm=_algorithm(r, m["algorithm"]) if "algorithm" in m else AlgorithmSpec(),
        noise=_noise(r, m["noise"]) if "noise" in m else NoiseSpec(),
        output=output,
        sweep=_sweep(r, m["sweep"]) if "sweep" in m else None,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Read a scenario file; relative ``output`` paths stay relative to the cwd."""
    path = Path(path)
    return parse_scenario(path.read_text(), origin=str(path))
