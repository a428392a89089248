"""Model files: a lattice context plus named valuations and quotients, in YAML.

Example::

    instance: potentials
    variables: {A: 2, B: 2}
    valuations:
      p: {domain: "{A}", values: [0.2, 0.8]}
      q: {domain: "{A,B}", values: [1, 3, 2, 4]}
    quotients:
      c: {num: q, den: p}

Gaussian entries carry ``mean`` and ``concentration`` (row-major nested
lists); belief entries carry ``masses`` as a list of ``[[atom, ...], mass]``
pairs, where atoms index the frame (configurations in row-major order, or
blocks of a partition).  Belief models on partitions declare
``lattice: partitions`` and a ``universe`` list.

Loading keeps the source position of every node so that diagnostics can
name the offending line and column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import re
from pathlib import Path

import numpy as np
import yaml

from .belief import BeliefAlgebra, FrameSystem, MassFunction
from .core import Algebra, Valuation
from .errors import DomainSyntaxError, ModelFileError, ModelSyntaxError, ValuationError
from .gaussian import GaussianAlgebra, GaussianPotential
from .lattice import VARIABLES, PartitionLattice, VariableSet, sort_vars
from .potentials import Potential, PotentialAlgebra
from .quotient import Quotient

INSTANCES = ("potentials", "gaussian", "belief")


# ---------------------------------------------------------------------------
# YAML nodes with positions
# ---------------------------------------------------------------------------


@dataclass
class Node:
    value: object
    line: int
    column: int

    def fail(self, message: str):
        raise ModelFileError(message, self.line, self.column)


def _convert(node: yaml.Node) -> Node:
    line, col = node.start_mark.line + 1, node.start_mark.column + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for k, v in node.value:
            key = _convert(k)
            if not isinstance(key.value, str):
                key.fail(f"mapping keys must be strings, got {key.value!r}")
            if key.value in out:
                key.fail(f"duplicate key {key.value!r}")
            out[key.value] = _convert(v)
        return Node(out, line, col)
    if isinstance(node, yaml.SequenceNode):
        return Node([_convert(v) for v in node.value], line, col)
    return Node(_LOADER.construct_object(node), line, col)


class _Loader(yaml.SafeLoader):
    """Safe loader that also reads exponent floats without a dot, such as 1e-08."""


_FLOAT = re.compile(
    r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
    |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
    |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
    |[-+]?\.(?:inf|Inf|INF)
    |\.(?:nan|NaN|NAN))$""",
    re.X,
)
_Loader.yaml_implicit_resolvers = {k: list(v) for k, v in yaml.SafeLoader.yaml_implicit_resolvers.items()}
for _ch in "-+0123456789.":
    _Loader.yaml_implicit_resolvers[_ch] = [
        (tag, rx) for tag, rx in _Loader.yaml_implicit_resolvers.get(_ch, []) if tag != "tag:yaml.org,2002:float"
    ]
_Loader.add_implicit_resolver("tag:yaml.org,2002:float", _FLOAT, list("-+0123456789."))

_LOADER = _Loader("")


def parse_nodes(text: str) -> Node:
    try:
        root = yaml.compose(text, Loader=_Loader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise ModelSyntaxError(f"YAML syntax error: {exc.problem}", mark.line + 1, mark.column + 1) from None
    if root is None:
        raise ModelFileError("empty model file", 1, 1)
    try:
        return _convert(root)
    finally:
        _LOADER.constructed_objects.clear()


def plain(node: Node):
    if isinstance(node.value, dict):
        return {k: plain(v) for k, v in node.value.items()}
    if isinstance(node.value, list):
        return [plain(v) for v in node.value]
    return node.value


def _mapping(node: Node, what: str) -> dict:
    if not isinstance(node.value, dict):
        node.fail(f"{what} must be a mapping")
    return node.value


def _number(node: Node, what: str) -> float:
    v = node.value
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        node.fail(f"{what} must be a number, got {v!r}")
    if not np.isfinite(v):
        node.fail(f"{what} must be finite")
    return float(v)


def _numbers(node: Node, what: str) -> list[float]:
    if not isinstance(node.value, list):
        node.fail(f"{what} must be a list of numbers")
    return [_number(n, what) for n in node.value]


def _require(m: dict, key: str, parent: Node) -> Node:
    if key not in m:
        parent.fail(f"missing required field {key!r}")
    return m[key]


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------


@dataclass
class Model:
    instance: str
    algebra: Algebra
    valuations: dict = field(default_factory=dict)
    quotients: dict = field(default_factory=dict)
    path: str | None = None

    @property
    def lattice(self):
        return self.algebra.lattice

    def parse_domain(self, text: str):
        return self.lattice.parse(text)

    def lookup(self, name: str):
        if name in self.valuations:
            return self.valuations[name]
        if name in self.quotients:
            return self.quotients[name]
        raise KeyError(name)


def _build_algebra(instance: str, top: dict, root: Node) -> Algebra:
    lattice_kind = top["lattice"].value if "lattice" in top else "subsets"
    if lattice_kind not in ("subsets", "partitions"):
        top["lattice"].fail(f"lattice must be 'subsets' or 'partitions', got {lattice_kind!r}")
    if lattice_kind == "partitions":
        if instance != "belief":
            top["lattice"].fail("partition lattices are only supported for belief functions")
        uni = _require(top, "universe", root)
        if not isinstance(uni.value, list) or not uni.value:
            uni.fail("universe must be a nonempty list")
        atoms = [a.value for a in uni.value]
        if len(set(atoms)) != len(atoms):
            uni.fail("universe has duplicate atoms")
        return BeliefAlgebra(FrameSystem(PartitionLattice(tuple(sort_vars(atoms)))))

    vnode = _require(top, "variables", root)
    if instance == "gaussian":
        if isinstance(vnode.value, list):
            names = [v.value for v in vnode.value]
        else:
            names = list(_mapping(vnode, "variables"))
        return GaussianAlgebra(tuple(names))
    cards = {}
    for name, c in _mapping(vnode, "variables").items():
        if isinstance(c.value, bool) or not isinstance(c.value, int) or c.value < 1:
            c.fail(f"cardinality of {name!r} must be a positive integer")
        cards[int(name) if name.isdigit() else name] = c.value
    if instance == "potentials":
        return PotentialAlgebra(cards)
    return BeliefAlgebra(FrameSystem(VARIABLES, cards))


def _domain(model_alg: Algebra, node: Node, known: set | None):
    if not isinstance(node.value, str):
        node.fail("domain must be a string such as \"{A,B}\" or \"[[1,2],[3,4]]\"")
    try:
        d = model_alg.lattice.parse(node.value)
    except (DomainSyntaxError, ValuationError) as exc:
        node.fail(str(exc))
    if known is not None and isinstance(d, VariableSet):
        missing = [v for v in d if v not in known]
        if missing:
            node.fail(f"undeclared variables {missing}")
    return d


def known_variables(algebra: Algebra) -> set | None:
    if isinstance(algebra, PotentialAlgebra):
        return set(algebra.cards)
    if isinstance(algebra, GaussianAlgebra):
        return set(algebra.variables)
    if isinstance(algebra, BeliefAlgebra) and algebra.system.multivariate:
        return set(algebra.system.cards)
    return None


def parse_valuation(algebra: Algebra, node: Node, name: str = "<inline>") -> Valuation:
    """Build one valuation from its mapping node, with named diagnostics."""
    m = _mapping(node, f"valuation {name!r}")
    d = _domain(algebra, _require(m, "domain", node), known_variables(algebra))
    try:
        if isinstance(algebra, PotentialAlgebra):
            vnode = _require(m, "values", node)
            vals = _numbers(vnode, "values")
            for v, vn in zip(vals, vnode.value):
                if v < 0:
                    vn.fail(f"valuation {name!r}: negative value {v}")
            expected = int(np.prod([algebra.cards[v] for v in d], dtype=int))
            if len(vals) != expected:
                vnode.fail(f"valuation {name!r}: expected {expected} values for {d}, got {len(vals)}")
            return algebra.make(d, vals)
        if isinstance(algebra, GaussianAlgebra):
            mnode = _require(m, "mean", node)
            knode = _require(m, "concentration", node)
            mean = _numbers(mnode, "mean")
            if len(mean) != len(d):
                mnode.fail(f"valuation {name!r}: mean has {len(mean)} entries for {len(d)} variables")
            if not isinstance(knode.value, list) or len(knode.value) != len(d):
                knode.fail(f"valuation {name!r}: concentration must have {len(d)} rows")
            rows = [_numbers(r, "concentration row") for r in knode.value]
            if any(len(r) != len(d) for r in rows):
                knode.fail(f"valuation {name!r}: concentration must be {len(d)}x{len(d)}")
            K = np.array(rows, dtype=float).reshape(len(d), len(d))
            if K.size and np.max(np.abs(K - K.T)) > 1e-12 * max(1.0, float(np.max(np.abs(K)))):
                knode.fail(f"valuation {name!r}: concentration matrix is not symmetric")
            try:
                return algebra.make(d, mean, K)
            except ValuationError as exc:
                knode.fail(f"valuation {name!r}: concentration matrix is not positive definite ({exc})")
        # belief
        mnode = _require(m, "masses", node)
        if not isinstance(mnode.value, list):
            mnode.fail("masses must be a list of [[atoms...], mass] pairs")
        n = algebra.system.natoms(d)
        focal: dict[int, float] = {}
        for entry in mnode.value:
            if not isinstance(entry.value, list) or len(entry.value) != 2 or not isinstance(entry.value[0].value, list):
                entry.fail("each mass entry must look like [[atom, ...], mass]")
            mask = 0
            for a in entry.value[0].value:
                if isinstance(a.value, bool) or not isinstance(a.value, int) or not 0 <= a.value < n:
                    a.fail(f"atom index must be an integer in [0, {n})")
                mask |= 1 << a.value
            v = _number(entry.value[1], "mass")
            if v < 0:
                entry.value[1].fail(f"valuation {name!r}: negative mass {v}")
            focal[mask] = focal.get(mask, 0.0) + v
        return MassFunction.from_focal(algebra.system, d, focal)
    except ModelFileError:
        raise
    except (ValuationError, ValueError) as exc:
        node.fail(f"valuation {name!r}: {exc}")


def _quotient_part(model: Model, node: Node, qname: str, part: str) -> Valuation:
    if isinstance(node.value, str):
        if node.value not in model.valuations:
            node.fail(f"quotient {qname!r}: unknown valuation {node.value!r} as {part}")
        return model.valuations[node.value]
    return parse_valuation(model.algebra, node, f"{qname}.{part}")


def parse_quotient(model: Model, node: Node, name: str = "<inline>") -> Quotient:
    m = _mapping(node, f"quotient {name!r}")
    num = _quotient_part(model, _require(m, "num", node), name, "num")
    den = _quotient_part(model, m["den"], name, "den") if "den" in m else None
    try:
        return Quotient.of(num, den)
    except ValuationError as exc:
        node.fail(f"quotient {name!r}: {exc}")


def loads(text: str, path: str | None = None) -> Model:
    root = parse_nodes(text)
    top = _mapping(root, "model file")
    for key, node in top.items():
        if key not in ("instance", "lattice", "variables", "universe", "valuations", "quotients"):
            node.fail(f"unknown top-level field {key!r}")
    inode = _require(top, "instance", root)
    if inode.value not in INSTANCES:
        inode.fail(f"instance must be one of {', '.join(INSTANCES)}")
    model = Model(inode.value, _build_algebra(inode.value, top, root), path=path)
    if "valuations" in top:
        for name, vnode in _mapping(top["valuations"], "valuations").items():
            model.valuations[name] = parse_valuation(model.algebra, vnode, name)
    if "quotients" in top:
        for name, qnode in _mapping(top["quotients"], "quotients").items():
            if name in model.valuations:
                qnode.fail(f"name {name!r} is used by a valuation and a quotient")
            model.quotients[name] = parse_quotient(model, qnode, name)
    return model


def load(path) -> Model:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, str(path))


# ---------------------------------------------------------------------------
# Canonical rendering (re-parseable)
# ---------------------------------------------------------------------------


def fmt(x: float) -> str:
    if abs(x) < 1e-12:
        return "0"
    return f"{x:.12g}"


def _seq(xs) -> str:
    return "[" + ", ".join(fmt(float(v)) for v in xs) + "]"


def valuation_fields(v: Valuation) -> list[tuple[str, str]]:
    if isinstance(v, Potential):
        return [("domain", f'"{v.domain}"'), ("values", _seq(v.flat))]
    if isinstance(v, GaussianPotential):
        rows = "[" + ", ".join(_seq(r) for r in v.conc) + "]"
        return [("domain", f'"{v.domain}"'), ("mean", _seq(v.mean)), ("concentration", rows)]
    if isinstance(v, MassFunction):
        n = v.natoms
        items = []
        for mask, mass in sorted(v.focal().items()):
            atoms = [str(i) for i in range(n) if mask >> i & 1]
            items.append(f"[[{', '.join(atoms)}], {fmt(mass)}]")
        return [("domain", f'"{v.domain}"'), ("masses", "[" + ", ".join(items) + "]")]
    raise TypeError(f"cannot render {type(v).__name__}")


def render_valuation(v: Valuation, indent: int = 2) -> str:
    pad = " " * indent
    return "\n".join(f"{pad}{k}: {val}" for k, val in valuation_fields(v))


def render_inline(v: Valuation) -> str:
    return "{" + ", ".join(f"{k}: {val}" for k, val in valuation_fields(v)) + "}"


def render_result(value, fmt_name: str = "text", name: str = "result") -> str:
    """Canonical text for a valuation or quotient; the text form re-parses as a model entry."""
    if isinstance(value, Quotient):
        if fmt_name == "compact":
            den = render_inline(value.den) if value.dens else "none"
            return f"quotient num={render_inline(value.num)} den={den}"
        lines = [f"{name}:", f"  num: {render_inline(value.num)}"]
        if value.dens:
            lines.append(f"  den: {render_inline(value.den)}")
        return "\n".join(lines)
    if fmt_name == "compact":
        return f"{value.kind} {render_inline(value)}"
    return f"{name}:\n{render_valuation(value)}"


def parse_result(model: Model, text: str):
    """Inverse of render_result (text form) in the context of ``model``."""
    root = parse_nodes(text)
    top = _mapping(root, "result")
    if len(top) != 1:
        root.fail("expected a single result entry")
    (name, node), = top.items()
    m = _mapping(node, name)
    if "num" in m:
        return parse_quotient(model, node, name)
    return parse_valuation(model.algebra, node, name)


def dump_model(model: Model) -> str:
    """Serialize a model back to its file format."""
    lines = [f"instance: {model.instance}"]
    alg = model.algebra
    if isinstance(alg, BeliefAlgebra) and not alg.system.multivariate:
        lines.append("lattice: partitions")
        lines.append("universe: [" + ", ".join(str(a) for a in alg.lattice.universe) + "]")
    elif isinstance(alg, GaussianAlgebra):
        lines.append("variables: [" + ", ".join(str(v) for v in alg.variables) + "]")
    else:
        cards = alg.cards if isinstance(alg, PotentialAlgebra) else alg.system.cards
        lines.append("variables: {" + ", ".join(f"{k}: {c}" for k, c in cards.items()) + "}")
    if model.valuations:
        lines.append("valuations:")
        lines += [f"  {k}: {render_inline(v)}" for k, v in model.valuations.items()]
    if model.quotients:
        lines.append("quotients:")
        for k, q in model.quotients.items():
            parts = [f"num: {render_inline(q.num)}"] + ([f"den: {render_inline(q.den)}"] if q.dens else [])
            lines.append(f"  {k}: {{{', '.join(parts)}}}")
    return "\n".join(lines) + "\n"
