"""JSON and DOT encodings for every model type."""

from __future__ import annotations

import json
from pathlib import Path as FsPath
from typing import Any, Union

from .apa import AffineFn, DetAPA
from .automata import Automaton
from .bsl import BslLanguage, canonical_epsca
from .errors import ModelFormatError
from .flatten import Cqdd, FlatDetCA
from .models import CA, PA, EpsCA
from .semilinear import SemilinearSet

Model = Union[Automaton, PA, EpsCA, DetAPA, Cqdd, BslLanguage]


def automaton_to_dict(A: Automaton) -> dict:
    return {
        "states": A.n_states,
        "alphabet": list(A.alphabet),
        "initial": A.initial,
        "finals": sorted(A.finals),
        "transitions": [{"from": t.src, "label": t.label, "to": t.dst} for t in A.transitions],
    }


def automaton_from_dict(data: dict, epsilon_allowed: bool | None = None) -> Automaton:
    edges = [(int(t["from"]), t["label"], int(t["to"])) for t in data["transitions"]]
    return Automaton.build(
        int(data["states"]),
        data["alphabet"],
        edges,
        int(data.get("initial", 0)),
        [int(f) for f in data.get("finals", [])],
        epsilon_allowed=epsilon_allowed,
    )


def to_dict(model: Model) -> dict:
    if isinstance(model, BslLanguage):
        return {"kind": "bsl", **model.to_dict()}
    if isinstance(model, Cqdd):
        return {
            "kind": "cqdd",
            "alphabet": list(model.alphabet),
            "components": [_ca_dict(c) for c in model.components],
        }
    if isinstance(model, DetAPA):
        return {
            "kind": "detapa",
            **automaton_to_dict(model.automaton),
            "dim": model.dimension,
            "affine": [
                {"t": i, "M": [list(r) for r in f.M], "v": list(f.v)} for i, f in enumerate(model.U)
            ],
            "constraint": model.constraint.to_dict(),
        }
    if isinstance(model, PA):
        return {
            "kind": "pa",
            **automaton_to_dict(model.automaton),
            "dim": model.dimension,
            "vectors": [list(v) for v in model.vectors],
            "constraint": model.constraint.to_dict(),
        }
    if isinstance(model, EpsCA):
        kind = "ca" if not model.automaton.has_epsilon else "epsca"
        return {"kind": kind, **_ca_dict(model)}
    if isinstance(model, Automaton):
        return {"kind": "automaton", **automaton_to_dict(model)}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def _ca_dict(M: EpsCA) -> dict:
    return {**automaton_to_dict(M.automaton), "constraint": M.constraint.to_dict()}


def _detect(data: dict) -> str:
    if "kind" in data:
        return data["kind"]
    if "socle" in data:
        return "bsl"
    if "components" in data and "transitions" not in data:
        return "cqdd"
    if "affine" in data:
        return "detapa"
    if "vectors" in data:
        return "pa"
    if "constraint" in data:
        labels = {t.get("label") for t in data.get("transitions", [])}
        return "epsca" if "" in labels else "ca"
    if "transitions" in data:
        return "automaton"
    raise ModelFormatError("unrecognized model: no socle, components, transitions or constraint")


def from_dict(data: Any) -> Model:
    if not isinstance(data, dict):
        raise ModelFormatError("a model file must hold a JSON object")
    kind = _detect(data)
    try:
        if kind == "bsl":
            return BslLanguage.from_dict(data)
        if kind == "cqdd":
            comps = [
                FlatDetCA(automaton_from_dict(c, False), SemilinearSet.from_dict(c["constraint"]))
                for c in data["components"]
            ]
            return Cqdd(tuple(comps), tuple(data.get("alphabet", ())))
        if kind == "detapa":
            A = automaton_from_dict(data, False)
            U = [None] * len(A.transitions)
            for item in data["affine"]:
                U[int(item["t"])] = AffineFn(item["M"], item["v"])
            if any(f is None for f in U):
                raise ModelFormatError("every transition needs an affine map")
            return DetAPA(A, tuple(U), SemilinearSet.from_dict(data["constraint"]))
        if kind == "pa":
            C = SemilinearSet.from_dict(data["constraint"])
            return PA(automaton_from_dict(data, False), tuple(map(tuple, data["vectors"])), C)
        if kind == "ca":
            return CA(automaton_from_dict(data, False), SemilinearSet.from_dict(data["constraint"]))
        if kind == "epsca":
            return EpsCA(automaton_from_dict(data, True), SemilinearSet.from_dict(data["constraint"]))
        if kind == "automaton":
            return automaton_from_dict(data)
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed {kind} model: {exc}") from exc
    raise ModelFormatError(f"unknown model kind {kind!r}")


def load_model(path: str | FsPath) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc
    return from_dict(data)


def dumps(model: Model) -> str:
    return json.dumps(to_dict(model), indent=2, sort_keys=False)


def save_model(model: Model, path: str | FsPath) -> None:
    FsPath(path).write_text(dumps(model) + "\n", encoding="utf-8")


# -- DOT --------------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_body(A: Automaton, prefix: str = "q", indent: str = "  ") -> list[str]:
    lines = []
    for s in A.states:
        shape = "doublecircle" if s in A.finals else "circle"
        lines.append(f"{indent}{prefix}{s} [label={_quote(str(s))}, shape={shape}];")
    lines.append(f"{indent}{prefix}_start [shape=point];")
    lines.append(f"{indent}{prefix}_start -> {prefix}{A.initial};")
    for t in A.transitions:
        label = "ε" if t.is_epsilon else str(t.label)
        lines.append(f"{indent}{prefix}{t.src} -> {prefix}{t.dst} [label={_quote(f'{label} #{t.id}')}];")
    return lines


def to_dot(model: Model) -> str:
    """Graphviz digraph; transition ids appear after the letter."""
    if isinstance(model, Cqdd):
        lines = ["digraph cqdd {", "  rankdir=LR;"]
        for k, c in enumerate(model.components):
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f"    label={_quote(f'component {k}')};")
            lines.extend(_dot_body(c.automaton, prefix=f"c{k}_", indent="    "))
            lines.append("  }")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if isinstance(model, BslLanguage):
        model = canonical_epsca(model)
    A = model if isinstance(model, Automaton) else model.automaton
    return "\n".join(["digraph automaton {", "  rankdir=LR;", *_dot_body(A), "}"]) + "\n"
