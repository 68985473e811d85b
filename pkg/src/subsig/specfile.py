"""Reading and writing system specification files and exact results.

Rationals travel as ``"num/den"`` strings (integers as ``"3"``); component
sets as ascending lists of labels. See ``system.schema.json`` for the file
format.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .errors import CapacityError, DistributionError, SubsigError
from .lifetime import OrderingDistribution, exchangeable, from_exponential_rates, from_orderings
from .montecarlo import ExchangeableGammaMixture, IIDExponential, IndependentExponential
from .structure import (
    ModuleDecomposition,
    StructureFunction,
    members,
    parse_structure,
    validate_semicoherent,
)

_RATIONAL = re.compile(r"^-?[0-9]+(/[0-9]+)?$")


class SpecError(SubsigError, ValueError):
    """The specification file violates the schema or its semantic rules."""


def schema() -> dict:
    text = resources.files("subsig").joinpath("system.schema.json").read_text()
    return json.loads(text)


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise SpecError(f"{text!r} is not a 'num/den' rational")
    value = Fraction(text)
    return value


def format_rational(value) -> str:
    return str(Fraction(value))


def format_set(mask_or_members) -> list[int]:
    if isinstance(mask_or_members, int):
        return list(members(mask_or_members))
    return sorted(mask_or_members)


def format_set_key(labels) -> str:
    return "{" + ",".join(str(c) for c in labels) + "}"


@dataclass
class SystemSpec:
    n: int
    phi: StructureFunction
    lifetime: dict
    structure: dict
    modules: list[ModuleDecomposition] = field(default_factory=list)
    module_formulas: list[str] = field(default_factory=list)

    @property
    def exact(self) -> OrderingDistribution:
        """The ordering law used by the exact engine."""
        if "_exact" not in self.__dict__:
            self.__dict__["_exact"] = _exact_distribution(self.lifetime, self.n)
        return self.__dict__["_exact"]

    def continuous_model(self):
        """Continuous model for simulation, or None when the file gives none."""
        kind = self.lifetime["kind"]
        if kind == "iid_exponential":
            return IIDExponential(self.n, float(parse_rational(self.lifetime.get("rate", "1"))))
        if kind == "gamma_frailty":
            return ExchangeableGammaMixture(self.n, float(parse_rational(self.lifetime.get("shape", "2"))))
        if kind == "exponential":
            return IndependentExponential(tuple(parse_rational(r) for r in self.lifetime["rates"]))
        return None

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "spec_version": 1,
            "n": self.n,
            "structure": self.structure,
            "lifetime": self.lifetime,
        }
        if self.modules:
            out["modules"] = [
                {"set": list(dec.module), "chi": chi}
                for dec, chi in zip(self.modules, self.module_formulas)
            ]
        return out


def _exact_distribution(lifetime: dict, n: int) -> OrderingDistribution:
    kind = lifetime["kind"]
    if kind in ("exchangeable", "iid_exponential", "gamma_frailty"):
        return exchangeable(n)
    if kind == "exponential":
        rates = [parse_rational(r) for r in lifetime["rates"]]
        if len(rates) != n:
            raise SpecError(f"{len(rates)} rates given for {n} components")
        return from_exponential_rates(rates)
    entries = [(e["order"], parse_rational(e["p"])) for e in lifetime["entries"]]
    for order, _ in entries:
        if len(order) != n:
            raise SpecError(f"ordering {order} does not have {n} components")
    return from_orderings(entries)


def load_spec(source) -> SystemSpec:
    """Parse a spec from a file path or an already-decoded dict."""
    if isinstance(source, dict):
        data = source
    else:
        path = Path(source)
        data = json.loads(path.read_text())
    try:
        jsonschema.validate(data, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SpecError(f"schema violation at {where}: {exc.message}") from None
    n = data["n"]
    structure = data["structure"]
    if "formula" in structure:
        phi = parse_structure(structure["formula"], n)
    else:
        for p in structure["path_sets"]:
            if max(p) > n:
                raise SpecError(f"path set {p} has components outside 1..{n}")
        phi = StructureFunction.from_path_sets(structure["path_sets"], n)
    spec = SystemSpec(n, phi, data["lifetime"], structure)
    try:
        spec.exact
    except DistributionError as exc:
        raise SpecError(f"lifetime: {exc}") from None
    except CapacityError:
        pass  # simulation may still be possible; exact commands report it
    for entry in data.get("modules", []):
        labels = sorted(entry["set"])
        if labels[-1] > n:
            raise SpecError(f"module {labels} has components outside 1..{n}")
        chi = parse_structure(entry["chi"], len(labels), labels)
        spec.modules.append(ModuleDecomposition.build(phi, labels, chi))
        spec.module_formulas.append(entry["chi"])
    return spec


def semicoherence_messages(spec: SystemSpec) -> list[str]:
    return validate_semicoherent(spec.phi).messages()


def decode_vector(values: list[str]) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


def encode_vector(values) -> list[str]:
    return [format_rational(v) for v in values]
