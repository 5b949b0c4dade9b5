"""From a PDE's topological/integrability descriptor to its bordism groups
and crystal classification, including singular PDEs split into components.

Descriptors carry what the analytic theory establishes (integrability
flags, Betti data, dimensions); the toolkit computes every group from that
data, cross-checks integrability flags against the symbolic corpus when a
matching system is named, and never invents analytic facts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .abelian import FgAbelianGroup
from .bordism import (
    NotCrystalShapedGroup,
    UnassignedInPaper,
    crystal_group_of,
    paper_crystal_assignment,
    relative_bordism,
)


class HypothesisViolated(ValueError):
    pass


class DescriptorRejected(ValueError):
    pass


DEFAULT_FLAGS = {
    "formally_integrable": False,
    "completely_integrable": False,
    "symbol_nonzero_at_k": False,
    "symbol_nonzero_at_k_plus_1": False,
    "affine_fiber_bundle_over_M": False,
    "zero_crystal_asserted": False,
}


@dataclass
class PdeDescriptor:
    name: str
    n: int
    m: int
    order: int
    dim_e: int
    betti_w: list
    betti_m: list | None = None
    flags: dict = field(default_factory=dict)
    jets_check: list = field(default_factory=list)  # corpus .pde files

    def __post_init__(self):
        merged = dict(DEFAULT_FLAGS)
        merged.update(self.flags)
        self.flags = merged
        if self.dim_e < 0:
            raise ValueError("dim_E must be nonnegative")
        if not self.betti_w or self.betti_w[0] < 1:
            raise ValueError("Betti list must be nonempty with h_0 >= 1")


@dataclass
class IntersectionInfo:
    nonempty: bool
    union_connected: bool = True
    descriptor: PdeDescriptor | None = None


@dataclass
class SingularPdeDescriptor:
    name: str
    components: list
    intersections: dict = field(default_factory=dict)  # (i, j) -> IntersectionInfo

    def __post_init__(self):
        if not self.components:
            raise ValueError("a singular descriptor needs at least one component")


@dataclass
class UnknownExtension:
    """The smooth-solution bordism group is only known as an extension
    0 -> K -> G -> quotient -> 0 with undetermined kernel; nothing beyond
    the weak/singular groups is computed for it."""

    quotient: FgAbelianGroup

    def to_json_dict(self):
        return {
            "kernel": "unknown",
            "quotient": self.quotient.render(),
            "note": "smooth-solution bordism known only as an extension",
        }


def smooth_bordism_extension(d: PdeDescriptor, p: int) -> UnknownExtension:
    """The smooth-solution group in degree p, represented as an extension
    of the absolute bordism group with undetermined kernel."""
    from .bordism import unoriented_bordism

    _check_hypotheses(d, p)
    return UnknownExtension(quotient=unoriented_bordism(p))


@dataclass
class CrystalClassification:
    name: str
    weak_bordism: FgAbelianGroup
    singular_bordism: FgAbelianGroup | None  # None = Unknown
    verdict: str
    crystal_dimension: int
    crystal_group_name: str
    crystal_conservation_dim: int
    caveats: list

    def to_json_dict(self):
        return {
            "name": self.name,
            "weak_bordism": self.weak_bordism.render(),
            "singular_bordism": (
                "unknown" if self.singular_bordism is None else self.singular_bordism.render()
            ),
            "verdict": self.verdict,
            "crystal": {
                "dimension": self.crystal_dimension,
                "name": self.crystal_group_name,
            },
            "crystal_conservation_dim": self.crystal_conservation_dim,
            "caveats": list(self.caveats),
        }


def _check_hypotheses(d: PdeDescriptor, p: int):
    if not d.flags["formally_integrable"]:
        raise HypothesisViolated(f"{d.name}: formal integrability not established")
    if not d.flags["completely_integrable"]:
        raise HypothesisViolated(f"{d.name}: complete integrability not established")
    if d.dim_e < 2 * d.n + 1:
        raise HypothesisViolated(
            f"{d.name}: dim E = {d.dim_e} < 2n+1 = {2 * d.n + 1}"
        )
    if p >= d.n:
        raise HypothesisViolated(f"{d.name}: bordism degree {p} must be < n = {d.n}")


def weak_bordism(d: PdeDescriptor, p: int) -> FgAbelianGroup:
    """Weak integral bordism group in degree p from the total space's
    Z_2-Betti numbers."""
    _check_hypotheses(d, p)
    return relative_bordism(d.betti_w, p)


def weak_bordism_over_base(d: PdeDescriptor, p: int) -> FgAbelianGroup | None:
    """The companion value computed from the base when the descriptor
    declares an affine fiber bundle (both are reported)."""
    if not d.flags["affine_fiber_bundle_over_M"] or d.betti_m is None:
        return None
    _check_hypotheses(d, p)
    return relative_bordism(d.betti_m, p)


def singular_bordism(d: PdeDescriptor, p: int) -> FgAbelianGroup | None:
    """Equals the weak group when the symbol is nonzero at orders k and
    k+1; otherwise unknown (None)."""
    wb = weak_bordism(d, p)
    if d.flags["symbol_nonzero_at_k"] and d.flags["symbol_nonzero_at_k_plus_1"]:
        return wb
    return None


def verify_integrability_flags(d: PdeDescriptor, seed=None):
    """Reject a descriptor whose named corpus systems fail the machine
    integrability check while the flags claim integrability."""
    if not d.jets_check:
        return
    from .data import data_path
    from .jets import DEFAULT_SEED, formal_integrability_check, load_system

    for fname in d.jets_check:
        system = load_system(str(data_path(fname)))
        verdict = formal_integrability_check(
            system, seed=DEFAULT_SEED if seed is None else seed
        )
        if d.flags["formally_integrable"] and not verdict.passed:
            raise DescriptorRejected(
                f"{d.name}: flags claim formal integrability but corpus system "
                f"{fname} fails the dimension test"
            )


def classify(d: PdeDescriptor, check_corpus: bool = True) -> CrystalClassification:
    """Headline pipeline: bordism groups, verdict, crystal group/dimension."""
    if check_corpus:
        verify_integrability_flags(d)
    p = d.n - 1
    wb = weak_bordism(d, p)
    sb = singular_bordism(d, p)
    caveats = []
    base_value = weak_bordism_over_base(d, p)
    if base_value is not None and base_value != wb:
        caveats.append(
            f"bundle-base computation gives {base_value.render()} against "
            f"{wb.render()} from the total space"
        )
    if sb is None:
        caveats.append("singular bordism unknown: symbol nonvanishing not established")
    if wb.is_trivial():
        if d.flags["zero_crystal_asserted"]:
            verdict = "ZeroCrystal"
        else:
            verdict = "ExtendedZeroCrystal"
            caveats.append("not a 0-crystal unless full admissibility asserted")
        dim, name = 0, "trivial / extended 0-crystal"
    else:
        verdict = "ExtendedCrystal"
        try:
            dim, name = paper_crystal_assignment(wb)
        except (UnassignedInPaper, NotCrystalShapedGroup):
            group, witness = crystal_group_of(wb)
            dim, name = witness["dimension"], group.name
            caveats.append("crystal group beyond the published assignments; generic construction used")
    return CrystalClassification(
        name=d.name,
        weak_bordism=wb,
        singular_bordism=sb,
        verdict=verdict,
        crystal_dimension=dim,
        crystal_group_name=name,
        crystal_conservation_dim=wb.order(),
        caveats=caveats,
    )


@dataclass
class SingularClassification:
    name: str
    verdict: str
    components: list  # CrystalClassification

    def to_json_dict(self):
        return {
            "name": self.name,
            "verdict": self.verdict,
            "components": [c.to_json_dict() for c in self.components],
        }


def classify_singular(s: SingularPdeDescriptor, check_corpus=True) -> SingularClassification:
    parts = []
    for i, comp in enumerate(s.components):
        try:
            parts.append(classify(comp, check_corpus=check_corpus))
        except Exception as exc:
            raise type(exc)(f"component {i} ({comp.name}): {exc}") from exc
    verdicts = {c.verdict for c in parts}
    if verdicts <= {"ZeroCrystal"}:
        verdict = "ZeroCrystalSingular"
    elif verdicts <= {"ZeroCrystal", "ExtendedZeroCrystal"}:
        verdict = "ExtendedZeroCrystalSingular"
    else:
        verdict = "ExtendedCrystalSingular"
    return SingularClassification(name=s.name, verdict=verdict, components=parts)


def component_bordism_compare(s: SingularPdeDescriptor, i: int, j: int, p: int) -> dict:
    """Compare weak bordism of two components and their intersection; the
    classes of admissible boundaries match iff all three groups agree."""
    key = (i, j) if (i, j) in s.intersections else (j, i)
    info = s.intersections.get(key)
    if info is None or not info.nonempty or info.descriptor is None:
        raise HypothesisViolated(
            f"components {i}, {j} have no recorded nonempty intersection"
        )
    inter = info.descriptor
    if inter.dim_e <= 2 * inter.n + 1:
        raise HypothesisViolated(
            f"intersection dim E = {inter.dim_e} must exceed 2n+1 = {2 * inter.n + 1}"
        )
    gi = weak_bordism(s.components[i], p)
    gj = weak_bordism(s.components[j], p)
    gij = weak_bordism(inter, p)
    isomorphic = gi == gj == gij
    return {
        "component_i": gi.render(),
        "component_j": gj.render(),
        "intersection": gij.render(),
        "isomorphic": isomorphic,
        "conclusion": (
            "weak algebraic singular solutions bording boundaries in the two "
            "components exist iff their classes match"
            if isomorphic
            else "ISOMORPHISM FAILED: the printed identification does not hold for this data"
        ),
    }


# ---------------------------------------------------------------------------
# descriptor files
# ---------------------------------------------------------------------------


def _descriptor_from_dict(doc: dict) -> PdeDescriptor:
    return PdeDescriptor(
        name=doc.get("name", ""),
        n=int(doc["n"]),
        m=int(doc["m"]),
        order=int(doc["order"]),
        dim_e=int(doc["dim_E"]),
        betti_w=[int(x) for x in doc["betti_W"]],
        betti_m=[int(x) for x in doc["betti_M"]] if "betti_M" in doc else None,
        flags=dict(doc.get("flags", {})),
        jets_check=list(doc.get("jets_check", [])),
    )


def load_descriptor(source):
    """Load a descriptor (plain or singular) from a YAML document."""
    if isinstance(source, dict):
        doc = source
    else:
        text = source
        if "\n" not in str(source):
            with open(source) as fh:
                text = fh.read()
        doc = yaml.safe_load(text)
    if not doc.get("singular"):
        return _descriptor_from_dict(doc)
    components = [_descriptor_from_dict(c) for c in doc["components"]]
    intersections = {}
    for item in doc.get("intersections", []):
        i, j = item["pair"]
        intersections[(int(i), int(j))] = IntersectionInfo(
            nonempty=bool(item.get("nonempty", False)),
            union_connected=bool(item.get("union_connected", True)),
            descriptor=_descriptor_from_dict(item["descriptor"]) if "descriptor" in item else None,
        )
    return SingularPdeDescriptor(
        name=doc.get("name", ""), components=components, intersections=intersections
    )
