"""Static table of the four Lie-algebra families with L^2 models on Lagrangian submanifolds.

Flags per family:

* ``highestWeightModule``: the representation is a highest (or lowest)
  weight module.  True exactly for the Euclidean (tube-type) family.
* ``josephAnnihilator``: whether the annihilator of the differential
  representation is the Joseph ideal.  ``yes`` for split Jordan algebras
  outside type A (``sl(2k, R)`` is listed in ``exceptions``), ``no`` for
  the quaternionic family where the complex minimal orbit misses the real
  form, ``notApplicable`` where nothing is asserted.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

FAMILIES = ("split", "euclidean", "complex", "quaternionic")
JOSEPH_STATES = ("yes", "no", "notApplicable")


class UnknownFamily(KeyError):
    pass


@dataclass(frozen=True)
class FamilyEntry:
    family: str
    algebras: tuple
    highestWeightModule: bool
    josephAnnihilator: str
    exceptions: tuple = ()
    note: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownFamily(self.family)
        if self.josephAnnihilator not in JOSEPH_STATES:
            raise ValueError(f"josephAnnihilator must be one of {JOSEPH_STATES}")
        object.__setattr__(self, "algebras", tuple(self.algebras))
        object.__setattr__(self, "exceptions", tuple(self.exceptions))

    def to_json(self) -> dict:
        d = asdict(self)
        d["algebras"] = list(self.algebras)
        d["exceptions"] = list(self.exceptions)
        return d

    @classmethod
    def from_json(cls, data) -> "FamilyEntry":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(**data)


_TABLE = {
    "split": FamilyEntry(
        "split",
        ("sl(2k,R)", "so(2k,2k)", "so(p+1,q+1)", "e7(7)"),
        False,
        "yes",
        exceptions=("sl(2k,R)",),
        note="Joseph ideal statement excludes type A, i.e. sl(2k,R).",
    ),
    "euclidean": FamilyEntry(
        "euclidean",
        ("sp(k,R)", "su(k,k)", "so*(4k)", "so(2,k)", "e7(-25)"),
        True,
        "notApplicable",
        note="Automorphism groups of tube-type Hermitian symmetric spaces; two real minimal orbits.",
    ),
    "complex": FamilyEntry(
        "complex",
        ("sp(k,C)", "sl(2k,C)", "so(4k,C)", "so(k+2,C)", "e7(C)"),
        False,
        "notApplicable",
    ),
    "quaternionic": FamilyEntry(
        "quaternionic",
        ("sp(k,k)", "su*(4k)", "so(k,1)"),
        False,
        "no",
        note="Complex minimal orbit does not meet the real form; the representation has minimal "
             "Gelfand-Kirillov dimension but is not minimal.",
    ),
}

NOTE_ODD_ORTHOGONAL = "No minimal representation exists for o(p+1,q+1) with p+q odd and p, q >= 3."


def query(family: str) -> FamilyEntry:
    """Entry for ``family`` (one of :data:`FAMILIES`)."""
    try:
        return _TABLE[family]
    except KeyError:
        raise UnknownFamily(f"unknown family {family!r}; choose from {FAMILIES}") from None


def all_entries() -> list[FamilyEntry]:
    return [_TABLE[f] for f in FAMILIES]


def to_json() -> dict:
    return {"families": [e.to_json() for e in all_entries()], "notes": [NOTE_ODD_ORTHOGONAL]}
