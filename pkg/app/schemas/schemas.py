from typing import ClassVar, Dict, List, Literal, Optional

import galois
from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import auto_precision, settings
from app.models.matrix import HomologyGroup, merge_groups


class RunConfig(BaseModel):
    """Validated command-line configuration"""
    command: Literal["zpi", "table", "verify", "tc"]
    p: int = 3
    e: int = 2
    i: int = 1
    i_max: Optional[int] = None
    f: int = 1
    precision: Optional[int] = Field(default=None, description="Override precision N0")
    wmax: Optional[int] = Field(default=None, description="Override weight window")
    j_min: int = -3
    j_max: int = 6
    output_format: Literal["json", "csv", "text"] = "json"
    json_indent: Optional[int] = 2
    jobs: int = Field(default_factory=lambda: settings.SYNTOMIC_JOBS)
    verbosity: int = 0
    strict: bool = False

    @field_validator("p")
    @classmethod
    def p_is_prime(cls, value: int) -> int:
        if not galois.is_prime(value):
            raise ValueError(f"p = {value} is not prime")
        return value

    @field_validator("e", "f", "jobs")
    @classmethod
    def at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be >= 1, got {value}")
        return value

    @field_validator("i")
    @classmethod
    def non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"i must be >= 0, got {value}")
        return value

    @model_validator(mode="after")
    def overrides_not_below_minimum(self) -> "RunConfig":
        top = max(self.i, self.i_max or 0)
        if self.precision is not None and self.precision < auto_precision(self.p, self.e, top):
            raise ValueError(
                f"precision {self.precision} below auto-sized minimum {auto_precision(self.p, self.e, top)}"
            )
        if self.wmax is not None and self.wmax < self.e * (top + 1):
            raise ValueError(f"wmax {self.wmax} below certificate floor {self.e * (top + 1)}")
        if self.strict and self.p == 2 and self.command != "tc":
            raise ValueError("p = 2 has no closed form; refused under --strict")
        if self.i_max is not None and self.i_max < 1:
            raise ValueError(f"imax must be >= 1, got {self.i_max}")
        if self.j_min > self.j_max:
            raise ValueError(f"empty degree range [{self.j_min}, {self.j_max}]")
        return self


class TowerFactors(BaseModel):
    """Cyclic factors contributed by one weight tower (d = None: undecomposed)"""
    d: Optional[int]
    factors: List[int]
    multiplicity: int = 1


class DegreeGroups(BaseModel):
    deg: int
    towers: List[TowerFactors] = []


class RuntimeInfo(BaseModel):
    escalations: int = 0
    towers_computed: int = 0
    towers_short_circuited: int = 0
    elapsed_seconds: float = 0.0


class CohomologyResult(BaseModel):
    """Cohomology of Z_p(i)(k[x]/x^e), JSON format of record"""
    p: int
    e: int
    i: int
    f: int
    precision: int
    wmax: int
    h: List[DegreeGroups]
    saturated: bool
    validated: Literal["closed-form", "invariants-only", "mismatch"]
    point: bool = False
    notes: List[str] = []
    runtime: RuntimeInfo = RuntimeInfo()

    DOCUMENT_EXCLUDE: ClassVar[set] = {"wmax", "notes", "runtime"}

    def degree(self, deg: int) -> DegreeGroups:
        for groups in self.h:
            if groups.deg == deg:
                return groups
        return DegreeGroups(deg=deg)

    def tower_map(self, deg: int) -> Dict[Optional[int], List[int]]:
        return {t.d: t.factors for t in self.degree(deg).towers}

    def group(self, deg: int, include_point: bool = True) -> HomologyGroup:
        """All towers of one degree merged into a single Z_p-module"""
        parts = [
            HomologyGroup(self.p, self.precision, tuple(t.factors), t.multiplicity)
            for t in self.degree(deg).towers
            if include_point or t.d != 0
        ]
        merged = merge_groups(self.p, self.precision, parts)
        return merged.collapse(self.f)

    @field_validator("h")
    @classmethod
    def degrees_in_order(cls, value: List[DegreeGroups]) -> List[DegreeGroups]:
        return sorted(value, key=lambda g: g.deg)

    def to_document(self) -> dict:
        """Deterministic JSON document (towers sorted by d)"""
        return self.model_dump(exclude=self.DOCUMENT_EXCLUDE)

    def to_json(self, indent: Optional[int] = 2) -> str:
        return self.model_dump_json(indent=indent, exclude=self.DOCUMENT_EXCLUDE)


class TCGroup(BaseModel):
    """pi_degree TC(F_q; Z_p) at working precision"""
    degree: int
    factors: List[int]
    multiplicity: int = 1
    saturated: bool = False


class TCTable(BaseModel):
    p: int
    f: int
    precision: int
    groups: List[TCGroup]


class CheckOutcome(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class VerifyReport(BaseModel):
    passed: bool
    checks: List[CheckOutcome]

    @property
    def failures(self) -> List[CheckOutcome]:
        return [c for c in self.checks if not c.passed]
