"""Pydantic schemas for command-line configuration and JSON artifacts"""

import re
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from pisigma.expr.sumspec import ParamBound

COMMANDS = ("reduce", "pfrac", "rec", "solve-rec", "ems", "verify", "eval")
IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ParamDecl(BaseModel):
    """A declared parameter with its integer range"""

    name: str
    lower: int = 0
    upper: Optional[int] = None

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        """Parameter names must be identifiers"""
        if not IDENTIFIER.match(v):
            raise ValueError(f"invalid parameter name {v!r}")
        return v

    @field_validator("upper")
    @classmethod
    def validate_range(cls, v: Optional[int], info) -> Optional[int]:
        """Ensure upper >= lower"""
        if v is not None and "lower" in info.data and v < info.data["lower"]:
            raise ValueError("parameter upper bound must be >= lower bound")
        return v

    @classmethod
    def parse(cls, text: str) -> "ParamDecl":
        """Read name:lo:hi, hi being an integer or 'inf'; name alone means name:0:inf"""
        parts = text.split(":")
        if len(parts) == 1:
            return cls(name=parts[0])
        if len(parts) != 3:
            raise ValueError(f"parameter declaration {text!r} must be name:lo:hi")
        name, lower, upper = parts
        try:
            return cls(name=name, lower=int(lower), upper=None if upper == "inf" else int(upper))
        except ValueError as e:
            raise ValueError(f"parameter declaration {text!r}: {e}") from e

    def to_bound(self) -> ParamBound:
        return ParamBound(self.name, self.lower, self.upper)


class CliConfig(BaseModel):
    """Validated configuration of one command-line run"""

    command: str
    expression: str
    params: List[ParamDecl] = Field(default_factory=list)
    var: Optional[str] = None
    d_max: int = Field(5, ge=0)
    window: int = Field(20, ge=1)
    output_format: str = Field("plain", pattern="^(plain|latex|json)$")
    emit_json: Optional[str] = None
    trace: bool = False
    verify: bool = True
    # subcommand options
    recurrence_path: Optional[str] = None
    initial: Optional[str] = None
    start: Optional[int] = None
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    value_range: Optional[str] = Field(None, pattern=r"^\s*-?\d+\s*:\s*-?\d+\s*$")
    certificate_path: Optional[str] = None
    table_path: Optional[str] = None
    at: Dict[str, int] = Field(default_factory=dict)

    @field_validator("command")
    @classmethod
    def validate_command(cls, v: str) -> str:
        if v not in COMMANDS:
            raise ValueError(f"unknown command {v!r}")
        return v

    @field_validator("params")
    @classmethod
    def validate_unique(cls, v: List[ParamDecl]) -> List[ParamDecl]:
        """Parameter names must be distinct"""
        names = [p.name for p in v]
        if len(names) != len(set(names)):
            raise ValueError("parameter declared twice")
        return v

    @property
    def bounds(self) -> List[ParamBound]:
        return [p.to_bound() for p in self.params]


class GeneratorDocument(BaseModel):
    """One tower generator with its evaluation data"""

    name: str
    kind: str
    ratio: Optional[str] = None
    summand: Optional[str] = None
    lower: Optional[int] = None
    display: Optional[str] = None


class TowerDocument(BaseModel):
    """A tower in the order of adjunction"""

    var: str
    params: List[str]
    generators: List[GeneratorDocument]
    has_sign: bool = False


class CertificateDocument(BaseModel):
    """Creative-telescoping certificate: sum_i c_i F(n+i, k) = G(k+1) - G(k) for k >= lower"""

    index: str
    summand: str
    coefficients: List[str]
    antidifference: str
    lower: int


class RecurrenceDocument(BaseModel):
    """A recurrence c_0 A(n) + ... + c_d A(n+d) = rhs, valid for n >= validity"""

    unknown: str
    var: str
    params: List[ParamDecl]
    order: int
    coefficients: List[str]
    rhs: str
    validity: int
    certificate: Optional[CertificateDocument] = None


class SamplePoint(BaseModel):
    """One compared point of a verification run"""

    point: int
    params: dict
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    equal: Optional[bool] = None


class VerifyVerdict(BaseModel):
    """Outcome of a numeric verification; identity, range and status lead the JSON form"""

    identity: str
    range: str = Field(..., pattern=r"^-?\d+:-?\d+$")
    status: str = Field(..., pattern="^(equal|different|inconclusive)$")
    var: str
    start: int
    stop: int
    samples: int
    compared: int = Field(0, ge=0)
    first_difference: Optional[SamplePoint] = None
    symbolic: Optional[bool] = None

    @property
    def equal(self) -> bool:
        """Only a check that compared at least one point without a difference counts as equal"""
        return self.status == "equal"


class EmsFailureDocument(BaseModel):
    """Structured abort of the multi-sum driver"""

    step: str
    sub_sum: str
    reason: str
    exit_code: int


class ResultDocument(BaseModel):
    """Result of reduce, pfrac, solve-rec and ems"""

    command: str
    var: str
    input: str
    result: str
    validity: int
    tower: Optional[TowerDocument] = None
    recurrence: Optional[RecurrenceDocument] = None
    homogeneous: List[str] = Field(default_factory=list)
    verified: Optional[bool] = None
