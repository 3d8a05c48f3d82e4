"""
Pydantic models for the digital net quality tool.
Defines the input file formats and the machine-readable outputs of every command.
"""
from typing import Any, Dict, List, Optional
from math import prod

from pydantic import BaseModel, ConfigDict, Field, model_validator
from enum import Enum
import numpy as np

from abelian import GroupSpec
from errors import NetInputError
from net import DigitalNet, net_from_generators, net_from_matrices, points_from_digits
from config import settings


class Status(str, Enum):
    """Status enum for tool responses."""
    SUCCESS = "success"
    ERROR = "error"


class GroupInput(BaseModel):
    """Shared base for inputs naming either a cyclic base b or a list of cyclic factors."""
    b: Optional[int] = Field(None, ge=2, description="Order of the cyclic digit group Z_b")
    group: Optional[List[int]] = Field(
        None, min_length=1, description="Cyclic factor orders q_1..q_r of G (b is their product)"
    )

    @model_validator(mode="after")
    def check_group(self):
        if (self.b is None) == (self.group is None):
            raise ValueError("give exactly one of 'b' or 'group'")
        if self.group is not None and any(q < 2 for q in self.group):
            raise ValueError("cyclic factor orders must be >= 2")
        return self

    def spec(self) -> GroupSpec:
        if self.group is not None:
            return GroupSpec(tuple(self.group))
        return GroupSpec.cyclic(self.b)

    @property
    def order(self) -> int:
        return self.b if self.b is not None else prod(self.group)


class NetFile(GroupInput):
    """
    A digital net file.

    Either s generating matrices C_1..C_s (each n x m, digits 0..b-1) or
    m explicit generator matrices X_1..X_m (each s x n, digits mapped
    into G by the mixed-radix map).
    """
    s: Optional[int] = Field(None, ge=1, description="Dimension; checked against the matrices when given")
    m: Optional[int] = Field(None, ge=0, description="log_b of the point count; checked when given")
    n: Optional[int] = Field(None, ge=1, description="Digit depth; checked when given")
    matrices: Optional[List[List[List[int]]]] = Field(None, description="Generating matrices, s x n x m")
    generators: Optional[List[List[List[int]]]] = Field(None, description="Generator matrices, m x s x n")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "b": 2,
                "matrices": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
            }
        }
    )

    @model_validator(mode="after")
    def check_source(self):
        if (self.matrices is None) == (self.generators is None):
            raise ValueError("give exactly one of 'matrices' or 'generators'")
        found = self.shape()
        for name, declared in (("s", self.s), ("m", self.m), ("n", self.n)):
            actual = found.get(name)
            if declared is not None and actual is not None and declared != actual:
                raise ValueError(f"declared {name}={declared} but the matrices give {name}={actual}")
        return self

    def shape(self) -> Dict[str, int]:
        """The (s, m, n) readable from the leading matrix; ragged input is left to the net builders."""
        found: Dict[str, int] = {}
        if self.matrices is not None:
            found["s"] = len(self.matrices)
            if self.matrices and self.matrices[0]:
                found["n"] = len(self.matrices[0])
                found["m"] = len(self.matrices[0][0])
        elif self.generators is not None:
            found["m"] = len(self.generators)
            if self.generators and self.generators[0]:
                found["s"] = len(self.generators[0])
                found["n"] = len(self.generators[0][0])
        return found

    def to_net(self) -> DigitalNet:
        try:
            if self.matrices is not None:
                return net_from_matrices(self.order, self.matrices, self.spec())
            return net_from_generators(self.spec(), self.generators)
        except NetInputError:
            raise
        except ValueError as exc:
            raise NetInputError(f"malformed net file: {exc}") from exc


class PointSetFile(GroupInput):
    """A raw multiset of b^m points, each an s x n digit matrix."""
    m: int = Field(..., ge=0)
    points: List[List[List[int]]] = Field(..., min_length=1)

    def to_points(self) -> np.ndarray:
        try:
            return points_from_digits(self.spec(), self.points)
        except NetInputError:
            raise
        except ValueError as exc:
            raise NetInputError(f"malformed point file: {exc}") from exc


class ToolOutput(BaseModel):
    """Fields common to every command output."""
    tool: str = Field(default_factory=lambda: settings.tool_name)
    status: Status = Status.SUCCESS


class EnumeratorOutput(ToolOutput):
    """
    Weight enumerator of the dual. Coefficients are decimal strings;
    scaled_coeffs are b^m * N_a, coeffs the counts N_a themselves.
    """
    b: int
    m: int
    s: int
    n: int
    scale: str = Field(..., description="The scale b^m, e.g. '2^5'")
    valid_to: int
    full: bool
    coeffs: Optional[List[str]] = Field(None, description="N_0..N_valid_to (absent for raw point sets)")
    scaled_coeffs: List[str]
    subset: Optional[List[int]] = None


class GwTerm(BaseModel):
    exponents: List[int]
    count: str


class GwOutput(ToolOutput):
    """Terms of the generalized enumerator, counts divided by the scale."""
    b: int
    m: int
    s: int
    cap: int
    scale: str
    terms: List[GwTerm]


class TValueOutput(ToolOutput):
    """A t-value, or a lower bound on it for raw point sets."""
    model_config = ConfigDict(populate_by_name=True)

    t: Optional[int] = None
    lower_bound: Optional[int] = Field(None, description="Set instead of t for raw point sets")
    method: str
    deg_q: Optional[int] = Field(None, alias="degQ")
    b: int
    m: int
    s: int


class WorstProjectionOutput(ToolOutput):
    subset: List[int]
    t: int
    max_dims: int
    m: int


class TableMismatch(BaseModel):
    m: int
    s: int
    expected: int
    actual: int


class TableOutput(ToolOutput):
    """t-values per (m, s) cell; rows[i][j] is the cell (ms[i], dims[j])."""
    algorithm: str
    dims: List[int]
    ms: List[int]
    rows: List[List[int]]
    mismatches: Optional[List[TableMismatch]] = None


class CheckResult(BaseModel):
    name: str
    passed: bool
    skipped: bool = False
    details: Optional[str] = None
    counterexample: Optional[Dict[str, Any]] = None


class CheckReport(ToolOutput):
    total: int
    passed: int
    failed: int
    skipped: int
    results: List[CheckResult]


class ErrorResponse(BaseModel):
    """Response printed on stdout when a command fails."""
    tool: str = Field(default_factory=lambda: settings.tool_name)
    status: Status = Status.ERROR
    error_message: str

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "tool": "digital-net-quality",
                "status": "error",
                "error_message": "generators must have shape (2, 2, 2, 1), got (1, 2, 2, 1)",
            }
        }
    )
